//! Root-based S0 diagnostics: simple positive poles and zeros interlacing
//! strictly with a pole first.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use super::function::RationalFunction;
use crate::numeric::{compare_roots, default_budget, isolate_real_roots, Domain, Rational, RootList};
use crate::report::ValidationReport;

#[derive(Clone, Debug)]
pub struct S0Report {
    pub report: ValidationReport,
    pub poles: RootList,
    pub zeros: RootList,
    /// Limit at infinity; `None` when the function has a pole there.
    pub a0: Option<Rational>,
}

impl S0Report {
    pub fn is_valid(&self) -> bool {
        self.report.is_valid()
    }
}

fn simple_positive(name: &str, p: &crate::numeric::Polynomial, rep: &mut ValidationReport) -> RootList {
    let Some(deg) = p.degree() else {
        return RootList::default();
    };
    let all = isolate_real_roots(p, &Domain::all()).expect("nonzero polynomial");
    if all.total_multiplicity() < deg {
        rep.violate(&format!("{name}-real"), format!("{} of {deg} {name} are real", all.total_multiplicity()));
    }
    for (i, r) in all.roots().iter().enumerate() {
        if r.multiplicity() > 1 {
            rep.violate(&format!("{name}-simple"), format!("{name} #{} has multiplicity {}", i + 1, r.multiplicity()));
        }
        if r.cmp_rational(&Rational::zero()) != Ordering::Greater {
            rep.violate(&format!("{name}-positive"), format!("{name} #{} is not positive", i + 1));
        }
    }
    all
}

pub fn validate_s0(f: &RationalFunction) -> S0Report {
    let mut rep = ValidationReport::default();
    let a0 = f.value_at_infinity();
    match &a0 {
        None => rep.violate("limit", "pole at infinity"),
        Some(v) if v.is_negative() => rep.violate("limit", format!("a0 = {v} is negative")),
        _ => {}
    }
    if f.is_zero() {
        rep.violate("nonzero", "the zero function");
    }
    let poles = simple_positive("poles", f.den(), &mut rep);
    let zeros = if f.is_zero() { RootList::default() } else { simple_positive("zeros", f.num(), &mut rep) };
    if rep.is_valid() {
        if !f.is_positive_at(&Rational::zero()) {
            rep.violate("sign", "value at 0 is not positive");
        }
        let (np, nz) = (poles.len(), zeros.len());
        let want = if a0.as_ref().is_some_and(|v| v.is_zero()) { np.saturating_sub(1) } else { np };
        if nz != want || (np == 0 && nz > 0) {
            rep.violate("counts", format!("{np} poles and {nz} zeros"));
        }
        // alpha_1 < beta_1 < alpha_2 < ...
        let budget = default_budget();
        let mut chain = Vec::new();
        for i in 0..np.max(nz) {
            if let Some(p) = poles.roots().get(i) {
                chain.push(("pole", i, p));
            }
            if let Some(z) = zeros.roots().get(i) {
                chain.push(("zero", i, z));
            }
        }
        for w in chain.windows(2) {
            match compare_roots(w[0].2, w[1].2, &budget) {
                Ok(Ordering::Less) => {}
                Ok(_) => rep.violate(
                    "interlacing",
                    format!("{} #{} is not below {} #{}", w[0].0, w[0].1 + 1, w[1].0, w[1].1 + 1),
                ),
                Err(e) => rep.violate("unresolved", e.message()),
            }
        }
    }
    S0Report { report: rep, poles, zeros, a0 }
}
