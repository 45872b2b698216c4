//! Inverse problem with the root at a pendant vertex: the main edge is
//! recovered uniquely, the remaining subgraph goes to the centre-rooted solver.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::inverse_center::{reconstruct_center_polys, validate_center_roots, CenterReconstruction, SpectralPolys};
use crate::model::{Edge, ReconstructionPlan, SpectrumPair, StarGraph};
use crate::numeric::{
    order_roots, format_rational, isolate_real_roots, squarefree_part, Domain, Polynomial,
    Rational, RealRoot, RootList,
};
use crate::par::Execution;
use crate::ratfun::{cf_expand, cf_to_ratfun, ratfun_normalize, RationalFunction, StieltjesCF};
use crate::report::ValidationReport;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PendantInverseInput {
    /// Neumann values are the `μ²` (root free), Dirichlet values the `λ²`
    /// (root clamped).
    pub spectra: SpectrumPair,
    pub main_length: Rational,
    /// Lengths of the `q - 1` non-main edges.
    pub lengths: Vec<Rational>,
    pub plan: Option<ReconstructionPlan>,
}

impl PendantInverseInput {
    fn polys(&self) -> SpectralPolys {
        SpectralPolys::from_pair(&self.spectra)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MainEdgeDecomposition {
    pub main: Edge,
    /// Number of masses on the main edge.
    pub n: usize,
    pub a_n1: Rational,
    pub tail: RationalFunction,
    /// Values shared by both spectra, with the multiplicity of the cancelled factor.
    pub common_zeros: RootList,
    pub common_factor: Polynomial,
    pub gamma: Rational,
    pub cf: StieltjesCF,
}

impl MainEdgeDecomposition {
    /// Spectral data of the non-main subgraph: `1/f̂` with the common factor
    /// restored in numerator and denominator.
    pub fn subgraph_polys(&self) -> SpectralPolys {
        SpectralPolys {
            neumann: self.tail.den() * &self.common_factor,
            dirichlet: self.tail.num() * &self.common_factor,
        }
    }
}

fn gamma_of(main_length: &Rational, lengths: &[Rational]) -> Result<Rational> {
    let s: Rational = lengths.iter().map(|l| l.recip()).sum();
    if !s.is_positive() {
        return Err(Error::Invariant("non-main lengths must be positive".into()));
    }
    Ok(main_length + s.recip())
}

/// `Φ = γ Π(1 - z/λ²) / Π(1 - z/μ²)` reduced, with the cancelled factor.
pub fn phi_from_polys(polys: &SpectralPolys, main_length: &Rational, lengths: &[Rational]) -> Result<(RationalFunction, Polynomial)> {
    let gamma = gamma_of(main_length, lengths)?;
    let lam = polys.dirichlet.unit_at_zero()?;
    let mu = polys.neumann.unit_at_zero()?;
    ratfun_normalize(&lam.scale(&gamma), &mu)
}

pub fn build_phi(input: &PendantInverseInput) -> Result<(RationalFunction, Polynomial)> {
    phi_from_polys(&input.polys(), &input.main_length, &input.lengths)
}

pub fn decompose_main_polys(polys: &SpectralPolys, main_length: &Rational, lengths: &[Rational]) -> Result<MainEdgeDecomposition> {
    if !main_length.is_positive() {
        return Err(Error::Invariant("main edge length must be positive".into()));
    }
    let gamma = gamma_of(main_length, lengths)?;
    let (phi, common) = phi_from_polys(polys, main_length, lengths)?;
    let cf = cf_expand(&phi)?;
    if main_length >= &gamma {
        return Err(Error::MainTooLong(format!(
            "main length {} is not below {}",
            format_rational(main_length),
            format_rational(&gamma)
        )));
    }
    let (a, b) = (cf.a(), cf.b());
    let mut acc = Rational::zero();
    let mut n = 0;
    for (k, ak) in a.iter().enumerate() {
        acc += ak;
        if &acc >= main_length {
            n = k;
            break;
        }
    }
    if &acc < main_length {
        return Err(Error::MainTooLong("main length exceeds the sum of all coefficients".into()));
    }
    let a_n1 = &acc - main_length;
    let mut ls = a[..n].to_vec();
    ls.push(&a[n] - &a_n1);
    let main = Edge::new(ls, b[..n].to_vec())?;
    let mut ta = vec![a_n1.clone()];
    ta.extend_from_slice(&a[n + 1..]);
    let tail_cf = StieltjesCF::new(ta, b[n..].to_vec())?;
    let tail = cf_to_ratfun(&tail_cf);
    let common_zeros = if common.deg0() == 0 { RootList::default() } else { isolate_real_roots(&common, &Domain::positive())? };
    Ok(MainEdgeDecomposition { main, n, a_n1, tail, common_zeros, common_factor: common, gamma, cf })
}

pub fn decompose_main(input: &PendantInverseInput) -> Result<MainEdgeDecomposition> {
    decompose_main_polys(&input.polys(), &input.main_length, &input.lengths)
}

fn roots_of(p: &Polynomial) -> Result<RootList> {
    if p.deg0() == 0 {
        return Ok(RootList::default());
    }
    isolate_real_roots(p, &Domain::positive())
}

/// Validation on polynomial spectra; `neumann` holds the `μ²`, `dirichlet` the `λ²`.
pub fn validate_pendant_polys(polys: &SpectralPolys, main_length: &Rational, lengths: &[Rational]) -> ValidationReport {
    let mut rep = ValidationReport::default();
    if lengths.is_empty() {
        rep.violate("lengths", "need at least one non-main edge length");
        return rep;
    }
    if let Some(i) = lengths.iter().position(|l| !l.is_positive()) {
        rep.violate("lengths", format!("length #{} is not positive", i + 1));
        return rep;
    }
    if !main_length.is_positive() {
        rep.violate("lengths", "main edge length is not positive");
        return rep;
    }
    let q = lengths.len() + 1;
    let (mu_l, lam_l) = match (roots_of(&polys.neumann), roots_of(&polys.dirichlet)) {
        (Ok(a), Ok(b)) => (a, b),
        _ => {
            rep.violate("spectra", "spectral polynomial vanishes identically");
            return rep;
        }
    };
    for (name, p, l) in [("neumann", &polys.neumann, &mu_l), ("dirichlet", &polys.dirichlet, &lam_l)] {
        if l.total_multiplicity() != p.deg0() {
            rep.violate("positivity", format!("{name} spectrum has values off the positive axis"));
        }
    }
    let (mu, lam) = (mu_l.expanded(), lam_l.expanded());
    if mu.len() != lam.len() {
        rep.violate("counts", format!("{} Neumann and {} Dirichlet values; counts must agree", mu.len(), lam.len()));
        return rep;
    }
    let cmp = |a: &RealRoot, b: &RealRoot, rep: &mut ValidationReport| match order_roots(a, b) {
        Ok(o) => Some(o),
        Err(e) => {
            rep.violate("comparison", e.message());
            None
        }
    };
    // 0 < μ1 < λ1 ≤ μ2 ≤ … ≤ μn ≤ λn
    for k in 0..mu.len() {
        if let Some(o) = cmp(mu[k], lam[k], &mut rep) {
            let ok = if k == 0 { o == Ordering::Less } else { o != Ordering::Greater };
            if !ok {
                let rel = if k == 0 { "<" } else { "<=" };
                rep.violate("interlacing", format!("need mu_{} {rel} lambda_{}", k + 1, k + 1));
            }
        }
        if k + 1 < mu.len() {
            if let Some(Ordering::Greater) = cmp(lam[k], mu[k + 1], &mut rep) {
                rep.violate("interlacing", format!("need lambda_{} <= mu_{}", k + 1, k + 2));
            }
        }
    }
    for (name, l) in [("neumann", &mu_l), ("dirichlet", &lam_l)] {
        for (i, r) in l.roots().iter().enumerate() {
            if r.multiplicity() > q - 1 {
                rep.violate("multiplicity", format!("{name} value #{} has multiplicity {} > {}", i + 1, r.multiplicity(), q - 1));
            }
        }
    }
    for a in mu_l.roots() {
        for b in lam_l.roots() {
            if let Some(Ordering::Equal) = cmp(a, b, &mut rep) {
                let s = a.multiplicity() + b.multiplicity();
                if q >= 2 && s + 3 > 2 * q {
                    rep.violate("common-multiplicity", format!("a common value has multiplicities summing to {s} > {}", 2 * q - 3));
                }
            }
        }
    }
    if !rep.is_valid() {
        return rep;
    }
    let dec = match decompose_main_polys(polys, main_length, lengths) {
        Ok(d) => d,
        Err(e) => {
            rep.violate("decomposition", format!("{}: {}", e.code(), e.message()));
            return rep;
        }
    };
    // The tail must vanish at every common value.
    if dec.common_factor.deg0() > 0 {
        let sf = squarefree_part(&dec.common_factor).expect("nonzero");
        if !sf.divides(dec.tail.num()).unwrap_or(false) {
            for r in dec.common_zeros.roots() {
                let vanishes = match r.as_rational() {
                    Some(c) => dec.tail.eval(c).map(|v| v.is_zero()),
                    None => Ok(r.is_root_of(dec.tail.num())),
                };
                match (vanishes, r.as_rational()) {
                    (Ok(true), _) => {}
                    (Ok(false), Some(c)) => rep.violate(
                        "tail-vanishing",
                        format!(
                            "tail at common value {} equals {}",
                            format_rational(c),
                            format_rational(&dec.tail.eval(c).unwrap())
                        ),
                    ),
                    (_, Some(c)) => rep.violate("tail-vanishing", format!("tail has a pole at common value {}", format_rational(c))),
                    (_, None) => rep.violate("tail-vanishing", "tail does not vanish at an irrational common value"),
                }
            }
        }
    }
    if n_zero_note(&dec) {
        rep.note("main edge carries no masses");
    }
    let sub = dec.subgraph_polys();
    match (roots_of(&sub.neumann), roots_of(&sub.dirichlet)) {
        (Ok(n), Ok(d)) => rep.merge("subgraph-", validate_center_roots(&n, &d, lengths)),
        _ => rep.violate("subgraph-spectra", "subgraph spectral polynomial vanishes"),
    }
    rep
}

fn n_zero_note(dec: &MainEdgeDecomposition) -> bool {
    dec.n == 0
}

pub fn validate_pendant(input: &PendantInverseInput) -> ValidationReport {
    validate_pendant_polys(&input.polys(), &input.main_length, &input.lengths)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PendantReconstruction {
    pub graph: StarGraph,
    pub decomposition: MainEdgeDecomposition,
    pub subgraph: CenterReconstruction,
}

impl PendantReconstruction {
    /// Output metadata: main-edge index, tail and the subgraph plan.
    pub fn metadata(&self) -> Value {
        let d = &self.decomposition;
        json!({
            "main_mass_count": d.n,
            "degenerate_main": d.n == 0,
            "gamma": format_rational(&d.gamma),
            "a_n1": format_rational(&d.a_n1),
            "tail": {
                "num": d.tail.num().coeffs().iter().map(format_rational).collect::<Vec<_>>(),
                "den": d.tail.den().coeffs().iter().map(format_rational).collect::<Vec<_>>(),
            },
            "continued_fraction": serde_json::to_value(&d.cf).expect("serialisable"),
            "plan_used": self.subgraph.plan.to_json(),
        })
    }
}

pub fn reconstruct_pendant_polys(
    polys: &SpectralPolys,
    main_length: &Rational,
    lengths: &[Rational],
    plan: Option<&ReconstructionPlan>,
    exec: Execution,
) -> Result<PendantReconstruction> {
    let dec = decompose_main_polys(polys, main_length, lengths)?;
    let expect: Rational = lengths.iter().map(|l| l.recip()).sum();
    let tail0 = dec.tail.eval(&Rational::zero())?;
    if tail0.recip() != expect {
        return Err(Error::Invariant("tail value at 0 disagrees with the non-main lengths".into()));
    }
    let sub = reconstruct_center_polys(&dec.subgraph_polys(), lengths, plan, exec)?;
    let m = sub.graph.central_mass().clone();
    let want_m = if dec.a_n1.is_zero() { dec.cf.b()[dec.n].clone() } else { Rational::zero() };
    if m != want_m {
        return Err(Error::Invariant(format!(
            "central mass {} disagrees with the tail coefficient {}",
            format_rational(&m),
            format_rational(&want_m)
        )));
    }
    let graph = StarGraph::pendant(dec.main.clone(), sub.graph.edges().to_vec(), m)?;
    Ok(PendantReconstruction { graph, decomposition: dec, subgraph: sub })
}

pub fn reconstruct_pendant(input: &PendantInverseInput) -> Result<PendantReconstruction> {
    reconstruct_pendant_polys(&input.polys(), &input.main_length, &input.lengths, input.plan.as_ref(), Execution::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::{char_polys_pendant, spectrum_of};
    use crate::numeric::{int, ratio};

    fn example(plan: Option<ReconstructionPlan>) -> PendantInverseInput {
        PendantInverseInput {
            spectra: SpectrumPair::from_ratios(&[(1, 2, 1), (3, 2, 1), (2, 1, 1)], &[(1, 1, 1), (2, 1, 2)]).unwrap(),
            main_length: int(2),
            lengths: vec![int(2), int(1)],
            plan,
        }
    }

    #[test]
    fn phi_of_the_example() {
        let (phi, common) = build_phi(&example(None)).unwrap();
        assert_eq!(phi.num(), &Polynomial::from_i64(&[2, -3, 1]));
        assert_eq!(phi.den(), &Polynomial::new(vec![ratio(3, 4), int(-2), int(1)]));
        assert_eq!(common, Polynomial::from_i64(&[-2, 1]));
    }

    #[test]
    fn decomposition_of_the_example() {
        let d = decompose_main(&example(None)).unwrap();
        assert_eq!(d.gamma, ratio(8, 3));
        assert_eq!(d.cf.a(), &[int(1), ratio(4, 3), ratio(1, 3)]);
        assert_eq!(d.cf.b(), &[int(1), int(3)]);
        assert_eq!(d.n, 1);
        assert_eq!(d.a_n1, ratio(1, 3));
        assert_eq!(d.main.lengths(), &[int(1), int(1)]);
        assert_eq!(d.main.masses(), &[int(1)]);
        let expect = RationalFunction::new(&Polynomial::from_i64(&[2, -1]), &Polynomial::from_i64(&[3, -3])).unwrap();
        assert_eq!(d.tail, expect);
        assert_eq!(d.tail.eval(&int(2)).unwrap(), int(0));
        assert_eq!(d.common_zeros.exact_values().unwrap(), vec![(int(2), 1)]);
    }

    #[test]
    fn degenerate_main_edge() {
        // main length below a0.
        let inp = PendantInverseInput { main_length: ratio(1, 10), ..example(None) };
        let d = decompose_main(&inp).unwrap();
        assert_eq!(d.n, 0);
        assert_eq!(d.cf.a()[0], ratio(23, 80));
        assert_eq!(d.main.lengths(), &[ratio(1, 10)]);
        assert_eq!(d.a_n1, ratio(3, 16));
    }

    #[test]
    fn validation_examples() {
        assert!(validate_pendant(&example(None)).is_valid());
        let strict = PendantInverseInput {
            spectra: SpectrumPair::from_ratios(&[(1, 1, 1), (3, 2, 1), (2, 1, 1)], &[(1, 1, 1), (2, 1, 2)]).unwrap(),
            ..example(None)
        };
        assert!(validate_pendant(&strict).has("interlacing"));
        let perturbed = PendantInverseInput {
            spectra: SpectrumPair::from_ratios(&[(1, 2, 1), (3, 2, 1), (2, 1, 1)], &[(1, 1, 1), (9, 4, 1), (2, 1, 1)]).unwrap(),
            ..example(None)
        };
        let r = validate_pendant(&perturbed);
        assert!(!r.is_valid());
    }

    #[test]
    fn tail_must_vanish_at_common_values() {
        // Same spectra, different main length: the tail no longer vanishes at 2.
        let inp = PendantInverseInput { main_length: ratio(3, 2), ..example(None) };
        let r = validate_pendant(&inp);
        assert!(r.has("tail-vanishing"), "{r:?}");
    }

    #[test]
    fn golden_reconstruction() {
        let inp = example(Some(ReconstructionPlan::with_split(int(2), vec![ratio(2, 3), ratio(1, 3)])));
        let rec = reconstruct_pendant(&inp).unwrap();
        let g = &rec.graph;
        assert_eq!(g.central_mass(), &int(0));
        assert_eq!(g.main_edge().unwrap().lengths(), &[int(1), int(1)]);
        assert_eq!(g.edges()[0].lengths(), &[ratio(4, 3), ratio(2, 3)]);
        assert_eq!(g.edges()[0].masses(), &[ratio(9, 8)]);
        assert_eq!(g.edges()[1].lengths(), &[ratio(1, 3), ratio(2, 3)]);
        assert_eq!(g.edges()[1].masses(), &[ratio(9, 4)]);
        let (l0, inf) = char_polys_pendant(g).unwrap();
        assert_eq!(spectrum_of(&l0).unwrap().exact_values().unwrap(), inp.spectra.dirichlet().clone());
        assert_eq!(spectrum_of(&inf).unwrap().exact_values().unwrap(), inp.spectra.neumann().clone());
    }

    #[test]
    fn default_split_member() {
        let rec = reconstruct_pendant(&example(None)).unwrap();
        let e = rec.graph.edges();
        assert_eq!((e[0].lengths(), e[0].masses()), (&[ratio(6, 5), ratio(4, 5)][..], &[ratio(25, 24)][..]));
        assert_eq!((e[1].lengths(), e[1].masses()), (&[ratio(3, 7), ratio(4, 7)][..], &[ratio(49, 24)][..]));
    }

    #[test]
    fn positive_central_mass_at_the_boundary() {
        // Main edge [1, 1/2] with mass 1, one bead edge, M = 2.
        let main = Edge::new(vec![int(1), ratio(1, 2)], vec![int(1)]).unwrap();
        let e = Edge::new(vec![int(1), int(1)], vec![ratio(1, 2)]).unwrap();
        let g = StarGraph::pendant(main, vec![e.clone(), e], int(2)).unwrap();
        let (l0, inf) = char_polys_pendant(&g).unwrap();
        let polys = SpectralPolys { neumann: inf, dirichlet: l0 };
        let rec = reconstruct_pendant_polys(&polys, &ratio(3, 2), &[int(2), int(2)], None, Execution::Sequential).unwrap();
        assert_eq!(rec.decomposition.a_n1, int(0));
        assert_eq!(rec.graph.central_mass(), &int(2));
        assert_eq!(rec.graph.main_edge(), g.main_edge());
    }
}
