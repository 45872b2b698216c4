//! Direct problem: Cauer polynomials, characteristic polynomials and spectra.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::model::{Edge, Root, StarGraph};
use crate::numeric::{compare_roots, isolate_real_roots, poly_gcd, Domain, Polynomial, Rational, RealRoot, RootList};
use crate::par::Execution;
use crate::ratfun::RationalFunction;

/// Boundary condition at the far end (`lengths[0]`) of an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// Clamped end, `R_{-1} = 1/l0`.
    DirichletEnd,
    /// Free end, `R_{-1} = 0`.
    NeumannEnd,
}

/// `(R_{2k}, R_{2k-1})` for one level `k` of the recurrence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CauerPair {
    pub even: Polynomial,
    pub odd: Polynomial,
}

/// All levels `k = 0..=n` of
/// `R_{2k-1} = -z m_k R_{2k-2} + R_{2k-3}`, `R_{2k} = l_k R_{2k-1} + R_{2k-2}`.
pub fn cauer_sequence(e: &Edge, flavor: Flavor) -> Vec<CauerPair> {
    let l = e.lengths();
    let mut odd = match flavor {
        Flavor::DirichletEnd => Polynomial::constant(l[0].recip()),
        Flavor::NeumannEnd => Polynomial::zero(),
    };
    let mut even = Polynomial::one();
    let mut out = vec![CauerPair { even: even.clone(), odd: odd.clone() }];
    for (k, m) in e.masses().iter().enumerate() {
        let next_odd = &even.shift(1).scale(&-m) + &odd;
        let next_even = &next_odd.scale(&l[k + 1]) + &even;
        odd = next_odd;
        even = next_even;
        out.push(CauerPair { even: even.clone(), odd: odd.clone() });
    }
    out
}

pub fn edge_cauer_polys(e: &Edge, flavor: Flavor) -> CauerPair {
    cauer_sequence(e, flavor).pop().expect("level 0 always present")
}

/// The edge function `φ^(j) = R_{2n}/R_{2n-1}` for a clamped pendant end.
pub fn edge_quotient(e: &Edge) -> RationalFunction {
    let c = edge_cauer_polys(e, Flavor::DirichletEnd);
    RationalFunction::new(&c.even, &c.odd).expect("odd Cauer polynomial is nonzero for a clamped end")
}

fn cauer_all(edges: &[Edge], exec: Execution) -> Vec<CauerPair> {
    exec.map(edges, |e| edge_cauer_polys(e, Flavor::DirichletEnd))
}

fn product_except(pairs: &[CauerPair], skip: Option<usize>) -> Polynomial {
    pairs
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != skip)
        .fold(Polynomial::one(), |acc, (_, p)| &acc * &p.even)
}

/// `(φ_N, φ_D)` of a centre-rooted star, with `M` spread as `M/q` per edge term.
pub fn char_polys_center(g: &StarGraph) -> Result<(Polynomial, Polynomial)> {
    if g.root() != Root::Center {
        return Err(Error::Invariant("char_polys_center needs a centre-rooted graph".into()));
    }
    Ok(center_polys_with(g.edges(), g.central_mass(), Execution::default()))
}

pub(crate) fn center_polys_with(edges: &[Edge], m: &Rational, exec: Execution) -> (Polynomial, Polynomial) {
    let pairs = cauer_all(edges, exec);
    let q = Rational::from_integer(edges.len().into());
    let mq = m / q;
    let phi_d = product_except(&pairs, None);
    let mut phi_n = Polynomial::zero();
    for (j, p) in pairs.iter().enumerate() {
        let term = &p.odd - &p.even.shift(1).scale(&mq);
        phi_n = &phi_n + &(&term * &product_except(&pairs, Some(j)));
    }
    (phi_n, phi_d)
}

/// `(φ_{N,q-1}, φ_{D,q-1})` for the non-main edges of a pendant-rooted star,
/// with the whole central mass in a single `-M z Π even` term.
pub fn subgraph_polys(edges: &[Edge], m: &Rational) -> (Polynomial, Polynomial) {
    let pairs = cauer_all(edges, Execution::default());
    let phi_d = product_except(&pairs, None);
    let mut phi_n = phi_d.shift(1).scale(&-m);
    for (j, p) in pairs.iter().enumerate() {
        phi_n = &phi_n + &(&p.odd * &product_except(&pairs, Some(j)));
    }
    (phi_n, phi_d)
}

/// `(φ(l0), φ(∞))`: root clamped and root free.
pub fn char_polys_pendant(g: &StarGraph) -> Result<(Polynomial, Polynomial)> {
    let main = match (g.root(), g.main_edge()) {
        (Root::Pendant, Some(m)) => m,
        _ => return Err(Error::Invariant("char_polys_pendant needs a pendant-rooted graph".into())),
    };
    let (phi_n, phi_d) = subgraph_polys(g.edges(), g.central_mass());
    let d = edge_cauer_polys(main, Flavor::DirichletEnd);
    let n = edge_cauer_polys(main, Flavor::NeumannEnd);
    let phi_l0 = &(&d.even * &phi_n) + &(&d.odd * &phi_d);
    let phi_inf = &(&n.even * &phi_n) + &(&n.odd * &phi_d);
    Ok((phi_l0, phi_inf))
}

/// Squared eigenvalues: the zeros of `p` on `(0, ∞)`.
pub fn spectrum_of(p: &Polynomial) -> Result<RootList> {
    if p.is_zero() {
        return Err(Error::Invariant("characteristic polynomial vanishes identically".into()));
    }
    isolate_real_roots(p, &Domain::positive())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LagrangeWitness {
    pub holds: bool,
    /// First level `k` at which the identity fails.
    pub failing_k: Option<usize>,
}

/// `R_{2k}(l0) R_{2k-1}(∞) - R_{2k-1}(l0) R_{2k}(∞) = -1/l0` for every level.
pub fn lagrange_check(main: &Edge) -> LagrangeWitness {
    let d = cauer_sequence(main, Flavor::DirichletEnd);
    let n = cauer_sequence(main, Flavor::NeumannEnd);
    let target = Polynomial::constant(-main.lengths()[0].recip());
    let failing_k = d
        .iter()
        .zip(&n)
        .position(|(d, n)| &(&d.even * &n.odd) - &(&d.odd * &n.even) != target);
    LagrangeWitness { holds: failing_k.is_none(), failing_k }
}

/// `l = l0 R_{2n}(l0, 0) / R_{2n}(∞, 0)`.
pub fn total_length_identity(main: &Edge) -> bool {
    let z = Rational::zero();
    let d = edge_cauer_polys(main, Flavor::DirichletEnd).even.eval(&z);
    let n = edge_cauer_polys(main, Flavor::NeumannEnd).even.eval(&z);
    !n.is_zero() && &main.lengths()[0] * d / n == main.total_length()
}

/// `φ_D/φ_N = 1/(Σ_j 1/φ^(j) - M z)` as reduced rational functions.
pub fn quotient_identity(g: &StarGraph) -> Result<bool> {
    let (phi_n, phi_d) = char_polys_center(g)?;
    let mut sum = RationalFunction::from_poly(Polynomial::z().scale(&-g.central_mass()));
    for e in g.edges() {
        sum = sum.add(&edge_quotient(e).recip()?);
    }
    Ok(RationalFunction::new(&phi_d, &phi_n)? == sum.recip()?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PendantIdentities {
    /// `l0 (φ(l0) R_{2n}(∞) - φ(∞) R_{2n}(l0)) = φ_{D,q-1}`.
    pub dirichlet_sub: bool,
    /// `l0 (φ(∞) R_{2n-1}(l0) - φ(l0) R_{2n-1}(∞)) = φ_{N,q-1}`.
    pub neumann_sub: bool,
}

pub fn pendant_identities(g: &StarGraph) -> Result<PendantIdentities> {
    let (phi_l0, phi_inf) = char_polys_pendant(g)?;
    let main = g.main_edge().expect("pendant graph");
    let l0 = &main.lengths()[0];
    let d = edge_cauer_polys(main, Flavor::DirichletEnd);
    let n = edge_cauer_polys(main, Flavor::NeumannEnd);
    let (sub_n, sub_d) = subgraph_polys(g.edges(), g.central_mass());
    let lhs_d = (&(&phi_l0 * &n.even) - &(&phi_inf * &d.even)).scale(l0);
    let lhs_n = (&(&phi_inf * &d.odd) - &(&phi_l0 * &n.odd)).scale(l0);
    Ok(PendantIdentities { dirichlet_sub: lhs_d == sub_d, neumann_sub: lhs_n == sub_n })
}

/// A value shared by both spectra of a pendant-rooted graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommonZero {
    pub value: RealRoot,
    /// Multiplicity in `φ(l0)`.
    pub k0: usize,
    /// Multiplicity in `φ(∞)`.
    pub k_inf: usize,
    pub in_dirichlet_sub: usize,
    pub in_neumann_sub: usize,
}

impl CommonZero {
    pub fn consistent(&self, q: usize) -> bool {
        let m = self.k0.min(self.k_inf);
        self.in_neumann_sub == m && self.in_dirichlet_sub == m + 1 && self.k0 + self.k_inf + 3 <= 2 * q
    }
}

pub fn common_zeros(g: &StarGraph) -> Result<Vec<CommonZero>> {
    let (phi_l0, phi_inf) = char_polys_pendant(g)?;
    let (sub_n, sub_d) = subgraph_polys(g.edges(), g.central_mass());
    let gcd = poly_gcd(&phi_l0, &phi_inf)?;
    if gcd.deg0() == 0 {
        return Ok(Vec::new());
    }
    let roots = isolate_real_roots(&gcd, &Domain::positive())?;
    Ok(roots
        .roots()
        .iter()
        .map(|r| CommonZero {
            value: r.clone(),
            k0: r.multiplicity_in(&phi_l0),
            k_inf: r.multiplicity_in(&phi_inf),
            in_dirichlet_sub: r.multiplicity_in(&sub_d),
            in_neumann_sub: r.multiplicity_in(&sub_n),
        })
        .collect())
}

/// Index of the first pair of distinct neighbouring values that are both multiple.
pub fn neighbor_simplicity(spectrum: &RootList) -> Option<usize> {
    spectrum.roots().windows(2).position(|w| w[0].multiplicity() > 1 && w[1].multiplicity() > 1)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MonotonicityReport {
    pub comparisons: usize,
    /// `(index into the mass list, eigenvalue index)` where `λ_k` increased.
    pub violations: Vec<(usize, usize)>,
    /// Comparisons that could not be separated within the budget.
    pub unresolved: Vec<(usize, usize)>,
    /// Every eigenvalue involved was rational.
    pub all_rational: bool,
}

impl MonotonicityReport {
    pub fn holds(&self) -> Result<bool> {
        if !self.violations.is_empty() {
            return Ok(false);
        }
        if let Some((i, k)) = self.unresolved.first() {
            return Err(Error::Unresolved(format!("eigenvalue {} between masses #{i} and #{}", k + 1, i + 1)));
        }
        Ok(true)
    }
}

/// Checks `λ_k(M') <= λ_k(M)` for consecutive entries `M < M'` of `masses`.
pub fn neumann_monotonicity(g: &StarGraph, masses: &[Rational], budget: &Rational) -> Result<MonotonicityReport> {
    if g.root() != Root::Center {
        return Err(Error::Invariant("monotonicity is defined for centre-rooted graphs".into()));
    }
    if masses.windows(2).any(|w| w[0] > w[1]) || masses.iter().any(Signed::is_negative) {
        return Err(Error::Invariant("masses must be nonnegative and ascending".into()));
    }
    let spectra = Execution::default().map(masses, |m| {
        let (phi_n, _) = center_polys_with(g.edges(), m, Execution::Sequential);
        spectrum_of(&phi_n)
    });
    let spectra = spectra.into_iter().collect::<Result<Vec<_>>>()?;
    let mut rep = MonotonicityReport { all_rational: spectra.iter().all(RootList::all_rational), ..Default::default() };
    for (i, w) in spectra.windows(2).enumerate() {
        let (lo_m, hi_m) = (w[0].expanded(), w[1].expanded());
        for (k, (a, b)) in lo_m.iter().zip(&hi_m).enumerate() {
            rep.comparisons += 1;
            match compare_roots(b, a, budget) {
                Ok(Ordering::Greater) => rep.violations.push((i, k)),
                Ok(_) => {}
                Err(Error::Unresolved(_)) => rep.unresolved.push((i, k)),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(rep)
}
