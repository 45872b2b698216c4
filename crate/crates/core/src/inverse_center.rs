//! Inverse problem with the root at the centre: spectra plus edge lengths
//! determine a family of mass distributions; a plan picks one member.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::model::{Edge, ReconstructionPlan, SpectrumPair, StarGraph};
use crate::numeric::{
    order_roots, format_rational, isolate_real_roots, squarefree_factor, Domain, Polynomial,
    Rational, RealRoot, RootList,
};
use crate::par::Execution;
use crate::ratfun::partial::split_polynomial_part;
use crate::ratfun::{block_principal_part, cf_expand, RationalFunction};
use crate::report::ValidationReport;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterInverseInput {
    /// Neumann values are the `λ²`, Dirichlet values the `ζ²`.
    pub spectra: SpectrumPair,
    pub lengths: Vec<Rational>,
    pub plan: Option<ReconstructionPlan>,
}

/// Spectra given as polynomials whose positive zeros are the squared
/// eigenvalues; this form also carries irrational values exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralPolys {
    pub neumann: Polynomial,
    pub dirichlet: Polynomial,
}

impl SpectralPolys {
    pub fn from_pair(s: &SpectrumPair) -> Self {
        SpectralPolys { neumann: s.neumann_poly(), dirichlet: s.dirichlet_poly() }
    }
}

/// Checks the interlacing, coincidence and multiplicity conditions on root
/// lists. `q = 1` (a single string) demands simple, strictly interlacing values.
pub fn validate_center_roots(neumann: &RootList, dirichlet: &RootList, lengths: &[Rational]) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let q = lengths.len();
    if q == 0 {
        rep.violate("lengths", "no edge lengths given");
        return rep;
    }
    if let Some(i) = lengths.iter().position(|l| !l.is_positive()) {
        rep.violate("lengths", format!("length #{} is not positive", i + 1));
    }
    let lam = neumann.expanded();
    let zeta = dirichlet.expanded();
    let n = zeta.len();
    if lam.len() != n && lam.len() != n + 1 {
        rep.violate(
            "counts",
            format!("{} Neumann and {n} Dirichlet values; need equal counts or one more Neumann value", lam.len()),
        );
        return rep;
    }
    for (name, list) in [("neumann", neumann), ("dirichlet", dirichlet)] {
        for (i, r) in list.roots().iter().enumerate() {
            if r.cmp_rational(&Rational::zero()) != Ordering::Greater {
                rep.violate("positivity", format!("{name} value #{} is not positive", i + 1));
            }
        }
    }
    let cmp = |a: &RealRoot, b: &RealRoot, rep: &mut ValidationReport| match order_roots(a, b) {
        Ok(o) => Some(o),
        Err(e) => {
            rep.violate("comparison", e.message());
            None
        }
    };
    // λ1 < ζ1 ≤ λ2 ≤ ζ2 ≤ … ≤ λn ≤ ζn (< λ_{n+1})
    for k in 0..n {
        if let Some(o) = cmp(lam[k], zeta[k], &mut rep) {
            let ok = if k == 0 { o == Ordering::Less } else { o != Ordering::Greater };
            if !ok {
                let rel = if k == 0 { "<" } else { "<=" };
                rep.violate("interlacing", format!("need lambda_{} {rel} zeta_{}", k + 1, k + 1));
            }
        }
        if let Some(next) = lam.get(k + 1) {
            let strict = k + 1 == n;
            if let Some(o) = cmp(zeta[k], next, &mut rep) {
                let ok = if strict { o == Ordering::Less } else { o != Ordering::Greater };
                if !ok {
                    let rel = if strict { "<" } else { "<=" };
                    rep.violate("interlacing", format!("need zeta_{} {rel} lambda_{}", k + 1, k + 2));
                }
            }
        }
    }
    // ζ_{k-1} = λ_k ⇔ λ_k = ζ_k
    for k in 1..n {
        let left = cmp(zeta[k - 1], lam[k], &mut rep);
        let right = cmp(lam[k], zeta[k], &mut rep);
        if let (Some(l), Some(r)) = (left, right) {
            if (l == Ordering::Equal) != (r == Ordering::Equal) {
                rep.violate(
                    "coincidence",
                    format!("zeta_{k} = lambda_{} must hold exactly when lambda_{} = zeta_{}", k + 1, k + 1, k + 1),
                );
            }
        }
    }
    let lam_cap = (q - 1).max(1);
    for (i, r) in neumann.roots().iter().enumerate() {
        if r.multiplicity() > lam_cap {
            rep.violate(
                "multiplicity",
                format!("Neumann value #{} has multiplicity {} > {lam_cap}", i + 1, r.multiplicity()),
            );
        }
    }
    for (i, r) in dirichlet.roots().iter().enumerate() {
        if r.multiplicity() > q {
            rep.violate(
                "dirichlet-multiplicity",
                format!("Dirichlet value #{} has multiplicity {} > {q}", i + 1, r.multiplicity()),
            );
        }
    }
    rep
}

pub fn validate_center(input: &CenterInverseInput) -> ValidationReport {
    let mut rep = ValidationReport::default();
    if input.lengths.len() < 2 {
        rep.violate("lengths", format!("need q >= 2 edge lengths, got {}", input.lengths.len()));
        return rep;
    }
    let n = RootList::from_exact(input.spectra.neumann());
    let d = RootList::from_exact(input.spectra.dirichlet());
    rep.merge("", validate_center_roots(&n, &d, &input.lengths));
    rep
}

fn inverse_sum(lengths: &[Rational]) -> Rational {
    lengths.iter().map(|l| l.recip()).sum()
}

/// `Ψ(z) = (Σ 1/l_j) N(z)/D(z)` with `N(0) = D(0) = 1`, reduced.
pub fn psi_from_polys(polys: &SpectralPolys, lengths: &[Rational]) -> Result<RationalFunction> {
    let n = polys.neumann.unit_at_zero()?;
    let d = polys.dirichlet.unit_at_zero()?;
    RationalFunction::new(&n.scale(&inverse_sum(lengths)), &d)
}

pub fn build_psi(input: &CenterInverseInput) -> Result<RationalFunction> {
    psi_from_polys(&SpectralPolys::from_pair(&input.spectra), &input.lengths)
}

/// A group of Dirichlet values that is handed out as a unit: either one
/// rational value or the irrational zeros of one square-free factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    /// Monic square-free polynomial whose zeros are the block's values.
    pub factor: Polynomial,
    pub multiplicity: usize,
    /// Edges holding a copy, ascending.
    pub holders: Vec<usize>,
    /// Share of the residue per holder, aligned with `holders`.
    pub fractions: Vec<Rational>,
}

impl Block {
    pub fn value(&self) -> Option<Rational> {
        (self.factor.degree() == Some(1)).then(|| -self.factor.coeff(0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcretePlan {
    pub q: usize,
    pub blocks: Vec<Block>,
}

impl ConcretePlan {
    /// The plan in user-facing form; `None` when a block is irrational.
    pub fn to_plan(&self) -> Option<ReconstructionPlan> {
        let mut partition = Vec::new();
        let mut split = BTreeMap::new();
        for b in &self.blocks {
            let v = b.value()?;
            partition.push(b.holders.clone());
            split.insert(v, b.fractions.clone());
        }
        Some(ReconstructionPlan { partition: Some(partition), residue_split: Some(split) })
    }

    pub fn to_json(&self) -> Value {
        let blocks: Vec<Value> = self
            .blocks
            .iter()
            .map(|b| {
                let mut v = match b.value() {
                    Some(x) => json!({"value": format_rational(&x)}),
                    None => json!({"factor": b.factor.coeffs().iter().map(format_rational).collect::<Vec<_>>()}),
                };
                v["mult"] = json!(b.multiplicity);
                v["edges"] = json!(b.holders);
                v["fractions"] = json!(b.fractions.iter().map(format_rational).collect::<Vec<_>>());
                v
            })
            .collect();
        let mut out = match self.to_plan() {
            Some(p) => crate::model::plan_to_json(&p),
            None => json!({}),
        };
        out["blocks"] = Value::Array(blocks);
        out
    }
}

struct RawBlock {
    factor: Polynomial,
    multiplicity: usize,
}

/// Blocks of the Dirichlet polynomial in ascending order of their smallest value.
fn dirichlet_blocks(dirichlet: &Polynomial) -> Result<Vec<RawBlock>> {
    if dirichlet.deg0() == 0 {
        return Ok(Vec::new());
    }
    let roots = isolate_real_roots(dirichlet, &Domain::positive())?;
    if roots.total_multiplicity() != dirichlet.deg0() {
        return Err(Error::NotS0("Dirichlet polynomial has zeros off the positive axis".into()));
    }
    // Irrational remainder of each square-free factor, keyed by multiplicity.
    let mut remainder: BTreeMap<usize, Polynomial> = BTreeMap::new();
    for (f, k) in squarefree_factor(dirichlet)? {
        remainder.insert(k, f);
    }
    for r in roots.roots() {
        if let Some(c) = r.as_rational() {
            let f = remainder.get_mut(&r.multiplicity()).expect("factor for every multiplicity");
            *f = f.exact_div(&Polynomial::linear_root(c))?;
        }
    }
    let mut out = Vec::new();
    let mut emitted = std::collections::BTreeSet::new();
    for r in roots.roots() {
        match r.as_rational() {
            Some(c) => out.push(RawBlock { factor: Polynomial::linear_root(c), multiplicity: r.multiplicity() }),
            None => {
                if emitted.insert(r.multiplicity()) {
                    out.push(RawBlock { factor: remainder[&r.multiplicity()].clone(), multiplicity: r.multiplicity() });
                }
            }
        }
    }
    Ok(out)
}

fn infeasible(msg: impl Into<String>) -> Error {
    Error::PlanInfeasible(msg.into())
}

/// Assigns every block to distinct edges and fixes the residue shares.
pub fn plan_blocks(dirichlet: &Polynomial, q: usize, plan: Option<&ReconstructionPlan>) -> Result<ConcretePlan> {
    let raw = dirichlet_blocks(dirichlet)?;
    let partition = plan.and_then(|p| p.partition.as_ref());
    let split = plan.and_then(|p| p.residue_split.as_ref());
    let mut loads = vec![0usize; q];
    let mut blocks = Vec::with_capacity(raw.len());
    if let Some(part) = partition {
        if raw.iter().any(|b| b.factor.deg0() != 1) {
            return Err(infeasible("an explicit partition needs every Dirichlet value to be rational"));
        }
        if part.len() != raw.len() {
            return Err(infeasible(format!(
                "partition lists {} values but there are {} distinct Dirichlet values",
                part.len(),
                raw.len()
            )));
        }
    }
    for (i, b) in raw.iter().enumerate() {
        if b.multiplicity > q {
            return Err(infeasible(format!(
                "Dirichlet value #{} has multiplicity {} but only {q} edges exist",
                i + 1,
                b.multiplicity
            )));
        }
        let mut holders: Vec<usize> = match partition {
            Some(part) => {
                let h = part[i].clone();
                if h.len() != b.multiplicity {
                    return Err(infeasible(format!(
                        "partition[{i}] names {} edges for a value of multiplicity {}",
                        h.len(),
                        b.multiplicity
                    )));
                }
                if let Some(e) = h.iter().find(|&&e| e >= q) {
                    return Err(infeasible(format!("partition[{i}] names edge {e} but q = {q}")));
                }
                let mut s = h.clone();
                s.sort_unstable();
                s.dedup();
                if s.len() != h.len() {
                    return Err(infeasible(format!("partition[{i}] puts one value twice on an edge")));
                }
                h
            }
            None => {
                let mut order: Vec<usize> = (0..q).collect();
                order.sort_by_key(|&e| (loads[e], e));
                order.truncate(b.multiplicity);
                order
            }
        };
        holders.sort_unstable();
        for &e in &holders {
            loads[e] += b.factor.deg0();
        }
        let k = b.multiplicity;
        let fractions = match (b.factor.degree(), split) {
            (Some(1), Some(s)) if s.contains_key(&-b.factor.coeff(0)) => {
                let fr = &s[&-b.factor.coeff(0)];
                let key = format_rational(&-b.factor.coeff(0));
                if fr.len() != k {
                    return Err(infeasible(format!("residue_split[{key}] has {} parts for {k} holders", fr.len())));
                }
                if fr.iter().any(|x| !x.is_positive()) || fr.iter().sum::<Rational>() != Rational::one() {
                    return Err(infeasible(format!("residue_split[{key}] must be positive and sum to 1")));
                }
                fr.clone()
            }
            _ => vec![Rational::new(1.into(), k.into()); k],
        };
        blocks.push(Block { factor: b.factor.clone(), multiplicity: k, holders, fractions });
    }
    if let Some(s) = split {
        for pole in s.keys() {
            if !blocks.iter().any(|b| b.value().as_ref() == Some(pole)) {
                return Err(infeasible(format!("residue_split names {} which is not a Dirichlet value", format_rational(pole))));
            }
        }
    }
    Ok(ConcretePlan { q, blocks })
}

pub fn plan_partition(input: &CenterInverseInput) -> Result<ConcretePlan> {
    plan_blocks(&input.spectra.dirichlet_poly(), input.lengths.len(), input.plan.as_ref())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterReconstruction {
    pub graph: StarGraph,
    pub plan: ConcretePlan,
    pub psi: RationalFunction,
}

impl CenterReconstruction {
    pub fn central_mass(&self) -> &Rational {
        self.graph.central_mass()
    }
}

/// Core reconstruction from polynomial spectra. `q = 1` is accepted here.
pub fn reconstruct_center_polys(
    polys: &SpectralPolys,
    lengths: &[Rational],
    plan: Option<&ReconstructionPlan>,
    exec: Execution,
) -> Result<CenterReconstruction> {
    let q = lengths.len();
    if q == 0 {
        return Err(Error::Invariant("no edge lengths".into()));
    }
    let psi = psi_from_polys(polys, lengths)?;
    let (m, _b, p) = split_polynomial_part(&psi).map_err(|e| Error::NotS0(e.message()))?;
    let den = psi.den().clone();
    let concrete = plan_blocks(&polys.dirichlet, q, plan)?;

    let mut principal = Vec::with_capacity(concrete.blocks.len());
    for b in &concrete.blocks {
        if !b.factor.divides(&den)? {
            return Err(Error::NotS0(format!("Dirichlet zeros of {} are not poles of the reduced quotient", b.factor)));
        }
        principal.push(block_principal_part(&p, &den, &b.factor)?);
    }
    let edges = exec.map_range(q, |j| -> Result<Edge> {
        let held: Vec<usize> = (0..concrete.blocks.len()).filter(|&i| concrete.blocks[i].holders.contains(&j)).collect();
        let d = held.iter().fold(Polynomial::one(), |acc, &i| &acc * &concrete.blocks[i].factor);
        let mut n = Polynomial::zero();
        for &i in &held {
            let blk = &concrete.blocks[i];
            let w = &blk.fractions[blk.holders.iter().position(|&h| h == j).expect("holder")];
            n = &n + &(&principal[i].scale(w) * &d.exact_div(&blk.factor)?);
        }
        let z = Rational::zero();
        let bj = lengths[j].recip() - n.eval(&z) / d.eval(&z);
        let phi = RationalFunction::new(&d, &(&n + &d.scale(&bj)))?;
        let cf = cf_expand(&phi).map_err(|e| Error::NotS0(format!("edge {j}: {}", e.message())))?;
        if cf.depth() != d.deg0() {
            return Err(Error::NotS0(format!("edge {j}: expected {} masses, found {}", d.deg0(), cf.depth())));
        }
        let mut ls = cf.a().to_vec();
        let mut ms = cf.b().to_vec();
        ls.reverse();
        ms.reverse();
        let e = Edge::new(ls, ms)?;
        if e.total_length() != lengths[j] {
            return Err(Error::Invariant(format!("edge {j}: lengths sum to {} instead of {}", e.total_length(), lengths[j])));
        }
        Ok(e)
    });
    let edges = edges.into_iter().collect::<Result<Vec<_>>>()?;
    let graph = StarGraph::center_any(edges, m)?;
    Ok(CenterReconstruction { graph, plan: concrete, psi })
}

pub fn reconstruct_center(input: &CenterInverseInput) -> Result<CenterReconstruction> {
    if input.lengths.len() < 2 {
        return Err(Error::Invariant(format!("need q >= 2 edge lengths, got {}", input.lengths.len())));
    }
    reconstruct_center_polys(
        &SpectralPolys::from_pair(&input.spectra),
        &input.lengths,
        input.plan.as_ref(),
        Execution::default(),
    )
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// The free parameters of the reconstruction: which edges hold each
/// Dirichlet block and how its residue is shared.
pub fn constraint_set(polys: &SpectralPolys, lengths: &[Rational]) -> Result<Value> {
    let q = lengths.len();
    let psi = psi_from_polys(polys, lengths)?;
    let (m, b, p) = split_polynomial_part(&psi).map_err(|e| Error::NotS0(e.message()))?;
    let den = psi.den().clone();
    let blocks = dirichlet_blocks(&polys.dirichlet)?;
    let mut out = Vec::new();
    for blk in &blocks {
        let mut v = match blk.factor.degree() {
            Some(1) => {
                let c = -blk.factor.coeff(0);
                let res = p.eval(&c) / den.derivative().eval(&c);
                json!({"value": format_rational(&c), "total_residue": format_rational(&res)})
            }
            _ => json!({"factor": blk.factor.coeffs().iter().map(format_rational).collect::<Vec<_>>()}),
        };
        let k = blk.multiplicity;
        v["mult"] = json!(k);
        v["edge_choices"] = json!(binomial(q, k).to_string());
        v["split_simplex_dim"] = json!(k - 1);
        out.push(v);
    }
    Ok(json!({
        "q": q,
        "central_mass": format_rational(&m),
        "constant": format_rational(&b),
        "rules": [
            "a value of multiplicity k is held by k distinct edges",
            "its residue is shared by positive fractions summing to 1",
        ],
        "poles": out,
    }))
}
