//! forward → inverse → forward comparisons on whole graphs.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forward::{center_polys_with, char_polys_pendant};
use crate::inverse_center::{reconstruct_center_polys, SpectralPolys};
use crate::inverse_pendant::reconstruct_pendant_polys;
use crate::model::{ReconstructionPlan, Root, StarGraph};
use crate::par::Execution;
use crate::ratfun::RationalFunction;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundTrip {
    /// Canonical spectral quotients agree exactly.
    pub quotient_equal: bool,
    /// The main edge was recovered unchanged (pendant root only).
    pub main_edge_equal: Option<bool>,
    pub central_mass_equal: bool,
    /// Both spectra agree with multiplicity, not only their reduced quotient.
    pub spectra_equal: bool,
}

impl RoundTrip {
    pub fn passed(&self) -> bool {
        self.quotient_equal && self.main_edge_equal != Some(false)
    }
}

/// `(dirichlet, neumann)` characteristic polynomials for either root placement.
pub fn spectral_polys(g: &StarGraph, exec: Execution) -> Result<SpectralPolys> {
    match g.root() {
        Root::Center => {
            let (neumann, dirichlet) = center_polys_with(g.edges(), g.central_mass(), exec);
            Ok(SpectralPolys { neumann, dirichlet })
        }
        Root::Pendant => {
            let (l0, inf) = char_polys_pendant(g)?;
            Ok(SpectralPolys { neumann: inf, dirichlet: l0 })
        }
    }
}

/// The canonical quotient `dirichlet / neumann`.
pub fn spectral_quotient(p: &SpectralPolys) -> Result<RationalFunction> {
    RationalFunction::new(&p.dirichlet, &p.neumann)
}

/// Both polynomials normalised to the value 1 at the origin, which pins
/// down the spectra with multiplicity.
pub fn same_spectra(a: &SpectralPolys, b: &SpectralPolys) -> Result<bool> {
    Ok(a.neumann.unit_at_zero()? == b.neumann.unit_at_zero()? && a.dirichlet.unit_at_zero()? == b.dirichlet.unit_at_zero()?)
}

/// Inverse of the spectral data with the default plan.
pub fn reconstruct_from(g: &StarGraph, polys: &SpectralPolys, exec: Execution) -> Result<StarGraph> {
    reconstruct_with(g, polys, None, exec)
}

fn reconstruct_with(g: &StarGraph, polys: &SpectralPolys, plan: Option<&ReconstructionPlan>, exec: Execution) -> Result<StarGraph> {
    let lengths: Vec<_> = g.edges().iter().map(|e| e.total_length()).collect();
    match g.main_edge() {
        None => Ok(reconstruct_center_polys(polys, &lengths, plan, exec)?.graph),
        Some(main) => Ok(reconstruct_pendant_polys(polys, &main.total_length(), &lengths, plan, exec)?.graph),
    }
}

pub fn roundtrip(g: &StarGraph, exec: Execution) -> Result<RoundTrip> {
    Ok(roundtrip_with(g, None, exec)?.0)
}

/// Round trip under an optional plan, returning the rebuilt graph as well.
pub fn roundtrip_with(g: &StarGraph, plan: Option<&ReconstructionPlan>, exec: Execution) -> Result<(RoundTrip, StarGraph)> {
    let before = spectral_polys(g, exec)?;
    let rebuilt = reconstruct_with(g, &before, plan, exec)?;
    let after = spectral_polys(&rebuilt, exec)?;
    if rebuilt.root() != g.root() {
        return Err(Error::Invariant("reconstruction changed the root placement".into()));
    }
    let rt = RoundTrip {
        quotient_equal: spectral_quotient(&before)? == spectral_quotient(&after)?,
        main_edge_equal: g.main_edge().map(|m| Some(m) == rebuilt.main_edge()),
        central_mass_equal: g.central_mass() == rebuilt.central_mass(),
        spectra_equal: same_spectra(&before, &after)?,
    };
    Ok((rt, rebuilt))
}

/// Round trips a batch; graphs are processed independently under `exec`.
pub fn batch_roundtrip(graphs: &[StarGraph], exec: Execution) -> Vec<Result<RoundTrip>> {
    exec.map(graphs, |g| roundtrip(g, Execution::Sequential))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{CentralMass, Corpus};

    #[test]
    fn small_batches_round_trip() {
        let mut c = Corpus::new(1);
        let mut graphs = c.center_graphs(10, CentralMass::Any);
        graphs.extend(c.pendant_graphs(10, CentralMass::Any));
        for (g, r) in graphs.iter().zip(batch_roundtrip(&graphs, Execution::default())) {
            let r = r.unwrap_or_else(|e| panic!("{g:?}: {e:?}"));
            assert!(r.passed(), "{g:?}: {r:?}");
            assert!(r.central_mass_equal && r.spectra_equal);
        }
    }

    #[test]
    fn strategies_agree() {
        let graphs = Corpus::new(2).center_graphs(6, CentralMass::Positive);
        let a: Vec<_> = batch_roundtrip(&graphs, Execution::Sequential).into_iter().map(|r| r.unwrap()).collect();
        let b: Vec<_> = batch_roundtrip(&graphs, Execution::Parallel).into_iter().map(|r| r.unwrap()).collect();
        assert_eq!(a, b);
    }
}
