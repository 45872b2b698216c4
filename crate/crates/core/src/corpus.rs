//! Seeded random instances for property tests, benches and batch runs.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Edge, StarGraph};
use crate::numeric::Rational;
use crate::ratfun::StieltjesCF;

/// Bounds on generated data; numerators and denominators are drawn from `1..=max_entry`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusBounds {
    pub max_edges: usize,
    pub max_masses: usize,
    pub max_entry: i64,
}

impl Default for CorpusBounds {
    fn default() -> Self {
        CorpusBounds { max_edges: 5, max_masses: 4, max_entry: 20 }
    }
}

/// Whether the central mass may be zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CentralMass {
    Any,
    Positive,
    Zero,
}

pub struct Corpus {
    rng: ChaCha8Rng,
    bounds: CorpusBounds,
}

impl Corpus {
    pub fn new(seed: u64) -> Self {
        Self::with_bounds(seed, CorpusBounds::default())
    }

    pub fn with_bounds(seed: u64, bounds: CorpusBounds) -> Self {
        Corpus { rng: ChaCha8Rng::seed_from_u64(seed), bounds }
    }

    pub fn positive(&mut self) -> Rational {
        let n = self.rng.gen_range(1..=self.bounds.max_entry);
        let d = self.rng.gen_range(1..=self.bounds.max_entry);
        Rational::new(n.into(), d.into())
    }

    pub fn edge(&mut self) -> Edge {
        let n = self.rng.gen_range(0..=self.bounds.max_masses);
        self.edge_with(n)
    }

    pub fn edge_with(&mut self, n: usize) -> Edge {
        let lengths = (0..=n).map(|_| self.positive()).collect();
        let masses = (0..n).map(|_| self.positive()).collect();
        Edge::new(lengths, masses).expect("consistent counts")
    }

    fn mass(&mut self, m: CentralMass) -> Rational {
        match m {
            CentralMass::Zero => Rational::zero(),
            CentralMass::Positive => self.positive(),
            CentralMass::Any if self.rng.gen_bool(1.0 / 3.0) => Rational::zero(),
            CentralMass::Any => self.positive(),
        }
    }

    pub fn center_graph(&mut self, m: CentralMass) -> StarGraph {
        let q = self.rng.gen_range(2..=self.bounds.max_edges.max(2));
        let edges = (0..q).map(|_| self.edge()).collect();
        let m = self.mass(m);
        StarGraph::center(edges, m).expect("valid")
    }

    /// `q` counts the main edge.
    pub fn pendant_graph(&mut self, m: CentralMass) -> StarGraph {
        let q = self.rng.gen_range(2..=self.bounds.max_edges.max(2));
        let main = self.edge();
        let edges = (0..q - 1).map(|_| self.edge()).collect();
        let m = self.mass(m);
        StarGraph::pendant(main, edges, m).expect("valid")
    }

    /// A centre-rooted star in which one edge occurs at least twice.
    pub fn center_graph_with_duplicates(&mut self, m: CentralMass) -> StarGraph {
        let q = self.rng.gen_range(2..=self.bounds.max_edges.max(2));
        let copies = self.rng.gen_range(2..=q);
        let n = self.rng.gen_range(1..=self.bounds.max_masses.max(1));
        let dup = self.edge_with(n);
        let mut edges = vec![dup; copies];
        edges.extend((copies..q).map(|_| self.edge()));
        let m = self.mass(m);
        StarGraph::center(edges, m).expect("valid")
    }

    /// A pendant-rooted star whose non-main edges contain a repeated edge.
    pub fn pendant_graph_with_duplicates(&mut self, m: CentralMass) -> StarGraph {
        let q = self.rng.gen_range(3..=self.bounds.max_edges.max(3));
        let copies = self.rng.gen_range(2..q);
        let n = self.rng.gen_range(1..=self.bounds.max_masses.max(1));
        let dup = self.edge_with(n);
        let mut edges = vec![dup; copies];
        edges.extend((copies..q - 1).map(|_| self.edge()));
        let main = self.edge();
        let m = self.mass(m);
        StarGraph::pendant(main, edges, m).expect("valid")
    }

    /// A Stieltjes continued fraction of depth at most `max_depth`;
    /// `a0` is zero about a third of the time when `p > 0`.
    pub fn cf(&mut self, max_depth: usize) -> StieltjesCF {
        let p = self.rng.gen_range(0..=max_depth);
        let a0 = if p > 0 && self.rng.gen_bool(1.0 / 3.0) { Rational::zero() } else { self.positive() };
        let mut a = vec![a0];
        a.extend((0..p).map(|_| self.positive()));
        let b = (0..p).map(|_| self.positive()).collect();
        StieltjesCF::new(a, b).expect("positive coefficients")
    }

    pub fn center_graphs(&mut self, count: usize, m: CentralMass) -> Vec<StarGraph> {
        (0..count).map(|_| self.center_graph(m)).collect()
    }

    pub fn pendant_graphs(&mut self, count: usize, m: CentralMass) -> Vec<StarGraph> {
        (0..count).map(|_| self.pendant_graph(m)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_a_seed() {
        let a = Corpus::new(7).center_graphs(5, CentralMass::Any);
        let b = Corpus::new(7).center_graphs(5, CentralMass::Any);
        assert_eq!(a, b);
        assert!(a.iter().all(|g| (2..=5).contains(&g.q())));
    }

    #[test]
    fn duplicates_present() {
        let mut c = Corpus::new(3);
        for _ in 0..10 {
            let g = c.center_graph_with_duplicates(CentralMass::Any);
            assert_eq!(g.edges()[0], g.edges()[1]);
            let p = c.pendant_graph_with_duplicates(CentralMass::Any);
            assert_eq!(p.edges()[0], p.edges()[1]);
            assert!(p.q() <= 5);
        }
    }

    #[test]
    fn cf_depth_bounded() {
        let mut c = Corpus::new(11);
        assert!((0..50).all(|_| c.cf(10).depth() <= 10));
    }
}
