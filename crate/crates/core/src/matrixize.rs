//! Star-patterned stiffness/mass pencils of centre-rooted graphs.
//!
//! Rows are ordered centre first, then each edge's masses from the one next
//! to the centre outwards.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::model::{Root, StarGraph};
use crate::numeric::{compare_roots, format_rational, parse_rational, Polynomial, Rational, RootList};
use crate::forward::spectrum_of;
use crate::par::Execution;
use crate::report::ValidationReport;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    dim: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(dim: usize) -> Self {
        RationalMatrix { dim, entries: vec![Rational::zero(); dim * dim] }
    }

    pub fn diagonal(d: &[Rational]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, v) in d.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Schema("matrix rows must form a square array".into()));
        }
        Ok(RationalMatrix { dim, entries: rows.into_iter().flatten().collect() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.entries.chunks(self.dim.max(1)).take(self.dim).map(<[Rational]>::to_vec).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn diag(&self) -> Vec<Rational> {
        (0..self.dim).map(|i| self.get(i, i).clone()).collect()
    }

    /// Drops the first row and column.
    pub fn trailing_minor(&self) -> Self {
        let n = self.dim.saturating_sub(1);
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.get(i + 1, j + 1).clone());
            }
        }
        m
    }

    /// Exact determinant by Gaussian elimination.
    pub fn det(&self) -> Rational {
        let n = self.dim;
        let mut a = self.entries.clone();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r * n + c].is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                for k in 0..n {
                    a.swap(p * n + k, c * n + k);
                }
                det = -det;
            }
            let piv = a[c * n + c].clone();
            det *= &piv;
            for r in c + 1..n {
                if a[r * n + c].is_zero() {
                    continue;
                }
                let f = &a[r * n + c] / &piv;
                for k in c..n {
                    let t = &f * &a[c * n + k];
                    a[r * n + k] -= t;
                }
            }
        }
        det
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pencil {
    pub l: RationalMatrix,
    pub m: RationalMatrix,
}

impl Pencil {
    pub fn to_json(&self) -> Value {
        let rows: Vec<Vec<String>> =
            self.l.rows().iter().map(|r| r.iter().map(format_rational).collect()).collect();
        json!({
            "dim": self.l.dim(),
            "L": rows,
            "M_diag": self.m.diag().iter().map(format_rational).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |w: &str| Error::Schema(format!("pencil JSON: {w}"));
        let dim = v.get("dim").and_then(Value::as_u64).ok_or_else(|| bad("missing \"dim\""))? as usize;
        let rat = |x: &Value| -> Result<Rational> {
            match x {
                Value::String(s) => parse_rational(s),
                Value::Number(n) => parse_rational(&n.to_string()),
                _ => Err(bad("entries must be rational strings")),
            }
        };
        let rows = v.get("L").and_then(Value::as_array).ok_or_else(|| bad("missing \"L\""))?;
        let rows = rows
            .iter()
            .map(|r| r.as_array().ok_or_else(|| bad("\"L\" rows must be arrays"))?.iter().map(rat).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        let d = v.get("M_diag").and_then(Value::as_array).ok_or_else(|| bad("missing \"M_diag\""))?;
        let d = d.iter().map(rat).collect::<Result<Vec<_>>>()?;
        let l = RationalMatrix::from_rows(rows)?;
        if l.dim() != dim || d.len() != dim {
            return Err(bad("dimensions disagree"));
        }
        Ok(Pencil { l, m: RationalMatrix::diagonal(&d) })
    }
}

/// `(L, M)` with `L u = z M u` the Neumann problem at the centre.
pub fn build_pencil(g: &StarGraph) -> Result<Pencil> {
    if g.root() != Root::Center {
        return Err(Error::Invariant("pencils are built for centre-rooted graphs".into()));
    }
    if !g.central_mass().is_positive() {
        return Err(Error::RequiresPositiveM("the pencil needs a positive central mass".into()));
    }
    let dim = 1 + g.edges().iter().map(|e| e.n()).sum::<usize>();
    let mut l = RationalMatrix::zeros(dim);
    let mut mass = vec![g.central_mass().clone()];
    let mut centre = Rational::zero();
    let mut row = 1;
    for e in g.edges() {
        let (ls, ms) = (e.lengths(), e.masses());
        let n = ms.len();
        centre += ls[n].recip();
        mass.extend(ms.iter().rev().cloned());
        // mass k (1-based, pendant side first) sits at row + n - k
        for k in 1..=n {
            let i = row + n - k;
            l.set(i, i, ls[k - 1].recip() + ls[k].recip());
            let outer = if k == n { 0 } else { i - 1 };
            let c = -ls[k].recip();
            l.set(i, outer, c.clone());
            l.set(outer, i, c);
        }
        row += n;
    }
    l.set(0, 0, centre);
    Ok(Pencil { l, m: RationalMatrix::diagonal(&mass) })
}

/// Interpolates `det(L - zM)` from `dim + 2` evaluation points.
pub fn pencil_det(p: &Pencil) -> Polynomial {
    pencil_det_with(p, Execution::default())
}

pub fn pencil_det_with(p: &Pencil, exec: Execution) -> Polynomial {
    let n = p.l.dim();
    let xs: Vec<Rational> = (0..n + 2).map(|i| Rational::from_integer((i as i64).into())).collect();
    let ys = exec.map(&xs, |x| {
        let mut a = p.l.clone();
        for i in 0..n {
            let v = a.get(i, i) - x * p.m.get(i, i);
            a.set(i, i, v);
        }
        a.det()
    });
    interpolate(&xs, &ys)
}

fn interpolate(xs: &[Rational], ys: &[Rational]) -> Polynomial {
    let mut acc = Polynomial::zero();
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = Polynomial::constant(yi.clone());
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                basis = (&basis * &Polynomial::linear_root(xj)).scale(&(xi - xj).recip());
            }
        }
        acc = &acc + &basis;
    }
    acc
}

/// Symmetry and the star sparsity pattern of a built `L`.
pub fn validate_pattern(p: &Pencil, g: &StarGraph) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let l = &p.l;
    if !l.is_symmetric() {
        rep.violate("symmetric", "L is not symmetric");
    }
    if p.m.dim() != l.dim() {
        rep.violate("dimension", "L and M differ in size");
        return rep;
    }
    for i in 0..l.dim() {
        for j in 0..l.dim() {
            if i != j && !p.m.get(i, j).is_zero() {
                rep.violate("mass-diagonal", format!("M has an off-diagonal entry at ({i}, {j})"));
            }
        }
        if !p.m.get(i, i).is_positive() {
            rep.violate("mass-positive", format!("M entry {i} is not positive"));
        }
    }
    // allowed off-diagonal couplings
    let mut allowed = vec![vec![false; l.dim()]; l.dim()];
    let mut row = 1;
    for e in g.edges() {
        let n = e.n();
        for t in 0..n {
            let i = row + t;
            let prev = if t == 0 { 0 } else { i - 1 };
            allowed[i][prev] = true;
            allowed[prev][i] = true;
        }
        row += n;
    }
    if row != l.dim() {
        rep.violate("dimension", format!("graph has {row} degrees of freedom, L has {}", l.dim()));
        return rep;
    }
    for (i, row) in allowed.iter().enumerate() {
        for (j, &ok) in row.iter().enumerate() {
            if i != j && !ok && !l.get(i, j).is_zero() {
                rep.violate("pattern", format!("unexpected coupling at ({i}, {j})"));
            }
        }
    }
    rep
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterlacingCertificate {
    pub full: RootList,
    pub sub: RootList,
    pub report: ValidationReport,
}

impl InterlacingCertificate {
    pub fn passes(&self) -> bool {
        self.report.is_valid()
    }

    pub fn to_json(&self, mode: crate::model::OutputMode) -> Value {
        json!({
            "passes": self.passes(),
            "full": crate::model::root_list_json(&self.full, mode),
            "submatrix": crate::model::root_list_json(&self.sub, mode),
            "report": serde_json::to_value(&self.report).expect("serialisable"),
        })
    }
}

/// Certifies `λ1 ≤ μ1 ≤ λ2 ≤ … ≤ μn ≤ λ_{n+1}` for the full pencil and its
/// first trailing minor.
pub fn interlacing_certificate(p: &Pencil, budget: &Rational) -> Result<InterlacingCertificate> {
    let full = spectrum_of(&pencil_det(p))?;
    let sub_pencil = Pencil { l: p.l.trailing_minor(), m: p.m.trailing_minor() };
    let sub = spectrum_of(&pencil_det(&sub_pencil))?;
    let mut report = ValidationReport::default();
    let (f, s) = (full.expanded(), sub.expanded());
    if f.len() != p.l.dim() || s.len() + 1 != f.len() {
        report.violate("counts", format!("{} full and {} submatrix eigenvalues for dimension {}", f.len(), s.len(), p.l.dim()));
        return Ok(InterlacingCertificate { full, sub, report });
    }
    for (k, mu) in s.iter().enumerate() {
        if compare_roots(f[k], mu, budget)? == Ordering::Greater {
            report.violate("interlacing", format!("lambda_{} > mu_{}", k + 1, k + 1));
        }
        if compare_roots(mu, f[k + 1], budget)? == Ordering::Greater {
            report.violate("interlacing", format!("mu_{} > lambda_{}", k + 1, k + 2));
        }
    }
    Ok(InterlacingCertificate { full, sub, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::char_polys_center;
    use crate::model::Edge;
    use crate::numeric::{default_budget, int, ratio};

    fn bead() -> Edge {
        Edge::new(vec![int(1), int(1)], vec![int(1)]).unwrap()
    }

    #[test]
    fn massless_edges_collapse_to_one_row() {
        let t = Edge::thread(int(1)).unwrap();
        let g = StarGraph::center(vec![t.clone(), t], int(1)).unwrap();
        let p = build_pencil(&g).unwrap();
        assert_eq!(p.l.rows(), vec![vec![int(2)]]);
        assert_eq!(p.m.diag(), vec![int(1)]);
        assert_eq!(pencil_det(&p), Polynomial::from_i64(&[2, -1]));
        let c = interlacing_certificate(&p, &default_budget()).unwrap();
        assert!(c.passes());
        assert!(c.sub.is_empty());
    }

    #[test]
    fn three_by_three_pencil() {
        let g = StarGraph::center(vec![bead(), bead()], int(1)).unwrap();
        let p = build_pencil(&g).unwrap();
        assert_eq!(p.l.dim(), 3);
        assert!(validate_pattern(&p, &g).is_valid());
        let (phi_n, phi_d) = char_polys_center(&g).unwrap();
        assert!(pencil_det(&p).is_proportional_to(&phi_n).is_some());
        let sub = Pencil { l: p.l.trailing_minor(), m: p.m.trailing_minor() };
        assert!(pencil_det(&sub).is_proportional_to(&phi_d).is_some());
        let c = interlacing_certificate(&p, &default_budget()).unwrap();
        assert!(c.passes());
        assert_eq!(c.full, spectrum_of(&phi_n).unwrap());
        assert_eq!(c.sub, spectrum_of(&phi_d).unwrap());
    }

    #[test]
    fn longer_edges_match_characteristic_polynomials() {
        let e1 = Edge::new(vec![ratio(1, 2), int(2), ratio(3, 4)], vec![int(3), ratio(1, 5)]).unwrap();
        let e2 = Edge::new(vec![int(1), ratio(2, 3), int(1), int(5)], vec![int(1), int(2), ratio(7, 2)]).unwrap();
        let g = StarGraph::center(vec![e1, bead(), e2], ratio(5, 3)).unwrap();
        let p = build_pencil(&g).unwrap();
        assert!(validate_pattern(&p, &g).is_valid());
        let (phi_n, phi_d) = char_polys_center(&g).unwrap();
        assert!(pencil_det(&p).is_proportional_to(&phi_n).is_some());
        assert!(pencil_det_with(&Pencil { l: p.l.trailing_minor(), m: p.m.trailing_minor() }, Execution::Sequential)
            .is_proportional_to(&phi_d)
            .is_some());
    }

    #[test]
    fn zero_central_mass_rejected() {
        let g = StarGraph::center(vec![bead(), bead()], int(0)).unwrap();
        assert_eq!(build_pencil(&g).unwrap_err().code(), "E_REQUIRES_POSITIVE_M");
    }

    #[test]
    fn corruption_detected() {
        let g = StarGraph::center(vec![bead(), bead()], int(1)).unwrap();
        let mut p = build_pencil(&g).unwrap();
        p.l.set(0, 1, int(7));
        assert!(validate_pattern(&p, &g).has("symmetric"));
        let mut p = build_pencil(&g).unwrap();
        p.l.set(1, 2, int(-1));
        p.l.set(2, 1, int(-1));
        assert!(validate_pattern(&p, &g).has("pattern"));
    }

    #[test]
    fn json_round_trip() {
        let g = StarGraph::center(vec![bead(), bead()], int(1)).unwrap();
        let p = build_pencil(&g).unwrap();
        let v = p.to_json();
        assert_eq!(v["dim"], 3);
        assert_eq!(Pencil::from_json(&v).unwrap(), p);
    }
}
