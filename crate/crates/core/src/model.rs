//! Graphs, spectra and reconstruction plans, with their JSON forms.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::numeric::{format_rational, parse_rational, Polynomial, Rational, RootList, RootValue};

/// A thread with point masses. `lengths[0]` is the interval at the far end
/// (the pendant vertex or the root), the last interval touches the centre.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    lengths: Vec<Rational>,
    masses: Vec<Rational>,
}

impl Edge {
    pub fn new(lengths: Vec<Rational>, masses: Vec<Rational>) -> Result<Self> {
        if lengths.len() != masses.len() + 1 {
            return Err(Error::Invariant(format!(
                "edge has {} lengths and {} masses; expected one more length than masses",
                lengths.len(),
                masses.len()
            )));
        }
        if let Some(i) = lengths.iter().position(|l| !l.is_positive()) {
            return Err(Error::Invariant(format!("lengths[{i}] is not positive")));
        }
        if let Some(i) = masses.iter().position(|m| !m.is_positive()) {
            return Err(Error::Invariant(format!("masses[{i}] is not positive")));
        }
        Ok(Edge { lengths, masses })
    }

    /// A massless thread of length `l`.
    pub fn thread(l: Rational) -> Result<Self> {
        Self::new(vec![l], Vec::new())
    }

    pub fn lengths(&self) -> &[Rational] {
        &self.lengths
    }

    pub fn masses(&self) -> &[Rational] {
        &self.masses
    }

    /// Number of point masses.
    pub fn n(&self) -> usize {
        self.masses.len()
    }

    pub fn total_length(&self) -> Rational {
        self.lengths.iter().sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Root {
    Center,
    Pendant,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StarGraph {
    root: Root,
    central_mass: Rational,
    edges: Vec<Edge>,
    main_edge: Option<Edge>,
}

impl StarGraph {
    pub fn center(edges: Vec<Edge>, central_mass: Rational) -> Result<Self> {
        if edges.len() < 2 {
            return Err(Error::Invariant(format!("a centre-rooted star needs q >= 2 edges, got {}", edges.len())));
        }
        Self::center_any(edges, central_mass)
    }

    /// Centre-rooted star without the `q >= 2` rule; used for the subgraph of a
    /// pendant-rooted star, which may consist of a single edge.
    pub(crate) fn center_any(edges: Vec<Edge>, central_mass: Rational) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::Invariant("star without edges".into()));
        }
        if central_mass.is_negative() {
            return Err(Error::Invariant("central mass is negative".into()));
        }
        Ok(StarGraph { root: Root::Center, central_mass, edges, main_edge: None })
    }

    pub fn pendant(main_edge: Edge, edges: Vec<Edge>, central_mass: Rational) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::Invariant("a pendant-rooted star needs at least one non-main edge".into()));
        }
        if central_mass.is_negative() {
            return Err(Error::Invariant("central mass is negative".into()));
        }
        Ok(StarGraph { root: Root::Pendant, central_mass, edges, main_edge: Some(main_edge) })
    }

    pub fn root(&self) -> Root {
        self.root
    }

    pub fn central_mass(&self) -> &Rational {
        &self.central_mass
    }

    /// The non-main edges.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn main_edge(&self) -> Option<&Edge> {
        self.main_edge.as_ref()
    }

    /// Total number of edges meeting at the centre.
    pub fn q(&self) -> usize {
        self.edges.len() + usize::from(self.main_edge.is_some())
    }

    /// Number of point masses, counting the central one when positive.
    pub fn mass_count(&self) -> usize {
        self.edges.iter().map(Edge::n).sum::<usize>()
            + self.main_edge.as_ref().map_or(0, Edge::n)
            + usize::from(self.central_mass.is_positive())
    }

    pub fn with_central_mass(&self, m: Rational) -> Result<Self> {
        if m.is_negative() {
            return Err(Error::Invariant("central mass is negative".into()));
        }
        Ok(StarGraph { central_mass: m, ..self.clone() })
    }

    /// The non-main edges with the central mass, as a centre-rooted star.
    pub fn subgraph(&self) -> StarGraph {
        StarGraph { root: Root::Center, central_mass: self.central_mass.clone(), edges: self.edges.clone(), main_edge: None }
    }
}

/// A multiset of positive values, sorted and merged.
pub type Multiset = Vec<(Rational, usize)>;

fn canonical_multiset(name: &str, mut v: Multiset) -> Result<Multiset> {
    if let Some((x, _)) = v.iter().find(|(x, _)| !x.is_positive()) {
        return Err(Error::Invariant(format!("{name}: value {} is not positive", format_rational(x))));
    }
    if v.iter().any(|(_, m)| *m == 0) {
        return Err(Error::Invariant(format!("{name}: multiplicity 0")));
    }
    v.sort();
    let mut out: Multiset = Vec::with_capacity(v.len());
    for (x, m) in v {
        match out.last_mut() {
            Some((y, k)) if *y == x => *k += m,
            _ => out.push((x, m)),
        }
    }
    Ok(out)
}

/// `Π (1 - z/v)^m`.
pub fn product_polynomial(values: &Multiset) -> Polynomial {
    values.iter().fold(Polynomial::one(), |acc, (v, m)| {
        &acc * &Polynomial::unit_factor(v).expect("positive value").pow(*m)
    })
}

pub fn multiset_count(values: &Multiset) -> usize {
    values.iter().map(|(_, m)| m).sum()
}

/// Squared eigenvalues of the two boundary problems at the root.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpectrumPair {
    neumann_sq: Multiset,
    dirichlet_sq: Multiset,
}

impl SpectrumPair {
    pub fn new(neumann_sq: Multiset, dirichlet_sq: Multiset) -> Result<Self> {
        Ok(SpectrumPair {
            neumann_sq: canonical_multiset("neumann_squared", neumann_sq)?,
            dirichlet_sq: canonical_multiset("dirichlet_squared", dirichlet_sq)?,
        })
    }

    /// Convenience constructor from `(numerator, denominator, multiplicity)`.
    pub fn from_ratios(neumann: &[(i64, i64, usize)], dirichlet: &[(i64, i64, usize)]) -> Result<Self> {
        let f = |v: &[(i64, i64, usize)]| v.iter().map(|&(n, d, m)| (crate::numeric::ratio(n, d), m)).collect();
        Self::new(f(neumann), f(dirichlet))
    }

    pub fn neumann(&self) -> &Multiset {
        &self.neumann_sq
    }

    pub fn dirichlet(&self) -> &Multiset {
        &self.dirichlet_sq
    }

    /// `Π (1 - z/ν)^m` over the Neumann values.
    pub fn neumann_poly(&self) -> Polynomial {
        product_polynomial(&self.neumann_sq)
    }

    pub fn dirichlet_poly(&self) -> Polynomial {
        product_polynomial(&self.dirichlet_sq)
    }
}

/// How to resolve the non-uniqueness of a centre-rooted reconstruction.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReconstructionPlan {
    /// One list per distinct Dirichlet value in ascending order, naming the
    /// (0-based) edge that receives each occurrence.
    pub partition: Option<Vec<Vec<usize>>>,
    /// Pole value mapped to fractions of its residue, one per holding edge in
    /// ascending edge order.
    pub residue_split: Option<BTreeMap<Rational, Vec<Rational>>>,
}

impl ReconstructionPlan {
    pub fn with_split(pole: Rational, fractions: Vec<Rational>) -> Self {
        ReconstructionPlan { partition: None, residue_split: Some(BTreeMap::from([(pole, fractions)])) }
    }

    fn check(&self) -> Result<()> {
        if let Some(p) = &self.partition {
            for (i, holders) in p.iter().enumerate() {
                let mut s = holders.clone();
                s.sort_unstable();
                s.dedup();
                if s.len() != holders.len() {
                    return Err(Error::Invariant(format!("partition[{i}] repeats an edge")));
                }
            }
        }
        if let Some(split) = &self.residue_split {
            for (pole, fr) in split {
                let key = format_rational(pole);
                if fr.is_empty() || fr.iter().any(|x| !x.is_positive()) {
                    return Err(Error::Invariant(format!("residue_split[{key}] needs positive fractions")));
                }
                if fr.iter().sum::<Rational>() != Rational::one() {
                    return Err(Error::Invariant(format!("residue_split[{key}] does not sum to 1")));
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------- JSON

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RatJson {
    Str(String),
    Int(i64),
}

impl RatJson {
    fn get(&self, path: &str) -> Result<Rational> {
        match self {
            RatJson::Str(s) => parse_rational(s).map_err(|e| Error::Schema(format!("{path}: {}", e.message()))),
            RatJson::Int(i) => Ok(Rational::from_integer((*i).into())),
        }
    }
}

fn rats(v: &[RatJson], path: &str) -> Result<Vec<Rational>> {
    v.iter().enumerate().map(|(i, x)| x.get(&format!("{path}[{i}]"))).collect()
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    lengths: Vec<RatJson>,
    masses: Vec<RatJson>,
}

#[derive(Deserialize)]
struct GraphJson {
    root: String,
    central_mass: RatJson,
    main_edge: Option<EdgeJson>,
    edges: Vec<EdgeJson>,
}

#[derive(Deserialize)]
struct EntryJson {
    value: RatJson,
    mult: usize,
}

#[derive(Deserialize)]
struct SpectraJson {
    neumann_squared: Vec<EntryJson>,
    dirichlet_squared: Vec<EntryJson>,
}

#[derive(Deserialize)]
struct PlanJson {
    partition: Option<Vec<Vec<usize>>>,
    residue_split: Option<BTreeMap<String, Vec<RatJson>>>,
}

fn schema(e: serde_json::Error) -> Error {
    Error::Schema(format!("{e} (line {}, column {})", e.line(), e.column()))
}

fn at(path: &str, e: Error) -> Error {
    match e {
        Error::Invariant(m) => Error::Invariant(format!("{path}: {m}")),
        other => other,
    }
}

fn edge_from(e: &EdgeJson, path: &str) -> Result<Edge> {
    Edge::new(rats(&e.lengths, &format!("{path}.lengths"))?, rats(&e.masses, &format!("{path}.masses"))?)
        .map_err(|err| at(path, err))
}

fn edge_json(e: &Edge) -> Value {
    json!({
        "lengths": e.lengths.iter().map(format_rational).collect::<Vec<_>>(),
        "masses": e.masses.iter().map(format_rational).collect::<Vec<_>>(),
    })
}

pub fn parse_graph(bytes: &[u8]) -> Result<StarGraph> {
    let g: GraphJson = serde_json::from_slice(bytes).map_err(schema)?;
    let m = g.central_mass.get("central_mass")?;
    let edges = g
        .edges
        .iter()
        .enumerate()
        .map(|(i, e)| edge_from(e, &format!("edges[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    match (g.root.as_str(), &g.main_edge) {
        ("center", None) => StarGraph::center(edges, m),
        ("center", Some(_)) => Err(Error::Schema("main_edge is only allowed with root \"pendant\"".into())),
        ("pendant", Some(me)) => StarGraph::pendant(edge_from(me, "main_edge")?, edges, m),
        ("pendant", None) => Err(Error::Schema("root \"pendant\" requires main_edge".into())),
        (other, _) => Err(Error::Schema(format!("root: expected \"center\" or \"pendant\", got {other:?}"))),
    }
}

pub fn graph_to_json(g: &StarGraph) -> Value {
    let mut v = json!({
        "root": match g.root { Root::Center => "center", Root::Pendant => "pendant" },
        "central_mass": format_rational(&g.central_mass),
    });
    if let Some(me) = &g.main_edge {
        v["main_edge"] = edge_json(me);
    }
    v["edges"] = Value::Array(g.edges.iter().map(edge_json).collect());
    v
}

pub fn serialize_graph(g: &StarGraph) -> Vec<u8> {
    to_pretty(&graph_to_json(g))
}

pub fn parse_spectra(bytes: &[u8]) -> Result<SpectrumPair> {
    let s: SpectraJson = serde_json::from_slice(bytes).map_err(schema)?;
    let conv = |v: &[EntryJson], name: &str| -> Result<Multiset> {
        v.iter()
            .enumerate()
            .map(|(i, e)| Ok((e.value.get(&format!("{name}[{i}].value"))?, e.mult)))
            .collect()
    };
    SpectrumPair::new(conv(&s.neumann_squared, "neumann_squared")?, conv(&s.dirichlet_squared, "dirichlet_squared")?)
}

fn multiset_json(v: &Multiset) -> Value {
    Value::Array(v.iter().map(|(x, m)| json!({"value": format_rational(x), "mult": m})).collect())
}

pub fn spectra_to_json(s: &SpectrumPair) -> Value {
    json!({
        "neumann_squared": multiset_json(&s.neumann_sq),
        "dirichlet_squared": multiset_json(&s.dirichlet_sq),
    })
}

pub fn serialize_spectra(s: &SpectrumPair) -> Vec<u8> {
    to_pretty(&spectra_to_json(s))
}

pub fn parse_plan(bytes: &[u8]) -> Result<ReconstructionPlan> {
    let p: PlanJson = serde_json::from_slice(bytes).map_err(schema)?;
    let residue_split = match p.residue_split {
        None => None,
        Some(m) => Some(
            m.iter()
                .map(|(k, v)| {
                    let pole = parse_rational(k).map_err(|e| Error::Schema(format!("residue_split key: {}", e.message())))?;
                    Ok((pole, rats(v, &format!("residue_split[{k}]"))?))
                })
                .collect::<Result<BTreeMap<_, _>>>()?,
        ),
    };
    let plan = ReconstructionPlan { partition: p.partition, residue_split };
    plan.check()?;
    Ok(plan)
}

pub fn plan_to_json(p: &ReconstructionPlan) -> Value {
    let mut v = json!({});
    if let Some(part) = &p.partition {
        v["partition"] = json!(part);
    }
    if let Some(split) = &p.residue_split {
        let m: serde_json::Map<String, Value> = split
            .iter()
            .map(|(k, fr)| (format_rational(k), json!(fr.iter().map(format_rational).collect::<Vec<_>>())))
            .collect();
        v["residue_split"] = Value::Object(m);
    }
    v
}

pub fn serialize_plan(p: &ReconstructionPlan) -> Vec<u8> {
    to_pretty(&plan_to_json(p))
}

pub fn to_pretty(v: &Value) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(v).expect("JSON values serialise");
    out.push(b'\n');
    out
}

/// How computed spectra are rendered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputMode {
    /// Exact rationals, isolating intervals for irrational values.
    #[default]
    Exact,
    /// Decimal approximations with the given number of digits.
    Decimal(usize),
    /// Frequencies `±√z` as decimals with the given number of digits.
    Frequency(usize),
}

/// JSON rendering of a computed root list.
pub fn root_list_json(list: &RootList, mode: OutputMode) -> Value {
    let entries = list.roots().iter().map(|r| {
        let mult = r.multiplicity();
        match mode {
            OutputMode::Exact => match r.value() {
                RootValue::Exact(v) => json!({"value": format_rational(v), "mult": mult}),
                RootValue::Interval(iv) => json!({
                    "interval": [format_rational(&iv.lo), format_rational(&iv.hi)],
                    "approx": r.approx(12),
                    "mult": mult,
                }),
            },
            OutputMode::Decimal(k) => json!({"approx": r.approx(k), "mult": mult}),
            OutputMode::Frequency(k) => {
                let f = sqrt_decimal(r, k);
                json!({"frequencies": [format!("-{f}"), f], "mult": mult})
            }
        }
    });
    Value::Array(entries.collect())
}

/// Decimal `√x` for a positive real root `x`, correct to `k` digits.
fn sqrt_decimal(r: &crate::numeric::RealRoot, k: usize) -> String {
    let mut x = r.clone();
    let tol = Rational::new(1.into(), num_traits::pow(num_bigint::BigInt::from(10), 2 * k + 4));
    x.refine(&tol);
    let mid = (x.lo() + x.hi()) / Rational::from_integer(2.into());
    // Integer square root of mid * 10^(2k+4), then drop two guard digits.
    let scale = num_traits::pow(num_bigint::BigInt::from(10), 2 * k + 4);
    let n = (mid * Rational::from_integer(scale)).floor().to_integer();
    let s = if n.is_zero() { n } else { n.sqrt() };
    let v = Rational::new(s, num_traits::pow(num_bigint::BigInt::from(10), k + 2));
    crate::numeric::rational::format_decimal(&v, k)
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l: Vec<_> = self.lengths.iter().map(format_rational).collect();
        let m: Vec<_> = self.masses.iter().map(format_rational).collect();
        write!(f, "lengths [{}] masses [{}]", l.join(", "), m.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, ratio};

    const EXAMPLE: &str = r#"{
      "root": "pendant",
      "central_mass": "0",
      "main_edge": {"lengths": ["1", "1"], "masses": ["1"]},
      "edges": [
        {"lengths": ["4/3", "2/3"], "masses": ["9/8"]},
        {"lengths": ["1/3", "2/3"], "masses": ["9/4"]}
      ]
    }"#;

    #[test]
    fn parses_pendant_graph() {
        let g = parse_graph(EXAMPLE.as_bytes()).unwrap();
        let me = g.main_edge().unwrap();
        assert_eq!(me.lengths(), &[int(1), int(1)]);
        assert_eq!(me.masses(), &[int(1)]);
        assert_eq!(g.q(), 3);
        assert_eq!(g.mass_count(), 3);
        assert_eq!(parse_graph(&serialize_graph(&g)).unwrap(), g);
    }

    #[test]
    fn edge_shapes() {
        let e: EdgeJson = serde_json::from_str(r#"{"lengths":["1"],"masses":[]}"#).unwrap();
        assert_eq!(edge_from(&e, "e").unwrap().n(), 0);
        let bad: EdgeJson = serde_json::from_str(r#"{"lengths":["1"],"masses":["1"]}"#).unwrap();
        assert_eq!(edge_from(&bad, "e").unwrap_err().code(), "E_INVARIANT");
    }

    #[test]
    fn schema_errors_carry_context() {
        let e = parse_graph(br#"{"root":"center","central_mass":"0","edges":[{"lengths":["x"],"masses":[]}]}"#)
            .unwrap_err();
        assert_eq!(e.code(), "E_SCHEMA");
        assert!(e.message().contains("edges[0].lengths[0]"), "{}", e.message());
        let e = parse_graph(b"{\"root\":\"center\",\n\"edges\":[]}").unwrap_err();
        assert_eq!(e.code(), "E_SCHEMA");
        assert!(e.message().contains("line 2"), "{}", e.message());
        let e = parse_graph(br#"{"root":"center","central_mass":"0","edges":[{"lengths":["1"],"masses":[]}]}"#)
            .unwrap_err();
        assert_eq!(e.code(), "E_INVARIANT");
    }

    #[test]
    fn spectra_round_trip_and_merge() {
        let s = parse_spectra(
            br#"{"neumann_squared":[{"value":"3/2","mult":1},{"value":"0.5","mult":1},{"value":"2","mult":1}],
                 "dirichlet_squared":[{"value":"2","mult":1},{"value":1,"mult":1},{"value":"2","mult":1}]}"#,
        )
        .unwrap();
        assert_eq!(s.neumann(), &vec![(ratio(1, 2), 1), (ratio(3, 2), 1), (int(2), 1)]);
        assert_eq!(s.dirichlet(), &vec![(int(1), 1), (int(2), 2)]);
        assert_eq!(parse_spectra(&serialize_spectra(&s)).unwrap(), s);
        let bad = parse_spectra(br#"{"neumann_squared":[{"value":"0","mult":1}],"dirichlet_squared":[]}"#);
        assert_eq!(bad.unwrap_err().code(), "E_INVARIANT");
    }

    #[test]
    fn plan_round_trip() {
        let p = parse_plan(br#"{"residue_split":{"2":["2/3","1/3"]}}"#).unwrap();
        assert_eq!(p, ReconstructionPlan::with_split(int(2), vec![ratio(2, 3), ratio(1, 3)]));
        assert_eq!(parse_plan(&serialize_plan(&p)).unwrap(), p);
        let q = parse_plan(br#"{"partition":[[0],[0,1]]}"#).unwrap();
        assert_eq!(q.partition, Some(vec![vec![0], vec![0, 1]]));
        assert_eq!(parse_plan(br#"{"residue_split":{"2":["1/2","1/3"]}}"#).unwrap_err().code(), "E_INVARIANT");
        assert_eq!(parse_plan(br#"{"partition":[[1,1]]}"#).unwrap_err().code(), "E_INVARIANT");
    }

    #[test]
    fn frequency_rendering() {
        let l = RootList::from_exact(&[(int(2), 1)]);
        let v = root_list_json(&l, OutputMode::Frequency(4));
        assert_eq!(v[0]["frequencies"], json!(["-1.4142", "1.4142"]));
        let d = root_list_json(&RootList::from_exact(&[(ratio(1, 3), 2)]), OutputMode::Decimal(3));
        assert_eq!(d, json!([{"approx": "0.333", "mult": 2}]));
    }
}
