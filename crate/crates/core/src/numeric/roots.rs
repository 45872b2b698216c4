//! Real-root isolation by Sturm sequences on square-free factors.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{poly_gcd, pseudo_remainder, sign_at_int, squarefree_factor, Polynomial};
use super::rational::{format_decimal, pow2_neg, Rational};
use crate::error::{Error, Result};

/// Open interval `(lo, hi)` with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IsolatingInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl IsolatingInterval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        IsolatingInterval { lo, hi }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RootValue {
    Exact(Rational),
    Interval(IsolatingInterval),
}

/// Open search domain; `None` bounds are infinite.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Domain {
    pub lo: Option<Rational>,
    pub hi: Option<Rational>,
}

impl Domain {
    pub fn all() -> Self {
        Domain::default()
    }

    /// `(0, ∞)`, where every squared eigenvalue lives.
    pub fn positive() -> Self {
        Domain { lo: Some(Rational::zero()), hi: None }
    }
}

/// Square-free polynomial in primitive integer form together with its Sturm chain.
#[derive(Clone, Debug)]
struct Sturm {
    chain: Vec<Vec<BigInt>>,
}

impl Sturm {
    fn new(f: &Polynomial) -> Result<Self> {
        let mut chain = vec![f.primitive_integer(), f.derivative().primitive_integer()];
        loop {
            let n = chain.len();
            if chain[n - 1].len() <= 1 {
                break;
            }
            let r = negated_pseudo_remainder(&chain[n - 2], &chain[n - 1]);
            if r.is_empty() {
                break;
            }
            chain.push(r);
        }
        Ok(Sturm { chain })
    }

    fn f(&self) -> &[BigInt] {
        &self.chain[0]
    }

    fn variations(signs: impl Iterator<Item = Sign>) -> usize {
        let mut last = Sign::NoSign;
        let mut v = 0;
        for s in signs.filter(|s| *s != Sign::NoSign) {
            if last != Sign::NoSign && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    fn variations_at(&self, x: Option<&Rational>, towards_plus: bool) -> usize {
        match x {
            Some(x) => Self::variations(self.chain.iter().map(|c| sign_at_int(c, x))),
            None => Self::variations(self.chain.iter().map(|c| {
                let lead = c.last().map(BigInt::sign).unwrap_or(Sign::NoSign);
                let odd = c.len() % 2 == 0;
                if towards_plus || !odd {
                    lead
                } else {
                    -lead
                }
            })),
        }
    }

    /// Distinct roots in the open interval `(a, b)`.
    fn count_open(&self, a: Option<&Rational>, b: Option<&Rational>) -> usize {
        let va = self.variations_at(a, false);
        let vb = self.variations_at(b, true);
        let at_b = b.is_some_and(|b| sign_at_int(self.f(), b) == Sign::NoSign);
        (va - vb) - usize::from(at_b)
    }
}

/// A positive multiple of `-(a mod b)`, computed without leaving the integers.
fn negated_pseudo_remainder(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let (r, flipped) = pseudo_remainder(a, b);
    if flipped {
        r
    } else {
        r.into_iter().map(|x| -x).collect()
    }
}

/// One distinct real root together with its square-free defining factor.
#[derive(Clone, Debug)]
pub struct RealRoot {
    value: RootValue,
    multiplicity: usize,
    factor: Polynomial,
    factor_int: Vec<BigInt>,
    /// Sign of the factor at the lower endpoint.
    lo_sign: Sign,
}

impl RealRoot {
    fn new(value: RootValue, multiplicity: usize, factor: &Polynomial) -> Self {
        let factor_int = factor.primitive_integer();
        let lo_sign = match &value {
            RootValue::Interval(iv) => sign_at_int(&factor_int, &iv.lo),
            RootValue::Exact(_) => Sign::NoSign,
        };
        RealRoot { value, multiplicity, factor: factor.clone(), factor_int, lo_sign }
    }

    pub fn exact(value: Rational, multiplicity: usize) -> Self {
        let f = Polynomial::linear_root(&value);
        Self::new(RootValue::Exact(value), multiplicity, &f)
    }

    pub fn value(&self) -> &RootValue {
        &self.value
    }

    pub fn multiplicity(&self) -> usize {
        self.multiplicity
    }

    pub fn with_multiplicity(mut self, m: usize) -> Self {
        self.multiplicity = m;
        self
    }

    /// Monic square-free polynomial with this root.
    pub fn factor(&self) -> &Polynomial {
        &self.factor
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match &self.value {
            RootValue::Exact(v) => Some(v),
            RootValue::Interval(_) => None,
        }
    }

    pub fn lo(&self) -> &Rational {
        match &self.value {
            RootValue::Exact(v) => v,
            RootValue::Interval(iv) => &iv.lo,
        }
    }

    pub fn hi(&self) -> &Rational {
        match &self.value {
            RootValue::Exact(v) => v,
            RootValue::Interval(iv) => &iv.hi,
        }
    }

    pub fn width(&self) -> Rational {
        self.hi() - self.lo()
    }

    fn sign_at(&self, x: &Rational) -> Sign {
        sign_at_int(&self.factor_int, x)
    }

    /// Narrows the interval to the side of `s` that holds the root.
    fn split_at(&mut self, s: &Rational) {
        let RootValue::Interval(iv) = &self.value else { return };
        if s <= &iv.lo || s >= &iv.hi {
            return;
        }
        let ss = self.sign_at(s);
        if ss == Sign::NoSign {
            self.value = RootValue::Exact(s.clone());
            return;
        }
        let next = if ss == self.lo_sign {
            IsolatingInterval::new(s.clone(), iv.hi.clone())
        } else {
            IsolatingInterval::new(iv.lo.clone(), s.clone())
        };
        self.value = RootValue::Interval(next);
    }

    pub fn bisect(&mut self) {
        if let RootValue::Interval(iv) = &self.value {
            let m = iv.midpoint();
            self.split_at(&m);
        }
    }

    pub fn refine(&mut self, width: &Rational) {
        while matches!(self.value, RootValue::Interval(_)) && &self.width() > width {
            self.bisect();
        }
    }

    /// Whether this root is a zero of `p`.
    pub fn is_root_of(&self, p: &Polynomial) -> bool {
        if p.is_zero() {
            return true;
        }
        match &self.value {
            RootValue::Exact(v) => p.eval(v).is_zero(),
            RootValue::Interval(iv) => {
                // gcd(p, factor) has no other zero inside the isolating interval.
                let Ok(h) = poly_gcd(p, &self.factor) else { return false };
                if h.deg0() == 0 {
                    return false;
                }
                let hi = h.primitive_integer();
                sign_at_int(&hi, &iv.lo) != sign_at_int(&hi, &iv.hi)
            }
        }
    }

    /// Multiplicity of this root as a zero of the nonzero `p`.
    pub fn multiplicity_in(&self, p: &Polynomial) -> usize {
        let mut rest = p.clone();
        let mut k = 0;
        while !rest.is_zero() && self.is_root_of(&rest) {
            let h = match &self.value {
                RootValue::Exact(v) => Polynomial::linear_root(v),
                RootValue::Interval(_) => poly_gcd(&rest, &self.factor).expect("nonzero"),
            };
            rest = rest.exact_div(&h).expect("common factor divides");
            k += 1;
        }
        k
    }

    /// Exact comparison with a rational number.
    pub fn cmp_rational(&self, c: &Rational) -> Ordering {
        if let RootValue::Exact(v) = &self.value {
            return v.cmp(c);
        }
        if c <= self.lo() {
            return Ordering::Greater;
        }
        if c >= self.hi() {
            return Ordering::Less;
        }
        let mut r = self.clone();
        r.split_at(c);
        match &r.value {
            RootValue::Exact(_) => Ordering::Equal,
            RootValue::Interval(iv) if &iv.lo == c => Ordering::Greater,
            RootValue::Interval(_) => Ordering::Less,
        }
    }

    /// Decimal approximation with `digits` fractional digits.
    pub fn approx(&self, digits: usize) -> String {
        let mut r = self.clone();
        let tol = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), digits + 2));
        r.refine(&tol);
        let mid = match &r.value {
            RootValue::Exact(v) => v.clone(),
            RootValue::Interval(iv) => iv.midpoint(),
        };
        format_decimal(&mid, digits)
    }

    pub fn to_f64(&self) -> f64 {
        self.approx(17).parse().unwrap_or(f64::NAN)
    }
}

impl PartialEq for RealRoot {
    /// Structural equality of representation, not of the algebraic value.
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
            && self.multiplicity == other.multiplicity
            && self.factor == other.factor
    }
}

impl Eq for RealRoot {}

/// Default refinement budget used before declaring a comparison unresolved.
pub fn default_budget() -> Rational {
    pow2_neg(64)
}

/// Exact ordering of two real algebraic numbers. Equality is decided through
/// the gcd of the defining factors; distinct values are separated by bisection
/// until both widths fall under `budget`, after which `E_UNRESOLVED` is raised.
pub fn compare_roots(a: &RealRoot, b: &RealRoot, budget: &Rational) -> Result<Ordering> {
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut equality_checked = false;
    loop {
        match (&a.value, &b.value) {
            (RootValue::Exact(x), RootValue::Exact(y)) => return Ok(x.cmp(y)),
            (RootValue::Exact(x), RootValue::Interval(_)) => return Ok(b.cmp_rational(x).reverse()),
            (RootValue::Interval(_), RootValue::Exact(y)) => return Ok(a.cmp_rational(y)),
            _ => {}
        }
        if a.hi() <= b.lo() {
            return Ok(Ordering::Less);
        }
        if b.hi() <= a.lo() {
            return Ok(Ordering::Greater);
        }
        if !equality_checked {
            equality_checked = true;
            let g = poly_gcd(&a.factor, &b.factor)?;
            if g.deg0() > 0 {
                let lo = a.lo().max(b.lo()).clone();
                let hi = a.hi().min(b.hi()).clone();
                if Sturm::new(&g)?.count_open(Some(&lo), Some(&hi)) > 0 {
                    return Ok(Ordering::Equal);
                }
            }
        }
        if &a.width() <= budget && &b.width() <= budget {
            return Err(Error::Unresolved(format!(
                "roots of {} and {} still overlap at width {}",
                a.factor,
                b.factor,
                budget
            )));
        }
        a.bisect();
        b.bisect();
    }
}

/// Ordering of two real algebraic numbers without a refinement budget.
/// Equal values are caught by the gcd test, so distinct ones always separate.
pub fn order_roots(a: &RealRoot, b: &RealRoot) -> Result<Ordering> {
    let mut budget = default_budget();
    loop {
        match compare_roots(a, b, &budget) {
            Err(Error::Unresolved(_)) => budget = &budget * &budget,
            r => return r,
        }
    }
}

/// Sorted distinct real roots with multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RootList {
    roots: Vec<RealRoot>,
}

impl RootList {
    pub fn from_sorted(roots: Vec<RealRoot>) -> Self {
        RootList { roots }
    }

    /// Builds the list for exact values, merging duplicates.
    pub fn from_exact(values: &[(Rational, usize)]) -> Self {
        let mut vs: Vec<(Rational, usize)> = Vec::new();
        let mut sorted = values.to_vec();
        sorted.sort();
        for (v, m) in sorted {
            match vs.last_mut() {
                Some((last, lm)) if *last == v => *lm += m,
                _ => vs.push((v, m)),
            }
        }
        RootList { roots: vs.into_iter().map(|(v, m)| RealRoot::exact(v, m)).collect() }
    }

    pub fn roots(&self) -> &[RealRoot] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    /// Each root repeated by its multiplicity.
    pub fn expanded(&self) -> Vec<&RealRoot> {
        self.roots
            .iter()
            .flat_map(|r| std::iter::repeat_n(r, r.multiplicity))
            .collect()
    }

    pub fn all_rational(&self) -> bool {
        self.roots.iter().all(|r| r.as_rational().is_some())
    }

    /// `(value, multiplicity)` when every root is rational.
    pub fn exact_values(&self) -> Option<Vec<(Rational, usize)>> {
        self.roots
            .iter()
            .map(|r| r.as_rational().map(|v| (v.clone(), r.multiplicity)))
            .collect()
    }
}

/// A power of two exceeding every root in absolute value.
fn cauchy_bound(f: &Polynomial) -> Rational {
    let lead = f.leading().abs();
    let max = f
        .coeffs()
        .iter()
        .map(|c| c.abs() / &lead)
        .max()
        .unwrap_or_else(Rational::zero);
    let bound = max + Rational::one();
    let mut p = Rational::one();
    while p < bound {
        p *= Rational::from_integer(2.into());
    }
    p
}

fn in_domain(x: &Rational, domain: &Domain) -> bool {
    domain.lo.as_ref().is_none_or(|l| x > l) && domain.hi.as_ref().is_none_or(|h| x < h)
}

/// Roots of a square-free polynomial in `domain`, each with multiplicity `mult`.
/// Rational roots are found exactly first; the rest are isolated by Sturm
/// bisection on the remaining factor, whose roots are all irrational.
fn isolate_squarefree(f: &Polynomial, mult: usize, domain: &Domain) -> Result<Vec<RealRoot>> {
    let bound = cauchy_bound(f);
    let ints = f.primitive_integer();
    let mut found = Vec::new();
    let mut rest = f.clone();
    for r in rational_roots(&ints, &bound) {
        rest = rest.exact_div(&Polynomial::linear_root(&r))?;
        if in_domain(&r, domain) {
            found.push(RealRoot::exact(r, mult));
        }
    }
    if rest.deg0() == 0 {
        return Ok(found);
    }
    let sturm = Sturm::new(&rest)?;
    let total = sturm.count_open(domain.lo.as_ref(), domain.hi.as_ref());
    let lo = match &domain.lo {
        Some(l) if l > &-&bound => l.clone(),
        _ => -bound.clone(),
    };
    let hi = match &domain.hi {
        Some(h) if h < &bound => h.clone(),
        _ => bound,
    };
    let ints = sturm.f().to_vec();
    let mut stack = vec![(lo, hi, total)];
    while let Some((a, b, n)) = stack.pop() {
        if n == 0 {
            continue;
        }
        let clean_ends = sign_at_int(&ints, &a) != Sign::NoSign && sign_at_int(&ints, &b) != Sign::NoSign;
        if n == 1 && clean_ends {
            found.push(RealRoot::new(RootValue::Interval(IsolatingInterval::new(a, b)), mult, &rest));
            continue;
        }
        let m = (&a + &b) / Rational::from_integer(2.into());
        let left = sturm.count_open(Some(&a), Some(&m));
        let right = sturm.count_open(Some(&m), Some(&b));
        stack.push((a, m.clone(), left));
        stack.push((m, b, right));
    }
    Ok(found)
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn eval_mod(c: &[u64], x: u64, p: u64) -> u64 {
    c.iter().rev().fold(0, |acc, &a| (acc * x + a) % p)
}

fn eval_big_mod(c: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    c.iter().rev().fold(BigInt::zero(), |acc, a| (acc * x + a).mod_floor(m))
}

/// All rational roots of a square-free primitive integer polynomial.
///
/// Every rational root `a/b` has `b | L` for the leading coefficient `L`, so
/// `L r` is an integer of size at most `L B`. Roots modulo a prime `p ∤ L` at
/// which `f` is separable lift uniquely to `p^k > 2 L B`, and the symmetric
/// residue of `L x` then recovers the candidate numerator.
fn rational_roots(f: &[BigInt], bound: &Rational) -> Vec<Rational> {
    let n = f.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![Rational::new(-f[0].clone(), f[1].clone())];
    }
    let lead = f[n].abs();
    let target = BigInt::from(2) * &lead * bound.ceil().to_integer() + BigInt::one();
    let df: Vec<BigInt> = f.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    let mut p = 1009u64;
    loop {
        p += 2;
        if !is_prime(p) {
            continue;
        }
        let pb = BigInt::from(p);
        if (&lead % &pb).is_zero() {
            continue;
        }
        let red = |c: &[BigInt]| -> Vec<u64> {
            c.iter().map(|a| a.mod_floor(&pb).to_u64().expect("reduced")).collect()
        };
        let (fp, dfp) = (red(f), red(&df));
        let roots: Vec<u64> = (0..p).filter(|&x| eval_mod(&fp, x, p) == 0).collect();
        if roots.iter().any(|&x| eval_mod(&dfp, x, p) == 0) {
            continue;
        }
        let mut out = Vec::new();
        for x0 in roots {
            let (mut x, mut m) = (BigInt::from(x0), pb.clone());
            while m < target {
                m = &m * &m;
                let fx = eval_big_mod(f, &x, &m);
                let dx = eval_big_mod(&df, &x, &m);
                let inv = dx.extended_gcd(&m).x;
                x = (x - fx * inv).mod_floor(&m);
            }
            let mut y = (&lead * &x).mod_floor(&m);
            if &y * 2 > m {
                y -= &m;
            }
            let cand = Rational::new(y, lead.clone());
            if sign_at_int(f, &cand) == Sign::NoSign {
                out.push(cand);
            }
        }
        out.sort();
        out.dedup();
        return out;
    }
}

/// Sorts roots coming from pairwise coprime factors, refining until their
/// intervals are disjoint.
fn sort_distinct(mut roots: Vec<RealRoot>) -> Vec<RealRoot> {
    loop {
        roots.sort_by(|x, y| x.lo().cmp(y.lo()).then_with(|| x.hi().cmp(y.hi())));
        let mut clean = true;
        for i in 1..roots.len() {
            if roots[i - 1].hi() > roots[i].lo() {
                clean = false;
                let (l, r) = roots.split_at_mut(i);
                let (x, y) = (&mut l[i - 1], &mut r[0]);
                match (x.as_rational().cloned(), y.as_rational().cloned()) {
                    (Some(c), None) => y.split_at(&c),
                    (None, Some(c)) => x.split_at(&c),
                    _ => {
                        x.bisect();
                        y.bisect();
                    }
                }
            }
        }
        if clean {
            return roots;
        }
    }
}

pub fn isolate_real_roots(p: &Polynomial, domain: &Domain) -> Result<RootList> {
    if p.is_zero() {
        return Err(Error::Invariant("the zero polynomial has no isolated roots".into()));
    }
    let mut all = Vec::new();
    for (f, m) in squarefree_factor(p)? {
        all.extend(isolate_squarefree(&f, m, domain)?);
    }
    Ok(RootList { roots: sort_distinct(all) })
}

/// Bisects `iv` against the square-free part of `p` until its width is at most
/// `width`; collapses to an exact point when a midpoint hits the root.
pub fn refine_root(p: &Polynomial, iv: &IsolatingInterval, width: &Rational) -> Result<RootValue> {
    if p.is_zero() {
        return Err(Error::NotIsolating("zero polynomial".into()));
    }
    let sf = super::poly::squarefree_part(p)?;
    let ints = sf.primitive_integer();
    let (sl, sh) = (sign_at_int(&ints, &iv.lo), sign_at_int(&ints, &iv.hi));
    if iv.lo >= iv.hi || sl == Sign::NoSign || sh == Sign::NoSign || sl == sh {
        return Err(Error::NotIsolating(format!(
            "no strict sign change of {sf} on ({}, {})",
            iv.lo, iv.hi
        )));
    }
    let mut r = RealRoot::new(RootValue::Interval(iv.clone()), 1, &sf);
    r.refine(width);
    Ok(r.value)
}
