//! Stieltjes continued fractions
//! `f(z) = a0 + 1/(-b1 z + 1/(a1 + 1/(-b2 z + ... + 1/a_p)))`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::function::RationalFunction;
use crate::error::{Error, Result};
use crate::numeric::{format_rational, Polynomial, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StieltjesCF {
    a: Vec<Rational>,
    b: Vec<Rational>,
}

impl StieltjesCF {
    /// Checks `a0 >= 0`, `a_k > 0`, `b_k > 0` and `len(a) = len(b) + 1`.
    pub fn new(a: Vec<Rational>, b: Vec<Rational>) -> Result<Self> {
        if a.len() != b.len() + 1 {
            return Err(Error::Invariant(format!(
                "continued fraction needs len(a) = len(b) + 1, got {} and {}",
                a.len(),
                b.len()
            )));
        }
        if a[0].is_negative() {
            return Err(Error::Invariant("a0 must be nonnegative".into()));
        }
        if let Some(k) = a.iter().skip(1).position(|x| !x.is_positive()) {
            return Err(Error::Invariant(format!("a{} must be positive", k + 1)));
        }
        if let Some(k) = b.iter().position(|x| !x.is_positive()) {
            return Err(Error::Invariant(format!("b{} must be positive", k + 1)));
        }
        if b.is_empty() && a[0].is_zero() {
            return Err(Error::Invariant("the zero function has no expansion".into()));
        }
        Ok(StieltjesCF { a, b })
    }

    pub fn a(&self) -> &[Rational] {
        &self.a
    }

    pub fn b(&self) -> &[Rational] {
        &self.b
    }

    /// Depth `p`, the number of linear levels.
    pub fn depth(&self) -> usize {
        self.b.len()
    }

    /// Value at the origin, `Σ a_k`.
    pub fn value_at_zero(&self) -> Rational {
        self.a.iter().sum()
    }
}

fn trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

/// Both polynomials scaled by one positive constant to coprime integer coefficients.
fn joint_integer(n: &Polynomial, d: &Polynomial) -> (Vec<BigInt>, Vec<BigInt>) {
    let lcm = n.coeffs().iter().chain(d.coeffs()).fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let conv = |p: &Polynomial| -> Vec<BigInt> { p.coeffs().iter().map(|c| c.numer() * (&lcm / c.denom())).collect() };
    joint_primitive(conv(n), conv(d))
}

fn joint_primitive(mut n: Vec<BigInt>, mut d: Vec<BigInt>) -> (Vec<BigInt>, Vec<BigInt>) {
    trim(&mut n);
    trim(&mut d);
    let g = n.iter().chain(&d).fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() && !g.is_one() {
        n.iter_mut().for_each(|c| *c /= &g);
        d.iter_mut().for_each(|c| *c /= &g);
    }
    (n, d)
}

/// `x * u - y * v`, lowest degree first, with `v` optionally shifted by one.
fn combine(x: &BigInt, u: &[BigInt], y: &BigInt, v: &[BigInt], shift: usize) -> Vec<BigInt> {
    let len = u.len().max(v.len() + shift);
    let mut out = vec![BigInt::zero(); len];
    for (i, c) in u.iter().enumerate() {
        out[i] += x * c;
    }
    for (i, c) in v.iter().enumerate() {
        out[i + shift] -= y * c;
    }
    trim(&mut out);
    out
}

/// Alternating extraction; a nonpositive coefficient or a broken degree
/// pattern means the input is not a rational S0 function. Runs fraction-free
/// on an integer pair `(n, d)` carrying a common positive scale.
pub fn cf_expand(f: &RationalFunction) -> Result<StieltjesCF> {
    if f.is_zero() {
        return Err(Error::NotS0("the zero function".into()));
    }
    let mut ak = match f.value_at_infinity() {
        Some(v) if !v.is_negative() => v,
        Some(v) => return Err(Error::NotS0(format!("a0 = {v} is negative"))),
        None => return Err(Error::NotS0("pole at infinity".into())),
    };
    let (mut n, mut d) = joint_integer(f.num(), f.den());
    let (mut a, mut b) = (Vec::new(), Vec::new());
    loop {
        // (r, d) scaled by lc(d): r = n - a_k d
        let (r, dd) = if ak.is_zero() {
            (n, d)
        } else {
            let (ln, ld) = (n.last().unwrap().clone(), d.last().unwrap().clone());
            let r = combine(&ld, &n, &ln, &d, 0);
            let dd = d.iter().map(|c| c * &ld).collect::<Vec<_>>();
            (r, dd)
        };
        a.push(ak);
        if r.is_empty() {
            break;
        }
        let k = b.len() + 1;
        if dd.len() != r.len() + 1 {
            return Err(Error::NotS0(format!("degree pattern breaks at level {k}")));
        }
        let (lr, ld) = (r.last().unwrap().clone(), dd.last().unwrap().clone());
        let bk = -Rational::new(ld.clone(), lr.clone());
        if !bk.is_positive() {
            return Err(Error::NotS0(format!("b{k} = {} is not positive", format_rational(&bk))));
        }
        // d' = d + b_k z r, scaled jointly with r by lc(r)
        let d2 = combine(&lr, &dd, &ld, &r, 1);
        let r2: Vec<BigInt> = r.iter().map(|c| c * &lr).collect();
        let q0 = if d2.len() == r2.len() {
            Rational::new(d2.last().unwrap().clone(), r2.last().unwrap().clone())
        } else {
            Rational::zero()
        };
        if !q0.is_positive() {
            return Err(Error::NotS0(format!("a{k} is not positive")));
        }
        b.push(bk);
        (n, d) = joint_primitive(r2, d2);
        ak = q0.recip();
    }
    StieltjesCF::new(a, b).map_err(|e| Error::NotS0(e.message()))
}

/// Folds from the innermost level outward.
pub fn cf_to_ratfun(c: &StieltjesCF) -> RationalFunction {
    let p = c.depth();
    let mut n = Polynomial::constant(c.a[p].clone());
    let mut d = Polynomial::one();
    for k in (1..=p).rev() {
        // a_{k-1} + 1/(-b_k z + d/n) = a_{k-1} + n/(-b_k z n + d)
        let nd = &n.shift(1).scale(&-&c.b[k - 1]) + &d;
        let nn = &nd.scale(&c.a[k - 1]) + &n;
        n = nn;
        d = nd;
    }
    RationalFunction::new(&n, &d).expect("continued fraction denominators never vanish")
}

/// The `i`-th tail `(a_i..a_p; b_{i+1}..b_p)`.
pub fn cf_tail(c: &StieltjesCF, i: usize) -> Result<StieltjesCF> {
    if i > c.depth() {
        return Err(Error::Range(format!("tail {i} of a depth-{} fraction", c.depth())));
    }
    Ok(StieltjesCF { a: c.a[i..].to_vec(), b: c.b[i..].to_vec() })
}

#[derive(Serialize, Deserialize)]
struct CfJson {
    a: Vec<String>,
    b: Vec<String>,
}

impl Serialize for StieltjesCF {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CfJson {
            a: self.a.iter().map(format_rational).collect(),
            b: self.b.iter().map(format_rational).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StieltjesCF {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = CfJson::deserialize(d)?;
        let parse = |v: &[String]| -> std::result::Result<Vec<Rational>, D::Error> {
            v.iter()
                .map(|s| crate::numeric::parse_rational(s).map_err(|e| D::Error::custom(e.message())))
                .collect()
        };
        StieltjesCF::new(parse(&raw.a)?, parse(&raw.b)?).map_err(|e| D::Error::custom(e.message()))
    }
}
