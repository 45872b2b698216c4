//! Dense univariate polynomials over the rationals, lowest degree first.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, Rational};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `z`.
    pub fn z() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    /// `z - r`.
    pub fn linear_root(r: &Rational) -> Self {
        Self::new(vec![-r.clone(), Rational::one()])
    }

    /// `1 - z/v`, the factor vanishing at `v` with value 1 at the origin.
    pub fn unit_factor(v: &Rational) -> Result<Self> {
        if v.is_zero() {
            return Err(Error::DivZero("factor 1 - z/v with v = 0".into()));
        }
        Ok(Self::new(vec![Rational::one(), -v.recip()]))
    }

    pub fn from_i64(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as 0.
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial { coeffs }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.leading().recip())
    }

    /// Rescales so that the value at the origin is 1; fails when it is 0.
    pub fn unit_at_zero(&self) -> Result<Self> {
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return Err(Error::DivZero("polynomial vanishes at 0".into()));
        }
        Ok(self.scale(&c0.recip()))
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn div_rem(&self, d: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        let dd = d
            .degree()
            .ok_or_else(|| Error::DivZero("division by the zero polynomial".into()))?;
        let lead_inv = d.leading().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Quotient of a division known to be exact.
    pub fn exact_div(&self, d: &Polynomial) -> Result<Polynomial> {
        let (q, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return Err(Error::Invariant(format!("{d} does not divide {self}")));
        }
        Ok(q)
    }

    pub fn rem(&self, d: &Polynomial) -> Result<Polynomial> {
        Ok(self.div_rem(d)?.1)
    }

    pub fn divides(&self, p: &Polynomial) -> Result<bool> {
        Ok(p.rem(self)?.is_zero())
    }

    /// Positive rational multiple with coprime integer coefficients.
    /// `(c, P)` with `self = c P`, `P` primitive with integer coefficients.
    fn content_split(&self) -> (Rational, Vec<BigInt>) {
        let lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() {
            return (Rational::zero(), ints);
        }
        let prim = ints.into_iter().map(|c| c / &g).collect();
        (Rational::new(g, lcm), prim)
    }

    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|c| c / &g).collect()
    }

    /// Polynomial with the roots reflected through the origin, `p(-z)`.
    pub fn reflect(&self) -> Polynomial {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    pub fn is_proportional_to(&self, other: &Polynomial) -> Option<Rational> {
        if self.is_zero() || other.is_zero() || self.degree() != other.degree() {
            return None;
        }
        let c = self.leading() / other.leading();
        (other.scale(&c) == *self).then_some(c)
    }
}

/// Exact sign of a polynomial given by integer coefficients at a rational point.
pub(crate) fn sign_at_int(coeffs: &[BigInt], x: &Rational) -> Sign {
    if coeffs.is_empty() {
        return Sign::NoSign;
    }
    // Homogenised Horner: sum c_i p^i q^(n-i) has the sign of p(x) since q > 0.
    let (p, q) = (x.numer(), x.denom());
    let mut acc = BigInt::zero();
    let mut qpow = BigInt::one();
    for c in coeffs.iter().rev() {
        acc = acc * p + c * &qpow;
        qpow *= q;
    }
    acc.sign()
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                if mag.is_integer() {
                    write!(f, "{}", format_rational(&mag))?;
                } else {
                    write!(f, "({})", format_rational(&mag))?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        // Convolve primitive integer parts; one rational normalisation per coefficient.
        let (ca, a) = self.content_split();
        let (cb, b) = rhs.content_split();
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        let c = ca * cb;
        Polynomial::new(out.into_iter().map(|v| Rational::new(v * c.numer(), c.denom().clone())).collect())
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: &Polynomial) -> Polynomial {
                (&self).$m(rhs)
            }
        }
        impl $tr<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

fn trim_int(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

fn primitive_int(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() || g.is_one() {
        return v;
    }
    v.into_iter().map(|c| c / &g).collect()
}

/// Primitive part of `lc(b)^k a mod b` over the integers, lowest degree
/// first, together with whether `lc(b)^k` was negative.
pub(crate) fn pseudo_remainder(a: &[BigInt], b: &[BigInt]) -> (Vec<BigInt>, bool) {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    trim_int(&mut r);
    let mut flipped = false;
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for x in r.iter_mut() {
            *x *= lb;
        }
        for (i, c) in b.iter().enumerate() {
            r[i + dr - db] -= &lr * c;
        }
        trim_int(&mut r);
        if lb.is_negative() {
            flipped = !flipped;
        }
        r = primitive_int(r);
    }
    (r, flipped)
}

/// Monic greatest common divisor; `gcd(0, 0)` is an error.
pub fn poly_gcd(p: &Polynomial, q: &Polynomial) -> Result<Polynomial> {
    if p.is_zero() && q.is_zero() {
        return Err(Error::DivZero("gcd of two zero polynomials".into()));
    }
    let (mut a, mut b) = (p.primitive_integer(), q.primitive_integer());
    trim_int(&mut a);
    trim_int(&mut b);
    while !b.is_empty() {
        let (r, _) = pseudo_remainder(&a, &b);
        a = b;
        b = r;
    }
    let g = Polynomial::new(a.into_iter().map(Rational::from_integer).collect());
    Ok(g.monic())
}

/// Yun's algorithm. Factors are monic, square-free and pairwise coprime; the
/// product of `f^k` equals `p` up to its leading coefficient. Constant factors
/// are omitted.
pub fn squarefree_factor(p: &Polynomial) -> Result<Vec<(Polynomial, usize)>> {
    if p.is_zero() {
        return Err(Error::DivZero("square-free factorisation of 0".into()));
    }
    let mut out = Vec::new();
    if p.deg0() == 0 {
        return Ok(out);
    }
    let p = p.monic();
    let dp = p.derivative();
    let a0 = poly_gcd(&p, &dp)?;
    let mut b = p.exact_div(&a0)?;
    let mut c = dp.exact_div(&a0)?;
    let mut d = &c - &b.derivative();
    let mut k = 1;
    while b.deg0() > 0 {
        let a = poly_gcd(&b, &d)?;
        if a.deg0() > 0 {
            out.push((a.clone(), k));
        }
        b = b.exact_div(&a)?;
        c = d.exact_div(&a)?;
        d = &c - &b.derivative();
        k += 1;
    }
    Ok(out)
}

/// Monic square-free part, the product of the distinct irreducible factors.
pub fn squarefree_part(p: &Polynomial) -> Result<Polynomial> {
    Ok(squarefree_factor(p)?
        .into_iter()
        .fold(Polynomial::one(), |acc, (f, _)| &acc * &f))
}

/// Inverse of `a` modulo `m`; requires `gcd(a, m) = 1`.
pub fn poly_inv_mod(a: &Polynomial, m: &Polynomial) -> Result<Polynomial> {
    if m.deg0() == 0 {
        return Ok(Polynomial::zero());
    }
    // Invariant: s_i * a ≡ r_i (mod m).
    let (mut r0, mut r1) = (m.clone(), a.rem(m)?);
    let (mut s0, mut s1) = (Polynomial::zero(), Polynomial::one());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1)?;
        let s = &s0 - &(&q * &s1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if r0.deg0() != 0 {
        return Err(Error::DivZero(format!("{a} is not invertible modulo {m}")));
    }
    s0.scale(&r0.leading().recip()).rem(m)
}
