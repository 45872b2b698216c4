use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::{poly_gcd, Polynomial, Rational};

/// Reduced quotient `num/den` with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

/// Canonical form of `num/den` plus the monic common factor that was cancelled.
pub fn ratfun_normalize(num: &Polynomial, den: &Polynomial) -> Result<(RationalFunction, Polynomial)> {
    if den.is_zero() {
        return Err(Error::DivZero("rational function with zero denominator".into()));
    }
    let g = poly_gcd(num, den)?;
    let n = num.exact_div(&g)?;
    let d = den.exact_div(&g)?;
    let lc = d.leading().recip();
    Ok((RationalFunction { num: n.scale(&lc), den: d.scale(&lc) }, g))
}

impl RationalFunction {
    pub fn new(num: &Polynomial, den: &Polynomial) -> Result<Self> {
        Ok(ratfun_normalize(num, den)?.0)
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction { num: p, den: Polynomial::one() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::DivZero(format!("pole at {x}")));
        }
        Ok(self.num.eval(x) / d)
    }

    /// Limit at infinity when finite.
    pub fn value_at_infinity(&self) -> Option<Rational> {
        match (self.num.degree(), self.den.deg0()) {
            (None, _) => Some(Rational::zero()),
            (Some(n), d) if n < d => Some(Rational::zero()),
            (Some(n), d) if n == d => Some(self.num.leading() / self.den.leading()),
            _ => None,
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivZero("reciprocal of the zero function".into()));
        }
        Self::new(&self.den, &self.num)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = &(&self.num * &o.den) + &(&o.num * &self.den);
        Self::new(&n, &(&self.den * &o.den)).expect("nonzero denominators")
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&(&self.num * &o.num), &(&self.den * &o.den)).expect("nonzero denominators")
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::from_poly(Polynomial::zero());
        }
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn is_positive_at(&self, x: &Rational) -> bool {
        self.eval(x).map(|v| v.is_positive()).unwrap_or(false)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Polynomial::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, ratio};

    #[test]
    fn normalize_example_reduces_and_records_common_factor() {
        let u = |v: i64| Polynomial::unit_factor(&int(v)).unwrap();
        let uq = |n: i64, d: i64| Polynomial::unit_factor(&ratio(n, d)).unwrap();
        let num = u(1) * u(2).pow(2);
        let den = uq(1, 2) * uq(3, 2) * u(2);
        let (f, common) = ratfun_normalize(&num, &den).unwrap();
        assert_eq!(common, Polynomial::from_i64(&[-2, 1]));
        // Up to a constant: z^2 - 3z + 2 over z^2 - 2z + 3/4.
        assert_eq!(
            *f.den(),
            Polynomial::new(vec![ratio(3, 4), int(-2), int(1)])
        );
        assert!(f.num().is_proportional_to(&Polynomial::from_i64(&[2, -3, 1])).is_some());
    }

    #[test]
    fn trivial_normalisations() {
        let p = Polynomial::from_i64(&[1, 2, 3]);
        let (f, c) = ratfun_normalize(&p, &Polynomial::one()).unwrap();
        assert_eq!((f.num(), f.den(), c), (&p, &Polynomial::one(), Polynomial::one()));
        let lin = Polynomial::from_i64(&[-1, 1]);
        let (f, c) = ratfun_normalize(&lin, &lin).unwrap();
        assert_eq!(f, RationalFunction::constant(int(1)));
        assert_eq!(c, lin);
        assert_eq!(
            ratfun_normalize(&p, &Polynomial::zero()).unwrap_err().code(),
            "E_DIV_ZERO"
        );
    }

    #[test]
    fn field_operations() {
        let f = RationalFunction::new(&Polynomial::from_i64(&[1]), &Polynomial::from_i64(&[1, -1])).unwrap();
        let g = f.recip().unwrap();
        assert_eq!(f.mul(&g), RationalFunction::constant(int(1)));
        assert!(f.sub(&f).is_zero());
        assert_eq!(f.eval(&int(3)).unwrap(), ratio(-1, 2));
        assert_eq!(f.value_at_infinity(), Some(int(0)));
    }
}
