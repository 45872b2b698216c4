//! Partial fractions `f(z) = -A0 z + Σ A_i/(z - c_i) + B` with simple positive
//! poles and positive residues.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use super::function::RationalFunction;
use crate::error::{Error, Result};
use crate::numeric::{isolate_real_roots, poly_gcd, poly_inv_mod, Domain, Polynomial, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFractions {
    pub a0: Rational,
    /// `(pole, residue)`, poles ascending.
    pub terms: Vec<(Rational, Rational)>,
    pub b: Rational,
}

impl PartialFractions {
    pub fn reassemble(&self) -> RationalFunction {
        let lin = Polynomial::new(vec![self.b.clone(), -self.a0.clone()]);
        self.terms.iter().fold(RationalFunction::from_poly(lin), |acc, (c, r)| {
            let t = RationalFunction::new(&Polynomial::constant(r.clone()), &Polynomial::linear_root(c))
                .expect("linear denominator");
            acc.add(&t)
        })
    }

    pub fn residue_at(&self, pole: &Rational) -> Option<&Rational> {
        self.terms.iter().find(|(c, _)| c == pole).map(|(_, r)| r)
    }
}

/// Splits off the polynomial part `-A0 z + B` and returns it with the proper
/// remainder `P` over the monic denominator.
pub(crate) fn split_polynomial_part(f: &RationalFunction) -> Result<(Rational, Rational, Polynomial)> {
    let (q, p) = f.num().div_rem(f.den())?;
    if q.deg0() > 1 {
        return Err(Error::BadShape(format!("polynomial part {q} has degree above one")));
    }
    let a0 = -q.coeff(1);
    if a0.is_negative() {
        return Err(Error::BadShape(format!("coefficient of -z is negative ({a0})")));
    }
    Ok((a0, q.coeff(0), p))
}

pub fn partial_fractions(f: &RationalFunction) -> Result<PartialFractions> {
    let (a0, b, p) = split_polynomial_part(f)?;
    let q = f.den();
    let dq = q.derivative();
    if q.deg0() > 0 && poly_gcd(q, &dq)?.deg0() > 0 {
        return Err(Error::BadShape("multiple pole".into()));
    }
    let roots = isolate_real_roots(q, &Domain::all())?;
    if roots.total_multiplicity() < q.deg0() {
        return Err(Error::BadShape("nonreal poles".into()));
    }
    let mut terms = Vec::new();
    for r in roots.roots() {
        if r.cmp_rational(&Rational::zero()) != Ordering::Greater {
            return Err(Error::BadShape("pole is not positive".into()));
        }
        let c = r
            .as_rational()
            .ok_or_else(|| Error::IrrationalPole(format!("pole of {} is irrational", r.factor())))?
            .clone();
        let res = p.eval(&c) / dq.eval(&c);
        if !res.is_positive() {
            return Err(Error::BadShape(format!("residue {res} at pole {c} is not positive")));
        }
        terms.push((c, res));
    }
    Ok(PartialFractions { a0, terms, b })
}

/// Numerator `N` with `N/D = Σ_{D(c)=0} (P(c)/Q'(c)) / (z - c)` for a monic
/// square-free factor `D` of the square-free `Q`. Works for irrational poles.
pub fn block_principal_part(p: &Polynomial, q: &Polynomial, d: &Polynomial) -> Result<Polynomial> {
    // With Q = D E, Q'(c) = D'(c) E(c) at the zeros of D, so N = P / E mod D.
    let e = q.exact_div(d)?;
    let p = p.rem(d)?;
    if e.deg0() == 0 {
        return Ok(p.scale(&e.coeff(0).recip()));
    }
    let inv = poly_inv_mod(&e, d)?;
    (&p * &inv).rem(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::int;

    #[test]
    fn example_psi() {
        let f = RationalFunction::new(&Polynomial::from_i64(&[3, -3]), &Polynomial::from_i64(&[2, -1])).unwrap();
        let pf = partial_fractions(&f).unwrap();
        assert_eq!(pf, PartialFractions { a0: int(0), terms: vec![(int(2), int(3))], b: int(3) });
        assert!(f.sub(&pf.reassemble()).is_zero());
    }

    #[test]
    fn with_linear_part() {
        let f = RationalFunction::from_poly(Polynomial::from_i64(&[0, -1])).add(
            &RationalFunction::new(&Polynomial::one(), &Polynomial::from_i64(&[-1, 1])).unwrap(),
        );
        let pf = partial_fractions(&f).unwrap();
        assert_eq!(pf, PartialFractions { a0: int(1), terms: vec![(int(1), int(1))], b: int(0) });
    }

    #[test]
    fn shape_errors() {
        let irr = RationalFunction::new(&Polynomial::one(), &Polynomial::from_i64(&[-2, 0, 1])).unwrap();
        assert_eq!(partial_fractions(&irr).unwrap_err().code(), "E_BAD_SHAPE");
        let irr_pos =
            RationalFunction::new(&Polynomial::from_i64(&[0, 1]), &Polynomial::from_i64(&[-2, 0, 1])).unwrap();
        assert_eq!(partial_fractions(&irr_pos).unwrap_err().code(), "E_BAD_SHAPE");
        let double = RationalFunction::new(&Polynomial::one(), &Polynomial::from_i64(&[-1, 1]).pow(2)).unwrap();
        assert_eq!(partial_fractions(&double).unwrap_err().code(), "E_BAD_SHAPE");
        let negres = RationalFunction::new(&Polynomial::from_i64(&[-1]), &Polynomial::from_i64(&[-1, 1])).unwrap();
        assert_eq!(partial_fractions(&negres).unwrap_err().code(), "E_BAD_SHAPE");
        // Two positive irrational poles with positive residues: 2z/(z^2 - 4z + 2).
        let pos = RationalFunction::new(&Polynomial::from_i64(&[0, 2]), &Polynomial::from_i64(&[2, -4, 1])).unwrap();
        assert_eq!(partial_fractions(&pos).unwrap_err().code(), "E_IRRATIONAL_POLE");
    }

    #[test]
    fn block_numerator_matches_rational_residues() {
        // f = 1/(z-1) + 2/(z-3) + 5/(z-4)
        let parts = [(int(1), int(1)), (int(3), int(2)), (int(4), int(5))];
        let f = parts.iter().fold(RationalFunction::from_poly(Polynomial::zero()), |acc, (c, r)| {
            acc.add(&RationalFunction::new(&Polynomial::constant(r.clone()), &Polynomial::linear_root(c)).unwrap())
        });
        let d = &Polynomial::linear_root(&int(1)) * &Polynomial::linear_root(&int(4));
        let n = block_principal_part(f.num(), f.den(), &d).unwrap();
        let expect = RationalFunction::new(&Polynomial::one(), &Polynomial::linear_root(&int(1)))
            .unwrap()
            .add(&RationalFunction::new(&Polynomial::constant(int(5)), &Polynomial::linear_root(&int(4))).unwrap());
        assert_eq!(RationalFunction::new(&n, &d).unwrap(), expect);
    }
}
