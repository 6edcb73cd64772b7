//! Reduced rational functions `num / den` of Laurent polynomials in `t = q^(1/2)`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::laurent::LaurentPoly;

/// A rational function in canonical form.
///
/// Invariants: `num` and `den` share no nonunit common factor; `den` is an
/// ordinary polynomial (lowest exponent 0) whose constant coefficient is 1.
/// Zero is `0 / 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RatFunc {
    pub fn zero() -> Self {
        Self {
            num: LaurentPoly::zero(),
            den: LaurentPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self {
            num: p,
            den: LaurentPoly::one(),
        }
    }

    pub fn from_i64(c: i64) -> Self {
        Self::from_poly(LaurentPoly::from_i64(c))
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    pub fn t_pow(e: i64) -> Self {
        Self::from_poly(LaurentPoly::t_pow(e))
    }

    /// Builds and reduces `num / den`. Panics if `den` is zero.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let (den_shift, den_poly) = den.strip_t_power();
        let mut num = num.shift(-den_shift);
        let mut den = den_poly;
        if !den.is_monomial() {
            let g = num.gcd(&den);
            if !g.is_constant() {
                num = num.exact_div(&g).expect("gcd divides numerator");
                den = den.exact_div(&g).expect("gcd divides denominator");
                let (s, d) = den.strip_t_power();
                num = num.shift(-s);
                den = d;
            }
        }
        let c = den.low_coeff();
        if !c.is_one() {
            let inv = c.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Self { num, den }
    }

    pub fn numer(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denom(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Returns the value as a rational constant if it does not depend on `q`.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.den.is_one() && self.num.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::new(self.den.clone(), self.num.clone()))
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Evaluates at real `t = sqrt(q)`.
    pub fn eval_t(&self, t: f64) -> f64 {
        self.num.eval_t(t) / self.den.eval_t(t)
    }

    /// Evaluates at `q`.
    pub fn eval_q(&self, q: f64) -> f64 {
        self.eval_t(q.sqrt())
    }

    /// Value at `q = 1`; `None` when the reduced function has a pole there.
    pub fn eval_at_one(&self) -> Option<BigRational> {
        let d = self.den.eval_at_one();
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval_at_one() / d)
        }
    }

    /// Substitutes `q -> 1/q`.
    pub fn reflect(&self) -> Self {
        Self::new(self.num.reflect(), self.den.reflect())
    }
}

impl Add<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone());
        }
        RatFunc::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: RatFunc) -> RatFunc {
        &self + &rhs
    }
}

impl Sub<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: RatFunc) -> RatFunc {
        &self - &rhs
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl Mul<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: RatFunc) -> RatFunc {
        &self * &rhs
    }
}

impl Div<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self * &rhs.recip().expect("division by zero rational function")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "({})", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> LaurentPoly {
        LaurentPoly::t_pow(2 * n)
    }

    #[test]
    fn reduces_common_factors() {
        let f = RatFunc::new(q(1) - q(-1), q(1) - q(-1));
        assert!(f.is_one());
        let g = RatFunc::new(q(2) - q(-2), q(1) - q(-1));
        assert_eq!(g, RatFunc::from_poly(q(1) + q(-1)));
    }

    #[test]
    fn denominator_is_normalized() {
        let f = RatFunc::new(LaurentPoly::one(), (q(1) + LaurentPoly::one()).scale(&BigRational::from_integer(3.into())));
        assert_eq!(f.denom().low_coeff(), BigRational::one());
        assert_eq!(f.denom().low_exp(), 0);
        assert_eq!(f.to_string(), "(1/3)/(q+1)");
    }

    #[test]
    fn pole_at_one_is_reported() {
        let f = RatFunc::new(LaurentPoly::one(), q(1) - q(-1));
        assert!(f.eval_at_one().is_none());
    }
}
