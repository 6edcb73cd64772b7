//! Laurent polynomials with rational coefficients in the half-power variable
//! `t = q^(1/2)`.
//!
//! Exponents are stored in units of `t`, so `q^n` is the monomial `t^(2n)`.
//! The zero polynomial has no coefficients; every other value is trimmed so
//! that its first and last coefficients are nonzero.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<BigRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self {
            low: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_i64(c: i64) -> Self {
        Self::constant(BigRational::from_integer(c.into()))
    }

    /// `c * t^exp`.
    pub fn monomial(c: BigRational, exp: i64) -> Self {
        Self::from_coeffs(exp, vec![c])
    }

    /// `q^(half_exp / 2)`, i.e. `t^half_exp`.
    pub fn t_pow(exp: i64) -> Self {
        Self::monomial(BigRational::one(), exp)
    }

    /// Builds `sum_i coeffs[i] * t^(low + i)` and trims zeros.
    pub fn from_coeffs(low: i64, coeffs: Vec<BigRational>) -> Self {
        let mut p = Self { low, coeffs };
        p.trim();
        p
    }

    /// Convenience constructor from `(t-exponent, integer coefficient)` pairs.
    pub fn from_terms(terms: &[(i64, i64)]) -> Self {
        terms.iter().fold(Self::zero(), |acc, &(e, c)| {
            acc + Self::monomial(BigRational::from_integer(c.into()), e)
        })
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.low += lead_zeros as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.is_zero() || (self.low == 0 && self.coeffs.len() == 1)
    }

    /// Lowest exponent carrying a nonzero coefficient (0 for the zero polynomial).
    pub fn low_exp(&self) -> i64 {
        self.low
    }

    /// Highest exponent carrying a nonzero coefficient.
    pub fn high_exp(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    /// Span between highest and lowest exponent.
    pub fn span(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, exp: i64) -> BigRational {
        let idx = exp - self.low;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            BigRational::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    pub fn low_coeff(&self) -> BigRational {
        self.coeffs.first().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn lead_coeff(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    /// Iterates `(exponent, coefficient)` pairs with nonzero coefficients, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self {
            low: self.low + k,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            low: self.low,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Substitutes `t -> t^k` for a positive integer `k`.
    pub fn substitute_power(&self, k: i64) -> Self {
        assert!(k > 0, "substitution exponent must be positive");
        let mut out = Self::zero();
        for (e, c) in self.terms() {
            out = out + Self::monomial(c.clone(), e * k);
        }
        out
    }

    /// Substitutes `t -> 1/t`.
    pub fn reflect(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self {
            low: -self.high_exp(),
            coeffs,
        }
    }

    /// Drops the `t`-power offset, giving an ordinary polynomial with nonzero
    /// constant term (as a Laurent polynomial starting at exponent 0).
    pub fn strip_t_power(&self) -> (i64, Self) {
        if self.is_zero() {
            return (0, Self::zero());
        }
        (
            self.low,
            Self {
                low: 0,
                coeffs: self.coeffs.clone(),
            },
        )
    }

    /// Evaluates at real `t`.
    pub fn eval_t(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for (e, c) in self.terms() {
            acc += rat_to_f64(c) * t.powi(e as i32);
        }
        acc
    }

    /// Value at `t = 1`, i.e. the sum of coefficients.
    pub fn eval_at_one(&self) -> BigRational {
        self.coeffs
            .iter()
            .fold(BigRational::zero(), |acc, c| acc + c)
    }

    pub fn eval_rational(&self, t: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in self.terms() {
            acc += c * rat_pow(t, e);
        }
        acc
    }

    /// Polynomial division treating both operands as ordinary polynomials in
    /// `t` (after factoring out their lowest powers). Returns `(quotient,
    /// remainder)` with `self = quotient * rhs + remainder` up to the removed
    /// `t` offsets, which are restored on the quotient.
    pub fn div_rem_poly(&self, rhs: &Self) -> (Self, Self) {
        assert!(!rhs.is_zero(), "division by zero polynomial");
        let (a_shift, a) = self.strip_t_power();
        let (b_shift, b) = rhs.strip_t_power();
        let (q, r) = poly_div_rem(&a.coeffs, &b.coeffs);
        (
            Self::from_coeffs(a_shift - b_shift, q),
            Self::from_coeffs(a_shift, r),
        )
    }

    /// Exact division; `None` if `rhs` does not divide `self`.
    pub fn exact_div(&self, rhs: &Self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (q, r) = self.div_rem_poly(rhs);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Monic greatest common divisor of the polynomial parts (ignores
    /// `t`-power factors, which are units among Laurent polynomials).
    pub fn gcd(&self, rhs: &Self) -> Self {
        let (_, a) = self.strip_t_power();
        let (_, b) = rhs.strip_t_power();
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        let mut x = a.coeffs;
        let mut y = b.coeffs;
        if x.len() < y.len() {
            std::mem::swap(&mut x, &mut y);
        }
        while !y.is_empty() {
            let (_, r) = poly_div_rem(&x, &y);
            x = y;
            y = make_monic(r);
        }
        Self::from_coeffs(0, make_monic(x))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let lc = self.lead_coeff();
        self.scale(&lc.recip())
    }

    /// Gcd of all numerators over lcm of all denominators, positive.
    pub fn content(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in &self.coeffs {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        BigRational::new(num, den)
    }

    /// Exact polynomial square root, if one exists with positive leading
    /// coefficient.
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.low % 2 != 0 || self.coeffs.len() % 2 == 0 {
            return None;
        }
        let lead = self.lead_coeff();
        let root_lead = rat_sqrt(&lead)?;
        let n = (self.coeffs.len() - 1) / 2;
        // Determine root coefficients from the top down.
        let mut root = vec![BigRational::zero(); n + 1];
        root[n] = root_lead.clone();
        let two_lead = &root_lead + &root_lead;
        for k in (0..n).rev() {
            // coefficient of t^(n + k) in root^2 (relative to the poly start)
            let target = self.coeffs[n + k].clone();
            let mut acc = BigRational::zero();
            for i in (k + 1)..=n {
                let j = n + k - i;
                if j > k && j <= n {
                    acc += &root[i] * &root[j];
                }
            }
            root[k] = (target - acc) / &two_lead;
        }
        let cand = Self::from_coeffs(self.low / 2, root);
        if &(cand.clone() * cand.clone()) == self {
            Some(cand)
        } else {
            None
        }
    }
}

fn make_monic(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    if let Some(lc) = v.last().cloned() {
        for c in &mut v {
            *c = &*c / &lc;
        }
    }
    v
}

fn poly_div_rem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem: Vec<BigRational> = a.to_vec();
    while rem.last().is_some_and(|c| c.is_zero()) {
        rem.pop();
    }
    let db = b.len() - 1;
    let lb = b[db].clone();
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    while rem.len() > db && !rem.is_empty() {
        let k = rem.len() - 1 - db;
        let c = rem.last().unwrap() / &lb;
        for (i, bc) in b.iter().enumerate() {
            rem[k + i] -= &c * bc;
        }
        quot[k] = c;
        rem.pop();
        while rem.last().is_some_and(|c| c.is_zero()) {
            rem.pop();
        }
    }
    (quot, rem)
}

pub(crate) fn rat_to_f64(c: &BigRational) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        // fall back to a scaled division for very large operands
        let n = c.numer().to_f64().unwrap_or(f64::NAN);
        let d = c.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub(crate) fn rat_pow(t: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(t.clone(), e as usize)
    } else {
        num_traits::pow(t.recip(), (-e) as usize)
    }
}

/// Square root of a nonnegative rational when both numerator and denominator
/// are perfect squares.
pub(crate) fn rat_sqrt(c: &BigRational) -> Option<BigRational> {
    if c.is_negative() {
        return None;
    }
    let n = c.numer().sqrt();
    let d = c.denom().sqrt();
    if &(&n * &n) == c.numer() && &(&d * &d) == c.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let low = self.low.min(rhs.low);
        let high = self.high_exp().max(rhs.high_exp());
        let coeffs = (low..=high)
            .map(|e| self.coeff(e) + rhs.coeff(e))
            .collect();
        LaurentPoly::from_coeffs(low, coeffs)
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentPoly::from_coeffs(self.low + rhs.low, coeffs)
    }
}

/// Writes the polynomial in powers of `q`, highest first, e.g. `q^2+1+q^-2`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            let q_part = q_power_string(e);
            match q_part {
                None => write!(f, "{}", abs)?,
                Some(qp) if abs.is_one() => write!(f, "{}", qp)?,
                Some(qp) => write!(f, "{}*{}", abs, qp)?,
            }
        }
        Ok(())
    }
}

/// `t^e` rendered as a power of `q`; `None` for `e = 0`.
fn q_power_string(e: i64) -> Option<String> {
    if e == 0 {
        None
    } else if e % 2 == 0 {
        let n = e / 2;
        if n == 1 {
            Some("q".to_string())
        } else {
            Some(format!("q^{}", n))
        }
    } else {
        Some(format!("q^({}/2)", e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> LaurentPoly {
        LaurentPoly::t_pow(2 * n)
    }

    #[test]
    fn display_matches_canonical_form() {
        let p = q(2) + LaurentPoly::one() + q(-2);
        assert_eq!(p.to_string(), "q^2+1+q^-2");
        assert_eq!((-q(1)).to_string(), "-q");
        assert_eq!(LaurentPoly::t_pow(1).to_string(), "q^(1/2)");
        assert_eq!(LaurentPoly::t_pow(-3).to_string(), "q^(-3/2)");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }

    #[test]
    fn division_is_exact_for_q_integers() {
        // (q^2 - q^-2) / (q - q^-1) = q + q^-1
        let num = q(2) - q(-2);
        let den = q(1) - q(-1);
        let quo = num.exact_div(&den).unwrap();
        assert_eq!(quo, q(1) + q(-1));
        assert!((q(1) + LaurentPoly::one()).exact_div(&den).is_none());
    }

    #[test]
    fn gcd_finds_common_factor() {
        let a = (q(1) + LaurentPoly::one()) * (q(1) - LaurentPoly::from_i64(2));
        let b = (q(1) + LaurentPoly::one()) * q(3);
        let g = a.gcd(&b);
        assert_eq!(g, LaurentPoly::t_pow(2) + LaurentPoly::one());
    }

    #[test]
    fn square_root_of_square() {
        let p = q(1) + LaurentPoly::from_i64(2) + q(-1);
        let sq = p.clone() * p.clone();
        assert_eq!(sq.sqrt_exact(), Some(p));
        assert!((q(1) + LaurentPoly::one()).sqrt_exact().is_none());
    }

    #[test]
    fn reflect_swaps_exponents() {
        let p = LaurentPoly::from_terms(&[(3, 2), (-1, 5)]);
        assert_eq!(p.reflect(), LaurentPoly::from_terms(&[(-3, 2), (1, 5)]));
    }
}
