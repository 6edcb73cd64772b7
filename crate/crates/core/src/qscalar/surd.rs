//! Exact scalars of the form `sum_R c_R * sqrt(R)`.
//!
//! Each coefficient `c_R` is a reduced rational function of `t = q^(1/2)`
//! and each radicand `R` is a square-free product of cyclotomic factors
//! `Phi_d(q^2)` with `d >= 2`. Every q-integer factors as
//! `[n] = q^(1-n) * prod_{d | n, d > 1} Phi_d(q^2)`, so square roots of products
//! of q-integers land in this field. Distinct radicands are linearly
//! independent over the rational functions, which makes the representation
//! canonical and zero testing structural.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::laurent::{rat_sqrt, LaurentPoly};
use super::ratfunc::RatFunc;

/// Largest cyclotomic index tried when factoring a radicand.
const MAX_CYCLOTOMIC: u32 = 96;

/// Sorted, duplicate-free list of cyclotomic indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Radicand(Vec<u32>);

impl Radicand {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    /// `prod_d Phi_d(t^4)` as a polynomial in `t`.
    pub fn poly(&self) -> LaurentPoly {
        self.0
            .iter()
            .fold(LaurentPoly::one(), |acc, &d| acc * cyclotomic_t4(d))
    }

    /// Product of radicands: returns the square part (as a polynomial) and the
    /// remaining square-free radicand.
    fn combine(&self, other: &Radicand) -> (LaurentPoly, Radicand) {
        let mut square = LaurentPoly::one();
        let mut rest = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            match (self.0.get(i), other.0.get(j)) {
                (Some(&a), Some(&b)) if a == b => {
                    square = square * cyclotomic_t4(a);
                    i += 1;
                    j += 1;
                }
                (Some(&a), Some(&b)) if a < b => {
                    rest.push(a);
                    i += 1;
                }
                (Some(_), Some(&b)) => {
                    rest.push(b);
                    j += 1;
                }
                (Some(&a), None) => {
                    rest.push(a);
                    i += 1;
                }
                (None, Some(&b)) => {
                    rest.push(b);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        (square, Radicand(rest))
    }

    fn eval_t(&self, t: f64) -> f64 {
        self.poly().eval_t(t).sqrt()
    }
}

fn cyclotomic_cache() -> &'static RwLock<HashMap<u32, LaurentPoly>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, LaurentPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// The cyclotomic polynomial `Phi_d(x)` as a polynomial in `x`.
pub fn cyclotomic(d: u32) -> LaurentPoly {
    assert!(d >= 1);
    // x^d - 1 divided by Phi_e for every proper divisor e
    let mut p = LaurentPoly::t_pow(d as i64) - LaurentPoly::one();
    for e in 1..d {
        if d % e == 0 {
            p = p
                .exact_div(&cyclotomic(e))
                .expect("cyclotomic divisor divides x^d - 1");
        }
    }
    p
}

/// `Phi_d(q^2) = Phi_d(t^4)`, cached.
pub fn cyclotomic_t4(d: u32) -> LaurentPoly {
    if let Some(p) = cyclotomic_cache().read().unwrap().get(&d) {
        return p.clone();
    }
    let p = cyclotomic(d).substitute_power(4);
    cyclotomic_cache().write().unwrap().insert(d, p.clone());
    p
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QExact {
    terms: BTreeMap<Radicand, RatFunc>,
}

impl QExact {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_ratfunc(RatFunc::one())
    }

    pub fn from_i64(c: i64) -> Self {
        Self::from_ratfunc(RatFunc::from_i64(c))
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::from_ratfunc(RatFunc::from_rational(c))
    }

    pub fn from_ratfunc(c: RatFunc) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Radicand::one(), c);
        }
        Self { terms }
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self::from_ratfunc(RatFunc::from_poly(p))
    }

    /// `q^(e/2)`.
    pub fn t_pow(e: i64) -> Self {
        Self::from_ratfunc(RatFunc::t_pow(e))
    }

    /// The q-integer `[n]` as an exact Laurent polynomial.
    pub fn qint(n: i64) -> Self {
        Self::from_poly(qint_poly(n))
    }

    /// `sqrt([n])` for `n >= 0`.
    pub fn sqrt_qint(n: i64) -> Self {
        assert!(n >= 0, "square root of the negative q-integer [{}]", n);
        if n == 0 {
            return Self::zero();
        }
        let divisors: Vec<u32> = (2..=n as u32).filter(|d| n as u32 % d == 0).collect();
        let mut terms = BTreeMap::new();
        terms.insert(Radicand(divisors), RatFunc::t_pow(1 - n));
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Radicand::one()).is_some_and(|c| c.is_one())
    }

    /// The rational-function value when no radicals are present.
    pub fn as_ratfunc(&self) -> Option<RatFunc> {
        match self.terms.len() {
            0 => Some(RatFunc::zero()),
            1 => self.terms.get(&Radicand::one()).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Radicand, &RatFunc)> {
        self.terms.iter()
    }

    fn insert_add(&mut self, rad: Radicand, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&rad) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&rad);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(rad, c);
            }
        }
    }

    pub fn eval_t(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|(r, c)| c.eval_t(t) * r.eval_t(t))
            .sum()
    }

    pub fn eval_q(&self, q: f64) -> f64 {
        self.eval_t(q.sqrt())
    }

    /// Value at `q = 1` as a float; `None` on a pole.
    pub fn eval_at_one_f64(&self) -> Option<f64> {
        let mut acc = 0.0;
        for (r, c) in &self.terms {
            let v = c.eval_at_one()?;
            acc += super::laurent::rat_to_f64(&v) * r.poly().eval_at_one_f64().sqrt();
        }
        Some(acc)
    }

    /// Value at `q = 1` when it is rational.
    pub fn eval_at_one(&self) -> Option<Result<BigRational, f64>> {
        let mut acc = BigRational::zero();
        for (r, c) in &self.terms {
            let v = c.eval_at_one()?;
            let rv = r.poly().eval_at_one();
            match rat_sqrt(&rv) {
                Some(s) => acc += v * s,
                None => return Some(Err(self.eval_at_one_f64()?)),
            }
        }
        Some(Ok(acc))
    }

    /// Galois conjugate flipping the sign of `sqrt(Phi_d)`.
    fn conjugate(&self, d: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(r, c)| {
                if r.0.contains(&d) {
                    (r.clone(), -c)
                } else {
                    (r.clone(), c.clone())
                }
            })
            .collect();
        Self { terms }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.terms.len() == 1 {
            let (r, c) = self.terms.iter().next().unwrap();
            // (c sqrt R)^-1 = sqrt R / (c R)
            let denom = c * &RatFunc::from_poly(r.poly());
            let mut terms = BTreeMap::new();
            terms.insert(r.clone(), denom.recip()?);
            return Some(Self { terms });
        }
        let d = self
            .terms
            .keys()
            .flat_map(|r| r.0.iter().copied())
            .max()
            .expect("multi-term element has a radical");
        let conj = self.conjugate(d);
        let norm = self.clone() * conj.clone();
        Some(conj * norm.inv()?)
    }

    /// Square root with positive value for real `q > 0`, when it lies in the
    /// field. Only radical-free inputs whose numerator and denominator factor
    /// into `t`-powers, cyclotomic `Phi_d(q^2)` factors and a perfect-square
    /// remainder are supported.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let f = self.as_ratfunc()?;
        let (num_t, num_mult, num_rest) = factor_cyclotomic(f.numer());
        let (den_t, den_mult, den_rest) = factor_cyclotomic(f.denom());
        let t_exp = num_t - den_t;
        if t_exp % 2 != 0 {
            return None;
        }
        // sqrt(L / M) = sqrt(L * M) / M
        let rest_root = (&num_rest * &den_rest).sqrt_exact()?;
        let mut coeff = RatFunc::new(rest_root.shift(t_exp / 2), den_rest);
        let mut radicand = Vec::new();
        let mut all: BTreeMap<u32, i64> = BTreeMap::new();
        for (d, m) in num_mult {
            *all.entry(d).or_default() += m;
        }
        for (d, m) in den_mult {
            *all.entry(d).or_default() -= m;
        }
        for (d, m) in all {
            let half = m.div_euclid(2);
            let odd = m.rem_euclid(2) == 1;
            let phi = RatFunc::from_poly(cyclotomic_t4(d));
            let pw = if half >= 0 {
                pow_ratfunc(&phi, half as u32)
            } else {
                pow_ratfunc(&phi.recip()?, (-half) as u32)
            };
            coeff = &coeff * &pw;
            if odd {
                radicand.push(d);
            }
        }
        let mut terms = BTreeMap::new();
        terms.insert(Radicand(radicand), coeff);
        let root = Self { terms };
        // Pick the branch that is positive near q = 1 from above.
        if root.eval_q(1.37) < 0.0 {
            Some(-root)
        } else {
            Some(root)
        }
    }

    /// Substitutes `q -> 1/q`. Radicands `Phi_d(q^2)` map to
    /// `q^(-2 phi(d)) Phi_d(q^2)` (palindromic), so the square-root factor
    /// picks up `q^(-phi(d))`.
    pub fn reflect(&self) -> Self {
        let mut out = Self::zero();
        for (r, c) in &self.terms {
            let deg: i64 = r.0.iter().map(|&d| cyclotomic(d).high_exp()).sum();
            let coeff = &c.reflect() * &RatFunc::t_pow(-2 * deg);
            out.insert_add(r.clone(), coeff);
        }
        out
    }
}

fn pow_ratfunc(f: &RatFunc, n: u32) -> RatFunc {
    (0..n).fold(RatFunc::one(), |acc, _| &acc * f)
}

/// Splits a polynomial into `t^a * prod Phi_d(t^4)^{m_d} * rest`.
fn factor_cyclotomic(p: &LaurentPoly) -> (i64, Vec<(u32, i64)>, LaurentPoly) {
    let (t_exp, mut rest) = p.strip_t_power();
    let mut mult = Vec::new();
    for d in 2..=MAX_CYCLOTOMIC {
        if rest.span() == 0 {
            break;
        }
        let phi = cyclotomic_t4(d);
        let mut m = 0;
        while rest.span() >= phi.span() {
            match rest.exact_div(&phi) {
                Some(q) => {
                    rest = q;
                    m += 1;
                }
                None => break,
            }
        }
        if m > 0 {
            mult.push((d, m));
        }
    }
    (t_exp, mult, rest)
}

/// `[n] = (q^n - q^-n) / (q - q^-1)` as a Laurent polynomial in `t`.
pub fn qint_poly(n: i64) -> LaurentPoly {
    if n == 0 {
        return LaurentPoly::zero();
    }
    let sign = if n < 0 { -1 } else { 1 };
    let m = n.abs();
    // q^(m-1) + q^(m-3) + ... + q^(1-m)
    let mut p = LaurentPoly::zero();
    let mut e = m - 1;
    while e >= 1 - m {
        p = p + LaurentPoly::t_pow(2 * e);
        e -= 2;
    }
    p.scale(&BigRational::from_integer(BigInt::from(sign)))
}

impl LaurentPoly {
    pub(crate) fn eval_at_one_f64(&self) -> f64 {
        super::laurent::rat_to_f64(&self.eval_at_one())
    }
}

impl Add for QExact {
    type Output = QExact;
    fn add(mut self, rhs: QExact) -> QExact {
        for (r, c) in rhs.terms {
            self.insert_add(r, c);
        }
        self
    }
}

impl Sub for QExact {
    type Output = QExact;
    fn sub(self, rhs: QExact) -> QExact {
        self + (-rhs)
    }
}

impl Neg for QExact {
    type Output = QExact;
    fn neg(self) -> QExact {
        QExact {
            terms: self.terms.into_iter().map(|(r, c)| (r, -c)).collect(),
        }
    }
}

impl Mul for QExact {
    type Output = QExact;
    fn mul(self, rhs: QExact) -> QExact {
        &self * &rhs
    }
}

impl Mul<&QExact> for &QExact {
    type Output = QExact;
    fn mul(self, rhs: &QExact) -> QExact {
        let mut out = QExact::zero();
        for (ra, ca) in &self.terms {
            for (rb, cb) in &rhs.terms {
                let c = ca * cb;
                if ra.is_one() {
                    out.insert_add(rb.clone(), c);
                } else if rb.is_one() {
                    out.insert_add(ra.clone(), c);
                } else {
                    let (square, rest) = ra.combine(rb);
                    out.insert_add(rest, &c * &RatFunc::from_poly(square));
                }
            }
        }
        out
    }
}

impl fmt::Display for QExact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (r, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if r.is_one() {
                write!(f, "{}", c)?;
            } else {
                write!(f, "{}*sqrt({})", c, r.poly())?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_integers_have_expected_form() {
        assert!(QExact::qint(0).is_zero());
        assert!(QExact::qint(1).is_one());
        assert_eq!(QExact::qint(2).to_string(), "(q+q^-1)");
        assert_eq!(QExact::qint(-3), -QExact::qint(3));
    }

    #[test]
    fn sqrt_qint_squares_back() {
        for n in 1..=12 {
            let s = QExact::sqrt_qint(n);
            assert_eq!(&s * &s, QExact::qint(n), "n = {}", n);
        }
    }

    #[test]
    fn distinct_roots_multiply_into_a_new_radical() {
        let a = QExact::sqrt_qint(2) * QExact::sqrt_qint(3);
        assert_eq!(a.terms().count(), 1);
        let (r, _) = a.terms().next().unwrap();
        assert_eq!(r.indices(), &[2, 3]);
        // sqrt([2]) sqrt([4]) = [2] sqrt(Phi_4): the Phi_2 factor squares out
        let b = QExact::sqrt_qint(2) * QExact::sqrt_qint(4);
        let (r, _) = b.terms().next().unwrap();
        assert_eq!(r.indices(), &[4]);
        assert!((b.eval_q(1.3) - (qf(2, 1.3) * qf(4, 1.3)).sqrt()).abs() < 1e-12);
    }

    fn qf(n: i32, q: f64) -> f64 {
        (q.powi(n) - q.powi(-n)) / (q - 1.0 / q)
    }

    #[test]
    fn inverse_of_sum_of_radicals() {
        let x = QExact::one() + QExact::sqrt_qint(2) + QExact::sqrt_qint(3) * QExact::t_pow(1);
        let y = x.inv().unwrap();
        assert!((x * y).is_one());
    }

    #[test]
    fn sqrt_recovers_cyclotomic_roots() {
        let v = QExact::qint(2) * QExact::t_pow(2);
        let r = v.sqrt().unwrap();
        assert_eq!(&r * &r, v);
        let w = QExact::qint(3).inv().unwrap();
        let r = w.sqrt().unwrap();
        assert_eq!(&r * &r, w);
        assert!(r.eval_q(2.0) > 0.0);
        assert!(QExact::t_pow(1).sqrt().is_none());
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic(1), LaurentPoly::from_terms(&[(1, 1), (0, -1)]));
        assert_eq!(cyclotomic(4), LaurentPoly::from_terms(&[(2, 1), (0, 1)]));
        assert_eq!(cyclotomic(6), LaurentPoly::from_terms(&[(2, 1), (1, -1), (0, 1)]));
    }

    #[test]
    fn reflection_fixes_q_integers() {
        for n in 1..8 {
            assert_eq!(QExact::qint(n).reflect(), QExact::qint(n));
            assert_eq!(QExact::sqrt_qint(n).reflect(), QExact::sqrt_qint(n));
        }
        assert_eq!(QExact::t_pow(3).reflect(), QExact::t_pow(-3));
    }
}
