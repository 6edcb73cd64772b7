//! The two scalar modes behind every matrix computation.
//!
//! [`Scalar`] is the arithmetic used by the linear algebra; [`QField`] is the
//! context that knows the deformation parameter and manufactures the
//! q-dependent constants (`q^(n/2)`, `[n]`, `sqrt([n])`). [`Exact`] works in
//! the field of [`QExact`] values; [`Numeric`] evaluates at a fixed real
//! `q0 > 0` with `f64` arithmetic.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;

use super::surd::QExact;
use super::QValue;
use crate::error::{QError, Result};

/// Absolute tolerance for matrix identities in numeric mode.
pub const MATRIX_TOL: f64 = 1e-10;
/// Relative tolerance for scalar identities in numeric mode.
pub const SCALAR_RTOL: f64 = 1e-12;
/// Point at which exact residuals are evaluated for reporting.
pub const PROBE_Q: f64 = 1.5;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_ratio(n: i64, d: i64) -> Self;
    /// Structural zero test (exact) or `== 0.0` (numeric).
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;
    /// Zero within `tol` in numeric mode; structural zero in exact mode.
    fn is_negligible(&self, tol: f64) -> bool;
    /// Pivoting weight: larger is preferred. Exact values favour simple entries.
    fn pivot_weight(&self) -> f64;
    fn is_exact() -> bool;
    /// Embeds a float; only numeric scalars accept one.
    fn from_f64(x: f64) -> Option<Self>;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        n as f64 / d as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn inv(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }
    fn is_negligible(&self, tol: f64) -> bool {
        self.abs() <= tol
    }
    fn pivot_weight(&self) -> f64 {
        self.abs()
    }
    fn is_exact() -> bool {
        false
    }
    fn from_f64(x: f64) -> Option<Self> {
        Some(x)
    }
}

impl Scalar for QExact {
    fn zero() -> Self {
        QExact::zero()
    }
    fn one() -> Self {
        QExact::one()
    }
    fn from_i64(n: i64) -> Self {
        QExact::from_i64(n)
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        QExact::from_rational(BigRational::new(n.into(), d.into()))
    }
    fn is_zero(&self) -> bool {
        QExact::is_zero(self)
    }
    fn inv(&self) -> Option<Self> {
        QExact::inv(self)
    }
    fn is_negligible(&self, _tol: f64) -> bool {
        QExact::is_zero(self)
    }
    fn pivot_weight(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            // fewer and shorter terms make cheaper pivots
            let size: usize = self
                .terms()
                .map(|(r, c)| 1 + r.indices().len() + c.numer().span() + c.denom().span())
                .sum();
            1.0 / size as f64
        }
    }
    fn is_exact() -> bool {
        true
    }
    fn from_f64(_x: f64) -> Option<Self> {
        None
    }
}

pub trait QField: Clone + Debug + PartialEq + Send + Sync + 'static {
    type S: Scalar;

    /// `q^(e/2)`.
    fn q_half_pow(&self, e: i64) -> Self::S;

    fn q_pow(&self, n: i64) -> Self::S {
        self.q_half_pow(2 * n)
    }

    /// The q-integer `[n]`.
    fn qint(&self, n: i64) -> Self::S;

    /// `sqrt([n])`, `n >= 0`.
    fn sqrt_qint(&self, n: i64) -> Self::S;

    /// Principal square root when it exists in the field.
    fn sqrt(&self, x: &Self::S) -> Option<Self::S>;

    /// Real value of a scalar; exact scalars are evaluated at [`PROBE_Q`].
    fn to_f64(&self, x: &Self::S) -> f64;

    fn to_qvalue(&self, x: &Self::S) -> QValue;

    /// Image of an exact scalar in this field.
    fn from_exact(&self, x: &QExact) -> Self::S;

    /// Tolerance for zero tests inside numeric algorithms (0 when exact).
    fn tol(&self) -> f64;

    /// `q - q^-1`.
    fn q_minus_qinv(&self) -> Self::S {
        self.q_pow(1) - self.q_pow(-1)
    }

    fn label(&self) -> String;
}

/// Exact arithmetic over the multi-quadratic extension of `Q(q^(1/2))`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Exact;

impl QField for Exact {
    type S = QExact;

    fn q_half_pow(&self, e: i64) -> QExact {
        QExact::t_pow(e)
    }
    fn qint(&self, n: i64) -> QExact {
        QExact::qint(n)
    }
    fn sqrt_qint(&self, n: i64) -> QExact {
        QExact::sqrt_qint(n)
    }
    fn sqrt(&self, x: &QExact) -> Option<QExact> {
        x.sqrt()
    }
    fn to_f64(&self, x: &QExact) -> f64 {
        x.eval_q(PROBE_Q)
    }
    fn to_qvalue(&self, x: &QExact) -> QValue {
        QValue::Exact(x.clone())
    }
    fn from_exact(&self, x: &QExact) -> QExact {
        x.clone()
    }
    fn tol(&self) -> f64 {
        0.0
    }
    fn label(&self) -> String {
        "exact".to_string()
    }
}

/// Floating-point evaluation at a fixed `q0 > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Numeric {
    q0: f64,
    tol: f64,
}

impl Numeric {
    /// Rejects `q0 <= 0` and `q0 = 1`.
    pub fn new(q0: f64) -> Result<Self> {
        if !(q0 > 0.0) || q0 == 1.0 || !q0.is_finite() {
            return Err(QError::InvalidQ(q0));
        }
        Ok(Self { q0, tol: MATRIX_TOL })
    }

    /// The undeformed point `q = 1`, where every q-integer equals its classical
    /// value. Used as the self-consistent classical oracle.
    pub fn classical() -> Self {
        Self {
            q0: 1.0,
            tol: MATRIX_TOL,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn q0(&self) -> f64 {
        self.q0
    }

    pub fn is_classical(&self) -> bool {
        self.q0 == 1.0
    }
}

/// `[n]` evaluated at real `q > 0`, stable near `q = 1`.
pub fn qint_f64(n: i64, q: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if n < 0 {
        return -qint_f64(-n, q);
    }
    if (q - 1.0).abs() < 1e-2 || n <= 8 {
        // q^(n-1) + q^(n-3) + ... + q^(1-n)
        let mut acc = 0.0;
        let mut e = n - 1;
        while e >= 1 - n {
            acc += q.powi(e as i32);
            e -= 2;
        }
        acc
    } else {
        let qn = q.powf(n as f64);
        (qn - 1.0 / qn) / (q - 1.0 / q)
    }
}

impl QField for Numeric {
    type S = f64;

    fn q_half_pow(&self, e: i64) -> f64 {
        self.q0.powf(e as f64 / 2.0)
    }
    fn qint(&self, n: i64) -> f64 {
        qint_f64(n, self.q0)
    }
    fn sqrt_qint(&self, n: i64) -> f64 {
        assert!(n >= 0, "square root of a negative q-integer");
        qint_f64(n, self.q0).sqrt()
    }
    fn sqrt(&self, x: &f64) -> Option<f64> {
        if *x < 0.0 {
            None
        } else {
            Some(x.sqrt())
        }
    }
    fn to_f64(&self, x: &f64) -> f64 {
        *x
    }
    fn to_qvalue(&self, x: &f64) -> QValue {
        QValue::Numeric {
            value: *x,
            q0: self.q0,
        }
    }
    fn from_exact(&self, x: &QExact) -> f64 {
        x.eval_q(self.q0)
    }
    fn tol(&self) -> f64 {
        self.tol
    }
    fn label(&self) -> String {
        format!("q={}", self.q0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid_points() {
        assert!(Numeric::new(1.0).is_err());
        assert!(Numeric::new(0.0).is_err());
        assert!(Numeric::new(-2.0).is_err());
        assert!(Numeric::new(f64::NAN).is_err());
        assert!(Numeric::new(0.5).is_ok());
    }

    #[test]
    fn classical_q_integers_are_integers() {
        let c = Numeric::classical();
        for n in -5..=5 {
            assert_eq!(c.qint(n), n as f64);
        }
    }

    #[test]
    fn stable_formula_agrees_with_closed_form() {
        for &q in &[0.5f64, 1.1, 2.0] {
            for n in 1..30 {
                let direct = (q.powi(n) - q.powi(-n)) / (q - 1.0 / q);
                let v = qint_f64(n as i64, q);
                assert!((v - direct).abs() <= 1e-12 * direct.abs(), "n={n} q={q}");
            }
        }
    }
}
