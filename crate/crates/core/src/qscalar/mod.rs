//! Scalars depending on the deformation parameter `q`, in exact or numeric
//! mode, and the q-combinatorics (`[n]`, q-binomials).

pub mod field;
pub mod laurent;
pub mod ratfunc;
pub mod surd;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;

pub use field::{qint_f64, Exact, Numeric, QField, Scalar, MATRIX_TOL, PROBE_Q, SCALAR_RTOL};
pub use laurent::LaurentPoly;
pub use ratfunc::RatFunc;
pub use surd::QExact;

use crate::error::{QError, Result};

/// Which arithmetic to use.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QMode {
    Exact,
    Numeric(f64),
}

impl QMode {
    pub fn validate(self) -> Result<Self> {
        if let QMode::Numeric(q0) = self {
            Numeric::new(q0)?;
        }
        Ok(self)
    }
}

/// A q-dependent scalar: either an exact element of the field of
/// [`QExact`] values, or a real number evaluated at a fixed `q0`.
#[derive(Clone, Debug, PartialEq)]
pub enum QValue {
    Exact(QExact),
    Numeric { value: f64, q0: f64 },
}

impl QValue {
    pub fn mode(&self) -> QMode {
        match self {
            QValue::Exact(_) => QMode::Exact,
            QValue::Numeric { q0, .. } => QMode::Numeric(*q0),
        }
    }

    pub fn as_exact(&self) -> Option<&QExact> {
        match self {
            QValue::Exact(x) => Some(x),
            QValue::Numeric { .. } => None,
        }
    }

    /// Evaluates at `q0`. Exact values evaluate directly; numeric values
    /// must already live at `q0`.
    pub fn eval(&self, q0: f64) -> Result<f64> {
        match self {
            QValue::Exact(x) => Ok(x.eval_q(q0)),
            QValue::Numeric { value, q0: p } if *p == q0 => Ok(*value),
            QValue::Numeric { q0: p, .. } => Err(QError::MixedEvaluationPoints(*p, q0)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            QValue::Exact(x) => x.is_zero(),
            QValue::Numeric { value, .. } => *value == 0.0,
        }
    }

    fn combine(
        &self,
        rhs: &QValue,
        exact: impl FnOnce(&QExact, &QExact) -> Result<QExact>,
        numeric: impl FnOnce(f64, f64) -> Result<f64>,
    ) -> Result<QValue> {
        match (self, rhs) {
            (QValue::Exact(a), QValue::Exact(b)) => Ok(QValue::Exact(exact(a, b)?)),
            (QValue::Numeric { value: a, q0: p }, QValue::Numeric { value: b, q0: r }) => {
                if p != r {
                    return Err(QError::MixedEvaluationPoints(*p, *r));
                }
                Ok(QValue::Numeric {
                    value: numeric(*a, *b)?,
                    q0: *p,
                })
            }
            _ => Err(QError::MixedModes),
        }
    }

    pub fn try_add(&self, rhs: &QValue) -> Result<QValue> {
        self.combine(rhs, |a, b| Ok(a.clone() + b.clone()), |a, b| Ok(a + b))
    }

    pub fn try_sub(&self, rhs: &QValue) -> Result<QValue> {
        self.combine(rhs, |a, b| Ok(a.clone() - b.clone()), |a, b| Ok(a - b))
    }

    pub fn try_mul(&self, rhs: &QValue) -> Result<QValue> {
        self.combine(rhs, |a, b| Ok(a * b), |a, b| Ok(a * b))
    }

    pub fn try_div(&self, rhs: &QValue) -> Result<QValue> {
        self.combine(
            rhs,
            |a, b| Ok(a * &b.inv().ok_or(QError::DivisionByZero)?),
            |a, b| {
                if b == 0.0 {
                    Err(QError::DivisionByZero)
                } else {
                    Ok(a / b)
                }
            },
        )
    }

    pub fn inv(&self) -> Result<QValue> {
        match self {
            QValue::Exact(x) => Ok(QValue::Exact(x.inv().ok_or(QError::DivisionByZero)?)),
            QValue::Numeric { value, q0 } => {
                if *value == 0.0 {
                    Err(QError::DivisionByZero)
                } else {
                    Ok(QValue::Numeric {
                        value: 1.0 / value,
                        q0: *q0,
                    })
                }
            }
        }
    }
}

macro_rules! panicking_op {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr for QValue {
            type Output = QValue;
            /// Panics on mixed modes or evaluation points; use the `try_` form
            /// to handle those as errors.
            fn $method(self, rhs: QValue) -> QValue {
                self.$try(&rhs).unwrap_or_else(|e| panic!("{}", e))
            }
        }
    };
}

panicking_op!(Add, add, try_add);
panicking_op!(Sub, sub, try_sub);
panicking_op!(Mul, mul, try_mul);
panicking_op!(Div, div, try_div);

impl Neg for QValue {
    type Output = QValue;
    fn neg(self) -> QValue {
        match self {
            QValue::Exact(x) => QValue::Exact(-x),
            QValue::Numeric { value, q0 } => QValue::Numeric { value: -value, q0 },
        }
    }
}

/// Exact values print in canonical Laurent form, numeric values as floats.
impl fmt::Display for QValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QValue::Exact(x) => write!(f, "{}", x),
            QValue::Numeric { value, .. } => write!(f, "{}", value),
        }
    }
}

/// `[n] = (q^n - q^-n) / (q - q^-1)`.
pub fn qint(n: i64, mode: QMode) -> Result<QValue> {
    match mode.validate()? {
        QMode::Exact => Ok(QValue::Exact(QExact::qint(n))),
        QMode::Numeric(q0) => Ok(QValue::Numeric {
            value: qint_f64(n, q0),
            q0,
        }),
    }
}

/// `(m)_{q_i} / ((n)_{q_i} (m-n)_{q_i})` with `q_i = q^d` and
/// `(m)_{q_i} = prod_{j=1}^m (q_i^j - q_i^-j)`.
pub fn qbinomial(m: i64, n: i64, d: u32, mode: QMode) -> Result<QValue> {
    if n < 0 || n > m {
        return Err(QError::BinomialRange { m, n });
    }
    assert!(d > 0, "q-binomial needs a positive root length");
    let d = d as i64;
    match mode.validate()? {
        QMode::Exact => {
            // q_i^j - q_i^-j = t^(2dj) - t^(-2dj)
            let fact = |k: i64| -> LaurentPoly {
                (1..=k).fold(LaurentPoly::one(), |acc, j| {
                    acc * (LaurentPoly::t_pow(2 * d * j) - LaurentPoly::t_pow(-2 * d * j))
                })
            };
            let den = fact(n) * fact(m - n);
            let quo = fact(m)
                .exact_div(&den)
                .expect("q-binomial coefficients are Laurent polynomials");
            Ok(QValue::Exact(QExact::from_poly(quo)))
        }
        QMode::Numeric(q0) => {
            // Products of q_i-integers avoid cancellation near q = 1.
            let qi = q0.powi(d as i32);
            let mut v = 1.0;
            for j in 1..=n {
                v *= qint_f64(m - n + j, qi) / qint_f64(j, qi);
            }
            Ok(QValue::Numeric { value: v, q0 })
        }
    }
}

/// Value of an exact q-dependent scalar at `q = 1`.
pub fn limit_q_to_1(v: &QValue) -> Result<BigRational> {
    let x = v.as_exact().ok_or(QError::NotExact)?;
    match x.eval_at_one() {
        None => Err(QError::PoleAtOne),
        Some(Ok(r)) => Ok(r),
        Some(Err(f)) => Err(QError::IrrationalLimit(f)),
    }
}

/// `q = 1` value of an exact scalar as a float (allows irrational limits).
pub fn limit_q_to_1_f64(x: &QExact) -> Result<f64> {
    x.eval_at_one_f64().ok_or(QError::PoleAtOne)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rational_is_integer(r: &BigRational, n: i64) -> bool {
        *r == BigRational::from_integer(n.into())
    }

    fn exact_poly(terms: &[(i64, i64)]) -> QValue {
        // exponents in powers of q
        let t: Vec<(i64, i64)> = terms.iter().map(|&(e, c)| (2 * e, c)).collect();
        QValue::Exact(QExact::from_poly(LaurentPoly::from_terms(&t)))
    }

    #[test]
    fn qint_examples() {
        assert!(qint(0, QMode::Exact).unwrap().is_zero());
        assert_eq!(qint(1, QMode::Exact).unwrap(), exact_poly(&[(0, 1)]));
        assert_eq!(qint(2, QMode::Exact).unwrap(), exact_poly(&[(1, 1), (-1, 1)]));
        let v = qint(4, QMode::Numeric(1.2)).unwrap().eval(1.2).unwrap();
        let direct = (1.2f64.powi(4) - 1.2f64.powi(-4)) / (1.2 - 1.0 / 1.2);
        assert!((v - direct).abs() <= 1e-12 * direct);
    }

    #[test]
    fn qint_rejects_bad_numeric_points() {
        assert_eq!(qint(2, QMode::Numeric(1.0)), Err(QError::InvalidQ(1.0)));
    }

    #[test]
    fn qbinomial_examples() {
        assert_eq!(qbinomial(1, 0, 1, QMode::Exact).unwrap(), exact_poly(&[(0, 1)]));
        assert_eq!(qbinomial(2, 1, 1, QMode::Exact).unwrap(), exact_poly(&[(1, 1), (-1, 1)]));
        assert_eq!(
            qbinomial(3, 1, 1, QMode::Exact).unwrap(),
            exact_poly(&[(2, 1), (0, 1), (-2, 1)])
        );
        assert!(matches!(
            qbinomial(2, 3, 1, QMode::Exact),
            Err(QError::BinomialRange { .. })
        ));
        assert!(qbinomial(2, -1, 1, QMode::Exact).is_err());
    }

    #[test]
    fn limits_at_one() {
        for n in [0, 1, 5] {
            let v = qint(n, QMode::Exact).unwrap();
            assert!(rational_is_integer(&limit_q_to_1(&v).unwrap(), n));
        }
        let v = exact_poly(&[(1, 1), (-1, 1)]);
        assert!(rational_is_integer(&limit_q_to_1(&v).unwrap(), 2));
        let qmq = exact_poly(&[(1, 1), (-1, -1)]);
        let ratio = qmq.try_div(&qmq).unwrap();
        assert!(rational_is_integer(&limit_q_to_1(&ratio).unwrap(), 1));
        let pole = exact_poly(&[(0, 1)]).try_div(&qmq).unwrap();
        assert_eq!(limit_q_to_1(&pole), Err(QError::PoleAtOne));
        assert_eq!(
            limit_q_to_1(&QValue::Numeric { value: 1.0, q0: 2.0 }),
            Err(QError::NotExact)
        );
    }

    #[test]
    fn mixing_evaluation_points_is_an_error() {
        let a = qint(2, QMode::Numeric(1.5)).unwrap();
        let b = qint(2, QMode::Numeric(2.0)).unwrap();
        assert_eq!(a.try_add(&b), Err(QError::MixedEvaluationPoints(1.5, 2.0)));
        let c = qint(2, QMode::Exact).unwrap();
        assert_eq!(a.try_mul(&c), Err(QError::MixedModes));
    }

    #[test]
    fn canonical_text_form() {
        assert_eq!(qint(3, QMode::Exact).unwrap().to_string(), "(q^2+1+q^-2)");
        assert_eq!(qint(4, QMode::Exact).unwrap().to_string(), "(q^3+q+q^-1+q^-3)");
    }
}
