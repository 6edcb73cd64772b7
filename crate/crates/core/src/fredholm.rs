//! A truncated model of `H = C[SU_q(2)] ⊗ Σ` and the sign operator
//! `F = D(1 + D²)^{-1/2}`.
//!
//! `D` acts by a scalar on each isotypic block, so blocks are stored as
//! `(module dimension, multiplicity, eigenvalue)` and no matrix is ever
//! formed. The checks are numeric: partial sums of `tr |F² - 1|` and the
//! scalar sequences governing `[F, a]`, each fitted against an exponential
//! rate.

use crate::error::{QError, Result};
use crate::qscalar::qint_f64;
use crate::spin::Spin;

/// Largest cutoff `j_max` accepted.
pub const MAX_JMAX: Spin = Spin::from_twice(400);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chirality {
    Up,
    Down,
}

/// `W↑_j` or `W↓_j`: a copy of `V_{j ± 1/2}` repeated `2j + 1` times.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Block {
    pub j: Spin,
    pub chirality: Chirality,
    pub module_dim: usize,
    pub multiplicity: usize,
    /// `[2j]` on `W↑_j`, `-[2j+2]` on `W↓_j`.
    pub eigenvalue: f64,
}

impl Block {
    pub fn states(&self) -> usize {
        self.module_dim * self.multiplicity
    }

    /// `λ / sqrt(1 + λ²)`.
    pub fn sign_value(&self) -> f64 {
        self.eigenvalue / self.eigenvalue.hypot(1.0)
    }

    /// The eigenvalue `-1 / (1 + λ²)` of `F² - 1`.
    pub fn defect(&self) -> f64 {
        -1.0 / (1.0 + self.eigenvalue * self.eigenvalue)
    }
}

#[derive(Clone, Debug)]
pub struct TruncatedHilbert {
    pub q0: f64,
    pub j_max: Spin,
    pub blocks: Vec<Block>,
}

impl TruncatedHilbert {
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(Block::states).sum()
    }

    pub fn sign_operator(&self) -> SignOperator {
        SignOperator {
            values: self.blocks.iter().map(|b| (*b, b.sign_value())).collect(),
        }
    }
}

/// `F` as one scalar per block.
#[derive(Clone, Debug)]
pub struct SignOperator {
    pub values: Vec<(Block, f64)>,
}

impl SignOperator {
    pub fn norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, (_, f)| m.max(f.abs()))
    }

    pub fn value(&self, j: Spin, chirality: Chirality) -> Option<f64> {
        self.values
            .iter()
            .find(|(b, _)| b.j == j && b.chirality == chirality)
            .map(|(_, f)| *f)
    }
}

fn check_q(q0: f64) -> Result<f64> {
    if !(q0 > 0.0) || !q0.is_finite() || q0 == 1.0 {
        return Err(QError::InvalidQ(q0));
    }
    Ok(q0)
}

fn check_jmax(j_max: Spin) -> Result<()> {
    if j_max > MAX_JMAX {
        return Err(QError::SpinOutOfRange(j_max));
    }
    Ok(())
}

/// Blocks `W↑_0`, then `W↑_j, W↓_j` for `j = 1/2, ..., j_max`.
pub fn build_truncation(j_max: Spin, q0: f64) -> Result<TruncatedHilbert> {
    check_q(q0)?;
    check_jmax(j_max)?;
    let mut blocks = Vec::with_capacity(2 * j_max.twice() as usize + 1);
    for twice in 0..=j_max.twice() {
        let j = Spin::from_twice(twice);
        let n = twice as usize;
        blocks.push(Block {
            j,
            chirality: Chirality::Up,
            module_dim: n + 2,
            multiplicity: n + 1,
            eigenvalue: qint_f64(n as i64, q0),
        });
        if twice > 0 {
            blocks.push(Block {
                j,
                chirality: Chirality::Down,
                module_dim: n,
                multiplicity: n + 1,
                eigenvalue: -qint_f64(n as i64 + 2, q0),
            });
        }
    }
    Ok(TruncatedHilbert { q0, j_max, blocks })
}

/// `|x_j| <= C q^{-rate j} (1 + j)^degree` over the sampled range, with the
/// smallest such `C`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpFit {
    pub base: f64,
    pub rate: f64,
    pub degree: i32,
    pub constant: f64,
}

impl ExpFit {
    pub fn fit(samples: &[(f64, f64)], base: f64, rate: f64, degree: i32) -> Self {
        let constant = samples
            .iter()
            .map(|&(j, x)| x.abs() * base.powf(rate * j) / (1.0 + j).powi(degree))
            .fold(0.0, f64::max);
        Self {
            base,
            rate,
            degree,
            constant,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.constant.is_finite()
    }

    pub fn bound(&self, j: f64) -> f64 {
        self.constant * self.base.powf(-self.rate * j) * (1.0 + j).powi(self.degree)
    }
}

/// Partial sums `S(j)` of `tr |F² - 1|` over the blocks up to `j`.
#[derive(Clone, Debug)]
pub struct TraceTail {
    pub q0: f64,
    /// `(j, increment, S(j))`.
    pub rows: Vec<(Spin, f64, f64)>,
    /// `S(j_max)` plus a geometric bound on the remainder.
    pub limit: f64,
    /// Increments against `q^{-4j}` with no polynomial factor.
    pub fit: ExpFit,
    /// The same with the multiplicity growth `(1 + j)^2` divided out.
    pub weighted_fit: ExpFit,
}

impl TraceTail {
    /// `T(j) = limit - S(j)`.
    pub fn tails(&self) -> Vec<(Spin, f64)> {
        self.rows.iter().map(|&(j, _, s)| (j, self.limit - s)).collect()
    }

    /// Smallest `j` after which the partial sums move by less than `tol`.
    pub fn knee(&self, tol: f64) -> Option<Spin> {
        let last = self.rows.last()?.2;
        let mut knee = None;
        for &(j, _, s) in self.rows.iter().rev() {
            if (last - s).abs() >= tol {
                break;
            }
            knee = Some(j);
        }
        knee
    }
}

/// `S(j) = Σ_{j' <= j} multiplicity · |−1/(1+λ²)|`. Rejects `q = 1`, where
/// the sum diverges; `q < 1` is folded to `1/q` since `[n]_q = [n]_{1/q}`.
pub fn trace_tail(j_max: Spin, q0: f64) -> Result<TraceTail> {
    let q0 = check_q(q0)?;
    let q = q0.max(1.0 / q0);
    let h = build_truncation(j_max, q)?;
    let mut rows: Vec<(Spin, f64, f64)> = Vec::new();
    let mut sum = 0.0;
    for b in &h.blocks {
        let inc = b.states() as f64 * b.defect().abs();
        sum += inc;
        match rows.last_mut() {
            Some(row) if row.0 == b.j => {
                row.1 += inc;
                row.2 = sum;
            }
            _ => rows.push((b.j, inc, sum)),
        }
    }
    let samples: Vec<(f64, f64)> = rows.iter().map(|&(j, inc, _)| (j.value(), inc)).collect();
    let fit = ExpFit::fit(&samples, q, 4.0, 0);
    let weighted_fit = ExpFit::fit(&samples, q, 4.0, 2);
    // increments shrink by about q^-2 per half step beyond the last row
    let last = rows.last().map_or(0.0, |r| r.1);
    let r = q.powi(-2);
    let limit = sum + last * r / (1.0 - r);
    Ok(TraceTail {
        q0,
        rows,
        limit,
        fit,
        weighted_fit,
    })
}

/// `1 - [x]/sqrt(1 + [x]²)` for real `x >= 0`, accurate where it is tiny.
fn sign_gap(x: f64, q: f64) -> f64 {
    let h = q.ln();
    let bracket = if h == 0.0 { x } else { (x * h).sinh() / h.sinh() };
    if bracket == 0.0 {
        return 1.0;
    }
    let u = if bracket.is_finite() { (1.0 / bracket).powi(2) } else { 0.0 };
    let root = (1.0 + u).sqrt();
    u / (root * (1.0 + root))
}

/// `c_j(k) = [j+k]/sqrt(1+[j+k]²) − [j]/sqrt(1+[j]²)`.
#[derive(Clone, Debug)]
pub struct CommutatorDecay {
    pub shift: f64,
    pub q0: f64,
    pub values: Vec<(Spin, f64)>,
    /// `|c_j| <= C q^{-2 min(j, j+k)}`; `None` at `q = 1`, where the decay
    /// is only polynomial.
    pub fit: Option<ExpFit>,
    /// `|c_j| <= C / (1 + j)^2`, the classical rate.
    pub power_constant: f64,
}

impl CommutatorDecay {
    pub fn is_classical(&self) -> bool {
        self.q0 == 1.0
    }
}

/// The coefficient sequence of `[F, X(k)]` for `j = 0, 1/2, ..., j_max`
/// with `j + k >= 0`. Accepts `q = 1`, reported as classical.
pub fn commutator_decay(shift: f64, j_max: Spin, q0: f64) -> Result<CommutatorDecay> {
    if !(q0 > 0.0) || !q0.is_finite() {
        return Err(QError::InvalidQ(q0));
    }
    if (2.0 * shift).fract() != 0.0 || shift.abs() > 4.0 {
        return Err(QError::Invalid(format!("shift {shift} must be a half-integer with |k| <= 4")));
    }
    check_jmax(j_max)?;
    let q = q0.max(1.0 / q0);
    let values: Vec<(Spin, f64)> = (0..=j_max.twice())
        .map(Spin::from_twice)
        .filter(|j| j.value() + shift >= 0.0)
        .map(|j| {
            let x = j.value();
            (j, sign_gap(x, q) - sign_gap(x + shift, q))
        })
        .collect();
    let fit = (q != 1.0).then(|| {
        let samples: Vec<(f64, f64)> = values.iter().map(|&(j, c)| (j.value() + shift.min(0.0), c)).collect();
        ExpFit::fit(&samples, q, 2.0, 0)
    });
    let power_constant = values
        .iter()
        .map(|&(j, c)| c.abs() * (1.0 + j.value()).powi(2))
        .fold(0.0, f64::max);
    Ok(CommutatorDecay {
        shift,
        q0,
        values,
        fit,
        power_constant,
    })
}
