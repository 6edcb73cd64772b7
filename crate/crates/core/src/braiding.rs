//! The R-matrix of U_q(sl2) on pairs of irreducibles, the braiding
//! operator `Ř = σR`, its splitting into positive and negative eigenspaces,
//! and the Hecke-type relations between the `Ř_i` acting on `V^{(x)N}`.

use crate::error::{QError, Result};
use crate::linalg::{cluster_values, flip, residual, symmetric_eigenvalues, Mat, Residual};
use crate::qscalar::{QField, Scalar};
use crate::repr::{build_irrep, tensor_rep, Gen, HopfStructure, Representation};
use crate::spin::Spin;

/// `R = q^{H(x)H/2} sum_n q^{n(n-1)/2} (q - q^-1)^n / [n]! (ke)^n (x) (fk^-1)^n`
/// on `A (x) B`; `q^{H(x)H/2}` is `q^{2 m_1 m_2}` on weight vectors.
///
/// The series terminates because `e` is nilpotent on finite modules.
pub fn rmatrix_for<F: QField>(a: &Representation<F>, b: &Representation<F>) -> Mat<F::S> {
    let field = a.field();
    let (da, db) = (a.dim(), b.dim());
    let cartan = Mat::diagonal(
        a.twice_weights()
            .iter()
            .flat_map(|wa| b.twice_weights().iter().map(move |wb| wa * wb))
            .map(|w| field.q_half_pow(w))
            .collect(),
    );
    let ke = a.gen(Gen::K).matmul(a.gen(Gen::E));
    let fk = b.gen(Gen::F).matmul(b.gen(Gen::Kinv));
    let mut series = Mat::zeros(da * db, da * db);
    let mut x = Mat::identity(da);
    let mut y = Mat::identity(db);
    let mut factorial = F::S::one();
    for n in 0..da.min(db) as i64 {
        if n > 0 {
            x = x.matmul(&ke);
            y = y.matmul(&fk);
            factorial = factorial * field.qint(n);
        }
        let mut c = field.q_half_pow(n * (n - 1));
        for _ in 0..n {
            c = c * field.q_minus_qinv();
        }
        let c = c * factorial.inv().expect("[n]! is nonzero for q > 0");
        series = series + x.kron(&y).scale(&c);
    }
    cartan.matmul(&series)
}

pub fn rmatrix<F: QField>(l1: Spin, l2: Spin, field: &F) -> Mat<F::S> {
    rmatrix_for(&build_irrep(l1, field), &build_irrep(l2, field))
}

/// `Ř = σR : V_{l1} (x) V_{l2} -> V_{l2} (x) V_{l1}`.
#[derive(Clone, Debug)]
pub struct BraidingOperator<F: QField> {
    pub l1: Spin,
    pub l2: Spin,
    pub r: Mat<F::S>,
    pub flip: Mat<F::S>,
    pub rhat: Mat<F::S>,
    field: F,
}

impl<F: QField> BraidingOperator<F> {
    pub fn field(&self) -> &F {
        &self.field
    }

    /// `R^t R` with `R^t = R_21 = σ R(l2, l1) σ`, the element behind the
    /// formal quantum Lie algebra construction `h^-1 (R^t R - 1)` with
    /// `h = log q`; only the product is exposed here.
    pub fn rt_r(&self) -> Mat<F::S> {
        let (d1, d2) = (self.l1.dim(), self.l2.dim());
        let r21 = flip::<F::S>(d2, d1)
            .matmul(&rmatrix(self.l2, self.l1, &self.field))
            .matmul(&flip(d1, d2));
        r21.matmul(&self.r)
    }
}

pub fn braiding_op<F: QField>(l1: Spin, l2: Spin, field: &F) -> BraidingOperator<F> {
    let r = rmatrix(l1, l2, field);
    let p = flip(l1.dim(), l2.dim());
    let rhat = p.matmul(&r);
    BraidingOperator {
        l1,
        l2,
        r,
        flip: p,
        rhat,
        field: field.clone(),
    }
}

/// Closed-form eigenvalue of `Ř` on the `V_J` component of `V_l (x) V_l`:
/// `(-1)^{2l-J} q^{c(J) - 2c(l)}` with `c(j) = j(j+1)`.
pub fn rhat_eigenvalue<F: QField>(l: Spin, j: Spin, field: &F) -> F::S {
    let (l2, j2) = (l.twice() as i64, j.twice() as i64);
    // exponent in powers of q^(1/2)
    let e = (j2 * (j2 + 2) - 2 * l2 * (l2 + 2)) / 2;
    let v = field.q_half_pow(e);
    if (l2 - j2 / 2) % 2 == 0 {
        v
    } else {
        -v
    }
}

#[derive(Clone, Debug)]
pub struct Eigenspace<S> {
    pub value: S,
    /// Clebsch-Gordan component the eigenspace carries.
    pub component: Spin,
    pub positive: bool,
    /// Columns span the eigenspace.
    pub basis: Mat<S>,
}

impl<S> Eigenspace<S> {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }
}

#[derive(Clone, Debug)]
pub struct SpectralSplit<S> {
    pub eigenspaces: Vec<Eigenspace<S>>,
    pub positive_projector: Mat<S>,
    pub negative_projector: Mat<S>,
}

impl<S: Scalar> SpectralSplit<S> {
    pub fn positive_dim(&self) -> usize {
        self.eigenspaces.iter().filter(|e| e.positive).map(Eigenspace::dim).sum()
    }

    pub fn negative_dim(&self) -> usize {
        self.eigenspaces.iter().filter(|e| !e.positive).map(Eigenspace::dim).sum()
    }

    pub fn values(&self) -> Vec<S> {
        self.eigenspaces.iter().map(|e| e.value.clone()).collect()
    }

    /// Basis of the positive part, eigenspace by eigenspace.
    pub fn positive_basis(&self) -> Vec<Vec<S>> {
        self.basis_where(true)
    }

    pub fn negative_basis(&self) -> Vec<Vec<S>> {
        self.basis_where(false)
    }

    fn basis_where(&self, positive: bool) -> Vec<Vec<S>> {
        self.eigenspaces
            .iter()
            .filter(|e| e.positive == positive)
            .flat_map(|e| (0..e.dim()).map(move |j| e.basis.col(j)))
            .collect()
    }

    pub fn eigenspace_of(&self, component: Spin) -> Option<&Eigenspace<S>> {
        self.eigenspaces.iter().find(|e| e.component == component)
    }
}

/// Splits `Ř` on `V_l (x) V_l` by the sign of its eigenvalues.
///
/// Exact mode uses the closed-form eigenvalues and the annihilating-polynomial
/// projectors `prod_{K != J} (Ř - λ_K)/(λ_J - λ_K)`; numeric mode diagonalises
/// the selfadjoint `Ř` and merges eigenvalues closer than `1e-8`.
pub fn spectral_split<F: QField>(b: &BraidingOperator<F>) -> Result<SpectralSplit<F::S>> {
    if b.l1 != b.l2 {
        return Err(QError::Dimension(format!(
            "spectral split needs a tensor square, got {} (x) {}",
            b.l1, b.l2
        )));
    }
    let field = &b.field;
    let l = b.l1;
    let n = l.dim() * l.dim();
    let components: Vec<Spin> = (0..=2 * l.twice()).step_by(2).map(Spin::from_twice).collect();
    let values: Vec<F::S> = components.iter().map(|&j| rhat_eigenvalue(l, j, field)).collect();
    for v in &values {
        let x = field.to_f64(v);
        if x.abs() <= field.tol().max(1e-300) {
            return Err(QError::ZeroEigenvalue(x));
        }
    }
    let mut eigenspaces = Vec::new();
    if <F::S as Scalar>::is_exact() {
        for (i, (&j, lam)) in components.iter().zip(&values).enumerate() {
            let mut p = Mat::identity(n);
            for (k, mu) in values.iter().enumerate() {
                if k == i {
                    continue;
                }
                let denom = (lam.clone() - mu.clone())
                    .inv()
                    .ok_or_else(|| QError::Spectral("coinciding eigenvalues".into()))?;
                let shifted = &b.rhat - &Mat::identity(n).scale(mu);
                p = p.matmul(&shifted).scale(&denom);
            }
            let (_, pivots) = p.rref(field.tol());
            let basis = Mat::from_columns(&pivots.iter().map(|&c| p.col(c)).collect::<Vec<_>>());
            if basis.cols() != j.dim() {
                return Err(QError::Spectral(format!(
                    "eigenspace of V_{j} has dimension {}, expected {}",
                    basis.cols(),
                    j.dim()
                )));
            }
            eigenspaces.push((lam.clone(), j, basis, p));
        }
    } else {
        let dm = b.rhat.to_dmatrix(field);
        let sym = (&dm + dm.transpose()) * 0.5;
        let eig = nalgebra::SymmetricEigen::new(sym);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&x, &y| eig.eigenvalues[x].partial_cmp(&eig.eigenvalues[y]).unwrap());
        let sorted: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let clusters = cluster_values(&sorted, 1e-8);
        let mut start = 0;
        for (mean, count) in clusters {
            if mean.abs() <= field.tol() {
                return Err(QError::ZeroEigenvalue(mean));
            }
            let cols: Vec<Vec<F::S>> = order[start..start + count]
                .iter()
                .map(|&i| {
                    eig.eigenvectors
                        .column(i)
                        .iter()
                        .map(|&x| F::S::from_f64(x).expect("numeric mode"))
                        .collect()
                })
                .collect();
            start += count;
            // label by the closed-form value it matches
            let matches: Vec<usize> = (0..values.len())
                .filter(|&i| (field.to_f64(&values[i]) - mean).abs() <= 1e-8 * mean.abs().max(1.0))
                .collect();
            if matches.is_empty() {
                return Err(QError::Spectral(format!("unexpected eigenvalue {mean}")));
            }
            let basis = Mat::from_columns(&cols);
            let pieces = if matches.len() == 1 {
                vec![(matches[0], basis)]
            } else {
                split_by_casimir(l, field, &basis, &matches, &components)?
            };
            for (idx, basis) in pieces {
                let j = components[idx];
                if basis.cols() != j.dim() {
                    return Err(QError::Spectral(format!(
                        "eigenvalue {mean} on V_{j} has multiplicity {}, expected {}",
                        basis.cols(),
                        j.dim()
                    )));
                }
                let p = basis.matmul(&basis.transpose());
                eigenspaces.push((values[idx].clone(), j, basis, p));
            }
        }
    }
    eigenspaces.sort_by_key(|(_, j, _, _)| std::cmp::Reverse(*j));
    let mut pos = Mat::zeros(n, n);
    let mut neg = Mat::zeros(n, n);
    let mut out = Vec::new();
    for (value, component, basis, p) in eigenspaces {
        let positive = field.to_f64(&value) > 0.0;
        if positive {
            pos = pos + p;
        } else {
            neg = neg + p;
        }
        out.push(Eigenspace {
            value,
            component,
            positive,
            basis,
        });
    }
    Ok(SpectralSplit {
        eigenspaces: out,
        positive_projector: pos,
        negative_projector: neg,
    })
}

/// Separates coinciding `Ř` eigenvalues (the classical point) with the
/// central element `fe + [m][m+1]`, which is `[j][j+1]` on `V_j`.
fn split_by_casimir<F: QField>(
    l: Spin,
    field: &F,
    basis: &Mat<F::S>,
    candidates: &[usize],
    components: &[Spin],
) -> Result<Vec<(usize, Mat<F::S>)>> {
    let v = build_irrep(l, field);
    let t = tensor_rep(&v, &v, HopfStructure::Primary)?;
    let shift = Mat::diagonal(
        t.twice_weights()
            .iter()
            .map(|&w| field.qint(w / 2) * field.qint(w / 2 + 1))
            .collect(),
    );
    let casimir = t.gen(Gen::F).matmul(t.gen(Gen::E)) + shift;
    let restricted = basis.transpose().matmul(&casimir).matmul(basis).to_dmatrix(field);
    let sym = (&restricted + restricted.transpose()) * 0.5;
    let eig = nalgebra::SymmetricEigen::new(sym);
    let mut out = Vec::new();
    for &idx in candidates {
        let j2 = components[idx].twice() as i64 / 2;
        let want = field.to_f64(&(field.qint(j2) * field.qint(j2 + 1)));
        let cols: Vec<Vec<F::S>> = (0..eig.eigenvalues.len())
            .filter(|&i| (eig.eigenvalues[i] - want).abs() <= 1e-8 * want.abs().max(1.0))
            .map(|i| {
                let u: Vec<F::S> = eig
                    .eigenvectors
                    .column(i)
                    .iter()
                    .map(|&x| F::S::from_f64(x).expect("numeric mode"))
                    .collect();
                basis.mul_vec(&u)
            })
            .collect();
        out.push((idx, Mat::from_columns(&cols)));
    }
    Ok(out)
}

/// Eigenvalues of `Ř` from a dense symmetric eigensolver, ascending.
pub fn rhat_spectrum_f64<F: QField>(b: &BraidingOperator<F>) -> Vec<f64> {
    symmetric_eigenvalues(&b.rhat.to_dmatrix(&b.field))
}

/// Applies an operator on two adjacent legs `(i, i+1)` of `V^{(x)n}` to a
/// vector, without forming the full Kronecker product.
pub fn apply_adjacent<S: Scalar>(op: &Mat<S>, i: usize, d: usize, n: usize, v: &[S]) -> Vec<S> {
    assert!(i + 1 < n, "legs out of range");
    let left = d.pow(i as u32);
    let right = d.pow((n - i - 2) as u32);
    let mut out = vec![S::zero(); v.len()];
    let mut block = vec![S::zero(); d * d];
    for a in 0..left {
        for c in 0..right {
            let mut any = false;
            for (ab, slot) in block.iter_mut().enumerate() {
                *slot = v[(a * d * d + ab) * right + c].clone();
                any |= !slot.is_zero();
            }
            if !any {
                continue;
            }
            for (ab, x) in op.mul_vec(&block).into_iter().enumerate() {
                out[(a * d * d + ab) * right + c] = x;
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct HeckeReport {
    pub l: Spin,
    pub n: usize,
    /// `Ř_i Ř_{i+1} Ř_i = Ř_{i+1} Ř_i Ř_{i+1}`, worst over `i`; needs `n >= 3`.
    pub braid: Option<Residual>,
    /// `Ř_i Ř_j = Ř_j Ř_i` for `|i - j| >= 2`; needs `n >= 4`.
    pub distant: Option<Residual>,
    /// `prod_k (Ř_i - λ_k) = 0` for every `i`.
    pub characteristic: Residual,
}

impl HeckeReport {
    pub fn passed(&self) -> bool {
        self.braid.is_none_or(|r| r.holds)
            && self.distant.is_none_or(|r| r.holds)
            && self.characteristic.holds
    }
}

/// Checks the generalised Hecke relations of the `Ř_i` on `V_l^{(x)n}` by
/// applying both sides of each identity to every basis vector.
pub fn verify_hecke<F: QField>(l: Spin, n: usize, field: &F) -> Result<HeckeReport> {
    if n < 2 {
        return Err(QError::Invalid("Hecke relations need at least two legs".into()));
    }
    let d = l.dim();
    let total = d.pow(n as u32);
    if total > 20_000 {
        return Err(QError::Invalid(format!("V^(x){n} has dimension {total}, too large")));
    }
    let b = braiding_op(l, l, field);
    let values: Vec<F::S> = (0..=2 * l.twice())
        .step_by(2)
        .map(|j| rhat_eigenvalue(l, Spin::from_twice(j), field))
        .collect();
    let apply = |i: usize, v: &[F::S]| apply_adjacent(&b.rhat, i, d, n, v);
    let basis = |k: usize| {
        let mut v = vec![F::S::zero(); total];
        v[k] = F::S::one();
        v
    };
    let diff_residual = |lhs: Vec<Vec<F::S>>, rhs: Vec<Vec<F::S>>| {
        let cols: Vec<Vec<F::S>> = lhs
            .into_iter()
            .zip(rhs)
            .map(|(a, b)| a.into_iter().zip(b).map(|(x, y)| x - y).collect())
            .collect();
        residual(field, &Mat::from_columns(&cols))
    };

    let braid = (n >= 3).then(|| {
        (0..n - 2)
            .map(|i| {
                let lhs = (0..total).map(|k| apply(i, &apply(i + 1, &apply(i, &basis(k))))).collect();
                let rhs =
                    (0..total).map(|k| apply(i + 1, &apply(i, &apply(i + 1, &basis(k))))).collect();
                diff_residual(lhs, rhs)
            })
            .fold(Residual::ZERO, Residual::worst)
    });
    let distant = (n >= 4).then(|| {
        let mut worst = Residual::ZERO;
        for i in 0..n - 1 {
            for j in (i + 2)..n - 1 {
                let lhs = (0..total).map(|k| apply(i, &apply(j, &basis(k)))).collect();
                let rhs = (0..total).map(|k| apply(j, &apply(i, &basis(k)))).collect();
                worst = Residual::worst(worst, diff_residual(lhs, rhs));
            }
        }
        worst
    });
    let characteristic = (0..n - 1)
        .map(|i| {
            let lhs = (0..total)
                .map(|k| {
                    values.iter().fold(basis(k), |v, lam| {
                        apply(i, &v)
                            .into_iter()
                            .zip(&v)
                            .map(|(x, y)| x - lam.clone() * y.clone())
                            .collect()
                    })
                })
                .collect();
            diff_residual(lhs, vec![vec![F::S::zero(); total]; total])
        })
        .fold(Residual::ZERO, Residual::worst);
    Ok(HeckeReport {
        l,
        n,
        braid,
        distant,
        characteristic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qscalar::{Exact, Numeric, QExact};

    #[test]
    fn trivial_factor_gives_identity() {
        for twice in 0..=3 {
            let r = rmatrix(Spin::ZERO, Spin::from_twice(twice), &Exact);
            assert_eq!(r, Mat::identity(twice as usize + 1));
        }
    }

    #[test]
    fn closed_form_eigenvalues_on_adjoint_square() {
        let v = |j| rhat_eigenvalue(Spin::ONE, Spin::from_twice(j), &Exact);
        assert_eq!(v(4), QExact::t_pow(4));
        assert_eq!(v(2), -QExact::t_pow(-4));
        assert_eq!(v(0), QExact::t_pow(-8));
    }

    #[test]
    fn adjacent_application_matches_kronecker() {
        let field = Numeric::new(1.3).unwrap();
        let b = braiding_op(Spin::HALF, Spin::HALF, &field);
        let full = Mat::identity(2).kron(&b.rhat);
        for k in 0..8 {
            let mut v = vec![0.0; 8];
            v[k] = 1.0;
            let got = apply_adjacent(&b.rhat, 1, 2, 3, &v);
            assert_eq!(got, full.mul_vec(&v));
        }
    }
}
