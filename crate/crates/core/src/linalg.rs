//! Dense matrices over a [`Scalar`], with the handful of kernels the
//! representation theory needs: products, Kronecker products, row reduction,
//! null spaces and rank.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::DMatrix;

use crate::qscalar::{QField, Scalar};

#[derive(Clone, PartialEq)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S> Mat<S> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn diagonal(entries: Vec<S>) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.into_iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    /// Column vector.
    pub fn column(v: Vec<S>) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v,
        }
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<S> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|x| if x.is_zero() { S::zero() } else { x.clone() * c.clone() })
                .collect(),
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Mat<T> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = &self[(i, j)];
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc + a.clone() * x.clone();
                    }
                }
                acc
            })
            .collect()
    }

    /// `self * rhs`.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(
            self.cols, rhs.rows,
            "matmul shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let cell = &mut out.data[i * rhs.cols + j];
                    *cell = std::mem::replace(cell, S::zero()) + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn kron(&self, rhs: &Self) -> Self {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        let b = &rhs[(k, l)];
                        if !b.is_zero() {
                            out[(i * rhs.rows + k, j * rhs.cols + l)] = a.clone() * b.clone();
                        }
                    }
                }
            }
        }
        out
    }

    /// `self * rhs - rhs * self`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        self.matmul(rhs) - rhs.matmul(self)
    }

    pub fn pow(&self, n: u32) -> Self {
        assert!(self.is_square());
        (0..n).fold(Self::identity(self.rows), |acc, _| acc.matmul(self))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// All entries zero within `tol` (structural zero for exact scalars).
    pub fn is_negligible(&self, tol: f64) -> bool {
        self.data.iter().all(|x| x.is_negligible(tol))
    }

    /// Largest absolute entry as seen by `field` (exact entries are probed).
    pub fn max_abs<F: QField<S = S>>(&self, field: &F) -> f64 {
        self.data
            .iter()
            .filter(|x| !x.is_zero())
            .map(|x| field.to_f64(x).abs())
            .fold(0.0, f64::max)
    }

    /// Frobenius norm as seen by `field`.
    pub fn frobenius<F: QField<S = S>>(&self, field: &F) -> f64 {
        self.data
            .iter()
            .filter(|x| !x.is_zero())
            .map(|x| field.to_f64(x).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn to_dmatrix<F: QField<S = S>>(&self, field: &F) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| field.to_f64(&self[(i, j)]))
    }

    /// Reduced row echelon form; returns the reduced matrix and pivot columns.
    /// Entries with `is_negligible(tol)` are treated as zero.
    pub fn rref(&self, tol: f64) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // pick the heaviest candidate pivot in this column
            let mut best: Option<(usize, f64)> = None;
            for i in r..m.rows {
                let x = &m[(i, c)];
                if x.is_negligible(tol) {
                    continue;
                }
                let w = x.pivot_weight();
                if best.is_none_or(|(_, bw)| w > bw) {
                    best = Some((i, w));
                }
            }
            let Some((p, _)) = best else {
                for i in r..m.rows {
                    m[(i, c)] = S::zero();
                }
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("pivot is nonzero");
            for j in c..m.cols {
                let v = std::mem::replace(&mut m[(r, j)], S::zero());
                if !v.is_zero() {
                    m[(r, j)] = v * inv.clone();
                }
            }
            m[(r, c)] = S::one();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m[(i, c)].clone();
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let pv = m[(r, j)].clone();
                    if pv.is_zero() {
                        continue;
                    }
                    let cur = std::mem::replace(&mut m[(i, j)], S::zero());
                    m[(i, j)] = cur - factor.clone() * pv;
                }
                m[(i, c)] = S::zero();
            }
            pivots.push(c);
            r += 1;
        }
        if tol > 0.0 {
            for x in m.data.iter_mut() {
                if x.is_negligible(tol) {
                    *x = S::zero();
                }
            }
        }
        (m, pivots)
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.rref(tol).1.len()
    }

    /// Basis of `{ x : self * x = 0 }`, one vector per free column, with the
    /// free coordinate set to 1.
    pub fn nullspace(&self, tol: f64) -> Vec<Vec<S>> {
        let (r, pivots) = self.rref(tol);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    let x = &r[(row, f)];
                    if !x.is_zero() {
                        v[pc] = -x.clone();
                    }
                }
                v
            })
            .collect()
    }

    /// Determinant by elimination.
    pub fn det(&self, tol: f64) -> S {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = self.rows;
        let mut det = S::one();
        for c in 0..n {
            let mut best: Option<(usize, f64)> = None;
            for i in c..n {
                let x = &m[(i, c)];
                if !x.is_negligible(tol) {
                    let w = x.pivot_weight();
                    if best.is_none_or(|(_, bw)| w > bw) {
                        best = Some((i, w));
                    }
                }
            }
            let Some((p, _)) = best else {
                return S::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det = det * pivot.clone();
            let inv = pivot.inv().expect("pivot is nonzero");
            for i in (c + 1)..n {
                let f = m[(i, c)].clone();
                if f.is_zero() {
                    continue;
                }
                let f = f * inv.clone();
                for j in c..n {
                    let pv = m[(c, j)].clone();
                    if pv.is_zero() {
                        continue;
                    }
                    let cur = std::mem::replace(&mut m[(i, j)], S::zero());
                    m[(i, j)] = cur - f.clone() * pv;
                }
            }
        }
        det
    }

    pub fn inverse(&self, tol: f64) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                S::one()
            } else {
                S::zero()
            }
        });
        let (r, pivots) = aug.rref(tol);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| r[(i, j + n)].clone()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Stacks matrices with equal column counts vertically.
    pub fn vstack(blocks: &[Self]) -> Self {
        let cols = blocks.first().map_or(0, |b| b.cols);
        assert!(blocks.iter().all(|b| b.cols == cols), "vstack column mismatch");
        Self {
            rows: blocks.iter().map(|b| b.rows).sum(),
            cols,
            data: blocks.iter().flat_map(|b| b.data.iter().cloned()).collect(),
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<S>]) -> Self {
        let rows = cols.first().map_or(0, |c| c.len());
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }
}

impl<S> Index<(usize, usize)> for Mat<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Mat<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> Add for Mat<S> {
    type Output = Mat<S>;
    fn add(self, rhs: Mat<S>) -> Mat<S> {
        &self + &rhs
    }
}

impl<S: Scalar> Add<&Mat<S>> for &Mat<S> {
    type Output = Mat<S>;
    fn add(self, rhs: &Mat<S>) -> Mat<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add shape mismatch");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| match (a.is_zero(), b.is_zero()) {
                    (true, _) => b.clone(),
                    (_, true) => a.clone(),
                    _ => a.clone() + b.clone(),
                })
                .collect(),
        }
    }
}

impl<S: Scalar> Sub for Mat<S> {
    type Output = Mat<S>;
    fn sub(self, rhs: Mat<S>) -> Mat<S> {
        &self - &rhs
    }
}

impl<S: Scalar> Sub<&Mat<S>> for &Mat<S> {
    type Output = Mat<S>;
    fn sub(self, rhs: &Mat<S>) -> Mat<S> {
        self + &(-rhs.clone())
    }
}

impl<S: Scalar> Neg for Mat<S> {
    type Output = Mat<S>;
    fn neg(self) -> Mat<S> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.into_iter().map(|x| -x).collect(),
        }
    }
}

impl<S: Scalar> Mul for Mat<S> {
    type Output = Mat<S>;
    fn mul(self, rhs: Mat<S>) -> Mat<S> {
        self.matmul(&rhs)
    }
}

impl<S: Scalar> Mul<&Mat<S>> for &Mat<S> {
    type Output = Mat<S>;
    fn mul(self, rhs: &Mat<S>) -> Mat<S> {
        self.matmul(rhs)
    }
}

impl<S: fmt::Debug> fmt::Debug for Mat<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for row in self.data.chunks(self.cols.max(1)) {
            writeln!(f, "  {:?}", row)?;
        }
        write!(f, "]")
    }
}

/// Outcome of testing a matrix identity `m = 0`: structural in exact mode,
/// within the field tolerance in numeric mode. `norm` is the largest entry
/// (exact residuals are probed numerically for reporting).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residual {
    pub norm: f64,
    pub holds: bool,
}

impl Residual {
    pub fn worst(a: Residual, b: Residual) -> Residual {
        Residual {
            norm: a.norm.max(b.norm),
            holds: a.holds && b.holds,
        }
    }

    pub const ZERO: Residual = Residual {
        norm: 0.0,
        holds: true,
    };
}

pub fn residual<F: QField>(field: &F, m: &Mat<F::S>) -> Residual {
    let norm = m.max_abs(field);
    let holds = if <F::S as Scalar>::is_exact() {
        m.is_zero()
    } else {
        norm <= field.tol()
    };
    Residual { norm, holds }
}

/// Permutation matrix of the flip `V_a (x) V_b -> V_b (x) V_a`,
/// sending `e_i (x) e_j` to `e_j (x) e_i`.
pub fn flip<S: Scalar>(da: usize, db: usize) -> Mat<S> {
    let mut p = Mat::zeros(da * db, da * db);
    for i in 0..da {
        for j in 0..db {
            p[(j * da + i, i * db + j)] = S::one();
        }
    }
    p
}

/// Eigenvalues of a real symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let eig = nalgebra::SymmetricEigen::new(m.clone());
    let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

/// Groups sorted values into clusters whose neighbours differ by at most `tol`
/// (relative to `max(1, |value|)`). Returns `(mean, count)` pairs.
pub fn cluster_values(sorted: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize, f64)> = Vec::new();
    for &v in sorted {
        match out.last_mut() {
            Some((sum, count, last)) if (v - *last).abs() <= tol * last.abs().max(1.0) => {
                *sum += v;
                *count += 1;
                *last = v;
            }
            _ => out.push((v, 1, v)),
        }
    }
    out.into_iter().map(|(s, c, _)| (s / c as f64, c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qscalar::{Exact, QExact, QField};

    fn m(rows: &[&[f64]]) -> Mat<f64> {
        Mat::from_rows(rows.iter().map(|r| r.to_vec()).collect())
    }

    #[test]
    fn kron_matches_block_layout() {
        let a = m(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let b = m(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let k = a.kron(&b);
        assert_eq!(k[(0, 1)], 1.0);
        assert_eq!(k[(1, 0)], 1.0);
        assert_eq!(k[(2, 3)], 4.0);
        assert_eq!(k[(3, 0)], 3.0);
        assert_eq!(k[(0, 3)], 2.0);
    }

    #[test]
    fn nullspace_of_rank_deficient_matrix() {
        let a = m(&[&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]]);
        let ns = a.nullspace(1e-12);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(a.mul_vec(&v).iter().all(|x| x.abs() < 1e-12));
        }
        assert_eq!(a.rank(1e-12), 1);
    }

    #[test]
    fn exact_determinant_and_inverse() {
        let q = Exact;
        let a = Mat::from_rows(vec![
            vec![q.q_pow(1), QExact::one()],
            vec![QExact::one(), q.q_pow(-1)],
        ]);
        // det = 1 - 1 = 0
        assert!(a.det(0.0).is_zero());
        let b = Mat::from_rows(vec![
            vec![q.q_pow(1), QExact::one()],
            vec![QExact::zero(), q.sqrt_qint(2)],
        ]);
        let inv = b.inverse(0.0).unwrap();
        assert_eq!(b.matmul(&inv), Mat::identity(2));
    }

    #[test]
    fn flip_swaps_tensor_factors() {
        let p: Mat<f64> = flip(2, 3);
        // e_0 (x) e_2 (index 2) maps to e_2 (x) e_0 (index 4)
        assert_eq!(p[(4, 2)], 1.0);
        assert_eq!(p.matmul(&flip(3, 2)), Mat::identity(6));
    }

    #[test]
    fn clustering_merges_near_values() {
        let c = cluster_values(&[1.0, 1.0 + 1e-12, 2.0, 2.0, 2.0], 1e-8);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].1, 2);
        assert_eq!(c[1].1, 3);
    }
}
