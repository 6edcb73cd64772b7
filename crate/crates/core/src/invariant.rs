//! Module maps found by linear algebra: intertwiners between modules, the
//! invariant bilinear form on a self-dual module, and the canonical
//! invariant vector `Ω = sum_i v_i (x) v_i*`.

use crate::error::{QError, Result};
use crate::linalg::{residual, Mat, Residual};
use crate::qscalar::{QField, Scalar};
use crate::repr::{dual_rep, tensor_rep, Gen, HopfStructure, Representation};

/// Basis of `{ T : T π_src(x) = π_tgt(x) T }`.
pub fn intertwiner_space<F: QField>(src: &Representation<F>, tgt: &Representation<F>) -> Vec<Mat<F::S>> {
    let (ds, dt) = (src.dim(), tgt.dim());
    let unknowns = ds * dt;
    let mut blocks = Vec::new();
    for x in Gen::CHECKED {
        let (a, b) = (src.gen(x), tgt.gen(x));
        // row (i, j) of T a - b T, unknown T[i][m] at index i * ds + m
        let mut sys: Mat<F::S> = Mat::zeros(unknowns, unknowns);
        for i in 0..dt {
            for j in 0..ds {
                let row = i * ds + j;
                for m in 0..ds {
                    if !a[(m, j)].is_zero() {
                        let cell = &mut sys[(row, i * ds + m)];
                        *cell = cell.clone() + a[(m, j)].clone();
                    }
                }
                for m in 0..dt {
                    if !b[(i, m)].is_zero() {
                        let cell = &mut sys[(row, m * ds + j)];
                        *cell = cell.clone() - b[(i, m)].clone();
                    }
                }
            }
        }
        blocks.push(sys);
    }
    Mat::vstack(&blocks)
        .nullspace(src.field().tol())
        .into_iter()
        .map(|v| Mat::from_fn(dt, ds, |i, j| v[i * ds + j].clone()))
        .collect()
}

/// The unique-up-to-scale intertwiner between irreducibles, or `None` when
/// they are not isomorphic. Normalised so the first nonzero entry is
/// positive; exact solutions have that entry equal to 1, numeric ones have
/// largest entry of magnitude 1.
pub fn solve_intertwiner<F: QField>(
    src: &Representation<F>,
    tgt: &Representation<F>,
) -> Result<Option<Mat<F::S>>> {
    let mut space = intertwiner_space(src, tgt);
    match space.len() {
        0 => Ok(None),
        1 => Ok(Some(normalize_intertwiner(src.field(), space.pop().unwrap()))),
        n => Err(QError::SchurViolation(n)),
    }
}

fn normalize_intertwiner<F: QField>(field: &F, t: Mat<F::S>) -> Mat<F::S> {
    let first = t
        .entries()
        .iter()
        .find(|x| !x.is_negligible(field.tol()))
        .cloned()
        .expect("nonzero intertwiner");
    let scale = if <F::S as Scalar>::is_exact() {
        first.inv().expect("nonzero")
    } else {
        let m = t.max_abs(field);
        let s = F::S::from_f64(1.0 / m).expect("numeric");
        if field.to_f64(&first) < 0.0 {
            -s
        } else {
            s
        }
    };
    t.scale(&scale)
}

/// `B(v_i (x) v_j) = matrix[(i, j)]`.
#[derive(Clone, Debug)]
pub struct BilinearForm<S> {
    pub matrix: Mat<S>,
    /// `B(v_top (x) v_bottom + v_bottom (x) v_top)`, the constant `b` of the
    /// Clifford relation `ψ_top ψ_bottom + ψ_bottom ψ_top = b`.
    pub b: S,
}

impl<S: Scalar> BilinearForm<S> {
    /// Row vector of the form on `V (x) V`, index `i * n + j`.
    pub fn covector(&self) -> Vec<S> {
        self.matrix.entries().to_vec()
    }

    pub fn apply(&self, u: &[S]) -> S {
        self.matrix
            .entries()
            .iter()
            .zip(u)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    /// The map `φ : v -> B(v (x) .)` from `V` to `V*`, in the dual basis.
    pub fn phi(&self) -> Mat<S> {
        self.matrix.transpose()
    }

    /// The inverse `τ : V* -> V` of [`Self::phi`].
    pub fn tau(&self, tol: f64) -> Option<Mat<S>> {
        self.phi().inverse(tol)
    }
}

/// Covectors `β` on `V (x) V` with `β (ρ (x) ρ)Δ(x) = ε(x) β` for the
/// generators, as a basis of the solution space.
pub fn invariance_solutions<F: QField>(v: &Representation<F>, hopf: HopfStructure) -> Result<Vec<Vec<F::S>>> {
    let field = v.field();
    let t = tensor_rep(v, v, hopf)?;
    let n = t.dim();
    let blocks: Vec<Mat<F::S>> = Gen::CHECKED
        .iter()
        .map(|&x| {
            let eps = Mat::identity(n).scale(&F::S::from_i64(hopf.counit(x)));
            (t.gen(x) - &eps).transpose()
        })
        .collect();
    Ok(Mat::vstack(&blocks).nullspace(field.tol()))
}

/// The invariant form of a self-dual module, normalised to `b = -1`.
///
/// Built as `B(v (x) w) = eval(τ'(v) (x) w)` from the intertwiner
/// `τ' : V -> V*`, and cross-checked against the null space of the
/// invariance system; the two must agree up to scale.
pub fn invariant_form<F: QField>(v: &Representation<F>) -> Result<BilinearForm<F::S>> {
    let field = v.field();
    let dual = dual_rep(v, HopfStructure::Primary);
    let tau_prime = solve_intertwiner(v, &dual)?.ok_or(QError::NotSelfDual)?;
    let from_tau = tau_prime.transpose();

    let direct = invariance_solutions(v, HopfStructure::Primary)?;
    if direct.len() != 1 {
        return Err(QError::SchurViolation(direct.len()));
    }
    let n = v.dim();
    let direct = Mat::from_fn(n, n, |i, j| direct[0][i * n + j].clone());
    if !proportional(field, &from_tau, &direct) {
        return Err(QError::Invalid(
            "intertwiner and invariance-system forms disagree".into(),
        ));
    }

    let raw_b = from_tau[(0, n - 1)].clone() + from_tau[(n - 1, 0)].clone();
    let target = -F::S::one();
    let scale = if raw_b.is_negligible(field.tol()) {
        // antisymmetric forms (half-integer spin): pin B(top, bottom) = 1
        from_tau[(0, n - 1)].inv().ok_or(QError::NotSelfDual)?
    } else {
        target * raw_b.inv().expect("nonzero")
    };
    let matrix = from_tau.scale(&scale);
    let b = matrix[(0, n - 1)].clone() + matrix[(n - 1, 0)].clone();
    Ok(BilinearForm { matrix, b })
}

fn proportional<F: QField>(field: &F, a: &Mat<F::S>, b: &Mat<F::S>) -> bool {
    let Some(k) = a.entries().iter().position(|x| !x.is_negligible(field.tol())) else {
        return b.is_negligible(field.tol());
    };
    let Some(r) = b.entries()[k].clone().inv() else {
        return false;
    };
    let c = a.entries()[k].clone() * r;
    residual(field, &(a - &b.scale(&c))).holds
}

/// Residual of `β (ρ (x) ρ)Δ(x) - ε(x) β` over the generators.
pub fn form_invariance<F: QField>(v: &Representation<F>, form: &BilinearForm<F::S>) -> Result<Residual> {
    let field = v.field();
    let t = tensor_rep(v, v, HopfStructure::Primary)?;
    let beta = Mat::from_rows(vec![form.covector()]);
    let mut worst = Residual::ZERO;
    for x in Gen::CHECKED {
        let eps = F::S::from_i64(HopfStructure::Primary.counit(x));
        let r = beta.matmul(t.gen(x)) - beta.scale(&eps);
        worst = Residual::worst(worst, residual(field, &r));
    }
    Ok(worst)
}

/// `Ω = sum_i v_i (x) v_i*` in `V (x) V*`, index `i * n + j`.
pub fn invariant_vector<F: QField>(v: &Representation<F>) -> Vec<F::S> {
    let n = v.dim();
    let mut omega = vec![F::S::zero(); n * n];
    for i in 0..n {
        omega[i * n + i] = F::S::one();
    }
    omega
}

/// Residual of `(π (x) π*)Δ(x) Ω - ε(x) Ω` over the generators.
pub fn omega_invariance<F: QField>(v: &Representation<F>) -> Result<Residual> {
    let field = v.field();
    let t = tensor_rep(v, &dual_rep(v, HopfStructure::Primary), HopfStructure::Primary)?;
    let omega = Mat::column(invariant_vector(v));
    let mut worst = Residual::ZERO;
    for x in Gen::CHECKED {
        let eps = F::S::from_i64(HopfStructure::Primary.counit(x));
        let r = t.gen(x).matmul(&omega) - omega.scale(&eps);
        worst = Residual::worst(worst, residual(field, &r));
    }
    Ok(worst)
}
