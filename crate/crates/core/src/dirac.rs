//! The covariant Dirac operator `D = Σ α_ij Z_i ⊗ ψ_j` on `V_l ⊗ Σ`.
//!
//! `Z_i` spans a copy of the adjoint module inside `U_q` under the adjoint
//! action of the opposite Hopf structure, `α` comes from the module map
//! `τ : V* -> V`, and `ψ_j` act on `Σ` through the spin representation. The
//! same recipe with the primary adjoint action gives the naive operator `A`,
//! which is invariant but does not commute with the action on `V_l ⊗ Σ`.

use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use crate::braiding::{braiding_op, spectral_split};
use crate::clifford::{build_clifford, spin_representation, CliffordAlgebra, CliffordElement, SpinRepresentation};
use crate::error::{QError, Result};
use crate::invariant::invariant_form;
use crate::linalg::{cluster_values, residual, symmetric_eigenvalues, Mat, Residual};
use crate::qscalar::{Exact, QExact, QField, Scalar};
use crate::repr::{build_irrep, tensor_rep, AlgebraElement, Gen, HopfStructure, Pbw};
use crate::spin::Spin;

/// The `N` making `D + NΓ` have spectrum `±(2l+1)` at `q = 1`, where the
/// cubic term reduces to Kostant's. There `s(Γ) = 3√2`, so `NΓ` is the unit
/// shift separating `2l` and `-(2l+2)` symmetrically.
pub const KOSTANT_N: f64 = std::f64::consts::SQRT_2 / 6.0;

/// Group-like candidates for the symbol `t` in `Z_1 = t^-1 e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupLike {
    One,
    K,
    Kinv,
}

impl GroupLike {
    pub const ALL: [GroupLike; 3] = [GroupLike::One, GroupLike::K, GroupLike::Kinv];

    fn inverse_word(self) -> Vec<Gen> {
        match self {
            GroupLike::One => vec![],
            GroupLike::K => vec![Gen::Kinv],
            GroupLike::Kinv => vec![Gen::K],
        }
    }
}

/// Three elements of `U_q` transforming as `V_1` under the adjoint action of
/// `hopf`, listed by weight `1, 0, -1`.
#[derive(Clone, Debug)]
pub struct QuantumLieBasis {
    pub hopf: HopfStructure,
    pub elements: [AlgebraElement; 3],
}

fn q(e: i64) -> QExact {
    QExact::t_pow(2 * e)
}

/// `Z_1 = t^-1 e`, `Z_0 = (q^-1 fe - q ef)/sqrt([2])`, `Z_-1 = -t^-1 f`.
pub fn opposite_candidate(t: GroupLike) -> QuantumLieBasis {
    let tinv = t.inverse_word();
    let z1 = AlgebraElement::word([tinv.clone(), vec![Gen::E]].concat());
    let inv_root2 = QExact::sqrt_qint(2).inv().expect("nonzero");
    let z0 = (AlgebraElement::term(q(-1), vec![Gen::F, Gen::E]) - AlgebraElement::term(q(1), vec![Gen::E, Gen::F]))
        .scale(&inv_root2);
    let zm = AlgebraElement::term(-QExact::one(), [tinv, vec![Gen::F]].concat());
    QuantumLieBasis {
        hopf: HopfStructure::Opposite,
        elements: [z1, z0, zm],
    }
}

/// Checks `x ▷ Z_i = Σ_j ρ(x)_ji Z_j` in PBW normal form, returning the
/// failing generators.
pub fn covariance_failures(basis: &QuantumLieBasis) -> Vec<(Gen, usize)> {
    let rho = build_irrep(Spin::ONE, &Exact);
    let mut bad = Vec::new();
    for x in Gen::ALL {
        for i in 0..3 {
            let lhs = AlgebraElement::adjoint(basis.hopf, &AlgebraElement::gen(x), &basis.elements[i]);
            let rhs = (0..3).fold(AlgebraElement::zero(), |acc, j| {
                acc + basis.elements[j].scale(&rho.gen(x)[(j, i)])
            });
            if !(lhs - rhs).normal_form().is_zero() {
                bad.push((x, i));
            }
        }
    }
    bad
}

/// The basis `Z_i` with `t = k`, validated by the covariance check.
pub fn quantum_lie_basis() -> Result<QuantumLieBasis> {
    let basis = opposite_candidate(GroupLike::K);
    let bad = covariance_failures(&basis);
    if !bad.is_empty() {
        return Err(QError::Covariance(format!("opposite basis fails for {bad:?}")));
    }
    Ok(basis)
}

/// The analogous basis under the primary adjoint action: the highest weight
/// vector is found among `k^b e`, then lowered with `f`.
pub fn naive_lie_basis() -> Result<QuantumLieBasis> {
    let hopf = HopfStructure::Primary;
    let e = AlgebraElement::gen(Gen::E);
    let f = AlgebraElement::gen(Gen::F);
    let top = [vec![Gen::Kinv], vec![], vec![Gen::K]]
        .into_iter()
        .map(|w| AlgebraElement::word([w, vec![Gen::E]].concat()))
        .find(|x| AlgebraElement::adjoint(hopf, &e, x).normal_form().is_zero())
        .ok_or_else(|| QError::Covariance("no highest weight vector among k^b e".into()))?;
    let inv_root2 = QExact::sqrt_qint(2).inv().expect("nonzero");
    let lower = |x: &AlgebraElement| AlgebraElement::adjoint(hopf, &f, x).normal_form().to_element().scale(&inv_root2);
    let mid = lower(&top);
    let low = lower(&mid);
    let basis = QuantumLieBasis {
        hopf,
        elements: [top, mid, low],
    };
    let bad = covariance_failures(&basis);
    if !bad.is_empty() {
        return Err(QError::Covariance(format!("primary basis fails for {bad:?}")));
    }
    Ok(basis)
}

/// `Σ α_ij L_i ⊗ ψ_j` for a quantum Lie basis `L`, realised on `V_l ⊗ Σ`.
///
/// With the opposite basis this is the Dirac operator `D`; with the primary
/// one it is the naive operator `A`.
pub struct DiracOperator<F: QField> {
    field: F,
    pub basis: QuantumLieBasis,
    /// `α_ij`, rows indexed by the Lie basis, columns by the generators `ψ`.
    pub alpha: Mat<F::S>,
    /// `τ : V* -> V`, the inverse of `v -> B(v ⊗ .)`.
    pub tau: Mat<F::S>,
    pub clifford: CliffordAlgebra<F>,
    pub spin: SpinRepresentation<F>,
    cache: RwLock<BTreeMap<Spin, Arc<Mat<F::S>>>>,
}

impl<F: QField> std::fmt::Debug for DiracOperator<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DiracOperator")
            .field("field", &self.field)
            .field("hopf", &self.basis.hopf)
            .field("alpha", &self.alpha)
            .finish()
    }
}

/// `D`, built from the invariant form, the positive part of `Ř` and the spin
/// representation, all over `field`.
pub fn build_dirac<F: QField>(field: &F) -> Result<DiracOperator<F>> {
    DiracOperator::new(field, quantum_lie_basis()?)
}

/// The naive operator `A`.
pub fn build_naive<F: QField>(field: &F) -> Result<DiracOperator<F>> {
    DiracOperator::new(field, naive_lie_basis()?)
}

impl<F: QField> DiracOperator<F> {
    pub fn new(field: &F, basis: QuantumLieBasis) -> Result<Self> {
        let v = build_irrep(Spin::ONE, field);
        let form = invariant_form(&v)?;
        let split = spectral_split(&braiding_op(Spin::ONE, Spin::ONE, field))?;
        let clifford = build_clifford(&v, &form, &split)?;
        let spin = spin_representation(&clifford)?;
        let tau = form.tau(field.tol()).ok_or(QError::NotSelfDual)?;
        // D = Σ_l L_l ⊗ γ(τ(v_l*)) = Σ_{l,j} τ_jl L_l ⊗ ψ_j
        let alpha = tau.transpose();
        Ok(Self {
            field: field.clone(),
            basis,
            alpha,
            tau,
            clifford,
            spin,
            cache: RwLock::new(BTreeMap::new()),
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// The matrix on `V_l ⊗ Σ`, cached per spin.
    pub fn realize(&self, l: Spin) -> Arc<Mat<F::S>> {
        if let Some(m) = self.cache.read().expect("cache lock").get(&l) {
            return Arc::clone(m);
        }
        let rep = build_irrep(l, &self.field);
        let lie: Vec<Mat<F::S>> = self.basis.elements.iter().map(|z| rep.eval(z)).collect();
        let d = rep.dim() * self.spin.dim();
        let mut out = Mat::zeros(d, d);
        for (i, z) in lie.iter().enumerate() {
            for (j, s) in self.spin.s.iter().enumerate() {
                let a = &self.alpha[(i, j)];
                if !a.is_zero() {
                    out = out + z.kron(s).scale(a);
                }
            }
        }
        let out = Arc::new(out);
        self.cache
            .write()
            .expect("cache lock")
            .entry(l)
            .or_insert_with(|| Arc::clone(&out))
            .clone()
    }

    /// `(π_l ⊗ σ)Δ(x)`.
    pub fn action(&self, l: Spin, x: Gen) -> Result<Mat<F::S>> {
        let rep = build_irrep(l, &self.field);
        Ok(tensor_rep(&rep, &self.spin.sigma, HopfStructure::Primary)?.gen(x).clone())
    }

    /// Largest commutator `[realize(l), (π_l ⊗ σ)Δ(x)]` over the generators.
    pub fn commutator(&self, l: Spin) -> Result<Residual> {
        let m = self.realize(l);
        let mut worst = Residual::ZERO;
        for x in Gen::CHECKED {
            worst = Residual::worst(worst, residual(&self.field, &m.commutator(&self.action(l, x)?)));
        }
        Ok(worst)
    }

    /// Coefficient vector `α` on `V ⊗ V` (index `i * 3 + j`) is invariant
    /// under `(ρ ⊗ ρ)Δ`; together with the covariance of the Lie basis this
    /// is the invariance of the operator.
    pub fn coefficient_invariance(&self) -> Result<Residual> {
        let v = build_irrep(Spin::ONE, &self.field);
        let t = tensor_rep(&v, &v, HopfStructure::Primary)?;
        let a = self.alpha.entries().to_vec();
        let mut worst = Residual::ZERO;
        for x in Gen::CHECKED {
            let eps = F::S::from_i64(HopfStructure::Primary.counit(x));
            let moved: Vec<F::S> = t
                .gen(x)
                .mul_vec(&a)
                .into_iter()
                .zip(&a)
                .map(|(m, a)| m - eps.clone() * a.clone())
                .collect();
            worst = Residual::worst(worst, residual(&self.field, &Mat::column(moved)));
        }
        Ok(worst)
    }

    /// The cubic term `Γ = 1 ⊗ m(θ ⊗ γ∘τ)(Ω)`.
    pub fn cubic_term(&self) -> Result<CubicTerm<F>> {
        cubic_term(self)
    }

    /// `realize(l) + n Γ`.
    pub fn with_cubic(&self, l: Spin, n: &F::S) -> Result<Mat<F::S>> {
        let g = self.cubic_term()?;
        Ok(self.realize(l).as_ref().clone() + g.realize(l).scale(n))
    }

    /// Closed-form spectrum, checked against the realised matrix.
    pub fn spectrum(&self, l: Spin) -> Result<Vec<(F::S, usize)>> {
        let want = closed_form_spectrum(l, &self.field);
        let m = self.realize(l);
        let n = m.rows();
        let tol = self.field.tol();
        if <F::S as Scalar>::is_exact() {
            // diagonalisable with exactly these eigenvalues iff the product of
            // the shifts vanishes and the nullities add up
            let mut prod = Mat::identity(n);
            for (lam, mult) in &want {
                let shifted = m.as_ref().clone() - Mat::identity(n).scale(lam);
                let nullity = n - shifted.rank(tol);
                if nullity != *mult {
                    return Err(QError::Spectral(format!(
                        "l = {l}: eigenvalue {} has multiplicity {nullity}, expected {mult}",
                        self.field.to_qvalue(lam)
                    )));
                }
                prod = prod.matmul(&shifted);
            }
            if !prod.is_zero() {
                return Err(QError::Spectral(format!("l = {l}: not annihilated by the spectral polynomial")));
            }
        } else {
            let got = numeric_spectrum(&self.field, &m)?;
            let ok = got.len() == want.len()
                && got.iter().zip(&want).all(|((a, ma), (b, mb))| {
                    let b = self.field.to_f64(b);
                    ma == mb && (a - b).abs() <= crate::qscalar::MATRIX_TOL * b.abs().max(1.0)
                });
            if !ok {
                return Err(QError::Spectral(format!("l = {l}: eigenvalues {got:?}")));
            }
        }
        Ok(want)
    }
}

/// `[2l]` with multiplicity `2l+2` and `-[2l+2]` with multiplicity `2l`,
/// ascending; `{(0, 2)}` at `l = 0`.
pub fn closed_form_spectrum<F: QField>(l: Spin, field: &F) -> Vec<(F::S, usize)> {
    let n = l.twice() as i64;
    if n == 0 {
        return vec![(F::S::zero(), 2)];
    }
    vec![(-field.qint(n + 2), n as usize), (field.qint(n), n as usize + 2)]
}

/// Eigenvalues of a real symmetric matrix grouped into `(value, count)`,
/// ascending.
pub fn numeric_spectrum<F: QField>(field: &F, m: &Mat<F::S>) -> Result<Vec<(f64, usize)>> {
    let dm = m.to_dmatrix(field);
    let asym = (&dm - dm.transpose()).amax();
    if asym > crate::qscalar::MATRIX_TOL * dm.amax().max(1.0) {
        return Err(QError::Spectral(format!("operator is not symmetric ({asym:e})")));
    }
    let ev = symmetric_eigenvalues(&((&dm + dm.transpose()) * 0.5));
    Ok(cluster_values(&ev, 1e-8))
}

/// Invariance `Δ(x)(⊵ ⊗ ▷)L = ε(x)L` in PBW normal form on the `U_q` leg,
/// for every generator; returns the failing generators.
///
/// `⊵` is the adjoint action of the basis' own Hopf structure, `▷` is the
/// primary action on the `ψ`.
pub fn symbolic_invariance_failures(d: &DiracOperator<Exact>) -> Vec<Gen> {
    let rho = build_irrep(Spin::ONE, &Exact);
    let z = &d.basis.elements;
    let mut bad = Vec::new();
    for x in Gen::ALL {
        // coefficient of ψ_m, as an element of U_q
        let mut legs: Vec<Pbw> = vec![Pbw::default(); 3];
        for (a, b) in HopfStructure::Primary.coproduct(x) {
            let ga = AlgebraElement::gen(a);
            for i in 0..3 {
                let moved = AlgebraElement::adjoint(d.basis.hopf, &ga, &z[i]).normal_form();
                for j in 0..3 {
                    if d.alpha[(i, j)].is_zero() {
                        continue;
                    }
                    for (m, leg) in legs.iter_mut().enumerate() {
                        let c = d.alpha[(i, j)].clone() * rho.gen(b)[(m, j)].clone();
                        if !c.is_zero() {
                            *leg = leg.clone() + moved.scale(&c);
                        }
                    }
                }
            }
        }
        let eps = QExact::from_i64(HopfStructure::Primary.counit(x));
        let ok = (0..3).all(|m| {
            let want = (0..3).fold(Pbw::default(), |acc, i| {
                acc + z[i].normal_form().scale(&(d.alpha[(i, m)].clone() * eps.clone()))
            });
            (legs[m].clone() + want.scale(&-QExact::one())).is_zero()
        });
        if !ok {
            bad.push(x);
        }
    }
    bad
}

/// `Γ = 1 ⊗ c` with `c = Σ_{l,j} τ_jl θ(v_l) ψ_j` in the Clifford algebra,
/// where `θ : V -> V ⊗ V` embeds the adjoint copy of the negative part.
#[derive(Clone, Debug)]
pub struct CubicTerm<F: QField> {
    /// Columns `θ(v_m)` on `V ⊗ V`, index `a * 3 + b`.
    pub theta: Mat<F::S>,
    /// `c` in normal form.
    pub element: CliffordElement<F::S>,
    /// `s(c)` on `Σ`.
    pub spin_image: Mat<F::S>,
}

impl<F: QField> CubicTerm<F> {
    /// `1 ⊗ s(c)` on `V_l ⊗ Σ`.
    pub fn realize(&self, l: Spin) -> Mat<F::S> {
        Mat::identity(l.dim()).kron(&self.spin_image)
    }

    /// Generators `x` with `x ▷ c ≠ ε(x) c` in the Clifford algebra.
    pub fn invariance_failures(&self, clifford: &CliffordAlgebra<F>) -> Vec<Gen> {
        let tol = clifford.field().tol();
        Gen::ALL
            .into_iter()
            .filter(|&x| {
                let eps = F::S::from_i64(HopfStructure::Primary.counit(x));
                !clifford.act(x, &self.element).sub(&self.element.scale(&eps)).is_negligible(tol)
            })
            .collect()
    }
}

pub fn cubic_term<F: QField>(d: &DiracOperator<F>) -> Result<CubicTerm<F>> {
    let field = &d.field;
    let tol = field.tol();
    let v = build_irrep(Spin::ONE, field);
    let split = spectral_split(&braiding_op(Spin::ONE, Spin::ONE, field))?;
    let space = split
        .eigenspaces
        .iter()
        .find(|e| !e.positive && e.component == Spin::ONE)
        .ok_or(QError::ThetaNotFound)?;
    let t = tensor_rep(&v, &v, HopfStructure::Primary)?;
    // highest weight vector: combination of the columns supported in weight 2
    let off: Vec<usize> = (0..9).filter(|&i| t.twice_weights()[i] != 2).collect();
    let restricted = Mat::from_fn(off.len(), space.dim(), |r, c| space.basis[(off[r], c)].clone());
    let coeffs = restricted.nullspace(tol);
    if coeffs.len() != 1 {
        return Err(QError::ThetaNotFound);
    }
    let mut top = space.basis.mul_vec(&coeffs[0]);
    let lead = top
        .iter()
        .find(|x| !x.is_negligible(tol))
        .cloned()
        .ok_or(QError::ThetaNotFound)?;
    let unit = lead.inv().expect("nonzero");
    top = top.into_iter().map(|x| x * unit.clone()).collect();
    let mut cols = vec![top];
    for m in [1i64, 0] {
        // f|1,m> = sqrt([1-m+1][1+m]) |1,m-1>
        let c = field.sqrt_qint(2 - m) * field.sqrt_qint(1 + m);
        let next = t.gen(Gen::F).mul_vec(cols.last().expect("nonempty"));
        let inv = c.inv().expect("nonzero");
        cols.push(next.into_iter().map(|x| x * inv.clone()).collect());
    }
    let theta = Mat::from_columns(&cols);
    for x in Gen::CHECKED {
        let r = residual(field, &(t.gen(x).matmul(&theta) - theta.matmul(v.gen(x))));
        if !r.holds {
            return Err(QError::Covariance(format!("θ fails to intertwine {x}")));
        }
    }
    let mut c = CliffordElement::zero();
    for l in 0..3 {
        for j in 0..3 {
            let a = &d.tau[(j, l)];
            if a.is_negligible(tol) {
                continue;
            }
            for ab in 0..9 {
                let th = &theta[(ab, l)];
                if !th.is_negligible(tol) {
                    c.add_term(vec![(ab / 3) as u8, (ab % 3) as u8, j as u8], a.clone() * th.clone());
                }
            }
        }
    }
    let element = d.clifford.reduce(&c);
    let spin_image = d.spin.realize(&element);
    Ok(CubicTerm {
        theta,
        element,
        spin_image,
    })
}
