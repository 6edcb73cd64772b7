//! Finite-dimensional modules of U_q(su(2)): the irreducibles `V_l`, duals,
//! tensor products through either Hopf structure, and their decomposition.

mod decompose;
pub mod element;
pub mod hopf;

use std::fmt;

pub use decompose::{decompose, Component};
pub use element::{AlgebraElement, Pbw, MAX_LEGS};
pub use hopf::HopfStructure;

use crate::error::{QError, Result};
use crate::linalg::{residual, Mat, Residual};
use crate::qscalar::{QField, Scalar};
use crate::spin::Spin;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    E,
    F,
    K,
    Kinv,
}

impl Gen {
    pub const ALL: [Gen; 4] = [Gen::E, Gen::F, Gen::K, Gen::Kinv];
    /// The generators whose identities are checked (`k^-1` follows from `k`).
    pub const CHECKED: [Gen; 3] = [Gen::E, Gen::F, Gen::K];

    pub fn symbol(self) -> &'static str {
        match self {
            Gen::E => "e",
            Gen::F => "f",
            Gen::K => "k",
            Gen::Kinv => "k^-1",
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A module given by the matrices of `e, f, k, k^-1` in a basis of
/// `k`-eigenvectors. `twice_weights[i]` is `2m` for basis vector `i`.
#[derive(Clone, Debug)]
pub struct Representation<F: QField> {
    field: F,
    spin: Option<Spin>,
    twice_weights: Vec<i64>,
    e: Mat<F::S>,
    f: Mat<F::S>,
    k: Mat<F::S>,
    kinv: Mat<F::S>,
}

impl<F: QField> Representation<F> {
    pub fn from_matrices(
        field: F,
        twice_weights: Vec<i64>,
        e: Mat<F::S>,
        f: Mat<F::S>,
        k: Mat<F::S>,
        kinv: Mat<F::S>,
    ) -> Result<Self> {
        let d = twice_weights.len();
        for (name, m) in [("e", &e), ("f", &f), ("k", &k), ("k^-1", &kinv)] {
            if m.rows() != d || m.cols() != d {
                return Err(QError::Dimension(format!(
                    "{name} is {}x{}, expected {d}x{d}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(Self {
            field,
            spin: None,
            twice_weights,
            e,
            f,
            k,
            kinv,
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// Highest weight, for the irreducibles built by [`build_irrep`].
    pub fn spin(&self) -> Option<Spin> {
        self.spin
    }

    pub fn dim(&self) -> usize {
        self.twice_weights.len()
    }

    pub fn twice_weights(&self) -> &[i64] {
        &self.twice_weights
    }

    pub fn gen(&self, g: Gen) -> &Mat<F::S> {
        match g {
            Gen::E => &self.e,
            Gen::F => &self.f,
            Gen::K => &self.k,
            Gen::Kinv => &self.kinv,
        }
    }

    /// Matrix of an arbitrary element.
    pub fn eval(&self, x: &AlgebraElement) -> Mat<F::S> {
        x.eval(self)
    }

    /// Matrix of `S(g)`.
    pub fn antipode(&self, hopf: HopfStructure, g: Gen) -> Mat<F::S> {
        hopf.antipode(g).eval(self)
    }

    /// Copy with one generator matrix replaced; used for negative controls.
    pub fn with_generator(&self, g: Gen, m: Mat<F::S>) -> Self {
        let mut out = self.clone();
        out.spin = None;
        match g {
            Gen::E => out.e = m,
            Gen::F => out.f = m,
            Gen::K => out.k = m,
            Gen::Kinv => out.kinv = m,
        }
        out
    }

    /// Same module with every matrix mapped into another field; the
    /// `convert` closure must be a ring homomorphism.
    pub fn map_field<G: QField>(&self, field: G, convert: impl Fn(&F::S) -> G::S) -> Representation<G> {
        Representation {
            field,
            spin: self.spin,
            twice_weights: self.twice_weights.clone(),
            e: self.e.map(&convert),
            f: self.f.map(&convert),
            k: self.k.map(&convert),
            kinv: self.kinv.map(&convert),
        }
    }
}

/// `V_l`, basis `|l,m>` with `m = l, l-1, ..., -l`:
/// `k|m> = q^m|m>`, `e|m> = sqrt([l-m][l+m+1])|m+1>`,
/// `f|m> = sqrt([l-m+1][l+m])|m-1>`.
pub fn build_irrep<F: QField>(l: Spin, field: &F) -> Representation<F> {
    let d = l.dim();
    let l2 = l.twice() as i64;
    let weights: Vec<i64> = l.twice_weights().collect();
    let mut e = Mat::zeros(d, d);
    let mut f = Mat::zeros(d, d);
    for (i, &m2) in weights.iter().enumerate() {
        if i > 0 {
            // [l-m][l+m+1] in doubled units
            e[(i - 1, i)] = sqrt_qint_product(field, (l2 - m2) / 2, (l2 + m2) / 2 + 1);
        }
        if i + 1 < d {
            f[(i + 1, i)] = sqrt_qint_product(field, (l2 - m2) / 2 + 1, (l2 + m2) / 2);
        }
    }
    let k = Mat::diagonal(weights.iter().map(|&m2| field.q_half_pow(m2)).collect());
    let kinv = Mat::diagonal(weights.iter().map(|&m2| field.q_half_pow(-m2)).collect());
    Representation {
        field: field.clone(),
        spin: Some(l),
        twice_weights: weights,
        e,
        f,
        k,
        kinv,
    }
}

pub(crate) fn sqrt_qint_product<F: QField>(field: &F, a: i64, b: i64) -> F::S {
    field.sqrt_qint(a) * field.sqrt_qint(b)
}

/// `x -> π(S(x))^T` on the dual basis.
pub fn dual_rep<F: QField>(rep: &Representation<F>, hopf: HopfStructure) -> Representation<F> {
    let m = |g| rep.antipode(hopf, g).transpose();
    Representation {
        field: rep.field.clone(),
        spin: None,
        twice_weights: rep.twice_weights.iter().map(|w| -w).collect(),
        e: m(Gen::E),
        f: m(Gen::F),
        k: m(Gen::K),
        kinv: m(Gen::Kinv),
    }
}

/// Action `(π_A (x) π_B) Δ(x)` on `A (x) B`, basis `a_i (x) b_j` at index
/// `i * dim(B) + j`.
pub fn tensor_rep<F: QField>(
    a: &Representation<F>,
    b: &Representation<F>,
    hopf: HopfStructure,
) -> Result<Representation<F>> {
    if a.field != b.field {
        return Err(QError::Invalid(format!(
            "tensor factors live in different scalar modes ({} and {})",
            a.field.label(),
            b.field.label()
        )));
    }
    let act = |g: Gen| {
        hopf.coproduct(g)
            .into_iter()
            .map(|(x, y)| a.gen(x).kron(b.gen(y)))
            .reduce(|s, t| s + t)
            .expect("coproducts are nonempty")
    };
    let weights = a
        .twice_weights
        .iter()
        .flat_map(|wa| b.twice_weights.iter().map(move |wb| wa + wb))
        .collect();
    Ok(Representation {
        field: a.field.clone(),
        spin: None,
        twice_weights: weights,
        e: act(Gen::E),
        f: act(Gen::F),
        k: act(Gen::K),
        kinv: act(Gen::Kinv),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationCheck {
    pub name: &'static str,
    pub residual: Residual,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationReport {
    pub checks: Vec<RelationCheck>,
    /// The q-Serre relations need two simple roots; for su(2) there are none.
    pub serre_vacuous: bool,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.residual.holds)
    }

    pub fn violations(&self) -> Vec<&RelationCheck> {
        self.checks.iter().filter(|c| !c.residual.holds).collect()
    }
}

/// Checks `k k^-1 = k^-1 k = 1`, `k e k^-1 = q e`, `k f k^-1 = q^-1 f` and
/// `[e, f] = (k^2 - k^-2) / (q - q^-1)`.
pub fn check_defining_relations<F: QField>(rep: &Representation<F>) -> RelationReport {
    let field = &rep.field;
    let (e, f, k, ki) = (&rep.e, &rep.f, &rep.k, &rep.kinv);
    let id = Mat::identity(rep.dim());
    let mut checks = Vec::new();
    let mut push = |name, m: Mat<F::S>| {
        checks.push(RelationCheck {
            name,
            residual: residual(field, &m),
        })
    };
    push("k k^-1 = 1", k.matmul(ki) - id.clone());
    push("k^-1 k = 1", ki.matmul(k) - id);
    push("k e k^-1 = q e", k.matmul(e).matmul(ki) - e.scale(&field.q_pow(1)));
    push("k f k^-1 = q^-1 f", k.matmul(f).matmul(ki) - f.scale(&field.q_pow(-1)));
    let k2 = k.matmul(k);
    let km2 = ki.matmul(ki);
    let cartan = match field.q_minus_qinv().inv() {
        Some(c) => (k2 - km2).scale(&c),
        // at q = 1 the quotient is the weight operator, 2m on |m>
        None => Mat::diagonal(rep.twice_weights.iter().map(|&w| field.qint(w)).collect()),
    };
    push("[e, f] = (k^2 - k^-2)/(q - q^-1)", e.commutator(f) - cartan);
    RelationReport {
        checks,
        serre_vacuous: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qscalar::{Exact, Numeric, QExact};

    #[test]
    fn irreps_satisfy_relations_exactly() {
        for twice in 0..=4 {
            let rep = build_irrep(Spin::from_twice(twice), &Exact);
            let report = check_defining_relations(&rep);
            assert!(report.passed(), "l = {twice}/2: {:?}", report.violations());
        }
    }

    #[test]
    fn spin_half_matrices() {
        let rep = build_irrep(Spin::HALF, &Exact);
        assert_eq!(rep.gen(Gen::K)[(0, 0)], QExact::t_pow(1));
        assert_eq!(rep.gen(Gen::K)[(1, 1)], QExact::t_pow(-1));
        assert_eq!(rep.gen(Gen::E)[(0, 1)], QExact::one());
        assert_eq!(rep.gen(Gen::F), &rep.gen(Gen::E).transpose());
    }

    #[test]
    fn corrupted_e_is_flagged() {
        let rep = build_irrep(Spin::ONE, &Numeric::new(1.3).unwrap());
        let mut e = rep.gen(Gen::E).clone();
        e[(0, 1)] = e[(0, 1)] * 1.01;
        let report = check_defining_relations(&rep.with_generator(Gen::E, e));
        let bad: Vec<_> = report.violations().iter().map(|c| c.name).collect();
        assert_eq!(bad, vec!["[e, f] = (k^2 - k^-2)/(q - q^-1)"]);
    }

    #[test]
    fn classical_point_uses_weight_operator() {
        let rep = build_irrep(Spin::from_twice(3), &Numeric::classical());
        assert!(check_defining_relations(&rep).passed());
    }
}
