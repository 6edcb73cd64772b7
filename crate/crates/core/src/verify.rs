//! End-to-end checks of every claim the library reproduces, one entry per
//! acceptance criterion, with residuals and timings.

use std::fmt;
use std::time::{Duration, Instant};

use crate::braiding::{braiding_op, spectral_split, verify_hecke};
use crate::clifford::{build_clifford, spin_representation, verify_algebra_isomorphism, CliffordAlgebra, CliffordRelation};
use crate::dirac::{build_dirac, build_naive, numeric_spectrum, symbolic_invariance_failures, DiracOperator};
use crate::error::Result;
use crate::fredholm::{commutator_decay, trace_tail};
use crate::invariant::{invariance_solutions, invariant_form, omega_invariance};
use crate::linalg::{flip, Mat};
use crate::qscalar::{qint_f64, Exact, Numeric, QExact, QField};
use crate::repr::{build_irrep, Gen, HopfStructure};
use crate::spin::Spin;

/// Spins at which the Dirac spectrum is checked.
pub const SPECTRUM_SPINS: [Spin; 6] = [
    Spin::from_twice(1),
    Spin::from_twice(2),
    Spin::from_twice(3),
    Spin::from_twice(4),
    Spin::from_twice(6),
    Spin::from_twice(8),
];

/// Default numeric evaluation points.
pub const DEFAULT_POINTS: [f64; 3] = [0.5, 1.1, 2.0];

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Numeric evaluation points.
    pub points: Vec<f64>,
    /// Residual threshold for numeric checks.
    pub tol: f64,
    pub j_max: Spin,
    /// Test hook: perturb one computed Clifford coefficient before comparing.
    pub corrupt: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            points: DEFAULT_POINTS.to_vec(),
            tol: 1e-10,
            j_max: Spin::from_twice(400),
            corrupt: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub criterion: u8,
    pub claim: &'static str,
    pub passed: bool,
    /// Worst residual over the numeric sub-checks, if any.
    pub residual: Option<f64>,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2}. {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.criterion,
            self.claim
        )?;
        if let Some(r) = self.residual {
            write!(f, " (residual {r:.1e})")?;
        }
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

/// Accumulates sub-check outcomes.
#[derive(Default)]
struct Tally {
    passed: bool,
    residual: Option<f64>,
    notes: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Self {
            passed: true,
            ..Self::default()
        }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.passed = false;
            self.notes.push(what.into());
        }
    }

    fn below(&mut self, value: f64, tol: f64, what: impl Into<String>) {
        self.residual = Some(self.residual.map_or(value, |r| r.max(value)));
        let what = what.into();
        self.require(value < tol, format!("{what}: {value:.2e} >= {tol:.0e}"));
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn absorb(&mut self, r: Result<()>, what: &str) {
        if let Err(e) = r {
            self.require(false, format!("{what}: {e}"));
        }
    }
}

fn timed(criterion: u8, claim: &'static str, body: impl FnOnce(&mut Tally)) -> Check {
    let start = Instant::now();
    let mut t = Tally::new();
    body(&mut t);
    Check {
        criterion,
        claim,
        passed: t.passed,
        residual: t.residual,
        detail: t.notes.join("; "),
        elapsed: start.elapsed(),
    }
}

fn max_diff(a: &Mat<f64>, b: &Mat<f64>) -> f64 {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return f64::INFINITY;
    }
    (a - b).entries().iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn q(e: i64) -> QExact {
    QExact::t_pow(2 * e)
}

/// The Clifford relations in the form they are usually displayed, `b = -1`;
/// generator indices `0, 1, 2` stand for `ψ_1, ψ_0, ψ_-1`.
pub fn reference_relations() -> Vec<CliffordRelation<QExact>> {
    let rel = |terms: &[(usize, usize, QExact)], constant: QExact| {
        let mut quadratic = vec![QExact::zero(); 9];
        for (i, j, c) in terms {
            quadratic[i * 3 + j] = c.clone();
        }
        CliffordRelation { quadratic, constant }
    };
    vec![
        rel(&[(0, 0, QExact::one())], QExact::zero()),
        rel(&[(2, 2, QExact::one())], QExact::zero()),
        rel(&[(0, 1, q(-1)), (1, 0, q(1))], QExact::zero()),
        rel(&[(0, 2, q(-2)), (1, 1, QExact::qint(2)), (2, 0, q(2))], QExact::zero()),
        rel(&[(1, 2, QExact::one()), (2, 1, q(2))], QExact::zero()),
        rel(&[(0, 2, QExact::one()), (2, 0, QExact::one())], -QExact::one()),
    ]
}

/// Reference relations not reproduced by `shown`: homogeneous ones are
/// compared up to an overall factor, the inhomogeneous one exactly.
pub fn missing_relations(shown: &[CliffordRelation<QExact>]) -> Vec<CliffordRelation<QExact>> {
    reference_relations()
        .into_iter()
        .filter(|g| {
            let k = (0..9).find(|&i| !g.quadratic[i].is_zero()).expect("nonzero relation");
            !shown.iter().any(|s| {
                if !g.constant.is_zero() {
                    return s == g;
                }
                let Some(inv) = s.quadratic[k].inv() else { return false };
                s.scale(&(g.quadratic[k].clone() * inv)) == *g
            })
        })
        .collect()
}

fn exact_clifford() -> Result<CliffordAlgebra<Exact>> {
    let v = build_irrep(Spin::ONE, &Exact);
    let form = invariant_form(&v)?;
    let split = spectral_split(&braiding_op(Spin::ONE, Spin::ONE, &Exact))?;
    build_clifford(&v, &form, &split)
}

fn clifford_at<F: QField>(field: &F) -> Result<CliffordAlgebra<F>> {
    let v = build_irrep(Spin::ONE, field);
    let form = invariant_form(&v)?;
    let split = spectral_split(&braiding_op(Spin::ONE, Spin::ONE, field))?;
    build_clifford(&v, &form, &split)
}

pub fn golden_spectrum(cfg: &VerifyConfig) -> Check {
    timed(1, "Dirac spectrum [2l] (2l+2) and -[2l+2] (2l)", |t| {
        match build_dirac(&Exact) {
            Ok(d) => {
                for l in SPECTRUM_SPINS {
                    t.absorb(d.spectrum(l).map(|_| ()), &format!("exact l = {l}"));
                }
            }
            Err(e) => t.require(false, format!("exact build: {e}")),
        }
        for &q0 in &cfg.points {
            let r = (|| -> Result<f64> {
                let field = Numeric::new(q0)?;
                let d = build_dirac(&field)?;
                let mut worst = 0.0f64;
                for l in SPECTRUM_SPINS {
                    let got = numeric_spectrum(&field, &d.realize(l))?;
                    let n = l.twice() as i64;
                    let want = [(-qint_f64(n + 2, q0), n as usize), (qint_f64(n, q0), n as usize + 2)];
                    if got.len() != 2 || got.iter().zip(&want).any(|(a, b)| a.1 != b.1) {
                        return Ok(f64::INFINITY);
                    }
                    for ((a, _), (b, _)) in got.iter().zip(want) {
                        worst = worst.max((a - b).abs());
                    }
                }
                Ok(worst)
            })();
            match r {
                Ok(w) => t.below(w, cfg.tol, format!("q = {q0}")),
                Err(e) => t.require(false, format!("q = {q0}: {e}")),
            }
        }
    })
}

pub fn golden_clifford(cfg: &VerifyConfig) -> Check {
    timed(2, "Clifford relations with b = -1 and the spin matrices", |t| {
        let c = match exact_clifford() {
            Ok(c) => c,
            Err(e) => return t.require(false, format!("build: {e}")),
        };
        let mut shown = c.display_relations();
        if cfg.corrupt {
            // scale one coefficient of the weight-one relation
            if let Some(r) = shown.iter_mut().find(|r| !r.quadratic[3].is_zero()) {
                r.quadratic[3] = r.quadratic[3].clone() * QExact::from_i64(2);
            }
            let mut rels = c.relations().to_vec();
            if let Some(r) = rels.iter_mut().find(|r| !r.quadratic[3].is_zero()) {
                r.quadratic[3] = r.quadratic[3].clone() * QExact::from_i64(2);
            }
            if let Err(e) = CliffordAlgebra::from_relations(c.module().clone(), c.form().clone(), rels) {
                t.note(format!("corrupted ideal rejected ({e})"));
            }
        }
        for g in missing_relations(&shown) {
            t.require(false, format!("relation not reproduced: {}", c.relation_text(&g)));
        }
        t.require(c.form().b == -QExact::one(), "b != -1");
        match spin_representation(&c) {
            Ok(s) => {
                for (g, r) in reference_relations().iter().zip(s.relation_residuals(&reference_relations())) {
                    t.require(r.holds, format!("spin matrices violate {}", c.relation_text(g)));
                }
            }
            Err(e) => t.require(false, format!("spin representation: {e}")),
        }
    })
}

pub fn dirac_theorem(cfg: &VerifyConfig) -> Check {
    timed(3, "D is invariant and commutes; the naive A does not commute", |t| {
        match build_dirac(&Exact) {
            Ok(d) => {
                let bad = symbolic_invariance_failures(&d);
                t.require(bad.is_empty(), format!("symbolic invariance fails for {bad:?}"));
            }
            Err(e) => t.require(false, format!("exact build: {e}")),
        }
        for &q0 in &cfg.points {
            let r = (|| -> Result<f64> {
                let d = build_dirac(&Numeric::new(q0)?)?;
                let mut worst = 0.0f64;
                for twice in 0..=8 {
                    worst = worst.max(d.commutator(Spin::from_twice(twice))?.norm);
                }
                Ok(worst)
            })();
            match r {
                Ok(w) => t.below(w, cfg.tol, format!("[D, Δ(x)] at q = {q0}")),
                Err(e) => t.require(false, format!("q = {q0}: {e}")),
            }
        }
        let naive = (|| -> Result<(f64, f64)> {
            let field = Numeric::new(1.5)?;
            let (a, d) = (build_naive(&field)?, build_dirac(&field)?);
            let l = Spin::HALF;
            let e = Gen::E;
            let na = a.realize(l).commutator(&a.action(l, e)?).max_abs(&field);
            let nd = d.realize(l).commutator(&d.action(l, e)?).max_abs(&field);
            Ok((na, nd))
        })();
        match naive {
            Ok((na, nd)) => {
                t.require(na > 0.01, format!("naive commutator only {na:.2e}"));
                t.note(format!("naive [A, e] = {na:.3}, [D, e] = {nd:.1e} at q = 1.5, l = 1/2"));
            }
            Err(e) => t.require(false, format!("naive control: {e}")),
        }
    })
}

pub fn form_uniqueness(_: &VerifyConfig) -> Check {
    timed(4, "invariant form on the adjoint module is unique and nondegenerate", |t| {
        let v = build_irrep(Spin::ONE, &Exact);
        match invariance_solutions(&v, HopfStructure::Primary) {
            Ok(sol) => {
                t.require(sol.len() == 1, format!("solution space has dimension {}", sol.len()));
                if let Some(s) = sol.first() {
                    let m = Mat::from_fn(3, 3, |i, j| s[i * 3 + j].clone());
                    t.require(!m.det(0.0).is_zero(), "form is degenerate");
                }
            }
            Err(e) => t.require(false, e.to_string()),
        }
    })
}

pub fn hecke(cfg: &VerifyConfig) -> Check {
    timed(5, "braid, distant commutation and Hecke-type relations", |t| {
        for &q0 in &cfg.points {
            let Ok(field) = Numeric::new(q0) else {
                t.require(false, format!("bad q = {q0}"));
                continue;
            };
            for (twice, n) in [(1, 3), (1, 4), (2, 3)] {
                let l = Spin::from_twice(twice);
                match verify_hecke(l, n, &field) {
                    Ok(r) => {
                        let what = format!("l = {l}, N = {n}, q = {q0}");
                        for x in [r.braid, r.distant, Some(r.characteristic)].into_iter().flatten() {
                            t.below(x.norm, cfg.tol, what.clone());
                        }
                    }
                    Err(e) => t.require(false, e.to_string()),
                }
            }
        }
    })
}

pub fn spin_module(_: &VerifyConfig) -> Check {
    timed(6, "spin representation is equivariant and onto End(Σ)", |t| {
        let c = match exact_clifford() {
            Ok(c) => c,
            Err(e) => return t.require(false, e.to_string()),
        };
        t.require(c.dim() == 8, format!("algebra has dimension {}", c.dim()));
        match spin_representation(&c) {
            Ok(s) => {
                t.require(s.equivariance(c.module()).holds, "equivariance fails");
                match verify_algebra_isomorphism(&c, &s) {
                    Ok(r) => {
                        t.require(r.image_rank == 4, format!("image rank {}", r.image_rank));
                        t.require(r.passed(), format!("{r}"));
                    }
                    Err(e) => t.require(false, e.to_string()),
                }
            }
            Err(e) => t.require(false, e.to_string()),
        }
    })
}

pub fn omega(_: &VerifyConfig) -> Check {
    timed(7, "Ω is invariant", |t| {
        for twice in [1, 2, 3, 4] {
            let v = build_irrep(Spin::from_twice(twice), &Exact);
            match omega_invariance(&v) {
                Ok(r) => t.require(r.holds, format!("l = {}", Spin::from_twice(twice))),
                Err(e) => t.require(false, e.to_string()),
            }
        }
    })
}

pub fn summability(cfg: &VerifyConfig) -> Check {
    timed(8, "F² - 1 is trace class and [F, a] decays exponentially", |t| {
        let mut points = vec![1.5];
        points.extend(cfg.points.iter().copied().filter(|&p| p != 1.5));
        for q0 in points {
            match trace_tail(cfg.j_max, q0) {
                Ok(tail) => {
                    t.require(tail.fit.is_finite(), format!("trace fit diverges at q = {q0}"));
                    match tail.knee(1e-12) {
                        Some(j) if q0 == 1.5 => {
                            t.require(j.value() <= 25.0, format!("partial sums settle only at j = {j}"));
                            t.note(format!("trace sum {:.12} settles by j = {j}", tail.limit));
                        }
                        Some(_) => {}
                        None => t.require(false, format!("partial sums never settle at q = {q0}")),
                    }
                }
                Err(e) => t.require(false, e.to_string()),
            }
            for k in [-1.0, -0.5, 0.5, 1.0] {
                match commutator_decay(k, cfg.j_max, q0) {
                    Ok(c) => {
                        let ok = c.fit.is_some_and(|f| f.is_finite())
                            && c.values.iter().all(|&(j, v)| {
                                c.fit.is_some_and(|f| v.abs() <= f.bound(j.value() + k.min(0.0)) * (1.0 + 1e-12))
                            });
                        t.require(ok, format!("c_j({k}) fit fails at q = {q0}"));
                    }
                    Err(e) => t.require(false, e.to_string()),
                }
            }
        }
    })
}

fn generator_drift(near: &Numeric, classical: &Numeric) -> f64 {
    let mut worst = 0.0f64;
    for twice in 0..=4 {
        let l = Spin::from_twice(twice);
        let (a, b) = (build_irrep(l, near), build_irrep(l, classical));
        for x in Gen::ALL {
            worst = worst.max(max_diff(a.gen(x), b.gen(x)));
        }
    }
    worst
}

fn relation_drift(near: &CliffordAlgebra<Numeric>, classical: &CliffordAlgebra<Numeric>) -> f64 {
    let (a, b) = (near.display_relations(), classical.display_relations());
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(&b)
        .map(|(x, y)| {
            let d = x.quadratic.iter().zip(&y.quadratic).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
            d.max((x.constant - y.constant).abs())
        })
        .fold(0.0, f64::max)
}

fn dirac_drift(near: &DiracOperator<Numeric>, classical: &DiracOperator<Numeric>) -> f64 {
    (0..=3)
        .map(|twice| {
            let l = Spin::from_twice(twice);
            max_diff(&near.realize(l), &classical.realize(l))
        })
        .fold(0.0, f64::max)
}

pub fn classical_limit(_: &VerifyConfig) -> Check {
    timed(9, "q = 1 + 1e-4 agrees with q = 1 within 1e-3", |t| {
        let r = (|| -> Result<()> {
            let near = Numeric::new(1.0 + 1e-4)?;
            let classical = Numeric::classical();
            t.below(generator_drift(&near, &classical), 1e-3, "generators");
            let mut rhat = 0.0f64;
            for twice in [1, 2] {
                let l = Spin::from_twice(twice);
                let p: Mat<f64> = flip(l.dim(), l.dim());
                let (a, b) = (braiding_op(l, l, &near), braiding_op(l, l, &classical));
                rhat = rhat.max(max_diff(&a.rhat, &b.rhat)).max(max_diff(&a.rhat, &p));
            }
            t.below(rhat, 1e-3, "braiding vs flip");
            t.below(relation_drift(&clifford_at(&near)?, &clifford_at(&classical)?), 1e-3, "Clifford relations");
            t.below(dirac_drift(&build_dirac(&near)?, &build_dirac(&classical)?), 1e-3, "Dirac operator");
            Ok(())
        })();
        t.absorb(r, "classical limit");
    })
}

/// Runs criteria 1 to 9 on worker threads, returned in criterion order.
pub fn run_all(cfg: &VerifyConfig) -> Vec<Check> {
    type Suite = fn(&VerifyConfig) -> Check;
    const SUITES: [Suite; 9] = [
        golden_spectrum,
        golden_clifford,
        dirac_theorem,
        form_uniqueness,
        hecke,
        spin_module,
        omega,
        summability,
        classical_limit,
    ];
    std::thread::scope(|s| {
        let handles: Vec<_> = SUITES.iter().map(|suite| s.spawn(move || suite(cfg))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("verification suite panicked"))
            .collect()
    })
}
