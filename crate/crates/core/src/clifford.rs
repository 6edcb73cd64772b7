//! The covariant Clifford algebra `T(V)/I`, with `I` generated by
//! `u - B(u)` for `u` in the positive part of `Ř` on `V (x) V`, presented
//! as a quadratic rewrite system; and its equivariant spin representation.
//!
//! Generators are indexed like the basis of `V` (weights descending), so for
//! the adjoint module index 0, 1, 2 is `ψ_1, ψ_0, ψ_-1`.

use std::collections::BTreeMap;
use std::fmt;

use crate::braiding::SpectralSplit;
use crate::error::{QError, Result};
use crate::invariant::BilinearForm;
use crate::linalg::{residual, Mat, Residual};
use crate::qscalar::{QField, Scalar};
use crate::repr::{build_irrep, decompose, tensor_rep, Gen, HopfStructure, Representation};
use crate::spin::Spin;

pub type Word = Vec<u8>;

/// Finite linear combination of words in the generators.
#[derive(Clone, Debug, PartialEq)]
pub struct CliffordElement<S> {
    terms: BTreeMap<Word, S>,
}

impl<S: Scalar> CliffordElement<S> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::word(Vec::new())
    }

    pub fn word(w: Word) -> Self {
        Self::term(w, S::one())
    }

    pub fn term(w: Word, c: S) -> Self {
        let mut out = Self::zero();
        out.add_term(w, c);
        out
    }

    pub fn gen(i: u8) -> Self {
        Self::word(vec![i])
    }

    pub fn add_term(&mut self, w: Word, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&w) {
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(w, sum);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &[u8]) -> S {
        self.terms.get(w).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_negligible(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.is_negligible(tol))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero();
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x.clone() * c.clone());
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&-S::one()))
    }

    /// Concatenation product in the tensor algebra.
    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                out.add_term(w, x.clone() * y.clone());
            }
        }
        out
    }

    /// Largest word length with a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Vec::len).max()
    }
}

/// `Σ u_ij ψ_i ψ_j = B(u)`, `u` indexed `i * n + j`.
#[derive(Clone, Debug, PartialEq)]
pub struct CliffordRelation<S> {
    pub quadratic: Vec<S>,
    pub constant: S,
}

impl<S: Scalar> CliffordRelation<S> {
    /// `Σ u_ij ψ_i ψ_j - B(u)` as an element of the tensor algebra.
    pub fn element(&self, n: usize) -> CliffordElement<S> {
        let mut out = CliffordElement::term(Vec::new(), -self.constant.clone());
        for (idx, c) in self.quadratic.iter().enumerate() {
            out.add_term(vec![(idx / n) as u8, (idx % n) as u8], c.clone());
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        Self {
            quadratic: self.quadratic.iter().map(|x| x.clone() * c.clone()).collect(),
            constant: self.constant.clone() * c.clone(),
        }
    }
}

/// Which redex the reducer rewrites first. Confluence makes the result
/// independent of the choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

/// Replacement for a leading pair `ψ_a ψ_b`: a combination of smaller
/// pairs and a constant.
#[derive(Clone, Debug)]
struct Rule<S> {
    pairs: Vec<((u8, u8), S)>,
    constant: S,
}

#[derive(Clone, Debug)]
pub struct CliffordAlgebra<F: QField> {
    field: F,
    module: Representation<F>,
    form: BilinearForm<F::S>,
    relations: Vec<CliffordRelation<F::S>>,
    rules: BTreeMap<(u8, u8), Rule<F::S>>,
    basis: Vec<Word>,
}

/// Deg-lex key: longer words are larger, then lexicographic on indices,
/// so `ψ_-1 > ψ_0 > ψ_1` and the irreducible words are the decreasing ones.
fn order_key(w: &[u8]) -> (usize, Word) {
    (w.len(), w.to_vec())
}

/// Builds the algebra from the positive part of `split` and the form `B`.
///
/// Fails with [`QError::NotConfluent`] if some overlap `ψ_a ψ_b ψ_c` of
/// leading pairs reduces to two different normal forms, and with
/// [`QError::Invalid`] if the relations are inconsistent or the quotient is
/// not `2^n`-dimensional.
pub fn build_clifford<F: QField>(
    v: &Representation<F>,
    form: &BilinearForm<F::S>,
    split: &SpectralSplit<F::S>,
) -> Result<CliffordAlgebra<F>> {
    let relations: Vec<CliffordRelation<F::S>> = split
        .positive_basis()
        .into_iter()
        .map(|u| CliffordRelation {
            constant: form.apply(&u),
            quadratic: u,
        })
        .collect();
    CliffordAlgebra::from_relations(v.clone(), form.clone(), relations)
}

impl<F: QField> CliffordAlgebra<F> {
    /// The algebra presented by arbitrary quadratic relations on the
    /// generators of `module`.
    pub fn from_relations(
        module: Representation<F>,
        form: BilinearForm<F::S>,
        relations: Vec<CliffordRelation<F::S>>,
    ) -> Result<Self> {
        let field = module.field().clone();
        let n = module.dim();
        for r in &relations {
            if r.quadratic.len() != n * n {
                return Err(QError::Dimension(format!(
                    "relation has {} coefficients, expected {}",
                    r.quadratic.len(),
                    n * n
                )));
            }
        }
        // columns: pairs in decreasing monomial order, then the constant
        let mut pairs: Vec<(u8, u8)> = (0..n as u8).flat_map(|a| (0..n as u8).map(move |b| (a, b))).collect();
        pairs.sort_by(|x, y| y.cmp(x));
        let rows: Vec<Vec<F::S>> = relations
            .iter()
            .map(|r| {
                let mut row: Vec<F::S> = pairs
                    .iter()
                    .map(|&(a, b)| r.quadratic[a as usize * n + b as usize].clone())
                    .collect();
                row.push(-r.constant.clone());
                row
            })
            .collect();
        let mut rules = BTreeMap::new();
        if !rows.is_empty() {
            let (rref, pivots) = Mat::from_rows(rows).rref(field.tol());
            for (r, &p) in pivots.iter().enumerate() {
                if p == pairs.len() {
                    return Err(QError::Invalid("relations force 1 = 0".into()));
                }
                let mut rule = Rule {
                    pairs: Vec::new(),
                    constant: -rref[(r, pairs.len())].clone(),
                };
                for (c, &pair) in pairs.iter().enumerate() {
                    let x = &rref[(r, c)];
                    if c != p && !x.is_negligible(field.tol()) {
                        rule.pairs.push((pair, -x.clone()));
                    }
                }
                rules.insert(pairs[p], rule);
            }
        }
        let mut alg = Self {
            field,
            module,
            form,
            relations,
            rules,
            basis: Vec::new(),
        };
        alg.check_confluence()?;
        alg.basis = alg.enumerate_basis()?;
        let expected = 1usize << n;
        if alg.basis.len() != expected {
            return Err(QError::Invalid(format!(
                "quotient has dimension {}, expected {expected}",
                alg.basis.len()
            )));
        }
        Ok(alg)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// The module `V` spanned by the generators.
    pub fn module(&self) -> &Representation<F> {
        &self.module
    }

    pub fn form(&self) -> &BilinearForm<F::S> {
        &self.form
    }

    pub fn num_generators(&self) -> usize {
        self.module.dim()
    }

    pub fn relations(&self) -> &[CliffordRelation<F::S>] {
        &self.relations
    }

    /// Irreducible words, shortest first.
    pub fn normal_basis(&self) -> &[Word] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Leading pairs of the rewrite system.
    pub fn leading_pairs(&self) -> Vec<(u8, u8)> {
        self.rules.keys().copied().collect()
    }

    fn redex(&self, w: &[u8], strategy: Strategy) -> Option<usize> {
        let hit = |i: &usize| self.rules.contains_key(&(w[*i], w[*i + 1]));
        let mut positions = 0..w.len().saturating_sub(1);
        match strategy {
            Strategy::Leftmost => positions.find(hit),
            Strategy::Rightmost => positions.rev().find(hit),
        }
    }

    fn rewrite_at(&self, w: &[u8], pos: usize) -> CliffordElement<F::S> {
        let rule = &self.rules[&(w[pos], w[pos + 1])];
        let (head, tail) = (&w[..pos], &w[pos + 2..]);
        let splice = |mid: &[u8]| -> Word { [head, mid, tail].concat() };
        let mut out = CliffordElement::term(splice(&[]), rule.constant.clone());
        for ((a, b), c) in &rule.pairs {
            out.add_term(splice(&[*a, *b]), c.clone());
        }
        out
    }

    pub fn normal_form(&self, x: &CliffordElement<F::S>) -> CliffordElement<F::S> {
        self.normal_form_with(x, Strategy::Leftmost)
    }

    /// Reduces the largest pending word first; each rewrite only produces
    /// smaller words, so like terms merge before they are reduced.
    pub fn normal_form_with(&self, x: &CliffordElement<F::S>, strategy: Strategy) -> CliffordElement<F::S> {
        let tol = self.field.tol();
        let mut pending: BTreeMap<(usize, Word), F::S> = BTreeMap::new();
        let push = |pending: &mut BTreeMap<(usize, Word), F::S>, w: &[u8], c: F::S| {
            let key = order_key(w);
            let sum = match pending.remove(&key) {
                Some(old) => old + c,
                None => c,
            };
            if !sum.is_zero() {
                pending.insert(key, sum);
            }
        };
        for (w, c) in x.terms() {
            push(&mut pending, w, c.clone());
        }
        let mut out = CliffordElement::zero();
        while let Some(((_, w), c)) = pending.pop_last() {
            if c.is_negligible(tol) {
                continue;
            }
            match self.redex(&w, strategy) {
                None => out.add_term(w, c),
                Some(pos) => {
                    for (w2, c2) in self.rewrite_at(&w, pos).terms() {
                        push(&mut pending, w2, c2.clone() * c.clone());
                    }
                }
            }
        }
        out
    }

    /// Normal form with coefficients below tolerance dropped.
    pub fn reduce(&self, x: &CliffordElement<F::S>) -> CliffordElement<F::S> {
        let nf = self.normal_form(x);
        let tol = self.field.tol();
        let mut out = CliffordElement::zero();
        for (w, c) in nf.terms() {
            if !c.is_negligible(tol) {
                out.add_term(w.clone(), c.clone());
            }
        }
        out
    }

    pub fn multiply(&self, a: &CliffordElement<F::S>, b: &CliffordElement<F::S>) -> CliffordElement<F::S> {
        self.normal_form(&a.mul(b))
    }

    /// Resolves every overlap `ψ_a ψ_b ψ_c` of leading pairs both ways.
    pub fn check_confluence(&self) -> Result<()> {
        let tol = self.field.tol();
        for &(a, b) in self.rules.keys() {
            for &(b2, c) in self.rules.keys() {
                if b2 != b {
                    continue;
                }
                let w = vec![a, b, c];
                let left = self.normal_form(&self.rewrite_at(&w, 0));
                let right = self.normal_form(&self.rewrite_at(&w, 1));
                if !left.sub(&right).is_negligible(tol) {
                    return Err(QError::NotConfluent(format!(
                        "{}: {} vs {}",
                        self.word_text(&w),
                        self.element_text(&left),
                        self.element_text(&right)
                    )));
                }
            }
        }
        Ok(())
    }

    fn enumerate_basis(&self) -> Result<Vec<Word>> {
        let n = self.num_generators() as u8;
        let mut basis = vec![Vec::new()];
        let mut layer: Vec<Word> = vec![Vec::new()];
        for _ in 0..=2 * n as usize + 1 {
            let next: Vec<Word> = layer
                .iter()
                .flat_map(|w| (0..n).map(move |g| [w.as_slice(), &[g]].concat()))
                .filter(|w| w.len() < 2 || !self.rules.contains_key(&(w[w.len() - 2], w[w.len() - 1])))
                .collect();
            if next.is_empty() {
                return Ok(basis);
            }
            basis.extend(next.iter().cloned());
            layer = next;
        }
        Err(QError::Invalid("quotient is infinite-dimensional".into()))
    }

    /// `x ▷ r` for a relation, pushed through the quotient; zero when the
    /// ideal is stable under `x`.
    pub fn ideal_covariance(&self) -> Result<Residual> {
        let t = tensor_rep(&self.module, &self.module, HopfStructure::Primary)?;
        let n = self.num_generators();
        let mut worst = Residual::ZERO;
        for x in Gen::CHECKED {
            let eps = F::S::from_i64(HopfStructure::Primary.counit(x));
            for r in &self.relations {
                let moved = CliffordRelation {
                    quadratic: t.gen(x).mul_vec(&r.quadratic),
                    constant: eps.clone() * r.constant.clone(),
                };
                let nf = self.normal_form(&moved.element(n));
                worst = Residual::worst(worst, residual(&self.field, &self.coefficient_column(&nf)));
            }
        }
        Ok(worst)
    }

    /// The adjoint action `x ▷ (ψ_a ψ_b ...) = (x_(1) ▷ ψ_a)(x_(2) ▷ ψ_b)...`,
    /// reduced to normal form.
    pub fn act(&self, x: Gen, elem: &CliffordElement<F::S>) -> CliffordElement<F::S> {
        let hopf = HopfStructure::Primary;
        let mut out = CliffordElement::zero();
        for (w, c) in elem.terms() {
            if w.is_empty() {
                out.add_term(Vec::new(), c.clone() * F::S::from_i64(hopf.counit(x)));
                continue;
            }
            for legs in hopf.iterated_coproduct(x, w.len()) {
                let mut acc = CliffordElement::term(Vec::new(), c.clone());
                for (g, &letter) in legs.iter().zip(w) {
                    let rho = self.module.gen(*g);
                    let mut image = CliffordElement::zero();
                    for k in 0..self.num_generators() {
                        image.add_term(vec![k as u8], rho[(k, letter as usize)].clone());
                    }
                    acc = acc.mul(&image);
                }
                out = out.add(&acc);
            }
        }
        self.normal_form(&out)
    }

    /// Coefficients of a normal form against [`Self::normal_basis`].
    pub fn coefficient_column(&self, x: &CliffordElement<F::S>) -> Mat<F::S> {
        Mat::column(self.basis.iter().map(|w| x.coeff(w)).collect())
    }

    /// `ψ_m` with `m` the weight of generator `i`.
    pub fn generator_name(&self, i: u8) -> String {
        format!("ψ_{}", self.module.twice_weights()[i as usize] / 2)
    }

    pub fn word_text(&self, w: &[u8]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|&g| self.generator_name(g)).collect::<Vec<_>>().join(" ")
    }

    pub fn element_text(&self, x: &CliffordElement<F::S>) -> String {
        let terms: Vec<(String, F::S)> = x.terms().map(|(w, c)| (self.word_text(w), c.clone())).collect();
        linear_text(&self.field, &terms)
    }

    /// The relations grouped by weight in a fixed display form: homogeneous
    /// relations scaled so their outer coefficients multiply to 1 where the
    /// field allows it, and for every weight carrying the constant one
    /// relation `... = B(u)` whose leading pair has coefficient 1.
    pub fn display_relations(&self) -> Vec<CliffordRelation<F::S>> {
        let n = self.num_generators();
        let tol = self.field.tol();
        let w = self.module.twice_weights();
        let weight = |idx: usize| w[idx / n] + w[idx % n];
        if self.relations.is_empty() {
            return Vec::new();
        }
        // the reduced row echelon basis of a graded space is graded
        let all = Mat::from_rows(
            self.relations
                .iter()
                .map(|r| {
                    let mut row = r.quadratic.clone();
                    row.push(r.constant.clone());
                    row
                })
                .collect(),
        );
        let (rref, pivots) = all.rref(tol);
        let mut sectors: BTreeMap<std::cmp::Reverse<i64>, Vec<Vec<F::S>>> = BTreeMap::new();
        for (i, &p) in pivots.iter().enumerate() {
            sectors.entry(std::cmp::Reverse(weight(p))).or_default().push(rref.row(i));
        }
        let mut out = Vec::new();
        for (std::cmp::Reverse(wt), rows) in sectors {
            let cols: Vec<usize> = (0..n * n).filter(|&idx| weight(idx) == wt).collect();
            let k = cols.len();
            let m = Mat::from_fn(rows.len(), k + 1, |i, j| {
                if j < k {
                    rows[i][cols[j]].clone()
                } else {
                    rows[i][n * n].clone()
                }
            });
            let to_rel = |v: &[F::S]| {
                let mut quadratic = vec![F::S::zero(); n * n];
                for (i, &c) in cols.iter().enumerate() {
                    quadratic[c] = v[i].clone();
                }
                CliffordRelation {
                    quadratic,
                    constant: v[k].clone(),
                }
            };
            // homogeneous part: eliminate the constant column first
            let const_first = Mat::from_fn(m.rows(), k + 1, |i, j| {
                if j == 0 {
                    m[(i, k)].clone()
                } else {
                    m[(i, j - 1)].clone()
                }
            });
            let (r, piv) = const_first.rref(tol);
            for (i, &p) in piv.iter().enumerate() {
                if p != 0 {
                    let mut v: Vec<F::S> = (1..=k).map(|j| r[(i, j)].clone()).collect();
                    v.push(F::S::zero());
                    out.push(balance(&self.field, to_rel(&v)));
                }
            }
            // one inhomogeneous relation, led by the first pair in display order
            if (0..m.rows()).any(|i| !m[(i, k)].is_negligible(tol)) {
                let (r, piv) = m.rref(tol);
                if let Some(i) = (0..piv.len()).find(|&i| !r[(i, k)].is_negligible(tol)) {
                    out.push(to_rel(&r.row(i)));
                }
            }
        }
        out
    }

    /// `Σ c ψ_i ψ_j = B` in text, pairs listed by ascending first index.
    pub fn relation_text(&self, r: &CliffordRelation<F::S>) -> String {
        let n = self.num_generators();
        let terms: Vec<(String, F::S)> = (0..n * n)
            .filter(|&idx| !r.quadratic[idx].is_negligible(self.field.tol()))
            .map(|idx| (self.word_text(&[(idx / n) as u8, (idx % n) as u8]), r.quadratic[idx].clone()))
            .collect();
        format!("{} = {}", linear_text(&self.field, &terms), coefficient_text(&self.field, &r.constant))
    }
}

/// Scales a homogeneous relation so that its first and last nonzero
/// coefficients multiply to 1, when that square root exists and is real.
fn balance<F: QField>(field: &F, r: CliffordRelation<F::S>) -> CliffordRelation<F::S> {
    let nz: Vec<&F::S> = r.quadratic.iter().filter(|x| !x.is_negligible(field.tol())).collect();
    let (Some(first), Some(last)) = (nz.first(), nz.last()) else {
        return r;
    };
    let prod = (*first).clone() * (*last).clone();
    let scale = prod
        .inv()
        .filter(|p| field.to_f64(p) > 0.0)
        .and_then(|p| field.sqrt(&p))
        .map(|s| if field.to_f64(first) < 0.0 { -s } else { s })
        .or_else(|| first.inv());
    match scale {
        Some(s) => r.scale(&s),
        None => r,
    }
}

/// Coefficient text with redundant outer parentheses removed from single
/// terms, e.g. `(q^-1)` becomes `q^-1`.
pub fn coefficient_text<F: QField>(field: &F, c: &F::S) -> String {
    let text = field.to_qvalue(c).to_string();
    let Some(inner) = text.strip_prefix('(').and_then(|t| t.strip_suffix(')')) else {
        return text;
    };
    let bytes = inner.as_bytes();
    let single = !inner.contains(['(', ')', '+', '*', '/'])
        && bytes
            .iter()
            .enumerate()
            .all(|(i, &b)| b != b'-' || i == 0 || bytes[i - 1] == b'^');
    if single {
        inner.to_string()
    } else {
        text
    }
}

fn linear_text<F: QField>(field: &F, terms: &[(String, F::S)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (name, c)) in terms.iter().enumerate() {
        let text = coefficient_text(field, c);
        let (neg, body) = match text.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, text),
        };
        let sep = match (i, neg) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        };
        out.push_str(sep);
        if body == "1" {
            out.push_str(name);
        } else if name == "1" {
            out.push_str(&body);
        } else {
            out.push_str(&format!("{body}*{name}"));
        }
    }
    out
}

/// The spin module `Σ` with Clifford action `s` and quantum group action `σ`.
#[derive(Clone, Debug)]
pub struct SpinRepresentation<F: QField> {
    pub sigma: Representation<F>,
    /// `s(ψ_i)` for each generator.
    pub s: Vec<Mat<F::S>>,
}

impl<F: QField> SpinRepresentation<F> {
    pub fn field(&self) -> &F {
        self.sigma.field()
    }

    pub fn dim(&self) -> usize {
        self.sigma.dim()
    }

    /// Image of a tensor-algebra element.
    pub fn realize(&self, x: &CliffordElement<F::S>) -> Mat<F::S> {
        let d = self.dim();
        let mut out = Mat::zeros(d, d);
        for (w, c) in x.terms() {
            let m = w
                .iter()
                .fold(Mat::identity(d), |acc, &g| acc.matmul(&self.s[g as usize]));
            out = out + m.scale(c);
        }
        out
    }

    /// Residual of `s(r)` for every relation, in order.
    pub fn relation_residuals(&self, relations: &[CliffordRelation<F::S>]) -> Vec<Residual> {
        let n = self.s.len();
        relations
            .iter()
            .map(|r| residual(self.field(), &self.realize(&r.element(n))))
            .collect()
    }

    /// Residual of `s(x ▷ ψ_m) = σ(x') s(ψ_m) σ(S(x''))` over the generators.
    pub fn equivariance(&self, module: &Representation<F>) -> Residual {
        let mut worst = Residual::ZERO;
        for x in Gen::CHECKED {
            for m in 0..self.s.len() {
                let lhs = (0..self.s.len()).fold(Mat::zeros(self.dim(), self.dim()), |acc, k| {
                    acc + self.s[k].scale(&module.gen(x)[(k, m)])
                });
                let rhs = HopfStructure::Primary
                    .coproduct(x)
                    .into_iter()
                    .fold(Mat::zeros(self.dim(), self.dim()), |acc, (a, b)| {
                        acc + self
                            .sigma
                            .gen(a)
                            .matmul(&self.s[m])
                            .matmul(&self.sigma.antipode(HopfStructure::Primary, b))
                    });
                worst = Residual::worst(worst, residual(self.field(), &(lhs - rhs)));
            }
        }
        worst
    }

    /// The second spin representation `ψ -> -s(ψ)`.
    pub fn negated(&self) -> Self {
        Self {
            sigma: self.sigma.clone(),
            s: self.s.iter().map(|m| -m.clone()).collect(),
        }
    }

    /// The module `End(Σ)` under `M -> σ(x') M σ(S(x''))`.
    pub fn endomorphism_module(&self) -> Result<Representation<F>> {
        let d = self.dim();
        let act = |x: Gen| {
            HopfStructure::Primary
                .coproduct(x)
                .into_iter()
                .fold(Mat::zeros(d * d, d * d), |acc, (a, b)| {
                    let right = self.sigma.antipode(HopfStructure::Primary, b).transpose();
                    acc + self.sigma.gen(a).kron(&right)
                })
        };
        let w = self.sigma.twice_weights();
        let weights = (0..d * d).map(|idx| w[idx / d] - w[idx % d]).collect();
        let kinv = self
            .sigma
            .gen(Gen::Kinv)
            .kron(&self.sigma.gen(Gen::K).transpose());
        Representation::from_matrices(
            self.field().clone(),
            weights,
            act(Gen::E),
            act(Gen::F),
            act(Gen::K),
            kinv,
        )
    }
}

/// Solves the equivariance condition for `s` with `σ = π_{1/2}`, then fixes
/// the Schur scale by the inhomogeneous relation and the sign by making the
/// first nonzero entry positive.
pub fn spin_representation<F: QField>(c: &CliffordAlgebra<F>) -> Result<SpinRepresentation<F>> {
    let field = c.field().clone();
    let module = c.module();
    if module.dim() != 3 {
        return Err(QError::SpinRepresentation(format!(
            "only the three-dimensional adjoint module is supported, got dimension {}",
            module.dim()
        )));
    }
    let sigma = build_irrep(Spin::HALF, &field);
    let (n, d) = (module.dim(), sigma.dim());
    let unknown = |k: usize, r: usize, col: usize| k * d * d + r * d + col;
    let mut blocks = Vec::new();
    for x in Gen::CHECKED {
        let rho = module.gen(x);
        let terms: Vec<(Mat<F::S>, Mat<F::S>)> = HopfStructure::Primary
            .coproduct(x)
            .into_iter()
            .map(|(a, b)| (sigma.gen(a).clone(), sigma.antipode(HopfStructure::Primary, b)))
            .collect();
        let mut sys: Mat<F::S> = Mat::zeros(n * d * d, n * d * d);
        for m in 0..n {
            for r in 0..d {
                for col in 0..d {
                    let row = unknown(m, r, col);
                    for k in 0..n {
                        let cell = &mut sys[(row, unknown(k, r, col))];
                        *cell = cell.clone() + rho[(k, m)].clone();
                    }
                    for (left, right) in &terms {
                        for r2 in 0..d {
                            for c2 in 0..d {
                                let coeff = left[(r, r2)].clone() * right[(c2, col)].clone();
                                if !coeff.is_zero() {
                                    let cell = &mut sys[(row, unknown(m, r2, c2))];
                                    *cell = cell.clone() - coeff;
                                }
                            }
                        }
                    }
                }
            }
        }
        blocks.push(sys);
    }
    let null = Mat::vstack(&blocks).nullspace(field.tol());
    if null.len() != 1 {
        return Err(QError::SpinRepresentation(format!(
            "equivariant maps V -> End(Σ) form a space of dimension {}",
            null.len()
        )));
    }
    let raw = &null[0];
    let first = raw
        .iter()
        .find(|x| !x.is_negligible(field.tol()))
        .cloned()
        .ok_or_else(|| QError::SpinRepresentation("zero solution".into()))?;
    let unit = first.inv().expect("nonzero");
    let s0: Vec<Mat<F::S>> = (0..n)
        .map(|k| Mat::from_fn(d, d, |r, col| raw[unknown(k, r, col)].clone() * unit.clone()))
        .collect();
    let trial = SpinRepresentation { sigma: sigma.clone(), s: s0 };

    // s = λ s0 turns Σ u ψψ = B(u) into λ² s0(u) = B(u)
    let inhomogeneous = c
        .relations()
        .iter()
        .find(|r| !r.constant.is_negligible(field.tol()))
        .ok_or_else(|| QError::SpinRepresentation("no relation fixes the scale".into()))?;
    let quad = CliffordRelation {
        quadratic: inhomogeneous.quadratic.clone(),
        constant: F::S::zero(),
    };
    let image = trial.realize(&quad.element(n));
    let diag = (0..d)
        .map(|i| image[(i, i)].clone())
        .find(|x| !x.is_negligible(field.tol()))
        .ok_or_else(|| QError::SpinRepresentation("degenerate Clifford image".into()))?;
    let lambda_sq = inhomogeneous.constant.clone() * diag.inv().expect("nonzero");
    let lambda = field
        .sqrt(&lambda_sq)
        .ok_or_else(|| QError::SpinRepresentation("scale is not a square in the field".into()))?;
    let out = SpinRepresentation {
        sigma,
        s: trial.s.iter().map(|m| m.scale(&lambda)).collect(),
    };
    let bad: Vec<usize> = out
        .relation_residuals(c.relations())
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.holds)
        .map(|(i, _)| i)
        .collect();
    if !bad.is_empty() {
        return Err(QError::SpinRepresentation(format!("relations {bad:?} fail on Σ")));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct IsomorphismReport {
    pub algebra_dim: usize,
    /// Rank of the image of the normal basis in `End(Σ)`.
    pub image_rank: usize,
    pub kernel_dim: usize,
    pub negated_satisfies_relations: bool,
    /// Rank of `s ⊕ -s`; full rank means `cl ≅ End(Σ) ⊕ End(Σ)`.
    pub combined_rank: usize,
    /// Components of `End(Σ)` under the adjoint action, largest first.
    pub endomorphism_components: Vec<Spin>,
}

impl IsomorphismReport {
    pub fn passed(&self) -> bool {
        let d = 1usize << (self.algebra_dim.trailing_zeros() / 2);
        self.image_rank == d * d
            && self.kernel_dim + self.image_rank == self.algebra_dim
            && self.negated_satisfies_relations
            && self.combined_rank == self.algebra_dim
    }
}

impl fmt::Display for IsomorphismReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "dim {} image rank {} kernel {} second rep {} combined rank {} End(Σ) = {}",
            self.algebra_dim,
            self.image_rank,
            self.kernel_dim,
            if self.negated_satisfies_relations { "ok" } else { "fails" },
            self.combined_rank,
            self.endomorphism_components
                .iter()
                .map(|j| format!("V_{j}"))
                .collect::<Vec<_>>()
                .join(" + ")
        )
    }
}

pub fn verify_algebra_isomorphism<F: QField>(
    c: &CliffordAlgebra<F>,
    s: &SpinRepresentation<F>,
) -> Result<IsomorphismReport> {
    let field = c.field();
    let tol = field.tol();
    let images: Vec<Mat<F::S>> = c
        .normal_basis()
        .iter()
        .map(|w| s.realize(&CliffordElement::word(w.clone())))
        .collect();
    let flat = |m: &Mat<F::S>| m.entries().to_vec();
    let image_rank = Mat::from_columns(&images.iter().map(flat).collect::<Vec<_>>()).rank(tol);
    let neg = s.negated();
    let negated_satisfies_relations = neg.relation_residuals(c.relations()).iter().all(|r| r.holds);
    let combined: Vec<Vec<F::S>> = c
        .normal_basis()
        .iter()
        .zip(&images)
        .map(|(w, m)| {
            let mut v = flat(m);
            v.extend(flat(&neg.realize(&CliffordElement::word(w.clone()))));
            v
        })
        .collect();
    let combined_rank = Mat::from_columns(&combined).rank(tol);
    let mut endomorphism_components: Vec<Spin> = decompose(&s.endomorphism_module()?)?
        .into_iter()
        .flat_map(|comp| std::iter::repeat(comp.spin).take(comp.multiplicity))
        .collect();
    endomorphism_components.sort_by(|a, b| b.cmp(a));
    Ok(IsomorphismReport {
        algebra_dim: c.dim(),
        image_rank,
        kernel_dim: c.dim() - image_rank,
        negated_satisfies_relations,
        combined_rank,
        endomorphism_components,
    })
}
