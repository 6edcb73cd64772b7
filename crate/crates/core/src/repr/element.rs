//! Formal elements of U_q(su(2)): linear combinations of words in
//! `e, f, k, k^-1` with exact coefficients, and their PBW normal form
//! `f^a k^b e^c`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::linalg::Mat;
use crate::qscalar::{QExact, QField};

use super::hopf::HopfStructure;
use super::{Gen, Representation};

pub type Word = Vec<Gen>;

/// Element of the free algebra on the generators. Two elements are equal in
/// U_q exactly when their [`Pbw`] forms agree; use [`AlgebraElement::equals`].
#[derive(Clone, Debug, PartialEq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<Word, QExact>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::word(Vec::new())
    }

    pub fn gen(g: Gen) -> Self {
        Self::word(vec![g])
    }

    pub fn word(w: Word) -> Self {
        Self::term(QExact::one(), w)
    }

    pub fn term(c: QExact, w: Word) -> Self {
        let mut out = Self::zero();
        out.push(c, w);
        out
    }

    pub fn scalar(c: QExact) -> Self {
        Self::term(c, Vec::new())
    }

    pub fn push(&mut self, c: QExact, w: Word) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &QExact)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &QExact) -> Self {
        let mut out = Self::zero();
        for (w, v) in &self.terms {
            out.push(v * c, w.clone());
        }
        out
    }

    /// Matrix of the element in a representation.
    pub fn eval<F: QField>(&self, rep: &Representation<F>) -> Mat<F::S> {
        let field = rep.field();
        let mut acc = Mat::zeros(rep.dim(), rep.dim());
        for (w, c) in &self.terms {
            let mut m = Mat::identity(rep.dim());
            for g in w {
                m = m.matmul(rep.gen(*g));
            }
            acc = acc + m.scale(&field.from_exact(c));
        }
        acc
    }

    pub fn normal_form(&self) -> Pbw {
        let mut out = Pbw::default();
        for (w, c) in &self.terms {
            let mut acc = Pbw::monomial(c.clone(), (0, 0, 0));
            for g in w {
                acc = acc.mul_gen(*g);
            }
            out = out + acc;
        }
        out
    }

    /// Equality in U_q.
    pub fn equals(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).normal_form().is_zero()
    }

    /// Antipode, extended as an algebra anti-homomorphism.
    pub fn antipode(&self, hopf: HopfStructure) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            let mut acc = Self::scalar(c.clone());
            for g in w {
                acc = hopf.antipode(*g) * acc;
            }
            out = out + acc;
        }
        out
    }

    pub fn counit(&self) -> QExact {
        let mut acc = QExact::zero();
        for (w, c) in &self.terms {
            if w.iter().all(|g| matches!(g, Gen::K | Gen::Kinv)) {
                acc = acc + c.clone();
            }
        }
        acc
    }

    /// Iterated coproduct into `legs` tensor factors, as a list of
    /// `(coefficient, [leg_1, ..., leg_n])` with each leg a word. `legs = 2`
    /// is the ordinary Sweedler expansion `x' (x) x''`.
    pub fn coproduct(&self, hopf: HopfStructure, legs: usize) -> Vec<(QExact, Vec<Word>)> {
        assert!((1..=MAX_LEGS).contains(&legs), "Sweedler depth must be 1..={MAX_LEGS}");
        let mut out: BTreeMap<Vec<Word>, QExact> = BTreeMap::new();
        for (w, c) in &self.terms {
            let mut acc: Vec<Vec<Word>> = vec![vec![Vec::new(); legs]];
            for g in w {
                let split = hopf.iterated_coproduct(*g, legs);
                let mut next = Vec::with_capacity(acc.len() * split.len());
                for prefix in &acc {
                    for s in &split {
                        let mut t = prefix.clone();
                        for (leg, x) in t.iter_mut().zip(s) {
                            leg.push(*x);
                        }
                        next.push(t);
                    }
                }
                acc = next;
            }
            for t in acc {
                let v = out.entry(t).or_insert_with(QExact::zero);
                *v = v.clone() + c.clone();
            }
        }
        out.into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(t, c)| (c, t))
            .collect()
    }

    /// Adjoint action `x |> z = x_(1) z S(x_(2))` of the chosen Hopf structure.
    /// For the opposite structure this is `x'' z S^op(x')`.
    pub fn adjoint(hopf: HopfStructure, x: &AlgebraElement, z: &AlgebraElement) -> Self {
        let mut out = Self::zero();
        for (c, legs) in x.coproduct(hopf, 2) {
            let a = Self::word(legs[0].clone());
            let b = Self::word(legs[1].clone()).antipode(hopf);
            out = out + (a * z.clone() * b).scale(&c);
        }
        out
    }
}

/// Deepest Sweedler expansion supported.
pub const MAX_LEGS: usize = 6;

impl Add for AlgebraElement {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (w, c) in rhs.terms {
            self.push(c, w);
        }
        self
    }
}

impl Sub for AlgebraElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for AlgebraElement {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            terms: self.terms.into_iter().map(|(w, c)| (w, -c)).collect(),
        }
    }
}

impl Mul for AlgebraElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                out.push(x * y, w);
            }
        }
        out
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().map(|(w, c)| (c, word_text(w))))
    }
}

fn word_text(w: &[Gen]) -> String {
    w.iter().map(|g| g.symbol()).collect::<Vec<_>>().join("*")
}

fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (&'a QExact, String)>,
) -> fmt::Result {
    let mut first = true;
    for (c, w) in terms {
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        match (c.is_one(), w.is_empty()) {
            (true, true) => write!(f, "1")?,
            (true, false) => write!(f, "{w}")?,
            (false, true) => write!(f, "{c}")?,
            (false, false) => write!(f, "{c}*{w}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// PBW exponents `(a, b, c)` of `f^a k^b e^c`.
pub type PbwMonomial = (u32, i64, u32);

/// Element of U_q in the PBW basis `f^a k^b e^c`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Pbw {
    terms: BTreeMap<PbwMonomial, QExact>,
}

impl Pbw {
    pub fn monomial(c: QExact, m: PbwMonomial) -> Self {
        let mut out = Self::default();
        out.push(c, m);
        out
    }

    fn push(&mut self, c: QExact, m: PbwMonomial) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PbwMonomial, &QExact)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: PbwMonomial) -> QExact {
        self.terms.get(&m).cloned().unwrap_or_else(QExact::zero)
    }

    pub fn scale(&self, c: &QExact) -> Self {
        let mut out = Self::default();
        for (m, v) in &self.terms {
            out.push(v * c, *m);
        }
        out
    }

    /// Right multiplication by a generator, using
    /// `e^c k = q^-c k e^c`, `k^b f = q^-b f k^b` and
    /// `e^c f = f e^c + [c] (q^(1-c) k^2 - q^(c-1) k^-2) / (q - q^-1) e^(c-1)`.
    pub fn mul_gen(&self, g: Gen) -> Self {
        let mut out = Self::default();
        for (&(a, b, c), v) in &self.terms {
            let ci = c as i64;
            match g {
                Gen::E => out.push(v.clone(), (a, b, c + 1)),
                Gen::K => out.push(v * &QExact::t_pow(-2 * ci), (a, b + 1, c)),
                Gen::Kinv => out.push(v * &QExact::t_pow(2 * ci), (a, b - 1, c)),
                Gen::F => {
                    out.push(v * &QExact::t_pow(-2 * b), (a + 1, b, c));
                    if c > 0 {
                        let inv = (QExact::t_pow(2) - QExact::t_pow(-2))
                            .inv()
                            .expect("q - q^-1 is nonzero");
                        let base = v * &(QExact::qint(ci) * inv);
                        out.push(&base * &QExact::t_pow(2 * (1 - ci)), (a, b + 2, c - 1));
                        out.push(-(&base * &QExact::t_pow(2 * (ci - 1))), (a, b - 2, c - 1));
                    }
                }
            }
        }
        out
    }

    pub fn to_element(&self) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (&(a, b, c), v) in &self.terms {
            let mut w = vec![Gen::F; a as usize];
            let kg = if b >= 0 { Gen::K } else { Gen::Kinv };
            w.extend(std::iter::repeat_n(kg, b.unsigned_abs() as usize));
            w.extend(std::iter::repeat_n(Gen::E, c as usize));
            out.push(v.clone(), w);
        }
        out
    }
}

impl Add for Pbw {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (m, c) in rhs.terms {
            self.push(c, m);
        }
        self
    }
}

impl fmt::Display for Pbw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = |&(a, b, c): &PbwMonomial| {
            let mut parts = Vec::new();
            match a {
                0 => {}
                1 => parts.push("f".to_string()),
                _ => parts.push(format!("f^{a}")),
            }
            match b {
                0 => {}
                1 => parts.push("k".to_string()),
                _ => parts.push(format!("k^{b}")),
            }
            match c {
                0 => {}
                1 => parts.push("e".to_string()),
                _ => parts.push(format!("e^{c}")),
            }
            parts.join("*")
        };
        write_terms(f, self.terms.iter().map(|(m, c)| (c, text(m))))
    }
}
