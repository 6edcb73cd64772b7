use std::collections::BTreeSet;

use crate::error::{QError, Result};
use crate::linalg::Mat;
use crate::qscalar::{QField, Scalar};
use crate::spin::Spin;

use super::{sqrt_qint_product, Gen, Representation};

/// One isotypic component: `multiplicity` copies of `V_spin`, each given by
/// an embedding whose columns are the images of `|l,l>, ..., |l,-l>`.
#[derive(Clone, Debug)]
pub struct Component<S> {
    pub spin: Spin,
    pub multiplicity: usize,
    pub embeddings: Vec<Mat<S>>,
}

/// Splits a module given in a weight basis into irreducibles. Highest-weight
/// vectors are the kernel of `e` inside each weight space; each generates a
/// copy of `V_l` under `f`.
///
/// Highest-weight vectors are orthogonalised within a weight space and
/// scaled to unit norm with positive leading coordinate. In exact mode the
/// norm may have no square root in the field; the leading coordinate is then
/// scaled to 1 instead.
pub fn decompose<F: QField>(rep: &Representation<F>) -> Result<Vec<Component<F::S>>> {
    let field = rep.field();
    let n = rep.dim();
    let weights: BTreeSet<i64> = rep.twice_weights().iter().copied().collect();
    let mut out = Vec::new();
    let mut found = 0;
    for &w in weights.iter().rev().filter(|&&w| w >= 0) {
        let idx: Vec<usize> = (0..n).filter(|&i| rep.twice_weights()[i] == w).collect();
        let e_cols = Mat::from_fn(n, idx.len(), |r, c| rep.gen(Gen::E)[(r, idx[c])].clone());
        let kernel: Vec<Vec<F::S>> = e_cols
            .nullspace(field.tol())
            .into_iter()
            .map(|v| {
                let mut full = vec![F::S::zero(); n];
                for (c, x) in idx.iter().zip(v) {
                    full[*c] = x;
                }
                full
            })
            .collect();
        if kernel.is_empty() {
            continue;
        }
        let spin = Spin::from_twice(w as u32);
        let mut embeddings = Vec::new();
        for hw in orthogonalize(field, kernel) {
            let hw = normalize(field, hw);
            embeddings.push(generate(rep, spin, hw));
        }
        found += embeddings.len() * spin.dim();
        out.push(Component {
            spin,
            multiplicity: embeddings.len(),
            embeddings,
        });
    }
    let cols: Vec<Vec<F::S>> = out
        .iter()
        .flat_map(|c| c.embeddings.iter())
        .flat_map(|m| (0..m.cols()).map(move |j| m.col(j)))
        .collect();
    let rank = if cols.is_empty() {
        0
    } else {
        Mat::from_columns(&cols).rank(field.tol())
    };
    if found != n || rank != n {
        return Err(QError::IncompleteDecomposition {
            found: rank.min(found),
            total: n,
        });
    }
    Ok(out)
}

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

fn orthogonalize<F: QField>(field: &F, vs: Vec<Vec<F::S>>) -> Vec<Vec<F::S>> {
    let mut out: Vec<Vec<F::S>> = Vec::new();
    for mut v in vs {
        for u in &out {
            let c = dot(&v, u) * dot(u, u).inv().expect("nonzero basis vector");
            if c.is_negligible(field.tol()) {
                continue;
            }
            for (x, y) in v.iter_mut().zip(u) {
                *x = x.clone() - c.clone() * y.clone();
            }
        }
        out.push(v);
    }
    out
}

fn normalize<F: QField>(field: &F, v: Vec<F::S>) -> Vec<F::S> {
    let lead = v
        .iter()
        .find(|x| !x.is_negligible(field.tol()))
        .cloned()
        .expect("highest-weight vector is nonzero");
    let positive = field.to_f64(&lead) > 0.0;
    let scale = match field.sqrt(&dot(&v, &v)) {
        Some(norm) => {
            let s = norm.inv().expect("nonzero norm");
            if positive {
                s
            } else {
                -s
            }
        }
        None => lead.inv().expect("nonzero lead"),
    };
    v.into_iter().map(|x| x * scale.clone()).collect()
}

/// Columns `|l,m>` for `m = l, ..., -l`, lowering with
/// `f|l,m> = sqrt([l-m+1][l+m]) |l,m-1>`.
fn generate<F: QField>(rep: &Representation<F>, spin: Spin, hw: Vec<F::S>) -> Mat<F::S> {
    let field = rep.field();
    let l2 = spin.twice() as i64;
    let mut cols = vec![hw];
    for m2 in spin.twice_weights().take(spin.dim() - 1) {
        let c = sqrt_qint_product(field, (l2 - m2) / 2 + 1, (l2 + m2) / 2)
            .inv()
            .expect("lowering coefficient is nonzero below the top weight");
        let next = rep.gen(Gen::F).mul_vec(cols.last().unwrap());
        cols.push(next.into_iter().map(|x| x * c.clone()).collect());
    }
    Mat::from_columns(&cols)
}
