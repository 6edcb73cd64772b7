//! The two Hopf structures on U_q(su(2)) used side by side: the primary
//! one and its opposite (flipped coproduct, inverse antipode).

use crate::qscalar::QExact;

use super::element::AlgebraElement;
use super::Gen;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HopfStructure {
    Primary,
    Opposite,
}

impl HopfStructure {
    /// `Δ(g)` as a sum of simple tensors with unit coefficients.
    pub fn coproduct(self, g: Gen) -> Vec<(Gen, Gen)> {
        let primary = match g {
            Gen::E => vec![(Gen::E, Gen::K), (Gen::Kinv, Gen::E)],
            Gen::F => vec![(Gen::F, Gen::K), (Gen::Kinv, Gen::F)],
            Gen::K => vec![(Gen::K, Gen::K)],
            Gen::Kinv => vec![(Gen::Kinv, Gen::Kinv)],
        };
        match self {
            HopfStructure::Primary => primary,
            HopfStructure::Opposite => primary.into_iter().map(|(a, b)| (b, a)).collect(),
        }
    }

    /// `(Δ (x) id ... ) Δ(g)` into `legs` factors.
    pub fn iterated_coproduct(self, g: Gen, legs: usize) -> Vec<Vec<Gen>> {
        if legs == 1 {
            return vec![vec![g]];
        }
        let mut out = Vec::new();
        for head in self.iterated_coproduct(g, legs - 1) {
            let (last, rest) = head.split_last().expect("nonempty");
            for (a, b) in self.coproduct(*last) {
                let mut t = rest.to_vec();
                t.push(a);
                t.push(b);
                out.push(t);
            }
        }
        out
    }

    pub fn antipode(self, g: Gen) -> AlgebraElement {
        let s = match self {
            HopfStructure::Primary => 1,
            HopfStructure::Opposite => -1,
        };
        match g {
            Gen::E => AlgebraElement::term(-QExact::t_pow(2 * s), vec![Gen::E]),
            Gen::F => AlgebraElement::term(-QExact::t_pow(-2 * s), vec![Gen::F]),
            Gen::K => AlgebraElement::gen(Gen::Kinv),
            Gen::Kinv => AlgebraElement::gen(Gen::K),
        }
    }

    pub fn counit(self, g: Gen) -> i64 {
        match g {
            Gen::E | Gen::F => 0,
            Gen::K | Gen::Kinv => 1,
        }
    }
}
