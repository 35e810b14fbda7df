//! Concrete set algebras, neat reducts, sc-words and `N⁺`, and the search
//! for and verification of representations over finite bases.

pub mod neat;
pub mod search;
pub mod setalg;
pub mod verify;
pub mod words;

pub use neat::{neat_reduct, neat_reduct_in};
pub use search::{find_representation, find_representation_within, Obstruction, SearchOutcome, SearchReport};
pub use setalg::{SetAlgebra, TupleSet};
pub use verify::{restrict_candidate, verify_complete_representation, RepresentationCandidate, Verdict};
pub use words::{n_plus, s_word, word_map, NPlus, ScLetter, ScWord};

use crate::bao::{Elem, FiniteBao};
use crate::signature::{ConstOp, UnaryOp};

/// The cylindric reduct shared by set algebras and table-backed algebras;
/// enough to evaluate sc-words and `N⁺`.
pub trait CylindricOps {
    type E: Clone + Eq;

    fn dim(&self) -> usize;
    fn one(&self) -> Self::E;
    fn meet(&self, x: &Self::E, y: &Self::E) -> Self::E;
    fn cyl(&self, i: usize, x: &Self::E) -> Self::E;
    fn diag(&self, i: usize, j: usize) -> Self::E;
    fn is_zero(&self, x: &Self::E) -> bool;

    /// `s_i^j x = c_i(x · d_ij)` for `i ≠ j`.
    fn replace(&self, i: usize, j: usize, x: &Self::E) -> Self::E {
        if i == j {
            return x.clone();
        }
        self.cyl(i, &self.meet(x, &self.diag(i, j)))
    }
}

impl CylindricOps for SetAlgebra {
    type E = TupleSet;

    fn dim(&self) -> usize {
        self.arity()
    }

    fn one(&self) -> TupleSet {
        SetAlgebra::one(self)
    }

    fn meet(&self, x: &TupleSet, y: &TupleSet) -> TupleSet {
        SetAlgebra::meet(self, x, y)
    }

    fn cyl(&self, i: usize, x: &TupleSet) -> TupleSet {
        SetAlgebra::cyl(self, i, x)
    }

    fn diag(&self, i: usize, j: usize) -> TupleSet {
        SetAlgebra::diag(self, i, j)
    }

    fn is_zero(&self, x: &TupleSet) -> bool {
        x.is_clear()
    }

    fn replace(&self, i: usize, j: usize, x: &TupleSet) -> TupleSet {
        let tau = crate::signature::replacement(self.arity(), i as u8, j as u8);
        self.subst(&tau, x)
    }
}

impl CylindricOps for FiniteBao {
    type E = Elem;

    fn dim(&self) -> usize {
        self.signature().dim()
    }

    fn one(&self) -> Elem {
        FiniteBao::one(self)
    }

    fn meet(&self, x: &Elem, y: &Elem) -> Elem {
        FiniteBao::meet(self, *x, *y)
    }

    fn cyl(&self, i: usize, x: &Elem) -> Elem {
        self.apply(UnaryOp::Cyl(i as u8), *x).expect("cylindrifier present")
    }

    fn diag(&self, i: usize, j: usize) -> Elem {
        if i == j {
            return FiniteBao::one(self);
        }
        self.constant(ConstOp::Diag(i as u8, j as u8)).expect("diagonal present")
    }

    fn is_zero(&self, x: &Elem) -> bool {
        *x == self.zero()
    }

    fn replace(&self, i: usize, j: usize, x: &Elem) -> Elem {
        if i == j {
            return *x;
        }
        match self.apply(UnaryOp::Replace(i as u8, j as u8), *x) {
            Some(y) => y,
            None => self.cyl(i, &FiniteBao::meet(self, *x, self.diag(i, j))),
        }
    }
}
