//! Finite rainbow relation-algebra atom structures.
//!
//! Atoms are `Id`, greens `g0 .. g{G-1}` and reds `r1 .. rR`, all
//! self-converse. Forbidden: every permutation of `(Id, x, y)` with `x != y`,
//! every monochromatic red triangle `(rj, rj, rj)` and every all-green
//! triangle, equal indices included. The finite parameters `G` and `R` stand
//! in for the uncountable green and red index sets of the infinite
//! construction.

use crate::error::{Error, Result};
use crate::structure::{Atom, RaAtomStructure};

pub fn gen_rainbow(greens: usize, reds: usize) -> Result<RaAtomStructure> {
    if greens == 0 || reds == 0 {
        return Err(Error::invalid("a rainbow needs at least one green and one red"));
    }
    let k = 1 + greens + reds;
    if k > super::MAX_RA_ATOMS {
        return Err(Error::guard("rainbow atoms", k as u128, super::MAX_RA_ATOMS as u128));
    }
    let mut names = vec!["Id".to_string()];
    names.extend((0..greens).map(|i| format!("g{i}")));
    names.extend((1..=reds).map(|j| format!("r{j}")));
    let is_green = |a: Atom| (1..=greens).contains(&(a as usize));
    let consistent = |a: Atom, b: Atom, c: Atom| {
        let t = [a, b, c];
        for p in 0..3 {
            if t[p] == 0 {
                let (x, y) = (t[(p + 1) % 3], t[(p + 2) % 3]);
                if x != y {
                    return false;
                }
            }
        }
        if a == b && b == c && a as usize > greens {
            return false;
        }
        !(is_green(a) && is_green(b) && is_green(c))
    };
    RaAtomStructure::from_consistency(names, vec![0], (0..k as Atom).collect(), consistent)
}

/// Recognizes the output of [`gen_rainbow`] by atom names; returns `(G, R)`.
pub fn is_rainbow(s: &RaAtomStructure) -> Option<(usize, usize)> {
    let greens = s.names().iter().filter(|n| n.starts_with('g')).count();
    let reds = s.names().iter().filter(|n| n.starts_with('r')).count();
    if greens == 0 || reds == 0 {
        return None;
    }
    let reference = gen_rainbow(greens, reds).ok()?;
    (reference == *s).then_some((greens, reds))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_one_has_three_atoms_and_the_listed_forbidden_triples() {
        let s = gen_rainbow(1, 1).unwrap();
        assert_eq!(s.names(), ["Id", "g0", "r1"]);
        let (g, r) = (1, 2);
        assert!(!s.consistent(r, r, r));
        assert!(!s.consistent(g, g, g));
        assert!(s.consistent(g, g, r));
        assert!(s.consistent(r, r, g));
        assert!(s.consistent(0, r, r));
        assert!(!s.consistent(0, g, r));
        assert!(s.validate().is_empty());
    }

    #[test]
    fn green_red_red_is_consistent_with_two_reds() {
        let s = gen_rainbow(1, 2).unwrap();
        let (g0, r1, r2) = (s.atom("g0").unwrap(), s.atom("r1").unwrap(), s.atom("r2").unwrap());
        assert!(s.consistent(g0, r1, r2));
        assert!(s.consistent(r1, r1, r2));
    }

    #[test]
    fn zero_parameters_are_rejected() {
        assert!(gen_rainbow(0, 1).is_err());
        assert!(gen_rainbow(1, 0).is_err());
    }

    #[test]
    fn recognizer_round_trips() {
        assert_eq!(is_rainbow(&gen_rainbow(3, 2).unwrap()), Some((3, 2)));
    }
}
