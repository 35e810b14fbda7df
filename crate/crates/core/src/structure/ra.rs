use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::structure::{Atom, Diagnostics};

/// Relation-algebra atom structure. A triple `(a, b, c)` is consistent when
/// `c <= a ; b` in the complex algebra; consistency is stored as its
/// complement, the forbidden triples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RaAtomStructure {
    names: Vec<String>,
    identities: Vec<Atom>,
    converse: Vec<Atom>,
    forbidden: BTreeSet<(Atom, Atom, Atom)>,
    consistent: Vec<bool>,
}

/// Largest RA atom count accepted by the constructor.
pub const MAX_RA_ATOMS: usize = 64;

impl RaAtomStructure {
    /// Builds the structure; only shape errors are rejected here, law
    /// violations are reported by [`RaAtomStructure::validate`].
    pub fn new(
        names: Vec<String>,
        identities: Vec<Atom>,
        converse: Vec<Atom>,
        forbidden: impl IntoIterator<Item = (Atom, Atom, Atom)>,
    ) -> Result<Self> {
        let k = names.len();
        if k == 0 || k > MAX_RA_ATOMS {
            return Err(Error::invalid(format!("RA atom count {k} outside 1..={MAX_RA_ATOMS}")));
        }
        let dup = names.iter().enumerate().find(|(i, n)| names[..*i].contains(n));
        if let Some((_, n)) = dup {
            return Err(Error::invalid(format!("duplicate atom name {n:?}")));
        }
        if converse.len() != k || converse.iter().any(|&c| c as usize >= k) {
            return Err(Error::invalid("converse must map every atom to an atom"));
        }
        if identities.is_empty() || identities.iter().any(|&i| i as usize >= k) {
            return Err(Error::invalid("identity atom missing or out of range"));
        }
        let forbidden: BTreeSet<_> = forbidden.into_iter().collect();
        if forbidden.iter().any(|&(a, b, c)| a as usize >= k || b as usize >= k || c as usize >= k) {
            return Err(Error::invalid("forbidden triple mentions an unknown atom"));
        }
        let mut consistent = vec![true; k * k * k];
        for &(a, b, c) in &forbidden {
            consistent[(a as usize * k + b as usize) * k + c as usize] = false;
        }
        Ok(RaAtomStructure {
            names,
            identities,
            converse,
            forbidden,
            consistent,
        })
    }

    /// Builds from the consistency predicate instead of the forbidden list.
    pub fn from_consistency(
        names: Vec<String>,
        identities: Vec<Atom>,
        converse: Vec<Atom>,
        consistent: impl Fn(Atom, Atom, Atom) -> bool,
    ) -> Result<Self> {
        let k = names.len() as Atom;
        let mut forbidden = Vec::new();
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    if !consistent(a, b, c) {
                        forbidden.push((a, b, c));
                    }
                }
            }
        }
        RaAtomStructure::new(names, identities, converse, forbidden)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: Atom) -> &str {
        &self.names[a as usize]
    }

    pub fn atom(&self, name: &str) -> Option<Atom> {
        self.names.iter().position(|n| n == name).map(|p| p as Atom)
    }

    pub fn identity(&self) -> Atom {
        self.identities[0]
    }

    pub fn identities(&self) -> &[Atom] {
        &self.identities
    }

    #[inline]
    pub fn converse(&self, a: Atom) -> Atom {
        self.converse[a as usize]
    }

    pub fn converse_map(&self) -> &[Atom] {
        &self.converse
    }

    pub fn forbidden(&self) -> &BTreeSet<(Atom, Atom, Atom)> {
        &self.forbidden
    }

    #[inline]
    pub fn consistent(&self, a: Atom, b: Atom, c: Atom) -> bool {
        let k = self.names.len();
        self.consistent[(a as usize * k + b as usize) * k + c as usize]
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> {
        0..self.names.len() as Atom
    }

    pub fn validate(&self) -> Diagnostics {
        let mut d = Diagnostics::default();
        let k = self.len() as Atom;
        for a in 0..k {
            if self.converse(self.converse(a)) != a {
                d.push("converse", format!("converse not involutive at {}", self.name(a)));
            }
        }
        if self.identities.len() > 1 {
            let names: Vec<&str> = self.identities.iter().map(|&i| self.name(i)).collect();
            d.push("identity", format!("multiple identity atoms: {}", names.join(", ")));
        }
        let id = self.identity();
        if self.converse(id) != id {
            d.push("identity", format!("identity atom {} is not self-converse", self.name(id)));
        }
        for a in 0..k {
            for b in 0..k {
                if self.consistent(id, a, b) != (a == b) {
                    d.push(
                        "identity",
                        format!("identity law violated at ({}, {}, {})", self.name(id), self.name(a), self.name(b)),
                    );
                }
            }
        }
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    let v = self.consistent(a, b, c);
                    let t1 = self.consistent(self.converse(a), c, b);
                    let t2 = self.consistent(b, self.converse(c), self.converse(a));
                    if v != t1 || v != t2 {
                        d.push(
                            "cycle",
                            format!("cycle law violated at ({}, {}, {})", self.name(a), self.name(b), self.name(c)),
                        );
                    }
                }
            }
        }
        d
    }

    /// The same structure with atoms renamed along `perm` (old id -> new id).
    pub fn permuted(&self, perm: &[Atom]) -> RaAtomStructure {
        let k = self.len();
        let mut names = vec![String::new(); k];
        let mut converse = vec![0; k];
        for a in 0..k {
            names[perm[a] as usize] = self.names[a].clone();
            converse[perm[a] as usize] = perm[self.converse[a] as usize];
        }
        let identities = self.identities.iter().map(|&i| perm[i as usize]).collect();
        let forbidden = self
            .forbidden
            .iter()
            .map(|&(a, b, c)| (perm[a as usize], perm[b as usize], perm[c as usize]));
        RaAtomStructure::new(names, identities, converse, forbidden).expect("permutation preserves shape")
    }

    /// Name-free encoding used for isomorphism testing.
    pub(crate) fn encode_under(&self, perm: &[Atom]) -> Vec<u8> {
        let k = self.len();
        let mut inv = vec![0usize; k];
        for (old, &new) in perm.iter().enumerate() {
            inv[new as usize] = old;
        }
        let mut ids: Vec<u8> = self.identities.iter().map(|&i| perm[i as usize]).collect();
        ids.sort_unstable();
        let mut out = Vec::with_capacity(k + k * k * k / 8 + 4);
        out.push(ids.len() as u8);
        out.extend(ids);
        out.extend((0..k).map(|n| perm[self.converse[inv[n]] as usize]));
        let mut acc = 0u8;
        let mut bits = 0;
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    acc = acc << 1 | self.consistent(inv[a] as Atom, inv[b] as Atom, inv[c] as Atom) as u8;
                    bits += 1;
                    if bits == 8 {
                        out.push(acc);
                        acc = 0;
                        bits = 0;
                    }
                }
            }
        }
        if bits > 0 {
            out.push(acc << (8 - bits));
        }
        out
    }

    /// Per-atom isomorphism invariant.
    pub(crate) fn atom_invariant(&self, a: Atom) -> Vec<u32> {
        let k = self.len() as Atom;
        let mut by_pos = [0u32; 3];
        let mut self_tri = 0u32;
        for x in 0..k {
            for y in 0..k {
                by_pos[0] += self.consistent(a, x, y) as u32;
                by_pos[1] += self.consistent(x, a, y) as u32;
                by_pos[2] += self.consistent(x, y, a) as u32;
            }
        }
        for x in 0..k {
            self_tri += self.consistent(a, a, x) as u32;
        }
        vec![
            !self.identities.contains(&a) as u32,
            (self.converse(a) != a) as u32,
            self.consistent(a, a, a) as u32,
            by_pos[0],
            by_pos[1],
            by_pos[2],
            self_tri,
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn non_involutive_converse_is_reported() {
        let s = RaAtomStructure::from_consistency(names(&["Id", "a", "b"]), vec![0], vec![0, 2, 2], |x, y, z| {
            if x == 0 {
                y == z
            } else if y == 0 {
                x == z
            } else {
                true
            }
        })
        .unwrap();
        let d = s.validate();
        assert!(d.messages().any(|m| m == "converse not involutive at a"), "{d:?}");
    }

    #[test]
    fn forbidding_id_a_a_violates_the_identity_law() {
        let s = RaAtomStructure::from_consistency(names(&["Id", "a"]), vec![0], vec![0, 1], |x, y, z| {
            !(x == 0 && y == 1 && z == 1) && (x != 0 || y == z)
        })
        .unwrap();
        assert!(s.validate().messages().any(|m| m.starts_with("identity law violated")));
    }

    #[test]
    fn two_identity_atoms_are_named() {
        let s = RaAtomStructure::from_consistency(names(&["e0", "e1"]), vec![0, 1], vec![0, 1], |_, _, _| true).unwrap();
        assert!(s.validate().messages().any(|m| m.starts_with("multiple identity atoms")));
    }

    #[test]
    fn shape_errors_are_rejected() {
        assert!(RaAtomStructure::new(names(&["Id", "Id"]), vec![0], vec![0, 1], []).is_err());
        assert!(RaAtomStructure::new(names(&["Id"]), vec![0], vec![1], []).is_err());
        assert!(RaAtomStructure::new(names(&["Id"]), vec![0], vec![0], [(0, 0, 3)]).is_err());
    }
}
