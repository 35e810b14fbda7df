//! Atom structures: RA structures given by forbidden triples, CA-like
//! structures given by accessibility relations, the rainbow generator, the
//! complex algebra and its inverse.

mod ca;
mod complex;
mod json;
mod ra;
mod rainbow;

use serde::Serialize;

pub use ca::CaAtomStructure;
pub use complex::{atom_structure_of, complex_algebra, MAX_COMPLEX_ATOMS, MAX_COMPOSITION_ATOMS};
pub use json::StructureJson;
pub use ra::{RaAtomStructure, MAX_RA_ATOMS};
pub use rainbow::{gen_rainbow, is_rainbow};

#[allow(unused_imports)]
pub(crate) use ca::{full_mask, image};

use crate::error::{Error, Result};
use crate::signature::Signature;

pub type Atom = u8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub law: String,
    pub message: String,
}

/// Violated laws with witnessing atoms; empty iff the structure is valid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Diagnostics {
    pub violations: Vec<Violation>,
}

impl Diagnostics {
    pub fn push(&mut self, law: &str, message: String) {
        self.violations.push(Violation {
            law: law.to_string(),
            message,
        });
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn messages(&self) -> impl Iterator<Item = &str> {
        self.violations.iter().map(|v| v.message.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtomStructure {
    Ra(RaAtomStructure),
    Ca(CaAtomStructure),
}

impl From<RaAtomStructure> for AtomStructure {
    fn from(s: RaAtomStructure) -> Self {
        AtomStructure::Ra(s)
    }
}

impl From<CaAtomStructure> for AtomStructure {
    fn from(s: CaAtomStructure) -> Self {
        AtomStructure::Ca(s)
    }
}

/// Largest number of candidate permutations tried by [`canonical_form`].
pub const MAX_CANONICAL_PERMUTATIONS: u128 = 5_000_000;

impl AtomStructure {
    pub fn signature(&self) -> Signature {
        match self {
            AtomStructure::Ra(_) => Signature::ra(),
            AtomStructure::Ca(s) => s.signature(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            AtomStructure::Ra(s) => s.len(),
            AtomStructure::Ca(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn names(&self) -> &[String] {
        match self {
            AtomStructure::Ra(s) => s.names(),
            AtomStructure::Ca(s) => s.names(),
        }
    }

    pub fn validate(&self) -> Diagnostics {
        match self {
            AtomStructure::Ra(s) => s.validate(),
            AtomStructure::Ca(s) => s.validate(),
        }
    }

    pub fn as_ra(&self) -> Option<&RaAtomStructure> {
        match self {
            AtomStructure::Ra(s) => Some(s),
            AtomStructure::Ca(_) => None,
        }
    }

    pub fn as_ca(&self) -> Option<&CaAtomStructure> {
        match self {
            AtomStructure::Ca(s) => Some(s),
            AtomStructure::Ra(_) => None,
        }
    }

    pub fn permuted(&self, perm: &[Atom]) -> AtomStructure {
        match self {
            AtomStructure::Ra(s) => s.permuted(perm).into(),
            AtomStructure::Ca(s) => s.permuted(perm).into(),
        }
    }

    fn encode_under(&self, perm: &[Atom]) -> Vec<u8> {
        match self {
            AtomStructure::Ra(s) => s.encode_under(perm),
            AtomStructure::Ca(s) => s.encode_under(perm),
        }
    }

    fn atom_invariant(&self, a: Atom) -> Vec<u32> {
        match self {
            AtomStructure::Ra(s) => s.atom_invariant(a),
            AtomStructure::Ca(s) => s.atom_invariant(a),
        }
    }

    /// Canonical SHA-256 of the JSON form, used to bind certificates.
    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let text = serde_json::to_string(&StructureJson::from(self)).expect("structure serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

/// Name-free canonical encoding together with the permutation (old id ->
/// new id) attaining it. Atoms are first sorted into classes by an
/// isomorphism invariant; the lexicographically least encoding over all
/// class-preserving permutations is chosen.
pub fn canonical_form(s: &AtomStructure) -> Result<(Vec<u8>, Vec<Atom>)> {
    let k = s.len();
    let mut order: Vec<(Vec<u32>, Atom)> = (0..k as Atom).map(|a| (s.atom_invariant(a), a)).collect();
    order.sort();
    let mut classes: Vec<Vec<Atom>> = Vec::new();
    for (i, (inv, a)) in order.iter().enumerate() {
        if i > 0 && order[i - 1].0 == *inv {
            classes.last_mut().expect("nonempty").push(*a);
        } else {
            classes.push(vec![*a]);
        }
    }
    let count: u128 = classes
        .iter()
        .map(|c| (1..=c.len() as u128).product::<u128>())
        .try_fold(1u128, |acc, f| acc.checked_mul(f))
        .unwrap_or(u128::MAX);
    if count > MAX_CANONICAL_PERMUTATIONS {
        return Err(Error::guard("canonical-form permutations", count, MAX_CANONICAL_PERMUTATIONS));
    }
    let class_perms: Vec<Vec<Vec<Atom>>> = classes.iter().map(|c| permutations(c)).collect();
    let mut offsets = Vec::with_capacity(classes.len());
    let mut off = 0u8;
    for c in &classes {
        offsets.push(off);
        off += c.len() as u8;
    }
    let mut best: Option<(Vec<u8>, Vec<Atom>)> = None;
    let mut idx = vec![0usize; classes.len()];
    let mut perm = vec![0 as Atom; k];
    loop {
        for (ci, p) in idx.iter().enumerate() {
            for (slot, &atom) in class_perms[ci][*p].iter().enumerate() {
                perm[atom as usize] = offsets[ci] + slot as u8;
            }
        }
        let code = s.encode_under(&perm);
        if best.as_ref().is_none_or(|(b, _)| code < *b) {
            best = Some((code, perm.clone()));
        }
        let mut c = 0;
        loop {
            if c == idx.len() {
                return Ok(best.expect("at least one permutation"));
            }
            idx[c] += 1;
            if idx[c] < class_perms[c].len() {
                break;
            }
            idx[c] = 0;
            c += 1;
        }
    }
}

pub fn is_isomorphic(a: &AtomStructure, b: &AtomStructure) -> Result<bool> {
    if a.signature() != b.signature() || a.len() != b.len() {
        return Ok(false);
    }
    let (ca, _) = canonical_form(a)?;
    let (cb, _) = canonical_form(b)?;
    Ok(ca == cb)
}

/// An isomorphism `a -> b` as a map of atom ids, if one exists.
pub fn find_isomorphism(a: &AtomStructure, b: &AtomStructure) -> Result<Option<Vec<Atom>>> {
    if a.signature() != b.signature() || a.len() != b.len() {
        return Ok(None);
    }
    let (ca, pa) = canonical_form(a)?;
    let (cb, pb) = canonical_form(b)?;
    if ca != cb {
        return Ok(None);
    }
    let mut inv_b = vec![0 as Atom; pb.len()];
    for (old, &new) in pb.iter().enumerate() {
        inv_b[new as usize] = old as Atom;
    }
    Ok(Some(pa.iter().map(|&c| inv_b[c as usize]).collect()))
}

fn permutations(items: &[Atom]) -> Vec<Vec<Atom>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renamed_rainbow_is_isomorphic_and_the_map_is_an_isomorphism() {
        let s: AtomStructure = gen_rainbow(2, 2).unwrap().into();
        let perm = vec![0, 2, 1, 4, 3];
        let t = s.permuted(&perm);
        assert!(is_isomorphic(&s, &t).unwrap());
        let f = find_isomorphism(&s, &t).unwrap().unwrap();
        let (sr, tr) = (s.as_ra().unwrap(), t.as_ra().unwrap());
        for a in sr.atoms() {
            for b in sr.atoms() {
                for c in sr.atoms() {
                    assert_eq!(sr.consistent(a, b, c), tr.consistent(f[a as usize], f[b as usize], f[c as usize]));
                }
            }
        }
    }

    #[test]
    fn different_rainbows_are_not_isomorphic() {
        let a: AtomStructure = gen_rainbow(2, 1).unwrap().into();
        let b: AtomStructure = gen_rainbow(1, 2).unwrap().into();
        assert!(!is_isomorphic(&a, &b).unwrap());
    }
}
