use std::borrow::Cow;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::signature::{encode_transformation, replacement, transposition, Kind, Signature, UnaryOp};
use crate::structure::{Atom, Diagnostics};

/// Atom structure of a cylindric-like algebra of dimension `n`.
///
/// Each roster operator `f` is stored as its accessibility relation, one
/// image bitmask per atom: bit `b` of `relations[f][a]` is set iff `b <= f(a)`.
/// Diagonals are atom bitmasks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaAtomStructure {
    signature: Signature,
    names: Vec<String>,
    relations: BTreeMap<UnaryOp, Vec<u64>>,
    diagonals: BTreeMap<(u8, u8), u64>,
}

impl CaAtomStructure {
    /// Missing `d_ii` default to all atoms; every other rostered relation and
    /// diagonal must be given.
    pub fn new(
        signature: Signature,
        names: Vec<String>,
        relations: BTreeMap<UnaryOp, Vec<u64>>,
        mut diagonals: BTreeMap<(u8, u8), u64>,
    ) -> Result<Self> {
        signature.validate()?;
        if signature.kind == Kind::Ra {
            return Err(Error::invalid("RA structures use RaAtomStructure"));
        }
        let k = names.len();
        if k == 0 || k > 64 {
            return Err(Error::invalid(format!("atom count {k} outside 1..=64")));
        }
        if let Some((_, n)) = names.iter().enumerate().find(|(i, n)| names[..*i].contains(n)) {
            return Err(Error::invalid(format!("duplicate atom name {n:?}")));
        }
        let all = full_mask(k);
        let n = signature.dim();
        let roster = signature.unary_roster();
        for op in relations.keys() {
            if !roster.contains(op) {
                return Err(Error::invalid(format!("{} is not an operator of {signature}", op.name(n))));
            }
        }
        for op in &roster {
            let r = relations
                .get(op)
                .ok_or_else(|| Error::invalid(format!("missing accessibility relation for {}", op.name(n))))?;
            if r.len() != k || r.iter().any(|m| m & !all != 0) {
                return Err(Error::invalid(format!("relation {} has the wrong shape", op.name(n))));
            }
        }
        if signature.kind.has_diagonals() {
            for i in 0..n as u8 {
                diagonals.entry((i, i)).or_insert(all);
                for j in 0..n as u8 {
                    if !diagonals.contains_key(&(i, j)) {
                        return Err(Error::invalid(format!("missing diagonal d{i}{j}")));
                    }
                }
            }
            if diagonals.iter().any(|(&(i, j), &m)| i as usize >= n || j as usize >= n || m & !all != 0) {
                return Err(Error::invalid("diagonal out of range"));
            }
        } else if !diagonals.is_empty() {
            return Err(Error::invalid(format!("{signature} has no diagonals")));
        }
        Ok(CaAtomStructure {
            signature,
            names,
            relations,
            diagonals,
        })
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn dim(&self) -> usize {
        self.signature.dim()
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

    pub fn atoms(&self) -> impl Iterator<Item = Atom> {
        0..self.names.len() as Atom
    }

    pub fn all_atoms(&self) -> u64 {
        full_mask(self.len())
    }

    pub fn relations(&self) -> &BTreeMap<UnaryOp, Vec<u64>> {
        &self.relations
    }

    pub fn diagonals(&self) -> &BTreeMap<(u8, u8), u64> {
        &self.diagonals
    }

    /// Image masks of `op`, stored or derived: `c_(G)` composes the `c_i`,
    /// PEA replacements and transpositions are substitutions, and CA
    /// replacements follow `c_i(x . d_ij)`.
    pub fn relation(&self, op: UnaryOp) -> Option<Cow<'_, [u64]>> {
        if let Some(r) = self.relations.get(&op) {
            return Some(Cow::Borrowed(r));
        }
        if !self.signature.provides(op) {
            return None;
        }
        let n = self.dim();
        match op {
            UnaryOp::CylSet(g) => {
                let mut cur: Vec<u64> = (0..self.len()).map(|a| 1u64 << a).collect();
                for i in 0..n as u8 {
                    if g >> i & 1 == 1 {
                        let r = &self.relations[&UnaryOp::Cyl(i)];
                        cur = cur.iter().map(|&m| image(r, m)).collect();
                    }
                }
                Some(Cow::Owned(cur))
            }
            UnaryOp::Replace(i, j) | UnaryOp::Swap(i, j) if self.signature.kind.is_polyadic() => {
                let tau = if matches!(op, UnaryOp::Replace(..)) {
                    replacement(n, i, j)
                } else {
                    transposition(n, i, j)
                };
                self.relation(UnaryOp::Subst(encode_transformation(&tau)))
            }
            UnaryOp::Replace(i, j) if self.signature.kind == Kind::Ca => {
                if i == j {
                    return Some(Cow::Owned((0..self.len()).map(|a| 1u64 << a).collect()));
                }
                let c = &self.relations[&UnaryOp::Cyl(i)];
                let d = self.diagonals[&(i, j)];
                Some(Cow::Owned((0..self.len()).map(|a| if d >> a & 1 == 1 { c[a] } else { 0 }).collect()))
            }
            _ => None,
        }
    }

    #[inline]
    pub fn image(&self, op: UnaryOp, a: Atom) -> u64 {
        self.relations[&op][a as usize]
    }

    #[inline]
    pub fn cyl_related(&self, i: u8, a: Atom, b: Atom) -> bool {
        self.relations[&UnaryOp::Cyl(i)][a as usize] >> b & 1 == 1
    }

    #[inline]
    pub fn in_diagonal(&self, a: Atom, i: u8, j: u8) -> bool {
        match self.diagonals.get(&(i, j)) {
            Some(m) => m >> a & 1 == 1,
            None => i == j,
        }
    }

    pub fn validate(&self) -> Diagnostics {
        let mut d = Diagnostics::default();
        let k = self.len() as Atom;
        let n = self.dim();
        for i in 0..n as u8 {
            for a in 0..k {
                if !self.cyl_related(i, a, a) {
                    d.push("cylindrifier", format!("c{i} accessibility not reflexive at {}", self.name(a)));
                }
                for b in 0..k {
                    if self.cyl_related(i, a, b) && !self.cyl_related(i, b, a) {
                        d.push(
                            "cylindrifier",
                            format!("c{i} accessibility not symmetric at ({}, {})", self.name(a), self.name(b)),
                        );
                    }
                    for c in 0..k {
                        if self.cyl_related(i, a, b) && self.cyl_related(i, b, c) && !self.cyl_related(i, a, c) {
                            d.push(
                                "cylindrifier",
                                format!(
                                    "c{i} accessibility not transitive at ({}, {}, {})",
                                    self.name(a),
                                    self.name(b),
                                    self.name(c)
                                ),
                            );
                        }
                    }
                }
            }
        }
        if self.signature.kind.has_diagonals() {
            let all = self.all_atoms();
            for i in 0..n as u8 {
                if self.diagonals[&(i, i)] != all {
                    d.push("diagonal", format!("d{i}{i} is not the set of all atoms"));
                }
                for j in 0..n as u8 {
                    if self.diagonals[&(i, j)] != self.diagonals[&(j, i)] {
                        d.push("diagonal", format!("d{i}{j} and d{j}{i} differ"));
                    }
                    for l in 0..n as u8 {
                        let both = self.diagonals[&(i, j)] & self.diagonals[&(j, l)];
                        let bad = both & !self.diagonals[&(i, l)];
                        if bad != 0 {
                            let a = bad.trailing_zeros() as Atom;
                            d.push(
                                "diagonal",
                                format!("diagonal coherence violated at {} for d{i}{j}, d{j}{l}, d{i}{l}", self.name(a)),
                            );
                        }
                    }
                }
            }
        }
        for (op, r) in &self.relations {
            if op.is_bijective_substitution(n) {
                for a in 0..k {
                    if r[a as usize].count_ones() != 1 {
                        d.push(
                            "substitution",
                            format!("substitution {} is not functional at {}", op.name(n), self.name(a)),
                        );
                    }
                }
            }
        }
        d
    }

    pub fn permuted(&self, perm: &[Atom]) -> CaAtomStructure {
        let k = self.len();
        let mut names = vec![String::new(); k];
        for a in 0..k {
            names[perm[a] as usize] = self.names[a].clone();
        }
        let relations = self
            .relations
            .iter()
            .map(|(&op, r)| {
                let mut out = vec![0u64; k];
                for a in 0..k {
                    out[perm[a] as usize] = permute_mask(r[a], perm);
                }
                (op, out)
            })
            .collect();
        let diagonals = self.diagonals.iter().map(|(&ij, &m)| (ij, permute_mask(m, perm))).collect();
        CaAtomStructure::new(self.signature, names, relations, diagonals).expect("permutation preserves shape")
    }

    pub(crate) fn encode_under(&self, perm: &[Atom]) -> Vec<u8> {
        let k = self.len();
        let mut inv = vec![0usize; k];
        for (old, &new) in perm.iter().enumerate() {
            inv[new as usize] = old;
        }
        let mut out = Vec::new();
        for r in self.relations.values() {
            for &old in &inv {
                out.extend_from_slice(&permute_mask(r[old], perm).to_be_bytes());
            }
        }
        for &m in self.diagonals.values() {
            out.extend_from_slice(&permute_mask(m, perm).to_be_bytes());
        }
        out
    }

    pub(crate) fn atom_invariant(&self, a: Atom) -> Vec<u32> {
        let mut v = Vec::new();
        for r in self.relations.values() {
            v.push(r[a as usize].count_ones());
            v.push(r.iter().filter(|m| *m >> a & 1 == 1).count() as u32);
        }
        for m in self.diagonals.values() {
            v.push((m >> a & 1) as u32);
        }
        v
    }
}

pub(crate) fn full_mask(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

/// Union of the images of the atoms in `mask`.
#[inline]
pub(crate) fn image(rel: &[u64], mut mask: u64) -> u64 {
    let mut out = 0;
    while mask != 0 {
        let a = mask.trailing_zeros();
        out |= rel[a as usize];
        mask &= mask - 1;
    }
    out
}

fn permute_mask(mut m: u64, perm: &[Atom]) -> u64 {
    let mut out = 0;
    while m != 0 {
        let a = m.trailing_zeros() as usize;
        out |= 1u64 << perm[a];
        m &= m - 1;
    }
    out
}
