//! Concrete set algebras: subsets of a unit `^nU` (or a disjoint union of
//! cartesian powers) with the operations defined pointwise on tuples.

use std::collections::{BTreeMap, HashMap, VecDeque};

use fixedbitset::FixedBitSet;

use crate::bao::{BooleanPart, BooleanTables, Elem, FiniteBao};
use crate::error::{Error, Result};
use crate::signature::{decode_transformation, replacement, transposition, ConstOp, Kind, Signature, UnaryOp};

/// A set of unit tuples, indexed by position in [`SetAlgebra::tuples`].
pub type TupleSet = FixedBitSet;

/// Largest unit handled in powerset mode.
pub const MAX_UNIT: usize = 4096;
/// Largest unit exported as a full powerset [`FiniteBao`].
pub const MAX_EXPORT_UNIT: usize = 16;
/// Largest generated subalgebra exported as a [`FiniteBao`].
pub const MAX_GENERATED: usize = 4096;

#[derive(Clone, Debug)]
pub struct SetAlgebra {
    signature: Signature,
    arity: usize,
    blocks: Vec<Vec<u8>>,
    tuples: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
}

impl SetAlgebra {
    /// All subsets of `^n U`, `U = {0, .., base-1}`. RA uses pairs.
    pub fn full(kind: Kind, n: usize, base: usize) -> Result<Self> {
        Self::gs(kind, n, &[base])
    }

    /// Generalized set algebra with unit the disjoint union of `^n U_k`,
    /// `|U_k| = sizes[k]`; points are numbered consecutively.
    pub fn gs(kind: Kind, n: usize, sizes: &[usize]) -> Result<Self> {
        let signature = if kind == Kind::Ra { Signature::ra() } else { Signature::new(kind, n)? };
        let arity = if kind == Kind::Ra { 2 } else { n };
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::invalid("every base must be nonempty"));
        }
        let total: u128 = sizes.iter().map(|&b| (b as u128).pow(arity as u32)).sum();
        if total > MAX_UNIT as u128 {
            return Err(Error::guard("set algebra unit", total, MAX_UNIT as u128));
        }
        if sizes.iter().sum::<usize>() > 256 {
            return Err(Error::invalid("at most 256 base points"));
        }
        let mut blocks = Vec::new();
        let mut next = 0u16;
        for &b in sizes {
            blocks.push((next..next + b as u16).map(|p| p as u8).collect::<Vec<u8>>());
            next += b as u16;
        }
        let mut tuples = Vec::new();
        for block in &blocks {
            let b = block.len();
            for idx in 0..b.pow(arity as u32) {
                let mut t = vec![0u8; arity];
                let mut r = idx;
                for c in (0..arity).rev() {
                    t[c] = block[r % b];
                    r /= b;
                }
                tuples.push(t);
            }
        }
        let index = tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Ok(SetAlgebra {
            signature,
            arity,
            blocks,
            tuples,
            index,
        })
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    /// Tuple length: the dimension, or 2 for RA.
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn blocks(&self) -> &[Vec<u8>] {
        &self.blocks
    }

    pub fn tuples(&self) -> &[Vec<u8>] {
        &self.tuples
    }

    pub fn unit_len(&self) -> usize {
        self.tuples.len()
    }

    pub fn index_of(&self, t: &[u8]) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn zero(&self) -> TupleSet {
        FixedBitSet::with_capacity(self.unit_len())
    }

    pub fn one(&self) -> TupleSet {
        let mut s = self.zero();
        s.insert_range(..);
        s
    }

    pub fn from_tuples<'t>(&self, ts: impl IntoIterator<Item = &'t [u8]>) -> Result<TupleSet> {
        let mut s = self.zero();
        for t in ts {
            let i = self
                .index_of(t)
                .ok_or_else(|| Error::invalid(format!("tuple {t:?} is not in the unit")))?;
            s.insert(i);
        }
        Ok(s)
    }

    pub fn members<'s>(&'s self, x: &'s TupleSet) -> impl Iterator<Item = &'s [u8]> + 's {
        x.ones().map(|i| self.tuples[i].as_slice())
    }

    pub fn to_tuples(&self, x: &TupleSet) -> Vec<Vec<u8>> {
        self.members(x).map(|t| t.to_vec()).collect()
    }

    pub fn complement(&self, x: &TupleSet) -> TupleSet {
        let mut s = x.clone();
        s.toggle_range(..);
        s
    }

    pub fn meet(&self, x: &TupleSet, y: &TupleSet) -> TupleSet {
        x & y
    }

    pub fn join(&self, x: &TupleSet, y: &TupleSet) -> TupleSet {
        x | y
    }

    /// `C_i X = {s in unit : s ≡_i t for some t in X}`.
    pub fn cyl(&self, i: usize, x: &TupleSet) -> TupleSet {
        let mut out = self.zero();
        for t in x.ones() {
            let tup = &self.tuples[t];
            let block = self.block_containing(tup[0]);
            let mut u = tup.clone();
            for &p in block {
                u[i] = p;
                out.insert(self.index[&u]);
            }
        }
        out
    }

    fn block_containing(&self, p: u8) -> &[u8] {
        self.blocks.iter().find(|b| b.contains(&p)).expect("point of some block")
    }

    /// `D_ij = {s : s_i = s_j}`.
    pub fn diag(&self, i: usize, j: usize) -> TupleSet {
        let mut out = self.zero();
        for (k, t) in self.tuples.iter().enumerate() {
            if t[i] == t[j] {
                out.insert(k);
            }
        }
        out
    }

    /// `S_τ X = {s : s ∘ τ in X}`.
    pub fn subst(&self, tau: &[u8], x: &TupleSet) -> TupleSet {
        let mut out = self.zero();
        let mut st = vec![0u8; self.arity];
        for (k, s) in self.tuples.iter().enumerate() {
            for (c, &v) in tau.iter().enumerate() {
                st[c] = s[v as usize];
            }
            if x.contains(self.index[&st]) {
                out.insert(k);
            }
        }
        out
    }

    pub fn converse(&self, x: &TupleSet) -> TupleSet {
        self.subst(&[1, 0], x)
    }

    /// Relational composition (RA units).
    pub fn compose(&self, x: &TupleSet, y: &TupleSet) -> TupleSet {
        let mut out = self.zero();
        for a in x.ones() {
            let (p, q) = (self.tuples[a][0], self.tuples[a][1]);
            for b in y.ones() {
                if self.tuples[b][0] == q {
                    out.insert(self.index[&vec![p, self.tuples[b][1]]]);
                }
            }
        }
        out
    }

    pub fn apply(&self, op: UnaryOp, x: &TupleSet) -> Result<TupleSet> {
        let n = self.arity;
        if !self.signature.provides(op) {
            return Err(Error::invalid(format!("{} is not an operation of {}", op.name(n), self.signature)));
        }
        Ok(match op {
            UnaryOp::Cyl(i) => self.cyl(i as usize, x),
            UnaryOp::CylSet(g) => (0..n).filter(|i| g >> i & 1 == 1).fold(x.clone(), |acc, i| self.cyl(i, &acc)),
            UnaryOp::Replace(i, j) => self.subst(&replacement(n, i, j), x),
            UnaryOp::Swap(i, j) => self.subst(&transposition(n, i, j), x),
            UnaryOp::Subst(t) => self.subst(&decode_transformation(t, n), x),
            UnaryOp::Converse => self.converse(x),
        })
    }

    pub fn constant(&self, c: ConstOp) -> TupleSet {
        match c {
            ConstOp::Diag(i, j) => self.diag(i as usize, j as usize),
            ConstOp::Identity => self.diag(0, 1),
        }
    }

    fn mask_of(x: &TupleSet) -> Elem {
        x.ones().fold(0, |m, i| m | 1 << i)
    }

    fn set_of_mask(&self, m: Elem) -> TupleSet {
        let mut s = self.zero();
        for i in 0..self.unit_len() {
            if m >> i & 1 == 1 {
                s.insert(i);
            }
        }
        s
    }

    /// The whole powerset as a table-backed algebra; element `e` is the set of
    /// tuples whose positions are the bits of `e`.
    pub fn to_bao(&self) -> Result<FiniteBao> {
        let u = self.unit_len();
        if u > MAX_EXPORT_UNIT {
            return Err(Error::guard("exported unit", u as u128, MAX_EXPORT_UNIT as u128));
        }
        let size = 1u32 << u;
        let sets: Vec<TupleSet> = (0..size).map(|m| self.set_of_mask(m)).collect();
        let mut unary = BTreeMap::new();
        for op in self.signature.unary_roster() {
            let t = sets.iter().map(|s| self.apply(op, s).map(|r| Self::mask_of(&r))).collect::<Result<Vec<_>>>()?;
            unary.insert(op, t);
        }
        let constants = self
            .signature
            .constant_roster()
            .into_iter()
            .map(|c| (c, Self::mask_of(&self.constant(c))))
            .collect();
        let composition = if self.signature.has_composition() {
            let mut t = Vec::with_capacity((size * size) as usize);
            for x in &sets {
                for y in &sets {
                    t.push(Self::mask_of(&self.compose(x, y)));
                }
            }
            Some(t)
        } else {
            None
        };
        FiniteBao::new(self.signature, BooleanPart::Powerset { atoms: u as u32 }, unary, constants, composition)
    }

    /// Subalgebra generated by `gens`, as an algebra with explicit tables;
    /// element `k` is `elements[k]`.
    pub fn generated(&self, gens: &[TupleSet]) -> Result<(FiniteBao, Vec<TupleSet>)> {
        let mut elements: Vec<TupleSet> = Vec::new();
        let mut id: HashMap<TupleSet, Elem> = HashMap::new();
        let mut queue = VecDeque::new();
        let roster = self.signature.unary_roster();
        let consts: Vec<TupleSet> = self.signature.constant_roster().into_iter().map(|c| self.constant(c)).collect();
        let mut add = |s: TupleSet, elements: &mut Vec<TupleSet>, queue: &mut VecDeque<Elem>| -> Result<Elem> {
            if let Some(&e) = id.get(&s) {
                return Ok(e);
            }
            if elements.len() >= MAX_GENERATED {
                return Err(Error::guard("generated subalgebra", (elements.len() + 1) as u128, MAX_GENERATED as u128));
            }
            let e = elements.len() as Elem;
            id.insert(s.clone(), e);
            elements.push(s);
            queue.push_back(e);
            Ok(e)
        };
        for s in [self.zero(), self.one()].into_iter().chain(gens.iter().cloned()).chain(consts) {
            add(s, &mut elements, &mut queue)?;
        }
        while let Some(e) = queue.pop_front() {
            let x = elements[e as usize].clone();
            let mut fresh = vec![self.complement(&x)];
            for &op in &roster {
                fresh.push(self.apply(op, &x)?);
            }
            for k in 0..=e {
                let y = &elements[k as usize];
                fresh.push(self.join(&x, y));
                fresh.push(self.meet(&x, y));
                if self.signature.has_composition() {
                    fresh.push(self.compose(&x, y));
                    fresh.push(self.compose(y, &x));
                }
            }
            for f in fresh {
                add(f, &mut elements, &mut queue)?;
            }
        }
        let k = elements.len();
        let index: HashMap<&TupleSet, Elem> = elements.iter().enumerate().map(|(i, s)| (s, i as Elem)).collect();
        let of = |s: &TupleSet| index[s];
        let mut join = Vec::with_capacity(k * k);
        let mut meet = Vec::with_capacity(k * k);
        let mut comp = Vec::new();
        for x in &elements {
            for y in &elements {
                join.push(of(&self.join(x, y)));
                meet.push(of(&self.meet(x, y)));
                if self.signature.has_composition() {
                    comp.push(of(&self.compose(x, y)));
                }
            }
        }
        let boolean = BooleanPart::Tables(BooleanTables {
            size: k,
            join,
            meet,
            complement: elements.iter().map(|x| of(&self.complement(x))).collect(),
            zero: of(&self.zero()),
            one: of(&self.one()),
        });
        let mut unary = BTreeMap::new();
        for &op in &roster {
            let t = elements.iter().map(|x| self.apply(op, x).map(|r| of(&r))).collect::<Result<Vec<_>>>()?;
            unary.insert(op, t);
        }
        let constants = self
            .signature
            .constant_roster()
            .into_iter()
            .map(|c| (c, of(&self.constant(c))))
            .collect();
        let composition = self.signature.has_composition().then_some(comp);
        let bao = FiniteBao::new(self.signature, boolean, unary, constants, composition)?;
        Ok((bao, elements))
    }
}
