//! Finite Boolean algebras with operators, stored as dense tables.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::signature::{encode_transformation, replacement, transposition, ConstOp, Kind, Signature, UnaryOp};

/// Element id of a [`FiniteBao`].
pub type Elem = u32;

/// Largest universe accepted by [`FiniteBao::new`].
pub const MAX_UNIVERSE: usize = 1 << 22;

/// Largest universe for which a composition table is stored.
pub const MAX_COMPOSITION_UNIVERSE: usize = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BooleanPart {
    /// Elements are bitmasks over `atoms` atoms; join is bitwise or.
    Powerset { atoms: u32 },
    Tables(BooleanTables),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BooleanTables {
    pub size: usize,
    pub join: Vec<Elem>,
    pub meet: Vec<Elem>,
    pub complement: Vec<Elem>,
    pub zero: Elem,
    pub one: Elem,
}

impl BooleanTables {
    pub fn from_fns(
        size: usize,
        join: impl Fn(Elem, Elem) -> Elem,
        meet: impl Fn(Elem, Elem) -> Elem,
        complement: impl Fn(Elem) -> Elem,
        zero: Elem,
        one: Elem,
    ) -> Self {
        let mut j = Vec::with_capacity(size * size);
        let mut m = Vec::with_capacity(size * size);
        for x in 0..size as Elem {
            for y in 0..size as Elem {
                j.push(join(x, y));
                m.push(meet(x, y));
            }
        }
        BooleanTables {
            size,
            join: j,
            meet: m,
            complement: (0..size as Elem).map(complement).collect(),
            zero,
            one,
        }
    }
}

impl BooleanPart {
    pub fn size(&self) -> usize {
        match self {
            BooleanPart::Powerset { atoms } => 1usize << atoms,
            BooleanPart::Tables(t) => t.size,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteBao {
    signature: Signature,
    boolean: BooleanPart,
    unary: BTreeMap<UnaryOp, Vec<Elem>>,
    constants: BTreeMap<ConstOp, Elem>,
    composition: Option<Vec<Elem>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomInfo {
    pub atoms: Vec<Elem>,
    pub is_atomic: bool,
}

/// A generated subalgebra: the sub-universe (ids in the parent) and the
/// induced algebra, whose element `k` is `elements[k]` of the parent.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    pub elements: Vec<Elem>,
    pub algebra: FiniteBao,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdditivityVerdict {
    pub operator: String,
    pub additive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl FiniteBao {
    pub fn new(
        signature: Signature,
        boolean: BooleanPart,
        unary: BTreeMap<UnaryOp, Vec<Elem>>,
        constants: BTreeMap<ConstOp, Elem>,
        composition: Option<Vec<Elem>>,
    ) -> Result<Self> {
        signature.validate()?;
        let size = boolean.size();
        if size > MAX_UNIVERSE {
            return Err(Error::guard("universe size", size as u128, MAX_UNIVERSE as u128));
        }
        let in_range = |xs: &[Elem]| xs.iter().all(|&x| (x as usize) < size);
        if let BooleanPart::Tables(t) = &boolean {
            if t.join.len() != size * size || t.meet.len() != size * size || t.complement.len() != size {
                return Err(Error::invalid("Boolean tables are not total"));
            }
            if !in_range(&t.join) || !in_range(&t.meet) || !in_range(&t.complement) || !in_range(&[t.zero, t.one]) {
                return Err(Error::invalid("Boolean table entry out of range"));
            }
        }
        let roster: BTreeSet<UnaryOp> = signature.unary_roster().into_iter().collect();
        let stored: BTreeSet<UnaryOp> = unary.keys().copied().collect();
        if roster != stored {
            let missing: Vec<String> = roster.difference(&stored).map(|o| o.name(signature.dim())).collect();
            let extra: Vec<String> = stored.difference(&roster).map(|o| o.name(signature.dim())).collect();
            return Err(Error::invalid(format!(
                "operator tables do not match the {signature} roster (missing {missing:?}, unexpected {extra:?})"
            )));
        }
        for (op, t) in &unary {
            if t.len() != size || !in_range(t) {
                return Err(Error::invalid(format!("table of {} is not total on the universe", op.name(signature.dim()))));
            }
        }
        let croster: BTreeSet<ConstOp> = signature.constant_roster().into_iter().collect();
        let cstored: BTreeSet<ConstOp> = constants.keys().copied().collect();
        if croster != cstored {
            return Err(Error::invalid(format!("constants do not match the {signature} roster")));
        }
        if !in_range(&constants.values().copied().collect::<Vec<_>>()) {
            return Err(Error::invalid("constant out of range"));
        }
        match (&composition, signature.has_composition()) {
            (Some(c), true) => {
                if c.len() != size * size || !in_range(c) {
                    return Err(Error::invalid("composition table is not total"));
                }
            }
            (None, false) => {}
            (Some(_), false) => return Err(Error::invalid("composition supplied for a non-RA signature")),
            (None, true) => return Err(Error::invalid("RA signature needs a composition table")),
        }
        Ok(FiniteBao {
            signature,
            boolean,
            unary,
            constants,
            composition,
        })
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn boolean(&self) -> &BooleanPart {
        &self.boolean
    }

    pub fn size(&self) -> usize {
        self.boolean.size()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.size() as Elem
    }

    #[inline]
    pub fn join(&self, x: Elem, y: Elem) -> Elem {
        match &self.boolean {
            BooleanPart::Powerset { .. } => x | y,
            BooleanPart::Tables(t) => t.join[x as usize * t.size + y as usize],
        }
    }

    #[inline]
    pub fn meet(&self, x: Elem, y: Elem) -> Elem {
        match &self.boolean {
            BooleanPart::Powerset { .. } => x & y,
            BooleanPart::Tables(t) => t.meet[x as usize * t.size + y as usize],
        }
    }

    #[inline]
    pub fn complement(&self, x: Elem) -> Elem {
        match &self.boolean {
            BooleanPart::Powerset { atoms } => !x & (((1u64 << atoms) - 1) as Elem),
            BooleanPart::Tables(t) => t.complement[x as usize],
        }
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        match &self.boolean {
            BooleanPart::Powerset { .. } => 0,
            BooleanPart::Tables(t) => t.zero,
        }
    }

    #[inline]
    pub fn one(&self) -> Elem {
        match &self.boolean {
            BooleanPart::Powerset { atoms } => ((1u64 << atoms) - 1) as Elem,
            BooleanPart::Tables(t) => t.one,
        }
    }

    #[inline]
    pub fn leq(&self, x: Elem, y: Elem) -> bool {
        self.meet(x, y) == x
    }

    pub fn stored_ops(&self) -> impl Iterator<Item = (&UnaryOp, &Vec<Elem>)> {
        self.unary.iter()
    }

    pub fn constant(&self, c: ConstOp) -> Option<Elem> {
        if let Some(&v) = self.constants.get(&c) {
            return Some(v);
        }
        match c {
            ConstOp::Diag(i, j) if self.signature.kind.has_diagonals() && i == j && (i as usize) < self.signature.dim() => {
                Some(self.one())
            }
            _ => None,
        }
    }

    pub fn constants(&self) -> &BTreeMap<ConstOp, Elem> {
        &self.constants
    }

    pub fn composition_table(&self) -> Option<&[Elem]> {
        self.composition.as_deref()
    }

    #[inline]
    pub fn compose(&self, x: Elem, y: Elem) -> Elem {
        let c = self.composition.as_ref().expect("composition on a non-RA algebra");
        c[x as usize * self.size() + y as usize]
    }

    /// Table of `op`, stored or derived from stored operations.
    pub fn table(&self, op: UnaryOp) -> Option<Cow<'_, [Elem]>> {
        if let Some(t) = self.unary.get(&op) {
            return Some(Cow::Borrowed(t.as_slice()));
        }
        if !self.signature.provides(op) {
            return None;
        }
        let n = self.signature.dim();
        let derived: Vec<Elem> = match op {
            UnaryOp::CylSet(g) => {
                let mut cur: Vec<Elem> = self.elements().collect();
                for i in 0..n as u8 {
                    if g >> i & 1 == 1 {
                        let c = self.unary.get(&UnaryOp::Cyl(i))?;
                        cur = cur.into_iter().map(|x| c[x as usize]).collect();
                    }
                }
                cur
            }
            UnaryOp::Replace(i, j) | UnaryOp::Swap(i, j) if self.signature.kind.is_polyadic() => {
                let tau = if matches!(op, UnaryOp::Replace(..)) {
                    replacement(n, i, j)
                } else {
                    transposition(n, i, j)
                };
                return self.table(UnaryOp::Subst(encode_transformation(&tau)));
            }
            UnaryOp::Replace(i, j) if self.signature.kind == Kind::Ca => {
                if i == j {
                    self.elements().collect()
                } else {
                    let c = self.unary.get(&UnaryOp::Cyl(i))?;
                    let d = self.constant(ConstOp::Diag(i, j))?;
                    self.elements().map(|x| c[self.meet(x, d) as usize]).collect()
                }
            }
            _ => return None,
        };
        Some(Cow::Owned(derived))
    }

    pub fn apply(&self, op: UnaryOp, x: Elem) -> Option<Elem> {
        match self.unary.get(&op) {
            Some(t) => Some(t[x as usize]),
            None => self.table(op).map(|t| t[x as usize]),
        }
    }

    /// Copy of the algebra with one stored table replaced.
    pub fn with_unary(&self, op: UnaryOp, table: Vec<Elem>) -> Result<Self> {
        let mut unary = self.unary.clone();
        unary.insert(op, table);
        FiniteBao::new(self.signature, self.boolean.clone(), unary, self.constants.clone(), self.composition.clone())
    }

    pub fn with_composition(&self, table: Vec<Elem>) -> Result<Self> {
        FiniteBao::new(self.signature, self.boolean.clone(), self.unary.clone(), self.constants.clone(), Some(table))
    }

    pub fn atoms_of(&self) -> AtomInfo {
        let zero = self.zero();
        let nonzero: Vec<Elem> = self.elements().filter(|&x| x != zero).collect();
        let atoms: Vec<Elem> = match &self.boolean {
            BooleanPart::Powerset { atoms } => (0..*atoms).map(|i| 1 << i).collect(),
            BooleanPart::Tables(_) => nonzero
                .iter()
                .copied()
                .filter(|&x| !nonzero.iter().any(|&y| y != x && self.leq(y, x)))
                .collect(),
        };
        let is_atomic = nonzero.iter().all(|&x| atoms.iter().any(|&a| self.leq(a, x)));
        AtomInfo { atoms, is_atomic }
    }

    /// Least subuniverse containing `generators`, 0, 1 and all constants.
    pub fn generate_subalgebra(&self, generators: &[Elem]) -> Result<Subalgebra> {
        let size = self.size();
        if let Some(&g) = generators.iter().find(|&&g| g as usize >= size) {
            return Err(Error::invalid(format!("generator {g} outside the universe")));
        }
        let mut member = vec![false; size];
        let mut order: Vec<Elem> = Vec::new();
        let mut queue = VecDeque::new();
        let seeds = generators
            .iter()
            .copied()
            .chain([self.zero(), self.one()])
            .chain(self.constants.values().copied());
        for s in seeds {
            if !member[s as usize] {
                member[s as usize] = true;
                queue.push_back(s);
            }
        }
        let tables: Vec<&Vec<Elem>> = self.unary.values().collect();
        while let Some(x) = queue.pop_front() {
            order.push(x);
            let mut fresh = Vec::new();
            fresh.push(self.complement(x));
            fresh.extend(tables.iter().map(|t| t[x as usize]));
            for &y in &order {
                fresh.push(self.join(x, y));
                fresh.push(self.meet(x, y));
                if self.composition.is_some() {
                    fresh.push(self.compose(x, y));
                    fresh.push(self.compose(y, x));
                }
            }
            for f in fresh {
                if !member[f as usize] {
                    member[f as usize] = true;
                    queue.push_back(f);
                }
            }
        }
        let elements: Vec<Elem> = (0..size as Elem).filter(|&e| member[e as usize]).collect();
        let algebra = self.induced(self.signature, &elements, Some, Some)?;
        Ok(Subalgebra { elements, algebra })
    }

    /// Algebra induced on a closed subset, with operators taken from the
    /// source through the given maps.
    pub(crate) fn induced(
        &self,
        signature: Signature,
        elements: &[Elem],
        unary_source: impl Fn(UnaryOp) -> Option<UnaryOp>,
        const_source: impl Fn(ConstOp) -> Option<ConstOp>,
    ) -> Result<FiniteBao> {
        let mut index = vec![u32::MAX; self.size()];
        for (k, &e) in elements.iter().enumerate() {
            index[e as usize] = k as u32;
        }
        let back = |e: Elem| -> Result<Elem> {
            let k = index[e as usize];
            if k == u32::MAX {
                Err(Error::invalid(format!("subset is not closed: element {e} escapes")))
            } else {
                Ok(k)
            }
        };
        let k = elements.len();
        let mut join = Vec::with_capacity(k * k);
        let mut meet = Vec::with_capacity(k * k);
        for &x in elements {
            for &y in elements {
                join.push(back(self.join(x, y))?);
                meet.push(back(self.meet(x, y))?);
            }
        }
        let complement = elements.iter().map(|&x| back(self.complement(x))).collect::<Result<Vec<_>>>()?;
        let boolean = BooleanPart::Tables(BooleanTables {
            size: k,
            join,
            meet,
            complement,
            zero: back(self.zero())?,
            one: back(self.one())?,
        });
        let mut unary = BTreeMap::new();
        for op in signature.unary_roster() {
            let src = unary_source(op).ok_or_else(|| Error::invalid(format!("no source for {}", op.name(signature.dim()))))?;
            let t = self
                .table(src)
                .ok_or_else(|| Error::invalid(format!("source lacks {}", src.name(self.signature.dim()))))?;
            unary.insert(op, elements.iter().map(|&x| back(t[x as usize])).collect::<Result<Vec<_>>>()?);
        }
        let mut constants = BTreeMap::new();
        for c in signature.constant_roster() {
            let src = const_source(c).and_then(|s| self.constant(s)).ok_or_else(|| Error::invalid("missing constant"))?;
            constants.insert(c, back(src)?);
        }
        let composition = if signature.has_composition() {
            let mut t = Vec::with_capacity(k * k);
            for &x in elements {
                for &y in elements {
                    t.push(back(self.compose(x, y))?);
                }
            }
            Some(t)
        } else {
            None
        };
        FiniteBao::new(signature, boolean, unary, constants, composition)
    }

    /// Finite additivity of every stored operator: `f(0) = 0` and
    /// `f(x + y) = f(x) + f(y)`; composition is checked in each argument.
    pub fn check_additivity(&self) -> Vec<AdditivityVerdict> {
        let n = self.signature.dim();
        let zero = self.zero();
        let mut out = Vec::new();
        for (op, t) in &self.unary {
            let mut witness = None;
            if t[zero as usize] != zero {
                witness = Some(format!("f(0) = {}", t[zero as usize]));
            } else {
                'outer: for x in self.elements() {
                    for y in self.elements() {
                        if t[self.join(x, y) as usize] != self.join(t[x as usize], t[y as usize]) {
                            witness = Some(format!("x = {x}, y = {y}"));
                            break 'outer;
                        }
                    }
                }
            }
            out.push(AdditivityVerdict {
                operator: op.name(n),
                additive: witness.is_none(),
                witness,
            });
        }
        if self.composition.is_some() {
            let mut witness = None;
            'comp: for z in self.elements() {
                if self.compose(zero, z) != zero || self.compose(z, zero) != zero {
                    witness = Some(format!("0 ; {z} or {z} ; 0 is nonzero"));
                    break;
                }
                for x in self.elements() {
                    for y in self.elements() {
                        let xy = self.join(x, y);
                        if self.compose(xy, z) != self.join(self.compose(x, z), self.compose(y, z))
                            || self.compose(z, xy) != self.join(self.compose(z, x), self.compose(z, y))
                        {
                            witness = Some(format!("x = {x}, y = {y}, z = {z}"));
                            break 'comp;
                        }
                    }
                }
            }
            out.push(AdditivityVerdict {
                operator: "comp".into(),
                additive: witness.is_none(),
                witness,
            });
        }
        out
    }

    pub fn to_json(&self) -> BaoJson {
        let n = self.signature.dim();
        let size = self.size();
        let mut tables = BTreeMap::new();
        let rows = |t: &[Elem]| Value::from(t.chunks(size).map(|r| Value::from(r.to_vec())).collect::<Vec<_>>());
        let boolean = match &self.boolean {
            BooleanPart::Powerset { .. } => Some("powerset".to_string()),
            BooleanPart::Tables(b) => {
                tables.insert("join".to_string(), rows(&b.join));
                tables.insert("meet".to_string(), rows(&b.meet));
                tables.insert("complement".to_string(), Value::from(b.complement.clone()));
                tables.insert("zero".to_string(), Value::from(b.zero));
                tables.insert("one".to_string(), Value::from(b.one));
                None
            }
        };
        for (op, t) in &self.unary {
            tables.insert(op.name(n), Value::from(t.clone()));
        }
        for (c, v) in &self.constants {
            tables.insert(c.name(), Value::from(*v));
        }
        if let Some(c) = &self.composition {
            tables.insert("comp".to_string(), rows(c));
        }
        BaoJson {
            signature: self.signature,
            universe: size,
            boolean,
            tables,
        }
    }

    pub fn from_json(j: &BaoJson) -> Result<Self> {
        j.signature.validate()?;
        let n = j.signature.dim();
        let size = j.universe;
        let get = |name: &str| j.tables.get(name).ok_or_else(|| Error::invalid(format!("missing table {name:?}")));
        let ids = |v: &Value| -> Result<Vec<Elem>> {
            serde_json::from_value::<Vec<Elem>>(v.clone()).map_err(Error::from)
        };
        let matrix = |v: &Value| -> Result<Vec<Elem>> {
            let rows: Vec<Vec<Elem>> = serde_json::from_value(v.clone())?;
            if rows.len() != size || rows.iter().any(|r| r.len() != size) {
                return Err(Error::invalid("binary table has wrong shape"));
            }
            Ok(rows.concat())
        };
        let one_id = |v: &Value| -> Result<Elem> { serde_json::from_value::<Elem>(v.clone()).map_err(Error::from) };
        let boolean = match j.boolean.as_deref() {
            Some("powerset") => {
                if !size.is_power_of_two() {
                    return Err(Error::invalid("powerset universe must be a power of two"));
                }
                BooleanPart::Powerset { atoms: size.trailing_zeros() }
            }
            Some(other) => return Err(Error::invalid(format!("unknown boolean mode {other:?}"))),
            None => BooleanPart::Tables(BooleanTables {
                size,
                join: matrix(get("join")?)?,
                meet: matrix(get("meet")?)?,
                complement: ids(get("complement")?)?,
                zero: one_id(get("zero")?)?,
                one: one_id(get("one")?)?,
            }),
        };
        let mut unary = BTreeMap::new();
        for op in j.signature.unary_roster() {
            unary.insert(op, ids(get(&op.name(n))?)?);
        }
        let mut constants = BTreeMap::new();
        for c in j.signature.constant_roster() {
            constants.insert(c, one_id(get(&c.name())?)?);
        }
        let composition = if j.signature.has_composition() {
            Some(matrix(get("comp")?)?)
        } else {
            None
        };
        let known = |k: &str| {
            ["join", "meet", "complement", "zero", "one", "comp"].contains(&k)
                || UnaryOp::parse(k, n).is_ok()
                || ConstOp::parse(k).is_ok()
        };
        if let Some(k) = j.tables.keys().find(|k| !known(k)) {
            return Err(Error::invalid(format!("unknown table {k:?}")));
        }
        FiniteBao::new(j.signature, boolean, unary, constants, composition)
    }
}

/// Serialized form of a [`FiniteBao`]; see `docs/format.md`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BaoJson {
    pub signature: Signature,
    pub universe: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boolean: Option<String>,
    pub tables: BTreeMap<String, Value>,
}

/// The two-element algebra of the given signature with every operator
/// the identity (diagonals and the identity constant are 1).
pub fn two_element(signature: Signature) -> Result<FiniteBao> {
    let unary = signature.unary_roster().into_iter().map(|op| (op, vec![0, 1])).collect();
    let constants = signature.constant_roster().into_iter().map(|c| (c, 1)).collect();
    let composition = signature.has_composition().then(|| vec![0, 0, 0, 1]);
    FiniteBao::new(signature, BooleanPart::Powerset { atoms: 1 }, unary, constants, composition)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_element_algebra_has_one_atom() {
        let a = two_element(Signature::ra()).unwrap();
        let info = a.atoms_of();
        assert_eq!(info.atoms, vec![1]);
        assert!(info.is_atomic);
    }

    #[test]
    fn roster_mismatch_is_rejected() {
        let sig = Signature::new(Kind::Df, 2).unwrap();
        let mut unary = BTreeMap::new();
        unary.insert(UnaryOp::Cyl(0), vec![0, 1]);
        let err = FiniteBao::new(sig, BooleanPart::Powerset { atoms: 1 }, unary, BTreeMap::new(), None).unwrap_err();
        assert!(err.to_string().contains("roster"));
    }

    #[test]
    fn non_total_table_is_rejected() {
        let sig = Signature::new(Kind::Df, 1).unwrap();
        let unary = BTreeMap::from([(UnaryOp::Cyl(0), vec![0])]);
        assert!(FiniteBao::new(sig, BooleanPart::Powerset { atoms: 1 }, unary, BTreeMap::new(), None).is_err());
    }

    #[test]
    fn operator_with_f0_equal_1_is_not_additive() {
        let sig = Signature::new(Kind::Df, 1).unwrap();
        let a = two_element(sig).unwrap().with_unary(UnaryOp::Cyl(0), vec![1, 1]).unwrap();
        let v = a.check_additivity();
        assert_eq!(v.len(), 1);
        assert!(!v[0].additive);
    }

    #[test]
    fn generating_from_everything_gives_everything() {
        let a = two_element(Signature::new(Kind::Qea, 2).unwrap()).unwrap();
        let all: Vec<Elem> = a.elements().collect();
        let sub = a.generate_subalgebra(&all).unwrap();
        assert_eq!(sub.elements, all);
        assert!(a.generate_subalgebra(&[7]).is_err());
    }

    #[test]
    fn json_round_trip_preserves_tables() {
        let a = two_element(Signature::ra()).unwrap();
        let sub = a.generate_subalgebra(&[]).unwrap().algebra;
        for alg in [a, sub] {
            let text = serde_json::to_string(&alg.to_json()).unwrap();
            let back = FiniteBao::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
            assert_eq!(back, alg);
        }
    }
}
