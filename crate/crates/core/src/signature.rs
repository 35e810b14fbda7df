//! Signatures of the algebras handled by the workbench.
//!
//! Every kind between diagonal-free cylindric algebras and polyadic equality
//! algebras is described by its roster of non-Boolean operators. Relation
//! algebras carry converse, composition and the identity constant instead.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest dimension accepted anywhere in the crate.
pub const MAX_DIMENSION: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Kind {
    Ra,
    Df,
    Sc,
    Ca,
    Qa,
    Qea,
    Pea,
}

impl Kind {
    pub const ALL: [Kind; 7] = [Kind::Ra, Kind::Df, Kind::Sc, Kind::Ca, Kind::Qa, Kind::Qea, Kind::Pea];

    pub fn has_diagonals(self) -> bool {
        matches!(self, Kind::Ca | Kind::Qea | Kind::Pea)
    }

    pub fn has_replacements(self) -> bool {
        matches!(self, Kind::Sc | Kind::Qa | Kind::Qea)
    }

    pub fn has_transpositions(self) -> bool {
        matches!(self, Kind::Qa | Kind::Qea)
    }

    pub fn is_polyadic(self) -> bool {
        self == Kind::Pea
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::Ra => "RA",
            Kind::Df => "DF",
            Kind::Sc => "SC",
            Kind::Ca => "CA",
            Kind::Qa => "QA",
            Kind::Qea => "QEA",
            Kind::Pea => "PEA",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Kind::ALL
            .iter()
            .copied()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::invalid(format!("unknown signature kind {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

impl Signature {
    pub fn ra() -> Self {
        Signature { kind: Kind::Ra, n: None }
    }

    pub fn new(kind: Kind, n: usize) -> Result<Self> {
        if kind == Kind::Ra {
            return Ok(Signature::ra());
        }
        if n == 0 || n > MAX_DIMENSION {
            return Err(Error::invalid(format!("dimension {n} outside 1..={MAX_DIMENSION}")));
        }
        Ok(Signature { kind, n: Some(n) })
    }

    pub fn validate(&self) -> Result<()> {
        match (self.kind, self.n) {
            (Kind::Ra, None) => Ok(()),
            (Kind::Ra, Some(_)) => Err(Error::invalid("RA signatures carry no dimension")),
            (_, None) => Err(Error::invalid(format!("{} signature needs a dimension", self.kind))),
            (k, Some(n)) => Signature::new(k, n).map(|_| ()),
        }
    }

    /// Dimension, 0 for relation algebras.
    pub fn dim(&self) -> usize {
        self.n.unwrap_or(0)
    }

    /// Stored unary operators, in canonical order.
    pub fn unary_roster(&self) -> Vec<UnaryOp> {
        let n = self.dim() as u8;
        let mut ops = Vec::new();
        if self.kind == Kind::Ra {
            ops.push(UnaryOp::Converse);
            return ops;
        }
        ops.extend((0..n).map(UnaryOp::Cyl));
        if self.kind.has_replacements() {
            for i in 0..n {
                for j in 0..n {
                    ops.push(UnaryOp::Replace(i, j));
                }
            }
        }
        if self.kind.has_transpositions() {
            for i in 0..n {
                for j in 0..n {
                    ops.push(UnaryOp::Swap(i, j));
                }
            }
        }
        if self.kind.is_polyadic() {
            ops.extend(all_transformations(n as usize).map(UnaryOp::Subst));
        }
        ops
    }

    pub fn constant_roster(&self) -> Vec<ConstOp> {
        let n = self.dim() as u8;
        match self.kind {
            Kind::Ra => vec![ConstOp::Identity],
            k if k.has_diagonals() => {
                let mut v = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        v.push(ConstOp::Diag(i, j));
                    }
                }
                v
            }
            _ => Vec::new(),
        }
    }

    pub fn has_composition(&self) -> bool {
        self.kind == Kind::Ra
    }

    /// Whether `op` is available, either stored or term-derived.
    ///
    /// Replacements are derived in CA through `c_i(x . d_ij)`; replacements
    /// and transpositions are special substitutions in PEA; generalized
    /// cylindrifiers `c_(G)` are compositions of the `c_i`.
    pub fn provides(&self, op: UnaryOp) -> bool {
        let n = self.dim() as u8;
        let idx_ok = |i: u8| i < n;
        match op {
            UnaryOp::Converse => self.kind == Kind::Ra,
            UnaryOp::Cyl(i) => self.kind != Kind::Ra && idx_ok(i),
            UnaryOp::CylSet(g) => self.kind != Kind::Ra && (g as u32) < (1u32 << n),
            UnaryOp::Replace(i, j) => {
                idx_ok(i)
                    && idx_ok(j)
                    && (self.kind.has_replacements() || self.kind == Kind::Ca || self.kind.is_polyadic())
            }
            UnaryOp::Swap(i, j) => idx_ok(i) && idx_ok(j) && (self.kind.has_transpositions() || self.kind.is_polyadic()),
            UnaryOp::Subst(t) => self.kind.is_polyadic() && (t as usize) < (self.dim().pow(self.dim() as u32)),
        }
    }

    pub fn provides_const(&self, c: ConstOp) -> bool {
        match c {
            ConstOp::Identity => self.kind == Kind::Ra,
            ConstOp::Diag(i, j) => self.kind.has_diagonals() && (i as usize) < self.dim() && (j as usize) < self.dim(),
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.n {
            Some(n) => write!(f, "{}_{}", self.kind, n),
            None => write!(f, "{}", self.kind),
        }
    }
}

/// Unary non-Boolean operators.
///
/// `Subst` holds a transformation `n -> n` encoded with [`encode_transformation`];
/// `CylSet` holds a bitmask of the cylindrified coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnaryOp {
    Cyl(u8),
    Replace(u8, u8),
    Swap(u8, u8),
    Subst(u32),
    CylSet(u16),
    Converse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstOp {
    Diag(u8, u8),
    Identity,
}

/// Transformation `tau: n -> n` as the base-`n` number `tau(0) tau(1) ... tau(n-1)`.
pub fn encode_transformation(tau: &[u8]) -> u32 {
    let n = tau.len() as u32;
    tau.iter().fold(0u32, |acc, &v| acc * n + v as u32)
}

pub fn decode_transformation(code: u32, n: usize) -> Vec<u8> {
    let mut out = vec![0u8; n];
    let mut c = code;
    for slot in out.iter_mut().rev() {
        *slot = (c % n as u32) as u8;
        c /= n as u32;
    }
    out
}

pub fn all_transformations(n: usize) -> impl Iterator<Item = u32> {
    0..(n as u32).pow(n as u32)
}

/// The replacement `[i|j]`: sends `i` to `j`, fixes everything else.
pub fn replacement(n: usize, i: u8, j: u8) -> Vec<u8> {
    (0..n as u8).map(|k| if k == i { j } else { k }).collect()
}

/// The transposition `[i,j]`.
pub fn transposition(n: usize, i: u8, j: u8) -> Vec<u8> {
    (0..n as u8)
        .map(|k| if k == i { j } else if k == j { i } else { k })
        .collect()
}

pub fn identity_map(n: usize) -> Vec<u8> {
    (0..n as u8).collect()
}

/// `(sigma . tau)(k) = sigma(tau(k))`.
pub fn compose_maps(sigma: &[u8], tau: &[u8]) -> Vec<u8> {
    tau.iter().map(|&t| sigma[t as usize]).collect()
}

pub fn is_permutation(tau: &[u8]) -> bool {
    let mut seen = vec![false; tau.len()];
    tau.iter().all(|&t| !std::mem::replace(&mut seen[t as usize], true))
}

impl UnaryOp {
    /// Concrete transformation for substitution-like operators.
    pub fn transformation(&self, n: usize) -> Option<Vec<u8>> {
        match *self {
            UnaryOp::Replace(i, j) => Some(replacement(n, i, j)),
            UnaryOp::Swap(i, j) => Some(transposition(n, i, j)),
            UnaryOp::Subst(t) => Some(decode_transformation(t, n)),
            _ => None,
        }
    }

    /// Whether the operator acts on atoms as a bijection in set algebras.
    pub fn is_bijective_substitution(&self, n: usize) -> bool {
        self.transformation(n).map(|t| is_permutation(&t)).unwrap_or(false)
    }

    pub fn name(&self, n: usize) -> String {
        match *self {
            UnaryOp::Cyl(i) => format!("c{i}"),
            UnaryOp::Replace(i, j) => format!("s[{i}|{j}]"),
            UnaryOp::Swap(i, j) => format!("s[{i},{j}]"),
            UnaryOp::Subst(t) => {
                let tau = decode_transformation(t, n);
                let parts: Vec<String> = tau.iter().map(|v| v.to_string()).collect();
                format!("s({})", parts.join(","))
            }
            UnaryOp::CylSet(g) => {
                let parts: Vec<String> = (0..16).filter(|i| g >> i & 1 == 1).map(|i: u16| i.to_string()).collect();
                format!("c({})", parts.join(","))
            }
            UnaryOp::Converse => "conv".to_string(),
        }
    }

    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let bad = || Error::invalid(format!("cannot parse operator name {s:?}"));
        let num = |t: &str| t.trim().parse::<u8>().map_err(|_| bad());
        if s == "conv" {
            return Ok(UnaryOp::Converse);
        }
        if let Some(rest) = s.strip_prefix("s[").and_then(|r| r.strip_suffix(']')) {
            if let Some((a, b)) = rest.split_once('|') {
                return Ok(UnaryOp::Replace(num(a)?, num(b)?));
            }
            if let Some((a, b)) = rest.split_once(',') {
                return Ok(UnaryOp::Swap(num(a)?, num(b)?));
            }
            return Err(bad());
        }
        if let Some(rest) = s.strip_prefix("s(").and_then(|r| r.strip_suffix(')')) {
            let tau: Vec<u8> = rest.split(',').map(num).collect::<Result<_>>()?;
            if tau.len() != n || tau.iter().any(|&v| v as usize >= n) {
                return Err(bad());
            }
            return Ok(UnaryOp::Subst(encode_transformation(&tau)));
        }
        if let Some(rest) = s.strip_prefix("c(").and_then(|r| r.strip_suffix(')')) {
            let mut g = 0u16;
            for p in rest.split(',').filter(|p| !p.is_empty()) {
                g |= 1 << num(p)?;
            }
            return Ok(UnaryOp::CylSet(g));
        }
        if let Some(rest) = s.strip_prefix('c') {
            return Ok(UnaryOp::Cyl(num(rest)?));
        }
        Err(bad())
    }
}

impl ConstOp {
    pub fn name(&self) -> String {
        match *self {
            ConstOp::Diag(i, j) => format!("d{i}{j}"),
            ConstOp::Identity => "id".to_string(),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        if s == "id" {
            return Ok(ConstOp::Identity);
        }
        let digits = s.strip_prefix('d').filter(|d| d.len() == 2 && d.bytes().all(|b| b.is_ascii_digit()));
        match digits {
            Some(d) => {
                let b = d.as_bytes();
                Ok(ConstOp::Diag(b[0] - b'0', b[1] - b'0'))
            }
            None => Err(Error::invalid(format!("cannot parse constant name {s:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roster_sizes_match_the_operator_table() {
        let n = 3;
        let r = |k| Signature::new(k, n).unwrap();
        assert_eq!(r(Kind::Df).unary_roster().len(), 3);
        assert_eq!(r(Kind::Sc).unary_roster().len(), 3 + 9);
        assert_eq!(r(Kind::Ca).unary_roster().len(), 3);
        assert_eq!(r(Kind::Ca).constant_roster().len(), 9);
        assert_eq!(r(Kind::Qa).unary_roster().len(), 3 + 9 + 9);
        assert_eq!(r(Kind::Qea).constant_roster().len(), 9);
        // all n^n substitutions at finite n
        assert_eq!(r(Kind::Pea).unary_roster().len(), 3 + 27);
        assert!(Signature::ra().unary_roster() == vec![UnaryOp::Converse]);
    }

    #[test]
    fn smaller_kinds_embed_in_larger_ones() {
        let chains = [
            [Kind::Df, Kind::Sc, Kind::Qa, Kind::Qea],
            [Kind::Df, Kind::Sc, Kind::Ca, Kind::Qea],
        ];
        for n in 1..=4 {
            for chain in chains {
                for (a, small) in chain.iter().enumerate() {
                    for big in &chain[a..] {
                        let s = Signature::new(*small, n).unwrap();
                        let b = Signature::new(*big, n).unwrap();
                        for op in s.unary_roster() {
                            assert!(b.provides(op), "{op:?} of {small} missing in {big}");
                        }
                        for c in s.constant_roster() {
                            assert!(b.provides_const(c));
                        }
                    }
                }
            }
            let qea = Signature::new(Kind::Qea, n).unwrap();
            let pea = Signature::new(Kind::Pea, n).unwrap();
            assert!(qea.unary_roster().into_iter().all(|op| pea.provides(op)));
        }
    }

    #[test]
    fn transformation_codes_round_trip() {
        for n in 1..=4 {
            for code in all_transformations(n) {
                assert_eq!(encode_transformation(&decode_transformation(code, n)), code);
            }
        }
        assert_eq!(compose_maps(&transposition(3, 0, 1), &replacement(3, 1, 0)), replacement(3, 0, 1));
    }

    #[test]
    fn operator_names_parse_back() {
        let n = 3;
        let sig = Signature::new(Kind::Pea, n).unwrap();
        for op in sig.unary_roster().into_iter().chain([UnaryOp::Replace(0, 2), UnaryOp::Swap(1, 2), UnaryOp::CylSet(5)]) {
            assert_eq!(UnaryOp::parse(&op.name(n), n).unwrap(), op);
        }
        for c in sig.constant_roster() {
            assert_eq!(ConstOp::parse(&c.name()).unwrap(), c);
        }
        assert!(UnaryOp::parse("q1", n).is_err());
        assert_eq!("qea".parse::<Kind>().unwrap(), Kind::Qea);
    }
}
