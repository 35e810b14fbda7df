//! Atom-to-tuple-set assignments and their verification as complete
//! representations.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::setalg::{SetAlgebra, TupleSet};
use crate::bao::{Elem, FiniteBao, Subalgebra};
use crate::error::{Error, Result};
use crate::signature::Kind;

/// Algebras up to this size are checked on every element; larger ones on
/// atoms only, which suffices for additive operators.
pub const FULL_CHECK_LIMIT: usize = 4096;

/// `{"base": B, "atoms": {"g0": [[x, y], ...], ...}}`; points are `0..B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentationCandidate {
    pub base: usize,
    pub atoms: BTreeMap<String, Vec<Vec<u8>>>,
}

impl RepresentationCandidate {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("candidate serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
    /// Whether every operator was checked on every element (otherwise on
    /// atoms, relying on `additive`).
    pub exhaustive: bool,
    pub additive: bool,
}

impl Verdict {
    fn fail(msg: String, exhaustive: bool, additive: bool) -> Self {
        Verdict {
            complete: false,
            diagnostic: Some(msg),
            exhaustive,
            additive,
        }
    }
}

/// Whether `cand` is a complete representation of `a`; `names[k]` names the
/// `k`-th atom in [`FiniteBao::atoms_of`] order.
///
/// The assignment is extended to all elements by unions; atom images must
/// partition the unit, the extension must be injective and preserve every
/// Boolean and non-Boolean operation and constant.
pub fn verify_complete_representation(a: &FiniteBao, names: &[String], cand: &RepresentationCandidate) -> Result<Verdict> {
    let sig = a.signature();
    let info = a.atoms_of();
    if names.len() != info.atoms.len() {
        return Err(Error::invalid(format!("{} names for {} atoms", names.len(), info.atoms.len())));
    }
    let arity = if sig.kind == Kind::Ra { 2 } else { sig.dim() };
    let set = SetAlgebra::full(sig.kind, arity, cand.base)?;
    let size = a.size();
    let exhaustive = size <= FULL_CHECK_LIMIT;
    let additive = a.check_additivity().iter().all(|v| v.additive);
    let fail = |msg: String| Ok(Verdict::fail(msg, exhaustive, additive));

    if let Some(extra) = cand.atoms.keys().find(|k| !names.contains(k)) {
        return fail(format!("{extra} is not an atom"));
    }
    let mut images: Vec<TupleSet> = Vec::with_capacity(names.len());
    for name in names {
        let Some(tuples) = cand.atoms.get(name) else {
            return fail(format!("atom {name} is unassigned"));
        };
        if let Some(t) = tuples.iter().find(|t| set.index_of(t).is_none()) {
            return fail(format!("tuple {t:?} of {name} is outside the unit"));
        }
        images.push(set.from_tuples(tuples.iter().map(|t| t.as_slice()))?);
    }

    // atomic cover: images pairwise disjoint, nonempty, union the unit
    let mut union = set.zero();
    for (k, img) in images.iter().enumerate() {
        if img.is_clear() {
            return fail(format!("not injective: atom {} is sent to the empty set", names[k]));
        }
        if !union.is_disjoint(img) {
            let other = (0..k).find(|&j| !images[j].is_disjoint(img)).expect("overlap");
            return fail(format!("not a partition: {} and {} overlap", names[other], names[k]));
        }
        union.union_with(img);
    }
    if union != set.one() {
        let t = set.members(&set.complement(&union)).next().expect("missing tuple").to_vec();
        return fail(format!("not a partition: tuple {t:?} is covered by no atom"));
    }

    let ext = |x: Elem| -> TupleSet {
        let mut s = set.zero();
        for (k, &at) in info.atoms.iter().enumerate() {
            if a.leq(at, x) {
                s.union_with(&images[k]);
            }
        }
        s
    };
    let checked: Vec<Elem> = if exhaustive { a.elements().collect() } else { info.atoms.clone() };
    let f: HashMap<Elem, TupleSet> = checked.iter().map(|&x| (x, ext(x))).collect();
    let image_of = |x: Elem| f.get(&x).cloned().unwrap_or_else(|| ext(x));

    if exhaustive {
        let mut seen: HashMap<&TupleSet, Elem> = HashMap::new();
        for x in &checked {
            if let Some(y) = seen.insert(&f[x], *x) {
                return fail(format!("not injective: elements {y} and {x} have the same image"));
            }
        }
        for &x in &checked {
            if image_of(a.complement(x)) != set.complement(&f[&x]) {
                return fail(format!("complement fails at element {x}"));
            }
        }
    }
    for op in sig.unary_roster() {
        for &x in &checked {
            let want = set.apply(op, &f[&x])?;
            let got = image_of(a.apply(op, x).expect("stored operator"));
            if got != want {
                return fail(format!("{} fails at element {x}", op.name(sig.dim())));
            }
        }
    }
    for c in sig.constant_roster() {
        let x = a.constant(c).expect("constant present");
        if image_of(x) != set.constant(c) {
            return fail(format!("constant {} is not preserved", c.name()));
        }
    }
    if sig.has_composition() {
        // composition is additive in each argument; pairs of atoms suffice
        let pairs: &[Elem] = if size <= 64 { &checked } else { &info.atoms };
        if size > 64 && !additive {
            return fail("composition checked on atoms only, but some operator is not additive".into());
        }
        for &x in pairs {
            for &y in pairs {
                if image_of(a.compose(x, y)) != set.compose(&image_of(x), &image_of(y)) {
                    return fail(format!("composition fails at elements ({x}, {y})"));
                }
            }
        }
    }
    if !exhaustive && !additive {
        return fail("operators checked on atoms only, but some operator is not additive".into());
    }
    Ok(Verdict {
        complete: true,
        diagnostic: None,
        exhaustive,
        additive,
    })
}

/// The candidate restricted to a subalgebra: each atom of `sub` is sent to
/// the union of the images of the parent atoms below it. Returns the new
/// atom names (parent names joined by `+`) with the candidate.
pub fn restrict_candidate(
    cand: &RepresentationCandidate,
    parent: &FiniteBao,
    parent_names: &[String],
    sub: &Subalgebra,
) -> Result<(Vec<String>, RepresentationCandidate)> {
    let patoms = parent.atoms_of().atoms;
    if parent_names.len() != patoms.len() {
        return Err(Error::invalid("parent names do not match its atoms"));
    }
    let mut names = Vec::new();
    let mut atoms = BTreeMap::new();
    for s in sub.algebra.atoms_of().atoms {
        let x = sub.elements[s as usize];
        let below: Vec<usize> = (0..patoms.len()).filter(|&k| parent.leq(patoms[k], x)).collect();
        let name = below.iter().map(|&k| parent_names[k].as_str()).collect::<Vec<_>>().join("+");
        let mut tuples: Vec<Vec<u8>> = below
            .iter()
            .flat_map(|&k| cand.atoms.get(&parent_names[k]).cloned().unwrap_or_default())
            .collect();
        tuples.sort();
        names.push(name.clone());
        atoms.insert(name, tuples);
    }
    Ok((names, RepresentationCandidate { base: cand.base, atoms }))
}

/// Candidate sending each atom `{t}` of a full set algebra to `{t}`; names
/// are `t` written as digits.
pub fn identity_candidate(set: &SetAlgebra) -> (Vec<String>, RepresentationCandidate) {
    let base = set.blocks().iter().map(|b| b.len()).sum();
    let mut names = Vec::new();
    let mut atoms = BTreeMap::new();
    for t in set.tuples() {
        let name: String = t.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("");
        names.push(name.clone());
        atoms.insert(name, vec![t.clone()]);
    }
    (names, RepresentationCandidate { base, atoms })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_candidate_verifies() {
        let set = SetAlgebra::full(Kind::Qea, 2, 2).unwrap();
        let a = set.to_bao().unwrap();
        let (names, cand) = identity_candidate(&set);
        let v = verify_complete_representation(&a, &names, &cand).unwrap();
        assert!(v.complete, "{v:?}");
    }

    #[test]
    fn overlap_is_not_a_partition() {
        let set = SetAlgebra::full(Kind::Ca, 2, 2).unwrap();
        let a = set.to_bao().unwrap();
        let (names, mut cand) = identity_candidate(&set);
        cand.atoms.get_mut("01").unwrap().push(vec![0, 0]);
        let v = verify_complete_representation(&a, &names, &cand).unwrap();
        assert!(!v.complete);
        assert!(v.diagnostic.unwrap().contains("not a partition"));
    }

    #[test]
    fn swapped_atoms_break_the_homomorphism() {
        let set = SetAlgebra::full(Kind::Ca, 2, 2).unwrap();
        let a = set.to_bao().unwrap();
        let (names, mut cand) = identity_candidate(&set);
        let x = cand.atoms["00"].clone();
        let y = cand.atoms["01"].clone();
        cand.atoms.insert("00".into(), y);
        cand.atoms.insert("01".into(), x);
        let v = verify_complete_representation(&a, &names, &cand).unwrap();
        assert!(!v.complete);
    }
}
