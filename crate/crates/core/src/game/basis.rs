//! Extraction of an `m`-dimensional basis from Héloïse's winning region.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::game::{answers, attacks, canonical, Arena, Safety};
use crate::network::{apply_map, Checker, Network, Node};
use crate::structure::AtomStructure;

/// Canonical `m`-node networks closed under `θ : m → m` (injective only,
/// for kinds with diagonals) and under reuse responses.
#[derive(Clone, Debug)]
pub struct Basis {
    pub m: usize,
    pub networks: Vec<Network>,
}

/// Closure of the maximal-node networks of the winning region.
///
/// Fails with `NotABasis` when the region is empty, when some atom labels no
/// member, or when some demand on a member has no reuse response inside the
/// set; the message names the first offence.
pub fn extract_basis(s: &AtomStructure, arena: &Arena, safety: &Safety) -> Result<Basis> {
    let region: Vec<u32> = (0..arena.len() as u32).filter(|&i| safety.alive[i as usize]).collect();
    let top = region
        .iter()
        .map(|&i| arena.networks[i as usize].len())
        .max()
        .ok_or_else(|| Error::NotABasis("the winning region is empty".into()))?;
    let injective_only = match s {
        AtomStructure::Ca(c) => c.signature().kind.has_diagonals(),
        AtomStructure::Ra(_) => false,
    };
    let mut set: BTreeSet<Network> = BTreeSet::new();
    let mut queue: VecDeque<Network> = VecDeque::new();
    for &i in &region {
        let n = &arena.networks[i as usize];
        if n.len() == top && set.insert(n.clone()) {
            queue.push_back(n.clone());
        }
    }
    // permutations are absorbed by canonical forms; the transformation
    // monoid is generated by them and one elementary collapse per pair
    while let Some(n) = queue.pop_front() {
        if injective_only {
            break;
        }
        for i in 0..top as Node {
            for j in 0..top as Node {
                if i == j {
                    continue;
                }
                let theta: BTreeMap<Node, Node> = (0..top as Node).map(|x| (x, if x == i { j } else { x })).collect();
                let (c, _) = canonical(&apply_map(&n, &theta));
                if set.insert(c.clone()) {
                    queue.push_back(c);
                }
            }
        }
    }
    for n in &set {
        if !arena.id_of(n).is_some_and(|id| safety.alive[id as usize]) {
            return Err(Error::NotABasis("a collapsed network leaves the winning region".into()));
        }
    }
    for a in 0..s.len() {
        if !set.iter().any(|n| n.labels.contains(&(a as u8))) {
            return Err(Error::NotABasis(format!("atom {} labels no member", s.names()[a])));
        }
    }
    // Abelard may name any witness node outside the demand's coordinates
    let ck = Checker::new(s);
    for n in &set {
        for mv in attacks(&ck, n, top, true) {
            let ok = answers(&ck, n, &mv)?
                .iter()
                .any(|m| m.len() == top && set.contains(&canonical(m).0));
            if !ok {
                return Err(Error::NotABasis(format!(
                    "demand {:?} at node {} has no response in the set",
                    mv.demand, mv.node
                )));
            }
        }
    }
    Ok(Basis {
        m: top,
        networks: set.into_iter().collect(),
    })
}
