//! Canonical positions and the shared move graph.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{attacks, GameConfig, Move};
use crate::network::{Checker, Demand, Network, Node};
use crate::structure::{Atom, AtomStructure};

/// Canonical representative of `n` under node renaming, with nodes
/// `0..k`, and the renaming used: `perm[p]` is the new node of the node at
/// position `p`.
///
/// Positions are sorted by an invariant (the multiset of labels of the
/// tuples through the node, with the coordinates it occupies); within
/// invariant classes the least code in shell order (tuples over the first
/// `j` new nodes before any tuple mentioning node `j`) is found by branch and
/// bound.
pub fn canonical(n: &Network) -> (Network, Vec<Node>) {
    let k = n.len();
    let r = n.arity;
    if k == 0 {
        return (n.clone(), Vec::new());
    }
    let total = n.labels.len();
    let mut inv: Vec<Vec<(u8, Atom)>> = vec![Vec::new(); k];
    let mut t = vec![0usize; r];
    for idx in 0..total {
        decode(idx, k, &mut t);
        for p in 0..k {
            let mask = t.iter().enumerate().fold(0u8, |m, (c, &x)| if x == p { m | 1 << c } else { m });
            if mask != 0 {
                inv[p].push((mask, n.labels[idx]));
            }
        }
    }
    for v in &mut inv {
        v.sort_unstable();
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| inv[a].cmp(&inv[b]));
    // class id of each slot
    let mut slot_class = vec![0usize; k];
    for s in 1..k {
        slot_class[s] = slot_class[s - 1] + (inv[order[s]] != inv[order[s - 1]]) as usize;
    }
    let pos_class: Vec<usize> = {
        let mut pc = vec![0; k];
        for s in 0..k {
            pc[order[s]] = slot_class[s];
        }
        pc
    };
    let mut search = Search {
        n,
        k,
        r,
        slot_class,
        pos_class,
        assigned: vec![usize::MAX; k],
        used: vec![false; k],
        code: Vec::with_capacity(total),
        best: None,
        best_assigned: Vec::new(),
    };
    search.go(0);
    let old_of_new = search.best_assigned;
    let mut perm = vec![0 as Node; k];
    for (new, &old) in old_of_new.iter().enumerate() {
        perm[old] = new as Node;
    }
    let nodes: Vec<Node> = (0..k as Node).collect();
    let mut old_t = vec![0usize; r];
    let canon = Network::from_fn(r, nodes, |tn| {
        for c in 0..r {
            old_t[c] = old_of_new[tn[c] as usize];
        }
        n.labels[old_t.iter().fold(0, |acc, &p| acc * k + p)]
    });
    (canon, perm)
}

fn decode(mut idx: usize, k: usize, t: &mut [usize]) {
    for c in (0..t.len()).rev() {
        t[c] = idx % k;
        idx /= k;
    }
}

struct Search<'a> {
    n: &'a Network,
    k: usize,
    r: usize,
    slot_class: Vec<usize>,
    pos_class: Vec<usize>,
    /// old position of each new slot
    assigned: Vec<usize>,
    used: Vec<bool>,
    code: Vec<Atom>,
    best: Option<Vec<Atom>>,
    best_assigned: Vec<usize>,
}

impl Search<'_> {
    /// Appends the shell of slot `j` to `code`.
    fn push_shell(&mut self, j: usize) {
        let span = j + 1;
        let mut t = vec![0usize; self.r];
        for idx in 0..span.pow(self.r as u32) {
            decode(idx, span, &mut t);
            if !t.contains(&j) {
                continue;
            }
            let old = t.iter().fold(0, |acc, &s| acc * self.k + self.assigned[s]);
            self.code.push(self.n.labels[old]);
        }
    }

    fn go(&mut self, j: usize) {
        if j == self.k {
            if self.best.as_ref().is_none_or(|b| self.code < *b) {
                self.best = Some(self.code.clone());
                self.best_assigned = self.assigned.clone();
            }
            return;
        }
        for p in 0..self.k {
            if self.used[p] || self.pos_class[p] != self.slot_class[j] {
                continue;
            }
            self.used[p] = true;
            self.assigned[j] = p;
            let start = self.code.len();
            self.push_shell(j);
            // compare against the current best, which may have changed
            let prune = self
                .best
                .as_ref()
                .is_some_and(|b| self.code[..] > b[..self.code.len()]);
            if !prune {
                self.go(j + 1);
            }
            self.code.truncate(start);
            self.used[p] = false;
            self.assigned[j] = usize::MAX;
        }
    }
}

/// All consistent networks with at most `m` nodes, up to renaming, and the
/// move graph between them.
#[derive(Clone, Debug)]
pub struct Arena {
    pub networks: Vec<Network>,
    pub index: HashMap<Network, u32>,
    /// Per network: `(move, bucket)` for every legal move whose demand the
    /// network does not already witness. Witnessed demands are answered by
    /// the network itself and are not stored.
    pub moves: Vec<Vec<(Move, u32)>>,
    /// Distinct response sets, sorted by arena id; many moves share one.
    pub buckets: Vec<Vec<u32>>,
    pub m: usize,
    pub reuse: bool,
}

/// A response set in the naming of a canonical base network `base`, with
/// the witness at the new node `base.len()`.
type BucketKey = (u32, Demand);

impl Arena {
    pub fn build(structure: &AtomStructure, cfg: &GameConfig) -> Result<Arena> {
        cfg.check(structure)?;
        let ck = Checker::new(structure);
        let networks = enumerate(&ck, cfg.m, cfg.guards.max_networks)?;
        let index: HashMap<Network, u32> = networks.iter().enumerate().map(|(i, n)| (n.clone(), i as u32)).collect();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs.max(1))
            .build()
            .map_err(|e| Error::invalid(e.to_string()))?;
        // The responses at node z of N are the one-node extensions of N - z
        // (of N itself when z is fresh); they are enumerated once per
        // canonical base and filtered by the witness condition.
        let ext_of = |d: &Network| -> Result<Vec<(Network, u32)>> {
            if d.len() >= cfg.m {
                return Ok(Vec::new());
            }
            let mut out = Vec::new();
            for m in ck.grow(d, d.len() as Node) {
                let (c, _) = canonical(&m);
                let id = *index
                    .get(&c)
                    .ok_or_else(|| Error::invalid("response outside the arena (inconsistent extension)"))?;
                out.push((m, id));
            }
            Ok(out)
        };
        let ext: Vec<Vec<(Network, u32)>> = pool.install(|| networks.par_iter().map(ext_of).collect::<Result<_>>())?;
        let compute = |n: &Network| -> Result<Vec<(Move, Option<BucketKey>)>> {
            let mut out = Vec::new();
            let mut bases: HashMap<Node, (u32, Vec<Node>)> = HashMap::new();
            for mv in attacks(&ck, n, cfg.m, cfg.reuse) {
                if ck.satisfied(n, &mv.demand) {
                    continue;
                }
                if mv.node == Node::MAX {
                    out.push((mv, None));
                    continue;
                }
                let z = mv.node;
                if let std::collections::hash_map::Entry::Vacant(slot) = bases.entry(z) {
                    let base = if n.contains(z) {
                        let keep: Vec<Node> = n.nodes.iter().copied().filter(|&x| x != z).collect();
                        n.restrict(&keep)
                    } else {
                        n.clone()
                    };
                    let (c, perm) = canonical(&base);
                    let id = *index.get(&c).ok_or_else(|| Error::invalid("base outside the arena"))?;
                    // node of n -> node of the canonical base, z -> new node
                    let mut rename = vec![Node::MAX; 256];
                    for (p, &x) in base.nodes.iter().enumerate() {
                        rename[x as usize] = perm[p];
                    }
                    rename[z as usize] = base.len() as Node;
                    slot.insert((id, rename));
                }
                let (id, rename) = &bases[&z];
                let key = match &mv.demand {
                    Demand::Cyl { i, tuple, atom } => {
                        let mut t: Vec<Node> = tuple.iter().map(|&x| rename[x as usize]).collect();
                        t[*i as usize] = rename[z as usize];
                        Demand::Cyl { i: *i, tuple: t, atom: *atom }
                    }
                    Demand::Witness { x, y, left, right } => Demand::Witness {
                        x: rename[*x as usize],
                        y: rename[*y as usize],
                        left: *left,
                        right: *right,
                    },
                };
                out.push((mv, Some((*id, key))));
            }
            Ok(out)
        };
        let raw: Vec<Vec<(Move, Option<BucketKey>)>> =
            pool.install(|| networks.par_iter().map(compute).collect::<Result<_>>())?;
        // number the distinct keys in order of first use
        let mut key_id: HashMap<Option<BucketKey>, u32> = HashMap::new();
        let mut keys: Vec<Option<BucketKey>> = Vec::new();
        let mut moves = Vec::with_capacity(raw.len());
        for list in raw {
            let mut row = Vec::with_capacity(list.len());
            for (mv, key) in list {
                let b = *key_id.entry(key.clone()).or_insert_with(|| {
                    keys.push(key);
                    (keys.len() - 1) as u32
                });
                row.push((mv, b));
            }
            moves.push(row);
        }
        let fill = |key: &Option<BucketKey>| -> Vec<u32> {
            let Some((base, d)) = key else { return Vec::new() };
            let w = networks[*base as usize].len() as Node;
            let mut ids: Vec<u32> = ext[*base as usize]
                .iter()
                .filter(|(m, _)| ck.witnessed_by(m, d, w))
                .map(|&(_, id)| id)
                .collect();
            ids.sort_unstable();
            ids.dedup();
            ids
        };
        let buckets: Vec<Vec<u32>> = pool.install(|| keys.par_iter().map(fill).collect());
        Ok(Arena {
            networks,
            index,
            moves,
            buckets,
            m: cfg.m,
            reuse: cfg.reuse,
        })
    }

    /// The stored moves of network `id` with their response sets.
    pub fn moves_of(&self, id: u32) -> impl Iterator<Item = (&Move, &[u32])> + '_ {
        self.moves[id as usize].iter().map(move |(mv, b)| (mv, self.buckets[*b as usize].as_slice()))
    }

    pub fn len(&self) -> usize {
        self.networks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.networks.is_empty()
    }

    pub fn id_of(&self, n: &Network) -> Option<u32> {
        self.index.get(&canonical(n).0).copied()
    }

    /// Arena ids of the initial networks for atom `a`: at most `n` nodes
    /// (2 for RA) and some tuple through every node labelled `a`.
    pub fn initial(&self, a: Atom, arity: usize) -> Vec<u32> {
        self.networks
            .iter()
            .enumerate()
            .filter(|(_, n)| n.len() <= arity && is_initial_for(n, a))
            .map(|(i, _)| i as u32)
            .collect()
    }
}

pub fn is_initial_for(n: &Network, a: Atom) -> bool {
    !n.is_empty()
        && n.tuples()
            .enumerate()
            .any(|(idx, t)| n.labels[idx] == a && n.nodes.iter().all(|x| t.contains(x)))
}

/// Canonical consistent networks on `1..=m` nodes, grown node by node.
fn enumerate(ck: &Checker<'_>, m: usize, limit: usize) -> Result<Vec<Network>> {
    let mut all: Vec<Network> = Vec::new();
    let mut seen: HashMap<Network, ()> = HashMap::new();
    let mut layer = vec![Network::empty(ck.arity())];
    for size in 1..=m {
        let mut next = Vec::new();
        for n in &layer {
            for grown in ck.grow(n, (size - 1) as Node) {
                let (c, _) = canonical(&grown);
                if seen.insert(c.clone(), ()).is_none() {
                    next.push(c);
                    if seen.len() > limit {
                        return Err(Error::guard("arena networks", seen.len() as u128, limit as u128));
                    }
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::apply_map;
    use crate::structure::gen_rainbow;
    use std::collections::BTreeMap;

    #[test]
    fn renamed_networks_share_a_canonical_form() {
        let s: AtomStructure = gen_rainbow(2, 1).unwrap().into();
        let ck = Checker::new(&s);
        let base = Network::from_fn(2, vec![0, 1, 2], |t| match (t[0], t[1]) {
            (a, b) if a == b => 0,
            (0, 1) | (1, 0) => 1,
            (0, 2) | (2, 0) => 3,
            _ => 2,
        });
        assert!(ck.is_consistent(&base));
        let theta = BTreeMap::from([(5, 2), (3, 0), (4, 1)]);
        let moved = apply_map(&base, &theta);
        let (c1, p1) = canonical(&base);
        let (c2, _) = canonical(&moved);
        assert_eq!(c1, c2);
        // the renaming really maps base onto its canonical form
        for t in base.tuples() {
            let tn: Vec<Node> = t.iter().map(|&x| p1[base.position(x).unwrap()]).collect();
            assert_eq!(c1.label(&tn), base.label(&t));
        }
    }
}
