//! Atom-labelled networks: edge-labelled complete graphs over an RA atom
//! structure and `n`-dimensional hypernetworks over a CA-like structure.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signature::UnaryOp;
use crate::structure::{Atom, AtomStructure, CaAtomStructure, RaAtomStructure};

pub type Node = u8;

/// A network with sorted node list; `labels` is indexed by tuples of node
/// positions in row-major order (`arity` coordinates).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Network {
    pub arity: usize,
    pub nodes: Vec<Node>,
    pub labels: Vec<Atom>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NetworkViolation {
    pub constraint: String,
    pub tuples: Vec<Vec<Node>>,
    pub atoms: Vec<String>,
}

/// Abelard's moves. `Cyl` asks for a witness `y ≡_i x̄` labelled `atom`;
/// `Witness` (RA) asks for `z` with `N(x, z) = left` and `N(z, y) = right`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum Demand {
    Cyl { i: u8, tuple: Vec<Node>, atom: Atom },
    Witness { x: Node, y: Node, left: Atom, right: Atom },
}

impl Network {
    pub fn new(arity: usize, mut nodes: Vec<Node>, labels: Vec<Atom>) -> Result<Self> {
        let sorted = nodes.windows(2).all(|w| w[0] < w[1]);
        if !sorted {
            let mut s = nodes.clone();
            s.sort_unstable();
            s.dedup();
            if s.len() != nodes.len() {
                return Err(Error::invalid("repeated node"));
            }
            // relabel positions: build from the sorted order
            let old = Network {
                arity,
                nodes: nodes.clone(),
                labels,
            };
            nodes = s;
            return Ok(Network::from_fn(arity, nodes, |t| old.label_positions_of(t)));
        }
        if arity == 0 || labels.len() != nodes.len().pow(arity as u32) {
            return Err(Error::invalid("label table does not match the node set"));
        }
        Ok(Network { arity, nodes, labels })
    }

    /// Label lookup by node tuple for the unsorted constructor path.
    fn label_positions_of(&self, tuple: &[Node]) -> Atom {
        let k = self.nodes.len();
        let idx = tuple.iter().fold(0usize, |acc, x| {
            acc * k + self.nodes.iter().position(|n| n == x).expect("node present")
        });
        self.labels[idx]
    }

    pub fn empty(arity: usize) -> Self {
        Network {
            arity,
            nodes: Vec::new(),
            labels: if arity == 0 { vec![0] } else { Vec::new() },
        }
    }

    pub fn from_fn(arity: usize, nodes: Vec<Node>, mut f: impl FnMut(&[Node]) -> Atom) -> Self {
        let k = nodes.len();
        let total = k.pow(arity as u32);
        let mut labels = Vec::with_capacity(total);
        let mut tuple = vec![0 as Node; arity];
        for idx in 0..total {
            let mut r = idx;
            for c in (0..arity).rev() {
                tuple[c] = nodes[r % k];
                r /= k;
            }
            labels.push(f(&tuple));
        }
        Network { arity, nodes, labels }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, x: Node) -> bool {
        self.nodes.binary_search(&x).is_ok()
    }

    pub fn position(&self, x: Node) -> Option<usize> {
        self.nodes.binary_search(&x).ok()
    }

    #[inline]
    pub fn index_of_positions(&self, pos: &[usize]) -> usize {
        let k = self.nodes.len();
        pos.iter().fold(0, |acc, &p| acc * k + p)
    }

    pub fn get(&self, tuple: &[Node]) -> Option<Atom> {
        if tuple.len() != self.arity {
            return None;
        }
        let k = self.nodes.len();
        let mut idx = 0;
        for &x in tuple {
            idx = idx * k + self.position(x)?;
        }
        Some(self.labels[idx])
    }

    pub fn label(&self, tuple: &[Node]) -> Atom {
        self.get(tuple).expect("tuple over the network's nodes")
    }

    /// All node tuples in lexicographic order.
    pub fn tuples(&self) -> impl Iterator<Item = Vec<Node>> + '_ {
        let k = self.nodes.len();
        let total = if k == 0 { 0 } else { k.pow(self.arity as u32) };
        (0..total).map(move |idx| self.tuple_at(idx))
    }

    pub fn tuple_at(&self, idx: usize) -> Vec<Node> {
        let k = self.nodes.len();
        let mut t = vec![0 as Node; self.arity];
        let mut r = idx;
        for c in (0..self.arity).rev() {
            t[c] = self.nodes[r % k];
            r /= k;
        }
        t
    }

    pub fn restrict(&self, keep: &[Node]) -> Network {
        let nodes: Vec<Node> = self.nodes.iter().copied().filter(|x| keep.contains(x)).collect();
        Network::from_fn(self.arity, nodes, |t| self.label(t))
    }

    /// Text dump: node list then one line per tuple (or label matrix rows for
    /// binary networks).
    pub fn dump(&self, names: &[String]) -> String {
        let mut s = String::new();
        let list: Vec<String> = self.nodes.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(s, "nodes: {}", list.join(" "));
        if self.arity == 2 {
            for &x in &self.nodes {
                let row: Vec<&str> = self.nodes.iter().map(|&y| names[self.label(&[x, y]) as usize].as_str()).collect();
                let _ = writeln!(s, "  {x}: {}", row.join(" "));
            }
        } else {
            for t in self.tuples() {
                let coords: Vec<String> = t.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(s, "  ({}) {}", coords.join(","), names[self.label(&t) as usize]);
            }
        }
        s
    }
}

/// `Nθ`: nodes `θ^-1(nodes(N))`, labels `(Nθ)(ī) = N(θ(ī))`.
pub fn apply_map(n: &Network, theta: &BTreeMap<Node, Node>) -> Network {
    let nodes: Vec<Node> = theta.iter().filter(|(_, v)| n.contains(**v)).map(|(&k, _)| k).collect();
    let mut image = vec![0 as Node; n.arity];
    Network::from_fn(n.arity, nodes, |t| {
        for (c, x) in t.iter().enumerate() {
            image[c] = theta[x];
        }
        n.label(&image)
    })
}

pub fn delete_node(n: &Network, i: Node) -> Result<Network> {
    if !n.contains(i) {
        return Err(Error::MissingNode(i));
    }
    let keep: Vec<Node> = n.nodes.iter().copied().filter(|&x| x != i).collect();
    Ok(n.restrict(&keep))
}

/// Precomputed coherence data of a structure.
#[derive(Clone, Debug)]
pub struct Checker<'a> {
    pub structure: &'a AtomStructure,
    arity: usize,
    /// `(i, j, images)` for every transposition constrained by coherence.
    swaps: Vec<(u8, u8, Vec<u64>)>,
}

impl<'a> Checker<'a> {
    pub fn new(structure: &'a AtomStructure) -> Self {
        let (arity, swaps) = match structure {
            AtomStructure::Ra(_) => (2, Vec::new()),
            AtomStructure::Ca(s) => {
                let n = s.dim();
                let kind = s.signature().kind;
                let mut swaps = Vec::new();
                if kind.has_transpositions() || kind.is_polyadic() {
                    for i in 0..n as u8 {
                        for j in i + 1..n as u8 {
                            let r = s.relation(UnaryOp::Swap(i, j)).expect("transpositions present").into_owned();
                            swaps.push((i, j, r));
                        }
                    }
                }
                (n, swaps)
            }
        };
        Checker {
            structure,
            arity,
            swaps,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    fn names(&self) -> &[String] {
        self.structure.names()
    }

    /// First violated constraint, or `None` if the network is consistent.
    pub fn check(&self, n: &Network) -> Option<NetworkViolation> {
        if n.arity != self.arity {
            return Some(NetworkViolation {
                constraint: format!("arity {} does not match the structure's {}", n.arity, self.arity),
                tuples: vec![],
                atoms: vec![],
            });
        }
        if let Some(&bad) = n.labels.iter().find(|&&a| a as usize >= self.structure.len()) {
            return Some(NetworkViolation {
                constraint: format!("label {bad} is not an atom"),
                tuples: vec![],
                atoms: vec![],
            });
        }
        let labels: Vec<Option<Atom>> = n.labels.iter().map(|&a| Some(a)).collect();
        let p = Partial {
            k: n.len(),
            arity: n.arity,
            labels,
        };
        (0..p.labels.len()).find_map(|idx| self.check_at(&p, idx, true))
    }

    pub fn is_consistent(&self, n: &Network) -> bool {
        self.check(n).is_none()
    }

    /// Constraints involving tuple `idx` among labelled tuples of `p`.
    /// With `full`, every constraint is examined (also ones that are redundant
    /// for valid structures).
    fn check_at(&self, p: &Partial, idx: usize, full: bool) -> Option<NetworkViolation> {
        let label = p.labels[idx]?;
        match self.structure {
            AtomStructure::Ra(s) => self.check_ra(s, p, idx, label, full),
            AtomStructure::Ca(s) => self.check_ca(s, p, idx, label),
        }
    }

    fn viol(&self, what: &str, tuples: Vec<Vec<usize>>, atoms: &[Atom]) -> NetworkViolation {
        NetworkViolation {
            constraint: what.to_string(),
            tuples: tuples.into_iter().map(|t| t.into_iter().map(|x| x as Node).collect()).collect(),
            atoms: atoms.iter().map(|&a| self.names()[a as usize].clone()).collect(),
        }
    }

    fn check_ra(&self, s: &RaAtomStructure, p: &Partial, idx: usize, label: Atom, full: bool) -> Option<NetworkViolation> {
        let k = p.k;
        let (x, y) = (idx / k, idx % k);
        if x == y {
            if label != s.identity() {
                return Some(self.viol("reflexive edge not labelled by the identity", vec![vec![x, y]], &[label]));
            }
            return None;
        }
        if let Some(back) = p.labels[y * k + x] {
            if back != s.converse(label) {
                return Some(self.viol("edge labels not converse", vec![vec![x, y], vec![y, x]], &[label, back]));
            }
        }
        let at = |a: usize, b: usize| p.labels[a * k + b];
        let others: Box<dyn Iterator<Item = usize>> = if full { Box::new(0..k) } else { Box::new((0..k).filter(|&w| w != x && w != y)) };
        for w in others {
            // every ordered triangle through the edge {x, y} and w
            let pts = [x, y, w];
            for (a, b, c) in [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)] {
                let (l, m, o) = (pts[a], pts[b], pts[c]);
                if let (Some(lm), Some(mo), Some(lo)) = (at(l, m), at(m, o), at(l, o)) {
                    if !s.consistent(lm, mo, lo) {
                        return Some(self.viol(
                            "triangle not consistent",
                            vec![vec![l, m], vec![m, o], vec![l, o]],
                            &[lm, mo, lo],
                        ));
                    }
                }
            }
        }
        None
    }

    fn check_ca(&self, s: &CaAtomStructure, p: &Partial, idx: usize, label: Atom) -> Option<NetworkViolation> {
        let n = p.arity;
        let t = p.tuple(idx);
        if s.signature().kind.has_diagonals() {
            for i in 0..n {
                for j in 0..n {
                    if s.in_diagonal(label, i as u8, j as u8) != (t[i] == t[j]) {
                        return Some(self.viol(&format!("diagonal coherence for d{i}{j}"), vec![t.clone()], &[label]));
                    }
                }
            }
        }
        let mut u = t.clone();
        for i in 0..n {
            for v in 0..p.k {
                if v == t[i] {
                    continue;
                }
                u[i] = v;
                if let Some(other) = p.labels[p.index(&u)] {
                    if !s.cyl_related(i as u8, label, other) || !s.cyl_related(i as u8, other, label) {
                        return Some(self.viol(
                            &format!("cylindrifier coherence for c{i}"),
                            vec![t.clone(), u.clone()],
                            &[label, other],
                        ));
                    }
                }
            }
            u[i] = t[i];
        }
        for (i, j, r) in &self.swaps {
            let (i, j) = (*i as usize, *j as usize);
            u.swap(i, j);
            if let Some(other) = p.labels[p.index(&u)] {
                if r[label as usize] >> other & 1 == 0 || r[other as usize] >> label & 1 == 0 {
                    return Some(self.viol(&format!("transposition coherence for s[{i},{j}]"), vec![t.clone(), u.clone()], &[label, other]));
                }
            }
            u.swap(i, j);
        }
        None
    }

    /// Whether `d` is a legal demand on `n`.
    pub fn demand_legal(&self, n: &Network, d: &Demand) -> Result<()> {
        match (self.structure, d) {
            (AtomStructure::Ca(s), Demand::Cyl { i, tuple, atom }) => {
                let cur = n
                    .get(tuple)
                    .ok_or_else(|| Error::IllegalDemand(format!("tuple {tuple:?} is not over the network's nodes")))?;
                if (*i as usize) >= s.dim() || *atom as usize >= s.len() {
                    return Err(Error::IllegalDemand("index or atom out of range".into()));
                }
                if !s.cyl_related(*i, *atom, cur) {
                    return Err(Error::IllegalDemand(format!(
                        "{} is not below c{i} {}",
                        s.name(cur),
                        s.name(*atom)
                    )));
                }
                Ok(())
            }
            (AtomStructure::Ra(s), Demand::Witness { x, y, left, right }) => {
                let cur = n
                    .get(&[*x, *y])
                    .ok_or_else(|| Error::IllegalDemand(format!("edge ({x},{y}) is not in the network")))?;
                if *left as usize >= s.len() || *right as usize >= s.len() {
                    return Err(Error::IllegalDemand("atom out of range".into()));
                }
                if !s.consistent(*left, *right, cur) {
                    return Err(Error::IllegalDemand(format!(
                        "{} is not below {} ; {}",
                        s.name(cur),
                        s.name(*left),
                        s.name(*right)
                    )));
                }
                Ok(())
            }
            _ => Err(Error::IllegalDemand("demand does not match the structure kind".into())),
        }
    }

    /// Whether node `z` already witnesses `d` in `m`.
    pub fn witnessed_by(&self, m: &Network, d: &Demand, z: Node) -> bool {
        match d {
            Demand::Cyl { i, tuple, atom } => {
                let mut y = tuple.clone();
                y[*i as usize] = z;
                m.get(&y) == Some(*atom)
            }
            Demand::Witness { x, y, left, right } => m.get(&[*x, z]) == Some(*left) && m.get(&[z, *y]) == Some(*right),
        }
    }

    pub fn satisfied(&self, m: &Network, d: &Demand) -> bool {
        m.nodes.iter().any(|&z| self.witnessed_by(m, d, z))
    }

    /// Héloïse's possible responses to `d` on `n`, within node budget `m`.
    ///
    /// Order: witnesses `z` among existing nodes ascending (the network
    /// itself when `z` already witnesses; all relabellings of the tuples
    /// through `z` when reuse is on and `z` is not another coordinate of the
    /// demand), then the least fresh node below `m` with every consistent
    /// labelling of the new tuples. Labellings are lexicographic by tuple,
    /// then atom id. Duplicates are dropped.
    pub fn extensions(&self, n: &Network, d: &Demand, m: usize, reuse: bool) -> Result<Vec<Network>> {
        self.demand_legal(n, d)?;
        let fixed_others = Self::fixed_nodes(d);
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        let mut push = |net: Network, out: &mut Vec<Network>| {
            if seen.insert(net.clone()) {
                out.push(net);
            }
        };
        for &z in &n.nodes {
            let witnessed = self.witnessed_by(n, d, z);
            if reuse && !fixed_others.contains(&z) {
                for net in self.label_through(n, d, z) {
                    push(net, &mut out);
                }
            } else if witnessed {
                push(n.clone(), &mut out);
            }
        }
        if let Some(z) = (0..m.min(256) as u16).map(|v| v as Node).find(|v| !n.contains(*v)) {
            let mut nodes = n.nodes.clone();
            nodes.push(z);
            nodes.sort_unstable();
            let grown = Network::from_fn(n.arity, nodes, |t| {
                if t.contains(&z) {
                    0
                } else {
                    n.label(t)
                }
            });
            for net in self.label_through(&grown, d, z) {
                push(net, &mut out);
            }
        }
        Ok(out)
    }

    /// Nodes of a demand other than the moving coordinate; a witness node
    /// must avoid them.
    pub fn fixed_nodes(d: &Demand) -> Vec<Node> {
        match d {
            Demand::Cyl { i, tuple, .. } => tuple
                .iter()
                .enumerate()
                .filter(|(c, _)| *c != *i as usize)
                .map(|(_, &x)| x)
                .collect(),
            Demand::Witness { x, y, .. } => vec![*x, *y],
        }
    }

    /// Responses placing the witness of `d` at node `z`: if `z` is fresh,
    /// every consistent labelling of the tuples through `z` added to `n`;
    /// otherwise every consistent relabelling of the tuples through `z`
    /// (node reuse). Other labels are kept.
    pub fn respond(&self, n: &Network, d: &Demand, z: Node) -> Result<Vec<Network>> {
        self.demand_legal(n, d)?;
        if Self::fixed_nodes(d).contains(&z) {
            return Err(Error::IllegalDemand(format!("witness node {z} is a coordinate of the demand")));
        }
        if n.contains(z) {
            return Ok(self.label_through(n, d, z));
        }
        let mut nodes = n.nodes.clone();
        nodes.push(z);
        nodes.sort_unstable();
        let grown = Network::from_fn(n.arity, nodes, |t| if t.contains(&z) { 0 } else { n.label(t) });
        Ok(self.label_through(&grown, d, z))
    }

    /// Every consistent network obtained from `n` by adding the fresh node
    /// `z`, in labelling order.
    pub fn grow(&self, n: &Network, z: Node) -> Vec<Network> {
        let mut nodes = n.nodes.clone();
        nodes.push(z);
        nodes.sort_unstable();
        let base = Network::from_fn(n.arity, nodes, |t| if t.contains(&z) { 0 } else { n.label(t) });
        self.label_with(&base, None, z)
    }

    /// Every consistent network that agrees with `n` off `z` and has node set
    /// `nodes(n) ∪ {z}`: the candidate responses at `z` for any demand.
    pub fn through(&self, n: &Network, z: Node) -> Vec<Network> {
        if n.contains(z) {
            self.label_with(n, None, z)
        } else {
            self.grow(n, z)
        }
    }

    /// Every consistent labelling of the tuples of `base` involving `z` (other
    /// labels kept) such that `z` witnesses `d`.
    fn label_through(&self, base: &Network, d: &Demand, z: Node) -> Vec<Network> {
        self.label_with(base, Some(d), z)
    }

    fn label_with(&self, base: &Network, d: Option<&Demand>, z: Node) -> Vec<Network> {
        let k = base.len();
        let zp = base.position(z).expect("z is a node");
        let mut p = Partial {
            k,
            arity: base.arity,
            labels: base.labels.iter().map(|&a| Some(a)).collect(),
        };
        let mut free = Vec::new();
        for idx in 0..p.labels.len() {
            let t = p.tuple(idx);
            if t.contains(&zp) {
                p.labels[idx] = None;
                // RA: assign each unordered edge once, reflexive edge fixed
                if base.arity == 2 && self.structure.as_ra().is_some() {
                    if t[0] < t[1] {
                        free.push(idx);
                    }
                } else {
                    free.push(idx);
                }
            }
        }
        // required labels
        let mut required: Vec<(usize, Atom)> = Vec::new();
        let pos = |x: Node| base.position(x).expect("demand node present");
        match d {
            None => {}
            Some(Demand::Cyl { i, tuple, atom }) => {
                let mut y: Vec<usize> = tuple.iter().map(|&x| pos(x)).collect();
                y[*i as usize] = zp;
                required.push((p.index(&y), *atom));
            }
            Some(Demand::Witness { x, y, left, right }) => {
                let s = self.structure.as_ra().expect("RA demand");
                let (xp, yp) = (pos(*x), pos(*y));
                required.push((xp * k + zp, *left));
                required.push((zp * k + xp, s.converse(*left)));
                required.push((zp * k + yp, *right));
                required.push((yp * k + zp, s.converse(*right)));
            }
        }
        if let Some(s) = self.structure.as_ra() {
            required.push((zp * k + zp, s.identity()));
        }
        for &(idx, a) in &required {
            match p.labels[idx] {
                Some(b) if b != a => return Vec::new(),
                _ => p.labels[idx] = Some(a),
            }
        }
        let is_ra = self.structure.as_ra().is_some();
        free.retain(|idx| p.labels[*idx].is_none());
        for &(idx, _) in &required {
            if self.check_at(&p, idx, false).is_some() {
                return Vec::new();
            }
        }
        let mut out = Vec::new();
        let atoms = self.structure.len() as Atom;
        self.fill(&mut p, &free, 0, atoms, is_ra, &base.nodes, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn fill(&self, p: &mut Partial, free: &[usize], at: usize, atoms: Atom, is_ra: bool, nodes: &[Node], out: &mut Vec<Network>) {
        if at == free.len() {
            out.push(Network {
                arity: p.arity,
                nodes: nodes.to_vec(),
                labels: p.labels.iter().map(|l| l.expect("all tuples labelled")).collect(),
            });
            return;
        }
        let idx = free[at];
        let back = if is_ra { Some((idx % p.k) * p.k + idx / p.k) } else { None };
        for a in 0..atoms {
            p.labels[idx] = Some(a);
            if let (Some(b), AtomStructure::Ra(s)) = (back, self.structure) {
                p.labels[b] = Some(s.converse(a));
            }
            if self.check_at(p, idx, false).is_none() {
                self.fill(p, free, at + 1, atoms, is_ra, nodes, out);
            }
        }
        p.labels[idx] = None;
        if let Some(b) = back {
            p.labels[b] = None;
        }
    }
}

/// Partially labelled network over positions `0..k`.
struct Partial {
    k: usize,
    arity: usize,
    labels: Vec<Option<Atom>>,
}

impl Partial {
    fn tuple(&self, idx: usize) -> Vec<usize> {
        let mut t = vec![0; self.arity];
        let mut r = idx;
        for c in (0..self.arity).rev() {
            t[c] = r % self.k;
            r /= self.k;
        }
        t
    }

    fn index(&self, t: &[usize]) -> usize {
        t.iter().fold(0, |acc, &p| acc * self.k + p)
    }
}

pub fn is_consistent(structure: &AtomStructure, n: &Network) -> std::result::Result<(), NetworkViolation> {
    match Checker::new(structure).check(n) {
        None => Ok(()),
        Some(v) => Err(v),
    }
}

pub fn extensions(structure: &AtomStructure, n: &Network, d: &Demand, m: usize, reuse: bool) -> Result<Vec<Network>> {
    Checker::new(structure).extensions(n, d, m, reuse)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::gen_rainbow;

    fn rainbow11() -> AtomStructure {
        gen_rainbow(1, 1).unwrap().into()
    }

    #[test]
    fn single_node_identity_network_is_consistent() {
        let s = rainbow11();
        let n = Network::new(2, vec![0], vec![0]).unwrap();
        assert!(is_consistent(&s, &n).is_ok());
    }

    #[test]
    fn red_triangle_is_inconsistent() {
        let s = rainbow11();
        let n = Network::from_fn(2, vec![0, 1, 2], |t| if t[0] == t[1] { 0 } else { 2 });
        let v = is_consistent(&s, &n).unwrap_err();
        assert_eq!(v.atoms, ["r1", "r1", "r1"]);
    }

    #[test]
    fn apply_map_collapses_onto_one_node() {
        let n = Network::from_fn(2, vec![0, 1], |t| if t[0] == t[1] { 0 } else { 2 });
        let theta = BTreeMap::from([(0, 1)]);
        let m = apply_map(&n, &theta);
        assert_eq!(m.nodes, vec![0]);
        assert_eq!(m.label(&[0, 0]), n.label(&[1, 1]));
        assert!(apply_map(&n, &BTreeMap::new()).is_empty());
    }

    #[test]
    fn delete_node_errors_on_missing_node() {
        let n = Network::new(2, vec![0], vec![0]).unwrap();
        assert!(delete_node(&n, 0).unwrap().is_empty());
        assert!(matches!(delete_node(&n, 3), Err(Error::MissingNode(3))));
    }

    #[test]
    fn satisfied_demand_returns_the_network_itself() {
        let s = rainbow11();
        let n = Network::from_fn(2, vec![0, 1], |t| if t[0] == t[1] { 0 } else { 1 });
        // g0 <= Id ; g0 witnessed by z = 0
        let d = Demand::Witness { x: 0, y: 1, left: 0, right: 1 };
        let ext = extensions(&s, &n, &d, 2, false).unwrap();
        assert_eq!(ext, vec![n]);
    }

    #[test]
    fn illegal_demand_is_rejected() {
        let s = rainbow11();
        let n = Network::from_fn(2, vec![0, 1], |t| if t[0] == t[1] { 0 } else { 2 });
        // r1 is not below r1 ; r1
        let d = Demand::Witness { x: 0, y: 1, left: 2, right: 2 };
        assert!(matches!(extensions(&s, &n, &d, 3, false), Err(Error::IllegalDemand(_))));
    }

    #[test]
    fn witnesses_of_a_red_edge_through_greens() {
        let s = rainbow11();
        let n = Network::from_fn(2, vec![0, 1], |t| if t[0] == t[1] { 0 } else { 2 });
        let d = Demand::Witness { x: 0, y: 1, left: 1, right: 1 };
        let ext = extensions(&s, &n, &d, 3, false).unwrap();
        assert_eq!(ext.len(), 1);
        assert_eq!(ext[0].nodes, vec![0, 1, 2]);
        assert_eq!(ext[0].label(&[0, 2]), 1);
        assert_eq!(ext[0].label(&[2, 1]), 1);
        assert!(is_consistent(&s, &ext[0]).is_ok());
        // no fresh node left
        assert!(extensions(&s, &n, &d, 2, false).unwrap().is_empty());
    }
}
