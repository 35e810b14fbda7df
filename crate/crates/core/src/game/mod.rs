//! The atomic network game `G^m_k`: Abelard picks a played network and a
//! demand, Héloïse answers with a consistent network on at most `m` nodes.
//!
//! Positions are canonical networks (see [`arena::canonical`]); the game is
//! solved on the finite arena of all of them, either round-bounded
//! ([`solve_bounded`]) or as a safety game for `k = ω` ([`solve_safety`]).

pub mod arena;
pub mod basis;
pub mod cert;
pub mod history;
pub mod lyndon;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{Checker, Demand, Network, Node};
use crate::structure::{Atom, AtomStructure};

pub use arena::{canonical, Arena};
pub use basis::{extract_basis, Basis};
pub use cert::{replay, Certificate};
pub use history::history_winner;
pub use lyndon::{check_lyndon, LyndonOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RoundsRepr", into = "RoundsRepr")]
pub enum Rounds {
    Finite(usize),
    Omega,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RoundsRepr {
    K(usize),
    W(String),
}

impl From<Rounds> for RoundsRepr {
    fn from(r: Rounds) -> Self {
        match r {
            Rounds::Finite(k) => RoundsRepr::K(k),
            Rounds::Omega => RoundsRepr::W("omega".into()),
        }
    }
}

impl TryFrom<RoundsRepr> for Rounds {
    type Error = String;
    fn try_from(r: RoundsRepr) -> std::result::Result<Self, String> {
        match r {
            RoundsRepr::K(k) => Ok(Rounds::Finite(k)),
            RoundsRepr::W(s) => s.parse().map_err(|e: Error| e.to_string()),
        }
    }
}

impl FromStr for Rounds {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "omega" | "w" | "ω" | "inf" => Ok(Rounds::Omega),
            t => t
                .parse()
                .map(Rounds::Finite)
                .map_err(|_| Error::invalid(format!("rounds must be a number or 'omega', got {s:?}"))),
        }
    }
}

impl fmt::Display for Rounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rounds::Finite(k) => write!(f, "{k}"),
            Rounds::Omega => f.write_str("omega"),
        }
    }
}

/// Resource limits; exceeding one is a guard error, never a silent cut-off.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Guards {
    pub max_atoms: usize,
    pub max_m: usize,
    pub max_k: usize,
    pub max_networks: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            max_atoms: 16,
            max_m: 8,
            max_k: 12,
            max_networks: 2_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameConfig {
    pub m: usize,
    pub rounds: Rounds,
    pub reuse: bool,
    pub jobs: usize,
    pub guards: Guards,
}

impl GameConfig {
    pub fn new(m: usize, rounds: Rounds) -> Self {
        GameConfig {
            m,
            rounds,
            reuse: false,
            jobs: 1,
            guards: Guards::default(),
        }
    }

    pub fn reuse(mut self, on: bool) -> Self {
        self.reuse = on;
        self
    }

    pub fn jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }

    pub fn check(&self, s: &AtomStructure) -> Result<()> {
        let g = &self.guards;
        if s.len() > g.max_atoms {
            return Err(Error::guard("atoms", s.len() as u128, g.max_atoms as u128));
        }
        if self.m > g.max_m {
            return Err(Error::guard("m", self.m as u128, g.max_m as u128));
        }
        if let Rounds::Finite(k) = self.rounds {
            if k > g.max_k {
                return Err(Error::guard("k", k as u128, g.max_k as u128));
            }
        }
        match s {
            AtomStructure::Ra(_) if self.m < 3 => Err(Error::invalid("RA games need m >= 3")),
            AtomStructure::Ca(c) if self.m <= c.dim() => {
                Err(Error::invalid(format!("games over dimension {} need m > {}", c.dim(), c.dim())))
            }
            _ => Ok(()),
        }
    }
}

/// Nodes of an initial network: `n` for cylindric-type structures, 2 for RA.
pub fn initial_arity(s: &AtomStructure) -> usize {
    match s {
        AtomStructure::Ra(_) => 2,
        AtomStructure::Ca(c) => c.dim(),
    }
}

/// Every legal demand on `n`, cylindrifier demands taken with coordinate
/// `i` of the tuple set to the least node (the demand only depends on the
/// `≡_i` class of the tuple).
pub fn abelard_moves(ck: &Checker<'_>, n: &Network) -> Vec<Demand> {
    let mut out = Vec::new();
    match ck.structure {
        AtomStructure::Ra(s) => {
            for &x in &n.nodes {
                for &y in &n.nodes {
                    let cur = n.label(&[x, y]);
                    for left in s.atoms() {
                        for right in s.atoms() {
                            if s.consistent(left, right, cur) {
                                out.push(Demand::Witness { x, y, left, right });
                            }
                        }
                    }
                }
            }
        }
        AtomStructure::Ca(s) => {
            let Some(&first) = n.nodes.first() else { return out };
            for i in 0..s.dim() {
                for t in n.tuples() {
                    if t[i] != first {
                        continue;
                    }
                    let cur = n.label(&t);
                    for a in s.atoms() {
                        if s.cyl_related(i as u8, a, cur) {
                            out.push(Demand::Cyl {
                                i: i as u8,
                                tuple: t.clone(),
                                atom: a,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

/// A demand together with the node that must witness it. Without reuse the
/// node is the least fresh one; with reuse Abelard may name any node below
/// `m` outside the demand's other coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Move {
    pub demand: Demand,
    pub node: Node,
}

/// Abelard's full moves on `n` for budget `m`.
pub fn attacks(ck: &Checker<'_>, n: &Network, m: usize, reuse: bool) -> Vec<Move> {
    let mut out = Vec::new();
    let fresh = fresh_node(n, m);
    for d in abelard_moves(ck, n) {
        if reuse {
            let fixed = Checker::fixed_nodes(&d);
            for z in (0..m as Node).filter(|z| !fixed.contains(z)) {
                out.push(Move { demand: d.clone(), node: z });
            }
        } else if let Some(z) = fresh {
            out.push(Move { demand: d, node: z });
        } else {
            // no node to witness on; Héloïse can only answer if N already does
            out.push(Move { demand: d, node: Node::MAX });
        }
    }
    out
}

/// Héloïse's answers to a move: the network itself when it already
/// witnesses the demand, otherwise the responses at the named node.
pub fn answers(ck: &Checker<'_>, n: &Network, mv: &Move) -> Result<Vec<Network>> {
    if ck.satisfied(n, &mv.demand) {
        ck.demand_legal(n, &mv.demand)?;
        return Ok(vec![n.clone()]);
    }
    if mv.node == Node::MAX {
        return Ok(Vec::new());
    }
    ck.respond(n, &mv.demand, mv.node)
}

/// The same demand with its tuple normalised as in [`abelard_moves`].
pub fn normalize_demand(n: &Network, d: &Demand) -> Demand {
    match d {
        Demand::Cyl { i, tuple, atom } => {
            let mut t = tuple.clone();
            if let (Some(&first), Some(slot)) = (n.nodes.first(), t.get_mut(*i as usize)) {
                *slot = first;
            }
            Demand::Cyl {
                i: *i,
                tuple: t,
                atom: *atom,
            }
        }
        w => w.clone(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Heloise,
    Abelard,
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Heloise => "heloise",
            Player::Abelard => "abelard",
        })
    }
}

/// Round-bounded ranks: `rank[N]` is the largest `t <= k` such that
/// Héloïse survives `t` further rounds from `N`.
#[derive(Clone, Debug)]
pub struct Bounded {
    pub k: usize,
    pub rank: Vec<usize>,
    /// Least `t` with `rank_t = rank_{t+1}`, if reached within `k`.
    pub stabilized_at: Option<usize>,
}

impl Bounded {
    pub fn alive(&self, id: u32) -> bool {
        self.rank[id as usize] >= self.k
    }
}

/// One Jacobi step: alive networks all of whose demands have a live response.
fn step(arena: &Arena, alive: &[bool]) -> Vec<bool> {
    let open: Vec<bool> = arena.buckets.iter().map(|b| b.iter().any(|&m| alive[m as usize])).collect();
    (0..arena.len())
        .map(|id| alive[id] && arena.moves[id].iter().all(|&(_, b)| open[b as usize]))
        .collect()
}

/// Jacobi iteration `rank_{t+1} = {N : every demand has a response in rank_t}`.
pub fn solve_bounded(arena: &Arena, k: usize) -> Bounded {
    let len = arena.len();
    let mut alive = vec![true; len];
    let mut rank = vec![0usize; len];
    let mut stabilized_at = None;
    for t in 1..=k {
        let next = step(arena, &alive);
        if next == alive {
            stabilized_at = Some(t - 1);
            for id in 0..len {
                if alive[id] {
                    rank[id] = k;
                }
            }
            return Bounded { k, rank, stabilized_at };
        }
        for id in 0..len {
            if next[id] {
                rank[id] = t;
            }
        }
        alive = next;
    }
    Bounded { k, rank, stabilized_at }
}

/// The least `t` with `rank_t = rank_{t+1}`.
pub fn stabilization_rank(arena: &Arena) -> usize {
    let mut alive = vec![true; arena.len()];
    for t in 0.. {
        let next = step(arena, &alive);
        if next == alive {
            return t;
        }
        alive = next;
    }
    unreachable!()
}

/// Greatest fixed point for the unbounded game.
#[derive(Clone, Debug)]
pub struct Safety {
    pub alive: Vec<bool>,
    /// Dead networks in order of death, with the index (into
    /// `arena.moves[id]`) of a demand none of whose responses was alive.
    pub deaths: Vec<(u32, usize)>,
    pub death_index: Vec<Option<u32>>,
}

/// Worklist solver: a network dies once some demand has no live response.
pub fn solve_safety(arena: &Arena) -> Safety {
    let len = arena.len();
    // reverse edges: response -> bucket -> (network, demand slot)
    let mut in_bucket: Vec<Vec<u32>> = vec![Vec::new(); len];
    for (b, resp) in arena.buckets.iter().enumerate() {
        for &r in resp {
            in_bucket[r as usize].push(b as u32);
        }
    }
    let mut users: Vec<Vec<(u32, u32)>> = vec![Vec::new(); arena.buckets.len()];
    for (id, moves) in arena.moves.iter().enumerate() {
        for (slot, &(_, b)) in moves.iter().enumerate() {
            users[b as usize].push((id as u32, slot as u32));
        }
    }
    let mut count: Vec<u32> = arena.buckets.iter().map(|b| b.len() as u32).collect();
    let mut queue = std::collections::VecDeque::new();
    let mut alive = vec![true; len];
    let mut deaths = Vec::new();
    let mut death_index = vec![None; len];
    for id in 0..len {
        if let Some(slot) = arena.moves[id].iter().position(|&(_, b)| count[b as usize] == 0) {
            alive[id] = false;
            death_index[id] = Some(deaths.len() as u32);
            deaths.push((id as u32, slot));
            queue.push_back(id as u32);
        }
    }
    while let Some(dead) = queue.pop_front() {
        for &b in &in_bucket[dead as usize] {
            let c = &mut count[b as usize];
            *c -= 1;
            if *c != 0 {
                continue;
            }
            for &(src, slot) in &users[b as usize] {
                if alive[src as usize] {
                    alive[src as usize] = false;
                    death_index[src as usize] = Some(deaths.len() as u32);
                    deaths.push((src, slot as usize));
                    queue.push_back(src);
                }
            }
        }
    }
    Safety {
        alive,
        deaths,
        death_index,
    }
}

/// Whole-game verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GameReport {
    pub structure: String,
    pub m: usize,
    pub rounds: Rounds,
    pub reuse: bool,
    pub positions: usize,
    pub winner: Player,
    /// An atom for which every initial network loses, if Abelard wins.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refuting_atom: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stabilization_rank: Option<usize>,
}

/// First atom all of whose initial networks fail `alive`.
pub fn refuting_atom(arena: &Arena, s: &AtomStructure, alive: impl Fn(u32) -> bool) -> Option<Atom> {
    let arity = initial_arity(s);
    (0..s.len() as Atom).find(|&a| !arena.initial(a, arity).into_iter().any(&alive))
}

/// A solved game: arena plus whichever solution applies.
pub struct Solved {
    pub arena: Arena,
    pub bounded: Option<Bounded>,
    pub safety: Option<Safety>,
    pub report: GameReport,
}

impl Solved {
    pub fn alive(&self, id: u32) -> bool {
        match (&self.bounded, &self.safety) {
            (Some(b), _) => b.alive(id),
            (_, Some(s)) => s.alive[id as usize],
            _ => false,
        }
    }
}

pub fn solve(structure: &AtomStructure, cfg: &GameConfig) -> Result<Solved> {
    let arena = Arena::build(structure, cfg)?;
    let (bounded, safety, k_star) = match cfg.rounds {
        Rounds::Finite(k) => {
            let b = solve_bounded(&arena, k);
            let ks = b.stabilized_at;
            (Some(b), None, ks)
        }
        Rounds::Omega => (None, Some(solve_safety(&arena)), Some(stabilization_rank(&arena))),
    };
    let alive = |id: u32| match (&bounded, &safety) {
        (Some(b), _) => b.alive(id),
        (_, Some(s)) => s.alive[id as usize],
        _ => false,
    };
    let refute = refuting_atom(&arena, structure, alive);
    let report = GameReport {
        structure: structure.hash(),
        m: cfg.m,
        rounds: cfg.rounds,
        reuse: cfg.reuse,
        positions: arena.len(),
        winner: if refute.is_some() { Player::Abelard } else { Player::Heloise },
        refuting_atom: refute.map(|a| structure.names()[a as usize].clone()),
        stabilization_rank: k_star,
    };
    Ok(Solved {
        arena,
        bounded,
        safety,
        report,
    })
}

/// Fresh node used by extensions of `n` within budget `m`.
pub fn fresh_node(n: &Network, m: usize) -> Option<Node> {
    (0..m.min(256) as u16).map(|v| v as Node).find(|v| !n.contains(*v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::gen_rainbow;

    fn rainbow(g: usize, r: usize) -> AtomStructure {
        gen_rainbow(g, r).unwrap().into()
    }

    #[test]
    fn rounds_parse_and_print() {
        assert_eq!("omega".parse::<Rounds>().unwrap(), Rounds::Omega);
        assert_eq!("4".parse::<Rounds>().unwrap(), Rounds::Finite(4));
        assert!("x".parse::<Rounds>().is_err());
        assert_eq!(serde_json::to_string(&Rounds::Omega).unwrap(), "\"omega\"");
        assert_eq!(serde_json::from_str::<Rounds>("3").unwrap(), Rounds::Finite(3));
    }

    #[test]
    fn guards_fire() {
        let s = rainbow(1, 1);
        assert!(matches!(GameConfig::new(9, Rounds::Omega).check(&s), Err(Error::Guard { .. })));
        assert!(matches!(GameConfig::new(4, Rounds::Finite(13)).check(&s), Err(Error::Guard { .. })));
        assert!(GameConfig::new(2, Rounds::Omega).check(&s).is_err());
    }

    #[test]
    fn bounded_and_safety_agree_at_the_stabilization_rank() {
        let s = rainbow(2, 1);
        let arena = Arena::build(&s, &GameConfig::new(4, Rounds::Omega)).unwrap();
        let safety = solve_safety(&arena);
        let ks = stabilization_rank(&arena);
        let b = solve_bounded(&arena, ks + 1);
        for id in 0..arena.len() as u32 {
            assert_eq!(b.alive(id), safety.alive[id as usize]);
        }
    }

    #[test]
    fn ranks_are_antitone_in_k() {
        let s = rainbow(2, 1);
        let arena = Arena::build(&s, &GameConfig::new(4, Rounds::Omega)).unwrap();
        let b3 = solve_bounded(&arena, 3);
        let b2 = solve_bounded(&arena, 2);
        for id in 0..arena.len() as u32 {
            assert!(!b3.alive(id) || b2.alive(id));
        }
    }
}
