//! Winning-strategy certificates and their independent replay.
//!
//! A Héloïse certificate is a memoryless strategy: for every reachable
//! network and every demand on it that the network does not witness, the
//! response played and the renaming onto the canonical next position. An
//! Abelard certificate names an atom, lists every initial network for it,
//! and gives each position a killing demand and a rank; every response to
//! that demand must have strictly smaller rank.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::arena::is_initial_for;
use crate::game::{answers, attacks, canonical, fresh_node, initial_arity, normalize_demand, Move, Player, Rounds, Solved};
use crate::network::{Checker, Demand, Network, Node};
use crate::structure::{Atom, AtomStructure};

pub const FORMAT: &str = "cylgame-certificate/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub format: String,
    pub structure: String,
    pub m: usize,
    pub rounds: Rounds,
    pub reuse: bool,
    pub winner: Player,
    pub networks: Vec<Network>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heloise: Option<HeloiseStrategy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abelard: Option<AbelardStrategy>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeloiseStrategy {
    pub initial: Vec<InitialMove>,
    pub moves: Vec<Response>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialMove {
    pub atom: String,
    pub network: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Response {
    pub network: u32,
    pub demand: Demand,
    /// Witness node named by the move.
    pub node: Node,
    pub response: Network,
    /// `relabel[p]`: node of the next position for the response's node at
    /// position `p`.
    pub relabel: Vec<Node>,
    pub next: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbelardStrategy {
    pub atom: String,
    pub initial: Vec<u32>,
    pub moves: Vec<Attack>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Attack {
    pub network: u32,
    pub demand: Demand,
    pub node: Node,
    pub rank: u32,
}

impl Certificate {
    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Builds the certificate for the winner of a solved game.
    pub fn from_solution(s: &AtomStructure, solved: &Solved) -> Result<Certificate> {
        let mut b = Builder {
            solved,
            ids: HashMap::new(),
            networks: Vec::new(),
        };
        let r = &solved.report;
        let (heloise, abelard) = match r.winner {
            Player::Heloise => (Some(b.heloise(s)?), None),
            Player::Abelard => (None, Some(b.abelard(s)?)),
        };
        Ok(Certificate {
            format: FORMAT.into(),
            structure: s.hash(),
            m: r.m,
            rounds: r.rounds,
            reuse: r.reuse,
            winner: r.winner,
            networks: b.networks,
            heloise,
            abelard,
        })
    }
}

struct Builder<'a> {
    solved: &'a Solved,
    ids: HashMap<u32, u32>,
    networks: Vec<Network>,
}

impl Builder<'_> {
    fn local(&mut self, arena_id: u32) -> u32 {
        if let Some(&l) = self.ids.get(&arena_id) {
            return l;
        }
        let l = self.networks.len() as u32;
        self.networks.push(self.solved.arena.networks[arena_id as usize].clone());
        self.ids.insert(arena_id, l);
        l
    }

    /// Preference among responses: largest rank (bounded) or alive (ω).
    fn score(&self, id: u32) -> usize {
        match (&self.solved.bounded, &self.solved.safety) {
            (Some(b), _) => b.rank[id as usize],
            (_, Some(sf)) => sf.alive[id as usize] as usize,
            _ => 0,
        }
    }

    fn heloise(&mut self, s: &AtomStructure) -> Result<HeloiseStrategy> {
        let arena = &self.solved.arena;
        let arity = initial_arity(s);
        let depth_limit = match self.solved.report.rounds {
            Rounds::Finite(k) => k,
            Rounds::Omega => usize::MAX,
        };
        let mut initial = Vec::new();
        let mut queue = VecDeque::new();
        let mut depth: HashMap<u32, usize> = HashMap::new();
        for a in 0..s.len() as Atom {
            let best = arena
                .initial(a, arity)
                .into_iter()
                .filter(|&i| self.solved.alive(i))
                .max_by_key(|&i| (self.score(i), std::cmp::Reverse(i)))
                .ok_or_else(|| Error::Certificate("winner has no initial move".into()))?;
            initial.push(InitialMove {
                atom: s.names()[a as usize].clone(),
                network: self.local(best),
            });
            if depth.insert(best, 0).is_none() {
                queue.push_back(best);
            }
        }
        let ck = Checker::new(s);
        let mut moves = Vec::new();
        while let Some(id) = queue.pop_front() {
            let t = depth[&id];
            if t >= depth_limit {
                continue;
            }
            let n = arena.networks[id as usize].clone();
            let here = self.local(id);
            for (mv, resp) in arena.moves_of(id) {
                let choice = resp
                    .iter()
                    .copied()
                    .max_by_key(|&r| (self.score(r), std::cmp::Reverse(r)))
                    .ok_or_else(|| Error::Certificate("a demand has no response".into()))?;
                let target = &arena.networks[choice as usize];
                let m = answers(&ck, &n, mv)?
                    .into_iter()
                    .find(|m| &canonical(m).0 == target)
                    .expect("response recorded in the move graph");
                let (_, relabel) = canonical(&m);
                moves.push(Response {
                    network: here,
                    demand: mv.demand.clone(),
                    node: mv.node,
                    response: m,
                    relabel,
                    next: self.local(choice),
                });
                if let std::collections::hash_map::Entry::Vacant(e) = depth.entry(choice) {
                    e.insert(t + 1);
                    queue.push_back(choice);
                }
            }
        }
        Ok(HeloiseStrategy { initial, moves })
    }

    fn abelard(&mut self, s: &AtomStructure) -> Result<AbelardStrategy> {
        let arena = &self.solved.arena;
        let atom = self
            .solved
            .report
            .refuting_atom
            .clone()
            .ok_or_else(|| Error::Certificate("no refuting atom".into()))?;
        let a = s.names().iter().position(|n| *n == atom).expect("atom name") as Atom;
        // rank and killing slot per dead network
        let kill: HashMap<u32, (u32, usize)> = match (&self.solved.bounded, &self.solved.safety) {
            (Some(b), _) => (0..arena.len() as u32)
                .filter(|&i| !b.alive(i))
                .map(|i| {
                    let r = b.rank[i as usize];
                    let slot = arena
                        .moves_of(i)
                        .position(|(_, resp)| resp.iter().all(|&m| b.rank[m as usize] < r))
                        .expect("a dead network has a killing demand");
                    (i, (r as u32, slot))
                })
                .collect(),
            (_, Some(sf)) => sf
                .deaths
                .iter()
                .map(|&(i, slot)| (i, (sf.death_index[i as usize].expect("dead"), slot)))
                .collect(),
            _ => HashMap::new(),
        };
        let initial_ids = arena.initial(a, initial_arity(s));
        let mut queue: VecDeque<u32> = initial_ids.iter().copied().collect();
        let mut seen: HashMap<u32, ()> = queue.iter().map(|&i| (i, ())).collect();
        let initial: Vec<u32> = initial_ids.iter().map(|&i| self.local(i)).collect();
        let mut moves = Vec::new();
        while let Some(id) = queue.pop_front() {
            let &(rank, slot) = kill
                .get(&id)
                .ok_or_else(|| Error::Certificate("Abelard strategy reaches a live network".into()))?;
            let here = self.local(id);
            let (mv, resp) = arena.moves_of(id).nth(slot).expect("killing slot");
            moves.push(Attack {
                network: here,
                demand: mv.demand.clone(),
                node: mv.node,
                rank,
            });
            for &r in resp {
                if seen.insert(r, ()).is_none() {
                    self.local(r);
                    queue.push_back(r);
                }
            }
        }
        Ok(AbelardStrategy { atom, initial, moves })
    }
}

/// What replay established.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayReport {
    pub winner: Player,
    pub positions: usize,
    /// Rounds checked: `k`, or the longest strategy path for ω.
    pub rounds_checked: usize,
}

fn reject(round: usize, msg: impl std::fmt::Display) -> Error {
    Error::Certificate(format!("round {round}: {msg}"))
}

/// Checks a certificate against the structure without using any solver
/// state.
pub fn replay(s: &AtomStructure, cert: &Certificate) -> Result<ReplayReport> {
    if cert.format != FORMAT {
        return Err(Error::Certificate(format!("unknown format {:?}", cert.format)));
    }
    if cert.structure != s.hash() {
        return Err(Error::Certificate("certificate is for a different structure".into()));
    }
    let ck = Checker::new(s);
    for (i, n) in cert.networks.iter().enumerate() {
        if let Some(v) = ck.check(n) {
            return Err(Error::Certificate(format!("network {i} is inconsistent: {}", v.constraint)));
        }
        if n.nodes.iter().any(|&x| x as usize >= cert.m) {
            return Err(Error::Certificate(format!("network {i} uses a node outside the budget")));
        }
    }
    let net = |i: u32| {
        cert.networks
            .get(i as usize)
            .ok_or_else(|| Error::Certificate(format!("network index {i} out of range")))
    };
    match (cert.winner, &cert.heloise, &cert.abelard) {
        (Player::Heloise, Some(h), None) => replay_heloise(s, &ck, cert, h, &net),
        (Player::Abelard, None, Some(a)) => replay_abelard(s, &ck, cert, a, &net),
        _ => Err(Error::Certificate("winner does not match the strategy given".into())),
    }
}

fn replay_heloise<'c>(
    s: &AtomStructure,
    ck: &Checker<'_>,
    cert: &'c Certificate,
    h: &HeloiseStrategy,
    net: &dyn Fn(u32) -> Result<&'c Network>,
) -> Result<ReplayReport> {
    let arity = initial_arity(s);
    let mut table: BTreeMap<(u32, Move), &Response> = BTreeMap::new();
    for r in &h.moves {
        let n = net(r.network)?;
        let mv = Move {
            demand: normalize_demand(n, &r.demand),
            node: r.node,
        };
        table.insert((r.network, mv), r);
    }
    let mut depth: HashMap<u32, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    for a in 0..s.len() {
        let name = &s.names()[a];
        let mv = h
            .initial
            .iter()
            .find(|i| &i.atom == name)
            .ok_or_else(|| reject(0, format!("no initial network for atom {name}")))?;
        let n = net(mv.network)?;
        if n.len() > arity || !is_initial_for(n, a as Atom) {
            return Err(reject(0, format!("network {} is not an initial network for {name}", mv.network)));
        }
        if depth.insert(mv.network, 0).is_none() {
            queue.push_back(mv.network);
        }
    }
    let limit = match cert.rounds {
        Rounds::Finite(k) => k,
        Rounds::Omega => usize::MAX,
    };
    let mut longest = 0;
    while let Some(id) = queue.pop_front() {
        let t = depth[&id];
        longest = longest.max(t);
        if t >= limit {
            continue;
        }
        let n = net(id)?;
        for mv in attacks(ck, n, cert.m, cert.reuse) {
            if ck.satisfied(n, &mv.demand) {
                continue;
            }
            let r = table
                .get(&(id, mv.clone()))
                .ok_or_else(|| reject(t + 1, format!("no response to {mv:?} on network {id}")))?;
            check_response(ck, cert, n, &mv.demand, r).map_err(|e| reject(t + 1, e))?;
            if let std::collections::hash_map::Entry::Vacant(e) = depth.entry(r.next) {
                e.insert(t + 1);
                queue.push_back(r.next);
            }
        }
    }
    Ok(ReplayReport {
        winner: Player::Heloise,
        positions: depth.len(),
        rounds_checked: if limit == usize::MAX { longest } else { limit },
    })
}

fn check_response(ck: &Checker<'_>, cert: &Certificate, n: &Network, d: &Demand, r: &Response) -> std::result::Result<(), String> {
    let m = &r.response;
    if let Some(v) = ck.check(m) {
        return Err(format!("response is inconsistent: {}", v.constraint));
    }
    if m.nodes.iter().any(|&x| x as usize >= cert.m) {
        return Err("response exceeds the node budget".into());
    }
    let z = r.node;
    if !ck.witnessed_by(m, d, z) || Checker::fixed_nodes(d).contains(&z) {
        return Err(format!("node {z} does not witness the demand"));
    }
    if !cert.reuse && n.contains(z) {
        return Err(format!("node {z} is reused without the reuse option"));
    }
    let mut expect = n.nodes.clone();
    if !expect.contains(&z) {
        expect.push(z);
        expect.sort_unstable();
    }
    let keep: Vec<Node> = n.nodes.iter().copied().filter(|&x| x != z).collect();
    if m.nodes != expect || m.restrict(&keep) != n.restrict(&keep) {
        return Err("response changes the network away from the witness node".into());
    }
    let next = cert.networks.get(r.next as usize).ok_or("next index out of range")?;
    if r.relabel.len() != m.len() {
        return Err("relabelling has the wrong length".into());
    }
    let mut sorted = r.relabel.clone();
    sorted.sort_unstable();
    if sorted != next.nodes {
        return Err("relabelling is not onto the next position".into());
    }
    for t in m.tuples() {
        let tn: Vec<Node> = t.iter().map(|&x| r.relabel[m.position(x).expect("node")]).collect();
        if next.get(&tn) != Some(m.label(&t)) {
            return Err("relabelled response differs from the next position".into());
        }
    }
    Ok(())
}

fn replay_abelard<'c>(
    s: &AtomStructure,
    ck: &Checker<'_>,
    cert: &'c Certificate,
    a: &AbelardStrategy,
    net: &dyn Fn(u32) -> Result<&'c Network>,
) -> Result<ReplayReport> {
    let atom = s
        .names()
        .iter()
        .position(|n| *n == a.atom)
        .ok_or_else(|| reject(0, format!("unknown atom {}", a.atom)))? as Atom;
    let index: HashMap<&Network, u32> = cert.networks.iter().enumerate().map(|(i, n)| (n, i as u32)).collect();
    let attack_of: HashMap<u32, &Attack> = a.moves.iter().map(|m| (m.network, m)).collect();
    let bound = match cert.rounds {
        Rounds::Finite(k) => Some(k as u32),
        Rounds::Omega => None,
    };
    // every initial network for the atom, enumerated here from scratch
    let mut layer = vec![Network::empty(ck.arity())];
    let mut initial = Vec::new();
    for size in 1..=initial_arity(s) {
        let mut next = Vec::new();
        for n in &layer {
            for g in ck.grow(n, (size - 1) as Node) {
                let c = canonical(&g).0;
                if !next.contains(&c) {
                    next.push(c);
                }
            }
        }
        initial.extend(next.iter().filter(|n| is_initial_for(n, atom)).cloned());
        layer = next;
    }
    let mut queue = VecDeque::new();
    let mut depth: HashMap<u32, usize> = HashMap::new();
    for n in &initial {
        let id = *index
            .get(n)
            .ok_or_else(|| reject(0, "an initial network is missing from the certificate"))?;
        if !a.initial.contains(&id) {
            return Err(reject(0, format!("initial network {id} is not listed")));
        }
        let at = attack_of.get(&id).ok_or_else(|| reject(0, format!("no attack on initial network {id}")))?;
        if bound.is_some_and(|k| at.rank >= k) {
            return Err(reject(0, format!("initial network {id} has rank {} outside the round bound", at.rank)));
        }
        if depth.insert(id, 0).is_none() {
            queue.push_back(id);
        }
    }
    let mut longest = 0;
    while let Some(id) = queue.pop_front() {
        let t = depth[&id];
        longest = longest.max(t);
        let n = net(id)?;
        let at = attack_of.get(&id).ok_or_else(|| reject(t, format!("no attack on network {id}")))?;
        ck.demand_legal(n, &at.demand).map_err(|e| reject(t + 1, e))?;
        let mv = Move {
            demand: at.demand.clone(),
            node: at.node,
        };
        let legal = attacks(ck, n, cert.m, cert.reuse).contains(&Move {
            demand: normalize_demand(n, &at.demand),
            node: at.node,
        });
        if !legal {
            return Err(reject(t + 1, format!("attack on network {id} is not a legal move")));
        }
        for m in answers(ck, n, &mv)? {
            let c = canonical(&m).0;
            let rid = *index
                .get(&c)
                .ok_or_else(|| reject(t + 1, format!("a response to the attack on {id} is not covered")))?;
            let next = attack_of
                .get(&rid)
                .ok_or_else(|| reject(t + 1, format!("no attack on network {rid}")))?;
            if next.rank >= at.rank {
                return Err(reject(t + 1, format!("rank does not decrease from network {id} to {rid}")));
            }
            if let std::collections::hash_map::Entry::Vacant(e) = depth.entry(rid) {
                e.insert(t + 1);
                queue.push_back(rid);
            }
        }
    }
    Ok(ReplayReport {
        winner: Player::Abelard,
        positions: depth.len(),
        rounds_checked: longest + 1,
    })
}

/// Plays Héloïse's strategy against demands typed on `input`.
///
/// Commands: `atom NAME` starts a play; `w X Y LEFT RIGHT` and
/// `c I X0 .. Xn-1 ATOM` are demands on the current network, optionally
/// followed by `@ Z` naming the witness node (default: least fresh node);
/// `show` prints it; `quit` ends. The current network is replaced by the canonical next
/// position after every answer.
pub fn interactive(s: &AtomStructure, cert: &Certificate, input: impl BufRead, mut out: impl Write) -> Result<()> {
    let h = cert
        .heloise
        .as_ref()
        .ok_or_else(|| Error::Certificate("interactive play needs a Héloïse certificate".into()))?;
    let ck = Checker::new(s);
    let names = s.names();
    let atom = |tok: &str| -> Option<Atom> { names.iter().position(|n| n == tok).map(|p| p as Atom) };
    let mut current: Option<u32> = None;
    let mut round = 0usize;
    writeln!(out, "structure {} ({} atoms); type 'atom NAME' to start", cert.structure, names.len())?;
    for line in input.lines() {
        let line = line?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        let Some(&verb) = toks.first() else { continue };
        match (verb, current) {
            ("quit", _) => break,
            ("atom", _) => match toks.get(1).copied().and_then(|t| h.initial.iter().find(|i| i.atom == t)) {
                Some(mv) => {
                    current = Some(mv.network);
                    round = 0;
                    write!(out, "{}", cert.networks[mv.network as usize].dump(names))?;
                }
                None => writeln!(out, "unknown atom")?,
            },
            ("show", Some(id)) => write!(out, "{}", cert.networks[id as usize].dump(names))?,
            ("w" | "c", Some(id)) => {
                let n = &cert.networks[id as usize];
                let (body, at) = match toks.iter().position(|&t| t == "@") {
                    Some(p) => (&toks[..p], toks.get(p + 1).and_then(|t| t.parse::<Node>().ok())),
                    None => (&toks[..], fresh_node(n, cert.m)),
                };
                let d = match parse_demand(body, &atom) {
                    Some(d) => normalize_demand(n, &d),
                    None => {
                        writeln!(out, "could not parse demand")?;
                        continue;
                    }
                };
                if let Err(e) = ck.demand_legal(n, &d) {
                    writeln!(out, "{e}")?;
                    continue;
                }
                if ck.satisfied(n, &d) {
                    writeln!(out, "already witnessed")?;
                    continue;
                }
                let Some(z) = at else {
                    writeln!(out, "no witness node available")?;
                    continue;
                };
                match h
                    .moves
                    .iter()
                    .find(|r| r.network == id && r.node == z && normalize_demand(n, &r.demand) == d)
                {
                    Some(r) => {
                        round += 1;
                        writeln!(out, "round {round}: response")?;
                        write!(out, "{}", r.response.dump(names))?;
                        current = Some(r.next);
                        if let Rounds::Finite(k) = cert.rounds {
                            if round >= k {
                                writeln!(out, "Héloïse survived {k} rounds")?;
                                current = None;
                            }
                        }
                    }
                    None => writeln!(out, "certificate has no response to that demand")?,
                }
            }
            (_, None) => writeln!(out, "start with 'atom NAME'")?,
            _ => writeln!(out, "unknown command")?,
        }
    }
    Ok(())
}

fn parse_demand(toks: &[&str], atom: &dyn Fn(&str) -> Option<Atom>) -> Option<Demand> {
    let node = |t: &str| t.parse::<Node>().ok();
    match toks[0] {
        "w" if toks.len() == 5 => Some(Demand::Witness {
            x: node(toks[1])?,
            y: node(toks[2])?,
            left: atom(toks[3])?,
            right: atom(toks[4])?,
        }),
        "c" if toks.len() >= 4 => {
            let i = toks[1].parse().ok()?;
            let tuple = toks[2..toks.len() - 1].iter().map(|t| node(t)).collect::<Option<Vec<_>>>()?;
            Some(Demand::Cyl {
                i,
                tuple,
                atom: atom(toks[toks.len() - 1])?,
            })
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{solve, GameConfig};
    use crate::structure::gen_rainbow;

    #[test]
    fn certificates_replay_and_tampering_is_caught() {
        let s: AtomStructure = gen_rainbow(2, 1).unwrap().into();
        for rounds in [Rounds::Finite(2), Rounds::Omega] {
            let solved = solve(&s, &GameConfig::new(4, rounds).reuse(rounds == Rounds::Omega)).unwrap();
            let cert = Certificate::from_solution(&s, &solved).unwrap();
            let rep = replay(&s, &cert).unwrap();
            assert_eq!(rep.winner, solved.report.winner);
            let back = Certificate::from_json_str(&cert.to_json_string().unwrap()).unwrap();
            assert_eq!(back, cert);
            let mut bad = cert.clone();
            if let Some(h) = bad.heloise.as_mut() {
                if h.moves.is_empty() {
                    continue;
                }
                h.moves.remove(0);
            } else if let Some(a) = bad.abelard.as_mut() {
                for m in &mut a.moves {
                    m.rank = 0;
                }
            }
            assert!(matches!(replay(&s, &bad), Err(Error::Certificate(_))));
        }
    }
}
