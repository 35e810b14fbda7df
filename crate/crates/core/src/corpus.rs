//! Exhaustive corpora of small validated atom structures, one per
//! isomorphism class, in a fixed enumeration order.

use std::collections::{BTreeMap, HashSet};

use crate::error::Result;
use crate::signature::{Kind, Signature, UnaryOp};
use crate::structure::{canonical_form, Atom, AtomStructure, CaAtomStructure, RaAtomStructure};

/// RA atom structures with one identity atom and at most `max_atoms` atoms
/// obeying the identity and cycle laws.
pub fn ra_structures(max_atoms: usize) -> Result<Vec<AtomStructure>> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for k in 1..=max_atoms {
        let mut names = vec!["Id".to_string()];
        names.extend((1..k).map(|i| ((b'a' + (i - 1) as u8) as char).to_string()));
        for conv in involutions(k) {
            let orbits = free_orbits(k, &conv);
            for mask in 0u64..(1 << orbits.len()) {
                let mut allowed = vec![false; k * k * k];
                for a in 0..k {
                    // Id ≤ a;ă and its rotations
                    for t in cycle_orbit((0, a as Atom, a as Atom), &conv) {
                        allowed[idx(k, t)] = true;
                    }
                }
                for (o, orbit) in orbits.iter().enumerate() {
                    if mask >> o & 1 == 1 {
                        for &t in orbit {
                            allowed[idx(k, t)] = true;
                        }
                    }
                }
                let s = RaAtomStructure::from_consistency(names.clone(), vec![0], conv.clone(), |a, b, c| {
                    allowed[idx(k, (a, b, c))]
                })?;
                push_new(AtomStructure::Ra(s), &mut out, &mut seen)?;
            }
        }
    }
    Ok(out)
}

/// Two-dimensional atom structures of `kind` (`Df` or `Ca`) with at most
/// `max_atoms` atoms: every pair of equivalences for `c0`, `c1` and, with
/// diagonals, every choice of `d01`.
pub fn ca2_structures(kind: Kind, max_atoms: usize) -> Result<Vec<AtomStructure>> {
    assert!(matches!(kind, Kind::Df | Kind::Ca), "two-dimensional Df or Ca only");
    let sig = Signature::new(kind, 2)?;
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for k in 1..=max_atoms {
        let names: Vec<String> = (0..k).map(|i| format!("a{i}")).collect();
        let parts = partitions(k);
        let diag_choices: Vec<u64> = if kind.has_diagonals() { (0..1u64 << k).collect() } else { vec![0] };
        for p0 in &parts {
            for p1 in &parts {
                for &d in &diag_choices {
                    let mut rel = BTreeMap::new();
                    rel.insert(UnaryOp::Cyl(0), classes_mask(p0));
                    rel.insert(UnaryOp::Cyl(1), classes_mask(p1));
                    let mut diags = BTreeMap::new();
                    if kind.has_diagonals() {
                        diags.insert((0, 1), d);
                        diags.insert((1, 0), d);
                    }
                    let s = CaAtomStructure::new(sig, names.clone(), rel, diags)?;
                    push_new(AtomStructure::Ca(s), &mut out, &mut seen)?;
                }
            }
        }
    }
    Ok(out)
}

fn push_new(s: AtomStructure, out: &mut Vec<AtomStructure>, seen: &mut HashSet<(usize, Vec<u8>)>) -> Result<()> {
    if !s.validate().is_empty() {
        return Ok(());
    }
    let (code, _) = canonical_form(&s)?;
    if seen.insert((s.len(), code)) {
        out.push(s);
    }
    Ok(())
}

fn idx(k: usize, (a, b, c): (Atom, Atom, Atom)) -> usize {
    (a as usize * k + b as usize) * k + c as usize
}

/// Closure of a triple under `(a,b,c) ↦ (ă,c,b)` and `(a,b,c) ↦ (b,č,ă)`.
fn cycle_orbit(t: (Atom, Atom, Atom), conv: &[Atom]) -> Vec<(Atom, Atom, Atom)> {
    let cv = |x: Atom| conv[x as usize];
    let mut orbit = vec![t];
    let mut i = 0;
    while i < orbit.len() {
        let (a, b, c) = orbit[i];
        for u in [(cv(a), c, b), (b, cv(c), cv(a))] {
            if !orbit.contains(&u) {
                orbit.push(u);
            }
        }
        i += 1;
    }
    orbit.sort_unstable();
    orbit
}

fn free_orbits(k: usize, conv: &[Atom]) -> Vec<Vec<(Atom, Atom, Atom)>> {
    let mut orbits: Vec<Vec<(Atom, Atom, Atom)>> = Vec::new();
    let mut done = HashSet::new();
    for a in 1..k as Atom {
        for b in 1..k as Atom {
            for c in 1..k as Atom {
                if done.contains(&(a, b, c)) {
                    continue;
                }
                let o = cycle_orbit((a, b, c), conv);
                done.extend(o.iter().copied());
                orbits.push(o);
            }
        }
    }
    orbits
}

/// Converse maps fixing the identity atom 0.
fn involutions(k: usize) -> Vec<Vec<Atom>> {
    fn go(rest: &[Atom], cur: &mut Vec<Atom>, out: &mut Vec<Vec<Atom>>) {
        let Some((&first, tail)) = rest.split_first() else {
            out.push(cur.clone());
            return;
        };
        cur[first as usize] = first;
        go(tail, cur, out);
        for (p, &partner) in tail.iter().enumerate() {
            cur[first as usize] = partner;
            cur[partner as usize] = first;
            let remaining: Vec<Atom> = tail.iter().enumerate().filter(|&(q, _)| q != p).map(|(_, &x)| x).collect();
            go(&remaining, cur, out);
            cur[partner as usize] = partner;
        }
        cur[first as usize] = first;
    }
    let mut out = Vec::new();
    let atoms: Vec<Atom> = (1..k as Atom).collect();
    go(&atoms, &mut (0..k as Atom).collect(), &mut out);
    out
}

/// Set partitions of `0..k` as restricted growth strings.
fn partitions(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; k];
    fn go(i: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max + 1 {
            cur[i] = b;
            go(i + 1, max.max(b), cur, out);
        }
    }
    if k == 0 {
        return vec![Vec::new()];
    }
    go(1, 0, &mut cur, &mut out);
    out
}

fn classes_mask(p: &[usize]) -> Vec<u64> {
    (0..p.len())
        .map(|a| (0..p.len()).filter(|&b| p[b] == p[a]).fold(0u64, |m, b| m | 1 << b))
        .collect()
}
