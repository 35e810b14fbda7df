//! Reference solver that keeps the whole play: the state is the set of
//! networks played so far, and Abelard may attack any of them.
//!
//! Exponential; used to cross-check the memoryless solver on small `k`.

use std::collections::{BTreeSet, HashMap};

use crate::game::{initial_arity, Arena, Player};
use crate::structure::{Atom, AtomStructure};

/// Winner of the `k`-round game when Abelard may return to any earlier
/// network.
pub fn history_winner(arena: &Arena, s: &AtomStructure, k: usize) -> Player {
    let mut memo: HashMap<(BTreeSet<u32>, usize), bool> = HashMap::new();
    let arity = initial_arity(s);
    for a in 0..s.len() as Atom {
        let ok = arena
            .initial(a, arity)
            .into_iter()
            .any(|n| wins(arena, &BTreeSet::from([n]), k, &mut memo));
        if !ok {
            return Player::Abelard;
        }
    }
    Player::Heloise
}

/// Héloïse survives `t` more rounds from history `h`. Demands already
/// witnessed are skipped: answering one leaves the history unchanged, and
/// a history that survives `t` rounds survives `t - 1`.
fn wins(arena: &Arena, h: &BTreeSet<u32>, t: usize, memo: &mut HashMap<(BTreeSet<u32>, usize), bool>) -> bool {
    if t == 0 {
        return true;
    }
    let key = (h.clone(), t);
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut result = true;
    'outer: for &n in h {
        for (_, resp) in arena.moves_of(n) {
            let answered = resp.iter().any(|&m| {
                let mut next = h.clone();
                next.insert(m);
                wins(arena, &next, t - 1, memo)
            });
            if !answered {
                result = false;
                break 'outer;
            }
        }
    }
    memo.insert(key, result);
    result
}
