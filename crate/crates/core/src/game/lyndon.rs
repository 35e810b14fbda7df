//! Lyndon conditions: the `k`-th condition holds when Héloïse wins the
//! `k`-round game with `n + k` nodes and no node reuse.

use serde::Serialize;

use crate::error::Result;
use crate::game::{initial_arity, solve, GameConfig, Player, Rounds};
use crate::structure::AtomStructure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", content = "k", rename_all = "snake_case")]
pub enum LyndonOutcome {
    PassUpTo(usize),
    FailAt(usize),
}

pub fn check_lyndon(s: &AtomStructure, k_max: usize, jobs: usize) -> Result<LyndonOutcome> {
    let n = initial_arity(s);
    for k in 1..=k_max {
        let cfg = GameConfig::new(n + k, Rounds::Finite(k)).jobs(jobs);
        if solve(s, &cfg)?.report.winner == Player::Abelard {
            return Ok(LyndonOutcome::FailAt(k));
        }
    }
    Ok(LyndonOutcome::PassUpTo(k_max))
}
