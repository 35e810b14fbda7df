//! Search for complete representations over small finite bases.
//!
//! A representation on base `b` is a labelling of the tuples over `b` points
//! by atoms that is consistent and saturated (every demand has a witness).
//! Labellings are grown point by point; every restriction of a
//! representation is a consistent network, so the layers of consistent
//! networks up to renaming cover all candidates.

use std::collections::{BTreeMap, HashSet};
use std::ops::RangeInclusive;
use std::time::Instant;

use serde::Serialize;

use super::verify::{verify_complete_representation, RepresentationCandidate, Verdict};
use crate::error::{Error, Result};
use crate::game::{abelard_moves, canonical};
use crate::network::{Checker, Network, Node};
use crate::ramsey::{triangle_ramsey, RamseyOutcome, MAX_RAMSEY_N};
use crate::structure::{complex_algebra, is_rainbow, AtomStructure};

pub const MAX_RA_BASE: usize = 10;
pub const MAX_CA_BASE: usize = 6;
/// Consistent networks kept per layer.
pub const MAX_LAYER: usize = 500_000;

#[derive(Clone, Debug, Serialize)]
pub struct SizeResult {
    pub base: usize,
    /// Consistent labellings of this size, up to renaming points.
    pub consistent: usize,
    pub saturated: usize,
    pub found: bool,
}

/// The green-witness argument for rainbow structures: around any point the
/// `G` greens have distinct witnesses, every edge between two of them is
/// red, and `G ≥ R(3; reds)` forces a monochromatic red triangle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    pub greens: usize,
    pub reds: usize,
    pub ramsey: usize,
    pub forced: [String; 3],
    pub argument: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SearchOutcome {
    Found { base: usize },
    /// No representation on any base: either a rainbow obstruction, or no
    /// consistent network with `empty_at` points exists.
    None {
        #[serde(skip_serializing_if = "Option::is_none")]
        empty_at: Option<usize>,
    },
    /// No representation on the tested sizes; larger bases untested.
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub structure: String,
    pub outcome: SearchOutcome,
    pub sizes: Vec<SizeResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidate: Option<RepresentationCandidate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<Obstruction>,
    /// Saturated labellings rejected by verification.
    pub rejected: usize,
    /// The time budget ran out; `sizes` lists what was completed.
    pub timed_out: bool,
}

/// The rainbow obstruction when it applies to `s`.
pub fn rainbow_obstruction(s: &AtomStructure) -> Result<Option<Obstruction>> {
    let Some((greens, reds)) = s.as_ra().and_then(is_rainbow) else {
        return Ok(None);
    };
    let RamseyOutcome::Forced(r) = triangle_ramsey(reds, MAX_RAMSEY_N)? else {
        return Ok(None);
    };
    if greens < r {
        return Ok(None);
    }
    let red = if reds == 1 { "r1".to_string() } else { "rj".to_string() };
    Ok(Some(Obstruction {
        greens,
        reds,
        ramsey: r,
        forced: [red.clone(), red.clone(), red],
        argument: format!(
            "any point x has witnesses z_0..z_{} with (x, z_i) in g_i, since Id <= g_i;g_i; \
             an edge (z_i, z_j) is neither Id (i != j) nor green (no all-green triangle), so it is red; \
             {} points with edges in {} red colour(s) contain a monochromatic triangle, which is forbidden",
            greens - 1,
            greens,
            reds
        ),
    }))
}

fn saturated(ck: &Checker<'_>, n: &Network) -> bool {
    abelard_moves(ck, n).iter().all(|d| ck.satisfied(n, d))
}

fn candidate_of(s: &AtomStructure, n: &Network) -> RepresentationCandidate {
    let mut atoms: BTreeMap<String, Vec<Vec<u8>>> = s.names().iter().map(|a| (a.clone(), Vec::new())).collect();
    for (idx, t) in n.tuples().enumerate() {
        atoms.get_mut(&s.names()[n.labels[idx] as usize]).expect("atom").push(t);
    }
    RepresentationCandidate { base: n.len(), atoms }
}

/// Search over the base sizes in `bases`, ascending; every candidate is
/// verified before it is returned.
pub fn find_representation(s: &AtomStructure, bases: RangeInclusive<usize>) -> Result<SearchReport> {
    find_representation_within(s, bases, None)
}

/// As [`find_representation`], giving up (inconclusive) at `deadline`.
pub fn find_representation_within(
    s: &AtomStructure,
    bases: RangeInclusive<usize>,
    deadline: Option<Instant>,
) -> Result<SearchReport> {
    let late = || deadline.is_some_and(|d| Instant::now() >= d);
    let guard = match s {
        AtomStructure::Ra(_) => MAX_RA_BASE,
        AtomStructure::Ca(_) => MAX_CA_BASE,
    };
    let (lo, hi) = (*bases.start(), *bases.end());
    if lo == 0 || lo > hi {
        return Err(Error::invalid(format!("base range {lo}..={hi}")));
    }
    if hi > guard {
        return Err(Error::guard("representation base", hi as u128, guard as u128));
    }
    let diags = s.validate();
    if !diags.is_empty() {
        return Err(Error::invalid(format!(
            "structure does not validate: {}",
            diags.messages().next().unwrap_or_default()
        )));
    }
    let algebra = complex_algebra(s)?;
    let ck = Checker::new(s);
    let obstruction = rainbow_obstruction(s)?;
    let mut report = SearchReport {
        structure: s.hash(),
        outcome: SearchOutcome::Inconclusive,
        sizes: Vec::new(),
        candidate: None,
        verdict: None,
        obstruction: None,
        rejected: 0,
        timed_out: false,
    };
    let mut layer = vec![Network::empty(ck.arity())];
    for size in 1..=hi {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for n in &layer {
            if late() {
                report.timed_out = true;
                report.outcome = SearchOutcome::Inconclusive;
                return Ok(report);
            }
            for grown in ck.grow(n, (size - 1) as Node) {
                let (c, _) = canonical(&grown);
                if seen.insert(c.clone()) {
                    next.push(c);
                    if next.len() > MAX_LAYER {
                        return Err(Error::guard("representation layer", next.len() as u128, MAX_LAYER as u128));
                    }
                }
            }
        }
        layer = next;
        if layer.is_empty() && report.outcome == SearchOutcome::Inconclusive {
            report.outcome = SearchOutcome::None { empty_at: Some(size) };
        }
        if size < lo {
            continue;
        }
        let mut row = SizeResult {
            base: size,
            consistent: layer.len(),
            saturated: 0,
            found: false,
        };
        for n in &layer {
            if !saturated(&ck, n) {
                continue;
            }
            row.saturated += 1;
            let cand = candidate_of(s, n);
            let v = verify_complete_representation(&algebra, s.names(), &cand)?;
            if v.complete {
                row.found = true;
                report.candidate = Some(cand);
                report.verdict = Some(v);
                break;
            }
            report.rejected += 1;
        }
        let found = row.found;
        report.sizes.push(row);
        if found {
            report.outcome = SearchOutcome::Found { base: size };
            return Ok(report);
        }
    }
    if let Some(ob) = obstruction {
        report.obstruction = Some(ob);
        if report.outcome == SearchOutcome::Inconclusive {
            report.outcome = SearchOutcome::None { empty_at: None };
        }
    }
    // an empty layer above an untested size proves nothing about that size
    if let SearchOutcome::None { empty_at: Some(_) } = report.outcome {
        if lo > 1 && report.obstruction.is_none() {
            report.outcome = SearchOutcome::Inconclusive;
        }
    }
    Ok(report)
}
