//! Triangle Ramsey numbers by exhaustive search over edge colourings.

use serde::Serialize;

use crate::error::{Error, Result};

pub const MAX_RAMSEY_N: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", content = "n", rename_all = "snake_case")]
pub enum RamseyOutcome {
    /// Every colouring of `K_n` has a monochromatic triangle, and `n` is least.
    Forced(usize),
    /// Some colouring of each `K_n`, `n <= n_max`, avoids monochromatic triangles.
    NoneUpTo(usize),
}

/// Least `n <= n_max` such that every `colors`-colouring of `K_n` contains a
/// monochromatic triangle.
pub fn triangle_ramsey(colors: usize, n_max: usize) -> Result<RamseyOutcome> {
    if colors == 0 {
        return Err(Error::invalid("at least one colour is needed"));
    }
    if n_max > MAX_RAMSEY_N {
        return Err(Error::guard("triangle_ramsey n_max", n_max as u128, MAX_RAMSEY_N as u128));
    }
    for n in 3..=n_max {
        if triangle_free_coloring(colors, n).is_none() {
            return Ok(RamseyOutcome::Forced(n));
        }
    }
    Ok(RamseyOutcome::NoneUpTo(n_max))
}

/// A colouring `c[u][v]` of `K_n` without monochromatic triangles, if any.
///
/// Vertices are added one at a time; per-colour neighbourhood masks make the
/// triangle test a single `and`. Colour symmetry is broken by never using a
/// colour larger than one plus the largest colour used so far.
pub fn triangle_free_coloring(colors: usize, n: usize) -> Option<Vec<Vec<u8>>> {
    if n > 16 || colors > 255 {
        return None;
    }
    let edges: Vec<(usize, usize)> = (1..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
    let mut adj = vec![vec![0u16; n]; colors];
    let mut col = vec![0u8; edges.len()];
    fn go(
        e: usize,
        edges: &[(usize, usize)],
        adj: &mut [Vec<u16>],
        col: &mut [u8],
        colors: usize,
        max_used: usize,
    ) -> bool {
        if e == edges.len() {
            return true;
        }
        let (u, v) = edges[e];
        let limit = (max_used + 1).min(colors);
        for c in 0..limit {
            if adj[c][u] & adj[c][v] != 0 {
                continue;
            }
            adj[c][u] |= 1 << v;
            adj[c][v] |= 1 << u;
            col[e] = c as u8;
            if go(e + 1, edges, adj, col, colors, max_used.max(c + 1)) {
                return true;
            }
            adj[c][u] &= !(1 << v);
            adj[c][v] &= !(1 << u);
        }
        false
    }
    if !go(0, &edges, &mut adj, &mut col, colors, 0) {
        return None;
    }
    let mut m = vec![vec![0u8; n]; n];
    for (e, &(u, v)) in edges.iter().enumerate() {
        m[u][v] = col[e];
        m[v][u] = col[e];
    }
    Some(m)
}
