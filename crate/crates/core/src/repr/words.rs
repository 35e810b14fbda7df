//! Substitution-cylindrifier words, their partial maps, and `N⁺`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use super::CylindricOps;
use crate::error::{Error, Result};
use crate::network::Network;
use crate::structure::Atom;

/// Largest dimension for which `s_ā` words are searched.
pub const MAX_WORD_DIM: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScLetter {
    /// `s_i^j`
    S(u8, u8),
    C(u8),
}

/// A word over `{s_i^j, c_i}`, read left to right; as an operator the
/// rightmost letter acts first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ScWord(pub Vec<ScLetter>);

impl fmt::Display for ScWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| match l {
                ScLetter::S(i, j) => format!("s{i}^{j}"),
                ScLetter::C(i) => format!("c{i}"),
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

impl Serialize for ScWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `ŵ`: `ε ↦ Id`, `w s_i^j ↦ ŵ ∘ [i|j]`, `w c_i ↦ ŵ ↾ (m ∖ {i})`.
pub fn word_map(w: &ScWord, m: usize) -> Vec<Option<u8>> {
    let mut map: Vec<Option<u8>> = (0..m as u8).map(Some).collect();
    for &l in &w.0 {
        match l {
            ScLetter::S(i, j) => map[i as usize] = map[j as usize],
            ScLetter::C(i) => map[i as usize] = None,
        }
    }
    map
}

/// Evaluate `w` on `x`, rightmost letter first.
pub fn eval_word<C: CylindricOps + ?Sized>(c: &C, w: &ScWord, x: &C::E) -> C::E {
    w.0.iter().rev().fold(x.clone(), |acc, &l| match l {
        ScLetter::S(i, j) => c.replace(i as usize, j as usize, &acc),
        ScLetter::C(i) => c.cyl(i as usize, &acc),
    })
}

/// Breadth-first tree of the total maps reachable from the identity by
/// replacement letters.
struct WordTree {
    m: usize,
    states: Vec<Vec<u8>>,
    parent: Vec<Option<(usize, ScLetter)>>,
}

impl WordTree {
    fn build(m: usize) -> Self {
        let start: Vec<u8> = (0..m as u8).collect();
        let mut states = vec![start.clone()];
        let mut parent = vec![None];
        let mut seen: HashMap<Vec<u8>, usize> = HashMap::from([(start, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            for i in 0..m as u8 {
                for j in 0..m as u8 {
                    if i == j {
                        continue;
                    }
                    let mut next = states[k].clone();
                    next[i as usize] = next[j as usize];
                    if !seen.contains_key(&next) {
                        seen.insert(next.clone(), states.len());
                        states.push(next);
                        parent.push(Some((k, ScLetter::S(i, j))));
                        queue.push_back(states.len() - 1);
                    }
                }
            }
        }
        WordTree { m, states, parent }
    }

    /// Shortest word whose map agrees with `a` on `0..a.len()`.
    fn find(&self, a: &[u8]) -> Option<ScWord> {
        let k = self.states.iter().position(|s| s[..a.len()] == *a)?;
        let mut letters = Vec::new();
        let mut at = k;
        while let Some((p, l)) = self.parent[at] {
            letters.push(l);
            at = p;
        }
        letters.reverse();
        Some(ScWord(letters))
    }
}

fn check_tuple(a: &[u8], m: usize) -> Result<()> {
    if m > MAX_WORD_DIM {
        return Err(Error::guard("word dimension", m as u128, MAX_WORD_DIM as u128));
    }
    if a.len() > m || a.iter().any(|&x| x as usize >= m) {
        return Err(Error::invalid(format!("tuple {a:?} is not over {m}")));
    }
    Ok(())
}

/// A word `s_ā` with `ŵ(k) = a_k` for `k < |ā|`, shortest among replacement
/// words. `None` when no such word exists (only possible for `|ā| = m`).
pub fn s_word(a: &[u8], m: usize) -> Result<Option<ScWord>> {
    check_tuple(a, m)?;
    Ok(WordTree::build(m).find(a))
}

/// `N⁺` evaluator for networks labelled by atoms of an `n`-dimensional
/// algebra embedded in `c`; `atoms[a]` is the image of atom `a`. Words are
/// cached per tuple.
pub struct NPlus<'a, C: CylindricOps> {
    c: &'a C,
    atoms: Vec<C::E>,
    tree: WordTree,
    words: HashMap<Vec<u8>, ScWord>,
}

impl<'a, C: CylindricOps> NPlus<'a, C> {
    pub fn new(c: &'a C, atoms: Vec<C::E>) -> Result<Self> {
        let m = c.dim();
        if m > MAX_WORD_DIM {
            return Err(Error::guard("word dimension", m as u128, MAX_WORD_DIM as u128));
        }
        Ok(NPlus {
            c,
            atoms,
            tree: WordTree::build(m),
            words: HashMap::new(),
        })
    }

    pub fn word(&mut self, a: &[u8]) -> Result<ScWord> {
        check_tuple(a, self.tree.m)?;
        if let Some(w) = self.words.get(a) {
            return Ok(w.clone());
        }
        let w = self
            .tree
            .find(a)
            .ok_or_else(|| Error::invalid(format!("no replacement word realizes {a:?}")))?;
        self.words.insert(a.to_vec(), w.clone());
        Ok(w)
    }

    /// The words chosen so far, by tuple.
    pub fn chosen(&self) -> Vec<(Vec<u8>, String)> {
        let mut v: Vec<(Vec<u8>, String)> = self.words.iter().map(|(k, w)| (k.clone(), w.to_string())).collect();
        v.sort();
        v
    }

    pub fn image(&self, a: Atom) -> &C::E {
        &self.atoms[a as usize]
    }

    /// `∏_{ā} s_ā N(ā)` over all node tuples of `net`.
    pub fn eval(&mut self, net: &Network) -> Result<C::E> {
        if net.nodes.iter().any(|&x| x as usize >= self.tree.m) {
            return Err(Error::invalid(format!("network nodes must lie below {}", self.tree.m)));
        }
        let mut acc = self.c.one();
        for (idx, t) in net.tuples().enumerate() {
            let label = net.labels[idx];
            let atom = self
                .atoms
                .get(label as usize)
                .ok_or_else(|| Error::invalid(format!("label {label} has no image")))?
                .clone();
            let w = self.word(&t)?;
            acc = self.c.meet(&acc, &eval_word(self.c, &w, &atom));
        }
        Ok(acc)
    }
}

/// One-shot `N⁺`.
pub fn n_plus<C: CylindricOps>(c: &C, atoms: Vec<C::E>, net: &Network) -> Result<C::E> {
    NPlus::new(c, atoms)?.eval(net)
}
