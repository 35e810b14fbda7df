//! Exhaustive model checking of the defining equations of each kind.
//!
//! Axiom ids follow the numbered postulate lists: `SC-1a`..`SC-9`,
//! `QA-2'`..`QA-12`, `QEA-1`/`QEA-2`, `PA-2`..`PA-10`, `PEA-D1`..`PEA-D3`,
//! the cylindric list `CA-1`..`CA-7`, the diagonal-free list `DF-1`..`DF-4`,
//! and the relation algebra list `RA-4`..`RA-10`. The Boolean reduct is checked
//! by `BA-1`..`BA-12` for every kind.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bao::{BooleanPart, Elem, FiniteBao};
use crate::error::{Error, Result};
use crate::signature::{
    all_transformations, compose_maps, decode_transformation, encode_transformation, identity_map, ConstOp, Kind,
    UnaryOp,
};

pub const DEFAULT_BUDGET: u128 = 100_000_000;

#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    /// Maximum number of variable assignments evaluated over the whole report.
    pub budget: u128,
    /// Skip the budget check.
    pub allow_large: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            budget: DEFAULT_BUDGET,
            allow_large: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub indices: String,
    pub assignment: BTreeMap<String, Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail { counterexample: Counterexample },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomEntry {
    pub id: String,
    pub statement: String,
    #[serde(flatten)]
    pub verdict: Verdict,
    /// False when the axiom holds by construction (bitset Boolean part).
    pub evaluated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub kind: Kind,
    pub dimension: Option<usize>,
    pub evaluations: u128,
    pub entries: Vec<AxiomEntry>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.verdict == Verdict::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomEntry> {
        self.entries.iter().filter(|e| e.verdict != Verdict::Pass)
    }

    pub fn get(&self, id: &str) -> Option<&AxiomEntry> {
        self.entries.iter().find(|e| e.id == id)
    }
}

/// Check the axioms of the algebra's own kind.
pub fn check_equations(algebra: &FiniteBao) -> Result<AxiomReport> {
    check_equations_as(algebra, algebra.signature().kind, CheckOptions::default())
}

type Pred<'a> = Box<dyn Fn(&[Elem]) -> bool + Sync + 'a>;

struct Axiom<'a> {
    id: String,
    statement: String,
    vars: Vec<&'static str>,
    instances: Vec<(String, Pred<'a>)>,
    structural: bool,
}

struct Ctx<'a> {
    alg: &'a FiniteBao,
    n: usize,
    tables: BTreeMap<UnaryOp, Vec<Elem>>,
}

impl<'a> Ctx<'a> {
    #[inline]
    fn op(&self, op: UnaryOp, x: Elem) -> Elem {
        self.tables[&op][x as usize]
    }
    #[inline]
    fn c(&self, i: u8, x: Elem) -> Elem {
        self.op(UnaryOp::Cyl(i), x)
    }
    #[inline]
    fn s(&self, i: u8, j: u8, x: Elem) -> Elem {
        self.op(UnaryOp::Replace(i, j), x)
    }
    #[inline]
    fn t(&self, i: u8, j: u8, x: Elem) -> Elem {
        self.op(UnaryOp::Swap(i, j), x)
    }
    fn d(&self, i: u8, j: u8) -> Elem {
        self.alg.constant(ConstOp::Diag(i, j)).expect("diagonal present")
    }
}

/// Check the axioms of `kind` on a reduct of `algebra`. Operators of `kind`
/// that the algebra only provides as derived terms are evaluated through
/// their defining terms.
pub fn check_equations_as(algebra: &FiniteBao, kind: Kind, opts: CheckOptions) -> Result<AxiomReport> {
    let sig = algebra.signature();
    if (kind == Kind::Ra) != (sig.kind == Kind::Ra) {
        return Err(Error::invalid(format!("cannot check a {sig} algebra as {kind}")));
    }
    let n = sig.dim();
    let mut needed: Vec<UnaryOp> = Vec::new();
    if kind != Kind::Ra {
        needed.extend((0..n as u8).map(UnaryOp::Cyl));
    }
    if matches!(kind, Kind::Sc | Kind::Qa | Kind::Qea | Kind::Pea) {
        for i in 0..n as u8 {
            for j in 0..n as u8 {
                needed.push(UnaryOp::Replace(i, j));
            }
        }
    }
    if matches!(kind, Kind::Qa | Kind::Qea) {
        for i in 0..n as u8 {
            for j in 0..n as u8 {
                needed.push(UnaryOp::Swap(i, j));
            }
        }
    }
    if kind == Kind::Pea {
        needed.extend(all_transformations(n).map(UnaryOp::Subst));
        needed.extend((0..1u16 << n).map(UnaryOp::CylSet));
    }
    if kind == Kind::Ra {
        needed.push(UnaryOp::Converse);
    }
    let mut tables = BTreeMap::new();
    for op in needed {
        let t = algebra
            .table(op)
            .ok_or_else(|| Error::invalid(format!("{sig} algebra does not provide {} needed for {kind}", op.name(n))))?;
        tables.insert(op, t.into_owned());
    }
    if kind.has_diagonals() {
        for i in 0..n as u8 {
            for j in 0..n as u8 {
                if algebra.constant(ConstOp::Diag(i, j)).is_none() {
                    return Err(Error::invalid(format!("{sig} algebra lacks diagonal d{i}{j}")));
                }
            }
        }
    }
    let ctx = Ctx { alg: algebra, n, tables };
    let axioms = axiom_list(&ctx, kind);

    let size = algebra.size() as u128;
    let cost: u128 = axioms
        .iter()
        .filter(|a| !a.structural)
        .map(|a| a.instances.len() as u128 * size.pow(a.vars.len() as u32))
        .sum();
    if !opts.allow_large && cost > opts.budget {
        return Err(Error::guard("axiom evaluations", cost, opts.budget));
    }

    let mut entries = Vec::with_capacity(axioms.len());
    for ax in &axioms {
        let verdict = if ax.structural {
            Verdict::Pass
        } else {
            evaluate(ax, algebra.size())
        };
        entries.push(AxiomEntry {
            id: ax.id.clone(),
            statement: ax.statement.clone(),
            verdict,
            evaluated: !ax.structural,
        });
    }
    Ok(AxiomReport {
        kind,
        dimension: sig.n,
        evaluations: cost,
        entries,
    })
}

fn evaluate(ax: &Axiom<'_>, size: usize) -> Verdict {
    let k = ax.vars.len();
    for (label, pred) in &ax.instances {
        let mut assignment = vec![0 as Elem; k];
        loop {
            if !pred(&assignment) {
                return Verdict::Fail {
                    counterexample: Counterexample {
                        indices: label.clone(),
                        assignment: ax.vars.iter().map(|v| v.to_string()).zip(assignment.iter().copied()).collect(),
                    },
                };
            }
            // odometer over the universe
            let mut pos = k;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                assignment[pos] += 1;
                if (assignment[pos] as usize) < size {
                    break;
                }
                assignment[pos] = 0;
                if pos == 0 {
                    pos = usize::MAX;
                    break;
                }
            }
            if pos == usize::MAX || k == 0 {
                break;
            }
        }
    }
    Verdict::Pass
}

struct Builder<'a> {
    list: Vec<Axiom<'a>>,
}

impl<'a> Builder<'a> {
    fn add(&mut self, id: &str, statement: &str, vars: &[&'static str], instances: Vec<(String, Pred<'a>)>) {
        self.list.push(Axiom {
            id: id.to_string(),
            statement: statement.to_string(),
            vars: vars.to_vec(),
            instances,
            structural: false,
        });
    }

    fn one(&mut self, id: &str, statement: &str, vars: &[&'static str], pred: Pred<'a>) {
        self.add(id, statement, vars, vec![(String::new(), pred)]);
    }
}

fn pairs(n: usize) -> impl Iterator<Item = (u8, u8)> {
    let n = n as u8;
    (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)))
}

fn triples(n: usize) -> impl Iterator<Item = (u8, u8, u8)> {
    let n = n as u8;
    (0..n).flat_map(move |i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
}

fn axiom_list<'a>(ctx: &'a Ctx<'a>, kind: Kind) -> Vec<Axiom<'a>> {
    let mut b = Builder { list: Vec::new() };
    boolean_axioms(&mut b, ctx);
    match kind {
        Kind::Ra => ra_axioms(&mut b, ctx),
        Kind::Df => cylinder_axioms(&mut b, ctx, "DF"),
        Kind::Ca => {
            cylinder_axioms(&mut b, ctx, "CA");
            diagonal_axioms(&mut b, ctx);
        }
        Kind::Sc => sc_axioms(&mut b, ctx),
        Kind::Qa => {
            sc_axioms(&mut b, ctx);
            qa_axioms(&mut b, ctx);
        }
        Kind::Qea => {
            sc_axioms(&mut b, ctx);
            qa_axioms(&mut b, ctx);
            qea_axioms(&mut b, ctx);
        }
        Kind::Pea => pea_axioms(&mut b, ctx),
    }
    if matches!(ctx.alg.boolean(), BooleanPart::Powerset { .. }) {
        for ax in b.list.iter_mut().filter(|a| a.id.starts_with("BA-")) {
            ax.structural = true;
        }
    }
    b.list
}

fn boolean_axioms<'a>(b: &mut Builder<'a>, c: &'a Ctx<'a>) {
    let a = c.alg;
    b.one("BA-1", "x + y = y + x", &["x", "y"], Box::new(move |v| a.join(v[0], v[1]) == a.join(v[1], v[0])));
    b.one("BA-2", "x . y = y . x", &["x", "y"], Box::new(move |v| a.meet(v[0], v[1]) == a.meet(v[1], v[0])));
    b.one(
        "BA-3",
        "x + (y + z) = (x + y) + z",
        &["x", "y", "z"],
        Box::new(move |v| a.join(v[0], a.join(v[1], v[2])) == a.join(a.join(v[0], v[1]), v[2])),
    );
    b.one(
        "BA-4",
        "x . (y . z) = (x . y) . z",
        &["x", "y", "z"],
        Box::new(move |v| a.meet(v[0], a.meet(v[1], v[2])) == a.meet(a.meet(v[0], v[1]), v[2])),
    );
    b.one("BA-5", "x + (x . y) = x", &["x", "y"], Box::new(move |v| a.join(v[0], a.meet(v[0], v[1])) == v[0]));
    b.one("BA-6", "x . (x + y) = x", &["x", "y"], Box::new(move |v| a.meet(v[0], a.join(v[0], v[1])) == v[0]));
    b.one(
        "BA-7",
        "x . (y + z) = x . y + x . z",
        &["x", "y", "z"],
        Box::new(move |v| a.meet(v[0], a.join(v[1], v[2])) == a.join(a.meet(v[0], v[1]), a.meet(v[0], v[2]))),
    );
    b.one(
        "BA-8",
        "x + y . z = (x + y) . (x + z)",
        &["x", "y", "z"],
        Box::new(move |v| a.join(v[0], a.meet(v[1], v[2])) == a.meet(a.join(v[0], v[1]), a.join(v[0], v[2]))),
    );
    b.one("BA-9", "x + -x = 1", &["x"], Box::new(move |v| a.join(v[0], a.complement(v[0])) == a.one()));
    b.one("BA-10", "x . -x = 0", &["x"], Box::new(move |v| a.meet(v[0], a.complement(v[0])) == a.zero()));
    b.one("BA-11", "x + 0 = x", &["x"], Box::new(move |v| a.join(v[0], a.zero()) == v[0]));
    b.one("BA-12", "x . 1 = x", &["x"], Box::new(move |v| a.meet(v[0], a.one()) == v[0]));
}

/// The four cylindrifier equations shared by every kind with cylindrifiers.
fn cylinder_axioms<'a>(b: &mut Builder<'a>, c: &'a Ctx<'a>, prefix: &str) {
    let a = c.alg;
    let n = c.n as u8;
    let ids: [String; 4] = if prefix == "SC" {
        ["SC-1a".into(), "SC-1b".into(), "SC-1c".into(), "SC-1d".into()]
    } else {
        [format!("{prefix}-1"), format!("{prefix}-2"), format!("{prefix}-3"), format!("{prefix}-4")]
    };
    b.add(
        &ids[0],
        "c_i 0 = 0",
        &[],
        (0..n).map(|i| (format!("i={i}"), Box::new(move |_: &[Elem]| c.c(i, a.zero()) == a.zero()) as Pred)).collect(),
    );
    b.add(
        &ids[1],
        "x <= c_i x",
        &["x"],
        (0..n).map(|i| (format!("i={i}"), Box::new(move |v: &[Elem]| a.leq(v[0], c.c(i, v[0]))) as Pred)).collect(),
    );
    b.add(
        &ids[2],
        "c_i(x . c_i y) = c_i x . c_i y",
        &["x", "y"],
        (0..n)
            .map(|i| {
                (
                    format!("i={i}"),
                    Box::new(move |v: &[Elem]| c.c(i, a.meet(v[0], c.c(i, v[1]))) == a.meet(c.c(i, v[0]), c.c(i, v[1]))) as Pred,
                )
            })
            .collect(),
    );
    b.add(
        &ids[3],
        "c_i c_j x = c_j c_i x",
        &["x"],
        pairs(c.n)
            .map(|(i, j)| (format!("i={i} j={j}"), Box::new(move |v: &[Elem]| c.c(i, c.c(j, v[0])) == c.c(j, c.c(i, v[0]))) as Pred))
            .collect(),
    );
}

fn diagonal_axioms<'a>(b: &mut Builder<'a>, c: &'a Ctx<'a>) {
    let a = c.alg;
    let n = c.n as u8;
    b.add(
        "CA-5",
        "d_ii = 1",
        &[],
        (0..n).map(|i| (format!("i={i}"), Box::new(move |_: &[Elem]| c.d(i, i) == a.one()) as Pred)).collect(),
    );
    b.add(
        "CA-6",
        "d_ij = c_k(d_ik . d_kj) for k not in {i, j}",
        &[],
        triples(c.c_n())
            .filter(|&(i, j, k)| k != i && k != j)
            .map(|(i, j, k)| {
                (
                    format!("i={i} j={j} k={k}"),
                    Box::new(move |_: &[Elem]| c.d(i, j) == c.c(k, a.meet(c.d(i, k), c.d(k, j)))) as Pred,
                )
            })
            .collect(),
    );
    b.add(
        "CA-7",
        "c_i(d_ij . x) . c_i(d_ij . -x) = 0 for i != j",
        &["x"],
        pairs(c.n)
            .filter(|(i, j)| i != j)
            .map(|(i, j)| {
                (
                    format!("i={i} j={j}"),
                    Box::new(move |v: &[Elem]| {
                        a.meet(c.c(i, a.meet(c.d(i, j), v[0])), c.c(i, a.meet(c.d(i, j), a.complement(v[0])))) == a.zero()
                    }) as Pred,
                )
            })
            .collect(),
    );
}

impl Ctx<'_> {
    fn c_n(&self) -> usize {
        self.n
    }
}

fn endomorphism<'a>(a: &'a FiniteBao, f: impl Fn(Elem) -> Elem + Sync + 'a) -> Pred<'a> {
    Box::new(move |v: &[Elem]| {
        f(a.join(v[0], v[1])) == a.join(f(v[0]), f(v[1])) && f(a.complement(v[0])) == a.complement(f(v[0]))
    })
}

fn sc_axioms<'a>(b: &mut Builder<'a>, c: &'a Ctx<'a>) {
    let a = c.alg;
    let n = c.n;
    cylinder_axioms(b, c, "SC");
    b.add(
        "SC-2",
        "s_i^i x = x",
        &["x"],
        (0..n as u8).map(|i| (format!("i={i}"), Box::new(move |v: &[Elem]| c.s(i, i, v[0]) == v[0]) as Pred)).collect(),
    );
    b.add(
        "SC-3",
        "s_i^j is a Boolean endomorphism",
        &["x", "y"],
        pairs(n).map(|(i, j)| (format!("i={i} j={j}"), endomorphism(a, move |x| c.s(i, j, x)))).collect(),
    );
    b.add(
        "SC-4",
        "s_i^j c_i x = c_i x",
        &["x"],
        pairs(n)
            .map(|(i, j)| (format!("i={i} j={j}"), Box::new(move |v: &[Elem]| c.s(i, j, c.c(i, v[0])) == c.c(i, v[0])) as Pred))
            .collect(),
    );
    b.add(
        "SC-5",
        "c_i s_i^j x = s_i^j x for i != j",
        &["x"],
        pairs(n)
            .filter(|(i, j)| i != j)
            .map(|(i, j)| (format!("i={i} j={j}"), Box::new(move |v: &[Elem]| c.c(i, c.s(i, j, v[0])) == c.s(i, j, v[0])) as Pred))
            .collect(),
    );
    b.add(
        "SC-6",
        "s_i^j c_k x = c_k s_i^j x for k not in {i, j}",
        &["x"],
        triples(n)
            .filter(|&(i, j, k)| k != i && k != j)
            .map(|(i, j, k)| {
                (
                    format!("i={i} j={j} k={k}"),
                    Box::new(move |v: &[Elem]| c.s(i, j, c.c(k, v[0])) == c.c(k, c.s(i, j, v[0]))) as Pred,
                )
            })
            .collect(),
    );
    b.add(
        "SC-7",
        "c_i s_j^i x = c_j s_i^j x",
        &["x"],
        pairs(n)
            .map(|(i, j)| {
                (
                    format!("i={i} j={j}"),
                    Box::new(move |v: &[Elem]| c.c(i, c.s(j, i, v[0])) == c.c(j, c.s(i, j, v[0]))) as Pred,
                )
            })
            .collect(),
    );
    let quads: Vec<(u8, u8, u8, u8)> = triples(n)
        .flat_map(|(i, j, k)| (0..n as u8).map(move |l| (i, j, k, l)))
        .collect();
    b.add(
        "SC-8",
        "s_j^i s_l^k x = s_l^k s_j^i x when |{i, j, k, l}| = 4",
        &["x"],
        quads
            .iter()
            .copied()
            .filter(|&(i, j, k, l)| i != j && i != k && i != l && j != k && j != l && k != l)
            .map(|(i, j, k, l)| {
                (
                    format!("i={i} j={j} k={k} l={l}"),
                    Box::new(move |v: &[Elem]| c.s(j, i, c.s(l, k, v[0])) == c.s(l, k, c.s(j, i, v[0]))) as Pred,
                )
            })
            .collect(),
    );
    b.add(
        "SC-9",
        "s_l^i s_j^l x = s_l^i s_j^i x",
        &["x"],
        triples(n)
            .map(|(i, j, l)| {
                (
                    format!("i={i} j={j} l={l}"),
                    Box::new(move |v: &[Elem]| c.s(l, i, c.s(j, l, v[0])) == c.s(l, i, c.s(j, i, v[0]))) as Pred,
                )
            })
            .collect(),
    );
}

fn qa_axioms<'a>(b: &mut Builder<'a>, c: &'a Ctx<'a>) {
    let a = c.alg;
    let n = c.n;
    b.add(
        "QA-2'",
        "s_i^i x = s_[i,i] x = x and s_[i,j] = s_[j,i]",
        &["x"],
        pairs(n)
            .map(|(i, j)| {
                (
                    format!("i={i} j={j}"),
                    Box::new(move |v: &[Elem]| {
                        c.s(i, i, v[0]) == v[0] && c.t(i, i, v[0]) == v[0] && c.t(i, j, v[0]) == c.t(j, i, v[0])
                    }) as Pred,
                )
            })
            .collect(),
    );
    b.add(
        "QA-3'",
        "s_i^j and s_[i,j] are Boolean endomorphisms",
        &["x", "y"],
        pairs(n)
            .flat_map(|(i, j)| {
                [
                    (format!("s_{i}^{j}"), endomorphism(a, move |x| c.s(i, j, x))),
                    (format!("s_[{i},{j}]"), endomorphism(a, move |x| c.t(i, j, x))),
                ]
            })
            .collect(),
    );
    b.add(
        "QA-10",
        "s_[i,j] s_[i,j] x = x",
        &["x"],
        pairs(n)
            .map(|(i, j)| (format!("i={i} j={j}"), Box::new(move |v: &[Elem]| c.t(i, j, c.t(i, j, v[0])) == v[0]) as Pred))
            .collect(),
    );
    b.add(
        "QA-11",
        "s_[i,j] s_[i,k] x = s_[j,k] s_[i,j] x when |{i, j, k}| = 3",
        &["x"],
        triples(n)
            .filter(|&(i, j, k)| i != j && j != k && i != k)
            .map(|(i, j, k)| {
                (
                    format!("i={i} j={j} k={k}"),
                    Box::new(move |v: &[Elem]| c.t(i, j, c.t(i, k, v[0])) == c.t(j, k, c.t(i, j, v[0]))) as Pred,
                )
            })
            .collect(),
    );
    b.add(
        "QA-12",
        "s_[i,j] s_j^i x = s_i^j x",
        &["x"],
        pairs(n)
            .map(|(i, j)| (format!("i={i} j={j}"), Box::new(move |v: &[Elem]| c.t(i, j, c.s(j, i, v[0])) == c.s(i, j, v[0])) as Pred))
            .collect(),
    );
}

fn qea_axioms<'a>(b: &mut Builder<'a>, c: &'a Ctx<'a>) {
    let a = c.alg;
    let n = c.n;
    b.add(
        "QEA-1",
        "s_i^j d_ij = 1",
        &[],
        pairs(n)
            .map(|(i, j)| (format!("i={i} j={j}"), Box::new(move |_: &[Elem]| c.s(i, j, c.d(i, j)) == a.one()) as Pred))
            .collect(),
    );
    b.add(
        "QEA-2",
        "x . d_ij <= s_i^j x",
        &["x"],
        pairs(n)
            .map(|(i, j)| (format!("i={i} j={j}"), Box::new(move |v: &[Elem]| a.leq(a.meet(v[0], c.d(i, j)), c.s(i, j, v[0]))) as Pred))
            .collect(),
    );
}

fn pea_axioms<'a>(b: &mut Builder<'a>, c: &'a Ctx<'a>) {
    let a = c.alg;
    let n = c.n;
    let subsets: Vec<u16> = (0..1u16 << n).collect();
    let taus: Vec<u32> = all_transformations(n).collect();
    let cg = move |g: u16, x: Elem| c.op(UnaryOp::CylSet(g), x);
    let st = move |t: u32, x: Elem| c.op(UnaryOp::Subst(t), x);
    let gname = |g: u16| format!("{{{}}}", (0..n).filter(|i| g >> i & 1 == 1).map(|i| i.to_string()).collect::<Vec<_>>().join(","));
    let tname = |t: u32| format!("{:?}", decode_transformation(t, n));

    b.add(
        "PA-2",
        "c_(G) 0 = 0",
        &[],
        subsets.iter().map(|&g| (format!("G={}", gname(g)), Box::new(move |_: &[Elem]| cg(g, a.zero()) == a.zero()) as Pred)).collect(),
    );
    b.add(
        "PA-3",
        "x <= c_(G) x",
        &["x"],
        subsets.iter().map(|&g| (format!("G={}", gname(g)), Box::new(move |v: &[Elem]| a.leq(v[0], cg(g, v[0]))) as Pred)).collect(),
    );
    b.add(
        "PA-4",
        "c_(G)(x . c_(G) y) = c_(G) x . c_(G) y",
        &["x", "y"],
        subsets
            .iter()
            .map(|&g| {
                (
                    format!("G={}", gname(g)),
                    Box::new(move |v: &[Elem]| cg(g, a.meet(v[0], cg(g, v[1]))) == a.meet(cg(g, v[0]), cg(g, v[1]))) as Pred,
                )
            })
            .collect(),
    );
    b.add(
        "PA-5",
        "c_(G) c_(D) x = c_(G u D) x",
        &["x"],
        subsets
            .iter()
            .flat_map(|&g| subsets.iter().map(move |&d| (g, d)))
            .map(|(g, d)| {
                (
                    format!("G={} D={}", gname(g), gname(d)),
                    Box::new(move |v: &[Elem]| cg(g, cg(d, v[0])) == cg(g | d, v[0])) as Pred,
                )
            })
            .collect(),
    );
    b.add(
        "PA-6",
        "s_t is a Boolean endomorphism",
        &["x", "y"],
        taus.iter().map(|&t| (format!("t={}", tname(t)), endomorphism(a, move |x| st(t, x)))).collect(),
    );
    let id = encode_transformation(&identity_map(n));
    b.one("PA-7", "s_Id x = x", &["x"], Box::new(move |v| st(id, v[0]) == v[0]));
    b.add(
        "PA-8",
        "s_(s o t) x = s_s s_t x",
        &["x"],
        taus.iter()
            .flat_map(|&s| taus.iter().map(move |&t| (s, t)))
            .map(|(s, t)| {
                let st_code = encode_transformation(&compose_maps(&decode_transformation(s, n), &decode_transformation(t, n)));
                (
                    format!("s={} t={}", tname(s), tname(t)),
                    Box::new(move |v: &[Elem]| st(st_code, v[0]) == st(s, st(t, v[0]))) as Pred,
                )
            })
            .collect(),
    );
    let mut pa9 = Vec::new();
    for &g in &subsets {
        for &s in &taus {
            for &t in &taus {
                let (sv, tv) = (decode_transformation(s, n), decode_transformation(t, n));
                if (0..n).filter(|k| g >> k & 1 == 0).all(|k| sv[k] == tv[k]) {
                    pa9.push((
                        format!("G={} s={} t={}", gname(g), tname(s), tname(t)),
                        Box::new(move |v: &[Elem]| st(s, cg(g, v[0])) == st(t, cg(g, v[0]))) as Pred,
                    ));
                }
            }
        }
    }
    b.add("PA-9", "s agrees with t off G implies s_s c_(G) x = s_t c_(G) x", &["x"], pa9);
    let mut pa10 = Vec::new();
    for &g in &subsets {
        for &t in &taus {
            let tv = decode_transformation(t, n);
            let d: u16 = (0..n).filter(|&k| g >> tv[k] & 1 == 1).fold(0, |acc, k| acc | 1 << k);
            let images: Vec<u8> = (0..n).filter(|k| d >> k & 1 == 1).map(|k| tv[k]).collect();
            let injective = images.iter().enumerate().all(|(p, x)| !images[..p].contains(x));
            if injective {
                pa10.push((
                    format!("G={} t={} D={}", gname(g), tname(t), gname(d)),
                    Box::new(move |v: &[Elem]| cg(g, st(t, v[0])) == st(t, cg(d, v[0]))) as Pred,
                ));
            }
        }
    }
    b.add("PA-10", "t^-1 G = D and t injective on D implies c_(G) s_t x = s_t c_(D) x", &["x"], pa10);
    b.add(
        "PEA-D1",
        "d_ii = 1",
        &[],
        (0..n as u8).map(|i| (format!("i={i}"), Box::new(move |_: &[Elem]| c.d(i, i) == a.one()) as Pred)).collect(),
    );
    b.add(
        "PEA-D2",
        "x . d_ij <= s_[i|j] x",
        &["x"],
        pairs(n)
            .map(|(i, j)| (format!("i={i} j={j}"), Box::new(move |v: &[Elem]| a.leq(a.meet(v[0], c.d(i, j)), c.s(i, j, v[0]))) as Pred))
            .collect(),
    );
    b.add(
        "PEA-D3",
        "s_t d_ij = d_t(i)t(j)",
        &[],
        taus.iter()
            .flat_map(|&t| pairs(n).map(move |(i, j)| (t, i, j)))
            .map(|(t, i, j)| {
                let tv = decode_transformation(t, n);
                let (ti, tj) = (tv[i as usize], tv[j as usize]);
                (
                    format!("t={} i={i} j={j}", tname(t)),
                    Box::new(move |_: &[Elem]| st(t, c.d(i, j)) == c.d(ti, tj)) as Pred,
                )
            })
            .collect(),
    );
}

fn ra_axioms<'a>(b: &mut Builder<'a>, c: &'a Ctx<'a>) {
    let a = c.alg;
    let conv = move |x: Elem| c.op(UnaryOp::Converse, x);
    let comp = move |x: Elem, y: Elem| a.compose(x, y);
    let id = a.constant(ConstOp::Identity).expect("identity constant");
    b.one(
        "RA-4",
        "x ; (y ; z) = (x ; y) ; z",
        &["x", "y", "z"],
        Box::new(move |v| comp(v[0], comp(v[1], v[2])) == comp(comp(v[0], v[1]), v[2])),
    );
    b.one(
        "RA-5",
        "(x + y) ; z = x ; z + y ; z",
        &["x", "y", "z"],
        Box::new(move |v| comp(a.join(v[0], v[1]), v[2]) == a.join(comp(v[0], v[2]), comp(v[1], v[2]))),
    );
    b.one("RA-6", "x ; 1' = x", &["x"], Box::new(move |v| comp(v[0], id) == v[0]));
    b.one("RA-7", "x^^ = x", &["x"], Box::new(move |v| conv(conv(v[0])) == v[0]));
    b.one(
        "RA-8",
        "(x + y)^ = x^ + y^",
        &["x", "y"],
        Box::new(move |v| conv(a.join(v[0], v[1])) == a.join(conv(v[0]), conv(v[1]))),
    );
    b.one("RA-9", "(x ; y)^ = y^ ; x^", &["x", "y"], Box::new(move |v| conv(comp(v[0], v[1])) == comp(conv(v[1]), conv(v[0]))));
    b.one(
        "RA-10",
        "x^ ; -(x ; y) + -y = -y",
        &["x", "y"],
        Box::new(move |v| {
            let ny = a.complement(v[1]);
            a.join(comp(conv(v[0]), a.complement(comp(v[0], v[1]))), ny) == ny
        }),
    );
}
