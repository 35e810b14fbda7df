//! Command-line front end: one verb per pipeline, JSON reports on stdout or
//! `--out`.
//!
//! Exit codes: 0 definitive positive (valid, pass, Héloïse wins, found),
//! 1 definitive negative, 2 inconclusive, 3 usage, input or guard error.

use std::ffi::OsString;
use std::io::{BufRead, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::axioms::{check_equations_as, CheckOptions, DEFAULT_BUDGET};
use crate::bao::{BaoJson, FiniteBao};
use crate::error::{Error, Result};
use crate::game::cert::interactive;
use crate::game::{check_lyndon, replay, solve, Certificate, GameConfig, LyndonOutcome, Player, Rounds};
use crate::repr::{find_representation_within, neat_reduct, SearchOutcome, SetAlgebra};
use crate::signature::Kind;
use crate::structure::{complex_algebra, gen_rainbow, is_rainbow, AtomStructure};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

pub const TOOL: &str = concat!("cylgame ", env!("CARGO_PKG_VERSION"));

#[derive(Parser, Debug)]
#[command(name = "cylgame", version, about = "Atom structures, atomic games and representations of finite algebras")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Check an atom structure's laws, or load an algebra.
    Validate(ValidateArgs),
    /// Evaluate the equational axioms of a kind exhaustively.
    Axioms(AxiomsArgs),
    /// Write the rainbow atom structure with G greens and R reds.
    Rainbow(RainbowArgs),
    /// Solve the atomic game on a structure.
    Game(GameArgs),
    /// Test the first k Lyndon conditions.
    Lyndon(LyndonArgs),
    /// Search for a complete representation over small bases.
    Represent(RepresentArgs),
    /// Neat reduct of an algebra to a lower dimension.
    Neat(NeatArgs),
    /// Combined deterministic report on one structure.
    Report(ReportArgs),
    /// Re-check a strategy certificate, or play against it.
    Replay(ReplayArgs),
}

#[derive(Args, Debug)]
struct Output {
    /// Write the JSON here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Source {
    /// Atom structure or algebra JSON.
    #[arg(long = "in", value_name = "PATH", conflicts_with = "set")]
    input: Option<PathBuf>,
    /// Full set algebra KIND:DIM:BASE, e.g. `qea:3:2`.
    #[arg(long, value_name = "KIND:DIM:BASE")]
    set: Option<String>,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct AxiomsArgs {
    #[command(flatten)]
    source: Source,
    /// Kind whose axioms are checked (default: the algebra's own).
    #[arg(long = "as", value_name = "KIND")]
    kind: Option<Kind>,
    /// Maximum number of variable assignments.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    #[arg(long)]
    allow_large: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct RainbowArgs {
    #[arg(long)]
    greens: usize,
    #[arg(long)]
    reds: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct GameArgs {
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Node budget.
    #[arg(long)]
    m: usize,
    /// A round count or `omega`.
    #[arg(long, default_value = "omega")]
    rounds: Rounds,
    /// Abelard may name used nodes as witnesses.
    #[arg(long)]
    reuse: bool,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    max_networks: Option<usize>,
    /// Write the winner's strategy certificate here.
    #[arg(long, value_name = "PATH")]
    cert: Option<PathBuf>,
    /// Print the certificate's networks to stderr.
    #[arg(long)]
    trace: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct LyndonArgs {
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Highest condition tested.
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct RepresentArgs {
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Base sizes `LO..HI` (inclusive) or a single size.
    #[arg(long, default_value = "1..4", value_parser = parse_range)]
    bases: RangeInclusive<usize>,
    /// Give up after this many seconds.
    #[arg(long, value_name = "SECS")]
    time_budget: Option<f64>,
    /// Write the representation found here.
    #[arg(long, value_name = "PATH")]
    candidate: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct NeatArgs {
    #[command(flatten)]
    source: Source,
    /// Target dimension.
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Largest node budget for the games (default: initial arity + 2).
    #[arg(long)]
    m_max: Option<usize>,
    /// Lyndon conditions tested.
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value = "1..4", value_parser = parse_range)]
    bases: RangeInclusive<usize>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct ReplayArgs {
    #[arg(long, value_name = "PATH")]
    cert: PathBuf,
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Play Abelard on stdin against the certified strategy.
    #[arg(long)]
    interactive: bool,
    #[command(flatten)]
    output: Output,
}

fn parse_range(s: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let parts: Vec<&str> = if s.contains("..=") {
        s.splitn(2, "..=").collect()
    } else if s.contains("..") {
        s.splitn(2, "..").collect()
    } else {
        vec![s, s]
    };
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad base range {s:?}"));
    let (lo, hi) = (num(parts[0])?, num(parts[1])?);
    if lo == 0 || lo > hi {
        return Err(format!("bad base range {s:?}"));
    }
    Ok(lo..=hi)
}

enum Input {
    Structure(AtomStructure),
    Algebra(FiniteBao),
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Input> {
    let text = read(path)?;
    let v: Value = serde_json::from_str(&text)?;
    if v.get("universe").is_some() {
        let j: BaoJson = serde_json::from_value(v)?;
        Ok(Input::Algebra(FiniteBao::from_json(&j)?))
    } else {
        Ok(Input::Structure(AtomStructure::from_json_str(&text)?))
    }
}

fn load_structure(path: &Path) -> Result<AtomStructure> {
    match load(path)? {
        Input::Structure(s) => Ok(s),
        Input::Algebra(_) => Err(Error::invalid(format!("{}: expected an atom structure", path.display()))),
    }
}

fn full_set(spec: &str) -> Result<FiniteBao> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [kind, dim, base] = parts[..] else {
        return Err(Error::invalid(format!("--set expects KIND:DIM:BASE, got {spec:?}")));
    };
    let num = |t: &str| t.parse::<usize>().map_err(|_| Error::invalid(format!("bad number {t:?} in --set")));
    SetAlgebra::full(kind.parse()?, num(dim)?, num(base)?)?.to_bao()
}

fn source(s: &Source) -> Result<Input> {
    match (&s.input, &s.set) {
        (Some(p), _) => load(p),
        (None, Some(spec)) => Ok(Input::Algebra(full_set(spec)?)),
        (None, None) => Err(Error::invalid("one of --in or --set is required")),
    }
}

fn algebra(s: &Source) -> Result<FiniteBao> {
    match source(s)? {
        Input::Algebra(a) => Ok(a),
        Input::Structure(st) => complex_algebra(&st),
    }
}

/// Pretty JSON with a trailing newline; keys are sorted, so output is
/// byte-stable.
fn to_text(v: &impl Serialize) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn emit(v: &impl Serialize, out: &Output, stdout: &mut dyn Write) -> Result<()> {
    let text = to_text(&serde_json::to_value(v)?)?;
    match &out.out {
        Some(p) => std::fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn winner_code(p: Player) -> i32 {
    match p {
        Player::Heloise => EXIT_OK,
        Player::Abelard => EXIT_NEGATIVE,
    }
}

/// Runs one invocation and returns its exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) {
                let _ = stdout.write_all(text.as_bytes());
                EXIT_OK
            } else {
                let _ = stderr.write_all(text.as_bytes());
                EXIT_USAGE
            };
        }
    };
    match dispatch(cli.verb, stdin, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(verb: Verb, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match verb {
        Verb::Validate(a) => {
            let (report, code) = match source(&a.source)? {
                Input::Structure(s) => {
                    let d = s.validate();
                    let ok = d.is_empty();
                    let r = json!({
                        "tool": TOOL,
                        "input": "structure",
                        "kind": s.signature().kind,
                        "atoms": s.len(),
                        "structure": s.hash(),
                        "valid": ok,
                        "violations": d.violations,
                    });
                    (r, if ok { EXIT_OK } else { EXIT_NEGATIVE })
                }
                Input::Algebra(b) => {
                    let r = json!({
                        "tool": TOOL,
                        "input": "algebra",
                        "signature": b.signature(),
                        "size": b.size(),
                        "valid": true,
                    });
                    (r, EXIT_OK)
                }
            };
            emit(&report, &a.output, stdout)?;
            Ok(code)
        }
        Verb::Axioms(a) => {
            let alg = algebra(&a.source)?;
            let kind = a.kind.unwrap_or(alg.signature().kind);
            let opts = CheckOptions {
                budget: a.budget,
                allow_large: a.allow_large,
            };
            let report = check_equations_as(&alg, kind, opts)?;
            let code = if report.all_pass() { EXIT_OK } else { EXIT_NEGATIVE };
            emit(
                &json!({ "tool": TOOL, "size": alg.size(), "all_pass": report.all_pass(), "report": report }),
                &a.output,
                stdout,
            )?;
            Ok(code)
        }
        Verb::Rainbow(a) => {
            let s: AtomStructure = gen_rainbow(a.greens, a.reds)?.into();
            let text = s.to_json_string() + "\n";
            match &a.output.out {
                Some(p) => std::fs::write(p, text)?,
                None => stdout.write_all(text.as_bytes())?,
            }
            Ok(EXIT_OK)
        }
        Verb::Game(a) => {
            let s = load_structure(&a.input)?;
            let mut cfg = GameConfig::new(a.m, a.rounds).reuse(a.reuse).jobs(a.jobs);
            if let Some(n) = a.max_networks {
                cfg.guards.max_networks = n;
            }
            let solved = solve(&s, &cfg)?;
            let mut report = serde_json::to_value(&solved.report)?;
            report["tool"] = json!(TOOL);
            if a.cert.is_some() || a.trace {
                let cert = Certificate::from_solution(&s, &solved)?;
                if let Some(p) = &a.cert {
                    std::fs::write(p, cert.to_json_string()? + "\n")?;
                    report["certificate"] = json!(p.display().to_string());
                }
                if a.trace {
                    for (i, n) in cert.networks.iter().enumerate() {
                        write!(stderr, "network {i}\n{}", n.dump(s.names()))?;
                    }
                }
            }
            emit(&report, &a.output, stdout)?;
            Ok(winner_code(solved.report.winner))
        }
        Verb::Lyndon(a) => {
            let s = load_structure(&a.input)?;
            let outcome = check_lyndon(&s, a.k, a.jobs)?;
            let code = match outcome {
                LyndonOutcome::PassUpTo(_) => EXIT_OK,
                LyndonOutcome::FailAt(_) => EXIT_NEGATIVE,
            };
            emit(&json!({ "tool": TOOL, "structure": s.hash(), "lyndon": outcome }), &a.output, stdout)?;
            Ok(code)
        }
        Verb::Represent(a) => {
            let s = load_structure(&a.input)?;
            let deadline = match a.time_budget {
                Some(t) if !(t.is_finite() && t >= 0.0) => return Err(Error::invalid("--time-budget must be >= 0")),
                Some(t) => Some(Instant::now() + Duration::from_secs_f64(t)),
                None => None,
            };
            let report = find_representation_within(&s, a.bases, deadline)?;
            if let (Some(p), Some(c)) = (&a.candidate, &report.candidate) {
                std::fs::write(p, c.to_json_string() + "\n")?;
            }
            let code = match report.outcome {
                SearchOutcome::Found { .. } => EXIT_OK,
                SearchOutcome::None { .. } => EXIT_NEGATIVE,
                SearchOutcome::Inconclusive => EXIT_INCONCLUSIVE,
            };
            let mut v = serde_json::to_value(&report)?;
            v["tool"] = json!(TOOL);
            emit(&v, &a.output, stdout)?;
            Ok(code)
        }
        Verb::Neat(a) => {
            let alg = algebra(&a.source)?;
            let reduct = neat_reduct(&alg, a.n)?;
            emit(&reduct.to_json(), &a.output, stdout)?;
            Ok(EXIT_OK)
        }
        Verb::Report(a) => {
            let s = load_structure(&a.input)?;
            let report = structure_report(&s, &a)?;
            emit(&report, &a.output, stdout)?;
            Ok(EXIT_OK)
        }
        Verb::Replay(a) => {
            let s = load_structure(&a.input)?;
            let cert = Certificate::from_json_str(&read(&a.cert)?)?;
            if a.interactive {
                replay(&s, &cert)?;
                interactive(&s, &cert, stdin, stdout)?;
                return Ok(EXIT_OK);
            }
            match replay(&s, &cert) {
                Ok(r) => {
                    let mut v = serde_json::to_value(&r)?;
                    v["tool"] = json!(TOOL);
                    v["valid"] = json!(true);
                    emit(&v, &a.output, stdout)?;
                    Ok(EXIT_OK)
                }
                Err(Error::Certificate(msg)) => {
                    emit(&json!({ "tool": TOOL, "valid": false, "error": msg }), &a.output, stdout)?;
                    Ok(EXIT_NEGATIVE)
                }
                Err(e) => Err(e),
            }
        }
    }
}

/// Validation, axioms of the complex algebra, games for every node budget
/// up to `m_max` with and without reuse, Lyndon conditions and the
/// representation search.
fn structure_report(s: &AtomStructure, a: &ReportArgs) -> Result<Value> {
    let diags = s.validate();
    let mut r = json!({
        "tool": TOOL,
        "structure": s.hash(),
        "kind": s.signature().kind,
        "atoms": s.names(),
        "valid": diags.is_empty(),
        "violations": diags.violations,
    });
    if !diags.is_empty() {
        return Ok(r);
    }
    if let Some((g, red)) = s.as_ra().and_then(is_rainbow) {
        r["rainbow"] = json!({ "greens": g, "reds": red });
    }
    let alg = complex_algebra(s)?;
    let ax = check_equations_as(&alg, alg.signature().kind, CheckOptions::default())?;
    r["axioms"] = json!({
        "kind": ax.kind,
        "size": alg.size(),
        "all_pass": ax.all_pass(),
        "failing": ax.failures().map(|e| e.id.clone()).collect::<Vec<_>>(),
    });
    let n = crate::game::initial_arity(s);
    let lo = if matches!(s, AtomStructure::Ra(_)) { 3 } else { n + 1 };
    let hi = a.m_max.unwrap_or(n + 2).max(lo);
    let mut games = Vec::new();
    for m in lo..=hi {
        for reuse in [false, true] {
            let cfg = GameConfig::new(m, Rounds::Omega).reuse(reuse).jobs(a.jobs);
            let rep = solve(s, &cfg)?.report;
            games.push(json!({
                "m": m,
                "reuse": reuse,
                "positions": rep.positions,
                "winner": rep.winner,
                "refuting_atom": rep.refuting_atom,
                "stabilization_rank": rep.stabilization_rank,
            }));
        }
    }
    r["games"] = json!(games);
    r["lyndon"] = json!(check_lyndon(s, a.k, a.jobs)?);
    let search = find_representation_within(s, a.bases.clone(), None)?;
    r["representation"] = json!({
        "outcome": search.outcome,
        "sizes": search.sizes,
        "obstruction": search.obstruction,
    });
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut input: &[u8] = b"";
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("cylgame").chain(args.iter().copied()), &mut input, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..5").unwrap(), 2..=5);
        assert_eq!(parse_range("2..=5").unwrap(), 2..=5);
        assert_eq!(parse_range("3").unwrap(), 3..=3);
        assert!(parse_range("0..2").is_err());
        assert!(parse_range("4..2").is_err());
    }

    #[test]
    fn unknown_flag_is_a_usage_error() {
        let (code, _, err) = call(&["rainbow", "--greens", "1", "--reds", "1", "--colour", "x"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--colour"));
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn set_algebra_axioms() {
        let (code, out, _) = call(&["axioms", "--set", "ca:2:2"]);
        assert_eq!(code, EXIT_OK);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["all_pass"], json!(true));
        assert_eq!(v["size"], json!(16));
    }
}
