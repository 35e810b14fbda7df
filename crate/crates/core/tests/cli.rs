use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use cylgame::game::{attacks, normalize_demand, solve, Certificate, GameConfig, Rounds};
use cylgame::network::{Checker, Demand, Node};
use cylgame::structure::{gen_rainbow, AtomStructure};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cylgame"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

struct Files {
    dir: tempfile::TempDir,
}

impl Files {
    fn new() -> Self {
        let f = Files { dir: tempfile::tempdir().unwrap() };
        for (g, r) in [(1, 1), (3, 1)] {
            let p = f.path(&format!("r{g}{r}.json"));
            let o = run(&["rainbow", "--greens", &g.to_string(), "--reds", &r.to_string(), "--out", p.to_str().unwrap()]);
            assert_eq!(code(&o), 0);
        }
        f
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn s(&self, name: &str) -> String {
        self.path(name).display().to_string()
    }
}

#[test]
fn rainbow_writes_three_atoms() {
    let f = Files::new();
    let s = AtomStructure::from_json_str(&std::fs::read_to_string(f.path("r11.json")).unwrap()).unwrap();
    assert_eq!(s.len(), 3);
    assert_eq!(code(&run(&["rainbow", "--greens", "0", "--reds", "1"])), 3);
}

#[test]
fn validate_exit_codes() {
    let f = Files::new();
    let o = run(&["validate", "--in", &f.s("r11.json")]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["valid"], Value::Bool(true));
    // converse of a green changed to the red breaks the cycle law
    let text = std::fs::read_to_string(f.path("r11.json")).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["converse"]["g0"] = "r1".into();
    v["converse"]["r1"] = "g0".into();
    let bad = f.path("bad.json");
    std::fs::write(&bad, v.to_string()).unwrap();
    let o = run(&["validate", "--in", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(!json(&o)["violations"].as_array().unwrap().is_empty());
    assert_eq!(code(&run(&["validate", "--in", &f.s("missing.json")])), 3);
    assert_eq!(code(&run(&["validate", "--set", "qea:2:2"])), 0);
}

#[test]
fn axioms_exit_codes() {
    let f = Files::new();
    // 8-element complex algebra of rainbow(1,1)
    let o = run(&["axioms", "--in", &f.s("r11.json"), "--as", "ra"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["size"], 8);
    let o = run(&["axioms", "--in", &f.s("r31.json")]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    let failing: Vec<&str> = v["report"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["verdict"] != "pass")
        .map(|e| e["id"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["RA-4"]);
    assert_eq!(code(&run(&["axioms", "--in", &f.s("r11.json"), "--as", "ca"])), 3);
    assert_eq!(code(&run(&["axioms", "--set", "qea:3:2", "--budget", "10"])), 3);
}

#[test]
fn game_exit_codes_and_certificates() {
    let f = Files::new();
    let cert = f.s("c.json");
    let o = run(&["game", "--in", &f.s("r11.json"), "--m", "4", "--reuse", "--cert", &cert]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["winner"], "heloise");
    assert_eq!(v["certificate"], cert.as_str());
    assert_eq!(code(&run(&["replay", "--cert", &cert, "--in", &f.s("r11.json")])), 0);

    let o = run(&["game", "--in", &f.s("r31.json"), "--m", "4", "--rounds", "omega", "--reuse", "--cert", &f.s("a.json")]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["winner"], "abelard");
    assert_eq!(code(&run(&["replay", "--cert", &f.s("a.json"), "--in", &f.s("r31.json")])), 0);

    // bounded game
    let o = run(&["game", "--in", &f.s("r31.json"), "--m", "4", "--rounds", "2"]);
    assert_eq!(code(&o), 1);
    let o = run(&["game", "--in", &f.s("r31.json"), "--m", "9"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("m is 9, limit 8"));

    // trace dumps networks
    let o = run(&["game", "--in", &f.s("r11.json"), "--m", "3", "--reuse", "--trace"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("nodes: 0 1"));
}

#[test]
fn replay_rejects_tampering_and_mismatch() {
    let f = Files::new();
    let cert = f.s("c.json");
    assert_eq!(code(&run(&["game", "--in", &f.s("r11.json"), "--m", "4", "--reuse", "--cert", &cert])), 0);
    // a response with every label the green is inconsistent
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    let labels = v["heloise"]["moves"][0]["response"]["labels"].as_array_mut().unwrap();
    for l in labels.iter_mut() {
        *l = 1.into();
    }
    let bad = f.s("bad.json");
    std::fs::write(&bad, v.to_string()).unwrap();
    let o = run(&["replay", "--cert", &bad, "--in", &f.s("r11.json")]);
    assert_eq!(code(&o), 1);
    let msg = json(&o)["error"].as_str().unwrap().to_string();
    assert!(msg.contains("round"), "{msg}");
    // certificate of another structure
    let o = run(&["replay", "--cert", &cert, "--in", &f.s("r31.json")]);
    assert_eq!(code(&o), 1);
    assert!(json(&o)["error"].as_str().unwrap().contains("different structure"));
    std::fs::write(f.path("junk.json"), "{\"format\": 1}").unwrap();
    assert_eq!(code(&run(&["replay", "--cert", &f.s("junk.json"), "--in", &f.s("r11.json")])), 3);
}

#[test]
fn lyndon_exit_codes() {
    let f = Files::new();
    assert_eq!(code(&run(&["lyndon", "--in", &f.s("r11.json"), "--k", "2"])), 0);
    let o = run(&["lyndon", "--in", &f.s("r31.json"), "--k", "2"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["lyndon"]["outcome"], "fail_at");
}

#[test]
fn represent_exit_codes() {
    let f = Files::new();
    let cand = f.path("cand.json");
    let o = run(&["represent", "--in", &f.s("r11.json"), "--bases", "1..5", "--candidate", cand.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["outcome"]["base"], 5);
    assert!(cand.exists());
    assert_eq!(code(&run(&["represent", "--in", &f.s("r11.json"), "--bases", "1..3"])), 2);
    assert_eq!(code(&run(&["represent", "--in", &f.s("r11.json"), "--bases", "2..5", "--time-budget", "0"])), 2);
    let o = run(&["represent", "--in", &f.s("r31.json"), "--bases", "1..4"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["obstruction"]["forced"][0], "r1");
    assert_eq!(code(&run(&["represent", "--in", &f.s("r11.json"), "--bases", "4..2"])), 3);
}

#[test]
fn neat_and_report() {
    let f = Files::new();
    let out = f.path("nr.json");
    let o = run(&["neat", "--set", "ca:3:2", "--n", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let o = run(&["axioms", "--in", out.to_str().unwrap(), "--as", "ca"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["size"], 16);
    let o = run(&["report", "--in", &f.s("r11.json"), "--m-max", "3"]);
    assert_eq!(code(&o), 0);
    assert!(json(&o)["games"].is_array());
}

#[test]
fn unknown_flags_are_usage_errors_for_every_verb() {
    for verb in ["validate", "axioms", "rainbow", "game", "lyndon", "represent", "neat", "report", "replay"] {
        let o = run(&[verb, "--no-such-flag"]);
        assert_eq!(code(&o), 3, "{verb}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"), "{verb}");
    }
    assert_eq!(code(&run(&["frobnicate"])), 3);
    assert_eq!(code(&run(&[])), 3);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let f = Files::new();
    let args = ["game", "--in", &f.s("r31.json"), "--m", "4", "--reuse", "--jobs", "4"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.stdout, b.stdout);
    let (c1, c2) = (f.s("c1.json"), f.s("c2.json"));
    run(&["game", "--in", &f.s("r11.json"), "--m", "4", "--reuse", "--jobs", "1", "--cert", &c1]);
    run(&["game", "--in", &f.s("r11.json"), "--m", "4", "--reuse", "--jobs", "4", "--cert", &c2]);
    assert_eq!(std::fs::read(&c1).unwrap(), std::fs::read(&c2).unwrap());
}

fn demand_line(d: &Demand, z: Node, names: &[String]) -> String {
    match d {
        Demand::Witness { x, y, left, right } => {
            format!("w {x} {y} {} {} @ {z}", names[*left as usize], names[*right as usize])
        }
        Demand::Cyl { i, tuple, atom } => {
            let t: Vec<String> = tuple.iter().map(|x| x.to_string()).collect();
            format!("c {i} {} {} @ {z}", t.join(" "), names[*atom as usize])
        }
    }
}

/// Abelard's script from random unanswered attacks, following the
/// certificate's positions.
fn script(s: &AtomStructure, cert: &Certificate, rounds: usize, seed: u64) -> (String, usize) {
    let h = cert.heloise.as_ref().unwrap();
    let ck = Checker::new(s);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = h.initial.choose(&mut rng).unwrap();
    let mut lines = vec![format!("atom {}", start.atom)];
    let mut cur = start.network;
    let mut played = 0;
    for _ in 0..rounds {
        let n = &cert.networks[cur as usize];
        let open: Vec<_> = attacks(&ck, n, cert.m, cert.reuse)
            .into_iter()
            .filter(|mv| mv.node != Node::MAX && !ck.satisfied(n, &mv.demand))
            .collect();
        let Some(mv) = open.choose(&mut rng) else { break };
        let r = h.moves.iter().find(|r| r.network == cur && r.node == mv.node && normalize_demand(n, &r.demand) == normalize_demand(n, &mv.demand)).unwrap();
        lines.push(demand_line(&mv.demand, mv.node, s.names()));
        cur = r.next;
        played += 1;
    }
    lines.push("show".into());
    lines.push("quit".into());
    (lines.join("\n") + "\n", played)
}

fn interactive(cert: &Path, structure: &Path, script: &str) -> Output {
    use std::io::Write;
    let mut child = bin()
        .args(["replay", "--interactive", "--cert", cert.to_str().unwrap(), "--in", structure.to_str().unwrap()])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(script.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn scripted_abelard_always_meets_a_legal_board(seed: u64, rounds in 1usize..5, big: bool) {
        let f = Files::new();
        let (g, file) = if big { (3, "r31.json") } else { (1, "r11.json") };
        let s: AtomStructure = gen_rainbow(g, 1).unwrap().into();
        // Héloïse wins the reuse game at m = 3 on both
        let solved = solve(&s, &GameConfig::new(3, Rounds::Omega).reuse(true)).unwrap();
        let cert = Certificate::from_solution(&s, &solved).unwrap();
        prop_assume!(cert.heloise.is_some());
        let cpath = f.path("h.json");
        std::fs::write(&cpath, cert.to_json_string().unwrap()).unwrap();
        let (text, played) = script(&s, &cert, rounds, seed);
        let o = interactive(&cpath, &f.path(file), &text);
        prop_assert_eq!(code(&o), 0);
        let out = String::from_utf8_lossy(&o.stdout);
        prop_assert!(!out.contains("no response"), "{}", out);
        prop_assert!(!out.contains("illegal"), "{}", out);
        prop_assert_eq!(out.matches(": response").count(), played);
        // every board printed is consistent: the certificate's networks are
        let ck = Checker::new(&s);
        prop_assert!(cert.networks.iter().all(|n| ck.is_consistent(n)));
    }
}
