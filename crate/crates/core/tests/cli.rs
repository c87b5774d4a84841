use std::path::PathBuf;
use std::process::{Command, Output};

use mmv::proofs::{check_proof, AxiomTable, CheckOptions, ProofFile};
use mmv::search::ReportJson;
use mmv::{parse, MonadicElement};

fn data(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(rel).display().to_string()
}

fn mmv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mmv")).args(args).env_remove("MMV_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn eval_box_on_two_worlds() {
    let o = mmv(&["eval", "--model", &data("models/two-worlds.json"), "--formula", "[]p"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "[1/2, 1/2]");
}

#[test]
fn eval_json_reparses() {
    let o = mmv(&["--json", "eval", "--model", &data("models/two-worlds.json"), "--formula", "<>q"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let e: MonadicElement = serde_json::from_value(v["value"].clone()).unwrap();
    assert_eq!(e.to_string(), "[3/4, 3/4]");
}

#[test]
fn model_check_exit_codes() {
    let split = data("models/split.json");
    let refutes = mmv(&["model-check", "--model", &split, "--formula", "<>p -> []p"]);
    assert_eq!(refutes.status.code(), Some(1));
    assert!(stdout(&refutes).starts_with("refutes"));
    let na = mmv(&["model-check", "--model", &split, "--gamma", &data("gamma/box-p.txt"), "--formula", "0"]);
    assert_eq!(na.status.code(), Some(0));
    assert!(stdout(&na).starts_with("not-applicable"));
}

#[test]
fn refute_finds_and_reverifies() {
    let o = mmv(&["--json", "refute", "--formula", "<>p -> []p", "--m-max", "2", "--n-max", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let report: ReportJson = serde_json::from_slice(&o.stdout).unwrap();
    let c = report.countermodel(&[], &parse("<>p -> []p").unwrap()).unwrap();
    c.verify().unwrap();
    assert_eq!((c.m, c.n), (1, 2));
}

#[test]
fn refute_exhausted_prints_caveat() {
    let o = mmv(&["refute", "--formula", "[](p \\/ q) -> []p \\/ []q", "--width", "1", "--n-max", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not a proof of validity"));
}

#[test]
fn refute_rejects_empty_budget() {
    let o = mmv(&["refute", "--formula", "p", "--m-max", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn prove_accepts_and_rejects() {
    let ok = mmv(&["prove", &data("proofs/dia-from-p.json")]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok).trim(), "Accept");
    let bad = mmv(&["--json", "prove", &data("proofs/bad-mp.json")]);
    assert_eq!(bad.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(v["result"]["verdict"], "reject");
    assert_eq!(v["result"]["step"], 2);
}

#[test]
fn proof_file_round_trips() {
    let text = std::fs::read_to_string(data("proofs/dia-from-p.json")).unwrap();
    let proof = ProofFile::from_json(&text).unwrap().to_proof().unwrap();
    let again = ProofFile::from(&proof).to_proof().unwrap();
    assert_eq!(proof, again);
    assert!(check_proof(&again, &AxiomTable::standard(), CheckOptions::default()).is_accept());
}

#[test]
fn input_errors_exit_two() {
    let model = data("models/two-worlds.json");
    let parse_err = mmv(&["eval", "--model", &model, "--formula", "[]p ->"]);
    assert_eq!(parse_err.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&parse_err.stderr).contains("offset 6"));
    assert_eq!(mmv(&["eval", "--model", "missing.json", "--formula", "p"]).status.code(), Some(2));
    assert_eq!(mmv(&["eval", "--model", &model, "--formula", "unbound"]).status.code(), Some(2));
    assert_eq!(mmv(&["algebra", &data("algebras/bad-exists.json"), "classify"]).status.code(), Some(2));
    assert_eq!(mmv(&["prove", &model]).status.code(), Some(2));
}

#[test]
fn algebra_subcommands() {
    let l22 = data("algebras/l2-squared.json");
    let classify = mmv(&["--json", "algebra", &l22, "classify"]);
    assert_eq!(classify.status.code(), Some(0));
    let c: serde_json::Value = serde_json::from_slice(&classify.stdout).unwrap();
    assert_eq!(c["size"], 9);
    assert_eq!(c["width"], 2);
    assert_eq!(c["is_simple"], true);
    assert_eq!(mmv(&["algebra", &l22, "validate"]).status.code(), Some(0));
    assert_eq!(mmv(&["algebra", &data("algebras/bad-exists.json"), "validate"]).status.code(), Some(1));
    assert_eq!(mmv(&["algebra", &l22, "represent"]).status.code(), Some(0));
    assert_eq!(mmv(&["algebra", &l22, "radical"]).status.code(), Some(0));
    let fep = mmv(&["--json", "algebra", &data("algebras/fep-example.json"), "fep"]);
    assert_eq!(fep.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&fep.stdout).unwrap();
    assert_eq!(v["embedding"]["m"], 6);
    assert_eq!(v["verified"], true);
}

#[test]
fn audits_are_seeded() {
    let run = |seed: &str| mmv(&["--json", "--seed", seed, "audit", "boxinf", "--trials", "200", "--bound", "1"]);
    let (a, b) = (run("7"), run("7"));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let rules = mmv(&["audit", "rules", "--trials", "10", "--rule", "prelinearity"]);
    assert_eq!(rules.status.code(), Some(0));
    let axioms = mmv(&["audit", "axioms", "--trials", "5", "--m-max", "2", "--n-max", "2", "--width", "1"]);
    assert_eq!(axioms.status.code(), Some(0));
}
