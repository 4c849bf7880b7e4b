//! End-to-end checks of the binary's file formats, exit codes, and
//! output contracts, driven through the real executable.

use ltlfmc_core::{
    certify_counterexample, gen_phi_n, parse_aut, parse_cex, parse_formula, parse_moore, parse_ts,
    prefix_dba, translate_fragment, AutAutomaton, Dialect, moore_to_ts,
};
use std::path::Path;
use std::process::{Command, Output};

const TERMINATING_TS: &str = "\
system terminating
props a
state s0 { a }
state s1 { }
init s0
edge s0 s1
terminal s1
";

const MOORE_MACHINE: &str = "\
moore
inputs req
outputs busy
state s0 outputs { }
state s1 outputs { busy }
init s0
delta s0 { req } s1
delta s0 { } s0
delta s1 default s1
";

const OSCILLATOR_TM: &str = "\
states q0 q1 qacc
start q0
accept qacc
alphabet _ 0 1
c 1
rule q0 _ q1 _ R
rule q0 0 q1 0 R
rule q0 1 q1 1 R
rule q1 _ q0 _ L
rule q1 0 q0 0 L
rule q1 1 q0 1 L
";

const ACCEPTOR_TM: &str = "\
states q0 q1 qacc
start q0
accept qacc
alphabet _ 0 1
c 1
rule q0 _ q1 _ R
rule q0 0 q1 0 R
rule q0 1 q1 1 R
rule q1 1 qacc 1 L
rule q1 0 q1 0 R
rule q1 _ q1 _ R
";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ltlfmc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn write(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn check_holds_with_stats_on_stderr_only() {
    let dir = tempfile::tempdir().unwrap();
    let ts = write(dir.path(), "m.ts", TERMINATING_TS);
    let out = run(&["check", "--system", &ts, "--formula", "a"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert_eq!(stdout(&out), "holds\n");
    assert!(stderr(&out).contains("explored:"));
}

#[test]
fn check_writes_a_counterexample_that_recertifies() {
    let dir = tempfile::tempdir().unwrap();
    let ts_path = write(dir.path(), "m.ts", TERMINATING_TS);
    let cex_path = dir.path().join("violation.cex");
    let out = run(&[
        "check",
        "--system",
        &ts_path,
        "--formula",
        "G a",
        "--cex",
        cex_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).starts_with("violated\n"));
    let system = parse_ts(TERMINATING_TS).unwrap();
    let formula = parse_formula("G a", Dialect::Ltlf).unwrap();
    let cex = parse_cex(&system, &std::fs::read_to_string(&cex_path).unwrap()).unwrap();
    certify_counterexample(&system, &formula, &cex).unwrap();
}

#[test]
fn check_reads_moore_machines_and_formula_files() {
    let dir = tempfile::tempdir().unwrap();
    let moore_path = write(dir.path(), "m.moore", MOORE_MACHINE);
    // Choosing `req` never becomes mandatory, so `busy` can be dodged
    // forever and the eventuality is violated.
    let formula_path = write(dir.path(), "f.ltlf", "F busy\n");
    let cex_path = dir.path().join("busy.cex");
    let out = run(&[
        "check",
        "--moore",
        &moore_path,
        "--formula-file",
        &formula_path,
        "--cex",
        cex_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1, "stderr: {}", stderr(&out));
    let system = moore_to_ts(&parse_moore(MOORE_MACHINE).unwrap()).unwrap();
    let formula = parse_formula("F busy", Dialect::Ltlf).unwrap();
    let cex = parse_cex(&system, &std::fs::read_to_string(&cex_path).unwrap()).unwrap();
    certify_counterexample(&system, &formula, &cex).unwrap();
}

#[test]
fn mode_override_rejects_a_mismatched_system() {
    let dir = tempfile::tempdir().unwrap();
    let ts = write(dir.path(), "m.ts", TERMINATING_TS);
    let out = run(&["check", "--system", &ts, "--formula", "a", "--mode", "nonterminating"]);
    assert_eq!(code(&out), 2, "stdout: {}", stdout(&out));
}

#[test]
fn exactly_one_formula_source_is_required() {
    let dir = tempfile::tempdir().unwrap();
    let ts = write(dir.path(), "m.ts", TERMINATING_TS);
    let f = write(dir.path(), "f.ltlf", "a\n");
    let both = run(&["check", "--system", &ts, "--formula", "a", "--formula-file", &f]);
    assert_eq!(code(&both), 2);
    let neither = run(&["check", "--system", &ts]);
    assert_eq!(code(&neither), 2);
}

#[test]
fn compile_emits_automata_that_parse_back() {
    let dir = tempfile::tempdir().unwrap();
    for target in ["nfa", "dfa", "prefix-dba"] {
        let path = dir.path().join(format!("{target}.aut"));
        let out = run(&[
            "compile",
            "--formula",
            "G a | F b",
            "--target",
            target,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "target {target}: {}", stderr(&out));
        assert!(stderr(&out).contains("states:"));
        parse_aut(&std::fs::read_to_string(&path).unwrap())
            .unwrap_or_else(|e| panic!("{target} output does not parse back: {e}"));
    }
    let parsed =
        parse_aut(&std::fs::read_to_string(dir.path().join("prefix-dba.aut")).unwrap()).unwrap();
    let formula = parse_formula("G a | F b", Dialect::Ltlf).unwrap();
    assert_eq!(parsed, AutAutomaton::Dba(prefix_dba(&formula).unwrap()));
}

#[test]
fn compile_emits_dot_on_request() {
    let out = run(&["compile", "--formula", "F a", "--target", "dfa", "--emit", "dot"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("digraph"));
}

#[test]
fn translate_round_trips_through_the_infinite_dialect() {
    let out = run(&["translate", "--formula", "G (a & N b)"]);
    assert_eq!(code(&out), 0);
    let printed = parse_formula(stdout(&out).trim(), Dialect::Ltl).unwrap();
    let direct =
        translate_fragment(&parse_formula("G (a & N b)", Dialect::Ltlf).unwrap()).unwrap();
    assert_eq!(printed, direct);
}

#[test]
fn translate_rejects_formulas_outside_the_fragment() {
    for formula in ["a R b", "F (N a)", "!(a U b)"] {
        let out = run(&["translate", "--formula", formula]);
        assert_eq!(code(&out), 2, "`{formula}` should be rejected");
        assert!(
            stderr(&out).contains("fragment"),
            "`{formula}` rejection should name the fragment: {}",
            stderr(&out)
        );
    }
}

#[test]
fn generated_tm_instances_check_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    for (name, machine, input, expected_exit) in
        [("acceptor", ACCEPTOR_TM, "1", 0), ("oscillator", OSCILLATOR_TM, "1", 1)]
    {
        let tm_path = write(dir.path(), &format!("{name}.tm"), machine);
        let out_dir = dir.path().join(name);
        let generated = run(&[
            "gen",
            "tm",
            "--machine",
            &tm_path,
            "--input",
            input,
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert_eq!(code(&generated), 0, "{name}: {}", stderr(&generated));
        let ts_path = out_dir.join("instance.ts");
        let formula_path = out_dir.join("instance.ltlf");
        parse_ts(&std::fs::read_to_string(&ts_path).unwrap()).unwrap();
        parse_formula(
            std::fs::read_to_string(&formula_path).unwrap().trim(),
            Dialect::Ltlf,
        )
        .unwrap();
        let checked = run(&[
            "check",
            "--system",
            ts_path.to_str().unwrap(),
            "--formula-file",
            formula_path.to_str().unwrap(),
        ]);
        assert_eq!(code(&checked), expected_exit, "{name}: {}", stderr(&checked));
    }
}

#[test]
fn generated_family_formula_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("phi");
    let out = run(&["gen", "phin", "--n", "1", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(out_dir.join("phi_1.ltlf")).unwrap();
    assert_eq!(parse_formula(text.trim(), Dialect::Ltlf).unwrap(), gen_phi_n(1));
}

#[test]
fn fuzz_validates_its_bounds() {
    let out = run(&["fuzz", "--props", "9", "--trials", "1"]);
    assert_eq!(code(&out), 2);
    let ok = run(&["fuzz", "--seed", "3", "--max-size", "5", "--props", "1", "--trials", "25"]);
    assert_eq!(code(&ok), 0);
    assert!(stdout(&ok).contains("all agree"));
}
