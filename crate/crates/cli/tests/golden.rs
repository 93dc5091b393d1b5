//! End-to-end tests that drive the compiled binary on worked examples and
//! pin down stdout text and exit codes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use redcert::clique::{brute_clique_R, build_clique_instance, CliqueInstance};
use redcert::cnf::{write_dimacs, Formula, Lit};
use redcert::field::Gf;
use redcert::gen::{GeneratorSeed, Selector};
use redcert::monotone::FormulaClass;
use redcert::ov::{sat_to_ov, OvInstance};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(dir: &Path, args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_redcert"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary failed to spawn");
    Run {
        code: out.status.code().expect("killed by signal"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("redcert-golden-{}-{tag}", std::process::id()));
    if dir.exists() {
        fs::remove_dir_all(&dir).unwrap();
    }
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn single_clause() -> Formula {
    Formula::new(4, vec![vec![Lit::pos(1), Lit::pos(2), Lit::pos(3)]]).unwrap()
}

#[test]
fn reduce_ov_matches_the_library_reduction() {
    let dir = scratch("reduce-ov");
    let f = Formula::new(2, vec![vec![Lit::pos(1), Lit::neg(2)]]).unwrap();
    fs::write(dir.join("in.cnf"), write_dimacs(&f)).unwrap();
    let r = run(&dir, &["reduce", "ov", "in.cnf"]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    assert!(r.stdout.contains("ov t=2 dim=1 parts=2,2"), "{}", r.stdout);
    let written = OvInstance::parse_text(&fs::read_to_string(dir.join("in.ov")).unwrap()).unwrap();
    assert_eq!(written, sat_to_ov(&f).unwrap());
}

#[test]
fn reduce_tov_pads_and_reports_group_sizes() {
    let dir = scratch("reduce-tov");
    fs::write(dir.join("in.cnf"), write_dimacs(&single_clause())).unwrap();
    let r = run(&dir, &["reduce", "tov", "in.cnf", "--t", "3"]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    assert!(
        r.stdout
            .contains("note: padded from 4 to 6 variables for 3 groups"),
        "{}",
        r.stdout
    );
    assert!(r.stdout.contains("ov t=3 dim=1 parts=4,4,4"), "{}", r.stdout);
}

#[test]
fn reduce_clique_emits_count_tensors_with_the_frozen_count() {
    let dir = scratch("reduce-clique");
    fs::write(dir.join("in.cnf"), write_dimacs(&single_clause())).unwrap();
    let r = run(&dir, &["reduce", "clique", "in.cnf", "--tvec", "0,0,0,1"]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    assert!(r.stdout.contains("clique k=2 t=1"), "{}", r.stdout);
    let inst =
        CliqueInstance::parse_text(&fs::read_to_string(dir.join("in.ten")).unwrap()).unwrap();
    assert_eq!(brute_clique_R(&inst).unwrap(), 14);
}

#[test]
fn reduce_clique_rejects_a_mismatched_total() {
    let dir = scratch("reduce-clique-bad-t");
    fs::write(dir.join("in.cnf"), write_dimacs(&single_clause())).unwrap();
    let r = run(
        &dir,
        &["reduce", "clique", "in.cnf", "--tvec", "0,0,0,1", "--t", "2"],
    );
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("does not match"), "{}", r.stderr);
}

fn write_instance(dir: &Path) {
    let inst = build_clique_instance(&single_clause(), [0, 0, 0, 1], Gf::default_field()).unwrap();
    fs::write(dir.join("in.ten"), inst.to_text()).unwrap();
}

#[test]
fn certificate_pipeline_reports_the_frozen_count_in_both_modes() {
    for (mode, flavor) in [("pair", "sparse"), ("pair", "split"), ("index", "rank")] {
        let dir = scratch(&format!("pipeline-{mode}-{flavor}"));
        write_instance(&dir);
        let r = run(
            &dir,
            &[
                "gen", "certs", "in.ten", "--mode", mode, "--flavor", flavor, "--rank", "1",
            ],
        );
        assert_eq!(r.code, 0, "stderr: {}", r.stderr);
        assert!(r.stdout.contains("certificate files to certs"), "{}", r.stdout);
        let r = run(
            &dir,
            &[
                "verify",
                "cliquecount",
                "in.ten",
                "certs",
                "--brute-check",
                "--ops",
            ],
        );
        assert_eq!(r.code, 0, "stderr: {}", r.stderr);
        assert!(r.stdout.contains("R=14 OK"), "{}", r.stdout);
        assert!(r.stdout.contains("muls="), "{}", r.stdout);
    }
}

#[test]
fn tampered_certificates_are_rejected_with_their_slice_location() {
    let dir = scratch("tamper");
    write_instance(&dir);
    let r = run(&dir, &["gen", "certs", "in.ten", "--mode", "pair"]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    // Replace one M-slice certificate with a certificate for the identity
    // matrix: well-formed, right shape, wrong matrix.
    let identity_cert = "cert rigidity 2 2 0\nsparse 2\n0 0 1\n1 1 1\n";
    fs::write(dir.join("certs").join("m_0_1.cert"), identity_cert).unwrap();
    let r = run(&dir, &["verify", "cliquecount", "in.ten", "certs"]);
    assert_eq!(r.code, 1, "stdout: {}", r.stdout);
    assert!(
        r.stderr.contains("certificate invalid for M"),
        "{}",
        r.stderr
    );
    assert!(r.stderr.contains("j0=0") && r.stderr.contains("j1=1"), "{}", r.stderr);
}

#[test]
fn solve_covers_every_kind_with_exit_codes() {
    let dir = scratch("solve");
    let sat = Formula::new(2, vec![vec![Lit::pos(1), Lit::neg(2)]]).unwrap();
    let unsat = Formula::new(2, vec![vec![Lit::pos(1)], vec![Lit::neg(1)]]).unwrap();
    fs::write(dir.join("sat.cnf"), write_dimacs(&sat)).unwrap();
    fs::write(dir.join("unsat.cnf"), write_dimacs(&unsat)).unwrap();
    fs::write(dir.join("single.cnf"), write_dimacs(&single_clause())).unwrap();

    let r = run(&dir, &["solve", "sat", "sat.cnf"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("SAT "), "{}", r.stdout);
    let r = run(&dir, &["solve", "sat", "unsat.cnf"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.stdout.trim(), "UNSAT");

    let r = run(&dir, &["solve", "max3sat", "single.cnf", "--t", "1"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout.trim(), "YES");
    let r = run(&dir, &["solve", "max3sat", "unsat.cnf", "--t", "2"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.stdout.trim(), "NO");

    let r = run(&dir, &["reduce", "ov", "unsat.cnf", "--out", "u.ov"]);
    assert_eq!(r.code, 0);
    let r = run(&dir, &["solve", "ov", "u.ov"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.stdout.trim(), "NONE");
    let r = run(&dir, &["reduce", "ov", "sat.cnf", "--out", "s.ov"]);
    assert_eq!(r.code, 0);
    let r = run(&dir, &["solve", "ov", "s.ov"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("ORTHOGONAL "), "{}", r.stdout);

    let r = run(&dir, &["reduce", "clique", "single.cnf", "--tvec", "0,0,0,1"]);
    assert_eq!(r.code, 0);
    let r = run(&dir, &["solve", "clique", "single.ten"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("R=14"), "{}", r.stdout);
    assert!(r.stdout.contains("CLIQUE "), "{}", r.stdout);
}

#[test]
fn regime_examples_match_the_frozen_margins() {
    let dir = scratch("regime");
    let r = run(&dir, &["check-regime", "--variant", "canonical", "--omega", "2.372"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.stdout.contains("PASS"), "{}", r.stdout);

    let r = run(
        &dir,
        &[
            "check-regime", "--variant", "tradeoff", "--alpha", "1", "--beta", "1.5", "--omega",
            "2.372",
        ],
    );
    assert_eq!(r.code, 1, "{}", r.stdout);
    assert!(r.stdout.contains("FAIL"), "{}", r.stdout);
    assert!(r.stdout.contains("-0.436"), "{}", r.stdout);

    let r = run(
        &dir,
        &[
            "check-regime", "--variant", "tradeoff", "--alpha", "0.5", "--beta", "1.5", "--omega",
            "2",
        ],
    );
    assert_eq!(r.code, 0, "{}", r.stdout);

    let r = run(&dir, &["check-regime", "--variant", "rs-product"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.stdout.contains("PASS"), "{}", r.stdout);

    let r = run(
        &dir,
        &["check-regime", "--variant", "balanced", "--delta", "0.1", "--omega", "2.372"],
    );
    assert_eq!(r.code, 0, "{}", r.stdout);
}

#[test]
fn verify_unsat_accepts_a_separator_and_rejects_elsewhere() {
    let dir = scratch("verify-unsat");
    let unsat = Formula::new(2, vec![vec![Lit::pos(1)], vec![Lit::neg(1)]]).unwrap();
    let sat = Formula::new(2, vec![vec![Lit::pos(1)], vec![Lit::pos(2)]]).unwrap();
    fs::write(dir.join("unsat.cnf"), write_dimacs(&unsat)).unwrap();
    fs::write(dir.join("sat.cnf"), write_dimacs(&sat)).unwrap();
    // OR of the two clause coordinates separates the contradiction's sides.
    fs::write(dir.join("or.mono"), "g1 = OR x1 x2\n").unwrap();

    let r = run(&dir, &["verify", "unsat", "unsat.cnf", "or.mono"]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    assert_eq!(r.stdout.trim(), "accept");

    let r = run(&dir, &["verify", "unsat", "sat.cnf", "or.mono"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.stdout.trim(), "reject");

    // Arity beyond the instance dimension is a structural error, not a
    // semantic reject.
    fs::write(dir.join("wide.mono"), "g1 = OR x1 x7\n").unwrap();
    let r = run(&dir, &["verify", "unsat", "unsat.cnf", "wide.mono"]);
    assert_eq!(r.code, 2);
}

#[test]
fn verify_tov_tracks_orthogonal_tuples() {
    let dir = scratch("verify-tov");
    // Common coordinate 1: no orthogonal pair can exist.
    fs::write(dir.join("good.ov"), "ov 2 2 2 2\n10\n11\n10\n11\n").unwrap();
    fs::write(dir.join("w.thr"), "t 2\ng1 = THR 2 3 x1 x1 x1\n").unwrap();
    let r = run(&dir, &["verify", "tov", "good.ov", "w.thr"]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    assert_eq!(r.stdout.trim(), "accept");

    // An orthogonal pair exists, so the witness must be refused.
    fs::write(dir.join("bad.ov"), "ov 2 2 2 2\n10\n11\n01\n11\n").unwrap();
    let r = run(&dir, &["verify", "tov", "bad.ov", "w.thr"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.stdout.trim(), "reject");
}

#[test]
fn verify_factors_checks_reconstruction_residues() {
    let dir = scratch("verify-factors");
    fs::write(dir.join("i2.mat"), "mat 2 2 5\n1 0\n0 1\n").unwrap();
    fs::write(
        dir.join("good.fac"),
        "factors 2 pair\n1 0\n1 0\n0 1\n0 1\n",
    )
    .unwrap();
    let r = run(&dir, &["verify", "factors", "i2.mat", "good.fac"]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    assert_eq!(r.stdout.trim(), "accept");

    fs::write(dir.join("bad.fac"), "factors 1 pair\n1 1\n1 1\n").unwrap();
    let r = run(&dir, &["verify", "factors", "i2.mat", "bad.fac"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("reject residues="), "{}", r.stdout);
}

#[test]
fn gen_seed_writes_a_slice_or_the_empty_marker() {
    let dir = scratch("gen-seed");
    let class = FormulaClass::new(4, 3, 1.0).unwrap();
    let seed = GeneratorSeed::for_formula(
        &single_clause(),
        &class,
        [0, 0, 0, 1],
        0,
        0,
        Selector::PairM,
    )
    .unwrap();
    fs::write(dir.join("ok.seed"), seed.to_text()).unwrap();
    let r = run(
        &dir,
        &["gen", "seed", "ok.seed", "--n", "4", "--width", "3", "--beta", "1.0"],
    );
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    assert!(r.stdout.contains("matrix 2x2"), "{}", r.stdout);
    let body = fs::read_to_string(dir.join("ok.gen")).unwrap();
    assert!(body.starts_with("mat 2 2"), "{body}");

    // Flip the word so it no longer decodes: the generator yields the empty
    // family rather than an error.
    let mut tokens: Vec<String> = seed.to_text().split_whitespace().map(String::from).collect();
    tokens[1] = tokens[1].replace(['f', '0'], "3");
    fs::write(dir.join("bad.seed"), tokens.join(" ")).unwrap();
    let r = run(
        &dir,
        &["gen", "seed", "bad.seed", "--n", "4", "--width", "3", "--beta", "1.0"],
    );
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    assert!(r.stdout.contains("empty"), "{}", r.stdout);
    assert_eq!(fs::read_to_string(dir.join("bad.gen")).unwrap(), "empty\n");
}

#[test]
fn guards_exit_with_usage_errors() {
    let dir = scratch("guards");
    let r = run(&dir, &["solve", "sat", "missing.cnf"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("error:"), "{}", r.stderr);

    let wide = Formula::new(30, vec![vec![Lit::pos(30)]]).unwrap();
    fs::write(dir.join("wide.cnf"), write_dimacs(&wide)).unwrap();
    let r = run(&dir, &["solve", "sat", "wide.cnf"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("max-n"), "{}", r.stderr);
    let r = run(&dir, &["--max-n", "30", "solve", "sat", "wide.cnf"]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);

    let r = run(&dir, &["verify", "nonsense", "a", "b"]);
    assert_eq!(r.code, 2);

    let r = run(&dir, &["--prime", "6", "solve", "sat", "wide.cnf"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("prime"), "{}", r.stderr);
}
