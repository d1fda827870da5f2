use std::io::Write;
use std::process::{Command, Stdio};

use koszulkit::cli::{run_cli, Outcome};
use koszulkit::corpus::FIXTURE_NAMES;

const CI2_DOC: &str = include_str!("fixtures/ci2.txt");

fn run(args: &[&str], input: &str) -> Outcome {
    let mut argv = vec!["koszulkit"];
    argv.extend_from_slice(args);
    run_cli(argv, &mut input.as_bytes())
}

#[test]
fn betti_tables_match_golden_files() {
    for (fixture, golden) in [("ci2", include_str!("fixtures/ci2_k_betti.txt")), ("nk3", include_str!("fixtures/nk3_k_betti.txt"))] {
        let o = run(&["--fixture", fixture, "betti"], "");
        assert_eq!(o.code, 0);
        assert_eq!(o.stdout, golden, "{fixture}");
    }
}

#[test]
fn exit_codes_over_the_fixture_matrix() {
    for name in FIXTURE_NAMES {
        let koszul = name != "nk3";
        let positive = if koszul { 0 } else { 1 };
        let fx = ["--fixture", name];
        for (cmd, want) in [
            (&["hilbert"][..], 0),
            (&["gb"], 0),
            (&["resolve"], 0),
            (&["betti"], 0),
            (&["reg"], 0),
            (&["koszul"], positive),
            (&["koszul", "--method", "linear-part"], positive),
            (&["linpart"], positive),
            (&["poincare"], positive),
            (&["koszul", "--imax", "0"], 2),
            (&["koszul", "--dmax", "0"], 2),
            (&["betti", "--imax", "0"], 2),
            (&["koszul", "--method", "guess"], 3),
            (&["--module", "nope", "betti"], 3),
        ] {
            let mut args = fx.to_vec();
            args.extend_from_slice(cmd);
            let o = run(&args, "");
            assert_eq!(o.code, want, "{args:?}: {}", o.stderr);
        }
    }
}

#[test]
fn negative_verdicts_carry_witnesses() {
    let o = run(&["--fixture", "nk3", "koszul"], "");
    assert_eq!(o.code, 1);
    assert_eq!(o.stdout, "verdict: no\nwitness: (2, 3)\n");
    let o = run(&["--fixture", "nk3", "koszul", "--format", "json"], "");
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["report"]["witness"], serde_json::json!([2, 3]));
    assert_eq!(v["p"], 5);
    assert_eq!(v["bounds"], serde_json::json!({"imax": 5, "dmax": 8}));
}

#[test]
fn suites_and_certificates() {
    assert_eq!(run(&["--fixture", "ci2", "suite", "reg"], "").code, 0);
    assert_eq!(run(&["--fixture", "nk3", "suite", "reg"], "").code, 3);
    assert_eq!(run(&["suite", "reg"], CI2_DOC).code, 3);
    assert_eq!(run(&["filtration", "verify", "--cert", "filt"], CI2_DOC).code, 0);
    assert_eq!(run(&["flag", "verify", "--cert", "flag"], CI2_DOC).code, 0);
    assert_eq!(run(&["factorize", "--cert", "flag", "--r", "1"], CI2_DOC).code, 0);
    assert_eq!(run(&["filtration", "verify", "--cert", "flag"], CI2_DOC).code, 3);
    // (y) : y = (y) in ci2, so colon index 1 on the first form is wrong
    let bad = "ring char=5 vars=x,y\nideal x^2; y^2\ncert name=F {\"forms\": [[0,1],[1,0]], \"colons\": [0,2]}\n";
    let o = run(&["flag", "verify", "--cert", "F"], bad);
    assert_eq!(o.code, 1, "{}", o.stderr);
}

#[test]
fn budgets_are_never_silently_truncated() {
    let o = run(&["--fixture", "fz3", "--budget", "5", "filtration", "all-linear"], "");
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("budget"), "{}", o.stderr);
    let crv2 = "ring char=2 vars=x,y,z\nideal x^2; x*y; y*z; z^2\n";
    let o = run(&["--budget", "200", "flag", "search", "--format", "json"], crv2);
    assert_eq!(o.code, 1);
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert!(v["report"]["nodes"].as_u64().unwrap() > 0);
    assert_eq!(run(&["--budget", "3", "flag", "search"], crv2).code, 2);
}

#[test]
fn parse_errors_report_positions() {
    let o = run(&["hilbert"], "ring char=5 vars=x,y\nideal x^2 + y\n");
    assert_eq!(o.code, 3);
    assert_eq!(o.stderr, "error: non-homogeneous generator at 2:7\n");
    let o = run(&["hilbert"], "ring char=9 vars=x\n");
    assert!(o.stderr.contains("at 1:11"), "{}", o.stderr);
    let o = run(&["hilbert"], "ring char=5 vars=x,y\nideal x\n");
    assert!(o.stderr.contains("degree at least 2"), "{}", o.stderr);
}

#[test]
fn binary_reads_standard_input() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_koszulkit"))
        .args(["--module", "k", "betti"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"ring char=5 vars=x\nideal x^3\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), include_str!("fixtures/nk3_k_betti.txt"));
}
