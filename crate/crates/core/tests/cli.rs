//! End-to-end runs of the command surface.

mod common;

use qorbifold::cli::{run, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_OK};
use qorbifold::scenario::example6_1;

use common::{printed_example_expansion, scenario_dir};

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("qorbifold").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn example() -> String {
    scenario_dir().join("example6_1.json").to_string_lossy().into_owned()
}

#[test]
fn expand_prints_the_example_polynomial() {
    let (code, out, _) = cli(&["expand", &example(), "--arc", "gamma"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, printed_example_expansion().to_string());
    assert!(out.contains("(q^{3/2} + q^{1/2} + q^{-1/2} + q^{-3/2}) x^{(-2,1,0,1,0,1)}"));
    assert!(out.contains("(q^{4/2} + 1 + q^{-4/2}) x^{(-3,0,2,2,0,2)}"));
}

#[test]
fn expand_commutative_sums_to_matching_count() {
    let (code, out, _) = cli(&["expand", &example(), "--arc", "gamma", "--commutative"]);
    assert_eq!(code, EXIT_OK);
    let total: i64 = out.lines().map(|l| l.split(' ').next().unwrap().parse::<i64>().unwrap()).sum();
    assert_eq!(total, 25);
    assert_eq!(out.lines().count(), 13);
}

#[test]
fn arc_of_the_triangulation_is_a_monomial() {
    for arc in ["1", "2", "3"] {
        let (code, out, _) = cli(&["expand", &example(), "--arc", arc]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out.lines().count(), 1, "{out}");
        assert!(out.starts_with("(1) x^{("));
    }
    let (code, _, err) = cli(&["expand", &example(), "--arc", "alpha"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("boundary"));
}

#[test]
fn terms_format_is_json() {
    let (code, out, _) = cli(&["expand", &example(), "--arc", "mu3", "--format", "terms"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert!(v[0]["exponent"].is_array() && v[0]["q_half_powers"][0].is_array());
}

#[test]
fn matchings_list_and_count() {
    let (code, out, _) = cli(&["matchings", &example(), "--arc", "gamma", "--count"]);
    assert_eq!((code, out.as_str()), (EXIT_OK, "25\n"));
    let (code, out, _) = cli(&["matchings", &example(), "--arc", "gamma"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 25);
    assert!(out.lines().all(|l| l.split(' ').count() == 9), "{out}");
}

#[test]
fn snake_dot_and_listing() {
    let (code, out, _) = cli(&["snake", &example(), "--arc", "gamma", "--dot"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("graph snake {"));
    assert_eq!(out.matches("subgraph cluster_t").count(), 7);
    let (_, listing, _) = cli(&["snake", &example(), "--arc", "gamma"]);
    assert_eq!(listing.lines().count(), 7);
    assert!(listing.starts_with("tile 1 diagonal 3"));
}

#[test]
fn verify_reports_and_exit_codes() {
    let (code, out, _) = cli(&["verify", &example()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().all(|l| l.starts_with("PASS ")), "{out}");
    let (code, out, _) = cli(&["verify", &example(), "--check", "exchange_relation"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 6);
    let (code, _, err) = cli(&["verify", &example(), "--check", "nonsense"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("compatibility"));
}

#[test]
fn failing_check_exits_one() {
    let dir = std::env::temp_dir().join(format!("qorbifold-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let text = example6_1()
        .serialize()
        .replace("{\"path\": [1, 2, 3], \"curve\": \"mu1mu2mu3\"}", "{\"path\": [1, 2, 3], \"curve\": \"mu3\"}");
    let path = dir.join("wrong.json");
    std::fs::write(&path, text).unwrap();
    let (code, out, _) = cli(&["verify", path.to_str().unwrap(), "--check", "exchange_relation"]);
    assert_eq!(code, EXIT_CHECK_FAILED);
    assert!(out.lines().any(|l| l.starts_with("FAIL exchange_relation example6_1 mu3 [1,2,3]: first differing term")), "{out}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(cli(&[]).0, EXIT_INPUT);
    assert_eq!(cli(&["frobnicate"]).0, EXIT_INPUT);
    assert_eq!(cli(&["expand", &example(), "--arc", "gamma", "--bogus"]).0, EXIT_INPUT);
    let (code, _, err) = cli(&["expand", "/nonexistent/x.json", "--arc", "gamma"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.starts_with("error: "));
    let (code, _, err) = cli(&["expand", &example(), "--arc", "delta"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("delta"));
    assert_eq!(cli(&["scenario", "gen", "polygon", "3"]).0, EXIT_INPUT);
    assert_eq!(cli(&["scenario", "gen", "polygon", "6", "--cover", "--flip-depth", "2"]).0, EXIT_INPUT);
    let (code, out, _) = cli(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("expand"));
}

#[test]
fn bad_seed_check_mode_is_an_input_error() {
    // Runs as a subprocess so the environment change stays local.
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_qorbifold"))
        .args(["verify", &example()])
        .env("QCL_SEED_CHECKS", "sometimes")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
    let warn = std::process::Command::new(env!("CARGO_BIN_EXE_qorbifold"))
        .args(["verify", &example()])
        .env("QCL_SEED_CHECKS", "warn")
        .output()
        .unwrap();
    assert_eq!(warn.status.code(), Some(EXIT_OK));
    assert!(warn.stderr.is_empty());
}

#[test]
fn output_is_deterministic() {
    let args = ["expand", &example(), "--arc", "gamma", "--format", "terms"];
    let first = cli(&args);
    for _ in 0..3 {
        assert_eq!(cli(&args), first);
    }
    let binary = |a: &[&str]| std::process::Command::new(env!("CARGO_BIN_EXE_qorbifold")).args(a).output().unwrap().stdout;
    assert_eq!(binary(&args), binary(&args));
    assert_eq!(String::from_utf8(binary(&args)).unwrap(), first.1);
}

struct ClosedPipe;

impl std::io::Write for ClosedPipe {
    fn write(&mut self, _: &[u8]) -> std::io::Result<usize> {
        Err(std::io::ErrorKind::BrokenPipe.into())
    }

    fn flush(&mut self) -> std::io::Result<()> {
        Ok(())
    }
}

#[test]
fn closed_output_pipe_is_not_an_error() {
    let mut err = Vec::new();
    let args = ["qorbifold", "expand", &example(), "--arc", "gamma"].map(String::from);
    assert_eq!(run(args, &mut ClosedPipe, &mut err), EXIT_OK);
    assert!(err.is_empty());
}
