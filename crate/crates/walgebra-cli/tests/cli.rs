use std::path::PathBuf;
use std::process::Command;

use walgebra::weakgen::ClosureReport;
use walgebra_cli::*;

fn ok(args: &[&str]) -> Outcome {
    run_args(args).unwrap_or_else(|e| panic!("{args:?}: {e}"))
}

fn err(args: &[&str]) -> CliError {
    run_args(args).expect_err("should fail")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("walg-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn algebra_of_21() {
    let out = ok(&["algebra", "--partition", "2,1"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.report.contains("|J^f| = 4"), "{}", out.report);
    let json = ok(&["algebra", "--partition", "2,1", "--format", "json"]);
    let v: AlgebraReport = serde_json::from_str(&json.report).unwrap();
    assert_eq!(v.dim_gf, 4);
    assert_eq!(v.dim_g, 8);
    let weights: Vec<String> = v.generators.iter().map(|g| g.weight.to_string()).collect();
    assert_eq!(weights, ["1", "3/2", "3/2", "2"]);
}

#[test]
fn sl2_bracket() {
    let out = ok(&["bracket", "--partition", "2", "--a", "2,1,1", "--b", "q2^(1,1)"]);
    assert!(out.report.contains("λ^3: (-1/2)"), "{}", out.report);
    let json = ok(&["bracket", "--partition", "2", "--a", "2,1,1", "--b", "2,1,1", "--format", "json"]);
    let v: BracketReport = serde_json::from_str(&json.report).unwrap();
    assert_eq!(v.bracket.lambda.len(), 4);
    let sym = ok(&["bracket", "--partition", "2", "--a", "2,1,1", "--b", "2,1,1", "--ktilde", "symbolic"]);
    assert!(sym.report.contains('k'), "{}", sym.report);
}

#[test]
fn unknown_generator_exits_2() {
    let e = err(&["bracket", "--partition", "2,1", "--a", "7,1,1", "--b", "1,2,2"]);
    assert!(matches!(e, CliError::UnknownGenerator(_)));
    assert_eq!(e.exit_code(), EXIT_SPEC);
    assert!(matches!(err(&["bracket", "--partition", "2,1", "--a", "x", "--b", "1,2,2"]), CliError::UnknownGenerator(_)));
}

#[test]
fn spec_errors_exit_2() {
    for args in [
        &["algebra", "--kind", "sl-super", "--partition", "2", "--partition2", "2"][..],
        &["algebra", "--partition", "0,1"],
        &["algebra", "--partition", "a,b"],
        &["algebra"],
        &["algebra", "--partition", "2", "--partition2", "1"],
        &["algebra", "--bogus"],
    ] {
        assert_eq!(err(args).exit_code(), EXIT_SPEC, "{args:?}");
    }
}

#[test]
fn verify_exit_codes_and_round_trip() {
    let out = ok(&["verify", "--partition", "3,2", "--flavor", "small", "--format", "json"]);
    assert_eq!(out.code, EXIT_OK);
    let d = decode_derivation(&out.report).unwrap();
    assert!(d.complete);
    assert_eq!(d.recovered.len(), 8);
    assert_eq!(serde_json::from_str::<serde_json::Value>(&serde_json::to_string(&d).unwrap()).unwrap(), serde_json::from_str::<serde_json::Value>(&out.report).unwrap());
    // a single block has no schedule
    assert_eq!(err(&["verify", "--partition", "3"]).exit_code(), EXIT_SPEC);
    let text = ok(&["verify", "--partition", "2,1", "--flavor", "small"]);
    assert!(text.report.contains("complete"));
    assert!(!text.report.contains("q3^"));
}

#[test]
fn closure_exit_codes() {
    let none = ok(&["closure", "--partition", "2,1", "--seed", "none"]);
    assert_eq!(none.code, EXIT_VERIFY);
    assert!(none.report.contains("INCOMPLETE"));
    let json = ok(&["closure", "--partition", "3,2", "--seed", "big", "--format", "json"]);
    assert_eq!(json.code, EXIT_OK);
    let r: ClosureReport = serde_json::from_str(&json.report).unwrap();
    assert!(r.complete());
    let capped = ok(&["closure", "--partition", "3,2", "--seed", "big", "--max-weight", "3/2", "--format", "json"]);
    let r: ClosureReport = serde_json::from_str(&capped.report).unwrap();
    assert_eq!(r.caps.max_weight.to_string(), "3/2");
    assert_eq!(capped.code, EXIT_VERIFY);
    assert_eq!(err(&["closure", "--partition", "3,2", "--max-weight", "0"]).exit_code(), EXIT_SPEC);
    assert_eq!(err(&["closure", "--partition", "3,2", "--max-weight", "1/3"]).exit_code(), EXIT_SPEC);
    assert_eq!(ok(&["closure", "--partition", "2,2", "--seed", "preset-small"]).code, EXIT_OK);
    assert_eq!(err(&["closure", "--partition", "3,2", "--seed", "preset-big"]).exit_code(), EXIT_SPEC);
}

#[test]
fn axioms_report() {
    let out = ok(&["axioms", "--kind", "sl-super", "--partition", "2", "--partition2", "1", "--format", "json"]);
    assert_eq!(out.code, EXIT_OK);
    let a: AxiomReport = serde_json::from_str(&out.report).unwrap();
    assert_eq!(a.summary.skew_violations + a.summary.jacobi_violations, 0);
    assert!(a.conformal.unwrap().passes);
    let sym = ok(&["axioms", "--partition", "2,1", "--ktilde", "symbolic", "--format", "json"]);
    let a: AxiomReport = serde_json::from_str(&sym.report).unwrap();
    assert!(a.conformal.is_none());
}

#[test]
fn config_files() {
    let toml = "command = \"closure\"\npartition = \"3,2\"\nseed = \"big\"\nmax_weight = [7, 2]\nformat = \"json\"\n";
    let cfg = parse_config(toml, false).unwrap();
    assert_eq!(cfg.command, Some(CommandName::Closure));
    assert_eq!(cfg.max_weight.unwrap().to_string(), "7/2");
    assert!(matches!(parse_config("partiton = \"3\"", false), Err(CliError::Config(_))));
    assert!(matches!(parse_config("{\"kind\": \"sl\", \"extra\": 1}", true), Err(CliError::Config(_))));

    let path = scratch("run.toml");
    std::fs::write(&path, toml).unwrap();
    let out = ok(&["--config", path.to_str().unwrap(), "run"]);
    let r: ClosureReport = serde_json::from_str(&out.report).unwrap();
    assert_eq!(r.caps.max_weight.to_string(), "7/2");
    // flags override the config
    let out = ok(&["--config", path.to_str().unwrap(), "closure", "--partition", "2,1", "--max-weight", "2"]);
    let r: ClosureReport = serde_json::from_str(&out.report).unwrap();
    assert_eq!(r.derivation.spec, "(2,1)");
    assert_eq!(r.caps.max_weight.to_string(), "2");

    let jpath = scratch("run.json");
    std::fs::write(&jpath, r#"{"command": "algebra", "kind": "sl-super", "partition": "3", "partition2": "2"}"#).unwrap();
    assert!(ok(&["--config", jpath.to_str().unwrap(), "run"]).report.contains("|J^f|"));

    assert!(matches!(err(&["run"]), CliError::Config(_)));
    assert!(matches!(err(&["--config", "/nonexistent/walg.toml", "run"]), CliError::Config(_)));
}

#[test]
fn output_file() {
    let path = scratch("algebra.json");
    let out = ok(&["algebra", "--partition", "3", "--format", "json", "--output", path.to_str().unwrap()]);
    assert!(out.report.is_empty());
    let v: AlgebraReport = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v.dim_gf, 2);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_walg");
    let run = |args: &[&str]| Command::new(bin).args(args).env("W_THREADS", "2").output().unwrap();
    let o = run(&["algebra", "--partition", "2,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("|J^f| = 4"));
    let o = run(&["algebra", "--kind", "sl-super", "--partition", "2", "--partition2", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("walg: "));
    assert_eq!(run(&["closure", "--partition", "2,1", "--seed", "none"]).status.code(), Some(3));
    assert_eq!(run(&["bracket", "--partition", "2", "--a", "1,1,1", "--b", "2,1,1"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--partition", "2,1", "--flavor", "small"]).status.code(), Some(0));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn thread_count_from_env() {
    // only inspects the variable; no pool is built here
    std::env::set_var("W_THREADS", "3");
    assert_eq!(threads_from_env(), Some(3));
    std::env::set_var("W_THREADS", "zero");
    assert_eq!(threads_from_env(), None);
    std::env::remove_var("W_THREADS");
}

#[test]
fn fuzz_seeds_parse() {
    let corpus = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus");
    for entry in std::fs::read_dir(corpus.join("report_json")).unwrap() {
        let text = std::fs::read_to_string(entry.unwrap().path()).unwrap();
        decode_derivation(&text).unwrap();
    }
    for entry in std::fs::read_dir(corpus.join("config")).unwrap() {
        let path = entry.unwrap().path();
        let json = path.extension().is_some_and(|e| e == "json");
        parse_config(&std::fs::read_to_string(&path).unwrap(), json).unwrap();
    }
}
