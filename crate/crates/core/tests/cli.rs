//! Command-line behaviour: golden outputs in JSON mode, exit codes and
//! configuration precedence.
//!
//! Each `tests/golden/NAME.cmd` holds `exit N` on its first line and one
//! argument per following line; `NAME.json` is the expected standard
//! output, compared byte for byte. Set `EQCTT_BLESS=1` to rewrite the
//! expected files from the current output.

use std::fs;
use std::path::PathBuf;

use eqctt::cli::{run, Outcome, EXIT_BUDGET, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};

fn eqctt(args: &[&str], env: &[(&str, &str)]) -> Outcome {
    let lookup = |k: &str| env.iter().find(|(n, _)| *n == k).map(|(_, v)| v.to_string());
    run(std::iter::once("eqctt").chain(args.iter().copied()), &lookup)
}

#[test]
fn golden_outputs() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden");
    let bless = std::env::var("EQCTT_BLESS").is_ok_and(|v| v == "1");
    let mut cases: Vec<PathBuf> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "cmd"))
        .collect();
    cases.sort();
    assert!(cases.len() >= 20);
    let mut mismatches = Vec::new();
    for cmd in &cases {
        let spec = fs::read_to_string(cmd).unwrap();
        let mut lines = spec.lines();
        let code: i32 =
            lines.next().and_then(|l| l.strip_prefix("exit ")).and_then(|c| c.parse().ok()).expect("exit line");
        let mut args = vec!["--json"];
        args.extend(lines);
        let out = eqctt(&args, &[]);
        let expected_path = cmd.with_extension("json");
        if bless {
            fs::write(&expected_path, &out.stdout).unwrap();
            continue;
        }
        let expected = fs::read_to_string(&expected_path).unwrap_or_default();
        let name = cmd.file_stem().unwrap().to_string_lossy().into_owned();
        if out.code != code {
            mismatches.push(format!("{name}: exit {} instead of {code}", out.code));
        }
        if out.stdout != expected {
            mismatches.push(format!("{name}: output differs\n--- expected\n{expected}\n--- got\n{}", out.stdout));
        }
    }
    assert!(mismatches.is_empty(), "{}", mismatches.join("\n"));
}

#[test]
fn output_is_deterministic() {
    let args = ["--json", "check", "corpus/comps.ectt", "corpus/j.ectt", "corpus/funext.ectt"];
    let first = eqctt(&args, &[]);
    for _ in 0..3 {
        assert_eq!(eqctt(&args, &[]).stdout, first.stdout);
    }
}

#[test]
fn flags_override_environment() {
    let env = [("EQCTT_DIM", "2")];
    let via_env = eqctt(&["--json", "lab", "triangulate", "I1"], &env);
    assert!(via_env.stdout.contains("\"D\": 2"), "{}", via_env.stdout);
    let via_flag = eqctt(&["--json", "--dim", "1", "lab", "triangulate", "I1"], &env);
    assert!(via_flag.stdout.contains("\"D\": 1"), "{}", via_flag.stdout);
    let default = eqctt(&["--json", "lab", "triangulate", "I1"], &[]);
    assert!(default.stdout.contains("\"D\": 3"));
}

#[test]
fn invalid_environment_is_a_usage_error() {
    assert_eq!(eqctt(&["lab", "hom-count", "1", "1"], &[("EQCTT_KMAX", "zero")]).code, EXIT_USAGE);
    assert_eq!(eqctt(&["lab", "hom-count", "1", "1"], &[("EQCTT_BUDGET", "0")]).code, EXIT_USAGE);
    assert_eq!(eqctt(&["frobnicate"], &[]).code, EXIT_USAGE);
}

#[test]
fn kmax_below_comp_arity_exceeds_the_budget() {
    let out = eqctt(&["--kmax", "2", "check", "corpus/comps.ectt"], &[]);
    assert_eq!(out.code, EXIT_BUDGET, "{}", out.stdout);
}

#[test]
fn human_output() {
    let out = eqctt(&["lab", "hom-count", "1", "1"], &[]);
    assert_eq!((out.code, out.stdout.as_str()), (EXIT_OK, "3\n"));
    let out = eqctt(&["lab", "lift-check", "--map", "box->1"], &[]);
    assert_eq!(out.code, EXIT_FAILURE);
    assert!(out.stdout.contains("refuting box"), "{}", out.stdout);
    let out = eqctt(&["check", "corpus/bad-boundary.ectt"], &[]);
    assert_eq!(out.code, EXIT_FAILURE);
    assert!(out.stdout.contains("BoundaryMismatch"), "{}", out.stdout);
}
