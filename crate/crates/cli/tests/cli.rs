use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use operadkit::report::CheckResult;
use operadkit_cli::config::{parse_args, OUTPUT_DIR_ENV};
use operadkit_cli::report::Report;
use operadkit_cli::{emit, EXIT_FAIL, EXIT_INVALID, EXIT_PASS};
use serde_json::{json, Value};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR"))
        .join("cli-tests")
        .join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_operadkit"))
        .args(args)
        .env_remove(OUTPUT_DIR_ENV)
        .output()
        .unwrap()
}

fn json_report(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(EXIT_PASS),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn dims_csv_for_ass() {
    let out = run(&[
        "dims",
        "--operad",
        "ass",
        "--max-arity",
        "3",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(EXIT_PASS));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "arity,dim\n1,1\n2,2\n3,6\n"
    );
}

#[test]
fn kn_table_rows_are_concentrated() {
    let report = json_report(&["kn-table", "--operad", "com", "--max-d", "5"]);
    assert_eq!(report["schema_version"], "operadkit-report/1");
    assert_eq!(report["command"], "kn-table");
    let results = report["results"].as_array().unwrap();
    let rows: Vec<&Value> = results
        .iter()
        .filter(|r| r["name"] == "kn_concentration")
        .collect();
    assert_eq!(rows.len(), (2..=5).sum::<usize>());
    for r in rows {
        let (n, d) = (
            r["params"]["n"].as_i64().unwrap(),
            r["params"]["d"].as_i64().unwrap(),
        );
        let homology = r["got"]["homology"].as_object().unwrap();
        if n < d {
            assert_eq!(
                homology.keys().collect::<Vec<_>>(),
                vec![&(d - n).to_string()]
            );
        } else {
            assert!(homology.is_empty());
        }
        assert_eq!(r["pass"], true);
    }
    assert!(results
        .iter()
        .any(|r| r["name"] == "tower_map_zero_on_homology"));
}

#[test]
fn koszul_check_for_lie() {
    let report = json_report(&["koszul-check", "--operad", "lie", "--max-arity", "4"]);
    let h0: Vec<i64> = report["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["got"]["homology"]["0"].as_i64().unwrap())
        .collect();
    assert_eq!(h0, vec![1, 1, 2, 6]);
}

#[test]
fn bar_reports_are_byte_identical() {
    let args = ["bar", "--operad", "com", "--max-arity", "4"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(EXIT_PASS));
    assert!(!first.stdout.is_empty());
    assert!(first.stdout == second.stdout, "reports differ between runs");
    let report: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(report["timing"], Value::Null);
    assert_eq!(report["config_echo"]["max_arity"], 4);
}

#[test]
fn every_command_is_deterministic() {
    let algebra = data("square-zero-ass-2.json");
    let commands: Vec<Vec<&str>> = vec![
        vec!["dims", "--operad", "lie"],
        vec!["kn-table", "--operad", "ass", "--max-d", "4"],
        vec!["koszul-check", "--operad", "com", "--max-arity", "4"],
        vec!["bar-term", "--operad", "ass", "--max-arity", "4"],
        vec!["axioms", "--operad", "com"],
        vec!["algebra", "--algebra-file", algebra.to_str().unwrap()],
    ];
    for args in commands {
        for format in ["json", "csv", "pretty"] {
            let mut full = args.clone();
            full.extend(["--format", format]);
            let a = run(&full);
            let b = run(&full);
            assert_eq!(
                a.status.code(),
                Some(EXIT_PASS),
                "{full:?}: {}",
                String::from_utf8_lossy(&a.stderr)
            );
            assert!(a.stdout == b.stdout, "{full:?} differs between runs");
        }
    }
}

#[test]
fn timing_is_opt_in() {
    let report = json_report(&[
        "bar-term",
        "--operad",
        "com",
        "--max-arity",
        "3",
        "--timing",
    ]);
    assert!(report["timing"]["total_ms"].is_u64());
    assert!(report["timing"]["jobs_ms"]["bar_term:3"].is_u64());
}

#[test]
fn output_file_and_environment_directory() {
    let dir = scratch("output");
    let explicit = dir.join("nested/report.json");
    let out = run(&[
        "bar",
        "--operad",
        "lie",
        "--max-arity",
        "3",
        "--output",
        explicit.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(EXIT_PASS));
    assert!(out.stdout.is_empty());
    let written: Value =
        serde_json::from_str(&std::fs::read_to_string(&explicit).unwrap()).unwrap();
    let printed = json_report(&["bar", "--operad", "lie", "--max-arity", "3"]);
    assert_eq!(written["results"], printed["results"]);
    assert_eq!(written["config_echo"]["output"], explicit.to_str().unwrap());

    let env_dir = dir.join("env");
    let out = Command::new(env!("CARGO_BIN_EXE_operadkit"))
        .args([
            "dims",
            "--operad",
            "com",
            "--max-arity",
            "3",
            "--format",
            "csv",
        ])
        .env(OUTPUT_DIR_ENV, &env_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_PASS));
    assert_eq!(
        std::fs::read_to_string(env_dir.join("dims.csv")).unwrap(),
        "arity,dim\n1,1\n2,1\n3,1\n"
    );
}

#[test]
fn algebra_suites_on_bundled_documents() {
    for name in [
        "poly-com-1-4.json",
        "poly-com-2-3.json",
        "square-zero-ass-2.json",
        "heisenberg-lie.json",
        "free-odd-com.json",
    ] {
        let path = data(name);
        let report = json_report(&["algebra", "--algebra-file", path.to_str().unwrap()]);
        let names: Vec<&str> = report["results"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| r["name"].as_str().unwrap())
            .collect();
        assert!(names.contains(&"graded_fiber"), "{name}");
        assert!(names.contains(&"tower_stabilization"), "{name}");
        assert!(names.contains(&"cotangent_fiber"), "{name}");
        assert_eq!(
            names.contains(&"pi0_truncation"),
            name != "free-odd-com.json",
            "{name}"
        );
    }
}

#[test]
fn operad_and_algebra_files() {
    let lie = data("lie-4.json");
    let alg = data("heisenberg-lie.json");
    let report = json_report(&[
        "axioms",
        "--operad-file",
        lie.to_str().unwrap(),
        "--max-arity",
        "4",
        "--algebra-file",
        alg.to_str().unwrap(),
    ]);
    assert_eq!(report["results"].as_array().unwrap().len(), 2);
    let report = json_report(&[
        "bar",
        "--operad-file",
        lie.to_str().unwrap(),
        "--max-arity",
        "3",
    ]);
    assert_eq!(report["results"][2]["got"]["homology"], json!({"2": 1}));
}

fn assert_invalid(args: &[&str], flag: &str) {
    let out = run(args);
    assert_eq!(out.status.code(), Some(EXIT_INVALID), "{args:?}");
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains(flag), "{args:?}: {stderr}");
    assert!(out.stdout.is_empty());
}

#[test]
fn invalid_input_exits_with_two() {
    assert_invalid(
        &["dims", "--operad", "ass", "--max-arity", "7"],
        "--max-arity",
    );
    assert_invalid(&["dims", "--operad", "pre-lie"], "--operad");
    assert_invalid(&["dims", "--max-arity", "3"], "--operad");
    assert_invalid(
        &["kn-table", "--operad", "com", "--max-arity", "3"],
        "--max-arity",
    );
    assert_invalid(&["dims", "--operad", "com", "--format", "xml"], "--format");
    assert_invalid(
        &["dims", "--operad-file", "/nonexistent/operad.json"],
        "--operad-file",
    );
    assert_invalid(
        &["algebra", "--algebra-file", "/nonexistent/a.json"],
        "--algebra-file",
    );
    let lie = data("lie-4.json");
    assert_invalid(
        &[
            "dims",
            "--operad-file",
            lie.to_str().unwrap(),
            "--max-arity",
            "5",
        ],
        "--operad-file",
    );

    let dir = scratch("invalid");
    let garbage = dir.join("garbage.json");
    std::fs::write(&garbage, "{\"schema\": \"operadkit-algebra/1\"").unwrap();
    assert_invalid(
        &["algebra", "--algebra-file", garbage.to_str().unwrap()],
        "--algebra-file",
    );
    let blocker = dir.join("file");
    std::fs::write(&blocker, "").unwrap();
    let target = blocker.join("report.json");
    assert_invalid(
        &[
            "dims",
            "--operad",
            "com",
            "--output",
            target.to_str().unwrap(),
        ],
        "--output",
    );
}

#[test]
fn failing_check_exits_with_one() {
    let cfg = parse_args(["operadkit", "bar", "--operad", "com"]).unwrap();
    let bad = CheckResult::new("koszul_pair")
        .param("arity", 3)
        .compare(json!({"homology": {"2": 2}}), json!({"homology": {"2": 1}}));
    let good = CheckResult::new("koszul_pair")
        .param("arity", 2)
        .compare(json!(1), json!(1));
    let dir = scratch("failing");
    let report = Report::new(&cfg, vec![good, bad], None);
    assert_eq!(emit(&cfg, &report, Some(dir.clone())), EXIT_FAIL);
    let written: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("bar.json")).unwrap()).unwrap();
    assert_eq!(written["results"][1]["pass"], false);
    let ok = Report::new(&cfg, Vec::new(), None);
    assert_eq!(emit(&cfg, &ok, Some(dir)), EXIT_PASS);
}
