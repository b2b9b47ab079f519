use std::process::{Command, Output};

use serde_json::Value;
use skewcm::classify::ClassificationJson;
use skewcm::harness::SweepSummary;
use skewcm::reduction::ReductionJson;

const WORKED: &str = "4\n1 1 -1 1\n1 1 1 1\n-1 1 1 -1\n1 1 -1 1\n";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skewcm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn worked_file() -> fixture::Path {
    fixture::write("worked.txt", WORKED)
}

/// Test fixtures under the cargo target tmp dir.
mod fixture {
    pub struct Path(pub std::path::PathBuf);

    impl Path {
        pub fn as_str(&self) -> &str {
            self.0.to_str().unwrap()
        }
    }

    pub fn write(name: &str, contents: &str) -> Path {
        let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
        let path = dir.join(format!("{}-{name}", std::process::id()));
        std::fs::write(&path, contents).unwrap();
        Path(path)
    }
}

#[test]
fn classify_worked_example_from_file() {
    let f = worked_file();
    let v = ok_json(&[
        "classify",
        "--variant",
        "a-infinity",
        "--input",
        f.as_str(),
        "--format",
        "signs-text",
    ]);
    assert_eq!(v["case"], "gamma_power");
    assert_eq!(v["r"], 1);
    assert_eq!(v["factor_count"], "2");
    assert_eq!(v["category"], "D^b(mod Gamma^2)");
    let parsed: ClassificationJson = serde_json::from_value(v).unwrap();
    parsed.validate().unwrap();
}

#[test]
fn classify_all_ones_and_a1() {
    let ones4 = "4\n1 1 1 1\n1 1 1 1\n1 1 1 1\n1 1 1 1";
    let v = ok_json(&["classify", "--inline", ones4]);
    assert_eq!(
        (
            v["case"].as_str(),
            v["r"].as_u64(),
            v["factor_count"].as_str()
        ),
        (Some("lambda_power"), Some(1), Some("1"))
    );
    let ones3 = "3\n1 1 1\n1 1 1\n1 1 1";
    let v = ok_json(&["classify", "--variant", "a1", "--inline", ones3]);
    assert_eq!(
        (
            v["case"].as_str(),
            v["r"].as_u64(),
            v["factor_count"].as_str()
        ),
        (Some("semisimple_power"), Some(0), Some("1"))
    );
    assert_eq!(v["cm_type"], "finite");
    assert_eq!(v["indecomposables"], "1");
}

#[test]
fn both_routes_and_all_formats_agree() {
    let graph_text = "4\n1 2\n1 4\n2 3\n2 4";
    let graph_json = r#"{"n":4,"edges":[[1,2],[1,4],[2,3],[2,4]]}"#;
    let signs_json = r#"{"n":4,"signs":[[1,1,-1,1],[1,1,1,1],[-1,1,1,-1],[1,1,-1,1]]}"#;
    let reference = ok_json(&["classify", "--inline", WORKED]);
    for (format, text) in [
        ("graph-text", graph_text),
        ("graph-json", graph_json),
        ("signs-json", signs_json),
    ] {
        for route in ["matrix", "reduction"] {
            let v = ok_json(&[
                "classify", "--format", format, "--inline", text, "--route", route,
            ]);
            assert_eq!(v, reference, "{format} via {route}");
        }
    }
}

#[test]
fn invalid_input_exits_2_with_named_failure() {
    let out = run(&["classify", "--inline", "2\n1 -1\n1 1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("NotSymmetric at (1,2)"), "{stderr}");

    for args in [
        vec!["classify", "--inline", "1\n1"],
        vec!["classify", "--inline", "2\n1 0\n0 1"],
        vec!["classify", "--format", "xml", "--inline", "2\n1 1\n1 1"],
        vec!["classify", "--input", "/nonexistent/file"],
        vec!["classify", "--route", "nope", "--inline", "2\n1 1\n1 1"],
        vec![
            "classify",
            "--permutation",
            "1,1",
            "--inline",
            "2\n1 1\n1 1",
        ],
        vec!["reduce", "--variant", "a1", "--inline", "2\n1 1\n1 1"],
        vec!["enumerate", "--n-max", "9"],
        vec!["verify", "--exhaustive"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn reduce_examples() {
    let f = worked_file();
    let v = ok_json(&["reduce", "--input", f.as_str(), "--replay"]);
    assert_eq!(
        (v["alpha"].as_u64(), v["beta"].as_u64()),
        (Some(1), Some(2))
    );
    assert_eq!(v["n_status"], "isolated_edge_endpoint");
    assert_eq!(v["replay"]["nullity"], 1);
    let report: ReductionJson = serde_json::from_value(v).unwrap();
    report.to_report().unwrap().replay().unwrap();

    let v = ok_json(&["reduce", "--format", "graph-text", "--inline", "5"]);
    assert_eq!(
        (v["alpha"].as_u64(), v["beta"].as_u64()),
        (Some(0), Some(5))
    );
    assert_eq!(v["trace"], Value::Array(vec![]));

    let v = ok_json(&["reduce", "--inline", "2\n1 1\n1 1"]);
    assert_eq!(
        (v["alpha"].as_u64(), v["beta"].as_u64()),
        (Some(0), Some(2))
    );
    assert_eq!(v["trace"].as_array().unwrap().len(), 1);
    assert_eq!(v["trace"][0]["op"], "switch");
}

#[test]
fn oracle_reports_blocks_and_radical() {
    let v = ok_json(&["oracle", "--inline", WORKED]);
    assert_eq!(v["dim"], "8");
    assert_eq!(v["radical_dim"], "4");
    assert_eq!(v["block_count"], "4");
    let v = ok_json(&["oracle", "--variant", "a1", "--inline", WORKED]);
    assert_eq!(v["semisimple"], true);
}

#[test]
fn verify_single_exhaustive_and_sampled() {
    let v = ok_json(&["verify", "--inline", WORKED]);
    assert_eq!(v["agree"], true);
    assert_eq!(v["routes"].as_array().unwrap().len(), 2);

    let s: SweepSummary =
        serde_json::from_value(ok_json(&["verify", "--exhaustive", "--n", "4"])).unwrap();
    assert_eq!((s.inputs, s.verified, s.failed), (64, Some(64), 0));

    let s: SweepSummary = serde_json::from_value(ok_json(&[
        "verify",
        "--samples",
        "1000",
        "--seed",
        "1",
        "--n",
        "10",
    ]))
    .unwrap();
    assert_eq!((s.inputs, s.verified, s.failed), (1000, Some(1000), 0));
}

#[test]
fn enumerate_small_n() {
    let rows: Vec<SweepSummary> = serde_json::from_value(ok_json(&[
        "enumerate",
        "--n-min",
        "2",
        "--n-max",
        "4",
        "--verify",
    ]))
    .unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0].by_case.get("lambda_power"), Some(&2));
    assert_eq!(rows[0].by_r.get(&1), Some(&2));
    assert_eq!(rows[1].by_case.values().sum::<u64>(), 8);
    assert!(rows[1].by_case_and_r.keys().all(|k| k != "lambda_power/0"));
    assert!(rows[2].by_case.get("gamma_power").copied().unwrap_or(0) > 0);
    assert_eq!(rows[2].verified, Some(64));

    let out = run(&["enumerate", "--n-max", "3", "--output", "text"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("lambda_power"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["classify", "--inline", WORKED],
        vec!["reduce", "--inline", WORKED, "--replay"],
        vec![
            "verify",
            "--samples",
            "200",
            "--seed",
            "7",
            "--n",
            "9",
            "--workers",
            "3",
        ],
        vec!["enumerate", "--n-max", "5"],
    ] {
        assert_eq!(run(&args).stdout, run(&args).stdout, "{args:?}");
    }
    let a = run(&[
        "verify",
        "--samples",
        "200",
        "--seed",
        "7",
        "--n",
        "9",
        "--workers",
        "1",
    ]);
    let b = run(&[
        "verify",
        "--samples",
        "200",
        "--seed",
        "7",
        "--n",
        "9",
        "--workers",
        "4",
    ]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn permutation_fixing_n_keeps_the_verdict() {
    let direct = ok_json(&["classify", "--inline", WORKED]);
    let relabeled = ok_json(&["classify", "--inline", WORKED, "--permutation", "3,1,2,4"]);
    assert_eq!(direct, relabeled);
}

#[test]
fn text_output() {
    let out = run(&[
        "classify",
        "--inline",
        WORKED,
        "--output",
        "text",
        "--unicode",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("D^b(mod Γ^2)"), "{text}");
}
