use holokernel_cli::{run, Outcome, DIVERGED, PASS, SCHEMA_ERROR, VERIFICATION_FAILED};
use serde_json::Value;
use std::path::PathBuf;
use std::process::Command;

fn fixture(name: &str) -> String {
    holokernel::io::fixture_path(name).display().to_string()
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("holokernel").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = cli(&all);
    let v = serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout));
    (out.code, v)
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(cli(&["--help"]).code, PASS);
    assert_eq!(cli(&["fueter", "--help"]).code, PASS);
    let bad = cli(&["forms-verify", "--bogus"]);
    assert_eq!(bad.code, SCHEMA_ERROR);
    assert!(bad.stdout.contains("--bogus"));
    assert_eq!(cli(&["no-such-command"]).code, SCHEMA_ERROR);
    assert_eq!(cli(&["model-run", "--samples", "many"]).code, SCHEMA_ERROR);
}

#[test]
fn forms_verify_passes_and_detects_mutation() {
    let (code, v) = json(&["forms-verify", "--samples", "300"]);
    assert_eq!(code, PASS, "{v:#}");
    assert_eq!(v["ranks"]["lambda2_dim8"], serde_json::json!([7, 21]));
    assert_eq!(v["ranks"]["orbit_spin7"], 43);
    assert_eq!(v["ranks"]["cayley_locus"], 12);
    assert_eq!(v["normalizations"]["omega_squared_factor"], "1/2");
    assert_eq!(v["calibration"]["violations"], 0);

    let (code, v) = json(&["forms-verify", "--samples", "300", "--mutate"]);
    assert_eq!(code, VERIFICATION_FAILED);
    assert_eq!(v["counterexample"]["name"], "orbit_rank_spin7");
    let failing: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(failing.contains(&"energy_identity_failures"), "{failing:?}");
    assert!(failing.contains(&"taming_self"), "{failing:?}");
    let identity = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "energy_identity_failures")
        .unwrap();
    assert!(identity["witness"]["alpha"].is_object());
}

#[test]
fn model_run_agrees_with_oracles() {
    for (name, special) in [("circle", "[1,1]"), ("torus", "[1,2,1]"), ("wall", "")] {
        let (code, v) = json(&[
            "model-run",
            "--input",
            &fixture(&format!("{name}.json")),
            "--oracle",
            name,
            "--samples",
            "25",
        ]);
        assert_eq!(code, PASS, "{name}: {}", v["first_failure"]);
        let grid = v["grid"].as_array().unwrap();
        assert!(grid.iter().all(|p| p["agree"] != false));
        if !special.is_empty() {
            assert_eq!(grid[0]["label"], "trivial");
            assert_eq!(serde_json::to_string(&grid[0]["betti"]).unwrap(), special);
        }
    }
    let (code, v) = json(&[
        "model-run",
        "--input",
        &fixture("circle.json"),
        "--alpha",
        "0:6.283185307179586",
        "--samples",
        "0",
    ]);
    assert_eq!(code, PASS);
    assert_eq!(
        v["grid"].as_array().unwrap().last().unwrap()["betti"],
        serde_json::json!([1, 1])
    );
}

#[test]
fn model_run_exit_codes() {
    let (code, v) = json(&["model-run", "--input", &fixture("growth.json"), "--samples", "5"]);
    assert_eq!(code, DIVERGED);
    assert_eq!(v["verdict"], "diverged");
    assert!(v["first_failure"]["refused"].is_string());

    // 1 − 2t in place of 1 − t: untwisted Betti numbers drop to zero
    let mut doubled: Value = serde_json::from_str(&std::fs::read_to_string(fixture("circle.json")).unwrap()).unwrap();
    let line = &mut doubled["flows"][1]["count"];
    let twice = 2 * line.as_str().unwrap().parse::<i64>().unwrap();
    *line = Value::from(twice.to_string());
    let path = tmp("circle_doubled.json");
    std::fs::write(&path, serde_json::to_string_pretty(&doubled).unwrap()).unwrap();
    let (code, v) = json(&[
        "model-run",
        "--input",
        path.to_str().unwrap(),
        "--oracle",
        "circle",
        "--samples",
        "3",
    ]);
    assert_eq!(code, VERIFICATION_FAILED, "{v:#}");
    assert_eq!(v["verdict"], "oracle mismatch");

    let (code, _) = json(&["model-run", "--input", &fixture("circle.json"), "--oracle", "torus"]);
    assert_eq!(code, SCHEMA_ERROR);
    let (code, _) = json(&["model-run", "--input", &fixture("circle.json"), "--oracle", "sphere"]);
    assert_eq!(code, SCHEMA_ERROR);
    let (code, _) = json(&["model-run", "--input", "/nonexistent/model.json"]);
    assert_eq!(code, SCHEMA_ERROR);
}

#[test]
fn malformed_input_is_located() {
    let text = std::fs::read_to_string(fixture("circle.json")).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["critical_points"][1]["index"] = Value::from("one");
    let path = tmp("circle_bad_index.json");
    std::fs::write(&path, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    let (code, report) = json(&["model-run", "--input", path.to_str().unwrap()]);
    assert_eq!(code, SCHEMA_ERROR);
    let err = report["error"].as_str().unwrap();
    assert!(err.contains("critical_points[1].index"), "{err}");
    assert!(err.contains("line "), "{err}");

    let path = tmp("truncated.json");
    std::fs::write(&path, &text[..text.len() / 2]).unwrap();
    assert_eq!(
        json(&["atlas-check", "--input", path.to_str().unwrap()]).0,
        SCHEMA_ERROR
    );
}

#[test]
fn atlas_check_and_mutation() {
    for name in [
        "atlas_three_chart",
        "atlas_two_chamber",
        "atlas_dense_wall",
        "atlas_pairing",
    ] {
        let (code, v) = json(&[
            "atlas-check",
            "--input",
            &fixture(&format!("{name}.json")),
            "--samples",
            "8",
        ]);
        assert_eq!(code, PASS, "{name}: {v:#}");
        assert_eq!(v["gauge"]["verdict_preserved"], true);
    }
    let (code, v) = json(&["atlas-check", "--input", &fixture("atlas_three_chart.json"), "--mutate"]);
    assert_eq!(code, VERIFICATION_FAILED);
    assert_eq!(v["cocycle"]["verified"], false);
    assert_eq!(v["gauge"]["verdict_preserved"], true);
    assert!(v["cocycle"]["failure"]["route"].is_array());
}

#[test]
fn glue_writes_the_generating_function() {
    let out = tmp("glue.json");
    let (code, v) = json(&[
        "glue",
        "--input",
        &fixture("atlas_pairing.json"),
        "--input",
        &fixture("sections_pairing.json"),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, PASS, "{v:#}");
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(
        written["terms"],
        serde_json::json!([{"class": ["1", "1"], "count": "13"}])
    );
    assert!(v["transport"].as_array().unwrap().iter().all(|t| t["pass"] == true));
    let (code, _) = json(&["glue", "--input", &fixture("atlas_pairing.json")]);
    assert_eq!(code, SCHEMA_ERROR);
}

#[test]
fn slag_counts() {
    let (code, v) = json(&["slag", "--input", &fixture("slag_two_class.json")]);
    assert_eq!((code, v["value"].as_str()), (PASS, Some("2")));
    let (_, v) = json(&["slag", "--input", &fixture("slag_two_class.json"), "--kappa", "0,0"]);
    assert_eq!(v["value"], "1");
    let (_, v) = json(&["slag", "--input", &fixture("slag_two_class.json"), "--kappa", "-1,0"]);
    assert_eq!(v["value"], "0");
    let (code, _) = json(&["slag", "--input", &fixture("slag_two_class.json"), "--kappa", "1"]);
    assert_eq!(code, SCHEMA_ERROR);
}

#[test]
fn fueter_exit_codes() {
    let (code, v) = json(&[
        "fueter",
        "--N",
        "5",
        "--samples",
        "5",
        "--input",
        &fixture("family_crossing.json"),
        "--input",
        &fixture("family_hermitian.json"),
    ]);
    assert_eq!(code, PASS, "{v:#}");
    assert_eq!(v["kernel_dimension"], 4);
    assert_eq!(v["dense_spectrum"]["nullity"], 4);
    assert_eq!(v["families"][0]["spectral_flow"]["flow"], 1);
    assert_eq!(v["families"][1]["spectral_flow"]["flow"], 1);
    assert_eq!(v["families"][1]["realified"]["flow"], 2);

    assert_eq!(json(&["fueter", "--N", "4"]).0, SCHEMA_ERROR);
    assert_eq!(
        json(&["fueter", "--N", "5", "--samples", "3", "--mutate"]).0,
        VERIFICATION_FAILED
    );
}

#[test]
fn output_is_reproducible() {
    let model = fixture("torus.json");
    let atlas = fixture("atlas_three_chart.json");
    let family = fixture("family_hermitian.json");
    let runs: [&[&str]; 4] = [
        &["forms-verify", "--samples", "200"],
        &["model-run", "--input", &model, "--samples", "10", "--seed", "11"],
        &["atlas-check", "--input", &atlas, "--seed", "11"],
        &["fueter", "--N", "5", "--samples", "4", "--input", &family],
    ];
    for args in runs {
        let a = cli(args);
        let b = cli(args);
        assert_eq!(a, b, "{args:?}");
    }
    let other = cli(&["model-run", "--input", &model, "--samples", "10", "--seed", "12"]);
    assert_ne!(
        other,
        cli(&["model-run", "--input", &model, "--samples", "10", "--seed", "11"])
    );
}

#[test]
fn binary_smoke() {
    let out = Command::new(env!("CARGO_BIN_EXE_holokernel"))
        .args(["slag", "--input", &fixture("slag_two_class.json")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(PASS));
    assert!(String::from_utf8(out.stdout).unwrap().contains("value: 2"));
    let out = Command::new(env!("CARGO_BIN_EXE_holokernel"))
        .args(["model-run", "--input", &fixture("growth.json"), "--samples", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(DIVERGED));
}
