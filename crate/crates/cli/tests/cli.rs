use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn upo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_upo"))
        .args(args)
        .env_remove("PO_GUARD_MAX")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn prob_every_engine() {
    let example = data("example.json");
    for engine in ["auto", "joint", "enum", "fpt", "oracle"] {
        let out = upo(&["prob", "--instance", &example, "--assignment", "1=b,2=a,3=c", "--engine", engine]);
        let v = json(&out);
        assert_eq!(v["probability"], "2/5", "{engine}");
        assert_eq!(v["assignment"]["1"], "b");
        let out = upo(&["prob", "--instance", &example, "--assignment", "1=a,2=b,3=c", "--engine", engine]);
        assert_eq!(json(&out)["probability"], "1/1");
    }
}

#[test]
fn assignment_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.json");
    std::fs::write(&path, r#"{"1": "b", "2": "a", "3": "c"}"#).unwrap();
    let out = upo(&["prob", "--instance", &data("example.json"), "--assignment", path.to_str().unwrap()]);
    assert_eq!(json(&out)["probability"], "2/5");
}

#[test]
fn check_questions() {
    let example = data("example.json");
    let ask = |assignment: &str, question: &str| {
        json(&upo(&["check", "--instance", &example, "--assignment", assignment, "--question", question]))["answer"]
            .clone()
    };
    assert_eq!(ask("1=b,2=a,3=c", "nonzero"), true);
    assert_eq!(ask("1=b,2=a,3=c", "one"), false);
    assert_eq!(ask("1=a,2=b,3=c", "one"), true);
    assert_eq!(ask("1=a,2=c,3=b", "nonzero"), false);
    assert_eq!(ask("1=a,2=c,3=b", "dominated"), true);
    assert_eq!(ask("1=b,2=a,3=c", "dominated"), false);
}

#[test]
fn check_matches_oracle_byte_for_byte() {
    let example = data("example.json");
    let swap = data("swap.json");
    let cases = [
        (&example, "1=b,2=a,3=c"),
        (&example, "1=a,2=c,3=b"),
        (&example, "1=c,2=b,3=a"),
        (&swap, "x=a,y=b"),
        (&swap, "x=b,y=a"),
    ];
    for (instance, assignment) in cases {
        for question in ["nonzero", "one", "dominated"] {
            let fast = upo(&["check", "--instance", instance, "--assignment", assignment, "--question", question]);
            let oracle = upo(&[
                "check", "--instance", instance, "--assignment", assignment, "--question", question, "--engine", "oracle",
            ]);
            assert!(fast.status.success() && oracle.status.success());
            assert_eq!(fast.stdout, oracle.stdout, "{question} on {assignment}");
        }
        let fast = upo(&["prob", "--instance", instance, "--assignment", assignment]);
        let oracle = upo(&["prob", "--instance", instance, "--assignment", assignment, "--engine", "oracle"]);
        assert_eq!(fast.stdout, oracle.stdout);
    }
}

#[test]
fn witness_replays() {
    let out = upo(&[
        "check", "--instance", &data("example.json"), "--assignment", "1=b,2=a,3=c", "--question", "nonzero",
        "--witness",
    ]);
    let v = json(&out);
    assert_eq!(v["answer"], true);
    let w = &v["witness"];
    // agent 1 must have drawn b,a,c for b to be its pick
    assert_eq!(w["orders"]["1"], serde_json::json!(["b", "a", "c"]));
    assert_eq!(w["permutation"].as_array().unwrap().len(), 3);
}

#[test]
fn po_question_needs_one_profile() {
    let out = upo(&["check", "--instance", &data("example.json"), "--assignment", "1=a,2=b,3=c", "--question", "po"]);
    assert_eq!(out.status.code(), Some(1));
    let gen = upo(&["gen", "--n", "3", "--seed", "4"]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("certain.json");
    std::fs::write(&path, &gen.stdout).unwrap();
    let out = upo(&["check", "--instance", path.to_str().unwrap(), "--assignment", "1=o1,2=o2,3=o3", "--question", "po"]);
    assert!(json(&out)["answer"].is_boolean());
}

#[test]
fn joint_instance() {
    let swap = data("swap.json");
    let v = json(&upo(&["prob", "--instance", &swap, "--assignment", "x=a,y=b"]));
    assert_eq!(v["probability"], "1/2");
    let out = upo(&["prob", "--instance", &swap, "--assignment", "x=a,y=b", "--engine", "fpt"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&upo(&["solve", "--instance", &swap, "--goal", "certain"]));
    assert_eq!(v["assignment"], Value::Null);
    assert_eq!(v["reason"], "no certainly-PO assignment");
    let v = json(&upo(&["solve", "--instance", &swap, "--goal", "best"]));
    assert_eq!(v["probability"], "1/2");
}

#[test]
fn solve_example() {
    let example = data("example.json");
    let v = json(&upo(&["solve", "--instance", &example, "--goal", "certain"]));
    assert_eq!(v["assignment"], serde_json::json!({"1": "a", "2": "b", "3": "c"}));
    let v = json(&upo(&["solve", "--instance", &example, "--goal", "best"]));
    assert_eq!(v["probability"], "1/1");
}

#[test]
fn validation_errors_exit_one() {
    let out = upo(&["prob", "--instance", &data("bad_sum.json"), "--assignment", "1=a,2=b"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("agent \"1\"") && err.contains("2/3"), "{err}");

    let out = upo(&["prob", "--instance", &data("example.json"), "--assignment", "1=a,2=a,3=c"]);
    assert_eq!(out.status.code(), Some(1));
    let out = upo(&["prob", "--instance", &data("missing.json"), "--assignment", "1=a"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(upo(&["prob"]).status.code(), Some(2));
    assert_eq!(upo(&["prob", "--instance", "x", "--assignment", "y", "--engine", "mc"]).status.code(), Some(2));
    assert_eq!(upo(&["frobnicate"]).status.code(), Some(2));
    let out = upo(&[
        "check", "--instance", &data("example.json"), "--assignment", "1=a,2=b,3=c", "--question", "one", "--witness",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_upo"))
        .args(["prob", "--instance", &data("example.json"), "--assignment", "1=a,2=b,3=c"])
        .env("PO_GUARD_MAX", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn guard_from_environment() {
    let run = |guard: &str| {
        Command::new(env!("CARGO_BIN_EXE_upo"))
            .args(["prob", "--instance", &data("example.json"), "--assignment", "1=b,2=a,3=c", "--engine", "joint"])
            .env("PO_GUARD_MAX", guard)
            .output()
            .unwrap()
    };
    assert_eq!(run("1").status.code(), Some(1));
    assert!(String::from_utf8_lossy(&run("1").stderr).contains("exceeds limit 1"));
    assert_eq!(json(&run("2"))["probability"], "2/5");
}

#[test]
fn reduce_m2sat_counts() {
    let dir = tempfile::tempdir().unwrap();
    let instance = dir.path().join("gadget.json");
    let assignment = dir.path().join("identity.json");
    let out = upo(&["reduce", "--from", "m2sat", "--input", &data("or.m2sat"), "--assignment-out", assignment.to_str().unwrap()]);
    assert!(out.status.success());
    std::fs::write(&instance, &out.stdout).unwrap();
    let v = json(&upo(&["prob", "--instance", instance.to_str().unwrap(), "--assignment", assignment.to_str().unwrap()]));
    // three of the four truth assignments satisfy x1 or x2
    assert_eq!(v["probability"], "3/4");
}

#[test]
fn reduce_sdf_both_targets() {
    let dir = tempfile::tempdir().unwrap();
    for to in ["joint", "lottery"] {
        let out = upo(&["reduce", "--from", "sdf", "--input", &data("sdf.json"), "--to", to]);
        let doc = json(&out);
        assert_eq!(doc["model"], to);
        let path = dir.path().join(format!("{to}.json"));
        std::fs::write(&path, &out.stdout).unwrap();
        let v = json(&upo(&["solve", "--instance", path.to_str().unwrap(), "--goal", "certain"]));
        assert_eq!(v["assignment"]["2"], "c", "{to}");
    }
}

#[test]
fn gen_is_deterministic_and_parses() {
    let args = ["gen", "--n", "5", "--k", "2", "--support-size", "3", "--seed", "11"];
    let a = upo(&args);
    let b = upo(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    std::fs::write(&path, &a.stdout).unwrap();
    let v = json(&upo(&["solve", "--instance", path.to_str().unwrap(), "--goal", "best"]));
    assert!(v["probability"].is_string());
    let joint = upo(&["gen", "--n", "3", "--k", "1", "--kind", "joint", "--joint-support", "2", "--seed", "3"]);
    assert_eq!(json(&joint)["model"], "joint");
    assert_eq!(upo(&["gen", "--n", "3", "--k", "4"]).status.code(), Some(1));
}
