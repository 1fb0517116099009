use std::path::PathBuf;
use std::process::{Command, Output};

fn optlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_optlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn demo(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("demos")
        .join(name)
        .display()
        .to_string()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid json")
}

#[test]
fn eval_alice_file() {
    let o = optlab(&["eval", &demo("alice.opt")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for line in [
        "P(alice0 @ 0, _) = 1",
        "P(alice1 @ 0, _) = 0",
        "P(alice0 @ 1, _) = 0",
        "P(alice1 @ 1, _) = 1",
    ] {
        assert!(
            text.lines().any(|l| l == line),
            "missing {line:?} in\n{text}"
        );
    }
    let v = json(&optlab(&["--json", "eval", &demo("alice.opt")]));
    let results = v["results"].as_array().unwrap();
    let probs: Vec<u64> = results
        .iter()
        .filter(|r| r["kind"] == "probability")
        .map(|r| r["probability"].as_u64().unwrap())
        .collect();
    assert_eq!(probs, [1, 0, 0, 1]);
}

#[test]
fn eval_signaling_file() {
    let o = optlab(&["eval", &demo("signaling.opt")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("view0 @ _, _ = state on 2|>2: {0 -> 0, 1 -> 0}"));
    assert!(text.contains("view1 @ _, _ = state on 2|>2: {0 -> 1, 1 -> 1}"));
}

#[test]
fn eval_reports_located_errors() {
    let dir = std::env::temp_dir().join(format!("optlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.opt");
    std::fs::write(&path, "system A = 2 |> 2\nstate r : A = {0 -> 7}\n").unwrap();
    let o = optlab(&["eval", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("bad.opt:2:21: error"), "{err}");
    let o = optlab(&["eval", dir.join("missing.opt").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn enumerate_counts_agree() {
    let o = optlab(&["enumerate", "--system", "1x2", "--kind", "effects"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 5);
    assert!(text.ends_with("count: 4 effects on 1|>2\n"));

    let v = json(&optlab(&[
        "--json",
        "enumerate",
        "--system",
        "2|>2",
        "--kind",
        "transforms",
    ]));
    assert_eq!(v["count"], 289);
    assert_eq!(v["items"].as_array().unwrap().len(), 289);
    let v = json(&optlab(&[
        "--json",
        "enumerate",
        "--system",
        "2x2",
        "--kind",
        "states",
    ]));
    assert_eq!(v["count"], 9);
}

#[test]
fn count_table() {
    let v = json(&optlab(&[
        "--json", "count", "--system", "2x2", "--out", "2x3",
    ]));
    let c = &v["counts"];
    assert_eq!(c["states"], "9");
    assert_eq!(c["effects"], "7");
    assert_eq!(c["transformations"], "961");
    assert_eq!(c["channels"], "324");
    let text = stdout(&optlab(&["count", "--system", "2x3"]));
    assert!(text.starts_with("counts for 2|>3\n"));
    assert!(text.contains("states                   16"));
}

#[test]
fn checks_and_exit_codes() {
    let o = optlab(&["check", "local-disc", "--system", "2x2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict:  holds"));

    let v = json(&optlab(&[
        "--json",
        "check",
        "admissibility-equiv",
        "--system",
        "2x2",
    ]));
    assert_eq!(v["verdict"], "holds");
    assert_eq!(v["facts"]["accepted"], 289);

    let o = optlab(&[
        "check",
        "determinism",
        "--system",
        "1x2",
        "--depth",
        "2",
        "--samples",
        "50",
        "--seed",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let o = optlab(&["check", "causality", "--system", "3x2"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(
        optlab(&["check", "causality", "--system", "1x2"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn usage_and_cap_errors() {
    assert_eq!(optlab(&[]).status.code(), Some(1));
    assert_eq!(optlab(&["count", "--system", "0x2"]).status.code(), Some(1));
    assert_eq!(
        optlab(&["check", "nothing", "--system", "2x2"])
            .status
            .code(),
        Some(1)
    );
    let o = optlab(&["enumerate", "--system", "9x9", "--kind", "states"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("OPTLAB_ENUM_CAP"));
    let o = Command::new(env!("CARGO_BIN_EXE_optlab"))
        .args(["enumerate", "--system", "2x2", "--kind", "transforms"])
        .env("OPTLAB_ENUM_CAP", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = optlab(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("enumerate"));
}

#[test]
fn demos_run() {
    let o = optlab(&["demo", "alice"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("P(r1 | D1) = 1"));
    let v = json(&optlab(&["--json", "demo", "signaling"]));
    assert_eq!(v["demo"], "signaling");
    assert!(!v["lines"].as_array().unwrap().is_empty());
}
