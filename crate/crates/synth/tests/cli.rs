use std::path::Path;
use std::process::{Command, Output};

fn synth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_synth"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("synth runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_run_and_score() {
    let dir = tempfile::tempdir().unwrap();
    let regexes = dir.path().join("regexes.txt");
    let dataset = dir.path().join("data.jsonl");
    let report = dir.path().join("report.jsonl");

    let out = synth(&["gen-random", "--count", "30", "--alphabet-size", "2", "--seed", "3", "-o", path(&regexes)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(std::fs::read_to_string(&regexes).unwrap().lines().count(), 30);

    let out = synth(&["make-dataset", "--regexes", path(&regexes), "--max-len", "10", "--seed", "1", "-o", path(&dataset)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let first = std::fs::read(&dataset).unwrap();
    assert!(!first.is_empty());
    assert!(dir.path().join("data.skips.jsonl").exists());
    // same seed, same bytes
    synth(&["make-dataset", "--regexes", path(&regexes), "--max-len", "10", "--seed", "1", "-o", path(&dataset)]);
    assert_eq!(std::fs::read(&dataset).unwrap(), first);

    let out = synth(&[
        "run", "--dataset", path(&dataset), "--engine", "alpharegex,bluefringe", "--mode", "vanilla,split",
        "--splitter", "runs", "--strategy", "seq,prefix-all", "--timeout", "0.2", "-o", path(&report),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.contains("alpharegex/vanilla"));
    assert!(table.contains("bluefringe/split/runs/prefix-all"));
    assert_eq!(table.lines().count(), 1 + 6);
    assert!(dir.path().join("report.csv").exists());
    assert!(dir.path().join("report.win.csv").exists());

    let out = synth(&["score", "--report", path(&report)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    // a tampered aggregate is rejected
    let text = std::fs::read_to_string(&report).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    let agg = lines.iter().position(|l| l.contains("\"type\":\"aggregate\"")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&lines[agg]).unwrap();
    v["instances"] = serde_json::json!(v["instances"].as_u64().unwrap() + 1);
    lines[agg] = v.to_string();
    std::fs::write(&report, lines.join("\n")).unwrap();
    assert!(!synth(&["score", "--report", path(&report)]).status.success());
}

#[test]
fn predictions_file_splitter() {
    let dir = tempfile::tempdir().unwrap();
    let dataset = dir.path().join("data.jsonl");
    let preds = dir.path().join("preds.jsonl");
    let report = dir.path().join("report.jsonl");
    let record = serde_json::json!({
        "regex": "a*b*", "alphabet": ["a", "b"],
        "pos_train": ["ab", "aab", "abb", "b"], "neg_train": ["ba", "aba"],
        "pos_eval": ["aabb"], "neg_eval": ["bba"], "labels": []
    });
    std::fs::write(&dataset, format!("{record}\n")).unwrap();
    let lines: Vec<String> = [("ab", "12"), ("aab", "112"), ("abb", "122"), ("b", "2")]
        .iter()
        .map(|(s, l)| serde_json::json!({"string": s, "labels": l}).to_string())
        .collect();
    std::fs::write(&preds, lines.join("\n")).unwrap();
    let splitter = format!("file:{}", path(&preds));
    let out = synth(&["run", "--dataset", path(&dataset), "--mode", "split", "--splitter", &splitter, "-o", path(&report)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.contains("\"status\":\"success\""), "{text}");

    // predictions missing a positive make the instance a splitter error
    std::fs::write(&preds, lines[..3].join("\n")).unwrap();
    let out = synth(&["run", "--dataset", path(&dataset), "--mode", "split", "--splitter", &splitter, "-o", path(&report)]);
    assert!(out.status.success());
    assert!(std::fs::read_to_string(&report).unwrap().contains("\"status\":\"splitter-error\""));

    // a malformed predictions file is a schema error
    std::fs::write(&preds, "{\"string\":\"ab\",\"labels\":\"1\"}\n").unwrap();
    let out = synth(&["run", "--dataset", path(&dataset), "--mode", "split", "--splitter", &splitter, "-o", path(&report)]);
    assert!(!out.status.success());
}

#[test]
fn bad_inputs_fail_with_nonzero_exit() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.jsonl");
    let out = synth(&["run", "--dataset", path(&missing), "-o", path(&dir.path().join("r.jsonl"))]);
    assert!(!out.status.success());

    let bad = dir.path().join("bad.jsonl");
    std::fs::write(&bad, "{\"regex\":\"a\",\"alphabet\":[\"a\"],\"pos_train\":[\"b\"],\"neg_train\":[],\"pos_eval\":[],\"neg_eval\":[]}\n").unwrap();
    let out = synth(&["run", "--dataset", path(&bad), "-o", path(&dir.path().join("r.jsonl"))]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("outside the alphabet"));

    assert!(!synth(&["run", "--dataset", path(&bad), "--splitter", "magic", "-o", "x"]).status.success());
}
