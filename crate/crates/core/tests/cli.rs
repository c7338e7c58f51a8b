use std::fs;
use std::path::Path;

use smlab::cli::main_with;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["smlab"];
    argv.extend_from_slice(args);
    let code = main_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn gtable_rows() {
    let (code, out, _) = run(&["gtable", "--max-n", "8"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r.ends_with("\ttrue")));
    assert!(rows[0].starts_with("1\t5\t"));
}

#[test]
fn standard_total() {
    let dir = tempfile::tempdir().unwrap();
    let hist = path(dir.path(), "h.txt");
    let (code, out, _) = run(&["standard", "--n", "1", "--emit-history", &hist]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "total\t275"));
    assert!(out.lines().any(|l| l == "holds\ttrue"));
    let text = fs::read_to_string(&hist).unwrap();
    assert_eq!(text.split_whitespace().count(), 275);
}

#[test]
fn simulate_writes_trace() {
    let dir = tempfile::tempdir().unwrap();
    let hist = path(dir.path(), "h.txt");
    fs::write(&hist, "Z.r12(a) Z.r21 Z.r1(a) Z.r13 Z.r3(a)\n").unwrap();
    let trace = path(dir.path(), "t.jsonl");
    let (code, out, _) = run(&["simulate", "--machine", "z", "--inline", "L a0 p(1) R", "--history", &hist, "--trace", &trace]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("end\tL a0 p(3) R"));
    let lines: Vec<serde_json::Value> =
        fs::read_to_string(&trace).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0]["rule"], serde_json::Value::Null);
    assert_eq!(lines[1]["rule"], "Z.r12(a)");
    for (i, l) in lines.iter().enumerate() {
        assert_eq!(l["step"], i);
        assert_eq!(l["len"], 4);
        assert!(l["word"].is_string() && l["a_width"].is_number() && l["norm"].is_number());
    }
}

#[test]
fn simulate_stream_checkpoints() {
    let dir = tempfile::tempdir().unwrap();
    let hist = path(dir.path(), "h.txt");
    fs::write(&hist, "Z.r12(a) Z.r21 Z.r1(a) Z.r13 Z.r3(a)").unwrap();
    let trace = path(dir.path(), "t.jsonl");
    let args = ["simulate", "--machine", "z", "--inline", "L a0 p(1) R", "--history", &hist, "--trace", &trace];
    let (code, _, _) = run(&[&args[..], &["--stream", "--checkpoint-stride", "2"]].concat());
    assert_eq!(code, 0);
    let text = fs::read_to_string(&trace).unwrap();
    let with_word: Vec<usize> = text
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
        .filter(|v| v.get("word").is_some())
        .map(|v| v["step"].as_u64().unwrap() as usize)
        .collect();
    assert_eq!(with_word, [0, 2, 4]);
}

#[test]
fn simulate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let hist = path(dir.path(), "h.txt");
    fs::write(&hist, "Z.r12(a) Z.r1(a)").unwrap();
    let (code, _, err) = run(&["simulate", "--machine", "z", "--inline", "L a0 p(1) R", "--history", &hist]);
    assert_eq!(code, 2);
    assert!(err.contains("at step 1:"), "{err}");
    let (code, _, _) = run(&["simulate", "--machine", "z", "--inline", "L b0 p(1) R", "--history", &hist]);
    assert_eq!(code, 1);
    let (code, _, _) =
        run(&["simulate", "--machine", "z", "--inline", "L a0 p(1) R", "--history", &hist, "--max-steps", "1"]);
    assert_eq!(code, 3);
}

#[test]
fn budget_and_config_errors() {
    assert_eq!(run(&["standard", "--n", "3"]).0, 3);
    assert_eq!(run(&["bounds", "--epsilon", "0.3"]).0, 1);
    assert_eq!(run(&["area", "--n", "1", "--glue", "zero"]).0, 1);
    assert_eq!(run(&["verify", "--suite", "nonsense"]).0, 1);
    assert_eq!(run(&["frobnicate"]).0, 1);
}

#[test]
fn area_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = path(dir.path(), "t.svg");
    let (code, out, _) = run(&["area", "--n", "1", "--glue", "auto", "--svg", &svg]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "copies\t91"));
    assert!(out.lines().any(|l| l == "band_bound_violations\t0"));
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn presentation_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = path(dir.path(), "m.pres");
    let (code, out, _) = run(&["presentation", "--machine", "main", "--out", &file, "--stats"]);
    assert_eq!(code, 0);
    assert!(out.lines().nth(1).unwrap().contains("\t405\t"));
    let text = fs::read_to_string(&file).unwrap();
    assert_eq!(smlab::presentation::to_text(&smlab::presentation::parse(&text).unwrap()), text);
}

#[test]
fn verify_small_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = path(dir.path(), "a.jsonl");
    let b = path(dir.path(), "b.jsonl");
    let args = ["verify", "--suite", "all", "--iters", "100", "--search-iters", "200", "--seed", "4"];
    let (code, out, _) = run(&[&args[..], &["--report", &a]].concat());
    assert_eq!(code, 0, "{out}");
    assert_eq!(run(&[&args[..], &["--report", &b]].concat()).0, 0);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let first: serde_json::Value = serde_json::from_str(fs::read_to_string(&a).unwrap().lines().next().unwrap()).unwrap();
    for field in ["lemma", "samples", "violations", "extremal", "seed"] {
        assert!(first.get(field).is_some(), "{field}");
    }
}

#[test]
fn witness_matches_golden() {
    let (code, out, _) = run(&["witness", "--i", "1"]);
    assert_eq!(code, 0);
    assert_eq!(out, include_str!("golden/witness_i1.jsonl"));
}

#[test]
fn out_dir_override() {
    let dir = tempfile::tempdir().unwrap();
    std::env::set_var("SMLAB_OUT", dir.path());
    let (code, _, _) = run(&["presentation", "--machine", "z", "--out", "override-z.pres"]);
    std::env::remove_var("SMLAB_OUT");
    assert_eq!(code, 0);
    assert!(dir.path().join("override-z.pres").exists());
}

#[test]
fn golden_reports_regenerate() {
    let cases: [(&[&str], &str); 3] = [
        (&["gtable", "--max-n", "8"], include_str!("golden/gtable_8.tsv")),
        (&["bounds", "--imax", "3", "--epsilon", "0.125"], include_str!("golden/bounds_3.tsv")),
        (&["standard", "--n", "1"], include_str!("golden/standard_n1.tsv")),
    ];
    for (args, golden) in cases {
        assert_eq!(run(args).1, golden, "{args:?}");
    }
    let dir = tempfile::tempdir().unwrap();
    let file = path(dir.path(), "z.pres");
    let (_, stats, _) = run(&["presentation", "--machine", "z", "--out", &file, "--stats"]);
    assert_eq!(stats, include_str!("golden/z_stats.tsv"));
    assert_eq!(fs::read_to_string(&file).unwrap(), include_str!("golden/z.pres"));
}
