use std::path::Path;
use std::process::Command;

fn lozi(args: &[&str], out: &Path) -> (i32, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_lozi-lab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env("LOZI_LAB_THREADS", "2")
        .output()
        .unwrap();
    (o.status.code().unwrap(), String::from_utf8_lossy(&o.stdout).into_owned() + &String::from_utf8_lossy(&o.stderr))
}

fn report(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

#[test]
fn analyze_one_half_is_r_candidate() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = lozi(&["analyze", "--a", "1", "--b", "1/2"], dir.path());
    assert_eq!(code, 0, "{text}");
    let r = report(dir.path());
    assert_eq!(r["verdict"]["regime"], "RCandidate");
    assert_eq!(r["constants"]["p"]["x"]["p"], "6/5");
    assert_eq!(r["ell"]["p_in_all"], true);
    for f in ["manifold.csv", "manifold.svg", "ell_k.svg"] {
        assert!(dir.path().join(f).exists(), "{f} missing");
    }
}

#[test]
fn out_of_scope_parameters_exit_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = lozi(&["analyze", "--a", "0.5", "--b", "0.25", "--format", "json"], dir.path());
    assert_eq!(code, 0);
    assert_eq!(report(dir.path())["verdict"]["regime"], "OutOfScope");
    assert!(!dir.path().join("manifold.svg").exists());
}

#[test]
fn bad_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = lozi(&["analyze", "--a", "1"], dir.path());
    assert_eq!(code, 1);
    assert!(text.contains("--b"), "{text}");
    let (code, _) = lozi(&["analyze", "--a", "1", "--b", "1/2", "--mode", "float", "--precision-bits", "20"], dir.path());
    assert_eq!(code, 1);
}

#[test]
fn budget_exhaustion_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = lozi(&["analyze", "--a", "1.06", "--b", "0.96", "--max-vertices", "40", "--format", "json"], dir.path());
    assert_eq!(code, 3, "{text}");
    assert_eq!(report(dir.path())["error"]["kind"], "budget_exhausted");
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "a = 1\nb = 1/2\ndepth = 3\nformat = json\n").unwrap();
    let (code, text) = lozi(&["analyze", "--config", cfg.to_str().unwrap(), "--depth", "5"], dir.path());
    assert_eq!(code, 0, "{text}");
    let r = report(dir.path());
    assert_eq!(r["config"]["depth"], 5);
    assert_eq!(r["manifold"]["depth"], 5);
}

#[test]
fn orbits_lists_the_two_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = lozi(&["orbits", "--a", "1", "--b", "1/2", "--period", "2"], dir.path());
    assert_eq!(code, 0, "{text}");
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("orbits.json")).unwrap()).unwrap();
    let words: Vec<&str> = doc["orbits"].as_array().unwrap().iter().map(|o| o["word"].as_str().unwrap()).collect();
    assert!(words.contains(&"RL") || words.contains(&"LR"), "{words:?}");
    let (code, _) = lozi(&["orbits", "--a", "1", "--b", "1/2", "--period", "99"], dir.path());
    assert_eq!(code, 1);
}

#[test]
fn sweep_resumes_from_its_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sweep", "--a-grid", "1:1/10:2", "--b-grid", "2/5:1/10:2"];
    let (code, text) = lozi(&args, dir.path());
    assert_eq!(code, 0, "{text}");
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
    assert!(csv.starts_with("a,b,regime,"));
    // drop the last row, as after an interruption
    let manifest = dir.path().join("sweep.manifest.jsonl");
    let lines: Vec<String> = std::fs::read_to_string(&manifest).unwrap().lines().map(String::from).collect();
    std::fs::write(&manifest, lines[..lines.len() - 1].join("\n") + "\n").unwrap();
    let (code, text) = lozi(&args, dir.path());
    assert_eq!(code, 0);
    assert!(text.contains("3 resumed"), "{text}");
    assert_eq!(std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap(), csv);
    // a different grid refuses the old manifest
    let (code, _) = lozi(&["sweep", "--a-grid", "1:1/10:3", "--b-grid", "2/5:1/10:2"], dir.path());
    assert_eq!(code, 1);
}
