use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_liesoliton"));
    c.env_remove("LIESOLITON_FIXTURES");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn g1_canonical_first_system() {
    let o = run(&["soliton", "G1", "--connection", "canonical", "--kind", "first", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["command"], "soliton");
    assert_eq!(v["model"], "G1");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    let sys = &v["results"]["systems"][0];
    let eqs: Vec<&str> = sys["equations"].as_array().unwrap().iter().map(|e| e.as_str().unwrap()).collect();
    assert!(eqs.contains(&"alpha^3 + alpha*c"));
    assert!(eqs.contains(&"-beta*c"));
    let reduced: Vec<&str> = sys["reduced_equations"].as_array().unwrap().iter().map(|e| e.as_str().unwrap()).collect();
    assert!(reduced.contains(&"alpha^2 + c"));
    assert!(reduced.contains(&"beta"));
    assert_eq!(v["results"]["classification"]["fixtures"][0], "Thm2.6");
}

#[test]
fn g5_canonical_is_flat() {
    let o = run(&["curvature", "G5", "--connection", "canonical"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.lines().filter(|l| l.starts_with("R0(")).all(|l| l.ends_with("= 0")));
    assert!(text.contains("flat"));
}

#[test]
fn unknown_family_is_a_usage_error() {
    let o = run(&["connections", "BADNAME"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("BADNAME"));
}

#[test]
fn help_exits_zero() {
    let o = run(&["--help"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("check-paper"));
}

#[test]
fn eta_is_rejected_without_an_eta_parameter() {
    assert_eq!(code(&run(&["ricci", "G2", "--connection", "kn", "--eta", "1"])), 2);
    assert_eq!(code(&run(&["ricci", "G4", "--connection", "kn", "--eta", "2"])), 2);
}

#[test]
fn g4_reports_both_eta_blocks() {
    let o = run(&["connections", "G4", "--connection", "lc", "--format", "json"]);
    let v = json(&o);
    let etas: Vec<i64> = v["results"].as_array().unwrap().iter().map(|b| b["eta"].as_i64().unwrap()).collect();
    assert_eq!(etas, [1, -1]);
    let one = json(&run(&["connections", "G4", "--connection", "lc", "--format", "json", "--eta", "-1"]));
    assert_eq!(one["results"].as_array().unwrap().len(), 1);
    assert_eq!(one["results"][0], v["results"][1]);
}

#[test]
fn json_is_byte_identical_across_runs() {
    let args = ["ricci", "G7", "--connection", "kn", "--symmetrized", "--format", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["check-paper", "--only", "Thm3.26", "--format", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn output_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let o = run(&["ricci", "G1", "--connection", "canonical", "--format", "json", "--output", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["results"][0]["ric"][2][1], "alpha^2");
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn verify_reports_pass_and_fail() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(
        dir.path(),
        "good.json",
        r#"{"label": "beta zero", "substitution": {"beta": "0", "c": "-alpha^2"},
            "D": [["0","0","0"],["0","0","0"],["0","alpha^2","alpha^2"]]}"#,
    );
    let o = run(&["verify", "G1", "--connection", "canonical", "--kind", "first", "--family-file", &good, "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let fam = &json(&o)["results"][0]["families"][0];
    assert_eq!(fam["status"], "PASS");
    assert_eq!(fam["substitution"]["c"], "-alpha^2");

    let bad = write(dir.path(), "bad.json", r#"[{"label": "c only", "substitution": {"c": "0"}}]"#);
    let o = run(&["verify", "G1", "--connection", "canonical", "--kind", "first", "--family-file", &bad, "--format", "json"]);
    assert_eq!(code(&o), 1);
    let fam = &json(&o)["results"][0]["families"][0];
    assert_eq!(fam["status"], "FAIL");
    assert!(fam["failing_equation"].as_str().unwrap().contains("alpha^3"));

    let broken = write(dir.path(), "broken.json", r#"{"substitution": {"c": "-(beta - gamma)/2"}}"#);
    let o = run(&["verify", "G1", "--connection", "canonical", "--kind", "first", "--family-file", &broken]);
    assert_eq!(code(&o), 2);
}

#[test]
fn scan_finds_and_excludes_points() {
    let o = run(&["scan", "G1", "--connection", "canonical", "--kind", "first", "--exclude-known"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = run(&["scan", "G1", "--connection", "canonical", "--kind", "first"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("alpha = 1, beta = 0, c = -1"));

    let dir = tempfile::tempdir().unwrap();
    let grid = write(dir.path(), "grid.json", r#"{"values": ["0", "1"], "eta": [1]}"#);
    let o = run(&["scan", "G3", "--connection", "canonical", "--kind", "first", "--grid", &grid, "--format", "json"]);
    assert_eq!(code(&o), 1);
    let points = json(&o)["results"]["scans"][0]["counterexamples"].clone();
    let want = serde_json::json!({"alpha": "1", "beta": "1", "gamma": "0", "c": "0"});
    assert!(points.as_array().unwrap().contains(&want), "{points}");
}

#[test]
fn unfixtured_cases_are_flagged() {
    let v = json(&run(&["soliton", "G5", "--connection", "kn", "--kind", "second", "--format", "json"]));
    assert_eq!(v["results"]["classification"]["unfixtured"], true);
    let v = json(&run(&["soliton", "G6", "--connection", "kn", "--kind", "second", "--format", "json"]));
    assert_eq!(v["results"]["classification"]["unfixtured"], true);
    let v = json(&run(&["soliton", "G6", "--connection", "kn", "--kind", "first", "--format", "json"]));
    assert_eq!(v["results"]["classification"]["unfixtured"], false);
}

#[test]
fn custom_model_file() {
    let dir = tempfile::tempdir().unwrap();
    let model = write(
        dir.path(),
        "heis.json",
        r#"{"name": "heisenberg", "parameters": ["alpha"], "eta_involutive": false,
            "brackets": {"12": ["0", "0", "alpha"], "13": ["0", "0", "0"], "23": ["0", "0", "0"]},
            "constraints": [], "inequations": ["alpha"]}"#,
    );
    let o = run(&["connections", "--model", &model, "--connection", "lc", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["model"], "heisenberg");
    assert_eq!(v["results"][0]["table"]["12"], serde_json::json!(["0", "0", "1/2*alpha"]));
}

#[test]
fn fixture_check_exit_codes() {
    let o = run(&["check-paper", "--only", "Lemma2.8"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("note:"));
    assert_eq!(code(&run(&["check-paper", "--only", "Lemma9.9"])), 2);
    let o = run(&["check-paper", "--format", "json"]);
    let v = json(&o);
    let unexplained = v["results"]["summary"]["unexplained"].as_u64().unwrap();
    assert_eq!(code(&o) == 0, unexplained == 0);
}

#[test]
fn fixture_directory_override() {
    let dir = tempfile::tempdir().unwrap();
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for entry in std::fs::read_dir(&src).unwrap() {
        let p = entry.unwrap().path();
        std::fs::copy(&p, dir.path().join(p.file_name().unwrap())).unwrap();
    }
    let g1 = dir.path().join("g1.json");
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&g1).unwrap()).unwrap();
    v["fixtures"]["Eq2.22"]["matrix"][2][1] = Value::from("-alpha^2");
    std::fs::write(&g1, serde_json::to_string(&v).unwrap()).unwrap();

    let o = bin()
        .env("LIESOLITON_FIXTURES", dir.path())
        .args(["check-paper", "--only", "Eq2.22"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    assert!(text.contains("MISMATCH"));
    assert!(text.contains("Ric[3,2]: printed -alpha^2 recomputed alpha^2"), "{text}");
}
