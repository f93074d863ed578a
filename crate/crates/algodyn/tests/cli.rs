use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn algodyn(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_algodyn")).args(args).current_dir(dir).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn generate_then_solve() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&algodyn(&["gen", "ksat", "--n", "40", "--alpha", "3", "--seed", "2", "--out", "f.cnf"], d)), 0);
    let o = algodyn(&["solve", "dpll", "f.cnf", "--format", "json"], d);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["outcome"], "sat");

    assert_eq!(code(&algodyn(&["gen", "gnp", "--n", "30", "--c", "2", "--out", "g.txt"], d)), 0);
    let o = algodyn(&["solve", "vc", "g.txt", "--x", "0.6"], d);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains(",cov,"));

    assert_eq!(code(&algodyn(&["gen", "xorsat", "--n", "60", "--alpha", "0.3", "--out", "x.txt"], d)), 0);
    assert_eq!(code(&algodyn(&["solve", "prwsat", "x.txt"], d)), 0);
    assert_eq!(code(&algodyn(&["solve", "gd", "x.txt", "--radius", "1"], d)), 0);

    assert_eq!(code(&algodyn(&["gen", "ldpc", "--n", "600", "--out", "c.alist"], d)), 0);
    let o = algodyn(&["solve", "peel", "c.alist", "--p", "0.2"], d);
    assert!(String::from_utf8_lossy(&o.stdout).contains("decoded"));
    let o = algodyn(&["solve", "sa", "c.alist", "--p", "0.2", "--tau", "1"], d);
    assert_eq!(code(&o), 0);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    // invalid input
    assert_eq!(code(&algodyn(&["solve", "dpll", "missing.cnf"], d)), 1);
    fs::write(d.join("bad.cnf"), "p cnf 2 1\n1 5 0\n").unwrap();
    assert_eq!(code(&algodyn(&["solve", "dpll", "bad.cnf"], d)), 1);
    assert_eq!(code(&algodyn(&["gen", "ksat", "--n", "2", "--alpha", "1", "--k", "3"], d)), 1);
    assert_eq!(code(&algodyn(&["theory", "halt-line", "--grid", "1.5"], d)), 1);
    assert_eq!(code(&algodyn(&["--threads", "x", "gen", "gnp", "--n", "3", "--c", "1"], d)), 1);
    // resource cutoff
    assert_eq!(code(&algodyn(&["gen", "ksat", "--n", "150", "--alpha", "6", "--out", "u.cnf"], d)), 0);
    assert_eq!(code(&algodyn(&["solve", "dpll", "u.cnf", "--cutoff-nodes", "10"], d)), 2);
    assert_eq!(code(&algodyn(&["gen", "ksat", "--n", "300", "--alpha", "4.1", "--out", "w.cnf"], d)), 0);
    assert_eq!(code(&algodyn(&["solve", "prwsat", "w.cnf", "--cutoff-flips", "5"], d)), 2);
}

#[test]
fn theory_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = algodyn(&["theory", "vc-critical", "--grid", "1,2"], dir.path());
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("curve,parameter,x,value,approximate"));
    let second: Vec<&str> = lines.nth(1).unwrap().split(',').collect();
    assert_eq!(second[0], "vc-critical");
    assert!((second[3].parse::<f64>().unwrap() - 0.3919).abs() < 5e-4);
}

const CONFIG: &str = r#"{
  "task": "dpll-sweep",
  "seed": 17,
  "trials": 6,
  "sizes": [30, 40, 50],
  "grid": [3.0, 4.3, 6.0],
  "theory": ["sat-threshold"]
}"#;

#[test]
fn experiments_are_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("exp.json"), CONFIG).unwrap();
    let mut outputs = vec![];
    for threads in ["1", "8", "1"] {
        let out = format!("r{threads}-{}.csv", outputs.len());
        let o = algodyn(&["exp", "run", "exp.json", "--threads", threads, "--out", &out], d);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let stem = out.trim_end_matches(".csv");
        outputs.push(
            ["csv", "fits.csv", "trials.csv"].map(|s| fs::read(d.join(format!("{stem}.{s}"))).unwrap()),
        );
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
}

#[test]
fn compare_reads_json_reports() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cfg = r#"{"task": "vc-sweep", "trials": 3, "sizes": [20], "grid": [0.3, 0.5], "ensemble": {"c": 2.0}}"#;
    fs::write(d.join("vc.json"), cfg).unwrap();
    assert_eq!(code(&algodyn(&["exp", "run", "vc.json", "--format", "json", "--out", "r.json"], d)), 0);
    let o = algodyn(&["exp", "compare", "r.json", "--curve", "vc-separatrix", "--format", "json"], d);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert_eq!(v["summary"][0]["curve"], "vc-separatrix");
}
