use std::process::Command;

fn cli() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cherednik"));
    c.env_remove("CHEREDNIK_OUT_DIR");
    c
}

#[test]
fn eval_g_at_origin() {
    let out = cli().args(["eval", "G", "--alpha", "1", "--beta", "0.5", "--lambda", "2", "--x", "0"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "0,2,0,1,0"), "{text}");
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| cli().args(args).output().unwrap().status.code();
    assert_eq!(code(&["eval", "G", "--alpha", "0.2", "--beta", "0.4"]), Some(2));
    assert_eq!(code(&["norm", "--dim", "2", "--panels", "10", "--order", "5"]), Some(3));
    assert_eq!(code(&["ucp", "morgan", "--a", "1", "--b", "1", "--alpha", "4", "--beta", "2"]), Some(2));
    assert_eq!(code(&["eval", "nonsense"]), Some(2));
    assert_eq!(code(&["eval", "A", "--x", "1"]), Some(0));
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli().env("CHEREDNIK_OUT_DIR", dir.path()).args(["--format", "json", "eval", "B", "--x", "0,1"]).output().unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(dir.path().join("eval.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["rows"][0][1], 1.0);
}

#[test]
fn explicit_out_wins_and_is_not_echoed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.csv");
    let out = cli().env("CHEREDNIK_OUT_DIR", dir.path()).args(["--out", path.to_str().unwrap(), "eval", "A", "--x", "1"]).output().unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("# command=cherednik eval A --x 1\n"));
    assert!(!dir.path().join("eval.csv").exists());
}

#[test]
fn verify_passes_and_is_seeded() {
    let run = |seed: &str| cli().args(["--seed", seed, "verify", "--cases", "4"]).output().unwrap();
    let a = run("3");
    let b = run("3");
    let c = run("4");
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}
