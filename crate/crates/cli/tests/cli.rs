use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn fixture(dir: &TempDir, name: &str, file: &str) -> PathBuf {
    let path = dir.path().join(file);
    std::fs::write(&path, vfree_core::fixtures::source(name).unwrap()).unwrap();
    path
}

fn vfree(args: &[&str], file: &Path) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_vfree"));
    cmd.arg(args[0]).arg(file).args(&args[1..]);
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn summary(o: &Output) -> serde_json::Value {
    let text = stdout(o);
    let line = text.lines().find_map(|l| l.strip_prefix("summary ")).unwrap();
    serde_json::from_str(line).unwrap()
}

#[test]
fn build_dinfinity() {
    let dir = TempDir::new().unwrap();
    let f = fixture(&dir, "c2_c2", "dinf.json");
    let o = vfree(&["build"], &f);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("X' = {a, b}"), "{text}");
    assert!(text.contains("guaranteed k' = 4"));
    assert_eq!(summary(&o)["k_sequence"], serde_json::json!([2, 4]));
}

#[test]
fn word_problem_exit_codes() {
    let dir = TempDir::new().unwrap();
    let f = fixture(&dir, "c2_c2", "dinf.json");
    let o = vfree(&["wp", "--word", "a b b a"], &f);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("identity: yes"));

    let o = vfree(&["wp", "--word", "a b a b"], &f);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("identity: no"));
    assert!(text.contains("stack: a b a b"));
    assert!(text.contains("length: 4"));

    let o = vfree(&["wp", "--word", "a z"], &f);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_ok_and_counterexample() {
    let dir = TempDir::new().unwrap();
    let f = fixture(&dir, "c2_c2", "dinf.json");
    let o = vfree(&["verify", "--k", "2", "--max-len", "8"], &f);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(summary(&o)["cross_check_disagreements"], 0);

    let g = fixture(&dir, "v4_hnn", "v4.json");
    let o = vfree(&["verify", "--k", "2"], &g);
    assert_eq!(o.status.code(), Some(5));
    assert!(stdout(&o).contains("counterexample: t1 r t1"));
}

#[test]
fn ball_growth_line() {
    let dir = TempDir::new().unwrap();
    let f = fixture(&dir, "c2_c2", "dinf.json");
    let o = vfree(&["ball", "--radius", "5"], &f);
    assert!(stdout(&o).contains("growth: 1 2 2 2 2 2"));
    let o = vfree(&["ball", "--radius", "30", "--budget", "10"], &f);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn minimal_k_for_c2_c3() {
    let dir = TempDir::new().unwrap();
    let f = fixture(&dir, "c2_c3", "c2c3.json");
    let o = vfree(&["minimal-k"], &f);
    assert_eq!(o.status.code(), Some(0));
    let s = summary(&o);
    assert_eq!(s["empirical_k"], 2);
    assert_eq!(s["guaranteed_k"], 4);
}

#[test]
fn rules_emit_file() {
    let dir = TempDir::new().unwrap();
    let f = fixture(&dir, "c2_c3", "c2c3.json");
    let out = dir.path().join("rules.txt");
    let o = vfree(&["rules", "--emit", out.to_str().unwrap()], &f);
    assert_eq!(o.status.code(), Some(0));
    let written = std::fs::read_to_string(&out).unwrap();
    assert_eq!(written, "a a -> \nb b -> B\nb B -> \nB b -> \nB B -> b\n");
}

#[test]
fn reduce_and_len() {
    let dir = TempDir::new().unwrap();
    let f = fixture(&dir, "c2_c3", "c2c3.json");
    let o = vfree(&["reduce", "--word", "b b"], &f);
    assert!(stdout(&o).contains("geodesic: B"));
    let o = vfree(&["len", "--word", "b b a b b"], &f);
    assert_eq!(summary(&o)["length"], 3);
}

#[test]
fn bad_inputs() {
    let dir = TempDir::new().unwrap();
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{ not json").unwrap();
    assert_eq!(vfree(&["build"], &junk).status.code(), Some(2));

    // the edge map is not a homomorphism into C3
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"vertices":[{"cyclic":3,"generator":"a"},{"cyclic":2,"generator":"b"}],
            "edges":[{"ends":[0,1],"group":{"cyclic":2,"generator":"e"},
                      "maps":[{"map":{"e":"a"}},{"map":{"e":"b"}}]}]}"#,
    )
    .unwrap();
    let o = vfree(&["build"], &bad);
    assert_eq!(o.status.code(), Some(3));

    let disconnected = dir.path().join("disc.json");
    std::fs::write(&disconnected, r#"{"vertices":[{"cyclic":2},{"cyclic":2}]}"#).unwrap();
    assert_eq!(vfree(&["build"], &disconnected).status.code(), Some(3));

    let f = fixture(&dir, "c2_c2", "dinf.json");
    assert_eq!(vfree(&["verify", "--k", "1"], &f).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let f = fixture(&dir, "c2_hnn", "c2z.json");
    for args in [
        vec!["verify", "--seed", "7"],
        vec!["ball", "--radius", "6"],
        vec!["rules"],
        vec!["minimal-k"],
    ] {
        let a = vfree(&args, &f);
        let b = vfree(&args, &f);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!stdout(&a).contains("timing"));
    }
}

#[test]
fn library_run_matches_binary() {
    let dir = TempDir::new().unwrap();
    let f = fixture(&dir, "z", "z.json");
    let config = vfree::RunConfig::new(
        &f,
        vfree::Command::Wp {
            word: "t1 t1 t1^-1".into(),
        },
    );
    let report = vfree::run(&config);
    assert_eq!(report.status, vfree::Status::NotIdentity);
    let o = vfree(&["wp", "--word", "t1 t1 t1^-1"], &f);
    assert_eq!(stdout(&o), vfree::emit_report(&report));
}
