use std::path::Path;
use std::process::{Command, Output};

fn nacill(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nacill")).args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn emitted_proofs_recheck_under_the_same_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[(&str, &[&str])] = &[
        ("eps => !a\\!!a", &["--logic", "nacill"]),
        ("(q,p) => p*q", &["--logic", "fnl", "--rules", "e"]),
        ("(p,(q,r)) => (p*q)*r", &["--logic", "fnl", "--rules", "a"]),
        ("~-p => p", &["--logic", "fcnl-"]),
        ("(p,p\\0) =>", &["--logic", "naccll-"]),
        ("p => r", &["--logic", "fnl", "--hyp", "h.txt", "--cut", "analytic"]),
        ("(p,r) => r*r", &["--logic", "fnl", "--hyp", "h.txt"]),
    ];
    std::fs::write(dir.path().join("h.txt"), "p => q\n# comment\n\nq => r\n").unwrap();
    for (goal, flags) in cases {
        let mut args = vec!["prove", goal, "--emit-proof", "p.json"];
        args.extend_from_slice(flags);
        let o = nacill(&args, dir.path());
        assert_eq!(o.status.code(), Some(0), "{goal}: {}", stdout(&o));
        assert!(stdout(&o).starts_with("proved"));
        let mut args = vec!["check", "p.json"];
        args.extend_from_slice(flags);
        let o = nacill(&args, dir.path());
        assert_eq!(o.status.code(), Some(0), "{goal}: {}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn tampered_proofs_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(nacill(&["prove", "(p,p\\q) => q", "--logic", "fnl", "--emit-proof", "p.json"], dir.path()).status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("p.json")).unwrap();
    std::fs::write(dir.path().join("bad.json"), text.replace("\"r\"", "\"q\"").replace("q => q", "q => p")).unwrap();
    let o = nacill(&["check", "bad.json", "--logic", "fnl"], dir.path());
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("invalid at root"));
}

#[test]
fn primary_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["prove", "eps => ((!a*b)*c)\\(!a*(b*c))", "--logic", "nacill"][..],
        &["countermodel", "p /\\ q => p*q", "--class", "rlug", "--max-size", "3"][..],
        &["algebras", "--class", "nacill", "--size", "3"][..],
    ] {
        let (a, b) = (nacill(args, dir.path()), nacill(args, dir.path()));
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    }
}

#[test]
fn encode_prints_the_folded_sequent() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("h.txt"), "p => q\nq => r\n").unwrap();
    let o = nacill(&["encode", "--hyp", "h.txt", "p => r"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(p,(!(p\\q),!(q\\r))) => r\n");
    let o = nacill(&["encode", "--hyp", "h.txt", "p => r", "--classical"], dir.path());
    assert_eq!(stdout(&o), "(p,(!(p\\q),!(q\\r))) => r\n");
    std::fs::write(dir.path().join("e.txt"), "p =>\n").unwrap();
    let o = nacill(&["encode", "--hyp", "e.txt", "q => r", "--classical"], dir.path());
    assert_eq!(stdout(&o), "(q,!(p\\0)) => r\n");
}

#[test]
fn algebra_files_round_trip_through_complete_and_gentzen_check() {
    let dir = tempfile::tempdir().unwrap();
    let o = nacill(&["algebras", "--class", "nacill", "--size", "3", "--out", "cache"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("cache/nacill_n3.alg").exists());
    let listing = stdout(&nacill(&["algebras", "--class", "nacill", "--size", "3"], dir.path()));
    let blocks: Vec<&str> = listing.split("\n\n").skip(1).collect();
    assert_eq!(blocks.len(), 4);
    for (i, b) in blocks.iter().enumerate() {
        let file = format!("a{i}.alg");
        std::fs::write(dir.path().join(&file), b).unwrap();
        let o = nacill(&["complete", &file, "--verify"], dir.path());
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).contains("closed_sets"));
        let o = nacill(&["gentzen-check", &file, "--logic", "nacill"], dir.path());
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| nacill(args, dir.path()).status.code();
    assert_eq!(code(&["prove", "p => q", "--logic", "fnl", "--depth", "5"]), Some(1));
    assert_eq!(code(&["countermodel", "p => p", "--class", "rlug", "--max-size", "2"]), Some(1));
    assert_eq!(code(&["countermodel", "p => q", "--class", "rlug", "--max-size", "2"]), Some(0));
    assert_eq!(code(&["check", "missing.json", "--logic", "fnl"]), Some(2));
    assert_eq!(code(&["complete", "missing.alg"]), Some(2));
    assert_eq!(code(&["prove", "p => p", "--logic", "lk"]), Some(2));
    assert_eq!(code(&["algebras", "--class", "rlug", "--size", "9"]), Some(2));
    let o = nacill(&["prove", "p =>> q", "--logic", "fnl"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(String::from_utf8_lossy(&o.stderr).lines().count(), 1);
    assert_eq!(code(&["--help"]), Some(0));
}
