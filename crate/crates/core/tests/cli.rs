mod common;

use std::path::{Path, PathBuf};
use std::process::Command;

fn gentle(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gentle")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gentle-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn dims_of_simple_three() {
    let f = common::fixture_path("a5-two-rel");
    let (code, out, _) = gentle(&["dims", path_str(&f), "--string", "e(3)"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("pd 2\nid 2\nsum 4\n"), "{out}");
}

#[test]
fn dims_of_band() {
    let f = common::fixture_path("kron-bridge");
    let (code, out, _) = gentle(&["dims", path_str(&f), "--band", "b1 b2^-1", "--n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out, "pd 1\nid 1\nsum 2\nmethod band_rule\n");
}

#[test]
fn fan_is_quasi_tilted() {
    let (code, out, _) = gentle(&["quasi-tilted", path_str(&common::fixture_path("fan"))]);
    assert_eq!((code, out.as_str()), (0, "QuasiTilted\n"));
}

#[test]
fn scalar_commands() {
    let f = common::fixture_path("pinwheel-9");
    assert_eq!(gentle(&["gldim", path_str(&f)]).1, "inf\n");
    assert_eq!(gentle(&["findim", path_str(&f)]).1, "2\n");
    let (code, out, _) = gentle(&["hbdim", path_str(&common::fixture_path("a5-two-rel")), "--max-len", "6"]);
    assert_eq!((code, out.as_str()), (0, "4\nwitness e(3)\nexact false\n"));
}

#[test]
fn reports_match_golden_files() {
    for name in common::FIXTURES {
        let (code, out, _) = gentle(&["report", path_str(&common::fixture_path(name)), "--json"]);
        let golden = std::fs::read_to_string(common::golden_path(name)).unwrap();
        assert_eq!(out, golden, "{name}");
        assert_eq!(code, if name == "double-a5" { 2 } else { 0 }, "{name}");
    }
}

#[test]
fn report_is_deterministic() {
    let f = common::fixture_path("kron-bridge");
    let a = gentle(&["report", path_str(&f), "--json"]);
    let b = gentle(&["report", path_str(&f), "--json"]);
    assert_eq!(a, b);
}

#[test]
fn oracle_check_agrees_on_fixtures() {
    let f = common::fixture_path("kron-bridge");
    let (code, out, _) = gentle(&["oracle-check", path_str(&f), "--max-len", "4", "--second-prime", "32003"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("mismatches 0\n"));
}

#[test]
fn exit_codes_for_malformed_input() {
    let cases: [(&str, &str, &[&str], i32); 8] = [
        ("undeclared.gq", "vertices 1 2\narrow a 1 2\nrel a z\n", &["validate"], 1),
        ("noncomposable.gq", "vertices 1 2 3\narrow a 1 2\narrow b 2 3\nrel b a\n", &["validate"], 1),
        ("duplicate.gq", "vertices 1 1\n", &["gldim"], 1),
        ("directive.gq", "vertex 1\n", &["findim"], 1),
        ("g1.gq", "vertices 1 2 3 4\narrow x 1 2\narrow y 1 3\narrow z 1 4\n", &["validate"], 2),
        ("fd.gq", "vertices 1 2\narrow x 1 2\narrow y 2 1\n", &["dims", "--string", "x"], 2),
        ("g4.gq", "vertices 1 2 3 4\narrow a 1 2\narrow b 2 3\narrow c 3 4\nrel a b c\n", &["report", "--json"], 2),
        ("bad-string.gq", "vertices 1 2 3\narrow a 1 2\narrow b 2 3\nrel a b\n", &["dims", "--string", "a b"], 1),
    ];
    for (name, text, args, expected) in cases {
        let p = scratch(name, text);
        let mut argv = vec![args[0], path_str(&p)];
        argv.extend_from_slice(&args[1..]);
        let (code, out, err) = gentle(&argv);
        assert_eq!(code, expected, "{name}: {out}{err}");
    }
}

#[test]
fn cap_and_usage_errors() {
    // two overlapping bands, so strings grow exponentially with length
    let wild = scratch(
        "wild.gq",
        "vertices 1 2 3\narrow a1 1 2\narrow a2 1 2\narrow b1 2 3\narrow b2 2 3\nrel a1 b1\nrel a2 b2\n",
    );
    let (code, _, err) = gentle(&["hbdim", path_str(&wild), "--max-len", "60"]);
    assert_eq!(code, 3, "{err}");
    let f = common::fixture_path("kron-bridge");
    assert_eq!(gentle(&["dims", path_str(&f)]).0, 1);
    assert_eq!(gentle(&["oracle-check", path_str(&f), "--prime", "100"]).0, 1);
    assert_eq!(gentle(&["validate", "/nonexistent/x.gq"]).0, 1);
    assert_eq!(gentle(&["--help"]).0, 0);
}

#[test]
fn parse_errors_carry_positions() {
    let p = scratch("span.gq", "vertices 1 2\narrow a 1 2\nrel a z\n");
    let (_, _, err) = gentle(&["validate", path_str(&p)]);
    assert!(err.contains(":3:7: undeclared arrow `z`"), "{err}");
}
