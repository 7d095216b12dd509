use std::path::PathBuf;
use std::process::Command;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn dadl(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dadl"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn check(theory: &str, query: &str, mode: &str) -> (i32, String, String) {
    let path = data(theory);
    dadl(&[
        "check",
        "--theory",
        path.to_str().unwrap(),
        "--query",
        query,
        "--mode",
        mode,
    ])
}

#[test]
fn algebraic_mode_on_the_driving_example() {
    assert_eq!(check("driving.dal", "P(d + o)", "default-algebraic").0, 0);
    assert_eq!(
        check("driving_blocked.dal", "P(d + o)", "default-algebraic").0,
        1
    );
}

#[test]
fn classical_no_prints_a_countermodel() {
    let (code, out, _) = check("driving.dal", "P(o)", "classical");
    assert_eq!(code, 1);
    assert!(out.starts_with("NO\ncountermodel: "), "{out}");
}

#[test]
fn errors_exit_with_two() {
    let (code, out, err) = check("driving.dal", "P(x)", "classical");
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("undeclared"), "{err}");
    assert_eq!(check("inconsistent.dal", "P(a)", "classical").0, 2);
    assert_eq!(check("general.dal", "F(a)", "default-algebraic").0, 2);
    assert_eq!(check("missing.dal", "P(a)", "classical").0, 2);
    assert_eq!(dadl(&["check"]).0, 2);
}

#[test]
fn extensions_listing() {
    let path = data("driving.dal");
    let p = path.to_str().unwrap();
    let (code, out, _) = dadl(&["extensions", "--theory", p, "--kind", "algebraic"]);
    assert_eq!(code, 0);
    assert!(out.contains("P generated by 1 = "), "{out}");
    assert!(out.contains("F generated by 0 = 0"), "{out}");
    let (_, out, _) = dadl(&["extensions", "--theory", p, "--kind", "reiter"]);
    assert_eq!(out.matches("extension ").count(), 1);
    assert!(out.contains("    P(o)\n"));
    let path = data("competing.dal");
    let (_, out, _) = dadl(&["extensions", "--theory", path.to_str().unwrap()]);
    assert!(out.contains("extension 2 of 2"));
}

#[test]
fn dump_algebra_of_free_algebra_on_one_generator() {
    let path = data("free.dal");
    let (code, out, _) = dadl(&[
        "dump-algebra",
        "--theory",
        path.to_str().unwrap(),
        "--format",
        "dot",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("digraph"));
    assert_eq!(out.matches("label=").count(), 4);
    assert_eq!(out.matches(" -> ").count(), 4);
    let path = data("inconsistent.dal");
    assert_eq!(
        dadl(&["dump-algebra", "--theory", path.to_str().unwrap()]).0,
        2
    );
}

#[test]
fn prove_then_verify() {
    let theory = data("driving.dal");
    let t = theory.to_str().unwrap();
    let (code, cert, _) = dadl(&["prove", "--theory", t, "--query", "P(d + o)"]);
    assert_eq!(code, 0);
    let dir = std::env::temp_dir().join(format!("dadl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.cert");
    std::fs::write(&good, &cert).unwrap();
    let (code, out, _) = dadl(&[
        "verify",
        "--theory",
        t,
        "--certificate",
        good.to_str().unwrap(),
    ]);
    assert_eq!((code, out.as_str()), (0, "VALID\n"));
    let (code, _, _) = dadl(&[
        "verify",
        "--theory",
        t,
        "--certificate",
        good.to_str().unwrap(),
        "--query",
        "P(o)",
    ]);
    assert_eq!(code, 1);
    let bad = dir.join("bad.cert");
    std::fs::write(&bad, cert.replace("premise", "axiom D1")).unwrap();
    let (code, out, _) = dadl(&[
        "verify",
        "--theory",
        t,
        "--certificate",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    assert!(out.starts_with("INVALID: "));
    std::fs::remove_dir_all(&dir).ok();
    let (code, out, _) = dadl(&["prove", "--theory", t, "--query", "F(o)"]);
    assert_eq!((code, out.as_str()), (1, "NO\n"));
}

#[test]
fn crosscheck_verb() {
    let (code, out, _) = dadl(&["crosscheck", "--cases", "0"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("PASS\n"));
    let (code, out, _) = dadl(&["crosscheck", "--cases", "0", "--mutant", "drop-dual-check"]);
    assert_eq!(code, 1);
    assert!(out.contains("worked-example regression: FAIL"), "{out}");
    assert_eq!(dadl(&["crosscheck", "--max-actions", "4"]).0, 2);
}
