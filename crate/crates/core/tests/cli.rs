use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_courant-vpa"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn examples_list_names_every_example() {
    let o = run(&["examples", "list"]);
    assert_eq!(o.status.code(), Some(0));
    let names: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(names, courant_vpa::courant::examples::NAMES);
}

#[test]
fn shipped_fixtures_match_emitted_examples() {
    for (file, name) in [
        ("sl2.cvpa", "quadratic_lie(sl2)"),
        ("heisenberg.cvpa", "heisenberg"),
        ("exact2.cvpa", "exact(2)"),
        ("trivial2.cvpa", "trivial(2)"),
    ] {
        let o = run(&["examples", "emit", name]);
        assert_eq!(o.status.code(), Some(0));
        let shipped = std::fs::read_to_string(fixture(file)).unwrap();
        assert_eq!(stdout(&o), shipped, "{file}");
    }
}

#[test]
fn roundtrip_sl2() {
    let f = fixture("sl2.cvpa");
    let o = run(&["roundtrip", f.to_str().unwrap(), "--max-degree", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("A: 1/1 tables equal; B: 4/4 tables equal"), "{}", stdout(&o));
}

#[test]
fn broken_fixture_names_the_axiom() {
    let f = fixture("broken.cvpa");
    let o = run(&["check", "courant", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("c5 at (beta, beta)"), "{}", stdout(&o));

    let o = run(&["--json", "check", "courant", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["passed"], false);
    let v = doc["violations"].as_array().unwrap();
    let c5 = v.iter().find(|v| v["axiom"] == "c5").expect("c5 reported");
    assert_eq!(c5["tuple"], serde_json::json!(["beta", "beta"]));
    assert_eq!(c5["module"], "courant");
    assert!(c5["lhs"].is_string() && c5["rhs"].is_string());
}

#[test]
fn passing_fixtures_exit_zero() {
    for f in ["sl2.cvpa", "heisenberg.cvpa", "exact2.cvpa", "trivial2.cvpa"] {
        let o = run(&["check", "courant", fixture(f).to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{f}: {}", stdout(&o));
    }
}

#[test]
fn parse_errors_exit_two_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.cvpa");
    std::fs::write(&p, "SPACE A e\nSPACE B u\nPRODUCT p B B -> A\n  (u,u) -> 1/0*e\nEND\n").unwrap();
    let o = run(&["check", "courant", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("4:12"), "{:?}", o);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["check", "lie", "x"]).status.code(), Some(2));
    assert_eq!(run(&["examples", "emit", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn convert_there_and_back() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("e2.1tca.cvpa");
    let src = fixture("exact2.cvpa");
    let o = run(&["convert", src.to_str().unwrap(), "--to", "1tca", "--out", t.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["check", "1tca", t.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["convert", t.to_str().unwrap(), "--to", "courant"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), std::fs::read_to_string(&src).unwrap());
}

#[test]
fn build_then_extract() {
    let dir = tempfile::tempdir().unwrap();
    let v = dir.path().join("heis.vpa.cvpa");
    let back = dir.path().join("heis.back.cvpa");
    let src = fixture("heisenberg.cvpa");
    let o = run(&["build", src.to_str().unwrap(), "--max-degree", "3", "--out", v.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["extract", v.to_str().unwrap(), "--out", back.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let x = courant_vpa::format::parse_path(&back).unwrap().to_courant().unwrap();
    assert_eq!(x, courant_vpa::courant::examples::heisenberg());
}

#[test]
fn build_rejects_broken_input() {
    let o = run(&["build", fixture("broken.cvpa").to_str().unwrap(), "--max-degree", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("c5"));
}

#[test]
fn thread_cap_from_environment() {
    let f = fixture("sl2.cvpa");
    let o = bin()
        .env("COURANT_VPA_THREADS", "1")
        .args(["check", "courant", f.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}
