use std::io::Write;
use std::process::{Command, Output};

fn weyl_derham(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weyl-derham"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn derham_of_delta() {
    let o = weyl_derham(&["derham", "--n", "1", "--rel", "x1", "--shift0", "0", "--window", "-5", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let h1 = out.lines().find(|l| l.trim_start().starts_with("H^1 ")).unwrap();
    let cells: Vec<&str> = h1.split_whitespace().collect();
    // label, 11 cells, total
    assert_eq!(cells.len(), 13);
    assert_eq!(cells[1 + 5], "1");
    assert_eq!(cells[12], "1");
    assert!(out.contains("H^0: injective, isomorphism-certified; certificate: holonomic"));
}

#[test]
fn dimension_of_delta() {
    let o = weyl_derham(&["dimension", "--n", "1", "--rel", "x1", "--shift0", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("d = 1, holonomic"), "{out}");
    assert!(out.contains("valid for the completion by dimension equality"));
}

#[test]
fn tabular_output() {
    let o = weyl_derham(&["derham", "--n", "1", "--rel", "d1", "--window", "-3", "3", "--margin", "1", "--format", "tabular"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut body = out.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(body.next(), Some("i \\ d\t-3\t-2\t-1\t0\t1\t2\t3"));
    assert_eq!(body.next(), Some("0\t0\t0\t0\t1\t0\t0\t0"));
    assert_eq!(body.next(), Some("1\t0\t0\t0\t0\t0\t0\t0"));
    assert_eq!(body.next(), None);
    assert!(out.lines().any(|l| l.starts_with("# verdict H^0")));
}

#[test]
fn job_file_with_override() {
    let path = std::env::temp_dir().join(format!("weyl-derham-job-{}.txt", std::process::id()));
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "command = derham\nn = 1\nrel = \"x1\"\nwindow = -5 5\nmargin = 2\nformat = tabular").unwrap();
    drop(f);
    let p = path.to_str().unwrap();
    let a = weyl_derham(&["--job", p]);
    let b = weyl_derham(&["--job", p, "--window", "-2", "2", "--margin", "1"]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert!(stdout(&a).contains("# window = -5 5"));
    assert!(stdout(&b).contains("# window = -2 2"));
}

#[test]
fn resolve_and_completion_check() {
    let o = weyl_derham(&["resolve", "--n", "2", "--rel", "d1", "--rel", "d2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("ranks: 1 2 1"));
    let o = weyl_derham(&["completion-check", "--n", "1", "--rel", "x1", "--window", "-4", "4", "--margin", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("induced map is the identity"));
}

#[test]
fn exit_codes() {
    assert_eq!(weyl_derham(&["--help"]).status.code(), Some(0));
    let o = weyl_derham(&["derham", "--n", "1", "--rel", "x1 + d1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("homogeneous"));
    assert_eq!(weyl_derham(&["derham", "--n", "1", "--rel", "y1"]).status.code(), Some(1));
    assert_eq!(weyl_derham(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(weyl_derham(&["--job", "/nonexistent"]).status.code(), Some(1));
}

#[test]
fn run_examples_passes() {
    let o = weyl_derham(&["run-examples"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("11 cases: 11 passed, 0 failed\n"));
}
