use std::path::Path;
use std::process::{Command, Output};

fn sl1(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sl1"))
        .args(args)
        .env("SL1_WORKERS", "1")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).expect("write input");
    path.to_str().expect("utf-8 path").to_string()
}

const CHAIN: &str = "universe 5\nstore x=0\nheap 0->1 1->2 2->3 3->4\n";

#[test]
fn finite_check_of_total_heap() {
    let o = sl1(&["check", "--finite", "forall y. alloc(y)"]);
    assert_eq!(o.status.code(), Some(10));
    assert_eq!(
        stdout(&o),
        "SAT\nbound 1 of 6\nvisited 4\nsteps 4\nuniverse 1\nstore\nheap 0->0\n"
    );
}

#[test]
fn infinite_check_of_total_heap() {
    let o = sl1(&["check", "--infinite", "forall y. alloc(y)"]);
    assert_eq!(o.status.code(), Some(20));
    assert!(stdout(&o).starts_with("UNSAT\nbound 24 of 24\n"));
}

#[test]
fn fo_check_needs_an_oracle_bound() {
    let f = "exists x. forall y. ~x = f(y) & forall y, z. f(y) = f(z) -> y = z";
    assert_eq!(sl1(&["check", "--logic", "fo", f]).status.code(), Some(1));
    let o = sl1(&["check", "--logic", "fo", "--oracle-bound", "4", f]);
    assert_eq!(o.status.code(), Some(30));
    assert!(stdout(&o).starts_with("UNKNOWN\nbound 4 of 4\n"));
}

#[test]
fn input_errors_exit_with_one() {
    let o = sl1(&["check", "exists x. x ~> "]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1:16"));
    assert_eq!(sl1(&["check", "forall x. exists y. x = y"]).status.code(), Some(1));
    assert_eq!(sl1(&["check", "--bogus"]).status.code(), Some(1));
    assert_eq!(sl1(&["--help"]).status.code(), Some(0));
}

#[test]
fn translations() {
    let o = sl1(&["translate", "--to-fo", "alloc(x) & |U| >= 2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "d(x) & (exists x1. exists x2. ~x2 = x1)\n");
    let o = sl1(&["translate", "--from-fo-finite", "--logic", "fo", "forall x. f(x) = x"]);
    assert_eq!(stdout(&o), "(forall x. x ~> x) & (forall x1. alloc(x1))\n");
    let o = sl1(&["translate", "--to-fo", "emp"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn translation_output_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.fo");
    let o = sl1(&[
        "translate",
        "--to-fo",
        "--out",
        out.to_str().unwrap(),
        "exists x. forall y. x ~> y | |h| >= |U| - 1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    sl1::syntax::parse_fo(&text).expect("emitted FO parses");
}

#[test]
fn modelcheck_reports_truth() {
    let o = sl1(&["modelcheck", "--formula", "emp", "--structure", "universe 2"]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "true\n"));
    let dir = tempfile::tempdir().unwrap();
    let st = write(dir.path(), "chain.txt", CHAIN);
    let o = sl1(&["modelcheck", "--formula", "x ~> y", "--structure", &st]);
    assert_eq!(o.status.code(), Some(1));
    let o = sl1(&["modelcheck", "--formula", "exists y. x ~> y & ~alloc(y) | |h| >= 4", "--structure", &st]);
    assert_eq!(stdout(&o), "true\n");
}

#[test]
fn structure_surgery() {
    let dir = tempfile::tempdir().unwrap();
    let st = write(dir.path(), "chain.txt", CHAIN);
    let o = sl1(&["contract", "--structure", &st, "--vars", "x", "--bound", "1"]);
    assert_eq!(stdout(&o), "universe {0 1 4}\nstore x=0\nheap 0->1 1->4\n");
    let o = sl1(&["restrict", "--structure", &st, "--vars", "x"]);
    assert_eq!(stdout(&o), CHAIN);
    let o = sl1(&["frontier", "--structure", &st, "--vars", "x", "--locs", "2"]);
    assert_eq!(
        stdout(&o),
        "V {0 2}\nVbar {0 1 2 3 4}\nW {0 2}\nsegment 0 1\nsegment 2 3\n"
    );
    let o = sl1(&["contract", "--structure", &st, "--vars", "x", "--bound", "0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn witness_files_are_models() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("--finite", "exists x, y. forall z. x ~> y & ~x = y & ~z ~> x"),
        ("--finite", "forall y. alloc(y) & |U| >= 3"),
        ("--infinite", "exists x. ~alloc(x) & |h| >= 2"),
        ("--infinite", "~emp"),
    ];
    for (i, (mode, formula)) in cases.iter().enumerate() {
        let w = dir.path().join(format!("w{i}.txt"));
        let o = sl1(&["check", mode, "--witness-out", w.to_str().unwrap(), formula]);
        assert_eq!(o.status.code(), Some(10), "{formula}");
        let o = sl1(&["modelcheck", "--formula", formula, "--structure", w.to_str().unwrap()]);
        assert_eq!(stdout(&o), "true\n", "{formula}");
    }
}

#[test]
fn formula_from_file_and_stdin() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "phi.sl1", "forall y. alloc(y)\n");
    assert_eq!(sl1(&["check", "--finite", &f]).status.code(), Some(10));
    let fo = write(dir.path(), "phi.fo", "forall x. f(x) = x\n");
    let o = sl1(&["translate", "--from-fo-finite", &fo]);
    assert_eq!(o.status.code(), Some(0));

    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_sl1"))
        .args(["check", "--infinite", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"forall y. alloc(y)").unwrap();
    assert_eq!(child.wait_with_output().unwrap().status.code(), Some(20));
}

#[test]
fn fuzz_is_clean_and_repeatable() {
    let a = sl1(&["fuzz", "--seed", "7", "--count", "200"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert!(stdout(&a).contains("disagreements 0\n"));
    let b = sl1(&["fuzz", "--seed", "7", "--count", "200"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn worker_count_does_not_change_output() {
    let f = "exists x1, x2. forall y1, y2. (x1 ~> y1 -> ~x2 = y1) & |h| >= 2 & ~|h| >= 4";
    let run = |w: &str| {
        Command::new(env!("CARGO_BIN_EXE_sl1"))
            .args(["check", "--finite", f])
            .env("SL1_WORKERS", w)
            .output()
            .unwrap()
    };
    let one = run("1");
    assert_eq!(one.stdout, run("4").stdout);
    assert_eq!(one.status.code(), run("4").status.code());
    assert_eq!(run("0").status.code(), Some(1));
}
