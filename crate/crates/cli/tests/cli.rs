use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", name].iter().collect();
    p.display().to_string()
}

fn treestack(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treestack")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Slice lines without the `#` header.
fn listed(out: &Output) -> Vec<String> {
    stdout(out).lines().filter(|l| !l.starts_with('#')).map(str::to_string).collect()
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&treestack(&["validate", &fixture("example.tsa")])), 0);

    let bad = dir.path().join("bad.tsa");
    std::fs::write(&bad, "alphabet a\nstates p\ninitial p\nfinal p\ntrans p a true id r\n").unwrap();
    let out = treestack(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("undeclared state"));

    let empty = dir.path().join("empty.tsa");
    std::fs::write(&empty, "").unwrap();
    assert_eq!(code(&treestack(&["validate", empty.to_str().unwrap()])), 2);
    assert_eq!(code(&treestack(&["validate", dir.path().join("missing").to_str().unwrap()])), 2);
}

#[test]
fn run_exit_codes() {
    let ex = fixture("example.tsa");
    let out = treestack(&["run", &ex, "a a b c c d", "--k", "2"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("accepted"));
    assert_eq!(code(&treestack(&["run", &ex, "a b d c", "--k", "2"])), 1);
    assert_eq!(code(&treestack(&["run", &ex, "-", "--k", "2"])), 1);
    assert_eq!(code(&treestack(&["run", &ex, "a z"])), 2);
    assert_eq!(code(&treestack(&["run", &ex, "a a b c c d", "--max-steps", "3"])), 3);
    let traced = treestack(&["run", &ex, "a b c d", "--trace"]);
    assert!(stdout(&traced).lines().count() > 1);
}

#[test]
fn enumerate_slices() {
    let out = treestack(&["enumerate", &fixture("example.tsa"), "--max-len", "4", "--k", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(listed(&out), ["a b c d"]);
    assert!(stdout(&out).contains("complete true"));

    let out = treestack(&["enumerate", &fixture("anbn.tsa"), "--max-len", "5", "--k", "1"]);
    assert_eq!(listed(&out), ["a b", "a a b b"]);

    let out = treestack(&["enumerate", &fixture("example.tsa"), "--max-len", "8", "--max-configs", "5"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn constructions_write_files() {
    let dir = tempfile::tempdir().unwrap();
    let anbn = fixture("anbn.tsa");

    let out = treestack(&["perm", &anbn, "-N", "2", "--sigma", "2 1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).lines().any(|l| l == "# claimed_k 6"));

    let perm = dir.path().join("perm.tsa");
    assert_eq!(code(&treestack(&["perm", &anbn, "-N", "2", "--sigma", "2 1", "-o", perm.to_str().unwrap()])), 0);
    let out = treestack(&["enumerate", perm.to_str().unwrap(), "--max-len", "4"]);
    assert_eq!(listed(&out), ["a b", "b a", "a a b b", "a b b a", "b a a b", "b b a a"]);
    assert_eq!(code(&treestack(&["run", perm.to_str().unwrap(), "b a"])), 0);
    assert_eq!(code(&treestack(&["run", perm.to_str().unwrap(), "a b a b"])), 1);

    assert_eq!(code(&treestack(&["perm", &anbn, "-N", "2", "--sigma", "1 2 3"])), 2);
    assert_eq!(code(&treestack(&["perm", &anbn, "-N", "2", "--sigma", "1 1"])), 2);

    let out = treestack(&["hash", &anbn, "-N", "2"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).lines().any(|l| l == "# degree 4"));

    let closure = dir.path().join("closure.tsa");
    assert_eq!(code(&treestack(&["closure", &anbn, "-N", "1", "-o", closure.to_str().unwrap()])), 0);
    let out = treestack(&["compare", closure.to_str().unwrap(), &anbn, "--max-len", "6"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert_eq!(code(&treestack(&["closure", &anbn, "-N", "5"])), 2);
}

#[test]
fn compare_exit_codes() {
    let ex = fixture("example.tsa");
    let anbn = fixture("anbn.tsa");
    assert_eq!(code(&treestack(&["compare", &ex, &ex, "--max-len", "8"])), 0);
    let out = treestack(&["compare", &anbn, &ex, "--max-len", "4"]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out), "< a a b b\n< a b\n> a b c d\n");
    assert_eq!(code(&treestack(&["compare", &anbn, "--oracle", &anbn, "-N", "1", "--max-len", "6"])), 0);

    let dir = tempfile::tempdir().unwrap();
    let perm = dir.path().join("perm.tsa");
    treestack(&["perm", &anbn, "-N", "2", "--sigma", "2 1", "-o", perm.to_str().unwrap()]);
    let p = perm.to_str().unwrap();
    assert_eq!(code(&treestack(&["compare", p, "--oracle", &anbn, "-N", "2", "--sigma", "2 1", "--max-len", "6"])), 0);
    assert_eq!(code(&treestack(&["compare", p, "--oracle", &anbn, "-N", "2", "--sigma", "1 2", "--max-len", "6"])), 1);
    assert_eq!(code(&treestack(&["compare", &anbn, "--max-len", "4"])), 2);
}

#[test]
fn output_is_deterministic() {
    let args = ["enumerate", "", "--max-len", "8"];
    for name in ["example.tsa", "anbn.tsa", "abc-star.tsa"] {
        let f = fixture(name);
        let mut a = args;
        a[1] = &f;
        assert_eq!(stdout(&treestack(&a)), stdout(&treestack(&a)));
    }
    let anbn = fixture("anbn.tsa");
    let hash = ["hash", anbn.as_str(), "-N", "2"];
    assert_eq!(stdout(&treestack(&hash)), stdout(&treestack(&hash)));
}
