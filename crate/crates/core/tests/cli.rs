use std::fs;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_comboflats"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("comboflats-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn validate_accepts_and_rejects() {
    let ok = run(&["validate", &data("intro.txt")]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok), "OK\n");

    let bad = scratch("empty_rank.txt", "N 1\nS - 1\nS 1 1\n");
    let out = run(&["validate", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("NotNormalized"));

    let cage = scratch("small_cage.txt", "N 1\ncage 1\nS - 0\nS 1 2\n");
    assert_eq!(run(&["validate", &cage]).status.code(), Some(1));
}

#[test]
fn malformed_input_exits_two_with_line_number() {
    let bad = scratch("bad_subset.txt", "N 2\nS - 0\nS 1,7 1\n");
    let out = run(&["flats", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));

    assert_eq!(run(&["flats", "/nonexistent/file"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["cohomology", &data("intro.txt"), "--coeffs", "weird"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn size_guard_names_the_bound() {
    let out = run(&["flats", &data("intro.txt"), "--cage", "40,40,40,40"]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("TooLarge") && err.contains("1000000"), "{err}");
}

#[test]
fn cage_override() {
    let out = run(&["whitney", &data("intro.txt"), "--cage", "1", "1", "1", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let tight = run(&["whitney", &data("intro.txt")]);
    assert_eq!(stdout(&out), stdout(&tight));
    let flats = stdout(&run(&["flats", &data("intro.txt"), "--cage", "1,1,1,3"]));
    assert!(flats.contains("1,1,1,3 : 3"));
}

#[test]
fn simplify_prints_trace_and_result() {
    let doubled = scratch(
        "doubled.txt",
        "N 2\ncage 2 2\nS - 0\nS 1 2\nS 2 2\nS 1,2 2\n",
    );
    let out = run(&["simplify", &doubled]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "# reduce 1\n# reduce 2\n# surviving elements 1 2\nN 2\ncage 1 1\nS - 0\nS 1 1\nS 2 1\nS 1,2 2\n"
    );
}

#[test]
fn simplify_reports_deleted_loops() {
    let with_loop = scratch("loop.txt", "N 2\nS - 0\nS 1 0\nS 2 1\nS 1,2 1\n");
    let out = stdout(&run(&["simplify", &with_loop]));
    assert!(
        out.starts_with("# deloop 1\n# surviving elements 2\nN 1\n"),
        "{out}"
    );
}

#[test]
fn cohomology_table() {
    let out = stdout(&run(&[
        "cohomology",
        &data("intro.txt"),
        "--coeffs",
        "ones",
    ]));
    assert_eq!(out.lines().count(), 121);
    assert!(out.contains("y[1,0,0,0] * y[0,1,0,0] = 1 * y[1,1,1,0]\n"));
    assert!(out.contains("y[1,1,1,0] * y[0,0,0,2] = 0\n"));
    let binomial = stdout(&run(&["cohomology", &data("intro.txt")]));
    assert!(
        binomial.contains("y[0,0,0,1] * y[0,0,0,1] = 1/4 * y[0,0,0,2]\n"),
        "{binomial}"
    );
}

#[test]
fn hasse_is_deterministic_and_written_to_file() {
    let path = scratch("hasse.dot", "");
    let out = run(&["hasse", &data("intro.txt"), "--dot", &path]);
    assert_eq!(out.status.code(), Some(0));
    let written = fs::read_to_string(&path).unwrap();
    let again = stdout(&run(&["hasse", &data("intro.txt"), "--dot", "-"]));
    assert_eq!(written, again);
    assert_eq!(written.matches(" -> ").count(), 19);
    assert_eq!(written.matches("rank=same").count(), 4);
}

#[test]
fn realize_reports_generality() {
    let out = run(&["realize", &data("intro_subspace.txt"), "--check-pg"]);
    assert_eq!(out.status.code(), Some(0));
    let intro = fs::read_to_string(data("intro.txt")).unwrap();
    assert_eq!(stdout(&out), format!("{intro}# polymatroid general: yes\n"));

    let line = run(&["realize", &data("coordinate_line.txt"), "--check-pg"]);
    assert_eq!(line.status.code(), Some(1));
    assert!(stderr(&line).contains("at (1)"), "{}", stderr(&line));
    assert_eq!(
        run(&["realize", &data("coordinate_line.txt")])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn check_axioms_on_hand_written_lattices() {
    let out = run(&["check-axioms", &data("ordinary_flats.txt")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("NotGraded"));

    let bowtie = scratch(
        "bowtie.txt",
        "0\na\nb\nc\nd\n1\ncover 0 a\ncover 0 b\ncover a c\ncover a d\ncover b c\ncover b d\ncover c 1\ncover d 1\n",
    );
    let out = run(&["check-axioms", &bowtie]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("semimodular lattice: no"));

    let wrong_rank = scratch("wrong_rank.txt", "0 : 0\n1 : 2\ncover 0 1\n");
    assert_eq!(run(&["check-axioms", &wrong_rank]).status.code(), Some(1));
}

#[test]
fn fuzz_runs_clean() {
    let out = run(&["fuzz", "--seed", "1000", "--count", "15"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert_eq!(
        stdout(&out),
        "fuzz: 15 instances from seed 1000, 0 failed\n"
    );
}
