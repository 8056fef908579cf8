use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn spec(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mapscheme")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mapscheme-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn points_report_counts_and_bijection() {
    let o = run(&["points", "--spec", &spec("finite.ms"), "-B", "Idem", "-C", "K2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("# mapscheme points"), "{text}");
    assert!(text.contains("4 points"));
    assert!(text.contains("oracle: 4 morphisms"));
    assert!(text.contains("bijection: yes"));
    assert!(text.ends_with("verdict: verified\n"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("elapsed:"));
}

#[test]
fn json_output_is_structured() {
    let o = run(&["homscheme", "--spec", &spec("homs.ms"), "-B", "C3", "-C", "Z3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["command"].as_str().unwrap().starts_with("mapscheme homscheme"));
    assert_eq!(v["count"], 3);
    assert_eq!(v["verdict"], "verified");
}

#[test]
fn workers_do_not_change_the_output() {
    let base = ["points", "--spec", &spec("sl2.ms"), "--field", "F3", "-B", "SL2", "-C", "PolyX"];
    let one = run(&base);
    let four = run(&[&base[..], &["--workers", "4"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(stdout(&one).lines().skip(1).collect::<Vec<_>>(), stdout(&four).lines().skip(1).collect::<Vec<_>>());
}

#[test]
fn out_writes_the_report_to_a_file() {
    let path = scratch("roundtrip.txt");
    let o = run(&["roundtrip", "--spec", &spec("gl1.ms"), "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.contains("pseudogroup GL1 {"));
}

#[test]
fn degree_bound_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_mapscheme"))
        .args(["check-hopf", "--spec", &spec("gl1.ms"), "-B", "GL1"])
        .env("MAPSCHEME_DEGREE_BOUND", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("degree bound: 5"));
}

#[test]
fn errors_exit_with_three() {
    let o = run(&["points", "--spec", &spec("gl1.ms"), "-B", "GL1", "-C", "PolyX"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("finite field"));
    assert_eq!(run(&["frobnicate", "--spec", &spec("gl1.ms")]).status.code(), Some(3));
    assert_eq!(run(&["points"]).status.code(), Some(3));
    assert_eq!(run(&["points", "--spec", &spec("finite.ms"), "-B", "Nope", "-C", "K2"]).status.code(), Some(3));
}

#[test]
fn refuted_verdicts_exit_with_one() {
    let path = scratch("swap.ms");
    std::fs::write(
        &path,
        "field Q;\npresentation A { gens: a; rels: a*a - a; }\n\
         presentation B { gens: b; rels: b*b - 1; }\n\
         morphism f { source: A; target: B; images: a -> b; }\n",
    )
    .unwrap();
    let o = run(&["check-laws", "--spec", path.to_str().unwrap(), "-B", "f"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("respects relations: refuted"));
}

#[test]
fn sole_pseudogroup_is_the_default_source() {
    let o = run(&["check-hopf", "--spec", &spec("gl1.ms"), "--pmax", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for law in ["coassociativity", "counit", "antipode"] {
        assert!(text.contains(&format!("\n{law}: verified\n")), "{text}");
    }
}
