use std::process::{Command, Output};

fn infocap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_infocap")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn catalog_lists_every_schema() {
    let o = infocap(&["catalog"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 20 + 8 + 4 + 1);
    let s6 = stdout(&infocap(&["catalog", "--name", "S6"]));
    assert!(s6.contains("key{1}") && s6.contains("R[1]⊆R[2]") && s6.contains("CYCLES"), "{s6}");
    let t7 = stdout(&infocap(&["catalog", "--name", "T7"]));
    assert!(t7.contains("key{1}, key{2,3}"), "{t7}");
    assert_eq!(infocap(&["catalog", "--name", "S99"]).status.code(), Some(2));
}

#[test]
fn verify_counts_reports_nine_matches() {
    let o = infocap(&["verify", "counts", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS count.")).count(), 9);
    assert!(text.contains("9 of 9 checks passed"));
}

#[test]
fn verify_obstruction_prints_certificate() {
    let o = infocap(&["verify", "obstruction"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("3-cycle has no SYMM candidate"));
    assert!(text.contains("examined: 64"));
}

#[test]
fn verify_all_at_two_is_fast_and_green() {
    let start = std::time::Instant::now();
    let o = infocap(&["verify", "all", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(start.elapsed().as_secs_f64() < 5.0);
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn verify_csv() {
    let text = stdout(&infocap(&["verify", "sb", "--n", "2", "--format", "csv"]));
    assert!(text.starts_with("claim,status,detail\n"));
    assert!(text.contains("sb.equivariant-swap-pair,pass,"));
}

#[test]
fn exit_codes() {
    assert_eq!(infocap(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(infocap(&["verify", "counts", "--format", "dot"]).status.code(), Some(2));
    assert_eq!(infocap(&["--budget", "0", "catalog"]).status.code(), Some(2));
    assert_eq!(infocap(&["verify", "counts", "--n", "9"]).status.code(), Some(3));
    assert_eq!(infocap(&["--budget", "10", "verify", "counts", "--n", "3"]).status.code(), Some(3));
}

#[test]
fn hasse_dot_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.dot");
    let b = dir.path().join("b.dot");
    assert!(infocap(&["hasse", "binary", "--out", a.to_str().unwrap()]).status.success());
    assert!(infocap(&["--sequential", "hasse", "binary", "--out", b.to_str().unwrap()]).status.success());
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    let dot = String::from_utf8(a).unwrap();
    assert_eq!(dot.matches(" -> ").count(), 9);

    let ternary = stdout(&infocap(&["hasse", "ternary", "--n", "2"]));
    assert_eq!(ternary.matches(" -> ").count(), 7);
    let report = stdout(&infocap(&["hasse", "binary", "--format", "report"]));
    assert!(report.contains("MAPPING(m)"));
}

#[test]
fn map_apply_and_invert() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("src.txt");
    std::fs::write(&src, "-- one edge\na b\n").unwrap();
    let o = infocap(&["map", "apply", "--name", "m", "--in", src.to_str().unwrap()]);
    assert!(o.status.success());
    let image = stdout(&o);
    let mut lines: Vec<&str> = image.lines().collect();
    lines.sort();
    assert_eq!(lines, ["a a", "a b", "b a"]);

    let img = dir.path().join("img.txt");
    std::fs::write(&img, &image).unwrap();
    let back = stdout(&infocap(&["map", "invert", "--name", "m", "--in", img.to_str().unwrap()]));
    assert_eq!(back, "a b\n");

    let stray = dir.path().join("stray.txt");
    std::fs::write(&stray, "a b\n").unwrap();
    assert_eq!(infocap(&["map", "invert", "--name", "m", "--in", stray.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(infocap(&["map", "apply", "--name", "nope", "--in", src.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn map_verify_and_list() {
    assert!(stdout(&infocap(&["map", "list"])).contains("f            T1 -> T6"));
    let o = infocap(&["map", "verify", "--name", "f", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("as expected"));
}

#[test]
fn counts_and_growth() {
    let csv = stdout(&infocap(&["counts", "--n-max", "3", "--format", "csv"]));
    assert!(csv.contains("F4,SYMM,3,64\n"));
    assert!(csv.contains("F15,PATHS_CYCLES,3,34\n"));
    let g = stdout(&infocap(&["growth", "F4", "F5", "--n-max", "6", "--format", "csv"]));
    assert!(g.starts_with("n,F4,F5,sign\n"));
    assert!(g.contains("\n2,8,9,-1\n") && g.contains("\n3,64,64,0\n"));
}

#[test]
fn chains_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("g.txt");
    std::fs::write(&p, "-- cut chain\nnode y1 Y\nnode x1 X\nnode y2 Y\nnode x2 X truncated\ng y1 x1\nf x1 y2\ng y2 x2\n").unwrap();
    let text = stdout(&infocap(&["chains", "--in", p.to_str().unwrap()]));
    assert!(text.contains("SH2 y1 x1 y2 x2"));
    assert!(text.contains("pair x1 y1"));
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "node x1 X\n").unwrap();
    assert_eq!(infocap(&["chains", "--in", bad.to_str().unwrap()]).status.code(), Some(2));
}
