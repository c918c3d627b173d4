use std::path::PathBuf;
use std::process::{Command, Output};

const K23: &str = "\
# K2,3 with unit capacities; 0,1 on the degree-3 side
5 6 5
0 1 2 3 4
0 2 1
0 3 1
0 4 1
1 2 1
1 3 1
1 4 1
";

const K33: &str = "6 9 6
0 1 2 3 4 5
0 3 1
0 4 1
0 5 1
1 3 1
1 4 1
1 5 1
2 3 1
2 4 1
2 5 1
";

fn file(name: &str, text: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn ghz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ghz")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn ghtree_on_k23() {
    let k23 = file("k23.txt", K23);
    let o = ghz(&["ghtree", k23.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let edges: Vec<&str> = out.lines().filter(|l| !l.contains(':')).collect();
    let bags: Vec<&str> = out.lines().filter(|l| l.contains(':')).collect();
    assert_eq!(edges.len(), 4);
    assert_eq!(bags.len(), 5);
    assert!(edges.contains(&"0 1 3"), "{out}");
    assert_eq!(edges.iter().filter(|l| l.ends_with(" 2")).count(), 3);
}

#[test]
fn k33_tree_drawing_is_a_star() {
    let k33 = file("k33.txt", K33);
    let o = ghz(&["ghtree", "--format", "dot", k33.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let dot = stdout(&o);
    assert_eq!(dot.matches(" -- ").count(), 5);
    assert_eq!(dot.matches("label=\"3\"").count(), 5);
    let again = ghz(&["ghtree", "--dot", k33.to_str().unwrap()]);
    assert_eq!(stdout(&again), dot);
}

#[test]
fn verify_embed_exit_codes() {
    let k23 = file("k23-embed.txt", K23);
    let p = k23.to_str().unwrap();
    assert_eq!(code(&ghz(&["verify-embed", p, "--mode", "subgraph"])), 1);
    let bag = ghz(&["verify-embed", p, "--mode", "bag"]);
    assert!(stdout(&bag).starts_with("holds: "));
    let k33 = file("k33-embed.txt", K33);
    let sub = ghz(&["verify-embed", k33.to_str().unwrap(), "--mode", "subgraph"]);
    assert_eq!(code(&sub), 1);
}

#[test]
fn detect_minor_prints_branch_sets() {
    let k23 = file("k23-minor.txt", K23);
    let p = k23.to_str().unwrap();
    let o = ghz(&["detect-minor", p, "--pattern", "k23"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 5);
    assert!(out.lines().all(|l| l.split(':').nth(1).unwrap().split_whitespace().count() == 1));
    assert_eq!(code(&ghz(&["detect-minor", p, "--pattern", "k4"])), 1);
    assert_eq!(code(&ghz(&["detect-minor", p, "--pattern", "k23", "--bound-n", "3"])), 2);
    assert_eq!(code(&ghz(&["detect-minor", p, "--pattern", "k9"])), 3);
}

#[test]
fn usage_and_parse_errors_exit_3() {
    assert_eq!(code(&ghz(&["frobnicate"])), 3);
    assert_eq!(code(&ghz(&["ghtree", "/nonexistent/graph.txt"])), 3);
    let bad = file("bad.txt", "3 1 1\n0\n0 7 1\n");
    let o = ghz(&["ghtree", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn gen_is_deterministic_and_reparses() {
    let a = ghz(&["gen", "zweb", "--k", "6", "--interior", "1", "--attach", "2", "--seed", "9"]);
    let b = ghz(&["gen", "zweb", "--k", "6", "--interior", "1", "--attach", "2", "--seed", "9"]);
    let c = ghz(&["gen", "zweb", "--k", "6", "--interior", "1", "--attach", "2", "--seed", "10"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let web = stdout(&a);
    assert_eq!(web.lines().filter(|l| l.starts_with("F:")).count(), 1);

    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("web.txt");
    let o = ghz(&["gen", "zweb", "--k", "6", "--interior", "1", "--attach", "2", "--seed", "9", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), web);

    let reduced = ghz(&["reduce", path.to_str().unwrap()]);
    assert_eq!(code(&reduced), 0);
    let text = stdout(&reduced);
    assert!(!text.contains("F:"));
    let n_before: usize = web.split_whitespace().next().unwrap().parse().unwrap();
    let n_after: usize = text.split_whitespace().next().unwrap().parse().unwrap();
    assert_eq!(n_after, n_before - 1);

    for family in ["outerplanar", "onesum"] {
        let x = ghz(&["gen", family, "--seed", "4"]);
        assert_eq!(code(&x), 0, "{family}");
        assert_eq!(x.stdout, ghz(&["gen", family, "--seed", "4"]).stdout);
    }
}

#[test]
fn flowcheck_on_adversarial_instance() {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("adv.txt");
    let o = ghz(&["gen", "adversarial", "--extra", "2", "--seed", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let f = ghz(&["flowcheck", path.to_str().unwrap()]);
    assert_eq!(code(&f), 1);
    let out = stdout(&f);
    for line in [
        "cut_condition: holds",
        "feasible: false",
        "min_cut_ratio: 1",
        "max_concurrent_flow: 3/4",
        "flow_cut_gap: 4/3",
    ] {
        assert!(out.lines().any(|l| l == line), "missing `{line}` in\n{out}");
    }
}

#[test]
fn flowcheck_feasible_and_violated() {
    let ok = file("path-ok.txt", "3 2 3\n0 1 2\n0 1 2\n1 2 1\nD 0 2 1\n");
    let o = ghz(&["flowcheck", ok.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("feasible: true"));
    let bad = file("path-bad.txt", "3 2 3\n0 1 2\n0 1 2\n1 2 1\nD 0 2 3/2\n");
    let o = ghz(&["flowcheck", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("cut_condition: violated"));
    assert!(out.contains("max_concurrent_flow: 2/3"));
}

#[test]
fn suite_passes_and_catches_injected_fault() {
    let o = ghz(&["suite", "--seed", "1", "--trials", "1", "--suites", "gh-oracle"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("gh-oracle  PASS"));

    let o = ghz(&["suite", "--trials", "3"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().count(), 6);

    let f = ghz(&["suite", "--trials", "5", "--suites", "thm2", "--fault", "skip-perturbation"]);
    assert_eq!(code(&f), 1);
    let report = stdout(&f);
    assert!(report.contains("# tie:"));
    assert_eq!(report, stdout(&ghz(&["suite", "--trials", "5", "--suites", "thm2", "--fault", "skip-perturbation"])));
}

#[test]
fn dot_marks_terminals_and_is_byte_stable() {
    let two = file("k23-two.txt", &K23.replace("5 6 5\n0 1 2 3 4", "5 6 2\n0 1"));
    let a = ghz(&["dot", two.to_str().unwrap()]);
    assert_eq!(code(&a), 0);
    let dot = stdout(&a);
    assert_eq!(dot.matches("doublecircle").count(), 2);
    assert_eq!(dot.matches("shape=").count(), 5);
    assert_eq!(dot, stdout(&ghz(&["dot", two.to_str().unwrap()])));

    let k23 = file("k23-dot.txt", K23);
    let m = ghz(&["dot", k23.to_str().unwrap(), "--bags", "--pattern", "k23"]);
    let dot = stdout(&m);
    assert!(dot.contains("cluster_"));
    assert!(dot.contains("color=red"));
}
