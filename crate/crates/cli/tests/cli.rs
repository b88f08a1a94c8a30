use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use d2k_core::io::TargetFile;

fn d2k(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_d2k"))
        .args(args)
        .current_dir(dir)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn load(path: &Path) -> TargetFile {
    TargetFile::load(path).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn write(dir: &Path, name: &str, body: &str) {
    fs::write(dir.join(name), body).unwrap();
}

const CYCLE: &str = "0 1\n1 2\n2 0\n";

#[test]
fn extract_check_generate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    write(p, "g.txt", "# sample\n5 7\n7 9\n9 5\n9 11\n11 9\n11 11\n5 7\n");
    for model in ["d2k", "d2km"] {
        let t = format!("{model}.json");
        assert_eq!(code(&d2k(&["extract", "g.txt", "--model", model, "-o", &t], p)), 0);
        assert_eq!(code(&d2k(&["check", &t], p)), 0);
        let out = format!("out_{model}");
        let o = d2k(&["generate", &t, "--seed", "4", "--count", "5", "-o", &out], p);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        for s in 4..9 {
            let g = format!("{out}/{model}_seed{s}.txt");
            let back = format!("{out}/back{s}.json");
            assert_eq!(code(&d2k(&["extract", &g, "--model", model, "-o", &back], p)), 0);
            match (load(&p.join(&t)), load(&p.join(&back))) {
                (TargetFile::D2k(a), TargetFile::D2k(b)) => assert!(a.equivalent(&b)),
                other => panic!("{other:?}"),
            }
        }
    }
}

#[test]
fn check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    write(p, "c.txt", CYCLE);
    assert_eq!(code(&d2k(&["extract", "c.txt", "--model", "d2k", "-o", "t.json"], p)), 0);
    assert_eq!(code(&d2k(&["check", "t.json"], p)), 0);

    // stub total 3 at degree 2 is not a whole number of nodes
    write(
        p,
        "bad.json",
        r#"{"v":1,"model":"d2k","n":3,"dds":[[2,0],[2,1],[0,1]],"jdam":[{"a":{"side":"in","label":2},"b":{"side":"out","label":1},"count":3}]}"#,
    );
    let o = d2k(&["check", "bad.json"], p);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("III") && err.contains("{2,in}"), "{err}");
    assert_eq!(code(&d2k(&["generate", "bad.json", "-o", "x"], p)), 2);

    write(p, "junk.json", "{");
    assert_eq!(code(&d2k(&["check", "junk.json"], p)), 1);
    assert_eq!(code(&d2k(&["check", "missing.json"], p)), 1);
    assert_eq!(code(&d2k(&["frobnicate"], p)), 1);
}

#[test]
fn baseline_generation() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    write(p, "k3.json", r#"{"v":1,"model":"d0k","n":3,"m":6}"#);
    assert_eq!(code(&d2k(&["generate", "k3.json", "-o", "o"], p)), 0);
    let text = fs::read_to_string(p.join("o/d0k_seed1.txt")).unwrap();
    assert_eq!(text, "# Nodes: 3 Edges: 6\n0\t1\n0\t2\n1\t0\n1\t2\n2\t0\n2\t1\n");

    write(p, "loop.json", r#"{"v":1,"model":"d1k","n":1,"dds":[[0,0]]}"#);
    assert_eq!(code(&d2k(&["generate", "loop.json", "-o", "o"], p)), 0);
    write(p, "bad1k.json", r#"{"v":1,"model":"d1k","n":3,"dds":[[2,2],[2,2],[0,0]]}"#);
    assert_eq!(code(&d2k(&["generate", "bad1k.json", "-o", "o"], p)), 2);
}

#[test]
fn generation_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let mut edges = String::new();
    for i in 0..40u32 {
        for j in [1u32, 3, 7] {
            edges.push_str(&format!("{} {}\n", i, (i * j + 5) % 40));
        }
    }
    write(p, "g.txt", &edges);
    for model in ["d0k", "uman", "d1k", "d2k", "d2km"] {
        let t = format!("{model}.json");
        assert_eq!(code(&d2k(&["extract", "g.txt", "--model", model, "-o", &t], p)), 0);
        assert_eq!(code(&d2k(&["generate", &t, "--seed", "9", "-o", "a"], p)), 0);
        assert_eq!(code(&d2k(&["generate", &t, "--seed", "9", "-o", "b"], p)), 0);
        let f = format!("{model}_seed9.txt");
        assert_eq!(
            fs::read(p.join("a").join(&f)).unwrap(),
            fs::read(p.join("b").join(&f)).unwrap(),
            "{model}"
        );
    }
}

#[test]
fn measure_and_compare() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    write(p, "c.txt", CYCLE);
    let o = d2k(&["measure", "c.txt", "--metrics", "triad_census"], p);
    assert_eq!(code(&o), 0);
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.contains("\"030C\":1"), "{out}");
    assert!(out.contains("\"v\":1"));

    assert_eq!(code(&d2k(&["measure", "c.txt", "--metrics", "nope"], p)), 1);

    assert_eq!(code(&d2k(&["measure", "c.txt", "-o", "m.json", "--csv-dir", "csv"], p)), 0);
    assert!(p.join("csv/triad_census.csv").exists());
    let o = d2k(&["compare", "c.txt", "c.txt", "m.json", "-o", "cmp.json"], p);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let cmp = fs::read_to_string(p.join("cmp.json")).unwrap();
    assert!(cmp.contains("\"instances\":2"));
    assert!(!cmp.contains("\"mean\":1"));
    for line in String::from_utf8_lossy(&o.stderr).lines() {
        assert!(line.contains(": 0.000000 +/- 0.000000"), "{line}");
    }
}

#[test]
fn empty_input_gives_empty_targets() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    write(p, "e.txt", "");
    let o = d2k(&["extract", "e.txt", "--model", "uman"], p);
    assert_eq!(code(&o), 0);
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.contains("\"n\":0"), "{s}");
}

#[test]
fn parse_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    write(p, "bad.txt", "0 1\n# fine\n1 two\n");
    let o = d2k(&["extract", "bad.txt", "--model", "d2k"], p);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}
