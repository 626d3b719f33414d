use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_evograph"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Non-comment lines of a CSV document, split into cells.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_accepts_shipped_graphs() {
    for g in ["fig7.json", "ladder.json"] {
        let o = run(&["validate", "--graph", s(&data(g))]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert!(stdout(&o).starts_with("valid:"));
    }
}

#[test]
fn validate_reports_a_self_loop() {
    let dir = TempDir::new().unwrap();
    let g = write(
        &dir,
        "loop.json",
        r#"{"time_model":"linear","m":1,
            "layers":[{"time":0,"vertices":["A","B"],"edges":[{"u":"A","v":"A","weight":1.0},{"u":"A","v":"B","weight":1.0}]}],
            "temporal":{"policy":"markov_complete","alpha":1.0}}"#,
    );
    let o = run(&["validate", "--graph", s(&g)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("(A, A)"), "{}", stdout(&o));
}

#[test]
fn malformed_input_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "bad.json", "{\"time_model\": \"linear\", ");
    let o = run(&["validate", "--graph", s(&g)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error:"));

    let o = run(&["validate", "--graph", s(&dir.path().join("missing.json"))]);
    assert_eq!(o.status.code(), Some(2));

    let pts = write(&dir, "pts.txt", "X A\n");
    let o = run(&[
        "distance",
        "--graph",
        s(&data("fig7.json")),
        "--params",
        "lambda=0.6",
        "--points",
        s(&pts),
    ]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&[
        "distance",
        "--graph",
        s(&data("fig7.json")),
        "--params",
        "lambda=2",
        "--points",
        s(&data("fig7_points.txt")),
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

fn distances(graph: &str, params: &str, points: &Path) -> Vec<Vec<String>> {
    let o = run(&[
        "distance",
        "--graph",
        s(&data(graph)),
        "--params",
        params,
        "--points",
        s(points),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    rows(&stdout(&o))
}

fn value(rows: &[Vec<String>], a: &str, b: &str) -> f64 {
    rows.iter()
        .find(|r| r[0] == a && r[1] == b)
        .unwrap_or_else(|| panic!("no row {a},{b}"))[2]
        .parse()
        .unwrap()
}

#[test]
fn distance_values() {
    let r = distances("fig7.json", "lambda=0.6,alpha=1", &data("fig7_points.txt"));
    assert_eq!(
        r[0],
        ["p1", "p2", "d", "vertex_part", "bridge_part", "wiener_part", "status"]
    );
    assert_eq!(r.len(), 4);
    assert!((value(&r, "A0", "P") - 0.7101).abs() < 1e-4);
    assert!((value(&r, "A0", "Q") - 1.2433).abs() < 1e-4);
    assert!((value(&r, "P", "Q") - 1.1405).abs() < 1e-4);
    assert!(r.iter().skip(1).all(|row| row[6] == "ok"));

    let r = distances("ladder.json", "rho=0.45,beta=1", &data("ladder_points.txt"));
    assert!((value(&r, "P0", "P1") - 1.613).abs() < 1e-3);
    assert!((value(&r, "P0", "P8") - 8.0).abs() < 1e-9);
}

#[test]
fn distance_to_itself_is_zero() {
    let o = run(&[
        "distance",
        "--graph",
        s(&data("fig7.json")),
        "--params",
        "lambda=0.6",
        "--points",
        s(&data("fig7_points.txt")),
        "--pairs",
        "A0:A0,P:P",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 3);
    assert_eq!(r[1][2], "0");
    assert_eq!(r[2][2], "0");
}

#[test]
fn gram_output() {
    let dir = TempDir::new().unwrap();
    let one = write(&dir, "one.txt", "A0 A 0\n");
    let o = run(&[
        "gram",
        "--graph",
        s(&data("fig7.json")),
        "--params",
        "lambda=0.6",
        "--family",
        "exponential:alpha=1,beta=1",
        "--points",
        s(&one),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = rows(&stdout(&o));
    assert_eq!(r, vec![vec!["point", "A0"], vec!["A0", "1"]]);

    let o = run(&[
        "gram",
        "--graph",
        s(&data("fig7.json")),
        "--params",
        "lambda=0.6",
        "--family",
        "exponential:alpha=1,beta=1",
        "--points",
        s(&data("fig7_points.txt")),
    ]);
    let text = stdout(&o);
    assert!(text.contains("# pd_check: strictly_pd"), "{text}");
    let r = rows(&text);
    let k: f64 = r[1][2].parse().unwrap();
    assert!((k - (-0.7101f64).exp()).abs() < 1e-4);

    let o = run(&[
        "gram",
        "--graph",
        s(&data("fig7.json")),
        "--params",
        "lambda=0.6",
        "--family",
        "gaussian:alpha=2,beta=1",
        "--points",
        s(&one),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

fn sample(n: &str, seed: &str) -> Output {
    run(&[
        "sample",
        "--graph",
        s(&data("ladder.json")),
        "--params",
        "rho=0.45,beta=1",
        "--points",
        s(&data("ladder_points.txt")),
        "-n",
        n,
        "--seed",
        seed,
    ])
}

#[test]
fn sample_output() {
    let o = sample("0", "1");
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(rows(&stdout(&o)), vec![vec!["P0", "P1", "P8", "P16"]]);

    let a = sample("25", "7");
    let b = sample("25", "7");
    let c = sample("25", "8");
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let r = rows(&stdout(&a));
    assert_eq!(r.len(), 26);
    assert!(r[1..].iter().all(|row| row.len() == 4));
    assert!(stdout(&a).contains("# seed: 7"));
}

#[test]
fn kt_tables() {
    let o = run(&["kt", "--variant", "circulant", "--rho", "0.45", "--m", "8"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 10);
    let lag4: f64 = r[5][1].parse().unwrap();
    assert!((lag4 - 0.3015).abs() < 1e-4);
    assert_eq!(r[9][1], "1");

    let o = run(&["kt", "--variant", "ar1", "--lambda", "0.5", "--max-lag", "3"]);
    let r = rows(&stdout(&o));
    assert_eq!(r[4], ["3", "0.125"]);

    let o = run(&[
        "kt",
        "--variant",
        "block-ar1",
        "--lambda",
        "0.5",
        "--m",
        "4",
        "--lifespan",
        "3,0,1",
    ]);
    let r = rows(&stdout(&o));
    assert!(r.contains(&vec!["3".into(), "1".into(), "0.25".into()]));

    let o = run(&["kt", "--variant", "circulant", "--rho", "0.5", "--m", "8"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["kt", "--variant", "ar1"]);
    assert_eq!(o.status.code(), Some(2));
}

type Curves =
    std::collections::BTreeMap<String, std::collections::BTreeMap<String, Vec<(f64, f64)>>>;

#[test]
fn figure_tables_follow_the_reference() {
    let refs: Curves = serde_json::from_str(
        &std::fs::read_to_string(
            PathBuf::from(env!("CARGO_MANIFEST_DIR"))
                .join("../core/tests/data/reference_curves.json"),
        )
        .unwrap(),
    )
    .unwrap();
    let dir = TempDir::new().unwrap();
    for name in ["fig6", "fig9", "fig12"] {
        let o = run(&["figure", "--name", name, "--out", s(dir.path())]);
        assert!(o.status.success(), "{}", stderr(&o));
        for path in stdout(&o).lines() {
            let table = Path::new(path).file_stem().unwrap().to_str().unwrap().to_string();
            let r = rows(&std::fs::read_to_string(path).unwrap());
            let header = &r[0];
            for (col, points) in &refs[&table] {
                let c = header.iter().position(|h| h == col).expect("column present");
                for &(x, y) in points {
                    let row = r[1..]
                        .iter()
                        .find(|row| (row[0].parse::<f64>().unwrap() - x).abs() < 1e-9)
                        .unwrap_or_else(|| panic!("{table}: no row at {x}"));
                    let got: f64 = row[c].parse().unwrap();
                    assert!((got - y).abs() <= 1e-3, "{table}:{col} at {x}: {got} vs {y}");
                }
            }
        }
    }
    let o = run(&["figure", "--name", "fig99", "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["figure", "--name", "fig5", "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["figure", "--name", "fig5", "--out", s(dir.path()), "--dev"]);
    assert!(o.status.success());
}
