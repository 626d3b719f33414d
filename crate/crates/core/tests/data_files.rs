//! The graphs shipped under `data/` are the built-in fixtures.

use std::path::PathBuf;

use evograph::fixtures::{fig7, fig7_points, ladder, ladder_point};
use evograph::format::{parse_graph, parse_points};

fn data(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn three_layer_graph_file() {
    assert_eq!(parse_graph(&data("fig7.json")).unwrap(), fig7(1.0));
}

#[test]
fn ladder_graph_file() {
    assert_eq!(parse_graph(&data("ladder.json")).unwrap(), ladder(1.0));
}

#[test]
fn three_layer_points_file() {
    let g = fig7(1.0).build().unwrap();
    let want = fig7_points(&g);
    let specs = parse_points(&data("fig7_points.txt")).unwrap();
    let got: Vec<_> = specs.iter().map(|s| s.resolve(&g).unwrap()).collect();
    assert_eq!(got, vec![want.a0, want.p, want.q]);
}

#[test]
fn ladder_points_file() {
    let g = ladder(1.0).build().unwrap();
    let specs = parse_points(&data("ladder_points.txt")).unwrap();
    let got: Vec<_> = specs.iter().map(|s| s.resolve(&g).unwrap()).collect();
    let want: Vec<_> = [0, 1, 8, 16].iter().map(|&t| ladder_point(&g, t)).collect();
    assert_eq!(got, want);
}
