//! Built-in graphs and point sets used by the figures and the test suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{
    EdgeKind, EquivalentSimpleGraph, GraphPoint, Layer, TemporalEdgeSpec, TemporalPolicy,
    TimeEvolvingGraph, TimeModel,
};

/// Vertex order of the three-layer example, matching the rows of
/// [`FIG7_ADJACENCY`].
pub const FIG7_VERTICES: [(&str, usize); 11] = [
    ("A", 0),
    ("B", 0),
    ("C", 0),
    ("D", 0),
    ("A", 1),
    ("B", 1),
    ("C", 1),
    ("D", 1),
    ("A", 2),
    ("C", 2),
    ("D", 2),
];

/// Adjacency of the three-layer example: `1` is a unit spatial edge, `a` a
/// temporal edge of weight alpha.
pub const FIG7_ADJACENCY: [&str; 11] = [
    ". 1 . 1 a . . . . . .",
    "1 . 1 . . a . . . . .",
    ". 1 . 1 . . a . . . .",
    "1 . 1 . . . . a . . .",
    "a . . . . 1 . . a . .",
    ". a . . 1 . 1 . . . .",
    ". . a . . 1 . 1 . a .",
    ". . . a . . 1 . . . a",
    ". . . . a . . . . . 1",
    ". . . . . . a . . . 1",
    ". . . . . . . a 1 1 .",
];

fn adjacency_cell(i: usize, j: usize) -> char {
    FIG7_ADJACENCY[i]
        .split_whitespace()
        .nth(j)
        .and_then(|s| s.chars().next())
        .expect("11 cells per row")
}

/// The three-layer example graph with temporal weight `alpha`.
pub fn fig7(alpha: f64) -> TimeEvolvingGraph {
    let mut layers: Vec<Layer> = (0..3)
        .map(|t| Layer {
            time: t,
            vertices: FIG7_VERTICES
                .iter()
                .filter(|(_, time)| *time == t)
                .map(|(l, _)| l.to_string())
                .collect(),
            edges: Vec::new(),
        })
        .collect();
    let mut temporal = Vec::new();
    for i in 0..11 {
        for j in (i + 1)..11 {
            let (li, ti) = FIG7_VERTICES[i];
            let (lj, tj) = FIG7_VERTICES[j];
            match adjacency_cell(i, j) {
                '.' => {}
                '1' => {
                    assert_eq!(ti, tj, "unit entries are spatial");
                    layers[ti]
                        .edges
                        .push(crate::graph::WeightedEdge::new(li, lj, 1.0));
                }
                'a' => {
                    assert_eq!(li, lj, "alpha entries are temporal");
                    temporal.push(TemporalEdgeSpec {
                        label: li.to_string(),
                        from: ti,
                        to: tj,
                        weight: alpha,
                    });
                }
                other => panic!("unexpected adjacency cell {other}"),
            }
        }
    }
    TimeEvolvingGraph::new(
        TimeModel::Linear,
        3,
        layers,
        TemporalPolicy::Explicit { edges: temporal },
    )
}

/// The three named points of the three-layer example.
#[derive(Clone, Copy, Debug)]
pub struct Fig7Points {
    pub a0: GraphPoint,
    pub p: GraphPoint,
    pub q: GraphPoint,
}

pub fn fig7_points(g: &EquivalentSimpleGraph) -> Fig7Points {
    Fig7Points {
        a0: g.vertex_point("A", 0).expect("A0 exists"),
        p: g.point_between(("C", 0), ("D", 0), 0.8).expect("C0-D0 exists"),
        q: g.point_between(("C", 2), ("D", 2), 0.5).expect("C2-D2 exists"),
    }
}

/// Periodic ladder: `m = 8`, labels `A`, `B`, a unit rung at every layer and
/// temporal weight `alpha`.
pub fn ladder(alpha: f64) -> TimeEvolvingGraph {
    TimeEvolvingGraph::new(
        TimeModel::Periodic,
        8,
        (0..8)
            .map(|t| Layer::new(t, &["A", "B"], &[("A", "B", 1.0)]))
            .collect(),
        TemporalPolicy::MarkovComplete { alpha },
    )
}

/// Midpoint of the rung at true time `t` (integer).
pub fn ladder_point(g: &EquivalentSimpleGraph, t: usize) -> GraphPoint {
    let tau = t % g.m();
    g.point_between(("A", tau), ("B", tau), 0.5)
        .expect("ladder rung exists")
        .at_time(t as f64)
}

/// Three layers of `A`, `B` with rung weights `eps`, 1, `1/eps`.
pub fn epsilon_graph(eps: f64) -> TimeEvolvingGraph {
    let w = [eps, 1.0, 1.0 / eps];
    TimeEvolvingGraph::new(
        TimeModel::Linear,
        3,
        (0..3)
            .map(|t| Layer::new(t, &["A", "B"], &[("A", "B", w[t])]))
            .collect(),
        TemporalPolicy::MarkovComplete { alpha: 1.0 },
    )
}

/// Rung midpoints at layers 0, 1, 2.
pub fn epsilon_points(g: &EquivalentSimpleGraph) -> Vec<GraphPoint> {
    (0..3)
        .map(|t| g.point_between(("A", t), ("B", t), 0.5).expect("rung exists"))
        .collect()
}

/// Three linear layers where edge `(A, B)` lives throughout, `(C, E)` lives on
/// the first two layers and `(B, C)` only on the last.
pub fn three_layer() -> TimeEvolvingGraph {
    TimeEvolvingGraph::new(
        TimeModel::Linear,
        3,
        vec![
            Layer::new(
                0,
                &["A", "B", "C", "D", "E"],
                &[("A", "B", 1.0), ("C", "E", 1.0), ("A", "D", 1.0)],
            ),
            Layer::new(
                1,
                &["A", "B", "C", "D", "E", "F"],
                &[("A", "B", 1.0), ("C", "E", 1.0), ("D", "F", 1.0), ("B", "F", 1.0)],
            ),
            Layer::new(
                2,
                &["A", "B", "C", "D", "E", "F"],
                &[("A", "B", 1.0), ("B", "C", 1.0), ("E", "F", 1.0), ("D", "F", 1.0)],
            ),
        ],
        TemporalPolicy::MarkovComplete { alpha: 1.0 },
    )
}

/// Four-layer cycle where `(A, B)` is always present, `(A, D)` only at layer
/// 2 and `(C, D)` on the wrapping arc 3, 0, 1.
pub fn periodic_four() -> TimeEvolvingGraph {
    let labels = ["A", "B", "C", "D"];
    TimeEvolvingGraph::new(
        TimeModel::Periodic,
        4,
        vec![
            Layer::new(0, &labels, &[("A", "B", 1.0), ("C", "D", 2.0)]),
            Layer::new(1, &labels, &[("A", "B", 1.0), ("C", "D", 2.0)]),
            Layer::new(2, &labels, &[("A", "B", 1.0), ("A", "D", 0.5)]),
            Layer::new(3, &labels, &[("A", "B", 1.0), ("C", "D", 2.0)]),
        ],
        TemporalPolicy::MarkovComplete { alpha: 1.5 },
    )
}

pub fn two_components() -> TimeEvolvingGraph {
    TimeEvolvingGraph::new(
        TimeModel::Linear,
        1,
        vec![Layer::new(0, &["A", "B", "C", "D"], &[("A", "B", 1.0), ("C", "D", 1.0)])],
        TemporalPolicy::MarkovComplete { alpha: 1.0 },
    )
}

pub fn two_layer_ladder() -> TimeEvolvingGraph {
    TimeEvolvingGraph::new(
        TimeModel::Linear,
        2,
        vec![
            Layer::new(0, &["A", "B"], &[("A", "B", 1.0)]),
            Layer::new(1, &["A", "B"], &[("A", "B", 1.0)]),
        ],
        TemporalPolicy::MarkovComplete { alpha: 1.0 },
    )
}

/// Random connected time-evolving graph. Every layer holds label `A` plus a
/// random subset of the others, joined by a random spanning tree and a few
/// extra edges with weights in `[0.2, 5]`. Periodic graphs get `m >= 3`.
pub fn random_graph(seed: u64, model: TimeModel) -> TimeEvolvingGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet = ["A", "B", "C", "D", "E", "F"];
    let m = match model {
        TimeModel::Linear => rng.random_range(1..=4),
        TimeModel::Periodic => rng.random_range(3..=5),
    };
    let mut layers = Vec::new();
    for t in 0..m {
        let mut labels: Vec<&str> = vec!["A"];
        for l in &alphabet[1..] {
            if rng.random_bool(0.7) {
                labels.push(l);
            }
        }
        if labels.len() < 2 {
            labels.push("B");
        }
        let mut order = labels.clone();
        order.shuffle(&mut rng);
        let mut edges: Vec<(&str, &str, f64)> = Vec::new();
        let weight = |rng: &mut ChaCha8Rng| rng.random_range(0.2..5.0);
        for i in 1..order.len() {
            let j = rng.random_range(0..i);
            edges.push((order[j], order[i], weight(&mut rng)));
        }
        for _ in 0..rng.random_range(0..3) {
            let a = rng.random_range(0..order.len());
            let b = rng.random_range(0..order.len());
            let (a, b) = (order[a], order[b]);
            let dup = edges
                .iter()
                .any(|&(u, v, _)| (u == a && v == b) || (u == b && v == a));
            if a != b && !dup {
                edges.push((a, b, weight(&mut rng)));
            }
        }
        layers.push(Layer::new(t, &labels, &edges));
    }
    let alpha = rng.random_range(0.3..3.0);
    TimeEvolvingGraph::new(model, m, layers, TemporalPolicy::MarkovComplete { alpha })
}

/// Random points on a built graph: vertices, edge interiors of both kinds,
/// and a few exact duplicates. Periodic points get true times within the
/// first three turns of the cycle.
pub fn random_points(g: &EquivalentSimpleGraph, seed: u64, n: usize) -> Vec<GraphPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<GraphPoint> = Vec::with_capacity(n);
    while out.len() < n {
        if !out.is_empty() && rng.random_bool(0.05) {
            let k = rng.random_range(0..out.len());
            out.push(out[k]);
            continue;
        }
        let (p, t_layer) = if rng.random_bool(0.2) {
            let v = crate::graph::VertexId(rng.random_range(0..g.n_vertices()));
            (GraphPoint::vertex(v), g.vertex(v).time as f64)
        } else {
            let e = crate::graph::EdgeId(rng.random_range(0..g.edges().len()));
            let delta = rng.random_range(0.01..0.99);
            let edge = g.edge(e);
            let (tu, tv) = (g.vertex(edge.u).time, g.vertex(edge.v).time);
            let t = match edge.kind {
                EdgeKind::Spatial => tu as f64,
                EdgeKind::Temporal if tv == tu + 1 => tu as f64 + delta,
                EdgeKind::Temporal => g.m() as f64 - delta,
            };
            (GraphPoint::on_edge(e, delta), t)
        };
        let p = match g.time_model() {
            TimeModel::Linear => p,
            TimeModel::Periodic => {
                let turn = rng.random_range(0..3) as f64;
                p.at_time(turn * g.m() as f64 + t_layer)
            }
        };
        out.push(p);
    }
    out
}
