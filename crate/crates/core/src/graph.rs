//! Time-evolving graphs, their equivalent simple graphs, and points on them.
//!
//! A [`TimeEvolvingGraph`] is a stack of weighted layers sharing a label
//! alphabet. Flattening it with [`TimeEvolvingGraph::build`] yields an
//! [`EquivalentSimpleGraph`] whose edges are the spatial (within-layer) edges
//! plus temporal edges joining copies of the same label in different layers.
//! Every edge is identified with a segment, so a [`GraphPoint`] may sit on a
//! vertex or anywhere in the interior of an edge.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lifespan::{self, LifePartition};
use crate::spectral::{self, PseudoinverseMatrix};

/// Whether layer indices live on a line or on a cycle of length `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeModel {
    Linear,
    Periodic,
}

/// A labelled vertex at a given layer. Ordered by `(time, label)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub time: usize,
    pub label: String,
}

impl Vertex {
    pub fn new(label: impl Into<String>, time: usize) -> Self {
        Self {
            time,
            label: label.into(),
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.label, self.time)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightedEdge {
    pub u: String,
    pub v: String,
    pub weight: f64,
}

impl WeightedEdge {
    pub fn new(u: impl Into<String>, v: impl Into<String>, weight: f64) -> Self {
        Self {
            u: u.into(),
            v: v.into(),
            weight,
        }
    }
}

/// One static slice of a time-evolving graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Layer {
    pub time: usize,
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<WeightedEdge>,
}

impl Layer {
    pub fn new(time: usize, vertices: &[&str], edges: &[(&str, &str, f64)]) -> Self {
        Self {
            time,
            vertices: vertices.iter().map(|s| s.to_string()).collect(),
            edges: edges
                .iter()
                .map(|&(u, v, w)| WeightedEdge::new(u, v, w))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemporalEdgeSpec {
    pub label: String,
    pub from: usize,
    pub to: usize,
    pub weight: f64,
}

/// How temporal edges are generated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case")]
pub enum TemporalPolicy {
    /// Join every label present at two adjacent layers (adjacent modulo `m`
    /// for periodic graphs) with weight `alpha / |dt|`, where `|dt| = 1`.
    MarkovComplete { alpha: f64 },
    Explicit { edges: Vec<TemporalEdgeSpec> },
}

/// Structural problems found in a layer.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    SelfLoop { label: String },
    NonPositiveWeight { u: String, v: String, weight: f64 },
    ParallelEdge { u: String, v: String },
    AsymmetricEdge { u: String, v: String },
    UnknownVertex { label: String },
    DuplicateLabel { label: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SelfLoop { label } => write!(f, "self-loop on edge ({label}, {label})"),
            Violation::NonPositiveWeight { u, v, weight } => {
                write!(f, "non-positive weight {weight} on edge ({u}, {v})")
            }
            Violation::ParallelEdge { u, v } => write!(f, "parallel edge ({u}, {v})"),
            Violation::AsymmetricEdge { u, v } => {
                write!(f, "edge ({u}, {v}) listed in both directions with different weights")
            }
            Violation::UnknownVertex { label } => {
                write!(f, "edge endpoint {label} is not a vertex of the layer")
            }
            Violation::DuplicateLabel { label } => write!(f, "duplicate vertex label {label}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LayerReport {
    pub time: usize,
    pub violations: Vec<Violation>,
    /// Number of connected components of the layer on its own. Informational.
    pub components: usize,
}

impl LayerReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check that a layer is a simple undirected graph with positive weights.
pub fn validate_layer(layer: &Layer) -> LayerReport {
    let mut violations = Vec::new();
    let mut index: HashMap<&str, usize> = HashMap::new();
    for label in &layer.vertices {
        if index.contains_key(label.as_str()) {
            violations.push(Violation::DuplicateLabel {
                label: label.clone(),
            });
        } else {
            index.insert(label.as_str(), index.len());
        }
    }

    let mut seen: HashMap<(&str, &str), (f64, bool)> = HashMap::new();
    let mut uf = UnionFind::new(index.len());
    for e in &layer.edges {
        if e.u == e.v {
            violations.push(Violation::SelfLoop { label: e.u.clone() });
            continue;
        }
        for end in [&e.u, &e.v] {
            if !index.contains_key(end.as_str()) {
                violations.push(Violation::UnknownVertex { label: end.clone() });
            }
        }
        if !(e.weight > 0.0 && e.weight.is_finite()) {
            violations.push(Violation::NonPositiveWeight {
                u: e.u.clone(),
                v: e.v.clone(),
                weight: e.weight,
            });
        }
        let reversed = e.u > e.v;
        let key = if reversed {
            (e.v.as_str(), e.u.as_str())
        } else {
            (e.u.as_str(), e.v.as_str())
        };
        match seen.get(&key) {
            Some(&(w, was_reversed)) => {
                if was_reversed != reversed && w != e.weight {
                    violations.push(Violation::AsymmetricEdge {
                        u: e.u.clone(),
                        v: e.v.clone(),
                    });
                } else {
                    violations.push(Violation::ParallelEdge {
                        u: e.u.clone(),
                        v: e.v.clone(),
                    });
                }
            }
            None => {
                seen.insert(key, (e.weight, reversed));
            }
        }
        if let (Some(&a), Some(&b)) = (index.get(e.u.as_str()), index.get(e.v.as_str())) {
            uf.union(a, b);
        }
    }

    LayerReport {
        time: layer.time,
        violations,
        components: uf.count(),
    }
}

/// Validation of a whole time-evolving graph.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphReport {
    pub layers: Vec<LayerReport>,
    pub problems: Vec<String>,
}

impl GraphReport {
    pub fn is_valid(&self) -> bool {
        self.problems.is_empty() && self.layers.iter().all(LayerReport::is_valid)
    }

    /// All problems as human readable lines, layer violations prefixed by time.
    pub fn messages(&self) -> Vec<String> {
        let mut out = self.problems.clone();
        for layer in &self.layers {
            for v in &layer.violations {
                out.push(format!("layer {}: {v}", layer.time));
            }
        }
        out
    }
}

/// A finite stack of layers plus a rule for temporal edges.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeEvolvingGraph {
    pub time_model: TimeModel,
    pub m: usize,
    pub layers: Vec<Layer>,
    pub temporal: TemporalPolicy,
}

impl TimeEvolvingGraph {
    pub fn new(
        time_model: TimeModel,
        m: usize,
        layers: Vec<Layer>,
        temporal: TemporalPolicy,
    ) -> Self {
        Self {
            time_model,
            m,
            layers,
            temporal,
        }
    }

    pub fn validate(&self) -> GraphReport {
        let mut problems = Vec::new();
        if self.m == 0 {
            problems.push("a time-evolving graph needs at least one layer (m >= 1)".to_string());
        }
        if self.time_model == TimeModel::Periodic && self.m < 3 {
            problems.push(format!("periodic graphs need m >= 3, got m = {}", self.m));
        }
        let mut times = BTreeSet::new();
        for layer in &self.layers {
            if layer.time >= self.m {
                problems.push(format!("layer time {} outside 0..{}", layer.time, self.m));
            }
            if !times.insert(layer.time) {
                problems.push(format!("layer time {} listed twice", layer.time));
            }
        }
        match &self.temporal {
            TemporalPolicy::MarkovComplete { alpha } => {
                if !(*alpha > 0.0 && alpha.is_finite()) {
                    problems.push(format!("temporal scale alpha must be positive, got {alpha}"));
                }
            }
            TemporalPolicy::Explicit { edges } => {
                let mut seen = BTreeSet::new();
                for e in edges {
                    if let Err(err) = self.check_temporal_edge(e) {
                        problems.push(err.to_string());
                    }
                    let key = (e.label.clone(), e.from.min(e.to), e.from.max(e.to));
                    if !seen.insert(key) {
                        problems.push(format!(
                            "temporal edge {}@{} -- {}@{} listed twice",
                            e.label, e.from, e.label, e.to
                        ));
                    }
                }
            }
        }
        GraphReport {
            layers: self.layers.iter().map(validate_layer).collect(),
            problems,
        }
    }

    fn has_label(&self, label: &str, time: usize) -> bool {
        self.layers
            .iter()
            .any(|l| l.time == time && l.vertices.iter().any(|v| v == label))
    }

    fn check_temporal_edge(&self, e: &TemporalEdgeSpec) -> Result<()> {
        let fail = |reason: &str| Error::InvalidTemporalEdge {
            label: e.label.clone(),
            from: e.from,
            to: e.to,
            reason: reason.to_string(),
        };
        if e.from == e.to {
            return Err(fail("endpoints must lie in different layers"));
        }
        if e.from >= self.m || e.to >= self.m {
            return Err(fail("layer index out of range"));
        }
        if !(e.weight > 0.0 && e.weight.is_finite()) {
            return Err(fail("weight must be positive"));
        }
        if !self.has_label(&e.label, e.from) || !self.has_label(&e.label, e.to) {
            return Err(fail("label is not present at both layers"));
        }
        if self.time_model == TimeModel::Periodic
            && cyclic_gap(e.from, e.to, self.m) != 1
        {
            return Err(fail("periodic temporal edges must join adjacent layers modulo m"));
        }
        Ok(())
    }

    /// Flatten into the equivalent simple graph. Rejects invalid input.
    pub fn build(&self) -> Result<EquivalentSimpleGraph> {
        let report = self.validate();
        if !report.is_valid() {
            return Err(Error::InvalidGraph(report.messages().join("; ")));
        }

        let mut vertices: Vec<Vertex> = self
            .layers
            .iter()
            .flat_map(|l| l.vertices.iter().map(move |s| Vertex::new(s.clone(), l.time)))
            .collect();
        vertices.sort();
        let index: HashMap<Vertex, VertexId> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), VertexId(i)))
            .collect();

        let mut raw: Vec<Edge> = Vec::new();
        for layer in &self.layers {
            for e in &layer.edges {
                let a = index[&Vertex::new(e.u.clone(), layer.time)];
                let b = index[&Vertex::new(e.v.clone(), layer.time)];
                raw.push(Edge::new(a, b, e.weight, EdgeKind::Spatial));
            }
        }
        match &self.temporal {
            TemporalPolicy::MarkovComplete { alpha } => {
                let pairs: Vec<(usize, usize)> = match self.time_model {
                    TimeModel::Linear => (0..self.m.saturating_sub(1)).map(|t| (t, t + 1)).collect(),
                    TimeModel::Periodic => (0..self.m).map(|t| (t, (t + 1) % self.m)).collect(),
                };
                for (t0, t1) in pairs {
                    for layer in self.layers.iter().filter(|l| l.time == t0) {
                        for label in &layer.vertices {
                            if let Some(&b) = index.get(&Vertex::new(label.clone(), t1)) {
                                let a = index[&Vertex::new(label.clone(), t0)];
                                // |dt| = 1 on both time models
                                raw.push(Edge::new(a, b, *alpha, EdgeKind::Temporal));
                            }
                        }
                    }
                }
            }
            TemporalPolicy::Explicit { edges } => {
                for e in edges {
                    let a = index[&Vertex::new(e.label.clone(), e.from)];
                    let b = index[&Vertex::new(e.label.clone(), e.to)];
                    raw.push(Edge::new(a, b, e.weight, EdgeKind::Temporal));
                }
            }
        }
        raw.sort_by_key(|e| (e.u, e.v));

        let edge_index: HashMap<(VertexId, VertexId), EdgeId> = raw
            .iter()
            .enumerate()
            .map(|(i, e)| ((e.u, e.v), EdgeId(i)))
            .collect();
        if edge_index.len() != raw.len() {
            return Err(Error::InvalidGraph("duplicate edge in equivalent graph".into()));
        }

        let mut uf = UnionFind::new(vertices.len());
        for e in &raw {
            uf.union(e.u.0, e.v.0);
        }
        let mut relabel = BTreeMap::new();
        let component: Vec<usize> = (0..vertices.len())
            .map(|i| {
                let root = uf.find(i);
                let next = relabel.len();
                *relabel.entry(root).or_insert(next)
            })
            .collect();

        let mut graph = EquivalentSimpleGraph {
            time_model: self.time_model,
            m: self.m,
            vertices,
            index,
            edges: raw,
            edge_index,
            component,
            n_components: relabel.len(),
            lives: LifePartition::default(),
            pinv: OnceLock::new(),
        };
        graph.lives = lifespan::compute_partition(&graph);
        Ok(graph)
    }
}

/// Cyclic distance between two layers on a cycle of length `m`.
pub fn cyclic_gap(a: usize, b: usize, m: usize) -> usize {
    let d = a.abs_diff(b) % m;
    d.min(m - d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Spatial,
    Temporal,
}

/// An edge of the equivalent simple graph, stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub weight: f64,
    pub kind: EdgeKind,
}

impl Edge {
    fn new(a: VertexId, b: VertexId, weight: f64, kind: EdgeKind) -> Self {
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        Self { u, v, weight, kind }
    }

    /// Segment length, the reciprocal of the weight.
    pub fn length(&self) -> f64 {
        1.0 / self.weight
    }

    pub fn is_spatial(&self) -> bool {
        self.kind == EdgeKind::Spatial
    }
}

/// Where a point sits: on a vertex, or at relative coordinate `delta` along
/// an edge, measured from its smaller endpoint.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Location {
    Vertex(VertexId),
    Edge { edge: EdgeId, delta: f64 },
}

/// A point of the graph. Periodic graphs additionally carry the true
/// (unwrapped) time of the point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GraphPoint {
    pub location: Location,
    pub true_time: Option<f64>,
}

impl GraphPoint {
    pub fn vertex(v: VertexId) -> Self {
        Self {
            location: Location::Vertex(v),
            true_time: None,
        }
    }

    pub fn on_edge(edge: EdgeId, delta: f64) -> Self {
        Self {
            location: Location::Edge { edge, delta },
            true_time: None,
        }
    }

    pub fn at_time(mut self, t: f64) -> Self {
        self.true_time = Some(t);
        self
    }
}

/// The flattened graph with vertex order, components, lives and a lazily
/// computed Laplacian pseudoinverse. Immutable once built.
#[derive(Debug)]
pub struct EquivalentSimpleGraph {
    time_model: TimeModel,
    m: usize,
    vertices: Vec<Vertex>,
    index: HashMap<Vertex, VertexId>,
    edges: Vec<Edge>,
    edge_index: HashMap<(VertexId, VertexId), EdgeId>,
    component: Vec<usize>,
    n_components: usize,
    lives: LifePartition,
    pinv: OnceLock<PseudoinverseMatrix>,
}

impl EquivalentSimpleGraph {
    pub fn time_model(&self) -> TimeModel {
        self.time_model
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, id: VertexId) -> &Vertex {
        &self.vertices[id.0]
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id.0]
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn spatial_edges(&self) -> impl Iterator<Item = (EdgeId, &Edge)> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.is_spatial())
            .map(|(i, e)| (EdgeId(i), e))
    }

    pub fn temporal_edges(&self) -> impl Iterator<Item = (EdgeId, &Edge)> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_spatial())
            .map(|(i, e)| (EdgeId(i), e))
    }

    pub fn vertex_id(&self, label: &str, time: usize) -> Result<VertexId> {
        self.index
            .get(&Vertex::new(label, time))
            .copied()
            .ok_or_else(|| Error::UnknownVertex {
                label: label.to_string(),
                time,
            })
    }

    pub fn edge_between(&self, a: VertexId, b: VertexId) -> Option<EdgeId> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.edge_index.get(&key).copied()
    }

    pub fn component_of(&self, v: VertexId) -> usize {
        self.component[v.0]
    }

    pub fn n_components(&self) -> usize {
        self.n_components
    }

    pub fn lives(&self) -> &LifePartition {
        &self.lives
    }

    /// Laplacian pseudoinverse, computed once per graph.
    pub fn pseudoinverse(&self) -> &PseudoinverseMatrix {
        self.pinv
            .get_or_init(|| spectral::pseudoinverse(&spectral::laplacian(self)))
    }

    /// Point at relative coordinate `delta` from `from` towards `to`. The
    /// coordinate is re-expressed relative to the smaller endpoint.
    pub fn point_between(
        &self,
        from: (&str, usize),
        to: (&str, usize),
        delta: f64,
    ) -> Result<GraphPoint> {
        let a = self.vertex_id(from.0, from.1)?;
        let b = self.vertex_id(to.0, to.1)?;
        let edge = self.edge_between(a, b).ok_or_else(|| {
            Error::UnknownEdge(self.vertex(a).to_string(), self.vertex(b).to_string())
        })?;
        let delta = if a < b { delta } else { 1.0 - delta };
        Ok(GraphPoint::on_edge(edge, delta))
    }

    pub fn vertex_point(&self, label: &str, time: usize) -> Result<GraphPoint> {
        Ok(GraphPoint::vertex(self.vertex_id(label, time)?))
    }

    /// Rewrite endpoint coordinates to the vertex they denote and check the
    /// point against the graph (edge exists, coordinate in range, true time
    /// present and consistent exactly when the graph is periodic).
    pub fn canonical_point(&self, p: &GraphPoint) -> Result<GraphPoint> {
        let location = match p.location {
            Location::Vertex(v) => {
                if v.0 >= self.vertices.len() {
                    return Err(Error::Precondition(format!("vertex index {} out of range", v.0)));
                }
                Location::Vertex(v)
            }
            Location::Edge { edge, delta } => {
                let e = self.edges.get(edge.0).ok_or(Error::EdgeOutOfRange(edge.0))?;
                if !(0.0..=1.0).contains(&delta) {
                    return Err(Error::DeltaOutOfRange(delta));
                }
                if delta == 0.0 {
                    Location::Vertex(e.u)
                } else if delta == 1.0 {
                    Location::Vertex(e.v)
                } else {
                    Location::Edge { edge, delta }
                }
            }
        };
        match (self.time_model, p.true_time) {
            (TimeModel::Linear, None) => {}
            (TimeModel::Linear, Some(_)) => return Err(Error::UnexpectedTrueTime),
            (TimeModel::Periodic, None) => return Err(Error::MissingTrueTime),
            (TimeModel::Periodic, Some(t)) => self.check_true_time(&p.location, t)?,
        }
        Ok(GraphPoint {
            location,
            true_time: p.true_time,
        })
    }

    /// Phase (true time modulo `m`) that a point at `location` must have.
    /// Layer points need `floor(t) mod m` to equal their layer; temporal edge
    /// points sit at `t + delta` when the edge runs from layer `t` to `t + 1`.
    fn check_true_time(&self, location: &Location, t: f64) -> Result<()> {
        let m = self.m as f64;
        let bad = || Error::InconsistentTime {
            time: t,
            location: self.describe_location(location),
        };
        if !(t >= 0.0 && t.is_finite()) {
            return Err(bad());
        }
        let layer_ok = |tau: usize| (t.floor() as u64 % self.m as u64) as usize == tau;
        match *location {
            Location::Vertex(v) => {
                if !layer_ok(self.vertices[v.0].time) {
                    return Err(bad());
                }
            }
            Location::Edge { edge, delta } => {
                let e = &self.edges[edge.0];
                let (tu, tv) = (self.vertices[e.u.0].time, self.vertices[e.v.0].time);
                match e.kind {
                    EdgeKind::Spatial => {
                        if !layer_ok(tu) {
                            return Err(bad());
                        }
                    }
                    EdgeKind::Temporal => {
                        // u precedes v in vertex order, so tu < tv; the wrap
                        // edge joins layer 0 (reached from layer m-1) to m-1.
                        let expected = if tv == tu + 1 {
                            tu as f64 + delta
                        } else {
                            m - delta
                        };
                        let diff = (t - expected).rem_euclid(m);
                        let gap = diff.min(m - diff);
                        if gap > 1e-9 * t.max(1.0) {
                            return Err(bad());
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn describe_location(&self, location: &Location) -> String {
        match *location {
            Location::Vertex(v) => self.vertices[v.0].to_string(),
            Location::Edge { edge, delta } => {
                let e = &self.edges[edge.0];
                format!("({}, {}, {})", self.vertices[e.u.0], self.vertices[e.v.0], delta)
            }
        }
    }

    pub fn describe(&self, p: &GraphPoint) -> String {
        match p.true_time {
            Some(t) => format!("{} t={}", self.describe_location(&p.location), t),
            None => self.describe_location(&p.location),
        }
    }

    /// Vertex of the location used for component lookups.
    pub fn anchor_vertex(&self, location: &Location) -> VertexId {
        match *location {
            Location::Vertex(v) => v,
            Location::Edge { edge, .. } => self.edges[edge.0].u,
        }
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    pub(crate) fn count(&mut self) -> usize {
        (0..self.parent.len()).filter(|&i| self.find(i) == i).count()
    }
}
