//! Closed-form covariance and variogram distance between graph points.
//!
//! The field is `Z = Z_V + Z_E` (plus `beta W(t)` on periodic graphs). `Z_V`
//! interpolates a Gaussian vector on the vertices with covariance `L+`
//! linearly along each edge; `Z_E` places a scaled Brownian bridge on every
//! edge, bridges of the same life being correlated through `k_T`.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{
    cyclic_gap, EdgeId, EquivalentSimpleGraph, GraphPoint, Location, TimeModel, VertexId,
};
use crate::lifespan;
use crate::temporal::{ar1_unchecked, check_lambda, check_rho, circulant_correlation};

/// Distances at or below this value between distinct points are reported as
/// degenerate.
pub const DEGENERATE_TOL: f64 = 1e-12;

/// Temporal parameters of the field. Linear graphs take an AR(1) `lambda`;
/// periodic graphs take the circulant weight `rho` for edges alive on the
/// whole cycle, `lambda` for interrupted lives, and the Wiener scale `beta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MetricParams {
    Linear { lambda: f64 },
    Periodic { rho: f64, lambda: f64, beta: f64 },
}

impl MetricParams {
    pub fn validate(&self) -> Result<()> {
        match *self {
            MetricParams::Linear { lambda } => check_lambda(lambda),
            MetricParams::Periodic { rho, lambda, beta } => {
                check_rho(rho)?;
                check_lambda(lambda)?;
                if beta > 0.0 && beta.is_finite() {
                    Ok(())
                } else {
                    Err(Error::ParameterOutOfRange {
                        name: "beta",
                        value: beta,
                        expected: "beta > 0",
                    })
                }
            }
        }
    }

    pub fn time_model(&self) -> TimeModel {
        match self {
            MetricParams::Linear { .. } => TimeModel::Linear,
            MetricParams::Periodic { .. } => TimeModel::Periodic,
        }
    }

    fn lambda(&self) -> f64 {
        match *self {
            MetricParams::Linear { lambda } | MetricParams::Periodic { lambda, .. } => lambda,
        }
    }

    fn beta(&self) -> f64 {
        match *self {
            MetricParams::Linear { .. } => 0.0,
            MetricParams::Periodic { beta, .. } => beta,
        }
    }
}

/// A distance split into the contributions of the three field components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistanceResult {
    pub value: f64,
    pub vertex_part: f64,
    pub bridge_part: f64,
    pub wiener_part: f64,
}

impl DistanceResult {
    const ZERO: Self = Self {
        value: 0.0,
        vertex_part: 0.0,
        bridge_part: 0.0,
        wiener_part: 0.0,
    };
}

/// Brownian bridge covariance on `[0, 1]`.
pub fn brownian_bridge_cov(d1: f64, d2: f64) -> Result<f64> {
    for d in [d1, d2] {
        if !(0.0..=1.0).contains(&d) {
            return Err(Error::DeltaOutOfRange(d));
        }
    }
    Ok(bridge(d1, d2))
}

#[inline]
fn bridge(d1: f64, d2: f64) -> f64 {
    d1.min(d2) - d1 * d2
}

/// A canonical point broken into its interpolation weights on vertices, its
/// bridge coordinate (if interior to an edge) and its true time.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Decomposed {
    pub weights: [(VertexId, f64); 2],
    pub n_weights: usize,
    pub bridge: Option<(EdgeId, f64)>,
    pub time: f64,
    pub point: GraphPoint,
}

impl Decomposed {
    pub fn weights(&self) -> &[(VertexId, f64)] {
        &self.weights[..self.n_weights]
    }
}

/// Metric engine bound to a graph and a parameter set.
#[derive(Debug, Clone)]
pub struct Metric<'g> {
    graph: &'g EquivalentSimpleGraph,
    params: MetricParams,
    circulant: Option<Vec<f64>>,
    zero_cross_time: bool,
}

impl<'g> Metric<'g> {
    pub fn new(graph: &'g EquivalentSimpleGraph, params: MetricParams) -> Result<Self> {
        params.validate()?;
        if params.time_model() != graph.time_model() {
            return Err(Error::ModelMismatch(format!(
                "graph is {:?} but parameters are {:?}",
                graph.time_model(),
                params.time_model()
            )));
        }
        let circulant = match params {
            MetricParams::Periodic { rho, .. } => Some(circulant_correlation(rho, graph.m())?),
            MetricParams::Linear { .. } => None,
        };
        Ok(Self {
            graph,
            params,
            circulant,
            zero_cross_time: false,
        })
    }

    /// Same engine with every bridge covariance between different edges of a
    /// life set to zero.
    pub fn with_cross_time_zeroed(mut self) -> Self {
        self.zero_cross_time = true;
        self
    }

    pub fn graph(&self) -> &'g EquivalentSimpleGraph {
        self.graph
    }

    pub fn params(&self) -> MetricParams {
        self.params
    }

    pub(crate) fn decompose(&self, p: &GraphPoint) -> Result<Decomposed> {
        let point = self.graph.canonical_point(p)?;
        let time = point.true_time.unwrap_or(0.0);
        Ok(match point.location {
            Location::Vertex(v) => Decomposed {
                weights: [(v, 1.0), (v, 0.0)],
                n_weights: 1,
                bridge: None,
                time,
                point,
            },
            Location::Edge { edge, delta } => {
                let e = self.graph.edge(edge);
                Decomposed {
                    weights: [(e.u, 1.0 - delta), (e.v, delta)],
                    n_weights: 2,
                    bridge: Some((edge, delta)),
                    time,
                    point,
                }
            }
        })
    }

    fn same_component(&self, a: &Decomposed, b: &Decomposed) -> Result<()> {
        let ca = self.graph.component_of(a.weights[0].0);
        let cb = self.graph.component_of(b.weights[0].0);
        if ca == cb {
            Ok(())
        } else {
            Err(Error::DifferentComponents)
        }
    }

    /// Temporal correlation between the bridges of two edges of one life.
    pub fn life_correlation(&self, e1: EdgeId, e2: EdgeId) -> f64 {
        let lives = self.graph.lives();
        debug_assert!(lives.same_life(e1, e2));
        if e1 == e2 {
            return 1.0;
        }
        if self.zero_cross_time {
            return 0.0;
        }
        let life = lifespan::life(self.graph, e1);
        let ls = life
            .lifespan
            .as_ref()
            .expect("only spatial lives hold more than one edge");
        let t1 = self.graph.vertex(self.graph.edge(e1).u).time;
        let t2 = self.graph.vertex(self.graph.edge(e2).u).time;
        match (&self.circulant, ls.is_full_cycle()) {
            (Some(col), true) => col[cyclic_gap(t1, t2, self.graph.m())],
            _ => {
                let gap = ls.gap(t1, t2).expect("member layers lie on the lifespan");
                ar1_unchecked(gap as u64, self.params.lambda())
            }
        }
    }

    fn vertex_cov(&self, a: &Decomposed, b: &Decomposed) -> f64 {
        let lp = self.graph.pseudoinverse();
        let mut s = 0.0;
        for &(i, wi) in a.weights() {
            for &(j, wj) in b.weights() {
                s += wi * wj * lp.get(i, j);
            }
        }
        s
    }

    fn bridge_cov(&self, a: &Decomposed, b: &Decomposed) -> f64 {
        let (Some((e1, d1)), Some((e2, d2))) = (a.bridge, b.bridge) else {
            return 0.0;
        };
        if !self.graph.lives().same_life(e1, e2) {
            return 0.0;
        }
        let l1 = self.graph.edge(e1).length();
        let l2 = self.graph.edge(e2).length();
        (l1 * l2).sqrt() * self.life_correlation(e1, e2) * bridge(d1, d2)
    }

    fn wiener_cov(&self, a: &Decomposed, b: &Decomposed) -> f64 {
        let beta = self.params.beta();
        beta * beta * a.time.min(b.time)
    }

    pub(crate) fn cov_decomposed(&self, a: &Decomposed, b: &Decomposed) -> f64 {
        self.vertex_cov(a, b) + self.bridge_cov(a, b) + self.wiener_cov(a, b)
    }

    /// Covariance `k_Z(u1, u2)` of the field at two points.
    pub fn covariance(&self, u1: &GraphPoint, u2: &GraphPoint) -> Result<f64> {
        let a = self.decompose(u1)?;
        let b = self.decompose(u2)?;
        self.same_component(&a, &b)?;
        Ok(self.cov_decomposed(&a, &b))
    }

    /// Variogram distance `k(u1,u1) + k(u2,u2) - 2 k(u1,u2)`.
    pub fn dist(&self, u1: &GraphPoint, u2: &GraphPoint) -> Result<DistanceResult> {
        let a = self.decompose(u1)?;
        let b = self.decompose(u2)?;
        self.same_component(&a, &b)?;
        self.dist_decomposed(&a, &b)
    }

    pub(crate) fn dist_decomposed(&self, a: &Decomposed, b: &Decomposed) -> Result<DistanceResult> {
        if a.point == b.point {
            return Ok(DistanceResult::ZERO);
        }

        // quadratic form of L+ on the difference of interpolation weights
        let mut diff: [(VertexId, f64); 4] = [(VertexId(0), 0.0); 4];
        let mut n = 0;
        for &(v, w) in a.weights() {
            diff[n] = (v, w);
            n += 1;
        }
        for &(v, w) in b.weights() {
            match diff[..n].iter_mut().find(|(u, _)| *u == v) {
                Some(slot) => slot.1 -= w,
                None => {
                    diff[n] = (v, -w);
                    n += 1;
                }
            }
        }
        let lp = self.graph.pseudoinverse();
        let mut vertex_part = 0.0;
        for &(i, ci) in &diff[..n] {
            for &(j, cj) in &diff[..n] {
                vertex_part += ci * cj * lp.get(i, j);
            }
        }
        let vertex_part = vertex_part.max(0.0);

        let bridge_part =
            self.bridge_cov(a, a) + self.bridge_cov(b, b) - 2.0 * self.bridge_cov(a, b);
        let beta = self.params.beta();
        let wiener_part = beta * beta * (a.time - b.time).abs();
        let value = vertex_part + bridge_part + wiener_part;
        if value <= DEGENERATE_TOL {
            return Err(Error::DegenerateDistance {
                value,
                p1: self.graph.describe(&a.point),
                p2: self.graph.describe(&b.point),
            });
        }
        Ok(DistanceResult {
            value,
            vertex_part,
            bridge_part,
            wiener_part,
        })
    }

    fn decompose_all(&self, points: &[GraphPoint]) -> Result<Vec<Decomposed>> {
        let dec: Vec<Decomposed> = points.iter().map(|p| self.decompose(p)).collect::<Result<_>>()?;
        if let Some(first) = dec.first() {
            for d in &dec[1..] {
                self.same_component(first, d)?;
            }
        }
        Ok(dec)
    }

    /// Symmetric matrix of pairwise distances, evaluated in parallel.
    pub fn distance_matrix(&self, points: &[GraphPoint]) -> Result<DMatrix<f64>> {
        let dec = self.decompose_all(points)?;
        let n = dec.len();
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
        let values: Vec<f64> = pairs
            .par_iter()
            .map(|&(i, j)| self.dist_decomposed(&dec[i], &dec[j]).map(|d| d.value))
            .collect::<Result<_>>()?;
        let mut out = DMatrix::zeros(n, n);
        for (&(i, j), &v) in pairs.iter().zip(&values) {
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
        Ok(out)
    }

    /// Covariance matrix `K[i, j] = k_Z(p_i, p_j)`.
    pub fn covariance_matrix(&self, points: &[GraphPoint]) -> Result<DMatrix<f64>> {
        let dec = self.decompose_all(points)?;
        let n = dec.len();
        let mut out = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let c = self.cov_decomposed(&dec[i], &dec[j]);
                out[(i, j)] = c;
                out[(j, i)] = c;
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TriangleViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    /// `d(i, j) + d(j, k) - d(i, k)`, negative for a violation.
    pub slack: f64,
}

/// Outcome of checking the semi-metric axioms over a point set.
#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport {
    pub n_points: usize,
    pub min_distance: f64,
    pub max_asymmetry: f64,
    pub negative: Vec<(usize, usize)>,
    /// Pairs where `d == 0` disagrees with canonical equality, or where the
    /// distance of distinct points was degenerate.
    pub identity_failures: Vec<(usize, usize)>,
    pub triangle_violations: Vec<TriangleViolation>,
}

impl AuditReport {
    /// Whether nonnegativity, symmetry and identity of indiscernibles hold.
    /// Triangle violations are reported but do not affect this.
    pub fn is_semimetric(&self, symmetry_tol: f64) -> bool {
        self.negative.is_empty()
            && self.identity_failures.is_empty()
            && self.max_asymmetry <= symmetry_tol
    }
}

/// Check the semi-metric axioms on all pairs and report triangle-inequality
/// violations on all triples.
pub fn semimetric_audit(metric: &Metric<'_>, points: &[GraphPoint]) -> Result<AuditReport> {
    let n = points.len();
    if n < 3 {
        return Err(Error::Precondition(format!(
            "an audit needs at least 3 points, got {n}"
        )));
    }
    let dec = metric.decompose_all(points)?;
    let mut d = DMatrix::zeros(n, n);
    let mut report = AuditReport {
        n_points: n,
        min_distance: f64::INFINITY,
        max_asymmetry: 0.0,
        negative: Vec::new(),
        identity_failures: Vec::new(),
        triangle_violations: Vec::new(),
    };
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let equal = dec[i].point == dec[j].point;
            match metric.dist_decomposed(&dec[i], &dec[j]) {
                Ok(r) => {
                    d[(i, j)] = r.value;
                    if r.value < 0.0 {
                        report.negative.push((i, j));
                    }
                    if (r.value == 0.0) != equal {
                        report.identity_failures.push((i, j));
                    }
                    if i < j {
                        report.min_distance = report.min_distance.min(r.value);
                    }
                }
                Err(Error::DegenerateDistance { .. }) => report.identity_failures.push((i, j)),
                Err(e) => return Err(e),
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            report.max_asymmetry = report.max_asymmetry.max((d[(i, j)] - d[(j, i)]).abs());
        }
    }
    for i in 0..n {
        for k in (i + 1)..n {
            for j in 0..n {
                if j == i || j == k {
                    continue;
                }
                let slack = d[(i, j)] + d[(j, k)] - d[(i, k)];
                let scale = d[(i, k)].max(1.0);
                if slack < -1e-12 * scale {
                    report.triangle_violations.push(TriangleViolation { i, j, k, slack });
                }
            }
        }
    }
    Ok(report)
}
