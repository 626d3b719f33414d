//! Text formats: graph documents, point lists, parameter strings and CSV
//! number formatting.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{EquivalentSimpleGraph, GraphPoint, TemporalPolicy, TimeEvolvingGraph, TimeModel};
use crate::kernels::CompletelyMonotone;
use crate::metric::MetricParams;

/// Parse a JSON graph document.
pub fn parse_graph(text: &str) -> Result<TimeEvolvingGraph> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Pretty JSON for hand editing.
pub fn graph_to_json(g: &TimeEvolvingGraph) -> String {
    serde_json::to_string_pretty(g).expect("graph documents always serialise")
}

/// Compact JSON used for hashing.
pub fn canonical_json(g: &TimeEvolvingGraph) -> String {
    serde_json::to_string(g).expect("graph documents always serialise")
}

/// Replace every temporal weight with `alpha`.
pub fn with_temporal_weight(g: &TimeEvolvingGraph, alpha: f64) -> TimeEvolvingGraph {
    let mut out = g.clone();
    out.temporal = match &g.temporal {
        TemporalPolicy::MarkovComplete { .. } => TemporalPolicy::MarkovComplete { alpha },
        TemporalPolicy::Explicit { edges } => TemporalPolicy::Explicit {
            edges: edges
                .iter()
                .cloned()
                .map(|mut e| {
                    e.weight = alpha;
                    e
                })
                .collect(),
        },
    };
    out
}

#[derive(Clone, Debug, PartialEq)]
pub enum PointKind {
    Vertex { label: String },
    Spatial { u: String, v: String },
    /// Temporal edge of `label` from layer `time` to the next one.
    Temporal { label: String },
}

/// One line of a points file.
///
/// ```text
/// # name u v time delta
/// P C D 0 0.8
/// # a temporal edge repeats the label; delta runs forward in time
/// T A A 1 0.25
/// # name label time
/// A0 A 0
/// ```
///
/// On periodic graphs `time` is the true time and the layer is
/// `floor(time) mod m`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSpec {
    pub name: String,
    pub kind: PointKind,
    pub time: f64,
    pub delta: f64,
}

fn number(s: &str, what: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| Error::Parse(format!("invalid {what} '{s}'")))
}

impl PointSpec {
    pub fn parse_line(line: &str) -> Result<Self> {
        let f: Vec<&str> = line.split_whitespace().collect();
        match f.as_slice() {
            [name, label, time] => Ok(Self {
                name: name.to_string(),
                kind: PointKind::Vertex {
                    label: label.to_string(),
                },
                time: number(time, "time")?,
                delta: 0.0,
            }),
            [name, u, v, time, delta] => Ok(Self {
                name: name.to_string(),
                kind: if u == v {
                    PointKind::Temporal {
                        label: u.to_string(),
                    }
                } else {
                    PointKind::Spatial {
                        u: u.to_string(),
                        v: v.to_string(),
                    }
                },
                time: number(time, "time")?,
                delta: number(delta, "delta")?,
            }),
            _ => Err(Error::Parse(format!(
                "expected 'name label time' or 'name u v time delta', got '{line}'"
            ))),
        }
    }

    /// Resolve against a built graph.
    pub fn resolve(&self, g: &EquivalentSimpleGraph) -> Result<GraphPoint> {
        let periodic = g.time_model() == TimeModel::Periodic;
        if !(self.time >= 0.0 && self.time.is_finite()) {
            return Err(Error::Parse(format!("point {}: invalid time {}", self.name, self.time)));
        }
        if !periodic && self.time.fract() != 0.0 {
            return Err(Error::Parse(format!(
                "point {}: layer index must be an integer on a linear graph",
                self.name
            )));
        }
        let layer = (self.time.floor() as usize) % g.m().max(1);
        let point = match &self.kind {
            PointKind::Vertex { label } => g.vertex_point(label, layer)?,
            PointKind::Spatial { u, v } => g.point_between((u, layer), (v, layer), self.delta)?,
            PointKind::Temporal { label } => {
                if self.time.fract() != 0.0 {
                    return Err(Error::Parse(format!(
                        "point {}: temporal edge points start from an integer time",
                        self.name
                    )));
                }
                let next = if periodic { (layer + 1) % g.m() } else { layer + 1 };
                g.point_between((label, layer), (label, next), self.delta)?
            }
        };
        if !(0.0..=1.0).contains(&self.delta) {
            return Err(Error::DeltaOutOfRange(self.delta));
        }
        Ok(if periodic {
            let t = match self.kind {
                PointKind::Temporal { .. } => self.time + self.delta,
                _ => self.time,
            };
            point.at_time(t)
        } else {
            point
        })
    }
}

/// Parse a points file, skipping blank lines and `#` comments.
pub fn parse_points(text: &str) -> Result<Vec<PointSpec>> {
    let specs: Vec<PointSpec> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(PointSpec::parse_line)
        .collect::<Result<_>>()?;
    let mut names = std::collections::BTreeSet::new();
    for s in &specs {
        if !names.insert(s.name.as_str()) {
            return Err(Error::Parse(format!("duplicate point name {}", s.name)));
        }
    }
    Ok(specs)
}

fn key_values(s: &str) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got '{part}'")))?;
        let k = k.trim().to_string();
        if out.insert(k.clone(), number(v.trim(), &k)?).is_some() {
            return Err(Error::Parse(format!("parameter {k} given twice")));
        }
    }
    Ok(out)
}

/// Metric parameters plus an optional override of the temporal weight.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunParams {
    pub metric: MetricParams,
    pub alpha: Option<f64>,
}

/// Parse `lambda=0.6[,alpha=1]` (linear) or `rho=0.45,beta=1[,lambda=0][,alpha=1]`
/// (periodic). A string naming `rho` or `beta` selects the periodic model.
pub fn parse_params(s: &str) -> Result<RunParams> {
    let mut kv = key_values(s)?;
    let alpha = kv.remove("alpha");
    let lambda = kv.remove("lambda").unwrap_or(0.0);
    let rho = kv.remove("rho");
    let beta = kv.remove("beta");
    if let Some(k) = kv.keys().next() {
        return Err(Error::Parse(format!("unknown parameter {k}")));
    }
    let metric = match (rho, beta) {
        (None, None) => MetricParams::Linear { lambda },
        (rho, Some(beta)) => MetricParams::Periodic {
            rho: rho.unwrap_or(0.0),
            lambda,
            beta,
        },
        (Some(_), None) => {
            return Err(Error::Parse("periodic parameters need beta".into()));
        }
    };
    Ok(RunParams { metric, alpha })
}

pub fn params_to_string(p: &RunParams) -> String {
    let mut s = match p.metric {
        MetricParams::Linear { lambda } => format!("lambda={lambda}"),
        MetricParams::Periodic { rho, lambda, beta } => {
            format!("rho={rho},lambda={lambda},beta={beta}")
        }
    };
    if let Some(a) = p.alpha {
        s.push_str(&format!(",alpha={a}"));
    }
    s
}

/// Parse `family:key=value,...`, e.g. `exponential:alpha=1,beta=1`.
pub fn parse_family(s: &str) -> Result<CompletelyMonotone> {
    let (name, rest) = s.split_once(':').unwrap_or((s, ""));
    let mut kv = key_values(rest)?;
    let mut take = |k: &str| {
        kv.remove(k)
            .ok_or_else(|| Error::Parse(format!("family {name} needs parameter {k}")))
    };
    let f = match name.trim() {
        "power_exponential" | "exponential" => {
            CompletelyMonotone::power_exponential(take("alpha")?, take("beta")?)
        }
        "matern" => CompletelyMonotone::matern(take("alpha")?, take("beta")?),
        "generalized_cauchy" | "cauchy" => {
            CompletelyMonotone::generalized_cauchy(take("alpha")?, take("beta")?, take("xi")?)
        }
        "dagum" => CompletelyMonotone::dagum(take("alpha")?, take("beta")?, take("xi")?),
        other => return Err(Error::Parse(format!("unknown family {other}"))),
    }?;
    if let Some(k) = kv.keys().next() {
        return Err(Error::Parse(format!("unknown parameter {k} for {name}")));
    }
    Ok(f)
}

/// Round to `digits` significant digits, then print the shortest decimal
/// that reads back as the rounded value.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .expect("scientific notation parses");
    format!("{rounded}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn graph_round_trip() {
        for g in [fixtures::fig7(1.0), fixtures::ladder(2.0), fixtures::periodic_four()] {
            let text = graph_to_json(&g);
            let back = parse_graph(&text).unwrap();
            assert_eq!(back, g);
            assert_eq!(graph_to_json(&back), text);
        }
    }

    #[test]
    fn malformed_graph() {
        assert!(matches!(parse_graph("{ not json"), Err(Error::Parse(_))));
        assert!(matches!(
            parse_graph(r#"{"time_model":"linear","m":1,"layers":[],"temporal":{"policy":"markov_complete","alpha":1},"extra":1}"#),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn points_resolve() {
        let g = fixtures::fig7(1.0).build().unwrap();
        let specs = parse_points("# c\nA0 A 0\nP C D 0 0.8\n\nQ D C 2 0.5\nT A A 1 0.25\n").unwrap();
        let pts = fixtures::fig7_points(&g);
        assert_eq!(specs[0].resolve(&g).unwrap(), pts.a0);
        assert_eq!(specs[1].resolve(&g).unwrap(), pts.p);
        assert_eq!(specs[2].resolve(&g).unwrap(), pts.q);
        let t = specs[3].resolve(&g).unwrap();
        assert_eq!(t, g.point_between(("A", 1), ("A", 2), 0.25).unwrap());
        assert!(parse_points("X A 0\nX B 0").is_err());
        assert!(PointSpec::parse_line("P C D 0.5 0.8").unwrap().resolve(&g).is_err());
        assert!(PointSpec::parse_line("P C D 0 1.8").unwrap().resolve(&g).is_err());
    }

    #[test]
    fn periodic_points_resolve() {
        let g = fixtures::ladder(1.0).build().unwrap();
        let p = PointSpec::parse_line("P8 A B 8 0.5").unwrap().resolve(&g).unwrap();
        assert_eq!(p, fixtures::ladder_point(&g, 8));
        let wrap = PointSpec::parse_line("W A A 7 0.25").unwrap().resolve(&g).unwrap();
        assert_eq!(wrap.true_time, Some(7.25));
        g.canonical_point(&wrap).unwrap();
    }

    #[test]
    fn params_and_families() {
        let p = parse_params("lambda=0.6,alpha=2").unwrap();
        assert_eq!(p.metric, MetricParams::Linear { lambda: 0.6 });
        assert_eq!(p.alpha, Some(2.0));
        let p = parse_params("rho=0.45,beta=1").unwrap();
        assert_eq!(
            p.metric,
            MetricParams::Periodic {
                rho: 0.45,
                lambda: 0.0,
                beta: 1.0
            }
        );
        assert_eq!(parse_params(&params_to_string(&p)).unwrap(), p);
        assert!(parse_params("gamma=1").is_err());
        assert!(parse_params("lambda").is_err());

        assert_eq!(
            parse_family("exponential:alpha=1,beta=1").unwrap(),
            CompletelyMonotone::power_exponential(1.0, 1.0).unwrap()
        );
        let f = parse_family("dagum:alpha=1,beta=2,xi=0.5").unwrap();
        assert_eq!(parse_family(&f.to_string()).unwrap(), f);
        assert!(parse_family("cauchy:alpha=1,beta=5").is_err());
        assert!(parse_family("matern:alpha=0.9,beta=1").is_err());
        assert!(parse_family("gauss:alpha=1").is_err());
    }

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(0.7101234567891234, 12), "0.710123456789");
        assert_eq!(fmt_sig(8.0, 12), "8");
        assert_eq!(fmt_sig(0.0, 12), "0");
        assert_eq!(fmt_sig(1.23456789012345e-7, 12), "0.000000123456789012");
    }
}
