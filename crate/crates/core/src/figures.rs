//! Curves of the worked examples, evaluated on the built-in fixtures.

use crate::error::{Error, Result};
use crate::fixtures;
use crate::graph::GraphPoint;
use crate::kernels::CompletelyMonotone;
use crate::metric::{semimetric_audit, Metric, MetricParams};
use crate::temporal::circulant_correlation;

/// A table of curves sharing one abscissa (the first column).
#[derive(Clone, Debug, PartialEq)]
pub struct FigureTable {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl FigureTable {
    fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Value of column `name` at abscissa `x`.
    pub fn value_at(&self, name: &str, x: f64) -> Option<f64> {
        let i = self.columns.iter().position(|c| c == name)?;
        self.rows
            .iter()
            .find(|r| (r[0] - x).abs() < 1e-9)
            .map(|r| r[i])
    }
}

pub const FIGURES: [&str; 5] = ["fig6", "fig9", "fig10", "fig11", "fig12"];

/// Temporal weights `0.2, 0.3, ..., 8.0`.
pub fn alpha_grid() -> Vec<f64> {
    (2..=80).map(|k| k as f64 / 10.0).collect()
}

pub fn figure(name: &str) -> Result<Vec<FigureTable>> {
    match name {
        "fig5" => fig5(),
        "fig6" => fig6(),
        "fig9" => fig9(),
        "fig10" => fig10(),
        "fig11" => fig11(),
        "fig12" => fig12(),
        other => Err(Error::Precondition(format!(
            "unknown figure {other}; expected one of {}",
            FIGURES.join(", ")
        ))),
    }
}

pub fn fig6() -> Result<Vec<FigureTable>> {
    let rhos = [0.45, 0.4, 0.2];
    let mut out = Vec::new();
    for m in [8usize, 20] {
        let name = format!("fig6_m{m}");
        let mut t = FigureTable::new(&name, &["lag", "rho_0.45", "rho_0.4", "rho_0.2"]);
        let cols: Vec<Vec<f64>> = rhos
            .iter()
            .map(|&r| circulant_correlation(r, m))
            .collect::<Result<_>>()?;
        for lag in 0..=m {
            let mut row = vec![lag as f64];
            row.extend(cols.iter().map(|c| c[lag % m]));
            t.rows.push(row);
        }
        out.push(t);
    }
    Ok(out)
}

/// Distances `d(A0,P)`, `d(A0,Q)` and `d(P,Q)` for the given lambdas.
fn fig7_distances(alpha: f64, lambdas: &[f64]) -> Result<(f64, f64, Vec<f64>)> {
    let g = fixtures::fig7(alpha).build()?;
    let pts = fixtures::fig7_points(&g);
    let base = Metric::new(&g, MetricParams::Linear { lambda: 0.0 })?;
    let d_ap = base.dist(&pts.a0, &pts.p)?.value;
    let d_aq = base.dist(&pts.a0, &pts.q)?.value;
    let d_pq = lambdas
        .iter()
        .map(|&lambda| {
            Ok(Metric::new(&g, MetricParams::Linear { lambda })?
                .dist(&pts.p, &pts.q)?
                .value)
        })
        .collect::<Result<_>>()?;
    Ok((d_ap, d_aq, d_pq))
}

pub fn fig9() -> Result<Vec<FigureTable>> {
    let mut left = FigureTable::new("fig9_left", &["alpha", "d_A0_P", "d_A0_Q"]);
    let mut right = FigureTable::new(
        "fig9_right",
        &["alpha", "d_P_Q_lambda_0", "d_P_Q_lambda_0.6", "d_P_Q_lambda_0.9"],
    );
    for alpha in alpha_grid() {
        let (ap, aq, pq) = fig7_distances(alpha, &[0.0, 0.6, 0.9])?;
        left.rows.push(vec![alpha, ap, aq]);
        right.rows.push(vec![alpha, pq[0], pq[1], pq[2]]);
    }
    Ok(vec![left, right])
}

fn fig10_table(name: &str, f: &CompletelyMonotone) -> Result<FigureTable> {
    let mut t = FigureTable::new(name, &["alpha", "cov_A0_P", "cov_A0_Q", "cov_P_Q"]);
    for alpha in alpha_grid() {
        let (ap, aq, pq) = fig7_distances(alpha, &[0.6])?;
        t.rows.push(vec![alpha, f.psi(ap)?, f.psi(aq)?, f.psi(pq[0])?]);
    }
    Ok(t)
}

pub fn fig10() -> Result<Vec<FigureTable>> {
    Ok(vec![
        fig10_table("fig10_left", &CompletelyMonotone::power_exponential(1.0, 1.0)?)?,
        fig10_table(
            "fig10_right",
            &CompletelyMonotone::generalized_cauchy(1.0, 5.0, 0.5)?,
        )?,
    ])
}

/// `d(P_0, P_t)` on the ladder for `t = 0..=24`.
fn ladder_curve(alpha: f64, rho: f64, beta: f64) -> Result<Vec<f64>> {
    let g = fixtures::ladder(alpha).build()?;
    let m = Metric::new(
        &g,
        MetricParams::Periodic {
            rho,
            lambda: 0.0,
            beta,
        },
    )?;
    let p0 = fixtures::ladder_point(&g, 0);
    (0..=24)
        .map(|t| Ok(m.dist(&p0, &fixtures::ladder_point(&g, t))?.value))
        .collect()
}

fn ladder_tables(
    prefix: &str,
    key: &str,
    settings: &[(&str, f64, f64, f64)],
    f: &CompletelyMonotone,
) -> Result<Vec<FigureTable>> {
    let d_cols: Vec<String> = settings.iter().map(|s| format!("d_{key}_{}", s.0)).collect();
    let c_cols: Vec<String> = settings.iter().map(|s| format!("cov_{key}_{}", s.0)).collect();
    let mut left = FigureTable::new(&format!("{prefix}_left"), &["t"]);
    left.columns.extend(d_cols);
    let mut right = FigureTable::new(&format!("{prefix}_right"), &["t"]);
    right.columns.extend(c_cols);
    let curves: Vec<Vec<f64>> = settings
        .iter()
        .map(|&(_, alpha, rho, beta)| ladder_curve(alpha, rho, beta))
        .collect::<Result<_>>()?;
    for t in 0..=24 {
        let mut l = vec![t as f64];
        let mut r = vec![t as f64];
        for c in &curves {
            l.push(c[t]);
            r.push(f.psi(c[t])?);
        }
        left.rows.push(l);
        right.rows.push(r);
    }
    Ok(vec![left, right])
}

pub fn fig11() -> Result<Vec<FigureTable>> {
    ladder_tables(
        "fig11",
        "beta",
        &[("1", 1.0, 0.45, 1.0), ("0.5", 1.0, 0.45, 0.5), ("0.3", 1.0, 0.45, 0.3)],
        &CompletelyMonotone::power_exponential(0.5, 0.5)?,
    )
}

pub fn fig12() -> Result<Vec<FigureTable>> {
    ladder_tables(
        "fig12",
        "rho",
        &[("0.45", 10.0, 0.45, 0.3), ("0.2", 10.0, 0.2, 0.3), ("0", 10.0, 0.0, 0.3)],
        &CompletelyMonotone::dagum(1.0, 2.0, 0.5)?,
    )
}

/// Triangle check on the rung midpoints of the epsilon graph, `lambda = 0.5`.
pub fn fig5() -> Result<Vec<FigureTable>> {
    let mut t = FigureTable::new("fig5", &["eps", "d_P_Q", "d_Q_R", "d_P_R", "violated"]);
    for k in 0..=12 {
        let eps = 10f64.powf(-3.0 + 0.25 * k as f64);
        let g = fixtures::epsilon_graph(eps).build()?;
        let m = Metric::new(&g, MetricParams::Linear { lambda: 0.5 })?;
        let pts: Vec<GraphPoint> = fixtures::epsilon_points(&g);
        let report = semimetric_audit(&m, &pts)?;
        let violated = report
            .triangle_violations
            .iter()
            .any(|v| v.i == 0 && v.j == 1 && v.k == 2);
        t.rows.push(vec![
            eps,
            m.dist(&pts[0], &pts[1])?.value,
            m.dist(&pts[1], &pts[2])?.value,
            m.dist(&pts[0], &pts[2])?.value,
            if violated { 1.0 } else { 0.0 },
        ]);
    }
    Ok(vec![t])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        let a = alpha_grid();
        assert_eq!(a.len(), 79);
        assert_eq!(a[0], 0.2);
        assert_eq!(a[78], 8.0);
    }

    #[test]
    fn spot_values() {
        let f9 = fig9().unwrap();
        assert!((f9[0].value_at("d_A0_P", 0.2).unwrap() - 0.7957).abs() < 1e-3);
        let f11 = fig11().unwrap();
        assert!((f11[0].value_at("d_beta_0.3", 16.0).unwrap() - 1.44).abs() < 1e-3);
        let f6 = fig6().unwrap();
        assert!((f6[1].value_at("rho_0.2", 1.0).unwrap() - 0.2087).abs() < 1e-3);
        assert!(figure("fig99").is_err());
    }
}
