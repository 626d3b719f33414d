//! Temporal correlation models used inside the bridge covariance.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{cyclic_gap, TimeModel};
use crate::lifespan::arcs;

pub fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > -1.0 && lambda < 1.0 {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange {
            name: "lambda",
            value: lambda,
            expected: "(-1, 1)",
        })
    }
}

pub fn check_rho(rho: f64) -> Result<()> {
    if (0.0..0.5).contains(&rho) {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange {
            name: "rho",
            value: rho,
            expected: "[0, 0.5)",
        })
    }
}

fn check_cycle(m: usize) -> Result<()> {
    if m >= 3 {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange {
            name: "m",
            value: m as f64,
            expected: "m >= 3",
        })
    }
}

/// AR(1) correlation `lambda^|h|`. `powi(0)` is 1 even for `lambda = 0`.
pub fn ar1(h: i64, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(ar1_unchecked(h.unsigned_abs(), lambda))
}

pub(crate) fn ar1_unchecked(h: u64, lambda: f64) -> f64 {
    let h = i32::try_from(h).unwrap_or(i32::MAX);
    lambda.powi(h)
}

/// First column of the correlation matrix obtained by normalising
/// `(I - rho C)^-1`, where `C` is the adjacency matrix of the `m`-cycle.
///
/// The inverse is circulant with eigenvalues `1 - 2 rho cos(2 pi j / m)`,
/// so its first column is an inverse DFT of their reciprocals.
pub fn circulant_correlation(rho: f64, m: usize) -> Result<Vec<f64>> {
    check_rho(rho)?;
    check_cycle(m)?;
    if rho == 0.0 {
        let mut col = vec![0.0; m];
        col[0] = 1.0;
        return Ok(col);
    }
    let mu: Vec<f64> = (0..m)
        .map(|j| 1.0 - 2.0 * rho * (2.0 * PI * j as f64 / m as f64).cos())
        .collect();
    let mut col: Vec<f64> = (0..m)
        .map(|k| {
            let s: f64 = mu
                .iter()
                .enumerate()
                .map(|(j, mu_j)| (2.0 * PI * ((j * k) % m) as f64 / m as f64).cos() / mu_j)
                .sum();
            s / m as f64
        })
        .collect();
    let c0 = col[0];
    for c in &mut col {
        *c /= c0;
    }
    col[0] = 1.0;
    // enforce the exact mirror symmetry of a symmetric circulant
    for k in 1..m {
        let mirrored = col[m - k];
        if k < m - k {
            let avg = 0.5 * (col[k] + mirrored);
            col[k] = avg;
            col[m - k] = avg;
        }
    }
    Ok(col)
}

/// Correlation of two layers of a possibly interrupted set of layers on the
/// `m`-cycle: `lambda^gap` along a connected arc, zero across arcs.
pub fn block_ar1(tau1: usize, tau2: usize, lambda: f64, lifespan: &[usize], m: usize) -> Result<f64> {
    check_lambda(lambda)?;
    check_cycle(m)?;
    let times: BTreeSet<usize> = lifespan.iter().copied().collect();
    if let Some(&bad) = times.iter().find(|&&t| t >= m) {
        return Err(Error::TimeOutsideLifespan { tau: bad });
    }
    if times.len() == m {
        return Err(Error::Precondition(
            "lifespan covers the whole cycle; use the circulant correlation".into(),
        ));
    }
    for tau in [tau1, tau2] {
        if !times.contains(&tau) {
            return Err(Error::TimeOutsideLifespan { tau });
        }
    }
    for arc in arcs(&times, m, TimeModel::Periodic) {
        if arc.contains(tau1) {
            return Ok(match arc.gap(tau1, tau2) {
                Ok(g) => ar1_unchecked(g as u64, lambda),
                Err(_) => 0.0,
            });
        }
    }
    unreachable!("every layer of the set lies on one of its arcs")
}

/// One of the three temporal correlation models.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum TemporalKernelSpec {
    Ar1 { lambda: f64 },
    Circulant { rho: f64, m: usize },
    BlockAr1 { lambda: f64, lifespan: Vec<usize>, m: usize },
}

impl TemporalKernelSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            TemporalKernelSpec::Ar1 { lambda } => check_lambda(*lambda),
            TemporalKernelSpec::Circulant { rho, m } => {
                check_rho(*rho)?;
                check_cycle(*m)
            }
            TemporalKernelSpec::BlockAr1 { lambda, m, .. } => {
                check_lambda(*lambda)?;
                check_cycle(*m)
            }
        }
    }
}

/// Evaluate `k_T(tau1, tau2)` for the given model.
pub fn kt_eval(spec: &TemporalKernelSpec, tau1: usize, tau2: usize) -> Result<f64> {
    match spec {
        TemporalKernelSpec::Ar1 { lambda } => ar1(tau1 as i64 - tau2 as i64, *lambda),
        TemporalKernelSpec::Circulant { rho, m } => {
            let col = circulant_correlation(*rho, *m)?;
            Ok(col[cyclic_gap(tau1 % m, tau2 % m, *m)])
        }
        TemporalKernelSpec::BlockAr1 { lambda, lifespan, m } => {
            block_ar1(tau1, tau2, *lambda, lifespan, *m)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    #[test]
    fn ar1_values() {
        assert_eq!(ar1(0, 0.3).unwrap(), 1.0);
        assert_eq!(ar1(0, 0.0).unwrap(), 1.0);
        assert_eq!(ar1(3, 0.0).unwrap(), 0.0);
        assert_eq!(ar1(2, 0.5).unwrap(), 0.25);
        assert_eq!(ar1(-2, 0.5).unwrap(), 0.25);
        assert!((ar1(1, -0.4).unwrap() + 0.4).abs() < 1e-16);
        assert!(ar1(1, 1.0).is_err());
        assert!(ar1(1, -1.0).is_err());
    }

    #[test]
    fn circulant_examples() {
        let col = circulant_correlation(0.45, 8).unwrap();
        let want = [1.0, 0.6493, 0.4429, 0.3350, 0.3015, 0.3350, 0.4429, 0.6493];
        for (c, w) in col.iter().zip(want) {
            assert!((c - w).abs() < 5e-5, "{c} vs {w}");
        }
        let col = circulant_correlation(0.4, 20).unwrap();
        assert!((col[1] - 0.5).abs() < 5e-5);
        assert_eq!(circulant_correlation(0.0, 5).unwrap(), vec![1.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(circulant_correlation(0.5, 8).is_err());
        assert!(circulant_correlation(0.2, 2).is_err());
    }

    /// Dense route: invert `I - rho C` and normalise by its diagonal.
    fn dense_circulant(rho: f64, m: usize) -> Vec<f64> {
        let mut theta = DMatrix::<f64>::identity(m, m);
        for i in 0..m {
            theta[(i, (i + 1) % m)] -= rho;
            theta[((i + 1) % m, i)] -= rho;
        }
        let inv = theta.try_inverse().unwrap();
        (0..m).map(|k| inv[(k, 0)] / inv[(0, 0)]).collect()
    }

    #[test]
    fn circulant_matches_dense_inverse() {
        for m in [3, 4, 7, 8, 20, 33] {
            for rho in [0.0, 0.1, 0.2, 0.4, 0.45, 0.499] {
                let a = circulant_correlation(rho, m).unwrap();
                let b = dense_circulant(rho, m);
                for (x, y) in a.iter().zip(&b) {
                    assert!((x - y).abs() < 1e-10, "m={m} rho={rho}: {x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn block_examples() {
        assert!((block_ar1(3, 1, 0.5, &[3, 0, 1], 4).unwrap() - 0.25).abs() < 1e-16);
        assert_eq!(block_ar1(0, 0, 0.7, &[0, 1], 6).unwrap(), 1.0);
        assert_eq!(block_ar1(1, 3, 0.7, &[0, 1, 3, 4], 6).unwrap(), 0.0);
        assert!(matches!(
            block_ar1(2, 3, 0.7, &[0, 1, 3, 4], 6),
            Err(Error::TimeOutsideLifespan { tau: 2 })
        ));
        assert!(block_ar1(0, 1, 0.7, &[0, 1, 2], 3).is_err());
    }

    #[test]
    fn dispatch() {
        let s = TemporalKernelSpec::Ar1 { lambda: 0.9 };
        assert!((kt_eval(&s, 3, 4).unwrap() - 0.9).abs() < 1e-16);
        let s = TemporalKernelSpec::Circulant { rho: 0.2, m: 8 };
        assert!((kt_eval(&s, 0, 4).unwrap() - 0.0038).abs() < 5e-5);
        let s = TemporalKernelSpec::Circulant { rho: 0.45, m: 8 };
        let lag7 = kt_eval(&s, 0, 7).unwrap();
        assert!((lag7 - 0.6493).abs() < 5e-5);
        assert_eq!(lag7, kt_eval(&s, 0, 1).unwrap());
    }
}
