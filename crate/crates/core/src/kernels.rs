//! Completely monotone functions and the kernels they induce on graph points.

use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use statrs::function::gamma::gamma;

use crate::bessel::bessel_k;
use crate::error::{Error, Result};
use crate::graph::GraphPoint;
use crate::metric::Metric;
use crate::spectral::check_symmetric;

/// A completely monotone function normalised so that `psi(0) = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CompletelyMonotone {
    /// `exp(-beta x^alpha)`
    PowerExponential { alpha: f64, beta: f64 },
    /// `2^(1-alpha) / Gamma(alpha) (beta x)^alpha K_alpha(beta x)`
    Matern { alpha: f64, beta: f64 },
    /// `(beta x^alpha + 1)^(-xi / alpha)`
    GeneralizedCauchy { alpha: f64, beta: f64, xi: f64 },
    /// `1 - (beta x^alpha / (1 + beta x^alpha))^(xi / alpha)`
    Dagum { alpha: f64, beta: f64, xi: f64 },
}

fn in_range(name: &'static str, value: f64, ok: bool, expected: &'static str) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange {
            name,
            value,
            expected,
        })
    }
}

impl CompletelyMonotone {
    pub fn power_exponential(alpha: f64, beta: f64) -> Result<Self> {
        let f = Self::PowerExponential { alpha, beta };
        f.validate()?;
        Ok(f)
    }

    pub fn matern(alpha: f64, beta: f64) -> Result<Self> {
        let f = Self::Matern { alpha, beta };
        f.validate()?;
        Ok(f)
    }

    pub fn generalized_cauchy(alpha: f64, beta: f64, xi: f64) -> Result<Self> {
        let f = Self::GeneralizedCauchy { alpha, beta, xi };
        f.validate()?;
        Ok(f)
    }

    pub fn dagum(alpha: f64, beta: f64, xi: f64) -> Result<Self> {
        let f = Self::Dagum { alpha, beta, xi };
        f.validate()?;
        Ok(f)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::PowerExponential { .. } => "power_exponential",
            Self::Matern { .. } => "matern",
            Self::GeneralizedCauchy { .. } => "generalized_cauchy",
            Self::Dagum { .. } => "dagum",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::PowerExponential { alpha, beta } => {
                in_range("alpha", alpha, alpha > 0.0 && alpha <= 1.0, "0 < alpha <= 1")?;
                in_range("beta", beta, beta > 0.0, "beta > 0")
            }
            Self::Matern { alpha, beta } => {
                in_range("alpha", alpha, alpha > 0.0 && alpha <= 0.5, "0 < alpha <= 0.5")?;
                in_range("beta", beta, beta > 0.0, "beta > 0")
            }
            Self::GeneralizedCauchy { alpha, beta, xi } => {
                in_range("alpha", alpha, alpha > 0.0 && alpha <= 1.0, "0 < alpha <= 1")?;
                in_range("beta", beta, beta > 0.0, "beta > 0")?;
                in_range("xi", xi, xi > 0.0, "xi > 0")
            }
            Self::Dagum { alpha, beta, xi } => {
                in_range("alpha", alpha, alpha > 0.0 && alpha <= 1.0, "0 < alpha <= 1")?;
                in_range("beta", beta, beta > 0.0, "beta > 0")?;
                in_range("xi", xi, xi > 0.0 && xi <= 1.0, "0 < xi <= 1")
            }
        }
    }

    /// Evaluate `psi(x)` for `x >= 0`.
    pub fn psi(&self, x: f64) -> Result<f64> {
        self.validate()?;
        if x.is_nan() || x < 0.0 {
            return Err(Error::NegativeArgument(x));
        }
        if x == 0.0 {
            return Ok(1.0);
        }
        Ok(match *self {
            Self::PowerExponential { alpha, beta } => (-beta * x.powf(alpha)).exp(),
            Self::Matern { alpha, beta } => {
                let z = beta * x;
                if z > 700.0 {
                    0.0
                } else {
                    2f64.powf(1.0 - alpha) / gamma(alpha) * z.powf(alpha) * bessel_k(alpha, z)
                }
            }
            Self::GeneralizedCauchy { alpha, beta, xi } => {
                (beta * x.powf(alpha) + 1.0).powf(-xi / alpha)
            }
            Self::Dagum { alpha, beta, xi } => {
                let y = beta * x.powf(alpha);
                1.0 - (y / (1.0 + y)).powf(xi / alpha)
            }
        })
    }
}

impl fmt::Display for CompletelyMonotone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::PowerExponential { alpha, beta } | Self::Matern { alpha, beta } => {
                write!(f, "{}:alpha={alpha},beta={beta}", self.name())
            }
            Self::GeneralizedCauchy { alpha, beta, xi } | Self::Dagum { alpha, beta, xi } => {
                write!(f, "{}:alpha={alpha},beta={beta},xi={xi}", self.name())
            }
        }
    }
}

/// `psi(d(u1, u2))`.
pub fn kernel_compose(
    metric: &Metric<'_>,
    f: &CompletelyMonotone,
    u1: &GraphPoint,
    u2: &GraphPoint,
) -> Result<f64> {
    f.psi(metric.dist(u1, u2)?.value)
}

/// Gram matrix `G[i, j] = psi(d(p_i, p_j))`.
pub fn gram_matrix(
    metric: &Metric<'_>,
    f: &CompletelyMonotone,
    points: &[GraphPoint],
) -> Result<DMatrix<f64>> {
    f.validate()?;
    let d = metric.distance_matrix(points)?;
    let n = points.len();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = f.psi(d[(i, j)])?;
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    Ok(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PdClass {
    StrictlyPd,
    Psd,
    Indefinite,
}

impl fmt::Display for PdClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PdClass::StrictlyPd => "strictly_pd",
            PdClass::Psd => "psd",
            PdClass::Indefinite => "indefinite",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PdReport {
    pub class: PdClass,
    pub min_eigenvalue: f64,
    pub tolerance: f64,
}

/// Classify a symmetric matrix by its smallest eigenvalue, using the
/// tolerance `1e-8 * n * max|eigenvalue|`.
pub fn pd_check(g: &DMatrix<f64>) -> Result<PdReport> {
    check_symmetric(g)?;
    let n = g.nrows();
    if n == 0 {
        return Err(Error::Precondition("empty matrix".into()));
    }
    let eig = SymmetricEigen::new(g.clone()).eigenvalues;
    let min = eig.min();
    let norm = eig.amax();
    let tolerance = 1e-8 * n as f64 * norm;
    let class = if min > tolerance {
        PdClass::StrictlyPd
    } else if min >= -tolerance {
        PdClass::Psd
    } else {
        PdClass::Indefinite
    };
    Ok(PdReport {
        class,
        min_eigenvalue: min,
        tolerance,
    })
}
