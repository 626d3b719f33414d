//! Gaussian field draws and a pathwise Monte Carlo check of the variogram.
//!
//! [`sample_field`] factorises the closed-form covariance matrix.
//! [`PathwiseSimulator`] instead builds every component of the field from
//! its construction (vertex vector, Brownian bridges on a grid, Wiener path)
//! and never evaluates the covariance formula, so it can serve as an
//! independent oracle for [`Metric::dist`].

use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, GraphPoint, VertexId};
use crate::lifespan::LifeId;
use crate::metric::{Decomposed, Metric};
use crate::spectral::{laplacian, RANK_TOL};

/// Number of grid steps used for each Brownian path on `[0, 1]`.
pub const BRIDGE_GRID: usize = 512;

/// Jitter levels, relative to the largest diagonal entry, tried in turn when
/// a covariance matrix fails to factorise.
const JITTER: [f64; 5] = [1e-12, 1e-11, 1e-10, 1e-9, 1e-8];

/// Generator for one field component of one draw. Streams make every draw
/// reproducible regardless of the order in which draws are evaluated.
fn stream_rng(seed: u64, component: u64, draw: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ component.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    rng.set_stream(draw);
    rng
}

fn normals(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleBatch {
    pub points: Vec<GraphPoint>,
    /// One row per draw, one column per point.
    pub draws: DMatrix<f64>,
    pub seed: u64,
}

/// Lower-triangular factor of a PSD matrix, escalating diagonal jitter when
/// plain Cholesky fails.
pub fn jittered_cholesky(k: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if let Some(c) = k.clone().cholesky() {
        return Ok(c.l());
    }
    let scale = k.diagonal().amax().max(f64::MIN_POSITIVE);
    for eps in JITTER {
        let mut kj = k.clone();
        for i in 0..kj.nrows() {
            kj[(i, i)] += eps * scale;
        }
        if let Some(c) = kj.cholesky() {
            return Ok(c.l());
        }
    }
    Err(Error::NotPositiveSemidefinite(JITTER[JITTER.len() - 1]))
}

/// Draw `n_draws` realisations of the field at `points` from the closed-form
/// covariance. Canonically equal points share a column source, so their
/// draws coincide exactly.
pub fn sample_field(
    metric: &Metric<'_>,
    points: &[GraphPoint],
    n_draws: usize,
    seed: u64,
) -> Result<SampleBatch> {
    if n_draws == 0 {
        return Err(Error::Precondition("n_draws must be at least 1".into()));
    }
    let g = metric.graph();
    let canonical: Vec<GraphPoint> = points
        .iter()
        .map(|p| g.canonical_point(p))
        .collect::<Result<_>>()?;
    let mut unique: Vec<GraphPoint> = Vec::new();
    let column: Vec<usize> = canonical
        .iter()
        .map(|p| match unique.iter().position(|q| q == p) {
            Some(i) => i,
            None => {
                unique.push(*p);
                unique.len() - 1
            }
        })
        .collect();

    let k = metric.covariance_matrix(&unique)?;
    let l = jittered_cholesky(&k)?;
    let m = unique.len();
    let rows: Vec<Vec<f64>> = (0..n_draws)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(seed, 0, r as u64);
            let xi = nalgebra::DVector::from_vec(normals(&mut rng, m));
            let z = &l * xi;
            column.iter().map(|&c| z[c]).collect()
        })
        .collect();
    let draws = DMatrix::from_fn(n_draws, points.len(), |r, c| rows[r][c]);
    Ok(SampleBatch {
        points: points.to_vec(),
        draws,
        seed,
    })
}

/// Monte Carlo estimate with its standard error and the discretisation
/// allowance implied by snapping bridge coordinates to the grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub standard_error: f64,
    pub allowance: f64,
}

impl McEstimate {
    /// Whether `value` lies within `k` standard errors plus the allowance.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        (self.estimate - value).abs() <= k * self.standard_error + self.allowance
    }
}

struct LifeSim {
    /// Square-root factor of the temporal correlation between member edges.
    factor: DMatrix<f64>,
    /// Needed grid indices in increasing order; always ends with the grid size.
    knots: Vec<usize>,
}

#[derive(Clone, Copy)]
struct BridgeSlot {
    life: usize,
    member: usize,
    knot: usize,
    grid: usize,
    sqrt_len: f64,
}

/// Builds the field at a fixed point set from its components.
pub struct PathwiseSimulator {
    points: Vec<Decomposed>,
    vertex_rows: Vec<(VertexId, Vec<f64>)>,
    n_factor: usize,
    lives: Vec<LifeSim>,
    slots: Vec<Option<BridgeSlot>>,
    times: Vec<f64>,
    time_index: Vec<usize>,
    beta: f64,
    allowance_lengths: Vec<f64>,
}

fn snap(delta: f64) -> usize {
    (delta * BRIDGE_GRID as f64).round() as usize
}

fn sqrt_factor(c: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(c.clone());
    let mut f = eig.eigenvectors.clone();
    for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
        let s = lambda.max(0.0).sqrt();
        for i in 0..f.nrows() {
            f[(i, j)] *= s;
        }
    }
    f
}

impl PathwiseSimulator {
    pub fn new(metric: &Metric<'_>, points: &[GraphPoint]) -> Result<Self> {
        let g = metric.graph();
        let dec: Vec<Decomposed> = points
            .iter()
            .map(|p| metric.decompose(p))
            .collect::<Result<_>>()?;
        if let Some(first) = dec.first() {
            let c = g.component_of(first.weights()[0].0);
            if dec.iter().any(|d| g.component_of(d.weights()[0].0) != c) {
                return Err(Error::DifferentComponents);
            }
        }

        // Z_V: spectral square root of L+ taken from L itself
        let eig = SymmetricEigen::new(laplacian(g).matrix);
        let max = eig.eigenvalues.amax();
        let keep: Vec<usize> = (0..eig.eigenvalues.len())
            .filter(|&i| eig.eigenvalues[i] > RANK_TOL * max)
            .collect();
        let mut involved: Vec<VertexId> = dec
            .iter()
            .flat_map(|d| d.weights().iter().map(|&(v, _)| v))
            .collect();
        involved.sort();
        involved.dedup();
        let vertex_rows = involved
            .iter()
            .map(|&v| {
                let row = keep
                    .iter()
                    .map(|&i| eig.eigenvectors[(v.0, i)] / eig.eigenvalues[i].sqrt())
                    .collect();
                (v, row)
            })
            .collect();

        // Z_E: one correlated family of Brownian paths per involved life
        let mut life_ids: Vec<LifeId> = Vec::new();
        let mut members: Vec<Vec<EdgeId>> = Vec::new();
        let mut knots: Vec<Vec<usize>> = Vec::new();
        let mut pending = Vec::new();
        let mut allowance_lengths = Vec::new();
        for d in &dec {
            let Some((e, delta)) = d.bridge else {
                pending.push(None);
                continue;
            };
            let lid = g.lives().life_of(e);
            let li = match life_ids.iter().position(|&l| l == lid) {
                Some(i) => i,
                None => {
                    life_ids.push(lid);
                    members.push(Vec::new());
                    knots.push(vec![BRIDGE_GRID]);
                    life_ids.len() - 1
                }
            };
            let member = match members[li].iter().position(|&m| m == e) {
                Some(i) => i,
                None => {
                    members[li].push(e);
                    members[li].len() - 1
                }
            };
            let grid = snap(delta);
            knots[li].push(grid);
            let len = g.edge(e).length();
            allowance_lengths.push(len);
            pending.push(Some((li, member, grid, len.sqrt())));
        }
        let mut lives = Vec::new();
        for (li, mut ks) in knots.into_iter().enumerate() {
            ks.sort_unstable();
            ks.dedup();
            ks.retain(|&k| k > 0);
            let es = &members[li];
            let c = DMatrix::from_fn(es.len(), es.len(), |i, j| {
                metric.life_correlation(es[i], es[j])
            });
            lives.push(LifeSim {
                factor: sqrt_factor(&c),
                knots: ks,
            });
        }
        let slots = pending
            .into_iter()
            .map(|p| {
                p.map(|(life, member, grid, sqrt_len)| BridgeSlot {
                    life,
                    member,
                    knot: lives[life].knots.iter().position(|&k| k == grid).unwrap_or(usize::MAX),
                    grid,
                    sqrt_len,
                })
            })
            .collect();

        // Wiener path at the sorted true times
        let mut times: Vec<f64> = dec.iter().map(|d| d.time).collect();
        times.sort_by(f64::total_cmp);
        times.dedup();
        let time_index = dec
            .iter()
            .map(|d| times.iter().position(|&t| t == d.time).expect("time listed"))
            .collect();
        let beta = match metric.params() {
            crate::metric::MetricParams::Linear { .. } => 0.0,
            crate::metric::MetricParams::Periodic { beta, .. } => beta,
        };

        Ok(Self {
            n_factor: keep.len(),
            points: dec,
            vertex_rows,
            lives,
            slots,
            times,
            time_index,
            beta,
            allowance_lengths,
        })
    }

    /// Field values at the points for draw number `draw`.
    pub fn draw(&self, seed: u64, draw: u64) -> Vec<f64> {
        let mut rng = stream_rng(seed, 0, draw);
        let xi = normals(&mut rng, self.n_factor);
        let zv: Vec<(VertexId, f64)> = self
            .vertex_rows
            .iter()
            .map(|(v, row)| (*v, row.iter().zip(&xi).map(|(a, b)| a * b).sum()))
            .collect();

        // paths[life][knot][member]
        let paths: Vec<Vec<Vec<f64>>> = self
            .lives
            .iter()
            .enumerate()
            .map(|(li, life)| {
                let mut rng = stream_rng(seed, 1 + li as u64, draw);
                let k = life.factor.nrows();
                let mut w = vec![0.0; k];
                let mut prev = 0;
                let mut out = Vec::with_capacity(life.knots.len());
                for &knot in &life.knots {
                    // sum of (knot - prev) grid increments, each N(0, C / grid)
                    let scale = ((knot - prev) as f64 / BRIDGE_GRID as f64).sqrt();
                    let z = normals(&mut rng, k);
                    for (i, wi) in w.iter_mut().enumerate() {
                        let inc: f64 = (0..k).map(|j| life.factor[(i, j)] * z[j]).sum();
                        *wi += scale * inc;
                    }
                    out.push(w.clone());
                    prev = knot;
                }
                out
            })
            .collect();

        let mut wiener = Vec::with_capacity(self.times.len());
        if self.beta > 0.0 {
            let mut rng = stream_rng(seed, 1 + self.lives.len() as u64, draw);
            let (mut t_prev, mut w) = (0.0, 0.0);
            for &t in &self.times {
                let z: f64 = StandardNormal.sample(&mut rng);
                w += (t - t_prev).sqrt() * z;
                wiener.push(w);
                t_prev = t;
            }
        }

        self.points
            .iter()
            .enumerate()
            .map(|(pi, d)| {
                let mut z: f64 = d
                    .weights()
                    .iter()
                    .map(|&(v, wt)| {
                        wt * zv.iter().find(|(u, _)| *u == v).expect("vertex row").1
                    })
                    .sum();
                if let Some(s) = self.slots[pi] {
                    let path = &paths[s.life];
                    let end = path.last().expect("grid end knot")[s.member];
                    let at = if s.grid == 0 { 0.0 } else { path[s.knot][s.member] };
                    let frac = s.grid as f64 / BRIDGE_GRID as f64;
                    z += s.sqrt_len * (at - frac * end);
                }
                if self.beta > 0.0 {
                    z += self.beta * wiener[self.time_index[pi]];
                }
                z
            })
            .collect()
    }

    /// Grid allowance `(2 / grid) * sum of lengths of edges hosting points`.
    pub fn allowance(&self) -> f64 {
        2.0 / BRIDGE_GRID as f64 * self.allowance_lengths.iter().sum::<f64>()
    }
}

fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, (var / n).sqrt())
}

/// Pathwise Monte Carlo estimate of `Var(Z(u1) - Z(u2))`.
pub fn mc_variogram(
    metric: &Metric<'_>,
    u1: &GraphPoint,
    u2: &GraphPoint,
    n_draws: usize,
    seed: u64,
) -> Result<McEstimate> {
    if n_draws == 0 {
        return Err(Error::Precondition("n_draws must be at least 1".into()));
    }
    let sim = PathwiseSimulator::new(metric, &[*u1, *u2])?;
    let squares: Vec<f64> = (0..n_draws as u64)
        .into_par_iter()
        .map(|r| {
            let z = sim.draw(seed, r);
            let x = z[0] - z[1];
            x * x
        })
        .collect();
    // the difference has mean zero, so the variance is the mean square
    let (estimate, standard_error) = mean_and_se(&squares);
    Ok(McEstimate {
        estimate,
        standard_error,
        allowance: sim.allowance(),
    })
}

/// Pathwise Monte Carlo estimate of `E[Z(u1) Z(u2)]`.
pub fn mc_covariance(
    metric: &Metric<'_>,
    u1: &GraphPoint,
    u2: &GraphPoint,
    n_draws: usize,
    seed: u64,
) -> Result<McEstimate> {
    if n_draws == 0 {
        return Err(Error::Precondition("n_draws must be at least 1".into()));
    }
    let sim = PathwiseSimulator::new(metric, &[*u1, *u2])?;
    let products: Vec<f64> = (0..n_draws as u64)
        .into_par_iter()
        .map(|r| {
            let z = sim.draw(seed, r);
            z[0] * z[1]
        })
        .collect();
    let (estimate, standard_error) = mean_and_se(&products);
    Ok(McEstimate {
        estimate,
        standard_error,
        allowance: sim.allowance(),
    })
}
