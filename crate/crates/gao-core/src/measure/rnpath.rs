//! Radon-Nikodym-weighted path oracle.
//!
//! Simulates the state under the risk-neutral dynamics, accumulates the
//! discount integral along each path and weights the terminal payoff by
//! `exp(-int (r + mu)) / P(0, T)`. The estimator depends on no
//! transformed-parameter algebra at all, which is what makes it the final
//! arbiter for every terminal-law construction in this crate.
//!
//! Paths are simulated in fixed-size batches, one ChaCha stream per batch,
//! and batch moments are merged in batch order: results are bit-identical
//! for a fixed seed regardless of the worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::affine::{szcb_price, CirModel, Model, WishartModel};
use crate::error::{Error, Result};
use crate::numerics::{jacobi_eigen, Matrix, SymMatrix};

pub(crate) const BATCH_SIZE: usize = 256;

/// Streaming mean/variance accumulator with an exact merge, so constant
/// payoffs report a standard error of exactly zero.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Welford {
    pub n: usize,
    pub mean: f64,
    pub m2: f64,
}

impl Welford {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Welford) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n1 = self.n as f64;
        let n2 = other.n as f64;
        let delta = other.mean - self.mean;
        let n = n1 + n2;
        self.mean += delta * n2 / n;
        self.m2 += other.m2 + delta * delta * n1 * n2 / n;
        self.n += other.n;
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        if self.n < 2 {
            return f64::INFINITY;
        }
        (self.m2 / (self.n as f64 - 1.0) / self.n as f64).max(0.0).sqrt()
    }
}

/// Terminal state of one simulated path.
#[derive(Clone, Debug)]
pub enum TerminalState {
    Cir(Vec<f64>),
    Wishart(Matrix),
}

#[derive(Clone, Copy, Debug)]
pub struct PathConfig {
    pub n_paths: usize,
    pub n_steps_per_year: usize,
    pub seed: u64,
}

impl PathConfig {
    pub fn new(n_paths: usize, n_steps_per_year: usize, seed: u64) -> Result<Self> {
        if n_paths < 100 {
            return Err(Error::invalid("path oracle needs at least 100 paths"));
        }
        if n_steps_per_year < 50 {
            return Err(Error::invalid("path oracle needs at least 50 steps per year"));
        }
        Ok(PathConfig { n_paths, n_steps_per_year, seed })
    }
}

/// Estimates `E~[payoff(X_T)]` under the transformed measure together with
/// its standard error.
pub fn rn_path_expectation<F>(
    model: &Model,
    horizon: f64,
    payoff: F,
    cfg: &PathConfig,
) -> Result<(f64, f64)>
where
    F: Fn(&TerminalState) -> f64 + Sync,
{
    let p0 = szcb_price(model, horizon)?;
    let n_steps = (horizon * cfg.n_steps_per_year as f64).ceil() as usize;
    let n_batches = cfg.n_paths.div_ceil(BATCH_SIZE);

    let batch_moments: Vec<Result<Welford>> = (0..n_batches)
        .into_par_iter()
        .map(|batch| {
            let in_batch = if batch == n_batches - 1 {
                cfg.n_paths - batch * BATCH_SIZE
            } else {
                BATCH_SIZE
            };
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(batch as u64);
            let mut acc = Welford::default();
            for _ in 0..in_batch {
                let (state, discount_integral) = match model {
                    Model::Cir(m) => simulate_cir(m, horizon, n_steps, &mut rng)?,
                    Model::Wishart(m) => simulate_wishart(m, horizon, n_steps, &mut rng)?,
                };
                let weight = (-discount_integral).exp() / p0;
                acc.push(weight * payoff(&state));
            }
            Ok(acc)
        })
        .collect();

    let mut total = Welford::default();
    for m in batch_moments {
        total.merge(&m?);
    }
    Ok((total.mean, total.std_error()))
}

/// Terminal states with their Radon-Nikodym weights, for distributional
/// diagnostics (weight-resampling, Kolmogorov-Smirnov checks).
pub fn rn_path_terminal_samples(
    model: &Model,
    horizon: f64,
    cfg: &PathConfig,
) -> Result<(Vec<TerminalState>, Vec<f64>)> {
    let p0 = szcb_price(model, horizon)?;
    let n_steps = (horizon * cfg.n_steps_per_year as f64).ceil() as usize;
    let n_batches = cfg.n_paths.div_ceil(BATCH_SIZE);
    let batches: Vec<Result<Vec<(TerminalState, f64)>>> = (0..n_batches)
        .into_par_iter()
        .map(|batch| {
            let in_batch = if batch == n_batches - 1 {
                cfg.n_paths - batch * BATCH_SIZE
            } else {
                BATCH_SIZE
            };
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(batch as u64);
            let mut out = Vec::with_capacity(in_batch);
            for _ in 0..in_batch {
                let (state, discount_integral) = match model {
                    Model::Cir(m) => simulate_cir(m, horizon, n_steps, &mut rng)?,
                    Model::Wishart(m) => simulate_wishart(m, horizon, n_steps, &mut rng)?,
                };
                out.push((state, (-discount_integral).exp() / p0));
            }
            Ok(out)
        })
        .collect();
    let mut states = Vec::with_capacity(cfg.n_paths);
    let mut weights = Vec::with_capacity(cfg.n_paths);
    for b in batches {
        for (s, w) in b? {
            states.push(s);
            weights.push(w);
        }
    }
    Ok((states, weights))
}

/// Full-truncation Euler for the square-root factors; the negative part is
/// zeroed in the diffusion argument only.
fn simulate_cir(
    model: &CirModel,
    horizon: f64,
    n_steps: usize,
    rng: &mut impl Rng,
) -> Result<(TerminalState, f64)> {
    let h = horizon / n_steps as f64;
    let sqrt_h = h.sqrt();
    let loadings = model.discount_loadings();
    let mut x: Vec<f64> = model.factors.iter().map(|f| f.x0).collect();
    let shift = model.r_bar + model.mu_bar;
    let rate = |x: &[f64]| {
        shift + loadings.iter().zip(x).map(|(u, xi)| u * xi).sum::<f64>()
    };
    let mut integral = 0.0;
    let mut prev_rate = rate(&x);
    for step in 0..n_steps {
        for (f, xi) in model.factors.iter().zip(x.iter_mut()) {
            let z: f64 = StandardNormal.sample(rng);
            let pos = xi.max(0.0);
            *xi += f.k * (f.theta - *xi) * h + f.sigma * pos.sqrt() * sqrt_h * z;
        }
        let r = rate(&x);
        integral += 0.5 * (prev_rate + r) * h;
        prev_rate = r;
        if !integral.is_finite() {
            return Err(Error::NumericalBlowup { step, t: (step + 1) as f64 * h });
        }
    }
    Ok((TerminalState::Cir(x), integral))
}

/// Euler scheme with a symmetric eigenvalue-floor projection each step.
fn simulate_wishart(
    model: &WishartModel,
    horizon: f64,
    n_steps: usize,
    rng: &mut impl Rng,
) -> Result<(TerminalState, f64)> {
    if model.dim() == 2 {
        return simulate_wishart_2x2(model, horizon, n_steps, rng);
    }
    simulate_wishart_generic(model, horizon, n_steps, rng)
}

/// Dimension-generic variant; the 2x2 fast path must stay numerically
/// equivalent to this one.
fn simulate_wishart_generic(
    model: &WishartModel,
    horizon: f64,
    n_steps: usize,
    rng: &mut impl Rng,
) -> Result<(TerminalState, f64)> {
    let d = model.dim();
    let h = horizon / n_steps as f64;
    let sqrt_h = h.sqrt();
    let qtq = model.qtq();
    let drift0 = qtq.scaled(model.beta);
    let loading = model.discount_loading();
    let shift = model.r_bar + model.mu_bar;
    let rate = |x: &Matrix| shift + loading.as_matrix().frobenius_dot(x);

    let mut x = model.x0.as_matrix().clone();
    let mut integral = 0.0;
    let mut prev_rate = rate(&x);
    let mut dw = Matrix::zeros(d, d);
    for step in 0..n_steps {
        let root = psd_sqrt_floor(&x);
        for i in 0..d {
            for j in 0..d {
                let z: f64 = StandardNormal.sample(rng);
                dw[(i, j)] = sqrt_h * z;
            }
        }
        let noise_half = root.matmul(&dw).matmul(&model.q);
        let mut next = x.clone();
        next.axpy_inplace(h, &drift0);
        next.axpy_inplace(h, &model.h.matmul(&x));
        next.axpy_inplace(h, &x.matmul(&model.h.transpose()));
        next.axpy_inplace(1.0, &noise_half);
        next.axpy_inplace(1.0, &noise_half.transpose());
        x = project_psd(&next);
        let r = rate(&x);
        integral += 0.5 * (prev_rate + r) * h;
        prev_rate = r;
        if !integral.is_finite() || !x.all_finite() {
            return Err(Error::NumericalBlowup { step, t: (step + 1) as f64 * h });
        }
    }
    Ok((TerminalState::Wishart(x), integral))
}

/// Allocation-free 2x2 specialization of the Wishart Euler scheme; the
/// symmetric state is carried as `(a, b, c)` with closed-form square root
/// `sqrt(M) = (M + sqrt(det) I) / sqrt(tr + 2 sqrt(det))` and closed-form
/// eigenvalue flooring.
fn simulate_wishart_2x2(
    model: &WishartModel,
    horizon: f64,
    n_steps: usize,
    rng: &mut impl Rng,
) -> Result<(TerminalState, f64)> {
    let h = horizon / n_steps as f64;
    let sqrt_h = h.sqrt();
    let q = [model.q[(0, 0)], model.q[(0, 1)], model.q[(1, 0)], model.q[(1, 1)]];
    let hm = [model.h[(0, 0)], model.h[(0, 1)], model.h[(1, 0)], model.h[(1, 1)]];
    // Q^T Q as (a, b, c)
    let qtq = [
        q[0] * q[0] + q[2] * q[2],
        q[0] * q[1] + q[2] * q[3],
        q[1] * q[1] + q[3] * q[3],
    ];
    let beta = model.beta;
    let loading = model.discount_loading();
    let (la, lb, lc) = (loading[(0, 0)], loading[(0, 1)], loading[(1, 1)]);
    let shift = model.r_bar + model.mu_bar;

    let (mut a, mut b, mut c) =
        (model.x0[(0, 0)], model.x0[(0, 1)], model.x0[(1, 1)]);
    let rate =
        |a: f64, b: f64, c: f64| shift + la * a + 2.0 * lb * b + lc * c;
    let mut integral = 0.0;
    let mut prev_rate = rate(a, b, c);
    for step in 0..n_steps {
        // closed-form sqrt of the PSD state
        let det = (a * c - b * b).max(0.0);
        let s = det.sqrt();
        let denom = a + c + 2.0 * s;
        let (ra, rb, rc) = if denom > 0.0 {
            let inv = 1.0 / denom.sqrt();
            ((a + s) * inv, b * inv, (c + s) * inv)
        } else {
            (0.0, 0.0, 0.0)
        };

        let z00: f64 = StandardNormal.sample(rng);
        let z01: f64 = StandardNormal.sample(rng);
        let z10: f64 = StandardNormal.sample(rng);
        let z11: f64 = StandardNormal.sample(rng);
        // N = sqrt(X) dW Q, noise = N + N^T
        let w00 = sqrt_h * z00;
        let w01 = sqrt_h * z01;
        let w10 = sqrt_h * z10;
        let w11 = sqrt_h * z11;
        let t00 = ra * w00 + rb * w10;
        let t01 = ra * w01 + rb * w11;
        let t10 = rb * w00 + rc * w10;
        let t11 = rb * w01 + rc * w11;
        let n00 = t00 * q[0] + t01 * q[2];
        let n01 = t00 * q[1] + t01 * q[3];
        let n10 = t10 * q[0] + t11 * q[2];
        let n11 = t10 * q[1] + t11 * q[3];

        // drift beta Q^T Q + H X + X H^T
        let hx00 = hm[0] * a + hm[1] * b;
        let hx01 = hm[0] * b + hm[1] * c;
        let hx10 = hm[2] * a + hm[3] * b;
        let hx11 = hm[2] * b + hm[3] * c;
        let da = beta * qtq[0] + 2.0 * hx00;
        let db = beta * qtq[1] + hx01 + hx10;
        let dc = beta * qtq[2] + 2.0 * hx11;

        a += da * h + 2.0 * n00;
        b += db * h + n01 + n10;
        c += dc * h + 2.0 * n11;

        // eigenvalue floor at zero
        let tr = a + c;
        let disc = ((a - c) * (a - c) + 4.0 * b * b).sqrt();
        let lam_min = 0.5 * (tr - disc);
        if lam_min < 0.0 {
            let lam_max = (0.5 * (tr + disc)).max(0.0);
            // eigenvector of lam_max
            let (vx, vy) = if b.abs() > 1e-300 {
                (b, 0.5 * (tr + disc) - a)
            } else if a >= c {
                (1.0, 0.0)
            } else {
                (0.0, 1.0)
            };
            let norm = (vx * vx + vy * vy).sqrt();
            let (vx, vy) = (vx / norm, vy / norm);
            a = lam_max * vx * vx;
            b = lam_max * vx * vy;
            c = lam_max * vy * vy;
        }

        let r = rate(a, b, c);
        integral += 0.5 * (prev_rate + r) * h;
        prev_rate = r;
        if !integral.is_finite() {
            return Err(Error::NumericalBlowup { step, t: (step + 1) as f64 * h });
        }
    }
    let mut x = Matrix::zeros(2, 2);
    x[(0, 0)] = a;
    x[(0, 1)] = b;
    x[(1, 0)] = b;
    x[(1, 1)] = c;
    Ok((TerminalState::Wishart(x), integral))
}

fn psd_sqrt_floor(x: &Matrix) -> Matrix {
    let sym = SymMatrix::symmetrized(x).expect("state stays symmetric");
    let (vals, vecs) = jacobi_eigen(&sym);
    let d = x.rows();
    let mut out = Matrix::zeros(d, d);
    for k in 0..d {
        let lam = vals[k].max(0.0).sqrt();
        if lam == 0.0 {
            continue;
        }
        for i in 0..d {
            for j in 0..d {
                out[(i, j)] += lam * vecs[(i, k)] * vecs[(j, k)];
            }
        }
    }
    out
}

fn project_psd(x: &Matrix) -> Matrix {
    let sym = SymMatrix::symmetrized(x).expect("state stays symmetric");
    let (vals, vecs) = jacobi_eigen(&sym);
    if vals.iter().all(|v| *v >= 0.0) {
        return sym.into_matrix();
    }
    let d = x.rows();
    let mut out = Matrix::zeros(d, d);
    for k in 0..d {
        let lam = vals[k].max(0.0);
        if lam == 0.0 {
            continue;
        }
        for i in 0..d {
            for j in 0..d {
                out[(i, j)] += lam * vecs[(i, k)] * vecs[(j, k)];
            }
        }
    }
    out
}
