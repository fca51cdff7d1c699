//! Quantum-jump (Monte Carlo wave-function) unraveling.
//!
//! The system Hamiltonian is diagonal in the configuration basis, so the
//! no-jump evolution under `H_eff = H − (i/2) Σ L†L` only rescales each
//! amplitude by `exp((−iE_σ − Γ_σ/2) t)`. The survival probability is
//! then a finite sum of exponentials and jump times are drawn by exact
//! inversion instead of small fixed steps.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::master::TimeGrid;
use super::state::StateVector;
use crate::error::{Error, Result};
use crate::liouvillian::LindbladModel;

/// Number and seeding of trajectories. Trajectory `i` draws from the
/// ChaCha8 stream `i` under key `seed`, so results do not depend on how
/// the work is scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrajectoryPlan {
    pub n_traj: usize,
    pub seed: u64,
}

impl TrajectoryPlan {
    pub fn new(n_traj: usize, seed: u64) -> Result<Self> {
        if n_traj == 0 {
            return Err(Error::InvalidParameter("need at least one trajectory".into()));
        }
        Ok(Self { n_traj, seed })
    }

    pub fn rng(&self, index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        rng
    }
}

/// A quantum jump: node flipped and direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JumpEvent {
    pub node: usize,
    pub raising: bool,
}

/// State of one trajectory between jumps.
#[derive(Debug, Clone)]
pub struct Unraveling<'m> {
    model: &'m LindbladModel,
    amplitudes: Vec<Complex64>,
    time: f64,
}

impl<'m> Unraveling<'m> {
    pub fn new(model: &'m LindbladModel, psi0: &StateVector, t0: f64) -> Result<Self> {
        if psi0.n_spins() != model.n_spins() {
            return Err(Error::SizeMismatch { expected: model.n_spins(), got: psi0.n_spins() });
        }
        let norm = psi0.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "initial state is not normalized (|ψ|² = {norm})"
            )));
        }
        Ok(Self { model, amplitudes: psi0.amplitudes().to_vec(), time: t0 })
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Unnormalized survival probability after `dt` without a jump.
    pub fn survival(&self, dt: f64) -> f64 {
        self.amplitudes
            .iter()
            .zip(self.model.outflow())
            .map(|(c, g)| c.norm_sqr() * (-g * dt).exp())
            .sum()
    }

    /// Waiting time `τ` with `survival(τ) = u`, for `u ∈ (0, 1]`; `None`
    /// when the state never jumps with that draw.
    ///
    /// `ln survival` is convex and decreasing, so Newton's method from
    /// `τ = 0` approaches the root monotonically from below.
    pub fn waiting_time(&self, u: f64) -> Option<f64> {
        let rates = self.model.outflow();
        let stuck: f64 = self
            .amplitudes
            .iter()
            .zip(rates)
            .filter(|(_, &g)| g == 0.0)
            .map(|(c, _)| c.norm_sqr())
            .sum();
        if u <= stuck {
            return None;
        }
        let target = u.ln();
        let mut tau = 0.0f64;
        for _ in 0..200 {
            let (mut s, mut ds) = (0.0, 0.0);
            for (c, &g) in self.amplitudes.iter().zip(rates) {
                let w = c.norm_sqr() * (-g * tau).exp();
                s += w;
                ds -= g * w;
            }
            let step = (s.ln() - target) / (ds / s);
            let next = tau - step;
            if !next.is_finite() {
                return None;
            }
            if (next - tau).abs() <= 1e-15 * next.abs().max(1e-300) {
                return Some(next);
            }
            tau = next;
        }
        Some(tau)
    }

    /// Normalized populations after a jump-free interval `dt`.
    pub fn populations_after(&self, dt: f64, out: &mut [f64]) {
        let mut total = 0.0;
        for ((o, c), g) in out.iter_mut().zip(&self.amplitudes).zip(self.model.outflow()) {
            *o = c.norm_sqr() * (-g * dt).exp();
            total += *o;
        }
        out.iter_mut().for_each(|x| *x /= total);
    }

    /// Jump-free evolution over `dt`, renormalized.
    pub fn drift(&mut self, dt: f64) {
        let energies = self.model.energies();
        let rates = self.model.outflow();
        for (k, c) in self.amplitudes.iter_mut().enumerate() {
            *c *= Complex64::new(-0.5 * rates[k] * dt, -energies[k] * dt).exp();
        }
        self.normalize();
        self.time += dt;
    }

    fn normalize(&mut self) {
        let norm = self.amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        self.amplitudes.iter_mut().for_each(|c| *c /= norm);
    }

    /// Applies the jump operator selected by `v ∈ [0, 1)` among
    /// `L_{n,±}` in proportion to `‖L ψ‖²`.
    pub fn jump(&mut self, v: f64) -> JumpEvent {
        let n = self.model.n_spins();
        let mut weights = Vec::with_capacity(2 * n);
        for node in 0..n {
            for raising in [true, false] {
                let w: f64 = self
                    .amplitudes
                    .iter()
                    .enumerate()
                    .filter(|(a, _)| ((a >> node) & 1 == 0) == raising)
                    .map(|(a, c)| self.model.rate(a, node) * c.norm_sqr())
                    .sum();
                weights.push((JumpEvent { node, raising }, w));
            }
        }
        let total: f64 = weights.iter().map(|(_, w)| w).sum();
        let mut threshold = v * total;
        let mut chosen = weights.last().expect("at least one spin").0;
        for (ev, w) in &weights {
            if *w > 0.0 && threshold < *w {
                chosen = *ev;
                break;
            }
            threshold -= w;
        }
        let JumpEvent { node, raising } = chosen;
        let mut next = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        for (a, c) in self.amplitudes.iter().enumerate() {
            if ((a >> node) & 1 == 0) == raising {
                next[a ^ (1 << node)] = *c * self.model.rate(a, node).sqrt();
            }
        }
        self.amplitudes = next;
        self.normalize();
        chosen
    }
}

/// Trajectory-averaged populations with standard errors.
#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryAverage {
    pub times: Vec<f64>,
    /// `[sample][config]`
    pub mean: Vec<Vec<f64>>,
    /// Standard error of the mean, `[sample][config]`.
    pub std_err: Vec<Vec<f64>>,
    pub n_traj: usize,
    pub total_jumps: u64,
}

struct Moments {
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
    jumps: u64,
}

const CHUNK: usize = 64;

/// Averages `plan.n_traj` unravelings of the master equation from `psi0`.
///
/// Trajectories are processed in fixed chunks of consecutive indices and
/// the chunk results are summed in index order, so the output is
/// bitwise reproducible for any thread count.
pub fn run_trajectories(
    model: &LindbladModel,
    psi0: &StateVector,
    grid: &TimeGrid,
    plan: &TrajectoryPlan,
) -> Result<TrajectoryAverage> {
    Unraveling::new(model, psi0, grid.t0())?;
    let dim = model.dim();
    let n_samples = grid.samples().len();
    let size = dim * n_samples;
    let n_chunks = plan.n_traj.div_ceil(CHUNK);
    let chunks: Vec<Moments> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut m = Moments { sum: vec![0.0; size], sum_sq: vec![0.0; size], jumps: 0 };
            let mut buf = vec![0.0; size];
            for i in c * CHUNK..((c + 1) * CHUNK).min(plan.n_traj) {
                let mut rng = plan.rng(i);
                m.jumps += single_trajectory(model, psi0, grid, &mut rng, &mut buf);
                for ((s, q), x) in m.sum.iter_mut().zip(&mut m.sum_sq).zip(&buf) {
                    *s += x;
                    *q += x * x;
                }
            }
            m
        })
        .collect();

    let mut sum = vec![0.0; size];
    let mut sum_sq = vec![0.0; size];
    let mut total_jumps = 0;
    for m in &chunks {
        sum.iter_mut().zip(&m.sum).for_each(|(a, b)| *a += b);
        sum_sq.iter_mut().zip(&m.sum_sq).for_each(|(a, b)| *a += b);
        total_jumps += m.jumps;
    }
    let n = plan.n_traj as f64;
    let mut mean = Vec::with_capacity(n_samples);
    let mut std_err = Vec::with_capacity(n_samples);
    for k in 0..n_samples {
        let row = k * dim..(k + 1) * dim;
        let mu: Vec<f64> = sum[row.clone()].iter().map(|s| s / n).collect();
        let se: Vec<f64> = sum_sq[row]
            .iter()
            .zip(&mu)
            .map(|(q, m)| {
                if plan.n_traj < 2 {
                    return 0.0;
                }
                let var = ((q - n * m * m) / (n - 1.0)).max(0.0);
                (var / n).sqrt()
            })
            .collect();
        mean.push(mu);
        std_err.push(se);
    }
    Ok(TrajectoryAverage { times: grid.samples().to_vec(), mean, std_err, n_traj: plan.n_traj, total_jumps })
}

/// Fills `out[sample * dim + config]` with one trajectory's populations and
/// returns its number of jumps.
fn single_trajectory(
    model: &LindbladModel,
    psi0: &StateVector,
    grid: &TimeGrid,
    rng: &mut ChaCha8Rng,
    out: &mut [f64],
) -> u64 {
    let dim = model.dim();
    let samples = grid.samples();
    let mut traj = Unraveling::new(model, psi0, grid.t0()).expect("validated by caller");
    let mut next = 0;
    let mut jumps = 0;
    while next < samples.len() {
        let u = 1.0 - rng.random::<f64>();
        let wait = traj.waiting_time(u).unwrap_or(f64::INFINITY);
        let t_jump = traj.time() + wait;
        while next < samples.len() && samples[next] < t_jump {
            let dt = samples[next] - traj.time();
            traj.populations_after(dt, &mut out[next * dim..(next + 1) * dim]);
            next += 1;
        }
        if next == samples.len() {
            break;
        }
        traj.drift(wait);
        traj.jump(rng.random::<f64>());
        jumps += 1;
    }
    jumps
}
