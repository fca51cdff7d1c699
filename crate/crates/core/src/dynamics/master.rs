//! Deterministic integration of the Lindblad equation.

use num_complex::Complex64;
use serde::Serialize;

use super::ode::{integrate, IntegrationStats, Tolerance};
use super::state::DensityMatrix;
use crate::error::{Error, Result};
use crate::liouvillian::LindbladModel;

/// Output sample times on `[t0, t1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeGrid {
    t0: f64,
    t1: f64,
    samples: Vec<f64>,
}

impl TimeGrid {
    /// `n_samples ≥ 2` evenly spaced times including both endpoints.
    pub fn uniform(t0: f64, t1: f64, n_samples: usize) -> Result<Self> {
        if n_samples < 2 {
            return Err(Error::InvalidParameter("a time grid needs at least two samples".into()));
        }
        let dt = (t1 - t0) / (n_samples - 1) as f64;
        let mut samples: Vec<f64> = (0..n_samples).map(|k| t0 + k as f64 * dt).collect();
        samples[n_samples - 1] = t1;
        Self::from_samples(t0, t1, samples)
    }

    pub fn from_samples(t0: f64, t1: f64, samples: Vec<f64>) -> Result<Self> {
        if !(t0 < t1) || !t0.is_finite() || !t1.is_finite() {
            return Err(Error::InvalidParameter(format!("invalid time window [{t0}, {t1}]")));
        }
        if samples.is_empty()
            || samples.windows(2).any(|w| !(w[1] > w[0]))
            || samples[0] < t0
            || samples[samples.len() - 1] > t1
        {
            return Err(Error::InvalidParameter(
                "sample times must be strictly increasing within the window".into(),
            ));
        }
        Ok(Self { t0, t1, samples })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }
}

/// Sampled states of a master-equation run.
///
/// Only the coherence sectors `{ρ_{a, a⊕d}}` that were nonzero initially
/// are stored; every other element is identically zero for all times.
#[derive(Debug, Clone)]
pub struct Evolution {
    n_spins: usize,
    times: Vec<f64>,
    /// `(d, values[sample][a])`.
    sectors: Vec<(usize, Vec<Vec<Complex64>>)>,
    stats: EvolutionStats,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct EvolutionStats {
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub evaluations: usize,
    pub sectors: usize,
    /// Largest `|ρ − ρ†|` seen before output symmetrization.
    pub raw_hermiticity_defect: f64,
}

impl Evolution {
    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn dim(&self) -> usize {
        1 << self.n_spins
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn stats(&self) -> &EvolutionStats {
        &self.stats
    }

    pub fn element(&self, sample: usize, row: usize, col: usize) -> Complex64 {
        let d = row ^ col;
        self.sectors
            .iter()
            .find(|(sd, _)| *sd == d)
            .map_or(Complex64::new(0.0, 0.0), |(_, v)| v[sample][row])
    }

    pub fn populations(&self, sample: usize) -> Vec<f64> {
        (0..self.dim()).map(|a| self.element(sample, a, a).re).collect()
    }

    /// Populations at every sample, `[sample][config]`.
    pub fn population_series(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|k| self.populations(k)).collect()
    }

    pub fn state(&self, sample: usize) -> DensityMatrix {
        let mut rho = DensityMatrix::zeros(self.n_spins).expect("size checked at construction");
        for (d, values) in &self.sectors {
            for (a, &v) in values[sample].iter().enumerate() {
                rho.set(a, a ^ d, v);
            }
        }
        rho
    }

    pub fn trace(&self, sample: usize) -> f64 {
        self.populations(sample).iter().sum()
    }
}

/// Integrates `dρ/dt` from `rho0` at `grid.t0()`, sampling at the grid
/// times. Each nonzero coherence sector is integrated independently with
/// the adaptive Dormand–Prince scheme at relative and absolute tolerance
/// `tol`; output samples are symmetrized to `(ρ + ρ†)/2`.
pub fn propagate_master(
    model: &LindbladModel,
    rho0: &DensityMatrix,
    grid: &TimeGrid,
    tol: f64,
) -> Result<Evolution> {
    check_initial(model, rho0)?;
    let dim = model.dim();
    let mut sectors = Vec::new();
    let mut stats = EvolutionStats::default();
    for d in 0..dim {
        let x0: Vec<Complex64> = (0..dim).map(|a| rho0.get(a, a ^ d)).collect();
        if x0.iter().all(|c| *c == Complex64::new(0.0, 0.0)) {
            continue;
        }
        let mut values = Vec::with_capacity(grid.samples().len());
        let s = integrate(
            |_, x: &[Complex64], dx: &mut [Complex64]| model.sector_derivative(d, x, dx),
            &x0,
            grid.t0(),
            grid.samples(),
            Tolerance::uniform(tol),
            |_, x| {
                let mut v = x.to_vec();
                for a in 0..dim {
                    let b = a ^ d;
                    stats.raw_hermiticity_defect =
                        stats.raw_hermiticity_defect.max((x[a] - x[b].conj()).norm());
                    v[a] = (x[a] + x[b].conj()) * 0.5;
                }
                values.push(v);
            },
        )?;
        accumulate(&mut stats, s);
        stats.sectors += 1;
        sectors.push((d, values));
    }
    Ok(Evolution { n_spins: model.n_spins(), times: grid.samples().to_vec(), sectors, stats })
}

/// Same evolution integrated as one dense matrix ODE with
/// [`LindbladModel::apply_generator`]. Much slower; kept as a cross-check
/// of the sector decomposition.
pub fn propagate_master_dense(
    model: &LindbladModel,
    rho0: &DensityMatrix,
    grid: &TimeGrid,
    tol: f64,
) -> Result<Vec<DensityMatrix>> {
    check_initial(model, rho0)?;
    let mut out = Vec::with_capacity(grid.samples().len());
    integrate(
        |_, x: &[Complex64], dx: &mut [Complex64]| model.apply_generator_into(x, dx),
        rho0.as_slice(),
        grid.t0(),
        grid.samples(),
        Tolerance::uniform(tol),
        |_, x| {
            let mut rho = DensityMatrix::from_row_major(model.n_spins(), x.to_vec())
                .expect("dimension fixed by the model");
            rho.hermitize();
            out.push(rho);
        },
    )?;
    Ok(out)
}

fn check_initial(model: &LindbladModel, rho0: &DensityMatrix) -> Result<()> {
    if rho0.n_spins() != model.n_spins() {
        return Err(Error::SizeMismatch { expected: model.n_spins(), got: rho0.n_spins() });
    }
    rho0.validate(1e-12, 1e-10)
}

fn accumulate(stats: &mut EvolutionStats, s: IntegrationStats) {
    stats.accepted_steps += s.accepted;
    stats.rejected_steps += s.rejected;
    stats.evaluations += s.evaluations;
}
