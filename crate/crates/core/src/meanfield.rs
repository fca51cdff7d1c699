//! Birth–death reduction of the population dynamics onto the number of up
//! spins, plus the configuration-level identities it rests on.

use serde::Serialize;

use crate::analysis::TimeSeries;
use crate::bath::BathSpec;
use crate::dynamics::ode::{integrate, Tolerance};
use crate::dynamics::TimeGrid;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spin::{ModelParams, SpinConfig};

/// Homogeneous network of `n` spins with coordination number `z`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanFieldModel {
    n: usize,
    z: f64,
    params: ModelParams,
    bath: BathSpec,
}

/// Mean-field edge counts for a given `N↑`; real valued.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairCounts {
    pub up_up: f64,
    pub down_down: f64,
    pub up_down: f64,
}

impl PairCounts {
    pub fn total(&self) -> f64 {
        self.up_up + self.down_down + self.up_down
    }
}

/// Per-spin flip rates of the reduced chain, indexed by `N↑`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReducedRates {
    /// `W_{n+1,n}`; the entry at `n = N` is zero.
    pub up: Vec<f64>,
    /// `W_{n−1,n}`; the entry at `n = 0` is zero.
    pub down: Vec<f64>,
}

impl MeanFieldModel {
    /// `z` may exceed `N − 1`: the reduction reproduces `K_N` exactly only
    /// at `z = N`, where the energies differ from the exact ones by the
    /// constant `JN/2`.
    pub fn new(n: usize, z: f64, params: ModelParams, bath: BathSpec) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("mean-field model needs at least one spin".into()));
        }
        if !(z > 0.0 && z <= n as f64) {
            return Err(Error::InvalidParameter(format!(
                "coordination number z = {z} must lie in (0, {n}]"
            )));
        }
        Ok(Self { n, z, params, bath })
    }

    /// `N` and `z = k̄` taken from `g`.
    pub fn from_graph(g: &Graph, params: ModelParams, bath: BathSpec) -> Result<Self> {
        Self::new(g.n_nodes(), g.mean_degree(), params, bath)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn bath(&self) -> &BathSpec {
        &self.bath
    }

    fn check_count(&self, n_up: usize) -> Result<()> {
        if n_up > self.n {
            return Err(Error::InvalidParameter(format!("N↑ = {n_up} exceeds N = {}", self.n)));
        }
        Ok(())
    }

    /// `E = −(zJ/2N)(N↑ − N↓)² − h(N↑ − N↓)`.
    pub fn energy(&self, n_up: usize) -> Result<f64> {
        self.check_count(n_up)?;
        Ok(self.energy_unchecked(n_up))
    }

    fn energy_unchecked(&self, n_up: usize) -> f64 {
        let m = 2.0 * n_up as f64 - self.n as f64;
        -self.z * self.params.coupling / (2.0 * self.n as f64) * m * m - self.params.field * m
    }

    pub fn energies(&self) -> Vec<f64> {
        (0..=self.n).map(|k| self.energy_unchecked(k)).collect()
    }

    pub fn pair_counts(&self, n_up: usize) -> Result<PairCounts> {
        self.check_count(n_up)?;
        let (u, d, n) = (n_up as f64, (self.n - n_up) as f64, self.n as f64);
        Ok(PairCounts {
            up_up: self.z * u * u / (2.0 * n),
            down_down: self.z * d * d / (2.0 * n),
            up_down: self.z * u * d / n,
        })
    }

    pub fn rates(&self) -> ReducedRates {
        let e = self.energies();
        let n = self.n;
        let up = (0..=n)
            .map(|k| if k < n { self.bath.transition_rate(e[k + 1] - e[k]) } else { 0.0 })
            .collect();
        let down = (0..=n)
            .map(|k| if k > 0 { self.bath.transition_rate(e[k - 1] - e[k]) } else { 0.0 })
            .collect();
        ReducedRates { up, down }
    }

    /// Right-hand side of the birth–death master equation.
    pub fn derivative(&self, rates: &ReducedRates, p: &[f64], out: &mut [f64]) {
        let n = self.n;
        for k in 0..=n {
            let n_down = (n - k) as f64;
            let mut v = -(k as f64 * rates.down[k] + n_down * rates.up[k]) * p[k];
            if k > 0 {
                v += (n_down + 1.0) * rates.up[k - 1] * p[k - 1];
            }
            if k < n {
                v += (k as f64 + 1.0) * rates.down[k + 1] * p[k + 1];
            }
            out[k] = v;
        }
    }

    /// `P*(n) = C(N, n) e^{−βE_n} / Z`.
    pub fn stationary(&self) -> ReducedDistribution {
        let beta = self.bath.beta;
        let e = self.energies();
        let mut log_binom = 0.0;
        let mut logw = Vec::with_capacity(self.n + 1);
        for (k, ek) in e.iter().enumerate() {
            if k > 0 {
                log_binom += ((self.n - k + 1) as f64 / k as f64).ln();
            }
            logw.push(log_binom - beta * ek);
        }
        let max = logw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = logw.iter().map(|l| (l - max).exp()).collect();
        let z: f64 = w.iter().sum();
        ReducedDistribution { p: w.into_iter().map(|x| x / z).collect() }
    }

    /// Integrates the reduced chain from `p0` with the adaptive integrator.
    pub fn propagate(&self, p0: &ReducedDistribution, grid: &TimeGrid, tol: f64) -> Result<ReducedEvolution> {
        if p0.p.len() != self.n + 1 {
            return Err(Error::SizeMismatch { expected: self.n + 1, got: p0.p.len() });
        }
        let rates = self.rates();
        let mut distributions = Vec::with_capacity(grid.samples().len());
        integrate(
            |_, p: &[f64], dp: &mut [f64]| self.derivative(&rates, p, dp),
            &p0.p,
            grid.t0(),
            grid.samples(),
            Tolerance::uniform(tol),
            |_, p| distributions.push(p.to_vec()),
        )?;
        Ok(ReducedEvolution { n: self.n, times: grid.samples().to_vec(), distributions })
    }

    /// Node fractions, edge fractions (normalized by `zN/2`) and `M/N` for
    /// every sample of `evolution`.
    pub fn observables(&self, evolution: &ReducedEvolution) -> Result<MeanFieldObservables> {
        if evolution.n != self.n {
            return Err(Error::SizeMismatch { expected: self.n, got: evolution.n });
        }
        let n = self.n as f64;
        let edges = self.z * n / 2.0;
        let pairs: Vec<PairCounts> = (0..=self.n).map(|k| self.pair_counts(k)).collect::<Result<_>>()?;
        let mut obs = MeanFieldObservables { times: evolution.times.clone(), ..Default::default() };
        for p in &evolution.distributions {
            let mean_up: f64 = p.iter().enumerate().map(|(k, w)| k as f64 * w).sum();
            let total: f64 = p.iter().sum();
            let weighted = |f: fn(&PairCounts) -> f64| -> f64 {
                p.iter().zip(&pairs).map(|(w, c)| w * f(c)).sum::<f64>() / edges
            };
            obs.up_fraction.push(mean_up / n);
            obs.down_fraction.push((n * total - mean_up) / n);
            obs.up_up_fraction.push(weighted(|c| c.up_up));
            obs.down_down_fraction.push(weighted(|c| c.down_down));
            obs.up_down_fraction.push(weighted(|c| c.up_down));
            obs.magnetization.push((2.0 * mean_up - n * total) / n);
            obs.total_probability.push(total);
        }
        Ok(obs)
    }
}

/// Probabilities over `N↑ = 0..=N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReducedDistribution {
    p: Vec<f64>,
}

impl ReducedDistribution {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() || p.iter().any(|x| !(*x >= 0.0)) {
            return Err(Error::InvalidParameter("probabilities must be non-negative".into()));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("probabilities sum to {total}, not 1")));
        }
        Ok(Self { p })
    }

    /// Point mass at `N↑ = n_up`.
    pub fn point(n: usize, n_up: usize) -> Result<Self> {
        if n_up > n {
            return Err(Error::InvalidParameter(format!("N↑ = {n_up} exceeds N = {n}")));
        }
        let mut p = vec![0.0; n + 1];
        p[n_up] = 1.0;
        Ok(Self { p })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    pub fn mean_up(&self) -> f64 {
        self.p.iter().enumerate().map(|(k, w)| k as f64 * w).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReducedEvolution {
    pub n: usize,
    pub times: Vec<f64>,
    /// `[sample][N↑]`
    pub distributions: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MeanFieldObservables {
    pub times: Vec<f64>,
    pub up_fraction: Vec<f64>,
    pub down_fraction: Vec<f64>,
    pub up_up_fraction: Vec<f64>,
    pub down_down_fraction: Vec<f64>,
    pub up_down_fraction: Vec<f64>,
    /// `⟨N↑ − N↓⟩ / N`
    pub magnetization: Vec<f64>,
    pub total_probability: Vec<f64>,
}

/// Sums full-configuration populations into `P(N↑)`.
pub fn bin_by_up_count(populations: &[f64], n_spins: usize) -> Result<Vec<f64>> {
    if populations.len() != 1 << n_spins {
        return Err(Error::SizeMismatch { expected: 1 << n_spins, got: populations.len() });
    }
    let mut out = vec![0.0; n_spins + 1];
    for (a, p) in populations.iter().enumerate() {
        out[a.count_ones() as usize] += p;
    }
    Ok(out)
}

/// Per-node neighbourhood averages `s̄_i(t) = ⟨(1/k_i) Σ_j A_ij σ_j⟩` and the
/// global `M(t)/N`.
#[derive(Debug, Clone, Serialize)]
pub struct LocalMagnetization {
    pub nodes: Vec<TimeSeries>,
    pub global: TimeSeries,
}

impl LocalMagnetization {
    /// Largest L∞ distance between any two node curves.
    pub fn max_pairwise_gap(&self) -> f64 {
        let mut gap = 0.0f64;
        for (i, a) in self.nodes.iter().enumerate() {
            for b in &self.nodes[i + 1..] {
                for (x, y) in a.values.iter().zip(&b.values) {
                    gap = gap.max((x - y).abs());
                }
            }
        }
        gap
    }

    /// Largest L∞ distance between a node curve and the global curve.
    pub fn max_gap_to_global(&self) -> f64 {
        self.nodes
            .iter()
            .flat_map(|s| s.values.iter().zip(&self.global.values).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }
}

pub fn local_magnetization(times: &[f64], populations: &[Vec<f64>], g: &Graph) -> Result<LocalMagnetization> {
    let n = g.n_nodes();
    let degrees = g.degrees();
    if let Some(i) = degrees.iter().position(|&k| k == 0) {
        return Err(Error::InvalidGraph(format!("node {i} is isolated; its local magnetization is undefined")));
    }
    let configs: Vec<SpinConfig> = SpinConfig::all(n).collect();
    let mut nodes = Vec::with_capacity(n);
    for i in 0..n {
        let local: Vec<f64> = configs
            .iter()
            .map(|s| g.neighbors(i).map(|j| f64::from(s.spin(j))).sum::<f64>() / degrees[i] as f64)
            .collect();
        nodes.push(weighted_series(format!("node{i}"), times, populations, &local)?);
    }
    let global: Vec<f64> =
        configs.iter().map(|s| (0..n).map(|i| f64::from(s.spin(i))).sum::<f64>() / n as f64).collect();
    let global = weighted_series("global", times, populations, &global)?;
    Ok(LocalMagnetization { nodes, global })
}

fn weighted_series(label: impl Into<String>, times: &[f64], populations: &[Vec<f64>], o: &[f64]) -> Result<TimeSeries> {
    let mut values = Vec::with_capacity(populations.len());
    for p in populations {
        if p.len() != o.len() {
            return Err(Error::SizeMismatch { expected: o.len(), got: p.len() });
        }
        values.push(p.iter().zip(o).map(|(a, b)| a * b).sum());
    }
    TimeSeries::new(label, times.to_vec(), values)
}

/// Integer degree sums of one configuration, from which the exact
/// (pre-approximation) relations between node, degree and pair counts
/// follow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DegreeSums {
    /// `Σ_{i↑} k_i`
    pub up_degree: i64,
    /// `Σ_{i↓} k_i`
    pub down_degree: i64,
    /// `Σ_i k_i σ_i`
    pub spin_weighted: i64,
    /// `Σ_i Σ_j A_ij σ_j`, i.e. `Σ_i k_i s̄_i`.
    pub neighbour_total: i64,
    /// `Σ_{i↑} Σ_j A_ij σ_j`
    pub neighbour_up: i64,
    /// `Σ_{i↓} Σ_j A_ij σ_j`
    pub neighbour_down: i64,
}

pub fn degree_sums(g: &Graph, s: SpinConfig) -> Result<DegreeSums> {
    if s.n_spins() != g.n_nodes() {
        return Err(Error::SizeMismatch { expected: g.n_nodes(), got: s.n_spins() });
    }
    let mut out = DegreeSums {
        up_degree: 0,
        down_degree: 0,
        spin_weighted: 0,
        neighbour_total: 0,
        neighbour_up: 0,
        neighbour_down: 0,
    };
    for i in 0..g.n_nodes() {
        let k = g.neighbors(i).count() as i64;
        let local: i64 = g.neighbors(i).map(|j| i64::from(s.spin(j))).sum();
        out.spin_weighted += k * i64::from(s.spin(i));
        out.neighbour_total += local;
        if s.is_up(i) {
            out.up_degree += k;
            out.neighbour_up += local;
        } else {
            out.down_degree += k;
            out.neighbour_down += local;
        }
    }
    Ok(out)
}
