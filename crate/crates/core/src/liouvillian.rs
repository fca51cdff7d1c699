//! The dissipative generator of the spin network.
//!
//! Every configuration `σ` and node `n` carries one transition channel
//! `σ → σ⊕n` whose rate follows the bath's detailed-balance law at the
//! channel's energy gap. Channels are grouped into per-node raising and
//! lowering jump operators
//!
//! ```text
//! L_{n,±} = Σ_σ √γ(σ → σ⊕n) |σ⊕n⟩⟨σ|     (σ_n = ∓1)
//! ```
//!
//! so that in the configuration basis the Lindblad equation reads
//!
//! ```text
//! dρ_ab/dt = [−i(E_a − E_b) − ½(Γ_a + Γ_b)] ρ_ab
//!          + Σ_{n : a_n = b_n} √(γ(a⊕n → a) γ(b⊕n → b)) ρ_{a⊕n, b⊕n}
//! ```
//!
//! with `Γ_σ` the total outflow of `σ`. For `a = b` this is the Pauli
//! master equation. Elements with a common `d = a ⊕ b` only couple among
//! themselves, which [`LindbladModel::sector_derivative`] exploits.

use num_complex::Complex64;

use crate::bath::BathSpec;
use crate::dynamics::DensityMatrix;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spin::{check_enumerable, energies, ModelParams, SpinConfig};

/// A single-flip transition `from → to` at `node`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionChannel {
    pub from: SpinConfig,
    pub to: SpinConfig,
    pub node: usize,
    pub rate: f64,
}

/// Energies, channels and outflows for one network, coupling and bath.
#[derive(Debug, Clone)]
pub struct LindbladModel {
    graph: Graph,
    params: ModelParams,
    bath: BathSpec,
    energies: Vec<f64>,
    /// Index `from * N + node`.
    channels: Vec<TransitionChannel>,
    outflow: Vec<f64>,
    /// `√γ(σ⊕n → σ)` at index `σ * N + n`.
    sqrt_inflow: Vec<f64>,
}

impl LindbladModel {
    pub fn build(graph: &Graph, params: &ModelParams, bath: &BathSpec) -> Result<Self> {
        let n = graph.n_nodes();
        check_enumerable(n)?;
        let energies = energies(graph, params)?;
        let dim = energies.len();
        let mut channels = Vec::with_capacity(n * dim);
        let mut outflow = vec![0.0; dim];
        for (a, gamma_out) in outflow.iter_mut().enumerate() {
            let from = SpinConfig::from_index(a, n);
            for node in 0..n {
                let to = from.flipped(node);
                let rate = bath.transition_rate(energies[to.index()] - energies[a]);
                *gamma_out += rate;
                channels.push(TransitionChannel { from, to, node, rate });
            }
        }
        let mut sqrt_inflow = vec![0.0; n * dim];
        for c in &channels {
            sqrt_inflow[c.to.index() * n + c.node] = c.rate.sqrt();
        }
        Ok(Self {
            graph: graph.clone(),
            params: *params,
            bath: *bath,
            energies,
            channels,
            outflow,
            sqrt_inflow,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn bath(&self) -> &BathSpec {
        &self.bath
    }

    pub fn n_spins(&self) -> usize {
        self.graph.n_nodes()
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Channels sorted by source configuration, then node.
    pub fn channels(&self) -> &[TransitionChannel] {
        &self.channels
    }

    /// Channels leaving `from`, one per node.
    pub fn channels_from(&self, from: usize) -> &[TransitionChannel] {
        let n = self.n_spins();
        &self.channels[from * n..(from + 1) * n]
    }

    /// Rate of the flip of `node` starting at configuration index `from`.
    pub fn rate(&self, from: usize, node: usize) -> f64 {
        self.channels[from * self.n_spins() + node].rate
    }

    /// Total outflow `Γ_σ` per configuration.
    pub fn outflow(&self) -> &[f64] {
        &self.outflow
    }

    /// Energy change of flipping `node` in `s`, `2σ_n (J Σ_j A_nj σ_j + h)`.
    pub fn flip_gap(&self, s: SpinConfig, node: usize) -> f64 {
        let local: i32 = self.graph.neighbors(node).map(|j| s.spin(j)).sum();
        2.0 * f64::from(s.spin(node)) * (self.params.coupling * f64::from(local) + self.params.field)
    }

    #[inline]
    fn decay_coefficient(&self, a: usize, b: usize) -> Complex64 {
        Complex64::new(
            -0.5 * (self.outflow[a] + self.outflow[b]),
            -(self.energies[a] - self.energies[b]),
        )
    }

    /// `dρ/dt` for a full density matrix.
    pub fn apply_generator(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.n_spins() != self.n_spins() {
            return Err(Error::SizeMismatch { expected: self.n_spins(), got: rho.n_spins() });
        }
        let mut out = DensityMatrix::zeros(self.n_spins())?;
        self.apply_generator_into(rho.as_slice(), out.as_mut_slice());
        Ok(out)
    }

    /// Row-major form of [`LindbladModel::apply_generator`].
    pub(crate) fn apply_generator_into(&self, rho: &[Complex64], out: &mut [Complex64]) {
        let n = self.n_spins();
        let dim = self.dim();
        for a in 0..dim {
            let sa = &self.sqrt_inflow[a * n..(a + 1) * n];
            for b in 0..dim {
                let sb = &self.sqrt_inflow[b * n..(b + 1) * n];
                let mut acc = self.decay_coefficient(a, b) * rho[a * dim + b];
                let same = !(a ^ b);
                for node in 0..n {
                    if (same >> node) & 1 == 1 {
                        let src = (a ^ (1 << node)) * dim + (b ^ (1 << node));
                        acc += rho[src] * (sa[node] * sb[node]);
                    }
                }
                out[a * dim + b] = acc;
            }
        }
    }

    /// Derivative of the sector `x[a] = ρ_{a, a⊕d}`.
    pub fn sector_derivative(&self, d: usize, x: &[Complex64], out: &mut [Complex64]) {
        let n = self.n_spins();
        for (a, slot) in out.iter_mut().enumerate() {
            let b = a ^ d;
            let sa = &self.sqrt_inflow[a * n..(a + 1) * n];
            let sb = &self.sqrt_inflow[b * n..(b + 1) * n];
            let mut acc = self.decay_coefficient(a, b) * x[a];
            for node in 0..n {
                if (d >> node) & 1 == 0 {
                    acc += x[a ^ (1 << node)] * (sa[node] * sb[node]);
                }
            }
            *slot = acc;
        }
    }

    /// Classical generator `W` of the population sector, row-major:
    /// `W[σ'][σ] = γ(σ → σ')` for single flips, `W[σ][σ] = −Γ_σ`.
    pub fn pauli_rate_matrix(&self) -> Vec<f64> {
        let dim = self.dim();
        let mut w = vec![0.0; dim * dim];
        for c in &self.channels {
            w[c.to.index() * dim + c.from.index()] += c.rate;
        }
        for (k, g) in self.outflow.iter().enumerate() {
            w[k * dim + k] -= g;
        }
        w
    }

    /// `W p` without materializing `W`.
    pub fn pauli_derivative(&self, p: &[f64], out: &mut [f64]) {
        let n = self.n_spins();
        for (a, slot) in out.iter_mut().enumerate() {
            let mut acc = -self.outflow[a] * p[a];
            for node in 0..n {
                let s = self.sqrt_inflow[a * n + node];
                acc += s * s * p[a ^ (1 << node)];
            }
            *slot = acc;
        }
    }
}
