//! Spin configurations, Ising energies and configuration-diagonal observables.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest network for which all `2^N` configurations are materialized.
pub const ENUMERATION_CAP: usize = 20;

pub(crate) fn check_enumerable(n: usize) -> Result<()> {
    if n > ENUMERATION_CAP {
        Err(Error::EnumerationCap { n, cap: ENUMERATION_CAP })
    } else {
        Ok(())
    }
}

/// One of the `2^N` basis configurations.
///
/// Bit `i` set means node `i` is up (`σ_i = +1`). The integer word doubles
/// as the row/column index of the configuration in every state vector and
/// density matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinConfig {
    bits: u32,
    n_spins: u8,
}

impl SpinConfig {
    pub fn new(bits: u32, n_spins: usize) -> Result<Self> {
        check_enumerable(n_spins)?;
        if n_spins == 0 || (bits >> n_spins) != 0 {
            return Err(Error::InvalidParameter(format!(
                "configuration {bits:#b} does not fit {n_spins} spins"
            )));
        }
        Ok(Self { bits, n_spins: n_spins as u8 })
    }

    /// Unchecked constructor for indices already known to be in range.
    pub(crate) fn from_index(index: usize, n_spins: usize) -> Self {
        debug_assert!(index < 1 << n_spins);
        Self { bits: index as u32, n_spins: n_spins as u8 }
    }

    pub fn all_up(n_spins: usize) -> Result<Self> {
        check_enumerable(n_spins)?;
        Self::new(((1u64 << n_spins) - 1) as u32, n_spins)
    }

    pub fn all_down(n_spins: usize) -> Result<Self> {
        Self::new(0, n_spins)
    }

    /// Every configuration of `n_spins` spins in index order.
    pub fn all(n_spins: usize) -> impl Iterator<Item = SpinConfig> {
        (0..1usize << n_spins).map(move |i| Self::from_index(i, n_spins))
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn index(self) -> usize {
        self.bits as usize
    }

    pub fn n_spins(self) -> usize {
        self.n_spins as usize
    }

    pub fn is_up(self, node: usize) -> bool {
        (self.bits >> node) & 1 == 1
    }

    /// `σ_i ∈ {−1, +1}`.
    pub fn spin(self, node: usize) -> i32 {
        if self.is_up(node) {
            1
        } else {
            -1
        }
    }

    pub fn flipped(self, node: usize) -> Self {
        Self { bits: self.bits ^ (1 << node), ..self }
    }

    /// Global spin flip.
    pub fn complement(self) -> Self {
        let mask = ((1u64 << self.n_spins) - 1) as u32;
        Self { bits: !self.bits & mask, ..self }
    }

    pub fn hamming_distance(self, other: Self) -> u32 {
        (self.bits ^ other.bits).count_ones()
    }
}

/// Node `i` is character `i`: `1` for up, `0` for down.
impl fmt::Display for SpinConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n_spins() {
            f.write_str(if self.is_up(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Uniform Ising coupling and field, both in energy units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Edge coupling `J`.
    pub coupling: f64,
    /// External field `h`.
    pub field: f64,
}

impl ModelParams {
    pub fn new(coupling: f64, field: f64) -> Result<Self> {
        if !coupling.is_finite() || !field.is_finite() {
            return Err(Error::InvalidParameter("J and h must be finite".into()));
        }
        Ok(Self { coupling, field })
    }
}

fn check_size(g: &Graph, s: SpinConfig) -> Result<()> {
    if g.n_nodes() != s.n_spins() {
        Err(Error::SizeMismatch { expected: g.n_nodes(), got: s.n_spins() })
    } else {
        Ok(())
    }
}

/// Ising energy `E(σ) = −J Σ_edges σ_i σ_j − h Σ_i σ_i`.
pub fn energy(g: &Graph, p: &ModelParams, s: SpinConfig) -> Result<f64> {
    check_size(g, s)?;
    Ok(energy_unchecked(g, p, s))
}

fn energy_unchecked(g: &Graph, p: &ModelParams, s: SpinConfig) -> f64 {
    let bond: i32 = g.edges().iter().map(|&(i, j)| s.spin(i) * s.spin(j)).sum();
    -p.coupling * f64::from(bond) - p.field * f64::from(magnetization(s))
}

/// Energies of all `2^N` configurations in index order.
pub fn energies(g: &Graph, p: &ModelParams) -> Result<Vec<f64>> {
    check_enumerable(g.n_nodes())?;
    Ok(SpinConfig::all(g.n_nodes())
        .map(|s| energy_unchecked(g, p, s))
        .collect())
}

/// `(N_up, N_down)`.
pub fn node_counts(s: SpinConfig) -> (usize, usize) {
    let up = s.bits.count_ones() as usize;
    (up, s.n_spins() - up)
}

/// Edge counts by endpoint orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EdgeCounts {
    pub up_up: usize,
    pub down_down: usize,
    pub up_down: usize,
}

impl EdgeCounts {
    pub fn total(&self) -> usize {
        self.up_up + self.down_down + self.up_down
    }

    /// Energy from counts: `−J (N_uu + N_dd − N_ud) − h (N_up − N_down)`.
    pub fn energy(&self, p: &ModelParams, n_up: usize, n_down: usize) -> f64 {
        let aligned = self.up_up as f64 + self.down_down as f64 - self.up_down as f64;
        -p.coupling * aligned - p.field * (n_up as f64 - n_down as f64)
    }
}

pub fn edge_counts(g: &Graph, s: SpinConfig) -> Result<EdgeCounts> {
    check_size(g, s)?;
    let mut c = EdgeCounts::default();
    for &(i, j) in g.edges() {
        match (s.is_up(i), s.is_up(j)) {
            (true, true) => c.up_up += 1,
            (false, false) => c.down_down += 1,
            _ => c.up_down += 1,
        }
    }
    Ok(c)
}

/// `m = N_up − N_down`.
pub fn magnetization(s: SpinConfig) -> i32 {
    let (up, down) = node_counts(s);
    up as i32 - down as i32
}

/// Normalized Boltzmann weights `e^{−βE}/Z` over all configurations.
pub fn gibbs_distribution(g: &Graph, p: &ModelParams, beta: f64) -> Result<Vec<f64>> {
    boltzmann_weights(&energies(g, p)?, beta)
}

/// Normalized `e^{−βE_k}` over a list of energies, shifted by the minimum
/// energy so the exponentials cannot overflow.
pub fn boltzmann_weights(energies: &[f64], beta: f64) -> Result<Vec<f64>> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!("beta must be positive, got {beta}")));
    }
    let e_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let mut w: Vec<f64> = energies.iter().map(|e| (-beta * (e - e_min)).exp()).collect();
    let z: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= z);
    Ok(w)
}
