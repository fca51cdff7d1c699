//! Pure states and density matrices in the configuration basis.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spin::{check_enumerable, SpinConfig};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Amplitudes `c_σ` indexed by configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_spins: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(n_spins: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_enumerable(n_spins)?;
        if amplitudes.len() != 1 << n_spins {
            return Err(Error::SizeMismatch { expected: 1 << n_spins, got: amplitudes.len() });
        }
        Ok(Self { n_spins, amplitudes })
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Expectation of `σ^z_i`.
    pub fn sigma_z(&self, node: usize) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(k, c)| c.norm_sqr() * f64::from(SpinConfig::from_index(k, self.n_spins).spin(node)))
            .sum()
    }
}

/// `|σ⟩`.
pub fn basis_state(s: SpinConfig) -> StateVector {
    let n = s.n_spins();
    let mut amplitudes = vec![ZERO; 1 << n];
    amplitudes[s.index()] = Complex64::new(1.0, 0.0);
    StateVector { n_spins: n, amplitudes }
}

/// `(|↑…↑⟩ + |↓…↓⟩)/√2`.
pub fn ghz_state(n_spins: usize) -> Result<StateVector> {
    if n_spins < 2 {
        return Err(Error::InvalidParameter("a GHZ state needs at least two spins".into()));
    }
    let up = SpinConfig::all_up(n_spins)?;
    let mut amplitudes = vec![ZERO; 1 << n_spins];
    let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amplitudes[0] = a;
    amplitudes[up.index()] = a;
    Ok(StateVector { n_spins, amplitudes })
}

/// Dense `2^N × 2^N` density matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_spins: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    /// Largest network for which a dense density matrix is allocated.
    pub const MAX_SPINS: usize = 12;

    pub fn zeros(n_spins: usize) -> Result<Self> {
        if n_spins > Self::MAX_SPINS {
            return Err(Error::EnumerationCap { n: n_spins, cap: Self::MAX_SPINS });
        }
        let dim = 1usize << n_spins;
        Ok(Self { n_spins, data: vec![ZERO; dim * dim] })
    }

    pub fn from_row_major(n_spins: usize, data: Vec<Complex64>) -> Result<Self> {
        let mut rho = Self::zeros(n_spins)?;
        if data.len() != rho.data.len() {
            return Err(Error::SizeMismatch { expected: rho.data.len(), got: data.len() });
        }
        rho.data = data;
        Ok(rho)
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn from_pure(psi: &StateVector) -> Result<Self> {
        let mut rho = Self::zeros(psi.n_spins())?;
        let dim = rho.dim();
        let c = psi.amplitudes();
        for r in 0..dim {
            for k in 0..dim {
                rho.data[r * dim + k] = c[r] * c[k].conj();
            }
        }
        Ok(rho)
    }

    /// Diagonal matrix with the given populations.
    pub fn from_populations(n_spins: usize, populations: &[f64]) -> Result<Self> {
        let mut rho = Self::zeros(n_spins)?;
        let dim = rho.dim();
        if populations.len() != dim {
            return Err(Error::SizeMismatch { expected: dim, got: populations.len() });
        }
        for (k, &p) in populations.iter().enumerate() {
            rho.data[k * dim + k] = Complex64::new(p, 0.0);
        }
        Ok(rho)
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn dim(&self) -> usize {
        1 << self.n_spins
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        let dim = self.dim();
        self.data[row * dim + col] = value;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|k| self.get(k, k)).sum()
    }

    /// Real parts of the diagonal.
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.get(k, k).re).collect()
    }

    /// `max |ρ − ρ†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for r in 0..dim {
            for c in r..dim {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    /// Replaces `ρ` by `(ρ + ρ†)/2`.
    pub fn hermitize(&mut self) {
        let dim = self.dim();
        for r in 0..dim {
            for c in r..dim {
                let avg = (self.get(r, c) + self.get(c, r).conj()) * 0.5;
                self.set(r, c, avg);
                self.set(c, r, avg.conj());
            }
        }
    }

    /// `Tr ρ²` (real for Hermitian `ρ`).
    pub fn purity(&self) -> f64 {
        let dim = self.dim();
        let mut acc = ZERO;
        for r in 0..dim {
            for c in 0..dim {
                acc += self.get(r, c) * self.get(c, r);
            }
        }
        acc.re
    }

    /// Largest absolute off-diagonal element.
    pub fn max_coherence(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for r in 0..dim {
            for c in 0..dim {
                if r != c {
                    worst = worst.max(self.get(r, c).norm());
                }
            }
        }
        worst
    }

    /// `max |ρ_ab − σ_ab|`.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Checks Hermiticity and unit trace within the given tolerances.
    pub fn validate(&self, hermiticity_tol: f64, trace_tol: f64) -> Result<()> {
        let defect = self.hermiticity_defect();
        if defect > hermiticity_tol {
            return Err(Error::InvalidParameter(format!(
                "density matrix is not Hermitian (defect {defect:e})"
            )));
        }
        let tr = self.trace();
        if (tr - 1.0).norm() > trace_tol {
            return Err(Error::InvalidParameter(format!("density matrix trace is {tr}")));
        }
        Ok(())
    }
}
