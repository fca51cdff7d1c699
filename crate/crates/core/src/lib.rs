//! Dissipative dynamics of Ising spin networks coupled to an Ohmic
//! bosonic bath.
//!
//! The crate covers the whole pipeline for small networks: graph
//! topology metrics ([`graph`]), configuration energies and observables
//! ([`spin`]), bath rates obeying detailed balance ([`bath`]), the
//! Lindblad generator in the configuration basis ([`liouvillian`]),
//! deterministic and quantum-jump time evolution ([`dynamics`]),
//! post-processing such as decoherence-time fits ([`analysis`]), and the
//! `N_up`-resolved mean-field reduction for large networks
//! ([`meanfield`]).

pub mod analysis;
pub mod bath;
pub mod dynamics;
mod error;
pub mod graph;
pub mod liouvillian;
pub mod meanfield;
pub mod spin;

pub use bath::{BathSpec, CutoffKind};
pub use dynamics::{DensityMatrix, Evolution, StateVector, TimeGrid, TrajectoryPlan};
pub use error::{Error, Result};
pub use graph::Graph;
pub use liouvillian::LindbladModel;
pub use meanfield::MeanFieldModel;
pub use spin::{ModelParams, SpinConfig};

/// Parameter profile used throughout the reference runs:
/// `J = 0.4`, `h = 0.1`, `β = 1.2`, `η = 0.4`, `ω_c = 1.2`, exponential cutoff.
pub fn reference_profile() -> (ModelParams, BathSpec) {
    (
        ModelParams { coupling: 0.4, field: 0.1 },
        BathSpec { strength: 0.4, cutoff_frequency: 1.2, cutoff: CutoffKind::Exponential, beta: 1.2 },
    )
}
