//! Time evolution: initial states, the deterministic master-equation
//! integrator and the stochastic quantum-jump unraveling.

mod master;
pub mod ode;
mod state;
mod trajectory;

pub use master::{propagate_master, propagate_master_dense, Evolution, EvolutionStats, TimeGrid};
pub use state::{basis_state, ghz_state, DensityMatrix, StateVector};
pub use trajectory::{run_trajectories, JumpEvent, TrajectoryAverage, TrajectoryPlan, Unraveling};
