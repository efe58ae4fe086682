//! Optimal frequency band splitting for random spatial wireless networks.
//!
//! Splitting a band of `W` Hz into `N` sub-bands trades interference for a
//! higher SINR threshold. [`analytic`] holds the closed forms for the density
//! of transmissions that meets an outage target and for the optimal split,
//! [`sim`] estimates the same densities by Monte-Carlo over Poisson fields,
//! [`lattice`] bounds deterministic placements, and [`experiments`] sweeps
//! them into tables.

pub mod analytic;
mod error;
pub mod experiments;
pub mod lambert;
pub mod lattice;
mod params;
pub mod sim;

pub use analytic::{
    area_spectral_efficiency, capacity_approx, capacity_for_plan, capacity_interference_limited, density_constant,
    ds_capacity, gap_adjusted_threshold, info_density, optimal_band_count, optimal_spectral_efficiency, sinr_threshold,
    BandCount,
};
pub use error::{Error, Result};
pub use lambert::lambert_w0;
pub use lattice::{det_upper_bound, lattice_max_density, lattice_sir, LatticeLayout};
pub use params::{BandPlan, CapacityKind, CapacityResult, NetworkParams, Snr};
pub use sim::{
    estimate_outage, sample_snapshot, solve_capacity, FadingModel, OutageEstimate, SimConfig, SnapshotResult,
};
