//! Deterministic placements with zero outage: the nearest-interferer density
//! bound and a square-lattice construction.
//!
//! Transmitters sit at `(i s, j s)` and each receiver at `(i s + d, j s)`.
//! By translation symmetry every receiver sees the same interference, so
//! the receiver at `(d, 0)` is evaluated.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{CapacityKind, CapacityResult, NetworkParams};

pub const MIN_TRUNCATION_CELLS: u32 = 8;
const MAX_TRUNCATION_CELLS: u32 = 1024;
const TAIL_LIMIT: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeLayout {
    /// Lattice pitch in meters.
    pub spacing: f64,
    /// Horizontal receiver offset, the link distance.
    pub shift: f64,
    /// Half-width of the explicitly summed window, in cells.
    pub truncation_cells: u32,
}

impl LatticeLayout {
    pub fn new(params: &NetworkParams, spacing: f64, truncation_cells: u32) -> Result<Self> {
        let layout = LatticeLayout { spacing, shift: params.d(), truncation_cells };
        layout.validate()?;
        Ok(layout)
    }

    fn validate(&self) -> Result<()> {
        if !(self.spacing > 0.0 && self.spacing.is_finite()) {
            return Err(Error::invalid("lattice spacing must be positive"));
        }
        if !(self.shift > 0.0 && self.shift.is_finite()) {
            return Err(Error::invalid("lattice shift must be positive"));
        }
        if self.truncation_cells < MIN_TRUNCATION_CELLS {
            return Err(Error::invalid(format!("truncation cells must be at least {MIN_TRUNCATION_CELLS}")));
        }
        Ok(())
    }

    /// The receiver can be closer to a foreign transmitter than to its own.
    pub fn is_crowded(&self) -> bool {
        self.shift >= self.spacing
    }

    pub fn density(&self) -> f64 {
        1.0 / (self.spacing * self.spacing)
    }
}

/// Interference sums at the reference receiver, in units of transmit power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeInterference {
    /// Exact sum over the `(2M+1)^2 - 1` transmitters of the window.
    pub partial: f64,
    /// Upper bound on everything outside the window.
    pub tail: f64,
}

/// Window sum plus a rigorous tail bound.
///
/// Every transmitter outside the window owns a cell of side `s` whose points
/// lie within `c = s / sqrt(2)` of it, so its term is at most the cell average
/// of `(|x - r| - c)^-alpha`. Those cells lie beyond `rho0 - c`, with `rho0`
/// the distance to the nearest outside transmitter, which gives
/// `(2 pi / s^2) [u0^(2-alpha)/(alpha-2) + c u0^(1-alpha)/(alpha-1)]` with
/// `u0 = rho0 - 2c`.
pub fn lattice_interference(alpha: f64, layout: &LatticeLayout) -> Result<LatticeInterference> {
    layout.validate()?;
    let s = layout.spacing;
    let m = i64::from(layout.truncation_cells);
    let half = alpha / 2.0;
    let mut partial = 0.0;
    for i in -m..=m {
        let dx = i as f64 * s - layout.shift;
        for j in -m..=m {
            if i == 0 && j == 0 {
                continue;
            }
            let dy = j as f64 * s;
            partial += (dx * dx + dy * dy).powf(-half);
        }
    }
    let c = s * FRAC_1_SQRT_2;
    let rho0 = (m + 1) as f64 * s - layout.shift;
    let u0 = rho0 - 2.0 * c;
    let tail = if u0 > 0.0 {
        2.0 * PI / (s * s) * (u0.powf(2.0 - alpha) / (alpha - 2.0) + c * u0.powf(1.0 - alpha) / (alpha - 1.0))
    } else {
        f64::INFINITY
    };
    Ok(LatticeInterference { partial, tail })
}

/// Worst-case SIR of the shifted lattice, `d^-alpha / (partial + tail)`.
/// Never exceeds the SIR of the infinite lattice.
pub fn lattice_sir(params: &NetworkParams, layout: &LatticeLayout) -> Result<f64> {
    let alpha = params.alpha();
    let sums = lattice_interference(alpha, layout)?;
    if sums.tail.is_nan() || sums.tail > TAIL_LIMIT * sums.partial {
        return Err(Error::InsufficientTruncation {
            tail: sums.tail,
            partial: sums.partial,
            cells: layout.truncation_cells,
        });
    }
    Ok(layout.shift.powf(-alpha) / (sums.partial + sums.tail))
}

fn check_b(b: f64) -> Result<f64> {
    let beta = b.exp2() - 1.0;
    if b > 0.0 && beta.is_finite() {
        Ok(beta)
    } else {
        Err(Error::invalid("spectral efficiency must be positive and finite"))
    }
}

/// `(1 / (pi d^2)) (2^b - 1)^(-2/alpha)`: the density at which each
/// receiver's disk of radius `d beta^(1/alpha)` can be kept clear.
///
/// This is a necessary condition for the nearest interferer only. For large
/// `b` and `alpha` a lattice can exceed it.
pub fn det_upper_bound(params: &NetworkParams, b: f64) -> Result<CapacityResult> {
    let beta = check_b(b)?;
    let d = params.d();
    let lambda = beta.powf(-2.0 / params.alpha()) / (PI * d * d);
    Ok(CapacityResult::exact(lambda, CapacityKind::DeterministicUpper))
}

fn sir_with_enough_cells(params: &NetworkParams, spacing: f64) -> Result<(f64, u32)> {
    let mut cells = 32;
    loop {
        let layout = LatticeLayout::new(params, spacing, cells)?;
        match lattice_sir(params, &layout) {
            Err(Error::InsufficientTruncation { .. }) if cells < MAX_TRUNCATION_CELLS => cells *= 2,
            other => return other.map(|sir| (sir, cells)),
        }
    }
}

/// Smallest lattice pitch whose receivers all reach SIR `2^b - 1`.
pub fn lattice_min_spacing(params: &NetworkParams, b: f64) -> Result<LatticeLayout> {
    let beta = check_b(b)?;
    let d = params.d();
    // At s = d a transmitter coincides with the receiver. Beyond d the SIR
    // grows with s because every distance does.
    let mut lo = d;
    let mut hi = 2.0 * d;
    let mut hi_cells = loop {
        let (sir, cells) = sir_with_enough_cells(params, hi)?;
        if sir >= beta {
            break cells;
        }
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::invalid("no finite lattice spacing reaches the threshold"));
        }
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (sir, cells) = sir_with_enough_cells(params, mid)?;
        if sir >= beta {
            hi = mid;
            hi_cells = cells;
        } else {
            lo = mid;
        }
        if (hi - lo) <= 1e-12 * hi {
            break;
        }
    }
    LatticeLayout::new(params, hi, hi_cells)
}

/// Density `1 / s^2` of the tightest lattice meeting SIR `2^b - 1`.
pub fn lattice_max_density(params: &NetworkParams, b: f64) -> Result<CapacityResult> {
    let layout = lattice_min_spacing(params, b)?;
    Ok(CapacityResult::exact(layout.density(), CapacityKind::LatticeLower))
}
