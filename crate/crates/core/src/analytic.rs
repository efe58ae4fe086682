//! Closed-form densities and the optimal band split.
//!
//! Every density here drops the second-order term in `epsilon`, so they are
//! small-outage approximations. The fading constant is taken as 1 (pure
//! path loss).

use std::f64::consts::{LN_2, LOG2_E};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lambert::lambert_w0;
use crate::params::{check_alpha, check_epsilon, BandPlan, CapacityKind, CapacityResult, NetworkParams};

/// Relative tolerance under which the floor and ceiling candidates tie.
const TIE_REL_TOL: f64 = 1e-12;

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        Err(Error::invalid("n must be at least 1"))
    } else {
        Ok(())
    }
}

fn shannon_threshold(n: u32, util: f64) -> Result<(f64, f64)> {
    let b = f64::from(n) * util;
    let beta = b.exp2() - 1.0;
    if !beta.is_finite() {
        return Err(Error::ThresholdOverflow { n, util });
    }
    Ok((b, beta))
}

/// Threshold for `n` sub-bands: `beta = 2^(n util) - 1`, `b = n util`.
pub fn sinr_threshold(params: &NetworkParams, n: u32) -> Result<BandPlan> {
    check_n(n)?;
    let (b, beta) = shannon_threshold(n, params.util())?;
    Ok(BandPlan { n, beta, b })
}

/// Threshold when the code operates a power gap `gamma` from capacity:
/// `beta = (2^(n util) - 1) / gamma`.
pub fn gap_adjusted_threshold(params: &NetworkParams, n: u32, gamma: f64) -> Result<BandPlan> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::invalid("gamma must lie in (0, 1]"));
    }
    let plan = sinr_threshold(params, n)?;
    let beta = plan.beta / gamma;
    if !beta.is_finite() {
        return Err(Error::ThresholdOverflow { n, util: params.util() });
    }
    Ok(BandPlan { beta, ..plan })
}

fn plan_density(params: &NetworkParams, plan: &BandPlan, epsilon: f64, noise_free: bool) -> Result<f64> {
    check_epsilon(epsilon)?;
    let inv_beta = 1.0 / plan.beta;
    let snr = params.snr();
    let bracket = if noise_free || snr.is_infinite() {
        inv_beta
    } else {
        let noise = 1.0 / (f64::from(plan.n) * snr.linear());
        if inv_beta <= noise {
            return Err(Error::NoiseInfeasible { n: plan.n, inv_beta, noise });
        }
        inv_beta - noise
    };
    Ok(f64::from(plan.n) * params.density_scale(epsilon) * bracket.powf(2.0 / params.alpha()))
}

/// Total density for an arbitrary plan (for instance a gap-adjusted one),
/// including the per-band noise term.
pub fn capacity_for_plan(params: &NetworkParams, plan: &BandPlan, epsilon: f64) -> Result<CapacityResult> {
    check_n(plan.n)?;
    let lambda = plan_density(params, plan, epsilon, false)?;
    Ok(CapacityResult::exact(lambda, CapacityKind::AnalyticApprox))
}

/// `lambda = n (eps / (pi d^2)) (1/beta(n) - 1/(n SNR))^(2/alpha)`.
pub fn capacity_approx(params: &NetworkParams, n: u32, epsilon: f64) -> Result<CapacityResult> {
    let plan = sinr_threshold(params, n)?;
    capacity_for_plan(params, &plan, epsilon)
}

/// The noise-free form `(eps / (pi d^2)) n (2^(n util) - 1)^(-2/alpha)`,
/// regardless of the noise level in `params`.
pub fn capacity_interference_limited(params: &NetworkParams, n: u32, epsilon: f64) -> Result<CapacityResult> {
    let plan = sinr_threshold(params, n)?;
    let lambda = plan_density(params, &plan, epsilon, true)?;
    Ok(CapacityResult::exact(lambda, CapacityKind::AnalyticInterferenceLimited))
}

/// Noise-free density at a real-valued band count.
pub fn interference_limited_density(params: &NetworkParams, n: f64, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::invalid("n must be positive"));
    }
    let beta = (n * params.util()).exp2() - 1.0;
    Ok(n * params.density_scale(epsilon) * beta.powf(-2.0 / params.alpha()))
}

/// Direct-sequence spreading with gain `n` and separate despreading:
/// `(eps / (pi d^2)) n^(2/alpha) beta(n)^(-2/alpha)`.
pub fn ds_capacity(params: &NetworkParams, n: u32, epsilon: f64) -> Result<CapacityResult> {
    check_epsilon(epsilon)?;
    let plan = sinr_threshold(params, n)?;
    let exp = 2.0 / params.alpha();
    let lambda = params.density_scale(epsilon) * (f64::from(plan.n) / plan.beta).powf(exp);
    Ok(CapacityResult::exact(lambda, CapacityKind::DsAnalytic))
}

/// Spectral efficiency `b*` maximizing `b (2^b - 1)^(-2/alpha)`:
/// `b* = log2(e) (alpha/2 + W0(-(alpha/2) e^(-alpha/2)))`.
pub fn optimal_spectral_efficiency(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let half = alpha / 2.0;
    let w = lambert_w0(-half * (-half).exp())?;
    Ok(LOG2_E * (half + w))
}

/// `b (2^b - 1)^(-2/alpha)`; at `b = b*` this is the density constant.
pub fn efficiency_objective(alpha: f64, b: f64) -> f64 {
    b * (b.exp2() - 1.0).powf(-2.0 / alpha)
}

/// `b* (2^b* - 1)^(-2/alpha)`: the optimal density in units of
/// `eps / (util pi d^2)`.
pub fn density_constant(alpha: f64) -> Result<f64> {
    let b = optimal_spectral_efficiency(alpha)?;
    Ok(efficiency_objective(alpha, b))
}

/// Optimal band count, both relaxed (`n_real = b* / util`) and integer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandCount {
    pub n_star: u32,
    pub n_real: f64,
}

/// Picks the better of `floor(b*/util)` (at least 1) and `ceil(b*/util)`
/// under the noise-free density; ties go to the smaller count.
pub fn optimal_band_count(params: &NetworkParams) -> Result<BandCount> {
    let b_star = optimal_spectral_efficiency(params.alpha())?;
    let n_real = b_star / params.util();
    if n_real.ceil() > f64::from(u32::MAX) {
        return Err(Error::invalid("utilization too small: optimal band count exceeds u32"));
    }
    let lo = (n_real.floor() as u32).max(1);
    let hi = (n_real.ceil() as u32).max(1);
    if lo == hi {
        return Ok(BandCount { n_star: lo, n_real });
    }
    // Any epsilon works: only the ratio matters.
    let cap_lo = capacity_interference_limited(params, lo, 0.5)?.lambda;
    let cap_hi = capacity_interference_limited(params, hi, 0.5)?.lambda;
    let n_star = if cap_hi > cap_lo * (1.0 + TIE_REL_TOL) { hi } else { lo };
    Ok(BandCount { n_star, n_real })
}

/// Optimal density ignoring integrality:
/// `(eps / (pi d^2)) (1/util) b* (2^b* - 1)^(-2/alpha)`.
pub fn info_density(params: &NetworkParams, epsilon: f64) -> Result<CapacityResult> {
    check_epsilon(epsilon)?;
    let lambda = params.density_scale(epsilon) * density_constant(params.alpha())? / params.util();
    Ok(CapacityResult::exact(lambda, CapacityKind::AnalyticInterferenceLimited))
}

/// Area spectral efficiency at the optimal split, in bit/s/Hz/m^2. Does not
/// depend on the rate.
pub fn area_spectral_efficiency(params: &NetworkParams, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    Ok(params.density_scale(epsilon) * density_constant(params.alpha())?)
}

/// Threshold at the optimal spectral efficiency, `2^b* - 1`.
pub fn optimal_threshold(alpha: f64) -> Result<f64> {
    Ok(optimal_spectral_efficiency(alpha)?.exp2() - 1.0)
}

/// Low-rate approximation of `beta(n)`: `n util ln 2`.
pub fn linear_threshold(n: u32, util: f64) -> f64 {
    f64::from(n) * util * LN_2
}
