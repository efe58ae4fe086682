//! Monte-Carlo estimation of outage and of the maximum density meeting an
//! outage target, over a Poisson field of interferers in a finite disk.
//!
//! Results are a pure function of `(params, plan, fading, SimConfig)`: each
//! trial draws from its own counter-based stream, so neither the thread
//! count nor the scheduling order can change them.

mod field;
mod rng;

use serde::{Deserialize, Serialize};

use crate::analytic::{capacity_approx, capacity_interference_limited, sinr_threshold};
use crate::error::{Error, Result};
use crate::params::{check_epsilon, BandPlan, CapacityKind, CapacityResult, NetworkParams};

use field::{binomial_estimate, count_outages, CoupledField};
pub(crate) use field::{with_threads, FieldModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum FadingModel {
    /// Every fading coefficient is 1.
    #[default]
    PathLossOnly,
    /// Independent unit-mean exponential power gains on every link.
    Rayleigh,
}

/// Monte-Carlo controls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Trials per outage estimate.
    pub trials: u64,
    /// Radius of the simulation disk in meters. `None` picks
    /// `max(50 d beta^(1/alpha), 40 d)`.
    pub window_radius: Option<f64>,
    pub master_seed: u64,
    /// Floor on the accepted `|p_out - epsilon|` at the end of bisection.
    /// The solver never accepts less than twice the binomial standard error.
    pub bisect_tol_abs: f64,
    pub bisect_max_iter: u32,
    /// How many times the upper end of the bracket may double.
    pub max_bracket_doublings: u32,
    /// Worker threads, 0 for the rayon default. Never affects results.
    #[serde(skip)]
    pub threads: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            trials: 200_000,
            window_radius: None,
            master_seed: 0,
            bisect_tol_abs: 0.002,
            bisect_max_iter: 60,
            max_bracket_doublings: 24,
            threads: 0,
        }
    }
}

impl SimConfig {
    pub fn with_seed(master_seed: u64) -> Self {
        SimConfig { master_seed, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        if let Some(r) = self.window_radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::invalid("window radius must be positive"));
            }
        }
        if !(self.bisect_tol_abs > 0.0 && self.bisect_tol_abs < 0.5) {
            return Err(Error::invalid("bisection tolerance must lie in (0, 0.5)"));
        }
        if self.bisect_max_iter == 0 {
            return Err(Error::invalid("bisection max iterations must be at least 1"));
        }
        Ok(())
    }

    pub fn window_radius_for(&self, params: &NetworkParams, beta: f64) -> f64 {
        self.window_radius.unwrap_or_else(|| default_window_radius(params, beta))
    }
}

/// `max(50 d beta^(1/alpha), 40 d)`.
pub fn default_window_radius(params: &NetworkParams, beta: f64) -> f64 {
    let d = params.d();
    (50.0 * d * beta.powf(1.0 / params.alpha())).max(40.0 * d)
}

/// One draw of the field at the reference receiver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnapshotResult {
    /// `+inf` when there is neither noise nor interference.
    pub sinr: f64,
    pub interference: f64,
    pub n_interferers: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageEstimate {
    pub p_out: f64,
    pub stderr: f64,
    pub trials: u64,
}

fn check_intensity(v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("intensity must be non-negative and finite"))
    }
}

/// SINR at the receiver for trial `trial_index`, with interferers of
/// intensity `per_band_intensity` on the receiver's band and noise
/// `(W / n) N0`.
pub fn sample_snapshot(
    params: &NetworkParams,
    plan: &BandPlan,
    per_band_intensity: f64,
    fading: FadingModel,
    cfg: &SimConfig,
    trial_index: u64,
) -> Result<SnapshotResult> {
    check_intensity(per_band_intensity)?;
    cfg.validate()?;
    let model = FieldModel::new(params, plan, fading, cfg);
    Ok(model.snapshot(trial_index, model.horizon(per_band_intensity)))
}

/// Fraction of trials with `SINR < plan.beta` when `total_intensity` is
/// spread evenly over `plan.n` bands.
pub fn estimate_outage(
    params: &NetworkParams,
    plan: &BandPlan,
    total_intensity: f64,
    fading: FadingModel,
    cfg: &SimConfig,
) -> Result<OutageEstimate> {
    check_intensity(total_intensity)?;
    cfg.validate()?;
    let model = FieldModel::new(params, plan, fading, cfg);
    let horizon = model.horizon(total_intensity / f64::from(plan.n));
    let outages = with_threads(cfg.threads, || count_outages(&model, cfg.trials, horizon));
    Ok(binomial_estimate(outages, cfg.trials))
}

/// Largest total density whose estimated outage is within tolerance of
/// `epsilon`, found by bisection.
pub fn solve_capacity(
    params: &NetworkParams,
    n: u32,
    epsilon: f64,
    fading: FadingModel,
    cfg: &SimConfig,
) -> Result<CapacityResult> {
    check_epsilon(epsilon)?;
    cfg.validate()?;
    let plan = sinr_threshold(params, n)?;
    let guess = match capacity_approx(params, n, epsilon) {
        Ok(c) => c.lambda,
        Err(Error::NoiseInfeasible { .. }) => capacity_interference_limited(params, n, epsilon)?.lambda,
        Err(e) => return Err(e),
    };
    with_threads(cfg.threads, || {
        let model = FieldModel::new(params, &plan, fading, cfg);
        let field = CoupledField::new(model, cfg.trials);
        Bisection { field, n_bands: f64::from(n), epsilon, cfg }.solve(guess)
    })
}

/// Relative bracket width at which bisection may stop.
const BRACKET_REL_WIDTH: f64 = 1e-4;

struct Bisection<'a> {
    field: CoupledField,
    n_bands: f64,
    epsilon: f64,
    cfg: &'a SimConfig,
}

impl Bisection<'_> {
    fn outage(&mut self, total_intensity: f64) -> f64 {
        let horizon = self.field.model().horizon(total_intensity / self.n_bands);
        self.field.outages_at(horizon) as f64 / self.field.trials() as f64
    }

    fn solve(mut self, guess: f64) -> Result<CapacityResult> {
        let eps = self.epsilon;
        let trials = self.field.trials() as f64;
        let tol = self.cfg.bisect_tol_abs.max(2.0 * (eps * (1.0 - eps) / trials).sqrt());

        let p0 = self.outage(0.0);
        if p0 > eps {
            return Err(Error::InfeasibleAtZeroDensity { p_out: p0, target: eps });
        }

        let mut hi = 4.0 * guess;
        let mut p_hi = self.outage(hi);
        let mut doublings = 0;
        while p_hi <= eps {
            if doublings >= self.cfg.max_bracket_doublings {
                return Err(Error::NotBracketed { lo: 0.0, hi, p_out: p_hi, target: eps });
            }
            hi *= 2.0;
            doublings += 1;
            p_hi = self.outage(hi);
        }

        // Keep halving past the first in-tolerance midpoint until the bracket
        // is narrow, so the result resolves the crossing of the estimated
        // outage curve rather than the first dyadic point near it.
        let mut lo = 0.0;
        let mut last = (hi, p_hi);
        let mut found = None;
        for _ in 0..self.cfg.bisect_max_iter {
            let mid = 0.5 * (lo + hi);
            let p = self.outage(mid);
            last = (mid, p);
            if (p - eps).abs() <= tol && hi - lo <= BRACKET_REL_WIDTH * hi {
                found = Some((mid, p));
                break;
            }
            if p > eps {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let Some((lambda, p)) = found else {
            return Err(Error::MaxIterations {
                iters: self.cfg.bisect_max_iter,
                lo,
                hi,
                p_out: last.1,
                target: eps,
                tol,
            });
        };

        let stderr = self.propagate_stderr(lambda, p);
        Ok(CapacityResult { lambda, kind: CapacityKind::MonteCarlo, stderr })
    }

    /// Binomial error of `p` divided by the central-difference slope of the
    /// outage curve at `lambda`.
    fn propagate_stderr(&mut self, lambda: f64, p: f64) -> f64 {
        let trials = self.field.trials() as f64;
        let p_err = (p.max(1.0 / trials) * (1.0 - p) / trials).sqrt();
        for h in [0.05, 0.1, 0.2, 0.4] {
            let up = self.outage(lambda * (1.0 + h));
            let down = self.outage(lambda * (1.0 - h));
            let slope = (up - down) / (2.0 * h * lambda);
            if slope > 0.0 {
                return p_err / slope;
            }
        }
        lambda
    }
}
