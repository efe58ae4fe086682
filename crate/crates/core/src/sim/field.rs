//! Sampling of the interferer field seen by the reference receiver.
//!
//! Interferers in the disk window are generated as a marked unit-rate
//! arrival process: point `k` arrives at "area time" `T_k` (cumulative
//! exponential gaps) and is present whenever `T_k <= lambda * pi * R^2`.
//! Every intensity therefore sees a prefix of the same point sequence, so
//! fields at different intensities are superpositions of one another and the
//! outage indicator of a trial is monotone in the intensity.

use rand::distr::Open01;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::rng::{Purpose, StreamKey};
use super::{FadingModel, OutageEstimate, SimConfig, SnapshotResult};
use crate::params::{BandPlan, NetworkParams};

#[derive(Debug, Clone, Copy)]
enum PathGain {
    /// `alpha / 2` is a small integer.
    Integer(i32),
    Real(f64),
}

impl PathGain {
    fn new(alpha: f64) -> Self {
        let half = alpha / 2.0;
        if half.fract() == 0.0 && half <= 16.0 {
            PathGain::Integer(half as i32)
        } else {
            PathGain::Real(half)
        }
    }

    /// `r^-alpha` from the squared distance.
    #[inline]
    fn at_sq(self, r2: f64) -> f64 {
        match self {
            PathGain::Integer(k) => 1.0 / r2.powi(k),
            PathGain::Real(h) => r2.powf(-h),
        }
    }
}

/// Everything a trial needs besides its index.
#[derive(Debug, Clone)]
pub(crate) struct FieldModel {
    rx_power: f64,
    rho: f64,
    noise: f64,
    beta: f64,
    window_r2: f64,
    window_area: f64,
    gain: PathGain,
    fading: FadingModel,
    field_key: StreamKey,
    link_key: StreamKey,
}

#[inline]
fn exp1(rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = rng.sample(Open01);
    -u.ln()
}

impl FieldModel {
    pub(crate) fn new(params: &NetworkParams, plan: &BandPlan, fading: FadingModel, cfg: &SimConfig) -> Self {
        let radius = cfg.window_radius_for(params, plan.beta);
        let window_r2 = radius * radius;
        FieldModel {
            rx_power: params.rx_power(),
            rho: params.rho(),
            noise: params.band_noise(plan.n),
            beta: plan.beta,
            window_r2,
            window_area: std::f64::consts::PI * window_r2,
            gain: PathGain::new(params.alpha()),
            fading,
            field_key: StreamKey::new(cfg.master_seed, Purpose::Field),
            link_key: StreamKey::new(cfg.master_seed, Purpose::ReferenceLink),
        }
    }

    /// Arrival-time horizon for a per-band intensity.
    pub(crate) fn horizon(&self, per_band_intensity: f64) -> f64 {
        per_band_intensity * self.window_area
    }

    pub(crate) fn signal(&self, trial: u64) -> f64 {
        match self.fading {
            FadingModel::PathLossOnly => self.rx_power,
            FadingModel::Rayleigh => self.rx_power * exp1(&mut self.link_key.open(trial)),
        }
    }

    #[inline]
    pub(crate) fn sinr(&self, signal: f64, interference: f64) -> f64 {
        signal / (self.noise + interference)
    }

    #[inline]
    pub(crate) fn in_outage(&self, signal: f64, interference: f64) -> bool {
        self.sinr(signal, interference) < self.beta
    }

    #[inline]
    fn gap(rng: &mut ChaCha8Rng) -> f64 {
        exp1(rng)
    }

    /// Received power from the next interferer of the stream.
    #[inline]
    fn point_power(&self, rng: &mut ChaCha8Rng) -> f64 {
        let r2 = loop {
            let u: f64 = rng.sample(Open01);
            let r2 = self.window_r2 * u;
            // Open01 keeps u > 0, but the product may still underflow.
            if r2 > 0.0 {
                break r2;
            }
        };
        let fade = match self.fading {
            FadingModel::PathLossOnly => 1.0,
            FadingModel::Rayleigh => exp1(rng),
        };
        self.rho * self.gain.at_sq(r2) * fade
    }

    /// Draw every point of the field at `horizon`, passing each point's
    /// received power to `visit`.
    pub(crate) fn for_each_point(&self, trial: u64, horizon: f64, mut visit: impl FnMut(f64)) {
        let mut rng = self.field_key.open(trial);
        let mut t = Self::gap(&mut rng);
        while t <= horizon {
            visit(self.point_power(&mut rng));
            t += Self::gap(&mut rng);
        }
    }

    pub(crate) fn snapshot(&self, trial: u64, horizon: f64) -> SnapshotResult {
        let signal = self.signal(trial);
        let mut interference = 0.0;
        let mut count = 0u64;
        self.for_each_point(trial, horizon, |p| {
            interference += p;
            count += 1;
        });
        SnapshotResult { sinr: self.sinr(signal, interference), interference, n_interferers: count }
    }
}

pub(crate) fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    if threads == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

pub(crate) fn binomial_estimate(outages: u64, trials: u64) -> OutageEstimate {
    let p = outages as f64 / trials as f64;
    OutageEstimate { p_out: p, stderr: (p * (1.0 - p) / trials as f64).sqrt(), trials }
}

/// Outage count at `horizon` with fresh streams.
pub(crate) fn count_outages(model: &FieldModel, trials: u64, horizon: f64) -> u64 {
    (0..trials).into_par_iter().filter(|&trial| model.snapshot(trial, horizon).sinr < model.beta).count() as u64
}

#[derive(Debug, Clone, Copy)]
struct TrialState {
    signal: f64,
    interference: f64,
    /// Arrival time of the first point not yet added.
    next_t: f64,
    /// Stream position just after drawing `next_t`.
    word_pos: u128,
    /// Arrival time at which the trial first goes into outage.
    critical: Option<f64>,
}

/// Per-trial state that remembers how far each trial's field has been
/// generated, so repeated outage queries at growing intensities only draw
/// the new points. Queries agree exactly with [`count_outages`] because both
/// consume the same streams in the same order.
pub(crate) struct CoupledField {
    model: FieldModel,
    states: Vec<TrialState>,
    horizon: f64,
}

impl CoupledField {
    pub(crate) fn new(model: FieldModel, trials: u64) -> Self {
        let states = (0..trials)
            .into_par_iter()
            .map(|trial| {
                let signal = model.signal(trial);
                let mut rng = model.field_key.open(trial);
                let next_t = FieldModel::gap(&mut rng);
                let critical = model.in_outage(signal, 0.0).then_some(0.0);
                TrialState { signal, interference: 0.0, next_t, word_pos: rng.get_word_pos(), critical }
            })
            .collect();
        CoupledField { model, states, horizon: 0.0 }
    }

    pub(crate) fn model(&self) -> &FieldModel {
        &self.model
    }

    fn extend(&mut self, horizon: f64) {
        if horizon <= self.horizon {
            return;
        }
        let model = &self.model;
        self.states.par_iter_mut().enumerate().for_each(|(trial, st)| {
            if st.critical.is_some() || st.next_t > horizon {
                return;
            }
            let mut rng = model.field_key.open_at(trial as u64, st.word_pos);
            while st.next_t <= horizon {
                st.interference += model.point_power(&mut rng);
                if model.in_outage(st.signal, st.interference) {
                    st.critical = Some(st.next_t);
                    break;
                }
                st.next_t += FieldModel::gap(&mut rng);
            }
            st.word_pos = rng.get_word_pos();
        });
        self.horizon = horizon;
    }

    /// Number of trials in outage at `horizon`.
    pub(crate) fn outages_at(&mut self, horizon: f64) -> u64 {
        self.extend(horizon);
        self.states.iter().filter(|st| st.critical.is_some_and(|t| t <= horizon)).count() as u64
    }

    pub(crate) fn trials(&self) -> u64 {
        self.states.len() as u64
    }
}
