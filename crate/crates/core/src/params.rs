//! Physical parameters of the network and the records derived from them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Signal-to-noise ratio of a full-band link with no interference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Snr {
    Finite(f64),
    /// Zero noise: the network is interference limited.
    Infinite,
}

impl Snr {
    pub fn from_db(db: f64) -> Result<Self> {
        if db.is_nan() {
            return Err(Error::invalid("snr must be a number or inf"));
        }
        if db == f64::INFINITY {
            return Ok(Snr::Infinite);
        }
        let linear = 10f64.powf(db / 10.0);
        if !(linear > 0.0 && linear.is_finite()) {
            return Err(Error::invalid("snr must be positive and finite in linear units"));
        }
        Ok(Snr::Finite(linear))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Snr::Infinite)
    }

    pub fn linear(&self) -> f64 {
        match *self {
            Snr::Finite(v) => v,
            Snr::Infinite => f64::INFINITY,
        }
    }

    pub fn db(&self) -> f64 {
        match *self {
            Snr::Finite(v) => 10.0 * v.log10(),
            Snr::Infinite => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct RawParams {
    alpha: f64,
    d: f64,
    rho: f64,
    n0: f64,
    w: f64,
    r: f64,
}

/// Path-loss exponent, link distance (m), transmit power (W), noise spectral
/// density (W/Hz), total bandwidth (Hz) and per-link rate (bit/s).
///
/// Construction validates every field, so any value of this type satisfies
/// `alpha > 2`, `d, rho, w, r > 0` and `n0 >= 0`. `n0 == 0` means infinite SNR.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct NetworkParams {
    alpha: f64,
    d: f64,
    rho: f64,
    n0: f64,
    w: f64,
    r: f64,
}

impl TryFrom<RawParams> for NetworkParams {
    type Error = Error;

    fn try_from(p: RawParams) -> Result<Self> {
        NetworkParams::new(p.alpha, p.d, p.rho, p.n0, p.w, p.r)
    }
}

impl From<NetworkParams> for RawParams {
    fn from(p: NetworkParams) -> Self {
        RawParams { alpha: p.alpha, d: p.d, rho: p.rho, n0: p.n0, w: p.w, r: p.r }
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 2.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("alpha must exceed 2"))
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be positive and finite")))
    }
}

pub(crate) fn check_epsilon(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid("epsilon must lie in (0, 1)"))
    }
}

impl NetworkParams {
    pub fn new(alpha: f64, d: f64, rho: f64, n0: f64, w: f64, r: f64) -> Result<Self> {
        check_alpha(alpha)?;
        check_positive("d", d)?;
        check_positive("rho", rho)?;
        check_positive("w", w)?;
        check_positive("r", r)?;
        if !(n0 >= 0.0 && n0.is_finite()) {
            return Err(Error::invalid("n0 must be non-negative and finite"));
        }
        let params = NetworkParams { alpha, d, rho, n0, w, r };
        if !(params.util() > 0.0 && params.util().is_finite()) {
            return Err(Error::invalid("r/w must be positive and finite"));
        }
        if n0 > 0.0 && !(params.snr().linear() > 0.0 && params.snr().linear().is_finite()) {
            return Err(Error::invalid("snr must be positive and finite when n0 > 0"));
        }
        Ok(params)
    }

    /// Unit power over a unit band with rate `util`, no noise.
    pub fn interference_limited(alpha: f64, d: f64, util: f64) -> Result<Self> {
        Self::new(alpha, d, 1.0, 0.0, 1.0, util)
    }

    /// Same geometry with `n0` chosen so that the full-band SNR equals `snr`.
    pub fn with_snr(self, snr: Snr) -> Result<Self> {
        let n0 = match snr {
            Snr::Infinite => 0.0,
            Snr::Finite(v) => {
                check_positive("snr", v)?;
                self.rx_power() / (self.w * v)
            }
        };
        Self::new(self.alpha, self.d, self.rho, n0, self.w, self.r)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn d(&self) -> f64 {
        self.d
    }
    pub fn rho(&self) -> f64 {
        self.rho
    }
    pub fn n0(&self) -> f64 {
        self.n0
    }
    pub fn w(&self) -> f64 {
        self.w
    }
    pub fn r(&self) -> f64 {
        self.r
    }

    /// Spectral utilization `r / w` in bit/s/Hz/user.
    pub fn util(&self) -> f64 {
        self.r / self.w
    }

    /// Received signal power of the reference link, `rho * d^-alpha`.
    pub fn rx_power(&self) -> f64 {
        self.rho * self.d.powf(-self.alpha)
    }

    pub fn snr(&self) -> Snr {
        if self.n0 == 0.0 {
            Snr::Infinite
        } else {
            Snr::Finite(self.rx_power() / (self.n0 * self.w))
        }
    }

    /// Noise power inside one of `n` equal sub-bands.
    pub fn band_noise(&self, n: u32) -> f64 {
        self.w / f64::from(n) * self.n0
    }

    /// `epsilon / (pi d^2)`, the prefactor shared by every density formula.
    pub(crate) fn density_scale(&self, epsilon: f64) -> f64 {
        epsilon / (std::f64::consts::PI * self.d * self.d)
    }
}

/// A split of the band into `n` sub-bands with SINR threshold `beta` and
/// per-band spectral efficiency `b = n * util`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandPlan {
    pub n: u32,
    pub beta: f64,
    pub b: f64,
}

impl BandPlan {
    pub fn beta_db(&self) -> f64 {
        10.0 * self.beta.log10()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CapacityKind {
    AnalyticApprox,
    AnalyticInterferenceLimited,
    MonteCarlo,
    DsAnalytic,
    DeterministicUpper,
    LatticeLower,
}

/// A transmitter density (per m^2) together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacityResult {
    pub lambda: f64,
    pub kind: CapacityKind,
    /// Zero for every analytic kind.
    pub stderr: f64,
}

impl CapacityResult {
    pub(crate) fn exact(lambda: f64, kind: CapacityKind) -> Self {
        CapacityResult { lambda, kind, stderr: 0.0 }
    }
}
