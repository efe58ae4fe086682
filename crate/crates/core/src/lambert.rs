//! Principal branch of the Lambert W function on `[-1/e, 0]`.

use std::f64::consts::E;

use crate::error::{Error, Result};

const MAX_HALLEY_STEPS: usize = 32;

/// Slack admitted below `-1/e` so that `-1.0 / E` and `-(-1f64).exp()` both
/// land on the branch point.
const BRANCH_SLACK: f64 = 4.0 * f64::EPSILON;

/// Principal branch `W0(z)`, i.e. the `w >= -1` solving `w * e^w = z`, for
/// `z` in `[-1/e, 0]`.
///
/// Starts from the branch-point series near `-1/e` or the Taylor series at 0,
/// then polishes with Halley steps.
pub fn lambert_w0(z: f64) -> Result<f64> {
    if !(-1.0 / E - BRANCH_SLACK..=0.0).contains(&z) {
        return Err(Error::Domain(z));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let q = E * z + 1.0;
    if q <= 0.0 {
        return Ok(-1.0);
    }
    let p = (2.0 * q).sqrt();
    if p < 1e-3 {
        // Remaining series terms are below p^7.
        return Ok(branch_series(p));
    }
    let mut w = if z < -0.25 { branch_series(p) } else { z * (1.0 - z * (1.0 - 1.5 * z)) };
    for _ in 0..MAX_HALLEY_STEPS {
        let ew = w.exp();
        let f = w * ew - z;
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * (1.0 + w.abs()) {
            break;
        }
    }
    Ok(w.clamp(-1.0, 0.0))
}

/// Expansion of `W0` about the branch point in `p = sqrt(2 (e z + 1))`.
fn branch_series(p: f64) -> f64 {
    const C: [f64; 7] = [-1.0, 1.0, -1.0 / 3.0, 11.0 / 72.0, -43.0 / 540.0, 769.0 / 17280.0, -221.0 / 8505.0];
    C.iter().rev().fold(0.0, |acc, &c| acc * p + c)
}
