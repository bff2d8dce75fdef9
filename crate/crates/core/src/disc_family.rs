//! The squeezed disc family `φ_α(τ) = -1 / log(¼ ((1-τ)/2)^α)`, optionally
//! translated by `-ε_shift`.
//!
//! `φ_α` is singular at `τ = 1` (where it tends to 0) and maps `τ = -1` to
//! `1/log 4`. As `α → 0` the image of the circle collapses onto the segment
//! `(0, 1/log 4)`, with almost all of the circle sent near `1/log 4`.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `log 4`.
pub const LN_4: f64 = 2.0 * LN_2;

/// `φ_α(-1) = 1/log 4`, the far end of the squeezed segment.
pub const FAR_POINT: f64 = 1.0 / LN_4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscFamilyParams {
    pub alpha: f64,
    #[serde(default)]
    pub shift: f64,
}

impl DiscFamilyParams {
    pub fn new(alpha: f64, shift: f64) -> Result<Self> {
        let p = Self { alpha, shift };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::Domain(format!(
                "alpha = {} outside (0, 1]",
                self.alpha
            )));
        }
        if !(self.shift >= 0.0 && self.shift.is_finite()) {
            return Err(Error::Domain(format!(
                "eps_shift = {} must be >= 0",
                self.shift
            )));
        }
        Ok(())
    }

    /// `φ` from the principal log of `(1-τ)/2`, shifted.
    fn from_half_chord_log(&self, log_half_chord: Complex64) -> Complex64 {
        let denom = Complex64::new(-LN_4, 0.0) + self.alpha * log_half_chord;
        Complex64::new(-self.shift, 0.0) - denom.inv()
    }

    /// `φ_α(e^{iθ})`. Uses `(1-e^{iθ})/2 = sin(θ/2) e^{i(θ-π)/2}` so that no
    /// cancellation occurs near `θ = 0`. Any real `θ` is reduced to `(-π, π]`
    /// and `φ_α(e^{-iθ}) = conj φ_α(e^{iθ})` handles the lower half circle.
    pub fn at_angle(&self, theta: f64) -> Complex64 {
        let mut t = theta;
        if !(t > -PI && t <= PI) {
            t = t.rem_euclid(2.0 * PI);
            if t > PI {
                t -= 2.0 * PI;
            }
        }
        let a = t.abs();
        let half_sin = (0.5 * a).sin();
        if half_sin <= 0.0 {
            return Complex64::new(-self.shift, 0.0);
        }
        let phi = self.from_half_chord_log(Complex64::new(half_sin.ln(), 0.5 * (a - PI)));
        if t < 0.0 {
            phi.conj()
        } else {
            phi
        }
    }

    /// `φ_α(e^{iθ})` at `θ = e^{-t}`, valid for arbitrarily large `t`
    /// (the angle itself may underflow).
    pub fn at_log_angle(&self, t: f64) -> Complex64 {
        let theta = (-t).exp();
        let x = 0.5 * theta;
        // log sin(θ/2) = -t - log 2 + log(sin x / x)
        let sinc = if x < 1e-4 {
            1.0 - x * x / 6.0
        } else {
            x.sin() / x
        };
        let log_sin = -t - LN_2 + sinc.ln();
        self.from_half_chord_log(Complex64::new(log_sin, 0.5 * (theta - PI)))
    }
}

/// `φ_α(τ)` on the closed unit disc; `τ = 1` returns the limit `-ε_shift`.
pub fn phi_eval(params: &DiscFamilyParams, tau: Complex64) -> Result<Complex64> {
    let modulus = tau.norm();
    if modulus > 1.0 + 4.0 * f64::EPSILON || !modulus.is_finite() {
        return Err(Error::Domain(format!("|τ| = {modulus} exceeds 1")));
    }
    let half_chord = (Complex64::new(1.0, 0.0) - tau) * 0.5;
    if half_chord.norm() == 0.0 {
        return Ok(Complex64::new(-params.shift, 0.0));
    }
    Ok(params.from_half_chord_log(half_chord.ln()))
}

/// Exact `1/|Im φ_α|` on the circle next to its three-term expansion
/// `(1/α) log²(1/4) + 2 log(1/4) log(|1-τ|/2) + α log²(|1-τ|/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpansionCheck {
    pub exact: f64,
    pub expansion: f64,
    pub rel_err: f64,
}

pub fn im_phi_expansion_check(params: &DiscFamilyParams, theta: f64) -> Result<ExpansionCheck> {
    if params.shift != 0.0 {
        return Err(Error::Domain("expansion check needs eps_shift = 0".into()));
    }
    if !(theta > 0.0 && theta < 0.5 * PI) {
        return Err(Error::Domain(format!("theta = {theta} outside (0, π/2)")));
    }
    let exact = 1.0 / params.at_angle(theta).im.abs();
    // |1-τ|/2 = sin(θ/2)
    let l = (0.5 * theta).sin().ln();
    let a = params.alpha;
    let expansion = LN_4 * LN_4 / a - 2.0 * LN_4 * l + a * l * l;
    Ok(ExpansionCheck {
        exact,
        expansion,
        rel_err: (exact - expansion).abs() / exact,
    })
}

/// Largest `|φ_α(e^{iθ}) - 1/log 4|` over `samples` log-spaced angles in
/// `[e^{-δ/α}, π]` together with their mirror images in `[π, 2π - e^{-δ/α}]`.
pub fn concentration_deviation(
    params: &DiscFamilyParams,
    delta: f64,
    samples: usize,
) -> Result<f64> {
    if params.shift != 0.0 {
        return Err(Error::Domain(
            "concentration check needs eps_shift = 0".into(),
        ));
    }
    if !(delta > 0.0 && delta < FAR_POINT) {
        return Err(Error::Domain(format!(
            "delta = {delta} outside (0, 1/log 4)"
        )));
    }
    let lo = (-delta / params.alpha).exp().ln();
    let hi = PI.ln();
    let m = samples.max(2);
    let centre = Complex64::new(FAR_POINT, 0.0);
    let mut worst = 0.0f64;
    for j in 0..m {
        let theta = (lo + (hi - lo) * j as f64 / (m - 1) as f64).exp();
        for t in [theta, 2.0 * PI - theta] {
            worst = worst.max((params.at_angle(t) - centre).norm());
        }
    }
    Ok(worst)
}

/// Whether the arcs away from `τ = 1` land in the `δ`-neighbourhood of `φ_α(-1)`.
pub fn concentration_bound_check(
    params: &DiscFamilyParams,
    delta: f64,
    samples: usize,
) -> Result<bool> {
    Ok(concentration_deviation(params, delta, samples)? <= delta)
}

/// `(1/|φ_α(e^{iθ})|) / (-α log(θ/2))`, which settles to a constant as `θ → 0`.
pub fn modulus_asymptotic_ratio(params: &DiscFamilyParams, theta: f64) -> f64 {
    let phi = params.at_angle(theta);
    (1.0 / phi.norm()) / (-params.alpha * (0.5 * theta).ln())
}
