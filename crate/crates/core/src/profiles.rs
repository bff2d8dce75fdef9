//! Exponentially flat profiles `e^{-1/|y₁|^s}`, the bump-deformed surface used
//! by the propagation experiment, and a flatness-order test for profiles
//! composed with the disc family.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::disc_family::DiscFamilyParams;
use crate::error::{Error, Result};

/// Exponents below this are flushed to an exact zero.
pub const UNDERFLOW_EXPONENT: f64 = -700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    /// `h = e^{-1/|y₁|^s}`, `y₁ = Im z₁`.
    ExpAbsY,
    /// `h = e^{-1/|z₁|^s}`.
    ExpAbsZ,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlatProfile {
    pub kind: ProfileKind,
    pub s: f64,
}

impl FlatProfile {
    pub fn new(kind: ProfileKind, s: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::Domain(format!(
                "flatness exponent s = {s} must be > 0"
            )));
        }
        Ok(Self { kind, s })
    }

    pub fn exp_abs_y(s: f64) -> Result<Self> {
        Self::new(ProfileKind::ExpAbsY, s)
    }

    /// The real argument the profile sees at `z₁`.
    pub fn argument(&self, z1: Complex64) -> f64 {
        match self.kind {
            ProfileKind::ExpAbsY => z1.im,
            ProfileKind::ExpAbsZ => z1.norm(),
        }
    }

    /// `h` at `z₁`.
    pub fn at(&self, z1: Complex64) -> f64 {
        profile_eval(self, self.argument(z1), 0)
    }

    /// `-1/|x|^s`, the logarithm of the profile at argument `x`.
    pub fn log_value(&self, x: f64) -> f64 {
        let a = x.abs();
        if a == 0.0 {
            return f64::NEG_INFINITY;
        }
        -(-self.s * a.ln()).exp()
    }
}

/// Value (`order = 0`) or derivative (`order = 1, 2`) in `y` of `e^{-1/|y|^s}`.
/// Exactly zero at `y = 0` and wherever the exponent drops below
/// [`UNDERFLOW_EXPONENT`].
pub fn profile_eval(p: &FlatProfile, y: f64, order: u8) -> f64 {
    let x = y.abs();
    if x == 0.0 {
        return 0.0;
    }
    let ln_x = x.ln();
    let exponent = -(-p.s * ln_x).exp();
    if exponent < UNDERFLOW_EXPONENT {
        return 0.0;
    }
    let g = exponent.exp();
    let s = p.s;
    match order {
        0 => g,
        1 => {
            // d/dx e^{-x^{-s}} = s x^{-s-1} e^{-x^{-s}}
            let d = s * (-(s + 1.0) * ln_x).exp() * g;
            d.copysign(y)
        }
        _ => {
            let a = s * s * (-(2.0 * s + 2.0) * ln_x).exp();
            let b = s * (s + 1.0) * (-(s + 2.0) * ln_x).exp();
            (a - b) * g
        }
    }
}

/// Quintic smoothstep `6x⁵ - 15x⁴ + 10x³` on `[0, 1]`, clamped outside.
fn smoothstep(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    x * x * x * (x * (6.0 * x - 15.0) + 10.0)
}

/// The flat profile near `τ = 1` blended into a constant `-ηδ/2` away from it.
///
/// Along the circle: the base profile composed with `φ_α` on
/// `|θ| ≤ e^{-ε/2α}`, the constant on `2e^{-ε/2α} ≤ |θ| ≤ π`, and a quintic
/// smoothstep in `log₂(|θ| e^{ε/2α})` across the annulus in between.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BumpDeformation {
    pub base: FlatProfile,
    pub delta: f64,
    pub eps_window: f64,
    pub alpha: f64,
    pub eta: f64,
}

impl BumpDeformation {
    pub fn new(
        base: FlatProfile,
        delta: f64,
        eps_window: f64,
        alpha: f64,
        eta: f64,
    ) -> Result<Self> {
        let d = Self {
            base,
            delta,
            eps_window,
            alpha,
            eta,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::Domain(format!(
                "bump depth delta = {} must be > 0",
                self.delta
            )));
        }
        if !(self.eps_window > 0.0 && self.eps_window.is_finite()) {
            return Err(Error::Domain(format!(
                "eps_window = {} must be > 0",
                self.eps_window
            )));
        }
        if !(-1.0..=1.0).contains(&self.eta) {
            return Err(Error::Domain(format!("eta = {} outside [-1, 1]", self.eta)));
        }
        DiscFamilyParams::new(self.alpha, 0.0)?;
        Ok(())
    }

    pub fn with_eta(&self, eta: f64) -> Self {
        Self { eta, ..*self }
    }

    /// `e^{-ε/2α}`, where the blend starts.
    pub fn inner_radius(&self) -> f64 {
        (-self.eps_window / (2.0 * self.alpha)).exp()
    }

    /// Height on the far arc.
    pub fn far_value(&self) -> f64 {
        -0.5 * self.eta * self.delta
    }

    /// Blend weight of the far value at angle `θ ∈ [-π, π]`.
    pub fn weight(&self, theta: f64) -> f64 {
        let a = theta.abs();
        let inner = self.inner_radius();
        if a <= inner {
            0.0
        } else if a >= 2.0 * inner {
            1.0
        } else {
            smoothstep((a / inner).log2())
        }
    }

    /// Height over the boundary point at angle `θ` whose first coordinate is `z₁`.
    pub fn height_at(&self, theta: f64, z1: Complex64) -> f64 {
        let w = self.weight(theta);
        if w == 1.0 {
            return self.far_value();
        }
        let h = self.base.at(z1);
        (1.0 - w) * h + w * self.far_value()
    }
}

/// `h̃(θ, y₂)` with the first coordinate `φ_α(e^{iθ})`; `θ ∈ [-π, π]`.
/// The flat profiles do not depend on `y₂`.
pub fn tilde_h_eval(d: &BumpDeformation, theta: f64, _y2: f64) -> Result<f64> {
    if !(-PI..=PI).contains(&theta) {
        return Err(Error::Domain(format!("theta = {theta} outside [-π, π]")));
    }
    let disc = DiscFamilyParams {
        alpha: d.alpha,
        shift: 0.0,
    };
    Ok(d.height_at(theta, disc.at_angle(theta)))
}

/// Which part of `φ_α` the flat profile is composed with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Composition {
    /// `e^{-1/|Im φ_α|^s}`.
    ImPart,
    /// `e^{-1/|φ_α|^s}`.
    Modulus,
}

/// Logarithm of the composed profile at `e^{iθ}`, i.e. `-1/|Im φ_α|^s` or
/// `-1/|φ_α|^s`.
pub fn composed_log_profile(disc: &DiscFamilyParams, s: f64, comp: Composition, theta: f64) -> f64 {
    let phi = disc.at_angle(theta);
    let x = match comp {
        Composition::ImPart => phi.im.abs(),
        Composition::Modulus => phi.norm(),
    };
    -(-s * x.ln()).exp()
}

/// Logarithm of `|d/dθ g(θ)|` for `g = exp(log_g)`, by a central difference of
/// `log_g` in `log θ`.
pub fn log_abs_derivative(log_g: impl Fn(f64) -> f64, theta: f64) -> f64 {
    let h: f64 = 1e-4;
    let slope = (log_g(theta * h.exp()) - log_g(theta * (-h).exp())) / (2.0 * h);
    log_g(theta) + slope.abs().ln() - theta.ln()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlatnessReport {
    pub k: f64,
    pub thetas: Vec<f64>,
    /// `g(θ_j)/θ_j^k`; may underflow to 0 or overflow to ∞ for extreme grids.
    pub ratios: Vec<f64>,
    /// `log g(θ_j) - k log θ_j`, always finite for a positive profile.
    pub log_ratios: Vec<f64>,
    pub verdict: bool,
}

/// Relative drop of `g/θ^k` required for a positive verdict.
pub const FLATNESS_DROP: f64 = 1e-10;

/// Tests `g = O(θ^k)` with a vanishing constant along a decreasing grid: the
/// verdict is positive when the last ratio `g/θ^k` has dropped below
/// `1e-10` of the first and is still decreasing. `g` is passed as its logarithm.
pub fn flatness_order_check(
    log_g: impl Fn(f64) -> f64,
    k: f64,
    theta_grid: &[f64],
) -> Result<FlatnessReport> {
    if theta_grid.len() < 2 {
        return Err(Error::Domain(
            "flatness check needs at least two angles".into(),
        ));
    }
    if theta_grid.iter().any(|&t| !(t > 0.0)) || theta_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Domain(
            "theta grid must be positive and strictly decreasing".into(),
        ));
    }
    let log_ratios: Vec<f64> = theta_grid.iter().map(|&t| log_g(t) - k * t.ln()).collect();
    let ratios = log_ratios.iter().map(|l| l.exp()).collect();
    let m = log_ratios.len();
    let first = log_ratios[0];
    let last = log_ratios[m - 1];
    let verdict = last < first + FLATNESS_DROP.ln() && last < log_ratios[m - 2];
    Ok(FlatnessReport {
        k,
        thetas: theta_grid.to_vec(),
        ratios,
        log_ratios,
        verdict,
    })
}

/// `10^{-a}, 10^{-a-1}, …, 10^{-b}`.
pub fn decade_grid(a: i32, b: i32) -> Vec<f64> {
    (a..=b).map(|j| 10f64.powi(-j)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bump(eta: f64) -> BumpDeformation {
        BumpDeformation::new(FlatProfile::exp_abs_y(1.0).unwrap(), 0.2, 0.2, 0.1, eta).unwrap()
    }

    #[test]
    fn profile_values() {
        let p1 = FlatProfile::exp_abs_y(1.0).unwrap();
        assert_eq!(profile_eval(&p1, 0.0, 0), 0.0);
        assert!((profile_eval(&p1, 0.5, 0) - (-2.0f64).exp()).abs() < 1e-16);
        let p2 = FlatProfile::exp_abs_y(2.0).unwrap();
        // e^{-100} = 3.720075976020836e-44
        let v = profile_eval(&p2, 0.1, 0);
        assert!((v / 3.720_075_976_020_836e-44 - 1.0).abs() < 1e-13);
        assert_eq!(profile_eval(&p2, 0.01, 0), 0.0);
        assert!(FlatProfile::exp_abs_y(0.0).is_err());
    }

    #[test]
    fn profile_derivatives_match_finite_differences() {
        let p = FlatProfile::exp_abs_y(1.3).unwrap();
        for y in [-0.7, -0.2, 0.15, 0.4, 0.9] {
            let h = 1e-5;
            let d1 = (profile_eval(&p, y + h, 0) - profile_eval(&p, y - h, 0)) / (2.0 * h);
            let d2 = (profile_eval(&p, y + h, 1) - profile_eval(&p, y - h, 1)) / (2.0 * h);
            assert!((profile_eval(&p, y, 1) - d1).abs() < 1e-8, "{y}");
            assert!((profile_eval(&p, y, 2) - d2).abs() < 1e-7, "{y}");
        }
    }

    #[test]
    fn profile_even_and_increasing() {
        let p = FlatProfile::exp_abs_y(0.8).unwrap();
        let mut prev = 0.0;
        for j in 1..100 {
            let y = j as f64 / 100.0;
            let v = profile_eval(&p, y, 0);
            assert_eq!(v, profile_eval(&p, -y, 0));
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn tilde_h_cases() {
        let d = bump(1.0);
        assert_eq!(tilde_h_eval(&d, 0.0, 0.0).unwrap(), 0.0);
        assert_eq!(tilde_h_eval(&d, PI, 0.0).unwrap(), -0.1);
        assert_eq!(tilde_h_eval(&d, -PI, 0.3).unwrap(), -0.1);
        assert!(tilde_h_eval(&d, 4.0, 0.0).is_err());
        let inner = d.inner_radius();
        let disc = DiscFamilyParams::new(0.1, 0.0).unwrap();
        let base = d.base.at(disc.at_angle(0.5 * inner));
        assert_eq!(tilde_h_eval(&d, 0.5 * inner, 0.0).unwrap(), base);
    }

    #[test]
    fn tilde_h_is_c2_across_junctions() {
        let d = bump(1.0);
        let f = |t: f64| tilde_h_eval(&d, t, 0.0).unwrap();
        let inner = d.inner_radius();
        for j in [inner, 2.0 * inner] {
            let h = 1e-5;
            // one-sided first and second differences on each side of the junction
            let left1 = (f(j) - f(j - h)) / h;
            let right1 = (f(j + h) - f(j)) / h;
            let left2 = (f(j) - 2.0 * f(j - h) + f(j - 2.0 * h)) / (h * h);
            let right2 = (f(j + 2.0 * h) - 2.0 * f(j + h) + f(j)) / (h * h);
            assert!((f(j + 1e-12) - f(j - 1e-12)).abs() < 1e-8);
            assert!((left1 - right1).abs() < 1e-3, "{left1} {right1}");
            assert!((left2 - right2).abs() < 1e-1, "{left2} {right2}");
        }
    }

    #[test]
    fn neutral_bump_keeps_base_and_vanishes_far() {
        let d = bump(0.0);
        let disc = DiscFamilyParams::new(0.1, 0.0).unwrap();
        let t = 0.3 * d.inner_radius();
        assert_eq!(
            tilde_h_eval(&d, t, 0.0).unwrap(),
            d.base.at(disc.at_angle(t))
        );
        assert_eq!(tilde_h_eval(&d, 2.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn bump_validation() {
        let base = FlatProfile::exp_abs_y(1.0).unwrap();
        assert!(BumpDeformation::new(base, 0.0, 0.2, 0.1, 1.0).is_err());
        assert!(BumpDeformation::new(base, 0.2, 0.2, 0.1, 1.5).is_err());
        assert!(BumpDeformation::new(base, 0.2, 0.2, 0.0, 1.0).is_err());
    }

    #[test]
    fn composed_profile_flatness() {
        let disc = DiscFamilyParams::new(0.1, 0.0).unwrap();
        // The O(θ^k) decay only takes over once log²θ beats k·|log θ|; past
        // θ = 1e-300 every k <= 8 has dropped by far more than 1e-10.
        let deep = decade_grid(1, 300);
        let im = |s: f64| move |t: f64| composed_log_profile(&disc, s, Composition::ImPart, t);
        let r = flatness_order_check(im(1.0), 5.0, &deep).unwrap();
        assert!(r.verdict);
        let r = flatness_order_check(
            |t| composed_log_profile(&disc, 2.0, Composition::Modulus, t),
            5.0,
            &deep,
        )
        .unwrap();
        assert!(r.verdict);
        for grid in [decade_grid(1, 8), deep] {
            assert!(!flatness_order_check(im(0.4), 3.0, &grid).unwrap().verdict);
        }
    }

    #[test]
    fn composed_ratios_on_the_short_grid() {
        // 50-digit reference: g/θ for s = 1, α = 0.1 at θ = 1e-1 and 1e-8.
        let disc = DiscFamilyParams::new(0.1, 0.0).unwrap();
        let r = flatness_order_check(
            |t| composed_log_profile(&disc, 1.0, Composition::ImPart, t),
            1.0,
            &decade_grid(1, 8),
        )
        .unwrap();
        assert!((r.ratios[0] / 6.56e-8 - 1.0).abs() < 1e-2);
        assert!((r.ratios[7] / 7.34e-23 - 1.0).abs() < 1e-2);
        assert!(r.verdict);
    }

    #[test]
    fn derivative_of_composed_profile_is_flat() {
        let disc = DiscFamilyParams::new(0.1, 0.0).unwrap();
        for (s, k) in [(0.75, 1.0), (1.0, 3.0)] {
            let log_g = |t: f64| composed_log_profile(&disc, s, Composition::ImPart, t);
            let r = flatness_order_check(|t| log_abs_derivative(log_g, t), k, &decade_grid(1, 300))
                .unwrap();
            assert!(r.verdict, "s = {s}");
        }
    }

    #[test]
    fn flatness_grid_validation() {
        assert!(flatness_order_check(|_| 0.0, 1.0, &[0.1]).is_err());
        assert!(flatness_order_check(|_| 0.0, 1.0, &[0.1, 0.2]).is_err());
        assert!(flatness_order_check(|_| 0.0, 1.0, &[0.1, -0.01]).is_err());
    }
}
