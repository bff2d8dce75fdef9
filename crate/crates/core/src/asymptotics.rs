//! The integral `F_α = ∫_0^{e^{-δ/α}} e^{-1/|Im φ_α(e^{iθ})|^s} θ^{-2} dθ` and
//! its behaviour as `α → 0`: it vanishes for `s ≥ 1` and blows up for
//! `½ < s < 1`.
//!
//! With `θ = e^{-t}` the integral becomes `∫_{δ/α}^∞ exp(t - E(t)) dt`,
//! `E(t) = |Im φ_α(e^{i e^{-t}})|^{-s}`. The values span thousands of decades,
//! so everything is carried in log space: the integrand is rescaled by its
//! peak before quadrature.

use serde::{Deserialize, Serialize};

use crate::disc_family::DiscFamilyParams;
use crate::error::{Error, Result};
use crate::quad;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FAlphaSpec {
    pub alpha: f64,
    pub s: f64,
    pub delta: f64,
    pub t_max_cap: f64,
    pub rel_tol: f64,
}

pub const DEFAULT_T_MAX_CAP: f64 = 1e7;
pub const DEFAULT_REL_TOL: f64 = 1e-8;

/// Integrand values below this fraction of the peak end the integration.
pub const TAIL_CUTOFF: f64 = 1e-16;

const MAX_SIMPSON_DEPTH: u32 = 50;

impl FAlphaSpec {
    pub fn new(alpha: f64, s: f64, delta: f64) -> Result<Self> {
        let spec = Self {
            alpha,
            s,
            delta,
            t_max_cap: DEFAULT_T_MAX_CAP.max(delta / alpha),
            rel_tol: DEFAULT_REL_TOL,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        DiscFamilyParams::new(self.alpha, 0.0)?;
        if !(self.s > 0.5 && self.s.is_finite()) {
            return Err(Error::Domain(format!("s = {} must exceed 1/2", self.s)));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::Domain(format!("delta = {} must be > 0", self.delta)));
        }
        if !(self.t_max_cap >= self.lower_limit()) {
            return Err(Error::Domain(format!(
                "t_max_cap = {} below delta/alpha = {}",
                self.t_max_cap,
                self.lower_limit()
            )));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::Domain(format!(
                "rel_tol = {} outside (0, 1)",
                self.rel_tol
            )));
        }
        Ok(())
    }

    /// `δ/α`, the lower limit in the log variable.
    pub fn lower_limit(&self) -> f64 {
        self.delta / self.alpha
    }

    /// `t - |Im φ_α(e^{i e^{-t}})|^{-s}`.
    pub fn log_integrand(&self, t: f64) -> f64 {
        log_integrand(self.alpha, self.s, t)
    }
}

/// `t - E(t)` for the given disc parameter and exponent.
pub fn log_integrand(alpha: f64, s: f64, t: f64) -> f64 {
    let disc = DiscFamilyParams { alpha, shift: 0.0 };
    let im = disc.at_log_angle(t).im.abs();
    t - (-s * im.ln()).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    /// `F_α`; under- or overflows for extreme parameters, see `log_value`.
    pub value: f64,
    pub abs_err: f64,
    pub truncated: bool,
    /// Natural logarithm of `F_α`, finite whenever `F_α > 0`.
    pub log_value: f64,
    /// `abs_err / value`.
    pub rel_err: f64,
}

impl QuadratureResult {
    pub fn log10_value(&self) -> f64 {
        self.log_value / std::f64::consts::LN_10
    }

    pub fn log10_abs_err(&self) -> f64 {
        (self.log_value + self.rel_err.ln()) / std::f64::consts::LN_10
    }
}

/// Formats `10^{log10}` in scientific notation without passing through `f64`,
/// so values beyond the double range print correctly.
pub fn format_log10(log10: f64) -> String {
    if log10 == f64::NEG_INFINITY {
        return "0".into();
    }
    if !log10.is_finite() {
        return "inf".into();
    }
    let mut exponent = log10.floor();
    let mut mantissa = 10f64.powf(log10 - exponent);
    if format!("{mantissa:.6}").starts_with("10.") {
        mantissa /= 10.0;
        exponent += 1.0;
    }
    format!("{mantissa:.6}e{}", exponent as i64)
}

/// Maximizer of the concave `ℓ` on `[a, b]` by golden-section search.
fn peak(l: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (l(x1), l(x2));
    while hi - lo > 1e-10 * hi.abs().max(1.0) {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = l(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = l(x1);
        }
    }
    let mid = 0.5 * (lo + hi);
    [a, mid, b]
        .into_iter()
        .max_by(|x, y| l(*x).total_cmp(&l(*y)))
        .unwrap_or(mid)
}

/// Panels `[x_j, x_{j+1}]` of doubling width walking away from `start`
/// towards `limit` until the scaled integrand drops below [`TAIL_CUTOFF`].
fn panels(f: &impl Fn(f64) -> f64, start: f64, limit: f64, width: f64) -> (Vec<(f64, f64)>, bool) {
    let dir = if limit >= start { 1.0 } else { -1.0 };
    let mut out = Vec::new();
    let mut x = start;
    let mut w = width;
    while (limit - x) * dir > 0.0 {
        let next = if (limit - (x + dir * w)) * dir <= 0.0 {
            limit
        } else {
            x + dir * w
        };
        out.push(if dir > 0.0 { (x, next) } else { (next, x) });
        x = next;
        if f(x) < TAIL_CUTOFF {
            return (out, false);
        }
        w *= 2.0;
    }
    (out, true)
}

pub fn f_alpha(spec: &FAlphaSpec) -> Result<QuadratureResult> {
    spec.validate()?;
    let a = spec.lower_limit();
    let cap = spec.t_max_cap;
    let l = |t: f64| spec.log_integrand(t);
    let t_peak = peak(&l, a, cap);
    let m = l(t_peak);
    if !m.is_finite() {
        return Err(Error::NonConvergent(format!(
            "log-integrand not finite at t = {t_peak}"
        )));
    }
    let f = |t: f64| (l(t) - m).exp();

    // Width of the peak from the curvature of ℓ (or its slope at an endpoint).
    let h = 1e-3 * t_peak.max(1.0);
    let curv = -(l(t_peak + h) - 2.0 * m + l((t_peak - h).max(a))) / (h * h);
    let slope = ((m - l(t_peak + h)) / h).abs();
    let mut width = if curv > 0.0 { curv.sqrt().recip() } else { 1.0 };
    if slope > 0.0 {
        width = width.min(slope.recip().max(1e-6));
    }
    width = width.clamp(1e-6, (cap - a).max(1e-6));

    let (right, reached_cap) = panels(&f, t_peak, cap, width);
    let (left, _) = panels(&f, t_peak, a, width);
    let all: Vec<(f64, f64)> = left.into_iter().chain(right).collect();

    // A coarse pass sizes the absolute tolerance for the accurate one.
    let coarse: f64 = all
        .iter()
        .map(|&(x, y)| {
            quad::adaptive_simpson(f, x, y, 1e-3 * (y - x).min(width), MAX_SIMPSON_DEPTH)
                .map(|e| e.value)
        })
        .sum::<Result<f64>>()?;
    let eps = spec.rel_tol * coarse.max(f64::MIN_POSITIVE) / (4.0 * all.len() as f64);
    let mut total = 0.0;
    let mut err = 0.0;
    for &(x, y) in &all {
        let est = quad::adaptive_simpson(f, x, y, eps, MAX_SIMPSON_DEPTH)?;
        total += est.value;
        err += est.abs_err;
    }
    if !(total > 0.0) {
        return Err(Error::NonConvergent(
            "F_alpha quadrature produced no mass".into(),
        ));
    }
    let truncated = reached_cap && f(cap) > spec.rel_tol * total;
    let log_value = m + total.ln();
    Ok(QuadratureResult {
        value: log_value.exp(),
        abs_err: err * m.exp(),
        truncated,
        log_value,
        rel_err: err / total,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Vanishing,
    Diverging,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Vanishing => "vanishing",
            Verdict::Diverging => "diverging",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Final value below which a decreasing sequence counts as vanishing.
pub const VANISHING_THRESHOLD: f64 = 1e-3;
/// Final value above which an increasing sequence counts as diverging.
pub const DIVERGING_THRESHOLD: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanCell {
    pub s: f64,
    pub alpha: f64,
    pub result: Option<QuadratureResult>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DichotomyScan {
    pub delta: f64,
    pub cells: Vec<ScanCell>,
    pub verdicts: Vec<(f64, Verdict)>,
}

impl DichotomyScan {
    /// Writes `s,alpha,f_alpha,abs_err,truncated`; failed cells carry `nan`.
    pub fn write_csv(&self, mut w: impl std::io::Write) -> Result<()> {
        writeln!(w, "s,alpha,f_alpha,abs_err,truncated")?;
        for c in &self.cells {
            match &c.result {
                Some(r) => writeln!(
                    w,
                    "{},{},{},{},{}",
                    c.s,
                    c.alpha,
                    format_log10(r.log10_value()),
                    format_log10(r.log10_abs_err()),
                    r.truncated
                )?,
                None => writeln!(w, "{},{},nan,nan,false", c.s, c.alpha)?,
            }
        }
        Ok(())
    }

    pub fn verdict(&self, s: f64) -> Option<Verdict> {
        self.verdicts.iter().find(|(x, _)| *x == s).map(|(_, v)| *v)
    }
}

/// Classifies one row of log-values taken along decreasing `α`.
pub fn classify(log_values: &[Option<f64>]) -> Verdict {
    let Some(vals) = log_values.iter().copied().collect::<Option<Vec<f64>>>() else {
        return Verdict::Inconclusive;
    };
    let last = *vals.last().unwrap_or(&f64::NAN);
    if vals.windows(2).all(|w| w[1] < w[0]) && last < VANISHING_THRESHOLD.ln() {
        Verdict::Vanishing
    } else if vals.windows(2).all(|w| w[1] > w[0]) && last > DIVERGING_THRESHOLD.ln() {
        Verdict::Diverging
    } else {
        Verdict::Inconclusive
    }
}

/// `F_α` over an `(s, α)` table with a verdict per `s`. Quadrature failures
/// are recorded in their cell.
pub fn dichotomy_scan(s_values: &[f64], alpha_values: &[f64], delta: f64) -> Result<DichotomyScan> {
    if alpha_values.len() < 3 {
        return Err(Error::Domain("need at least three alpha values".into()));
    }
    if alpha_values.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Domain(
            "alpha values must be strictly decreasing".into(),
        ));
    }
    if let Some(s) = s_values.iter().find(|s| !(**s > 0.5)) {
        return Err(Error::Domain(format!("s = {s} must exceed 1/2")));
    }
    let mut specs = Vec::new();
    for &s in s_values {
        for &alpha in alpha_values {
            specs.push(FAlphaSpec::new(alpha, s, delta)?);
        }
    }
    use rayon::prelude::*;
    let cells: Vec<ScanCell> = specs
        .par_iter()
        .map(|spec| {
            let r = f_alpha(spec);
            ScanCell {
                s: spec.s,
                alpha: spec.alpha,
                error: r.as_ref().err().map(|e| e.to_string()),
                result: r.ok(),
            }
        })
        .collect();
    let verdicts = s_values
        .iter()
        .map(|&s| {
            let row: Vec<Option<f64>> = cells
                .iter()
                .filter(|c| c.s == s)
                .map(|c| c.result.map(|r| r.log_value))
                .collect();
            (s, classify(&row))
        })
        .collect();
    Ok(DichotomyScan {
        delta,
        cells,
        verdicts,
    })
}

/// Largest `t` at which the log-integrand `t - E(t)` changes sign from
/// positive to negative, searched up to `t_max`. `None` if it never is positive.
pub fn divergence_onset(alpha: f64, s: f64, delta: f64, t_max: f64) -> Option<f64> {
    let l = |t: f64| log_integrand(alpha, s, t);
    let a = delta / alpha;
    let top = peak(&l, a, t_max);
    if !(l(top) > 0.0) || l(t_max) > 0.0 {
        return None;
    }
    let (mut lo, mut hi) = (top, t_max);
    while hi - lo > 1e-10 * hi {
        let mid = 0.5 * (lo + hi);
        if l(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// The threshold `(2^{1/s}/α)^{s/(2s-1)}` below which the lower bound's exponent is positive.
pub fn onset_bound(alpha: f64, s: f64) -> f64 {
    (2f64.powf(1.0 / s) / alpha).powf(s / (2.0 * s - 1.0))
}

/// Least-squares slope of `log onset` against `log α`; compare with `-s/(2s-1)`.
pub fn onset_scaling_exponent(s: f64, alphas: &[f64], delta: f64, t_max: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = alphas
        .iter()
        .map(|&a| divergence_onset(a, s, delta, t_max).map(|t| (a.ln(), t.ln())))
        .collect::<Option<_>>()?;
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fa(alpha: f64, s: f64) -> QuadratureResult {
        f_alpha(&FAlphaSpec::new(alpha, s, 1.0).unwrap()).unwrap()
    }

    /// Independent oracle: composite Simpson in `t` on a fine uniform mesh,
    /// with `Im φ` from the textbook closed form.
    fn simpson_oracle(alpha: f64, s: f64, t_end: f64, steps: usize) -> f64 {
        let a = 1.0 / alpha;
        let h = (t_end - a) / steps as f64;
        let g = |t: f64| {
            let re = -(4f64.ln()) + alpha * ((-t).exp() / 2.0).sin().ln();
            let im = alpha * ((-t).exp() - std::f64::consts::PI) / 2.0;
            let im_phi = im / (re * re + im * im);
            (t - im_phi.abs().powf(-s)).exp()
        };
        let mut sum = g(a) + g(t_end);
        for j in 1..steps {
            sum += if j % 2 == 1 { 4.0 } else { 2.0 } * g(a + j as f64 * h);
        }
        sum * h / 3.0
    }

    #[test]
    fn spec_validation() {
        assert!(FAlphaSpec::new(0.1, 0.5, 1.0).is_err());
        assert!(FAlphaSpec::new(0.0, 1.0, 1.0).is_err());
        assert!(FAlphaSpec::new(0.1, 1.0, -1.0).is_err());
        let mut s = FAlphaSpec::new(0.1, 1.0, 1.0).unwrap();
        s.t_max_cap = 5.0;
        assert!(f_alpha(&s).is_err());
    }

    #[test]
    fn matches_simpson_oracle() {
        // Reference values from the oracle and from 40-digit mpmath:
        // s=1: 6.95983e-8, 1.83482e-13; s=0.75: 0.0364365, 0.0586190, 2.97498.
        for (alpha, s, t_end, reference) in [
            (0.2, 1.0, 200.0, 6.95983e-8),
            (0.1, 1.0, 200.0, 1.83482e-13),
            (0.2, 0.75, 400.0, 0.0364365),
            (0.1, 0.75, 400.0, 0.0586190),
            (0.05, 0.75, 2000.0, 2.97498),
        ] {
            let oracle = simpson_oracle(alpha, s, t_end, 400_000);
            assert!(
                (oracle / reference - 1.0).abs() < 1e-5,
                "oracle {alpha} {s}: {oracle}"
            );
            let r = fa(alpha, s);
            assert!(
                (r.value / oracle - 1.0).abs() < 1e-6,
                "{alpha} {s}: {} vs {oracle}",
                r.value
            );
            assert!(!r.truncated);
            assert!(r.rel_err < 1e-6);
        }
    }

    #[test]
    fn s1_bound_and_trend() {
        let a = fa(0.1, 1.0);
        assert!(a.value < (-10f64).exp());
        assert!(fa(0.1, 1.0).value < fa(0.2, 1.0).value);
    }

    #[test]
    fn s_three_quarters_grows() {
        let v: Vec<f64> = [0.2, 0.1, 0.05]
            .iter()
            .map(|&a| fa(a, 0.75).value)
            .collect();
        assert!(v[0] < v[1] && v[1] < v[2]);
        // The growth is real but slow on this grid: F_0.05 ≈ 2.975.
        assert!((v[2] - 2.97498).abs() < 1e-4);
        // One more halving of α overshoots every threshold: F_0.025 ≈ 2.4e9.
        assert!(fa(0.025, 0.75).value > 1e9);
    }

    #[test]
    fn tiny_values_stay_representable_in_log_space() {
        let r = fa(0.05, 2.0);
        assert_eq!(r.value, 0.0);
        // 40-digit reference: 2.591044163e-2418
        assert!((r.log10_value() - (-2418.0 + 2.591044163f64.log10())).abs() < 1e-7);
        assert!(format_log10(r.log10_value()).starts_with("2.59104"));
        assert!(format_log10(r.log10_value()).ends_with("e-2418"));
        for (alpha, mantissa, exponent) in [(0.2, 7.253280188, -186.0), (0.1, 4.937252919, -644.0)]
        {
            let r = fa(alpha, 2.0);
            assert!((r.log10_value() - (exponent + f64::log10(mantissa))).abs() < 1e-8);
        }
    }

    #[test]
    fn doubling_the_cap_is_harmless() {
        let mut spec = FAlphaSpec::new(0.1, 0.75, 1.0).unwrap();
        let a = f_alpha(&spec).unwrap();
        spec.t_max_cap *= 2.0;
        let b = f_alpha(&spec).unwrap();
        assert!((a.value - b.value).abs() < spec.rel_tol * a.value);
    }

    #[test]
    fn truncation_flag() {
        let mut spec = FAlphaSpec::new(0.1, 0.6, 1.0).unwrap();
        spec.t_max_cap = 50.0;
        assert!(f_alpha(&spec).unwrap().truncated);
    }

    #[test]
    fn monotone_in_s() {
        for alpha in [0.2, 0.1] {
            let spec = FAlphaSpec::new(alpha, 1.0, 1.0).unwrap();
            // 1/|Im φ| >= 1 on the range is what makes e^{-x^s} decrease in s.
            let ok = (0..500).all(|j| {
                let t = spec.lower_limit() + j as f64;
                DiscFamilyParams { alpha, shift: 0.0 }
                    .at_log_angle(t)
                    .im
                    .abs()
                    <= 1.0
            });
            assert!(ok);
            let vals: Vec<f64> = [0.6, 0.75, 1.0, 1.5, 2.0]
                .iter()
                .map(|&s| fa(alpha, s).log_value)
                .collect();
            assert!(vals.windows(2).all(|w| w[1] < w[0]), "{vals:?}");
        }
    }

    #[test]
    fn classification() {
        let ln = |x: f64| Some(x.ln());
        assert_eq!(classify(&[ln(1.0), ln(0.1), ln(1e-4)]), Verdict::Vanishing);
        assert_eq!(
            classify(&[ln(1.0), ln(0.1), ln(1e-2)]),
            Verdict::Inconclusive
        );
        assert_eq!(classify(&[ln(1.0), ln(5.0), ln(20.0)]), Verdict::Diverging);
        assert_eq!(classify(&[ln(1.0), None, ln(20.0)]), Verdict::Inconclusive);
    }

    #[test]
    fn scan_preconditions() {
        assert!(dichotomy_scan(&[1.0], &[0.2, 0.1], 1.0).is_err());
        assert!(dichotomy_scan(&[1.0], &[0.1, 0.2, 0.05], 1.0).is_err());
        assert!(dichotomy_scan(&[0.4], &[0.2, 0.1, 0.05], 1.0).is_err());
    }

    #[test]
    fn scan_verdicts() {
        let scan = dichotomy_scan(&[1.0, 2.0, 0.75], &[0.2, 0.1, 0.05], 1.0).unwrap();
        assert_eq!(scan.cells.len(), 9);
        assert_eq!(scan.verdict(1.0), Some(Verdict::Vanishing));
        assert_eq!(scan.verdict(2.0), Some(Verdict::Vanishing));
        let mut buf = Vec::new();
        scan.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 10);
        assert!(text.starts_with("s,alpha,f_alpha,abs_err,truncated\n"));
    }

    #[test]
    fn onset_scales_like_the_threshold() {
        for (s, alphas) in [(0.6, [0.2, 0.1, 0.05]), (0.75, [0.01, 0.005, 0.0025])] {
            let slope = onset_scaling_exponent(s, &alphas, 1.0, 1e12).unwrap();
            let expect = -s / (2.0 * s - 1.0);
            assert!(
                (slope / expect - 1.0).abs() < 0.2,
                "s={s}: {slope} vs {expect}"
            );
        }
        assert!(divergence_onset(0.1, 1.0, 1.0, 1e12).is_none());
        assert!(onset_bound(0.1, 0.75) > 10.0);
    }
}
