//! Uniform discretization of the unit circle and the spectral operators that
//! act on boundary traces: Fourier coefficients, the conjugate-function
//! (Hilbert) transform and its normalization at `τ = 1`, the Poisson
//! extension into the disc, and the radial derivative at `τ = 1`.
//!
//! Conventions are fixed by the calibration harmonics: the conjugate operator
//! sends `cos kθ ↦ sin kθ` and `sin kθ ↦ -cos kθ`, and the radial derivative of
//! the harmonic extension of `cos kθ` at `τ = 1` is `k`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;

/// Largest supported node count.
pub const MAX_NODES: usize = 1 << 22;

/// `n` equispaced nodes `θ_k = 2πk/n` on the unit circle, `θ_0 = 0` (`τ = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircleGrid {
    n: usize,
}

impl CircleGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() || n > MAX_NODES {
            return Err(Error::InvalidGrid(n));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    pub fn theta(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / self.n as f64
    }

    /// Node angle mapped into `(-π, π]`.
    pub fn signed_theta(&self, k: usize) -> f64 {
        if 2 * k > self.n {
            -2.0 * PI * (self.n - k) as f64 / self.n as f64
        } else {
            self.theta(k)
        }
    }

    pub fn thetas(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.theta(k)).collect()
    }

    /// The node `τ_k = e^{iθ_k}`, with `τ_0 = 1` exactly.
    pub fn node(&self, k: usize) -> Complex64 {
        let (s, c) = self.theta(k).sin_cos();
        Complex64::new(c, s)
    }
}

/// Samples that can live on a [`CircleGrid`].
pub trait Sample: Copy {
    fn finite(&self) -> bool;
}

impl Sample for f64 {
    fn finite(&self) -> bool {
        self.is_finite()
    }
}

impl Sample for Complex64 {
    fn finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// One finite value per node of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryFunction<T = f64> {
    grid: CircleGrid,
    values: Vec<T>,
}

impl<T: Sample> BoundaryFunction<T> {
    pub fn new(grid: CircleGrid, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::GridMismatch(grid.n(), values.len()));
        }
        if let Some(k) = values.iter().position(|v| !v.finite()) {
            return Err(Error::NonFinite(k));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: CircleGrid, f: impl Fn(f64) -> T) -> Result<Self> {
        Self::new(grid, grid.thetas().into_iter().map(f).collect())
    }

    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn at(&self, k: usize) -> T {
        self.values[k]
    }

    // Result of an operator on a checked input; the caller guarantees finiteness.
    fn derived(grid: CircleGrid, values: Vec<T>) -> Result<Self> {
        Self::new(grid, values)
    }
}

impl BoundaryFunction<f64> {
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.grid, self.values.iter().map(|&x| f(x)).collect())
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        same_grid(self.grid, other.grid)?;
        Self::new(
            self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    /// `sup_k |self_k - other_k|`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        same_grid(self.grid, other.grid)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }
}

pub(crate) fn same_grid(a: CircleGrid, b: CircleGrid) -> Result<()> {
    if a != b {
        return Err(Error::GridMismatch(a.n(), b.n()));
    }
    Ok(())
}

/// Trigonometric interpolation coefficients of a real sample vector:
/// `f(θ) = a_0 + Σ_{1≤k<n/2} (a_k cos kθ + b_k sin kθ) + a_{n/2} cos(nθ/2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierCoeffs {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl FourierCoeffs {
    /// Node count of the grid the coefficients were computed on.
    pub fn n(&self) -> usize {
        2 * (self.a.len() - 1)
    }

    /// Evaluates the trigonometric interpolant at an arbitrary angle.
    pub fn eval(&self, theta: f64) -> f64 {
        self.eval_damped(1.0, theta)
    }

    /// `Σ r^k (a_k cos kθ + b_k sin kθ)`, the harmonic extension of the interpolant.
    pub fn eval_damped(&self, r: f64, theta: f64) -> f64 {
        let half = self.a.len() - 1;
        let step = Complex64::new(r * theta.cos(), r * theta.sin());
        let mut z = Complex64::new(1.0, 0.0);
        let mut sum = self.a[0];
        for k in 1..=half {
            // Re-seed the rotation periodically to keep the recurrence accurate.
            if k % 64 == 0 {
                let (s, c) = (k as f64 * theta).sin_cos();
                z = Complex64::new(c, s) * r.powi(k as i32);
            } else {
                z *= step;
            }
            sum += self.a[k] * z.re + self.b[k] * z.im;
        }
        sum
    }

    /// Samples the interpolant on a grid with at least as many nodes.
    pub fn resample(&self, grid: CircleGrid) -> Result<BoundaryFunction> {
        let n = self.n();
        let m = grid.n();
        if m < n {
            return Err(Error::Domain(format!(
                "cannot resample {n}-node coefficients onto {m} nodes"
            )));
        }
        let half = n / 2;
        let mf = m as f64;
        let mut spec = vec![Complex64::new(0.0, 0.0); m];
        spec[0] = Complex64::new(self.a[0] * mf, 0.0);
        for k in 1..half {
            let c = Complex64::new(self.a[k], -self.b[k]) * (0.5 * mf);
            spec[k] = c;
            spec[m - k] = c.conj();
        }
        if m == n {
            spec[half] = Complex64::new(self.a[half] * mf, 0.0);
        } else {
            let c = Complex64::new(self.a[half] * 0.5 * mf, 0.0);
            spec[half] = c;
            spec[m - half] = c;
        }
        inverse_fft(&mut spec);
        BoundaryFunction::derived(grid, spec.iter().map(|c| c.re / mf).collect())
    }
}

fn forward_fft(buf: &mut [Complex64]) {
    FftPlanner::new().plan_fft_forward(buf.len()).process(buf);
}

fn inverse_fft(buf: &mut [Complex64]) {
    FftPlanner::new().plan_fft_inverse(buf.len()).process(buf);
}

fn real_spectrum(f: &BoundaryFunction) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = f.values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    forward_fft(&mut buf);
    buf
}

pub fn fourier_coeffs(f: &BoundaryFunction) -> FourierCoeffs {
    let n = f.grid.n();
    let half = n / 2;
    let spec = real_spectrum(f);
    let nf = n as f64;
    let mut a = vec![0.0; half + 1];
    let mut b = vec![0.0; half + 1];
    a[0] = spec[0].re / nf;
    for k in 1..half {
        a[k] = 2.0 * spec[k].re / nf;
        b[k] = -2.0 * spec[k].im / nf;
    }
    a[half] = spec[half].re / nf;
    FourierCoeffs { a, b }
}

/// The conjugate-function operator `T`: boundary trace of the harmonic
/// conjugate with zero mean. The Nyquist mode has no conjugate on the grid and
/// is dropped.
pub fn conjugate(f: &BoundaryFunction) -> Result<BoundaryFunction> {
    let n = f.grid.n();
    let half = n / 2;
    let mut spec = real_spectrum(f);
    spec[0] = Complex64::new(0.0, 0.0);
    spec[half] = Complex64::new(0.0, 0.0);
    let minus_i = Complex64::new(0.0, -1.0);
    for k in 1..half {
        spec[k] *= minus_i;
        spec[n - k] *= -minus_i;
    }
    inverse_fft(&mut spec);
    let nf = n as f64;
    BoundaryFunction::derived(f.grid, spec.iter().map(|c| c.re / nf).collect())
}

/// `T_1 f = T f - (T f)(τ = 1)`; vanishes exactly at node 0.
pub fn hilbert_t1(f: &BoundaryFunction) -> Result<BoundaryFunction> {
    let mut t = conjugate(f)?;
    let at_one = t.values[0];
    for v in &mut t.values {
        *v -= at_one;
    }
    Ok(t)
}

/// Harmonic extension of the trigonometric interpolant of `f` at `r e^{iθ}`.
pub fn poisson_extend(f: &BoundaryFunction, r: f64, theta: f64) -> Result<f64> {
    check_radius(r)?;
    Ok(fourier_coeffs(f).eval_damped(r, theta))
}

pub(crate) fn check_radius(r: f64) -> Result<()> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::Domain(format!("radius {r} outside [0, 1)")));
    }
    Ok(())
}

/// How [`radial_derivative`] evaluates `∂_r` of the harmonic extension at `τ = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadialMethod {
    /// `Σ_{k≥1} k a_k`.
    Spectral,
    /// `(1/2π) ∫ (f(0) - f(θ)) / (1 - cos θ) dθ` on a dyadically graded mesh.
    Quadrature,
}

/// Smallest angle reached by the graded mesh.
pub const THETA_MIN: f64 = 1e-12;

/// Radial derivative at `τ = 1` of the harmonic extension of `f`.
pub fn radial_derivative(f: &BoundaryFunction, method: RadialMethod) -> Result<f64> {
    let c = fourier_coeffs(f);
    match method {
        RadialMethod::Spectral => Ok(c
            .a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, a)| k as f64 * a)
            .sum()),
        RadialMethod::Quadrature => {
            // Symmetrized numerator 2f(0) - f(θ) - f(-θ) = Σ 4 a_k sin²(kθ/2),
            // evaluated without cancellation; only modes that carry weight enter.
            let scale = c.a.iter().fold(0.0f64, |m, a| m.max(a.abs()));
            let modes: Vec<(f64, f64)> =
                c.a.iter()
                    .enumerate()
                    .skip(1)
                    .filter(|(_, a)| a.abs() > 1e-17 * scale)
                    .map(|(k, &a)| (k as f64, a))
                    .collect();
            let even_part = |theta: f64| {
                let s = (0.5 * theta).sin();
                if s == 0.0 {
                    return 0.0;
                }
                let num: f64 = modes
                    .iter()
                    .map(|&(k, a)| {
                        let sk = (0.5 * k * theta).sin();
                        2.0 * a * sk * sk
                    })
                    .sum();
                num / (s * s)
            };
            graded_half_circle(even_part, scale.max(f64::MIN_POSITIVE))
        }
    }
}

/// Quadrature route for a boundary trace given as a function of `θ ∈ [-π, π]`
/// rather than as grid samples. Accurate when `f(0) - f(θ)` is computed without
/// cancellation near `θ = 0`, e.g. for traces vanishing there.
pub fn radial_derivative_of(f: impl Fn(f64) -> f64) -> Result<f64> {
    let f0 = f(0.0);
    let scale = f0.abs().max(f(PI).abs()).max(f(0.5 * PI).abs());
    let even_part = |theta: f64| {
        let s = (0.5 * theta).sin();
        let denom = 2.0 * s * s;
        if denom == 0.0 {
            return 0.0;
        }
        let num = 2.0 * f0 - f(theta) - f(-theta);
        // 2 (2f(0) - f(θ) - f(-θ)) / (2 (1 - cos θ)) folds [-π, π] onto [0, π].
        num / denom
    };
    graded_half_circle(even_part, scale.max(f64::MIN_POSITIVE))
}

// (1/2π) ∫_0^π g(θ) dθ on panels [π 2^{-j-1}, π 2^{-j}] down to THETA_MIN.
fn graded_half_circle(g: impl Fn(f64) -> f64, scale: f64) -> Result<f64> {
    let mut total = 0.0;
    let mut hi = PI;
    let mut last = 0.0;
    while hi > THETA_MIN {
        let lo = (0.5 * hi).max(THETA_MIN);
        let est = quad::gauss_kronrod(&g, lo, hi, 1e-15 * scale * (hi - lo), 1e-12, 4000)?;
        total += est.value;
        last = est.value;
        hi = lo;
    }
    // Mass still arriving at the innermost panel means the kernel singularity
    // is not integrable for this trace.
    if last.abs() > 1e-8 * total.abs().max(scale) {
        return Err(Error::NonConvergent(format!(
            "radial-derivative integrand not resolved at θ = {THETA_MIN:e} (innermost panel {last:e})"
        )));
    }
    Ok(total / (2.0 * PI))
}

/// Derivative in `θ` of the trigonometric interpolant, sampled on the grid.
pub fn spectral_derivative(f: &BoundaryFunction) -> Result<BoundaryFunction> {
    let n = f.grid.n();
    let half = n / 2;
    let mut spec = real_spectrum(f);
    spec[0] = Complex64::new(0.0, 0.0);
    spec[half] = Complex64::new(0.0, 0.0);
    for k in 1..half {
        let ik = Complex64::new(0.0, k as f64);
        spec[k] *= ik;
        spec[n - k] *= -ik;
    }
    inverse_fft(&mut spec);
    let nf = n as f64;
    BoundaryFunction::derived(f.grid, spec.iter().map(|c| c.re / nf).collect())
}

/// Complex Fourier coefficients `c_k`, `k ∈ [0, n)`, of `u + iv`.
fn complex_coeffs(u: &BoundaryFunction, v: &BoundaryFunction) -> Result<Vec<Complex64>> {
    same_grid(u.grid, v.grid)?;
    let n = u.grid.n();
    let mut buf: Vec<Complex64> = u
        .values
        .iter()
        .zip(&v.values)
        .map(|(&a, &b)| Complex64::new(a, b))
        .collect();
    forward_fft(&mut buf);
    let nf = n as f64;
    buf.iter_mut().for_each(|c| *c /= nf);
    Ok(buf)
}

/// Largest modulus among the negative-frequency coefficients `c_{-k}`,
/// `1 ≤ k < n/2`, of `u + iv`. Zero (to rounding) iff `u + iv` is the trace of
/// a holomorphic function on the disc.
pub fn holomorphy_defect(u: &BoundaryFunction, v: &BoundaryFunction) -> Result<f64> {
    let c = complex_coeffs(u, v)?;
    let n = c.len();
    Ok((1..n / 2).fold(0.0, |m, k| m.max(c[n - k].norm())))
}

/// `Σ_{0≤k<n/2} c_k τ^k`: the holomorphic extension of the nonnegative-frequency
/// part of `u + iv` to `|τ| < 1`.
pub fn holomorphic_extension(
    u: &BoundaryFunction,
    v: &BoundaryFunction,
    tau: Complex64,
) -> Result<Complex64> {
    if tau.norm() >= 1.0 {
        return Err(Error::Domain(format!("|τ| = {} is not < 1", tau.norm())));
    }
    let c = complex_coeffs(u, v)?;
    let n = c.len();
    // Horner.
    Ok(c[..n / 2]
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, ck| acc * tau + ck))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> CircleGrid {
        CircleGrid::new(n).unwrap()
    }

    fn sampled(n: usize, f: impl Fn(f64) -> f64) -> BoundaryFunction {
        BoundaryFunction::from_fn(grid(n), f).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(CircleGrid::new(4).is_err());
        assert!(CircleGrid::new(100).is_err());
        assert!(CircleGrid::new(1 << 23).is_err());
        let g = grid(16);
        assert_eq!(g.theta(0), 0.0);
        assert!(g.thetas().windows(2).all(|w| w[0] < w[1]));
        assert!(g.theta(15) < 2.0 * PI);
        assert_eq!(g.signed_theta(15), -g.spacing());
    }

    #[test]
    fn rejects_non_finite_and_short_samples() {
        let g = grid(8);
        assert!(matches!(
            BoundaryFunction::new(g, vec![0.0; 7]),
            Err(Error::GridMismatch(8, 7))
        ));
        let mut v = vec![0.0; 8];
        v[3] = f64::NAN;
        assert!(matches!(
            BoundaryFunction::new(g, v),
            Err(Error::NonFinite(3))
        ));
    }

    #[test]
    fn conjugate_harmonics() {
        let n = 64;
        let t = conjugate(&sampled(n, f64::cos)).unwrap();
        let expect = sampled(n, f64::sin);
        assert!(t.distance(&expect).unwrap() < 1e-14);

        let t = conjugate(&sampled(n, |_| 5.0)).unwrap();
        assert!(t.sup_norm() < 1e-14);

        let t = conjugate(&sampled(n, |x| (3.0 * x).sin())).unwrap();
        let expect = sampled(n, |x| -(3.0 * x).cos());
        assert!(t.distance(&expect).unwrap() < 1e-14);
    }

    #[test]
    fn t1_harmonics() {
        let n = 64;
        let t = hilbert_t1(&sampled(n, f64::cos)).unwrap();
        assert!(t.distance(&sampled(n, f64::sin)).unwrap() < 1e-14);
        let t = hilbert_t1(&sampled(n, f64::sin)).unwrap();
        assert_eq!(t.at(0), 0.0);
        assert!(t.distance(&sampled(n, |x| 1.0 - x.cos())).unwrap() < 1e-14);
        let t = hilbert_t1(&sampled(n, |x| (2.0 * x).sin())).unwrap();
        assert!(t.distance(&sampled(n, |x| 1.0 - (2.0 * x).cos())).unwrap() < 1e-14);
    }

    #[test]
    fn poisson_examples() {
        let c = sampled(32, |_| 2.5);
        assert!((poisson_extend(&c, 0.7, 1.1).unwrap() - 2.5).abs() < 1e-14);
        let f = sampled(32, |x| (3.0 * x).cos());
        let got = poisson_extend(&f, 0.6, 0.4).unwrap();
        assert!((got - 0.6f64.powi(3) * 1.2f64.cos()).abs() < 1e-14);
        let g = sampled(32, |x| (x.sin() * 2.0).exp());
        assert!((poisson_extend(&g, 0.0, 0.3).unwrap() - g.mean()).abs() < 1e-14);
        assert!(poisson_extend(&g, 1.0, 0.0).is_err());
        assert!(poisson_extend(&g, -0.1, 0.0).is_err());
    }

    #[test]
    fn poisson_boundary_limit() {
        let f = sampled(64, |x| (2.0 * x).cos() - 0.3 * (5.0 * x).sin() + 0.1);
        let mut prev = f64::INFINITY;
        for j in 2..12 {
            let r = 1.0 - 2f64.powi(-j);
            let err = (0..64)
                .map(|k| (poisson_extend(&f, r, f.grid().theta(k)).unwrap() - f.at(k)).abs())
                .fold(0.0, f64::max);
            assert!(err < prev);
            prev = err;
        }
        assert!(prev < 1e-2);
    }

    #[test]
    fn radial_derivative_examples() {
        let n = 256;
        for k in [1, 3, 7] {
            let f = sampled(n, |x| (k as f64 * x).cos());
            for m in [RadialMethod::Spectral, RadialMethod::Quadrature] {
                let d = radial_derivative(&f, m).unwrap();
                assert!((d - k as f64).abs() < 1e-9 * k as f64, "{m:?} k={k}: {d}");
            }
            let g = sampled(n, |x| (k as f64 * x).sin());
            assert!(radial_derivative(&g, RadialMethod::Spectral).unwrap().abs() < 1e-12);
            assert!(
                radial_derivative(&g, RadialMethod::Quadrature)
                    .unwrap()
                    .abs()
                    < 1e-12
            );
        }
        let f = sampled(n, |x| 2.0 * x.cos() + 0.5 * (3.0 * x).cos());
        for m in [RadialMethod::Spectral, RadialMethod::Quadrature] {
            assert!((radial_derivative(&f, m).unwrap() - 3.5).abs() < 1e-9);
        }
    }

    #[test]
    fn radial_derivative_of_callable() {
        let d = radial_derivative_of(|x| -2.0 * (2.0 * x).sin().powi(2)).unwrap();
        assert!((d - 4.0).abs() < 1e-9);
        // |θ|^{1/2} has a non-integrable kernel singularity.
        assert!(matches!(
            radial_derivative_of(|x: f64| x.abs().sqrt()),
            Err(Error::NonConvergent(_))
        ));
    }

    #[test]
    fn fourier_examples() {
        let c = fourier_coeffs(&sampled(16, |x| (2.0 * x).cos()));
        for (k, a) in c.a.iter().enumerate() {
            let expect = if k == 2 { 1.0 } else { 0.0 };
            assert!((a - expect).abs() < 1e-15);
        }
        assert!(c.b.iter().all(|b| b.abs() < 1e-15));
        let c = fourier_coeffs(&sampled(16, |_| 1.0));
        assert!((c.a[0] - 1.0).abs() < 1e-15);
        assert!(c.a[1..].iter().chain(&c.b).all(|x| x.abs() < 1e-15));
    }

    #[test]
    fn resample_reproduces_interpolant() {
        let f = sampled(32, |x| (x.cos() * 1.5).exp());
        let c = fourier_coeffs(&f);
        let fine = c.resample(grid(128)).unwrap();
        for k in (0..128).step_by(5) {
            assert!((fine.at(k) - c.eval(fine.grid().theta(k))).abs() < 1e-13);
        }
        let same = c.resample(grid(32)).unwrap();
        assert!(same.distance(&f).unwrap() < 1e-14);
        assert!(c.resample(grid(16)).is_err());
    }

    #[test]
    fn holomorphy_defect_examples() {
        let u = sampled(64, f64::cos);
        let v = sampled(64, f64::sin);
        assert!(holomorphy_defect(&u, &v).unwrap() < 1e-15);
        let vbar = sampled(64, |x| -x.sin());
        assert!((holomorphy_defect(&u, &vbar).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn spectral_derivative_of_harmonic() {
        let d = spectral_derivative(&sampled(64, |x| (3.0 * x).sin())).unwrap();
        assert!(d.distance(&sampled(64, |x| 3.0 * (3.0 * x).cos())).unwrap() < 1e-12);
    }

    #[test]
    fn holomorphic_extension_of_tau_squared() {
        let u = sampled(32, |x| (2.0 * x).cos());
        let v = sampled(32, |x| (2.0 * x).sin());
        let tau = Complex64::new(0.3, -0.4);
        let w = holomorphic_extension(&u, &v, tau).unwrap();
        assert!((w - tau * tau).norm() < 1e-15);
        assert!(holomorphic_extension(&u, &v, Complex64::new(1.0, 0.0)).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn band_limited(coef: &[(f64, f64)], x: f64) -> f64 {
            coef.iter()
                .enumerate()
                .map(|(k, (a, b))| a * (k as f64 * x).cos() + b * (k as f64 * x).sin())
                .sum()
        }

        proptest! {
            #[test]
            fn t_squared_is_minus_identity_plus_mean(
                coef in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..32)
            ) {
                let f = sampled(128, |x| band_limited(&coef, x));
                let tt = conjugate(&conjugate(&f).unwrap()).unwrap();
                let mean = f.mean();
                let err = tt.values().iter().zip(f.values())
                    .map(|(t, v)| (t + v - mean).abs()).fold(0.0, f64::max);
                prop_assert!(err < 1e-12);
            }

            #[test]
            fn fourier_round_trip(
                coef in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..60)
            ) {
                let f = sampled(128, |x| band_limited(&coef, x));
                let c = fourier_coeffs(&f);
                let back = c.resample(f.grid()).unwrap();
                prop_assert!(back.distance(&f).unwrap() < 1e-12 * f.sup_norm().max(1.0));
            }

            #[test]
            fn radial_methods_agree(
                coef in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2..16)
            ) {
                let f = sampled(64, |x| band_limited(&coef, x));
                let s = radial_derivative(&f, RadialMethod::Spectral).unwrap();
                let q = radial_derivative(&f, RadialMethod::Quadrature).unwrap();
                prop_assert!((s - q).abs() <= 1e-6 * s.abs().max(1.0));
            }
        }
    }
}
