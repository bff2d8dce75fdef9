//! Bishop's equation `v = T_1(h(φ, v))` on the discretized circle.
//!
//! Given the first component `φ` of a disc and a graph `x₂ = h(z₁, y₂)`, the
//! fixed point `v` of the map above is the boundary value of `Im z₂`; the real
//! part follows as `u = -T_1 v`, and `A = (φ, u + iv)` is a holomorphic disc
//! whose boundary lies on the graph. The map is solved by Picard iteration.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circle::{
    self, check_radius, fourier_coeffs, hilbert_t1, BoundaryFunction, CircleGrid, MAX_NODES,
};
use crate::disc_family::DiscFamilyParams;
use crate::error::{Error, Result};
use crate::profiles::{BumpDeformation, FlatProfile};

/// A real hypersurface `x₂ = h(z₁, y₂)` over the boundary of a disc. The angle
/// `θ ∈ (-π, π]` of the boundary point is passed along for surfaces that are
/// prescribed in the disc parameter.
pub trait Surface: Sync {
    fn height(&self, theta: f64, z1: Complex64, y2: f64) -> f64;

    /// Smallest grid size resolving the surface, if it has small features.
    fn required_nodes(&self) -> Option<usize> {
        None
    }

    /// The disc parameter the surface was built for, if it depends on one.
    fn alpha(&self) -> Option<f64> {
        None
    }
}

impl Surface for FlatProfile {
    fn height(&self, _theta: f64, z1: Complex64, _y2: f64) -> f64 {
        self.at(z1)
    }
}

impl Surface for BumpDeformation {
    fn height(&self, theta: f64, z1: Complex64, _y2: f64) -> f64 {
        self.height_at(theta, z1)
    }

    fn required_nodes(&self) -> Option<usize> {
        // 2π/n <= e^{-ε/2α}/16
        let min = 32.0 * PI / self.inner_radius();
        Some(if min > (1u64 << 62) as f64 {
            usize::MAX
        } else {
            (min.ceil() as usize).next_power_of_two().max(8)
        })
    }

    fn alpha(&self) -> Option<f64> {
        Some(self.alpha)
    }
}

/// The graph `x₂ = 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct FlatPlane;

impl Surface for FlatPlane {
    fn height(&self, _theta: f64, _z1: Complex64, _y2: f64) -> f64 {
        0.0
    }
}

/// A surface given by a closure `(θ, z₁, y₂) ↦ x₂`.
pub struct FnSurface<F>(pub F);

impl<F: Fn(f64, Complex64, f64) -> f64 + Sync> Surface for FnSurface<F> {
    fn height(&self, theta: f64, z1: Complex64, y2: f64) -> f64 {
        (self.0)(theta, z1, y2)
    }
}

impl<S: Surface + ?Sized> Surface for &S {
    fn height(&self, theta: f64, z1: Complex64, y2: f64) -> f64 {
        (**self).height(theta, z1, y2)
    }
    fn required_nodes(&self) -> Option<usize> {
        (**self).required_nodes()
    }
    fn alpha(&self) -> Option<f64> {
        (**self).alpha()
    }
}

/// Serializable choice between the undeformed and the bump-deformed surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SurfaceSpec {
    Flat(FlatProfile),
    Bump(BumpDeformation),
}

impl Surface for SurfaceSpec {
    fn height(&self, theta: f64, z1: Complex64, y2: f64) -> f64 {
        match self {
            SurfaceSpec::Flat(p) => p.height(theta, z1, y2),
            SurfaceSpec::Bump(b) => b.height(theta, z1, y2),
        }
    }
    fn required_nodes(&self) -> Option<usize> {
        match self {
            SurfaceSpec::Flat(_) => None,
            SurfaceSpec::Bump(b) => b.required_nodes(),
        }
    }
    fn alpha(&self) -> Option<f64> {
        match self {
            SurfaceSpec::Flat(_) => None,
            SurfaceSpec::Bump(b) => Some(b.alpha),
        }
    }
}

pub struct BishopProblem<S> {
    pub grid: CircleGrid,
    pub disc: DiscFamilyParams,
    pub surface: S,
    pub tol: f64,
    pub max_iter: usize,
    /// Starting iterate; zero when absent.
    pub initial: Option<BoundaryFunction>,
}

/// Consecutive growing increments that abort the iteration.
pub const DIVERGENCE_RUN: usize = 5;

impl<S: Surface> BishopProblem<S> {
    pub fn new(grid: CircleGrid, disc: DiscFamilyParams, surface: S) -> Self {
        Self {
            grid,
            disc,
            surface,
            tol: 1e-12,
            max_iter: 200,
            initial: None,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_initial(mut self, v0: BoundaryFunction) -> Self {
        self.initial = Some(v0);
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.disc.validate()?;
        if !(self.tol > 0.0) {
            return Err(Error::Domain(format!("tol = {} must be > 0", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::Domain("max_iter must be >= 1".into()));
        }
        if let Some(a) = self.surface.alpha() {
            if a != self.disc.alpha {
                return Err(Error::Domain(format!(
                    "surface built for alpha = {a}, disc has alpha = {}",
                    self.disc.alpha
                )));
            }
        }
        if let Some(required) = self.surface.required_nodes() {
            if self.grid.n() < required {
                return Err(Error::Unresolved {
                    n: self.grid.n(),
                    required,
                });
            }
        }
        if let Some(v0) = &self.initial {
            circle::same_grid(v0.grid(), self.grid)?;
        }
        Ok(())
    }

    /// Angles in `(-π, π]` and first-component values at the nodes.
    fn boundary(&self) -> (Vec<f64>, Vec<Complex64>) {
        let thetas: Vec<f64> = (0..self.grid.n())
            .map(|k| self.grid.signed_theta(k))
            .collect();
        let phi = thetas.iter().map(|&t| self.disc.at_angle(t)).collect();
        (thetas, phi)
    }
}

fn heights<S: Surface>(surface: &S, thetas: &[f64], phi: &[Complex64], v: &[f64]) -> Vec<f64> {
    thetas
        .iter()
        .zip(phi)
        .zip(v)
        .map(|((&t, &z), &y)| surface.height(t, z, y))
        .collect()
}

/// Diagnostics of a Picard solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub iterations: usize,
    /// Final sup-norm increment `|v_{m+1} - v_m|`.
    pub residual: f64,
    /// Ratio of the last two increments; 0 when the iteration stopped earlier.
    pub contraction: f64,
    pub converged: bool,
    /// `max |v'(θ_i) - v'(θ_j)| / |θ_i - θ_j|^β` over dyadic node separations,
    /// `β = 1/2`. Reported, not enforced.
    pub holder_seminorm: f64,
}

/// Exponent of the reported Hölder seminorm.
pub const HOLDER_BETA: f64 = 0.5;

/// A disc `(φ, u + iv)` with its boundary traces.
#[derive(Debug, Clone)]
pub struct AttachedDisc {
    pub disc: DiscFamilyParams,
    pub phi: BoundaryFunction<Complex64>,
    pub u: BoundaryFunction,
    pub v: BoundaryFunction,
    pub report: SolveReport,
}

impl AttachedDisc {
    pub fn grid(&self) -> CircleGrid {
        self.u.grid()
    }

    /// Writes `theta,re_phi,im_phi,u,v`, one row per node.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "theta,re_phi,im_phi,u,v")?;
        let g = self.grid();
        for k in 0..g.n() {
            let p = self.phi.at(k);
            writeln!(
                w,
                "{:e},{:e},{:e},{:e},{:e}",
                g.theta(k),
                p.re,
                p.im,
                self.u.at(k),
                self.v.at(k)
            )?;
        }
        Ok(())
    }

    /// Harmonic extension of `u` at `r e^{iθ}`.
    pub fn u_at(&self, r: f64, theta: f64) -> Result<f64> {
        circle::poisson_extend(&self.u, r, theta)
    }

    pub fn scale(&self) -> f64 {
        1.0f64.max(self.u.sup_norm() + self.v.sup_norm())
    }
}

pub fn solve_bishop<S: Surface>(p: &BishopProblem<S>) -> Result<AttachedDisc> {
    p.validate()?;
    let grid = p.grid;
    let (thetas, phi) = p.boundary();
    let mut v = match &p.initial {
        Some(v0) => v0.clone(),
        None => BoundaryFunction::new(grid, vec![0.0; grid.n()])?,
    };
    let mut increments: Vec<f64> = Vec::new();
    let mut growing = 0;
    let mut converged = false;
    for _ in 0..p.max_iter {
        let h = BoundaryFunction::new(grid, heights(&p.surface, &thetas, &phi, v.values()))?;
        let next = hilbert_t1(&h)?;
        let inc = next.distance(&v)?;
        if let Some(&last) = increments.last() {
            growing = if inc > last { growing + 1 } else { 0 };
        }
        increments.push(inc);
        v = next;
        if inc <= p.tol {
            converged = true;
            break;
        }
        if growing >= DIVERGENCE_RUN {
            break;
        }
    }
    let residual = *increments.last().unwrap_or(&0.0);
    if !converged {
        return Err(Error::NotConverged {
            iterations: increments.len(),
            residual,
        });
    }
    let contraction = match increments.len() {
        m if m >= 3 && increments[m - 2] > 0.0 => increments[m - 2] / increments[m - 3],
        _ => 0.0,
    };
    let u = hilbert_t1(&v)?.map(|x| -x)?;
    let holder_seminorm = holder_seminorm(&v, HOLDER_BETA)?;
    Ok(AttachedDisc {
        disc: p.disc,
        phi: BoundaryFunction::new(grid, phi)?,
        u,
        v,
        report: SolveReport {
            iterations: increments.len(),
            residual,
            contraction,
            converged,
            holder_seminorm,
        },
    })
}

/// Hölder seminorm of the spectral derivative over node pairs at separations
/// `1, 2, 4, …, n/2`.
pub fn holder_seminorm(f: &BoundaryFunction, beta: f64) -> Result<f64> {
    let d = circle::spectral_derivative(f)?;
    let n = f.grid().n();
    let h = f.grid().spacing();
    let vals = d.values();
    let mut best = 0.0f64;
    let mut sep = 1;
    while sep <= n / 2 {
        let denom = (sep as f64 * h).powf(beta);
        for i in 0..n {
            let j = (i + sep) % n;
            best = best.max((vals[i] - vals[j]).abs() / denom);
        }
        sep *= 2;
    }
    Ok(best)
}

/// Operator-norm estimate of the differential of `v ↦ T_1(h(φ, v))` at
/// `v = 0`, sampled over seeded random unit-sup-norm directions.
pub fn contraction_estimate<S: Surface>(
    p: &BishopProblem<S>,
    directions: usize,
    seed: u64,
) -> Result<f64> {
    p.validate()?;
    if directions == 0 {
        return Err(Error::Domain("directions must be >= 1".into()));
    }
    let grid = p.grid;
    let n = grid.n();
    let (thetas, phi) = p.boundary();
    let zero = vec![0.0; n];
    let base = hilbert_t1(&BoundaryFunction::new(
        grid,
        heights(&p.surface, &thetas, &phi, &zero),
    )?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = 1e-6;
    let mut best = 0.0f64;
    for _ in 0..directions {
        let mut w: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let sup = w.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if sup == 0.0 {
            continue;
        }
        w.iter_mut().for_each(|x| *x *= t / sup);
        let pert = hilbert_t1(&BoundaryFunction::new(
            grid,
            heights(&p.surface, &thetas, &phi, &w),
        )?)?;
        best = best.max(pert.distance(&base)? / t);
    }
    Ok(best)
}

/// Per-node `|u - h(φ, v)|`.
pub fn attachment_defects<S: Surface>(d: &AttachedDisc, surface: &S) -> Vec<f64> {
    let g = d.grid();
    (0..g.n())
        .map(|k| (d.u.at(k) - surface.height(g.signed_theta(k), d.phi.at(k), d.v.at(k))).abs())
        .collect()
}

/// `sup |u - h(φ, v)|` over the nodes: how far `∂A` is from the surface.
pub fn attachment_residual<S: Surface>(d: &AttachedDisc, surface: &S) -> f64 {
    attachment_defects(d, surface)
        .into_iter()
        .fold(0.0, f64::max)
}

/// `sup |v - T_1(h(φ, v))|`.
pub fn fixed_point_residual<S: Surface>(d: &AttachedDisc, surface: &S) -> Result<f64> {
    let g = d.grid();
    let thetas: Vec<f64> = (0..g.n()).map(|k| g.signed_theta(k)).collect();
    let h = BoundaryFunction::new(g, heights(surface, &thetas, d.phi.values(), d.v.values()))?;
    hilbert_t1(&h)?.distance(&d.v)
}

/// Largest grid reached by [`cauchy_extend`] refinement, relative to the disc grid.
pub const CAUCHY_MAX_REFINEMENT: usize = 64;

/// Cauchy integral `(1/2πi) ∮ f(A(σ)) / (σ - τ) dσ` by the trapezoid rule.
///
/// The rule starts on the disc's own grid and doubles (sampling `u + iv` from
/// its trigonometric interpolant and `φ` exactly) until two successive values
/// agree to `1e-14` relative. Fails when the last doubling still moves the
/// result by more than `1e-6`.
pub fn cauchy_extend(
    d: &AttachedDisc,
    f: impl Fn(Complex64, Complex64) -> Complex64,
    tau: Complex64,
) -> Result<Complex64> {
    check_radius(tau.norm())?;
    let base = d.grid();
    let cu = fourier_coeffs(&d.u);
    let cv = fourier_coeffs(&d.v);
    let trapezoid = |grid: CircleGrid, u: &[f64], v: &[f64]| -> Result<Complex64> {
        let m = grid.n();
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..m {
            let sigma = grid.node(k);
            let z1 = d.disc.at_angle(grid.signed_theta(k));
            let value = f(z1, Complex64::new(u[k], v[k]));
            acc += value * sigma / (sigma - tau);
        }
        let out = acc / m as f64;
        if !(out.re.is_finite() && out.im.is_finite()) {
            return Err(Error::NonConvergent("non-finite Cauchy integrand".into()));
        }
        Ok(out)
    };
    let mut prev = trapezoid(base, d.u.values(), d.v.values())?;
    let mut m = base.n();
    let mut change = f64::INFINITY;
    while m < base.n() * CAUCHY_MAX_REFINEMENT && 2 * m <= MAX_NODES {
        m *= 2;
        let grid = CircleGrid::new(m)?;
        let u = cu.resample(grid)?;
        let v = cv.resample(grid)?;
        let next = trapezoid(grid, u.values(), v.values())?;
        change = (next - prev).norm();
        prev = next;
        if change <= 1e-14 * next.norm().max(1.0) {
            return Ok(next);
        }
    }
    if change > 1e-6 * prev.norm().max(1.0) {
        return Err(Error::NonConvergent(format!(
            "Cauchy integral still moves by {change:e} after refinement to {m} nodes"
        )));
    }
    Ok(prev)
}
