//! Discs attached to the bump-deformed surface and the sign of `∂_r ũ` at `τ = 1`.
//!
//! For each `η` the surface `x₂ = h̃_η` agrees with the flat profile near the
//! target point and sits at `-ηδ/2` elsewhere. The attached disc points down
//! (dips below the surface at `τ = 1`) when the radial derivative of its
//! second component is positive there.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bishop::{
    cauchy_extend, contraction_estimate, solve_bishop, AttachedDisc, BishopProblem, SolveReport,
};
use crate::circle::{poisson_extend, radial_derivative, CircleGrid, RadialMethod};
use crate::disc_family::{phi_eval, DiscFamilyParams, FAR_POINT};
use crate::error::{Error, Result};
use crate::profiles::{BumpDeformation, FlatProfile};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub s: f64,
    pub alpha: f64,
    pub delta: f64,
    pub eps_window: f64,
    pub eps_shift: f64,
    pub eta_grid: Vec<f64>,
    pub n: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            s: 1.0,
            alpha: 0.1,
            delta: 0.2,
            eps_window: 0.2,
            eps_shift: 0.0,
            eta_grid: vec![1.0],
            n: 1 << 14,
            tol: 1e-12,
            max_iter: 200,
            seed: 0,
        }
    }
}

impl ExperimentConfig {
    /// `η = -1, …, 1` in `points` equal steps.
    pub fn eta_steps(points: usize) -> Vec<f64> {
        match points {
            0 => Vec::new(),
            1 => vec![1.0],
            _ => (0..points)
                .map(|j| -1.0 + 2.0 * j as f64 / (points - 1) as f64)
                .collect(),
        }
    }

    fn bump(&self, eta: f64) -> Result<BumpDeformation> {
        BumpDeformation::new(
            FlatProfile::exp_abs_y(self.s)?,
            self.delta,
            self.eps_window,
            self.alpha,
            eta,
        )
    }

    fn disc(&self) -> Result<DiscFamilyParams> {
        DiscFamilyParams::new(self.alpha, self.eps_shift)
    }

    fn problem(&self, eta: f64) -> Result<BishopProblem<BumpDeformation>> {
        let p = BishopProblem::new(CircleGrid::new(self.n)?, self.disc()?, self.bump(eta)?)
            .with_tol(self.tol)
            .with_max_iter(self.max_iter);
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(eta) = self.eta_grid.iter().find(|e| !(-1.0..=1.0).contains(*e)) {
            return Err(Error::Domain(format!("eta = {eta} outside [-1, 1]")));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Domain(format!("tol = {} must be > 0", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::Domain("max_iter must be >= 1".into()));
        }
        self.problem(1.0).map(|_| ())
    }
}

/// Boundary nodes of one disc of the family, sorted by where they lie.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EtaCell {
    pub eta: f64,
    pub converged: bool,
    pub error: Option<String>,
    /// Nodes on the undeformed surface.
    pub on_surface: usize,
    /// Remaining nodes inside `B_δ(z¹)`.
    pub in_ball: usize,
    /// Nodes in neither set.
    pub outside: usize,
    pub radial_derivative: Option<f64>,
    /// `min ũ(r)` over `r ∈ [0.99, 1)`.
    pub min_x2: Option<f64>,
}

impl EtaCell {
    pub fn exhaustive(&self) -> bool {
        self.converged && self.outside == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropagationReport {
    pub config: ExperimentConfig,
    /// Spectral value at `η = 1`.
    pub radial_derivative: f64,
    pub radial_derivative_quadrature: f64,
    /// Relative gap between the two radial-derivative methods.
    pub radial_discrepancy: f64,
    pub points_down: bool,
    /// `(r, ũ(r))` along `θ = 0`.
    pub transversal_profile: Vec<(f64, f64)>,
    pub classification: Vec<EtaCell>,
    pub coverage_min_x2: f64,
    /// Whether `Re φ` changes sign along the radius; only checked for a shifted disc.
    pub x1_crossing: Option<bool>,
    /// Cauchy integral of `z₂` against the harmonic extension at `r = 1 - 10⁻³`.
    pub cauchy_discrepancy: f64,
    pub contraction_estimate: f64,
    pub solve: SolveReport,
}

impl PropagationReport {
    pub fn exhaustive(&self) -> bool {
        self.classification.iter().all(EtaCell::exhaustive)
    }

    /// Writes `eta,radial_derivative,min_x2,converged`.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "eta,radial_derivative,min_x2,converged")?;
        let opt = |x: Option<f64>| x.map_or("nan".to_string(), |v| format!("{v:e}"));
        for c in &self.classification {
            writeln!(
                w,
                "{},{},{},{}",
                c.eta,
                opt(c.radial_derivative),
                opt(c.min_x2),
                c.converged
            )?;
        }
        Ok(())
    }
}

/// Radii `0.9 ≤ r < 1` clustering at the boundary.
pub fn transversal_radii() -> Vec<f64> {
    (0..=16)
        .map(|j| 1.0 - 0.1 * 10f64.powf(-j as f64 / 4.0))
        .collect()
}

/// Radii `0.99 ≤ r < 1` clustering at the boundary.
pub fn near_radii() -> Vec<f64> {
    (0..=12)
        .map(|j| 1.0 - 0.01 * 10f64.powf(-j as f64 / 4.0))
        .collect()
}

/// Radius of the Cauchy self-consistency check.
pub const CAUCHY_RADIUS: f64 = 1.0 - 1e-3;

/// Random directions in the contraction estimate.
pub const CONTRACTION_DIRECTIONS: usize = 8;

fn min_x2(d: &AttachedDisc) -> Result<f64> {
    near_radii()
        .into_iter()
        .map(|r| d.u_at(r, 0.0))
        .try_fold(f64::INFINITY, |m, x| x.map(|x| m.min(x)))
}

fn classify(cfg: &ExperimentConfig, eta: f64) -> Result<EtaCell> {
    let p = cfg.problem(eta)?;
    let base = p.surface.base;
    let d = match solve_bishop(&p) {
        Ok(d) => d,
        Err(e) if e.is_numerical() => {
            return Ok(EtaCell {
                eta,
                converged: false,
                error: Some(e.to_string()),
                on_surface: 0,
                in_ball: 0,
                outside: 0,
                radial_derivative: None,
                min_x2: None,
            })
        }
        Err(e) => return Err(e),
    };
    let z1 = Complex64::new(FAR_POINT, 0.0);
    let (mut on_surface, mut in_ball, mut outside) = (0, 0, 0);
    for k in 0..d.grid().n() {
        let phi = d.phi.at(k);
        let (u, v) = (d.u.at(k), d.v.at(k));
        if (u - base.at(phi)).abs() <= cfg.tol {
            on_surface += 1;
        } else if ((phi - z1).norm_sqr() + u * u + v * v).sqrt() < cfg.delta {
            in_ball += 1;
        } else {
            outside += 1;
        }
    }
    Ok(EtaCell {
        eta,
        converged: true,
        error: None,
        on_surface,
        in_ball,
        outside,
        radial_derivative: Some(radial_derivative(&d.u, RadialMethod::Spectral)?),
        min_x2: Some(min_x2(&d)?),
    })
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<PropagationReport> {
    cfg.validate()?;
    let p = cfg.problem(1.0)?;
    let d = solve_bishop(&p)?;
    let spectral = radial_derivative(&d.u, RadialMethod::Spectral)?;
    let quadrature = radial_derivative(&d.u, RadialMethod::Quadrature)?;
    let radial_discrepancy = (spectral - quadrature).abs() / spectral.abs().max(f64::MIN_POSITIVE);

    let transversal_profile = transversal_radii()
        .into_iter()
        .map(|r| Ok((r, d.u_at(r, 0.0)?)))
        .collect::<Result<Vec<_>>>()?;

    let classification = cfg
        .eta_grid
        .par_iter()
        .map(|&eta| classify(cfg, eta))
        .collect::<Result<Vec<_>>>()?;
    let coverage_min_x2 = classification
        .iter()
        .filter_map(|c| c.min_x2)
        .fold(f64::INFINITY, f64::min);

    // Re φ decreases along the radius to its limit -eps_shift < 0, far too
    // slowly to sample: it crosses zero on [0.99, 1) iff it is positive at 0.99.
    let x1_crossing = if cfg.eps_shift > 0.0 {
        Some(phi_eval(&d.disc, Complex64::new(near_radii()[0], 0.0))?.re > 0.0)
    } else {
        None
    };

    let tau = Complex64::new(CAUCHY_RADIUS, 0.0);
    let cauchy = cauchy_extend(&d, |_, z2| z2, tau)?;
    let poisson = Complex64::new(
        d.u_at(CAUCHY_RADIUS, 0.0)?,
        poisson_extend(&d.v, CAUCHY_RADIUS, 0.0)?,
    );
    let cauchy_discrepancy = (cauchy - poisson).norm();

    let contraction_estimate = contraction_estimate(&p, CONTRACTION_DIRECTIONS, cfg.seed)?;

    Ok(PropagationReport {
        config: cfg.clone(),
        radial_derivative: spectral,
        radial_derivative_quadrature: quadrature,
        radial_discrepancy,
        points_down: spectral > 0.0,
        transversal_profile,
        classification,
        coverage_min_x2,
        x1_crossing,
        cauchy_discrepancy,
        contraction_estimate,
        solve: d.report,
    })
}

/// The largest `α` in `alpha_grid` (given in decreasing order) whose disc
/// points down, with its report.
pub fn alpha_search(
    cfg: &ExperimentConfig,
    alpha_grid: &[f64],
) -> Result<(f64, PropagationReport)> {
    if alpha_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Domain(
            "alpha grid must be strictly decreasing".into(),
        ));
    }
    for &alpha in alpha_grid {
        let c = ExperimentConfig {
            alpha,
            ..cfg.clone()
        };
        match run_experiment(&c) {
            Ok(r) if r.points_down => return Ok((alpha, r)),
            Ok(_) => {}
            Err(e) if e.is_numerical() => {}
            Err(e) => return Err(e),
        }
    }
    Err(Error::NoAdmissibleAlpha)
}
