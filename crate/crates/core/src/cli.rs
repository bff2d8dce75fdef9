//! Command-line front end. Data goes to `--out` (or standard output), messages
//! to standard error. Exit codes: 0 success, 1 rejected input, 2 numerical failure.

use std::f64::consts::PI;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::asymptotics::{dichotomy_scan, format_log10, FAlphaSpec};
use crate::bishop::{
    attachment_residual, contraction_estimate, fixed_point_residual, solve_bishop, BishopProblem,
};
use crate::circle::{
    conjugate, hilbert_t1, holomorphy_defect, radial_derivative, BoundaryFunction, CircleGrid,
    RadialMethod,
};
use crate::disc_family::{concentration_deviation, im_phi_expansion_check, DiscFamilyParams};
use crate::error::{Error, Result};
use crate::profiles::{
    composed_log_profile, decade_grid, flatness_order_check, BumpDeformation, Composition,
    FlatProfile,
};
use crate::propagation::{alpha_search, run_experiment, ExperimentConfig};

#[derive(Debug, Parser)]
#[command(
    name = "disclab",
    version,
    about = "Analytic discs attached to flat hypersurfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Selftest,
    Disc,
    Flatness,
    FaScan,
    Attach,
    Propagate,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spectral identities of the conjugate operator and the radial derivative.
    Selftest(Flags),
    /// Boundary values of the disc family and its concentration away from τ = 1.
    Disc(Flags),
    /// Ratios g(θ)/θ^k for the composed flat profile, k = 1..8.
    Flatness(Flags),
    /// The integral F_α over an (s, α) table with a verdict per s.
    FaScan(Flags),
    /// One Bishop solve on the bump-deformed surface; writes the disc trace.
    Attach(Flags),
    /// Radial-derivative sign and the η-family of attached discs.
    Propagate(Flags),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Every setting a run can take. Flags and the `--config` JSON file fill the
/// same fields; flags win.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Flags {
    /// Flatness exponent(s), comma separated.
    #[arg(long, value_delimiter = ',')]
    pub s: Option<Vec<f64>>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Decreasing list of disc parameters.
    #[arg(long, value_delimiter = ',')]
    pub alphas: Option<Vec<f64>>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub eps_window: Option<f64>,
    #[arg(long)]
    pub eps_shift: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub etas: Option<Vec<f64>>,
    /// Grid size (a power of two) or, for `disc`, the number of table rows.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// JSON file with any of the settings above (snake_case keys).
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

macro_rules! overlay {
    ($low:expr, $high:expr, $($f:ident),*) => {
        Flags { $($f: $high.$f.or($low.$f),)* config: None }
    };
}

impl Flags {
    /// `top` over `self`.
    pub fn overlay(self, top: Flags) -> Flags {
        overlay!(
            self, top, s, alpha, alphas, delta, eps_window, eps_shift, eta, etas, n, tol, max_iter,
            seed, out, format
        )
    }

    fn given(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        macro_rules! check {
            ($($f:ident => $name:literal),*) => { $(if self.$f.is_some() { out.push($name); })* };
        }
        check!(s => "s", alpha => "alpha", alphas => "alphas", delta => "delta",
            eps_window => "eps-window", eps_shift => "eps-shift", eta => "eta", etas => "etas",
            n => "n", tol => "tol", max_iter => "max-iter", seed => "seed");
        out
    }

    fn single_s(&self) -> Result<f64> {
        match self.s.as_deref() {
            None => Ok(1.0),
            Some([s]) => Ok(*s),
            Some(_) => Err(Error::Domain("this subcommand takes a single --s".into())),
        }
    }
}

fn allowed(kind: Kind) -> &'static [&'static str] {
    match kind {
        Kind::Selftest => &["n", "seed"],
        Kind::Disc => &["alpha", "delta", "n"],
        Kind::Flatness => &["s", "alpha"],
        Kind::FaScan => &["s", "alphas", "delta", "tol"],
        Kind::Attach => &[
            "s",
            "alpha",
            "delta",
            "eps-window",
            "eps-shift",
            "eta",
            "n",
            "tol",
            "max-iter",
            "seed",
        ],
        Kind::Propagate => &[
            "s",
            "alpha",
            "alphas",
            "delta",
            "eps-window",
            "eps-shift",
            "eta",
            "etas",
            "n",
            "tol",
            "max-iter",
            "seed",
        ],
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (kind, flags) = match cli.command {
        Command::Selftest(f) => (Kind::Selftest, f),
        Command::Disc(f) => (Kind::Disc, f),
        Command::Flatness(f) => (Kind::Flatness, f),
        Command::FaScan(f) => (Kind::FaScan, f),
        Command::Attach(f) => (Kind::Attach, f),
        Command::Propagate(f) => (Kind::Propagate, f),
    };
    let settings = match resolve(kind, flags) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let format = settings.format.unwrap_or_default();
    match run(kind, &settings) {
        Ok(output) => match emit(&settings, &output.render(format)) {
            Ok(()) => {
                for line in &output.notes {
                    eprintln!("{line}");
                }
                output.exit_code
            }
            Err(e) => {
                eprintln!("error: {e}");
                1
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            if !e.is_numerical() {
                return 1;
            }
            if format == Format::Json {
                let report = json!({ "settings": settings, "error": e.to_string() });
                if let Err(e) = emit(&settings, &format!("{report:#}\n")) {
                    eprintln!("error: {e}");
                }
            }
            2
        }
    }
}

fn resolve(kind: Kind, flags: Flags) -> Result<Flags> {
    let ok = allowed(kind);
    if let Some(bad) = flags.given().into_iter().find(|f| !ok.contains(f)) {
        return Err(Error::Domain(format!(
            "--{bad} does not apply to this subcommand"
        )));
    }
    let file = match &flags.config {
        Some(path) => serde_json::from_str::<Flags>(&std::fs::read_to_string(path)?)?,
        None => Flags::default(),
    };
    Ok(file.overlay(flags))
}

fn emit(settings: &Flags, text: &str) -> Result<()> {
    match &settings.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

struct Output {
    csv: String,
    json: serde_json::Value,
    notes: Vec<String>,
    exit_code: i32,
}

impl Output {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv.clone(),
            Format::Json => format!("{:#}\n", self.json),
        }
    }
}

fn run(kind: Kind, f: &Flags) -> Result<Output> {
    match kind {
        Kind::Selftest => selftest(f),
        Kind::Disc => disc(f),
        Kind::Flatness => flatness(f),
        Kind::FaScan => fa_scan(f),
        Kind::Attach => attach(f),
        Kind::Propagate => propagate(f),
    }
}

fn csv_text(write: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<String> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is ascii"))
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub max_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: &'static str, max_error: f64, tolerance: f64) -> Self {
        Self {
            name,
            max_error,
            tolerance,
            pass: max_error <= tolerance,
        }
    }
}

/// The conjugate-operator and radial-derivative identities on an `n`-point grid.
pub fn spectral_identities(n: usize, seed: u64) -> Result<Vec<Check>> {
    let grid = CircleGrid::new(n)?;
    let mut t_err = 0.0f64;
    for k in 1..=n / 4 {
        let c = BoundaryFunction::from_fn(grid, |t| (k as f64 * t).cos())?;
        let s = BoundaryFunction::from_fn(grid, |t| (k as f64 * t).sin())?;
        t_err = t_err.max(conjugate(&c)?.distance(&s)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modes: Vec<(f64, f64, f64)> = (0..=n / 4)
        .map(|k| (k as f64, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let f = BoundaryFunction::from_fn(grid, |t| {
        modes
            .iter()
            .map(|&(k, a, b)| a * (k * t).cos() + b * (k * t).sin())
            .sum()
    })?;
    let mean = f.mean();
    let tt = conjugate(&conjugate(&f)?)?;
    let square_err = tt.zip_with(&f, |x, y| x + y - mean)?.sup_norm();
    let t1_err = hilbert_t1(&f)?.at(0).abs();
    let mut radial_err = 0.0f64;
    for k in 1..=32usize.min(n / 2 - 1) {
        let c = BoundaryFunction::from_fn(grid, |t| (k as f64 * t).cos())?;
        for method in [RadialMethod::Spectral, RadialMethod::Quadrature] {
            radial_err = radial_err.max((radial_derivative(&c, method)? / k as f64 - 1.0).abs());
        }
    }
    Ok(vec![
        Check::new("conjugate_cos_is_sin", t_err, 1e-12),
        Check::new(
            "conjugate_squared_is_minus_identity_plus_mean",
            square_err,
            1e-12,
        ),
        Check::new("t1_vanishes_at_one", t1_err, 1e-12),
        Check::new("radial_derivative_of_cos_k", radial_err, 1e-6),
    ])
}

fn selftest(f: &Flags) -> Result<Output> {
    let checks = spectral_identities(f.n.unwrap_or(1024), f.seed.unwrap_or(0))?;
    let all = checks.iter().all(|c| c.pass);
    let csv = csv_text(|w| {
        writeln!(w, "check,max_error,tolerance,pass")?;
        for c in &checks {
            writeln!(
                w,
                "{},{:e},{:e},{}",
                c.name, c.max_error, c.tolerance, c.pass
            )?;
        }
        Ok(())
    })?;
    Ok(Output {
        csv,
        json: json!({ "settings": f, "checks": checks, "pass": all }),
        notes: vec![format!(
            "selftest: {}",
            if all { "all identities hold" } else { "FAILED" }
        )],
        exit_code: if all { 0 } else { 2 },
    })
}

fn disc(f: &Flags) -> Result<Output> {
    let params = DiscFamilyParams::new(f.alpha.unwrap_or(0.1), 0.0)?;
    let delta = f.delta.unwrap_or(0.2);
    let rows = f.n.unwrap_or(49);
    if rows < 2 {
        return Err(Error::Domain("disc table needs --n >= 2".into()));
    }
    let deviation = concentration_deviation(&params, delta, 4096)?;
    let (lo, hi) = (1e-12f64.ln(), PI.ln());
    let thetas: Vec<f64> = (0..rows)
        .map(|j| (hi + (lo - hi) * j as f64 / (rows - 1) as f64).exp())
        .collect();
    let mut table = Vec::new();
    for &t in &thetas {
        let p = params.at_angle(t);
        let exp = (t < 0.5 * PI)
            .then(|| im_phi_expansion_check(&params, t))
            .transpose()?;
        table.push((t, p, exp));
    }
    let csv = csv_text(|w| {
        writeln!(w, "theta,re_phi,im_phi,inv_abs_im_phi,expansion,rel_err")?;
        for (t, p, e) in &table {
            let (x, y) = e.map_or((f64::NAN, f64::NAN), |e| (e.expansion, e.rel_err));
            writeln!(
                w,
                "{t:e},{:e},{:e},{:e},{x:e},{y:e}",
                p.re,
                p.im,
                1.0 / p.im.abs()
            )?;
        }
        Ok(())
    })?;
    let json_rows: Vec<_> = table
        .iter()
        .map(|(t, p, e)| json!({ "theta": t, "re_phi": p.re, "im_phi": p.im, "expansion": e }))
        .collect();
    let centre = params.at_angle(PI);
    Ok(Output {
        csv,
        json: json!({
            "settings": f,
            "phi_at_minus_one": [centre.re, centre.im],
            "concentration_deviation": deviation,
            "concentration_within_delta": deviation <= delta,
            "rows": json_rows,
        }),
        notes: vec![format!(
            "disc: sup |phi - 1/log 4| on |theta| >= e^(-delta/alpha) is {deviation:.3e} (delta = {delta})"
        )],
        exit_code: 0,
    })
}

fn flatness(f: &Flags) -> Result<Output> {
    let s_values = f.s.clone().unwrap_or_else(|| vec![1.0]);
    let params = DiscFamilyParams::new(f.alpha.unwrap_or(0.1), 0.0)?;
    for &s in &s_values {
        FlatProfile::exp_abs_y(s)?;
    }
    let grid = decade_grid(1, 8);
    let mut reports = Vec::new();
    for &s in &s_values {
        for k in 1..=8 {
            let log_g = |t: f64| composed_log_profile(&params, s, Composition::ImPart, t);
            reports.push((s, flatness_order_check(log_g, k as f64, &grid)?));
        }
    }
    let csv = csv_text(|w| {
        writeln!(w, "s,k,theta,log10_ratio,verdict")?;
        for (s, r) in &reports {
            for (t, l) in r.thetas.iter().zip(&r.log_ratios) {
                writeln!(
                    w,
                    "{s},{},{t:e},{:.6},{}",
                    r.k,
                    l / std::f64::consts::LN_10,
                    r.verdict
                )?;
            }
        }
        Ok(())
    })?;
    let json_reports: Vec<_> = reports
        .iter()
        .map(|(s, r)| json!({ "s": s, "report": r }))
        .collect();
    let notes = reports
        .iter()
        .map(|(s, r)| format!("flatness: s = {s}, k = {}: {}", r.k, r.verdict))
        .collect();
    Ok(Output {
        csv,
        json: json!({ "settings": f, "reports": json_reports }),
        notes,
        exit_code: 0,
    })
}

fn fa_scan(f: &Flags) -> Result<Output> {
    let s_values = f.s.clone().unwrap_or_else(|| vec![1.0, 2.0, 0.75]);
    let alphas = f.alphas.clone().unwrap_or_else(|| vec![0.2, 0.1, 0.05]);
    let delta = f.delta.unwrap_or(1.0);
    for &s in &s_values {
        for &a in &alphas {
            let mut spec = FAlphaSpec::new(a, s, delta)?;
            if let Some(t) = f.tol {
                spec.rel_tol = t;
                spec.validate()?;
            }
        }
    }
    let scan = dichotomy_scan(&s_values, &alphas, delta)?;
    let csv = csv_text(|w| scan.write_csv(w))?;
    let notes = scan
        .verdicts
        .iter()
        .map(|(s, v)| format!("fa-scan: s = {s}: {v}"))
        .chain(scan.cells.iter().filter_map(|c| {
            c.error
                .as_ref()
                .map(|e| format!("fa-scan: s = {}, alpha = {}: {e}", c.s, c.alpha))
        }))
        .collect();
    let cells: Vec<_> = scan
        .cells
        .iter()
        .map(|c| {
            json!({
                "s": c.s,
                "alpha": c.alpha,
                "f_alpha": c.result.map(|r| format_log10(r.log10_value())),
                "log_f_alpha": c.result.map(|r| r.log_value),
                "rel_err": c.result.map(|r| r.rel_err),
                "truncated": c.result.map(|r| r.truncated),
                "error": c.error,
            })
        })
        .collect();
    let verdicts: Vec<_> = scan
        .verdicts
        .iter()
        .map(|(s, v)| json!({ "s": s, "verdict": v }))
        .collect();
    Ok(Output {
        csv,
        json: json!({ "settings": f, "delta": delta, "cells": cells, "verdicts": verdicts }),
        notes,
        exit_code: 0,
    })
}

fn attach(f: &Flags) -> Result<Output> {
    let alpha = f.alpha.unwrap_or(0.1);
    let delta = f.delta.unwrap_or(0.2);
    let bump = BumpDeformation::new(
        FlatProfile::exp_abs_y(f.single_s()?)?,
        delta,
        f.eps_window.unwrap_or(delta),
        alpha,
        f.eta.unwrap_or(1.0),
    )?;
    let p = BishopProblem::new(
        CircleGrid::new(f.n.unwrap_or(1 << 14))?,
        DiscFamilyParams::new(alpha, f.eps_shift.unwrap_or(0.0))?,
        bump,
    )
    .with_tol(f.tol.unwrap_or(1e-12))
    .with_max_iter(f.max_iter.unwrap_or(200));
    p.validate()?;
    let d = solve_bishop(&p)?;
    let residual = attachment_residual(&d, &bump);
    let defect = holomorphy_defect(&d.u, &d.v)?;
    let fixed = fixed_point_residual(&d, &bump)?;
    let contraction = contraction_estimate(&p, 8, f.seed.unwrap_or(0))?;
    let csv = csv_text(|w| d.write_csv(w))?;
    let trace: Vec<[f64; 5]> = (0..d.grid().n())
        .map(|k| {
            let z: Complex64 = d.phi.at(k);
            [d.grid().theta(k), z.re, z.im, d.u.at(k), d.v.at(k)]
        })
        .collect();
    Ok(Output {
        csv,
        json: json!({
            "settings": f,
            "surface": bump,
            "solve": d.report,
            "scale": d.scale(),
            "attachment_residual": residual,
            "holomorphy_defect": defect,
            "fixed_point_residual": fixed,
            "contraction_estimate": contraction,
            "trace": trace,
        }),
        notes: vec![format!(
            "attach: {} iterations, residual {:.2e}, holomorphy defect {defect:.2e}",
            d.report.iterations, residual
        )],
        exit_code: 0,
    })
}

fn propagate(f: &Flags) -> Result<Output> {
    let eta_grid = match (&f.etas, f.eta) {
        (Some(_), Some(_)) => return Err(Error::Domain("give --eta or --etas, not both".into())),
        (Some(e), None) => e.clone(),
        (None, Some(e)) => vec![e],
        (None, None) => ExperimentConfig::eta_steps(21),
    };
    let delta = f.delta.unwrap_or(0.2);
    let mut cfg = ExperimentConfig {
        s: f.single_s()?,
        alpha: f.alpha.unwrap_or(0.1),
        delta,
        eps_window: f.eps_window.unwrap_or(delta),
        eps_shift: f.eps_shift.unwrap_or(0.0),
        eta_grid,
        n: f.n.unwrap_or(1 << 14),
        tol: f.tol.unwrap_or(1e-12),
        max_iter: f.max_iter.unwrap_or(200),
        seed: f.seed.unwrap_or(0),
    };
    let (alpha_star, report) = match (&f.alphas, f.alpha) {
        (Some(_), Some(_)) => {
            return Err(Error::Domain("give --alpha or --alphas, not both".into()))
        }
        (Some(grid), None) => {
            for &a in grid {
                ExperimentConfig {
                    alpha: a,
                    ..cfg.clone()
                }
                .validate()?;
            }
            cfg.alpha = grid[0];
            let (a, r) = alpha_search(&cfg, grid)?;
            (Some(a), r)
        }
        _ => {
            cfg.validate()?;
            (None, run_experiment(&cfg)?)
        }
    };
    let csv = csv_text(|w| report.write_csv(w))?;
    let mut json = serde_json::to_value(&report)?;
    json["settings"] = serde_json::to_value(f)?;
    json["alpha_star"] = json!(alpha_star);
    let mut notes = vec![format!(
        "propagate: alpha = {}, radial derivative {:.6e} (quadrature {:.6e}), points down: {}",
        report.config.alpha,
        report.radial_derivative,
        report.radial_derivative_quadrature,
        report.points_down
    )];
    if !report.exhaustive() {
        notes.push(
            "propagate: some boundary nodes are neither on the surface nor in the ball".into(),
        );
    }
    Ok(Output {
        csv,
        json,
        notes,
        exit_code: 0,
    })
}
