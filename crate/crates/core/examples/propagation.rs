//! Find the largest disc parameter for which the attached disc points down,
//! then inspect the whole η-family at that parameter.

use disclab::propagation::{alpha_search, ExperimentConfig};

fn main() -> disclab::Result<()> {
    let cfg = ExperimentConfig {
        s: 1.0,
        eta_grid: ExperimentConfig::eta_steps(21),
        ..Default::default()
    };
    let (alpha, report) = alpha_search(&cfg, &[0.2, 0.1, 0.05])?;
    println!("alpha* = {alpha}");
    println!(
        "d_r u = {:.6e} (spectral) {:.6e} (quadrature), relative gap {:.1e}",
        report.radial_derivative, report.radial_derivative_quadrature, report.radial_discrepancy
    );
    println!("points down: {}", report.points_down);
    for (r, u) in &report.transversal_profile {
        println!("  u({r:.8}) = {u:.6e}");
    }
    println!("eta    on_surface  in_ball  outside  min_x2");
    for c in &report.classification {
        println!(
            "{:+.1}  {:>10}  {:>7}  {:>7}  {:.4e}",
            c.eta,
            c.on_surface,
            c.in_ball,
            c.outside,
            c.min_x2.unwrap_or(f64::NAN)
        );
    }
    println!("exhaustive: {}", report.exhaustive());
    println!(
        "Cauchy vs Poisson at r = 0.999: {:.2e}",
        report.cauchy_discrepancy
    );
    Ok(())
}
