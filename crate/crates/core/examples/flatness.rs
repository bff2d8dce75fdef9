//! How fast e^{-1/|Im phi_alpha|^s} vanishes at tau = 1 compared with powers of theta.

use disclab::disc_family::DiscFamilyParams;
use disclab::profiles::{composed_log_profile, decade_grid, flatness_order_check, Composition};

fn main() -> disclab::Result<()> {
    let disc = DiscFamilyParams::new(0.1, 0.0)?;
    for (label, grid) in [
        ("theta = 1e-1 .. 1e-8", decade_grid(1, 8)),
        ("theta = 1e-1 .. 1e-300", decade_grid(1, 300)),
    ] {
        println!("{label}");
        for s in [1.0, 0.4] {
            let verdicts: Vec<String> = (1..=8)
                .map(|k| {
                    let log_g = |t: f64| composed_log_profile(&disc, s, Composition::ImPart, t);
                    let r = flatness_order_check(log_g, k as f64, &grid)?;
                    Ok(format!("k={k}:{}", if r.verdict { "y" } else { "n" }))
                })
                .collect::<disclab::Result<_>>()?;
            println!("  s = {s}: {}", verdicts.join(" "));
        }
    }

    let log_g = |t: f64| composed_log_profile(&disc, 1.0, Composition::ImPart, t);
    let r = flatness_order_check(log_g, 5.0, &decade_grid(1, 8))?;
    println!("\nlog10(g/theta^5), s = 1:");
    for (t, l) in r.thetas.iter().zip(&r.log_ratios) {
        println!("  {t:.0e}  {:+.3}", l / std::f64::consts::LN_10);
    }
    Ok(())
}
