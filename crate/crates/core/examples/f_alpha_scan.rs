//! The integral F_alpha over a table of exponents and disc parameters, and the
//! onset of its divergence for s < 1.

use disclab::asymptotics::{dichotomy_scan, divergence_onset, onset_scaling_exponent};

fn main() -> disclab::Result<()> {
    let alphas = [0.2, 0.1, 0.05, 0.025];
    let scan = dichotomy_scan(&[2.0, 1.0, 0.75, 0.6], &alphas, 1.0)?;
    scan.write_csv(std::io::stdout().lock())?;
    for (s, v) in &scan.verdicts {
        println!("s = {s}: {v}");
    }

    println!("\nwhere the log-integrand turns negative again (s = 0.75):");
    for alpha in [0.02, 0.01, 0.005, 0.0025] {
        match divergence_onset(alpha, 0.75, 1.0, 1e12) {
            Some(t) => println!("  alpha = {alpha}: t = {t:.1}"),
            None => println!("  alpha = {alpha}: integrand never exceeds 1"),
        }
    }
    for (s, grid) in [(0.6, [0.2, 0.1, 0.05]), (0.75, [0.01, 0.005, 0.0025])] {
        if let Some(slope) = onset_scaling_exponent(s, &grid, 1.0, 1e12) {
            println!(
                "s = {s}: log-log slope {slope:.3}, predicted {:.3}",
                -s / (2.0 * s - 1.0)
            );
        }
    }
    Ok(())
}
