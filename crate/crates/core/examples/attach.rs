//! Attach a disc to the bump-deformed surface, check it, and continue a
//! holomorphic function into the disc with the Cauchy formula.

use num_complex::Complex64;

use disclab::bishop::{
    attachment_residual, cauchy_extend, contraction_estimate, solve_bishop, BishopProblem,
};
use disclab::circle::{holomorphic_extension, holomorphy_defect, CircleGrid};
use disclab::disc_family::DiscFamilyParams;
use disclab::profiles::{BumpDeformation, FlatProfile};

fn main() -> disclab::Result<()> {
    let alpha = 0.1;
    let bump = BumpDeformation::new(FlatProfile::exp_abs_y(1.0)?, 0.2, 0.2, alpha, 1.0)?;
    let problem = BishopProblem::new(
        CircleGrid::new(1 << 14)?,
        DiscFamilyParams::new(alpha, 0.0)?,
        bump,
    );
    let disc = solve_bishop(&problem)?;
    println!("{:?}", disc.report);
    println!(
        "attachment residual {:.2e}",
        attachment_residual(&disc, &bump)
    );
    println!(
        "holomorphy defect   {:.2e}",
        holomorphy_defect(&disc.u, &disc.v)?
    );
    println!(
        "contraction         {:.2e}",
        contraction_estimate(&problem, 8, 1)?
    );

    let f = |z1: Complex64, z2: Complex64| (z1 * z2).exp();
    for r in [0.0, 0.5, 0.999] {
        let tau = Complex64::new(r, 0.0);
        let z2 = holomorphic_extension(&disc.u, &disc.v, tau)?;
        println!(
            "tau = {r}: z2 = {:.6e}, f(A(tau)) by Cauchy = {:.9}",
            z2,
            cauchy_extend(&disc, f, tau)?
        );
    }

    let path = std::env::temp_dir().join("disc_trace.csv");
    disc.write_csv(std::fs::File::create(&path)?)?;
    println!("trace written to {}", path.display());
    Ok(())
}
