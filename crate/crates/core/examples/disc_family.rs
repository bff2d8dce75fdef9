//! Boundary values of phi_alpha: they crowd around 1/log 4 except on a short
//! arc at tau = 1, where Im phi_alpha is exponentially small in 1/alpha.

use disclab::disc_family::{
    concentration_deviation, im_phi_expansion_check, DiscFamilyParams, FAR_POINT,
};

fn main() -> disclab::Result<()> {
    let delta = 0.2;
    println!("alpha   sup|phi - 1/log 4| away from tau = 1   (delta = {delta}, 1/log 4 = {FAR_POINT:.6})");
    for alpha in [0.2, 0.1, 0.05, 0.025] {
        let p = DiscFamilyParams::new(alpha, 0.0)?;
        println!(
            "{alpha:<7} {:.4e}",
            concentration_deviation(&p, delta, 2048)?
        );
    }

    let p = DiscFamilyParams::new(0.1, 0.0)?;
    println!("\ntheta      phi(e^(i theta))                 1/|Im phi|    expansion     rel. gap");
    for theta in [1.0, 1e-2, 1e-4, 1e-8, 1e-12] {
        let z = p.at_angle(theta);
        let e = im_phi_expansion_check(&p, theta)?;
        println!(
            "{theta:<10.0e} {:+.6e} {:+.6e}i   {:.6e}  {:.6e}  {:.4}",
            z.re, z.im, e.exact, e.expansion, e.rel_err
        );
    }
    Ok(())
}
