//! Conjugate function, harmonic extension and the radial derivative at τ = 1
//! for a trigonometric polynomial.

use disclab::circle::{
    conjugate, hilbert_t1, poisson_extend, radial_derivative, BoundaryFunction, CircleGrid,
    RadialMethod,
};

fn main() -> disclab::Result<()> {
    let grid = CircleGrid::new(256)?;
    let f = BoundaryFunction::from_fn(grid, |t| (3.0 * t).cos() + 0.5 * (7.0 * t).sin() + 2.0)?;

    let tf = conjugate(&f)?;
    let expected = BoundaryFunction::from_fn(grid, |t| (3.0 * t).sin() - 0.5 * (7.0 * t).cos())?;
    println!(
        "|Tf - (sin 3t - cos 7t / 2)| = {:.2e}",
        tf.distance(&expected)?
    );

    let t1 = hilbert_t1(&f)?;
    println!("T_1 f at tau = 1: {:.2e}", t1.at(0));

    for r in [0.0, 0.5, 0.9] {
        // u(r e^{i 0}) = r^3 + 2
        println!(
            "P[f]({r}) = {:.12} (exact {:.12})",
            poisson_extend(&f, r, 0.0)?,
            r * r * r + 2.0
        );
    }

    let spectral = radial_derivative(&f, RadialMethod::Spectral)?;
    let quadrature = radial_derivative(&f, RadialMethod::Quadrature)?;
    println!("d_r P[f](1) = {spectral:.12} spectral, {quadrature:.12} quadrature, exact 3");
    Ok(())
}
