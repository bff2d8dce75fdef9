//! One-dimensional adaptive quadrature: globally adaptive Gauss-Kronrod (7/15)
//! and recursive adaptive Simpson with Richardson correction.

use crate::error::{Error, Result};

/// Integral estimate with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub abs_err: f64,
    pub evaluations: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for the odd-indexed Kronrod abscissae (and the centre).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = h * x;
        let pair = f(c - dx) + f(c + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Globally adaptive G7/K15 on `[a, b]`: the interval with the largest error
/// estimate is bisected until the total error meets `max(abs_tol, rel_tol*|I|)`.
pub fn gauss_kronrod<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> Result<Estimate> {
    let (v, e) = gk15(&f, a, b);
    let mut parts = vec![(a, b, v, e)];
    let mut evaluations = 15;
    loop {
        let value: f64 = parts.iter().map(|p| p.2).sum();
        let err: f64 = parts.iter().map(|p| p.3).sum();
        if !value.is_finite() {
            return Err(Error::NonConvergent(format!(
                "non-finite integrand on [{a:e}, {b:e}]"
            )));
        }
        if err <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(Estimate {
                value,
                abs_err: err,
                evaluations,
            });
        }
        if parts.len() >= max_intervals {
            return Err(Error::NonConvergent(format!(
                "{max_intervals} subintervals on [{a:e}, {b:e}], error {err:e}"
            )));
        }
        let worst = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, _, _) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        evaluations += 30;
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}

/// Recursive adaptive Simpson. Each bisection halves the local tolerance;
/// a leaf is accepted when `|S_left + S_right - S_whole| <= 15 * eps`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    eps: f64,
    max_depth: u32,
) -> Result<Estimate> {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut evaluations = 3;
    let (value, abs_err) = simpson_step(
        &f,
        a,
        b,
        fa,
        fm,
        fb,
        whole,
        eps,
        max_depth,
        &mut evaluations,
    )?;
    Ok(Estimate {
        value,
        abs_err,
        evaluations,
    })
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
    evaluations: &mut usize,
) -> Result<(f64, f64)> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    *evaluations += 2;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if !delta.is_finite() {
        return Err(Error::NonConvergent(format!(
            "non-finite integrand near [{a:e}, {b:e}]"
        )));
    }
    if delta.abs() <= 15.0 * eps {
        return Ok((left + right + delta / 15.0, delta.abs() / 15.0));
    }
    if depth == 0 {
        return Err(Error::NonConvergent(format!(
            "Simpson bisection depth exhausted on [{a:e}, {b:e}]"
        )));
    }
    let (lv, le) = simpson_step(
        f,
        a,
        m,
        fa,
        flm,
        fm,
        left,
        0.5 * eps,
        depth - 1,
        evaluations,
    )?;
    let (rv, re) = simpson_step(
        f,
        m,
        b,
        fm,
        frm,
        fb,
        right,
        0.5 * eps,
        depth - 1,
        evaluations,
    )?;
    Ok((lv + rv, le + re))
}
