//! One-dimensional quadrature and line search.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Generator keyed by `(seed, stream)`; independent of evaluation order.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

const MAX_DEPTH: u32 = 48;
const MIN_WIDTH: f64 = 1e-12;

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParameter("integration limits must be finite".into()));
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut budget = 2_000_000usize;
    let v = simpson_step(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH, &mut budget)?;
    if !v.is_finite() {
        return Err(Error::NonConvergence("integrand produced a non-finite value".into()));
    }
    Ok(v)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &mut dyn FnMut(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    budget: &mut usize,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    // a jump inside an interval this narrow contributes below rounding
    if b - a <= MIN_WIDTH * a.abs().max(b.abs()).max(1.0) {
        return Ok(left + right);
    }
    if depth == 0 || *budget == 0 {
        return Err(Error::NonConvergence(format!(
            "adaptive quadrature did not reach tolerance {tol:e} on [{a}, {b}]"
        )));
    }
    *budget -= 1;
    let l = simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, budget)?;
    let r = simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, budget)?;
    Ok(l + r)
}

/// `∫_{-∞}^{∞} f(x) dx` through `x = tan u`.
pub fn integrate_real_line(f: &mut dyn FnMut(f64) -> f64, tol: f64) -> Result<f64> {
    let edge = std::f64::consts::FRAC_PI_2 - 1e-9;
    let mut g = |u: f64| {
        let c = u.cos();
        let v = f(u.tan()) / (c * c);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    // split at the origin so that features near x = 0 are resolved
    let left = adaptive_simpson(&mut g, -edge, 0.0, 0.5 * tol)?;
    let right = adaptive_simpson(&mut g, 0.0, edge, 0.5 * tol)?;
    Ok(left + right)
}

/// Golden-section minimisation of a unimodal function on `[a, b]`.
pub fn golden_section_min(f: &mut dyn FnMut(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Grid scan followed by golden-section refinement around the best grid point.
pub fn grid_golden_min(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, points: usize, tol: f64) -> (f64, f64) {
    if a == b {
        return (a, f(a));
    }
    let step = (b - a) / points as f64;
    let mut best = (a, f(a));
    for k in 1..=points {
        let x = a + step * k as f64;
        let v = f(x);
        if v < best.1 {
            best = (x, v);
        }
    }
    let lo = (best.0 - step).max(a);
    let hi = (best.0 + step).min(b);
    let refined = golden_section_min(f, lo, hi, tol);
    if refined.1 < best.1 {
        refined
    } else {
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_polynomial_and_sine() {
        let v = adaptive_simpson(&mut |x| x * x, 0.0, 3.0, 1e-12).unwrap();
        assert!((v - 9.0).abs() < 1e-12);
        let v = adaptive_simpson(&mut f64::sin, 0.0, std::f64::consts::PI, 1e-10).unwrap();
        assert!((v - 2.0).abs() < 1e-10);
    }

    #[test]
    fn real_line_densities() {
        let cauchy = |x: f64| 1.0 / (std::f64::consts::PI * (1.0 + x * x));
        let gauss = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        assert!((integrate_real_line(&mut { cauchy }, 1e-10).unwrap() - 1.0).abs() < 1e-8);
        assert!((integrate_real_line(&mut { gauss }, 1e-10).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, v) = grid_golden_min(&mut |x| (x - 0.3).powi(2) + 1.0, -2.0, 2.0, 40, 1e-12);
        assert!((x - 0.3).abs() < 1e-6 && (v - 1.0).abs() < 1e-12);
    }
}
