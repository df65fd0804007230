// Copyright 2026 Soliq Contributors
// SPDX-License-Identifier: Apache-2.0

//! Deterministic one-dimensional quadrature primitives.
//!
//! Provides adaptive Simpson integration for real- and complex-valued
//! integrands, composite Simpson weights on uniform grids, and a
//! principal-value integrator based on symmetric pairing around the pole
//! (which removes the cancellation error of naive window exclusion).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hard recursion limit for adaptive subdivision; reaching it means the
/// integrand is effectively singular at the requested tolerance.
const MAX_DEPTH: u32 = 48;

/// Panels are always subdivided to this depth before the Richardson
/// acceptance test applies. Without it, an integrand whose support is much
/// narrower than the integration window (or that vanishes at the initial
/// sample points) can alias to zero on the first five samples and be
/// accepted as converged.
const MIN_DEPTH: u32 = 6;

/// Panels narrower than this fraction of the original span are accepted
/// unconditionally: at that scale the Richardson test only chases
/// floating-point noise in the integrand.
const WIDTH_FLOOR: f64 = 1e-13;

fn simpson_panel(fa: Complex64, fm: Complex64, fb: Complex64, h: f64) -> Complex64 {
    (fa + fm * 4.0 + fb) * (h / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn adapt(
    f: &dyn Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: u32,
    min_width: f64,
) -> Result<Complex64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson_panel(fa, flm, fm, m - a);
    let right = simpson_panel(fm, frm, fb, b - m);
    let delta = left + right - whole;
    // Richardson extrapolation of the two half-panels.
    let refined = left + right + delta / 15.0;
    if (b - a).abs() <= min_width {
        return Ok(refined);
    }
    if depth >= MIN_DEPTH && delta.norm() <= 15.0 * tol {
        return Ok(refined);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Quadrature(format!(
            "adaptive Simpson exceeded depth {MAX_DEPTH} on [{a}, {b}]"
        )));
    }
    let l = adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, min_width)?;
    let r = adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, min_width)?;
    Ok(l + r)
}

/// Adaptive Simpson quadrature of a complex integrand on `[a, b]` to the
/// requested absolute tolerance.
pub fn adaptive_simpson_complex(
    f: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    abs_tol: f64,
) -> Result<Complex64> {
    if !(abs_tol > 0.0) {
        return Err(Error::domain("quadrature tolerance must be positive"));
    }
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson_panel(fa, fm, fb, b - a);
    let min_width = (b - a).abs() * WIDTH_FLOOR;
    adapt(&f, a, b, fa, fm, fb, whole, abs_tol, 0, min_width)
}

/// Adaptive Simpson quadrature of a real integrand on `[a, b]`.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
    adaptive_simpson_complex(|x| Complex64::new(f(x), 0.0), a, b, abs_tol).map(|v| v.re)
}

/// Nodes and composite-Simpson weights for a uniform grid on `[a, b]`.
///
/// The interval count is rounded up to the next even number, so the
/// returned rule is always a valid composite Simpson rule with positive
/// weights.
pub fn simpson_rule(a: f64, b: f64, n_intervals: usize) -> (Vec<f64>, Vec<f64>) {
    let n = n_intervals.max(2).next_multiple_of(2);
    let h = (b - a) / n as f64;
    let mut nodes = Vec::with_capacity(n + 1);
    let mut weights = Vec::with_capacity(n + 1);
    for i in 0..=n {
        nodes.push(a + h * i as f64);
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        weights.push(w * h / 3.0);
    }
    nodes[n] = b;
    (nodes, weights)
}

/// Cauchy principal value of `∫_a^b numerator(x) / (x − pole) dx` with the
/// pole strictly inside `(a, b)`.
///
/// The symmetric window `[pole − h, pole + h]` (h = distance to the nearer
/// endpoint) is integrated as `∫_0^h [f(pole+u) − f(pole−u)]/u du`, whose
/// integrand extends continuously to `u = 0`; the remainder is a regular
/// integral.
pub fn principal_value(
    numerator: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    pole: f64,
    abs_tol: f64,
) -> Result<f64> {
    if !(a < pole && pole < b) {
        return Err(Error::domain(format!(
            "principal-value pole {pole} must lie strictly inside ({a}, {b})"
        )));
    }
    let h = (pole - a).min(b - pole);
    // Below u_floor the paired difference quotient is dominated by the
    // cancellation noise of `numerator(pole+u) − numerator(pole−u)`; the
    // integrand is frozen there instead. The resulting bias is
    // O(u_floor³ · f‴), far below any practical tolerance.
    let u_floor = h * 1e-4;
    let paired = |u: f64| {
        let u = u.max(u_floor);
        (numerator(pole + u) - numerator(pole - u)) / u
    };
    let sym = adaptive_simpson(paired, 0.0, h, 0.5 * abs_tol)?;
    let rest = if pole - a <= b - pole {
        adaptive_simpson(|x| numerator(x) / (x - pole), pole + h, b, 0.5 * abs_tol)?
    } else {
        adaptive_simpson(|x| numerator(x) / (x - pole), a, pole - h, 0.5 * abs_tol)?
    };
    Ok(sym + rest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn integrates_polynomial_exactly() {
        let v = adaptive_simpson(|x| 3.0 * x * x, 0.0, 2.0, 1e-12).unwrap();
        assert_relative_eq!(v, 8.0, max_relative = 1e-12);
    }

    #[test]
    fn integrates_oscillatory_complex_phase() {
        // ∫_0^1 e^{i k x} dx = (e^{ik} − 1)/(ik)
        let k = 37.0;
        let v = adaptive_simpson_complex(
            |x| Complex64::new(0.0, k * x).exp(),
            0.0,
            1.0,
            1e-12,
        )
        .unwrap();
        let exact = (Complex64::new(0.0, k).exp() - 1.0) / Complex64::new(0.0, k);
        assert!((v - exact).norm() < 1e-10);
    }

    #[test]
    fn integrates_sech_squared_tail() {
        // ∫_{-40}^{40} sech²(y) dy = 2 tanh(40) ≈ 2
        let v = adaptive_simpson(|y: f64| y.cosh().powi(-2), -40.0, 40.0, 1e-12).unwrap();
        assert_relative_eq!(v, 2.0 * 40.0_f64.tanh(), epsilon = 1e-10);
    }

    #[test]
    fn simpson_rule_reproduces_quartic() {
        let (nodes, weights) = simpson_rule(0.0, 1.0, 200);
        let v: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(x, w)| w * x.powi(4))
            .sum();
        assert_relative_eq!(v, 0.2, max_relative = 1e-9);
        assert!(weights.iter().all(|w| *w > 0.0));
    }

    #[test]
    fn simpson_rule_rounds_interval_count_up_to_even() {
        let (nodes, _) = simpson_rule(0.0, 1.0, 5);
        assert_eq!(nodes.len(), 7); // 6 intervals
    }

    #[test]
    fn principal_value_linear_over_simple_pole() {
        // PV ∫_0^3 x/(x−1) dx = 3 + ln 2
        let v = principal_value(|x| x, 0.0, 3.0, 1.0, 1e-11).unwrap();
        assert_relative_eq!(v, 3.0 + 2.0_f64.ln(), epsilon = 1e-9);
    }

    #[test]
    fn principal_value_of_odd_kernel_vanishes() {
        let v = principal_value(|_| 1.0, -1.0, 1.0, 0.0, 1e-12).unwrap();
        assert!(v.abs() < 1e-10);
    }

    #[test]
    fn principal_value_smooth_numerator() {
        // PV ∫_{-π}^{π} cos(x)/x dx = 0 by parity.
        let v = principal_value(|x| x.cos(), -PI, PI, 0.0, 1e-12).unwrap();
        assert!(v.abs() < 1e-10);
    }

    #[test]
    fn principal_value_rejects_pole_on_boundary() {
        assert!(principal_value(|x| x, 0.0, 1.0, 0.0, 1e-10).is_err());
    }

    #[test]
    fn tolerance_must_be_positive() {
        assert!(adaptive_simpson(|x| x, 0.0, 1.0, 0.0).is_err());
    }
}
