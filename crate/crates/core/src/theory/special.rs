//! Modified Bessel functions of orders 0 and 1, and the Lambert W function.

use crate::error::{invalid, Result};

/// Below this argument the power series is summed; above it the asymptotic
/// expansion is accurate to well under 1e-9 relative error.
const SERIES_LIMIT: f64 = 30.0;

fn series(order: u32, x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = if order == 0 { 1.0 } else { 0.5 * x };
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (k + order as f64));
        sum += term;
        if term <= sum * 1e-17 {
            return sum;
        }
    }
}

/// `e^{-x} I_order(x)` from the large-argument expansion.
fn asymptotic_scaled(order: u32, x: f64) -> f64 {
    let mu = 4.0 * (order * order) as f64;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        let next = -term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum / libm::sqrt(2.0 * core::f64::consts::PI * x)
}

fn check(order: u32, x: f64) -> Result<()> {
    if order > 1 {
        return Err(invalid!("Bessel order {order} not supported"));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(invalid!("Bessel argument must be finite and non-negative, got {x}"));
    }
    Ok(())
}

/// Modified Bessel function `I_order(x)` for order 0 or 1.
pub fn bessel_i(order: u32, x: f64) -> Result<f64> {
    check(order, x)?;
    Ok(if x < SERIES_LIMIT { series(order, x) } else { libm::exp(x) * asymptotic_scaled(order, x) })
}

/// `e^{-x} I_order(x)`, finite for every argument.
pub fn bessel_i_scaled(order: u32, x: f64) -> Result<f64> {
    check(order, x)?;
    Ok(if x < SERIES_LIMIT { series(order, x) * libm::exp(-x) } else { asymptotic_scaled(order, x) })
}

/// Principal branch of W on `c >= 0`: the solution of `W e^W = c`.
pub fn lambert_w(c: f64) -> Result<f64> {
    if !(c >= 0.0) || !c.is_finite() {
        return Err(invalid!("Lambert W needs a finite c >= 0, got {c}"));
    }
    if c == 0.0 {
        return Ok(0.0);
    }
    let mut w = if c < 1.0 { c / (1.0 + c) } else { libm::log(c) - libm::log(libm::log(c) + 1.0).max(0.0) * 0.5 };
    let tol = 1e-12 * c.max(1.0);
    for _ in 0..100 {
        let ew = libm::exp(w);
        let f = w * ew - c;
        if f.abs() < tol {
            return Ok(w);
        }
        // Halley step
        let wp1 = w + 1.0;
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
    }
    let f = w * libm::exp(w) - c;
    if f.abs() < tol {
        Ok(w)
    } else {
        Err(crate::Error::Resolution(alloc::format!("Lambert W did not converge at c = {c}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    /// I_n(x) = (1/pi) * integral_0^pi e^{x cos s} cos(n s) ds, by Simpson.
    fn quadrature(order: u32, x: f64) -> f64 {
        let m = 20_000;
        let h = core::f64::consts::PI / m as f64;
        let f = |s: f64| libm::exp(x * (libm::cos(s) - 1.0)) * libm::cos(order as f64 * s);
        let mut acc = f(0.0) + f(core::f64::consts::PI);
        for i in 1..m {
            acc += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0 / core::f64::consts::PI * libm::exp(x)
    }

    #[test]
    fn bessel_values() {
        assert_eq!(bessel_i(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i(1, 0.0).unwrap(), 0.0);
        assert!((bessel_i(0, 1.0).unwrap() - 1.2660658777520082).abs() < 1e-12);
        for &x in &[0.3, 1.0, 4.0, 7.9, 8.1, 15.0, 29.9, 30.1, 45.0, 80.0] {
            for n in 0..2 {
                let q = quadrature(n, x);
                assert!(rel(bessel_i(n, x).unwrap(), q) < 1e-9, "I{n}({x})");
                let s = bessel_i_scaled(n, x).unwrap();
                assert!(rel(s * libm::exp(x), q) < 1e-9);
            }
        }
    }

    #[test]
    fn bessel_derivative_identity() {
        for &x in &[0.5f64, 2.0, 9.0, 31.0, 50.0] {
            let h = 1e-5 * x.max(1.0);
            let d = (bessel_i(0, x + h).unwrap() - bessel_i(0, x - h).unwrap()) / (2.0 * h);
            assert!(rel(d, bessel_i(1, x).unwrap()) < 1e-7, "{x}");
        }
    }

    #[test]
    fn bessel_rejects_bad_input() {
        assert!(bessel_i(2, 1.0).is_err());
        assert!(bessel_i(0, -1.0).is_err());
    }

    #[test]
    fn lambert_values() {
        assert_eq!(lambert_w(0.0).unwrap(), 0.0);
        assert!((lambert_w(core::f64::consts::E).unwrap() - 1.0).abs() < 1e-12);
        assert!((lambert_w(1.0).unwrap() - 0.5671432904097838).abs() < 1e-12);
        for &c in &[1e-9, 0.01, 2.0, 10.0, 1e3, 1e8] {
            let w = lambert_w(c).unwrap();
            assert!((w * libm::exp(w) - c).abs() < 1e-12 * c.max(1.0), "{c}");
        }
        assert!(lambert_w(-0.1).is_err());
    }
}
