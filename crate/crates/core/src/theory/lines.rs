//! Critical lines, closed-form trajectories, series and densities.

use crate::error::{invalid, Result};

use super::special::lambert_w;

/// A value together with whether it comes from an approximation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Flagged {
    pub value: f64,
    pub approximate: bool,
}

impl Flagged {
    fn exact(value: f64) -> Self {
        Flagged { value, approximate: false }
    }
}

/// Golden ratio.
pub const PHI: f64 = 1.618_033_988_749_895;

/// `c2 / (1 - t)` at which the dominant branches stop growing:
/// `((3 + sqrt 5) / 2) ln((1 + sqrt 5) / 2)`.
pub fn halt_constant() -> f64 {
    (3.0 + libm::sqrt(5.0)) / 2.0 * libm::log(PHI)
}

/// Halt line of the dominant branches, `alpha(p) = halt_constant / (1 - p)`.
pub fn halt_line(p: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&p) {
        return Err(invalid!("halt line needs p in [0, 1), got {p}"));
    }
    Ok(halt_constant() / (1.0 - p))
}

const KNOTS: [(f64, f64); 3] = [(0.4, 5.0 / 3.0), (0.78, 3.02), (1.0, 4.3)];

/// Satisfiability threshold of 2+p-SAT. Exact `1 / (1 - p)` up to p = 2/5;
/// above, a monotone cubic through (0.4, 5/3), (0.78, 3.02), (1, 4.3) that
/// continues the exact branch with matching slope, flagged approximate.
pub fn sat_threshold_line(p: f64) -> Result<Flagged> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid!("threshold line needs p in [0, 1], got {p}"));
    }
    if p <= 0.4 {
        return Ok(Flagged::exact(1.0 / (1.0 - p)));
    }
    let [(x0, y0), (x1, y1), (x2, y2)] = KNOTS;
    let (h0, h1) = (x1 - x0, x2 - x1);
    let (d0, d1) = ((y1 - y0) / h0, (y2 - y1) / h1);
    // left slope continues 1/(1-p); interior slope is the weighted harmonic
    // mean; right slope is the one-sided three-point estimate
    let m0 = 1.0 / ((1.0 - x0) * (1.0 - x0));
    let (w1, w2) = (2.0 * h1 + h0, h1 + 2.0 * h0);
    let m1 = (w1 + w2) / (w1 / d0 + w2 / d1);
    let m2 = (((2.0 * h1 + h0) * d1 - h1 * d0) / (h0 + h1)).clamp(0.0, 3.0 * d1);
    let (xa, ya, ma, xb, yb, mb) = if p <= x1 { (x0, y0, m0, x1, y1, m1) } else { (x1, y1, m1, x2, y2, m2) };
    let h = xb - xa;
    let s = (p - xa) / h;
    let (s2, s3) = (s * s, s * s * s);
    let value = (2.0 * s3 - 3.0 * s2 + 1.0) * ya
        + (s3 - 2.0 * s2 + s) * h * ma
        + (-2.0 * s3 + 3.0 * s2) * yb
        + (s3 - s2) * h * mb;
    Ok(Flagged { value, approximate: true })
}

/// Critical mark density of vertex cover on G(N, c/N):
/// `1 - (2W(c) + W(c)^2) / (2c)`, flagged approximate for c > e.
pub fn vc_critical_x(c: f64) -> Result<Flagged> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(invalid!("critical line needs c > 0, got {c}"));
    }
    let w = lambert_w(c)?;
    Ok(Flagged { value: 1.0 - (2.0 * w + w * w) / (2.0 * c), approximate: c > core::f64::consts::E })
}

/// `(c(t), x(t))` of the backtrack-free vertex cover descent from `(c0, x0)`.
pub fn vc_trajectory(c0: f64, x0: f64, t: f64) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&t) {
        return Err(invalid!("trajectory time must lie in [0, 1), got {t}"));
    }
    if !(c0 >= 0.0) {
        return Err(invalid!("mean degree must be non-negative, got {c0}"));
    }
    let rest = 1.0 - t;
    // (e^{-c0 (1-t)} - e^{-c0}) / c0 = e^{-c0} (e^{c0 t} - 1) / c0
    let ct = c0 * t;
    let growth = if ct.abs() < 1e-8 { t * (1.0 + 0.5 * ct) } else { libm::expm1(ct) / c0 };
    let x = (x0 - t) / rest + libm::exp(-c0) * growth / rest;
    Ok((c0 * rest, x))
}

/// Separatrix `x_s(c) = 1 - (1 - e^{-c}) / c` between linear and exponential
/// solving time of the vertex cover search.
pub fn vc_separatrix(c: f64) -> Result<f64> {
    if !(c > 0.0) {
        return Err(invalid!("separatrix needs c > 0, got {c}"));
    }
    if c < 1e-6 {
        return Ok(c / 2.0 - c * c / 6.0);
    }
    Ok(1.0 + libm::expm1(-c) / c)
}

/// Three-term small-alpha expansion of the random walk resolution time t_res
/// on K-SAT. Flagged approximate when K < 3 or alpha is outside the small
/// alpha regime (alpha > 1).
pub fn prwsat_tres_series(alpha: f64, k: u32) -> Result<Flagged> {
    if k < 2 || k > 30 {
        return Err(invalid!("series needs 2 <= K <= 30, got {k}"));
    }
    if !(alpha >= 0.0) {
        return Err(invalid!("alpha must be non-negative, got {alpha}"));
    }
    let kf = k as f64;
    let two_k = libm::pow(2.0, kf);
    let a0 = 1.0 / two_k;
    let a1 = kf * (kf + 1.0) / (kf - 1.0) / (2.0 * two_k * two_k);
    let num = 4.0 * libm::pow(kf, 6.0) + libm::pow(kf, 5.0) + 6.0 * kf * kf * kf - 10.0 * kf * kf + 2.0 * kf;
    let den = 3.0 * (kf - 1.0) * (2.0 * kf - 1.0) * (kf * kf - 2.0);
    let a2 = num / den / (2.0 * two_k * two_k * two_k);
    Ok(Flagged { value: a0 + a1 * alpha + a2 * alpha * alpha, approximate: k < 3 || alpha > 1.0 })
}

/// Coefficients of the t_res expansion, lowest order first.
pub fn prwsat_tres_coefficients(k: u32) -> Result<[f64; 3]> {
    let a0 = prwsat_tres_series(0.0, k)?.value;
    let a1 = prwsat_tres_series(1.0, k)?.value;
    let a2 = prwsat_tres_series(2.0, k)?.value;
    // a0 + a1 x + a2 x^2 sampled at x = 0, 1, 2
    let c2 = (a2 - 2.0 * a1 + a0) / 2.0;
    Ok([a0, a1 - a0 - c2, c2])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Plateau {
    /// Ratio above which the walk's unsat fraction stays positive.
    pub alpha_d: f64,
    /// Plateau height of the unsat fraction; zero at or below `alpha_d`.
    pub phi0: f64,
}

/// Dynamical threshold and plateau height of the random walk on K-SAT.
pub fn prwsat_plateau(alpha: f64, k: u32) -> Result<Plateau> {
    if !(alpha > 0.0) || k < 1 || k > 30 {
        return Err(invalid!("plateau needs alpha > 0 and 1 <= K <= 30, got alpha={alpha} K={k}"));
    }
    let two_k = libm::pow(2.0, k as f64);
    let alpha_d = (two_k - 1.0) / k as f64;
    Ok(Plateau { alpha_d, phi0: (1.0 - alpha_d / alpha).max(0.0) / two_k })
}

/// The same quantities for K-XORSAT, where a flip toggles every equation of
/// the variable: `alpha_d = 1/K`, plateau `(1 - 1/(K alpha)) / 2`.
pub fn prwsat_plateau_xor(alpha: f64, k: u32) -> Result<Plateau> {
    if !(alpha > 0.0) || k < 1 {
        return Err(invalid!("plateau needs alpha > 0 and K >= 1, got alpha={alpha} K={k}"));
    }
    let alpha_d = 1.0 / k as f64;
    Ok(Plateau { alpha_d, phi0: 0.5 * (1.0 - alpha_d / alpha).max(0.0) })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IslandDensity {
    /// Expected islands per variable, `(729/8) alpha^7 e^{-45 alpha}`.
    pub islands: f64,
    /// Expected blocked islands per variable (one in 2^7 islands).
    pub psi: f64,
}

pub fn xorsat_island_density(alpha: f64) -> Result<IslandDensity> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(invalid!("alpha must be finite and non-negative, got {alpha}"));
    }
    let islands = 729.0 / 8.0 * libm::pow(alpha, 7.0) * libm::exp(-45.0 * alpha);
    Ok(IslandDensity { islands, psi: islands / 128.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn monotone(f: impl Fn(f64) -> f64, lo: f64, hi: f64) {
        let n = 2000;
        let mut prev = f(lo);
        for i in 1..=n {
            let v = f(lo + (hi - lo) * i as f64 / n as f64);
            assert!(v >= prev - 1e-12, "not monotone at {}", lo + (hi - lo) * i as f64 / n as f64);
            prev = v;
        }
    }

    #[test]
    fn halt_line_values() {
        let direct = (3.0 + 5f64.sqrt()) / 2.0 * ((1.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((halt_line(0.0).unwrap() - direct).abs() < 1e-15);
        assert!((halt_line(0.0).unwrap() - 1.2598).abs() < 1e-4);
        for p in [0.1, 0.5, 0.9, 0.999] {
            assert!((halt_line(p).unwrap() * (1.0 - p) - direct).abs() < 1e-12);
        }
        assert!(halt_line(1.0 - 1e-12).unwrap() > 1e11);
        assert!(halt_line(1.0).is_err());
        monotone(|p| halt_line(p).unwrap(), 0.0, 0.99);
    }

    #[test]
    fn threshold_line() {
        assert_eq!(sat_threshold_line(0.0).unwrap(), Flagged::exact(1.0));
        assert!((sat_threshold_line(0.4).unwrap().value - 5.0 / 3.0).abs() < 1e-12);
        let top = sat_threshold_line(1.0).unwrap();
        assert!((top.value - 4.3).abs() < 1e-12 && top.approximate);
        assert!((sat_threshold_line(0.78).unwrap().value - 3.02).abs() < 1e-12);
        // continuous with matching slope at 2/5
        let h = 1e-7;
        let left = (sat_threshold_line(0.4).unwrap().value - sat_threshold_line(0.4 - h).unwrap().value) / h;
        let right = (sat_threshold_line(0.4 + h).unwrap().value - sat_threshold_line(0.4).unwrap().value) / h;
        assert!((left - right).abs() < 1e-4);
        monotone(|p| sat_threshold_line(p).unwrap().value, 0.0, 1.0);
    }

    #[test]
    fn vc_lines() {
        let x2 = vc_critical_x(2.0).unwrap();
        assert!((x2.value - 0.3919).abs() < 5e-4 && !x2.approximate);
        let e = core::f64::consts::E;
        assert!((vc_critical_x(e).unwrap().value - (1.0 - 1.5 / e)).abs() < 1e-12);
        assert!(vc_critical_x(1e-6).unwrap().value.abs() < 1e-5);
        assert!(vc_critical_x(3.2).unwrap().approximate);
        monotone(|c| vc_critical_x(c).unwrap().value, 0.01, 10.0);

        assert!((vc_separatrix(1.0).unwrap() - (-1.0f64).exp()).abs() < 1e-12);
        assert!(vc_separatrix(1e-9).unwrap() < 1e-8);
        assert!(vc_separatrix(1e6).unwrap() > 0.999);
        monotone(|c| vc_separatrix(c).unwrap(), 1e-4, 50.0);
    }

    #[test]
    fn vc_trajectory_limits() {
        assert_eq!(vc_trajectory(2.0, 0.5, 0.0).unwrap(), (2.0, 0.5));
        // small c0 agrees with the c0 -> 0 limit (x0 - t)/(1 - t) + t/(1 - t)
        let (_, x) = vc_trajectory(1e-12, 0.3, 0.4).unwrap();
        assert!((x - (0.3 - 0.4 + 0.4) / 0.6).abs() < 1e-9);
        let (_, x_guard) = vc_trajectory(1e-9, 0.3, 0.4).unwrap();
        let (_, x_plain) = vc_trajectory(1e-3, 0.3, 0.4).unwrap();
        assert!((x_guard - x_plain).abs() < 1e-3);
        // separatrix trajectories end at x = 0
        let c0 = 1.7;
        let xs = vc_separatrix(c0).unwrap();
        let (_, x_end) = vc_trajectory(c0, xs, 1.0 - 1e-7).unwrap();
        assert!(x_end.abs() < 1e-5, "{x_end}");
    }

    #[test]
    fn tres_coefficients() {
        let c = prwsat_tres_coefficients(3).unwrap();
        assert!((c[0] - 1.0 / 8.0).abs() < 1e-15);
        assert!((c[1] - 3.0 / 64.0).abs() < 1e-14);
        assert!((c[2] - 3237.0 / 215040.0).abs() < 1e-14);
        for k in 2..8 {
            assert_eq!(prwsat_tres_series(0.0, k).unwrap().value, libm::pow(2.0, -(k as f64)));
        }
        assert!(prwsat_tres_series(0.1, 2).unwrap().approximate);
    }

    #[test]
    fn plateau_values() {
        let p = prwsat_plateau(3.0, 3).unwrap();
        assert!((p.alpha_d - 7.0 / 3.0).abs() < 1e-15);
        assert!((p.phi0 - 1.0 / 36.0).abs() < 1e-15);
        assert_eq!(prwsat_plateau(2.0, 3).unwrap().phi0, 0.0);
        assert_eq!(prwsat_plateau(7.0 / 3.0, 3).unwrap().phi0, 0.0);
        assert!((prwsat_plateau_xor(1.0, 3).unwrap().alpha_d - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn island_density() {
        assert_eq!(xorsat_island_density(0.0).unwrap().psi, 0.0);
        let psi = |a: f64| xorsat_island_density(a).unwrap().psi;
        let n = 200_000;
        let (mut best, mut arg) = (0.0, 0.0);
        for i in 1..=n {
            let a = 0.918 * i as f64 / n as f64;
            if psi(a) > best {
                best = psi(a);
                arg = a;
            }
        }
        assert!(best <= 1.5e-9, "{best}");
        assert!((arg - 7.0 / 45.0).abs() < 1e-5);
        let i = xorsat_island_density(0.3).unwrap();
        assert!((i.psi * 128.0 - i.islands).abs() < 1e-300);
    }
}
