//! Growth equation for the logarithm of the number of branches of the DPLL
//! search tree, solved by the method of characteristics.
//!
//! With `w(c2, c3, t)` the natural log of the number of branches per
//! variable and `y = grad w`, the equation reads `dw/dt = H(c, y, t)`.
//! Characteristics obey `dc/dt = -dH/dy`, `dy/dt = dH/dc` and
//! `dw/dt = H - y . dH/dy`. Every branch starts at one point, so the
//! characteristics form a fan of initial momenta. The dominant branches at
//! time `t` sit where `y(t) = 0`; they stop growing once `H(c, 0, t) <= 0`,
//! which for GUC is the halt line `c2 / (1 - t) = halt_constant()`.

use alloc::vec::Vec;

use crate::dpll::Heuristic;
use crate::error::{invalid, Error, Result};

/// `H` with its partial derivatives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HamiltonianValue {
    pub h: f64,
    pub dc2: f64,
    pub dc3: f64,
    pub dy2: f64,
    pub dy3: f64,
}

/// `nu(y) = e^y (1 + sqrt(1 + 4 e^{-y})) / 2` and its derivative.
fn nu(y: f64) -> (f64, f64) {
    let s = libm::sqrt(1.0 + 4.0 * libm::exp(-y));
    let v = 0.5 * libm::exp(y) * (1.0 + s);
    (v, v - 1.0 / s)
}

/// Growth rate of `w` (natural log units) for UC or GUC splitting.
pub fn hamiltonian(heuristic: Heuristic, c2: f64, c3: f64, y2: f64, y3: f64, t: f64) -> Result<HamiltonianValue> {
    let rest = 1.0 - t;
    let a = 3.0 * c3 / rest;
    let b = c2 / rest;
    let e = libm::exp(y3) * (1.0 + libm::exp(-y2)) / 2.0;
    let de_dy2 = -libm::exp(y3 - y2) / 2.0;
    let common = a * (e - 1.0);
    let dc3 = 3.0 * (e - 1.0) / rest;
    let dy3 = a * e;
    Ok(match heuristic {
        Heuristic::Uc => {
            let g = 1.5 * libm::exp(-y2) - 2.0;
            HamiltonianValue {
                h: core::f64::consts::LN_2 + common + b * g,
                dc2: g / rest,
                dc3,
                dy2: a * de_dy2 - 1.5 * b * libm::exp(-y2),
                dy3,
            }
        }
        Heuristic::Guc => {
            let (v, dv) = nu(y2);
            HamiltonianValue {
                h: libm::log(v) + common + b * (v - 2.0),
                dc2: (v - 2.0) / rest,
                dc3,
                dy2: dv / v + a * de_dy2 + b * dv,
                dy3,
            }
        }
        Heuristic::Sc1 => return Err(invalid!("no tree growth equation for SC1")),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PdeOptions {
    /// Time step of the maximizer track and of the characteristic integration.
    pub dt: f64,
    /// Fan resolution per momentum axis for surface samples; 0 disables them.
    pub fan: usize,
    /// Initial momenta of the fan span `[-fan_radius, fan_radius]^2`.
    pub fan_radius: f64,
    /// Record a surface slice every this many steps of the track.
    pub slice_every: usize,
}

impl Default for PdeOptions {
    fn default() -> Self {
        PdeOptions { dt: 1e-3, fan: 0, fan_radius: 1.0, slice_every: 10 }
    }
}

/// Dominant branch parameters at time `t`, `omega` in log2 units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PdePoint {
    pub t: f64,
    pub c2: f64,
    pub c3: f64,
    pub omega: f64,
}

impl PdePoint {
    pub fn p(&self) -> f64 {
        let s = self.c2 + self.c3;
        if s > 0.0 {
            self.c3 / s
        } else {
            1.0
        }
    }

    pub fn alpha(&self) -> f64 {
        (self.c2 + self.c3) / (1.0 - self.t)
    }
}

/// How the maximizer track ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HaltKind {
    /// The growth rate of the dominant branches reached zero.
    Crossed,
    /// The growth rate went through a positive minimum and rose again: the
    /// track grazed the halt line without crossing it. The track stops at
    /// the closest approach.
    ClosestApproach,
}

/// Points `(c2, c3, omega)` of the surface reached by the fan at time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceSlice {
    pub t: f64,
    pub samples: Vec<(f64, f64, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PdeSolution {
    /// Maximizer track, starting at the source with omega = 0.
    pub track: Vec<PdePoint>,
    /// Time at which the maximizer reaches the halt line.
    pub t_h: f64,
    /// omega at the halt line: log2 of the tree size divided by N.
    pub omega_hat: f64,
    pub halt: HaltKind,
    pub surface: Vec<SurfaceSlice>,
}

type State = [f64; 5];

fn deriv(heuristic: Heuristic, t: f64, s: &State) -> State {
    let hv = hamiltonian(heuristic, s[0], s[1], s[2], s[3], t).expect("heuristic checked");
    [-hv.dy2, -hv.dy3, hv.dc2, hv.dc3, hv.h - s[2] * hv.dy2 - s[3] * hv.dy3]
}

/// Integrates one characteristic from `start` (at t = 0) up to `t_end`.
fn shoot(heuristic: Heuristic, start: (f64, f64), y0: (f64, f64), t_end: f64, dt: f64) -> State {
    let mut s = [start.0, start.1, y0.0, y0.1, 0.0];
    if t_end <= 0.0 {
        return s;
    }
    let n = libm::ceil(t_end / dt - 1e-9).max(1.0) as usize;
    let h = t_end / n as f64;
    let mut t = 0.0;
    for _ in 0..n {
        let add = |a: &State, k: &State, w: f64| -> State { core::array::from_fn(|i| a[i] + w * k[i]) };
        let k1 = deriv(heuristic, t, &s);
        let k2 = deriv(heuristic, t + h / 2.0, &add(&s, &k1, h / 2.0));
        let k3 = deriv(heuristic, t + h / 2.0, &add(&s, &k2, h / 2.0));
        let k4 = deriv(heuristic, t + h, &add(&s, &k3, h));
        for i in 0..5 {
            s[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t += h;
    }
    s
}

/// Initial momentum whose characteristic has zero final momentum at `t_end`.
fn newton(heuristic: Heuristic, start: (f64, f64), guess: (f64, f64), t_end: f64, dt: f64) -> Result<((f64, f64), State)> {
    let mut y = guess;
    let eps = 1e-7;
    for _ in 0..60 {
        let s = shoot(heuristic, start, y, t_end, dt);
        let (f2, f3) = (s[2], s[3]);
        if f2.abs() < 1e-11 && f3.abs() < 1e-11 {
            return Ok((y, s));
        }
        let a = shoot(heuristic, start, (y.0 + eps, y.1), t_end, dt);
        let b = shoot(heuristic, start, (y.0, y.1 + eps), t_end, dt);
        let (j11, j21) = ((a[2] - f2) / eps, (a[3] - f3) / eps);
        let (j12, j22) = ((b[2] - f2) / eps, (b[3] - f3) / eps);
        let det = j11 * j22 - j12 * j21;
        if !det.is_finite() || det.abs() < 1e-300 {
            break;
        }
        let d2 = (f2 * j22 - f3 * j12) / det;
        let d3 = (j11 * f3 - j21 * f2) / det;
        y = (y.0 - d2, y.1 - d3);
        if !(y.0.is_finite() && y.1.is_finite()) {
            break;
        }
    }
    Err(Error::Resolution(alloc::format!(
        "no characteristic reaches zero momentum at t = {t_end:.4}; refine the step or widen the fan"
    )))
}

/// Solves the growth equation from a single source `(0, alpha0)`.
pub fn tree_pde_solve(alpha0: f64, heuristic: Heuristic, opts: PdeOptions) -> Result<PdeSolution> {
    if !(alpha0 > 0.0) || !alpha0.is_finite() {
        return Err(invalid!("alpha0 must be positive, got {alpha0}"));
    }
    tree_pde_solve_from(0.0, alpha0, heuristic, opts)
}

/// Solves the growth equation for branches that all start at `(c2, c3)`.
pub fn tree_pde_solve_from(c2: f64, c3: f64, heuristic: Heuristic, opts: PdeOptions) -> Result<PdeSolution> {
    if heuristic == Heuristic::Sc1 {
        return Err(invalid!("no tree growth equation for SC1"));
    }
    if !(c2 >= 0.0 && c3 >= 0.0 && c2 + c3 > 0.0) {
        return Err(invalid!("start densities must be non-negative and not both zero, got ({c2}, {c3})"));
    }
    if !(opts.dt > 0.0 && opts.dt < 0.1) {
        return Err(invalid!("step must lie in (0, 0.1), got {}", opts.dt));
    }
    let start = (c2, c3);
    let rate = |p: &PdePoint| hamiltonian(heuristic, p.c2, p.c3, 0.0, 0.0, p.t).map(|v| v.h);
    let mut track = alloc::vec![PdePoint { t: 0.0, c2, c3, omega: 0.0 }];
    let mut r_prev = rate(&track[0])?;
    if r_prev <= 0.0 {
        return Ok(PdeSolution { track, t_h: 0.0, omega_hat: 0.0, halt: HaltKind::Crossed, surface: Vec::new() });
    }
    let mut y_prev = (0.0, 0.0);
    let mut y_prev2 = (0.0, 0.0);
    let mut k = 0usize;
    let (t_h, omega_hat, halt) = loop {
        k += 1;
        let t = k as f64 * opts.dt;
        if t >= 1.0 - opts.dt {
            return Err(Error::Resolution("maximizer never reached the halt line".into()));
        }
        let guess = (2.0 * y_prev.0 - y_prev2.0, 2.0 * y_prev.1 - y_prev2.1);
        let (y0, s) = newton(heuristic, start, guess, t, opts.dt)
            .or_else(|_| newton(heuristic, start, y_prev, t, opts.dt))?;
        y_prev2 = y_prev;
        y_prev = y0;
        let point = PdePoint { t, c2: s[0], c3: s[1], omega: s[4] / core::f64::consts::LN_2 };
        if point.c2 < 0.0 || point.c3 < 0.0 {
            return Err(Error::Resolution(alloc::format!("maximizer left the physical quadrant at t = {t:.4}")));
        }
        let r = rate(&point)?;
        if r <= 0.0 {
            // growth rate crosses zero inside the last step
            let prev = *track.last().unwrap();
            let w = r_prev / (r_prev - r);
            let t_h = prev.t + w * opts.dt;
            let halt = PdePoint {
                t: t_h,
                c2: prev.c2 + w * (point.c2 - prev.c2),
                c3: prev.c3 + w * (point.c3 - prev.c3),
                omega: prev.omega + w * (point.omega - prev.omega),
            };
            track.push(halt);
            break (t_h, halt.omega.max(prev.omega), HaltKind::Crossed);
        }
        if r > r_prev && k > 1 {
            let prev = *track.last().unwrap();
            break (prev.t, prev.omega, HaltKind::ClosestApproach);
        }
        r_prev = r;
        track.push(point);
    };
    let surface = if opts.fan > 0 { fan_surface(heuristic, start, &opts, t_h) } else { Vec::new() };
    Ok(PdeSolution { track, t_h, omega_hat, halt, surface })
}

fn fan_surface(heuristic: Heuristic, start: (f64, f64), opts: &PdeOptions, t_h: f64) -> Vec<SurfaceSlice> {
    let every = opts.slice_every.max(1);
    let slices = libm::floor(t_h / (opts.dt * every as f64)) as usize;
    let mut out: Vec<SurfaceSlice> =
        (1..=slices).map(|j| SurfaceSlice { t: (j * every) as f64 * opts.dt, samples: Vec::new() }).collect();
    let n = opts.fan;
    for i in 0..n {
        for j in 0..n {
            let pos = |q: usize| if n == 1 { 0.0 } else { opts.fan_radius * (2.0 * q as f64 / (n - 1) as f64 - 1.0) };
            let y0 = (pos(i), pos(j));
            for slice in out.iter_mut() {
                let s = shoot(heuristic, start, y0, slice.t, opts.dt);
                if s.iter().all(|v| v.is_finite()) && s[0] >= 0.0 && s[1] >= 0.0 {
                    slice.samples.push((s[0], s[1], s[4] / core::f64::consts::LN_2));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::lines::{halt_constant, PHI};

    #[test]
    fn derivatives_match_finite_differences() {
        for heuristic in [Heuristic::Uc, Heuristic::Guc] {
            for &(c2, c3, y2, y3, t) in &[(0.3, 2.0, 0.1, -0.2, 0.1), (1.0, 0.5, -0.5, 0.3, 0.4), (0.0, 5.0, 0.0, 0.0, 0.0)] {
                let v = hamiltonian(heuristic, c2, c3, y2, y3, t).unwrap();
                let e = 1e-6;
                let f = |a: f64, b: f64, c: f64, d: f64| hamiltonian(heuristic, a, b, c, d, t).unwrap().h;
                let num = [
                    (f(c2 + e, c3, y2, y3) - f(c2 - e, c3, y2, y3)) / (2.0 * e),
                    (f(c2, c3 + e, y2, y3) - f(c2, c3 - e, y2, y3)) / (2.0 * e),
                    (f(c2, c3, y2 + e, y3) - f(c2, c3, y2 - e, y3)) / (2.0 * e),
                    (f(c2, c3, y2, y3 + e) - f(c2, c3, y2, y3 - e)) / (2.0 * e),
                ];
                for (a, b) in num.iter().zip([v.dc2, v.dc3, v.dy2, v.dy3]) {
                    assert!((a - b).abs() < 1e-7 * b.abs().max(1.0), "{heuristic:?} {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn halt_line_is_where_guc_growth_stops() {
        let b = halt_constant();
        let v = hamiltonian(Heuristic::Guc, b * 0.8, 1.3, 0.0, 0.0, 0.2).unwrap();
        assert!(v.h.abs() < 1e-12);
        assert!((nu(0.0).0 - PHI).abs() < 1e-15);
    }

    #[test]
    fn asymptotic_constant() {
        let c = (3.0 + 5f64.sqrt()) / (6.0 * 2f64.ln()) * PHI.ln().powi(2);
        assert!((c - 0.2915).abs() < 5e-5, "{c}");
    }

    #[test]
    fn track_properties() {
        let sol = tree_pde_solve(10.0, Heuristic::Guc, PdeOptions::default()).unwrap();
        let first = sol.track[0];
        assert_eq!((first.p(), first.alpha(), first.omega), (1.0, 10.0, 0.0));
        for w in sol.track.windows(2) {
            assert!(w[1].omega >= w[0].omega - 1e-12);
        }
        // d omega*/dt equals H at zero momentum
        for w in sol.track.windows(2).take(sol.track.len().saturating_sub(2)).step_by(7) {
            let (a, b) = (w[0], w[1]);
            let slope = (b.omega - a.omega) / (b.t - a.t) * core::f64::consts::LN_2;
            let mid = hamiltonian(Heuristic::Guc, (a.c2 + b.c2) / 2.0, (a.c3 + b.c3) / 2.0, 0.0, 0.0, (a.t + b.t) / 2.0)
                .unwrap()
                .h;
            assert!((slope - mid).abs() < 1e-3 * mid.abs().max(1.0), "{slope} {mid}");
        }
        assert_eq!(sol.halt, HaltKind::Crossed);
        let last = sol.track.last().unwrap();
        assert!((last.c2 / (1.0 - last.t) - halt_constant()).abs() < 1e-3);
    }

    #[test]
    fn fan_never_exceeds_maximizer() {
        let opts = PdeOptions { dt: 2e-3, fan: 9, fan_radius: 0.6, slice_every: 10 };
        let sol = tree_pde_solve(10.0, Heuristic::Guc, opts).unwrap();
        assert!(!sol.surface.is_empty());
        for slice in &sol.surface {
            let star = sol
                .track
                .iter()
                .min_by(|a, b| (a.t - slice.t).abs().partial_cmp(&(b.t - slice.t).abs()).unwrap())
                .unwrap();
            for &(_, _, w) in &slice.samples {
                assert!(w <= star.omega + 1e-6, "t={} {w} > {}", slice.t, star.omega);
            }
        }
    }

    #[test]
    fn sc1_has_no_growth_equation() {
        assert!(tree_pde_solve(10.0, Heuristic::Sc1, PdeOptions::default()).is_err());
    }
}
