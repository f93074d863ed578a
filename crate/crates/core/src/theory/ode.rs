//! Mean-field equations for the clause densities along one branch of DPLL.

use alloc::vec::Vec;

use crate::dpll::Heuristic;
use crate::error::{invalid, Error, Result};

use super::special::bessel_i_scaled;

/// Clause densities per original variable after a fraction `t` of the
/// variables has been assigned.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OdePoint {
    pub t: f64,
    pub c2: f64,
    pub c3: f64,
}

impl OdePoint {
    /// Fraction of 3-clauses in the residual instance.
    pub fn p(&self) -> f64 {
        let s = self.c2 + self.c3;
        if s > 0.0 {
            self.c3 / s
        } else {
            1.0
        }
    }

    /// Clause-to-variable ratio of the residual instance.
    pub fn alpha(&self) -> f64 {
        (self.c2 + self.c3) / (1.0 - self.t)
    }
}

/// Why the integration stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchEnd {
    /// Every clause is gone (c2 + c3 below tolerance).
    Exhausted,
    /// The 2-clause density reached zero; the residual instance is pure 3-SAT.
    ThreeSatAxis,
    /// Unit clauses absorb every step (rho1 <= 0).
    Halt,
    /// t came within one step of 1.
    EndOfTime,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub points: Vec<OdePoint>,
    pub end: BranchEnd,
}

impl Trajectory {
    /// Linear interpolation at time `t`, or `None` outside the trajectory.
    pub fn at(&self, t: f64) -> Option<OdePoint> {
        let pts = &self.points;
        let last = pts.last()?;
        if t < pts[0].t || t > last.t {
            return None;
        }
        let i = pts.partition_point(|q| q.t <= t).clamp(1, pts.len() - 1);
        let (a, b) = (pts[i - 1], pts[i]);
        let w = if b.t > a.t { (t - a.t) / (b.t - a.t) } else { 0.0 };
        Some(OdePoint { t, c2: a.c2 + w * (b.c2 - a.c2), c3: a.c3 + w * (b.c3 - a.c3) })
    }
}

/// Probability-like weight h(t) with which a free split removes a 2-clause.
fn h(heuristic: Heuristic, c3: f64, rest: f64) -> f64 {
    match heuristic {
        Heuristic::Uc => 0.0,
        Heuristic::Guc => 1.0,
        Heuristic::Sc1 => {
            let a = (3.0 * c3 / rest).max(0.0);
            let i0 = bessel_i_scaled(0, a).expect("non-negative argument");
            let i1 = bessel_i_scaled(1, a).expect("non-negative argument");
            a * (i0 + i1) / 2.0
        }
    }
}

fn rhs(heuristic: Heuristic, t: f64, c2: f64, c3: f64) -> (f64, f64) {
    let rest = 1.0 - t;
    let rho1 = 1.0 - c2 / rest;
    let dc3 = -3.0 * c3 / rest;
    let dc2 = 1.5 * c3 / rest - 2.0 * c2 / rest - rho1 * h(heuristic, c3, rest);
    (dc2, dc3)
}

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Integrates the branch equations from `(c2, c3) = (0, alpha0)` with
/// classical fourth-order Runge-Kutta steps of size `dt`.
pub fn branch_ode_integrate(alpha0: f64, heuristic: Heuristic, dt: f64) -> Result<Trajectory> {
    if !(alpha0 > 0.0) || !alpha0.is_finite() {
        return Err(invalid!("alpha0 must be positive, got {alpha0}"));
    }
    if heuristic == Heuristic::Guc && alpha0 <= 2.0 / 3.0 {
        return Err(Error::Domain(alloc::format!("GUC branch equations need alpha0 > 2/3, got {alpha0}")));
    }
    branch_ode_from(0.0, alpha0, heuristic, dt)
}

/// Same integration from an arbitrary starting density pair at t = 0.
pub fn branch_ode_from(c2: f64, c3: f64, heuristic: Heuristic, dt: f64) -> Result<Trajectory> {
    if !(dt > 0.0 && dt < 0.5) {
        return Err(invalid!("step must lie in (0, 0.5), got {dt}"));
    }
    if !(c2 >= 0.0 && c3 >= 0.0) {
        return Err(invalid!("densities must be non-negative, got ({c2}, {c3})"));
    }
    let mut pts = alloc::vec![OdePoint { t: 0.0, c2, c3 }];
    let (mut t, mut c2, mut c3) = (0.0, c2, c3);
    let end = loop {
        if c2 + c3 <= DEFAULT_TOLERANCE {
            break BranchEnd::Exhausted;
        }
        if c2 >= 1.0 - t {
            break BranchEnd::Halt;
        }
        if t + dt >= 1.0 {
            break BranchEnd::EndOfTime;
        }
        let f = |tt: f64, a: f64, b: f64| rhs(heuristic, tt, a, b);
        let k1 = f(t, c2, c3);
        let k2 = f(t + dt / 2.0, c2 + dt / 2.0 * k1.0, c3 + dt / 2.0 * k1.1);
        let k3 = f(t + dt / 2.0, c2 + dt / 2.0 * k2.0, c3 + dt / 2.0 * k2.1);
        let k4 = f(t + dt, c2 + dt * k3.0, c3 + dt * k3.1);
        let n2 = c2 + dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        let n3 = c3 + dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        if n2 < 0.0 && c2 > 0.0 {
            // cross c2 = 0 inside the step: stop on the axis
            let w = c2 / (c2 - n2);
            pts.push(OdePoint { t: t + w * dt, c2: 0.0, c3: c3 + w * (n3 - c3) });
            break BranchEnd::ThreeSatAxis;
        }
        t += dt;
        c2 = n2.max(0.0);
        c3 = n3.max(0.0);
        pts.push(OdePoint { t, c2, c3 });
    };
    Ok(Trajectory { points: pts, end })
}

/// Closed-form UC solution: `c3 = alpha0 (1-t)^3`, `c2 = 3/2 alpha0 t (1-t)^2`.
pub fn uc_closed_form(alpha0: f64, t: f64) -> OdePoint {
    let r = 1.0 - t;
    OdePoint { t, c2: 1.5 * alpha0 * t * r * r, c3: alpha0 * r * r * r }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uc_matches_closed_form() {
        for a0 in [0.5, 1.0, 2.0] {
            let tr = branch_ode_integrate(a0, Heuristic::Uc, 1e-3).unwrap();
            let mut worst: f64 = 0.0;
            for p in tr.points.iter().filter(|p| p.t <= 0.99) {
                let e = uc_closed_form(a0, p.t);
                worst = worst.max((p.c2 - e.c2).abs()).max((p.c3 - e.c3).abs());
            }
            assert!(worst < 1e-6, "{worst}");
            let q = tr.points[500];
            let r = 1.0 - q.t;
            assert!((q.p() - r / (1.0 + q.t / 2.0)).abs() < 1e-6);
            assert!((q.alpha() - a0 * r * (1.0 + q.t / 2.0)).abs() < 1e-6);
        }
    }

    #[test]
    fn change_of_variables_is_consistent() {
        let tr = branch_ode_integrate(2.8, Heuristic::Sc1, 1e-3).unwrap();
        for q in &tr.points {
            assert!((q.p() * q.alpha() * (1.0 - q.t) - q.c3).abs() < 1e-12);
            assert!((q.alpha() * (1.0 - q.t) - (q.c2 + q.c3)).abs() < 1e-12);
        }
        let q0 = tr.points[0];
        assert_eq!((q0.p(), q0.alpha()), (1.0, 2.8));
    }

    #[test]
    fn guc_bends_left_then_right() {
        for a0 in [2.0, 2.8] {
            let tr = branch_ode_integrate(a0, Heuristic::Guc, 1e-4).unwrap();
            assert_eq!(tr.end, BranchEnd::ThreeSatAxis);
            let ps: Vec<f64> = tr.points.iter().map(OdePoint::p).collect();
            let (imin, pmin) = ps.iter().copied().enumerate().fold((0, 2.0), |b, (i, p)| if p < b.1 { (i, p) } else { b });
            assert!(pmin < 0.9 && imin > 0 && imin < ps.len() - 1);
            let last = tr.points.last().unwrap();
            assert!((last.p() - 1.0).abs() < 1e-9);
            assert!(last.alpha() < 1.0, "{}", last.alpha());
        }
    }

    #[test]
    fn guc_domain() {
        assert!(matches!(branch_ode_integrate(0.6, Heuristic::Guc, 1e-3), Err(Error::Domain(_))));
        assert!(branch_ode_integrate(0.6, Heuristic::Uc, 1e-3).is_ok());
    }

    #[test]
    fn interpolation() {
        let tr = branch_ode_integrate(1.0, Heuristic::Uc, 1e-3).unwrap();
        let q = tr.at(0.25).unwrap();
        let e = uc_closed_form(1.0, 0.25);
        assert!((q.c3 - e.c3).abs() < 1e-6);
        assert!(tr.at(-0.1).is_none());
    }
}
