//! Satisfiable instances whose first branch enters the unsatisfiable region.
//!
//! The branch trajectory crosses the threshold line at G. Everything below G
//! is an unsatisfiable sub-instance of N(1 - t_G) variables whose refutation
//! tree is predicted by the growth equation started at G.

use crate::dpll::Heuristic;
use crate::error::{invalid, Result};

use super::lines::sat_threshold_line;
use super::ode::{branch_ode_integrate, OdePoint};
use super::pde::{tree_pde_solve_from, HaltKind, PdeOptions};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixedPrediction {
    pub t_g: f64,
    pub p_g: f64,
    pub alpha_g: f64,
    /// Tree size exponent of the sub-instance at G, per its own variables.
    pub omega_hat_g: f64,
    /// `(1 - t_g) * omega_hat_g`: log2 of the complexity divided by N.
    pub omega: f64,
    /// The crossing used the interpolated part of the threshold line, or
    /// the tree from G only grazed the halt line.
    pub approximate: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MixedPhase {
    /// The branch never crosses the threshold line: linear regime.
    Linear,
    Mixed(MixedPrediction),
}

fn gap(q: &OdePoint) -> Result<(f64, bool)> {
    let th = sat_threshold_line(q.p().clamp(0.0, 1.0))?;
    Ok((q.alpha() - th.value, th.approximate))
}

pub fn mixed_phase_predict(alpha0: f64, heuristic: Heuristic, opts: PdeOptions) -> Result<MixedPhase> {
    if heuristic == Heuristic::Sc1 {
        return Err(invalid!("no tree growth equation for SC1"));
    }
    let traj = branch_ode_integrate(alpha0, heuristic, 1e-4)?;
    let pts = &traj.points;
    let mut bracket = None;
    for i in 1..pts.len() {
        if gap(&pts[i])?.0 >= 0.0 {
            bracket = Some(i);
            break;
        }
    }
    let Some(i) = bracket else { return Ok(MixedPhase::Linear) };
    if i == 0 || gap(&pts[0])?.0 >= 0.0 {
        return Err(invalid!("alpha0 = {alpha0} starts above the threshold line"));
    }
    // bisection on the interpolated trajectory
    let (mut lo, mut hi) = (pts[i - 1].t, pts[i].t);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let q = traj.at(mid).expect("inside trajectory");
        if gap(&q)?.0 >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let g = traj.at(hi).expect("inside trajectory");
    let (_, approximate) = gap(&g)?;
    let (p_g, alpha_g) = (g.p(), g.alpha());
    let sub = tree_pde_solve_from(alpha_g * (1.0 - p_g), alpha_g * p_g, heuristic, opts)?;
    Ok(MixedPhase::Mixed(MixedPrediction {
        t_g: g.t,
        p_g,
        alpha_g,
        omega_hat_g: sub.omega_hat,
        omega: (1.0 - g.t) * sub.omega_hat,
        approximate: approximate || sub.halt == HaltKind::ClosestApproach,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_below_alpha_l() {
        assert_eq!(mixed_phase_predict(2.0, Heuristic::Guc, PdeOptions::default()).unwrap(), MixedPhase::Linear);
    }

    #[test]
    fn crossing_near_reference_point() {
        let MixedPhase::Mixed(m) = mixed_phase_predict(3.5, Heuristic::Guc, PdeOptions::default()).unwrap() else {
            panic!("expected a crossing");
        };
        assert!((m.p_g - 0.78).abs() < 0.05 && (m.alpha_g - 3.02).abs() < 0.05, "{m:?}");
        assert_eq!(m.omega, (1.0 - m.t_g) * m.omega_hat_g);
        assert!(m.omega > 0.0);
    }
}
