//! Analytic predictions: branch trajectories, the growth equation of the
//! search tree, critical lines, series and special functions.

use alloc::string::String;
use alloc::vec::Vec;

use crate::dpll::Heuristic;
use crate::error::Result;

pub mod lines;
pub mod mixed;
pub mod ode;
pub mod pde;
pub mod special;

pub use lines::{
    halt_constant, halt_line, prwsat_plateau, prwsat_plateau_xor, prwsat_tres_coefficients, prwsat_tres_series,
    sat_threshold_line, vc_critical_x, vc_separatrix, vc_trajectory, xorsat_island_density, Flagged, IslandDensity,
    Plateau,
};
pub use mixed::{mixed_phase_predict, MixedPhase, MixedPrediction};
pub use ode::{branch_ode_from, branch_ode_integrate, uc_closed_form, BranchEnd, OdePoint, Trajectory};
pub use pde::{hamiltonian, tree_pde_solve, HaltKind, tree_pde_solve_from, PdeOptions, PdePoint, PdeSolution, SurfaceSlice};
pub use special::{bessel_i, bessel_i_scaled, lambert_w};

/// A one-parameter analytic curve that can be tabulated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CurveKind {
    /// alpha_C(p).
    SatThreshold,
    /// Halt line alpha(p).
    HaltLine,
    /// x_c(c).
    VcCritical,
    /// x_s(c).
    VcSeparatrix,
    /// t_res(alpha) series for K-SAT.
    TresSeries { k: u32 },
    /// Random walk plateau height phi0(alpha) on K-SAT.
    Plateau { k: u32 },
    /// Random walk plateau height phi0(alpha) on K-XORSAT.
    XorPlateau { k: u32 },
    /// Islands per variable as a function of alpha.
    IslandDensity,
    /// Blocked islands per variable as a function of alpha.
    IslandPsi,
    LambertW,
    BesselI { order: u32 },
    /// Tree size exponent omega_hat(alpha0) from the growth equation.
    TreeExponent { heuristic: Heuristic },
    /// Mixed-phase exponent (1 - t_G) omega_hat_G as a function of alpha0.
    MixedExponent { heuristic: Heuristic },
}

impl CurveKind {
    /// Stable identifier used in exported tables.
    pub fn id(&self) -> String {
        use alloc::format;
        match self {
            CurveKind::SatThreshold => "sat-threshold".into(),
            CurveKind::HaltLine => "halt-line".into(),
            CurveKind::VcCritical => "vc-critical".into(),
            CurveKind::VcSeparatrix => "vc-separatrix".into(),
            CurveKind::TresSeries { k } => format!("tres-series-k{k}"),
            CurveKind::Plateau { k } => format!("plateau-k{k}"),
            CurveKind::XorPlateau { k } => format!("xor-plateau-k{k}"),
            CurveKind::IslandDensity => "island-density".into(),
            CurveKind::IslandPsi => "island-psi".into(),
            CurveKind::LambertW => "lambert-w".into(),
            CurveKind::BesselI { order } => format!("bessel-i{order}"),
            CurveKind::TreeExponent { heuristic } => format!("tree-exponent-{}", heuristic.name()),
            CurveKind::MixedExponent { heuristic } => format!("mixed-exponent-{}", heuristic.name()),
        }
    }

    /// Inverse of [`CurveKind::id`].
    pub fn from_id(id: &str) -> Option<CurveKind> {
        let heuristic = |name: &str| [Heuristic::Uc, Heuristic::Guc, Heuristic::Sc1].into_iter().find(|h| h.name() == name);
        let k = |s: &str| s.parse::<u32>().ok().filter(|&k| k >= 1);
        Some(match id {
            "sat-threshold" => CurveKind::SatThreshold,
            "halt-line" => CurveKind::HaltLine,
            "vc-critical" => CurveKind::VcCritical,
            "vc-separatrix" => CurveKind::VcSeparatrix,
            "island-density" => CurveKind::IslandDensity,
            "island-psi" => CurveKind::IslandPsi,
            "lambert-w" => CurveKind::LambertW,
            _ => {
                if let Some(r) = id.strip_prefix("tres-series-k") {
                    CurveKind::TresSeries { k: k(r)? }
                } else if let Some(r) = id.strip_prefix("xor-plateau-k") {
                    CurveKind::XorPlateau { k: k(r)? }
                } else if let Some(r) = id.strip_prefix("plateau-k") {
                    CurveKind::Plateau { k: k(r)? }
                } else if let Some(r) = id.strip_prefix("bessel-i") {
                    CurveKind::BesselI { order: r.parse().ok().filter(|&o| o <= 1)? }
                } else if let Some(r) = id.strip_prefix("tree-exponent-") {
                    CurveKind::TreeExponent { heuristic: heuristic(r)? }
                } else if let Some(r) = id.strip_prefix("mixed-exponent-") {
                    CurveKind::MixedExponent { heuristic: heuristic(r)? }
                } else {
                    return None;
                }
            }
        })
    }

    /// Name of the grid variable.
    pub fn parameter(&self) -> &'static str {
        match self {
            CurveKind::SatThreshold | CurveKind::HaltLine => "p",
            CurveKind::VcCritical | CurveKind::VcSeparatrix | CurveKind::LambertW => "c",
            CurveKind::BesselI { .. } => "x",
            CurveKind::TreeExponent { .. } | CurveKind::MixedExponent { .. } => "alpha0",
            _ => "alpha",
        }
    }

    /// Value at one grid point; `None` where the curve is undefined there
    /// (e.g. no mixed phase below alpha_L).
    pub fn eval(&self, x: f64) -> Result<Option<Flagged>> {
        let exact = |value| Some(Flagged { value, approximate: false });
        Ok(match *self {
            CurveKind::SatThreshold => Some(sat_threshold_line(x)?),
            CurveKind::HaltLine => exact(halt_line(x)?),
            CurveKind::VcCritical => Some(vc_critical_x(x)?),
            CurveKind::VcSeparatrix => exact(vc_separatrix(x)?),
            CurveKind::TresSeries { k } => Some(prwsat_tres_series(x, k)?),
            CurveKind::Plateau { k } => exact(prwsat_plateau(x, k)?.phi0),
            CurveKind::XorPlateau { k } => exact(prwsat_plateau_xor(x, k)?.phi0),
            CurveKind::IslandDensity => exact(xorsat_island_density(x)?.islands),
            CurveKind::IslandPsi => exact(xorsat_island_density(x)?.psi),
            CurveKind::LambertW => exact(lambert_w(x)?),
            CurveKind::BesselI { order } => exact(bessel_i(order, x)?),
            CurveKind::TreeExponent { heuristic } => exact(tree_pde_solve(x, heuristic, PdeOptions::default())?.omega_hat),
            CurveKind::MixedExponent { heuristic } => match mixed_phase_predict(x, heuristic, PdeOptions::default())? {
                MixedPhase::Linear => None,
                MixedPhase::Mixed(m) => Some(Flagged { value: m.omega, approximate: m.approximate }),
            },
        })
    }
}

/// A tabulated curve with the identifier of the formula that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct TheoryCurve {
    pub id: String,
    pub parameter: &'static str,
    pub grid: Vec<f64>,
    /// `None` where the curve is undefined at that grid point.
    pub values: Vec<Option<f64>>,
    pub approximate: Vec<bool>,
}

impl TheoryCurve {
    pub fn tabulate(kind: CurveKind, grid: &[f64]) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.len());
        let mut approximate = Vec::with_capacity(grid.len());
        for &x in grid {
            let v = kind.eval(x)?;
            values.push(v.map(|f| f.value));
            approximate.push(v.is_some_and(|f| f.approximate));
        }
        Ok(TheoryCurve { id: kind.id(), parameter: kind.parameter(), grid: grid.to_vec(), values, approximate })
    }

    /// Linear interpolation; `None` outside the grid or next to an undefined point.
    pub fn interpolate(&self, x: f64) -> Option<f64> {
        let g = &self.grid;
        if g.is_empty() || x < g[0] || x > *g.last()? {
            return None;
        }
        let i = g.partition_point(|&v| v <= x).clamp(1, g.len().max(2) - 1);
        if g.len() == 1 {
            return self.values[0];
        }
        let (a, b) = (self.values[i - 1]?, self.values[i]?);
        let w = if g[i] > g[i - 1] { (x - g[i - 1]) / (g[i] - g[i - 1]) } else { 0.0 };
        Some(a + w * (b - a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tabulation() {
        let c = TheoryCurve::tabulate(CurveKind::SatThreshold, &[0.0, 0.2, 0.9]).unwrap();
        assert_eq!(c.id, "sat-threshold");
        assert_eq!(c.approximate, [false, false, true]);
        assert!((c.interpolate(0.1).unwrap() - (1.0 + 1.25) / 2.0).abs() < 1e-12);
        let m = TheoryCurve::tabulate(CurveKind::MixedExponent { heuristic: Heuristic::Guc }, &[2.0]).unwrap();
        assert_eq!(m.values, [None]);
    }

    #[test]
    fn ids_round_trip() {
        let kinds = [
            CurveKind::SatThreshold,
            CurveKind::HaltLine,
            CurveKind::VcCritical,
            CurveKind::VcSeparatrix,
            CurveKind::TresSeries { k: 3 },
            CurveKind::Plateau { k: 4 },
            CurveKind::XorPlateau { k: 3 },
            CurveKind::IslandDensity,
            CurveKind::IslandPsi,
            CurveKind::LambertW,
            CurveKind::BesselI { order: 1 },
            CurveKind::TreeExponent { heuristic: Heuristic::Guc },
            CurveKind::MixedExponent { heuristic: Heuristic::Sc1 },
        ];
        for k in kinds {
            assert_eq!(CurveKind::from_id(&k.id()), Some(k));
        }
        assert_eq!(CurveKind::from_id("plateau-k0"), None);
        assert_eq!(CurveKind::from_id("nope"), None);
    }
}
