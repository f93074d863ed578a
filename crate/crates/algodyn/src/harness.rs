//! Seeded ensemble sweeps, run-to-run histograms and theory overlays.
//!
//! Every trial draws its instance and solver randomness from
//! `derive_seed(master, [size index, grid index, trial index])`, trials run
//! on a rayon pool and are collected in job order, so reports do not depend
//! on the number of workers.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use algodyn_core::dpll::{dpll_first_descent, dpll_solve, Heuristic, Outcome};
use algodyn_core::instances::{
    gen_2p_sat, gen_gnp, gen_ksat, gen_regular_ldpc, gen_xorsat, Assignment, Graph, KSatInstance, XorMode,
};
use algodyn_core::local_search::{bec_erasures, bec_peel_decode, prwsat_run, sa_decode, WalkOptions, WalkProblem};
use algodyn_core::rng::derive_seed;
use algodyn_core::theory::{branch_ode_integrate, vc_trajectory, CurveKind, TheoryCurve};
use algodyn_core::vc::{vc_first_descent, vc_solve, vc_with_restarts, VcOutcome};

use crate::stats::{fit_exponent, ExponentFit, Histogram, Summary};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    /// DPLL tree size over clause ratio alpha.
    DpllSweep,
    /// Vertex cover tree size over cover fraction x.
    VcSweep,
    /// Random walk plateau height over alpha.
    PrwsatSweep,
    /// Decoder residual energy over noise p.
    DecodeSweep,
    /// Vertex cover with restarts, total cost over omega'_R.
    RestartStudy,
    /// First descent against the analytic trajectory over alpha0 (DPLL) or x0 (VC).
    TrajectoryCheck,
}

impl Task {
    pub fn id(self) -> &'static str {
        match self {
            Task::DpllSweep => "dpll-sweep",
            Task::VcSweep => "vc-sweep",
            Task::PrwsatSweep => "prwsat-sweep",
            Task::DecodeSweep => "decode-sweep",
            Task::RestartStudy => "restart-study",
            Task::TrajectoryCheck => "trajectory-check",
        }
    }

    /// Name of the grid variable.
    pub fn parameter(self) -> &'static str {
        match self {
            Task::DpllSweep | Task::PrwsatSweep => "alpha",
            Task::VcSweep => "x",
            Task::DecodeSweep => "p",
            Task::RestartStudy => "omega_r",
            Task::TrajectoryCheck => "start",
        }
    }

    fn has_tree_size(self) -> bool {
        matches!(self, Task::DpllSweep | Task::VcSweep | Task::RestartStudy)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    #[default]
    Ksat,
    Xorsat,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decoder {
    #[default]
    Peel,
    Sa,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    #[default]
    Dpll,
    Vc,
}

/// Ensemble and solver parameters shared by the tasks; each task reads the
/// fields it needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Ensemble {
    /// Clause length for K-SAT and the walk.
    pub k: usize,
    /// 3-clause fraction; when set, DPLL sweeps draw 2+p-SAT instead of K-SAT.
    pub p: Option<f64>,
    /// uc, guc or sc1.
    pub heuristic: String,
    /// Mean degree of G(N, c/N).
    pub c: f64,
    /// Cover fraction for restart studies.
    pub x: f64,
    pub problem: Problem,
    pub decoder: Decoder,
    /// Annealing sweeps per temperature.
    pub tau: usize,
    pub column_weight: usize,
    pub row_weight: usize,
    /// Cap on restarts per trial.
    pub max_runs: u64,
    pub solver: Solver,
    pub bins: usize,
}

impl Default for Ensemble {
    fn default() -> Self {
        Ensemble {
            k: 3,
            p: None,
            heuristic: "guc".into(),
            c: 2.0,
            x: 0.6,
            problem: Problem::Ksat,
            decoder: Decoder::Peel,
            tau: 10,
            column_weight: 3,
            row_weight: 6,
            max_runs: 100_000,
            solver: Solver::Dpll,
            bins: 20,
        }
    }
}

impl Ensemble {
    pub fn heuristic(&self) -> Result<Heuristic> {
        parse_heuristic(&self.heuristic)
    }
}

pub fn parse_heuristic(name: &str) -> Result<Heuristic> {
    [Heuristic::Uc, Heuristic::Guc, Heuristic::Sc1]
        .into_iter()
        .find(|h| h.name() == name)
        .ok_or_else(|| Error::Invalid(format!("unknown heuristic {name:?} (uc, guc, sc1)")))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Cutoffs {
    /// Search nodes per run (DPLL splits, VC assignments).
    pub nodes: Option<u64>,
    /// Flips per walk; defaults to 1000 M.
    pub flips: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: PathBuf,
    #[serde(default)]
    pub format: OutputFormat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub task: Task,
    #[serde(default)]
    pub seed: u64,
    pub trials: usize,
    pub sizes: Vec<usize>,
    pub grid: Vec<f64>,
    #[serde(default)]
    pub ensemble: Ensemble,
    #[serde(default)]
    pub cutoffs: Cutoffs,
    #[serde(default)]
    pub output: Option<OutputSpec>,
    /// Curve identifiers attached as theory columns; the first one fills the
    /// per-cell theory column.
    #[serde(default)]
    pub theory: Vec<String>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Invalid(m));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.sizes.is_empty() || self.grid.is_empty() {
            return bad("sizes and grid must be non-empty".into());
        }
        if let Some(&n) = self.sizes.iter().find(|&&n| n == 0) {
            return bad(format!("size {n} is not allowed"));
        }
        if let Some(x) = self.grid.iter().find(|x| !x.is_finite()) {
            return bad(format!("grid value {x} is not finite"));
        }
        let e = &self.ensemble;
        e.heuristic()?;
        if e.bins == 0 {
            return bad("bins must be at least 1".into());
        }
        for id in &self.theory {
            if CurveKind::from_id(id).is_none() {
                return bad(format!("unknown theory curve {id:?}"));
            }
        }
        let in_unit = |v: &f64| (0.0..=1.0).contains(v);
        match self.task {
            Task::DpllSweep => {
                if self.grid.iter().any(|&a| a < 0.0) {
                    return bad("alpha must be non-negative".into());
                }
                match e.p {
                    Some(p) if !in_unit(&p) => return bad(format!("2+p fraction {p} outside [0, 1]")),
                    None if e.k == 0 || self.sizes.iter().any(|&n| e.k > n) => {
                        return bad(format!("clause length {} invalid for the sizes", e.k))
                    }
                    _ => {}
                }
            }
            Task::VcSweep | Task::RestartStudy => {
                if !(e.c >= 0.0) {
                    return bad("mean degree must be non-negative".into());
                }
                if self.task == Task::VcSweep && !self.grid.iter().all(in_unit) {
                    return bad("cover fractions must lie in [0, 1]".into());
                }
                if self.task == Task::RestartStudy && (self.grid.iter().any(|&w| w < 0.0) || !in_unit(&e.x)) {
                    return bad("restart exponents must be >= 0 and x in [0, 1]".into());
                }
            }
            Task::PrwsatSweep => {
                if self.grid.iter().any(|&a| !(a > 0.0)) {
                    return bad("alpha must be positive".into());
                }
                if e.problem == Problem::Xorsat && e.k != 3 {
                    return bad("XORSAT walks use K = 3".into());
                }
                if e.k == 0 || self.sizes.iter().any(|&n| e.k > n) {
                    return bad(format!("clause length {} invalid for the sizes", e.k));
                }
            }
            Task::DecodeSweep => {
                if !self.grid.iter().all(in_unit) {
                    return bad("noise levels must lie in [0, 1]".into());
                }
                let (l, k) = (e.column_weight, e.row_weight);
                if let Some(n) = self.sizes.iter().find(|&&n| l == 0 || k == 0 || (n * l) % k != 0 || k > n) {
                    return bad(format!("N = {n} incompatible with column weight {l} and row weight {k}"));
                }
            }
            Task::TrajectoryCheck => match e.solver {
                Solver::Dpll if self.grid.iter().any(|&a| !(a > 0.0)) => return bad("alpha0 must be positive".into()),
                Solver::Vc if !self.grid.iter().all(in_unit) => return bad("x0 must lie in [0, 1]".into()),
                _ => {}
            },
        }
        Ok(())
    }
}

/// One trial of one cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub n: usize,
    pub size_index: usize,
    pub grid_index: usize,
    pub param: f64,
    pub trial: usize,
    pub seed: u64,
    /// Summarized quantity: tree size Q, plateau phi0, energy density or deviation.
    #[serde(with = "nullable")]
    pub value: f64,
    /// Histogrammed quantity: log2(Q)/N for tree sizes, `value` otherwise.
    #[serde(with = "nullable")]
    pub hist_value: f64,
    /// Work done (nodes, flips, violated checks, trace length).
    #[serde(with = "nullable")]
    pub work: f64,
    pub success: bool,
    /// Stopped by a cutoff.
    pub incomplete: bool,
    /// Realized ensemble parameter of the drawn instance.
    #[serde(with = "nullable")]
    pub realized: f64,
    pub error: Option<String>,
}

/// Aggregates over the trials of one (N, grid point) cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellRow {
    pub task: String,
    pub n: usize,
    pub parameter: String,
    pub param: f64,
    pub grid_index: usize,
    pub trials: usize,
    pub failed: usize,
    pub incomplete: usize,
    pub success_rate: f64,
    #[serde(with = "nullable")]
    pub realized_mean: f64,
    #[serde(with = "nullable")]
    pub median: f64,
    #[serde(with = "nullable")]
    pub mean: f64,
    #[serde(with = "nullable")]
    pub q05: f64,
    #[serde(with = "nullable")]
    pub q25: f64,
    #[serde(with = "nullable")]
    pub q75: f64,
    #[serde(with = "nullable")]
    pub q95: f64,
    pub hist_of: String,
    #[serde(with = "nullable")]
    pub hist_lo: f64,
    #[serde(with = "nullable")]
    pub hist_hi: f64,
    pub hist: String,
    pub seed_lineage: String,
    pub theory_id: String,
    pub theory: Option<f64>,
    pub theory_approximate: bool,
}

/// Exponent fit of the median tree size against N at one grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitRow {
    pub task: String,
    pub param: f64,
    pub grid_index: usize,
    pub sizes: String,
    pub regime: String,
    pub coefficient: f64,
    pub omega: f64,
    pub gamma: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleReport {
    pub config: ExperimentConfig,
    pub cells: Vec<CellRow>,
    pub fits: Vec<FitRow>,
    pub trials: Vec<TrialRecord>,
}

impl EnsembleReport {
    pub fn cell(&self, n: usize, grid_index: usize) -> Option<&CellRow> {
        self.cells.iter().find(|c| c.n == n && c.grid_index == grid_index)
    }
}

struct TrialOut {
    value: f64,
    hist_value: f64,
    work: f64,
    success: bool,
    incomplete: bool,
    realized: f64,
}

fn tree(n: usize, q: u64, success: bool, incomplete: bool, realized: f64) -> TrialOut {
    let q = q as f64;
    TrialOut { value: q, hist_value: q.max(1.0).log2() / n as f64, work: q, success, incomplete, realized }
}

fn round_count(x: f64, n: usize) -> usize {
    (x * n as f64).round() as usize
}

fn draw_ksat(cfg: &ExperimentConfig, n: usize, alpha: f64, seed: u64) -> Result<KSatInstance> {
    Ok(match cfg.ensemble.p {
        Some(p) => gen_2p_sat(n, alpha, p, seed)?,
        None => gen_ksat(n, round_count(alpha, n), cfg.ensemble.k, seed)?,
    })
}

fn run_trial(cfg: &ExperimentConfig, n: usize, param: f64, seed: u64) -> Result<TrialOut> {
    let e = &cfg.ensemble;
    Ok(match cfg.task {
        Task::DpllSweep => {
            let inst = draw_ksat(cfg, n, param, seed)?;
            let s = dpll_solve(&inst, e.heuristic()?, seed, cfg.cutoffs.nodes);
            tree(n, s.nodes, s.outcome.is_sat(), s.outcome == Outcome::Aborted, inst.tag().alpha)
        }
        Task::VcSweep => {
            let g = gen_gnp(n, e.c, seed)?;
            let s = vc_solve(&g, round_count(param, n), seed, cfg.cutoffs.nodes);
            let done = matches!(s.outcome, VcOutcome::Aborted);
            tree(n, s.nodes, matches!(s.outcome, VcOutcome::Cov(_)), done, g.mean_degree())
        }
        Task::RestartStudy => {
            let g = gen_gnp(n, e.c, seed)?;
            let s = vc_with_restarts(&g, round_count(e.x, n), param, seed, e.max_runs);
            let done = matches!(s.outcome, VcOutcome::Aborted);
            tree(n, s.total_nodes, matches!(s.outcome, VcOutcome::Cov(_)), done, g.mean_degree())
        }
        Task::PrwsatSweep => {
            let (run, realized) = match e.problem {
                Problem::Ksat => {
                    let inst = gen_ksat(n, round_count(param, n), e.k, seed)?;
                    let opts = walk_options(cfg, inst.n_clauses());
                    (prwsat_run(WalkProblem::Sat(&inst), seed, opts), inst.tag().alpha)
                }
                Problem::Xorsat => {
                    let inst = gen_xorsat(n, param, XorMode::FixedM, seed)?;
                    let opts = walk_options(cfg, inst.n_equations());
                    (prwsat_run(WalkProblem::Xor(&inst), seed, opts), inst.n_equations() as f64 / n as f64)
                }
            };
            // solved before t = 1: no plateau
            let phi = run.plateau.as_ref().map_or(0.0, |p| p.mean);
            TrialOut {
                value: phi,
                hist_value: phi,
                work: run.flips() as f64,
                success: run.is_solved(),
                incomplete: !run.is_solved(),
                realized,
            }
        }
        Task::DecodeSweep => {
            let code = gen_regular_ldpc(n, e.column_weight, e.row_weight, seed)?;
            let run = match e.decoder {
                Decoder::Peel => {
                    let erased = bec_erasures(n, param, seed)?;
                    bec_peel_decode(&code, &Assignment::all_false(n), &erased, seed)?
                }
                Decoder::Sa => sa_decode(&code, param, e.tau, seed)?,
            };
            let unknown = run.fixed.iter().filter(|&&f| !f).count() as f64 / n as f64;
            TrialOut {
                value: run.energy_density,
                hist_value: run.energy_density,
                work: run.violated as f64,
                success: run.success,
                incomplete: false,
                realized: unknown,
            }
        }
        Task::TrajectoryCheck => match e.solver {
            Solver::Dpll => {
                let inst = gen_ksat(n, round_count(param, n), 3, seed)?;
                let d = dpll_trajectory_deviation(&inst, e.heuristic()?, seed)?;
                TrialOut {
                    value: d.deviation,
                    hist_value: d.deviation,
                    work: d.compared as f64,
                    success: d.solved,
                    incomplete: false,
                    realized: inst.tag().alpha,
                }
            }
            Solver::Vc => {
                let g = gen_gnp(n, e.c, seed)?;
                let d = vc_trajectory_deviation(&g, round_count(param, n), seed)?;
                TrialOut {
                    value: d.deviation,
                    hist_value: d.deviation,
                    work: d.compared as f64,
                    success: d.solved,
                    incomplete: false,
                    realized: g.mean_degree(),
                }
            }
        },
    })
}

fn walk_options(cfg: &ExperimentConfig, m: usize) -> WalkOptions {
    WalkOptions { max_flips: cfg.cutoffs.flips.unwrap_or(1000 * m.max(1) as u64), record_every: u64::MAX }
}

/// Sup distance between a measured first descent and its analytic trajectory.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Deviation {
    pub deviation: f64,
    /// Trace points inside the comparison window.
    pub compared: usize,
    pub solved: bool,
}

/// Sup over t of max(|p - p_ode|, |alpha - alpha_ode|) along the first
/// descent, against the ODE started from the realized alpha. Compared while
/// t <= t_end - 0.02, t_end being where the ODE trajectory ends.
pub fn dpll_trajectory_deviation(inst: &KSatInstance, heuristic: Heuristic, seed: u64) -> Result<Deviation> {
    let ode = branch_ode_integrate(inst.tag().alpha, heuristic, 1e-3)?;
    let t_end = ode.points.last().map_or(0.0, |p| p.t);
    let d = dpll_first_descent(inst, heuristic, seed);
    let mut dev = 0.0f64;
    let mut compared = 0;
    for pt in d.trace.iter().take_while(|pt| pt.t <= t_end - 0.02) {
        if let Some(o) = ode.at(pt.t) {
            let (p, a) = pt.p_alpha();
            dev = dev.max((p - o.p()).abs()).max((a - o.alpha()).abs());
            compared += 1;
        }
    }
    let solved = matches!(d.status, algodyn_core::dpll::DescentStatus::Solved(_));
    Ok(Deviation { deviation: dev, compared, solved })
}

/// Sup over t of max(|c - c(t)|, |x - x(t)|) along the vertex cover first
/// descent, against the trajectory from the realized (c, x). Compared for
/// t <= 0.98 while the descent still has free vertices.
pub fn vc_trajectory_deviation(graph: &Graph, budget: usize, seed: u64) -> Result<Deviation> {
    let n = graph.n_verts().max(1) as f64;
    let (c0, x0) = (graph.mean_degree(), budget as f64 / n);
    let d = vc_first_descent(graph, budget, seed);
    let mut dev = 0.0f64;
    let mut compared = 0;
    for pt in d.trace.iter().take_while(|pt| pt.t <= 0.98) {
        if (1.0 - pt.t) * n < 1.0 {
            break;
        }
        let (c, x) = vc_trajectory(c0, x0, pt.t)?;
        dev = dev.max((pt.c - c).abs()).max((pt.x - x).abs());
        compared += 1;
    }
    Ok(Deviation { deviation: dev, compared, solved: d.success })
}

/// Non-finite floats as JSON null (empty CSV field) and back as NaN.
mod nullable {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        if t == 0 {
            return Err(Error::Invalid("thread count must be at least 1".into()));
        }
        b = b.num_threads(t);
    }
    b.build().map_err(|e| Error::Internal(e.to_string()))
}

/// Runs every trial of `config` and aggregates. Trial failures are recorded
/// in the report rather than aborting it.
pub fn run_experiment(config: &ExperimentConfig, threads: Option<usize>) -> Result<EnsembleReport> {
    config.validate()?;
    let jobs: Vec<(usize, usize, usize)> = (0..config.sizes.len())
        .flat_map(|si| (0..config.grid.len()).flat_map(move |gi| (0..config.trials).map(move |ti| (si, gi, ti))))
        .collect();
    let run = |&(si, gi, ti): &(usize, usize, usize)| {
        let n = config.sizes[si];
        let param = config.grid[gi];
        let seed = derive_seed(config.seed, &[si as u64, gi as u64, ti as u64]);
        let rec = |o: Option<&TrialOut>, error| TrialRecord {
            n,
            size_index: si,
            grid_index: gi,
            param,
            trial: ti,
            seed,
            value: o.map_or(f64::NAN, |o| o.value),
            hist_value: o.map_or(f64::NAN, |o| o.hist_value),
            work: o.map_or(f64::NAN, |o| o.work),
            success: o.is_some_and(|o| o.success),
            incomplete: o.is_some_and(|o| o.incomplete),
            realized: o.map_or(f64::NAN, |o| o.realized),
            error,
        };
        match run_trial(config, n, param, seed) {
            Ok(o) => rec(Some(&o), None),
            Err(e) => rec(None, Some(e.to_string())),
        }
    };
    let trials: Vec<TrialRecord> = pool(threads)?.install(|| jobs.par_iter().map(run).collect());
    aggregate(config, trials)
}

fn aggregate(config: &ExperimentConfig, trials: Vec<TrialRecord>) -> Result<EnsembleReport> {
    let theory = config.theory.first().and_then(|id| CurveKind::from_id(id));
    let mut cells = Vec::new();
    for (si, &n) in config.sizes.iter().enumerate() {
        for (gi, &param) in config.grid.iter().enumerate() {
            let cell: Vec<&TrialRecord> = trials.iter().filter(|t| t.size_index == si && t.grid_index == gi).collect();
            let ok: Vec<&&TrialRecord> = cell.iter().filter(|t| t.error.is_none()).collect();
            let values: Vec<f64> = ok.iter().map(|t| t.value).collect();
            let hv: Vec<f64> = ok.iter().map(|t| t.hist_value).collect();
            let s = Summary::of(&values);
            let h = Histogram::of(&hv, config.ensemble.bins);
            let (tv, tapprox) = match theory.map(|k| k.eval(param)) {
                Some(Ok(Some(f))) => (Some(f.value), f.approximate),
                _ => (None, false),
            };
            let nan = f64::NAN;
            let okf = ok.len().max(1) as f64;
            cells.push(CellRow {
                task: config.task.id().into(),
                n,
                parameter: config.task.parameter().into(),
                param,
                grid_index: gi,
                trials: cell.len(),
                failed: cell.len() - ok.len(),
                incomplete: ok.iter().filter(|t| t.incomplete).count(),
                success_rate: ok.iter().filter(|t| t.success).count() as f64 / okf,
                realized_mean: if ok.is_empty() { nan } else { ok.iter().map(|t| t.realized).sum::<f64>() / okf },
                median: s.as_ref().map_or(nan, |s| s.median),
                mean: s.as_ref().map_or(nan, |s| s.mean),
                q05: s.as_ref().map_or(nan, |s| s.q05),
                q25: s.as_ref().map_or(nan, |s| s.q25),
                q75: s.as_ref().map_or(nan, |s| s.q75),
                q95: s.as_ref().map_or(nan, |s| s.q95),
                hist_of: if config.task.has_tree_size() { "log2(Q)/N" } else { "value" }.into(),
                hist_lo: h.lo,
                hist_hi: h.hi,
                hist: h.encode(),
                seed_lineage: format!("{}/{si}/{gi}/0..{}", config.seed, config.trials),
                theory_id: theory.map(|k| k.id()).unwrap_or_default(),
                theory: tv,
                theory_approximate: tapprox,
            });
        }
    }
    let mut fits = Vec::new();
    if config.task.has_tree_size() {
        for (gi, &param) in config.grid.iter().enumerate() {
            let pts: Vec<(f64, f64)> = cells
                .iter()
                .filter(|c| c.grid_index == gi && c.median.is_finite())
                .map(|c| (c.n as f64, c.median))
                .collect();
            if let Some(f) = fit_exponent(&pts) {
                fits.push(fit_row(config.task, param, gi, &pts, &f));
            }
        }
    }
    Ok(EnsembleReport { config: config.clone(), cells, fits, trials })
}

fn fit_row(task: Task, param: f64, gi: usize, pts: &[(f64, f64)], f: &ExponentFit) -> FitRow {
    FitRow {
        task: task.id().into(),
        param,
        grid_index: gi,
        sizes: pts.iter().map(|p| p.0.to_string()).collect::<Vec<_>>().join(";"),
        regime: serde_json::to_value(f.regime).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
        coefficient: f.coefficient,
        omega: f.exponential.slope,
        gamma: f.gamma,
        residual: f.residual,
    }
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    path.with_file_name(format!("{stem}.{suffix}.{ext}"))
}

pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}

/// Writes the report. CSV goes to `path` (cells), `<stem>.fits.csv` and
/// `<stem>.trials.csv`; JSON writes the whole report to `path`.
pub fn write_report(report: &EnsembleReport, path: &Path, format: OutputFormat) -> Result<Vec<PathBuf>> {
    match format {
        OutputFormat::Json => {
            fs::write(path, serde_json::to_string_pretty(report)? + "\n")?;
            Ok(vec![path.to_path_buf()])
        }
        OutputFormat::Csv => {
            let fits = sibling(path, "fits");
            let trials = sibling(path, "trials");
            fs::write(path, to_csv(&report.cells)?)?;
            fs::write(&fits, to_csv(&report.fits)?)?;
            fs::write(&trials, to_csv(&report.trials)?)?;
            Ok(vec![path.to_path_buf(), fits, trials])
        }
    }
}

/// Distribution of log2(Q)/N over repeated randomized runs on one instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuntimeHistogram {
    pub n: usize,
    pub runs: usize,
    pub omegas: Vec<f64>,
    pub histogram: Histogram,
    /// Fraction of runs with Q <= N.
    pub w_lin: f64,
    /// Both Q <= N and Q > N runs occur.
    pub bimodal: bool,
}

/// Repeats `solve(run seed) -> Q` for `runs` seeds derived from `seed`.
pub fn runtime_histogram<F>(n: usize, runs: usize, seed: u64, bins: usize, solve: F) -> RuntimeHistogram
where
    F: Fn(u64) -> u64 + Sync,
{
    let qs: Vec<u64> = (0..runs).into_par_iter().map(|r| solve(derive_seed(seed, &[r as u64]))).collect();
    let nf = n.max(1) as f64;
    let omegas: Vec<f64> = qs.iter().map(|&q| (q.max(1) as f64).log2() / nf).collect();
    let lin = qs.iter().filter(|&&q| q as f64 <= nf).count();
    RuntimeHistogram {
        n,
        runs,
        histogram: Histogram::of(&omegas, bins),
        omegas,
        w_lin: lin as f64 / runs.max(1) as f64,
        bimodal: lin > 0 && lin < runs,
    }
}

/// DPLL run-to-run histogram on a fixed instance.
pub fn dpll_runtime_histogram(
    inst: &KSatInstance,
    heuristic: Heuristic,
    runs: usize,
    seed: u64,
    cutoff: Option<u64>,
) -> RuntimeHistogram {
    runtime_histogram(inst.n_vars(), runs, seed, 40, |s| dpll_solve(inst, heuristic, s, cutoff).nodes)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub curve: String,
    pub n: usize,
    pub param: f64,
    pub measured: f64,
    pub theory: Option<f64>,
    pub approximate: bool,
    pub relative_deviation: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveSummary {
    pub curve: String,
    /// Largest |measured - theory| over the joined points.
    pub sup_abs: f64,
    pub sup_relative: f64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub report: EnsembleReport,
    pub rows: Vec<ComparisonRow>,
    pub summary: Vec<CurveSummary>,
}

/// Joins cell medians with analytic curves evaluated at the grid values.
/// For tree-size tasks the measured value is log2(median Q) / N, the
/// finite-N estimate of the exponent.
pub fn compare_with_theory(report: &EnsembleReport, curves: &[CurveKind]) -> Result<Comparison> {
    let tree = report.config.task.has_tree_size();
    let measured = |c: &CellRow| if tree { c.median.max(1.0).log2() / c.n as f64 } else { c.median };
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for kind in curves {
        let grid: Vec<f64> = report.config.grid.clone();
        let tab = TheoryCurve::tabulate(*kind, &grid)?;
        let (mut sup_abs, mut sup_rel, mut points) = (0.0f64, 0.0f64, 0);
        for cell in &report.cells {
            let theory = tab.values[cell.grid_index];
            let m = measured(cell);
            let rel = theory.filter(|t| *t != 0.0).map(|t| (m - t).abs() / t.abs());
            if let Some(t) = theory {
                sup_abs = sup_abs.max((m - t).abs());
                sup_rel = sup_rel.max(rel.unwrap_or(0.0));
                points += 1;
            }
            rows.push(ComparisonRow {
                curve: tab.id.clone(),
                n: cell.n,
                param: cell.param,
                measured: m,
                theory,
                approximate: tab.approximate[cell.grid_index],
                relative_deviation: rel,
            });
        }
        summary.push(CurveSummary { curve: tab.id, sup_abs, sup_relative: sup_rel, points });
    }
    Ok(Comparison { report: report.clone(), rows, summary })
}
