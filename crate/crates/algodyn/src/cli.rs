//! Command line: instance generation, single solver runs, theory tables and
//! experiments. Exit codes: 0 ok, 1 invalid input, 2 resource cutoff,
//! 3 internal error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use algodyn_core::dpll::{dpll_solve, dpll_with_restarts, Outcome, RestartPolicy};
use algodyn_core::instances::{gen_2p_sat, gen_gnp, gen_ksat, gen_regular_ldpc, gen_xorsat, Assignment, XorMode};
use algodyn_core::local_search::{
    bec_erasures, bec_peel_decode, gd_run, prwsat_run, sa_decode, GdOptions, WalkOptions, WalkProblem,
};
use algodyn_core::theory::{CurveKind, TheoryCurve};
use algodyn_core::vc::{vc_solve, vc_with_restarts, VcOutcome};

use crate::formats;
use crate::harness::{self, compare_with_theory, EnsembleReport, ExperimentConfig, OutputFormat};
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "algodyn", version, about = "Random constraint problems: generators, solvers, theory curves")]
pub struct Cli {
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file (stdout if absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true)]
    pub cutoff_nodes: Option<u64>,
    #[arg(long, global = true)]
    pub cutoff_flips: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Draw a random instance.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Run one solver on an instance file.
    #[command(subcommand)]
    Solve(SolveCommand),
    /// Tabulate an analytic curve.
    Theory(TheoryArgs),
    /// Ensemble experiments.
    #[command(subcommand)]
    Exp(ExpCommand),
}

#[derive(Subcommand, Debug)]
pub enum GenCommand {
    /// Uniform random K-SAT with round(alpha N) clauses.
    Ksat {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// 2+p-SAT.
    #[command(name = "2p")]
    TwoP {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        p: f64,
    },
    /// 3-XORSAT.
    Xorsat {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: f64,
        /// Independent equations per triplet instead of a fixed count.
        #[arg(long)]
        bernoulli: bool,
    },
    /// Erdos-Renyi graph G(N, c/N).
    Gnp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        c: f64,
    },
    /// Regular LDPC parity-check matrix.
    Ldpc {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        l: usize,
        #[arg(long, default_value_t = 6)]
        k: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum SolveCommand {
    /// DPLL on a DIMACS CNF file.
    Dpll {
        file: PathBuf,
        #[arg(long, default_value = "guc")]
        heuristic: String,
        /// Restart after ceil(exp(N w)) splits.
        #[arg(long)]
        restart_exponent: Option<f64>,
        #[arg(long, default_value_t = 1_000_000)]
        max_runs: u64,
    },
    /// Vertex cover search on a "p edge" graph.
    Vc {
        file: PathBuf,
        /// Cover size as a fraction of N.
        #[arg(long, conflicts_with = "budget")]
        x: Option<f64>,
        #[arg(long)]
        budget: Option<usize>,
        /// Restart after ceil(exp(N w)) backtracking steps.
        #[arg(long)]
        restart_exponent: Option<f64>,
        #[arg(long, default_value_t = 1_000_000)]
        max_runs: u64,
    },
    /// Pure random walk on a CNF or XOR file.
    Prwsat { file: PathBuf },
    /// R-neighborhood descent on an XOR file.
    Gd {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        radius: usize,
        #[arg(long, default_value_t = 10_000)]
        max_steps: u64,
    },
    /// Annealing decoder on an alist code.
    Sa {
        file: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 10)]
        tau: usize,
    },
    /// Peeling decoder on the erasure channel.
    Peel {
        file: PathBuf,
        #[arg(long)]
        p: f64,
    },
}

#[derive(Args, Debug)]
pub struct TheoryArgs {
    /// Curve identifier, e.g. halt-line, vc-critical, plateau-k3.
    pub curve: String,
    /// `start:stop:step` or a comma-separated list.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: String,
}

#[derive(Subcommand, Debug)]
pub enum ExpCommand {
    /// Run an experiment described by a JSON config.
    Run { config: PathBuf },
    /// Join a JSON report with theory curves.
    Compare {
        report: PathBuf,
        #[arg(long = "curve")]
        curves: Vec<String>,
    },
}

/// Parses arguments, runs, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match std::panic::catch_unwind(|| run(&cli)) {
        Ok(Ok(())) => 0,
        Ok(Err(e)) => {
            eprintln!("algodyn: {e}");
            e.exit_code()
        }
        Err(_) => 3,
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn render<T: Serialize>(rows: &[T], format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Csv => harness::to_csv(rows),
        OutputFormat::Json => Ok(serde_json::to_string_pretty(rows)? + "\n"),
    }
}

#[derive(Serialize)]
struct SolveRow {
    solver: String,
    n: usize,
    seed: u64,
    outcome: String,
    nodes: Option<u64>,
    backtracks: Option<u64>,
    runs: Option<u64>,
    flips: Option<u64>,
    energy: Option<f64>,
    /// Satisfying assignment / cover / decoded word as 0-1 string.
    witness: String,
}

impl SolveRow {
    fn new(solver: &str, n: usize, seed: u64, outcome: &str) -> Self {
        SolveRow {
            solver: solver.into(),
            n,
            seed,
            outcome: outcome.into(),
            nodes: None,
            backtracks: None,
            runs: None,
            flips: None,
            energy: None,
            witness: String::new(),
        }
    }
}

fn bits(a: &Assignment) -> String {
    a.bits().iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn is_xor_file(text: &str) -> bool {
    text.lines().any(|l| l.trim_start().starts_with('x'))
}

pub fn run(cli: &Cli) -> Result<()> {
    let seed = cli.seed.unwrap_or(0);
    let format: OutputFormat = cli.format.map(Into::into).unwrap_or_default();
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Gen(g) => {
            let text = match *g {
                GenCommand::Ksat { n, alpha, k } => {
                    if !(alpha >= 0.0) {
                        return Err(Error::Invalid("alpha must be non-negative".into()));
                    }
                    formats::write_dimacs(&gen_ksat(n, (alpha * n as f64).round() as usize, k, seed)?)
                }
                GenCommand::TwoP { n, alpha, p } => formats::write_dimacs(&gen_2p_sat(n, alpha, p, seed)?),
                GenCommand::Xorsat { n, alpha, bernoulli } => {
                    let mode = if bernoulli { XorMode::Bernoulli } else { XorMode::FixedM };
                    formats::write_xor(&gen_xorsat(n, alpha, mode, seed)?)
                }
                GenCommand::Gnp { n, c } => formats::write_graph(&gen_gnp(n, c, seed)?),
                GenCommand::Ldpc { n, l, k } => formats::write_alist(&gen_regular_ldpc(n, l, k, seed)?),
            };
            write_out(out, &text)
        }
        Command::Solve(s) => solve(s, seed, format, out, cli),
        Command::Theory(t) => {
            let kind = CurveKind::from_id(&t.curve)
                .ok_or_else(|| Error::Invalid(format!("unknown curve {:?}", t.curve)))?;
            let grid = parse_grid(&t.grid)?;
            let curve = TheoryCurve::tabulate(kind, &grid)?;
            #[derive(Serialize)]
            struct Row<'a> {
                curve: &'a str,
                parameter: &'a str,
                x: f64,
                value: Option<f64>,
                approximate: bool,
            }
            let rows: Vec<Row> = (0..grid.len())
                .map(|i| Row {
                    curve: &curve.id,
                    parameter: curve.parameter,
                    x: grid[i],
                    value: curve.values[i],
                    approximate: curve.approximate[i],
                })
                .collect();
            write_out(out, &render(&rows, format)?)
        }
        Command::Exp(ExpCommand::Run { config }) => {
            let mut cfg = ExperimentConfig::from_json(&read(config)?)?;
            if let Some(s) = cli.seed {
                cfg.seed = s;
            }
            if cli.cutoff_nodes.is_some() {
                cfg.cutoffs.nodes = cli.cutoff_nodes;
            }
            if cli.cutoff_flips.is_some() {
                cfg.cutoffs.flips = cli.cutoff_flips;
            }
            let report = harness::run_experiment(&cfg, cli.threads)?;
            let format = cli.format.map(Into::into).or(cfg.output.as_ref().map(|o| o.format)).unwrap_or_default();
            match out.map(Path::to_path_buf).or(cfg.output.as_ref().map(|o| o.path.clone())) {
                Some(path) => {
                    for p in harness::write_report(&report, &path, format)? {
                        eprintln!("wrote {}", p.display());
                    }
                    Ok(())
                }
                None => match format {
                    OutputFormat::Csv => write_out(None, &harness::to_csv(&report.cells)?),
                    OutputFormat::Json => write_out(None, &(serde_json::to_string_pretty(&report)? + "\n")),
                },
            }
        }
        Command::Exp(ExpCommand::Compare { report, curves }) => {
            let report: EnsembleReport = serde_json::from_str(&read(report)?)?;
            let kinds = curves
                .iter()
                .map(|id| CurveKind::from_id(id).ok_or_else(|| Error::Invalid(format!("unknown curve {id:?}"))))
                .collect::<Result<Vec<_>>>()?;
            let cmp = compare_with_theory(&report, &kinds)?;
            match format {
                OutputFormat::Csv => {
                    for s in &cmp.summary {
                        eprintln!("{}: sup |dev| {} sup rel {} over {} points", s.curve, s.sup_abs, s.sup_relative, s.points);
                    }
                    write_out(out, &harness::to_csv(&cmp.rows)?)
                }
                OutputFormat::Json => {
                    #[derive(Serialize)]
                    struct Out<'a> {
                        rows: &'a [harness::ComparisonRow],
                        summary: &'a [harness::CurveSummary],
                    }
                    let text = serde_json::to_string_pretty(&Out { rows: &cmp.rows, summary: &cmp.summary })?;
                    write_out(out, &(text + "\n"))
                }
            }
        }
    }
}

fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| Error::Invalid(format!("bad grid value {s:?}")));
    let parts: Vec<&str> = spec.split(':').collect();
    let grid = match parts.as_slice() {
        [a, b, step] => {
            let (a, b, step) = (num(a)?, num(b)?, num(step)?);
            if !(step > 0.0) || b < a {
                return Err(Error::Invalid("grid needs start <= stop and step > 0".into()));
            }
            let n = ((b - a) / step + 1e-9).floor() as usize;
            if n > 10_000_000 {
                return Err(Error::Invalid("grid too large".into()));
            }
            (0..=n).map(|i| a + i as f64 * step).collect()
        }
        [_] => spec.split(',').map(num).collect::<Result<Vec<_>>>()?,
        _ => return Err(Error::Invalid(format!("bad grid {spec:?}"))),
    };
    if grid.is_empty() {
        return Err(Error::Invalid("empty grid".into()));
    }
    Ok(grid)
}

fn solve(cmd: &SolveCommand, seed: u64, format: OutputFormat, out: Option<&Path>, cli: &Cli) -> Result<()> {
    let mut cutoff = false;
    let row = match cmd {
        SolveCommand::Dpll { file, heuristic, restart_exponent, max_runs } => {
            let inst = formats::parse_dimacs(&read(file)?)?;
            let h = harness::parse_heuristic(heuristic)?;
            let n = inst.n_vars();
            let (outcome, nodes, runs, bt) = match *restart_exponent {
                Some(w) => {
                    if !(w >= 0.0) {
                        return Err(Error::Invalid("restart exponent must be >= 0".into()));
                    }
                    let s = dpll_with_restarts(&inst, h, RestartPolicy::NodeExponent(w), seed, *max_runs);
                    (s.outcome, s.total_nodes, Some(s.runs), s.last_run.contradictions)
                }
                None => {
                    let s = dpll_solve(&inst, h, seed, cli.cutoff_nodes);
                    (s.outcome, s.nodes, None, s.contradictions)
                }
            };
            let mut row = SolveRow::new("dpll", n, seed, "");
            row.nodes = Some(nodes);
            row.runs = runs;
            row.backtracks = Some(bt);
            match outcome {
                Outcome::Sat(a) => {
                    row.outcome = "sat".into();
                    row.witness = bits(&a);
                }
                Outcome::Unsat => row.outcome = "unsat".into(),
                Outcome::Aborted => {
                    row.outcome = "cutoff".into();
                    cutoff = true;
                }
            }
            row
        }
        SolveCommand::Vc { file, x, budget, restart_exponent, max_runs } => {
            let g = formats::parse_graph(&read(file)?)?;
            let n = g.n_verts();
            let budget = match (x, budget) {
                (Some(x), None) if (0.0..=1.0).contains(x) => (x * n as f64).round() as usize,
                (None, Some(b)) if *b <= n => *b,
                _ => return Err(Error::Invalid("give --x in [0, 1] or --budget <= N".into())),
            };
            let (outcome, nodes, bt, runs) = match *restart_exponent {
                Some(w) => {
                    if !(w >= 0.0) {
                        return Err(Error::Invalid("restart exponent must be >= 0".into()));
                    }
                    let s = vc_with_restarts(&g, budget, w, seed, *max_runs);
                    (s.outcome, s.total_nodes, s.last_run.backtracks, Some(s.runs))
                }
                None => {
                    let s = vc_solve(&g, budget, seed, cli.cutoff_nodes);
                    (s.outcome, s.nodes, s.backtracks, None)
                }
            };
            let mut row = SolveRow::new("vc", n, seed, "");
            row.nodes = Some(nodes);
            row.backtracks = Some(bt);
            row.runs = runs;
            match outcome {
                VcOutcome::Cov(cover) => {
                    row.outcome = "cov".into();
                    let mut w = vec![false; n];
                    for v in cover {
                        w[v as usize] = true;
                    }
                    row.witness = bits(&Assignment::from_bits(w));
                }
                VcOutcome::Uncov => row.outcome = "uncov".into(),
                VcOutcome::Aborted => {
                    row.outcome = "cutoff".into();
                    cutoff = true;
                }
            }
            row
        }
        SolveCommand::Prwsat { file } => {
            let text = read(file)?;
            let (ksat, xor);
            let problem = if is_xor_file(&text) {
                xor = formats::parse_xor(&text)?;
                WalkProblem::Xor(&xor)
            } else {
                ksat = formats::parse_dimacs(&text)?;
                WalkProblem::Sat(&ksat)
            };
            let m = problem.n_constraints().max(1) as u64;
            let opts = WalkOptions { max_flips: cli.cutoff_flips.unwrap_or(1000 * m), record_every: u64::MAX };
            let run = prwsat_run(problem, seed, opts);
            let mut row = SolveRow::new("prwsat", problem.n_vars(), seed, "");
            row.flips = Some(run.flips());
            row.energy = run.plateau.as_ref().map(|p| p.mean);
            match &run.outcome {
                algodyn_core::local_search::WalkOutcome::Solved { assignment, .. } => {
                    row.outcome = "sat".into();
                    row.witness = bits(assignment);
                }
                algodyn_core::local_search::WalkOutcome::Timeout { .. } => {
                    row.outcome = "cutoff".into();
                    cutoff = true;
                }
            }
            row
        }
        SolveCommand::Gd { file, radius, max_steps } => {
            let inst = formats::parse_xor(&read(file)?)?;
            let steps = cli.cutoff_flips.map_or(*max_steps, |c| c.min(*max_steps));
            let run = gd_run(&inst, GdOptions { radius: *radius, max_steps: steps }, seed)?;
            let outcome = if run.final_energy == 0 {
                "sat"
            } else if run.stable {
                "stuck"
            } else {
                cutoff = true;
                "cutoff"
            };
            let mut row = SolveRow::new("gd", inst.n_vars(), seed, outcome);
            row.flips = Some(run.steps);
            row.energy = Some(run.final_energy as f64);
            row.witness = bits(&run.assignment);
            row
        }
        SolveCommand::Sa { file, p, tau } => {
            let code = formats::parse_alist(&read(file)?)?;
            let run = sa_decode(&code, *p, *tau, seed)?;
            let mut row = SolveRow::new("sa", code.n_bits(), seed, if run.success { "decoded" } else { "failed" });
            row.energy = Some(run.energy_density);
            row.witness = bits(&run.word);
            row
        }
        SolveCommand::Peel { file, p } => {
            let code = formats::parse_alist(&read(file)?)?;
            let n = code.n_bits();
            let erased = bec_erasures(n, *p, seed)?;
            let run = bec_peel_decode(&code, &Assignment::all_false(n), &erased, seed)?;
            let mut row = SolveRow::new("peel", n, seed, if run.success { "decoded" } else { "failed" });
            row.energy = Some(run.energy_density);
            row.witness = bits(&run.word);
            row
        }
    };
    write_out(out, &render(&[row], format)?)?;
    if cutoff {
        return Err(Error::Cutoff("run stopped before completion".into()));
    }
    Ok(())
}
