//! Pure random walk: flip a uniformly chosen variable of a uniformly chosen
//! unsatisfied constraint, on K-SAT or XORSAT.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::instances::{Assignment, KSatInstance, XorSatInstance};
use crate::rng::{self, streams};

/// Constraint system the walk runs on.
#[derive(Clone, Copy, Debug)]
pub enum WalkProblem<'a> {
    Sat(&'a KSatInstance),
    Xor(&'a XorSatInstance),
}

impl WalkProblem<'_> {
    pub fn n_vars(&self) -> usize {
        match self {
            WalkProblem::Sat(i) => i.n_vars(),
            WalkProblem::Xor(i) => i.n_vars(),
        }
    }

    pub fn n_constraints(&self) -> usize {
        match self {
            WalkProblem::Sat(i) => i.n_clauses(),
            WalkProblem::Xor(i) => i.n_equations(),
        }
    }

    pub fn count_unsatisfied(&self, a: &Assignment) -> usize {
        match self {
            WalkProblem::Sat(i) => i.count_unsatisfied(a),
            WalkProblem::Xor(i) => i.count_unsatisfied(a),
        }
    }
}

/// Incremental bookkeeping of which constraints are violated.
pub(crate) struct WalkState {
    xor: bool,
    /// Per constraint: the variables and, for K-SAT, the literal polarity.
    members: Vec<Vec<(u32, bool)>>,
    rhs: Vec<bool>,
    /// Per variable: constraints it appears in, with the literal polarity.
    occ: Vec<Vec<(u32, bool)>>,
    /// K-SAT: number of true literals. XORSAT: parity of the member variables.
    count: Vec<u32>,
    unsat: Vec<u32>,
    slot: Vec<u32>,
    pub(crate) assignment: Assignment,
}

const OUT: u32 = u32::MAX;

impl WalkState {
    pub(crate) fn new(problem: WalkProblem<'_>, assignment: Assignment) -> Self {
        let (xor, members, rhs): (bool, Vec<Vec<(u32, bool)>>, Vec<bool>) = match problem {
            WalkProblem::Sat(i) => (
                false,
                i.clauses().iter().map(|c| c.iter().map(|l| (l.var() as u32, l.is_negated())).collect()).collect(),
                vec![false; i.n_clauses()],
            ),
            WalkProblem::Xor(i) => (
                true,
                i.equations().iter().map(|e| e.vars.iter().map(|&v| (v, false)).collect()).collect(),
                i.equations().iter().map(|e| e.rhs).collect(),
            ),
        };
        let mut occ = vec![Vec::new(); problem.n_vars()];
        for (c, m) in members.iter().enumerate() {
            for &(v, neg) in m {
                occ[v as usize].push((c as u32, neg));
            }
        }
        let mut st = WalkState {
            xor,
            count: vec![0; members.len()],
            slot: vec![OUT; members.len()],
            unsat: Vec::new(),
            members,
            rhs,
            occ,
            assignment,
        };
        for c in 0..st.members.len() {
            st.count[c] = st.members[c].iter().filter(|&&(v, neg)| st.assignment.get(v as usize) != neg).count() as u32;
            if !st.is_sat(c) {
                st.mark(c, false);
            }
        }
        st
    }

    fn is_sat(&self, c: usize) -> bool {
        if self.xor {
            (self.count[c] % 2 == 1) == self.rhs[c]
        } else {
            self.count[c] > 0
        }
    }

    fn mark(&mut self, c: usize, sat: bool) {
        if sat && self.slot[c] != OUT {
            let s = self.slot[c] as usize;
            let last = *self.unsat.last().unwrap();
            self.unsat.swap_remove(s);
            if last as usize != c {
                self.slot[last as usize] = s as u32;
            }
            self.slot[c] = OUT;
        } else if !sat && self.slot[c] == OUT {
            self.slot[c] = self.unsat.len() as u32;
            self.unsat.push(c as u32);
        }
    }

    pub(crate) fn n_unsat(&self) -> usize {
        self.unsat.len()
    }

    pub(crate) fn flip(&mut self, v: usize) {
        let now_true = !self.assignment.get(v);
        self.assignment.flip(v);
        for i in 0..self.occ[v].len() {
            let (c, neg) = self.occ[v][i];
            let c = c as usize;
            if now_true != neg {
                self.count[c] += 1;
            } else {
                self.count[c] -= 1;
            }
            let sat = self.is_sat(c);
            self.mark(c, sat);
        }
    }

    /// One walk step; returns the flipped variable.
    pub(crate) fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> usize {
        let c = self.unsat[rng.gen_range(0..self.unsat.len())] as usize;
        let m = &self.members[c];
        let v = m[rng.gen_range(0..m.len())].0 as usize;
        self.flip(v);
        debug_assert!(self.is_sat(c), "the selected constraint is satisfied after the flip");
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WalkOptions {
    pub max_flips: u64,
    /// Record a trace point every this many flips (at least 1).
    pub record_every: u64,
}

impl Default for WalkOptions {
    fn default() -> Self {
        WalkOptions { max_flips: u64::MAX, record_every: 1 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum WalkOutcome {
    Solved { assignment: Assignment, flips: u64 },
    Timeout { flips: u64 },
}

/// Number of histogram bins over phi0 in [0, 1].
pub const PLATEAU_BINS: usize = 400;

/// Statistics of phi0 over flips with t >= 1.
#[derive(Clone, Debug, PartialEq)]
pub struct PlateauStats {
    pub mean: f64,
    pub samples: u64,
    /// Counts of phi0 in bins of width 1 / PLATEAU_BINS.
    pub histogram: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WalkTrace {
    /// `(t, phi0)` with t = flips / M.
    pub points: Vec<(f64, f64)>,
    pub outcome: WalkOutcome,
    /// `None` if the walk ended before t = 1.
    pub plateau: Option<PlateauStats>,
}

impl WalkTrace {
    pub fn is_solved(&self) -> bool {
        matches!(self.outcome, WalkOutcome::Solved { .. })
    }

    pub fn flips(&self) -> u64 {
        match self.outcome {
            WalkOutcome::Solved { flips, .. } | WalkOutcome::Timeout { flips } => flips,
        }
    }

    /// Resolution time flips / M, if solved.
    pub fn t_res(&self, m: usize) -> Option<f64> {
        match self.outcome {
            WalkOutcome::Solved { flips, .. } => Some(flips as f64 / m.max(1) as f64),
            WalkOutcome::Timeout { .. } => None,
        }
    }
}

/// Random walk from a uniformly random assignment.
pub fn prwsat_run(problem: WalkProblem<'_>, seed: u64, opts: WalkOptions) -> WalkTrace {
    let mut rng = rng::stream(seed, streams::WALK);
    let start = Assignment::random(problem.n_vars(), &mut rng);
    walk_from(problem, start, &mut rng, opts)
}

/// Random walk from a given assignment.
pub fn walk_from<R: Rng + ?Sized>(problem: WalkProblem<'_>, start: Assignment, rng: &mut R, opts: WalkOptions) -> WalkTrace {
    let m = problem.n_constraints();
    let mf = m.max(1) as f64;
    let every = opts.record_every.max(1);
    let mut st = WalkState::new(problem, start);
    let mut points = vec![(0.0, st.n_unsat() as f64 / mf)];
    let mut histogram = vec![0u64; PLATEAU_BINS];
    let (mut sum, mut samples) = (0.0, 0u64);
    let mut flips = 0u64;
    while st.n_unsat() > 0 && flips < opts.max_flips {
        st.step(rng);
        flips += 1;
        let phi = st.n_unsat() as f64 / mf;
        if flips % every == 0 {
            points.push((flips as f64 / mf, phi));
        }
        if flips as f64 >= mf {
            sum += phi;
            samples += 1;
            histogram[((phi * PLATEAU_BINS as f64) as usize).min(PLATEAU_BINS - 1)] += 1;
        }
    }
    let last = (flips as f64 / mf, st.n_unsat() as f64 / mf);
    if points.last() != Some(&last) {
        points.push(last);
    }
    let plateau = (samples > 0).then(|| PlateauStats { mean: sum / samples as f64, samples, histogram });
    let outcome = if st.n_unsat() == 0 {
        WalkOutcome::Solved { assignment: st.assignment, flips }
    } else {
        WalkOutcome::Timeout { flips }
    };
    WalkTrace { points, outcome, plateau }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SchoeningResult {
    Solved { assignment: Assignment, trials: u64 },
    /// No solution found; the instance is satisfiable with probability at
    /// most `bound = exp(-T (3/4)^N)`.
    ProbablyUnsat { bound: f64 },
}

/// Runs up to `trials` walks of exactly 3N flips from fresh random
/// assignments, stopping at the first solution.
pub fn schoening_trials(instance: &KSatInstance, trials: u64, seed: u64) -> SchoeningResult {
    let n = instance.n_vars();
    let mut rng = rng::stream(seed, streams::WALK);
    let opts = WalkOptions { max_flips: 3 * n as u64, record_every: u64::MAX };
    for trial in 1..=trials {
        let start = Assignment::random(n, &mut rng);
        let run = walk_from(WalkProblem::Sat(instance), start, &mut rng, opts);
        if let WalkOutcome::Solved { assignment, .. } = run.outcome {
            return SchoeningResult::Solved { assignment, trials: trial };
        }
    }
    SchoeningResult::ProbablyUnsat { bound: schoening_bound(n, trials) }
}

/// `exp(-T (3/4)^N)`.
pub fn schoening_bound(n: usize, trials: u64) -> f64 {
    libm::exp(-(trials as f64) * libm::pow(0.75, n as f64))
}

/// Trial count `10 * ceil((4/3)^N)`, which drives the bound down to e^{-10}.
pub fn schoening_budget(n: usize) -> u64 {
    10 * libm::ceil(libm::pow(4.0 / 3.0, n as f64)) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_ksat, gen_xorsat, KSatKind, Lit, XorMode};
    use crate::oracle::brute_force_sat;

    #[test]
    fn flip_accounting() {
        let inst = gen_ksat(200, 600, 3, 1).unwrap();
        let mut rng = rng::stream(1, 0);
        let mut st = WalkState::new(WalkProblem::Sat(&inst), Assignment::random(200, &mut rng));
        let occ = |v: usize| inst.clauses().iter().filter(|c| c.iter().any(|l| l.var() == v)).count() as i64;
        for _ in 0..2000 {
            if st.n_unsat() == 0 {
                break;
            }
            let before = st.n_unsat() as i64;
            let v = st.step(&mut rng);
            let d = st.n_unsat() as i64 - before;
            assert!(d >= -(1 + occ(v)) && d <= occ(v));
            assert_eq!(st.n_unsat(), inst.count_unsatisfied(&st.assignment));
        }
    }

    #[test]
    fn xor_flip_toggles_exactly_its_equations() {
        let inst = gen_xorsat(100, 0.8, XorMode::FixedM, 2).unwrap();
        let mut rng = rng::stream(2, 0);
        let mut st = WalkState::new(WalkProblem::Xor(&inst), Assignment::random(100, &mut rng));
        for v in 0..100 {
            let before: Vec<bool> = inst.equations().iter().map(|e| e.is_satisfied(&st.assignment)).collect();
            st.flip(v);
            for (e, b) in inst.equations().iter().zip(before) {
                assert_eq!(e.is_satisfied(&st.assignment) != b, e.vars.contains(&(v as u32)));
            }
            assert_eq!(st.n_unsat(), inst.count_unsatisfied(&st.assignment));
        }
    }

    #[test]
    fn empty_instance_is_solved_immediately() {
        let inst = gen_ksat(10, 0, 3, 0).unwrap();
        let tr = prwsat_run(WalkProblem::Sat(&inst), 0, WalkOptions::default());
        assert_eq!(tr.flips(), 0);
        assert!(tr.is_solved());
    }

    #[test]
    fn walk_solves_easy_instance() {
        let inst = gen_ksat(500, 1000, 3, 3).unwrap();
        let tr = prwsat_run(WalkProblem::Sat(&inst), 3, WalkOptions { max_flips: 1_000_000, record_every: 10 });
        match &tr.outcome {
            WalkOutcome::Solved { assignment, .. } => assert!(inst.is_satisfied_by(assignment)),
            o => panic!("{o:?}"),
        }
        assert!(tr.points.iter().all(|&(_, p)| (0.0..=1.0).contains(&p)));
        assert_eq!(tr.points.last().unwrap().1, 0.0);
    }

    #[test]
    fn schoening_bound_edge_cases() {
        assert_eq!(schoening_bound(20, 0), 1.0);
        assert_eq!(schoening_budget(20), 3160);
        assert!((schoening_bound(20, 3160) - (-3160.0 * 0.75f64.powi(20)).exp()).abs() < 1e-15);
    }

    #[test]
    fn schoening_is_sound() {
        // unsatisfiable: all 8 sign patterns over x1..x3, padded to 10 variables
        let mut clauses = Vec::new();
        for mask in 0..8u32 {
            clauses.push((0..3).map(|j| Lit::new(j, mask >> j & 1 == 1)).collect());
        }
        let inst = KSatInstance::new(10, clauses, KSatKind::Unspecified, None).unwrap();
        assert!(brute_force_sat(&inst).is_none());
        assert!(matches!(schoening_trials(&inst, 200, 1), SchoeningResult::ProbablyUnsat { .. }));
    }
}
