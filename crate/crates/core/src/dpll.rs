//! Complete DPLL search for K-SAT and 2+p-SAT.
//!
//! Clauses are tracked with occurrence lists and explicit width counters
//! rather than watched literals: the splitting heuristics and the density
//! traces need the exact number of live clauses of each width at every node.
//! Backtracking is chronological with no learning, so the search tree is the
//! plain binary tree of splits and `nodes` counts splits.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::instances::{Assignment, KSatInstance, Lit};
use crate::rng::{self, streams, StreamRng};

/// Splitting heuristic used when no unit clause is pending.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Heuristic {
    /// Uniform unset variable, fair-coin polarity.
    Uc,
    /// Uniform literal of a uniformly chosen shortest live clause.
    Guc,
    /// Uniform unset variable; polarity by majority of occurrences in live
    /// 3-clauses, fair coin on ties.
    Sc1,
}

impl Heuristic {
    pub fn name(self) -> &'static str {
        match self {
            Heuristic::Uc => "uc",
            Heuristic::Guc => "guc",
            Heuristic::Sc1 => "sc1",
        }
    }
}

const NONE: u32 = u32::MAX;

/// Clause densities of the residual instance at one node of the search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityPoint {
    /// Fraction of variables assigned.
    pub t: f64,
    /// Live 2-clauses per original variable.
    pub c2: f64,
    /// Live 3-clauses per original variable.
    pub c3: f64,
}

impl DensityPoint {
    /// `(p, alpha)` of the residual 2+p-SAT instance.
    pub fn p_alpha(&self) -> (f64, f64) {
        let total = self.c2 + self.c3;
        let p = if total > 0.0 { self.c3 / total } else { 1.0 };
        let alpha = if self.t < 1.0 { total / (1.0 - self.t) } else { 0.0 };
        (p, alpha)
    }
}

/// Search state: partial assignment plus live-clause bookkeeping.
pub struct SolverState<'a> {
    clauses: &'a [Vec<Lit>],
    n_vars: usize,
    occ: Vec<Vec<u32>>,
    value: Vec<i8>,
    level: Vec<u32>,
    trail: Vec<Lit>,
    /// Trail length at each decision, and the decision itself.
    decisions: Vec<Decision>,
    sat_by: Vec<u32>,
    width: Vec<u32>,
    /// Live clauses bucketed by width, with each clause's slot in its bucket.
    buckets: Vec<Vec<u32>>,
    slot: Vec<u32>,
    free_vars: Vec<u32>,
    free_slot: Vec<u32>,
    live: usize,
    empty_clauses: usize,
}

#[derive(Clone, Copy, Debug)]
struct Decision {
    trail_len: usize,
    lit: Lit,
    second_branch: bool,
}

impl<'a> SolverState<'a> {
    pub fn new(instance: &'a KSatInstance) -> Self {
        let n = instance.n_vars();
        let clauses = instance.clauses();
        let max_w = instance.max_width();
        let mut occ = vec![Vec::new(); 2 * n];
        for (ci, c) in clauses.iter().enumerate() {
            for l in c {
                occ[l.code()].push(ci as u32);
            }
        }
        let mut buckets = vec![Vec::new(); max_w + 1];
        let mut slot = vec![0u32; clauses.len()];
        let mut width = vec![0u32; clauses.len()];
        for (ci, c) in clauses.iter().enumerate() {
            width[ci] = c.len() as u32;
            slot[ci] = buckets[c.len()].len() as u32;
            buckets[c.len()].push(ci as u32);
        }
        let empty_clauses = buckets.first().map_or(0, Vec::len);
        SolverState {
            clauses,
            n_vars: n,
            occ,
            value: vec![-1; n],
            level: vec![0; n],
            trail: Vec::with_capacity(n),
            decisions: Vec::new(),
            sat_by: vec![NONE; clauses.len()],
            width,
            buckets,
            slot,
            free_vars: (0..n as u32).collect(),
            free_slot: (0..n as u32).collect(),
            live: clauses.len(),
            empty_clauses,
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    /// Number of assigned variables (depth T).
    pub fn depth(&self) -> usize {
        self.trail.len()
    }

    pub fn decision_level(&self) -> usize {
        self.decisions.len()
    }

    pub fn live_clauses(&self) -> usize {
        self.live
    }

    /// Live clauses of width `w`.
    pub fn count(&self, w: usize) -> usize {
        self.buckets.get(w).map_or(0, Vec::len)
    }

    pub fn has_conflict(&self) -> bool {
        self.empty_clauses > 0
    }

    pub fn value(&self, var: usize) -> Option<bool> {
        match self.value[var] {
            -1 => None,
            v => Some(v == 1),
        }
    }

    pub fn trail(&self) -> &[Lit] {
        &self.trail
    }

    /// Decision level recorded for an assigned variable.
    pub fn level_of(&self, var: usize) -> u32 {
        self.level[var]
    }

    pub fn density(&self) -> DensityPoint {
        let n = self.n_vars.max(1) as f64;
        DensityPoint {
            t: self.trail.len() as f64 / n,
            c2: self.count(2) as f64 / n,
            c3: self.count(3) as f64 / n,
        }
    }

    fn bucket_remove(&mut self, c: u32) {
        let w = self.width[c as usize] as usize;
        let s = self.slot[c as usize] as usize;
        let b = &mut self.buckets[w];
        let last = *b.last().expect("clause present in its bucket");
        b.swap_remove(s);
        if last != c {
            self.slot[last as usize] = s as u32;
        }
        if w == 0 {
            self.empty_clauses -= 1;
        }
    }

    fn bucket_insert(&mut self, c: u32) {
        let w = self.width[c as usize] as usize;
        self.slot[c as usize] = self.buckets[w].len() as u32;
        self.buckets[w].push(c);
        if w == 0 {
            self.empty_clauses += 1;
        }
    }

    fn assign(&mut self, lit: Lit) {
        let v = lit.var();
        debug_assert_eq!(self.value[v], -1, "variable assigned twice");
        let pos = self.trail.len() as u32;
        self.value[v] = if lit.is_negated() { 0 } else { 1 };
        self.level[v] = self.decisions.len() as u32;
        self.trail.push(lit);
        // remove from the free set
        let s = self.free_slot[v] as usize;
        let last = *self.free_vars.last().unwrap();
        self.free_vars.swap_remove(s);
        if last as usize != v {
            self.free_slot[last as usize] = s as u32;
        }

        for i in 0..self.occ[lit.code()].len() {
            let c = self.occ[lit.code()][i];
            if self.sat_by[c as usize] == NONE {
                self.bucket_remove(c);
                self.sat_by[c as usize] = pos;
                self.live -= 1;
            }
        }
        let neg = (!lit).code();
        for i in 0..self.occ[neg].len() {
            let c = self.occ[neg][i];
            if self.sat_by[c as usize] == NONE {
                self.bucket_remove(c);
                self.width[c as usize] -= 1;
                self.bucket_insert(c);
            }
        }
    }

    fn unassign_last(&mut self) {
        let lit = self.trail.pop().expect("non-empty trail");
        let pos = self.trail.len() as u32;
        let neg = (!lit).code();
        for i in 0..self.occ[neg].len() {
            let c = self.occ[neg][i];
            if self.sat_by[c as usize] == NONE {
                self.bucket_remove(c);
                self.width[c as usize] += 1;
                self.bucket_insert(c);
            }
        }
        for i in 0..self.occ[lit.code()].len() {
            let c = self.occ[lit.code()][i];
            if self.sat_by[c as usize] == pos {
                self.sat_by[c as usize] = NONE;
                self.bucket_insert(c);
                self.live += 1;
            }
        }
        let v = lit.var();
        self.value[v] = -1;
        self.free_slot[v] = self.free_vars.len() as u32;
        self.free_vars.push(v as u32);
    }

    /// Assigns the literals of unit clauses until none remain or a clause
    /// becomes empty. Returns `false` on contradiction.
    pub fn propagate(&mut self) -> bool {
        loop {
            if self.empty_clauses > 0 {
                return false;
            }
            let Some(&c) = self.buckets.get(1).and_then(|b| b.last()) else {
                return true;
            };
            let lit = self.clauses[c as usize]
                .iter()
                .copied()
                .find(|l| self.value[l.var()] == -1)
                .expect("unit clause has one unassigned literal");
            self.assign(lit);
        }
    }

    /// Opens a new decision level and assigns `lit`.
    pub fn decide(&mut self, lit: Lit) {
        self.push_decision(lit, false);
    }

    fn push_decision(&mut self, lit: Lit, second_branch: bool) {
        self.decisions.push(Decision { trail_len: self.trail.len(), lit, second_branch });
        self.assign(lit);
    }

    /// Undoes everything down to (and including) the most recent decision.
    /// Returns that decision literal and whether it was already the second
    /// branch of its node.
    fn pop_decision(&mut self) -> Option<Decision> {
        let d = self.decisions.pop()?;
        while self.trail.len() > d.trail_len {
            self.unassign_last();
        }
        Some(d)
    }

    /// Undoes assignments until only `level` decisions remain.
    pub fn backtrack_to(&mut self, level: usize) {
        while self.decisions.len() > level {
            self.pop_decision();
        }
    }

    /// Order-independent digest of the live clauses and their widths.
    pub fn live_digest(&self) -> u64 {
        let mut acc = 0u64;
        for (w, b) in self.buckets.iter().enumerate() {
            for &c in b {
                acc = acc.wrapping_add(rng::mix64(((c as u64) << 8) ^ w as u64));
            }
        }
        acc ^ rng::mix64(self.live as u64)
    }

    /// Chooses the next branching literal. Must not be called with pending
    /// unit clauses or when every variable is assigned.
    pub fn pick_branch_literal<R: Rng + ?Sized>(&self, heuristic: Heuristic, rng: &mut R) -> Result<Lit> {
        if self.count(1) > 0 || self.empty_clauses > 0 {
            return Err(Error::Internal("branching requested with unit or empty clauses pending".into()));
        }
        if self.free_vars.is_empty() {
            return Err(Error::Internal("branching requested with no unset variable".into()));
        }
        let random_var = |rng: &mut R| self.free_vars[rng.gen_range(0..self.free_vars.len())] as usize;
        Ok(match heuristic {
            Heuristic::Uc => Lit::new(random_var(rng), rng.gen::<bool>()),
            Heuristic::Guc => match (2..self.buckets.len()).find(|&w| !self.buckets[w].is_empty()) {
                Some(w) => {
                    let b = &self.buckets[w];
                    let c = b[rng.gen_range(0..b.len())] as usize;
                    let k = rng.gen_range(0..w);
                    self.clauses[c]
                        .iter()
                        .copied()
                        .filter(|l| self.value[l.var()] == -1)
                        .nth(k)
                        .expect("live clause width matches unassigned literals")
                }
                // no live clause left: any unset variable
                None => Lit::new(random_var(rng), rng.gen::<bool>()),
            },
            Heuristic::Sc1 => {
                let v = random_var(rng);
                let (pos, neg) = self.live_occurrences(v, 3);
                let negated = match pos.cmp(&neg) {
                    core::cmp::Ordering::Greater => false,
                    core::cmp::Ordering::Less => true,
                    core::cmp::Ordering::Equal => rng.gen::<bool>(),
                };
                Lit::new(v, negated)
            }
        })
    }

    /// Occurrences of `v` and of its negation in live clauses of width `w`.
    pub fn live_occurrences(&self, v: usize, w: u32) -> (usize, usize) {
        let count = |l: Lit| {
            self.occ[l.code()]
                .iter()
                .filter(|&&c| self.sat_by[c as usize] == NONE && self.width[c as usize] == w)
                .count()
        };
        (count(Lit::positive(v)), count(Lit::new(v, true)))
    }

    fn extract_assignment(&self) -> Assignment {
        Assignment::from_bits(self.value.iter().map(|&v| v == 1).collect())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Sat(Assignment),
    Unsat,
    /// The split budget ran out.
    Aborted,
}

impl Outcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, Outcome::Sat(_))
    }
}

/// The shallowest node the search ever returned to for its second branch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BacktrackNode {
    /// Variables assigned at the node.
    pub depth: usize,
    pub density: DensityPoint,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchStats {
    pub outcome: Outcome,
    /// Splits Q.
    pub nodes: u64,
    /// Terminal nodes B: contradictions plus the solution leaf, if any.
    pub leaves: u64,
    pub contradictions: u64,
    pub propagations: u64,
    pub max_depth: usize,
    /// `(t, c2, c3)` at each split of the first branch, before any backtrack.
    pub first_branch: Vec<DensityPoint>,
    pub highest_backtrack: Option<BacktrackNode>,
}

impl SearchStats {
    /// log2(Q) / N with Q clamped below at 1.
    pub fn omega(&self, n_vars: usize) -> f64 {
        libm::log2(self.nodes.max(1) as f64) / n_vars.max(1) as f64
    }
}

/// Runs DPLL to completion or until `cutoff` splits have been made.
pub fn dpll_solve(instance: &KSatInstance, heuristic: Heuristic, seed: u64, cutoff: Option<u64>) -> SearchStats {
    let mut rng = rng::stream(seed, streams::DPLL);
    solve_with_rng(instance, heuristic, &mut rng, cutoff)
}

fn solve_with_rng(
    instance: &KSatInstance,
    heuristic: Heuristic,
    rng: &mut StreamRng,
    cutoff: Option<u64>,
) -> SearchStats {
    let mut state = SolverState::new(instance);
    let mut stats = SearchStats {
        outcome: Outcome::Aborted,
        nodes: 0,
        leaves: 0,
        contradictions: 0,
        propagations: 0,
        max_depth: 0,
        first_branch: Vec::new(),
        highest_backtrack: None,
    };
    let mut first_branch = true;
    loop {
        let before = state.depth();
        let ok = state.propagate();
        stats.propagations += (state.depth() - before) as u64;
        stats.max_depth = stats.max_depth.max(state.depth());
        if !ok {
            stats.contradictions += 1;
            stats.leaves += 1;
            first_branch = false;
            loop {
                match state.pop_decision() {
                    None => {
                        stats.outcome = Outcome::Unsat;
                        return stats;
                    }
                    Some(d) if d.second_branch => continue,
                    Some(d) => {
                        let shallower = stats.highest_backtrack.map_or(true, |h| d.trail_len < h.depth);
                        if shallower {
                            stats.highest_backtrack =
                                Some(BacktrackNode { depth: d.trail_len, density: state.density() });
                        }
                        state.push_decision(!d.lit, true);
                        break;
                    }
                }
            }
            continue;
        }
        if state.live_clauses() == 0 {
            stats.leaves += 1;
            stats.outcome = Outcome::Sat(state.extract_assignment());
            return stats;
        }
        if cutoff.is_some_and(|c| stats.nodes >= c) {
            stats.outcome = Outcome::Aborted;
            return stats;
        }
        if first_branch {
            stats.first_branch.push(state.density());
        }
        let lit = state
            .pick_branch_literal(heuristic, rng)
            .expect("propagation leaves no units and live clauses imply a free variable");
        stats.nodes += 1;
        state.decide(lit);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum DescentStatus {
    Solved(Assignment),
    Contradiction,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FirstDescent {
    pub trace: Vec<DensityPoint>,
    pub status: DescentStatus,
    /// Variables assigned when the descent stopped.
    pub depth: usize,
    pub splits: u64,
}

/// The first branch of the search: DPLL rules without backtracking, stopped
/// at a solution or at the first contradiction.
pub fn dpll_first_descent(instance: &KSatInstance, heuristic: Heuristic, seed: u64) -> FirstDescent {
    let mut rng = rng::stream(seed, streams::DPLL);
    let mut state = SolverState::new(instance);
    let mut trace = Vec::new();
    let mut splits = 0;
    loop {
        if !state.propagate() {
            return FirstDescent { trace, status: DescentStatus::Contradiction, depth: state.depth(), splits };
        }
        if state.live_clauses() == 0 {
            return FirstDescent {
                trace,
                status: DescentStatus::Solved(state.extract_assignment()),
                depth: state.depth(),
                splits,
            };
        }
        trace.push(state.density());
        let lit = state.pick_branch_literal(heuristic, &mut rng).expect("free variable available");
        splits += 1;
        state.decide(lit);
    }
}

/// When to abandon a run and start a fresh one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RestartPolicy {
    /// Stop after this many splits.
    Splits(u64),
    /// Stop after ceil(exp(N * omega_r)) splits.
    NodeExponent(f64),
}

impl RestartPolicy {
    pub fn budget(self, n_vars: usize) -> Option<u64> {
        match self {
            RestartPolicy::Splits(s) => (s != u64::MAX).then_some(s),
            RestartPolicy::NodeExponent(w) => {
                let q = libm::ceil(libm::exp(n_vars as f64 * w));
                (q.is_finite() && q < 1.8e19).then_some(q as u64)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RestartStats {
    pub outcome: Outcome,
    /// Runs performed, the successful one included.
    pub runs: u64,
    /// Splits summed over all runs.
    pub total_nodes: u64,
    pub last_run: SearchStats,
}

/// Repeats independent runs (fresh random stream each time) under a split
/// budget until one finds a solution or `max_runs` runs have failed. The
/// first run uses the same stream as [`dpll_solve`].
pub fn dpll_with_restarts(
    instance: &KSatInstance,
    heuristic: Heuristic,
    policy: RestartPolicy,
    seed: u64,
    max_runs: u64,
) -> RestartStats {
    let budget = policy.budget(instance.n_vars());
    let mut total = 0;
    let mut run = 0;
    loop {
        let mut rng = if run == 0 {
            rng::stream(seed, streams::DPLL)
        } else {
            rng::stream(seed, streams::RESTART_BASE + run)
        };
        let stats = solve_with_rng(instance, heuristic, &mut rng, budget);
        run += 1;
        total += stats.nodes;
        let done = !matches!(stats.outcome, Outcome::Aborted) || run >= max_runs;
        if done {
            return RestartStats { outcome: stats.outcome.clone(), runs: run, total_nodes: total, last_run: stats };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_2p_sat, gen_ksat, KSatKind};
    use crate::oracle::brute_force_sat;

    fn inst(n: usize, clauses: &[&[i64]]) -> KSatInstance {
        let cl = clauses.iter().map(|c| c.iter().map(|&x| Lit::from_dimacs(x).unwrap()).collect()).collect();
        KSatInstance::new(n, cl, KSatKind::Unspecified, None).unwrap()
    }

    #[test]
    fn unit_propagation_cases() {
        let i = inst(1, &[&[1]]);
        let mut s = SolverState::new(&i);
        assert!(s.propagate());
        assert_eq!(s.value(0), Some(true));

        let i = inst(1, &[&[1], &[-1]]);
        let mut s = SolverState::new(&i);
        assert!(!s.propagate());

        let i = inst(2, &[&[1, 2]]);
        let mut s = SolverState::new(&i);
        assert!(s.propagate());
        assert_eq!(s.depth(), 0);
    }

    #[test]
    fn branching_with_pending_units_is_an_error() {
        let i = inst(2, &[&[1], &[1, 2]]);
        let s = SolverState::new(&i);
        let mut rng = rng::stream(0, 0);
        assert!(matches!(s.pick_branch_literal(Heuristic::Guc, &mut rng), Err(Error::Internal(_))));
    }

    #[test]
    fn guc_prefers_shortest_clauses() {
        let i = gen_2p_sat(200, 2.0, 0.5, 1).unwrap();
        let s = SolverState::new(&i);
        let mut rng = rng::stream(1, 0);
        let two: alloc::collections::BTreeSet<Lit> =
            i.clauses().iter().filter(|c| c.len() == 2).flatten().copied().collect();
        for _ in 0..2000 {
            let l = s.pick_branch_literal(Heuristic::Guc, &mut rng).unwrap();
            assert!(two.contains(&l));
        }
    }

    #[test]
    fn sc1_follows_majority() {
        // x1 appears positive in three 3-clauses and negated in one
        let i = inst(4, &[&[1, 2, 3], &[1, -2, 4], &[1, 3, -4], &[-1, 2, 4]]);
        let s = SolverState::new(&i);
        assert_eq!(s.live_occurrences(0, 3), (3, 1));
        let mut rng = rng::stream(2, 0);
        for _ in 0..500 {
            let l = s.pick_branch_literal(Heuristic::Sc1, &mut rng).unwrap();
            if l.var() == 0 {
                assert!(!l.is_negated());
            }
        }
    }

    #[test]
    fn uc_polarity_is_fair() {
        let i = gen_ksat(50, 100, 3, 3).unwrap();
        let s = SolverState::new(&i);
        let mut rng = rng::stream(3, 0);
        let n = 100_000;
        let neg = (0..n).filter(|_| s.pick_branch_literal(Heuristic::Uc, &mut rng).unwrap().is_negated()).count();
        let f = neg as f64 / n as f64;
        assert!((f - 0.5).abs() < 0.01, "{f}");
    }

    #[test]
    fn single_clause_needs_one_split() {
        let i = inst(3, &[&[1, 2, 3]]);
        for h in [Heuristic::Uc, Heuristic::Guc, Heuristic::Sc1] {
            let st = dpll_solve(&i, h, 0, None);
            match &st.outcome {
                Outcome::Sat(a) => assert!(i.is_satisfied_by(a)),
                o => panic!("{o:?}"),
            }
            if h == Heuristic::Guc {
                assert_eq!(st.nodes, 1);
            }
        }
    }

    #[test]
    fn all_eight_clauses_are_unsat_with_full_tree() {
        let mut cl: alloc::vec::Vec<alloc::vec::Vec<i64>> = alloc::vec::Vec::new();
        for mask in 0..8 {
            cl.push((0..3).map(|j| if mask >> j & 1 == 1 { -(j + 1) } else { j + 1 }).collect());
        }
        let refs: alloc::vec::Vec<&[i64]> = cl.iter().map(|c| c.as_slice()).collect();
        let i = inst(3, &refs);
        for h in [Heuristic::Uc, Heuristic::Guc, Heuristic::Sc1] {
            for seed in 0..10 {
                let st = dpll_solve(&i, h, seed, None);
                assert_eq!(st.outcome, Outcome::Unsat);
                assert_eq!(st.leaves, st.contradictions);
                assert_eq!(st.nodes + 1, st.leaves);
            }
        }
    }

    #[test]
    fn agrees_with_brute_force_on_small_instances() {
        for seed in 0..100u64 {
            let n = 6 + (seed % 9) as usize;
            let m = (n as f64 * (3.0 + (seed % 5) as f64 * 0.6)) as usize;
            let i = gen_ksat(n, m, 3, seed).unwrap();
            let truth = brute_force_sat(&i).is_some();
            for h in [Heuristic::Uc, Heuristic::Guc, Heuristic::Sc1] {
                let st = dpll_solve(&i, h, seed * 7 + 1, None);
                match &st.outcome {
                    Outcome::Sat(a) => {
                        assert!(truth);
                        assert!(i.is_satisfied_by(a));
                    }
                    Outcome::Unsat => {
                        assert!(!truth);
                        assert_eq!(st.nodes + 1, st.leaves);
                    }
                    Outcome::Aborted => panic!("no cutoff configured"),
                }
            }
        }
    }

    #[test]
    fn cutoff_aborts() {
        let i = gen_ksat(60, 300, 3, 5).unwrap();
        let st = dpll_solve(&i, Heuristic::Uc, 5, Some(3));
        assert_eq!(st.outcome, Outcome::Aborted);
        assert_eq!(st.nodes, 3);
    }

    #[test]
    fn first_descent_on_empty_instance() {
        let i = gen_ksat(10, 0, 3, 0).unwrap();
        let d = dpll_first_descent(&i, Heuristic::Guc, 0);
        assert!(d.trace.is_empty());
        assert!(matches!(d.status, DescentStatus::Solved(_)));
    }

    #[test]
    fn unbounded_restarts_equal_plain_solve() {
        let i = gen_ksat(40, 160, 3, 9).unwrap();
        let plain = dpll_solve(&i, Heuristic::Guc, 4, None);
        let r = dpll_with_restarts(&i, Heuristic::Guc, RestartPolicy::Splits(u64::MAX), 4, 10);
        assert_eq!(r.runs, 1);
        assert_eq!(r.last_run, plain);
        assert_eq!(r.total_nodes, plain.nodes);
    }

    #[test]
    fn restarts_find_solutions() {
        let i = gen_ksat(60, 210, 3, 2).unwrap();
        assert!(dpll_solve(&i, Heuristic::Guc, 0, None).outcome.is_sat());
        let r = dpll_with_restarts(&i, Heuristic::Guc, RestartPolicy::Splits(60), 1, 100_000);
        assert!(r.runs >= 1);
        match r.outcome {
            Outcome::Sat(a) => assert!(i.is_satisfied_by(&a)),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn node_exponent_budget() {
        assert_eq!(RestartPolicy::NodeExponent(0.0).budget(100), Some(1));
        assert_eq!(RestartPolicy::NodeExponent(0.01).budget(100), Some(3));
        assert_eq!(RestartPolicy::NodeExponent(f64::INFINITY).budget(100), None);
    }
}
