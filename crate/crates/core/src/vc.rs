//! Branch-and-bound decision procedure for vertex cover, leaf removal, and
//! the backtrack-free descent used to follow the (c, x) trajectory.
//!
//! A vertex is free, covered or uncovered. The search picks a uniformly
//! random free vertex and covers it if it still has a free or uncovered
//! neighbor, otherwise leaves it uncovered. Covering needs budget left;
//! uncovering is forbidden next to an uncovered vertex. A dead end
//! backtracks chronologically to the last vertex whose other status has not
//! been tried.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::instances::{Adjacency, Graph};
use crate::rng::{self, streams, StreamRng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Free,
    Covered,
    Uncovered,
}

impl Status {
    fn opposite(self) -> Status {
        match self {
            Status::Covered => Status::Uncovered,
            Status::Uncovered => Status::Covered,
            Status::Free => Status::Free,
        }
    }
}

/// Mean degree of the free subgraph and the budget left per free vertex.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VcPoint {
    /// Fraction of vertices assigned.
    pub t: f64,
    pub c: f64,
    pub x: f64,
}

/// Partial cover under construction.
pub struct VcState {
    adj: Adjacency,
    status: Vec<Status>,
    free: Vec<u32>,
    free_slot: Vec<u32>,
    free_deg: Vec<u32>,
    uncovered_nbrs: Vec<u32>,
    free_edges: usize,
    covered: usize,
    budget: usize,
    trail: Vec<u32>,
}

impl VcState {
    pub fn new(graph: &Graph, budget: usize) -> Self {
        let adj = graph.adjacency();
        let n = adj.n_verts();
        let free_deg = (0..n).map(|v| adj.degree(v) as u32).collect();
        VcState {
            status: vec![Status::Free; n],
            free: (0..n as u32).collect(),
            free_slot: (0..n as u32).collect(),
            free_deg,
            uncovered_nbrs: vec![0; n],
            free_edges: graph.n_edges(),
            covered: 0,
            budget,
            trail: Vec::with_capacity(n),
            adj,
        }
    }

    pub fn n_verts(&self) -> usize {
        self.status.len()
    }

    pub fn status(&self, v: usize) -> Status {
        self.status[v]
    }

    pub fn covered(&self) -> usize {
        self.covered
    }

    pub fn n_free(&self) -> usize {
        self.free.len()
    }

    /// Edges with both endpoints free.
    pub fn free_edges(&self) -> usize {
        self.free_edges
    }

    pub fn point(&self) -> VcPoint {
        let n = self.n_verts().max(1) as f64;
        let nf = self.free.len();
        let (c, x) = if nf == 0 {
            (0.0, 0.0)
        } else {
            (2.0 * self.free_edges as f64 / nf as f64, (self.budget - self.covered) as f64 / nf as f64)
        };
        VcPoint { t: self.trail.len() as f64 / n, c, x }
    }

    /// Status the search tries first for `v`.
    pub fn first_choice(&self, v: usize) -> Status {
        if self.free_deg[v] > 0 || self.uncovered_nbrs[v] > 0 {
            Status::Covered
        } else {
            Status::Uncovered
        }
    }

    pub fn is_feasible(&self, v: usize, s: Status) -> bool {
        match s {
            Status::Covered => self.covered < self.budget,
            Status::Uncovered => self.uncovered_nbrs[v] == 0,
            Status::Free => false,
        }
    }

    pub fn assign(&mut self, v: usize, s: Status) {
        debug_assert_eq!(self.status[v], Status::Free);
        debug_assert!(self.is_feasible(v, s));
        self.status[v] = s;
        let slot = self.free_slot[v] as usize;
        let last = *self.free.last().unwrap();
        self.free.swap_remove(slot);
        if last as usize != v {
            self.free_slot[last as usize] = slot as u32;
        }
        self.free_edges -= self.free_deg[v] as usize;
        for &u in self.adj.neighbors(v) {
            self.free_deg[u as usize] -= 1;
            if s == Status::Uncovered {
                self.uncovered_nbrs[u as usize] += 1;
            }
        }
        if s == Status::Covered {
            self.covered += 1;
        }
        self.trail.push(v as u32);
    }

    /// Undoes the most recent assignment and returns the vertex with the
    /// status it had.
    pub fn undo(&mut self) -> Option<(usize, Status)> {
        let v = self.trail.pop()? as usize;
        let s = self.status[v];
        for &u in self.adj.neighbors(v) {
            self.free_deg[u as usize] += 1;
            if s == Status::Uncovered {
                self.uncovered_nbrs[u as usize] -= 1;
            }
        }
        self.free_edges += self.free_deg[v] as usize;
        if s == Status::Covered {
            self.covered -= 1;
        }
        self.status[v] = Status::Free;
        self.free_slot[v] = self.free.len() as u32;
        self.free.push(v as u32);
        Some((v, s))
    }

    fn random_free<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.free[rng.gen_range(0..self.free.len())] as usize
    }

    fn cover_set(&self) -> Vec<u32> {
        (0..self.n_verts() as u32).filter(|&v| self.status[v as usize] == Status::Covered).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VcOutcome {
    /// Cover of size at most X, sorted.
    Cov(Vec<u32>),
    Uncov,
    Aborted,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VcStats {
    pub outcome: VcOutcome,
    /// Vertex assignments made, second branches included.
    pub nodes: u64,
    /// Dead ends that triggered a backtrack.
    pub backtracks: u64,
    /// `(c, x)` at the shallowest node whose second branch was explored.
    pub highest_backtrack: Option<VcPoint>,
}

/// Budgets after which a run stops with [`VcOutcome::Aborted`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VcCutoff {
    pub nodes: Option<u64>,
    pub backtracks: Option<u64>,
}

/// Decides whether `graph` has a vertex cover with at most `budget` vertices.
pub fn vc_solve(graph: &Graph, budget: usize, seed: u64, cutoff_nodes: Option<u64>) -> VcStats {
    let mut rng = rng::stream(seed, streams::VC);
    search(graph, budget, &mut rng, VcCutoff { nodes: cutoff_nodes, backtracks: None })
}

struct Frame {
    second: bool,
    depth: usize,
}

fn search(graph: &Graph, budget: usize, rng: &mut StreamRng, cutoff: VcCutoff) -> VcStats {
    let mut st = VcState::new(graph, budget);
    let mut frames: Vec<Frame> = Vec::new();
    let mut stats = VcStats { outcome: VcOutcome::Aborted, nodes: 0, backtracks: 0, highest_backtrack: None };
    let mut best_depth = usize::MAX;
    loop {
        if st.n_free() == 0 {
            stats.outcome = VcOutcome::Cov(st.cover_set());
            return stats;
        }
        if cutoff.nodes.is_some_and(|c| stats.nodes >= c) {
            return stats;
        }
        let v = st.random_free(rng);
        let first = st.first_choice(v);
        let choice = if st.is_feasible(v, first) {
            Some((first, false))
        } else if st.is_feasible(v, first.opposite()) {
            Some((first.opposite(), true))
        } else {
            None
        };
        if let Some((s, second)) = choice {
            frames.push(Frame { second, depth: st.trail.len() });
            st.assign(v, s);
            stats.nodes += 1;
            continue;
        }
        stats.backtracks += 1;
        if cutoff.backtracks.is_some_and(|c| stats.backtracks >= c) {
            return stats;
        }
        loop {
            let Some(f) = frames.pop() else {
                stats.outcome = VcOutcome::Uncov;
                return stats;
            };
            let (u, s) = st.undo().expect("frame without assignment");
            if !f.second && st.is_feasible(u, s.opposite()) {
                if f.depth < best_depth {
                    best_depth = f.depth;
                    stats.highest_backtrack = Some(st.point());
                }
                frames.push(Frame { second: true, depth: f.depth });
                st.assign(u, s.opposite());
                stats.nodes += 1;
                break;
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VcDescent {
    /// One point before the first step and one after each assignment.
    pub trace: Vec<VcPoint>,
    /// `true` if every vertex got a status without hitting a dead end.
    pub success: bool,
}

/// The search without backtracking, stopped at the first dead end.
pub fn vc_first_descent(graph: &Graph, budget: usize, seed: u64) -> VcDescent {
    let mut rng = rng::stream(seed, streams::VC);
    let mut st = VcState::new(graph, budget);
    let mut trace = vec![st.point()];
    while st.n_free() > 0 {
        let v = st.random_free(&mut rng);
        let first = st.first_choice(v);
        let s = if st.is_feasible(v, first) {
            first
        } else if st.is_feasible(v, first.opposite()) {
            first.opposite()
        } else {
            return VcDescent { trace, success: false };
        };
        st.assign(v, s);
        trace.push(st.point());
    }
    VcDescent { trace, success: true }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VcRestartStats {
    pub outcome: VcOutcome,
    pub runs: u64,
    /// Vertex assignments summed over all runs.
    pub total_nodes: u64,
    pub last_run: VcStats,
}

/// Backtracking steps allowed per run: ceil(exp(N * omega_r)).
pub fn restart_budget(n: usize, omega_r: f64) -> Option<u64> {
    let b = libm::ceil(libm::exp(n as f64 * omega_r));
    (b.is_finite() && b < 1.8e19).then_some((b as u64).max(1))
}

/// Runs the search repeatedly with fresh random streams, abandoning a run
/// once it has backtracked ceil(exp(N * omega_r)) times.
pub fn vc_with_restarts(graph: &Graph, budget: usize, omega_r: f64, seed: u64, max_runs: u64) -> VcRestartStats {
    let backtracks = restart_budget(graph.n_verts(), omega_r);
    let mut total = 0;
    let mut run = 0;
    loop {
        let mut rng = if run == 0 {
            rng::stream(seed, streams::VC)
        } else {
            rng::stream(seed, streams::RESTART_BASE + run)
        };
        let stats = search(graph, budget, &mut rng, VcCutoff { nodes: None, backtracks });
        run += 1;
        total += stats.nodes;
        if stats.outcome != VcOutcome::Aborted || run >= max_runs {
            return VcRestartStats { outcome: stats.outcome.clone(), runs: run, total_nodes: total, last_run: stats };
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafRemoval {
    pub status: Vec<Status>,
    /// Vertices still free, sorted; the graph they induce has minimum degree 2.
    pub residue: Vec<u32>,
    pub covered: usize,
}

/// Repeatedly leaves a degree-one vertex uncovered and covers its neighbor.
/// Vertices left without free neighbors are uncovered.
pub fn leaf_removal_reduce(graph: &Graph) -> LeafRemoval {
    let adj = graph.adjacency();
    let n = adj.n_verts();
    let mut status = vec![Status::Free; n];
    let mut deg: Vec<usize> = (0..n).map(|v| adj.degree(v)).collect();
    let mut queue: VecDeque<u32> = (0..n as u32).filter(|&v| deg[v as usize] <= 1).collect();
    let mut covered = 0;
    let remove = |v: usize, status: &[Status], deg: &mut [usize], queue: &mut VecDeque<u32>| {
        for &u in adj.neighbors(v) {
            if status[u as usize] == Status::Free {
                deg[u as usize] -= 1;
                if deg[u as usize] <= 1 {
                    queue.push_back(u);
                }
            }
        }
    };
    while let Some(v) = queue.pop_front() {
        let v = v as usize;
        if status[v] != Status::Free {
            continue;
        }
        match deg[v] {
            0 => status[v] = Status::Uncovered,
            1 => {
                let u = *adj
                    .neighbors(v)
                    .iter()
                    .find(|&&u| status[u as usize] == Status::Free)
                    .expect("degree counts free neighbors") as usize;
                status[v] = Status::Uncovered;
                status[u] = Status::Covered;
                covered += 1;
                remove(u, &status, &mut deg, &mut queue);
            }
            _ => {}
        }
    }
    let residue = (0..n as u32).filter(|&v| status[v as usize] == Status::Free).collect();
    LeafRemoval { status, residue, covered }
}

fn ln_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + libm::log1p(libm::exp(lo - hi))
}

/// Natural log of sum_{M=1}^{n} sum_{X'=0}^{min(X, M)} C(M, X'), an upper
/// bound on the number of nodes of the search tree.
pub fn vc_node_bound_ln(n: usize, budget: usize) -> f64 {
    let mut total = f64::NEG_INFINITY;
    // ln C(M, j) for j = 0..=M, updated row by row
    for m in 1..=n {
        let mut ln_c = 0.0;
        let mut row = f64::NEG_INFINITY;
        for j in 0..=budget.min(m) {
            if j > 0 {
                ln_c += libm::log((m - j + 1) as f64) - libm::log(j as f64);
            }
            row = ln_add(row, ln_c);
        }
        total = ln_add(total, row);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_gnp, GraphTag};
    use crate::oracle::min_vertex_cover;

    fn graph(n: usize, edges: &[(u32, u32)]) -> Graph {
        Graph::new(n, edges.to_vec(), GraphTag { c: 0.0, seed: None }).unwrap()
    }

    fn is_cover(g: &Graph, cover: &[u32]) -> bool {
        g.edges().iter().all(|(u, v)| cover.contains(u) || cover.contains(v))
    }

    #[test]
    fn triangle() {
        let g = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        for seed in 0..20 {
            match vc_solve(&g, 2, seed, None).outcome {
                VcOutcome::Cov(c) => assert!(c.len() <= 2 && is_cover(&g, &c)),
                o => panic!("{o:?}"),
            }
            assert_eq!(vc_solve(&g, 1, seed, None).outcome, VcOutcome::Uncov);
        }
    }

    #[test]
    fn agrees_with_minimum_cover() {
        for seed in 0..100u64 {
            let n = 6 + (seed % 13) as usize;
            let g = gen_gnp(n, 1.0 + (seed % 4) as f64, seed).unwrap();
            let best = min_vertex_cover(&g);
            for x in [best.saturating_sub(1), best, best + 1] {
                let st = vc_solve(&g, x, seed + 11, None);
                match st.outcome {
                    VcOutcome::Cov(c) => {
                        assert!(x >= best);
                        assert!(c.len() <= x && is_cover(&g, &c));
                    }
                    VcOutcome::Uncov => assert!(x < best, "n={n} x={x} best={best}"),
                    VcOutcome::Aborted => unreachable!(),
                }
                assert!(libm::log(st.nodes as f64) <= vc_node_bound_ln(n, x) + 1e-9);
            }
        }
    }

    #[test]
    fn node_bound_values() {
        assert!((libm::exp(vc_node_bound_ln(1, 1)) - 2.0).abs() < 1e-12);
        let want = libm::log((1u64 << 21) as f64 - 2.0);
        assert!((vc_node_bound_ln(20, 20) - want).abs() < 1e-12);
    }

    #[test]
    fn leaf_removal_on_tree_and_cycle() {
        let path = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        let r = leaf_removal_reduce(&path);
        assert!(r.residue.is_empty());
        assert_eq!(r.covered, min_vertex_cover(&path));
        let c5 = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]);
        let r = leaf_removal_reduce(&c5);
        assert_eq!(r.residue, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn descent_starts_at_initial_point() {
        let g = gen_gnp(2000, 2.0, 1).unwrap();
        let d = vc_first_descent(&g, 1000, 1);
        let p = d.trace[0];
        assert_eq!(p.t, 0.0);
        assert!((p.c - g.mean_degree()).abs() < 1e-12);
        assert!((p.x - 0.5).abs() < 1e-12);
        let all = vc_first_descent(&g, 2000, 1);
        assert!(all.success);
        assert_eq!(all.trace.len(), 2001);
    }

    #[test]
    fn huge_restart_budget_matches_plain_search() {
        let g = gen_gnp(40, 3.0, 5).unwrap();
        let plain = vc_solve(&g, 24, 3, None);
        let r = vc_with_restarts(&g, 24, 10.0, 3, 5);
        assert_eq!(r.runs, 1);
        assert_eq!(r.last_run, plain);
    }

    #[test]
    fn restarts_solve_coverable_graphs() {
        let g = gen_gnp(30, 3.2, 8).unwrap();
        let r = vc_with_restarts(&g, 18, 0.0, 8, 1_000_000);
        match r.outcome {
            VcOutcome::Cov(c) => assert!(c.len() <= 18 && is_cover(&g, &c)),
            o => panic!("{o:?}"),
        }
    }
}
