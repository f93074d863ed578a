//! Problem instances and their random ensembles.
//!
//! Instances are immutable once built. Each records the ensemble parameters
//! it was drawn from (or that were inferred when it was parsed), and each
//! exposes a `validate` method asserting its structural invariants.

mod gen;

pub use gen::{
    gen_2p_sat, gen_gnp, gen_ksat, gen_ksat_with, gen_regular_ldpc, gen_xorsat, KSatOptions,
};

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{invalid, Result};

/// A literal over a 0-based variable index. The packed code `2 * var + neg`
/// doubles as an index into per-literal tables.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    #[inline]
    pub fn new(var: usize, negated: bool) -> Lit {
        Lit(((var as u32) << 1) | negated as u32)
    }

    #[inline]
    pub fn positive(var: usize) -> Lit {
        Lit::new(var, false)
    }

    #[inline]
    pub fn var(self) -> usize {
        (self.0 >> 1) as usize
    }

    #[inline]
    pub fn is_negated(self) -> bool {
        self.0 & 1 == 1
    }

    #[inline]
    pub fn code(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn from_code(code: usize) -> Lit {
        Lit(code as u32)
    }

    /// Value of the literal under `assignment`.
    #[inline]
    pub fn eval(self, assignment: &Assignment) -> bool {
        assignment.get(self.var()) != self.is_negated()
    }

    /// DIMACS form: 1-based, negative for negated literals.
    pub fn to_dimacs(self) -> i64 {
        let v = self.var() as i64 + 1;
        if self.is_negated() {
            -v
        } else {
            v
        }
    }

    pub fn from_dimacs(x: i64) -> Option<Lit> {
        if x == 0 {
            return None;
        }
        Some(Lit::new((x.unsigned_abs() - 1) as usize, x < 0))
    }
}

impl core::ops::Not for Lit {
    type Output = Lit;
    #[inline]
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A truth assignment / bit vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Assignment {
    bits: Vec<bool>,
}

impl Assignment {
    pub fn all_false(n: usize) -> Self {
        Assignment { bits: vec![false; n] }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Assignment { bits }
    }

    pub fn random<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Assignment { bits: (0..n).map(|_| rng.gen::<bool>()).collect() }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        self.bits[i] = value;
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.bits[i] = !self.bits[i];
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

/// Which random K-SAT family an instance belongs to.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KSatKind {
    /// Every clause has exactly `k` literals.
    Uniform { k: usize },
    /// 2+p-SAT: a mixture of 2- and 3-clauses; `p_nominal` is the requested
    /// 3-clause fraction, the realized one is [`KSatTag::p`].
    Mixed { p_nominal: f64 },
    /// No ensemble information (e.g. parsed from a file without metadata).
    Unspecified,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KSatTag {
    pub kind: KSatKind,
    /// Realized clauses per variable, M / N.
    pub alpha: f64,
    /// Realized fraction of clauses of width 3.
    pub p: f64,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KSatInstance {
    n_vars: usize,
    clauses: Vec<Vec<Lit>>,
    tag: KSatTag,
}

impl KSatInstance {
    /// Builds an instance, checking that variables are in range and that no
    /// clause repeats a variable. Clause widths are not constrained here; use
    /// [`KSatInstance::validate`] for ensemble-level checks.
    pub fn new(n_vars: usize, clauses: Vec<Vec<Lit>>, kind: KSatKind, seed: Option<u64>) -> Result<Self> {
        for (ci, c) in clauses.iter().enumerate() {
            for (j, l) in c.iter().enumerate() {
                if l.var() >= n_vars {
                    return Err(invalid!("clause {ci}: variable {} out of range 1..={n_vars}", l.var() + 1));
                }
                if c[..j].iter().any(|o| o.var() == l.var()) {
                    return Err(invalid!("clause {ci}: variable {} repeated", l.var() + 1));
                }
            }
        }
        let m = clauses.len();
        let n3 = clauses.iter().filter(|c| c.len() == 3).count();
        let tag = KSatTag {
            kind,
            alpha: if n_vars == 0 { 0.0 } else { m as f64 / n_vars as f64 },
            p: if m == 0 { 0.0 } else { n3 as f64 / m as f64 },
            seed,
        };
        Ok(KSatInstance { n_vars, clauses, tag })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    pub fn tag(&self) -> &KSatTag {
        &self.tag
    }

    pub fn max_width(&self) -> usize {
        self.clauses.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `counts[w]` is the number of clauses of width `w`.
    pub fn width_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.max_width() + 1];
        for c in &self.clauses {
            counts[c.len()] += 1;
        }
        counts
    }

    pub fn is_clause_satisfied(&self, clause: usize, a: &Assignment) -> bool {
        self.clauses[clause].iter().any(|l| l.eval(a))
    }

    pub fn count_unsatisfied(&self, a: &Assignment) -> usize {
        (0..self.clauses.len()).filter(|&c| !self.is_clause_satisfied(c, a)).count()
    }

    pub fn is_satisfied_by(&self, a: &Assignment) -> bool {
        a.len() == self.n_vars && self.count_unsatisfied(a) == 0
    }

    /// Checks the structural invariants plus the width constraints of the
    /// recorded ensemble.
    pub fn validate(&self) -> Result<()> {
        KSatInstance::new(self.n_vars, self.clauses.clone(), self.tag.kind, self.tag.seed)?;
        match self.tag.kind {
            KSatKind::Uniform { k } => {
                if let Some(c) = self.clauses.iter().position(|c| c.len() != k) {
                    return Err(invalid!("clause {c} has width {} != {k}", self.clauses[c].len()));
                }
            }
            KSatKind::Mixed { .. } => {
                if let Some(c) = self.clauses.iter().position(|c| c.len() != 2 && c.len() != 3) {
                    return Err(invalid!("clause {c} has width {} outside {{2,3}}", self.clauses[c].len()));
                }
                let n3 = self.clauses.iter().filter(|c| c.len() == 3).count();
                let m = self.clauses.len();
                let realized = if m == 0 { 0.0 } else { n3 as f64 / m as f64 };
                if realized != self.tag.p {
                    return Err(invalid!("recorded p {} != realized {realized}", self.tag.p));
                }
            }
            KSatKind::Unspecified => {}
        }
        Ok(())
    }
}

/// How a 3-XORSAT instance was drawn.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum XorMode {
    /// Exactly round(alpha * N) equations on uniform triplets.
    FixedM,
    /// Every triplet carries an equation independently with probability
    /// `alpha * N / C(N, 3)`.
    Bernoulli,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XorTag {
    pub mode: XorMode,
    pub alpha: f64,
    pub seed: Option<u64>,
}

/// `x[vars[0]] ^ x[vars[1]] ^ x[vars[2]] == rhs`, variables sorted ascending.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct XorEquation {
    pub vars: [u32; 3],
    pub rhs: bool,
}

impl XorEquation {
    pub fn new(mut vars: [u32; 3], rhs: bool) -> Self {
        vars.sort_unstable();
        XorEquation { vars, rhs }
    }

    #[inline]
    pub fn is_satisfied(&self, a: &Assignment) -> bool {
        let s = self.vars.iter().fold(false, |acc, &v| acc ^ a.get(v as usize));
        s == self.rhs
    }

    /// The plaquette label: the number of negated literals mod 2 when the
    /// equation is written as a XOR of literals equal to true.
    pub fn label(&self) -> bool {
        !self.rhs
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct XorSatInstance {
    n_vars: usize,
    equations: Vec<XorEquation>,
    tag: XorTag,
}

impl XorSatInstance {
    pub fn new(n_vars: usize, equations: Vec<XorEquation>, tag: XorTag) -> Result<Self> {
        let inst = XorSatInstance { n_vars, equations, tag };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, e) in self.equations.iter().enumerate() {
            let [a, b, c] = e.vars;
            if !(a < b && b < c) {
                return Err(invalid!("equation {i}: variables not distinct and sorted"));
            }
            if c as usize >= self.n_vars {
                return Err(invalid!("equation {i}: variable {} out of range", c + 1));
            }
        }
        Ok(())
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_equations(&self) -> usize {
        self.equations.len()
    }

    pub fn equations(&self) -> &[XorEquation] {
        &self.equations
    }

    pub fn tag(&self) -> &XorTag {
        &self.tag
    }

    pub fn count_unsatisfied(&self, a: &Assignment) -> usize {
        self.equations.iter().filter(|e| !e.is_satisfied(a)).count()
    }

    /// For each variable, the indices of the equations containing it.
    pub fn occurrences(&self) -> Vec<Vec<u32>> {
        let mut occ = vec![Vec::new(); self.n_vars];
        for (i, e) in self.equations.iter().enumerate() {
            for &v in &e.vars {
                occ[v as usize].push(i as u32);
            }
        }
        occ
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GraphTag {
    pub c: f64,
    pub seed: Option<u64>,
}

/// Simple undirected graph; each edge stored once as `(u, v)` with `u < v`.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    n_verts: usize,
    edges: Vec<(u32, u32)>,
    tag: GraphTag,
}

impl Graph {
    /// Normalizes edge orientation and rejects self-loops and duplicates.
    pub fn new(n_verts: usize, edges: Vec<(u32, u32)>, tag: GraphTag) -> Result<Self> {
        let edges: Vec<(u32, u32)> = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        let g = Graph { n_verts, edges, tag };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = alloc::collections::BTreeSet::new();
        for &(u, v) in &self.edges {
            if u == v {
                return Err(invalid!("self-loop at vertex {}", u + 1));
            }
            if v as usize >= self.n_verts {
                return Err(invalid!("edge ({}, {}) out of range", u + 1, v + 1));
            }
            if !seen.insert((u, v)) {
                return Err(invalid!("duplicate edge ({}, {})", u + 1, v + 1));
            }
        }
        Ok(())
    }

    pub fn n_verts(&self) -> usize {
        self.n_verts
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn tag(&self) -> &GraphTag {
        &self.tag
    }

    pub fn mean_degree(&self) -> f64 {
        if self.n_verts == 0 {
            0.0
        } else {
            2.0 * self.edges.len() as f64 / self.n_verts as f64
        }
    }

    pub fn adjacency(&self) -> Adjacency {
        Adjacency::new(self.n_verts, &self.edges)
    }
}

/// Compressed adjacency lists.
#[derive(Clone, Debug)]
pub struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Adjacency {
    pub fn new(n: usize, edges: &[(u32, u32)]) -> Self {
        let mut deg = vec![0usize; n + 1];
        for &(u, v) in edges {
            deg[u as usize + 1] += 1;
            deg[v as usize + 1] += 1;
        }
        for i in 0..n {
            deg[i + 1] += deg[i];
        }
        let offsets = deg.clone();
        let mut fill = deg;
        let mut targets = vec![0u32; 2 * edges.len()];
        for &(u, v) in edges {
            targets[fill[u as usize]] = v;
            fill[u as usize] += 1;
            targets[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        Adjacency { offsets, targets }
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn n_verts(&self) -> usize {
        self.offsets.len() - 1
    }
}

/// A binary linear code given by its sparse parity-check matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct LdpcCode {
    n_bits: usize,
    checks: Vec<Vec<u32>>,
    column_weight: usize,
    row_weight: usize,
    seed: Option<u64>,
}

impl LdpcCode {
    /// Builds a regular code and checks row/column weights.
    pub fn new(n_bits: usize, mut checks: Vec<Vec<u32>>, column_weight: usize, row_weight: usize) -> Result<Self> {
        for row in &mut checks {
            row.sort_unstable();
        }
        let code = LdpcCode { n_bits, checks, column_weight, row_weight, seed: None };
        code.validate()?;
        Ok(code)
    }

    pub fn validate(&self) -> Result<()> {
        if self.row_weight == 0 || (self.n_bits * self.column_weight) % self.row_weight != 0 {
            return Err(invalid!("n*l = {} not divisible by k = {}", self.n_bits * self.column_weight, self.row_weight));
        }
        let m = self.n_bits * self.column_weight / self.row_weight;
        if self.checks.len() != m {
            return Err(invalid!("expected {m} checks, found {}", self.checks.len()));
        }
        let mut col = vec![0usize; self.n_bits];
        for (i, row) in self.checks.iter().enumerate() {
            if row.len() != self.row_weight {
                return Err(invalid!("check {i} has weight {} != {}", row.len(), self.row_weight));
            }
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(invalid!("check {i} has a repeated bit"));
            }
            for &b in row {
                if b as usize >= self.n_bits {
                    return Err(invalid!("check {i}: bit {} out of range", b + 1));
                }
                col[b as usize] += 1;
            }
        }
        if let Some(b) = col.iter().position(|&w| w != self.column_weight) {
            return Err(invalid!("bit {} has column weight {} != {}", b + 1, col[b], self.column_weight));
        }
        Ok(())
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn n_checks(&self) -> usize {
        self.checks.len()
    }

    pub fn checks(&self) -> &[Vec<u32>] {
        &self.checks
    }

    pub fn column_weight(&self) -> usize {
        self.column_weight
    }

    pub fn row_weight(&self) -> usize {
        self.row_weight
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// For each bit, the checks it participates in.
    pub fn bit_checks(&self) -> Vec<Vec<u32>> {
        let mut cols = vec![Vec::with_capacity(self.column_weight); self.n_bits];
        for (i, row) in self.checks.iter().enumerate() {
            for &b in row {
                cols[b as usize].push(i as u32);
            }
        }
        cols
    }

    /// Number of violated parity checks.
    pub fn syndrome_weight(&self, word: &Assignment) -> usize {
        self.checks
            .iter()
            .filter(|row| row.iter().fold(false, |acc, &b| acc ^ word.get(b as usize)))
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_packing() {
        let l = Lit::new(4, true);
        assert_eq!(l.var(), 4);
        assert!(l.is_negated());
        assert_eq!(l.to_dimacs(), -5);
        assert_eq!(Lit::from_dimacs(-5), Some(l));
        assert_eq!(!l, Lit::positive(4));
        assert_eq!(Lit::from_dimacs(0), None);
    }

    #[test]
    fn rejects_repeated_variable_in_clause() {
        let c = vec![Lit::positive(0), Lit::new(0, true)];
        assert!(KSatInstance::new(2, vec![c], KSatKind::Unspecified, None).is_err());
    }

    #[test]
    fn rejects_out_of_range_variable() {
        let c = vec![Lit::positive(3)];
        assert!(KSatInstance::new(3, vec![c], KSatKind::Unspecified, None).is_err());
    }

    #[test]
    fn graph_rejects_loops_and_duplicates() {
        let tag = GraphTag { c: 0.0, seed: None };
        assert!(Graph::new(3, vec![(1, 1)], tag).is_err());
        assert!(Graph::new(3, vec![(0, 1), (1, 0)], tag).is_err());
        assert!(Graph::new(3, vec![(0, 1), (1, 2)], tag).is_ok());
    }

    #[test]
    fn xor_equation_semantics() {
        let e = XorEquation::new([2, 0, 1], true);
        assert_eq!(e.vars, [0, 1, 2]);
        let mut a = Assignment::all_false(3);
        assert!(!e.is_satisfied(&a));
        a.flip(1);
        assert!(e.is_satisfied(&a));
    }

    #[test]
    fn ldpc_weights_checked() {
        assert!(LdpcCode::new(4, vec![vec![0, 1], vec![2, 3]], 1, 2).is_ok());
        assert!(LdpcCode::new(4, vec![vec![0, 1], vec![1, 3]], 1, 2).is_err());
    }
}
