//! Exhaustive reference implementations for small instances.
//!
//! Everything here is exponential in the instance size and exists only to
//! cross-check the real algorithms in tests.

use alloc::vec::Vec;

use crate::instances::{Assignment, Graph, KSatInstance, XorSatInstance};

fn assignments(n: usize) -> impl Iterator<Item = Assignment> {
    assert!(n <= 24, "brute force over {n} variables");
    (0u32..1 << n).map(move |m| Assignment::from_bits((0..n).map(|i| m >> i & 1 == 1).collect()))
}

/// A satisfying assignment, if one exists.
pub fn brute_force_sat(instance: &KSatInstance) -> Option<Assignment> {
    assignments(instance.n_vars()).find(|a| instance.is_satisfied_by(a))
}

/// Minimum number of violated equations over all assignments.
pub fn brute_force_xor_min(instance: &XorSatInstance) -> usize {
    assignments(instance.n_vars()).map(|a| instance.count_unsatisfied(&a)).min().unwrap_or(0)
}

/// Size of a minimum vertex cover.
pub fn min_vertex_cover(graph: &Graph) -> usize {
    let n = graph.n_verts();
    assert!(n <= 24, "brute force over {n} vertices");
    let masks: Vec<(u32, u32)> = graph.edges().iter().map(|&(u, v)| (1 << u, 1 << v)).collect();
    (0u32..1 << n)
        .filter(|&s| masks.iter().all(|&(a, b)| s & (a | b) != 0))
        .map(u32::count_ones)
        .min()
        .unwrap_or(0) as usize
}

/// Rank over GF(2) of the rows, each given as the list of its nonzero columns.
pub fn gf2_rank(n_cols: usize, rows: &[Vec<u32>]) -> usize {
    let words = n_cols.div_ceil(64);
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            let mut w = alloc::vec![0u64; words];
            for &c in r {
                w[c as usize / 64] ^= 1 << (c % 64);
            }
            w
        })
        .collect();
    let mut rank = 0;
    for col in 0..n_cols {
        let (wi, bit) = (col / 64, 1u64 << (col % 64));
        let Some(piv) = (rank..m.len()).find(|&r| m[r][wi] & bit != 0) else { continue };
        m.swap(rank, piv);
        let pivot = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[wi] & bit != 0 {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Central equations of islands, found from connected components: an island
/// is a component of seven equations and fifteen variables in which one
/// equation's variables have degree 3 and every other variable degree 1.
pub fn islands_by_components(instance: &XorSatInstance) -> Vec<u32> {
    let n = instance.n_vars();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut degree = alloc::vec![0usize; n];
    for e in instance.equations() {
        for &v in &e.vars {
            degree[v as usize] += 1;
        }
        let r0 = find(&mut parent, e.vars[0] as usize);
        for &v in &e.vars[1..] {
            let r = find(&mut parent, v as usize);
            parent[r] = r0;
        }
    }
    let mut eqs_of: alloc::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (i, e) in instance.equations().iter().enumerate() {
        eqs_of.entry(find(&mut parent, e.vars[0] as usize)).or_default().push(i);
    }
    let mut vars_of: alloc::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for v in 0..n {
        vars_of.entry(find(&mut parent, v)).or_default().push(v);
    }
    let eqs = instance.equations();
    let mut out = Vec::new();
    for (root, es) in eqs_of {
        let vs = &vars_of[&root];
        if es.len() != 7 || vs.len() != 15 {
            continue;
        }
        for &c in &es {
            let central = eqs[c].vars;
            let ok = vs.iter().all(|&v| {
                let want = if central.contains(&(v as u32)) { 3 } else { 1 };
                degree[v] == want
            });
            if ok {
                out.push(c as u32);
            }
        }
    }
    out.sort_unstable();
    out
}
