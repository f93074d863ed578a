use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{
    Graph, GraphTag, KSatInstance, KSatKind, LdpcCode, Lit, XorEquation, XorMode, XorSatInstance, XorTag,
};
use crate::error::{invalid, Error, Result};
use crate::rng::{self, streams};

/// Options for the fixed-M K-SAT ensemble.
#[derive(Clone, Copy, Debug, Default)]
pub struct KSatOptions {
    /// Redraw clauses that repeat an earlier clause (same literal set).
    pub reject_duplicates: bool,
}

/// `k` distinct values from `0..n`, sorted (Floyd's algorithm).
fn sample_distinct<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Vec<u32> {
    let mut out: Vec<u32> = Vec::with_capacity(k);
    for j in (n - k)..n {
        let t = rng.gen_range(0..=j) as u32;
        if out.contains(&t) {
            out.push(j as u32);
        } else {
            out.push(t);
        }
    }
    out.sort_unstable();
    out
}

fn random_clause<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Vec<Lit> {
    sample_distinct(rng, n, k)
        .into_iter()
        .map(|v| Lit::new(v as usize, rng.gen::<bool>()))
        .collect()
}

fn binomial_coeff(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Uniform random K-SAT with `m` clauses drawn with replacement.
pub fn gen_ksat(n: usize, m: usize, k: usize, seed: u64) -> Result<KSatInstance> {
    gen_ksat_with(n, m, k, seed, KSatOptions::default())
}

pub fn gen_ksat_with(n: usize, m: usize, k: usize, seed: u64, opts: KSatOptions) -> Result<KSatInstance> {
    if k == 0 || k > n {
        return Err(invalid!("clause width k = {k} must lie in 1..={n}"));
    }
    if opts.reject_duplicates {
        let available = binomial_coeff(n as u64, k as u64).saturating_mul(1u128 << k.min(100));
        if (m as u128) > available {
            return Err(invalid!("{m} distinct clauses requested but only {available} exist"));
        }
    }
    let mut rng = rng::stream(seed, streams::KSAT);
    let mut clauses = Vec::with_capacity(m);
    let mut seen = BTreeSet::new();
    while clauses.len() < m {
        let c = random_clause(&mut rng, n, k);
        if opts.reject_duplicates && !seen.insert(c.clone()) {
            continue;
        }
        clauses.push(c);
    }
    KSatInstance::new(n, clauses, KSatKind::Uniform { k }, Some(seed))
}

/// Mixed 2+p-SAT: round(alpha*N*p) 3-clauses followed by
/// round(alpha*N*(1-p)) 2-clauses.
pub fn gen_2p_sat(n: usize, alpha: f64, p: f64, seed: u64) -> Result<KSatInstance> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(invalid!("alpha = {alpha} must be finite and non-negative"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid!("p = {p} must lie in [0, 1]"));
    }
    let m3 = libm::round(alpha * n as f64 * p) as usize;
    let m2 = libm::round(alpha * n as f64 * (1.0 - p)) as usize;
    if (m3 > 0 && n < 3) || (m2 > 0 && n < 2) {
        return Err(invalid!("n = {n} too small for the requested clause widths"));
    }
    let mut rng = rng::stream(seed, streams::MIXED);
    let mut clauses = Vec::with_capacity(m2 + m3);
    for _ in 0..m3 {
        clauses.push(random_clause(&mut rng, n, 3));
    }
    for _ in 0..m2 {
        clauses.push(random_clause(&mut rng, n, 2));
    }
    KSatInstance::new(n, clauses, KSatKind::Mixed { p_nominal: p }, Some(seed))
}

/// Triplet of rank `r` in colexicographic order: the unique a < b < c with
/// r = C(c,3) + C(b,2) + a.
fn unrank_triplet(r: u128) -> [u32; 3] {
    fn largest_with(r: u128, k: u64) -> u64 {
        // largest x with C(x, k) <= r
        let guess = libm::pow(r as f64 * [1.0, 1.0, 2.0, 6.0][k as usize], 1.0 / k as f64) as u64;
        let mut x = guess.saturating_sub(2).max(k - 1);
        while binomial_coeff(x + 1, k) <= r {
            x += 1;
        }
        while x > k - 1 && binomial_coeff(x, k) > r {
            x -= 1;
        }
        x
    }
    let c = largest_with(r, 3);
    let r = r - binomial_coeff(c, 3);
    let b = largest_with(r, 2);
    let a = r - binomial_coeff(b, 2);
    [a as u32, b as u32, c as u32]
}

/// Random 3-XORSAT.
pub fn gen_xorsat(n: usize, alpha: f64, mode: XorMode, seed: u64) -> Result<XorSatInstance> {
    if n < 3 {
        return Err(invalid!("3-XORSAT needs n >= 3, got {n}"));
    }
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(invalid!("alpha = {alpha} must be finite and non-negative"));
    }
    let mut rng = rng::stream(seed, streams::XORSAT);
    let mut equations = Vec::new();
    match mode {
        XorMode::FixedM => {
            let m = libm::round(alpha * n as f64) as usize;
            for _ in 0..m {
                let t = sample_distinct(&mut rng, n, 3);
                equations.push(XorEquation::new([t[0], t[1], t[2]], rng.gen()));
            }
        }
        XorMode::Bernoulli => {
            let total = binomial_coeff(n as u64, 3);
            let mu = alpha * n as f64 / total as f64;
            if mu > 1.0 {
                return Err(invalid!("triplet probability {mu} exceeds 1 (alpha too large for n = {n})"));
            }
            let mut pos: u128 = 0;
            loop {
                let skip = rng::geometric_skip(&mut rng, mu);
                if skip == u64::MAX {
                    break;
                }
                pos += skip as u128;
                if pos >= total {
                    break;
                }
                equations.push(XorEquation::new(unrank_triplet(pos), rng.gen()));
                pos += 1;
            }
        }
    }
    XorSatInstance::new(n, equations, XorTag { mode, alpha, seed: Some(seed) })
}

/// Erdős–Rényi G(n, c/n) by geometric skipping over vertex pairs.
pub fn gen_gnp(n: usize, c: f64, seed: u64) -> Result<Graph> {
    if !(c >= 0.0) || !c.is_finite() {
        return Err(invalid!("mean degree c = {c} must be finite and non-negative"));
    }
    let tag = GraphTag { c, seed: Some(seed) };
    if n < 2 || c == 0.0 {
        return Graph::new(n, Vec::new(), tag);
    }
    let p = c / n as f64;
    if p > 1.0 {
        return Err(invalid!("edge probability c/n = {p} exceeds 1"));
    }
    let mut rng = rng::stream(seed, streams::GNP);
    let mut edges = Vec::new();
    // pairs (w, v) with w < v, enumerated row by row
    let (mut v, mut w): (u64, i64) = (1, -1);
    let n = n as u64;
    while v < n {
        let skip = rng::geometric_skip(&mut rng, p);
        if skip == u64::MAX {
            break;
        }
        w += 1 + skip as i64;
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((w as u32, v as u32));
        }
    }
    Graph::new(n as usize, edges, tag)
}

const LDPC_REPAIR_ATTEMPTS: usize = 100;

/// Regular (l, k) LDPC parity-check matrix from the socket configuration
/// model. Checks that receive the same bit twice are repaired by swapping
/// sockets with other checks, at most 100 attempts per offending check.
pub fn gen_regular_ldpc(n: usize, l: usize, k: usize, seed: u64) -> Result<LdpcCode> {
    if l == 0 || k == 0 {
        return Err(invalid!("weights must be positive (l = {l}, k = {k})"));
    }
    if (n * l) % k != 0 {
        return Err(invalid!("n*l = {} not divisible by k = {k}", n * l));
    }
    if k > n {
        return Err(invalid!("row weight {k} exceeds n = {n}"));
    }
    let m = n * l / k;
    let mut rng = rng::stream(seed, streams::LDPC);
    let mut sockets: Vec<u32> = (0..n as u32).flat_map(|b| core::iter::repeat(b).take(l)).collect();
    sockets.shuffle(&mut rng);

    let has_repeat = |s: &[u32], chk: usize| -> Option<usize> {
        let row = &s[chk * k..(chk + 1) * k];
        (0..k).find(|&i| row[..i].contains(&row[i]))
    };
    let row_contains = |s: &[u32], chk: usize, bit: u32, except: usize| -> bool {
        (chk * k..(chk + 1) * k).any(|i| i != except && s[i] == bit)
    };

    for chk in 0..m {
        let mut attempts = 0;
        while let Some(off) = has_repeat(&sockets, chk) {
            if attempts == LDPC_REPAIR_ATTEMPTS || m == 1 {
                return Err(Error::GenerationFailure(alloc::format!(
                    "check {chk} still has a repeated bit after {attempts} re-pairings"
                )));
            }
            attempts += 1;
            let a = chk * k + off;
            let other = loop {
                let o = rng.gen_range(0..m);
                if o != chk {
                    break o;
                }
            };
            let b = other * k + rng.gen_range(0..k);
            let (bit_a, bit_b) = (sockets[a], sockets[b]);
            if !row_contains(&sockets, chk, bit_b, a) && !row_contains(&sockets, other, bit_a, b) {
                sockets.swap(a, b);
            }
        }
    }
    // earlier checks may have been hit by swaps from later ones; those swaps
    // only ever moved a bit into a row not containing it, so rows stay clean.
    let checks: Vec<Vec<u32>> = sockets.chunks(k).map(|c| c.to_vec()).collect();
    let mut code = LdpcCode::new(n, checks, l, k)?;
    code.seed = Some(seed);
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::XorMode;

    #[test]
    fn floyd_sampling_is_distinct() {
        let mut rng = rng::stream(1, 0);
        for _ in 0..1000 {
            let s = sample_distinct(&mut rng, 5, 3);
            assert!(s.windows(2).all(|w| w[0] < w[1]));
            assert!(s.iter().all(|&v| v < 5));
        }
        assert_eq!(sample_distinct(&mut rng, 3, 3), vec![0, 1, 2]);
    }

    #[test]
    fn unrank_enumerates_all_triplets_in_order() {
        let n = 12u32;
        let mut r = 0u128;
        for c in 2..n {
            for b in 1..c {
                for a in 0..b {
                    assert_eq!(unrank_triplet(r), [a, b, c], "rank {r}");
                    r += 1;
                }
            }
        }
        // large ranks stay consistent
        let big = binomial_coeff(100_000, 3) - 1;
        assert_eq!(unrank_triplet(big), [99_997, 99_998, 99_999]);
    }

    #[test]
    fn ksat_shape_and_determinism() {
        let a = gen_ksat(4, 5, 3, 11).unwrap();
        assert_eq!(a.n_vars(), 4);
        assert_eq!(a.n_clauses(), 5);
        assert!(a.clauses().iter().all(|c| c.len() == 3));
        a.validate().unwrap();
        assert_eq!(a, gen_ksat(4, 5, 3, 11).unwrap());
        assert_ne!(a, gen_ksat(4, 5, 3, 12).unwrap());
    }

    #[test]
    fn ksat_empty_and_errors() {
        let e = gen_ksat(10, 0, 3, 1).unwrap();
        assert_eq!(e.n_clauses(), 0);
        assert!(e.is_satisfied_by(&crate::instances::Assignment::all_false(10)));
        assert!(matches!(gen_ksat(2, 1, 3, 1), Err(Error::InvalidParameters(_))));
    }

    #[test]
    fn ksat_duplicate_rejection() {
        // 2 variables, k = 2: only 4 distinct clauses exist
        let inst = gen_ksat_with(2, 4, 2, 5, KSatOptions { reject_duplicates: true }).unwrap();
        let set: BTreeSet<_> = inst.clauses().iter().cloned().collect();
        assert_eq!(set.len(), 4);
        assert!(gen_ksat_with(2, 5, 2, 5, KSatOptions { reject_duplicates: true }).is_err());
    }

    #[test]
    fn mixed_counts() {
        let i = gen_2p_sat(1000, 2.0, 0.5, 3).unwrap();
        let w = i.width_counts();
        assert_eq!(w[3], 1000);
        assert_eq!(w[2], 1000);
        assert_eq!(i.tag().p, 0.5);
        i.validate().unwrap();

        let pure3 = gen_2p_sat(1000, 1.0, 1.0, 3).unwrap();
        assert_eq!(pure3.n_clauses(), 1000);
        assert!(pure3.clauses().iter().all(|c| c.len() == 3));
        let pure2 = gen_2p_sat(1000, 1.0, 0.0, 3).unwrap();
        assert!(pure2.clauses().iter().all(|c| c.len() == 2));
        assert!(gen_2p_sat(10, -1.0, 0.5, 0).is_err());
    }

    #[test]
    fn realized_p_is_recorded() {
        let i = gen_2p_sat(7, 1.0, 0.3, 0).unwrap();
        // round(2.1) = 2 three-clauses, round(4.9) = 5 two-clauses
        assert_eq!(i.width_counts()[3], 2);
        assert_eq!(i.width_counts()[2], 5);
        assert_eq!(i.tag().p, 2.0 / 7.0);
    }

    #[test]
    fn xorsat_single_triplet() {
        let x = gen_xorsat(3, 1.0 / 3.0, XorMode::FixedM, 9).unwrap();
        assert_eq!(x.n_equations(), 1);
        assert_eq!(x.equations()[0].vars, [0, 1, 2]);
    }

    #[test]
    fn xorsat_bernoulli_count() {
        let n = 2000;
        let counts: Vec<f64> = (0..40)
            .map(|s| gen_xorsat(n, 0.5, XorMode::Bernoulli, s).unwrap().n_equations() as f64)
            .collect();
        let mean = counts.iter().sum::<f64>() / counts.len() as f64;
        // Poisson-like: sd ~ sqrt(1000) ~ 32 per draw, ~5 on the mean
        assert!((mean - 1000.0).abs() < 25.0, "{mean}");
        for s in 0..3 {
            gen_xorsat(n, 0.5, XorMode::Bernoulli, s).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn gnp_basics() {
        assert_eq!(gen_gnp(100, 0.0, 1).unwrap().n_edges(), 0);
        let g = gen_gnp(500, 3.0, 1).unwrap();
        assert_eq!(g, gen_gnp(500, 3.0, 1).unwrap());
        g.validate().unwrap();
        assert!(gen_gnp(5, -1.0, 1).is_err());
        let complete = gen_gnp(6, 6.0, 2).unwrap();
        assert_eq!(complete.n_edges(), 15);
    }

    #[test]
    fn ldpc_small_cases() {
        let one = gen_regular_ldpc(6, 1, 6, 3).unwrap();
        assert_eq!(one.checks(), &[vec![0, 1, 2, 3, 4, 5]]);
        assert!(matches!(gen_regular_ldpc(10, 3, 7, 1), Err(Error::InvalidParameters(_))));
        let c = gen_regular_ldpc(600, 3, 6, 4).unwrap();
        assert_eq!(c.n_checks(), 300);
        c.validate().unwrap();
    }
}
