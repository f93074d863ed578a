//! Seeded random streams.
//!
//! Every random decision in the crate draws from a [`StreamRng`], a ChaCha8
//! generator keyed by a 64-bit seed and selected by a 64-bit stream id. ChaCha
//! is counter based, so streams are independent and a run's randomness does
//! not depend on which thread executes it or in which order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use rand::Rng;

pub type StreamRng = ChaCha8Rng;

/// Stream ids reserved for each consumer of randomness.
pub mod streams {
    pub const KSAT: u64 = 1;
    pub const MIXED: u64 = 2;
    pub const XORSAT: u64 = 3;
    pub const GNP: u64 = 4;
    pub const LDPC: u64 = 5;
    pub const DPLL: u64 = 16;
    pub const VC: u64 = 17;
    pub const WALK: u64 = 18;
    pub const DESCENT: u64 = 19;
    pub const ANNEAL: u64 = 20;
    pub const PEEL: u64 = 21;
    pub const MARKOV: u64 = 22;
    pub const CHANNEL: u64 = 23;
    /// Restart attempts use `RESTART_BASE + attempt`.
    pub const RESTART_BASE: u64 = 1 << 32;
}

pub fn stream(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a child seed from a parent seed and a path of indices, e.g.
/// `(master, [grid_point, trial])`.
pub fn derive_seed(parent: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(mix64(parent), |acc, &i| mix64(acc ^ mix64(i.wrapping_add(0x632b_e59b_d9b4_e019))))
}

/// Number of failures before the first success of a Bernoulli(`p`) sequence.
/// Returns `u64::MAX` when `p == 0`.
pub fn geometric_skip<R: Rng + ?Sized>(rng: &mut R, p: f64) -> u64 {
    if p >= 1.0 {
        return 0;
    }
    if p <= 0.0 {
        return u64::MAX;
    }
    let u: f64 = rng.gen::<f64>();
    // 1 - u lies in (0, 1]
    let k = libm::floor(libm::log1p(-u) / libm::log1p(-p));
    if k >= u64::MAX as f64 {
        u64::MAX
    } else {
        k as u64
    }
}

/// Binomial(n, p) by sequential inversion. Intended for small means
/// (`n * p` up to a few dozen); the cost is linear in the drawn value.
pub fn binomial_small<R: Rng + ?Sized>(rng: &mut R, n: u64, p: f64) -> u64 {
    if n == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return n;
    }
    if p > 0.5 {
        return n - binomial_small(rng, n, 1.0 - p);
    }
    let q = 1.0 - p;
    let ratio = p / q;
    let mut prob = libm::exp(n as f64 * libm::log1p(-p));
    let mut cdf = prob;
    let u: f64 = rng.gen();
    let mut k = 0u64;
    while u > cdf && k < n {
        prob *= ratio * (n - k) as f64 / (k + 1) as f64;
        k += 1;
        cdf += prob;
        if prob < 1e-300 && cdf < u {
            // numerical tail exhausted
            break;
        }
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = stream(7, 1).gen();
        let b: u64 = stream(7, 1).gen();
        let c: u64 = stream(7, 2).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn derived_seeds_depend_on_every_path_element() {
        let s = derive_seed(1, &[0, 0]);
        assert_ne!(s, derive_seed(1, &[0, 1]));
        assert_ne!(s, derive_seed(1, &[1, 0]));
        assert_ne!(s, derive_seed(2, &[0, 0]));
        assert_eq!(s, derive_seed(1, &[0, 0]));
    }

    #[test]
    fn binomial_mean_and_variance() {
        let mut rng = stream(3, 0);
        let (n, p) = (30_000u64, 3.0 / 10_000.0);
        let draws: alloc::vec::Vec<f64> =
            (0..200_000).map(|_| binomial_small(&mut rng, n, p) as f64).collect();
        let mean = draws.iter().sum::<f64>() / draws.len() as f64;
        let var = draws.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / draws.len() as f64;
        let (m0, v0) = (n as f64 * p, n as f64 * p * (1.0 - p));
        assert!((mean - m0).abs() < 0.02, "mean {mean} vs {m0}");
        assert!((var - v0).abs() < 0.1, "var {var} vs {v0}");
    }

    #[test]
    fn geometric_skip_mean() {
        let mut rng = stream(4, 0);
        let p = 0.01;
        let mean = (0..100_000).map(|_| geometric_skip(&mut rng, p) as f64).sum::<f64>() / 1e5;
        // E = (1 - p) / p = 99
        assert!((mean - 99.0).abs() < 1.5, "{mean}");
        assert_eq!(geometric_skip(&mut rng, 1.0), 0);
        assert_eq!(geometric_skip(&mut rng, 0.0), u64::MAX);
    }
}
