//! Random walk projected on the number M0 of unsatisfied constraints,
//! assuming all assignments with the same M0 are equally likely.
//!
//! A step repairs the selected constraint. The flipped variable sits in
//! D ~ Binomial(M - 1, K/N) other constraints, each violated with
//! probability M0/M. For K-SAT a violated one becomes satisfied and a
//! satisfied one becomes violated with probability 1/(2^K - 1) (the flipped
//! literal was its only true one). For XORSAT every one of them toggles.

use alloc::vec::Vec;

use rand::Rng;

use crate::error::{invalid, Result};
use crate::rng::{self, binomial_small, streams};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainKind {
    Sat,
    Xor,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainParams {
    pub kind: ChainKind,
    pub k: u32,
    pub n: usize,
    pub alpha: f64,
}

impl ChainParams {
    pub fn m(&self) -> u64 {
        libm::round(self.alpha * self.n as f64) as u64
    }

    fn check(&self) -> Result<()> {
        if self.k < 1 || self.k > 30 || self.n == 0 || !(self.alpha > 0.0) || self.m() < 1 {
            return Err(invalid!("chain needs K in 1..=30, N >= 1 and alpha N >= 1"));
        }
        Ok(())
    }
}

fn step<R: Rng + ?Sized>(p: &ChainParams, m: u64, m0: u64, rng: &mut R) -> u64 {
    let d = binomial_small(rng, m - 1, p.k as f64 / p.n as f64);
    let f = m0 as f64 / m as f64;
    let break_p = 1.0 / (libm::pow(2.0, p.k as f64) - 1.0);
    let mut next = m0 as i64 - 1;
    for _ in 0..d {
        if rng.gen::<f64>() < f {
            next -= 1;
        } else if p.kind == ChainKind::Xor || rng.gen::<f64>() < break_p {
            next += 1;
        }
    }
    next.clamp(0, m as i64) as u64
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainRun {
    /// `M0 / M` every `record_every` steps.
    pub trace: Vec<f64>,
    /// Mean of `M0 / M` over the steps with t = steps / M >= 1.
    pub mean_after_unit_time: Option<f64>,
    /// Step at which M0 first reached 0.
    pub hit_zero: Option<u64>,
    pub steps: u64,
}

/// Runs the chain from `M0 = round(M / 2^K)` (XORSAT: `M / 2`), the typical
/// value for a random assignment.
pub fn projected_markov_run(params: ChainParams, seed: u64, max_steps: u64, record_every: u64) -> Result<ChainRun> {
    params.check()?;
    let m = params.m();
    let mut rng = rng::stream(seed, streams::MARKOV);
    let start = match params.kind {
        ChainKind::Sat => libm::round(m as f64 / libm::pow(2.0, params.k as f64)),
        ChainKind::Xor => libm::round(m as f64 / 2.0),
    } as u64;
    let mut m0 = start;
    let every = record_every.max(1);
    let mut trace = alloc::vec![m0 as f64 / m as f64];
    let (mut sum, mut count) = (0.0, 0u64);
    let mut steps = 0;
    while m0 > 0 && steps < max_steps {
        m0 = step(&params, m, m0, &mut rng);
        steps += 1;
        if steps % every == 0 {
            trace.push(m0 as f64 / m as f64);
        }
        if steps >= m {
            sum += m0 as f64 / m as f64;
            count += 1;
        }
    }
    Ok(ChainRun {
        trace,
        mean_after_unit_time: (count > 0).then(|| sum / count as f64),
        hit_zero: (m0 == 0).then_some(steps),
        steps,
    })
}

/// Mean one-step change of M0 from state `m0`, estimated from `samples`
/// independent transitions.
pub fn projected_markov_drift(params: ChainParams, m0: u64, samples: u64, seed: u64) -> Result<f64> {
    params.check()?;
    let m = params.m();
    if m0 == 0 || m0 > m {
        return Err(invalid!("drift needs 1 <= M0 <= M"));
    }
    let mut rng = rng::stream(seed, streams::MARKOV);
    let mut total = 0i64;
    for _ in 0..samples {
        total += step(&params, m, m0, &mut rng) as i64 - m0 as i64;
    }
    Ok(total as f64 / samples.max(1) as f64)
}

/// Scans alpha on `grid` and returns the linearly interpolated alpha where
/// the drift at small `m0` changes sign from negative to positive.
pub fn drift_sign_change(
    kind: ChainKind,
    k: u32,
    n: usize,
    m0: u64,
    grid: &[f64],
    samples: u64,
    seed: u64,
) -> Result<Option<f64>> {
    let mut prev: Option<(f64, f64)> = None;
    for (i, &alpha) in grid.iter().enumerate() {
        let d = projected_markov_drift(ChainParams { kind, k, n, alpha }, m0, samples, rng::derive_seed(seed, &[i as u64]))?;
        if let Some((a0, d0)) = prev {
            if d0 < 0.0 && d >= 0.0 {
                return Ok(Some(a0 + (alpha - a0) * (-d0) / (d - d0)));
            }
        }
        prev = Some((alpha, d));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drift_signs() {
        let sat = |alpha| ChainParams { kind: ChainKind::Sat, k: 3, n: 10_000, alpha };
        assert!(projected_markov_drift(sat(2.0), 1, 100_000, 1).unwrap() < 0.0);
        assert!(projected_markov_drift(sat(2.7), 1, 100_000, 1).unwrap() > 0.0);
        let xor = |alpha| ChainParams { kind: ChainKind::Xor, k: 3, n: 10_000, alpha };
        assert!(projected_markov_drift(xor(0.25), 1, 100_000, 1).unwrap() < 0.0);
        assert!(projected_markov_drift(xor(0.45), 1, 100_000, 1).unwrap() > 0.0);
    }

    #[test]
    fn low_alpha_chain_reaches_zero() {
        let r = projected_markov_run(ChainParams { kind: ChainKind::Sat, k: 3, n: 1000, alpha: 1.0 }, 2, 1_000_000, 100)
            .unwrap();
        assert!(r.hit_zero.is_some());
    }
}
