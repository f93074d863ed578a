//! Decoding the all-zero codeword of a regular LDPC code: simulated
//! annealing on the unfixed bits, and peeling on the erasure channel.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index::sample;
use rand::Rng;

use crate::error::{invalid, Result};
use crate::instances::{Assignment, LdpcCode};
use crate::rng::{self, streams};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Channel {
    /// Each bit erased independently with probability p.
    Erasure { p: f64 },
    /// A fraction p of the bits, chosen uniformly, left unknown; the rest
    /// fixed to the transmitted value.
    FixedFraction { p: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecoderRun {
    pub channel: Channel,
    /// Bits whose value was known to the decoder.
    pub fixed: Vec<bool>,
    pub word: Assignment,
    pub violated: usize,
    /// `2/N` times the number of violated checks.
    pub energy_density: f64,
    /// All checks satisfied (and, for peeling, every erasure recovered).
    pub success: bool,
    /// Sweeps per temperature; 0 for peeling.
    pub sweeps: usize,
}

/// Number of temperatures of the annealing schedule.
pub const TEMPERATURES: usize = 1000;

/// `T_j = 1 - j / 999`, from 1 down to 0.
pub fn temperature(j: usize) -> f64 {
    1.0 - j as f64 / (TEMPERATURES - 1) as f64
}

/// Simulated annealing decoder: fixes a uniformly chosen (1 - p) fraction of
/// the bits to 0, starts the others at random, and runs `sweeps` Metropolis
/// sweeps at each temperature of the schedule. A sweep is N proposals, each
/// a uniformly chosen free bit.
pub fn sa_decode(code: &LdpcCode, p: f64, sweeps: usize, seed: u64) -> Result<DecoderRun> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid!("noise level must lie in [0, 1], got {p}"));
    }
    let n = code.n_bits();
    let mut rng = rng::stream(seed, streams::ANNEAL);
    let n_free = libm::round(p * n as f64) as usize;
    let free: Vec<u32> = {
        let mut f: Vec<u32> = sample(&mut rng, n, n_free).into_iter().map(|i| i as u32).collect();
        f.sort_unstable();
        f
    };
    let mut fixed = vec![true; n];
    let mut word = Assignment::all_false(n);
    for &v in &free {
        fixed[v as usize] = false;
        word.set(v as usize, rng.gen::<bool>());
    }
    let bit_checks = code.bit_checks();
    let mut parity: Vec<bool> =
        code.checks().iter().map(|c| c.iter().filter(|&&b| word.get(b as usize)).count() % 2 == 1).collect();
    let mut unsat_deg: Vec<u32> =
        bit_checks.iter().map(|cs| cs.iter().filter(|&&c| parity[c as usize]).count() as u32).collect();
    let max_deg = bit_checks.iter().map(Vec::len).max().unwrap_or(0);
    let mut table = vec![0.0f64; max_deg + 1];
    if !free.is_empty() {
        for j in 0..TEMPERATURES {
            let t = temperature(j);
            for (d, slot) in table.iter_mut().enumerate() {
                *slot = if t > 0.0 { libm::exp(-(d as f64) / t) } else { 0.0 };
            }
            for _ in 0..sweeps * n {
                let v = free[rng.gen_range(0..free.len())] as usize;
                let delta = bit_checks[v].len() as i64 - 2 * unsat_deg[v] as i64;
                let accept = delta <= 0 || rng.gen::<f64>() < table[delta as usize];
                if !accept {
                    continue;
                }
                word.flip(v);
                for &c in &bit_checks[v] {
                    let c = c as usize;
                    parity[c] = !parity[c];
                    for &b in &code.checks()[c] {
                        if parity[c] {
                            unsat_deg[b as usize] += 1;
                        } else {
                            unsat_deg[b as usize] -= 1;
                        }
                    }
                }
            }
        }
    }
    let violated = parity.iter().filter(|&&x| x).count();
    Ok(DecoderRun {
        channel: Channel::FixedFraction { p },
        fixed,
        word,
        violated,
        energy_density: 2.0 * violated as f64 / n.max(1) as f64,
        success: violated == 0,
        sweeps,
    })
}

/// Erasure pattern of the binary erasure channel with probability `p`.
pub fn bec_erasures(n: usize, p: f64, seed: u64) -> Result<Vec<bool>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid!("erasure probability must lie in [0, 1], got {p}"));
    }
    let mut rng = rng::stream(seed, streams::CHANNEL);
    Ok((0..n).map(|_| rng.gen::<f64>() < p).collect())
}

/// Peeling decoder: repeatedly solves a check with exactly one erased bit.
/// Bits still erased at the end are filled with fair coins from `seed` to
/// report a residual energy.
pub fn bec_peel_decode(code: &LdpcCode, received: &Assignment, erased: &[bool], seed: u64) -> Result<DecoderRun> {
    let n = code.n_bits();
    if received.len() != n || erased.len() != n {
        return Err(invalid!("received word and erasure mask must have {n} bits"));
    }
    let checks = code.checks();
    let bit_checks = code.bit_checks();
    let mut word = received.clone();
    let mut known: Vec<bool> = erased.iter().map(|&e| !e).collect();
    let mut missing: Vec<u32> = vec![0; checks.len()];
    let mut parity: Vec<bool> = vec![false; checks.len()];
    for (ci, c) in checks.iter().enumerate() {
        for &b in c {
            if known[b as usize] {
                parity[ci] ^= word.get(b as usize);
            } else {
                missing[ci] += 1;
            }
        }
    }
    let mut queue: VecDeque<u32> = (0..checks.len() as u32).filter(|&c| missing[c as usize] == 1).collect();
    while let Some(c) = queue.pop_front() {
        let c = c as usize;
        if missing[c] != 1 {
            continue;
        }
        let b = *checks[c].iter().find(|&&b| !known[b as usize]).expect("one erased bit") as usize;
        let value = parity[c];
        word.set(b, value);
        known[b] = true;
        for &d in &bit_checks[b] {
            let d = d as usize;
            missing[d] -= 1;
            parity[d] ^= value;
            if missing[d] == 1 {
                queue.push_back(d as u32);
            }
        }
    }
    let recovered = known.iter().all(|&k| k);
    if !recovered {
        let mut rng = rng::stream(seed, streams::PEEL);
        for b in 0..n {
            if !known[b] {
                word.set(b, rng.gen::<bool>());
            }
        }
    }
    let violated = code.syndrome_weight(&word);
    let p = erased.iter().filter(|&&e| e).count() as f64 / n.max(1) as f64;
    Ok(DecoderRun {
        channel: Channel::Erasure { p },
        fixed: erased.iter().map(|&e| !e).collect(),
        word,
        violated,
        energy_density: 2.0 * violated as f64 / n.max(1) as f64,
        success: recovered && violated == 0,
        sweeps: 0,
    })
}
