//! Zero-temperature descent on XORSAT within a Hamming radius R.
//!
//! A proposal picks a uniform variable. For R = 1 it flips that variable if
//! the number of violated equations does not increase. For R > 1 every
//! connected set of at most R variables containing the proposed one is
//! examined and the best set is flipped if it does not increase the energy.
//! Variables are connected when they share an equation.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{invalid, Result};
use crate::instances::{Assignment, XorSatInstance};
use crate::rng::{self, streams};

/// Largest radius for the exhaustive neighborhood search.
pub const MAX_RADIUS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GdOptions {
    pub radius: usize,
    pub max_steps: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GdRun {
    pub final_energy: usize,
    pub assignment: Assignment,
    /// Proposals made.
    pub steps: u64,
    pub accepted: u64,
    /// `(step, energy)` at the start and after every energy change.
    pub trace: Vec<(u64, usize)>,
    /// No set within the radius can be flipped without raising the energy.
    pub stable: bool,
}

struct Descent<'a> {
    inst: &'a XorSatInstance,
    occ: Vec<Vec<u32>>,
    sat: Vec<bool>,
    /// Violated equations containing each variable.
    unsat_deg: Vec<u32>,
    energy: usize,
    /// Variables with at least one equation whose single flip is accepted.
    free_moves: usize,
    a: Assignment,
}

impl<'a> Descent<'a> {
    fn new(inst: &'a XorSatInstance, a: Assignment) -> Self {
        let occ = inst.occurrences();
        let sat: Vec<bool> = inst.equations().iter().map(|e| e.is_satisfied(&a)).collect();
        let mut unsat_deg = vec![0u32; inst.n_vars()];
        for (e, &s) in inst.equations().iter().zip(&sat) {
            if !s {
                for &v in &e.vars {
                    unsat_deg[v as usize] += 1;
                }
            }
        }
        let energy = sat.iter().filter(|&&s| !s).count();
        let mut d = Descent { inst, occ, sat, unsat_deg, energy, free_moves: 0, a };
        d.free_moves = (0..inst.n_vars()).filter(|&v| d.movable(v)).count();
        d
    }

    /// Energy change of flipping `v` alone.
    fn delta(&self, v: usize) -> i64 {
        self.occ[v].len() as i64 - 2 * self.unsat_deg[v] as i64
    }

    fn movable(&self, v: usize) -> bool {
        !self.occ[v].is_empty() && self.delta(v) <= 0
    }

    fn flip(&mut self, v: usize) {
        self.a.flip(v);
        for i in 0..self.occ[v].len() {
            let e = self.occ[v][i] as usize;
            let vars = self.inst.equations()[e].vars;
            for &u in &vars {
                if self.movable(u as usize) {
                    self.free_moves -= 1;
                }
            }
            self.sat[e] = !self.sat[e];
            if self.sat[e] {
                self.energy -= 1;
            } else {
                self.energy += 1;
            }
            for &u in &vars {
                let u = u as usize;
                if self.sat[e] {
                    self.unsat_deg[u] -= 1;
                } else {
                    self.unsat_deg[u] += 1;
                }
                if self.movable(u) {
                    self.free_moves += 1;
                }
            }
        }
    }

    /// Energy change of flipping every variable of `set` together.
    fn set_delta(&self, set: &[u32]) -> i64 {
        let mut touched: Vec<u32> = set.iter().flat_map(|&v| self.occ[v as usize].iter().copied()).collect();
        touched.sort_unstable();
        let mut d = 0i64;
        let mut i = 0;
        while i < touched.len() {
            let e = touched[i];
            let mut j = i;
            while j < touched.len() && touched[j] == e {
                j += 1;
            }
            if (j - i) % 2 == 1 {
                d += if self.sat[e as usize] { 1 } else { -1 };
            }
            i = j;
        }
        d
    }

    fn neighbors(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        self.occ[v as usize]
            .iter()
            .flat_map(move |&e| self.inst.equations()[e as usize].vars)
            .filter(move |&u| u != v)
    }

    /// Connected sets of size 2..=radius containing `v`, each listed once.
    fn balls(&self, v: u32, radius: usize) -> Vec<Vec<u32>> {
        let mut out: Vec<Vec<u32>> = Vec::new();
        let mut frontier: Vec<Vec<u32>> = vec![vec![v]];
        for _ in 1..radius {
            let mut next = Vec::new();
            for set in &frontier {
                for &w in set {
                    for u in self.neighbors(w) {
                        if set.contains(&u) {
                            continue;
                        }
                        let mut s = set.clone();
                        s.push(u);
                        s.sort_unstable();
                        next.push(s);
                    }
                }
            }
            next.sort();
            next.dedup();
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    /// Best non-increasing move within the radius around `v`.
    fn best_move(&self, v: u32, radius: usize) -> Option<Vec<u32>> {
        if self.occ[v as usize].is_empty() {
            return None;
        }
        let mut best: Option<(i64, Vec<u32>)> = None;
        let single = self.delta(v as usize);
        if single <= 0 {
            best = Some((single, vec![v]));
        }
        for set in self.balls(v, radius) {
            let d = self.set_delta(&set);
            if d <= 0 && best.as_ref().map_or(true, |b| d < b.0) {
                best = Some((d, set));
            }
        }
        best.map(|b| b.1)
    }
}

/// Descent from a uniformly random assignment.
pub fn gd_run(instance: &XorSatInstance, opts: GdOptions, seed: u64) -> Result<GdRun> {
    let mut rng = rng::stream(seed, streams::DESCENT);
    let start = Assignment::random(instance.n_vars(), &mut rng);
    gd_from(instance, start, opts, &mut rng)
}

/// Descent from a given assignment.
pub fn gd_from<R: Rng + ?Sized>(instance: &XorSatInstance, start: Assignment, opts: GdOptions, rng: &mut R) -> Result<GdRun> {
    if opts.radius == 0 || opts.radius > MAX_RADIUS {
        return Err(invalid!("radius must lie in 1..={MAX_RADIUS}, got {}", opts.radius));
    }
    if start.len() != instance.n_vars() {
        return Err(invalid!("assignment has {} bits for {} variables", start.len(), instance.n_vars()));
    }
    let n = instance.n_vars();
    let mut d = Descent::new(instance, start);
    let mut trace = vec![(0, d.energy)];
    let (mut steps, mut accepted) = (0u64, 0u64);
    let mut rejections = 0usize;
    let stable = loop {
        if d.energy == 0 {
            break true;
        }
        if opts.radius == 1 && d.free_moves == 0 {
            break true;
        }
        if opts.radius > 1 && rejections >= n {
            // confirm with a full scan
            if (0..n as u32).all(|v| d.best_move(v, opts.radius).is_none()) {
                break true;
            }
            rejections = 0;
        }
        if steps >= opts.max_steps || n == 0 {
            break false;
        }
        steps += 1;
        let v = rng.gen_range(0..n);
        let mv = if opts.radius == 1 {
            d.movable(v).then(|| vec![v as u32])
        } else {
            d.best_move(v as u32, opts.radius)
        };
        match mv {
            Some(set) => {
                let before = d.energy;
                for u in set {
                    d.flip(u as usize);
                }
                debug_assert!(d.energy <= before);
                accepted += 1;
                rejections = 0;
                if d.energy != before {
                    trace.push((steps, d.energy));
                }
            }
            None => rejections += 1,
        }
    };
    Ok(GdRun { final_energy: d.energy, assignment: d.a, steps, accepted, trace, stable })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_xorsat, XorMode, XorTag};
    use crate::local_search::islands::{blocked_island_scan, plant_island};

    #[test]
    fn blocked_island_rejects_every_flip() {
        let base = XorSatInstance::new(0, Vec::new(), XorTag { mode: XorMode::FixedM, alpha: 0.0, seed: None }).unwrap();
        let (inst, _) = plant_island(&base);
        let d = Descent::new(&inst, Assignment::all_false(15));
        assert_eq!(d.energy, 1);
        for v in 0..15 {
            assert_eq!(d.energy as i64 + d.delta(v), 2);
        }
        let mut rng = rng::stream(0, 0);
        let r = gd_from(&inst, Assignment::all_false(15), GdOptions { radius: 1, max_steps: 10_000 }, &mut rng).unwrap();
        assert_eq!((r.final_energy, r.accepted), (1, 0));
        assert!(r.stable);
    }

    #[test]
    fn satisfied_start_takes_no_steps() {
        let inst = gen_xorsat(50, 0.5, XorMode::FixedM, 1).unwrap();
        // build an assignment and rewrite parities so it satisfies everything
        let mut rng = rng::stream(1, 0);
        let a = Assignment::random(50, &mut rng);
        let eqs = inst
            .equations()
            .iter()
            .map(|e| crate::instances::XorEquation::new(e.vars, e.vars.iter().filter(|&&v| a.get(v as usize)).count() % 2 == 1))
            .collect();
        let sat = XorSatInstance::new(50, eqs, *inst.tag()).unwrap();
        let r = gd_from(&sat, a, GdOptions { radius: 1, max_steps: 100 }, &mut rng).unwrap();
        assert_eq!((r.steps, r.final_energy), (0, 0));
    }

    #[test]
    fn energy_is_non_increasing_and_bounded_by_islands() {
        for radius in 1..=3 {
            let inst = gen_xorsat(2000, 0.5, XorMode::FixedM, radius as u64).unwrap();
            let (inst, first) = plant_island(&inst);
            let mut rng = rng::stream(7, radius as u64);
            let mut a = Assignment::random(inst.n_vars(), &mut rng);
            for v in first..first + 15 {
                a.set(v, false);
            }
            let blocked = blocked_island_scan(&inst, Some(&a)).blocked_count();
            assert!(blocked >= 1);
            let r = gd_from(&inst, a, GdOptions { radius, max_steps: 200_000 }, &mut rng).unwrap();
            assert!(r.trace.windows(2).all(|w| w[1].1 <= w[0].1));
            assert_eq!(r.final_energy, inst.count_unsatisfied(&r.assignment));
            if radius == 1 {
                assert!(r.final_energy >= blocked);
                assert!(blocked_island_scan(&inst, Some(&r.assignment)).blocked_count() >= blocked);
            }
        }
    }

    #[test]
    fn radius_is_checked() {
        let inst = gen_xorsat(10, 0.5, XorMode::FixedM, 1).unwrap();
        assert!(gd_run(&inst, GdOptions { radius: 4, max_steps: 1 }, 0).is_err());
    }
}
