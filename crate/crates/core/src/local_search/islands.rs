//! Blocked islands of 3-XORSAT: seven equations on fifteen variables that
//! trap single-flip descent with one violated equation.
//!
//! An island has a central equation whose three variables each appear in
//! exactly two more (peripheral) equations; the two other variables of every
//! peripheral equation appear nowhere else, and all fifteen variables are
//! distinct. It is blocked when the central equation is violated and the six
//! peripheral ones are satisfied.

use alloc::vec::Vec;

use crate::instances::{Assignment, XorEquation, XorMode, XorSatInstance, XorTag};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Island {
    /// Index of the central equation.
    pub central: u32,
    /// Peripheral equations, two per central variable in variable order.
    pub peripheral: [u32; 6],
    /// All fifteen variables, sorted.
    pub vertices: [u32; 15],
}

impl Island {
    /// Central violated and every peripheral equation satisfied.
    pub fn is_blocked(&self, instance: &XorSatInstance, a: &Assignment) -> bool {
        let eq = instance.equations();
        !eq[self.central as usize].is_satisfied(a) && self.peripheral.iter().all(|&p| eq[p as usize].is_satisfied(a))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IslandReport {
    /// Islands ordered by central equation index.
    pub islands: Vec<Island>,
    /// Per island, blocked under the supplied assignment; empty without one.
    pub blocked: Vec<bool>,
    pub n_vars: usize,
}

impl IslandReport {
    pub fn count(&self) -> usize {
        self.islands.len()
    }

    pub fn blocked_count(&self) -> usize {
        self.blocked.iter().filter(|&&b| b).count()
    }

    /// Islands per variable.
    pub fn density(&self) -> f64 {
        self.islands.len() as f64 / self.n_vars.max(1) as f64
    }

    pub fn blocked_density(&self) -> f64 {
        self.blocked_count() as f64 / self.n_vars.max(1) as f64
    }
}

/// Finds every island; with an assignment, also flags the blocked ones.
pub fn blocked_island_scan(instance: &XorSatInstance, assignment: Option<&Assignment>) -> IslandReport {
    let occ = instance.occurrences();
    let eqs = instance.equations();
    let mut islands = Vec::new();
    'eq: for (ci, e) in eqs.iter().enumerate() {
        if e.vars.iter().any(|&v| occ[v as usize].len() != 3) {
            continue;
        }
        let mut peripheral = [0u32; 6];
        let mut vertices = [0u32; 15];
        vertices[..3].copy_from_slice(&e.vars);
        let mut nv = 3;
        for (j, &v) in e.vars.iter().enumerate() {
            let others: Vec<u32> = occ[v as usize].iter().copied().filter(|&f| f as usize != ci).collect();
            // a repeated central equation shows up here as a second copy
            if others.len() != 2 {
                continue 'eq;
            }
            for (s, &f) in others.iter().enumerate() {
                peripheral[2 * j + s] = f;
                for &u in &eqs[f as usize].vars {
                    if u == v {
                        continue;
                    }
                    if occ[u as usize].len() != 1 {
                        continue 'eq;
                    }
                    vertices[nv] = u;
                    nv += 1;
                }
            }
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        islands.push(Island { central: ci as u32, peripheral, vertices });
    }
    let blocked = match assignment {
        Some(a) => islands.iter().map(|i| i.is_blocked(instance, a)).collect(),
        None => Vec::new(),
    };
    IslandReport { islands, blocked, n_vars: instance.n_vars() }
}

/// Equations of one island on variables `base..base + 15`, with parities
/// chosen so that the all-zero assignment blocks it.
pub fn island_equations(base: u32) -> Vec<XorEquation> {
    let mut eqs = alloc::vec![XorEquation::new([base, base + 1, base + 2], true)];
    let mut next = base + 3;
    for c in 0..3 {
        for _ in 0..2 {
            eqs.push(XorEquation::new([base + c, next, next + 1], false));
            next += 2;
        }
    }
    eqs
}

/// A copy of `base` with one island appended on fifteen new variables.
/// Returns the instance and the index of the first island variable; setting
/// those fifteen variables to zero blocks the island.
pub fn plant_island(base: &XorSatInstance) -> (XorSatInstance, usize) {
    let first = base.n_vars();
    let mut eqs = base.equations().to_vec();
    eqs.extend(island_equations(first as u32));
    let tag = XorTag { mode: XorMode::FixedM, alpha: eqs.len() as f64 / (first + 15) as f64, seed: base.tag().seed };
    let inst = XorSatInstance::new(first + 15, eqs, tag).expect("island equations are well formed");
    (inst, first)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_xorsat, XorMode};
    use crate::oracle::islands_by_components;

    fn empty(n: usize) -> XorSatInstance {
        XorSatInstance::new(n, Vec::new(), XorTag { mode: XorMode::FixedM, alpha: 0.0, seed: None }).unwrap()
    }

    #[test]
    fn planted_island_is_found_and_blocked() {
        let (inst, first) = plant_island(&empty(0));
        assert_eq!(first, 0);
        let a = Assignment::all_false(15);
        let r = blocked_island_scan(&inst, Some(&a));
        assert_eq!(r.count(), 1);
        assert_eq!(r.blocked, [true]);
        assert_eq!(r.islands[0].vertices, core::array::from_fn::<u32, 15, _>(|i| i as u32));
        let mut b = a.clone();
        b.flip(3);
        assert_eq!(blocked_island_scan(&inst, Some(&b)).blocked, [false]);
    }

    #[test]
    fn extra_equation_on_central_vertex_breaks_island() {
        let (inst, _) = plant_island(&empty(3));
        let mut eqs = inst.equations().to_vec();
        eqs.push(XorEquation::new([3, 0, 1], false));
        let bad = XorSatInstance::new(18, eqs, *inst.tag()).unwrap();
        assert_eq!(blocked_island_scan(&bad, None).count(), 0);
    }

    #[test]
    fn matches_component_oracle() {
        let mut found = 0;
        for seed in 0..300u64 {
            let inst = gen_xorsat(30, 0.2 + (seed % 5) as f64 * 0.04, XorMode::FixedM, seed).unwrap();
            let (with_island, _) = if seed % 3 == 0 { plant_island(&inst) } else { (inst.clone(), 0) };
            for i in [&inst, &with_island] {
                let got: Vec<u32> = blocked_island_scan(i, None).islands.iter().map(|x| x.central).collect();
                assert_eq!(got, islands_by_components(i));
                found += got.len();
            }
        }
        assert!(found > 0);
    }
}
