//! Deterministic Schreier–Sims for permutation groups on `0..n`.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::Result;
use crate::isom::budget::Meter;

pub type Perm = Vec<u32>;

fn identity(n: usize) -> Perm {
    (0..n as u32).collect()
}

fn is_identity(p: &Perm) -> bool {
    p.iter().enumerate().all(|(i, &x)| i as u32 == x)
}

/// `a` followed by `b`.
fn then(a: &Perm, b: &Perm) -> Perm {
    a.iter().map(|&x| b[x as usize]).collect()
}

fn inverse(p: &Perm) -> Perm {
    let mut inv = vec![0u32; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x as usize] = i as u32;
    }
    inv
}

struct Level {
    point: u32,
    /// Transversal: orbit point -> element carrying `point` to it.
    transversal: HashMap<u32, Perm>,
    orbit: Vec<u32>,
}

struct Chain {
    n: usize,
    strong: Vec<Perm>,
    levels: Vec<Level>,
}

impl Chain {
    fn gens_at(&self, i: usize) -> Vec<&Perm> {
        let fixed: Vec<u32> = self.levels[..i].iter().map(|l| l.point).collect();
        self.strong
            .iter()
            .filter(|g| fixed.iter().all(|&b| g[b as usize] == b))
            .collect()
    }

    fn rebuild(&mut self, i: usize) {
        let gens: Vec<Perm> = self.gens_at(i).into_iter().cloned().collect();
        let level = &mut self.levels[i];
        level.transversal.clear();
        level.transversal.insert(level.point, identity(self.n));
        level.orbit = vec![level.point];
        let mut k = 0;
        while k < level.orbit.len() {
            let p = level.orbit[k];
            let u = level.transversal[&p].clone();
            for g in &gens {
                let q = g[p as usize];
                if !level.transversal.contains_key(&q) {
                    level.transversal.insert(q, then(&u, g));
                    level.orbit.push(q);
                }
            }
            k += 1;
        }
    }

    /// Sifts `h` from level `i`; returns the residue and the level where it stopped.
    fn strip(&self, mut h: Perm, i: usize) -> (Perm, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(i) {
            let x = h[level.point as usize];
            match level.transversal.get(&x) {
                Some(u) => h = then(&h, &inverse(u)),
                None => return (h, l),
            }
        }
        let depth = self.levels.len();
        (h, depth)
    }

    fn add_level(&mut self, g: &Perm, hint: &[u32]) {
        let point = hint
            .iter()
            .copied()
            .find(|&b| g[b as usize] != b && self.levels.iter().all(|l| l.point != b))
            .or_else(|| (0..self.n as u32).find(|&b| g[b as usize] != b))
            .expect("nontrivial permutation moves a point");
        self.levels.push(Level {
            point,
            transversal: HashMap::new(),
            orbit: Vec::new(),
        });
    }
}

/// Order of the group generated by `gens` acting on `0..n`. `base_hint`
/// lists preferred base points (for instance, generators of a group whose
/// action is determined by them).
pub fn group_order(n: usize, gens: &[Perm], base_hint: &[u32], meter: &mut Meter) -> Result<BigUint> {
    let mut chain = Chain {
        n,
        strong: Vec::new(),
        levels: Vec::new(),
    };
    for g in gens {
        if is_identity(g) {
            continue;
        }
        if chain.levels.iter().all(|l| g[l.point as usize] == l.point) {
            chain.add_level(g, base_hint);
        }
        chain.strong.push(g.clone());
    }
    for i in (0..chain.levels.len()).rev() {
        chain.rebuild(i);
    }
    let mut i = chain.levels.len();
    'outer: while i > 0 {
        let lvl = i - 1;
        let gens: Vec<Perm> = chain.gens_at(lvl).into_iter().cloned().collect();
        let orbit = chain.levels[lvl].orbit.clone();
        for &p in &orbit {
            let up = chain.levels[lvl].transversal[&p].clone();
            for s in &gens {
                meter.tick()?;
                let q = s[p as usize];
                let uq = &chain.levels[lvl].transversal[&q];
                let h = then(&then(&up, s), &inverse(uq));
                let (y, j) = chain.strip(h, lvl + 1);
                if !is_identity(&y) {
                    if j == chain.levels.len() {
                        chain.add_level(&y, base_hint);
                    }
                    chain.strong.push(y);
                    for l in (lvl + 1..=j).rev() {
                        chain.rebuild(l);
                    }
                    i = j + 1;
                    continue 'outer;
                }
            }
        }
        i -= 1;
    }
    Ok(chain
        .levels
        .iter()
        .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len())))
}
