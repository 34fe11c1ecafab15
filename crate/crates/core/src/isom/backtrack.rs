//! Backtracking over images of a base, shared by lattice isometries and
//! torsion-form automorphisms.
//!
//! A group element is determined by the images of its base points. The
//! stabilizer chain is built from the last level upward: at level `i` the
//! generators found so far generate the pointwise stabilizer of the first
//! `i` base points, and any candidate outside the current orbit is either
//! joined to it by a new generator or proven unreachable.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigUint;
use num_traits::One;

use crate::error::Result;
use crate::isom::budget::Meter;

pub trait SearchSpace {
    fn levels(&self) -> usize;
    /// Image of level `level` under the identity.
    fn base_point(&self, level: usize) -> u32;
    /// Admissible images at `level`, given the images of earlier levels.
    fn candidates(&self, level: usize, prefix: &[u32]) -> Vec<u32>;
    /// Final check on a complete image tuple.
    fn accept(&self, _images: &[u32]) -> bool {
        true
    }
    /// Image of `point` under the element with base images `images`.
    fn apply(&self, images: &[u32], point: u32) -> u32;
}

/// Depth-first completion of `prefix` to a full image tuple.
pub fn extend<S: SearchSpace + ?Sized>(space: &S, prefix: &mut Vec<u32>, meter: &mut Meter) -> Result<bool> {
    meter.tick()?;
    let level = prefix.len();
    if level == space.levels() {
        return Ok(space.accept(prefix));
    }
    for c in space.candidates(level, prefix) {
        prefix.push(c);
        if extend(space, prefix, meter)? {
            return Ok(true);
        }
        prefix.pop();
    }
    Ok(false)
}

#[derive(Debug, Clone)]
pub struct Chain {
    pub generators: Vec<Vec<u32>>,
    pub orbit_sizes: Vec<usize>,
}

impl Chain {
    pub fn order(&self) -> BigUint {
        self.orbit_sizes
            .iter()
            .fold(BigUint::one(), |acc, &s| acc * BigUint::from(s))
    }
}

fn orbit<S: SearchSpace + ?Sized>(space: &S, gens: &[Vec<u32>], start: u32) -> HashSet<u32> {
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = space.apply(g, p);
            if seen.insert(q) {
                queue.push_back(q);
            }
        }
    }
    seen
}

pub fn stabilizer_chain<S: SearchSpace + ?Sized>(space: &S, meter: &mut Meter) -> Result<Chain> {
    let n = space.levels();
    let base: Vec<u32> = (0..n).map(|i| space.base_point(i)).collect();
    let mut gens: Vec<Vec<u32>> = Vec::new();
    let mut orbit_sizes = vec![1; n];
    for level in (0..n).rev() {
        let mut current = orbit(space, &gens, base[level]);
        let mut dead: HashSet<u32> = HashSet::new();
        let mut prefix: Vec<u32> = base[..level].to_vec();
        for w in space.candidates(level, &prefix) {
            if current.contains(&w) || dead.contains(&w) {
                continue;
            }
            prefix.push(w);
            if extend(space, &mut prefix, meter)? {
                gens.push(prefix.clone());
                current = orbit(space, &gens, base[level]);
            } else {
                dead.extend(orbit(space, &gens, w));
            }
            prefix.truncate(level);
        }
        orbit_sizes[level] = current.len();
    }
    Ok(Chain {
        generators: gens,
        orbit_sizes,
    })
}
