//! Isometry groups of definite lattices by backtracking over images of a
//! basis (Plesken–Souvignier style), pruned by inner products and a
//! fingerprint against the shortest vectors.

use std::collections::HashMap;

use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::isom::backtrack::{self, SearchSpace};
use crate::isom::budget::Budget;
use crate::lattice::GramLattice;
use crate::roots::shortvec;

/// `matrix[i][j]` is coordinate `i` of the image of basis vector `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeIsometry {
    pub matrix: Vec<Vec<i64>>,
}

impl LatticeIsometry {
    pub fn identity(n: usize) -> Self {
        LatticeIsometry {
            matrix: (0..n)
                .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
                .collect(),
        }
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Checks `U^T G U = G`.
    pub fn preserves(&self, gram: &[Vec<i64>]) -> bool {
        let n = gram.len();
        let gu: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| gram[i][k] * self.matrix[k][j]).sum()).collect())
            .collect();
        (0..n).all(|i| {
            (0..n).all(|j| (0..n).map(|k| self.matrix[k][i] * gu[k][j]).sum::<i64>() == gram[i][j])
        })
    }

    pub fn to_json(&self) -> Value {
        json!(self.matrix)
    }
}

/// Above this many shortest vectors the component sizes are not computed.
const MAX_COMPONENT_SCAN: usize = 6000;

pub(crate) struct LatticeSearch {
    n: usize,
    gram: Vec<Vec<i64>>,
    vectors: Vec<Vec<i64>>,
    gv: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, u32>,
    /// Basis index handled at each level.
    order: Vec<usize>,
    pools: Vec<Vec<u32>>,
}

impl LatticeSearch {
    pub fn new(l: &GramLattice) -> Result<Self> {
        let (g, _) = shortvec::positive_gram(l)?;
        let n = g.len();
        let gram: Vec<Vec<i64>> = g
            .iter()
            .map(|r| r.iter().map(|x| i64::try_from(x).map_err(|_| Error::input("Gram entries too large"))).collect())
            .collect::<Result<_>>()?;
        let diag: Vec<u64> = (0..n).map(|i| gram[i][i] as u64).collect();
        let max_norm = diag.iter().copied().max().unwrap_or(0);
        let listed = shortvec::vectors_up_to(l, max_norm)?;
        let mut vectors = Vec::new();
        let mut norms = Vec::new();
        for (v, nv) in listed {
            if diag.contains(&nv) {
                let neg: Vec<i64> = v.iter().map(|x| -x).collect();
                vectors.push(v);
                vectors.push(neg);
                norms.push(nv);
                norms.push(nv);
            }
        }
        if vectors.len() > u32::MAX as usize / 2 {
            return Err(Error::Budget("too many short vectors".into()));
        }
        let gv: Vec<Vec<i64>> = vectors
            .iter()
            .map(|v| (0..n).map(|i| (0..n).map(|j| gram[i][j] * v[j]).sum()).collect())
            .collect();
        let index: HashMap<Vec<i64>, u32> = vectors
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i as u32))
            .collect();

        // Fingerprint against the class of the smallest norm.
        let min_norm = norms.iter().copied().min().unwrap_or(0);
        let reference: Vec<usize> = (0..vectors.len()).filter(|&i| norms[i] == min_norm).collect();
        let fingerprint = |w: &[i64], level_basis: usize| -> Vec<usize> {
            let mut fp = vec![0usize; n];
            for &y in &reference {
                let dot: i64 = gv[y].iter().zip(w).map(|(a, b)| a * b).sum();
                for (j, slot) in fp.iter_mut().enumerate() {
                    if diag[j] == min_norm && dot == gram[level_basis][j] {
                        *slot += 1;
                    }
                }
            }
            fp
        };
        // Size of the component of each shortest vector in the graph joining
        // vectors with nonzero inner product; separates irreducible root
        // systems the counts above cannot (D10 and E7, say).
        let component_size = if reference.len() <= MAX_COMPONENT_SCAN {
            let mut parent: Vec<usize> = (0..reference.len()).collect();
            fn find(p: &mut [usize], mut x: usize) -> usize {
                while p[x] != x {
                    p[x] = p[p[x]];
                    x = p[x];
                }
                x
            }
            for a in 0..reference.len() {
                for b in a + 1..reference.len() {
                    let dot: i64 = gv[reference[a]].iter().zip(&vectors[reference[b]]).map(|(x, y)| x * y).sum();
                    if dot != 0 {
                        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                        parent[ra] = rb;
                    }
                }
            }
            let roots: Vec<usize> = (0..reference.len()).map(|a| find(&mut parent, a)).collect();
            let mut sizes: HashMap<usize, usize> = HashMap::new();
            for &r in &roots {
                *sizes.entry(r).or_default() += 1;
            }
            let mut by_vector = vec![0usize; vectors.len()];
            for (a, &r) in roots.iter().enumerate() {
                by_vector[reference[a]] = sizes[&r];
            }
            by_vector
        } else {
            vec![0; vectors.len()]
        };
        let mut pools = Vec::with_capacity(n);
        for b in 0..n {
            let mut e = vec![0i64; n];
            e[b] = 1;
            let target = fingerprint(&e, b);
            let base = index[&e] as usize;
            let pool: Vec<u32> = (0..vectors.len())
                .filter(|&i| norms[i] == diag[b] && component_size[i] == component_size[base])
                .filter(|&i| fingerprint(&vectors[i], b) == target)
                .map(|i| i as u32)
                .collect();
            pools.push(pool);
        }

        // Start from the most constrained basis vector, then follow the Gram
        // graph. Longer vectors (glue) go as early as they are linked, since
        // they cut off root maps that do not extend to the overlattice.
        let mut order: Vec<usize> = Vec::with_capacity(n);
        let mut left: Vec<usize> = (0..n).collect();
        while !left.is_empty() {
            let pick = *left
                .iter()
                .min_by_key(|&&b| {
                    let links = order.iter().filter(|&&c| gram[b][c] != 0).count();
                    let glue_next = !order.is_empty() && links > 0 && diag[b] > min_norm;
                    (!glue_next, std::cmp::Reverse(links), pools[b].len(), b)
                })
                .expect("nonempty");
            order.push(pick);
            left.retain(|&b| b != pick);
        }
        let pools = order.iter().map(|&b| pools[b].clone()).collect();
        Ok(LatticeSearch {
            n,
            gram,
            vectors,
            gv,
            index,
            order,
            pools,
        })
    }

    pub fn to_isometry(&self, images: &[u32]) -> LatticeIsometry {
        let mut m = vec![vec![0i64; self.n]; self.n];
        for (level, &img) in images.iter().enumerate() {
            let col = self.order[level];
            for i in 0..self.n {
                m[i][col] = self.vectors[img as usize][i];
            }
        }
        LatticeIsometry { matrix: m }
    }
}

impl SearchSpace for LatticeSearch {
    fn levels(&self) -> usize {
        self.n
    }

    fn base_point(&self, level: usize) -> u32 {
        let mut e = vec![0i64; self.n];
        e[self.order[level]] = 1;
        self.index[&e]
    }

    fn candidates(&self, level: usize, prefix: &[u32]) -> Vec<u32> {
        let b = self.order[level];
        self.pools[level]
            .iter()
            .copied()
            .filter(|&w| {
                let gw = &self.gv[w as usize];
                prefix.iter().enumerate().all(|(m, &y)| {
                    let dot: i64 = gw.iter().zip(&self.vectors[y as usize]).map(|(a, c)| a * c).sum();
                    dot == self.gram[self.order[m]][b]
                })
            })
            .collect()
    }

    fn apply(&self, images: &[u32], point: u32) -> u32 {
        let v = &self.vectors[point as usize];
        let mut out = vec![0i64; self.n];
        for (level, &img) in images.iter().enumerate() {
            let c = v[self.order[level]];
            if c == 0 {
                continue;
            }
            for (o, x) in out.iter_mut().zip(&self.vectors[img as usize]) {
                *o += c * x;
            }
        }
        self.index[&out]
    }
}

/// Generators and order of `O(l)` for a definite lattice.
pub fn lattice_aut_group(l: &GramLattice, budget: &Budget) -> Result<(Vec<LatticeIsometry>, BigUint)> {
    if l.rank() == 0 {
        return Ok((Vec::new(), BigUint::from(1u32)));
    }
    if !l.is_definite() {
        return Err(Error::input("automorphism groups are computed for definite lattices only"));
    }
    let space = LatticeSearch::new(l)?;
    let mut meter = budget.start();
    let chain = backtrack::stabilizer_chain(&space, &mut meter)?;
    let gi = l.gram_i64().expect("checked above");
    let mut gens: Vec<LatticeIsometry> = chain.generators.iter().map(|g| space.to_isometry(g)).collect();
    for g in &gens {
        if !g.preserves(&gi) {
            return Err(Error::internal("emitted map is not an isometry"));
        }
    }
    gens.sort();
    Ok((gens, chain.order()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_lattice_expr;

    fn order(expr: &str) -> u64 {
        let (_, o) = lattice_aut_group(&parse_lattice_expr(expr).unwrap(), &Budget::unlimited()).unwrap();
        o.try_into().unwrap()
    }

    #[test]
    fn known_orders() {
        assert_eq!(order("A1(-1)"), 2);
        assert_eq!(order("A1(-1)^2"), 8);
        assert_eq!(order("A2(-1)"), 12);
        assert_eq!(order("D4(-1)"), 1152);
        assert_eq!(order("A1(-1)^6"), 64 * 720);
        assert_eq!(order("E6(-1)"), 2 * 51840);
        assert_eq!(order("E7(-1)"), 2903040);
        assert_eq!(order("E8(-1)"), 696729600);
    }

    #[test]
    fn indefinite_rejected() {
        let h = parse_lattice_expr("H").unwrap();
        assert!(matches!(lattice_aut_group(&h, &Budget::unlimited()), Err(Error::Input(_))));
    }

    #[test]
    fn generators_are_isometries() {
        let l = parse_lattice_expr("D4(-1) + A2(-1)").unwrap();
        let (gens, o) = lattice_aut_group(&l, &Budget::unlimited()).unwrap();
        let g = l.gram_i64().unwrap();
        assert!(gens.iter().all(|u| u.preserves(&g)));
        assert_eq!(o, BigUint::from(1152u32 * 12));
    }
}
