//! Automorphisms of torsion quadratic forms and isometries between them.

use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::discform::FiniteQuadraticForm;
use crate::error::{Error, Result};
use crate::isom::backtrack::{self, SearchSpace};
use crate::isom::budget::Budget;

/// Row `j` holds the coordinates of the image of generator `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionFormAutomorphism {
    pub action: Vec<Vec<u64>>,
}

impl TorsionFormAutomorphism {
    pub fn identity(f: &FiniteQuadraticForm) -> Self {
        let k = f.len();
        TorsionFormAutomorphism {
            action: (0..k)
                .map(|i| (0..k).map(|j| u64::from(i == j)).collect())
                .collect(),
        }
    }

    pub fn apply(&self, f: &FiniteQuadraticForm, x: &[u64]) -> Vec<u64> {
        let d = f.invariant_factors();
        let mut out = vec![0u64; d.len()];
        for (xj, row) in x.iter().zip(&self.action) {
            for i in 0..d.len() {
                out[i] = (out[i] + xj * row[i]) % d[i];
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.action
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, &v)| v == u64::from(i == j)))
    }

    /// Exhaustive check that the map is a bijective isometry of `f`.
    pub fn preserves(&self, f: &FiniteQuadraticForm) -> bool {
        let n = f.order();
        let mut seen = vec![false; n as usize];
        let images: Vec<Vec<u64>> = (0..n).map(|i| self.apply(f, &f.group.coords(i))).collect();
        for (i, img) in images.iter().enumerate() {
            let idx = f.group.index(img) as usize;
            if seen[idx] || f.q_num(img) != f.q_num(&f.group.coords(i as u64)) {
                return false;
            }
            seen[idx] = true;
        }
        if n <= 1 << 10 {
            for x in 0..n {
                for y in x..n {
                    let (cx, cy) = (f.group.coords(x), f.group.coords(y));
                    if f.b_num(&images[x as usize], &images[y as usize]) != f.b_num(&cx, &cy) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn to_json(&self) -> Value {
        json!(self.action)
    }
}

/// Element table of a form, used as the target of a generator-image search.
pub(crate) struct ElementTable<'a> {
    pub form: &'a FiniteQuadraticForm,
    pub coords: Vec<Vec<u64>>,
    order_of: Vec<u64>,
    q: Vec<u64>,
    b_nondegenerate: bool,
}

impl<'a> ElementTable<'a> {
    pub fn new(form: &'a FiniteQuadraticForm) -> Self {
        let n = form.order();
        let d = form.invariant_factors();
        let coords: Vec<Vec<u64>> = (0..n).map(|i| form.group.coords(i)).collect();
        let order_of = coords
            .iter()
            .map(|c| {
                c.iter()
                    .zip(d)
                    .map(|(&ci, &di)| di / num_integer::gcd(ci, di))
                    .fold(1, num_integer::lcm)
            })
            .collect();
        let q = coords.iter().map(|c| form.q_num(c)).collect();
        let k = form.len();
        let b_nondegenerate = coords.iter().skip(1).all(|c| {
            (0..k).any(|j| {
                let mut e = vec![0; k];
                e[j] = 1;
                form.b_num(c, &e) != 0
            })
        });
        ElementTable {
            form,
            coords,
            order_of,
            q,
            b_nondegenerate,
        }
    }

    pub fn index(&self, coords: &[u64]) -> u32 {
        self.form.group.index(coords) as u32
    }

    /// Image of element `x` under the map sending generator `j` to element `images[j]`.
    pub fn image(&self, images: &[u32], x: &[u64]) -> u32 {
        let d = self.form.invariant_factors();
        let mut out = vec![0u64; d.len()];
        for (xj, &img) in x.iter().zip(images) {
            if *xj == 0 {
                continue;
            }
            let c = &self.coords[img as usize];
            for i in 0..d.len() {
                out[i] = (out[i] + xj * c[i]) % d[i];
            }
        }
        self.index(&out)
    }

    fn bijective(&self, images: &[u32]) -> bool {
        let mut seen = vec![false; self.coords.len()];
        for c in &self.coords {
            let i = self.image(images, c) as usize;
            if seen[i] {
                return false;
            }
            seen[i] = true;
        }
        true
    }
}

/// Maps generators of `src` into elements of `dst`.
struct FormSearch<'a> {
    src: &'a FiniteQuadraticForm,
    dst: ElementTable<'a>,
    buckets: Vec<Vec<u32>>,
}

impl<'a> FormSearch<'a> {
    fn new(src: &'a FiniteQuadraticForm, dst: &'a FiniteQuadraticForm) -> Self {
        let dst = ElementTable::new(dst);
        let buckets = (0..src.len())
            .map(|j| {
                let d = src.invariant_factors()[j];
                let q = src.q_generator_num(j);
                (0..dst.coords.len() as u32)
                    .filter(|&x| dst.order_of[x as usize] == d && dst.q[x as usize] == q)
                    .collect()
            })
            .collect();
        FormSearch { src, dst, buckets }
    }
}

impl SearchSpace for FormSearch<'_> {
    fn levels(&self) -> usize {
        self.src.len()
    }

    fn base_point(&self, level: usize) -> u32 {
        let mut e = vec![0; self.src.len()];
        e[level] = 1;
        self.dst.index(&e)
    }

    fn candidates(&self, level: usize, prefix: &[u32]) -> Vec<u32> {
        let f = self.dst.form;
        let k = f.len();
        // pairing of each earlier image against the generators of dst
        let rows: Vec<Vec<u64>> = prefix
            .iter()
            .map(|&y| {
                let cy = &self.dst.coords[y as usize];
                (0..k)
                    .map(|i| {
                        let mut e = vec![0; k];
                        e[i] = 1;
                        f.b_num(&e, cy)
                    })
                    .collect()
            })
            .collect();
        let e = f.exponent();
        self.buckets[level]
            .iter()
            .copied()
            .filter(|&x| {
                let cx = &self.dst.coords[x as usize];
                rows.iter().enumerate().all(|(m, row)| {
                    let v = cx.iter().zip(row).map(|(a, b)| a * b).sum::<u64>() % e;
                    v == self.src.b_generator_num(m, level)
                })
            })
            .collect()
    }

    fn accept(&self, images: &[u32]) -> bool {
        self.dst.b_nondegenerate || self.dst.bijective(images)
    }

    fn apply(&self, images: &[u32], point: u32) -> u32 {
        self.dst.image(images, &self.dst.coords[point as usize])
    }
}

fn check_size(f: &FiniteQuadraticForm) -> Result<()> {
    if f.order() > crate::discform::MAX_INDEXED_ORDER {
        return Err(Error::Budget(format!("torsion group of order {} is too large", f.order())));
    }
    Ok(())
}

/// Generators and order of the orthogonal group of a torsion form.
pub fn torsion_orthogonal_group(
    f: &FiniteQuadraticForm,
    budget: &Budget,
) -> Result<(Vec<TorsionFormAutomorphism>, BigUint)> {
    check_size(f)?;
    let space = FormSearch::new(f, f);
    let mut meter = budget.start();
    let chain = backtrack::stabilizer_chain(&space, &mut meter)?;
    let order = chain.order();
    let gens = chain
        .generators
        .iter()
        .map(|imgs| TorsionFormAutomorphism {
            action: imgs.iter().map(|&i| space.dst.coords[i as usize].clone()).collect(),
        })
        .collect();
    Ok((gens, order))
}

pub fn forms_isometric(f1: &FiniteQuadraticForm, f2: &FiniteQuadraticForm, budget: &Budget) -> Result<bool> {
    if f1.invariant_factors() != f2.invariant_factors() || f1.exponent() != f2.exponent() {
        return Ok(false);
    }
    check_size(f1)?;
    let space = FormSearch::new(f1, f2);
    let mut meter = budget.start();
    backtrack::extend(&space, &mut Vec::new(), &mut meter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discform::discriminant_form;
    use crate::parse::parse_lattice_expr;
    use num_rational::BigRational;

    fn form(expr: &str) -> FiniteQuadraticForm {
        discriminant_form(&parse_lattice_expr(expr).unwrap()).unwrap()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn order(f: &FiniteQuadraticForm) -> u64 {
        let (gens, o) = torsion_orthogonal_group(f, &Budget::unlimited()).unwrap();
        for g in &gens {
            assert!(g.preserves(f));
        }
        o.try_into().unwrap()
    }

    #[test]
    fn small_orders() {
        assert_eq!(order(&form("E8(-1)")), 1);
        assert_eq!(order(&form("A1(-1)")), 1);
        let f = FiniteQuadraticForm::from_values(
            vec![2, 2],
            vec![r(3, 2), r(3, 2)],
            vec![vec![r(1, 2), r(0, 1)], vec![r(0, 1), r(1, 2)]],
        )
        .unwrap();
        assert_eq!(order(&f), 2);
        assert_eq!(order(&form("A2(-1)")), 2);
        assert_eq!(order(&form("D4(-1)")), 6);
        assert_eq!(order(&form("A1(-1)^8")), 64 * 40320);
    }

    #[test]
    fn isometry_between_forms() {
        let b = Budget::unlimited();
        assert!(forms_isometric(&form("E7(-1) + A1(-1)^2"), &form("D8(-1) + A1(-1)"), &b).unwrap());
        assert!(!forms_isometric(&form("A1(-1)"), &form("A1"), &b).unwrap());
        assert!(!forms_isometric(&form("D4(-1)"), &form("A1(-1)^2"), &b).unwrap());
        let f = form("D6(-1) + A3(-1)");
        assert!(forms_isometric(&f, &f, &b).unwrap());
    }
}
