//! The image `B` of `O(K)` in `A = O(D(K))` and the ratio `|A| / |B|`.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::discform::{discriminant_form, FiniteQuadraticForm};
use crate::error::{Error, Result};
use crate::isom::budget::Budget;
use crate::isom::lattice_aut::{lattice_aut_group, LatticeIsometry};
use crate::isom::schreier;
use crate::isom::torsion::{torsion_orthogonal_group, ElementTable, TorsionFormAutomorphism};
use crate::lattice::GramLattice;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityReport {
    pub order_a: BigUint,
    pub order_b: BigUint,
    pub ratio: BigUint,
    pub surjective: bool,
}

impl MultiplicityReport {
    pub fn to_json(&self) -> Value {
        json!({
            "order_A": self.order_a.to_string(),
            "order_B": self.order_b.to_string(),
            "ratio": self.ratio.to_string(),
            "surjective": self.surjective,
            "budget_exceeded": false,
        })
    }

    pub fn budget_exceeded_json() -> Value {
        json!({
            "order_A": null,
            "order_B": null,
            "ratio": null,
            "surjective": null,
            "budget_exceeded": true,
        })
    }

    fn from_json(v: &Value) -> Option<Self> {
        let num = |k: &str| v.get(k)?.as_str()?.parse::<BigUint>().ok();
        Some(MultiplicityReport {
            order_a: num("order_A")?,
            order_b: num("order_B")?,
            ratio: num("ratio")?,
            surjective: v.get("surjective")?.as_bool()?,
        })
    }
}

/// Action of a lattice isometry on the discriminant group.
pub fn induced_automorphism(f: &FiniteQuadraticForm, u: &LatticeIsometry) -> Result<TorsionFormAutomorphism> {
    let action = f
        .group
        .generator_lift
        .iter()
        .map(|lift| {
            let image: Vec<BigRational> = u
                .matrix
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(lift)
                        .filter(|(a, _)| **a != 0)
                        .fold(BigRational::zero(), |acc, (a, x)| acc + BigRational::from_integer((*a).into()) * x)
                })
                .collect();
            f.dual_coords(&image)
        })
        .collect::<Result<Vec<_>>>()?;
    let t = TorsionFormAutomorphism { action };
    let k = f.len();
    for i in 0..k {
        if f.q_num(&t.action[i]) != f.q_generator_num(i) {
            return Err(Error::internal("induced map does not preserve q"));
        }
        for j in 0..k {
            if f.b_num(&t.action[i], &t.action[j]) != f.b_generator_num(i, j) {
                return Err(Error::internal("induced map does not preserve b"));
            }
        }
    }
    Ok(t)
}

/// `|B|`, the order of the subgroup of `O(D(k))` generated by the images of `gens`.
pub fn discriminant_image(k: &GramLattice, gens: &[LatticeIsometry], budget: &Budget) -> Result<BigUint> {
    let f = discriminant_form(k)?;
    image_order(&f, gens, budget)
}

fn image_order(f: &FiniteQuadraticForm, gens: &[LatticeIsometry], budget: &Budget) -> Result<BigUint> {
    if f.order() == 1 {
        return Ok(BigUint::one());
    }
    let table = ElementTable::new(f);
    let mut perms = Vec::new();
    for u in gens {
        let t = induced_automorphism(f, u)?;
        if t.is_identity() {
            continue;
        }
        let images: Vec<u32> = t.action.iter().map(|c| table.index(c)).collect();
        perms.push(table.coords.iter().map(|c| table.image(&images, c)).collect());
    }
    let base: Vec<u32> = (0..f.len())
        .map(|j| {
            let mut e = vec![0; f.len()];
            e[j] = 1;
            table.index(&e)
        })
        .collect();
    schreier::group_order(f.order() as usize, &perms, &base, &mut budget.start())
}

fn cache() -> &'static Mutex<HashMap<GramLattice, MultiplicityReport>> {
    static CACHE: OnceLock<Mutex<HashMap<GramLattice, MultiplicityReport>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn disk_path(k: &GramLattice) -> Option<PathBuf> {
    let dir = std::env::var_os("K3LAT_CACHE_DIR")?;
    let digest = Sha256::digest(k.to_json().to_string().as_bytes());
    let name: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    Some(PathBuf::from(dir).join(format!("mult-{name}.json")))
}

/// `|A|`, `|B|` and their ratio for a negative definite even lattice.
pub fn multiplicity(k: &GramLattice, budget: &Budget) -> Result<MultiplicityReport> {
    if k.rank() > 0 && !k.is_negative_definite() {
        return Err(Error::input("multiplicity requires a negative definite lattice"));
    }
    if !k.is_even() {
        return Err(Error::input("multiplicity requires an even lattice"));
    }
    if let Some(r) = cache().lock().expect("cache lock").get(k) {
        return Ok(r.clone());
    }
    let path = disk_path(k);
    if let Some(r) = path
        .as_ref()
        .and_then(|p| std::fs::read_to_string(p).ok())
        .and_then(|s| serde_json::from_str::<Value>(&s).ok())
        .and_then(|v| MultiplicityReport::from_json(&v))
    {
        cache().lock().expect("cache lock").insert(k.clone(), r.clone());
        return Ok(r);
    }
    let f = discriminant_form(k)?;
    let report = if f.order() == 1 {
        MultiplicityReport {
            order_a: BigUint::one(),
            order_b: BigUint::one(),
            ratio: BigUint::one(),
            surjective: true,
        }
    } else {
        let (_, order_a) = torsion_orthogonal_group(&f, budget)?;
        let (gens, _) = lattice_aut_group(k, budget)?;
        let order_b = image_order(&f, &gens, budget)?;
        let (ratio, rem) = order_a.div_rem(&order_b);
        if !rem.is_zero() {
            return Err(Error::internal("|B| does not divide |A|"));
        }
        MultiplicityReport {
            surjective: ratio.is_one(),
            order_a,
            order_b,
            ratio,
        }
    };
    cache().lock().expect("cache lock").insert(k.clone(), report.clone());
    if let Some(p) = path {
        // The disk cache is best effort.
        let _ = std::fs::write(p, report.to_json().to_string());
    }
    Ok(report)
}

pub fn is_surjective_on_discriminant(k: &GramLattice, budget: &Budget) -> Result<bool> {
    Ok(multiplicity(k, budget)?.surjective)
}

/// Number of `g` in `GL(l, F_2)` with `g g^T = I`.
pub fn bilinear_orthogonal_order_f2(l: usize) -> Result<BigUint> {
    if l == 0 || l > 6 {
        return Err(Error::Budget(format!("length {l} is outside 1..=6")));
    }
    // Rows of such a g are pairwise orthogonal vectors of odd weight.
    fn count(rows: &mut Vec<u32>, l: usize) -> u64 {
        if rows.len() == l {
            return 1;
        }
        let mut total = 0;
        for v in 0u32..1 << l {
            if v.count_ones() % 2 == 1 && rows.iter().all(|r| (r & v).count_ones() % 2 == 0) {
                rows.push(v);
                total += count(rows, l);
                rows.pop();
            }
        }
        total
    }
    Ok(BigUint::from(count(&mut Vec::new(), l)))
}
