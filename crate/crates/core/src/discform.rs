//! Discriminant groups `L^v / L`, their torsion quadratic forms, and the
//! invariants `(rho, length, delta)` of 2-elementary lattices.
//!
//! Values are stored as numerators over the group exponent `E`: `q` lives in
//! `(1/E) Z / 2Z` and is kept as an integer in `[0, 2E)`; `b` lives in
//! `(1/E) Z / Z` and is kept in `[0, E)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::isom::budget::Budget;
use crate::lattice::GramLattice;
use crate::linalg;

/// Largest discriminant group we are willing to index element by element.
pub const MAX_INDEXED_ORDER: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    /// `d_1 | d_2 | ... | d_k`, each greater than one.
    pub invariant_factors: Vec<u64>,
    /// Lift of each generator to `L^v`, in rational coordinates over the basis of `L`.
    pub generator_lift: Vec<Vec<BigRational>>,
}

impl FiniteAbelianGroup {
    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.invariant_factors.last().copied().unwrap_or(1)
    }

    /// Coordinates of the element with the given mixed-radix index.
    pub fn coords(&self, mut index: u64) -> Vec<u64> {
        self.invariant_factors
            .iter()
            .map(|&d| {
                let c = index % d;
                index /= d;
                c
            })
            .collect()
    }

    pub fn index(&self, coords: &[u64]) -> u64 {
        let mut idx = 0;
        let mut stride = 1;
        for (c, &d) in coords.iter().zip(&self.invariant_factors) {
            idx += (c % d) * stride;
            stride *= d;
        }
        idx
    }
}

/// A torsion quadratic form `(D, q, b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteQuadraticForm {
    pub group: FiniteAbelianGroup,
    exponent: u64,
    q_num: Vec<u64>,
    b_num: Vec<Vec<u64>>,
    /// Integer matrix sending a dual vector (coordinates over the basis of L)
    /// to its coordinates over the generators, before reduction.
    dual_to_coords: Vec<Vec<BigInt>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct TwoElementaryTriple {
    pub rho: usize,
    pub length: usize,
    pub delta: u8,
}

impl std::fmt::Display for TwoElementaryTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.rho, self.length, self.delta)
    }
}

fn reduce_mod(x: &BigRational, modulus: i64) -> BigRational {
    let m = BigRational::from_integer(BigInt::from(modulus));
    let q = (x / &m).floor();
    x - q * m
}

impl FiniteQuadraticForm {
    /// Builds a form from explicit generator values. `q` entries are reduced
    /// mod 2 and `b` entries mod 1; consistency is validated.
    pub fn from_values(
        invariant_factors: Vec<u64>,
        q: Vec<BigRational>,
        b: Vec<Vec<BigRational>>,
    ) -> Result<Self> {
        let k = invariant_factors.len();
        if q.len() != k || b.len() != k || b.iter().any(|r| r.len() != k) {
            return Err(Error::input("form data does not match the number of generators"));
        }
        for w in invariant_factors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::input("invariant factors must divide each other"));
            }
        }
        if invariant_factors.iter().any(|&d| d < 2) {
            return Err(Error::input("invariant factors must exceed one"));
        }
        let exponent = invariant_factors.last().copied().unwrap_or(1);
        let e = BigRational::from_integer(BigInt::from(exponent));
        let to_num = |x: &BigRational, modulus: i64| -> Result<u64> {
            let r = reduce_mod(x, modulus) * &e;
            if !r.is_integer() {
                return Err(Error::input(format!("value {x} is not in (1/{exponent})Z")));
            }
            Ok(r.to_integer().to_u64().expect("reduced value"))
        };
        let q_num = q.iter().map(|x| to_num(x, 2)).collect::<Result<Vec<_>>>()?;
        let b_num = b
            .iter()
            .map(|row| row.iter().map(|x| to_num(x, 1)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let form = FiniteQuadraticForm {
            group: FiniteAbelianGroup {
                invariant_factors,
                generator_lift: Vec::new(),
            },
            exponent,
            q_num,
            b_num,
            dual_to_coords: Vec::new(),
        };
        form.validate()?;
        Ok(form)
    }

    fn validate(&self) -> Result<()> {
        let k = self.len();
        let e = self.exponent;
        for i in 0..k {
            let d = self.group.invariant_factors[i];
            if self.b_num[i][i] != self.q_num[i] % e {
                return Err(Error::input(format!("q and b disagree on generator {i}")));
            }
            for j in 0..k {
                if self.b_num[i][j] != self.b_num[j][i] {
                    return Err(Error::input("b is not symmetric"));
                }
                if (d * self.b_num[i][j]) % e != 0 {
                    return Err(Error::input(format!("generator {i} order does not annihilate b")));
                }
            }
            // q(d g) = d^2 q(g) must vanish mod 2.
            if (d as u128 * d as u128 * self.q_num[i] as u128) % (2 * e as u128) != 0 {
                return Err(Error::input(format!("generator {i} order does not annihilate q")));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.group.invariant_factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn order(&self) -> u64 {
        self.group.order()
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.group.invariant_factors
    }

    /// `q(x)` as a numerator over the exponent, in `[0, 2E)`.
    pub fn q_num(&self, coords: &[u64]) -> u64 {
        let e2 = 2 * self.exponent as u128;
        let mut acc: u128 = 0;
        for i in 0..coords.len() {
            let ci = coords[i] as u128;
            if ci == 0 {
                continue;
            }
            acc += ci * ci % e2 * self.q_num[i] as u128;
            for j in i + 1..coords.len() {
                acc += 2 * ci * coords[j] as u128 % e2 * self.b_num[i][j] as u128;
            }
            acc %= e2;
        }
        (acc % e2) as u64
    }

    /// `b(x, y)` as a numerator over the exponent, in `[0, E)`.
    pub fn b_num(&self, x: &[u64], y: &[u64]) -> u64 {
        let e = self.exponent as u128;
        let mut acc: u128 = 0;
        for i in 0..x.len() {
            if x[i] == 0 {
                continue;
            }
            for j in 0..y.len() {
                acc += x[i] as u128 * y[j] as u128 % e * self.b_num[i][j] as u128;
            }
            acc %= e;
        }
        (acc % e) as u64
    }

    pub fn q_generator_num(&self, i: usize) -> u64 {
        self.q_num[i]
    }

    pub fn b_generator_num(&self, i: usize, j: usize) -> u64 {
        self.b_num[i][j]
    }

    pub fn q_value(&self, coords: &[u64]) -> Ratio<i64> {
        Ratio::new(self.q_num(coords) as i64, self.exponent as i64)
    }

    pub fn b_value(&self, x: &[u64], y: &[u64]) -> Ratio<i64> {
        Ratio::new(self.b_num(x, y) as i64, self.exponent as i64)
    }

    pub fn generator_q_values(&self) -> Vec<Ratio<i64>> {
        self.q_num
            .iter()
            .map(|&n| Ratio::new(n as i64, self.exponent as i64))
            .collect()
    }

    pub fn generator_b_values(&self) -> Vec<Vec<Ratio<i64>>> {
        self.b_num
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&n| Ratio::new(n as i64, self.exponent as i64))
                    .collect()
            })
            .collect()
    }

    pub fn is_two_elementary(&self) -> bool {
        self.group.invariant_factors.iter().all(|&d| d == 2)
    }

    /// Minimal number of generators.
    pub fn length(&self) -> usize {
        self.len()
    }

    /// 0 if `q` takes integral values on the whole (2-elementary) group, else 1.
    pub fn parity_delta(&self) -> Result<u8> {
        if !self.is_two_elementary() {
            return Err(Error::input("parity is defined only for 2-elementary forms"));
        }
        if self.len() > 20 {
            return Err(Error::input("length too large for exhaustive parity check"));
        }
        for idx in 0..self.order() {
            let c = self.group.coords(idx);
            // exponent is 2 (or 1 for the trivial group): integral iff numerator even.
            if self.q_num(&c) % self.exponent != 0 {
                return Ok(1);
            }
        }
        Ok(0)
    }

    /// Coordinates over the generators of the class of a dual vector.
    pub fn dual_coords(&self, x: &[BigRational]) -> Result<Vec<u64>> {
        if self.dual_to_coords.is_empty() && !self.is_empty() {
            return Err(Error::input("form was not built from a lattice"));
        }
        self.dual_to_coords
            .iter()
            .zip(&self.group.invariant_factors)
            .map(|(row, &d)| {
                let mut acc = BigRational::zero();
                for (a, xi) in row.iter().zip(x) {
                    if !a.is_zero() && !xi.is_zero() {
                        acc += BigRational::from_integer(a.clone()) * xi;
                    }
                }
                if !acc.is_integer() {
                    return Err(Error::input("vector is not in the dual lattice"));
                }
                let r = acc.to_integer().mod_floor(&BigInt::from(d));
                Ok(r.to_u64().expect("reduced"))
            })
            .collect()
    }

    pub fn to_json(&self, rho: Option<usize>) -> Value {
        let q: Vec<String> = self.generator_q_values().iter().map(|r| r.to_string()).collect();
        let b: Vec<Vec<String>> = self
            .generator_b_values()
            .iter()
            .map(|row| row.iter().map(|r| r.to_string()).collect())
            .collect();
        let two = self.is_two_elementary();
        let delta = if two { self.parity_delta().ok().map(Value::from) } else { None };
        json!({
            "invariant_factors": self.group.invariant_factors,
            "q": q,
            "b": b,
            "rho": rho,
            "length": self.length(),
            "delta": delta.unwrap_or(Value::Null),
            "two_elementary": two,
        })
    }
}

/// Discriminant form of an even nondegenerate lattice, via the Smith normal
/// form of its Gram matrix.
pub fn discriminant_form(l: &GramLattice) -> Result<FiniteQuadraticForm> {
    if !l.is_even() {
        return Err(Error::input("discriminant form requires an even lattice"));
    }
    let n = l.rank();
    let snf = linalg::smith(l.gram());
    if snf.diagonal.iter().any(Zero::is_zero) || snf.diagonal.len() != n {
        return Err(Error::input("lattice is degenerate"));
    }
    let mut factors = Vec::new();
    let mut lifts = Vec::new();
    let mut coord_rows = Vec::new();
    let ug = linalg::mat_mul(&snf.left, l.gram());
    for (j, d) in snf.diagonal.iter().enumerate() {
        if d.is_one() {
            continue;
        }
        let dd = d
            .to_u64()
            .filter(|&x| x <= MAX_INDEXED_ORDER)
            .ok_or_else(|| Error::input("discriminant group too large"))?;
        factors.push(dd);
        lifts.push(
            (0..n)
                .map(|i| BigRational::new(snf.right[i][j].clone(), d.clone()))
                .collect::<Vec<_>>(),
        );
        coord_rows.push(ug[j].clone());
    }
    let order: u128 = factors.iter().map(|&d| d as u128).product();
    if order > MAX_INDEXED_ORDER as u128 {
        return Err(Error::input(format!("discriminant group of order {order} is too large")));
    }
    let exponent = factors.last().copied().unwrap_or(1);
    let e = BigRational::from_integer(BigInt::from(exponent));
    let k = factors.len();
    let mut q_num = vec![0u64; k];
    let mut b_num = vec![vec![0u64; k]; k];
    for i in 0..k {
        for j in i..k {
            let v = l.pair_rational(&lifts[i], &lifts[j]);
            let modulus = if i == j { 2 } else { 1 };
            let r = reduce_mod(&v, modulus) * &e;
            if !r.is_integer() {
                return Err(Error::internal("discriminant value outside (1/E)Z"));
            }
            let num = r.to_integer().to_u64().expect("reduced");
            if i == j {
                q_num[i] = num;
                b_num[i][i] = num % exponent;
            } else {
                b_num[i][j] = num;
                b_num[j][i] = num;
            }
        }
    }
    let form = FiniteQuadraticForm {
        group: FiniteAbelianGroup {
            invariant_factors: factors,
            generator_lift: lifts,
        },
        exponent,
        q_num,
        b_num,
        dual_to_coords: coord_rows,
    };
    form.validate()?;
    Ok(form)
}

/// `(rank, length, delta)` of an even nondegenerate 2-elementary lattice.
pub fn invariant_triple(l: &GramLattice) -> Result<TwoElementaryTriple> {
    let f = discriminant_form(l)?;
    if !f.is_two_elementary() {
        return Err(Error::input("lattice is not 2-elementary"));
    }
    Ok(TwoElementaryTriple {
        rho: l.rank(),
        length: f.length(),
        delta: f.parity_delta()?,
    })
}

/// Whether two torsion quadratic forms are isometric.
pub fn forms_isometric(
    f1: &FiniteQuadraticForm,
    f2: &FiniteQuadraticForm,
    budget: &Budget,
) -> Result<bool> {
    crate::isom::torsion::forms_isometric(f1, f2, budget)
}
