//! Fincke–Pohst enumeration of short vectors in a definite lattice, in exact
//! rational arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::GramLattice;
use crate::linalg;

/// Positive definite Gram matrix for `l` (negated if `l` is negative definite),
/// and the sign that was applied.
pub(crate) fn positive_gram(l: &GramLattice) -> Result<(Vec<Vec<BigInt>>, i64)> {
    if l.rank() == 0 || l.is_positive_definite() {
        Ok((l.gram().to_vec(), 1))
    } else if l.is_negative_definite() {
        Ok((
            l.gram().iter().map(|r| r.iter().map(|x| -x).collect()).collect(),
            -1,
        ))
    } else {
        Err(Error::input("lattice is not definite"))
    }
}

/// All nonzero `v` with `0 < |v.v| <= bound`, one of each `±v` (first nonzero
/// coordinate positive), with their absolute norms, lexicographically sorted.
pub fn vectors_up_to(l: &GramLattice, bound: u64) -> Result<Vec<(Vec<i64>, u64)>> {
    let (g, _) = positive_gram(l)?;
    let n = g.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let (d, mu) = linalg::positive_ldl(&g).ok_or_else(|| Error::internal("LDL failed on a definite form"))?;
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    let bound = BigRational::from_integer(BigInt::from(bound));
    enumerate(&d, &mu, n, &mut x, bound, &mut out);
    let gi = l.gram_i64().ok_or_else(|| Error::input("Gram entries too large"))?;
    let mut out: Vec<(Vec<i64>, u64)> = out
        .into_iter()
        .filter(|v| v.iter().find(|c| **c != 0).is_some_and(|c| *c > 0))
        .map(|v| {
            let n = norm_i64(&gi, &v).unsigned_abs();
            (v, n)
        })
        .collect();
    out.sort();
    Ok(out)
}

fn enumerate(
    d: &[BigRational],
    mu: &[Vec<BigRational>],
    level: usize,
    x: &mut Vec<i64>,
    remaining: BigRational,
    out: &mut Vec<Vec<i64>>,
) {
    if level == 0 {
        if x.iter().any(|&c| c != 0) {
            out.push(x.clone());
        }
        return;
    }
    let i = level - 1;
    let mut c = BigRational::zero();
    for j in i + 1..x.len() {
        if x[j] != 0 {
            c += &mu[i][j] * BigRational::from_integer(x[j].into());
        }
    }
    let cost = |xi: i64| -> BigRational {
        let t = BigRational::from_integer(xi.into()) + &c;
        &d[i] * &t * &t
    };
    let centre = (-c.clone()).round().to_integer().to_i64().expect("coordinate fits in i64");
    if cost(centre) > remaining {
        return;
    }
    let mut lo = centre;
    while cost(lo - 1) <= remaining {
        lo -= 1;
    }
    let mut hi = centre;
    while cost(hi + 1) <= remaining {
        hi += 1;
    }
    for xi in lo..=hi {
        x[i] = xi;
        let rest = &remaining - cost(xi);
        enumerate(d, mu, i, x, rest, out);
    }
    x[i] = 0;
}

/// All `v` with `v.v = norm`, one of each `±v`, lexicographically sorted.
pub fn short_vectors(l: &GramLattice, norm: i64) -> Result<Vec<Vec<i64>>> {
    let (_, sign) = positive_gram(l)?;
    if norm == 0 || (l.rank() > 0 && norm.signum() != sign) {
        return Err(Error::input(format!("norm {norm} has the wrong sign for this lattice")));
    }
    let target = norm.unsigned_abs();
    let mut v: Vec<Vec<i64>> = vectors_up_to(l, target)?
        .into_iter()
        .filter(|(_, n)| *n == target)
        .map(|(v, _)| v)
        .collect();
    v.sort();
    Ok(v)
}

pub(crate) fn norm_i64(g: &[Vec<i64>], v: &[i64]) -> i64 {
    let mut s = 0i64;
    for i in 0..v.len() {
        if v[i] == 0 {
            continue;
        }
        let mut t = 0i64;
        for j in 0..v.len() {
            t += g[i][j] * v[j];
        }
        s += v[i] * t;
    }
    s
}
