//! Integral lattices given by Gram matrices, and the standard building blocks.
//!
//! Simple-root orderings are fixed once here and used everywhere else:
//!
//! * `A_n`: the chain `a_1 - a_2 - ... - a_n`.
//! * `D_n`: the chain `a_1 - ... - a_{n-2}` with the fork `a_{n-1}`, `a_n` both
//!   attached to `a_{n-2}` (fork last).
//! * `E_n`: Bourbaki labelling, the chain `a_1 - a_3 - a_4 - ... - a_n` with `a_2`
//!   attached to `a_4`.
//!
//! Glue vectors are interpreted as coordinates in these bases.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg;

/// An integral lattice given by a symmetric Gram matrix. Rank zero is allowed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GramLattice {
    gram: Vec<Vec<BigInt>>,
}

/// Inertia of the real quadratic space spanned by a lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Signature {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootFamily {
    A,
    D,
    E,
}

impl fmt::Display for RootFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            RootFamily::A => "A",
            RootFamily::D => "D",
            RootFamily::E => "E",
        };
        f.write_str(c)
    }
}

impl GramLattice {
    pub fn new(gram: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = gram.len();
        for (i, row) in gram.iter().enumerate() {
            if row.len() != n {
                return Err(Error::input(format!(
                    "Gram matrix row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::input(format!(
                        "Gram matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(GramLattice { gram })
    }

    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn zero_dimensional() -> Self {
        GramLattice { gram: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<BigInt>] {
        &self.gram
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.gram[i][j]
    }

    /// The Gram matrix as machine integers, if every entry fits.
    pub fn gram_i64(&self) -> Option<Vec<Vec<i64>>> {
        self.gram
            .iter()
            .map(|row| row.iter().map(|x| x.to_i64()).collect())
            .collect()
    }

    pub fn determinant(&self) -> BigInt {
        linalg::determinant(&self.gram)
    }

    pub fn signature(&self) -> Signature {
        let diag = linalg::congruence_diagonal(&self.gram);
        Signature {
            n_plus: diag.iter().filter(|d| d.is_positive()).count(),
            n_minus: diag.iter().filter(|d| d.is_negative()).count(),
            n_zero: diag.iter().filter(|d| d.is_zero()).count(),
        }
    }

    pub fn is_even(&self) -> bool {
        self.gram.iter().enumerate().all(|(i, row)| row[i].is_even())
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.determinant().is_zero()
    }

    pub fn is_negative_definite(&self) -> bool {
        self.signature().n_minus == self.rank()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.signature().n_plus == self.rank()
    }

    pub fn is_definite(&self) -> bool {
        let s = self.signature();
        s.n_zero == 0 && (s.n_plus == 0 || s.n_minus == 0)
    }

    /// Inner product of two coordinate vectors.
    pub fn pair(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() && !self.gram[i][j].is_zero() {
                    acc += xi * &self.gram[i][j] * yj;
                }
            }
        }
        acc
    }

    pub fn pair_rational(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() && !self.gram[i][j].is_zero() {
                    acc += xi * yj * BigRational::from_integer(self.gram[i][j].clone());
                }
            }
        }
        acc
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .gram
            .iter()
            .map(|row| Value::Array(row.iter().map(bigint_json).collect()))
            .collect();
        json!({ "gram": rows })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let rows = value
            .get("gram")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::input("expected an object with a \"gram\" array"))?;
        let mut gram = Vec::with_capacity(rows.len());
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| Error::input("Gram rows must be arrays"))?;
            let mut out = Vec::with_capacity(row.len());
            for x in row {
                out.push(json_bigint(x)?);
            }
            gram.push(out);
        }
        Self::new(gram)
    }
}

fn bigint_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

fn json_bigint(x: &Value) -> Result<BigInt> {
    if let Some(v) = x.as_i64() {
        return Ok(BigInt::from(v));
    }
    if let Some(s) = x.as_str() {
        return s
            .parse()
            .map_err(|_| Error::input(format!("not an integer: {s:?}")));
    }
    Err(Error::input(format!("not an integer: {x}")))
}

impl fmt::Debug for GramLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GramLattice(")?;
        for (i, row) in self.gram.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let parts: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", parts.join(" "))?;
        }
        write!(f, ")")
    }
}

/// Positive-definite root lattice `A_n`, `D_n` or `E_n` in the fixed ordering.
pub fn root_lattice(family: RootFamily, n: usize) -> Result<GramLattice> {
    let edges = dynkin_edges(family, n)?;
    let mut gram = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in gram.iter_mut().enumerate() {
        row[i] = BigInt::from(2);
    }
    for (a, b) in edges {
        gram[a][b] = BigInt::from(-1);
        gram[b][a] = BigInt::from(-1);
    }
    GramLattice::new(gram)
}

/// Edges of the Dynkin diagram, zero-indexed, in the fixed ordering.
pub fn dynkin_edges(family: RootFamily, n: usize) -> Result<Vec<(usize, usize)>> {
    match family {
        RootFamily::A => {
            if n < 1 {
                return Err(Error::input("A_n needs n >= 1"));
            }
            Ok((1..n).map(|i| (i - 1, i)).collect())
        }
        RootFamily::D => {
            if n < 4 {
                return Err(Error::input(format!("D_{n} is not a valid root lattice (n >= 4)")));
            }
            let mut e: Vec<(usize, usize)> = (1..n - 1).map(|i| (i - 1, i)).collect();
            e.push((n - 3, n - 1));
            Ok(e)
        }
        RootFamily::E => {
            if !(6..=8).contains(&n) {
                return Err(Error::input(format!("E_{n} is not a valid root lattice (n in 6..=8)")));
            }
            // Bourbaki: 1-3, 3-4, 4-5, ..., and 2-4 (one-indexed).
            let mut e = vec![(0, 2), (1, 3)];
            for i in 3..n {
                e.push((i - 1, i));
            }
            Ok(e)
        }
    }
}

/// The hyperbolic plane `U = [[0,1],[1,0]]`.
pub fn hyperbolic() -> GramLattice {
    GramLattice::from_i64(&[[0, 1], [1, 0]]).expect("valid")
}

/// The negative definite rank-eight Nikulin lattice: `A_1(-1)^8` extended by
/// half the sum of its basis.
pub fn nikulin() -> GramLattice {
    let base = power(&twist(&root_lattice(RootFamily::A, 1).expect("valid"), -1).expect("valid"), 8);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let glue = vec![vec![half; 8]];
    extend_lattice(&base, &glue).expect("Nikulin glue is integral").0
}

/// `U^3 + E_8(-1)^2`, the second cohomology lattice of a K3 surface.
pub fn k3_lattice() -> GramLattice {
    let e8m = twist(&root_lattice(RootFamily::E, 8).expect("valid"), -1).expect("valid");
    direct_sum(&power(&hyperbolic(), 3), &power(&e8m, 2))
}

pub fn direct_sum(a: &GramLattice, b: &GramLattice) -> GramLattice {
    let n = a.rank() + b.rank();
    let mut gram = vec![vec![BigInt::zero(); n]; n];
    for i in 0..a.rank() {
        for j in 0..a.rank() {
            gram[i][j] = a.gram[i][j].clone();
        }
    }
    let o = a.rank();
    for i in 0..b.rank() {
        for j in 0..b.rank() {
            gram[o + i][o + j] = b.gram[i][j].clone();
        }
    }
    GramLattice { gram }
}

pub fn power(l: &GramLattice, k: usize) -> GramLattice {
    (0..k).fold(GramLattice::zero_dimensional(), |acc, _| direct_sum(&acc, l))
}

/// Scales the form by a nonzero integer.
pub fn twist(l: &GramLattice, lambda: i64) -> Result<GramLattice> {
    if lambda == 0 {
        return Err(Error::input("twist by zero is not allowed"));
    }
    let f = BigInt::from(lambda);
    Ok(GramLattice {
        gram: l
            .gram
            .iter()
            .map(|row| row.iter().map(|x| x * &f).collect())
            .collect(),
    })
}

/// Extends `base` by rational vectors (coordinates in the basis of `base`).
/// Returns the Gram matrix of the extended lattice in its Hermite-normal-form
/// basis, the basis rows as rational coordinates over `base`, and the index.
///
/// Pairings are not checked here; non-integral results are reported as an
/// input error.
pub(crate) fn extend_lattice(
    base: &GramLattice,
    vectors: &[Vec<BigRational>],
) -> Result<(GramLattice, Vec<Vec<BigRational>>, BigInt)> {
    let n = base.rank();
    let mut den = BigInt::one();
    for v in vectors {
        if v.len() != n {
            return Err(Error::input(format!(
                "vector has {} coordinates, lattice has rank {n}",
                v.len()
            )));
        }
        for x in v {
            den = den.lcm(x.denom());
        }
    }
    let mut gens: Vec<Vec<BigInt>> = Vec::with_capacity(n + vectors.len());
    for v in vectors {
        gens.push(v.iter().map(|x| (x * &den).to_integer()).collect());
    }
    for i in 0..n {
        let mut row = vec![BigInt::zero(); n];
        row[i] = den.clone();
        gens.push(row);
    }
    let basis = linalg::hermite_rows(&gens);
    if basis.len() != n {
        return Err(Error::internal("extension changed the rank"));
    }
    let det_basis = linalg::determinant(&basis).abs();
    let full = num_traits::pow(den.clone(), n);
    let (index, rem) = full.div_rem(&det_basis);
    if !rem.is_zero() {
        return Err(Error::internal("non-integral index"));
    }
    let rows: Vec<Vec<BigRational>> = basis
        .iter()
        .map(|r| r.iter().map(|x| BigRational::new(x.clone(), den.clone())).collect())
        .collect();
    let mut gram = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = base.pair_rational(&rows[i], &rows[j]);
            if !v.is_integer() {
                return Err(Error::input("extension is not integral"));
            }
            gram[i][j] = v.to_integer();
            gram[j][i] = gram[i][j].clone();
        }
    }
    Ok((GramLattice { gram }, rows, index))
}
