//! Exact dense linear algebra over the integers and rationals.
//!
//! Everything here works on small dense matrices (rank at most a few dozen) and
//! uses arbitrary-precision arithmetic throughout.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<BigRational>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> IntMatrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = BigInt::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc += &row[k] * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn rat_mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> RatMatrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = BigRational::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc += &row[k] * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn to_rational(m: &[Vec<BigInt>]) -> RatMatrix {
    m.iter()
        .map(|row| row.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: IntMatrix = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Row-style Hermite normal form. Returns the nonzero rows, which form a basis
/// of the row lattice spanned by `gens`. Pivots are positive and entries above
/// each pivot are reduced into `[0, pivot)`.
pub fn hermite_rows(gens: &[Vec<BigInt>]) -> IntMatrix {
    let mut a: IntMatrix = gens.to_vec();
    if a.is_empty() {
        return a;
    }
    let cols = a[0].len();
    let mut p = 0;
    for col in 0..cols {
        if p >= a.len() {
            break;
        }
        loop {
            let pivot = (p..a.len())
                .filter(|&i| !a[i][col].is_zero())
                .min_by(|&i, &j| a[i][col].abs().cmp(&a[j][col].abs()));
            let Some(pi) = pivot else { break };
            a.swap(p, pi);
            let mut done = true;
            for i in p + 1..a.len() {
                if a[i][col].is_zero() {
                    continue;
                }
                let q = a[i][col].div_floor(&a[p][col]);
                let pivot_row = a[p].clone();
                for (x, y) in a[i].iter_mut().zip(pivot_row.iter()) {
                    *x -= &q * y;
                }
                if !a[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[p][col].is_zero() {
            continue;
        }
        if a[p][col].is_negative() {
            for x in a[p].iter_mut() {
                *x = -x.clone();
            }
        }
        let pivot_row = a[p].clone();
        for i in 0..p {
            let q = a[i][col].div_floor(&pivot_row[col]);
            if !q.is_zero() {
                for (x, y) in a[i].iter_mut().zip(pivot_row.iter()) {
                    *x -= &q * y;
                }
            }
        }
        p += 1;
    }
    a.truncate(p);
    a
}

/// Smith normal form `left * m * right = diag(d_1, ..., d_r, 0, ...)` with
/// `d_i | d_{i+1}`, `d_i > 0`, and unimodular `left`, `right`.
#[derive(Debug, Clone)]
pub struct Smith {
    pub diagonal: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

pub fn smith(m: &[Vec<BigInt>]) -> Smith {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut a: IntMatrix = m.to_vec();
    let mut left = identity(rows);
    let mut right = identity(cols);
    let steps = rows.min(cols);
    let mut diagonal = Vec::with_capacity(steps);

    for t in 0..steps {
        'pivot: loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break 'pivot;
            };
            a.swap(t, pi);
            left.swap(t, pi);
            if pj != t {
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                for row in right.iter_mut() {
                    row.swap(t, pj);
                }
            }

            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_sub(&mut a, i, t, &q);
                row_sub(&mut left, i, t, &q);
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_sub(&mut a, j, t, &q);
                col_sub(&mut right, j, t, &q);
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let offending = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match offending {
                Some(i) => {
                    row_add(&mut a, t, i);
                    row_add(&mut left, t, i);
                }
                None => break 'pivot,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -x.clone();
            }
            for x in left[t].iter_mut() {
                *x = -x.clone();
            }
        }
        diagonal.push(a[t][t].clone());
    }
    Smith {
        diagonal,
        left,
        right,
    }
}

fn row_sub(a: &mut IntMatrix, target: usize, source: usize, q: &BigInt) {
    let src = a[source].clone();
    for (x, y) in a[target].iter_mut().zip(src.iter()) {
        *x -= q * y;
    }
}

fn row_add(a: &mut IntMatrix, target: usize, source: usize) {
    let src = a[source].clone();
    for (x, y) in a[target].iter_mut().zip(src.iter()) {
        *x += y;
    }
}

fn col_sub(a: &mut IntMatrix, target: usize, source: usize, q: &BigInt) {
    for row in a.iter_mut() {
        let s = row[source].clone();
        row[target] -= q * s;
    }
}

/// Inverse over the rationals, or `None` when singular.
pub fn rational_inverse(m: &[Vec<BigInt>]) -> Option<RatMatrix> {
    let n = m.len();
    let mut a = to_rational(m);
    let mut inv: RatMatrix = to_rational(&identity(n));
    for k in 0..n {
        let pi = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(k, pi);
        inv.swap(k, pi);
        let p = a[k][k].clone();
        for j in 0..n {
            a[k][j] = &a[k][j] / &p;
            inv[k][j] = &inv[k][j] / &p;
        }
        for i in 0..n {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].clone();
            for j in 0..n {
                let ak = &f * &a[k][j];
                a[i][j] -= ak;
                let ik = &f * &inv[k][j];
                inv[i][j] -= ik;
            }
        }
    }
    Some(inv)
}

/// Diagonalizes a symmetric matrix by rational congruence with symmetric
/// pivoting; the signs of the returned entries give the inertia.
pub fn congruence_diagonal(m: &[Vec<BigInt>]) -> Vec<BigRational> {
    let n = m.len();
    let mut a = to_rational(m);
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // a_jj = 0 here, so the new a_kk = 2 a_kj is nonzero.
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[k][c] += v;
                }
                for r in 0..n {
                    let v = a[r][j].clone();
                    a[r][k] += v;
                }
            }
        }
        let p = a[k][k].clone();
        diag.push(p.clone());
        if p.is_zero() {
            continue;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &p;
            for c in k..n {
                let v = &f * &a[k][c];
                a[i][c] -= v;
            }
            for r in k..n {
                let v = &f * &a[r][k];
                a[r][i] -= v;
            }
        }
    }
    diag
}

/// Decomposition `Q(x) = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2` of a positive
/// definite form. Returns `None` if the matrix is not positive definite.
pub fn positive_ldl(m: &[Vec<BigInt>]) -> Option<(Vec<BigRational>, RatMatrix)> {
    let n = m.len();
    let a = to_rational(m);
    let mut d: Vec<BigRational> = Vec::with_capacity(n);
    let mut mu: RatMatrix = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        let mut di = a[i][i].clone();
        for k in 0..i {
            di -= &mu[k][i] * &mu[k][i] * &d[k];
        }
        if !di.is_positive() {
            return None;
        }
        for j in i + 1..n {
            let mut v = a[i][j].clone();
            for k in 0..i {
                v -= &mu[k][i] * &mu[k][j] * &d[k];
            }
            mu[i][j] = v / &di;
        }
        mu[i][i] = BigRational::one();
        d.push(di);
    }
    Some((d, mu))
}
