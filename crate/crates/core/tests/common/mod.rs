//! Brute-force oracles, deliberately naive and independent of the library
//! algorithms.

#![allow(dead_code)]

pub mod suites;

use k3lat::discform::FiniteQuadraticForm;

/// Inverse of a small symmetric matrix in floating point.
fn inverse_f64(g: &[Vec<i64>]) -> Vec<Vec<f64>> {
    let n = g.len();
    let mut a: Vec<Vec<f64>> = g
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<f64> = row.iter().map(|&x| x as f64).collect();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| a[i][c].abs().partial_cmp(&a[j][c].abs()).unwrap())
            .unwrap();
        a.swap(c, p);
        let pivot = a[c][c];
        for x in a[c].iter_mut() {
            *x /= pivot;
        }
        for r in 0..n {
            if r != c {
                let f = a[r][c];
                let row_c = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(row_c) {
                    *x -= f * y;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

pub fn norm(g: &[Vec<i64>], v: &[i64]) -> i64 {
    let n = v.len();
    let mut s = 0;
    for i in 0..n {
        for j in 0..n {
            s += v[i] * g[i][j] * v[j];
        }
    }
    s
}

/// Coordinate bounds `|x_i| <= sqrt(N (G^-1)_ii)` for a positive definite `g`.
pub fn box_bounds(g: &[Vec<i64>], max_norm: i64) -> Vec<i64> {
    let inv = inverse_f64(g);
    (0..g.len())
        .map(|i| ((max_norm as f64) * inv[i][i]).sqrt().floor() as i64 + 1)
        .collect()
}

/// Every nonzero vector of norm `<= max_norm`, by scanning the whole box.
pub fn box_vectors(g: &[Vec<i64>], max_norm: i64) -> Vec<(Vec<i64>, i64)> {
    let bounds = box_bounds(g, max_norm);
    let n = g.len();
    let mut out = Vec::new();
    let mut x: Vec<i64> = bounds.iter().map(|b| -b).collect();
    loop {
        let q = norm(g, &x);
        if q > 0 && q <= max_norm {
            out.push((x.clone(), q));
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            if x[i] < bounds[i] {
                x[i] += 1;
                break;
            }
            x[i] = -bounds[i];
            i += 1;
        }
    }
}

/// `|O(L)|` by trying every integer matrix whose columns have the right
/// norms.
pub fn brute_aut_order(g: &[Vec<i64>]) -> u64 {
    let n = g.len();
    let max = (0..n).map(|i| g[i][i]).max().unwrap();
    let pool = box_vectors(g, max);
    let cands: Vec<Vec<&Vec<i64>>> = (0..n)
        .map(|j| pool.iter().filter(|(_, q)| *q == g[j][j]).map(|(v, _)| v).collect())
        .collect();
    let mut count = 0;
    let mut cols: Vec<&Vec<i64>> = Vec::new();
    fn pair(g: &[Vec<i64>], a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..a.len() {
            for j in 0..b.len() {
                s += a[i] * g[i][j] * b[j];
            }
        }
        s
    }
    fn rec<'a>(g: &[Vec<i64>], cands: &[Vec<&'a Vec<i64>>], cols: &mut Vec<&'a Vec<i64>>, count: &mut u64) {
        let j = cols.len();
        if j == g.len() {
            *count += 1;
            return;
        }
        for &v in &cands[j] {
            if (0..j).all(|i| pair(g, cols[i], v) == g[i][j]) {
                cols.push(v);
                rec(g, cands, cols, count);
                cols.pop();
            }
        }
    }
    rec(g, &cands, &mut cols, &mut count);
    count
}

fn element_order(factors: &[u64], x: &[u64]) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    x.iter().zip(factors).fold(1, |acc, (&xi, &d)| {
        let o = d / gcd(d, xi);
        acc / gcd(acc, o) * o
    })
}

/// `|O(D, q)|` by enumerating generator images.
pub fn brute_form_aut_order(f: &FiniteQuadraticForm) -> u64 {
    let factors = f.invariant_factors().to_vec();
    let n = factors.len();
    let order = f.order();
    let elems: Vec<Vec<u64>> = (0..order).map(|i| f.group.coords(i)).collect();
    let image = |imgs: &[usize], x: &[u64]| -> Vec<u64> {
        let mut y = vec![0u64; n];
        for (j, &xj) in x.iter().enumerate() {
            for k in 0..n {
                y[k] = (y[k] + xj * elems[imgs[j]][k]) % factors[k];
            }
        }
        y
    };
    // Candidate images of generator j: elements of order dividing d_j with
    // the same q value. Everything else is checked on the whole group.
    let gen = |j: usize| -> Vec<u64> { (0..n).map(|k| u64::from(k == j)).collect() };
    let cands: Vec<Vec<usize>> = (0..n)
        .map(|j| {
            (0..order as usize)
                .filter(|&i| factors[j] % element_order(&factors, &elems[i]) == 0)
                .filter(|&i| f.q_num(&elems[i]) == f.q_num(&gen(j)))
                .collect()
        })
        .collect();
    if cands.iter().any(Vec::is_empty) {
        return 0;
    }
    let mut count = 0;
    let mut pos = vec![0usize; n];
    loop {
        let imgs: Vec<usize> = (0..n).map(|j| cands[j][pos[j]]).collect();
        let mut seen = vec![false; order as usize];
        let mut ok = true;
        for x in &elems {
            let y = image(&imgs, x);
            let idx = f.group.index(&y) as usize;
            if seen[idx] || f.q_num(&y) != f.q_num(x) {
                ok = false;
                break;
            }
            seen[idx] = true;
        }
        if ok {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == n {
                return count;
            }
            if pos[i] + 1 < cands[i].len() {
                pos[i] += 1;
                break;
            }
            pos[i] = 0;
            i += 1;
        }
    }
}

/// Number of `l x l` matrices over F_2 with `g g^T = I`, by enumeration.
pub fn brute_f2_orthogonal(l: usize) -> u64 {
    let mut count = 0;
    for bits in 0u64..(1 << (l * l)) {
        let row = |i: usize| (bits >> (i * l)) & ((1 << l) - 1);
        let ok = (0..l).all(|i| (0..l).all(|j| ((row(i) & row(j)).count_ones() % 2 == 1) == (i == j)));
        if ok {
            count += 1;
        }
    }
    count
}

/// Roots in the standard coordinate models: `A_n` in the sum-zero
/// hyperplane of `Z^{n+1}`, `D_n` in `Z^n`, `E_8` in `D_8` plus the half
/// spinor coset, `E_7` and `E_6` as centralizers of `A_1` and `A_2` in `E_8`.
pub mod coordinate_roots {
    fn ternary(dim: usize) -> impl Iterator<Item = Vec<i64>> {
        (0..3u64.pow(dim as u32)).map(move |mut k| {
            (0..dim)
                .map(|_| {
                    let d = (k % 3) as i64 - 1;
                    k /= 3;
                    d
                })
                .collect()
        })
    }

    fn sq(v: &[i64]) -> i64 {
        v.iter().map(|x| x * x).sum()
    }

    pub fn a(n: usize) -> usize {
        ternary(n + 1).filter(|v| sq(v) == 2 && v.iter().sum::<i64>() == 0).count()
    }

    pub fn d(n: usize) -> usize {
        ternary(n).filter(|v| sq(v) == 2).count()
    }

    /// `E_8` roots scaled by 2, so all coordinates are integers of norm 8.
    pub fn e8_doubled() -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = ternary(8)
            .filter(|v| sq(v) == 2)
            .map(|v| v.iter().map(|x| 2 * x).collect())
            .collect();
        for signs in 0u32..256 {
            if signs.count_ones() % 2 == 0 {
                out.push((0..8).map(|i| if signs >> i & 1 == 1 { -1 } else { 1 }).collect());
            }
        }
        out
    }

    fn dot(a: &[i64], b: &[i64]) -> i64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    pub fn e8() -> usize {
        e8_doubled().len()
    }

    pub fn e7() -> usize {
        let r = e8_doubled();
        let a = r[0].clone();
        r.iter().filter(|v| dot(v, &a) == 0).count()
    }

    pub fn e6() -> usize {
        let r = e8_doubled();
        let a = r[0].clone();
        // A second root at angle 120 degrees to the first spans an A_2.
        let b = r.iter().find(|v| dot(v, &a) == -4).unwrap().clone();
        r.iter().filter(|v| dot(v, &a) == 0 && dot(v, &b) == 0).count()
    }
}
