//! Library results compared with the oracles. Each suite panics on the
//! first disagreement and returns the number of cases compared.

use std::collections::BTreeSet;

use k3lat::discriminant_form;
use k3lat::isom::{bilinear_orthogonal_order_f2, lattice_aut_group, torsion_orthogonal_group, Budget};
use k3lat::lattice::{root_lattice, twist, RootFamily};
use k3lat::roots::{short_vectors, vectors_up_to};
use k3lat::{parse_lattice_expr, GramLattice};
use num_bigint::BigUint;

use super::coordinate_roots;

pub fn ade_up_to_rank(max: usize) -> Vec<(RootFamily, usize)> {
    let mut v = Vec::new();
    for n in 1..=max {
        v.push((RootFamily::A, n));
        if n >= 4 {
            v.push((RootFamily::D, n));
        }
        if (6..=8).contains(&n) {
            v.push((RootFamily::E, n));
        }
    }
    v
}

fn canonical(mut v: Vec<i64>) -> Vec<i64> {
    if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    v
}

/// All vectors of norm at most 6, and the roots of the negative twist.
pub fn short_vectors_vs_box_scan() -> usize {
    let mut cases = 0;
    for (fam, n) in ade_up_to_rank(6) {
        let l = root_lattice(fam, n).unwrap();
        let g = l.gram_i64().unwrap();
        let brute: BTreeSet<(Vec<i64>, u64)> = super::box_vectors(&g, 6)
            .into_iter()
            .map(|(v, q)| (canonical(v), q as u64))
            .collect();
        let fast: BTreeSet<(Vec<i64>, u64)> = vectors_up_to(&l, 6).unwrap().into_iter().collect();
        assert_eq!(fast, brute, "{fam}{n}");
        let neg = twist(&l, -1).unwrap();
        let roots: BTreeSet<Vec<i64>> = short_vectors(&neg, -2).unwrap().into_iter().collect();
        let brute_roots: BTreeSet<Vec<i64>> =
            brute.iter().filter(|(_, q)| *q == 2).map(|(v, _)| v.clone()).collect();
        assert_eq!(roots, brute_roots, "{fam}{n}(-1)");
        cases += 1;
    }
    cases
}

pub fn lattice_aut_vs_matrix_search() -> usize {
    let grams: Vec<Vec<Vec<i64>>> = vec![
        vec![vec![2]],
        vec![vec![6]],
        vec![vec![2, 0], vec![0, 2]],
        vec![vec![2, 1], vec![1, 2]],
        vec![vec![2, 1], vec![1, 4]],
        vec![vec![2, 0], vec![0, 4]],
        vec![vec![4, 2], vec![2, 4]],
        vec![vec![4, 1], vec![1, 6]],
        vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]],
        vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]],
        vec![vec![2, 0, 0], vec![0, 2, -1], vec![0, -1, 2]],
        vec![vec![4, 1, 0], vec![1, 4, 1], vec![0, 1, 6]],
        vec![vec![2, 0, 0], vec![0, 6, 3], vec![0, 3, 6]],
        vec![vec![4, 2, 2], vec![2, 4, 2], vec![2, 2, 4]],
    ];
    let budget = Budget::unlimited();
    let mut cases = 0;
    for g in grams {
        let l = GramLattice::from_i64(&g).unwrap();
        let (_, order) = lattice_aut_group(&l, &budget).unwrap();
        assert_eq!(order, BigUint::from(super::brute_aut_order(&g)), "{g:?}");
        let (_, neg) = lattice_aut_group(&twist(&l, -1).unwrap(), &budget).unwrap();
        assert_eq!(neg, order);
        cases += 1;
    }
    cases
}

pub fn torsion_group_vs_automorphism_enumeration() -> usize {
    let exprs = [
        "A1(-1)",
        "A1(-1)^2",
        "A1(-1)^3",
        "A1(-1)^4",
        "A1(-1)^5",
        "A1(-1)^6",
        "A2(-1)",
        "A3(-1)",
        "A4(-1)",
        "A5(-1)",
        "A6(-1)",
        "A7(-1)",
        "D4(-1)",
        "D5(-1)",
        "D6(-1)",
        "E6(-1)",
        "E7(-1)",
        "A1(-1) + A2(-1)",
        "A1(-1) + A3(-1)",
        "A2(-1)^2",
        "A3(-1)^2",
        "A2(-1)^3",
        "D4(-1) + A1(-1)",
        "D4(-1) + A1(-1)^2",
        "D4(-1)^2",
        "D6(-1) + A1(-1)^2",
        "A1(-1)^2 + A3(-1)",
        "<4>",
        "<-12>",
        "<2> + <6>",
        "H(2)",
        "H(4)",
    ];
    let budget = Budget::unlimited();
    let mut cases = 0;
    for e in exprs {
        let l = parse_lattice_expr(e).unwrap();
        let f = discriminant_form(&l).unwrap();
        assert!(f.order() <= 64, "{e}");
        let (_, order) = torsion_orthogonal_group(&f, &budget).unwrap();
        assert_eq!(order, BigUint::from(super::brute_form_aut_order(&f)), "{e}");
        cases += 1;
    }
    cases
}

pub fn f2_orthogonal_counts() -> usize {
    for l in 1..=4 {
        assert_eq!(
            bilinear_orthogonal_order_f2(l).unwrap(),
            BigUint::from(super::brute_f2_orthogonal(l)),
            "l = {l}"
        );
    }
    4
}

/// Root counts from the coordinate models, the closed forms and the
/// production enumerator.
pub fn root_counts() -> usize {
    let mut cases = 0;
    for n in 1..=8 {
        assert_eq!(coordinate_roots::a(n), n * (n + 1));
        let l = root_lattice(RootFamily::A, n).unwrap();
        assert_eq!(2 * short_vectors(&l, 2).unwrap().len(), coordinate_roots::a(n), "A{n}");
        cases += 1;
    }
    for n in 4..=8 {
        assert_eq!(coordinate_roots::d(n), 2 * n * (n - 1));
        let l = root_lattice(RootFamily::D, n).unwrap();
        assert_eq!(2 * short_vectors(&l, 2).unwrap().len(), coordinate_roots::d(n), "D{n}");
        cases += 1;
    }
    let e = [(6, coordinate_roots::e6()), (7, coordinate_roots::e7()), (8, coordinate_roots::e8())];
    assert_eq!(e.map(|x| x.1), [72, 126, 240]);
    for (n, count) in e {
        let l = root_lattice(RootFamily::E, n).unwrap();
        assert_eq!(2 * short_vectors(&l, 2).unwrap().len(), count, "E{n}");
        cases += 1;
    }
    cases
}
