mod common;

use common::suites;

#[test]
fn short_vectors_match_box_scan() {
    assert!(suites::short_vectors_vs_box_scan() > 0);
}

#[test]
fn lattice_aut_matches_matrix_search() {
    assert!(suites::lattice_aut_vs_matrix_search() > 0);
}

#[test]
fn torsion_group_matches_automorphism_enumeration() {
    assert!(suites::torsion_group_vs_automorphism_enumeration() > 0);
}

#[test]
fn f2_orthogonal_counts() {
    suites::f2_orthogonal_counts();
}

#[test]
fn root_counts_match_coordinate_models() {
    suites::root_counts();
}
