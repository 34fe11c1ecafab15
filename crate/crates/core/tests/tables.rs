use k3lat::tables::figure::{class_differences, figure_csv, figure_data, verify_figure, FigurePoint};
use k3lat::tables::verify::frame_k;
use k3lat::tables::{
    glue_for, rows_in, table_rows, verify_frames, verify_glue, verify_invariants, verify_multiplicities,
    verify_nikulin_criteria, verify_tables, Status, TableId, TableRow, VerifyOptions,
};
use k3lat::{invariant_triple, parse_lattice_expr};

fn row(table: &str, n: usize) -> &'static TableRow {
    let t: TableId = table.parse().unwrap();
    table_rows().iter().find(|r| r.table == t && r.row == n).unwrap()
}

fn opts() -> VerifyOptions {
    VerifyOptions::default()
}

#[test]
fn h_plus_d4() {
    let r = row("1", 8);
    assert_eq!(r.lattice, "H + D4(-1)");
    let t = invariant_triple(&parse_lattice_expr(&r.lattice).unwrap()).unwrap();
    assert_eq!((t.rho, t.length, t.delta), (6, 2, 0));
    assert!(verify_invariants(&[r], &opts()).passed());
    assert!(verify_frames(&[r], &opts()).passed());
    assert!(verify_multiplicities(&[r], &opts()).passed());
}

#[test]
fn rank_one_without_fibration() {
    let r = row("nofib", 1);
    assert!(r.frames.is_empty());
    let report = verify_invariants(&[r], &opts());
    assert!(report.passed());
    assert!(report.count(Status::Pass) > 0);
}

#[test]
fn two_copies_of_e8() {
    let r = row("2", 18);
    let names: Vec<String> = r.frames.iter().map(|f| f.root_type.to_string()).collect();
    assert_eq!(names, ["2E8", "D16"]);
    assert!(glue_for(r, 1).is_some());
    assert!(verify_frames(&[r], &opts()).passed());
    assert!(verify_multiplicities(&[r], &opts()).passed());
}

#[test]
fn three_d6_needs_two_glue_vectors() {
    let r = row("4", 9);
    let i = r.frames.iter().position(|f| f.root_type.to_string() == "3D6").unwrap();
    let g = glue_for(r, i).unwrap();
    assert_eq!(g.table, TableId::Numbered(8));
    assert_eq!(g.glue.len(), 2);
    let k = frame_k(r, i).unwrap();
    assert_eq!(k.rank(), 18);
    assert!(verify_frames(&[r], &opts()).passed());
}

#[test]
fn flipped_delta_is_caught() {
    let mut bad = row("1", 8).clone();
    bad.delta = Some(1);
    let report = verify_invariants(&[&bad], &opts());
    assert!(!report.passed());
    assert!(report.failures().iter().any(|r| r.check == "invariant triple"));
}

#[test]
fn wrong_determinant_is_caught() {
    let mut bad = row("1", 14).clone();
    bad.det = "2^4".into();
    assert!(!verify_invariants(&[&bad], &opts()).passed());
}

#[test]
fn wrong_ratio_is_caught() {
    let mut bad = row("2", 4).clone();
    bad.frames[0].ratio = Some(55);
    let report = verify_multiplicities(&[&bad], &opts());
    assert_eq!(report.count(Status::Fail), 1);
}

#[test]
fn wrong_mordell_weil_group_is_caught() {
    let mut bad = row("2", 4).clone();
    bad.frames[1].w = "trivial".parse().unwrap();
    assert!(!verify_frames(&[&bad], &opts()).passed());
}

#[test]
fn glue_tables() {
    let report = verify_glue(&[TableId::Numbered(5), TableId::Numbered(8)], &opts());
    assert!(report.passed());
    assert!(report.count(Status::Pass) > 0);
}

#[test]
fn nikulin_cases() {
    let rows = rows_in(&[TableId::Numbered(1), TableId::Numbered(2)]);
    let report = verify_nikulin_criteria(&rows, &opts());
    assert!(report.passed(), "{:?}", report.failures());
    let case = |t: &str, n: usize| {
        report
            .records
            .iter()
            .find(|r| r.table == t.parse().unwrap() && r.row == n)
            .unwrap()
            .check
            .clone()
    };
    assert_eq!(case("1", 8), "Nikulin case (i)(b)");
    assert_eq!(case("1", 27), "Nikulin case (ii)");
    assert_eq!(case("2", 18), "Nikulin case (i)(b)");
    assert_eq!(case("2", 19), "Nikulin case (i)(a)");
}

#[test]
fn figure_points() {
    let pts = figure_data();
    let has = |p: FigurePoint| pts.contains(&p);
    assert!(has(FigurePoint { rho: 6, ell: 2, delta: 0, aut_finite: true, efs: true }));
    assert!(has(FigurePoint { rho: 1, ell: 1, delta: 1, aut_finite: true, efs: false }));
    assert!(has(FigurePoint { rho: 20, ell: 2, delta: 1, aut_finite: false, efs: true }));
    assert!(verify_figure().passed());
    let (only_tables, only_plot) = class_differences();
    assert!(only_tables.is_empty());
    assert_eq!(only_plot.len(), 1);
    let csv = figure_csv(&pts);
    assert!(csv.starts_with("rho,ell,delta,aut,efs\n"));
    assert_eq!(csv.lines().count(), pts.len() + 1);
}

#[test]
fn json_report_is_deterministic() {
    let sel = TableId::parse_selection("1,nofib").unwrap();
    let a = verify_tables(&sel, false, &opts()).to_json();
    let b = verify_tables(&sel, false, &VerifyOptions { jobs: 2, ..opts() }).to_json();
    assert_eq!(a, b);
    assert_eq!(a["summary"]["fail"], 0);
}
