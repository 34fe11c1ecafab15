//! Fixtures for the classification tables and the harness that checks them.

pub mod figure;
pub mod fixtures;
pub mod verify;

pub use figure::{figure_csv, figure_data, plotted_data, verify_figure, FigurePoint};
pub use fixtures::{glue_for, glue_rows, nikulin_lists, rows_in, table_rows, FrameEntry, GlueRow, TableId, TableRow};
pub use verify::{
    verify_frames, verify_glue, verify_invariants, verify_multiplicities, verify_nikulin_criteria, CheckRecord,
    Status, VerificationReport, VerifyOptions,
};

/// Runs every check that applies to `tables`. Multiplicities are included
/// when `multiplicities` is set.
pub fn verify_tables(tables: &[TableId], multiplicities: bool, opts: &VerifyOptions) -> VerificationReport {
    let rows = rows_in(tables);
    let mut report = verify_invariants(&rows, opts);
    report.merge(verify_frames(&rows, opts));
    if multiplicities {
        report.merge(verify_multiplicities(&rows, opts));
    }
    report.merge(verify_glue(tables, opts));
    if tables.contains(&TableId::Nikulin) {
        let all = rows_in(&[TableId::Numbered(1), TableId::Numbered(2)]);
        report.merge(verify_nikulin_criteria(&all, opts));
    }
    if tables.contains(&TableId::Figure) {
        report.merge(verify_figure());
    }
    report
}
