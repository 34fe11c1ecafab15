//! The `(rho, l, delta)` scatter of all 2-elementary rows.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use serde::Serialize;

use crate::tables::fixtures::{plotted_points, table_rows, TableId};
use crate::tables::verify::{CheckRecord, Status, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FigurePoint {
    pub rho: usize,
    pub ell: usize,
    pub delta: u8,
    pub aut_finite: bool,
    /// Has a Jacobian elliptic fibration.
    pub efs: bool,
}

impl FigurePoint {
    pub fn triple(&self) -> (usize, usize, u8) {
        (self.rho, self.ell, self.delta)
    }
}

/// Points built from the lattice fixtures, one per distinct class.
pub fn figure_data() -> Vec<FigurePoint> {
    let set: BTreeSet<FigurePoint> = table_rows()
        .iter()
        .filter(|r| TableId::LATTICE_TABLES.contains(&r.table))
        .filter_map(|r| {
            let t = r.printed_triple()?;
            Some(FigurePoint {
                rho: t.rho,
                ell: t.length,
                delta: t.delta,
                aut_finite: r.aut_finite,
                efs: !r.frames.is_empty(),
            })
        })
        .collect();
    set.into_iter().collect()
}

/// Points decoded from the plotted markers. Abscissae are rounded, dots mean
/// `delta = 1` and crosses `delta = 0`, red and cyan mean no fibration
/// (drawn over a black marker at the same place), blue and cyan mean an
/// infinite automorphism group.
pub fn plotted_data() -> Vec<FigurePoint> {
    let mut by_pos: BTreeMap<(usize, usize, u8), Vec<(bool, bool)>> = BTreeMap::new();
    for p in plotted_points() {
        let delta = u8::from(p.mark == "dot");
        let aut_finite = matches!(p.color.as_str(), "black" | "red");
        let efs = matches!(p.color.as_str(), "black" | "blue");
        by_pos
            .entry((p.x.round() as usize, p.y, delta))
            .or_default()
            .push((aut_finite, efs));
    }
    let mut out = Vec::new();
    for ((rho, ell, delta), classes) in by_pos {
        let overdrawn = classes.iter().any(|c| !c.1);
        let mut seen = BTreeSet::new();
        for (aut_finite, efs) in classes {
            if overdrawn && efs && aut_finite {
                continue;
            }
            if seen.insert((aut_finite, efs)) {
                out.push(FigurePoint {
                    rho,
                    ell,
                    delta,
                    aut_finite,
                    efs,
                });
            }
        }
    }
    out.sort();
    out
}

/// Classes on which the plot and the fixtures disagree, as
/// `(only in fixtures, only in plot)`.
pub fn class_differences() -> (Vec<FigurePoint>, Vec<FigurePoint>) {
    let a: BTreeSet<FigurePoint> = figure_data().into_iter().collect();
    let b: BTreeSet<FigurePoint> = plotted_data().into_iter().collect();
    (a.difference(&b).copied().collect(), b.difference(&a).copied().collect())
}

/// The triples of the fixtures are exactly those plotted.
pub fn verify_figure() -> VerificationReport {
    let start = Instant::now();
    let fixtures: BTreeSet<_> = figure_data().iter().map(FigurePoint::triple).collect();
    let plotted: BTreeSet<_> = plotted_data().iter().map(FigurePoint::triple).collect();
    let fmt = |s: &BTreeSet<(usize, usize, u8)>| {
        s.iter().map(|t| format!("{t:?}")).collect::<Vec<_>>().join(" ")
    };
    let missing: BTreeSet<_> = plotted.difference(&fixtures).copied().collect();
    let extra: BTreeSet<_> = fixtures.difference(&plotted).copied().collect();
    VerificationReport {
        records: vec![CheckRecord {
            table: TableId::Figure,
            row: 1,
            subject: "figure".into(),
            check: "triple set equals plotted points".into(),
            status: if missing.is_empty() && extra.is_empty() {
                Status::Pass
            } else {
                Status::Fail
            },
            expected: format!("{} plotted triples; missing from fixtures: {}", plotted.len(), fmt(&missing)),
            computed: format!("{} fixture triples; not plotted: {}", fixtures.len(), fmt(&extra)),
            millis: start.elapsed().as_millis(),
        }],
    }
}

pub fn figure_csv(points: &[FigurePoint]) -> String {
    let mut out = String::from("rho,ell,delta,aut,efs\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            p.rho,
            p.ell,
            p.delta,
            if p.aut_finite { "finite" } else { "infinite" },
            if p.efs { "efs" } else { "no efs" }
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn has(rho: usize, ell: usize, delta: u8, aut_finite: bool, efs: bool) -> bool {
        figure_data().contains(&FigurePoint {
            rho,
            ell,
            delta,
            aut_finite,
            efs,
        })
    }

    #[test]
    fn known_points() {
        assert!(has(19, 1, 1, true, true));
        assert!(has(10, 10, 0, false, false));
        assert!(has(11, 11, 1, false, false));
        assert!(has(2, 2, 1, true, false));
    }

    #[test]
    fn triples_match_plot() {
        assert!(verify_figure().passed(), "{}", verify_figure().to_table());
    }

    #[test]
    fn only_known_class_difference() {
        let (only_fixtures, only_plot) = class_differences();
        assert!(only_fixtures.is_empty(), "{only_fixtures:?}");
        assert_eq!(
            only_plot,
            vec![FigurePoint {
                rho: 10,
                ell: 8,
                delta: 0,
                aut_finite: true,
                efs: true
            }]
        );
    }
}
