//! Checks the fixtures against computed invariants.

use std::fmt::Write as _;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::discform::{discriminant_form, invariant_triple, TwoElementaryTriple};
use crate::error::{Error, Result};
use crate::isom::budget::Budget;
use crate::isom::multiplicity::multiplicity;
use crate::lattice::{GramLattice, Signature};
use crate::parse::{parse_expr, parse_lattice_expr, Atom, LatticeExpr};
use crate::roots::decomp::{root_sublattice, RootType};
use crate::roots::frame::{frame_lattice, frame_verify_lattice};
use crate::roots::overlattice::overlattice_from_glue;
use crate::tables::fixtures::{
    factor_det, glue_for, glue_rows, nikulin_lists, GlueRow, TableId, TableRow,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "skipped (budget)")]
    Skipped,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skipped (budget)",
        })
    }
}

/// Outcome of one check on one table row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub table: TableId,
    pub row: usize,
    /// The lattice or frame the check concerns.
    pub subject: String,
    pub check: String,
    pub status: Status,
    pub expected: String,
    pub computed: String,
    #[serde(skip)]
    pub millis: u128,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub records: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn merge(&mut self, other: VerificationReport) {
        self.records.extend(other.records);
        self.sort();
    }

    fn sort(&mut self) {
        // Stable, so checks on one row keep their order.
        self.records.sort_by(|a, b| (a.table, a.row).cmp(&(b.table, b.row)));
    }

    pub fn count(&self, status: Status) -> usize {
        self.records.iter().filter(|r| r.status == status).count()
    }

    pub fn failures(&self) -> Vec<&CheckRecord> {
        self.records.iter().filter(|r| r.status == Status::Fail).collect()
    }

    pub fn passed(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    /// A row is verified only if every non-skipped check on it passed.
    pub fn row_verified(&self, table: TableId, row: usize) -> bool {
        self.records
            .iter()
            .filter(|r| r.table == table && r.row == row)
            .all(|r| r.status != Status::Fail)
    }

    /// Deterministic JSON; timings are left out.
    pub fn to_json(&self) -> Value {
        json!({
            "summary": {
                "pass": self.count(Status::Pass),
                "fail": self.count(Status::Fail),
                "skipped": self.count(Status::Skipped),
            },
            "records": self.records,
        })
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let _ = write!(out, "{:<8} {:>3}  {:<16} {:<32} {:<40}", r.table, r.row, r.status, r.check, r.subject);
            if r.status != Status::Pass {
                let _ = write!(out, "  expected {} computed {}", r.expected, r.computed);
            }
            let _ = writeln!(out, "  {} ms", r.millis);
        }
        let _ = writeln!(
            out,
            "{} passed, {} failed, {} skipped",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skipped)
        );
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("table,row,subject,check,status,expected,computed\n");
        for r in &self.records {
            let cells = [
                r.table.to_string(),
                r.row.to_string(),
                r.subject.clone(),
                r.check.clone(),
                r.status.to_string(),
                r.expected.clone(),
                r.computed.clone(),
            ];
            let quoted: Vec<String> = cells.iter().map(|c| csv_cell(c)).collect();
            out.push_str(&quoted.join(","));
            out.push('\n');
        }
        out
    }
}

pub(crate) fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

/// Settings shared by the verification operations.
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Per computation.
    pub budget: Budget,
    /// Attempt frames tagged long-running instead of skipping them.
    pub include_long_running: bool,
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            budget: Budget::default(),
            include_long_running: false,
            jobs: 0,
        }
    }
}

struct Recorder<'a> {
    table: TableId,
    row: usize,
    subject: &'a str,
    out: Vec<CheckRecord>,
}

impl<'a> Recorder<'a> {
    fn new(table: TableId, row: usize, subject: &'a str) -> Self {
        Recorder {
            table,
            row,
            subject,
            out: Vec::new(),
        }
    }

    fn push(&mut self, check: &str, status: Status, expected: impl ToString, computed: impl ToString, start: Instant) {
        self.out.push(CheckRecord {
            table: self.table,
            row: self.row,
            subject: self.subject.to_string(),
            check: check.to_string(),
            status,
            expected: expected.to_string(),
            computed: computed.to_string(),
            millis: start.elapsed().as_millis(),
        });
    }

    fn check(&mut self, check: &str, passed: bool, expected: impl ToString, computed: impl ToString, start: Instant) {
        let status = if passed { Status::Pass } else { Status::Fail };
        self.push(check, status, expected, computed, start);
    }

    fn error(&mut self, check: &str, expected: impl ToString, e: &Error, start: Instant) {
        let status = if matches!(e, Error::Budget(_)) {
            Status::Skipped
        } else {
            Status::Fail
        };
        self.push(check, status, expected, e, start);
    }
}

fn run_parallel<T: Sync, F>(items: &[T], jobs: usize, f: F) -> VerificationReport
where
    F: Fn(&T) -> Vec<CheckRecord> + Sync + Send,
{
    let collect = || items.par_iter().map(&f).collect::<Vec<_>>();
    let chunks = match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(collect),
        Err(_) => collect(),
    };
    let mut report = VerificationReport {
        records: chunks.into_iter().flatten().collect(),
    };
    report.sort();
    report
}

fn format_factors(f: &[(u64, u32)]) -> String {
    if f.is_empty() {
        return "1".into();
    }
    f.iter()
        .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

fn factor(n: &BigInt) -> Vec<(u64, u32)> {
    let mut n: u128 = n.abs().try_into().unwrap_or(u128::MAX);
    let mut out = Vec::new();
    let mut p = 2u64;
    while (p as u128) * (p as u128) <= n {
        let mut e = 0;
        while n % p as u128 == 0 {
            n /= p as u128;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n as u64, 1));
    }
    out
}

/// The printed invariants of the row, as computed from `lattice`.
fn row_invariants(l: &GramLattice) -> Result<(String, Option<TwoElementaryTriple>)> {
    let det = format_factors(&factor(&l.determinant()));
    let f = discriminant_form(l)?;
    let triple = if f.is_two_elementary() {
        Some(invariant_triple(l)?)
    } else {
        None
    };
    Ok((det, triple))
}

fn triple_text(rho: usize, t: Option<TwoElementaryTriple>) -> String {
    match t {
        Some(t) => t.to_string(),
        None => format!("({rho},--,--)"),
    }
}

fn invariants_of_row(row: &TableRow) -> Vec<CheckRecord> {
    let mut rec = Recorder::new(row.table, row.row, &row.lattice);
    let start = Instant::now();
    let l = match parse_lattice_expr(&row.lattice) {
        Ok(l) => l,
        Err(e) => {
            rec.error("parse", &row.lattice, &e, start);
            return rec.out;
        }
    };
    let hyperbolic = l.signature()
        == Signature {
            n_plus: 1,
            n_minus: row.rho.saturating_sub(1),
            n_zero: 0,
        };
    rec.check(
        "even hyperbolic of rank rho",
        l.is_even() && hyperbolic && l.rank() == row.rho,
        format!("even, signature (1,{})", row.rho.saturating_sub(1)),
        format!("{}, signature {:?}", if l.is_even() { "even" } else { "odd" }, l.signature()),
        start,
    );
    let start = Instant::now();
    let computed = match row_invariants(&l) {
        Ok(c) => c,
        Err(e) => {
            rec.error("det and delta", &row.det, &e, start);
            return rec.out;
        }
    };
    let printed_det = factor_det(&row.det).map(|f| format_factors(&f)).unwrap_or_else(|e| e.to_string());
    rec.check("det q_L", printed_det == computed.0, &printed_det, &computed.0, start);
    let printed = row.printed_triple();
    let delta_ok = match (printed, computed.1) {
        (Some(p), Some(c)) => p == c,
        (None, None) => row.delta.is_none(),
        _ => false,
    };
    rec.check(
        "invariant triple",
        delta_ok,
        triple_text(row.rho, printed),
        triple_text(l.rank(), computed.1),
        start,
    );
    for alt in &row.alt {
        let start = Instant::now();
        match parse_lattice_expr(alt).and_then(|a| Ok((a.rank(), a.is_even(), row_invariants(&a)?))) {
            Ok((rank, even, (det, triple))) => rec.check(
                &format!("isomorphic decomposition {alt}"),
                rank == l.rank() && even && det == computed.0 && triple == computed.1,
                triple_text(l.rank(), computed.1),
                triple_text(rank, triple),
                start,
            ),
            Err(e) => rec.error(&format!("isomorphic decomposition {alt}"), alt, &e, start),
        }
    }
    rec.out
}

/// Rank, `|det q_L|` and `delta` of every row, and agreement of the
/// isomorphic decompositions printed with it.
pub fn verify_invariants(rows: &[&TableRow], opts: &VerifyOptions) -> VerificationReport {
    run_parallel(rows, opts.jobs, |r| invariants_of_row(r))
}

fn frame_subject(row: &TableRow, i: usize) -> String {
    let f = &row.frames[i];
    let mut s = format!("{} | {} {}", row.lattice, f.root_type, f.w);
    if f.blue {
        s.push_str(" (blue)");
    }
    s
}

/// The frame lattice `K` of frame `i`, with its glue when there is one.
pub fn frame_k(row: &TableRow, i: usize) -> Result<GramLattice> {
    let f = &row.frames[i];
    if let Some(expr) = &f.k_expr {
        return parse_lattice_expr(expr);
    }
    let glue = if f.w.torsion.is_empty() {
        Vec::new()
    } else {
        glue_for(row, i)
            .ok_or_else(|| Error::input(format!("no glue recorded for {}", frame_subject(row, i))))?
            .vectors()?
    };
    frame_lattice(&f.root_type, &glue)
}

fn frames_of_row(row: &TableRow, budget: &Budget) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let l = match parse_lattice_expr(&row.lattice) {
        Ok(l) => l,
        Err(_) => return out,
    };
    for i in 0..row.frames.len() {
        let subject = frame_subject(row, i);
        let mut rec = Recorder::new(row.table, row.row, &subject);
        let start = Instant::now();
        let f = &row.frames[i];
        match frame_k(row, i).and_then(|k| frame_verify_lattice(&l, &k, &f.root_type, &f.w, budget)) {
            Ok(verdict) => {
                for c in verdict.checks {
                    rec.check(c.name, c.passed, c.expected, c.computed, start);
                }
            }
            Err(e) => rec.error("frame", format!("{} {}", f.root_type, f.w), &e, start),
        }
        out.extend(rec.out);
    }
    out
}

/// Structure of every frame: `H + K` reproduces the row, with the stated
/// root type and Mordell–Weil group.
pub fn verify_frames(rows: &[&TableRow], opts: &VerifyOptions) -> VerificationReport {
    run_parallel(rows, opts.jobs, |r| frames_of_row(r, &opts.budget))
}

fn multiplicities_of_row(row: &TableRow, opts: &VerifyOptions) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for (i, f) in row.frames.iter().enumerate() {
        let Some(ratio) = f.ratio else { continue };
        let subject = frame_subject(row, i);
        let mut rec = Recorder::new(row.table, row.row, &subject);
        let start = Instant::now();
        let k = match frame_k(row, i) {
            Ok(k) => k,
            Err(e) => {
                rec.error("multiplicity", ratio, &e, start);
                out.extend(rec.out);
                continue;
            }
        };
        if f.long_running && !opts.include_long_running {
            let size = discriminant_form(&k)
                .map(|d| format!("long-running: rank {}, |D| = {}", k.rank(), d.order()))
                .unwrap_or_else(|e| e.to_string());
            rec.push("multiplicity", Status::Skipped, ratio, size, start);
        } else {
            match multiplicity(&k, &opts.budget) {
                Ok(m) => rec.check("multiplicity", m.ratio == ratio.into(), ratio, &m.ratio, start),
                Err(e) => rec.error("multiplicity", ratio, &e, start),
            }
        }
        out.extend(rec.out);
    }
    out
}

/// `|A| / |B|` of every frame that prints one.
pub fn verify_multiplicities(rows: &[&TableRow], opts: &VerifyOptions) -> VerificationReport {
    // Heavy frames first, so they do not trail the parallel run.
    let mut order: Vec<&TableRow> = rows.to_vec();
    order.sort_by_key(|r| std::cmp::Reverse(r.rho));
    run_parallel(&order, opts.jobs, |r| multiplicities_of_row(r, opts))
}

fn glue_row_checks(g: &GlueRow) -> Vec<CheckRecord> {
    let subject = format!("{} {}", g.root_type, g.glue.iter().map(|v| v.join(",")).collect::<Vec<_>>().join(";"));
    let mut rec = Recorder::new(g.table, g.row, &subject);
    let start = Instant::now();
    let kroot = g.root_type.lattice();
    let over = g.vectors().and_then(|v| overlattice_from_glue(&kroot, &v));
    match over {
        Ok(o) => {
            let want = 1u64 << g.glue.len();
            rec.check("index", o.index == want.into(), want, &o.index, start);
            rec.check("even", o.lattice.is_even(), true, o.lattice.is_even(), start);
            let lhs = o.lattice.determinant().abs() * BigInt::from(o.index.clone()) * BigInt::from(o.index.clone());
            let rhs = kroot.determinant().abs();
            rec.check("|det| * index^2 = |det K^root|", lhs == rhs, &rhs, &lhs, start);
            let h = crate::lattice::direct_sum(&crate::lattice::hyperbolic(), &o.lattice);
            match invariant_triple(&h) {
                Ok(t) => rec.check("triple of H + K", t == g.target_triple(), g.target_triple(), t, start),
                Err(e) => rec.error("triple of H + K", g.target_triple(), &e, start),
            }
        }
        Err(e) => rec.error("overlattice", "even overlattice", &e, start),
    }
    rec.out
}

/// Every glue row gives an even overlattice of the expected index.
pub fn verify_glue(tables: &[TableId], opts: &VerifyOptions) -> VerificationReport {
    let rows: Vec<&GlueRow> = glue_rows().iter().filter(|g| tables.contains(&g.table)).collect();
    run_parallel(&rows, opts.jobs, |g| glue_row_checks(g))
}

/// `K` in a printed decomposition `H + K`, trying the alternatives in turn.
pub fn complement(row: &TableRow) -> Option<(String, GramLattice)> {
    std::iter::once(&row.lattice).chain(&row.alt).find_map(|text| {
        let mut terms = match parse_expr(text).ok()? {
            LatticeExpr::Sum(terms) => terms,
            single => vec![single],
        };
        if terms.first() != Some(&LatticeExpr::Atom(Atom::Hyperbolic)) {
            return None;
        }
        terms.remove(0);
        let k = match terms.len() {
            0 => return Some(("0".into(), GramLattice::zero_dimensional())),
            1 => terms.pop().expect("one term"),
            _ => LatticeExpr::Sum(terms),
        };
        Some((k.to_string(), k.elaborate().ok()?))
    })
}

fn nikulin_row(row: &TableRow) -> Vec<CheckRecord> {
    let lists = nikulin_lists();
    let mut rec = Recorder::new(row.table, row.row, &row.lattice);
    let start = Instant::now();
    let Some((kexpr, k)) = complement(row) else {
        rec.check("decomposes as H + K", false, "H + K", "no H summand", start);
        return rec.out;
    };
    let result = (|| -> Result<(String, bool, String)> {
        let fk = discriminant_form(&k)?;
        if fk.is_two_elementary() {
            let t = invariant_triple(&k)?;
            let a = parse_lattice_expr(&lists.case_i_a)?;
            if k == a || (t == invariant_triple(&a)? && k.rank() == a.rank()) {
                return Ok(("(i)(a)".into(), true, format!("K = {kexpr}")));
            }
            let excluded = invariant_triple(&parse_lattice_expr(&lists.excluded_2_elementary)?)?;
            let ok = t != excluded && t.rho + t.length <= lists.max_rank_plus_length;
            Ok((
                "(i)(b)".into(),
                ok,
                format!("K triple {t}, rank + l = {}", t.rho + t.length),
            ))
        } else {
            let d = root_sublattice(&k)?;
            let rt: RootType = d.root_type;
            let hit = lists.case_ii.iter().find(|e| e.root_type == rt);
            let ok = hit.is_some() && rt.rank() == k.rank() && k.rank() <= lists.max_rank_case_ii;
            let note = match hit {
                Some(e) if e.added => " (added to the printed list)",
                _ => "",
            };
            Ok(("(ii)".into(), ok, format!("K(-1) = {rt}{note}")))
        }
    })();
    match result {
        Ok((case, ok, detail)) => rec.check(&format!("Nikulin case {case}"), ok, "criterion holds", detail, start),
        Err(e) => rec.error("Nikulin criteria", "criterion holds", &e, start),
    }
    rec.out
}

/// Nikulin's criteria on every finite-automorphism row with a fibration.
pub fn verify_nikulin_criteria(rows: &[&TableRow], opts: &VerifyOptions) -> VerificationReport {
    let eligible: Vec<&TableRow> = rows
        .iter()
        .copied()
        .filter(|r| r.aut_finite && !r.frames.is_empty())
        .collect();
    run_parallel(&eligible, opts.jobs, |r| nikulin_row(r))
}
