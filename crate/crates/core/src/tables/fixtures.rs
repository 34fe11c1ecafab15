//! Transcribed table data, embedded at compile time.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::discform::TwoElementaryTriple;
use crate::error::{Error, Result};
use crate::roots::decomp::{MordellWeilGroup, RootType};
use crate::roots::overlattice::{parse_glue, GlueVector};

const FRAMES: &str = include_str!("../../data/frames.jsonl");
const GLUE: &str = include_str!("../../data/glue.jsonl");
const FIGURE: &str = include_str!("../../data/figure.jsonl");
const NIKULIN: &str = include_str!("../../data/nikulin.json");

/// A table of the classification. Tables 1 to 4 and `NoFibration` hold
/// lattices; 5 to 8 hold glue vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TableId {
    Numbered(u8),
    NoFibration,
    Nikulin,
    Figure,
}

impl TableId {
    pub const LATTICE_TABLES: [TableId; 5] = [
        TableId::Numbered(1),
        TableId::Numbered(2),
        TableId::Numbered(3),
        TableId::Numbered(4),
        TableId::NoFibration,
    ];

    pub fn all() -> Vec<TableId> {
        let mut v: Vec<TableId> = (1..=8).map(TableId::Numbered).collect();
        v.push(TableId::NoFibration);
        v.push(TableId::Nikulin);
        v.push(TableId::Figure);
        v
    }

    pub fn is_glue_table(self) -> bool {
        matches!(self, TableId::Numbered(5..=8))
    }

    /// Parses a selection such as `1..4,nofib,nikulin` or `1-8`.
    pub fn parse_selection(text: &str) -> Result<Vec<TableId>> {
        let mut out = Vec::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let range = part.split_once("..").or_else(|| part.split_once('-'));
            if let Some((a, b)) = range {
                let lo: u8 = a.trim().parse().map_err(|_| Error::input(format!("bad table range '{part}'")))?;
                let hi: u8 = b.trim().parse().map_err(|_| Error::input(format!("bad table range '{part}'")))?;
                if lo == 0 || hi > 8 || lo > hi {
                    return Err(Error::input(format!("table range '{part}' outside 1..8")));
                }
                out.extend((lo..=hi).map(TableId::Numbered));
            } else {
                out.push(part.parse()?);
            }
        }
        if out.is_empty() {
            return Err(Error::input("empty table selection"));
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableId::Numbered(n) => write!(f, "{n}"),
            TableId::NoFibration => write!(f, "nofib"),
            TableId::Nikulin => write!(f, "nikulin"),
            TableId::Figure => write!(f, "figure"),
        }
    }
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "nofib" => Ok(TableId::NoFibration),
            "nikulin" => Ok(TableId::Nikulin),
            "figure" => Ok(TableId::Figure),
            t => match t.parse::<u8>() {
                Ok(n @ 1..=8) => Ok(TableId::Numbered(n)),
                _ => Err(Error::input(format!("unknown table '{t}'"))),
            },
        }
    }
}

impl Serialize for TableId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TableId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameEntry {
    pub root_type: RootType,
    pub w: MordellWeilGroup,
    /// Printed `|A| / |B|`, absent where the table has none.
    pub ratio: Option<u64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub blue: bool,
    /// Expected to exceed a desk-scale budget.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub long_running: bool,
    /// `K` given directly, for frames without roots.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_expr: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub table: TableId,
    pub row: usize,
    pub rho: usize,
    pub lattice: String,
    /// Isomorphic decompositions printed on the same row.
    #[serde(default)]
    pub alt: Vec<String>,
    /// `|D(L)|` as a product of prime powers, e.g. `2^2*3`.
    pub det: String,
    pub delta: Option<u8>,
    pub aut_finite: bool,
    pub frames: Vec<FrameEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl TableRow {
    /// `"table 2 row 5"`.
    pub fn location(&self) -> String {
        format!("table {} row {}", self.table, self.row)
    }

    /// The printed `(rho, l, delta)` if the row is 2-elementary.
    pub fn printed_triple(&self) -> Option<TwoElementaryTriple> {
        let delta = self.delta?;
        let factors = factor_det(&self.det).ok()?;
        let length = match factors.as_slice() {
            [] => 0,
            [(2, e)] => *e as usize,
            _ => return None,
        };
        Some(TwoElementaryTriple {
            rho: self.rho,
            length,
            delta,
        })
    }
}

/// Parses `2^2*3` into `[(2, 2), (3, 1)]`; `1` is the empty product.
pub fn factor_det(text: &str) -> Result<Vec<(u64, u32)>> {
    let t = text.trim();
    if t == "1" {
        return Ok(Vec::new());
    }
    let bad = || Error::input(format!("bad factored determinant '{text}'"));
    let mut out = Vec::new();
    for part in t.split(['*', '.', '·']) {
        let (p, e) = match part.trim().split_once('^') {
            Some((p, e)) => (p.trim(), e.trim().parse::<u32>().map_err(|_| bad())?),
            None => (part.trim(), 1),
        };
        let p: u64 = p.parse().map_err(|_| bad())?;
        if p < 2 {
            return Err(bad());
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlueRow {
    pub table: TableId,
    pub row: usize,
    /// As printed.
    pub triple: [usize; 3],
    pub root_type: RootType,
    pub glue: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub blue: bool,
    /// The triple of the lattice the vectors belong to, where the printed one
    /// is wrong.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub applies_to: Option<[usize; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl GlueRow {
    pub fn location(&self) -> String {
        format!("table {} row {}", self.table, self.row)
    }

    pub fn vectors(&self) -> Result<Vec<GlueVector>> {
        self.glue.iter().map(|v| parse_glue(&v.join(","))).collect()
    }

    pub fn target_triple(&self) -> TwoElementaryTriple {
        let [rho, length, delta] = self.applies_to.unwrap_or(self.triple);
        TwoElementaryTriple {
            rho,
            length,
            delta: delta as u8,
        }
    }
}

/// One plotted marker of the scatter figure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlottedPoint {
    pub color: String,
    pub mark: String,
    pub x: f64,
    pub y: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NikulinEntry {
    pub root_type: RootType,
    #[serde(default)]
    pub added: bool,
    #[serde(default)]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NikulinLists {
    pub case_i_a: String,
    pub excluded_2_elementary: String,
    pub max_rank_plus_length: usize,
    pub max_rank_case_ii: usize,
    pub case_ii: Vec<NikulinEntry>,
}

fn parse_lines<T: for<'de> Deserialize<'de>>(name: &str, text: &str) -> Vec<T> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).unwrap_or_else(|e| panic!("{name} line {}: {e}", i + 1))
        })
        .collect()
}

/// All lattice rows of Tables 1 to 4 and the no-fibration table.
pub fn table_rows() -> &'static [TableRow] {
    static ROWS: OnceLock<Vec<TableRow>> = OnceLock::new();
    ROWS.get_or_init(|| parse_lines("frames.jsonl", FRAMES))
}

/// All rows of Tables 5 to 8.
pub fn glue_rows() -> &'static [GlueRow] {
    static ROWS: OnceLock<Vec<GlueRow>> = OnceLock::new();
    ROWS.get_or_init(|| parse_lines("glue.jsonl", GLUE))
}

pub fn plotted_points() -> &'static [PlottedPoint] {
    static PTS: OnceLock<Vec<PlottedPoint>> = OnceLock::new();
    PTS.get_or_init(|| parse_lines("figure.jsonl", FIGURE))
}

pub fn nikulin_lists() -> &'static NikulinLists {
    static L: OnceLock<NikulinLists> = OnceLock::new();
    L.get_or_init(|| serde_json::from_str(NIKULIN).expect("nikulin.json"))
}

pub fn rows_in(tables: &[TableId]) -> Vec<&'static TableRow> {
    table_rows().iter().filter(|r| tables.contains(&r.table)).collect()
}

/// Key identifying the frames that share glue candidates.
type GlueKey = (TwoElementaryTriple, RootType);

fn glue_assignment() -> &'static HashMap<(TableId, usize, usize), usize> {
    static MAP: OnceLock<HashMap<(TableId, usize, usize), usize>> = OnceLock::new();
    MAP.get_or_init(|| {
        let mut pending: HashMap<GlueKey, Vec<usize>> = HashMap::new();
        for (i, g) in glue_rows().iter().enumerate() {
            pending.entry((g.target_triple(), g.root_type.clone())).or_default().push(i);
        }
        for v in pending.values_mut() {
            v.reverse();
        }
        let mut map = HashMap::new();
        for r in table_rows() {
            let Some(t) = r.printed_triple() else { continue };
            for (fi, f) in r.frames.iter().enumerate() {
                if f.w.torsion.is_empty() || f.w.free_rank > 0 {
                    continue;
                }
                if let Some(gi) = pending.get_mut(&(t, f.root_type.clone())).and_then(Vec::pop) {
                    map.insert((r.table, r.row, fi), gi);
                }
            }
        }
        map
    })
}

/// The glue row for frame `frame` of `row`: same triple and root type,
/// duplicates paired in printed order.
pub fn glue_for(row: &TableRow, frame: usize) -> Option<&'static GlueRow> {
    glue_assignment()
        .get(&(row.table, row.row, frame))
        .map(|&i| &glue_rows()[i])
}

/// Glue rows that no frame claims.
pub fn unassigned_glue() -> Vec<&'static GlueRow> {
    let used: std::collections::HashSet<usize> = glue_assignment().values().copied().collect();
    glue_rows()
        .iter()
        .enumerate()
        .filter(|(i, _)| !used.contains(i))
        .map(|(_, g)| g)
        .collect()
}
