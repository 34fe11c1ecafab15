//! Root sublattices, their ADE types, and the Mordell–Weil group `K / K^root`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{self, GramLattice, RootFamily};
use crate::linalg;
use crate::roots::shortvec::short_vectors;

/// A multiset of ADE components, kept sorted (A, then D, then E; rank ascending).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct RootType(Vec<(RootFamily, usize)>);

fn family_key(f: RootFamily) -> u8 {
    match f {
        RootFamily::A => 0,
        RootFamily::D => 1,
        RootFamily::E => 2,
    }
}

impl RootType {
    pub fn new(mut components: Vec<(RootFamily, usize)>) -> Result<Self> {
        for &(f, n) in &components {
            lattice::root_lattice(f, n)?;
        }
        components.sort_by_key(|&(f, n)| (family_key(f), n));
        Ok(RootType(components))
    }

    pub fn components(&self) -> &[(RootFamily, usize)] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.iter().map(|c| c.1).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The negative definite lattice `R(-1)` in the concatenated simple-root bases.
    pub fn lattice(&self) -> GramLattice {
        self.0.iter().fold(GramLattice::zero_dimensional(), |acc, &(f, n)| {
            let r = lattice::root_lattice(f, n).expect("validated component");
            lattice::direct_sum(&acc, &lattice::twist(&r, -1).expect("nonzero twist"))
        })
    }
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut counts: Vec<((RootFamily, usize), usize)> = Vec::new();
        for &c in &self.0 {
            match counts.last_mut() {
                Some((last, k)) if *last == c => *k += 1,
                _ => counts.push((c, 1)),
            }
        }
        for (i, ((fam, n), k)) in counts.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if *k > 1 {
                write!(f, "{k}")?;
            }
            write!(f, "{fam}{n}")?;
        }
        Ok(())
    }
}

impl FromStr for RootType {
    type Err = Error;

    /// Parses strings such as `4A1+2D4`, `E8 + D6 + A1`, or `0` for the empty type.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() || t == "0" || t == "--" {
            return Ok(RootType::default());
        }
        let mut comps = Vec::new();
        for part in t.split('+') {
            let p: String = part.chars().filter(|c| !c.is_whitespace()).collect();
            let digits = p.chars().take_while(|c| c.is_ascii_digit()).count();
            let mult: usize = if digits == 0 {
                1
            } else {
                p[..digits].parse().map_err(|_| Error::input(format!("bad multiplicity in '{part}'")))?
            };
            let rest = &p[digits..];
            let fam = match rest.chars().next() {
                Some('A') => RootFamily::A,
                Some('D') => RootFamily::D,
                Some('E') => RootFamily::E,
                _ => return Err(Error::input(format!("bad root component '{part}'"))),
            };
            let rank: usize = rest[1..]
                .trim_start_matches('_')
                .parse()
                .map_err(|_| Error::input(format!("bad rank in '{part}'")))?;
            if mult == 0 {
                return Err(Error::input(format!("zero multiplicity in '{part}'")));
            }
            for _ in 0..mult {
                comps.push((fam, rank));
            }
        }
        RootType::new(comps)
    }
}

impl Serialize for RootType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RootType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDecomposition {
    pub root_type: RootType,
    /// Simple roots in lattice coordinates, component by component in the
    /// order of `root_type`, each in the fixed Dynkin ordering.
    pub root_basis: Vec<Vec<i64>>,
}

/// `K / K^root` as an abstract group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MordellWeilGroup {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl MordellWeilGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn order(&self) -> Option<u64> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }
}

impl fmt::Display for MordellWeilGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".to_string() } else { format!("Z^{}", self.free_rank) });
        }
        let mut by_order: BTreeMap<u64, usize> = BTreeMap::new();
        for &d in &self.torsion {
            *by_order.entry(d).or_default() += 1;
        }
        for (d, k) in by_order {
            parts.push(if k == 1 { format!("Z/{d}") } else { format!("(Z/{d})^{k}") });
        }
        if parts.is_empty() {
            write!(f, "trivial")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

impl FromStr for MordellWeilGroup {
    type Err = Error;

    /// Accepts `trivial`, `Z/2`, `Z/2Z`, `(Z/2)^2`, `Z^8`, and sums of these.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut w = MordellWeilGroup::trivial();
        if t.is_empty() || t == "trivial" || t == "1" || t == "0" {
            return Ok(w);
        }
        let bad = || Error::input(format!("bad Mordell-Weil group '{s}'"));
        for part in t.split('+') {
            let (base, exp) = match part.rsplit_once('^') {
                Some((b, e)) => (b, e.parse::<usize>().map_err(|_| bad())?),
                None => (part, 1),
            };
            let base = base.trim_start_matches('(').trim_end_matches(')');
            if base == "Z" {
                w.free_rank += exp;
            } else if let Some(d) = base.strip_prefix("Z/") {
                let d: u64 = d.trim_end_matches('Z').parse().map_err(|_| bad())?;
                if d < 2 {
                    return Err(bad());
                }
                w.torsion.extend(std::iter::repeat_n(d, exp));
            } else {
                return Err(bad());
            }
        }
        w.torsion.sort_unstable();
        Ok(w)
    }
}

impl Serialize for MordellWeilGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for MordellWeilGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn dot(g: &[Vec<i64>], x: &[i64], y: &[i64]) -> i64 {
    let mut s = 0;
    for i in 0..x.len() {
        if x[i] == 0 {
            continue;
        }
        for j in 0..y.len() {
            s += x[i] * g[i][j] * y[j];
        }
    }
    s
}

/// Identifies a connected Dynkin diagram from its rank and `|det|`.
fn identify(rank: usize, det: u64) -> Option<(RootFamily, usize)> {
    match (rank, det) {
        (n, d) if d == n as u64 + 1 => Some((RootFamily::A, n)),
        (n, 4) if n >= 4 => Some((RootFamily::D, n)),
        (6, 3) => Some((RootFamily::E, 6)),
        (7, 2) => Some((RootFamily::E, 7)),
        (8, 1) => Some((RootFamily::E, 8)),
        _ => None,
    }
}

/// Orders the nodes of a connected Dynkin diagram as in [`lattice::dynkin_edges`].
fn dynkin_order(family: RootFamily, nodes: &[usize], adj: &dyn Fn(usize, usize) -> bool) -> Vec<usize> {
    let nbrs = |v: usize| -> Vec<usize> { nodes.iter().copied().filter(|&w| w != v && adj(v, w)).collect() };
    // Walks from `start` away from `prev` until a node of degree != 2 or a leaf.
    let walk = |start: usize, prev: usize| -> Vec<usize> {
        let mut path = vec![start];
        let (mut cur, mut last) = (start, prev);
        loop {
            let next: Vec<usize> = nbrs(cur).into_iter().filter(|&w| w != last).collect();
            if next.len() != 1 {
                break;
            }
            last = cur;
            cur = next[0];
            path.push(cur);
        }
        path
    };
    if nodes.len() == 1 {
        return nodes.to_vec();
    }
    match family {
        RootFamily::A => {
            let start = *nodes.iter().find(|&&v| nbrs(v).len() == 1).expect("a chain has an end");
            walk(start, usize::MAX)
        }
        RootFamily::D | RootFamily::E => {
            let branch = *nodes.iter().find(|&&v| nbrs(v).len() == 3).expect("a branch node");
            let mut arms: Vec<Vec<usize>> = nbrs(branch).into_iter().map(|w| walk(w, branch)).collect();
            arms.sort_by_key(|a| (a.len(), a[0]));
            match family {
                RootFamily::D => {
                    // Two short arms are the fork; the longest arm leads from a_1.
                    let long = arms.pop().expect("three arms");
                    let mut order: Vec<usize> = long.into_iter().rev().collect();
                    order.push(branch);
                    order.push(arms[0][0]);
                    order.push(arms[1][0]);
                    order
                }
                _ => {
                    // Arms of lengths 1, 2, n-4: a_2 | a_3 a_1 | a_5 a_6 ...
                    let a2 = arms[0][0];
                    let (a3, a1) = (arms[1][0], arms[1][1]);
                    let mut order = vec![a1, a2, a3, branch];
                    order.extend(arms[2].iter().copied());
                    order
                }
            }
        }
    }
}

/// Root sublattice of a negative definite even lattice.
pub fn root_sublattice(k: &GramLattice) -> Result<RootDecomposition> {
    if k.rank() == 0 {
        return Ok(RootDecomposition {
            root_type: RootType::default(),
            root_basis: Vec::new(),
        });
    }
    if !k.is_negative_definite() || !k.is_even() {
        return Err(Error::input("root sublattice requires a negative definite even lattice"));
    }
    let g = k.gram_i64().ok_or_else(|| Error::input("Gram entries too large"))?;
    // Canonical representatives are the positive roots for the functional
    // (1, e, e^2, ...) with e > 0 small enough.
    let positive = short_vectors(k, -2)?;
    let set: HashSet<&Vec<i64>> = positive.iter().collect();
    let mut decomposable: HashSet<Vec<i64>> = HashSet::new();
    for (i, a) in positive.iter().enumerate() {
        for b in &positive[i + 1..] {
            let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            if set.contains(&s) {
                decomposable.insert(s);
            }
        }
    }
    let simple: Vec<&Vec<i64>> = positive.iter().filter(|r| !decomposable.contains(*r)).collect();
    let m = simple.len();
    let adj = |a: usize, b: usize| dot(&g, simple[a], simple[b]) != 0;
    let mut comp = vec![usize::MAX; m];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for s in 0..m {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut stack = vec![s];
        let mut nodes = Vec::new();
        comp[s] = id;
        while let Some(v) = stack.pop() {
            nodes.push(v);
            for w in 0..m {
                if comp[w] == usize::MAX && adj(v, w) {
                    comp[w] = id;
                    stack.push(w);
                }
            }
        }
        nodes.sort_unstable();
        components.push(nodes);
    }
    let mut typed: Vec<((RootFamily, usize), Vec<usize>)> = Vec::new();
    for nodes in components {
        let sub: Vec<Vec<BigInt>> = nodes
            .iter()
            .map(|&a| nodes.iter().map(|&b| BigInt::from(dot(&g, simple[a], simple[b]))).collect())
            .collect();
        let det = linalg::determinant(&sub).abs().to_u64().unwrap_or(0);
        let ty = identify(nodes.len(), det)
            .ok_or_else(|| Error::internal(format!("unrecognised root component of rank {} and det {det}", nodes.len())))?;
        let ordered = dynkin_order(ty.0, &nodes, &adj);
        typed.push((ty, ordered));
    }
    typed.sort_by_key(|((f, n), nodes)| (family_key(*f), *n, simple[nodes[0]].clone()));
    let root_type = RootType::new(typed.iter().map(|t| t.0).collect())?;
    let root_basis: Vec<Vec<i64>> = typed
        .iter()
        .flat_map(|(_, nodes)| nodes.iter().map(|&i| simple[i].clone()))
        .collect();
    let rebuilt: Vec<Vec<BigInt>> = root_basis
        .iter()
        .map(|a| root_basis.iter().map(|b| BigInt::from(dot(&g, a, b))).collect())
        .collect();
    if rebuilt != root_type.lattice().gram() {
        return Err(Error::internal("simple roots do not reproduce the Cartan matrix"));
    }
    Ok(RootDecomposition { root_type, root_basis })
}

/// `K / K^root`: free rank and torsion invariant factors.
pub fn mordell_weil(k: &GramLattice) -> Result<MordellWeilGroup> {
    let d = root_sublattice(k)?;
    let m = d.root_basis.len();
    let mut torsion = Vec::new();
    if m > 0 {
        let rows: Vec<Vec<BigInt>> = d
            .root_basis
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        for x in linalg::smith(&rows).diagonal {
            let x = x.abs();
            if !x.is_one() {
                torsion.push(x.to_u64().ok_or_else(|| Error::internal("torsion factor too large"))?);
            }
        }
    }
    torsion.sort_unstable();
    Ok(MordellWeilGroup {
        free_rank: k.rank() - m,
        torsion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_lattice_expr;

    fn decomp(expr: &str) -> RootDecomposition {
        root_sublattice(&parse_lattice_expr(expr).unwrap()).unwrap()
    }

    #[test]
    fn root_types_of_sums() {
        for t in ["E8", "A1", "D4", "2A1+A2", "A3+D5+E6", "D16", "D10+E7", "A7", "3D4"] {
            let rt: RootType = t.parse().unwrap();
            let d = root_sublattice(&rt.lattice()).unwrap();
            assert_eq!(d.root_type, rt, "{t}");
            assert_eq!(d.root_type.to_string(), t);
        }
    }

    #[test]
    fn nikulin_lattice() {
        let d = decomp("N");
        assert_eq!(d.root_type.to_string(), "8A1");
        let w = mordell_weil(&parse_lattice_expr("N").unwrap()).unwrap();
        assert_eq!(w, "Z/2".parse().unwrap());
    }

    #[test]
    fn no_roots() {
        let l = parse_lattice_expr("E8(-2)").unwrap();
        assert!(root_sublattice(&l).unwrap().root_type.is_empty());
        assert_eq!(mordell_weil(&l).unwrap().to_string(), "Z^8");
        assert_eq!(mordell_weil(&parse_lattice_expr("E8(-1)").unwrap()).unwrap(), MordellWeilGroup::trivial());
    }

    #[test]
    fn parsing_and_display() {
        let rt: RootType = "D4 + 4 A1 + E7".parse().unwrap();
        assert_eq!(rt.to_string(), "4A1+D4+E7");
        assert_eq!(rt.rank(), 15);
        assert!("D3".parse::<RootType>().is_err());
        assert!("X5".parse::<RootType>().is_err());
        let w: MordellWeilGroup = "(Z/2Z)^2".parse().unwrap();
        assert_eq!(w.torsion, vec![2, 2]);
        assert_eq!(w.to_string(), "(Z/2)^2");
        assert_eq!("Z/2Z".parse::<MordellWeilGroup>().unwrap().to_string(), "Z/2");
        assert_eq!("trivial".parse::<MordellWeilGroup>().unwrap(), MordellWeilGroup::trivial());
    }
}
