//! Frames `(K^root, W)` of Jacobian elliptic fibrations and Kodaira fibers.

use serde_json::{json, Value};

use crate::discform::{discriminant_form, forms_isometric, invariant_triple};
use crate::error::{Error, Result};
use crate::isom::budget::Budget;
use crate::lattice::{self, GramLattice, RootFamily};
use crate::roots::decomp::{mordell_weil, root_sublattice, MordellWeilGroup, RootType};
use crate::roots::overlattice::{overlattice_from_glue, GlueVector};

/// Root lattice of the reducible fiber with the given Kodaira symbol
/// (`I_n`, `I*_m`, `II`, `III`, `IV`, `IV*`, `III*`, `II*`; underscores and
/// `^` optional), or `None` for irreducible fibers.
pub fn fiber_to_root(symbol: &str) -> Result<Option<(RootFamily, usize)>> {
    let s: String = symbol
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '_' && *c != '^' && *c != '{' && *c != '}')
        .collect();
    let bad = || Error::input(format!("unknown Kodaira symbol '{symbol}'"));
    let fixed = match s.as_str() {
        "II" => Some(None),
        "III" => Some(Some((RootFamily::A, 1))),
        "IV" => Some(Some((RootFamily::A, 2))),
        "IV*" => Some(Some((RootFamily::E, 6))),
        "III*" => Some(Some((RootFamily::E, 7))),
        "II*" => Some(Some((RootFamily::E, 8))),
        _ => None,
    };
    if let Some(r) = fixed {
        return Ok(r);
    }
    let rest = s.strip_prefix('I').ok_or_else(bad)?;
    // I*m or Im*
    let (star, digits) = if let Some(d) = rest.strip_prefix('*') {
        (true, d)
    } else if let Some(d) = rest.strip_suffix('*') {
        (true, d)
    } else {
        (false, rest)
    };
    let n: usize = digits.parse().map_err(|_| bad())?;
    Ok(if star {
        Some((RootFamily::D, n + 4))
    } else if n <= 1 {
        None
    } else {
        Some((RootFamily::A, n - 1))
    })
}

/// Builds `K` from a root type and glue.
pub fn frame_lattice(root_type: &RootType, glue: &[GlueVector]) -> Result<GramLattice> {
    let kroot = root_type.lattice();
    if glue.is_empty() {
        Ok(kroot)
    } else {
        Ok(overlattice_from_glue(&kroot, glue)?.lattice)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub expected: String,
    pub computed: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameVerdict {
    pub checks: Vec<Check>,
}

impl FrameVerdict {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({
                "check": c.name,
                "passed": c.passed,
                "expected": c.expected,
                "computed": c.computed,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Checks that `H + K` reproduces `l` and that `K` has the stated root type
/// and Mordell–Weil group. `k` is the frame lattice, normally from
/// [`frame_lattice`].
pub fn frame_verify_lattice(
    l: &GramLattice,
    k: &GramLattice,
    root_type: &RootType,
    w: &MordellWeilGroup,
    budget: &Budget,
) -> Result<FrameVerdict> {
    let mut checks = Vec::new();
    let definite = k.rank() == 0 || (k.is_negative_definite() && k.is_even());
    checks.push(Check {
        name: "even negative definite",
        passed: definite,
        expected: "true".into(),
        computed: definite.to_string(),
    });
    if !definite {
        return Ok(FrameVerdict { checks });
    }
    let hk = lattice::direct_sum(&lattice::hyperbolic(), k);
    let two = |x: &GramLattice| discriminant_form(x).map(|f| f.is_two_elementary());
    if two(l)? && two(&hk)? {
        let (a, b) = (invariant_triple(l)?, invariant_triple(&hk)?);
        checks.push(Check {
            name: "invariant triple",
            passed: a == b,
            expected: a.to_string(),
            computed: b.to_string(),
        });
    } else {
        let same_size = l.rank() == hk.rank() && l.determinant() == hk.determinant();
        let iso = same_size && forms_isometric(&discriminant_form(l)?, &discriminant_form(&hk)?, budget)?;
        checks.push(Check {
            name: "rank, determinant and discriminant form",
            passed: iso,
            expected: format!("rank {} det {}", l.rank(), l.determinant()),
            computed: format!("rank {} det {}{}", hk.rank(), hk.determinant(), if iso { "" } else { ", forms differ" }),
        });
    }
    let rt = root_sublattice(k)?.root_type;
    checks.push(Check {
        name: "root type",
        passed: &rt == root_type,
        expected: root_type.to_string(),
        computed: rt.to_string(),
    });
    let mw = mordell_weil(k)?;
    checks.push(Check {
        name: "Mordell-Weil group",
        passed: &mw == w,
        expected: w.to_string(),
        computed: mw.to_string(),
    });
    Ok(FrameVerdict { checks })
}

/// [`frame_verify_lattice`] with `K` built from `root_type` and `glue`.
pub fn frame_verify(
    l: &GramLattice,
    root_type: &RootType,
    w: &MordellWeilGroup,
    glue: &[GlueVector],
    budget: &Budget,
) -> Result<FrameVerdict> {
    let k = frame_lattice(root_type, glue)?;
    frame_verify_lattice(l, &k, root_type, w, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_lattice_expr;
    use crate::roots::overlattice::parse_glue;

    #[test]
    fn kodaira_symbols() {
        assert_eq!(fiber_to_root("I_2").unwrap(), Some((RootFamily::A, 1)));
        assert_eq!(fiber_to_root("I0*").unwrap(), Some((RootFamily::D, 4)));
        assert_eq!(fiber_to_root("I*_3").unwrap(), Some((RootFamily::D, 7)));
        assert_eq!(fiber_to_root("I_1").unwrap(), None);
        assert_eq!(fiber_to_root("II").unwrap(), None);
        assert_eq!(fiber_to_root("III").unwrap(), Some((RootFamily::A, 1)));
        assert_eq!(fiber_to_root("IV").unwrap(), Some((RootFamily::A, 2)));
        assert_eq!(fiber_to_root("IV*").unwrap(), Some((RootFamily::E, 6)));
        assert_eq!(fiber_to_root("III*").unwrap(), Some((RootFamily::E, 7)));
        assert_eq!(fiber_to_root("II*").unwrap(), Some((RootFamily::E, 8)));
        assert!(fiber_to_root("V").is_err());
        assert!(fiber_to_root("Ix").is_err());
    }

    #[test]
    fn e8_e7_frames() {
        let l = parse_lattice_expr("H + E8(-1) + E7(-1)").unwrap();
        let b = Budget::unlimited();
        let v = frame_verify(&l, &"E8+E7".parse().unwrap(), &MordellWeilGroup::trivial(), &[], &b).unwrap();
        assert!(v.passed(), "{v:?}");
        let glue = parse_glue("1/2,1/2,0,1/2,0,1/2,0,1/2,0,1/2,0,1/2,0,0,1/2").unwrap();
        let v = frame_verify(&l, &"A1+D14".parse().unwrap(), &"Z/2".parse().unwrap(), &[glue], &b).unwrap();
        assert!(v.passed(), "{v:?}");
    }

    #[test]
    fn wrong_mordell_weil_is_reported() {
        let l = parse_lattice_expr("H + E8(-1)^2").unwrap();
        let glue = parse_glue("1/2,0,1/2,0,1/2,0,1/2,0,1/2,0,1/2,0,1/2,0,1/2,0").unwrap();
        let v = frame_verify(&l, &"D16".parse().unwrap(), &MordellWeilGroup::trivial(), &[glue], &Budget::unlimited())
            .unwrap();
        assert!(!v.passed());
        assert_eq!(v.failures().len(), 1);
        assert_eq!(v.failures()[0].name, "Mordell-Weil group");
    }

    #[test]
    fn non_two_elementary_frame() {
        let l = parse_lattice_expr("H + A2(-1) + A1(-1)").unwrap();
        let v = frame_verify(&l, &"A1+A2".parse().unwrap(), &MordellWeilGroup::trivial(), &[], &Budget::unlimited())
            .unwrap();
        assert!(v.passed(), "{v:?}");
    }
}
