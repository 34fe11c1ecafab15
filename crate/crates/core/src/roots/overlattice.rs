//! Overlattices of root lattices spanned by glue vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{extend_lattice, GramLattice};

/// Rational coordinates over the simple-root basis.
pub type GlueVector = Vec<BigRational>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Overlattice {
    pub lattice: GramLattice,
    /// Basis of the overlattice in rational coordinates over the base lattice.
    pub basis: Vec<Vec<BigRational>>,
    pub index: BigInt,
}

/// Parses `1/2,0,1/2,...`.
pub fn parse_glue(text: &str) -> Result<GlueVector> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            let (n, d) = match t.split_once('/') {
                Some((n, d)) => (n.trim(), d.trim()),
                None => (t, "1"),
            };
            let n: BigInt = n.parse().map_err(|_| Error::input(format!("bad glue entry '{t}'")))?;
            let d: BigInt = d.parse().map_err(|_| Error::input(format!("bad glue entry '{t}'")))?;
            if d.is_zero() {
                return Err(Error::input(format!("zero denominator in '{t}'")));
            }
            Ok(BigRational::new(n, d))
        })
        .collect()
}

/// Parses several glue vectors separated by `;`.
pub fn parse_glue_list(text: &str) -> Result<Vec<GlueVector>> {
    text.split(';').filter(|s| !s.trim().is_empty()).map(parse_glue).collect()
}

pub fn glue_to_strings(v: &GlueVector) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

/// Extends `kroot` by the glue vectors, checking integrality, evenness and
/// that every vector enlarges the lattice.
pub fn overlattice_from_glue(kroot: &GramLattice, glue: &[GlueVector]) -> Result<Overlattice> {
    let n = kroot.rank();
    for (i, v) in glue.iter().enumerate() {
        if v.len() != n {
            return Err(Error::input(format!(
                "glue vector {} has {} entries, expected {n}",
                i + 1,
                v.len()
            )));
        }
        for b in 0..n {
            let mut e = vec![BigRational::zero(); n];
            e[b] = BigRational::one();
            if !kroot.pair_rational(v, &e).is_integer() {
                return Err(Error::GlueIncompatible(format!(
                    "glue vector {} pairs non-integrally with basis vector {}",
                    i + 1,
                    b + 1
                )));
            }
        }
        for (j, w) in glue[..=i].iter().enumerate() {
            let p = kroot.pair_rational(v, w);
            if !p.is_integer() {
                return Err(Error::GlueIncompatible(format!(
                    "glue vectors {} and {} pair to {p}",
                    j + 1,
                    i + 1
                )));
            }
            if i == j && p.to_integer().is_odd() {
                return Err(Error::GlueIncompatible(format!("glue vector {} has odd norm {p}", i + 1)));
            }
        }
    }
    let mut index = BigInt::one();
    let mut result = Overlattice {
        lattice: kroot.clone(),
        basis: (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
            .collect(),
        index: index.clone(),
    };
    for i in 0..glue.len() {
        let (lattice, basis, idx) = extend_lattice(kroot, &glue[..=i])?;
        if idx == index {
            return Err(Error::GlueRedundant(format!(
                "glue vector {} lies in the lattice spanned by the roots and earlier glue",
                i + 1
            )));
        }
        index = idx.clone();
        result = Overlattice { lattice, basis, index: idx };
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::decomp::{mordell_weil, root_sublattice, RootType};
    use num_traits::Signed;

    fn root(t: &str) -> GramLattice {
        t.parse::<RootType>().unwrap().lattice()
    }

    #[test]
    fn eight_a1_all_halves() {
        let o = overlattice_from_glue(&root("8A1"), &[parse_glue("1/2,1/2,1/2,1/2,1/2,1/2,1/2,1/2").unwrap()]).unwrap();
        assert_eq!(o.index, BigInt::from(2));
        assert_eq!(o.lattice.determinant().abs(), BigInt::from(64));
        assert!(o.lattice.is_even());
        assert_eq!(mordell_weil(&o.lattice).unwrap().to_string(), "Z/2");
    }

    #[test]
    fn d16_plus_is_unimodular() {
        let v = parse_glue("1/2,0,1/2,0,1/2,0,1/2,0,1/2,0,1/2,0,1/2,0,1/2,0").unwrap();
        let o = overlattice_from_glue(&root("D16"), &[v]).unwrap();
        assert_eq!(o.lattice.determinant().abs(), BigInt::one());
        assert!(o.lattice.is_even());
        assert_eq!(root_sublattice(&o.lattice).unwrap().root_type.to_string(), "D16");
    }

    #[test]
    fn errors() {
        let half = parse_glue("1/2").unwrap();
        assert!(matches!(overlattice_from_glue(&root("A1"), &[half]), Err(Error::GlueIncompatible(_))));
        let v = parse_glue("1/2,1/2,1/2,1/2,1/2,1/2,1/2,1/2").unwrap();
        assert!(matches!(
            overlattice_from_glue(&root("8A1"), &[v.clone(), v]),
            Err(Error::GlueRedundant(_))
        ));
        let quarter = parse_glue("1/4,0").unwrap();
        assert!(matches!(overlattice_from_glue(&root("2A1"), &[quarter]), Err(Error::GlueIncompatible(_))));
        assert!(matches!(overlattice_from_glue(&root("2A1"), &[parse_glue("0").unwrap()]), Err(Error::Input(_))));
        assert!(parse_glue("1/0").is_err());
    }
}
