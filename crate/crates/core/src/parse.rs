//! Lattice expressions such as `H + E8(-1)^2 + A1(-1)`.
//!
//! Grammar (whitespace is ignored, `⊕` is accepted for `+`):
//!
//! ```text
//! expr  := term { "+" term }
//! term  := atom [ "(" int ")" ] [ "^" posint ]
//! atom  := "H" | "N" | ("A" | "D" | "E") posint | "<" int ">"
//! ```
//!
//! The twist binds tighter than the power, which binds tighter than the sum.
//! `A_n`, `D_n`, `E_n` are positive definite; signs are always written out.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::lattice::{self, GramLattice, RootFamily};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    Hyperbolic,
    Nikulin,
    Root(RootFamily, usize),
    /// Rank-one lattice `<m>`.
    Rank1(i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeExpr {
    Sum(Vec<LatticeExpr>),
    Twist(Box<LatticeExpr>, i64),
    Power(Box<LatticeExpr>, usize),
    Atom(Atom),
}

impl LatticeExpr {
    pub fn elaborate(&self) -> Result<GramLattice> {
        match self {
            LatticeExpr::Sum(terms) => {
                let mut acc = GramLattice::zero_dimensional();
                for t in terms {
                    acc = lattice::direct_sum(&acc, &t.elaborate()?);
                }
                Ok(acc)
            }
            LatticeExpr::Twist(inner, lambda) => lattice::twist(&inner.elaborate()?, *lambda),
            LatticeExpr::Power(inner, k) => {
                if *k == 0 {
                    return Err(Error::input("power must be at least 1"));
                }
                Ok(lattice::power(&inner.elaborate()?, *k))
            }
            LatticeExpr::Atom(atom) => match atom {
                Atom::Hyperbolic => Ok(lattice::hyperbolic()),
                Atom::Nikulin => Ok(lattice::nikulin()),
                Atom::Root(family, n) => lattice::root_lattice(*family, *n),
                Atom::Rank1(m) => Ok(GramLattice::new(vec![vec![BigInt::from(*m)]])?),
            },
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Hyperbolic => write!(f, "H"),
            Atom::Nikulin => write!(f, "N"),
            Atom::Root(family, n) => write!(f, "{family}{n}"),
            Atom::Rank1(m) => write!(f, "<{m}>"),
        }
    }
}

impl fmt::Display for LatticeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeExpr::Sum(terms) => {
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            LatticeExpr::Twist(inner, lambda) => write!(f, "{inner}({lambda})"),
            LatticeExpr::Power(inner, k) => write!(f, "{inner}^{k}"),
            LatticeExpr::Atom(a) => write!(f, "{a}"),
        }
    }
}

/// Parses and elaborates a lattice expression.
pub fn parse_lattice_expr(text: &str) -> Result<GramLattice> {
    parse_expr(text)?.elaborate()
}

/// Parses a lattice expression into its syntax tree.
pub fn parse_expr(text: &str) -> Result<LatticeExpr> {
    let mut p = Parser { src: text, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<LatticeExpr> {
        let mut terms = vec![self.term()?];
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') | Some('⊕') => {
                    self.bump();
                    terms.push(self.term()?);
                }
                _ => break,
            }
        }
        Ok(if terms.len() == 1 {
            terms.pop().expect("one term")
        } else {
            LatticeExpr::Sum(terms)
        })
    }

    fn term(&mut self) -> Result<LatticeExpr> {
        let mut node = LatticeExpr::Atom(self.atom()?);
        self.skip_ws();
        if self.peek() == Some('(') {
            self.bump();
            let start = self.pos;
            let lambda = self.int()?;
            if lambda == 0 {
                return Err(Error::Input(format!("twist by zero at byte {start}")));
            }
            self.expect(')')?;
            node = LatticeExpr::Twist(Box::new(node), lambda);
        }
        self.skip_ws();
        if self.peek() == Some('^') {
            self.bump();
            let start = self.pos;
            let k = self.uint()?;
            if k == 0 {
                return Err(Error::Input(format!("power must be at least 1 at byte {start}")));
            }
            node = LatticeExpr::Power(Box::new(node), k);
        }
        Ok(node)
    }

    fn atom(&mut self) -> Result<Atom> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some('H') => {
                self.bump();
                Ok(Atom::Hyperbolic)
            }
            Some('N') => {
                self.bump();
                Ok(Atom::Nikulin)
            }
            Some(c @ ('A' | 'D' | 'E')) => {
                self.bump();
                let family = match c {
                    'A' => RootFamily::A,
                    'D' => RootFamily::D,
                    _ => RootFamily::E,
                };
                let n = self.uint()?;
                lattice::root_lattice(family, n)
                    .map_err(|_| Error::Input(format!("{c}{n} at byte {start} is not a root lattice")))?;
                Ok(Atom::Root(family, n))
            }
            Some('<') | Some('⟨') => {
                self.bump();
                let m = self.int()?;
                self.skip_ws();
                match self.peek() {
                    Some('>') | Some('⟩') => {
                        self.bump();
                        Ok(Atom::Rank1(m))
                    }
                    _ => Err(self.error("expected '>'")),
                }
            }
            Some(_) => Err(self.error("expected a lattice atom (H, N, A<n>, D<n>, E<n>, <m>)")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let negative = match self.peek() {
            Some('-') | Some('−') => {
                self.bump();
                true
            }
            Some('+') => {
                self.bump();
                false
            }
            _ => false,
        };
        let v = self.uint()? as i64;
        Ok(if negative { -v } else { v })
    }

    fn uint(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| Error::Syntax {
                offset: start,
                message: "number out of range".into(),
            })
    }
}
