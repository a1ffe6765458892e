//! The group-expression DSL: a small constructor language for naming the
//! groups the toolkit works on, e.g. `wreath(S(3),S(5))`, `GL(2,4)`,
//! `cosets(direct(C(3),A(5)),(1 2 3)(4 5 6),(4 5)(6 7))`, `atlas(3A6d18)`,
//! `group(4;(1 2 3 4),(1 3))`. Recursive descent, errors carry byte offsets,
//! printing is canonical (minimal whitespace) and round-trips.

use std::fmt;

use crate::error::{Error, Result};
use crate::group::MAX_DEGREE;
use crate::perm::{parse_cycles, Permutation};

pub const SUPPORTED_FIELDS: [u32; 7] = [2, 3, 4, 5, 7, 8, 9];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupExpr {
    Symmetric(u32),
    Alternating(u32),
    Cyclic(u32),
    Dihedral(u32),
    Agl { d: u32, q: u32 },
    Gl { d: u32, q: u32 },
    GammaL { d: u32, q: u32 },
    Direct(Box<GroupExpr>, Box<GroupExpr>),
    Wreath(Box<GroupExpr>, Box<GroupExpr>),
    Cosets { base: Box<GroupExpr>, subgroup: Vec<Permutation> },
    Atlas(String),
    Raw { degree: u32, gens: Vec<Permutation> },
}

impl GroupExpr {
    /// Degree of the constructed permutation group. `Cosets` has no static
    /// degree (it is the subgroup index), hence the `Option`.
    pub fn static_degree(&self) -> Option<usize> {
        match self {
            GroupExpr::Symmetric(n)
            | GroupExpr::Alternating(n)
            | GroupExpr::Cyclic(n)
            | GroupExpr::Dihedral(n) => Some(*n as usize),
            GroupExpr::Agl { d, q } => Some((q.pow(*d)) as usize),
            GroupExpr::Gl { d, q } | GroupExpr::GammaL { d, q } => {
                Some((q.pow(*d) - 1) as usize)
            }
            GroupExpr::Direct(a, b) => Some(a.static_degree()? + b.static_degree()?),
            GroupExpr::Wreath(a, b) => Some(a.static_degree()? * b.static_degree()?),
            GroupExpr::Cosets { .. } => None,
            GroupExpr::Atlas(name) => super::atlas_degree(name),
            GroupExpr::Raw { degree, .. } => Some(*degree as usize),
        }
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self
            .text
            .as_bytes()
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_whitespace())
        {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.text.as_bytes().get(self.pos).copied()
    }

    fn expect(&mut self, byte: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{}`", byte as char))
        }
    }

    fn ident(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self
            .text
            .as_bytes()
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected an identifier");
        }
        Ok(&self.text[start..self.pos])
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected a number");
        }
        self.text[start..self.pos]
            .parse()
            .or_else(|_| self.err("number too large"))
    }

    /// One permutation in cycle notation: consumes `(...)(...)...` greedily.
    fn permutation(&mut self, degree: usize) -> Result<Permutation> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() != Some(b'(') {
            return self.err("expected a permutation in cycle notation");
        }
        let bytes = self.text.as_bytes();
        let mut end = self.pos;
        loop {
            if bytes.get(end) != Some(&b'(') {
                break;
            }
            let close = self.text[end..]
                .find(')')
                .map(|k| end + k)
                .ok_or(Error::Parse {
                    offset: end,
                    message: "unterminated cycle".into(),
                })?;
            end = close + 1;
            let mut probe = end;
            while bytes.get(probe).is_some_and(|b| b.is_ascii_whitespace()) {
                probe += 1;
            }
            if bytes.get(probe) == Some(&b'(') {
                end = probe;
                continue;
            }
            break;
        }
        let perm = parse_cycles(&self.text[start..end], degree, start)?;
        self.pos = end;
        Ok(perm)
    }

    fn field(&mut self) -> Result<u32> {
        let q = self.number()?;
        if !SUPPORTED_FIELDS.contains(&q) {
            return Err(Error::UnsupportedField(q));
        }
        Ok(q)
    }

    fn check_degree(&self, expr: GroupExpr) -> Result<GroupExpr> {
        if let Some(degree) = expr.static_degree() {
            if degree > MAX_DEGREE {
                return Err(Error::DegreeTooLarge(degree));
            }
            if degree == 0 {
                return self.err("degree must be positive");
            }
        }
        Ok(expr)
    }

    fn expr(&mut self) -> Result<GroupExpr> {
        self.skip_ws();
        let at = self.pos;
        let name = self.ident()?;
        self.expect(b'(')?;
        let out = match name {
            "S" | "A" | "C" | "D" => {
                let n = self.number()?;
                let min = if name == "D" { 3 } else { 1 };
                if n < min {
                    return Err(Error::BadConstructor(format!(
                        "{}({}) needs n >= {}",
                        name, n, min
                    )));
                }
                match name {
                    "S" => GroupExpr::Symmetric(n),
                    "A" => GroupExpr::Alternating(n),
                    "C" => GroupExpr::Cyclic(n),
                    _ => GroupExpr::Dihedral(n),
                }
            }
            "AGL" | "GL" | "GammaL" => {
                let d = self.number()?;
                if d == 0 || d > 8 {
                    return Err(Error::BadConstructor(format!(
                        "{}({}, _): dimension must be 1..=8",
                        name, d
                    )));
                }
                self.expect(b',')?;
                let q = self.field()?;
                match name {
                    "AGL" => GroupExpr::Agl { d, q },
                    "GL" => GroupExpr::Gl { d, q },
                    _ => GroupExpr::GammaL { d, q },
                }
            }
            "direct" | "wreath" => {
                let a = self.expr()?;
                self.expect(b',')?;
                let b = self.expr()?;
                if a.static_degree().is_none() || b.static_degree().is_none() {
                    return Err(Error::BadConstructor(
                        "cosets(...) cannot be nested inside other constructors".into(),
                    ));
                }
                if name == "direct" {
                    GroupExpr::Direct(Box::new(a), Box::new(b))
                } else {
                    GroupExpr::Wreath(Box::new(a), Box::new(b))
                }
            }
            "cosets" => {
                let base = self.expr()?;
                let degree = base.static_degree().ok_or(Error::BadConstructor(
                    "cosets(...) cannot be nested inside cosets".into(),
                ))?;
                let mut subgroup = Vec::new();
                loop {
                    self.skip_ws();
                    match self.peek() {
                        Some(b',') => {
                            self.pos += 1;
                            subgroup.push(self.permutation(degree)?);
                        }
                        _ => break,
                    }
                }
                GroupExpr::Cosets {
                    base: Box::new(base),
                    subgroup,
                }
            }
            "atlas" => {
                let entry = self.ident()?.to_string();
                if super::atlas_degree(&entry).is_none() {
                    return Err(Error::UnknownAtlasEntry(entry));
                }
                GroupExpr::Atlas(entry)
            }
            "group" => {
                let degree = self.number()?;
                if degree == 0 {
                    return self.err("degree must be positive");
                }
                if degree as usize > MAX_DEGREE {
                    return Err(Error::DegreeTooLarge(degree as usize));
                }
                self.expect(b';')?;
                let mut gens = Vec::new();
                loop {
                    self.skip_ws();
                    if self.peek() == Some(b')') {
                        break;
                    }
                    gens.push(self.permutation(degree as usize)?);
                    self.skip_ws();
                    if self.peek() == Some(b',') {
                        self.pos += 1;
                    }
                }
                GroupExpr::Raw { degree, gens }
            }
            _ => {
                self.pos = at;
                return self.err(format!("unknown constructor `{}`", name));
            }
        };
        self.expect(b')')?;
        self.check_degree(out)
    }
}

/// Parses one group expression; the whole input must be consumed.
pub fn parse_group_expr(text: &str) -> Result<GroupExpr> {
    let mut parser = Parser { text, pos: 0 };
    let expr = parser.expr()?;
    parser.skip_ws();
    if parser.pos != text.len() {
        return parser.err("trailing input after expression");
    }
    Ok(expr)
}

/// Canonical printing: minimal whitespace, `D(4)`-style heads, cycles with
/// single spaces. `parse_group_expr(print_group_expr(e)) == e`.
pub fn print_group_expr(expr: &GroupExpr) -> String {
    expr.to_string()
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupExpr::Symmetric(n) => write!(f, "S({})", n),
            GroupExpr::Alternating(n) => write!(f, "A({})", n),
            GroupExpr::Cyclic(n) => write!(f, "C({})", n),
            GroupExpr::Dihedral(n) => write!(f, "D({})", n),
            GroupExpr::Agl { d, q } => write!(f, "AGL({},{})", d, q),
            GroupExpr::Gl { d, q } => write!(f, "GL({},{})", d, q),
            GroupExpr::GammaL { d, q } => write!(f, "GammaL({},{})", d, q),
            GroupExpr::Direct(a, b) => write!(f, "direct({},{})", a, b),
            GroupExpr::Wreath(a, b) => write!(f, "wreath({},{})", a, b),
            GroupExpr::Cosets { base, subgroup } => {
                write!(f, "cosets({}", base)?;
                for p in subgroup {
                    write!(f, ",{}", p)?;
                }
                write!(f, ")")
            }
            GroupExpr::Atlas(name) => write!(f, "atlas({})", name),
            GroupExpr::Raw { degree, gens } => {
                write!(f, "group({};", degree)?;
                for (i, p) in gens.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", p)?;
                }
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_basic_constructors() {
        assert_eq!(parse_group_expr("S(5)").unwrap(), GroupExpr::Symmetric(5));
        assert_eq!(
            parse_group_expr(" wreath( S(3) , S(5) ) ").unwrap(),
            GroupExpr::Wreath(
                Box::new(GroupExpr::Symmetric(3)),
                Box::new(GroupExpr::Symmetric(5))
            )
        );
        assert_eq!(
            parse_group_expr("GL(2,4)").unwrap(),
            GroupExpr::Gl { d: 2, q: 4 }
        );
        assert!(parse_group_expr("atlas(3A6d18)").is_ok());
    }

    #[test]
    fn parse_errors_carry_offsets_and_kinds() {
        match parse_group_expr("GL(2,6)") {
            Err(Error::UnsupportedField(6)) => {}
            other => panic!("expected unsupported field, got {:?}", other.map(|_| ())),
        }
        match parse_group_expr("S(4) trailing") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("expected parse error, got {:?}", other.map(|_| ())),
        }
        assert!(parse_group_expr("frobnicate(3)").is_err());
        assert!(parse_group_expr("D(2)").is_err());
        assert!(parse_group_expr("S(600)").is_err());
        assert!(parse_group_expr("group(4;(1 5))").is_err());
        assert!(parse_group_expr("atlas(nonsense)").is_err());
        assert!(parse_group_expr("direct(cosets(S(4),(1 2)),S(3))").is_err());
    }

    #[test]
    fn group_literal_and_cosets() {
        let e = parse_group_expr("group(4;(1 2 3 4),(1 3))").unwrap();
        match &e {
            GroupExpr::Raw { degree: 4, gens } => assert_eq!(gens.len(), 2),
            other => panic!("unexpected {:?}", other),
        }
        let e = parse_group_expr("cosets(S(4),(1 2),(1 2 3))").unwrap();
        match &e {
            GroupExpr::Cosets { subgroup, .. } => assert_eq!(subgroup.len(), 2),
            other => panic!("unexpected {:?}", other),
        }
    }

    #[test]
    fn print_parse_roundtrip_on_random_trees() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(424242);
        fn random_expr<R: Rng>(rng: &mut R, depth: usize, budget: usize) -> GroupExpr {
            let leaf = depth == 0 || rng.gen_bool(0.55);
            if leaf {
                let n = rng.gen_range(1..=budget.max(1)) as u32;
                match rng.gen_range(0..7) {
                    0 => GroupExpr::Symmetric(n),
                    1 => GroupExpr::Alternating(n),
                    2 => GroupExpr::Cyclic(n),
                    3 => GroupExpr::Dihedral(n.max(3)),
                    4 => GroupExpr::Gl { d: 2, q: 4 },
                    5 => GroupExpr::Agl { d: rng.gen_range(1..=2), q: 3 },
                    6 => GroupExpr::Atlas("3A6d18".into()),
                    _ => unreachable!(),
                }
            } else if rng.gen_bool(0.5) {
                GroupExpr::Direct(
                    Box::new(random_expr(rng, depth - 1, budget / 2)),
                    Box::new(random_expr(rng, depth - 1, budget / 2)),
                )
            } else {
                GroupExpr::Wreath(
                    Box::new(random_expr(rng, depth - 1, 8)),
                    Box::new(random_expr(rng, depth - 1, 8)),
                )
            }
        }
        let mut produced = 0;
        while produced < 200 {
            let e = random_expr(&mut rng, 3, 20);
            let degree = match e.static_degree() {
                Some(d) if d <= crate::group::MAX_DEGREE => d,
                _ => continue,
            };
            assert!(degree >= 1);
            produced += 1;
            let printed = print_group_expr(&e);
            let back = parse_group_expr(&printed)
                .unwrap_or_else(|err| panic!("failed to reparse `{}`: {}", printed, err));
            assert_eq!(back, e, "round trip changed `{}`", printed);
        }
    }

    #[test]
    fn print_parse_roundtrip_on_handpicked_trees() {
        for text in [
            "S(5)",
            "wreath(S(3),S(5))",
            "direct(C(3),A(5))",
            "AGL(4,2)",
            "GammaL(2,4)",
            "cosets(direct(C(3),A(5)),(1 2 3)(4 5 6),(4 5)(6 7))",
            "group(4;(1 2 3 4),(1 3))",
            "atlas(24A7d112)",
        ] {
            let e = parse_group_expr(text).unwrap();
            let printed = print_group_expr(&e);
            assert_eq!(parse_group_expr(&printed).unwrap(), e);
            assert_eq!(printed, text);
        }
    }
}
