use std::fmt;

use super::StructureError;
use crate::formula::{copy_name, Symbol, Vocabulary};

/// One successor structure `(carrier, 0, S)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SuccKind {
    Standard,
    /// ℕ followed by `k ≥ 1` disjoint ℤ-chains.
    Nonstandard(usize),
}

impl SuccKind {
    pub fn nonstandard(k: usize) -> Result<SuccKind, StructureError> {
        if k == 0 {
            Err(StructureError::NoChains)
        } else {
            Ok(SuccKind::Nonstandard(k))
        }
    }

    /// Decodes a local code.
    pub fn point(self, code: u64) -> Point {
        match self {
            SuccKind::Standard => Point::Std(code),
            SuccKind::Nonstandard(k) => {
                if code.is_multiple_of(2) {
                    Point::Std(code / 2)
                } else {
                    let m = code / 2;
                    let k = k as u64;
                    Point::Chain { chain: (m % k) as usize, pos: unzigzag(m / k) }
                }
            }
        }
    }

    /// Encodes a point; panics on points this kind does not have.
    pub fn code(self, p: Point) -> u64 {
        match (self, p) {
            (SuccKind::Standard, Point::Std(n)) => n,
            (SuccKind::Nonstandard(_), Point::Std(n)) => n.checked_mul(2).expect("code overflow"),
            (SuccKind::Nonstandard(k), Point::Chain { chain, pos }) => {
                assert!(chain < k, "chain index out of range");
                let m = zigzag(pos)
                    .checked_mul(k as u64)
                    .and_then(|m| m.checked_add(chain as u64))
                    .expect("code overflow");
                m.checked_mul(2).and_then(|c| c.checked_add(1)).expect("code overflow")
            }
            (SuccKind::Standard, Point::Chain { .. }) => panic!("standard model has no ℤ-chains"),
        }
    }

    pub fn succ(self, code: u64) -> u64 {
        self.code(self.point(code).succ())
    }

    pub fn pred(self, code: u64) -> Option<u64> {
        self.point(code).pred().map(|p| self.code(p))
    }
}

impl fmt::Display for SuccKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SuccKind::Standard => write!(f, "standard"),
            SuccKind::Nonstandard(k) => write!(f, "nonstandard({k})"),
        }
    }
}

fn zigzag(z: i64) -> u64 {
    if z >= 0 {
        (z as u64) * 2
    } else {
        (-(z + 1)) as u64 * 2 + 1
    }
}

fn unzigzag(n: u64) -> i64 {
    if n.is_multiple_of(2) {
        (n / 2) as i64
    } else {
        -((n / 2) as i64) - 1
    }
}

/// A decoded element within one successor structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Std(u64),
    Chain { chain: usize, pos: i64 },
}

impl Point {
    pub fn succ(self) -> Point {
        match self {
            Point::Std(n) => Point::Std(n + 1),
            Point::Chain { chain, pos } => Point::Chain { chain, pos: pos + 1 },
        }
    }

    pub fn pred(self) -> Option<Point> {
        match self {
            Point::Std(0) => None,
            Point::Std(n) => Some(Point::Std(n - 1)),
            Point::Chain { chain, pos } => Some(Point::Chain { chain, pos: pos - 1 }),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Std(n) => write!(f, "{n}"),
            Point::Chain { chain, pos } => write!(f, "z{chain}[{pos:+}]"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Distance {
    /// `S^k(x) = y`.
    Forward(u64),
    /// `S^k(y) = x`, `k ≥ 1`.
    Backward(u64),
    Infinite,
}

impl Distance {
    pub fn signed(self) -> Option<i128> {
        match self {
            Distance::Forward(k) => Some(k as i128),
            Distance::Backward(k) => Some(-(k as i128)),
            Distance::Infinite => None,
        }
    }

    fn from_signed(d: i128) -> Distance {
        if d >= 0 {
            Distance::Forward(d as u64)
        } else {
            Distance::Backward((-d) as u64)
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Forward(k) => write!(f, "{k}"),
            Distance::Backward(k) => write!(f, "anti({k})"),
            Distance::Infinite => write!(f, "inf"),
        }
    }
}

/// A successor structure, or a tagged disjoint sum of two, over codes in ℕ.
///
/// A single structure has vocabulary `{S, 0}`. A sum has `{N1, S1, 0_1, N2,
/// S2, 0_2}`: even codes form the left part, odd codes the right part, and
/// each successor is the identity off its own part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedStructure {
    parts: Vec<SuccKind>,
    vocab: Vocabulary,
}

impl PresentedStructure {
    pub fn single(kind: SuccKind) -> Self {
        let vocab = Vocabulary::from_symbols([Symbol::function("S", 1), Symbol::constant("0")]).unwrap();
        PresentedStructure { parts: vec![kind], vocab }
    }

    pub fn standard() -> Self {
        Self::single(SuccKind::Standard)
    }

    pub fn nonstandard(k: usize) -> Result<Self, StructureError> {
        Ok(Self::single(SuccKind::nonstandard(k)?))
    }

    pub fn sum(left: SuccKind, right: SuccKind) -> Self {
        let mut syms = Vec::new();
        for i in 1..=2 {
            syms.push(Symbol::relation(copy_name("N", i), 1));
            syms.push(Symbol::function(copy_name("S", i), 1));
            syms.push(Symbol::constant(copy_name("0", i)));
        }
        PresentedStructure { parts: vec![left, right], vocab: Vocabulary::from_symbols(syms).unwrap() }
    }

    /// Parses `standard`, `nonstandard(k)`, `sum(a,b)`.
    pub fn parse(spec: &str) -> Result<Self, StructureError> {
        let spec = spec.trim();
        if let Some(inner) = spec.strip_prefix("sum(").and_then(|r| r.strip_suffix(')')) {
            let (a, b) = split_top_comma(inner).ok_or_else(|| StructureError::UnknownPresentation(spec.into()))?;
            return Ok(Self::sum(parse_kind(a)?, parse_kind(b)?));
        }
        Ok(Self::single(parse_kind(spec)?))
    }

    pub fn parts(&self) -> &[SuccKind] {
        &self.parts
    }

    pub fn is_sum(&self) -> bool {
        self.parts.len() == 2
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    /// Part index and local code of a code.
    pub fn locate(&self, code: u64) -> (usize, u64) {
        if self.is_sum() {
            ((code % 2) as usize, code / 2)
        } else {
            (0, code)
        }
    }

    pub fn globalize(&self, part: usize, local: u64) -> u64 {
        if self.is_sum() {
            local.checked_mul(2).and_then(|c| c.checked_add(part as u64)).expect("code overflow")
        } else {
            local
        }
    }

    pub fn point(&self, code: u64) -> (usize, Point) {
        let (part, local) = self.locate(code);
        (part, self.parts[part].point(local))
    }

    pub fn code_of(&self, part: usize, p: Point) -> u64 {
        self.globalize(part, self.parts[part].code(p))
    }

    pub fn zero(&self, part: usize) -> u64 {
        self.code_of(part, Point::Std(0))
    }

    /// Successor of `part`; the identity on codes of other parts.
    pub fn succ(&self, part: usize, code: u64) -> u64 {
        let (p, local) = self.locate(code);
        if p != part {
            return code;
        }
        self.globalize(p, self.parts[p].succ(local))
    }

    pub fn pred(&self, part: usize, code: u64) -> Option<u64> {
        let (p, local) = self.locate(code);
        if p != part {
            return None;
        }
        self.parts[p].pred(local).map(|l| self.globalize(p, l))
    }

    pub fn tag(&self, part: usize, code: u64) -> bool {
        self.locate(code).0 == part
    }

    /// Part whose successor symbol is `name`, if any.
    fn part_of_symbol(&self, name: &str, base: &str) -> Option<usize> {
        if self.is_sum() {
            (0..2).find(|&i| copy_name(base, i + 1) == name)
        } else {
            (name == base).then_some(0)
        }
    }

    pub fn apply(&self, fun: &str, code: u64) -> Result<u64, StructureError> {
        let part = self.part_of_symbol(fun, "S").ok_or_else(|| StructureError::UnknownSymbol(fun.into()))?;
        Ok(self.succ(part, code))
    }

    pub fn constant(&self, c: &str) -> Result<u64, StructureError> {
        let part = self.part_of_symbol(c, "0").ok_or_else(|| StructureError::UnknownSymbol(c.into()))?;
        Ok(self.zero(part))
    }

    pub fn holds(&self, rel: &str, code: u64) -> Result<bool, StructureError> {
        let part = if self.is_sum() { self.part_of_symbol(rel, "N") } else { None };
        let part = part.ok_or_else(|| StructureError::UnknownSymbol(rel.into()))?;
        Ok(self.tag(part, code))
    }

    pub fn distance(&self, x: u64, y: u64) -> Distance {
        let (px, a) = self.point(x);
        let (py, b) = self.point(y);
        if px != py {
            return Distance::Infinite;
        }
        match (a, b) {
            (Point::Std(m), Point::Std(n)) => Distance::from_signed(n as i128 - m as i128),
            (Point::Chain { chain: c, pos: p }, Point::Chain { chain: d, pos: q }) if c == d => {
                Distance::from_signed(q as i128 - p as i128)
            }
            _ => Distance::Infinite,
        }
    }

    pub fn describe(&self, code: u64) -> String {
        let (part, p) = self.point(code);
        if self.is_sum() {
            format!("{}:{p}", if part == 0 { "L" } else { "R" })
        } else {
            p.to_string()
        }
    }
}

impl fmt::Display for PresentedStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_sum() {
            write!(f, "sum({},{})", self.parts[0], self.parts[1])
        } else {
            write!(f, "{}", self.parts[0])
        }
    }
}

fn split_top_comma(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

fn parse_kind(s: &str) -> Result<SuccKind, StructureError> {
    let s = s.trim();
    if s == "standard" {
        return Ok(SuccKind::Standard);
    }
    if s == "nonstandard" {
        return SuccKind::nonstandard(1);
    }
    let k = s
        .strip_prefix("nonstandard")
        .and_then(|r| r.strip_prefix('(').and_then(|r| r.strip_suffix(')')).or_else(|| r.strip_prefix(':')))
        .and_then(|k| k.trim().parse::<usize>().ok())
        .ok_or_else(|| StructureError::UnknownPresentation(s.into()))?;
    SuccKind::nonstandard(k)
}
