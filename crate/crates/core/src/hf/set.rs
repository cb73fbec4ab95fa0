use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use super::HfError;

/// A hereditarily finite set over urelements. Children are kept sorted in
/// canonical order without duplicates, so equality is extensional.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum HFSet {
    Ur(Arc<str>),
    Set(Arc<Vec<HFSet>>),
}

impl HFSet {
    pub fn ur(id: &str) -> HFSet {
        HFSet::Ur(Arc::from(id))
    }

    pub fn empty() -> HFSet {
        HFSet::Set(Arc::new(Vec::new()))
    }

    pub fn set(mut children: Vec<HFSet>) -> HFSet {
        children.sort();
        children.dedup();
        HFSet::Set(Arc::new(children))
    }

    pub fn is_ur(&self) -> bool {
        matches!(self, HFSet::Ur(_))
    }

    /// Members; empty for urelements.
    pub fn members(&self) -> &[HFSet] {
        match self {
            HFSet::Ur(_) => &[],
            HFSet::Set(c) => c,
        }
    }

    pub fn contains(&self, x: &HFSet) -> bool {
        self.members().binary_search(x).is_ok()
    }

    /// 0 for urelements, one more than the largest child stage for sets.
    pub fn stage(&self) -> usize {
        match self {
            HFSet::Ur(_) => 0,
            HFSet::Set(c) => 1 + c.iter().map(HFSet::stage).max().unwrap_or(0),
        }
    }

    /// Conventional rank: `stage - 1` for sets; urelements have none.
    pub fn rank(&self) -> Option<usize> {
        match self {
            HFSet::Ur(_) => None,
            HFSet::Set(_) => Some(self.stage() - 1),
        }
    }

    pub fn urelements(&self, out: &mut std::collections::BTreeSet<Arc<str>>) {
        match self {
            HFSet::Ur(id) => {
                out.insert(id.clone());
            }
            HFSet::Set(c) => c.iter().for_each(|x| x.urelements(out)),
        }
    }

    /// Replaces urelements through `f`.
    pub fn map_urelements(&self, f: &dyn Fn(&str) -> Option<HFSet>) -> Option<HFSet> {
        match self {
            HFSet::Ur(id) => f(id),
            HFSet::Set(c) => Some(HFSet::set(c.iter().map(|x| x.map_urelements(f)).collect::<Option<Vec<_>>>()?)),
        }
    }

    /// Parses `u:<id>` or `{a, b, ...}`.
    pub fn parse(text: &str) -> Result<HFSet, HfError> {
        let mut p = Reader { s: text.as_bytes(), pos: 0 };
        let v = p.value()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(HfError::Syntax { pos: p.pos, msg: "trailing input".into() });
        }
        Ok(v)
    }
}

impl Ord for HFSet {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (HFSet::Ur(a), HFSet::Ur(b)) => a.cmp(b),
            (HFSet::Ur(_), HFSet::Set(_)) => Ordering::Less,
            (HFSet::Set(_), HFSet::Ur(_)) => Ordering::Greater,
            (HFSet::Set(a), HFSet::Set(b)) => {
                if Arc::ptr_eq(a, b) {
                    return Ordering::Equal;
                }
                a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter()))
            }
        }
    }
}

impl PartialOrd for HFSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HFSet::Ur(id) => write!(f, "u:{id}"),
            HFSet::Set(c) => {
                write!(f, "{{")?;
                for (i, x) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

impl fmt::Debug for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

struct Reader<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn err(&self, msg: &str) -> HfError {
        HfError::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn value(&mut self) -> Result<HFSet, HfError> {
        self.skip_ws();
        match self.s.get(self.pos) {
            Some(b'{') => {
                self.pos += 1;
                let mut children = Vec::new();
                self.skip_ws();
                if self.s.get(self.pos) == Some(&b'}') {
                    self.pos += 1;
                    return Ok(HFSet::empty());
                }
                loop {
                    children.push(self.value()?);
                    self.skip_ws();
                    match self.s.get(self.pos) {
                        Some(b',') => self.pos += 1,
                        Some(b'}') => {
                            self.pos += 1;
                            return Ok(HFSet::set(children));
                        }
                        _ => return Err(self.err("expected ',' or '}'")),
                    }
                }
            }
            Some(b'u') if self.s.get(self.pos + 1) == Some(&b':') => {
                self.pos += 2;
                let start = self.pos;
                while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || b"_-'".contains(&self.s[self.pos])) {
                    self.pos += 1;
                }
                if start == self.pos {
                    return Err(self.err("empty urelement id"));
                }
                Ok(HFSet::ur(std::str::from_utf8(&self.s[start..self.pos]).unwrap()))
            }
            Some(_) => Err(self.err("expected 'u:<id>' or '{'")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order() {
        let e = HFSet::empty();
        let one = HFSet::set(vec![e.clone()]);
        let two = HFSet::set(vec![one.clone(), e.clone(), e.clone()]);
        assert_eq!(two.members().len(), 2);
        assert!(HFSet::ur("z") < e);
        assert!(e < one && one < two);
        assert_eq!(two.to_string(), "{{},{{}}}");
        assert_eq!(HFSet::parse(" { {} , {{}} } ").unwrap(), two);
        assert_eq!(HFSet::parse("{u:a,{u:a}}").unwrap().stage(), 2);
        assert!(HFSet::parse("{u:}").is_err());
        assert_eq!(two.stage(), 3);
        assert_eq!(two.rank(), Some(2));
    }
}
