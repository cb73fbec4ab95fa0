//! Minimal s-expression reader shared by the formula, vocabulary and theory
//! file formats. Positions are byte offsets into the input.

use super::FormulaError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SExpr {
    Atom { text: String, pos: usize },
    List { items: Vec<SExpr>, pos: usize },
}

impl SExpr {
    pub fn pos(&self) -> usize {
        match self {
            SExpr::Atom { pos, .. } | SExpr::List { pos, .. } => *pos,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom { text, .. } => Some(text),
            SExpr::List { .. } => None,
        }
    }

    pub fn as_list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List { items, .. } => Some(items),
            SExpr::Atom { .. } => None,
        }
    }
}

/// Characters that may appear in an atom.
fn atom_char(c: char) -> bool {
    !c.is_whitespace() && c != '(' && c != ')' && c != ';'
}

pub fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.chars().all(atom_char)
}

struct Reader<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Reader<'a> {
    fn skip_trivia(&mut self) {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() {
            let c = bytes[self.pos];
            if c.is_ascii_whitespace() {
                self.pos += 1;
            } else if c == b';' {
                while self.pos < bytes.len() && bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<SExpr, FormulaError> {
        self.skip_trivia();
        let start = self.pos;
        let rest = &self.src[self.pos..];
        match rest.chars().next() {
            None => Err(FormulaError::Syntax { pos: start, msg: "unexpected end of input".into() }),
            Some(')') => Err(FormulaError::Syntax { pos: start, msg: "unexpected ')'".into() }),
            Some('(') => {
                self.pos += 1;
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.src[self.pos..].chars().next() {
                        None => {
                            return Err(FormulaError::Syntax { pos: start, msg: "unclosed '('".into() })
                        }
                        Some(')') => {
                            self.pos += 1;
                            return Ok(SExpr::List { items, pos: start });
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            Some(_) => {
                let len: usize = rest.chars().take_while(|&c| atom_char(c)).map(char::len_utf8).sum();
                self.pos += len;
                Ok(SExpr::Atom { text: rest[..len].to_string(), pos: start })
            }
        }
    }
}

/// Reads exactly one expression; trailing input is an error.
pub fn read_one(src: &str) -> Result<SExpr, FormulaError> {
    let mut r = Reader { src, pos: 0 };
    let e = r.read()?;
    r.skip_trivia();
    if r.pos < src.len() {
        return Err(FormulaError::Syntax { pos: r.pos, msg: "trailing input".into() });
    }
    Ok(e)
}

pub fn read_all(src: &str) -> Result<Vec<SExpr>, FormulaError> {
    let mut r = Reader { src, pos: 0 };
    let mut out = Vec::new();
    loop {
        r.skip_trivia();
        if r.pos >= src.len() {
            return Ok(out);
        }
        out.push(r.read()?);
    }
}
