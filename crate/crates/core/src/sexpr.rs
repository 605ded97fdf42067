//! Minimal s-expressions used by the canonical label and state syntax.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SExpr {
    Atom(String),
    List(Vec<SExpr>),
}

impl SExpr {
    pub fn atom(s: impl Into<String>) -> SExpr {
        SExpr::Atom(s.into())
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom(s) => Some(s),
            SExpr::List(_) => None,
        }
    }

    /// Head atom and tail of a non-empty list.
    pub fn as_form(&self) -> Option<(&str, &[SExpr])> {
        match self {
            SExpr::List(items) => match items.split_first() {
                Some((SExpr::Atom(head), rest)) => Some((head, rest)),
                _ => None,
            },
            SExpr::Atom(_) => None,
        }
    }
}

impl fmt::Display for SExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SExpr::Atom(s) => f.write_str(s),
            SExpr::List(items) => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// A top-level token together with its 1-based column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub col: usize,
    pub expr: SExpr,
}

/// Splits a line into whitespace-separated top-level s-expressions.
///
/// Errors carry the 1-based column of the offending character.
pub fn tokenize(line: &str) -> Result<Vec<Token>, (usize, String)> {
    let chars: Vec<char> = line.chars().collect();
    let mut pos = 0;
    let mut out = Vec::new();
    loop {
        while pos < chars.len() && chars[pos].is_whitespace() {
            pos += 1;
        }
        if pos == chars.len() {
            return Ok(out);
        }
        let col = pos + 1;
        let expr = parse_one(&chars, &mut pos)?;
        out.push(Token { col, expr });
    }
}

/// Parses exactly one s-expression from `s`.
pub fn parse(s: &str) -> Result<SExpr, String> {
    let tokens = tokenize(s).map_err(|(col, msg)| format!("column {col}: {msg}"))?;
    match <[Token; 1]>::try_from(tokens) {
        Ok([tok]) => Ok(tok.expr),
        Err(v) => Err(format!("expected one expression, found {}", v.len())),
    }
}

fn parse_one(chars: &[char], pos: &mut usize) -> Result<SExpr, (usize, String)> {
    match chars[*pos] {
        '(' => {
            let open = *pos;
            *pos += 1;
            let mut items = Vec::new();
            loop {
                while *pos < chars.len() && chars[*pos].is_whitespace() {
                    *pos += 1;
                }
                if *pos == chars.len() {
                    return Err((open + 1, "unbalanced `(`".into()));
                }
                if chars[*pos] == ')' {
                    *pos += 1;
                    return Ok(SExpr::List(items));
                }
                items.push(parse_one(chars, pos)?);
            }
        }
        ')' => Err((*pos + 1, "unexpected `)`".into())),
        _ => {
            let start = *pos;
            while *pos < chars.len() && !chars[*pos].is_whitespace() && chars[*pos] != '(' && chars[*pos] != ')' {
                *pos += 1;
            }
            Ok(SExpr::Atom(chars[start..*pos].iter().collect()))
        }
    }
}
