use thiserror::Error;

use super::{Binary, Formula, Unary};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {pos}: {kind}")]
pub struct ParseError {
    pub pos: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unknown token starting with {0:?}")]
    UnknownToken(char),
    #[error("unbalanced parentheses")]
    Unbalanced,
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: &'static str, found: String },
    #[error("invalid constant {0:?} (only 0 and 1 are allowed)")]
    BadConstant(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    One,
    Not,
    Box,
    Diamond,
    Star,
    Oplus,
    Meet,
    Join,
    Impl,
    Equiv,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::Zero => "0".into(),
            Tok::One => "1".into(),
            Tok::Not => "~".into(),
            Tok::Box => "[]".into(),
            Tok::Diamond => "<>".into(),
            Tok::Star => "*".into(),
            Tok::Oplus => "(+)".into(),
            Tok::Meet => "/\\".into(),
            Tok::Join => "\\/".into(),
            Tok::Impl => "->".into(),
            Tok::Equiv => "==".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |pos, kind| ParseError { pos, kind };
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let rest = &text[i..];
        let fixed: &[(&str, Tok)] = &[
            ("(+)", Tok::Oplus),
            ("[]", Tok::Box),
            ("<>", Tok::Diamond),
            ("/\\", Tok::Meet),
            ("\\/", Tok::Join),
            ("->", Tok::Impl),
            ("==", Tok::Equiv),
            ("~", Tok::Not),
            ("*", Tok::Star),
            ("(", Tok::LParen),
            (")", Tok::RParen),
        ];
        if let Some((lit, tok)) = fixed.iter().find(|(lit, _)| rest.starts_with(lit)) {
            out.push((i, tok.clone()));
            i += lit.len();
            continue;
        }
        if c.is_ascii_alphabetic() {
            let len = rest
                .bytes()
                .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_')
                .count();
            out.push((i, Tok::Ident(rest[..len].to_string())));
            i += len;
            continue;
        }
        if c.is_ascii_digit() {
            let len = rest.bytes().take_while(u8::is_ascii_alphanumeric).count();
            let tok = match &rest[..len] {
                "0" => Tok::Zero,
                "1" => Tok::One,
                other => return Err(err(i, ParseErrorKind::BadConstant(other.to_string()))),
            };
            out.push((i, tok));
            i += len;
            continue;
        }
        let ch = rest.chars().next().expect("non-empty");
        return Err(err(i, ParseErrorKind::UnknownToken(ch)));
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        let kind = match self.peek() {
            Tok::RParen if self.depth == 0 => ParseErrorKind::Unbalanced,
            Tok::End if self.depth > 0 => ParseErrorKind::Unbalanced,
            t => ParseErrorKind::Unexpected { expected, found: t.describe() },
        };
        ParseError { pos: self.pos(), kind }
    }

    fn equiv(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.implication()?;
        if *self.peek() == Tok::Equiv {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::equiv(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.left_assoc(0)?;
        if *self.peek() == Tok::Impl {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    /// Levels: 0 `\/`, 1 `/\`, 2 `(+)`, 3 `*`, then unary.
    fn left_assoc(&mut self, level: usize) -> Result<Formula, ParseError> {
        const LEVELS: [(Tok, Binary); 4] = [
            (Tok::Join, Binary::Join),
            (Tok::Meet, Binary::Meet),
            (Tok::Oplus, Binary::Oplus),
            (Tok::Star, Binary::Star),
        ];
        let next = |p: &mut Self| {
            if level + 1 < LEVELS.len() {
                p.left_assoc(level + 1)
            } else {
                p.unary()
            }
        };
        let (tok, op) = &LEVELS[level];
        let mut acc = next(self)?;
        while self.peek() == tok {
            self.bump();
            let rhs = next(self)?;
            acc = Formula::binary(*op, acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let op = match self.peek() {
            Tok::Not => Unary::Not,
            Tok::Box => Unary::Box,
            Tok::Diamond => Unary::Diamond,
            _ => return self.atom(),
        };
        self.bump();
        Ok(Formula::unary(op, self.unary()?))
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Zero => {
                self.bump();
                Ok(Formula::Zero)
            }
            Tok::One => {
                self.bump();
                Ok(Formula::One)
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Var(name))
            }
            Tok::LParen => {
                self.bump();
                self.depth += 1;
                let inner = self.equiv()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("')'"));
                }
                self.bump();
                self.depth -= 1;
                Ok(inner)
            }
            _ => Err(self.unexpected("a formula")),
        }
    }
}

/// Parses the ASCII concrete syntax. `==` is expanded to a meet of two
/// implications, so the result never contains an equivalence node.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: tokenize(text)?, at: 0, depth: 0 };
    let f = p.equiv()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("end of input"));
    }
    Ok(f)
}
