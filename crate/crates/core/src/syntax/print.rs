use std::fmt;

use super::{Binary, Formula, Unary};

impl Binary {
    pub fn symbol(self) -> &'static str {
        match self {
            Binary::Impl => "->",
            Binary::Join => "\\/",
            Binary::Meet => "/\\",
            Binary::Oplus => "(+)",
            Binary::Star => "*",
        }
    }
}

impl Unary {
    pub fn symbol(self) -> &'static str {
        match self {
            Unary::Not => "~",
            Unary::Box => "[]",
            Unary::Diamond => "<>",
        }
    }
}

// Binary operands that are themselves binary are always parenthesized, so
// the output never depends on precedence or associativity.
fn operand(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if f.as_binary().is_some() {
        write!(out, "({f})")
    } else {
        write!(out, "{f}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Var(v) => out.write_str(v),
            Formula::Zero => out.write_str("0"),
            Formula::One => out.write_str("1"),
            _ => {
                if let Some((op, f)) = self.as_unary() {
                    out.write_str(op.symbol())?;
                    operand(f, out)
                } else {
                    let (op, a, b) = self.as_binary().expect("binary");
                    operand(a, out)?;
                    write!(out, " {} ", op.symbol())?;
                    operand(b, out)
                }
            }
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
