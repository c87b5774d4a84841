//! The modal language: formulas, the ASCII concrete syntax, and schema
//! patterns for axiom matching.
//!
//! Concrete syntax: `[]` □, `<>` ◇, `~` ¬, `*` strong conjunction, `(+)` ⊕,
//! `/\` ∧, `\/` ∨, `->` →, `==` ≡ (sugar, expanded while parsing).

mod parse;
mod print;
mod schema;

use std::collections::BTreeSet;

pub use parse::{parse, ParseError, ParseErrorKind};
pub use schema::{match_schema, match_schema_detailed, substitute, MatchFailure, MetaKind, Schema, Substitution};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(String),
    Zero,
    One,
    Not(Box<Formula>),
    Box(Box<Formula>),
    Diamond(Box<Formula>),
    Impl(Box<Formula>, Box<Formula>),
    Star(Box<Formula>, Box<Formula>),
    Oplus(Box<Formula>, Box<Formula>),
    Meet(Box<Formula>, Box<Formula>),
    Join(Box<Formula>, Box<Formula>),
}

/// Binary connectives, in increasing binding strength.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Binary {
    Impl,
    Join,
    Meet,
    Oplus,
    Star,
}

impl From<Binary> for crate::mv::MvOp {
    fn from(op: Binary) -> Self {
        use crate::mv::MvOp;
        match op {
            Binary::Impl => MvOp::Impl,
            Binary::Join => MvOp::Join,
            Binary::Meet => MvOp::Meet,
            Binary::Oplus => MvOp::Oplus,
            Binary::Star => MvOp::Star,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Unary {
    Not,
    Box,
    Diamond,
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(name.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn nec(f: Formula) -> Formula {
        Formula::Box(Box::new(f))
    }

    pub fn poss(f: Formula) -> Formula {
        Formula::Diamond(Box::new(f))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Impl(Box::new(a), Box::new(b))
    }

    pub fn star(a: Formula, b: Formula) -> Formula {
        Formula::Star(Box::new(a), Box::new(b))
    }

    pub fn oplus(a: Formula, b: Formula) -> Formula {
        Formula::Oplus(Box::new(a), Box::new(b))
    }

    pub fn meet(a: Formula, b: Formula) -> Formula {
        Formula::Meet(Box::new(a), Box::new(b))
    }

    pub fn join(a: Formula, b: Formula) -> Formula {
        Formula::Join(Box::new(a), Box::new(b))
    }

    /// `(a → b) ∧ (b → a)`.
    pub fn equiv(a: Formula, b: Formula) -> Formula {
        Formula::meet(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    pub fn unary(op: Unary, f: Formula) -> Formula {
        match op {
            Unary::Not => Formula::not(f),
            Unary::Box => Formula::nec(f),
            Unary::Diamond => Formula::poss(f),
        }
    }

    pub fn binary(op: Binary, a: Formula, b: Formula) -> Formula {
        match op {
            Binary::Impl => Formula::imp(a, b),
            Binary::Join => Formula::join(a, b),
            Binary::Meet => Formula::meet(a, b),
            Binary::Oplus => Formula::oplus(a, b),
            Binary::Star => Formula::star(a, b),
        }
    }

    /// `fⁿ` as a left-nested chain of `*`; `f¹ = f`. Panics on `n = 0`.
    pub fn power(f: &Formula, n: u32) -> Formula {
        assert!(n >= 1, "formula powers start at 1");
        (1..n).fold(f.clone(), |acc, _| Formula::star(acc, f.clone()))
    }

    /// Left fold of `op` over `items`; `None` when empty.
    pub fn fold(op: Binary, items: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        items.into_iter().reduce(|acc, f| Formula::binary(op, acc, f))
    }

    pub fn as_unary(&self) -> Option<(Unary, &Formula)> {
        match self {
            Formula::Not(f) => Some((Unary::Not, f)),
            Formula::Box(f) => Some((Unary::Box, f)),
            Formula::Diamond(f) => Some((Unary::Diamond, f)),
            _ => None,
        }
    }

    pub fn as_binary(&self) -> Option<(Binary, &Formula, &Formula)> {
        match self {
            Formula::Impl(a, b) => Some((Binary::Impl, a, b)),
            Formula::Join(a, b) => Some((Binary::Join, a, b)),
            Formula::Meet(a, b) => Some((Binary::Meet, a, b)),
            Formula::Oplus(a, b) => Some((Binary::Oplus, a, b)),
            Formula::Star(a, b) => Some((Binary::Star, a, b)),
            _ => None,
        }
    }

    /// True iff the formula is a propositional combination of `0`, `1` and
    /// subformulas beginning with `□` or `◇`.
    pub fn is_modalized(&self) -> bool {
        match self {
            Formula::Var(_) => false,
            Formula::Zero | Formula::One | Formula::Box(_) | Formula::Diamond(_) => true,
            Formula::Not(f) => f.is_modalized(),
            _ => {
                let (_, a, b) = self.as_binary().expect("binary");
                a.is_modalized() && b.is_modalized()
            }
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::Zero | Formula::One => {}
            _ => {
                if let Some((_, f)) = self.as_unary() {
                    f.collect_variables(out);
                } else if let Some((_, a, b)) = self.as_binary() {
                    a.collect_variables(out);
                    b.collect_variables(out);
                }
            }
        }
    }

    pub fn size(&self) -> usize {
        if let Some((_, f)) = self.as_unary() {
            1 + f.size()
        } else if let Some((_, a, b)) = self.as_binary() {
            1 + a.size() + b.size()
        } else {
            1
        }
    }

    pub fn depth(&self) -> usize {
        if let Some((_, f)) = self.as_unary() {
            1 + f.depth()
        } else if let Some((_, a, b)) = self.as_binary() {
            1 + a.depth().max(b.depth())
        } else {
            0
        }
    }
}

/// Union of the variables of several formulas, sorted.
pub fn variables_of<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> Vec<String> {
    let mut all = BTreeSet::new();
    for f in formulas {
        f.collect_variables(&mut all);
    }
    all.into_iter().collect()
}
