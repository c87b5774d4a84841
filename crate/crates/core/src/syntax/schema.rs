use std::collections::BTreeMap;

use super::{parse, Formula, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetaKind {
    Any,
    /// Only instantiated by formulas for which [`Formula::is_modalized`] holds.
    Modalized,
}

/// A formula pattern in which every variable is a metavariable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    pub name: String,
    pub pattern: Formula,
    pub metas: BTreeMap<String, MetaKind>,
}

pub type Substitution = BTreeMap<String, Formula>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchFailure {
    Structure,
    /// The shape matched but a modalized metavariable got a non-modalized formula.
    SideCondition { meta: String, bound: Formula },
}

impl Schema {
    /// Builds a schema from concrete syntax; every variable of `text` becomes a
    /// metavariable, and those listed in `modalized` carry the side condition.
    pub fn parse(name: &str, text: &str, modalized: &[&str]) -> Result<Schema, ParseError> {
        Ok(Self::from_pattern(name, parse(text)?, modalized))
    }

    pub fn from_pattern(name: &str, pattern: Formula, modalized: &[&str]) -> Schema {
        let metas = pattern
            .variables()
            .into_iter()
            .map(|v| {
                let kind = if modalized.contains(&v.as_str()) {
                    MetaKind::Modalized
                } else {
                    MetaKind::Any
                };
                (v, kind)
            })
            .collect();
        Schema { name: name.to_string(), pattern, metas }
    }

    pub fn instantiate(&self, sub: &Substitution) -> Formula {
        substitute(&self.pattern, sub)
    }
}

/// Replaces every variable bound in `sub`; unbound variables stay as they are.
pub fn substitute(pattern: &Formula, sub: &Substitution) -> Formula {
    match pattern {
        Formula::Var(v) => sub.get(v).cloned().unwrap_or_else(|| pattern.clone()),
        Formula::Zero | Formula::One => pattern.clone(),
        _ => {
            if let Some((op, f)) = pattern.as_unary() {
                Formula::unary(op, substitute(f, sub))
            } else {
                let (op, a, b) = pattern.as_binary().expect("binary");
                Formula::binary(op, substitute(a, sub), substitute(b, sub))
            }
        }
    }
}

fn bind(pat: &Formula, f: &Formula, sub: &mut Substitution) -> bool {
    match (pat, f) {
        (Formula::Var(m), _) => match sub.get(m) {
            Some(prev) => prev == f,
            None => {
                sub.insert(m.clone(), f.clone());
                true
            }
        },
        (Formula::Zero, Formula::Zero) | (Formula::One, Formula::One) => true,
        _ => {
            if let (Some((po, pa)), Some((fo, fa))) = (pat.as_unary(), f.as_unary()) {
                return po == fo && bind(pa, fa, sub);
            }
            if let (Some((po, pa, pb)), Some((fo, fa, fb))) = (pat.as_binary(), f.as_binary()) {
                return po == fo && bind(pa, fa, sub) && bind(pb, fb, sub);
            }
            false
        }
    }
}

/// Matches `f` against the schema, reporting why a match failed.
pub fn match_schema_detailed(schema: &Schema, f: &Formula) -> Result<Substitution, MatchFailure> {
    let mut sub = Substitution::new();
    if !bind(&schema.pattern, f, &mut sub) {
        return Err(MatchFailure::Structure);
    }
    for (meta, kind) in &schema.metas {
        if *kind == MetaKind::Modalized {
            let bound = &sub[meta];
            if !bound.is_modalized() {
                return Err(MatchFailure::SideCondition { meta: meta.clone(), bound: bound.clone() });
            }
        }
    }
    Ok(sub)
}

pub fn match_schema(schema: &Schema, f: &Formula) -> Option<Substitution> {
    match_schema_detailed(schema, f).ok()
}
