//! Finite safe structures `⟨X, e, [0,1]_Ł⟩` and truth values `‖φ‖_{K,x}`.
//!
//! Evaluation follows the world-by-world recursive definition: connectives act
//! on the value at the current world, `□ψ` is the infimum of `ψ` over all
//! worlds and `◇ψ` the supremum. It deliberately does not reuse the pointwise
//! tuple operations of [`crate::mv`], so it can serve as an independent check
//! on algebraic evaluation.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mv::{MonadicElement, Truth};
use crate::syntax::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable {0:?}")]
    Unbound(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("a structure needs at least one world")]
    NoWorlds,
    #[error("variable {var:?} has {got} values but the structure has {worlds} worlds")]
    Length { var: String, got: usize, worlds: usize },
}

/// A finite structure: worlds `0..n` and a valuation of variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ModelFile", into = "ModelFile")]
pub struct SafeStructure {
    worlds: usize,
    valuation: BTreeMap<String, MonadicElement>,
}

/// On-disk form: `{"worlds": 2, "valuation": {"p": ["1", "1/2"]}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub worlds: usize,
    pub valuation: BTreeMap<String, Vec<Truth>>,
}

impl TryFrom<ModelFile> for SafeStructure {
    type Error = StructureError;

    fn try_from(file: ModelFile) -> Result<Self, Self::Error> {
        if file.worlds == 0 {
            return Err(StructureError::NoWorlds);
        }
        let mut valuation = BTreeMap::new();
        for (var, values) in file.valuation {
            if values.len() != file.worlds {
                return Err(StructureError::Length { var, got: values.len(), worlds: file.worlds });
            }
            valuation.insert(var, MonadicElement::new(values).expect("non-empty"));
        }
        Ok(SafeStructure { worlds: file.worlds, valuation })
    }
}

impl From<SafeStructure> for ModelFile {
    fn from(k: SafeStructure) -> Self {
        ModelFile {
            worlds: k.worlds,
            valuation: k.valuation.into_iter().map(|(v, e)| (v, e.coords().to_vec())).collect(),
        }
    }
}

impl SafeStructure {
    pub fn new(
        worlds: usize,
        valuation: BTreeMap<String, MonadicElement>,
    ) -> Result<Self, StructureError> {
        let file = ModelFile {
            worlds,
            valuation: valuation.into_iter().map(|(v, e)| (v, e.coords().to_vec())).collect(),
        };
        Self::try_from(file)
    }

    pub fn worlds(&self) -> usize {
        self.worlds
    }

    pub fn valuation(&self) -> &BTreeMap<String, MonadicElement> {
        &self.valuation
    }

    /// `e(x, p)`.
    pub fn value_of(&self, var: &str, world: usize) -> Option<Truth> {
        self.valuation.get(var).map(|e| e.coords()[world])
    }

    /// `‖f‖_{K,x}` for every world `x`.
    pub fn eval(&self, f: &Formula) -> Result<MonadicElement, EvalError> {
        if let Some(v) = f.variables().into_iter().find(|v| !self.valuation.contains_key(v)) {
            return Err(EvalError::Unbound(v));
        }
        let mut memo = HashMap::new();
        let coords = (0..self.worlds).map(|x| self.at(f, x, &mut memo)).collect();
        Ok(MonadicElement::new(coords).expect("at least one world"))
    }

    /// `‖f‖_{K,x}`. Modal subformulas are world-independent and memoized by
    /// node address for the duration of one evaluation.
    fn at(&self, f: &Formula, x: usize, memo: &mut HashMap<*const Formula, Truth>) -> Truth {
        match f {
            Formula::Var(v) => self.valuation[v].coords()[x],
            Formula::Zero => Truth::ZERO,
            Formula::One => Truth::ONE,
            Formula::Not(g) => self.at(g, x, memo).neg(),
            Formula::Box(g) | Formula::Diamond(g) => {
                let key = f as *const Formula;
                if let Some(&v) = memo.get(&key) {
                    return v;
                }
                let values = (0..self.worlds).map(|y| self.at(g, y, memo));
                let v = if matches!(f, Formula::Box(_)) {
                    values.min().expect("non-empty")
                } else {
                    values.max().expect("non-empty")
                };
                memo.insert(key, v);
                v
            }
            Formula::Impl(a, b) => self.at(a, x, memo).implies(self.at(b, x, memo)),
            Formula::Star(a, b) => self.at(a, x, memo).star(self.at(b, x, memo)),
            Formula::Oplus(a, b) => self.at(a, x, memo).oplus(self.at(b, x, memo)),
            Formula::Meet(a, b) => self.at(a, x, memo).meet(self.at(b, x, memo)),
            Formula::Join(a, b) => self.at(a, x, memo).join(self.at(b, x, memo)),
        }
    }

    /// True iff every formula of `gamma` has value 1 at every world.
    pub fn is_model<'a>(
        &self,
        gamma: impl IntoIterator<Item = &'a Formula>,
    ) -> Result<bool, EvalError> {
        for f in gamma {
            if !self.eval(f)?.is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn check_consequence(
        &self,
        gamma: &[Formula],
        phi: &Formula,
    ) -> Result<ConsequenceCheck, EvalError> {
        if !self.is_model(gamma)? {
            return Ok(ConsequenceCheck::NotApplicable);
        }
        Ok(if self.eval(phi)?.is_one() {
            ConsequenceCheck::Consistent
        } else {
            ConsequenceCheck::Refutes
        })
    }
}

/// What a single structure says about `Γ ⊨ φ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConsequenceCheck {
    /// The structure is not a model of `Γ`.
    NotApplicable,
    /// A model of `Γ` that is also a model of `φ`.
    Consistent,
    /// A model of `Γ` that is not a model of `φ`: a witness of `Γ ⊭ φ`.
    Refutes,
}
