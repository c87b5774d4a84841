use serde::{Deserialize, Serialize};

use super::algebra::{generate_subalgebra, FiniteMonadicAlgebra};
use super::fep::FepInput;
use super::AnalysisError;
use crate::mv::{forall_inf, MonadicElement};

/// Algebra file, tagged by `"form"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "lowercase")]
pub enum AlgebraFile {
    Functional(FunctionalFile),
    Tabular(TabularFile),
}

/// The subalgebra of `L_m^n` generated by `generators`. `subset` and
/// `witnesses` feed the partial-embedding construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionalFile {
    pub m: u32,
    pub n: usize,
    #[serde(default)]
    pub generators: Vec<MonadicElement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subset: Option<Vec<MonadicElement>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TabularFile {
    pub elements: Vec<serde_json::Value>,
    #[serde(rename = "impl")]
    pub imp: Vec<Vec<usize>>,
    pub zero: usize,
    pub exists: Vec<usize>,
}

impl AlgebraFile {
    pub fn from_json(text: &str) -> Result<AlgebraFile, AnalysisError> {
        serde_json::from_str(text).map_err(|e| AnalysisError::Input(e.to_string()))
    }

    pub fn build(&self) -> Result<FiniteMonadicAlgebra, AnalysisError> {
        match self {
            AlgebraFile::Functional(f) => generate_subalgebra(f.m, f.n, &f.generators),
            AlgebraFile::Tabular(t) => {
                let labels = t
                    .elements
                    .iter()
                    .map(|v| match v {
                        serde_json::Value::String(s) => s.clone(),
                        other => other.to_string(),
                    })
                    .collect();
                FiniteMonadicAlgebra::from_tables(labels, t.imp.clone(), t.zero, t.exists.clone())
            }
        }
    }

    /// The partial-embedding input: `subset` if given, else the generators,
    /// their `∀` images and 0.
    pub fn fep_input(&self) -> Result<FepInput, AnalysisError> {
        let AlgebraFile::Functional(f) = self else {
            return Err(AnalysisError::Input("partial embeddings need a functional algebra".into()));
        };
        let subset = match &f.subset {
            Some(s) => s.clone(),
            None => {
                let mut s = vec![MonadicElement::zero(f.n, None)];
                for g in &f.generators {
                    for e in [g.clone(), forall_inf(g)] {
                        if !s.iter().any(|x| x.coords() == e.coords()) {
                            s.push(e);
                        }
                    }
                }
                s
            }
        };
        Ok(FepInput { points: f.n, subset, witnesses: f.witnesses.clone() })
    }
}
