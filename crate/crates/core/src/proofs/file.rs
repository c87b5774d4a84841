use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::checker::{Justification, Proof, Step};
use crate::syntax::{parse, ParseError};

/// On-disk proof: formulas in concrete syntax, justifications as strings such
/// as `premise:0`, `axiom:T-Dia`, `mp:0,1`, `nec:2` or
/// `boxinf:template=BoxInf,bound=3,steps=[0,1,2]`. Indices are zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProofFile {
    #[serde(default)]
    pub premises: Vec<String>,
    pub steps: Vec<StepFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepFile {
    pub formula: String,
    pub by: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofFileError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("premise {index}: {error}")]
    Premise { index: usize, error: ParseError },
    #[error("step {index}: {error}")]
    Formula { index: usize, error: ParseError },
    #[error("step {index}: bad justification {text:?}")]
    Justification { index: usize, text: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad justification {0:?}")]
pub struct BadJustification(pub String);

impl FromStr for Justification {
    type Err = BadJustification;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BadJustification(s.to_string());
        let (kind, rest) = s.trim().split_once(':').ok_or_else(bad)?;
        let index = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        match kind.trim() {
            "premise" => Ok(Justification::Premise(index(rest)?)),
            "axiom" if !rest.trim().is_empty() => Ok(Justification::Axiom(rest.trim().to_string())),
            "mp" => {
                let (i, j) = rest.split_once(',').ok_or_else(bad)?;
                Ok(Justification::Mp(index(i)?, index(j)?))
            }
            "nec" => Ok(Justification::Nec(index(rest)?)),
            "boxinf" => parse_boxinf(rest).ok_or_else(bad),
            _ => Err(bad()),
        }
    }
}

fn parse_boxinf(rest: &str) -> Option<Justification> {
    let open = rest.find("steps=[")?;
    let close = open + rest[open..].find(']')?;
    let list = &rest[open + "steps=[".len()..close];
    let steps = if list.trim().is_empty() {
        Vec::new()
    } else {
        list.split(',').map(|t| t.trim().parse().ok()).collect::<Option<Vec<usize>>>()?
    };
    let others = format!("{}{}", &rest[..open], &rest[close + 1..]);
    let (mut template, mut bound) = (None, None);
    for part in others.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=')?;
        match k.trim() {
            "template" => template = Some(v.trim().to_string()),
            "bound" => bound = Some(v.trim().parse().ok()?),
            _ => return None,
        }
    }
    Some(Justification::BoxInf { template: template?, bound: bound?, steps })
}

impl ProofFile {
    pub fn from_json(text: &str) -> Result<ProofFile, ProofFileError> {
        serde_json::from_str(text).map_err(|e| ProofFileError::Json(e.to_string()))
    }

    pub fn to_proof(&self) -> Result<Proof, ProofFileError> {
        let premises = self
            .premises
            .iter()
            .enumerate()
            .map(|(index, p)| parse(p).map_err(|error| ProofFileError::Premise { index, error }))
            .collect::<Result<_, _>>()?;
        let steps = self
            .steps
            .iter()
            .enumerate()
            .map(|(index, s)| {
                let formula = parse(&s.formula).map_err(|error| ProofFileError::Formula { index, error })?;
                let by = s
                    .by
                    .parse()
                    .map_err(|_| ProofFileError::Justification { index, text: s.by.clone() })?;
                Ok(Step { formula, by })
            })
            .collect::<Result<_, _>>()?;
        Ok(Proof { premises, steps })
    }
}

impl From<&Proof> for ProofFile {
    fn from(p: &Proof) -> Self {
        ProofFile {
            premises: p.premises.iter().map(|f| f.to_string()).collect(),
            steps: p
                .steps
                .iter()
                .map(|s| StepFile { formula: s.formula.to_string(), by: s.by.to_string() })
                .collect(),
        }
    }
}
