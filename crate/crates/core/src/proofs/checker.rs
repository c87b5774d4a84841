use std::fmt;

use thiserror::Error;

use super::axioms::AxiomTable;
use crate::syntax::{match_schema_detailed, Formula, MatchFailure};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    Axiom(String),
    Premise(usize),
    /// `Mp(i, j)`: step `j` is `step i -> current`.
    Mp(usize, usize),
    Nec(usize),
    /// A finite fragment of the infinitary rule: the cited steps must supply
    /// `□φ ∨ (□α → (□β)ⁿ)` for every `n` in `1..=bound`.
    BoxInf { template: String, bound: u32, steps: Vec<usize> },
}

pub const BOXINF_TEMPLATE: &str = "BoxInf";

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Axiom(name) => write!(f, "axiom:{name}"),
            Justification::Premise(i) => write!(f, "premise:{i}"),
            Justification::Mp(i, j) => write!(f, "mp:{i},{j}"),
            Justification::Nec(i) => write!(f, "nec:{i}"),
            Justification::BoxInf { template, bound, steps } => {
                let steps: Vec<String> = steps.iter().map(|s| s.to_string()).collect();
                write!(f, "boxinf:template={template},bound={bound},steps=[{}]", steps.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub formula: Formula,
    pub by: Justification,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Proof {
    pub premises: Vec<Formula>,
    pub steps: Vec<Step>,
}

impl Proof {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.steps.last().map(|s| &s.formula)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofErrorKind {
    #[error("proof has no steps")]
    Empty,
    #[error("cites step {index}, but only steps before {current} may be cited")]
    ForwardReference { index: usize, current: usize },
    #[error("premise {index} does not exist ({count} premises)")]
    NoSuchPremise { index: usize, count: usize },
    #[error("premise {index} is {expected}")]
    PremiseMismatch { index: usize, expected: Formula },
    #[error("unknown axiom {0}")]
    UnknownAxiom(String),
    #[error("not an instance of {axiom}")]
    NotAnInstance { axiom: String },
    #[error("{axiom}: {meta} must be modalized, got {bound}")]
    SideCondition { axiom: String, meta: String, bound: Formula },
    #[error("modus ponens expects step {major} to be {expected}")]
    MpMismatch { major: usize, expected: Formula },
    #[error("necessitation of step {index} gives {expected}")]
    NecMismatch { index: usize, expected: Formula },
    #[error("unknown rule template {0}")]
    UnknownTemplate(String),
    #[error("conclusion does not have the shape []phi \\/ ([]alpha -> []alpha * []beta)")]
    BoxInfShape,
    #[error("bound {bound} is below the required {required}")]
    BoundTooSmall { bound: u32, required: u32 },
    #[error("no cited step is {expected} (n = {n})")]
    BoxInfMissing { n: u32, expected: Formula },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {step}: {kind}")]
pub struct ProofError {
    /// Zero-based step index; `0` for an empty proof.
    pub step: usize,
    pub kind: ProofErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    /// Accepted, with the infinitary rule checked only for `n ≤ bound`.
    AcceptBounded { bound: u32 },
    Reject(ProofError),
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        !matches!(self, Verdict::Reject(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accept => write!(f, "Accept"),
            Verdict::AcceptBounded { bound } => write!(f, "Accept-Bounded({bound})"),
            Verdict::Reject(e) => write!(f, "Reject: {e}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    /// Smallest bound accepted on a BoxInf step.
    pub boxinf_bound: u32,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { boxinf_bound: 1 }
    }
}

pub fn check_proof(proof: &Proof, axioms: &AxiomTable, opts: CheckOptions) -> Verdict {
    if proof.steps.is_empty() {
        return Verdict::Reject(ProofError { step: 0, kind: ProofErrorKind::Empty });
    }
    let mut weakest: Option<u32> = None;
    for (k, step) in proof.steps.iter().enumerate() {
        match check_step(proof, axioms, opts, k) {
            Ok(()) => {}
            Err(kind) => return Verdict::Reject(ProofError { step: k, kind }),
        }
        if let Justification::BoxInf { bound, .. } = step.by {
            weakest = Some(weakest.map_or(bound, |b| b.min(bound)));
        }
    }
    match weakest {
        Some(bound) => Verdict::AcceptBounded { bound },
        None => Verdict::Accept,
    }
}

fn check_step(proof: &Proof, axioms: &AxiomTable, opts: CheckOptions, k: usize) -> Result<(), ProofErrorKind> {
    let current = &proof.steps[k].formula;
    let earlier = |index: usize| -> Result<&Formula, ProofErrorKind> {
        if index < k {
            Ok(&proof.steps[index].formula)
        } else {
            Err(ProofErrorKind::ForwardReference { index, current: k })
        }
    };
    match &proof.steps[k].by {
        Justification::Premise(i) => {
            let expected = proof
                .premises
                .get(*i)
                .ok_or(ProofErrorKind::NoSuchPremise { index: *i, count: proof.premises.len() })?;
            if expected != current {
                return Err(ProofErrorKind::PremiseMismatch { index: *i, expected: expected.clone() });
            }
        }
        Justification::Axiom(name) => {
            let entry = axioms.get(name).ok_or_else(|| ProofErrorKind::UnknownAxiom(name.clone()))?;
            match match_schema_detailed(&entry.schema, current) {
                Ok(_) => {}
                Err(MatchFailure::Structure) => {
                    return Err(ProofErrorKind::NotAnInstance { axiom: name.clone() })
                }
                Err(MatchFailure::SideCondition { meta, bound }) => {
                    return Err(ProofErrorKind::SideCondition { axiom: name.clone(), meta, bound })
                }
            }
        }
        Justification::Mp(i, j) => {
            let minor = earlier(*i)?;
            let major = earlier(*j)?;
            let expected = Formula::imp(minor.clone(), current.clone());
            if *major != expected {
                return Err(ProofErrorKind::MpMismatch { major: *j, expected });
            }
        }
        Justification::Nec(i) => {
            let expected = Formula::nec(earlier(*i)?.clone());
            if *current != expected {
                return Err(ProofErrorKind::NecMismatch { index: *i, expected });
            }
        }
        Justification::BoxInf { template, bound, steps } => {
            if template != BOXINF_TEMPLATE {
                return Err(ProofErrorKind::UnknownTemplate(template.clone()));
            }
            let required = opts.boxinf_bound.max(1);
            if *bound < required {
                return Err(ProofErrorKind::BoundTooSmall { bound: *bound, required });
            }
            let (bp, ba, bb) = boxinf_parts(current).ok_or(ProofErrorKind::BoxInfShape)?;
            let cited = steps.iter().map(|&s| earlier(s)).collect::<Result<Vec<_>, _>>()?;
            for n in 1..=*bound {
                let expected = Formula::join(bp.clone(), Formula::imp(ba.clone(), Formula::power(bb, n)));
                if !cited.iter().any(|f| **f == expected) {
                    return Err(ProofErrorKind::BoxInfMissing { n, expected });
                }
            }
        }
    }
    Ok(())
}

/// Splits `□φ ∨ (□α → □α*□β)` into `(□φ, □α, □β)`.
fn boxinf_parts(f: &Formula) -> Option<(&Formula, &Formula, &Formula)> {
    let Formula::Join(bp, rest) = f else { return None };
    let Formula::Impl(ba, prod) = rest.as_ref() else { return None };
    let Formula::Star(ba2, bb) = prod.as_ref() else { return None };
    let boxed = |g: &Formula| matches!(g, Formula::Box(_));
    (boxed(bp) && boxed(ba) && boxed(bb) && ba == ba2).then_some((bp.as_ref(), ba.as_ref(), bb.as_ref()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn step(s: &str, by: Justification) -> Step {
        Step { formula: f(s), by }
    }

    fn dia_from_p() -> Proof {
        Proof {
            premises: vec![f("p")],
            steps: vec![
                step("p", Justification::Premise(0)),
                step("p -> <>p", Justification::Axiom("T-Dia".into())),
                step("<>p", Justification::Mp(0, 1)),
            ],
        }
    }

    fn check(p: &Proof) -> Verdict {
        check_proof(p, &AxiomTable::standard(), CheckOptions::default())
    }

    #[test]
    fn accepts_examples() {
        assert_eq!(check(&dia_from_p()), Verdict::Accept);
        let t_box = Proof { premises: vec![], steps: vec![step("[]q -> q", Justification::Axiom("T-Box".into()))] };
        assert_eq!(check(&t_box), Verdict::Accept);
    }

    #[test]
    fn missing_premise_is_an_index_error() {
        let p = Proof { premises: vec![], steps: vec![step("q", Justification::Premise(0))] };
        let Verdict::Reject(e) = check(&p) else { panic!() };
        assert_eq!(e.step, 0);
        assert_eq!(e.kind, ProofErrorKind::NoSuchPremise { index: 0, count: 0 });
    }

    #[test]
    fn side_condition_rejected() {
        let p = Proof {
            premises: vec![],
            steps: vec![step("[](p -> q) -> (p -> []q)", Justification::Axiom("K-Box".into()))],
        };
        let Verdict::Reject(e) = check(&p) else { panic!() };
        assert!(matches!(e.kind, ProofErrorKind::SideCondition { .. }));
    }

    #[test]
    fn nec_and_forward_references() {
        let mut p = dia_from_p();
        p.steps.push(step("[]<>p", Justification::Nec(2)));
        assert_eq!(check(&p), Verdict::Accept);
        p.steps[3].by = Justification::Nec(1);
        let Verdict::Reject(e) = check(&p) else { panic!() };
        assert_eq!(e.step, 3);
        p.steps[3].by = Justification::Nec(3);
        let Verdict::Reject(e) = check(&p) else { panic!() };
        assert_eq!(e.kind, ProofErrorKind::ForwardReference { index: 3, current: 3 });
    }

    fn boxinf_proof(bound: u32) -> Proof {
        let mut premises = Vec::new();
        let mut steps = Vec::new();
        for n in 1..=bound {
            let beta = Formula::power(&f("[]q"), n);
            let prem = Formula::join(f("[]r"), Formula::imp(f("[]p"), beta));
            steps.push(Step { formula: prem.clone(), by: Justification::Premise(premises.len()) });
            premises.push(prem);
        }
        steps.push(step(
            "[]r \\/ ([]p -> []p * []q)",
            Justification::BoxInf { template: "BoxInf".into(), bound, steps: (0..bound as usize).collect() },
        ));
        Proof { premises, steps }
    }

    #[test]
    fn boxinf_is_bounded() {
        assert_eq!(check(&boxinf_proof(3)), Verdict::AcceptBounded { bound: 3 });
        let strict = CheckOptions { boxinf_bound: 4 };
        let v = check_proof(&boxinf_proof(3), &AxiomTable::standard(), strict);
        assert!(matches!(v, Verdict::Reject(ProofError { kind: ProofErrorKind::BoundTooSmall { .. }, .. })));
        assert_eq!(check_proof(&boxinf_proof(4), &AxiomTable::standard(), strict), Verdict::AcceptBounded { bound: 4 });
    }

    #[test]
    fn boxinf_missing_power() {
        let mut p = boxinf_proof(3);
        if let Justification::BoxInf { steps, .. } = &mut p.steps[3].by {
            steps.retain(|&s| s != 1);
        }
        let Verdict::Reject(e) = check(&p) else { panic!() };
        assert!(matches!(e.kind, ProofErrorKind::BoxInfMissing { n: 2, .. }));
    }

    #[test]
    fn display_round_trips_through_file_syntax() {
        let j = Justification::BoxInf { template: "BoxInf".into(), bound: 2, steps: vec![0, 1] };
        assert_eq!(j.to_string(), "boxinf:template=BoxInf,bound=2,steps=[0,1]");
    }
}
