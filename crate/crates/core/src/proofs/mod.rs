//! Hilbert-style proofs: the axiom table, the checker, proof files, and
//! semantic audits of the axioms and derived rules.

mod audit;
mod axioms;
mod checker;
mod file;

pub use audit::{
    audit_schema, axiom_soundness_audit, derived_rule_audit, AuditConfig, AuditReport,
    AuditViolation, DerivedRule, Enumeration, RuleAudit, RuleViolation, SchemaAudit,
};
pub use axioms::{width_schema, AxiomEntry, AxiomTable};
pub use checker::{
    check_proof, CheckOptions, Justification, Proof, ProofError, ProofErrorKind, Step, Verdict,
};
pub use file::{ProofFile, ProofFileError, StepFile};
