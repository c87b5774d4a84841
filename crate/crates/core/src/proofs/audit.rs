use std::collections::BTreeMap;
use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::axioms::{AxiomEntry, AxiomTable};
use crate::compiled::{assignment_to_valuation, Cell, ChainEvaluator, Program};
use crate::gen::{random_formula, random_modalized, FormulaShape};
use crate::mv::MonadicElement;
use crate::par::Exec;
use crate::semantics::SafeStructure;
use crate::syntax::{Formula, MetaKind, Schema, Substitution};

/// How valuations of an exhaustively searched cell are visited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Enumeration {
    /// Every assignment.
    Full,
    /// One assignment per orbit under permutations of the worlds. Truth
    /// values are invariant under such permutations, so this is exhaustive
    /// up to isomorphism.
    #[default]
    UpToWorldPermutation,
}

#[derive(Debug, Clone)]
pub struct AuditConfig {
    /// Random instances per schema, or trials per derived rule.
    pub trials: usize,
    pub m_max: u32,
    pub n_max: usize,
    /// Cells with more assignments than this are sampled this many times.
    pub valuation_cap: u64,
    pub max_depth: usize,
    pub vars: Vec<String>,
    pub seed: u64,
    pub exec: Exec,
    pub enumeration: Enumeration,
    /// Violations kept per schema; counts are always complete.
    pub keep: usize,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            trials: 1000,
            m_max: 3,
            n_max: 3,
            valuation_cap: 1_000_000,
            max_depth: 3,
            vars: vec!["p".into(), "q".into(), "r".into()],
            seed: 0,
            exec: Exec::default(),
            enumeration: Enumeration::default(),
            keep: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditViolation {
    pub schema: String,
    pub instance: String,
    pub m: u32,
    pub n: usize,
    pub valuation: BTreeMap<String, MonadicElement>,
    pub value: MonadicElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemaAudit {
    pub name: String,
    pub instances: usize,
    pub valuations: u64,
    /// (instance, cell) pairs that were sampled instead of enumerated.
    pub sampled: u64,
    pub violation_count: usize,
    pub violations: Vec<AuditViolation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub schemas: Vec<SchemaAudit>,
}

impl AuditReport {
    pub fn total_violations(&self) -> usize {
        self.schemas.iter().map(|s| s.violation_count).sum()
    }

    pub fn total_valuations(&self) -> u64 {
        self.schemas.iter().map(|s| s.valuations).sum()
    }
}

/// Audits every schema of `table`. Width schemas are only evaluated on
/// cells with at most their number of worlds.
pub fn axiom_soundness_audit(table: &AxiomTable, cfg: &AuditConfig) -> AuditReport {
    AuditReport { schemas: table.entries().iter().map(|e| audit_entry(e, cfg)).collect() }
}

/// Audits one schema over all cells of `cfg`.
pub fn audit_schema(schema: &Schema, cfg: &AuditConfig) -> SchemaAudit {
    audit_entry(&AxiomEntry { schema: schema.clone(), max_worlds: None }, cfg)
}

fn audit_entry(entry: &AxiomEntry, cfg: &AuditConfig) -> SchemaAudit {
    let schema = &entry.schema;
    let shape = FormulaShape { max_depth: cfg.max_depth, vars: cfg.vars.clone() };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ name_hash(&schema.name));
    let instances: Vec<Formula> = (0..cfg.trials).map(|_| random_instance(&mut rng, schema, &shape)).collect();
    let n_max = entry.max_worlds.map_or(cfg.n_max, |k| k.min(cfg.n_max));
    let cells: Vec<Cell> =
        (1..=cfg.m_max).flat_map(|m| (1..=n_max).map(move |n| Cell { m, n })).collect();

    let seed = cfg.seed;
    let results = cfg.exec.map(instances.len(), |i| {
        audit_instance(&instances[i], &cells, cfg, seed.wrapping_add(i as u64))
    });

    let mut out = SchemaAudit {
        name: schema.name.clone(),
        instances: instances.len(),
        valuations: 0,
        sampled: 0,
        violation_count: 0,
        violations: Vec::new(),
    };
    for (inst, r) in instances.iter().zip(results) {
        out.valuations += r.valuations;
        out.sampled += r.sampled;
        if let Some((cell, valuation, value)) = r.violation {
            out.violation_count += 1;
            if out.violations.len() < cfg.keep {
                out.violations.push(AuditViolation {
                    schema: schema.name.clone(),
                    instance: inst.to_string(),
                    m: cell.m,
                    n: cell.n,
                    valuation,
                    value,
                });
            }
        }
    }
    out
}

/// A random instance; modalized metavariables get modalized formulas.
pub(crate) fn random_instance<R: Rng + ?Sized>(rng: &mut R, schema: &Schema, shape: &FormulaShape) -> Formula {
    let sub: Substitution = schema
        .metas
        .iter()
        .map(|(meta, kind)| {
            let f = match kind {
                MetaKind::Any => random_formula(rng, shape),
                MetaKind::Modalized => random_modalized(rng, shape),
            };
            (meta.clone(), f)
        })
        .collect();
    schema.instantiate(&sub)
}

fn name_hash(name: &str) -> u64 {
    // FNV-1a; only needs to be stable.
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

struct InstanceResult {
    valuations: u64,
    sampled: u64,
    violation: Option<(Cell, BTreeMap<String, MonadicElement>, MonadicElement)>,
}

fn audit_instance(f: &Formula, cells: &[Cell], cfg: &AuditConfig, seed: u64) -> InstanceResult {
    let vars: Vec<String> = f.variables().into_iter().collect();
    let prog = Program::compile(&[f], &vars);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut res = InstanceResult { valuations: 0, sampled: 0, violation: None };
    for &cell in cells {
        let mut ev = ChainEvaluator::new(cell.m, cell.n);
        let mut check = |a: &[u32], res: &mut InstanceResult| {
            res.valuations += 1;
            ev.run(&prog, a);
            if ev.root_is_one(&prog, 0) {
                ControlFlow::Continue(())
            } else {
                let valuation = assignment_to_valuation(&vars, cell, a).into_iter().collect();
                ControlFlow::Break((cell, valuation, ev.root_element(&prog, 0)))
            }
        };
        let count = match cfg.enumeration {
            Enumeration::Full => cell.assignments(vars.len()),
            Enumeration::UpToWorldPermutation => cell.assignments_up_to_symmetry(vars.len()),
        };
        let mut a = vec![0u32; vars.len() * cell.n];
        let flow = if count > cfg.valuation_cap {
            res.sampled += 1;
            (0..cfg.valuation_cap).try_for_each(|_| {
                cell.random_assignment(&mut rng, &mut a);
                check(&a, &mut res)
            })
        } else {
            match cfg.enumeration {
                Enumeration::Full => (0..count).try_for_each(|i| {
                    cell.decode(i, &mut a);
                    check(&a, &mut res)
                }),
                Enumeration::UpToWorldPermutation => {
                    cell.for_each_up_to_symmetry(vars.len(), |a| check(a, &mut res))
                }
            }
        };
        if let ControlFlow::Break(v) = flow {
            res.violation = Some(v);
            break;
        }
    }
    res
}

/// Derived rules of the infinitary calculus whose semantic content can be
/// checked model by model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivedRule {
    /// `Γ,□α ⊢ φ` and `Γ,□β ⊢ ψ` give `Γ,□α∨□β ⊢ φ∨ψ`.
    DisjunctionHypothesis,
    /// `Γ,□α→□β ⊢ φ` and `Γ,□β→□α ⊢ φ` give `Γ ⊢ φ`.
    Prelinearity,
    /// `Γ ⊢ φ∨□ψ` and `Γ,□ψ ⊢ φ` give `Γ ⊢ φ`.
    DisjunctionConclusion,
}

impl DerivedRule {
    pub const ALL: [DerivedRule; 3] =
        [DerivedRule::DisjunctionHypothesis, DerivedRule::Prelinearity, DerivedRule::DisjunctionConclusion];

    pub fn name(self) -> &'static str {
        match self {
            DerivedRule::DisjunctionHypothesis => "disjunction-hypothesis",
            DerivedRule::Prelinearity => "prelinearity",
            DerivedRule::DisjunctionConclusion => "disjunction-conclusion",
        }
    }
}

impl fmt::Display for DerivedRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for DerivedRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DerivedRule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown rule {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleViolation {
    pub trial: usize,
    pub what: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleAudit {
    pub rule: DerivedRule,
    pub trials: usize,
    /// Models of `Γ` examined by the per-model check.
    pub models_checked: usize,
    /// Trials where the rule's hypotheses held over the sampled class.
    pub hypotheses_held: usize,
    pub violation_count: usize,
    pub violations: Vec<RuleViolation>,
}

const CLASS_SIZE: usize = 48;

/// Checks a derived rule semantically. Each trial draws random formulas and
/// a class of random models from one cell, then checks (a) the per-model
/// fact the rule rests on for every model of `Γ`, and (b) the rule itself
/// with consequence taken relative to the class.
pub fn derived_rule_audit(rule: DerivedRule, cfg: &AuditConfig) -> RuleAudit {
    let shape = FormulaShape { max_depth: cfg.max_depth.max(1), vars: cfg.vars.clone() };
    let small = FormulaShape { max_depth: 2, ..shape.clone() };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ name_hash(rule.name()));
    let mut out = RuleAudit {
        rule,
        trials: cfg.trials,
        models_checked: 0,
        hypotheses_held: 0,
        violation_count: 0,
        violations: Vec::new(),
    };
    for trial in 0..cfg.trials {
        let gamma: Vec<Formula> =
            (0..rng.gen_range(0..=1)).map(|_| random_formula(&mut rng, &small)).collect();
        let alpha = random_formula(&mut rng, &shape);
        let beta = random_formula(&mut rng, &shape);
        let mut phi = random_formula(&mut rng, &shape);
        let mut psi = random_formula(&mut rng, &shape);
        if rng.gen_bool(0.5) {
            // Instances whose hypotheses hold more often.
            match rule {
                DerivedRule::DisjunctionHypothesis => {
                    phi = alpha.clone();
                    psi = beta.clone();
                }
                DerivedRule::Prelinearity => {
                    phi = Formula::join(
                        Formula::imp(Formula::nec(alpha.clone()), Formula::nec(beta.clone())),
                        phi,
                    );
                }
                DerivedRule::DisjunctionConclusion => psi = phi.clone(),
            }
        }
        let cell = Cell { m: rng.gen_range(1..=cfg.m_max), n: rng.gen_range(1..=cfg.n_max) };
        let class: Vec<SafeStructure> = (0..CLASS_SIZE).map(|_| random_model(&mut rng, cell, &cfg.vars)).collect();
        let holds = |k: &SafeStructure, f: &Formula| k.eval(f).expect("variables bound").is_one();
        let models: Vec<&SafeStructure> = class.iter().filter(|k| gamma.iter().all(|g| holds(k, g))).collect();
        let entails = |extra: &Formula, goal: &Formula| {
            models.iter().filter(|k| holds(k, extra)).all(|k| holds(k, goal))
        };
        let (ba, bb, bpsi) = (Formula::nec(alpha.clone()), Formula::nec(beta.clone()), Formula::nec(psi.clone()));
        let mut fail = |what: String| {
            out.violation_count += 1;
            if out.violations.len() < cfg.keep {
                out.violations.push(RuleViolation { trial, what });
            }
        };

        for k in &models {
            out.models_checked += 1;
            let ok = match rule {
                DerivedRule::DisjunctionHypothesis => {
                    !holds(k, &Formula::join(ba.clone(), bb.clone())) || holds(k, &ba) || holds(k, &bb)
                }
                DerivedRule::Prelinearity => {
                    holds(k, &Formula::imp(ba.clone(), bb.clone())) || holds(k, &Formula::imp(bb.clone(), ba.clone()))
                }
                DerivedRule::DisjunctionConclusion => {
                    !holds(k, &Formula::join(phi.clone(), bpsi.clone())) || holds(k, &phi) || holds(k, &bpsi)
                }
            };
            if !ok {
                fail(format!("per-model check fails for alpha={alpha}, beta={beta}, phi={phi}, psi={psi}"));
            }
        }

        let (hyp, concl) = match rule {
            DerivedRule::DisjunctionHypothesis => (
                entails(&ba, &phi) && entails(&bb, &psi),
                entails(&Formula::join(ba.clone(), bb.clone()), &Formula::join(phi.clone(), psi.clone())),
            ),
            DerivedRule::Prelinearity => (
                entails(&Formula::imp(ba.clone(), bb.clone()), &phi)
                    && entails(&Formula::imp(bb.clone(), ba.clone()), &phi),
                entails(&Formula::One, &phi),
            ),
            DerivedRule::DisjunctionConclusion => (
                entails(&Formula::One, &Formula::join(phi.clone(), bpsi.clone())) && entails(&bpsi, &phi),
                entails(&Formula::One, &phi),
            ),
        };
        if hyp {
            out.hypotheses_held += 1;
            if !concl {
                fail(format!("rule fails on the class for alpha={alpha}, beta={beta}, phi={phi}, psi={psi}"));
            }
        }
    }
    out
}

fn random_model<R: Rng + ?Sized>(rng: &mut R, cell: Cell, vars: &[String]) -> SafeStructure {
    let mut a = vec![0u32; vars.len() * cell.n];
    cell.random_assignment(rng, &mut a);
    let valuation = assignment_to_valuation(vars, cell, &a).into_iter().collect();
    SafeStructure::new(cell.n, valuation).expect("lengths match")
}
