//! Countermodel search over the canonical algebras `⟨L_m^n, ∃_∨, ∀_∧⟩`.
//!
//! A finite consequence `Γ ⊨ φ` fails iff it fails under some valuation into
//! some `⟨L_m^n⟩`, so enumerating cells `(m, n)` in a fair order makes
//! refutation semi-decidable. An `Exhausted` outcome only means the budget
//! ran out; it is not a validity certificate.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compiled::{assignment_to_valuation, Cell, ChainEvaluator, Program};
use crate::mv::{exists_sup, forall_inf, lift, MonadicElement, MvError, Truth};
use crate::par::Exec;
use crate::semantics::{EvalError, SafeStructure};
use crate::syntax::{parse, variables_of, Formula, ParseError};

pub const CAVEAT: &str = "search budget exhausted; this is not a proof of validity";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("m_max and n_max must be at least 1")]
    EmptyBudget,
    #[error("width {k} requires n_max <= {k}, got {n_max}")]
    WidthExceeded { k: usize, n_max: usize },
    #[error("width must be at least 1")]
    ZeroWidth,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBudget {
    pub m_max: u32,
    pub n_max: usize,
    /// Largest cell searched exhaustively; bigger cells get this many random samples.
    pub valuation_cap: u64,
    /// Restricts interpretations to at most `k` worlds.
    pub width: Option<usize>,
    pub time_limit: Option<Duration>,
    pub seed: u64,
    pub exec: Exec,
}

impl SearchBudget {
    pub fn new(m_max: u32, n_max: usize) -> Self {
        SearchBudget {
            m_max,
            n_max,
            valuation_cap: 1_000_000,
            width: None,
            time_limit: None,
            seed: 0,
            exec: Exec::default(),
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.m_max == 0 || self.n_max == 0 {
            return Err(SearchError::EmptyBudget);
        }
        match self.width {
            Some(0) => Err(SearchError::ZeroWidth),
            Some(k) if self.n_max > k => Err(SearchError::WidthExceeded { k, n_max: self.n_max }),
            _ => Ok(()),
        }
    }
}

/// The cells of a budget in search order: by `(m+1)^{n·vars}`, then by `n`.
pub fn cell_order(m_max: u32, n_max: usize, vars: usize) -> Vec<Cell> {
    let mut cells: Vec<Cell> =
        (1..=m_max).flat_map(|m| (1..=n_max).map(move |n| Cell { m, n })).collect();
    cells.sort_by_key(|c| (cost(*c, vars), c.n, c.m));
    cells
}

fn cost(cell: Cell, vars: usize) -> u128 {
    u128::from(cell.m + 1).saturating_pow((cell.n * vars) as u32)
}

/// A valuation into `⟨L_m^n⟩`, evaluated algebraically through the
/// pointwise MV operations and the quantifiers `∃_∨`, `∀_∧`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Valuation {
    pub n: usize,
    pub assignment: BTreeMap<String, MonadicElement>,
}

impl Valuation {
    pub fn value(&self, f: &Formula) -> Result<MonadicElement, EvalError> {
        Ok(match f {
            Formula::Var(v) => {
                self.assignment.get(v).cloned().ok_or_else(|| EvalError::Unbound(v.clone()))?
            }
            Formula::Zero => MonadicElement::zero(self.n, None),
            Formula::One => MonadicElement::one(self.n, None),
            Formula::Not(g) => self.value(g)?.neg(),
            Formula::Box(g) => forall_inf(&self.value(g)?),
            Formula::Diamond(g) => exists_sup(&self.value(g)?),
            _ => {
                let (op, a, b) = f.as_binary().expect("binary");
                let (a, b) = (self.value(a)?, self.value(b)?);
                // Constants are untagged; drop tags so mixed operands combine.
                let (a, b) = (untag(&a), untag(&b));
                lift(op.into(), &a, &b)
            }
        })
    }

    pub fn to_structure(&self) -> SafeStructure {
        SafeStructure::new(self.n, self.assignment.clone()).expect("valuation has matching lengths")
    }
}

fn untag(e: &MonadicElement) -> MonadicElement {
    e.retag(None).expect("dropping a tag always succeeds")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Countermodel {
    pub m: u32,
    pub n: usize,
    pub valuation: BTreeMap<String, MonadicElement>,
    pub gamma_values: Vec<(Formula, MonadicElement)>,
    pub phi: Formula,
    pub phi_value: MonadicElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("evaluation failed: {0}")]
    Eval(#[from] EvalError),
    #[error("{route} value of {formula} is {got}, expected {expected}")]
    Mismatch { route: &'static str, formula: String, got: String, expected: String },
    #[error("premise {0} is not 1")]
    PremiseNotOne(String),
    #[error("conclusion {0} evaluates to 1")]
    ConclusionOne(String),
    #[error("{0}")]
    Shape(String),
}

impl Countermodel {
    fn from_assignment(
        cell: Cell,
        vars: &[String],
        assignment: &[u32],
        gamma: &[Formula],
        phi: &Formula,
    ) -> Countermodel {
        let valuation: BTreeMap<_, _> =
            assignment_to_valuation(vars, cell, assignment).into_iter().collect();
        let val = Valuation { n: cell.n, assignment: valuation.clone() };
        let chain = |e: MonadicElement| e.retag(Some(cell.m)).expect("values stay in the chain");
        let gamma_values = gamma
            .iter()
            .map(|g| (g.clone(), chain(val.value(g).expect("all variables bound"))))
            .collect();
        let phi_value = chain(val.value(phi).expect("all variables bound"));
        Countermodel { m: cell.m, n: cell.n, valuation, gamma_values, phi: phi.clone(), phi_value }
    }

    /// Re-evaluates every stored value both algebraically and on the induced
    /// safe structure, and checks that it is still a countermodel.
    pub fn verify(&self) -> Result<(), VerifyError> {
        let val = Valuation { n: self.n, assignment: self.valuation.clone() };
        let k = SafeStructure::new(self.n, self.valuation.clone())
            .map_err(|e| VerifyError::Shape(e.to_string()))?;
        let check = |f: &Formula, stored: &MonadicElement| -> Result<(), VerifyError> {
            for (route, got) in [("algebraic", val.value(f)?), ("model", k.eval(f)?)] {
                if got.coords() != stored.coords() {
                    return Err(VerifyError::Mismatch {
                        route,
                        formula: f.to_string(),
                        got: got.to_string(),
                        expected: stored.to_string(),
                    });
                }
            }
            Ok(())
        };
        for (g, v) in &self.gamma_values {
            check(g, v)?;
            if !v.is_one() {
                return Err(VerifyError::PremiseNotOne(g.to_string()));
            }
        }
        check(&self.phi, &self.phi_value)?;
        if self.phi_value.is_one() {
            return Err(VerifyError::ConclusionOne(self.phi.to_string()));
        }
        Ok(())
    }

    pub fn structure(&self) -> SafeStructure {
        SafeStructure::new(self.n, self.valuation.clone()).expect("valuation has matching lengths")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Countermodel(Countermodel),
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub outcome: SearchOutcome,
    pub cells_visited: usize,
    /// Cells that were sampled rather than enumerated.
    pub sampled_cells: usize,
    pub timed_out: bool,
    pub seed: u64,
}

impl SearchReport {
    pub fn countermodel(&self) -> Option<&Countermodel> {
        match &self.outcome {
            SearchOutcome::Countermodel(c) => Some(c),
            SearchOutcome::Exhausted => None,
        }
    }

    pub fn to_json(&self) -> ReportJson {
        let mut r = ReportJson {
            verdict: "exhausted".into(),
            m: None,
            n: None,
            valuation: None,
            values: None,
            cells_visited: self.cells_visited,
            seed: self.seed,
            note: None,
        };
        match &self.outcome {
            SearchOutcome::Countermodel(c) => {
                r.verdict = "countermodel".into();
                r.m = Some(c.m);
                r.n = Some(c.n);
                r.valuation = Some(c.valuation.clone());
                let mut values: BTreeMap<String, MonadicElement> = c
                    .gamma_values
                    .iter()
                    .map(|(g, v)| (g.to_string(), v.clone()))
                    .collect();
                values.insert(c.phi.to_string(), c.phi_value.clone());
                r.values = Some(values);
            }
            SearchOutcome::Exhausted => r.note = Some(CAVEAT.into()),
        }
        r
    }
}

/// Serialized form of a [`SearchReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valuation: Option<BTreeMap<String, MonadicElement>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<BTreeMap<String, MonadicElement>>,
    pub cells_visited: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ReportJson {
    /// Rebuilds the countermodel of a serialized report. Stored values are
    /// keyed by printed formula and are re-parsed.
    pub fn countermodel(&self, gamma: &[Formula], phi: &Formula) -> Result<Countermodel, VerifyError> {
        let shape = |msg: &str| VerifyError::Shape(msg.to_string());
        if self.verdict != "countermodel" {
            return Err(shape("report carries no countermodel"));
        }
        let (Some(m), Some(n), Some(valuation), Some(values)) =
            (self.m, self.n, self.valuation.as_ref(), self.values.as_ref())
        else {
            return Err(shape("countermodel report is missing fields"));
        };
        let lookup = |f: &Formula| -> Result<MonadicElement, VerifyError> {
            let key = f.to_string();
            let v = values.get(&key).ok_or_else(|| shape(&format!("no stored value for {key}")))?;
            let reparsed: Result<Formula, ParseError> = parse(&key);
            if reparsed.as_ref() != Ok(f) {
                return Err(shape(&format!("stored key {key} does not re-parse")));
            }
            Ok(v.retag(Some(m))?)
        };
        let valuation = valuation
            .iter()
            .map(|(k, v)| Ok((k.clone(), v.retag(Some(m))?)))
            .collect::<Result<_, VerifyError>>()?;
        let gamma_values =
            gamma.iter().map(|g| Ok((g.clone(), lookup(g)?))).collect::<Result<_, VerifyError>>()?;
        Ok(Countermodel {
            m,
            n,
            valuation,
            gamma_values,
            phi: phi.clone(),
            phi_value: lookup(phi)?,
        })
    }
}

enum Hit {
    Found(Vec<u32>),
    TimedOut,
}

/// Searches for a valuation making every formula of `gamma` 1 and `phi` not 1.
pub fn refute(gamma: &[Formula], phi: &Formula, budget: &SearchBudget) -> Result<SearchReport, SearchError> {
    budget.validate()?;
    let vars = variables_of(gamma.iter().chain(std::iter::once(phi)));
    let mut roots: Vec<&Formula> = gamma.iter().collect();
    roots.push(phi);
    let prog = Program::compile(&roots, &vars);
    let phi_root = gamma.len();
    let deadline = budget.time_limit.map(|t| Instant::now() + t);
    let expired = || deadline.is_some_and(|d| Instant::now() >= d);

    let mut report = SearchReport {
        outcome: SearchOutcome::Exhausted,
        cells_visited: 0,
        sampled_cells: 0,
        timed_out: false,
        seed: budget.seed,
    };
    for cell in cell_order(budget.m_max, budget.n_max, vars.len()) {
        if expired() {
            report.timed_out = true;
            break;
        }
        report.cells_visited += 1;
        let total = cell.assignments(vars.len());
        let sampled = total > budget.valuation_cap;
        if sampled {
            report.sampled_cells += 1;
        }
        let len = if sampled { budget.valuation_cap } else { total };
        let width = vars.len() * cell.n;
        let hit = budget.exec.find_first(
            len,
            || (ChainEvaluator::new(cell.m, cell.n), vec![0u32; width]),
            |(ev, a), i| {
                if i % 65_536 == 65_535 && expired() {
                    return Some(Hit::TimedOut);
                }
                if sampled {
                    let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(budget.seed, cell, i));
                    cell.random_assignment(&mut rng, a);
                } else {
                    cell.decode(i, a);
                }
                ev.run(&prog, a);
                let refutes = (0..phi_root).all(|r| ev.root_is_one(&prog, r))
                    && !ev.root_is_one(&prog, phi_root);
                refutes.then(|| Hit::Found(a.clone()))
            },
        );
        match hit {
            Some(Hit::Found(a)) => {
                let cm = Countermodel::from_assignment(cell, &vars, &a, gamma, phi);
                report.outcome = SearchOutcome::Countermodel(cm);
                return Ok(report);
            }
            Some(Hit::TimedOut) => {
                report.timed_out = true;
                break;
            }
            None => {}
        }
    }
    Ok(report)
}

/// [`refute`] restricted to interpretations with at most `k` worlds.
pub fn refute_width_k(
    gamma: &[Formula],
    phi: &Formula,
    k: usize,
    budget: &SearchBudget,
) -> Result<SearchReport, SearchError> {
    if k == 0 {
        return Err(SearchError::ZeroWidth);
    }
    let mut b = budget.clone();
    b.n_max = b.n_max.min(k);
    b.width = Some(k);
    refute(gamma, phi, &b)
}

/// SplitMix64 over the seed, cell and sample index.
fn sample_seed(seed: u64, cell: Cell, i: u64) -> u64 {
    let mut z = seed
        ^ u64::from(cell.m).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (cell.n as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F)
        ^ i.wrapping_mul(0x1656_67B1_9E37_79F9);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct ProbeConfig {
    pub trials: usize,
    pub m_max: u32,
    pub n_max: usize,
    pub seed: u64,
    /// How many examples of each kind to keep; counts are always complete.
    pub keep: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig { trials: 1000, m_max: 4, n_max: 3, seed: 0, keep: 10 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeCase {
    pub m: u32,
    pub n: usize,
    pub valuation: BTreeMap<String, MonadicElement>,
    pub box_alpha: Truth,
    pub box_beta: Truth,
    pub box_phi: Truth,
    pub conclusion: Truth,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoxInfProbe {
    pub bound: u32,
    pub trials: usize,
    /// Trials in which every premise up to the bound held.
    pub premises_held: usize,
    /// Of those, trials where `□β = 1` or `□α = 0`.
    pub dichotomy_cases: usize,
    pub violation_count: usize,
    pub violations: Vec<ProbeCase>,
    pub gap_count: usize,
    /// Premises hold up to the bound yet the conclusion is below 1; only the
    /// full infinite premise set rules these out.
    pub gaps: Vec<ProbeCase>,
}

/// Samples random finite models for the rule with premises
/// `□φ ∨ (□α → (□β)ⁿ)`, `n = 1..=bound`, and conclusion `□φ ∨ (□α → □α*□β)`.
pub fn boxinf_soundness_probe(
    alpha: &Formula,
    beta: &Formula,
    phi: &Formula,
    bound: u32,
    cfg: &ProbeConfig,
) -> BoxInfProbe {
    assert!(bound >= 1 && cfg.m_max >= 1 && cfg.n_max >= 1);
    let (ba, bb, bp) = (Formula::nec(alpha.clone()), Formula::nec(beta.clone()), Formula::nec(phi.clone()));
    let mut roots = vec![ba.clone(), bb.clone(), bp.clone()];
    for k in 1..=bound {
        roots.push(Formula::join(bp.clone(), Formula::imp(ba.clone(), Formula::power(&bb, k))));
    }
    roots.push(Formula::join(bp.clone(), Formula::imp(ba.clone(), Formula::star(ba.clone(), bb.clone()))));
    let conclusion = roots.len() - 1;
    let vars = variables_of(roots.iter());
    let prog = Program::compile(&roots.iter().collect::<Vec<_>>(), &vars);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = BoxInfProbe {
        bound,
        trials: cfg.trials,
        premises_held: 0,
        dichotomy_cases: 0,
        violation_count: 0,
        violations: Vec::new(),
        gap_count: 0,
        gaps: Vec::new(),
    };
    for _ in 0..cfg.trials {
        let cell = Cell { m: rng.gen_range(1..=cfg.m_max), n: rng.gen_range(1..=cfg.n_max) };
        let mut a = vec![0u32; vars.len() * cell.n];
        cell.random_assignment(&mut rng, &mut a);
        let mut ev = ChainEvaluator::new(cell.m, cell.n);
        ev.run(&prog, &a);
        if !(3..conclusion).all(|r| ev.root_is_one(&prog, r)) {
            continue;
        }
        out.premises_held += 1;
        let at = |r: usize| Truth::scaled(ev.root(&prog, r)[0], cell.m);
        let case = ProbeCase {
            m: cell.m,
            n: cell.n,
            valuation: assignment_to_valuation(&vars, cell, &a).into_iter().collect(),
            box_alpha: at(0),
            box_beta: at(1),
            box_phi: at(2),
            conclusion: at(conclusion),
        };
        let concluded = ev.root_is_one(&prog, conclusion);
        if case.box_beta.is_one() || case.box_alpha.is_zero() {
            out.dichotomy_cases += 1;
            if !concluded {
                out.violation_count += 1;
                if out.violations.len() < cfg.keep {
                    out.violations.push(case);
                }
            }
        } else if !concluded {
            out.gap_count += 1;
            if out.gaps.len() < cfg.keep {
                out.gaps.push(case);
            }
        }
    }
    out
}

impl From<MvError> for VerifyError {
    fn from(e: MvError) -> Self {
        VerifyError::Shape(e.to_string())
    }
}
