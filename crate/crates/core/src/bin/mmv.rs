use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use mmv::analysis::{
    classify, fep_embed, filters, radical, radical_by_powers, represent_simple, validate, AlgebraFile,
};
use mmv::par::with_jobs;
use mmv::proofs::{
    axiom_soundness_audit, check_proof, derived_rule_audit, AuditConfig, AxiomTable, CheckOptions,
    DerivedRule, Enumeration, ProofFile, Verdict,
};
use mmv::search::{boxinf_soundness_probe, refute, refute_width_k, ProbeConfig, SearchBudget, CAVEAT};
use mmv::semantics::ConsequenceCheck;
use mmv::{parse, Exec, Formula, SafeStructure};

#[derive(Parser)]
#[command(name = "mmv", version, about = "S5-modal Lukasiewicz logic and monadic MV-algebra workbench")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "MMV_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads for search and audits.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula on a model file.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: String,
    },
    /// Check whether a model refutes the consequence gamma |= formula.
    ModelCheck {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        gamma: Option<PathBuf>,
        #[arg(long)]
        formula: String,
    },
    /// Search the algebras L_m^n for a countermodel to gamma |= formula.
    Refute {
        #[arg(long)]
        gamma: Option<PathBuf>,
        #[arg(long)]
        formula: String,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Only interpretations with at most k worlds.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        width: Option<u64>,
    },
    /// Check a proof file.
    Prove {
        proof: PathBuf,
        /// Add the width axiom W_k to the axiom table.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        width: Option<u64>,
        /// Smallest bound accepted on BoxInf steps.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        boxinf_bound: u32,
    },
    /// Semantic audits of the axioms and rules.
    Audit {
        #[command(subcommand)]
        what: AuditCommand,
    },
    /// Analyze a finite monadic MV-algebra.
    Algebra {
        file: PathBuf,
        #[arg(value_enum)]
        action: AlgebraAction,
    },
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..=64))]
    m_max: u32,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=16))]
    n_max: u64,
    /// Cells with more valuations than this are sampled.
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    valuation_cap: u64,
    /// Wall-clock limit in milliseconds.
    #[arg(long)]
    time_limit_ms: Option<u64>,
}

#[derive(Args)]
struct TrialArgs {
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..=16))]
    m_max: u32,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=8))]
    n_max: u64,
}

#[derive(Subcommand)]
enum AuditCommand {
    /// Random instances of every axiom schema under exhaustive valuations.
    Axioms {
        #[command(flatten)]
        trials: TrialArgs,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=8))]
        max_depth: u64,
        #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
        valuation_cap: u64,
        /// Include W_k.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        width: Option<u64>,
        /// Enumerate every valuation instead of one per world permutation.
        #[arg(long)]
        full: bool,
    },
    /// Derived rules checked on random models.
    Rules {
        #[command(flatten)]
        trials: TrialArgs,
        /// One rule; all by default.
        #[arg(long)]
        rule: Option<DerivedRule>,
    },
    /// The bounded infinitary rule on random models.
    Boxinf {
        #[command(flatten)]
        trials: TrialArgs,
        #[arg(long, default_value = "p")]
        alpha: String,
        #[arg(long, default_value = "q")]
        beta: String,
        #[arg(long, default_value = "r")]
        phi: String,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        bound: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgebraAction {
    Validate,
    Classify,
    Filters,
    Radical,
    Represent,
    Fep,
}

/// Reported on stderr with exit status 2.
struct InputError(String);

impl<E: Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Outcome = Result<bool, InputError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let jobs = cli.jobs as usize;
    match with_jobs(jobs, || run(&cli)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let exec = if cli.jobs > 1 { Exec::Parallel } else { Exec::Sequential };
    let out = Output { json: cli.json };
    match &cli.command {
        Command::Eval { model, formula } => {
            let k = read_model(model)?;
            let f = parse_formula(formula)?;
            let v = k.eval(&f)?;
            out.emit(&json!({ "formula": f.to_string(), "value": v }), || v.to_string());
            Ok(true)
        }
        Command::ModelCheck { model, gamma, formula } => {
            let k = read_model(model)?;
            let gamma = read_gamma(gamma.as_deref())?;
            let f = parse_formula(formula)?;
            let check = k.check_consequence(&gamma, &f)?;
            let value = k.eval(&f)?;
            out.emit(&json!({ "result": check, "value": value }), || {
                let word = match check {
                    ConsequenceCheck::NotApplicable => "not-applicable: the model does not satisfy gamma",
                    ConsequenceCheck::Consistent => "consistent",
                    ConsequenceCheck::Refutes => "refutes",
                };
                format!("{word}\n{f} = {value}")
            });
            Ok(check != ConsequenceCheck::Refutes)
        }
        Command::Refute { gamma, formula, budget, width } => {
            let gamma = read_gamma(gamma.as_deref())?;
            let phi = parse_formula(formula)?;
            let b = SearchBudget {
                m_max: budget.m_max,
                n_max: budget.n_max as usize,
                valuation_cap: budget.valuation_cap,
                width: None,
                time_limit: budget.time_limit_ms.map(Duration::from_millis),
                seed: cli.seed,
                exec,
            };
            let report = match width {
                Some(k) => refute_width_k(&gamma, &phi, *k as usize, &b)?,
                None => refute(&gamma, &phi, &b)?,
            };
            let found = report.countermodel().is_some();
            out.emit(&report.to_json(), || match report.countermodel() {
                Some(c) => {
                    let mut s = format!("countermodel in L_{}^{}\n", c.m, c.n);
                    for (var, v) in &c.valuation {
                        s += &format!("  {var} = {v}\n");
                    }
                    for (g, v) in &c.gamma_values {
                        s += &format!("  {g} = {v}\n");
                    }
                    s += &format!("  {} = {}", c.phi, c.phi_value);
                    s
                }
                None => {
                    let timeout = if report.timed_out { " (time limit reached)" } else { "" };
                    format!("exhausted after {} cells{timeout}\nnote: {CAVEAT}", report.cells_visited)
                }
            });
            Ok(found)
        }
        Command::Prove { proof, width, boxinf_bound } => {
            let file = ProofFile::from_json(&read(proof)?)?;
            let proof = file.to_proof()?;
            let mut table = AxiomTable::standard();
            if let Some(k) = width {
                table = table.with_width(*k as usize);
            }
            let verdict = check_proof(&proof, &table, CheckOptions { boxinf_bound: *boxinf_bound });
            let body = match &verdict {
                Verdict::Accept => json!({ "verdict": "accept" }),
                Verdict::AcceptBounded { bound } => json!({ "verdict": "accept-bounded", "bound": bound }),
                Verdict::Reject(e) => json!({ "verdict": "reject", "step": e.step, "reason": e.kind.to_string() }),
            };
            let conclusion = proof.conclusion().map(|f| f.to_string());
            out.emit(&json!({ "conclusion": conclusion, "result": body }), || verdict.to_string());
            Ok(verdict.is_accept())
        }
        Command::Audit { what } => audit(what, cli.seed, exec, out),
        Command::Algebra { file, action } => algebra(file, *action, out),
    }
}

fn audit(what: &AuditCommand, seed: u64, exec: Exec, out: Output) -> Outcome {
    let base = |t: &TrialArgs| AuditConfig {
        trials: t.trials,
        m_max: t.m_max,
        n_max: t.n_max as usize,
        seed,
        exec,
        ..AuditConfig::default()
    };
    match what {
        AuditCommand::Axioms { trials, max_depth, valuation_cap, width, full } => {
            let mut table = AxiomTable::standard();
            if let Some(k) = width {
                table = table.with_width(*k as usize);
            }
            let cfg = AuditConfig {
                max_depth: *max_depth as usize,
                valuation_cap: *valuation_cap,
                enumeration: if *full { Enumeration::Full } else { Enumeration::UpToWorldPermutation },
                ..base(trials)
            };
            let report = axiom_soundness_audit(&table, &cfg);
            out.emit(&report, || {
                let mut s = String::new();
                for a in &report.schemas {
                    s += &format!(
                        "{:<12} {:>6} instances {:>12} valuations {:>4} violations\n",
                        a.name, a.instances, a.valuations, a.violation_count
                    );
                    for v in &a.violations {
                        s += &format!("  {v:?}\n");
                    }
                }
                s += &format!("total violations: {}", report.total_violations());
                s
            });
            Ok(report.total_violations() == 0)
        }
        AuditCommand::Rules { trials, rule } => {
            let cfg = base(trials);
            let rules: Vec<DerivedRule> = match rule {
                Some(r) => vec![*r],
                None => DerivedRule::ALL.to_vec(),
            };
            let reports: Vec<_> = rules.iter().map(|&r| derived_rule_audit(r, &cfg)).collect();
            let violations: usize = reports.iter().map(|r| r.violation_count).sum();
            out.emit(&reports, || {
                reports
                    .iter()
                    .map(|r| {
                        format!(
                            "{:<24} {} trials, {} models, {} violations",
                            r.rule, r.trials, r.models_checked, r.violation_count
                        )
                    })
                    .collect::<Vec<_>>()
                    .join("\n")
            });
            Ok(violations == 0)
        }
        AuditCommand::Boxinf { trials, alpha, beta, phi, bound } => {
            let (a, b, p) = (parse_formula(alpha)?, parse_formula(beta)?, parse_formula(phi)?);
            let cfg = ProbeConfig {
                trials: trials.trials,
                m_max: trials.m_max,
                n_max: trials.n_max as usize,
                seed,
                ..ProbeConfig::default()
            };
            let probe = boxinf_soundness_probe(&a, &b, &p, *bound, &cfg);
            out.emit(&probe, || {
                let mut s = format!(
                    "{} trials, premises held in {}, dichotomy in {}\nviolations: {}\nfinite-approximation gaps: {}",
                    probe.trials, probe.premises_held, probe.dichotomy_cases, probe.violation_count, probe.gap_count
                );
                if let Some(g) = probe.gaps.first() {
                    s += &format!(
                        "\n  e.g. []alpha = {}, []beta = {}, []phi = {}, conclusion = {}",
                        g.box_alpha, g.box_beta, g.box_phi, g.conclusion
                    );
                }
                s
            });
            Ok(probe.violation_count == 0)
        }
    }
}

fn algebra(path: &Path, action: AlgebraAction, out: Output) -> Outcome {
    let file = AlgebraFile::from_json(&read(path)?)?;
    let alg = file.build()?;
    let report = validate(&alg);
    if let AlgebraAction::Validate = action {
        out.emit(&report, || {
            if report.is_valid() {
                format!("valid monadic MV-algebra with {} elements", report.size)
            } else {
                report
                    .violated()
                    .map(|l| format!("{} fails ({} violations), e.g. {:?}", l.law, l.violations, l.witnesses.first()))
                    .collect::<Vec<_>>()
                    .join("\n")
            }
        });
        return Ok(report.is_valid());
    }
    if !report.is_valid() {
        let names: Vec<String> = report.violated().map(|l| l.law.to_string()).collect();
        return Err(InputError(format!("not a monadic MV-algebra: {} fail", names.join(", "))));
    }
    let labels = |ix: &[usize]| ix.iter().map(|&a| alg.label(a).to_string()).collect::<Vec<_>>();
    match action {
        AlgebraAction::Validate => unreachable!(),
        AlgebraAction::Classify => {
            let c = classify(&alg);
            out.emit(&c, || {
                let opt = |o: Option<usize>| o.map_or("-".to_string(), |k| k.to_string());
                format!(
                    "size: {}\nexists-image: {{{}}}\nFSI: {}\nsimple: {}\nwidth: {}\nwidth by equation: {}",
                    c.size,
                    c.exists_image.join(", "),
                    c.is_fsi,
                    c.is_simple,
                    opt(c.width),
                    opt(c.width_by_equation)
                )
            });
            Ok(true)
        }
        AlgebraAction::Filters => {
            let fs = filters(&alg);
            let rows: Vec<_> = fs
                .all
                .iter()
                .enumerate()
                .map(|(i, f)| {
                    json!({
                        "generator": alg.label(f.generator),
                        "elements": labels(&f.elements),
                        "proper": f.is_proper(&alg),
                        "prime": fs.prime.contains(&i),
                        "maximal": fs.maximal.contains(&i),
                    })
                })
                .collect();
            out.emit(&rows, || {
                fs.all
                    .iter()
                    .enumerate()
                    .map(|(i, f)| {
                        let mut tags = Vec::new();
                        if fs.prime.contains(&i) {
                            tags.push("prime");
                        }
                        if fs.maximal.contains(&i) {
                            tags.push("maximal");
                        }
                        if !f.is_proper(&alg) {
                            tags.push("improper");
                        }
                        format!("{{{}}} {}", labels(&f.elements).join(", "), tags.join(" "))
                    })
                    .collect::<Vec<_>>()
                    .join("\n")
            });
            Ok(true)
        }
        AlgebraAction::Radical => {
            let rad = radical(&alg);
            let agrees = rad == radical_by_powers(&alg);
            let semisimple = rad == [alg.one_ix()];
            out.emit(&json!({ "radical": labels(&rad), "semisimple": semisimple, "powers_agree": agrees }), || {
                format!("radical: {{{}}}\nsemisimple: {semisimple}", labels(&rad).join(", "))
            });
            if !agrees {
                return Err(InputError("radical disagrees with the 2a^n characterization".into()));
            }
            Ok(semisimple)
        }
        AlgebraAction::Represent => match represent_simple(&alg) {
            Ok(rep) => {
                rep.verify(&alg).map_err(InputError)?;
                let rows: Vec<_> = (0..alg.size())
                    .map(|a| json!({ "element": alg.label(a), "image": rep.images[a] }))
                    .collect();
                out.emit(&json!({ "maximal_filters": rep.maximal.len(), "images": rows }), || {
                    let mut s = format!("{} maximal filters\n", rep.maximal.len());
                    for a in 0..alg.size() {
                        s += &format!("  {} -> {}\n", alg.label(a), rep.images[a]);
                    }
                    s.trim_end().to_string()
                });
                Ok(true)
            }
            Err(e) => {
                out.emit(&json!({ "simple": false, "reason": e.to_string() }), || e.to_string());
                Ok(false)
            }
        },
        AlgebraAction::Fep => {
            let input = file.fep_input()?;
            let h = fep_embed(&input)?;
            let verified = h.verify(&input);
            out.emit(&json!({ "embedding": h, "verified": verified.is_ok() }), || {
                let mut s = format!("h: S -> L_{}^{} on points {:?}\n", h.m, h.n, h.points);
                for (a, b) in input.subset.iter().zip(&h.images) {
                    s += &format!("  {a} -> {b}\n");
                }
                if let Err(e) = &verified {
                    s += &format!("verification failed: {e}");
                }
                s.trim_end().to_string()
            });
            Ok(verified.is_ok())
        }
    }
}

#[derive(Clone, Copy)]
struct Output {
    json: bool,
}

impl Output {
    fn emit<T: Serialize + ?Sized>(self, value: &T, text: impl FnOnce() -> String) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
        } else {
            println!("{}", text());
        }
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn parse_formula(text: &str) -> Result<Formula, InputError> {
    parse(text).map_err(|e| InputError(format!("{text:?}: {e}")))
}

fn read_model(path: &Path) -> Result<SafeStructure, InputError> {
    serde_json::from_str(&read(path)?).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

/// A JSON array of formulas, or one formula per line with `#` comments.
fn read_gamma(path: Option<&Path>) -> Result<Vec<Formula>, InputError> {
    let Some(path) = path else { return Ok(Vec::new()) };
    let text = read(path)?;
    let at = |line: usize, e: &dyn Display| InputError(format!("{}:{line}: {e}", path.display()));
    if text.trim_start().starts_with('[') {
        let items: Vec<String> = serde_json::from_str(&text).map_err(|e| at(e.line(), &e))?;
        return items.iter().enumerate().map(|(i, s)| parse(s).map_err(|e| at(i + 1, &e))).collect();
    }
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| parse(l).map_err(|e| at(i, &e)))
        .collect()
}
