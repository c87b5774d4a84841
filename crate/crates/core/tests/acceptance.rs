//! The acceptance criteria, one line each. Runs without the libtest harness
//! so the verdict lines are always printed; exits non-zero if any fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mmv::analysis::{classify, fep_embed, generate_subalgebra, represent_simple, FepInput};
use mmv::compiled::{assignment_to_valuation, Cell};
use mmv::gen::{random_formula, FormulaShape};
use mmv::laws::{check_exhaustive, check_sampled, Law, PowerAlgebra};
use mmv::proofs::{
    audit_schema, axiom_soundness_audit, check_proof, width_schema, AuditConfig, AxiomTable, CheckOptions,
    Enumeration, Justification, Proof, ProofErrorKind, ProofFile, Verdict,
};
use mmv::search::{boxinf_soundness_probe, refute, refute_width_k, ProbeConfig, SearchBudget, Valuation};
use mmv::syntax::{variables_of, Substitution};
use mmv::{parse, Formula, MonadicElement, SafeStructure, Truth};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 10] = [
        ("axiom soundness", axiom_soundness),
        ("monadic identities", monadic_identities),
        ("bridge", bridge),
        ("countermodel regression", countermodel_regression),
        ("width dichotomy", width_dichotomy),
        ("proof corpus", proof_corpus),
        ("simple representation", simple_representation),
        ("finite embeddings", finite_embeddings),
        ("width cross-check", width_cross_check),
        ("bounded infinitary rule", boxinf_probe),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn axiom_soundness() -> Check {
    let table = AxiomTable::standard().with_width(1).with_width(2);
    let cfg = AuditConfig::default();
    let report = axiom_soundness_audit(&table, &cfg);
    ensure(report.schemas.iter().all(|s| s.instances == 1000), || "wrong instance count".into())?;
    ensure(report.total_violations() == 0, || {
        let v = report.schemas.iter().flat_map(|s| &s.violations).next();
        format!("{} violations, first {v:?}", report.total_violations())
    })?;
    Ok(format!(
        "{} schemas x 1000 instances, {} valuations, 0 violations",
        report.schemas.len(),
        report.total_valuations()
    ))
}

fn monadic_identities() -> Check {
    let laws: Vec<Law> = Law::MV.into_iter().chain(Law::all_monadic()).collect();
    ensure(laws.len() == 6 + 5 + 14 + 4, || format!("{} laws", laws.len()))?;
    for (m, n) in [(1, 2), (2, 2)] {
        let alg = PowerAlgebra::new(m, n);
        for &law in &laws {
            let v = check_exhaustive(&alg, law);
            ensure(v.is_empty(), || format!("{} fails in L_{m}^{n}: {:?}", law.name(), v[0]))?;
        }
    }
    let alg = PowerAlgebra::new(4, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for &law in &laws {
        let v = check_sampled(&alg, law, 10_000, &mut rng);
        ensure(v.is_empty(), || format!("{} fails in L_4^3: {:?}", law.name(), v[0]))?;
    }
    Ok(format!("{} laws exhaustive in L_1^2, L_2^2 and 10000 samples each in L_4^3", laws.len()))
}

/// Reference semantics on exact rationals, independent of the library's
/// evaluators.
fn reference(f: &Formula, val: &BTreeMap<String, MonadicElement>, n: usize) -> Vec<num_rational::Ratio<i64>> {
    use num_rational::Ratio;
    let one = Ratio::from_integer(1);
    let zero = Ratio::from_integer(0);
    let r = |g: &Formula| reference(g, val, n);
    let pair = |a: &Formula, b: &Formula, op: &dyn Fn(Ratio<i64>, Ratio<i64>) -> Ratio<i64>| {
        r(a).into_iter().zip(r(b)).map(|(x, y)| op(x, y)).collect()
    };
    match f {
        Formula::Var(v) => val[v].coords().iter().map(|t| t.ratio()).collect(),
        Formula::Zero => vec![zero; n],
        Formula::One => vec![one; n],
        Formula::Not(g) => r(g).into_iter().map(|x| one - x).collect(),
        Formula::Box(g) => vec![r(g).into_iter().min().unwrap(); n],
        Formula::Diamond(g) => vec![r(g).into_iter().max().unwrap(); n],
        Formula::Impl(a, b) => pair(a, b, &|x, y| (one - x + y).min(one)),
        Formula::Star(a, b) => pair(a, b, &|x, y| (x + y - one).max(zero)),
        Formula::Oplus(a, b) => pair(a, b, &|x, y| (x + y).min(one)),
        Formula::Meet(a, b) => pair(a, b, &|x, y| x.min(y)),
        Formula::Join(a, b) => pair(a, b, &|x, y| x.max(y)),
    }
}

fn bridge() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let shape = FormulaShape::new(4, &["p", "q", "r"]);
    for trial in 0..500 {
        let f = random_formula(&mut rng, &shape);
        let (m, n) = (rng.gen_range(1..=3u32), rng.gen_range(1..=3usize));
        let vars = variables_of([&f]);
        let a: Vec<u32> = (0..vars.len() * n).map(|_| rng.gen_range(0..=m)).collect();
        let val: BTreeMap<_, _> = assignment_to_valuation(&vars, Cell { m, n }, &a).into_iter().collect();
        let algebraic = Valuation { n, assignment: val.clone() }.value(&f).map_err(|e| e.to_string())?;
        let model = SafeStructure::new(n, val.clone()).unwrap().eval(&f).map_err(|e| e.to_string())?;
        ensure(algebraic.coords() == model.coords(), || {
            format!("trial {trial}: {f} algebraic {algebraic} vs model {model}")
        })?;
        let expected = reference(&f, &val, n);
        let got: Vec<_> = model.coords().iter().map(|t| t.ratio()).collect();
        ensure(got == expected, || format!("trial {trial}: {f} disagrees with the reference"))?;
    }
    Ok("500 random pairs, m,n <= 3, algebraic = model = reference".into())
}

fn countermodel_regression() -> Check {
    let budget = SearchBudget::new(3, 3);
    let timed = |gamma: &[Formula], phi: &Formula| {
        let start = Instant::now();
        let r = refute(gamma, phi, &budget).unwrap();
        (r, start.elapsed())
    };
    let phi = parse("<>p -> []p").unwrap();
    let (r, t) = timed(&[], &phi);
    let c = r.countermodel().ok_or("no countermodel for <>p -> []p")?;
    ensure((c.m, c.n) == (1, 2) && c.valuation["p"].to_string() == "[1, 0]", || format!("got {c:?}"))?;
    ensure(t < Duration::from_secs(1), || format!("took {t:?}"))?;
    c.verify().map_err(|e| e.to_string())?;

    let w1 = width_schema(1);
    let inst = w1.instantiate(&Substitution::from([
        ("phi1".to_string(), Formula::var("p")),
        ("phi2".to_string(), Formula::var("q")),
    ]));
    let (r, t2) = timed(&[], &inst);
    let c = r.countermodel().ok_or("no countermodel for the W1 instance")?;
    let got = (c.valuation["p"].to_string(), c.valuation["q"].to_string());
    ensure(got == ("[1, 0]".into(), "[0, 1]".into()), || format!("got {got:?}"))?;
    ensure(t2 < Duration::from_secs(1), || format!("took {t2:?}"))?;
    c.verify().map_err(|e| e.to_string())?;

    for m in 1..=4 {
        let r = refute_width_k(&[], &inst, 1, &SearchBudget::new(m, 1)).map_err(|e| e.to_string())?;
        ensure(r.countermodel().is_none(), || format!("width 1 search refuted W1 at m = {m}"))?;
    }
    Ok(format!("found in {:.0?} and {:.0?}; width-1 search exhausted for m <= 4", t, t2))
}

fn width_dichotomy() -> Check {
    let mut notes = Vec::new();
    for k in 1..=2 {
        let schema = width_schema(k);
        let cfg = AuditConfig {
            trials: 200,
            m_max: 2,
            n_max: k,
            max_depth: 2,
            enumeration: Enumeration::Full,
            seed: 5,
            ..AuditConfig::default()
        };
        let audit = audit_schema(&schema, &cfg);
        ensure(audit.violation_count == 0, || format!("W{k} fails with <= {k} worlds: {:?}", audit.violations))?;

        let generic: Substitution = (1..=k + 1).map(|i| (format!("phi{i}"), Formula::var(&format!("p{i}")))).collect();
        let inst = schema.instantiate(&generic);
        // p_i is 1 everywhere except at world i.
        let tuple: BTreeMap<String, MonadicElement> = (1..=k + 1)
            .map(|i| {
                let coords = (1..=k + 1).map(|x| Truth::new(i64::from(x != i), 1).unwrap()).collect();
                (format!("p{i}"), MonadicElement::new(coords).unwrap())
            })
            .collect();
        let value = SafeStructure::new(k + 1, tuple).unwrap().eval(&inst).map_err(|e| e.to_string())?;
        ensure(value.coords().iter().all(|t| t.is_zero()), || format!("characteristic tuple gives {value}"))?;

        let within = refute_width_k(&[], &inst, k, &SearchBudget::new(2, k)).map_err(|e| e.to_string())?;
        ensure(within.countermodel().is_none(), || format!("W{k} refuted within width {k}"))?;
        let beyond = refute(&[], &inst, &SearchBudget::new(2, k + 1)).map_err(|e| e.to_string())?;
        let c = beyond.countermodel().ok_or(format!("W{k} not refuted with {} worlds", k + 1))?;
        ensure(c.n == k + 1, || format!("countermodel has {} worlds", c.n))?;
        c.verify().map_err(|e| e.to_string())?;
        notes.push(format!("W{k}: {} valuations clean, refuted in L_{}^{}", audit.valuations, c.m, c.n));
    }
    Ok(notes.join("; "))
}

fn proof_corpus() -> Check {
    let table = AxiomTable::standard();
    let base = r#"{"premises": ["p"], "steps": [{"formula": "p", "by": "premise:0"},
        {"formula": "p -> <>p", "by": "axiom:T-Dia"}, {"formula": "<>p", "by": "mp:0,1"}]}"#;
    let proof = ProofFile::from_json(base).unwrap().to_proof().unwrap();
    let v = check_proof(&proof, &table, CheckOptions::default());
    ensure(v == Verdict::Accept, || format!("base proof: {v}"))?;

    let step = |f: &str, by: Justification| mmv::proofs::Step { formula: parse(f).unwrap(), by };
    let with = |steps: Vec<mmv::proofs::Step>| Proof { premises: vec![parse("p").unwrap()], steps };
    let ax = |name: &str| Justification::Axiom(name.into());
    type Expect = fn(&ProofErrorKind) -> bool;
    let mutants: Vec<(&str, Proof, usize, Expect)> = vec![
        (
            "swapped MP indices",
            with(vec![step("p", Justification::Premise(0)), step("p -> <>p", ax("T-Dia")), step("<>p", Justification::Mp(1, 0))]),
            2,
            |k| matches!(k, ProofErrorKind::MpMismatch { major: 0, .. }),
        ),
        (
            "MP citing itself",
            with(vec![step("p", Justification::Premise(0)), step("p -> <>p", ax("T-Dia")), step("<>p", Justification::Mp(0, 2))]),
            2,
            |k| matches!(k, ProofErrorKind::ForwardReference { index: 2, current: 2 }),
        ),
        (
            "MP citing a later step",
            with(vec![step("p", Justification::Premise(0)), step("<>p", Justification::Mp(0, 2)), step("p -> <>p", ax("T-Dia"))]),
            1,
            |k| matches!(k, ProofErrorKind::ForwardReference { index: 2, current: 1 }),
        ),
        (
            "MP with unrelated major",
            with(vec![step("p", Justification::Premise(0)), step("q -> <>q", ax("T-Dia")), step("<>q", Justification::Mp(0, 1))]),
            2,
            |k| matches!(k, ProofErrorKind::MpMismatch { major: 1, .. }),
        ),
        (
            "K-Box with a plain nu",
            with(vec![step("[](p -> q) -> (p -> []q)", ax("K-Box"))]),
            0,
            |k| matches!(k, ProofErrorKind::SideCondition { meta, .. } if meta == "nu"),
        ),
        (
            "K-Dia with a plain nu",
            with(vec![step("[](q -> p) -> (<>q -> p)", ax("K-Dia"))]),
            0,
            |k| matches!(k, ProofErrorKind::SideCondition { meta, .. } if meta == "nu"),
        ),
        (
            "Box-Join with a plain nu",
            with(vec![step("[](q \\/ p * q) -> ([]q \\/ p * q)", ax("Box-Join"))]),
            0,
            |k| matches!(k, ProofErrorKind::SideCondition { meta, .. } if meta == "nu"),
        ),
        (
            "Nec of a line that is not cited",
            with(vec![step("p", Justification::Premise(0)), step("p -> <>p", ax("T-Dia")), step("[]<>p", Justification::Nec(0))]),
            2,
            |k| matches!(k, ProofErrorKind::NecMismatch { index: 0, .. }),
        ),
        (
            "Nec of a later line",
            with(vec![step("p", Justification::Premise(0)), step("[]p", Justification::Nec(1))]),
            1,
            |k| matches!(k, ProofErrorKind::ForwardReference { index: 1, current: 1 }),
        ),
        (
            "missing premise",
            with(vec![step("q", Justification::Premise(1))]),
            0,
            |k| matches!(k, ProofErrorKind::NoSuchPremise { index: 1, count: 1 }),
        ),
    ];
    for (name, proof, want_step, want) in &mutants {
        match check_proof(proof, &table, CheckOptions::default()) {
            Verdict::Reject(e) if e.step == *want_step && want(&e.kind) => {}
            other => return Err(format!("{name}: got {other}")),
        }
    }
    Ok(format!("base proof accepted, {} mutants rejected at the expected step", mutants.len()))
}

fn random_element(rng: &mut ChaCha8Rng, m: u32, n: usize) -> MonadicElement {
    let coords = (0..n).map(|_| Truth::new(rng.gen_range(0..=i64::from(m)), i64::from(m)).unwrap()).collect();
    MonadicElement::new(coords).unwrap()
}

fn simple_representation() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut done, mut tried) = (0, 0);
    let mut largest = 0;
    while done < 50 {
        tried += 1;
        ensure(tried < 10_000, || format!("only {done} simple algebras found"))?;
        let (m, n) = (rng.gen_range(1..=4u32), rng.gen_range(1..=3usize));
        let gens: Vec<_> = (0..rng.gen_range(1..=2)).map(|_| random_element(&mut rng, m, n)).collect();
        let Ok(alg) = generate_subalgebra(m, n, &gens) else { continue };
        if alg.size() > 64 || !classify(&alg).is_simple {
            continue;
        }
        let rep = represent_simple(&alg).map_err(|e| e.to_string())?;
        rep.verify(&alg).map_err(|e| format!("L_{m}^{n} from {gens:?}: {e}"))?;
        largest = largest.max(alg.size());
        done += 1;
    }
    Ok(format!("50 simple algebras (largest carrier {largest}) embedded and verified"))
}

/// Direct check of the embedding clauses over `S`.
fn embedding_holds(s: &[MonadicElement], h: &[MonadicElement], m: u32) -> Result<(), String> {
    use mmv::mv::{forall_inf, power_binop, MvOp};
    let pos = |e: &MonadicElement| s.iter().position(|x| x.coords() == e.coords());
    for (i, a) in s.iter().enumerate() {
        ensure(h[i].coords().iter().all(|t| t.in_chain(m)), || format!("h({a}) outside L_{m}"))?;
        for (j, b) in s.iter().enumerate() {
            ensure(a.coords() == b.coords() || h[i].coords() != h[j].coords(), || format!("h({a}) = h({b})"))?;
            if let Some(k) = pos(&power_binop(MvOp::Impl, a, b).unwrap()) {
                let want = power_binop(MvOp::Impl, &h[i], &h[j]).unwrap();
                ensure(h[k].coords() == want.coords(), || format!("-> fails at {a}, {b}"))?;
            }
        }
        if let Some(k) = pos(&forall_inf(a)) {
            ensure(h[k].coords() == forall_inf(&h[i]).coords(), || format!("forall fails at {a}"))?;
        }
        if a.coords().iter().all(|t| t.is_zero()) {
            ensure(h[i].coords().iter().all(|t| t.is_zero()), || "h(0) != 0".into())?;
        }
    }
    Ok(())
}

fn finite_embeddings() -> Check {
    use mmv::mv::{forall_inf, power_binop, MvOp};
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut max_m = 0;
    for trial in 0..100 {
        let points = rng.gen_range(1..=4usize);
        let gen = |rng: &mut ChaCha8Rng| {
            let coords = (0..points)
                .map(|_| {
                    let d = rng.gen_range(1..=12i64);
                    Truth::new(rng.gen_range(0..=d), d).unwrap()
                })
                .collect();
            MonadicElement::new(coords).unwrap()
        };
        let mut pool = vec![MonadicElement::zero(points, None)];
        for _ in 0..3 {
            pool.push(gen(&mut rng));
        }
        let (a, b) = (pool[1].clone(), pool[2].clone());
        pool.push(forall_inf(&a));
        pool.push(power_binop(MvOp::Impl, &a, &b).unwrap());
        pool.push(forall_inf(&power_binop(MvOp::Impl, &b, &a).unwrap()));
        pool.shuffle(&mut rng);
        let mut subset: Vec<MonadicElement> = Vec::new();
        for e in pool {
            if subset.len() < 6 && !subset.iter().any(|x| x.coords() == e.coords()) {
                subset.push(e);
            }
        }
        let input = FepInput { points, subset, witnesses: None };
        let h = fep_embed(&input).map_err(|e| format!("trial {trial}: {e}"))?;
        h.verify(&input).map_err(|e| format!("trial {trial}: {e}"))?;
        embedding_holds(&input.subset, &h.images, h.m).map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(h.n <= points, || format!("trial {trial}: {} points from {points}", h.n))?;
        max_m = max_m.max(h.m);
    }
    Ok(format!("100 partial subalgebras embedded and verified (largest chain L_{max_m})"))
}

fn width_cross_check() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let (mut checked, mut by_width) = (0, BTreeMap::new());
    for _ in 0..400 {
        let (m, n) = (rng.gen_range(1..=3u32), rng.gen_range(1..=3usize));
        let gens: Vec<_> = (0..rng.gen_range(1..=2)).map(|_| random_element(&mut rng, m, n)).collect();
        let Ok(alg) = generate_subalgebra(m, n, &gens) else { continue };
        if alg.size() > 32 {
            continue;
        }
        let c = classify(&alg);
        if !c.is_fsi {
            continue;
        }
        ensure(c.width.is_some() && c.width == c.width_by_equation, || {
            format!("L_{m}^{n} from {gens:?}: orthogonal width {:?}, equation {:?}", c.width, c.width_by_equation)
        })?;
        *by_width.entry(c.width.unwrap()).or_insert(0) += 1;
        checked += 1;
    }
    ensure(by_width.len() == 3, || format!("widths seen {by_width:?}"))?;
    Ok(format!("{checked} FSI algebras agree; widths {by_width:?}"))
}

fn boxinf_probe() -> Check {
    let (a, b, phi) = (Formula::var("p"), Formula::var("q"), Formula::var("r"));
    let probe = boxinf_soundness_probe(&a, &b, &phi, 1, &ProbeConfig::default());
    ensure(probe.trials == 1000, || "wrong trial count".into())?;
    ensure(probe.violation_count == 0, || format!("{} violations: {:?}", probe.violation_count, probe.violations))?;
    let g = probe.gaps.first().ok_or("no finite-approximation gap found")?;
    Ok(format!(
        "0 violations in 1000 trials; {} gaps, e.g. []alpha = {}, []beta = {}",
        probe.gap_count, g.box_alpha, g.box_beta
    ))
}
