use serde::Serialize;

use super::algebra::FiniteMonadicAlgebra;
use super::filters::{filters, Filter};
use super::AnalysisError;
use crate::laws::Law;
use crate::mv::{exists_sup, forall_inf, lift, MonadicElement, MvOp, Truth};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub law: String,
    pub violations: u64,
    /// A few failing argument tuples, by label.
    pub witnesses: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub size: usize,
    pub laws: Vec<LawReport>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.laws.iter().all(|l| l.violations == 0)
    }

    pub fn violated(&self) -> impl Iterator<Item = &LawReport> {
        self.laws.iter().filter(|l| l.violations > 0)
    }
}

const WITNESSES: usize = 3;

/// Checks the MV axioms and M1–M5 at every argument tuple.
pub fn validate(alg: &FiniteMonadicAlgebra) -> ValidationReport {
    let laws = Law::MV
        .into_iter()
        .chain(Law::MONADIC)
        .map(|law| {
            let (arity, consts) = law.arity();
            debug_assert_eq!(consts, 0);
            let mut report = LawReport { law: law.name(), violations: 0, witnesses: Vec::new() };
            for_each_tuple(alg.size(), arity, |args| {
                if !law.holds(alg, args, &[]) {
                    report.violations += 1;
                    if report.witnesses.len() < WITNESSES {
                        report.witnesses.push(args.iter().map(|&a| alg.label(a).to_string()).collect());
                    }
                }
            });
            report
        })
        .collect();
    ValidationReport { size: alg.size(), laws }
}

fn for_each_tuple(size: usize, arity: usize, mut f: impl FnMut(&[usize])) {
    let mut t = vec![0usize; arity];
    loop {
        f(&t);
        let Some(pos) = t.iter().rposition(|&x| x + 1 < size) else { return };
        t[pos] += 1;
        t[pos + 1..].iter_mut().for_each(|x| *x = 0);
    }
}

/// Non-decreasing index tuples of length `len`: one per multiset.
fn for_each_multiset(size: usize, len: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    let mut t = vec![0usize; len];
    loop {
        if !f(&t) {
            return false;
        }
        let Some(pos) = t.iter().rposition(|&x| x + 1 < size) else { return true };
        let next = t[pos] + 1;
        t[pos..].iter_mut().for_each(|x| *x = next);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub size: usize,
    /// `∃A`, by label.
    pub exists_image: Vec<String>,
    pub is_fsi: bool,
    pub is_simple: bool,
    /// Size of the largest orthogonal set (at least 1); `None` above the cap.
    pub width: Option<usize>,
    /// Least `k ≤ 3` for which the width equation holds, computed for FSI algebras.
    pub width_by_equation: Option<usize>,
}

/// Largest carrier for which the orthogonal-set search is attempted.
pub const WIDTH_CAP: usize = 512;

pub fn classify(alg: &FiniteMonadicAlgebra) -> Classification {
    let image = alg.exists_image();
    let is_fsi = image.iter().all(|&a| image.iter().all(|&b| alg.le_ix(a, b) || alg.le_ix(b, a)));
    let nontrivial = alg.zero_ix() != alg.one_ix();
    let is_simple = nontrivial
        && image.iter().all(|&e| alg.star_ix(e, e) != e || e == alg.zero_ix() || e == alg.one_ix());
    let width_by_equation =
        if is_fsi { (1..=3).find(|&k| w_k_holds(alg, k)) } else { None };
    Classification {
        size: alg.size(),
        exists_image: image.iter().map(|&a| alg.label(a).to_string()).collect(),
        is_fsi,
        is_simple,
        width: orthogonal_width(alg, WIDTH_CAP),
        width_by_equation,
    }
}

/// Size of the largest `S ⊆ A∖{1}` with `x ∨ y = 1` for distinct `x, y ∈ S`,
/// by maximum-clique search; at least 1 for non-trivial algebras.
pub fn orthogonal_width(alg: &FiniteMonadicAlgebra, cap: usize) -> Option<usize> {
    if alg.size() > cap {
        return None;
    }
    let one = alg.one_ix();
    let nodes: Vec<usize> = (0..alg.size()).filter(|&a| a != one).collect();
    let adj: Vec<Vec<bool>> = nodes
        .iter()
        .map(|&a| nodes.iter().map(|&b| a != b && alg.join_ix(a, b) == one).collect())
        .collect();
    let mut best = 0;
    let all: Vec<usize> = (0..nodes.len()).collect();
    max_clique(&adj, &mut Vec::new(), all, &mut best);
    Some(best.max(1))
}

fn max_clique(adj: &[Vec<bool>], clique: &mut Vec<usize>, candidates: Vec<usize>, best: &mut usize) {
    if clique.len() > *best {
        *best = clique.len();
    }
    for (i, &v) in candidates.iter().enumerate() {
        if clique.len() + candidates.len() - i <= *best {
            return;
        }
        let next: Vec<usize> = candidates[i + 1..].iter().copied().filter(|&u| adj[v][u]).collect();
        clique.push(v);
        max_clique(adj, clique, next, best);
        clique.pop();
    }
}

/// Whether `⋀_{i<j≤k+1} ∀(xi ∨ xj) → ⋁_{i≤k+1} ∀xi ≈ 1` holds in `alg`.
pub fn w_k_holds(alg: &FiniteMonadicAlgebra, k: usize) -> bool {
    assert!(k >= 1);
    let one = alg.one_ix();
    // The equation is symmetric in the xi, so multisets suffice.
    for_each_multiset(alg.size(), k + 1, |xs| {
        let mut lhs = one;
        for i in 0..xs.len() {
            for j in i + 1..xs.len() {
                lhs = alg.meet_ix(lhs, alg.forall_ix(alg.join_ix(xs[i], xs[j])));
            }
        }
        let rhs = xs.iter().fold(alg.zero_ix(), |acc, &x| alg.join_ix(acc, alg.forall_ix(x)));
        alg.imp_ix(lhs, rhs) == one
    })
}

/// An embedding of a simple algebra into `⟨[0,1]^I, ∃_∨, ∀_∧⟩`, `I` the
/// maximal filters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Representation {
    pub maximal: Vec<Filter>,
    /// `|A/M|` for each maximal filter.
    pub quotient_sizes: Vec<usize>,
    /// `f(a)` for every element `a`, by index.
    pub images: Vec<MonadicElement>,
}

impl Representation {
    /// Checks injectivity and preservation of `→`, `0`, `∃` and `∀`.
    pub fn verify(&self, alg: &FiniteMonadicAlgebra) -> Result<(), String> {
        let f = &self.images;
        let size = alg.size();
        for a in 0..size {
            for b in a + 1..size {
                if f[a] == f[b] {
                    return Err(format!("f identifies {} and {}", alg.label(a), alg.label(b)));
                }
            }
        }
        if !f[alg.zero_ix()].coords().iter().all(|t| t.is_zero()) {
            return Err("f(0) is not 0".into());
        }
        for a in 0..size {
            if f[alg.exists_ix(a)] != exists_sup(&f[a]) {
                return Err(format!("f(∃{}) is not the supremum constant", alg.label(a)));
            }
            if f[alg.forall_ix(a)] != forall_inf(&f[a]) {
                return Err(format!("f(∀{}) is not the infimum constant", alg.label(a)));
            }
            for b in 0..size {
                if f[alg.imp_ix(a, b)] != lift(MvOp::Impl, &f[a], &f[b]) {
                    return Err(format!("f does not preserve {} -> {}", alg.label(a), alg.label(b)));
                }
            }
        }
        Ok(())
    }
}

/// `f(a)(M) = g_M(a/M)`, where `g_M` sends the `r`-th class of the chain
/// `A/M` to `r/(|A/M|-1)`.
pub fn represent_simple(alg: &FiniteMonadicAlgebra) -> Result<Representation, AnalysisError> {
    let c = classify(alg);
    if !c.is_simple {
        let why = if c.is_fsi {
            format!("∃A = {{{}}} has a non-trivial idempotent", c.exists_image.join(", "))
        } else {
            format!("∃A = {{{}}} is not a chain", c.exists_image.join(", "))
        };
        return Err(AnalysisError::NotSimple(why));
    }
    let fs = filters(alg);
    let maximal: Vec<Filter> = fs.maximal.iter().map(|&i| fs.all[i].clone()).collect();
    let size = alg.size();
    let mut columns = Vec::with_capacity(maximal.len());
    let mut quotient_sizes = Vec::with_capacity(maximal.len());
    for m in &maximal {
        let below = |a: usize, b: usize| m.contains(alg.imp_ix(a, b));
        let mut reps: Vec<usize> = Vec::new();
        for a in 0..size {
            if !reps.iter().any(|&r| below(a, r) && below(r, a)) {
                reps.push(a);
            }
        }
        let top = (reps.len() - 1) as i64;
        let column: Vec<Truth> = (0..size)
            .map(|a| {
                let rank = reps.iter().filter(|&&r| below(r, a) && !below(a, r)).count() as i64;
                Truth::new(rank, top).expect("rank within the chain")
            })
            .collect();
        quotient_sizes.push(reps.len());
        columns.push(column);
    }
    let images = (0..size)
        .map(|a| MonadicElement::new(columns.iter().map(|col| col[a]).collect()).expect("at least one maximal filter"))
        .collect();
    Ok(Representation { maximal, quotient_sizes, images })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::generate_subalgebra;

    fn el(s: &str) -> MonadicElement {
        s.parse().unwrap()
    }

    fn square_of_two_tabular(exists: Vec<usize>) -> FiniteMonadicAlgebra {
        // Elements 00, 01, 10, 11 with pointwise Łukasiewicz implication.
        let bits = |i: usize| (i >> 1 & 1, i & 1);
        let imp = (0..4)
            .map(|a| {
                (0..4)
                    .map(|b| {
                        let ((a1, a2), (b1, b2)) = (bits(a), bits(b));
                        (usize::from(a1 <= b1) << 1) | usize::from(a2 <= b2)
                    })
                    .collect()
            })
            .collect();
        let labels = ["00", "01", "10", "11"].map(String::from).to_vec();
        FiniteMonadicAlgebra::from_tables(labels, imp, 0, exists).unwrap()
    }

    #[test]
    fn power_algebras_validate() {
        for (m, n) in [(1, 2), (2, 2)] {
            let gens = crate::laws::MonadicAlgebra::elements(&crate::laws::PowerAlgebra::new(m, n));
            let alg = generate_subalgebra(m, n, &gens).unwrap();
            assert!(validate(&alg).is_valid(), "L_{m}^{n}");
        }
    }

    #[test]
    fn identity_quantifier_is_valid_but_not_fsi() {
        let alg = square_of_two_tabular(vec![0, 1, 2, 3]);
        assert!(validate(&alg).is_valid());
        let c = classify(&alg);
        assert!(!c.is_fsi);
        assert_eq!(c.width, Some(2));
    }

    #[test]
    fn corrupted_quantifier_reported() {
        // Sends 01 to itself but 10 to the top: M2 fails at (01, 10).
        let alg = square_of_two_tabular(vec![0, 1, 3, 3]);
        let report = validate(&alg);
        assert!(!report.is_valid());
        assert!(report.violated().any(|l| l.law == "M2"), "{report:?}");
    }

    #[test]
    fn classification_examples() {
        let sq = generate_subalgebra(1, 2, &[el("[1, 0]")]).unwrap();
        let c = classify(&sq);
        assert!(c.is_fsi && c.is_simple);
        assert_eq!(c.width, Some(2));
        assert_eq!(c.width_by_equation, Some(2));
        let l2 = generate_subalgebra(2, 1, &[el("[1/2]")]).unwrap();
        let c = classify(&l2);
        assert!(c.is_fsi && c.is_simple);
        assert_eq!(c.width, Some(1));
    }

    #[test]
    fn representations() {
        let sq = generate_subalgebra(1, 2, &[el("[1, 0]")]).unwrap();
        let r = represent_simple(&sq).unwrap();
        assert_eq!(r.maximal.len(), 2);
        r.verify(&sq).unwrap();
        let two = generate_subalgebra(1, 1, &[]).unwrap();
        let r = represent_simple(&two).unwrap();
        assert_eq!(r.images[two.zero_ix()].to_string(), "[0]");
        assert_eq!(r.images[two.one_ix()].to_string(), "[1]");
        let sub = generate_subalgebra(2, 2, &[el("[1, 1/2]")]).unwrap();
        let r = represent_simple(&sub).unwrap();
        r.verify(&sub).unwrap();
        let bad = square_of_two_tabular(vec![0, 1, 2, 3]);
        assert!(matches!(represent_simple(&bad), Err(AnalysisError::NotSimple(_))));
    }

    #[test]
    fn finite_chains_are_simple() {
        for m in 1..=8 {
            let gens = [MonadicElement::new(vec![Truth::new(1, i64::from(m)).unwrap()]).unwrap()];
            let chain = generate_subalgebra(m, 1, &gens).unwrap();
            assert_eq!(chain.size(), m as usize + 1);
            assert_eq!(filters(&chain).all.len(), 2);
            assert!(classify(&chain).is_simple);
            let size = chain.size();
            for a in 0..size {
                for b in 0..size {
                    let mut p = b;
                    let below_all = (1..=size).all(|_| {
                        let ok = chain.le_ix(a, p);
                        p = chain.star_ix(p, b);
                        ok
                    });
                    if below_all {
                        assert_eq!(chain.star_ix(a, b), a);
                    }
                }
            }
        }
    }
}
