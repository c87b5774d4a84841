use serde::Serialize;

use super::algebra::FiniteMonadicAlgebra;

/// An MV-filter: contains 1, upward closed, closed under `*`. In a finite
/// algebra each is `↑e` for the idempotent `e` it contains least.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Filter {
    pub generator: usize,
    pub elements: Vec<usize>,
}

impl Filter {
    pub fn contains(&self, a: usize) -> bool {
        self.elements.binary_search(&a).is_ok()
    }

    pub fn is_proper(&self, alg: &FiniteMonadicAlgebra) -> bool {
        !self.contains(alg.zero_ix())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterKind {
    All,
    Prime,
    Maximal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Filters {
    pub all: Vec<Filter>,
    /// Indices into `all`.
    pub prime: Vec<usize>,
    pub maximal: Vec<usize>,
}

impl Filters {
    pub fn of_kind(&self, kind: FilterKind) -> Vec<&Filter> {
        match kind {
            FilterKind::All => self.all.iter().collect(),
            FilterKind::Prime => self.prime.iter().map(|&i| &self.all[i]).collect(),
            FilterKind::Maximal => self.maximal.iter().map(|&i| &self.all[i]).collect(),
        }
    }
}

/// Every filter, with the prime and maximal ones marked. Prime means proper
/// with `a→b ∈ F` or `b→a ∈ F` for all `a, b`.
pub fn filters(alg: &FiniteMonadicAlgebra) -> Filters {
    let size = alg.size();
    let mut all: Vec<Filter> = (0..size)
        .filter(|&e| alg.star_ix(e, e) == e)
        .map(|e| Filter { generator: e, elements: (0..size).filter(|&a| alg.le_ix(e, a)).collect() })
        .collect();
    all.sort_by(|a, b| a.elements.len().cmp(&b.elements.len()).then_with(|| a.elements.cmp(&b.elements)));
    all.dedup_by(|a, b| a.elements == b.elements);

    let prime = (0..all.len())
        .filter(|&i| {
            let f = &all[i];
            f.is_proper(alg)
                && (0..size).all(|a| (0..size).all(|b| f.contains(alg.imp_ix(a, b)) || f.contains(alg.imp_ix(b, a))))
        })
        .collect();
    let maximal = (0..all.len())
        .filter(|&i| {
            let f = &all[i];
            f.is_proper(alg)
                && !all.iter().any(|g| {
                    g.is_proper(alg) && g.elements.len() > f.elements.len() && f.elements.iter().all(|&a| g.contains(a))
                })
        })
        .collect();
    Filters { all, prime, maximal }
}

/// Intersection of the maximal filters (the whole carrier if there are none).
pub fn radical(alg: &FiniteMonadicAlgebra) -> Vec<usize> {
    let fs = filters(alg);
    (0..alg.size())
        .filter(|&a| fs.maximal.iter().all(|&i| fs.all[i].contains(a)))
        .collect()
}

/// `{a : 2aⁿ = 1 for every n}`; powers stabilize after `size` steps.
pub fn radical_by_powers(alg: &FiniteMonadicAlgebra) -> Vec<usize> {
    let one = alg.one_ix();
    (0..alg.size())
        .filter(|&a| {
            let mut p = a;
            (1..=alg.size()).all(|_| {
                let ok = alg.oplus_ix(p, p) == one;
                p = alg.star_ix(p, a);
                ok
            })
        })
        .collect()
}
