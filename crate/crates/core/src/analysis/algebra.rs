use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::compiled::to_element;
use crate::laws::MonadicAlgebra;
use crate::mv::{MonadicElement, Truth};

use super::AnalysisError;

/// How an algebra was given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Presentation {
    /// A subset of `L_m^n` closed under the operations, with `∃_∨`.
    Functional { m: u32, n: usize, elements: Vec<MonadicElement> },
    /// Explicit tables for `→`, `0` and `∃`.
    Tabular,
}

/// A finite monadic MV-algebra on the indices `0..size`, with every
/// operation tabulated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMonadicAlgebra {
    labels: Vec<String>,
    imp: Vec<usize>,
    exists: Vec<usize>,
    zero: usize,
    one: usize,
    neg: Vec<usize>,
    presentation: Presentation,
}

/// Largest carrier accepted by [`generate_subalgebra`].
pub const MAX_CARRIER: usize = 4096;

impl FiniteMonadicAlgebra {
    /// Builds a tabular algebra. Only the table shapes are checked here; use
    /// [`super::validate`] for the equations.
    pub fn from_tables(
        labels: Vec<String>,
        imp: Vec<Vec<usize>>,
        zero: usize,
        exists: Vec<usize>,
    ) -> Result<Self, AnalysisError> {
        let size = labels.len();
        if size == 0 {
            return Err(AnalysisError::Empty);
        }
        let shape = |what: &str| AnalysisError::TableShape(what.to_string());
        if imp.len() != size || imp.iter().any(|row| row.len() != size) {
            return Err(shape("impl must be a square table over the elements"));
        }
        if exists.len() != size {
            return Err(shape("exists must list one image per element"));
        }
        let flat: Vec<usize> = imp.into_iter().flatten().collect();
        if let Some(&bad) = flat.iter().chain(&exists).chain(std::iter::once(&zero)).find(|&&i| i >= size) {
            return Err(AnalysisError::IndexOutOfRange { index: bad, size });
        }
        Ok(Self::assemble(labels, flat, zero, exists, Presentation::Tabular))
    }

    /// The algebra on exactly `elements`, which must be closed under `→` and
    /// `∃_∨` and contain 0.
    pub fn from_elements(m: u32, n: usize, elements: Vec<MonadicElement>) -> Result<Self, AnalysisError> {
        let nums = elements
            .iter()
            .map(|e| numerators(e, m, n))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_numerators(m, n, nums)
    }

    fn from_numerators(m: u32, n: usize, mut nums: Vec<Vec<u32>>) -> Result<Self, AnalysisError> {
        nums.sort();
        nums.dedup();
        if nums.is_empty() {
            return Err(AnalysisError::Empty);
        }
        let index: HashMap<&[u32], usize> = nums.iter().enumerate().map(|(i, v)| (v.as_slice(), i)).collect();
        let find = |v: &[u32]| {
            index.get(v).copied().ok_or_else(|| AnalysisError::NotClosed(to_element(v, m).to_string()))
        };
        let size = nums.len();
        let mut imp = Vec::with_capacity(size * size);
        for a in &nums {
            for b in &nums {
                imp.push(find(&imp_nums(a, b, m))?);
            }
        }
        let exists = nums.iter().map(|a| find(&exists_nums(a))).collect::<Result<Vec<_>, _>>()?;
        let zero = find(&vec![0; n])?;
        let elements: Vec<MonadicElement> = nums.iter().map(|v| to_element(v, m)).collect();
        let labels = elements.iter().map(|e| e.to_string()).collect();
        Ok(Self::assemble(labels, imp, zero, exists, Presentation::Functional { m, n, elements }))
    }

    fn assemble(labels: Vec<String>, imp: Vec<usize>, zero: usize, exists: Vec<usize>, presentation: Presentation) -> Self {
        let size = labels.len();
        let one = imp[zero * size + zero];
        let neg = (0..size).map(|a| imp[a * size + zero]).collect();
        FiniteMonadicAlgebra { labels, imp, exists, zero, one, neg, presentation }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    /// The functional elements, when the algebra has them.
    pub fn functional(&self) -> Option<(u32, usize, &[MonadicElement])> {
        match &self.presentation {
            Presentation::Functional { m, n, elements } => Some((*m, *n, elements)),
            Presentation::Tabular => None,
        }
    }

    pub fn index_of(&self, e: &MonadicElement) -> Option<usize> {
        let (_, _, elements) = self.functional()?;
        elements.iter().position(|x| x.coords() == e.coords())
    }

    pub fn zero_ix(&self) -> usize {
        self.zero
    }

    pub fn one_ix(&self) -> usize {
        self.one
    }

    pub fn imp_ix(&self, a: usize, b: usize) -> usize {
        self.imp[a * self.size() + b]
    }

    pub fn exists_ix(&self, a: usize) -> usize {
        self.exists[a]
    }

    pub fn neg_ix(&self, a: usize) -> usize {
        self.neg[a]
    }

    pub fn forall_ix(&self, a: usize) -> usize {
        self.neg[self.exists[self.neg[a]]]
    }

    pub fn oplus_ix(&self, a: usize, b: usize) -> usize {
        self.imp_ix(self.neg[a], b)
    }

    pub fn star_ix(&self, a: usize, b: usize) -> usize {
        self.neg[self.imp_ix(a, self.neg[b])]
    }

    pub fn join_ix(&self, a: usize, b: usize) -> usize {
        self.imp_ix(self.imp_ix(a, b), b)
    }

    pub fn meet_ix(&self, a: usize, b: usize) -> usize {
        self.neg[self.join_ix(self.neg[a], self.neg[b])]
    }

    pub fn le_ix(&self, a: usize, b: usize) -> bool {
        self.imp_ix(a, b) == self.one
    }

    /// `∃A`, sorted by index.
    pub fn exists_image(&self) -> Vec<usize> {
        self.exists.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
    }
}

impl MonadicAlgebra for FiniteMonadicAlgebra {
    type Elem = usize;

    fn zero(&self) -> usize {
        self.zero
    }

    fn imp(&self, a: &usize, b: &usize) -> usize {
        self.imp_ix(*a, *b)
    }

    fn exists(&self, a: &usize) -> usize {
        self.exists[*a]
    }

    fn elements(&self) -> Vec<usize> {
        (0..self.size()).collect()
    }

    fn one(&self) -> usize {
        self.one
    }

    fn neg(&self, a: &usize) -> usize {
        self.neg[*a]
    }
}

impl fmt::Display for FiniteMonadicAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels.join(", "))
    }
}

fn numerators(e: &MonadicElement, m: u32, n: usize) -> Result<Vec<u32>, AnalysisError> {
    if e.len() != n {
        return Err(AnalysisError::Dimension { expected: n, got: e.len() });
    }
    e.coords()
        .iter()
        .map(|&t: &Truth| t.chain_index(m).ok_or(AnalysisError::NotInChain { value: t.to_string(), m }))
        .collect()
}

fn imp_nums(a: &[u32], b: &[u32], m: u32) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| if x <= y { m } else { m - x + y }).collect()
}

fn exists_nums(a: &[u32]) -> Vec<u32> {
    let top = *a.iter().max().expect("n >= 1");
    vec![top; a.len()]
}

/// The least subset of `L_m^n` containing `generators` and 0 and closed under
/// `→` and `∃_∨`.
pub fn generate_subalgebra(m: u32, n: usize, generators: &[MonadicElement]) -> Result<FiniteMonadicAlgebra, AnalysisError> {
    if m == 0 || n == 0 {
        return Err(AnalysisError::Empty);
    }
    let mut set: BTreeSet<Vec<u32>> = BTreeSet::new();
    set.insert(vec![0; n]);
    for g in generators {
        set.insert(numerators(g, m, n)?);
    }
    // Fixpoint: each round closes the current set against itself.
    let mut items: Vec<Vec<u32>> = set.iter().cloned().collect();
    let mut fresh_from = 0;
    while fresh_from < items.len() {
        let end = items.len();
        let mut added = Vec::new();
        for i in 0..end {
            let start = if i >= fresh_from { 0 } else { fresh_from };
            for j in start..end {
                for v in [imp_nums(&items[i], &items[j], m), imp_nums(&items[j], &items[i], m)] {
                    if set.insert(v.clone()) {
                        added.push(v);
                    }
                }
            }
            if i >= fresh_from {
                let v = exists_nums(&items[i]);
                if set.insert(v.clone()) {
                    added.push(v);
                }
            }
        }
        if set.len() > MAX_CARRIER {
            return Err(AnalysisError::TooLarge { size: set.len(), cap: MAX_CARRIER });
        }
        fresh_from = end;
        items.extend(added);
    }
    FiniteMonadicAlgebra::from_numerators(m, n, set.into_iter().collect())
}
