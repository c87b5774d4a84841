//! Formulas compiled to straight-line programs and evaluated in `L_m^n` on
//! integer numerators over the fixed denominator `m`. Exact, and much faster
//! than rational tuples; used by the countermodel search and the audits.

use std::collections::HashMap;
use std::ops::ControlFlow;

use rand::Rng;

use crate::mv::{MonadicElement, Truth};
use crate::syntax::{Binary, Formula};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Instr {
    Var(u32),
    Zero,
    One,
    Not(u32),
    Box(u32),
    Diamond(u32),
    Bin(Binary, u32, u32),
}

/// A set of formulas compiled into one shared, hash-consed instruction list.
#[derive(Debug, Clone)]
pub struct Program {
    instrs: Vec<Instr>,
    roots: Vec<u32>,
    vars: Vec<String>,
}

impl Program {
    /// Compiles `formulas`; variables are indexed in the order of `vars`,
    /// which must cover every variable occurring in them.
    pub fn compile(formulas: &[&Formula], vars: &[String]) -> Program {
        let index: HashMap<&str, u32> =
            vars.iter().enumerate().map(|(i, v)| (v.as_str(), i as u32)).collect();
        let mut b = Builder { instrs: Vec::new(), seen: HashMap::new(), index: &index };
        let roots = formulas.iter().map(|f| b.node(f)).collect();
        Program { instrs: b.instrs, roots, vars: vars.to_vec() }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn roots(&self) -> usize {
        self.roots.len()
    }

    pub fn len(&self) -> usize {
        self.instrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instrs.is_empty()
    }
}

struct Builder<'a> {
    instrs: Vec<Instr>,
    seen: HashMap<Instr, u32>,
    index: &'a HashMap<&'a str, u32>,
}

impl Builder<'_> {
    fn push(&mut self, i: Instr) -> u32 {
        if let Some(&id) = self.seen.get(&i) {
            return id;
        }
        let id = self.instrs.len() as u32;
        self.instrs.push(i);
        self.seen.insert(i, id);
        id
    }

    fn node(&mut self, f: &Formula) -> u32 {
        let instr = match f {
            Formula::Var(v) => {
                Instr::Var(*self.index.get(v.as_str()).unwrap_or_else(|| panic!("variable {v} not indexed")))
            }
            Formula::Zero => Instr::Zero,
            Formula::One => Instr::One,
            Formula::Not(g) => Instr::Not(self.node(g)),
            Formula::Box(g) => Instr::Box(self.node(g)),
            Formula::Diamond(g) => Instr::Diamond(self.node(g)),
            _ => {
                let (op, a, b) = f.as_binary().expect("binary");
                let (a, b) = (self.node(a), self.node(b));
                Instr::Bin(op, a, b)
            }
        };
        self.push(instr)
    }
}

/// Evaluation scratch space for one cell `⟨L_m^n⟩`.
#[derive(Debug, Clone)]
pub struct ChainEvaluator {
    m: u32,
    n: usize,
    regs: Vec<u32>,
}

impl ChainEvaluator {
    pub fn new(m: u32, n: usize) -> Self {
        assert!(m >= 1 && n >= 1);
        ChainEvaluator { m, n, regs: Vec::new() }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Runs `prog` on `assignment` (numerators, variable-major: variable `i`
    /// at world `x` is `assignment[i * n + x]`).
    pub fn run(&mut self, prog: &Program, assignment: &[u32]) {
        let (m, n) = (self.m, self.n);
        debug_assert_eq!(assignment.len(), prog.vars.len() * n);
        self.regs.resize(prog.instrs.len() * n, 0);
        let regs = &mut self.regs;
        for (k, instr) in prog.instrs.iter().enumerate() {
            let out = k * n;
            match *instr {
                Instr::Var(v) => {
                    let src = v as usize * n;
                    regs[out..out + n].copy_from_slice(&assignment[src..src + n]);
                }
                Instr::Zero => regs[out..out + n].fill(0),
                Instr::One => regs[out..out + n].fill(m),
                Instr::Not(a) => {
                    let a = a as usize * n;
                    for x in 0..n {
                        regs[out + x] = m - regs[a + x];
                    }
                }
                Instr::Box(a) => {
                    let a = a as usize * n;
                    let v = *regs[a..a + n].iter().min().expect("n >= 1");
                    regs[out..out + n].fill(v);
                }
                Instr::Diamond(a) => {
                    let a = a as usize * n;
                    let v = *regs[a..a + n].iter().max().expect("n >= 1");
                    regs[out..out + n].fill(v);
                }
                Instr::Bin(op, a, b) => {
                    let (a, b) = (a as usize * n, b as usize * n);
                    for x in 0..n {
                        let (u, w) = (regs[a + x], regs[b + x]);
                        regs[out + x] = match op {
                            Binary::Impl => {
                                if u <= w {
                                    m
                                } else {
                                    m - u + w
                                }
                            }
                            Binary::Star => (u + w).saturating_sub(m),
                            Binary::Oplus => (u + w).min(m),
                            Binary::Meet => u.min(w),
                            Binary::Join => u.max(w),
                        };
                    }
                }
            }
        }
    }

    /// Numerators of root `r` after [`ChainEvaluator::run`].
    pub fn root<'a>(&'a self, prog: &Program, r: usize) -> &'a [u32] {
        let start = prog.roots[r] as usize * self.n;
        &self.regs[start..start + self.n]
    }

    pub fn root_is_one(&self, prog: &Program, r: usize) -> bool {
        self.root(prog, r).iter().all(|&v| v == self.m)
    }

    pub fn root_element(&self, prog: &Program, r: usize) -> MonadicElement {
        to_element(self.root(prog, r), self.m)
    }
}

pub(crate) fn to_element(numerators: &[u32], m: u32) -> MonadicElement {
    let coords = numerators.iter().map(|&k| Truth::scaled(k, m)).collect();
    MonadicElement::in_chain(coords, m).expect("numerators within range")
}

/// A search cell: valuations into `⟨L_m^n⟩` of `vars` variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub m: u32,
    pub n: usize,
}

impl Cell {
    /// `(m+1)^{n·vars}`, saturating at `u64::MAX`.
    pub fn assignments(&self, vars: usize) -> u64 {
        let exp = (self.n * vars) as u32;
        u64::from(self.m + 1).checked_pow(exp).unwrap_or(u64::MAX)
    }

    /// Number of valuations up to a permutation of the worlds:
    /// multisets of size `n` drawn from `(m+1)^vars` world types.
    pub fn assignments_up_to_symmetry(&self, vars: usize) -> u64 {
        let Some(types) = u64::from(self.m + 1).checked_pow(vars as u32) else {
            return u64::MAX;
        };
        multichoose(types, self.n as u64)
    }

    /// Writes the `index`-th valuation of the full enumeration into `out`.
    ///
    /// Digits run variable-major then world-minor, most significant first,
    /// and each digit counts downward from `m` to 0, so the enumeration starts
    /// at the all-ones valuation.
    pub fn decode(&self, mut index: u64, out: &mut [u32]) {
        let base = u64::from(self.m + 1);
        for slot in out.iter_mut().rev() {
            let digit = (index % base) as u32;
            index /= base;
            *slot = self.m - digit;
        }
    }

    pub fn random_assignment<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [u32]) {
        for slot in out.iter_mut() {
            *slot = rng.gen_range(0..=self.m);
        }
    }

    /// Visits one valuation per orbit of world permutations: the world types
    /// (a type is the tuple of a world's values) form a non-decreasing
    /// sequence. Every valuation of the cell is a permutation of a visited one.
    pub fn for_each_up_to_symmetry<B>(
        &self,
        vars: usize,
        mut visit: impl FnMut(&[u32]) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        let types = (self.m as usize + 1).pow(vars as u32);
        let n = self.n;
        let mut type_values = vec![0u32; types * vars];
        for t in 0..types {
            let mut idx = t;
            for v in (0..vars).rev() {
                let digit = (idx % (self.m as usize + 1)) as u32;
                idx /= self.m as usize + 1;
                type_values[t * vars + v] = self.m - digit;
            }
        }
        let mut seq = vec![0usize; n];
        let mut assignment = vec![0u32; vars * n];
        loop {
            for (x, &t) in seq.iter().enumerate() {
                for v in 0..vars {
                    assignment[v * n + x] = type_values[t * vars + v];
                }
            }
            visit(&assignment)?;
            let Some(pos) = seq.iter().rposition(|&t| t + 1 < types) else {
                return ControlFlow::Continue(());
            };
            let next = seq[pos] + 1;
            seq[pos..].iter_mut().for_each(|t| *t = next);
        }
    }
}

fn multichoose(types: u64, n: u64) -> u64 {
    // C(types + n - 1, n), computed incrementally; each partial product is an
    // exact binomial coefficient.
    let mut acc: u128 = 1;
    for i in 0..n {
        acc = acc * u128::from(types + i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return u64::MAX;
        }
    }
    acc as u64
}

/// The valuation described by `assignment`, as named tuples in `L_m^n`.
pub fn assignment_to_valuation(
    vars: &[String],
    cell: Cell,
    assignment: &[u32],
) -> Vec<(String, MonadicElement)> {
    vars.iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), to_element(&assignment[i * cell.n..(i + 1) * cell.n], cell.m)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::SafeStructure;
    use crate::syntax::parse;
    use std::collections::BTreeMap;

    #[test]
    fn hash_consing_shares_subterms() {
        let f = parse("(p * q) -> (p * q)").unwrap();
        let prog = Program::compile(&[&f], &["p".into(), "q".into()]);
        assert_eq!(prog.len(), 4);
    }

    #[test]
    fn decode_starts_at_all_ones() {
        let cell = Cell { m: 1, n: 2 };
        let mut out = [0u32; 2];
        let seq: Vec<[u32; 2]> = (0..4)
            .map(|i| {
                cell.decode(i, &mut out);
                out
            })
            .collect();
        assert_eq!(seq, vec![[1, 1], [1, 0], [0, 1], [0, 0]]);
        assert_eq!(cell.assignments(1), 4);
    }

    #[test]
    fn symmetric_enumeration_counts() {
        for (m, n, vars) in [(1, 2, 1), (2, 3, 2), (3, 3, 3), (1, 1, 0), (2, 2, 0)] {
            let cell = Cell { m, n };
            let mut count = 0u64;
            let _ = cell.for_each_up_to_symmetry::<()>(vars, |_| {
                count += 1;
                ControlFlow::Continue(())
            });
            assert_eq!(count, cell.assignments_up_to_symmetry(vars), "{cell:?} vars={vars}");
        }
        assert_eq!(Cell { m: 3, n: 3 }.assignments_up_to_symmetry(3), 45760);
    }

    #[test]
    fn symmetric_enumeration_covers_every_orbit() {
        // Sorting the world types of any valuation must land on a visited one.
        let cell = Cell { m: 2, n: 2 };
        let vars = 2;
        let mut visited = std::collections::HashSet::new();
        let _ = cell.for_each_up_to_symmetry::<()>(vars, |a| {
            visited.insert(a.to_vec());
            ControlFlow::Continue(())
        });
        let mut a = vec![0u32; vars * cell.n];
        for i in 0..cell.assignments(vars) {
            cell.decode(i, &mut a);
            let mut worlds: Vec<Vec<u32>> =
                (0..cell.n).map(|x| (0..vars).map(|v| a[v * cell.n + x]).collect()).collect();
            let orbit_rep = |ws: &Vec<Vec<u32>>| {
                let mut flat = vec![0u32; vars * cell.n];
                for (x, w) in ws.iter().enumerate() {
                    for v in 0..vars {
                        flat[v * cell.n + x] = w[v];
                    }
                }
                flat
            };
            worlds.sort_by(|p, q| q.cmp(p));
            assert!(visited.contains(&orbit_rep(&worlds)), "orbit of {a:?} missed");
        }
    }

    #[test]
    fn agrees_with_structure_semantics() {
        let f = parse("[](p \\/ q) -> ([]p \\/ <>(q * ~p))").unwrap();
        let vars = vec!["p".to_string(), "q".to_string()];
        let prog = Program::compile(&[&f], &vars);
        let cell = Cell { m: 2, n: 2 };
        let mut ev = ChainEvaluator::new(cell.m, cell.n);
        let mut a = vec![0u32; 4];
        for i in 0..cell.assignments(2) {
            cell.decode(i, &mut a);
            ev.run(&prog, &a);
            let valuation: BTreeMap<_, _> =
                assignment_to_valuation(&vars, cell, &a).into_iter().collect();
            let k = SafeStructure::new(2, valuation).unwrap();
            let expected = k.eval(&f).unwrap();
            assert_eq!(ev.root_element(&prog, 0).coords(), expected.coords());
        }
    }
}
