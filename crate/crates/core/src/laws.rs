//! Equational laws of MV-algebras and monadic MV-algebras, checked over any
//! finite algebra implementing [`MonadicAlgebra`].

use std::fmt::Debug;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::mv::{exists_sup, forall_inf, lift, enumerate_chain, MonadicElement, MvOp};

/// Largest `n` tried for the laws quantified over `aⁿ` and `na`.
pub const MAX_EXPONENT: u32 = 5;

/// A finite monadic MV-algebra presented through `→`, `0`, `∃`; every other
/// operation has a default derivation.
pub trait MonadicAlgebra {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn imp(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn exists(&self, a: &Self::Elem) -> Self::Elem;
    fn elements(&self) -> Vec<Self::Elem>;

    fn one(&self) -> Self::Elem {
        let z = self.zero();
        self.imp(&z, &z)
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.imp(a, &self.zero())
    }

    fn forall(&self, a: &Self::Elem) -> Self::Elem {
        self.neg(&self.exists(&self.neg(a)))
    }

    fn oplus(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.imp(&self.neg(a), b)
    }

    fn star(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.neg(&self.imp(a, &self.neg(b)))
    }

    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.imp(&self.imp(a, b), b)
    }

    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.neg(&self.join(&self.neg(a), &self.neg(b)))
    }

    fn le(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.imp(a, b) == self.one()
    }

    fn power(&self, a: &Self::Elem, n: u32) -> Self::Elem {
        (0..n).fold(self.one(), |acc, _| self.star(&acc, a))
    }

    fn multiple(&self, a: &Self::Elem, n: u32) -> Self::Elem {
        (0..n).fold(self.zero(), |acc, _| self.oplus(&acc, a))
    }

    /// `∃A`, without duplicates.
    fn quantifier_image(&self) -> Vec<Self::Elem> {
        let mut image: Vec<Self::Elem> = Vec::new();
        for a in self.elements() {
            let e = self.exists(&a);
            if !image.contains(&e) {
                image.push(e);
            }
        }
        image
    }
}

/// `⟨L_m^n, ∃_∨, ∀_∧⟩` with every operation computed by the pointwise
/// rational arithmetic of [`crate::mv`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PowerAlgebra {
    pub m: u32,
    pub n: usize,
}

impl PowerAlgebra {
    pub fn new(m: u32, n: usize) -> Self {
        assert!(m >= 1 && n >= 1);
        PowerAlgebra { m, n }
    }

    pub fn size(&self) -> usize {
        (self.m as usize + 1).pow(self.n as u32)
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> MonadicElement {
        let chain = enumerate_chain(self.m);
        let coords = (0..self.n).map(|_| *chain.choose(rng).expect("non-empty")).collect();
        MonadicElement::in_chain(coords, self.m).expect("chain values")
    }

    pub fn random_constant<R: Rng + ?Sized>(&self, rng: &mut R) -> MonadicElement {
        let chain = enumerate_chain(self.m);
        MonadicElement::constant(*chain.choose(rng).expect("non-empty"), self.n, Some(self.m))
    }
}

impl MonadicAlgebra for PowerAlgebra {
    type Elem = MonadicElement;

    fn zero(&self) -> MonadicElement {
        MonadicElement::zero(self.n, Some(self.m))
    }

    fn one(&self) -> MonadicElement {
        MonadicElement::one(self.n, Some(self.m))
    }

    fn imp(&self, a: &MonadicElement, b: &MonadicElement) -> MonadicElement {
        lift(MvOp::Impl, a, b)
    }

    fn neg(&self, a: &MonadicElement) -> MonadicElement {
        a.neg()
    }

    fn oplus(&self, a: &MonadicElement, b: &MonadicElement) -> MonadicElement {
        lift(MvOp::Oplus, a, b)
    }

    fn star(&self, a: &MonadicElement, b: &MonadicElement) -> MonadicElement {
        lift(MvOp::Star, a, b)
    }

    fn meet(&self, a: &MonadicElement, b: &MonadicElement) -> MonadicElement {
        lift(MvOp::Meet, a, b)
    }

    fn join(&self, a: &MonadicElement, b: &MonadicElement) -> MonadicElement {
        lift(MvOp::Join, a, b)
    }

    fn exists(&self, a: &MonadicElement) -> MonadicElement {
        exists_sup(a)
    }

    fn forall(&self, a: &MonadicElement) -> MonadicElement {
        forall_inf(a)
    }

    fn le(&self, a: &MonadicElement, b: &MonadicElement) -> bool {
        a.le(b)
    }

    fn power(&self, a: &MonadicElement, n: u32) -> MonadicElement {
        a.power(n)
    }

    fn multiple(&self, a: &MonadicElement, n: u32) -> MonadicElement {
        a.multiple(n)
    }

    fn elements(&self) -> Vec<MonadicElement> {
        let chain = enumerate_chain(self.m);
        let mut out = Vec::with_capacity(self.size());
        let mut digits = vec![0usize; self.n];
        loop {
            let coords = digits.iter().map(|&d| chain[d]).collect();
            out.push(MonadicElement::in_chain(coords, self.m).expect("chain values"));
            let Some(pos) = digits.iter().rposition(|&d| d < self.m as usize) else {
                break;
            };
            digits[pos] += 1;
            digits[pos + 1..].iter_mut().for_each(|d| *d = 0);
        }
        out
    }

    fn quantifier_image(&self) -> Vec<MonadicElement> {
        enumerate_chain(self.m)
            .into_iter()
            .map(|v| MonadicElement::constant(v, self.n, Some(self.m)))
            .collect()
    }
}

/// The laws: MV axioms, the monadic identities, the arithmetic facts about
/// quantifiers (with `c` ranging over `∃A`), and the MV-specific quantifier
/// properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Law {
    /// `(x⊕y)⊕z = x⊕(y⊕z)`
    Mv1,
    /// `x⊕y = y⊕x`
    Mv2,
    /// `x⊕0 = x`
    Mv3,
    /// `¬¬x = x`
    Mv4,
    /// `x⊕¬0 = ¬0`
    Mv5,
    /// `¬(¬x⊕y)⊕y = ¬(¬y⊕x)⊕x`
    Mv6,
    M1,
    M2,
    M3,
    M4,
    M5,
    /// The fourteen arithmetic facts about quantifiers.
    Arith(u8),
    /// The four MV-specific quantifier properties.
    Quant(u8),
}

impl Law {
    pub const MV: [Law; 6] = [Law::Mv1, Law::Mv2, Law::Mv3, Law::Mv4, Law::Mv5, Law::Mv6];
    pub const MONADIC: [Law; 5] = [Law::M1, Law::M2, Law::M3, Law::M4, Law::M5];

    pub fn arithmetic() -> impl Iterator<Item = Law> {
        (1..=14).map(Law::Arith)
    }

    pub fn quantifier() -> impl Iterator<Item = Law> {
        (1..=4).map(Law::Quant)
    }

    /// M1–M5, the fourteen arithmetic items and the four quantifier items.
    pub fn all_monadic() -> Vec<Law> {
        Self::MONADIC
            .into_iter()
            .chain(Self::arithmetic())
            .chain(Self::quantifier())
            .collect()
    }

    pub fn name(self) -> String {
        match self {
            Law::Mv1 => "MV1".into(),
            Law::Mv2 => "MV2".into(),
            Law::Mv3 => "MV3".into(),
            Law::Mv4 => "MV4".into(),
            Law::Mv5 => "MV5".into(),
            Law::Mv6 => "MV6".into(),
            Law::M1 => "M1".into(),
            Law::M2 => "M2".into(),
            Law::M3 => "M3".into(),
            Law::M4 => "M4".into(),
            Law::M5 => "M5".into(),
            Law::Arith(i) => format!("arith-{i}"),
            Law::Quant(i) => format!("quant-{i}"),
        }
    }

    /// `(general arguments, arguments drawn from ∃A)`.
    pub fn arity(self) -> (usize, usize) {
        match self {
            Law::Mv1 => (3, 0),
            Law::Mv2 | Law::Mv6 | Law::M2 | Law::M3 | Law::M4 => (2, 0),
            Law::Mv3 | Law::Mv4 | Law::Mv5 | Law::M1 | Law::M5 => (1, 0),
            Law::Arith(1) => (0, 0),
            Law::Arith(2) => (0, 1),
            Law::Arith(3) | Law::Arith(13) | Law::Arith(14) => (1, 0),
            Law::Arith(4) | Law::Arith(6) | Law::Arith(7) => (2, 0),
            Law::Arith(_) => (1, 1),
            Law::Quant(_) => (1, 0),
        }
    }

    /// Evaluates the law at one argument tuple.
    pub fn holds<A: MonadicAlgebra>(self, alg: &A, args: &[A::Elem], consts: &[A::Elem]) -> bool {
        let e = |x: &A::Elem| alg.exists(x);
        let f = |x: &A::Elem| alg.forall(x);
        let imp = |x: &A::Elem, y: &A::Elem| alg.imp(x, y);
        let one = alg.one();
        let zero = alg.zero();
        match self {
            Law::Mv1 => {
                let (x, y, z) = (&args[0], &args[1], &args[2]);
                alg.oplus(&alg.oplus(x, y), z) == alg.oplus(x, &alg.oplus(y, z))
            }
            Law::Mv2 => alg.oplus(&args[0], &args[1]) == alg.oplus(&args[1], &args[0]),
            Law::Mv3 => alg.oplus(&args[0], &zero) == args[0],
            Law::Mv4 => alg.neg(&alg.neg(&args[0])) == args[0],
            Law::Mv5 => alg.oplus(&args[0], &alg.neg(&zero)) == alg.neg(&zero),
            Law::Mv6 => {
                let (x, y) = (&args[0], &args[1]);
                alg.oplus(&alg.neg(&alg.oplus(&alg.neg(x), y)), y)
                    == alg.oplus(&alg.neg(&alg.oplus(&alg.neg(y), x)), x)
            }
            Law::M1 => imp(&f(&args[0]), &args[0]) == one,
            Law::M2 => {
                let (x, y) = (&args[0], &args[1]);
                f(&imp(x, &f(y))) == imp(&e(x), &f(y))
            }
            Law::M3 => {
                let (x, y) = (&args[0], &args[1]);
                f(&imp(&f(x), y)) == imp(&f(x), &f(y))
            }
            Law::M4 => {
                let (x, y) = (&args[0], &args[1]);
                f(&alg.join(&e(x), y)) == alg.join(&e(x), &f(y))
            }
            Law::M5 => {
                let x = &args[0];
                e(&alg.star(x, x)) == alg.star(&e(x), &e(x))
            }
            Law::Arith(i) => arith_item(alg, i, args, consts),
            Law::Quant(i) => quant_item(alg, i, &args[0]),
        }
    }
}

fn arith_item<A: MonadicAlgebra>(alg: &A, item: u8, args: &[A::Elem], consts: &[A::Elem]) -> bool {
    let e = |x: &A::Elem| alg.exists(x);
    let f = |x: &A::Elem| alg.forall(x);
    let imp = |x: &A::Elem, y: &A::Elem| alg.imp(x, y);
    let le = |x: &A::Elem, y: &A::Elem| alg.le(x, y);
    let (one, zero) = (alg.one(), alg.zero());
    let a = args.first();
    let c = consts.first();
    match item {
        1 => f(&one) == one && e(&one) == one && f(&zero) == zero && e(&zero) == zero,
        2 => {
            let c = c.unwrap();
            f(c) == *c && e(c) == *c
        }
        3 => {
            let a = a.unwrap();
            le(&f(a), a) && le(a, &e(a))
        }
        4 => {
            let (a, b) = (&args[0], &args[1]);
            !le(a, b) || (le(&f(a), &f(b)) && le(&e(a), &e(b)))
        }
        5 => {
            let (a, c) = (a.unwrap(), c.unwrap());
            f(&alg.join(a, c)) == alg.join(&f(a), c)
        }
        6 => {
            let (a, b) = (&args[0], &args[1]);
            e(&alg.join(a, b)) == alg.join(&e(a), &e(b))
        }
        7 => {
            let (a, b) = (&args[0], &args[1]);
            f(&alg.meet(a, b)) == alg.meet(&f(a), &f(b))
        }
        8 => {
            let (a, c) = (a.unwrap(), c.unwrap());
            e(&alg.meet(a, c)) == alg.meet(&e(a), c)
        }
        9 => {
            let (a, c) = (a.unwrap(), c.unwrap());
            f(&imp(a, c)) == imp(&e(a), c)
        }
        10 => {
            let (a, c) = (a.unwrap(), c.unwrap());
            le(&e(&imp(a, c)), &imp(&f(a), c))
        }
        11 => {
            let (a, c) = (a.unwrap(), c.unwrap());
            f(&imp(c, a)) == imp(c, &f(a))
        }
        12 => {
            let (a, c) = (a.unwrap(), c.unwrap());
            le(&e(&imp(c, a)), &imp(c, &e(a)))
        }
        13 => {
            let a = a.unwrap();
            f(&alg.neg(a)) == alg.neg(&e(a))
        }
        14 => {
            let a = a.unwrap();
            le(&e(&alg.neg(a)), &alg.neg(&f(a)))
        }
        _ => panic!("arithmetic facts are numbered 1..=14, got {item}"),
    }
}

fn quant_item<A: MonadicAlgebra>(alg: &A, item: u8, a: &A::Elem) -> bool {
    let e = |x: &A::Elem| alg.exists(x);
    let f = |x: &A::Elem| alg.forall(x);
    match item {
        1 => e(a) == alg.neg(&f(&alg.neg(a))) && f(a) == alg.neg(&e(&alg.neg(a))),
        2 => e(&alg.imp(&e(a), a)) == alg.one(),
        3 => (0..=MAX_EXPONENT).all(|n| {
            e(&alg.power(a, n)) == alg.power(&e(a), n)
                && e(&alg.multiple(a, n)) == alg.multiple(&e(a), n)
        }),
        4 => (0..=MAX_EXPONENT).all(|n| {
            f(&alg.power(a, n)) == alg.power(&f(a), n)
                && f(&alg.multiple(a, n)) == alg.multiple(&f(a), n)
        }),
        _ => panic!("quantifier properties are numbered 1..=4, got {item}"),
    }
}

/// A failing argument tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct LawViolation<E> {
    pub law: Law,
    pub args: Vec<E>,
    pub consts: Vec<E>,
}

/// Checks `law` at every argument tuple; returns all failures.
pub fn check_exhaustive<A: MonadicAlgebra>(alg: &A, law: Law) -> Vec<LawViolation<A::Elem>> {
    let elements = alg.elements();
    let image = alg.quantifier_image();
    let (general, constant) = law.arity();
    let mut out = Vec::new();
    for args in tuples(&elements, general) {
        for consts in tuples(&image, constant) {
            if !law.holds(alg, &args, &consts) {
                out.push(LawViolation { law, args: args.clone(), consts });
            }
        }
    }
    out
}

/// Checks `law` at `samples` random argument tuples.
pub fn check_sampled<A: MonadicAlgebra, R: Rng + ?Sized>(
    alg: &A,
    law: Law,
    samples: usize,
    rng: &mut R,
) -> Vec<LawViolation<A::Elem>> {
    let elements = alg.elements();
    let image = alg.quantifier_image();
    let (general, constant) = law.arity();
    let mut out = Vec::new();
    for _ in 0..samples {
        let args: Vec<_> = (0..general).map(|_| elements.choose(rng).unwrap().clone()).collect();
        let consts: Vec<_> = (0..constant).map(|_| image.choose(rng).unwrap().clone()).collect();
        if !law.holds(alg, &args, &consts) {
            out.push(LawViolation { law, args, consts });
        }
    }
    out
}

fn tuples<E: Clone>(pool: &[E], arity: usize) -> Vec<Vec<E>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                pool.iter().map(move |x| {
                    let mut next = prefix.clone();
                    next.push(x.clone());
                    next
                })
            })
            .collect();
    }
    out
}
