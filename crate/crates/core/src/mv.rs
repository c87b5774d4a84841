//! Exact Łukasiewicz arithmetic on rational truth values, the finite chains
//! `L_m`, and the canonical monadic power algebras `⟨L_m^n, ∃_∨, ∀_∧⟩`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MvError {
    #[error("dimension mismatch: {left} vs {right} coordinates")]
    DimensionMismatch { left: usize, right: usize },
    #[error("chain mismatch: {left:?} vs {right:?}")]
    ChainMismatch { left: Option<u32>, right: Option<u32> },
    #[error("invalid rational {0:?}")]
    Parse(String),
    #[error("value {0} lies outside [0,1]")]
    OutOfRange(String),
    #[error("value {value} is not an element of L_{chain}")]
    NotInChain { value: Truth, chain: u32 },
    #[error("a monadic element needs at least one coordinate")]
    Empty,
}

/// A truth value: an exact rational in `[0, 1]`, always in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Truth(Ratio<i64>);

impl Truth {
    pub const ZERO: Truth = Truth(Ratio::new_raw(0, 1));
    pub const ONE: Truth = Truth(Ratio::new_raw(1, 1));

    /// `numer/denom`, reduced. Fails unless the value lies in `[0,1]`.
    pub fn new(numer: i64, denom: i64) -> Result<Self, MvError> {
        if denom == 0 {
            return Err(MvError::Parse(format!("{numer}/0")));
        }
        Self::from_ratio(Ratio::new(numer, denom))
    }

    pub fn from_ratio(r: Ratio<i64>) -> Result<Self, MvError> {
        if r < Ratio::zero() || r > Ratio::one() {
            return Err(MvError::OutOfRange(r.to_string()));
        }
        Ok(Truth(r))
    }

    /// `k/m` without range checks beyond a debug assertion.
    pub(crate) fn scaled(k: u32, m: u32) -> Self {
        debug_assert!(k <= m && m > 0);
        Truth(Ratio::new(i64::from(k), i64::from(m)))
    }

    pub fn ratio(self) -> Ratio<i64> {
        self.0
    }

    pub fn numer(self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(self) -> i64 {
        *self.0.denom()
    }

    pub fn is_one(self) -> bool {
        self == Self::ONE
    }

    pub fn is_zero(self) -> bool {
        self == Self::ZERO
    }

    /// Whether the value is of the form `k/m`.
    pub fn in_chain(self, m: u32) -> bool {
        m > 0 && i64::from(m) % self.denom() == 0
    }

    /// Numerator over the common denominator `m`; `None` if not in `L_m`.
    pub fn chain_index(self, m: u32) -> Option<u32> {
        self.in_chain(m)
            .then(|| (self.numer() * (i64::from(m) / self.denom())) as u32)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Self {
        Truth(Ratio::one() - self.0)
    }

    pub fn oplus(self, other: Self) -> Self {
        Truth((self.0 + other.0).min(Ratio::one()))
    }

    pub fn star(self, other: Self) -> Self {
        Truth((self.0 + other.0 - Ratio::one()).max(Ratio::zero()))
    }

    pub fn implies(self, other: Self) -> Self {
        Truth((Ratio::one() - self.0 + other.0).min(Ratio::one()))
    }

    pub fn meet(self, other: Self) -> Self {
        self.min(other)
    }

    pub fn join(self, other: Self) -> Self {
        self.max(other)
    }

    /// `aⁿ`: n-fold strong conjunction, `a⁰ = 1`.
    pub fn power(self, n: u32) -> Self {
        (0..n).fold(Self::ONE, |acc, _| acc.star(self))
    }

    /// `na`: n-fold strong disjunction, `0a = 0`.
    pub fn multiple(self, n: u32) -> Self {
        (0..n).fold(Self::ZERO, |acc, _| acc.oplus(self))
    }

    pub fn apply(op: MvOp, a: Self, b: Self) -> Self {
        match op {
            MvOp::Oplus => a.oplus(b),
            MvOp::Star => a.star(b),
            MvOp::Impl => a.implies(b),
            MvOp::Meet => a.meet(b),
            MvOp::Join => a.join(b),
        }
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Truth {
    type Err = MvError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let r: Ratio<i64> = s
            .trim()
            .parse()
            .map_err(|_| MvError::Parse(s.to_string()))?;
        Self::from_ratio(r)
    }
}

impl Serialize for Truth {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Truth {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The binary MV operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MvOp {
    Oplus,
    Star,
    Impl,
    Meet,
    Join,
}

impl MvOp {
    pub const ALL: [MvOp; 5] = [MvOp::Oplus, MvOp::Star, MvOp::Impl, MvOp::Meet, MvOp::Join];
}

pub fn mv_binop(op: MvOp, a: Truth, b: Truth) -> Truth {
    Truth::apply(op, a, b)
}

/// The carrier of `L_m`, ascending: `0, 1/m, …, 1`.
pub fn enumerate_chain(m: u32) -> Vec<Truth> {
    assert!(m > 0, "L_m needs m >= 1");
    (0..=m).map(|k| Truth::scaled(k, m)).collect()
}

/// Least common multiple of the denominators of `values` (1 when empty).
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Truth>) -> u32 {
    values
        .into_iter()
        .fold(1i64, |acc, v| acc.lcm(&v.denom())) as u32
}

/// An element of `[0,1]^n`, optionally constrained to `L_m^n`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonadicElement {
    coords: Vec<Truth>,
    chain: Option<u32>,
}

impl MonadicElement {
    pub fn new(coords: Vec<Truth>) -> Result<Self, MvError> {
        if coords.is_empty() {
            return Err(MvError::Empty);
        }
        Ok(MonadicElement { coords, chain: None })
    }

    /// An element of `L_m^n`; every coordinate must be a multiple of `1/m`.
    pub fn in_chain(coords: Vec<Truth>, m: u32) -> Result<Self, MvError> {
        if coords.is_empty() {
            return Err(MvError::Empty);
        }
        if let Some(&bad) = coords.iter().find(|v| !v.in_chain(m)) {
            return Err(MvError::NotInChain { value: bad, chain: m });
        }
        Ok(MonadicElement { coords, chain: Some(m) })
    }

    pub fn constant(value: Truth, n: usize, chain: Option<u32>) -> Self {
        assert!(n > 0);
        MonadicElement { coords: vec![value; n], chain }
    }

    pub fn zero(n: usize, chain: Option<u32>) -> Self {
        Self::constant(Truth::ZERO, n, chain)
    }

    pub fn one(n: usize, chain: Option<u32>) -> Self {
        Self::constant(Truth::ONE, n, chain)
    }

    pub fn coords(&self) -> &[Truth] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn chain(&self) -> Option<u32> {
        self.chain
    }

    /// Same coordinates with a different (or no) chain tag.
    pub fn retag(&self, chain: Option<u32>) -> Result<Self, MvError> {
        match chain {
            Some(m) => Self::in_chain(self.coords.clone(), m),
            None => Ok(MonadicElement { coords: self.coords.clone(), chain: None }),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.coords.windows(2).all(|w| w[0] == w[1])
    }

    pub fn is_one(&self) -> bool {
        self.coords.iter().all(|v| v.is_one())
    }

    pub fn le(&self, other: &Self) -> bool {
        self.coords.iter().zip(&other.coords).all(|(a, b)| a <= b)
    }

    fn check_compatible(&self, other: &Self) -> Result<(), MvError> {
        if self.len() != other.len() {
            return Err(MvError::DimensionMismatch { left: self.len(), right: other.len() });
        }
        if self.chain != other.chain {
            return Err(MvError::ChainMismatch { left: self.chain, right: other.chain });
        }
        Ok(())
    }

    fn map(&self, f: impl Fn(Truth) -> Truth) -> Self {
        MonadicElement { coords: self.coords.iter().map(|&v| f(v)).collect(), chain: self.chain }
    }

    pub fn neg(&self) -> Self {
        self.map(Truth::neg)
    }

    pub fn power(&self, n: u32) -> Self {
        self.map(|v| v.power(n))
    }

    pub fn multiple(&self, n: u32) -> Self {
        self.map(|v| v.multiple(n))
    }

    pub fn max(&self) -> Truth {
        *self.coords.iter().max().expect("non-empty")
    }

    pub fn min(&self) -> Truth {
        *self.coords.iter().min().expect("non-empty")
    }

    /// Embeds into `n'` coordinates (`n' >= n`) by repeating the first
    /// coordinate, the canonical embedding `[0,1]^X → [0,1]^Y` for `X ⊆ Y`.
    pub fn extend(&self, n: usize) -> Self {
        assert!(n >= self.len());
        let mut coords = self.coords.clone();
        coords.resize(n, self.coords[0]);
        MonadicElement { coords, chain: self.chain }
    }
}

impl fmt::Display for MonadicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for MonadicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for MonadicElement {
    type Err = MvError;

    /// Parses `"[1/2, 3/4]"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| MvError::Parse(s.to_string()))?;
        let coords = inner
            .split(',')
            .map(str::parse)
            .collect::<Result<Vec<Truth>, _>>()?;
        Self::new(coords)
    }
}

impl Serialize for MonadicElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.coords.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MonadicElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let coords = Vec::<Truth>::deserialize(deserializer)?;
        Self::new(coords).map_err(serde::de::Error::custom)
    }
}

/// Pointwise lifting of [`mv_binop`].
pub fn power_binop(
    op: MvOp,
    a: &MonadicElement,
    b: &MonadicElement,
) -> Result<MonadicElement, MvError> {
    a.check_compatible(b)?;
    Ok(MonadicElement {
        coords: a.coords.iter().zip(&b.coords).map(|(&x, &y)| mv_binop(op, x, y)).collect(),
        chain: a.chain,
    })
}

/// `∃_∨`: the constant tuple of the largest coordinate.
pub fn exists_sup(a: &MonadicElement) -> MonadicElement {
    MonadicElement::constant(a.max(), a.len(), a.chain)
}

/// `∀_∧`: the constant tuple of the smallest coordinate.
pub fn forall_inf(a: &MonadicElement) -> MonadicElement {
    MonadicElement::constant(a.min(), a.len(), a.chain)
}

/// Unwrapping variant of [`power_binop`] for callers that already know the
/// operands are compatible.
pub(crate) fn lift(op: MvOp, a: &MonadicElement, b: &MonadicElement) -> MonadicElement {
    power_binop(op, a, b).expect("operands of equal shape")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Truth {
        s.parse().unwrap()
    }

    fn el(s: &str) -> MonadicElement {
        s.parse().unwrap()
    }

    #[test]
    fn binop_examples() {
        assert_eq!(mv_binop(MvOp::Impl, t("1"), t("2/5")), t("2/5"));
        assert_eq!(mv_binop(MvOp::Star, t("1/2"), t("1/2")), t("0"));
        assert_eq!(mv_binop(MvOp::Impl, t("7/10"), t("2/5")), t("7/10"));
        assert_eq!(t("3/10").neg(), t("7/10"));
        assert_eq!(t("2/4"), t("1/2"));
    }

    #[test]
    fn power_binop_examples() {
        assert_eq!(power_binop(MvOp::Impl, &el("[1,0]"), &el("[1,1]")).unwrap(), el("[1,1]"));
        assert_eq!(power_binop(MvOp::Star, &el("[1,1/2]"), &el("[1,1/2]")).unwrap(), el("[1,0]"));
        assert_eq!(power_binop(MvOp::Join, &el("[0,1]"), &el("[1,0]")).unwrap(), el("[1,1]"));
    }

    #[test]
    fn power_binop_rejects_mismatch() {
        assert_eq!(
            power_binop(MvOp::Meet, &el("[0,1]"), &el("[1]")),
            Err(MvError::DimensionMismatch { left: 2, right: 1 })
        );
        let tagged = MonadicElement::in_chain(vec![t("1/2")], 2).unwrap();
        assert!(matches!(
            power_binop(MvOp::Meet, &tagged, &el("[1]")),
            Err(MvError::ChainMismatch { .. })
        ));
    }

    #[test]
    fn quantifier_examples() {
        assert_eq!(exists_sup(&el("[1,0]")), el("[1,1]"));
        assert_eq!(exists_sup(&el("[1/3,1/3,1/3]")), el("[1/3,1/3,1/3]"));
        assert_eq!(exists_sup(&el("[1/2,1/4,3/4]")), el("[3/4,3/4,3/4]"));
        assert_eq!(forall_inf(&el("[1,1/2]")), el("[1/2,1/2]"));
        assert_eq!(forall_inf(&el("[1,1,1]")), el("[1,1,1]"));
    }

    #[test]
    fn chains() {
        assert_eq!(enumerate_chain(1), vec![t("0"), t("1")]);
        assert_eq!(enumerate_chain(2), vec![t("0"), t("1/2"), t("1")]);
        let l4 = enumerate_chain(4);
        assert_eq!(l4.len(), 5);
        assert_eq!(l4[4], Truth::ONE);
        assert!(t("1/2").in_chain(4));
        assert!(!t("1/3").in_chain(4));
        assert_eq!(t("1/2").chain_index(4), Some(2));
        assert!(MonadicElement::in_chain(vec![t("1/3")], 2).is_err());
    }

    #[test]
    fn parse_and_print() {
        assert!("3/2".parse::<Truth>().is_err());
        assert!("-1".parse::<Truth>().is_err());
        assert!("x".parse::<Truth>().is_err());
        assert_eq!(el("[1/2, 3/4]").to_string(), "[1/2, 3/4]");
        assert_eq!(t("1").to_string(), "1");
        assert_eq!(t("0").to_string(), "0");
        let json = serde_json::to_string(&el("[0, 2/6]")).unwrap();
        assert_eq!(json, r#"["0","1/3"]"#);
    }

    #[test]
    fn powers_and_multiples() {
        assert_eq!(t("3/4").power(0), Truth::ONE);
        assert_eq!(t("3/4").power(2), t("1/2"));
        assert_eq!(t("1/4").multiple(0), Truth::ZERO);
        assert_eq!(t("1/4").multiple(3), t("3/4"));
        assert_eq!(t("1/4").multiple(5), Truth::ONE);
    }

    #[test]
    fn extend_repeats_first_point() {
        assert_eq!(el("[1/2,1]").extend(4), el("[1/2,1,1/2,1/2]"));
    }
}
