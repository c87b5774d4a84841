use num_integer::Integer;
use serde::Serialize;

use super::AnalysisError;
use crate::mv::{forall_inf, lift, MonadicElement, MvOp};

/// A finite subset `S` of a functional algebra on the points `0..points`,
/// with optional witnesses `x_a` such that `(∀a)(x) = a(x_a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FepInput {
    pub points: usize,
    pub subset: Vec<MonadicElement>,
    /// One per element of `subset`; computed as the first minimizing point when absent.
    pub witnesses: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FepEmbedding {
    pub m: u32,
    pub n: usize,
    /// `X₀`, the retained points.
    pub points: Vec<usize>,
    /// `h(a)` for each element of `S`, in input order.
    pub images: Vec<MonadicElement>,
}

/// Restricts `S` to the witnesses plus one separating point per pair, and
/// reads the result in `L_m` for `m` the least common denominator.
pub fn fep_embed(input: &FepInput) -> Result<FepEmbedding, AnalysisError> {
    let s = &input.subset;
    if input.points == 0 {
        return Err(AnalysisError::Empty);
    }
    for a in s {
        if a.len() != input.points {
            return Err(AnalysisError::Dimension { expected: input.points, got: a.len() });
        }
    }
    let witnesses: Vec<usize> = match &input.witnesses {
        Some(w) => {
            if w.len() != s.len() {
                return Err(AnalysisError::Input(format!("{} witnesses for {} elements", w.len(), s.len())));
            }
            for (index, (a, &x)) in s.iter().zip(w).enumerate() {
                if x >= input.points || a.coords()[x] != a.min() {
                    return Err(AnalysisError::Witness { index, witness: x });
                }
            }
            w.clone()
        }
        None => s
            .iter()
            .map(|a| a.coords().iter().position(|&t| t == a.min()).expect("non-empty"))
            .collect(),
    };

    let mut points = witnesses.clone();
    for (i, a) in s.iter().enumerate() {
        for b in &s[i + 1..] {
            if let Some(x) = (0..input.points).find(|&x| a.coords()[x] != b.coords()[x]) {
                points.push(x);
            }
        }
    }
    points.sort_unstable();
    points.dedup();
    if points.is_empty() {
        points.push(0);
    }

    let m = s
        .iter()
        .flat_map(|a| points.iter().map(move |&x| a.coords()[x].denom()))
        .fold(1i64, |acc, d| acc.lcm(&d));
    let m = u32::try_from(m).map_err(|_| AnalysisError::Input(format!("common denominator {m} is too large")))?;
    let images = s
        .iter()
        .map(|a| MonadicElement::in_chain(points.iter().map(|&x| a.coords()[x]).collect(), m))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| AnalysisError::Input(e.to_string()))?;
    Ok(FepEmbedding { m, n: points.len(), points, images })
}

impl FepEmbedding {
    /// Checks that `h` is one-to-one on `S` and that `h(0) = 0`,
    /// `h(a→b) = h(a)→h(b)` and `h(∀a) = ∀h(a)` whenever both sides are
    /// defined on `S`.
    pub fn verify(&self, input: &FepInput) -> Result<(), String> {
        let s = &input.subset;
        let h = &self.images;
        let find = |e: &MonadicElement| s.iter().position(|x| x.coords() == e.coords());
        for i in 0..s.len() {
            if !h[i].coords().iter().all(|t| t.in_chain(self.m)) {
                return Err(format!("h({}) leaves L_{}", s[i], self.m));
            }
            for j in i + 1..s.len() {
                if s[i].coords() != s[j].coords() && h[i].coords() == h[j].coords() {
                    return Err(format!("h identifies {} and {}", s[i], s[j]));
                }
            }
        }
        if let Some(z) = find(&MonadicElement::zero(input.points, None)) {
            if !h[z].coords().iter().all(|t| t.is_zero()) {
                return Err("h(0) is not 0".into());
            }
        }
        for i in 0..s.len() {
            if let Some(k) = find(&forall_inf(&s[i])) {
                if h[k].coords() != forall_inf(&h[i]).coords() {
                    return Err(format!("h(∀{}) is not ∀h({})", s[i], s[i]));
                }
            }
            for j in 0..s.len() {
                if let Some(k) = find(&lift(MvOp::Impl, &s[i], &s[j])) {
                    if h[k].coords() != lift(MvOp::Impl, &h[i], &h[j]).coords() {
                        return Err(format!("h does not preserve {} -> {}", s[i], s[j]));
                    }
                }
            }
        }
        Ok(())
    }
}
