//! Random formulas for audits and property runs.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::syntax::{Binary, Formula, Unary};

const BINARIES: [Binary; 5] = [Binary::Impl, Binary::Join, Binary::Meet, Binary::Oplus, Binary::Star];
const UNARIES: [Unary; 3] = [Unary::Not, Unary::Box, Unary::Diamond];

/// Shape parameters for random formulas.
#[derive(Debug, Clone)]
pub struct FormulaShape {
    pub max_depth: usize,
    pub vars: Vec<String>,
}

impl FormulaShape {
    pub fn new(max_depth: usize, vars: &[&str]) -> Self {
        FormulaShape { max_depth, vars: vars.iter().map(|v| v.to_string()).collect() }
    }
}

fn leaf<R: Rng + ?Sized>(rng: &mut R, shape: &FormulaShape) -> Formula {
    match rng.gen_range(0..10) {
        0 => Formula::Zero,
        1 => Formula::One,
        _ => Formula::Var(shape.vars.choose(rng).expect("at least one variable").clone()),
    }
}

/// A random formula of depth at most `shape.max_depth`.
pub fn random_formula<R: Rng + ?Sized>(rng: &mut R, shape: &FormulaShape) -> Formula {
    grow(rng, shape, shape.max_depth)
}

fn grow<R: Rng + ?Sized>(rng: &mut R, shape: &FormulaShape, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return leaf(rng, shape);
    }
    if rng.gen_bool(0.4) {
        let op = *UNARIES.choose(rng).unwrap();
        Formula::unary(op, grow(rng, shape, depth - 1))
    } else {
        let op = *BINARIES.choose(rng).unwrap();
        Formula::binary(op, grow(rng, shape, depth - 1), grow(rng, shape, depth - 1))
    }
}

/// A random propositional combination of constants and formulas beginning
/// with `□` or `◇`, of depth at most `shape.max_depth`.
pub fn random_modalized<R: Rng + ?Sized>(rng: &mut R, shape: &FormulaShape) -> Formula {
    modalized(rng, shape, shape.max_depth.max(1))
}

fn modalized<R: Rng + ?Sized>(rng: &mut R, shape: &FormulaShape, depth: usize) -> Formula {
    let stop = depth <= 1 || rng.gen_bool(0.5);
    if stop {
        return match rng.gen_range(0..10) {
            0 => Formula::Zero,
            1 => Formula::One,
            k => {
                let body = grow(rng, shape, depth.saturating_sub(1));
                if k % 2 == 0 {
                    Formula::nec(body)
                } else {
                    Formula::poss(body)
                }
            }
        };
    }
    if rng.gen_bool(0.25) {
        Formula::not(modalized(rng, shape, depth - 1))
    } else {
        let op = *BINARIES.choose(rng).unwrap();
        Formula::binary(op, modalized(rng, shape, depth - 1), modalized(rng, shape, depth - 1))
    }
}
