//! Finite monadic MV-algebras: construction, validation, filters,
//! classification, the radical, representation of simple algebras, and the
//! finite partial embeddings into `⟨L_m^n⟩`.

mod algebra;
mod classify;
mod fep;
mod file;
mod filters;

use thiserror::Error;

pub use algebra::{generate_subalgebra, FiniteMonadicAlgebra, Presentation, MAX_CARRIER};
pub use classify::{
    classify, orthogonal_width, represent_simple, validate, w_k_holds, Classification,
    LawReport, Representation, ValidationReport,
};
pub use fep::{fep_embed, FepEmbedding, FepInput};
pub use file::{AlgebraFile, FunctionalFile, TabularFile};
pub use filters::{filters, radical, radical_by_powers, Filter, FilterKind, Filters};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("empty algebra or chain")]
    Empty,
    #[error("expected {expected} coordinates, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("{value} is not in L_{m}")]
    NotInChain { value: String, m: u32 },
    #[error("carrier is not closed: {0} is missing")]
    NotClosed(String),
    #[error("malformed table: {0}")]
    TableShape(String),
    #[error("table entry {index} out of range for {size} elements")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("carrier grew to {size} elements, above the cap of {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("algebra is not simple: {0}")]
    NotSimple(String),
    #[error("element {index} of S: witness {witness} does not attain the infimum")]
    Witness { index: usize, witness: usize },
    #[error("{0}")]
    Input(String),
}
