//! A workbench for the S5-modal Łukasiewicz logic: exact evaluation over
//! finite structures, Hilbert-style proof checking, countermodel search over
//! the algebras `⟨L_m^n, ∃_∨, ∀_∧⟩`, and analysis of finite monadic
//! MV-algebras.

pub mod analysis;
pub mod compiled;
pub mod gen;
pub mod laws;
pub mod mv;
pub mod par;
pub mod proofs;
pub mod search;
pub mod semantics;
pub mod syntax;

pub use mv::{MonadicElement, MvOp, Truth};
pub use par::Exec;
pub use semantics::SafeStructure;
pub use syntax::{parse, Formula};
