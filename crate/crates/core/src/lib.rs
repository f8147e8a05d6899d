//! Termination checking for Dedukti-style rewrite systems.
//!
//! A system is accepted when every right-hand side belongs to the
//! computability closure of its left-hand side and the call graph
//! satisfies the size-change termination principle: every (idempotent)
//! self-loop in the transitive closure exhibits a strict decrease of
//! some argument in the constructor subterm order. Acceptance is a
//! termination proof modulo confluence and type preservation, which are
//! not checked here; rejection only means the criterion does not apply.

pub mod analysis;
pub mod callgraph;
pub mod cc;
pub mod diag;
pub mod matrix;
pub mod parser;
pub mod report;
pub mod rules;
pub mod sct;
pub mod signature;
pub mod term;

pub use analysis::{analyze, Analysis, AnalysisOptions, FrontendError, Overall};
pub use callgraph::{Call, CallGraph};
pub use diag::Warning;
pub use matrix::{CallMatrix, SizeEntry};
pub use parser::{parse, SourceFile};
pub use report::Report;
pub use rules::Rule;
pub use sct::{to_dot, SctMode, Verdict};
pub use signature::{Level, Signature, SymbolInfo};
pub use term::Term;
