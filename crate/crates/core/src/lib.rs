//! Single-assignment verification of annotated While programs.
//!
//! The pipeline: parse a program with loop invariants, translate it into
//! single-assignment form with `for` loops, generate verification
//! conditions, and discharge them either by bounded enumeration or through
//! an external SMT solver.

pub mod fuzz;
pub mod lang;
pub mod parser;
pub mod semantics;
pub mod smt;
pub mod symbols;
pub mod translate;
pub mod vcgen;
