//! SMT-LIB2 emission of verification conditions and an external solver
//! runner.

mod emit;
mod solver;

pub use emit::{emit, emit_all, write_scripts, SmtError, SmtScript};
pub use solver::{run_solver, SolverVerdict};
