//! Integer semantics: evaluation, big-step execution, renaming semantics
//! and bounded falsification.

mod bounded;
mod eval;
mod exec;
mod renaming;
mod state;

pub use bounded::{bounded_validity, CheckError, Grid, GridStates, Validity, DEFAULT_GRID_CAP};
pub use eval::{
    eval_assert, eval_bool, eval_expr, EvalContext, EvalError, DEFAULT_RECURSION_BUDGET,
};
pub use exec::{exec, ExecOutcome};
pub use renaming::{apply_renaming_assert, apply_renaming_state};
pub use state::{State, StateLiteralError};
