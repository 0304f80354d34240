//! Abstract syntax shared by every stage of the pipeline.

pub mod command;
pub mod expr;
pub mod ident;
pub mod wellformed;

pub use command::{
    AnnCommand, AstPath, Command, ForLoop, Program, Renaming, RenamingError, SaCommand,
};
pub use expr::{ArithOp, Assertion, BoolExpr, CmpOp, Expr};
pub use ident::{Identifier, NameError, SaVar, Variable, Version, VersionContractError, KEYWORDS};
pub use wellformed::{check_no_assign, check_sa_wellformed, sa_violations, SaRule, Violation};

/// A partial-correctness claim `{pre} program {post}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triple<V, C> {
    pub pre: Assertion<V>,
    pub program: C,
    pub post: Assertion<V>,
}

pub type WhileTriple = Triple<Identifier, AnnCommand<Identifier>>;
pub type SaTriple = Triple<SaVar, SaCommand>;

impl<V, C> Triple<V, C> {
    pub fn new(pre: Assertion<V>, program: C, post: Assertion<V>) -> Self {
        Triple { pre, program, post }
    }
}
