//! Concrete syntax for `.whl` units and single-assignment listings.
//!
//! ```text
//! define fact(0) = 1;
//! define fact(n) = n * fact(n - 1);
//! requires n >= 0;
//! ensures r = fact(n);
//! r := 1; i := 1;
//! while i <= n invariant r = fact(i - 1) && i <= n + 1 do { r := r * i; i := i + 1 }
//! ```
//!
//! `--` starts a line comment. The single-assignment form replaces `while`
//! by `for ([t := s, ...]; b; [t := s, ...]) invariant φ do { ... }` and
//! uses versioned variables such as `j_1.2.0`.

mod grammar;
mod lexer;
mod print;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::lang::{
    AnnCommand, Assertion, AstPath, Identifier, RenamingError, SaCommand, SaVar, Variable,
};
use crate::symbols::{FunctionDecl, SymbolError, SymbolTable};

use grammar::{Fail, Parser, Span};

/// A parsed file: declarations, specification and program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceUnit<V, C> {
    pub declarations: Vec<FunctionDecl>,
    pub pre: Assertion<V>,
    pub post: Assertion<V>,
    pub program: C,
}

pub type WhileUnit = SourceUnit<Identifier, AnnCommand<Identifier>>;
pub type SaUnit = SourceUnit<SaVar, SaCommand>;

impl<V, C> SourceUnit<V, C> {
    /// The builtins together with this unit's declarations.
    pub fn symbols(&self) -> SymbolTable {
        SymbolTable::from_decls(&self.declarations).expect("declarations were checked when parsing")
    }
}

/// Line and column of each command node.
pub type SpanTable = BTreeMap<AstPath, (u32, u32)>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: found {found}, expected one of {}", expected.join(", "))]
    Syntax {
        line: u32,
        col: u32,
        found: String,
        expected: Vec<String>,
    },
    #[error("{line}:{col}: unexpected character `{found}`")]
    Character { line: u32, col: u32, found: char },
    #[error("{line}:{col}: undeclared function `{name}`")]
    UndeclaredFunction {
        line: u32,
        col: u32,
        name: Identifier,
    },
    #[error("{line}:{col}: {source}")]
    Symbol {
        line: u32,
        col: u32,
        source: SymbolError,
    },
    #[error("{line}:{col}: `{name}` is declared twice with incompatible forms")]
    ConflictingDeclaration {
        line: u32,
        col: u32,
        name: Identifier,
    },
    #[error("{line}:{col}: duplicate `{clause}` clause")]
    Duplicate {
        line: u32,
        col: u32,
        clause: &'static str,
    },
    #[error("{line}:{col}: `{name}` is a function and cannot be used as a variable")]
    FunctionAsVariable {
        line: u32,
        col: u32,
        name: Identifier,
    },
    #[error("{line}:{col}: conditions cannot contain implications or quantifiers")]
    ConditionNotBoolean { line: u32, col: u32 },
    #[error("{line}:{col}: {source}")]
    Renaming {
        line: u32,
        col: u32,
        source: RenamingError,
    },
}

impl ParseError {
    pub fn position(&self) -> (u32, u32) {
        match self {
            ParseError::Syntax { line, col, .. }
            | ParseError::Character { line, col, .. }
            | ParseError::UndeclaredFunction { line, col, .. }
            | ParseError::Symbol { line, col, .. }
            | ParseError::ConflictingDeclaration { line, col, .. }
            | ParseError::Duplicate { line, col, .. }
            | ParseError::FunctionAsVariable { line, col, .. }
            | ParseError::ConditionNotBoolean { line, col }
            | ParseError::Renaming { line, col, .. } => (*line, *col),
        }
    }
}

fn run<T>(
    text: &str,
    symbols: Option<&SymbolTable>,
    go: impl FnOnce(&mut Parser) -> Result<T, Fail>,
) -> Result<T, ParseError> {
    let toks = lexer::tokenize(text).map_err(|e| ParseError::Character {
        line: e.line,
        col: e.col,
        found: e.found,
    })?;
    let mut p = Parser::new(toks);
    if let Some(s) = symbols {
        p.symbols = s.clone();
    }
    go(&mut p).map_err(|f| p.resolve(f))
}

fn located<V: Variable, C>(
    text: &str,
    program: fn(&mut Parser) -> Result<(C, Span), Fail>,
) -> Result<(SourceUnit<V, C>, SpanTable), ParseError> {
    let (unit, span) = run(text, None, |p| p.unit(program))?;
    let mut table = SpanTable::new();
    span.flatten(AstPath::root(), &mut table);
    Ok((unit, table))
}

/// Parses an annotated While unit.
pub fn parse(text: &str) -> Result<WhileUnit, ParseError> {
    parse_located(text).map(|(u, _)| u)
}

/// Parses an annotated While unit and records where each command starts.
pub fn parse_located(text: &str) -> Result<(WhileUnit, SpanTable), ParseError> {
    located(text, Parser::ann_command)
}

/// Parses a single-assignment unit.
pub fn parse_sa(text: &str) -> Result<SaUnit, ParseError> {
    parse_sa_located(text).map(|(u, _)| u)
}

pub fn parse_sa_located(text: &str) -> Result<(SaUnit, SpanTable), ParseError> {
    located(text, Parser::sa_command)
}

/// Parses a standalone assertion against `symbols`.
pub fn parse_assertion<V: Variable>(
    text: &str,
    symbols: &SymbolTable,
) -> Result<Assertion<V>, ParseError> {
    run(text, Some(symbols), |p| {
        let a = p.assertion()?;
        p.end()?;
        Ok(a)
    })
}

/// Parses a standalone annotated While command against `symbols`.
pub fn parse_command(
    text: &str,
    symbols: &SymbolTable,
) -> Result<AnnCommand<Identifier>, ParseError> {
    run(text, Some(symbols), |p| {
        let (c, _) = p.ann_command()?;
        p.end()?;
        Ok(c)
    })
}

/// Parses a standalone single-assignment command against `symbols`.
pub fn parse_sa_command(text: &str, symbols: &SymbolTable) -> Result<SaCommand, ParseError> {
    run(text, Some(symbols), |p| {
        let (c, _) = p.sa_command()?;
        p.end()?;
        Ok(c)
    })
}
