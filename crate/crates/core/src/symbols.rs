//! Declared function symbols and their optional defining equations.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use thiserror::Error;

use crate::lang::{ArithOp, Expr, Identifier};

/// A parameter position in a defining equation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Pattern {
    /// Matches exactly this value.
    Lit(BigInt),
    /// Matches anything and binds it.
    Var(Identifier),
}

/// One equation `f(p1, ..., pn) = body`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    pub params: Vec<Pattern>,
    pub body: Expr<Identifier>,
}

/// A function symbol. With no clauses it is uninterpreted.
///
/// Equations are tried in order. Arguments are evaluated over the
/// nonnegative integers; negative arguments are clamped to zero, so a
/// definition only constrains the function on naturals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunctionDecl {
    pub name: Identifier,
    pub arity: usize,
    pub clauses: Vec<Clause>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolError {
    #[error("function `{0}` must take at least one argument")]
    NullaryFunction(Identifier),
    #[error("equation for `{name}` has {found} parameters, expected {expected}")]
    ClauseArity {
        name: Identifier,
        expected: usize,
        found: usize,
    },
    #[error("parameter `{param}` repeated in an equation for `{name}`")]
    RepeatedParam { name: Identifier, param: Identifier },
    #[error("equation for `{name}` uses unbound variable `{var}`")]
    UnboundVariable { name: Identifier, var: Identifier },
    #[error("recursive call in `{name}` does not decrease a parameter by a positive constant")]
    NotDecreasing { name: Identifier },
    #[error("undeclared function `{0}`")]
    Undeclared(Identifier),
    #[error("function `{name}` takes {expected} arguments, {found} given")]
    Arity {
        name: Identifier,
        expected: usize,
        found: usize,
    },
}

impl FunctionDecl {
    pub fn uninterpreted(name: Identifier, arity: usize) -> Self {
        FunctionDecl {
            name,
            arity,
            clauses: Vec::new(),
        }
    }

    pub fn is_defined(&self) -> bool {
        !self.clauses.is_empty()
    }

    /// `fact(0) = 1; fact(n) = n * fact(n - 1)`.
    pub fn factorial() -> Self {
        let fact = Identifier::new("fact");
        let n = Identifier::new("n");
        let step = Expr::bin(
            ArithOp::Mul,
            Expr::Var(n.clone()),
            Expr::App(
                fact.clone(),
                vec![Expr::bin(ArithOp::Sub, Expr::Var(n.clone()), Expr::int(1))],
            ),
        );
        FunctionDecl {
            name: fact,
            arity: 1,
            clauses: vec![
                Clause {
                    params: vec![Pattern::Lit(BigInt::from(0))],
                    body: Expr::int(1),
                },
                Clause {
                    params: vec![Pattern::Var(n)],
                    body: step,
                },
            ],
        }
    }

    /// Local shape checks: arities, binding, syntactic decrease of every
    /// recursive call.
    pub fn validate(&self) -> Result<(), SymbolError> {
        if self.arity == 0 {
            return Err(SymbolError::NullaryFunction(self.name.clone()));
        }
        for clause in &self.clauses {
            if clause.params.len() != self.arity {
                return Err(SymbolError::ClauseArity {
                    name: self.name.clone(),
                    expected: self.arity,
                    found: clause.params.len(),
                });
            }
            let mut bound = BTreeSet::new();
            for p in &clause.params {
                if let Pattern::Var(x) = p {
                    if !bound.insert(x.clone()) {
                        return Err(SymbolError::RepeatedParam {
                            name: self.name.clone(),
                            param: x.clone(),
                        });
                    }
                }
            }
            if let Some(var) = clause.body.vars().into_iter().find(|v| !bound.contains(v)) {
                return Err(SymbolError::UnboundVariable {
                    name: self.name.clone(),
                    var,
                });
            }
            if !recursive_calls_decrease(&self.name, clause, &clause.body) {
                return Err(SymbolError::NotDecreasing {
                    name: self.name.clone(),
                });
            }
        }
        Ok(())
    }
}

fn recursive_calls_decrease(name: &Identifier, clause: &Clause, e: &Expr<Identifier>) -> bool {
    match e {
        Expr::Int(_) | Expr::Var(_) => true,
        Expr::Bin(_, a, b) => {
            recursive_calls_decrease(name, clause, a) && recursive_calls_decrease(name, clause, b)
        }
        Expr::App(f, args) => {
            let here = f != name
                || clause
                    .params
                    .iter()
                    .zip(args)
                    .any(|(p, arg)| match (p, arg) {
                        (Pattern::Var(x), Expr::Bin(ArithOp::Sub, lhs, rhs)) => {
                            matches!(&**lhs, Expr::Var(y) if y == x)
                                && matches!(&**rhs, Expr::Int(k) if *k >= BigInt::from(1))
                        }
                        _ => false,
                    });
            here && args
                .iter()
                .all(|a| recursive_calls_decrease(name, clause, a))
        }
    }
}

/// Function symbols visible to a program: user declarations over the
/// predeclared `fact`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolTable {
    functions: BTreeMap<Identifier, FunctionDecl>,
}

impl Default for SymbolTable {
    fn default() -> Self {
        Self::with_builtins()
    }
}

impl SymbolTable {
    pub fn empty() -> Self {
        SymbolTable {
            functions: BTreeMap::new(),
        }
    }

    pub fn with_builtins() -> Self {
        let mut t = Self::empty();
        let fact = FunctionDecl::factorial();
        t.functions.insert(fact.name.clone(), fact);
        t
    }

    /// Builtins plus `decls`; a user declaration replaces a builtin of the
    /// same name.
    pub fn from_decls<'a>(
        decls: impl IntoIterator<Item = &'a FunctionDecl>,
    ) -> Result<Self, SymbolError> {
        let mut t = Self::with_builtins();
        for d in decls {
            t.insert(d.clone())?;
        }
        t.check_bodies()?;
        Ok(t)
    }

    pub fn insert(&mut self, decl: FunctionDecl) -> Result<(), SymbolError> {
        decl.validate()?;
        self.functions.insert(decl.name.clone(), decl);
        Ok(())
    }

    pub fn get(&self, name: &Identifier) -> Option<&FunctionDecl> {
        self.functions.get(name)
    }

    pub fn contains(&self, name: &Identifier) -> bool {
        self.functions.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &FunctionDecl> {
        self.functions.values()
    }

    /// Checks that a use `name(args...)` matches a declaration.
    pub fn check_use(&self, name: &Identifier, arity: usize) -> Result<&FunctionDecl, SymbolError> {
        let decl = self
            .get(name)
            .ok_or_else(|| SymbolError::Undeclared(name.clone()))?;
        if decl.arity != arity {
            return Err(SymbolError::Arity {
                name: name.clone(),
                expected: decl.arity,
                found: arity,
            });
        }
        Ok(decl)
    }

    /// Checks every application inside `e` against the table.
    pub fn check_expr<V>(&self, e: &Expr<V>) -> Result<(), SymbolError> {
        match e {
            Expr::Int(_) | Expr::Var(_) => Ok(()),
            Expr::Bin(_, a, b) => {
                self.check_expr(a)?;
                self.check_expr(b)
            }
            Expr::App(f, args) => {
                self.check_use(f, args.len())?;
                args.iter().try_for_each(|a| self.check_expr(a))
            }
        }
    }

    fn check_bodies(&self) -> Result<(), SymbolError> {
        for d in self.functions.values() {
            for c in &d.clauses {
                self.check_expr(&c.body)?;
            }
        }
        Ok(())
    }
}
