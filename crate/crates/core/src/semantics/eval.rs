//! Evaluation of expressions, conditions and assertions in a state.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Signed;
use thiserror::Error;

use crate::lang::{ArithOp, Assertion, BoolExpr, Expr, Identifier, Variable};
use crate::symbols::{Pattern, SymbolTable};

use super::state::State;

pub const DEFAULT_RECURSION_BUDGET: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("undeclared function `{0}`")]
    UndeclaredFunction(Identifier),
    #[error("function `{0}` has no definition to evaluate")]
    MissingDefinition(Identifier),
    #[error("function `{name}` applied to {found} arguments, expected {expected}")]
    Arity {
        name: Identifier,
        expected: usize,
        found: usize,
    },
    #[error("no equation of `{0}` matches the arguments")]
    NoMatchingClause(Identifier),
    #[error("recursion budget of {0} exceeded")]
    RecursionLimit(usize),
    #[error("quantifier needs a bound for evaluation")]
    UnboundedQuantifier,
}

/// Evaluation settings: the function table, the recursion budget for
/// user-defined functions and the optional quantifier range `[-b, b]`.
#[derive(Debug, Clone, Copy)]
pub struct EvalContext<'a> {
    pub defs: &'a SymbolTable,
    pub recursion_budget: usize,
    pub quantifier_bound: Option<u64>,
}

impl<'a> EvalContext<'a> {
    pub fn new(defs: &'a SymbolTable) -> Self {
        EvalContext {
            defs,
            recursion_budget: DEFAULT_RECURSION_BUDGET,
            quantifier_bound: None,
        }
    }

    pub fn with_quantifier_bound(mut self, bound: u64) -> Self {
        self.quantifier_bound = Some(bound);
        self
    }

    pub fn with_recursion_budget(mut self, budget: usize) -> Self {
        self.recursion_budget = budget;
        self
    }

    pub fn eval_expr<V: Variable>(&self, e: &Expr<V>, s: &State<V>) -> Result<BigInt, EvalError> {
        self.expr(e, &|x| s.get(x).clone(), 0)
    }

    pub fn eval_bool<V: Variable>(&self, b: &BoolExpr<V>, s: &State<V>) -> Result<bool, EvalError> {
        Ok(match b {
            BoolExpr::Const(c) => *c,
            BoolExpr::Cmp(op, l, r) => op.holds(&self.eval_expr(l, s)?, &self.eval_expr(r, s)?),
            BoolExpr::Not(b) => !self.eval_bool(b, s)?,
            BoolExpr::And(a, b) => self.eval_bool(a, s)? && self.eval_bool(b, s)?,
            BoolExpr::Or(a, b) => self.eval_bool(a, s)? || self.eval_bool(b, s)?,
        })
    }

    /// `s ⊨ a`. Quantifiers range over `[-b, b]` and are rejected when no
    /// bound is set.
    pub fn eval_assert<V: Variable>(
        &self,
        a: &Assertion<V>,
        s: &State<V>,
    ) -> Result<bool, EvalError> {
        Ok(match a {
            Assertion::Const(c) => *c,
            Assertion::Cmp(op, l, r) => op.holds(&self.eval_expr(l, s)?, &self.eval_expr(r, s)?),
            Assertion::Not(a) => !self.eval_assert(a, s)?,
            Assertion::And(a, b) => self.eval_assert(a, s)? && self.eval_assert(b, s)?,
            Assertion::Or(a, b) => self.eval_assert(a, s)? || self.eval_assert(b, s)?,
            Assertion::Implies(a, b) => !self.eval_assert(a, s)? || self.eval_assert(b, s)?,
            Assertion::Forall(z, body) => {
                for k in self.quantifier_range()? {
                    if !self.eval_assert(body, &s.with(z.clone(), BigInt::from(k)))? {
                        return Ok(false);
                    }
                }
                true
            }
            Assertion::Exists(z, body) => {
                for k in self.quantifier_range()? {
                    if self.eval_assert(body, &s.with(z.clone(), BigInt::from(k)))? {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }

    fn quantifier_range(&self) -> Result<std::ops::RangeInclusive<i128>, EvalError> {
        let b = self
            .quantifier_bound
            .ok_or(EvalError::UnboundedQuantifier)? as i128;
        Ok(-b..=b)
    }

    fn expr<V>(
        &self,
        e: &Expr<V>,
        lookup: &dyn Fn(&V) -> BigInt,
        depth: usize,
    ) -> Result<BigInt, EvalError> {
        Ok(match e {
            Expr::Int(n) => n.clone(),
            Expr::Var(x) => lookup(x),
            Expr::Bin(op, a, b) => {
                let (a, b) = (self.expr(a, lookup, depth)?, self.expr(b, lookup, depth)?);
                match op {
                    ArithOp::Add => a + b,
                    ArithOp::Sub => a - b,
                    ArithOp::Mul => a * b,
                }
            }
            Expr::App(f, args) => {
                let args = args
                    .iter()
                    .map(|a| self.expr(a, lookup, depth))
                    .collect::<Result<Vec<_>, _>>()?;
                self.apply(f, args, depth)?
            }
        })
    }

    fn apply(&self, f: &Identifier, args: Vec<BigInt>, depth: usize) -> Result<BigInt, EvalError> {
        let decl = self
            .defs
            .get(f)
            .ok_or_else(|| EvalError::UndeclaredFunction(f.clone()))?;
        if decl.arity != args.len() {
            return Err(EvalError::Arity {
                name: f.clone(),
                expected: decl.arity,
                found: args.len(),
            });
        }
        if !decl.is_defined() {
            return Err(EvalError::MissingDefinition(f.clone()));
        }
        if depth >= self.recursion_budget {
            return Err(EvalError::RecursionLimit(self.recursion_budget));
        }
        let args: Vec<BigInt> = args
            .into_iter()
            .map(|a| if a.is_negative() { BigInt::ZERO } else { a })
            .collect();
        'clauses: for clause in &decl.clauses {
            let mut env = BTreeMap::new();
            for (p, a) in clause.params.iter().zip(&args) {
                match p {
                    Pattern::Lit(n) if n != a => continue 'clauses,
                    Pattern::Lit(_) => {}
                    Pattern::Var(x) => {
                        env.insert(x.clone(), a.clone());
                    }
                }
            }
            let lookup = |x: &Identifier| env.get(x).cloned().unwrap_or_default();
            return self.expr(&clause.body, &lookup, depth + 1);
        }
        Err(EvalError::NoMatchingClause(f.clone()))
    }
}

pub fn eval_expr<V: Variable>(
    e: &Expr<V>,
    s: &State<V>,
    defs: &SymbolTable,
) -> Result<BigInt, EvalError> {
    EvalContext::new(defs).eval_expr(e, s)
}

pub fn eval_bool<V: Variable>(
    b: &BoolExpr<V>,
    s: &State<V>,
    defs: &SymbolTable,
) -> Result<bool, EvalError> {
    EvalContext::new(defs).eval_bool(b, s)
}

/// `s ⊨ a` with quantifiers ranging over `[-bound, bound]` when a bound is
/// given.
pub fn eval_assert<V: Variable>(
    a: &Assertion<V>,
    s: &State<V>,
    defs: &SymbolTable,
    bound: Option<u64>,
) -> Result<bool, EvalError> {
    let mut ctx = EvalContext::new(defs);
    ctx.quantifier_bound = bound;
    ctx.eval_assert(a, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::CmpOp;
    use crate::symbols::{Clause, FunctionDecl};

    fn id(n: &str) -> Identifier {
        Identifier::new(n)
    }

    fn var(n: &str) -> Expr<Identifier> {
        Expr::Var(id(n))
    }

    fn state(pairs: &[(&str, i64)]) -> State<Identifier> {
        State::from_pairs(pairs.iter().map(|(x, v)| (id(x), BigInt::from(*v))))
    }

    fn fact(e: Expr<Identifier>) -> Expr<Identifier> {
        Expr::App(id("fact"), vec![e])
    }

    #[test]
    fn expressions() {
        let defs = SymbolTable::with_builtins();
        let e = Expr::bin(ArithOp::Add, var("x"), Expr::int(1));
        assert_eq!(
            eval_expr(&e, &state(&[("x", 4)]), &defs).unwrap(),
            BigInt::from(5)
        );
        assert_eq!(
            eval_expr(&var("y"), &state(&[]), &defs).unwrap(),
            BigInt::from(0)
        );
    }

    #[test]
    fn factorial_by_definition() {
        let defs = SymbolTable::with_builtins();
        // 4! unfolded by hand: 4*3*2*1*1
        assert_eq!(
            eval_expr(&fact(Expr::int(4)), &state(&[]), &defs).unwrap(),
            BigInt::from(24)
        );
        assert_eq!(
            eval_expr(&fact(Expr::int(0)), &state(&[]), &defs).unwrap(),
            BigInt::from(1)
        );
        // negative arguments are clamped to 0
        assert_eq!(
            eval_expr(&fact(Expr::int(-3)), &state(&[]), &defs).unwrap(),
            BigInt::from(1)
        );
        let big = eval_expr(&fact(Expr::int(30)), &state(&[]), &defs).unwrap();
        assert_eq!(big.to_string(), "265252859812191058636308480000000");
    }

    #[test]
    fn recursion_budget_and_missing_definitions() {
        let defs = SymbolTable::with_builtins();
        let ctx = EvalContext::new(&defs).with_recursion_budget(10);
        assert_eq!(
            ctx.eval_expr(&fact(Expr::int(20)), &state(&[])),
            Err(EvalError::RecursionLimit(10))
        );

        let mut defs = SymbolTable::with_builtins();
        defs.insert(FunctionDecl::uninterpreted(id("g"), 1))
            .unwrap();
        let e = Expr::App(id("g"), vec![Expr::int(1)]);
        assert_eq!(
            eval_expr(&e, &state(&[]), &defs),
            Err(EvalError::MissingDefinition(id("g")))
        );

        // a step without a base case never bottoms out
        let mut defs = SymbolTable::with_builtins();
        let h = id("h");
        defs.insert(FunctionDecl {
            name: h.clone(),
            arity: 1,
            clauses: vec![Clause {
                params: vec![Pattern::Var(id("n"))],
                body: Expr::App(
                    h.clone(),
                    vec![Expr::bin(ArithOp::Sub, var("n"), Expr::int(1))],
                ),
            }],
        })
        .unwrap();
        let e = Expr::App(h, vec![Expr::int(2)]);
        assert!(matches!(
            eval_expr(&e, &state(&[]), &defs),
            Err(EvalError::RecursionLimit(_))
        ));
    }

    #[test]
    fn conditions() {
        let defs = SymbolTable::with_builtins();
        let le = BoolExpr::cmp(CmpOp::Le, var("i"), var("n"));
        assert!(!eval_bool(&le, &state(&[("i", 1), ("n", 0)]), &defs).unwrap());
        assert!(eval_bool(&le, &state(&[("i", 1), ("n", 4)]), &defs).unwrap());
        let t = BoolExpr::And(
            Box::new(BoolExpr::Const(true)),
            Box::new(BoolExpr::cmp(CmpOp::Eq, Expr::int(1), Expr::int(1))),
        );
        assert!(eval_bool(&t, &state(&[]), &defs).unwrap());
    }

    #[test]
    fn assertions() {
        let defs = SymbolTable::with_builtins();
        let ge = Assertion::Cmp(CmpOp::Ge, var("x"), Expr::int(0));
        assert!(eval_assert(&ge, &state(&[("x", 3)]), &defs, None).unwrap());

        let f = Assertion::Cmp(CmpOp::Eq, var("f"), fact(var("aux")));
        assert!(eval_assert(&f, &state(&[("f", 24), ("aux", 4)]), &defs, None).unwrap());

        let all = Assertion::Forall(
            id("z"),
            Box::new(Assertion::Cmp(CmpOp::Ge, var("z"), Expr::int(0))),
        );
        assert!(!eval_assert(&all, &state(&[]), &defs, Some(2)).unwrap());
        assert_eq!(
            eval_assert(&all, &state(&[]), &defs, None),
            Err(EvalError::UnboundedQuantifier)
        );

        let some = Assertion::Exists(
            id("z"),
            Box::new(Assertion::Cmp(CmpOp::Eq, var("z"), var("x"))),
        );
        assert!(some.free_vars().contains(&id("x")));
        assert!(eval_assert(&some, &state(&[("x", 2)]), &defs, Some(2)).unwrap());
        assert!(!eval_assert(&some, &state(&[("x", 3)]), &defs, Some(2)).unwrap());
    }
}
