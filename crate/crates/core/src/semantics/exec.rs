//! Big-step execution of unannotated programs with a loop-unfolding budget.

use crate::lang::{Command, Variable};

use super::eval::{EvalContext, EvalError};
use super::state::State;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExecOutcome<V: Variable> {
    Terminated(State<V>),
    /// No verdict: more loop unfoldings were needed than the fuel allowed.
    FuelExhausted,
}

impl<V: Variable> ExecOutcome<V> {
    pub fn terminated(self) -> Option<State<V>> {
        match self {
            ExecOutcome::Terminated(s) => Some(s),
            ExecOutcome::FuelExhausted => None,
        }
    }
}

/// Runs `c` from `s`. Each entry into a loop body costs one unit of fuel;
/// straight-line code is free.
pub fn exec<V: Variable>(
    c: &Command<V>,
    s: &State<V>,
    fuel: u64,
    ctx: &EvalContext<'_>,
) -> Result<ExecOutcome<V>, EvalError> {
    let mut state = s.clone();
    let mut fuel = fuel;
    Ok(if run(c, &mut state, &mut fuel, ctx)? {
        ExecOutcome::Terminated(state)
    } else {
        ExecOutcome::FuelExhausted
    })
}

// false when fuel ran out
fn run<V: Variable>(
    c: &Command<V>,
    s: &mut State<V>,
    fuel: &mut u64,
    ctx: &EvalContext<'_>,
) -> Result<bool, EvalError> {
    match c {
        Command::Skip => Ok(true),
        Command::Assign(x, e) => {
            let v = ctx.eval_expr(e, s)?;
            s.set(x.clone(), v);
            Ok(true)
        }
        Command::Seq(a, b) => Ok(run(a, s, fuel, ctx)? && run(b, s, fuel, ctx)?),
        Command::If(b, t, f) => {
            if ctx.eval_bool(b, s)? {
                run(t, s, fuel, ctx)
            } else {
                run(f, s, fuel, ctx)
            }
        }
        Command::While(b, body) => {
            while ctx.eval_bool(b, s)? {
                if *fuel == 0 {
                    return Ok(false);
                }
                *fuel -= 1;
                if !run(body, s, fuel, ctx)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{ArithOp, BoolExpr, CmpOp, Expr, Identifier};
    use crate::symbols::SymbolTable;
    use num_bigint::BigInt;

    fn id(n: &str) -> Identifier {
        Identifier::new(n)
    }

    fn var(n: &str) -> Expr<Identifier> {
        Expr::Var(id(n))
    }

    #[test]
    fn skip_and_assignments() {
        let defs = SymbolTable::with_builtins();
        let ctx = EvalContext::new(&defs);
        let s = State::from_pairs([(id("q"), BigInt::from(9))]);
        assert_eq!(
            exec(&Command::Skip, &s, 1, &ctx).unwrap(),
            ExecOutcome::Terminated(s.clone())
        );

        let c = Command::Seq(
            Box::new(Command::Assign(id("x"), Expr::int(2))),
            Box::new(Command::Assign(
                id("x"),
                Expr::bin(ArithOp::Add, var("x"), Expr::int(3)),
            )),
        );
        let out = exec(&c, &State::new(), 1, &ctx)
            .unwrap()
            .terminated()
            .unwrap();
        assert_eq!(out, State::from_pairs([(id("x"), BigInt::from(5))]));
    }

    #[test]
    fn fuel_counts_unfoldings() {
        let defs = SymbolTable::with_builtins();
        let ctx = EvalContext::new(&defs);
        // while x < 3 do x := x + 1
        let c = Command::While(
            BoolExpr::cmp(CmpOp::Lt, var("x"), Expr::int(3)),
            Box::new(Command::Assign(
                id("x"),
                Expr::bin(ArithOp::Add, var("x"), Expr::int(1)),
            )),
        );
        assert_eq!(
            exec(&c, &State::new(), 2, &ctx).unwrap(),
            ExecOutcome::FuelExhausted
        );
        let done = exec(&c, &State::new(), 3, &ctx).unwrap();
        assert_eq!(
            done.clone().terminated().unwrap().get(&id("x")),
            &BigInt::from(3)
        );
        assert_eq!(exec(&c, &State::new(), 300, &ctx).unwrap(), done);

        let forever = Command::While(BoolExpr::<Identifier>::Const(true), Box::new(Command::Skip));
        assert_eq!(
            exec(&forever, &State::new(), 100, &ctx).unwrap(),
            ExecOutcome::FuelExhausted
        );
    }
}
