//! Exhaustive falsification of assertions over a finite integer grid.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use thiserror::Error;

use crate::lang::{Assertion, Identifier, Variable};

use super::eval::{EvalContext, EvalError};
use super::state::State;

pub const DEFAULT_GRID_CAP: u64 = 10_000_000;

/// Value ranges for grid enumeration.
///
/// Every variable ranges over `[lo, hi]` unless its base name has an
/// override.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    pub lo: i64,
    pub hi: i64,
    pub overrides: BTreeMap<Identifier, (i64, i64)>,
    pub cap: u64,
}

impl Grid {
    pub fn new(lo: i64, hi: i64) -> Self {
        Grid {
            lo,
            hi,
            overrides: BTreeMap::new(),
            cap: DEFAULT_GRID_CAP,
        }
    }

    pub fn with_override(mut self, base: Identifier, lo: i64, hi: i64) -> Self {
        self.overrides.insert(base, (lo, hi));
        self
    }

    pub fn range_of<V: Variable>(&self, x: &V) -> (i64, i64) {
        self.overrides
            .get(x.base())
            .copied()
            .unwrap_or((self.lo, self.hi))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validity<V: Variable> {
    ValidOnGrid,
    /// The first falsifying assignment in lexicographic order.
    Counterexample(State<V>),
}

impl<V: Variable> Validity<V> {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::ValidOnGrid)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("grid of {points} points exceeds the cap of {cap}")]
    GridTooLarge { points: u128, cap: u64 },
    #[error("empty range [{lo}, {hi}] for `{var}`")]
    EmptyRange { var: String, lo: i64, hi: i64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Every assignment of a set of variables into a grid, in lexicographic
/// order: the first variable is most significant and each runs from low to
/// high.
#[derive(Debug, Clone)]
pub struct GridStates<V: Variable> {
    vars: Vec<V>,
    ranges: Vec<(i64, i64)>,
    current: Vec<i64>,
    state: State<V>,
    done: bool,
}

impl<V: Variable> GridStates<V> {
    pub fn new(vars: &BTreeSet<V>, grid: &Grid) -> Result<Self, CheckError> {
        let vars: Vec<V> = vars.iter().cloned().collect();
        let mut ranges = Vec::with_capacity(vars.len());
        let mut points: u128 = 1;
        for x in &vars {
            let (lo, hi) = grid.range_of(x);
            if lo > hi {
                return Err(CheckError::EmptyRange {
                    var: x.to_string(),
                    lo,
                    hi,
                });
            }
            points = points.saturating_mul((hi - lo) as u128 + 1);
            ranges.push((lo, hi));
        }
        if points > grid.cap as u128 {
            return Err(CheckError::GridTooLarge {
                points,
                cap: grid.cap,
            });
        }
        let current: Vec<i64> = ranges.iter().map(|(lo, _)| *lo).collect();
        let mut state = State::new();
        for (x, v) in vars.iter().zip(&current) {
            state.set(x.clone(), BigInt::from(*v));
        }
        Ok(GridStates {
            vars,
            ranges,
            current,
            state,
            done: false,
        })
    }
}

impl<V: Variable> Iterator for GridStates<V> {
    type Item = State<V>;

    fn next(&mut self) -> Option<State<V>> {
        if self.done {
            return None;
        }
        let out = self.state.clone();
        // odometer step, least significant digit last
        let mut i = self.vars.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.current[i] < self.ranges[i].1 {
                self.current[i] += 1;
                self.state
                    .set(self.vars[i].clone(), BigInt::from(self.current[i]));
                break;
            }
            self.current[i] = self.ranges[i].0;
            self.state
                .set(self.vars[i].clone(), BigInt::from(self.current[i]));
        }
        Some(out)
    }
}

/// Evaluates `a` on every assignment of `vars` into the grid and returns
/// the first failing one in [`GridStates`] order.
pub fn bounded_validity<V: Variable>(
    a: &Assertion<V>,
    vars: &BTreeSet<V>,
    grid: &Grid,
    ctx: &EvalContext<'_>,
) -> Result<Validity<V>, CheckError> {
    for state in GridStates::new(vars, grid)? {
        if !ctx.eval_assert(a, &state)? {
            return Ok(Validity::Counterexample(state));
        }
    }
    Ok(Validity::ValidOnGrid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{ArithOp, CmpOp, Expr};
    use crate::symbols::SymbolTable;

    fn id(n: &str) -> Identifier {
        Identifier::new(n)
    }

    fn var(n: &str) -> Expr<Identifier> {
        Expr::Var(id(n))
    }

    #[test]
    fn valid_counterexample_and_empty() {
        let defs = SymbolTable::with_builtins();
        let ctx = EvalContext::new(&defs);
        let xs = BTreeSet::from([id("x")]);

        let succ = Assertion::Cmp(
            CmpOp::Gt,
            Expr::bin(ArithOp::Add, var("x"), Expr::int(1)),
            var("x"),
        );
        assert_eq!(
            bounded_validity(&succ, &xs, &Grid::new(-5, 5), &ctx).unwrap(),
            Validity::ValidOnGrid
        );

        let nonneg = Assertion::Cmp(CmpOp::Ge, var("x"), Expr::int(0));
        assert_eq!(
            bounded_validity(&nonneg, &xs, &Grid::new(-2, 2), &ctx).unwrap(),
            Validity::Counterexample(State::from_pairs([(id("x"), BigInt::from(-2))]))
        );

        let trivial = Assertion::implies(
            Assertion::<Identifier>::Const(true),
            Assertion::Cmp(CmpOp::Eq, Expr::int(1), Expr::int(1)),
        );
        assert!(
            bounded_validity(&trivial, &BTreeSet::new(), &Grid::new(0, 0), &ctx)
                .unwrap()
                .is_valid()
        );
    }

    #[test]
    fn lexicographic_first_counterexample() {
        let defs = SymbolTable::with_builtins();
        let ctx = EvalContext::new(&defs);
        // x < y fails first at x=-1,y=-1
        let lt = Assertion::Cmp(CmpOp::Lt, var("x"), var("y"));
        let xs = BTreeSet::from([id("x"), id("y")]);
        let Validity::Counterexample(s) =
            bounded_validity(&lt, &xs, &Grid::new(-1, 1), &ctx).unwrap()
        else {
            panic!("expected a counterexample");
        };
        assert_eq!(s.get(&id("x")), &BigInt::from(-1));
        assert_eq!(s.get(&id("y")), &BigInt::from(-1));

        // y > x with x fixed to 1 by an override: first failure is x=1,y=-1
        let grid = Grid::new(-1, 1).with_override(id("x"), 1, 1);
        let gt = Assertion::Cmp(CmpOp::Gt, var("y"), var("x"));
        let Validity::Counterexample(s) = bounded_validity(&gt, &xs, &grid, &ctx).unwrap() else {
            panic!("expected a counterexample");
        };
        assert_eq!(
            (s.get(&id("x")), s.get(&id("y"))),
            (&BigInt::from(1), &BigInt::from(-1))
        );
    }

    #[test]
    fn grid_states_enumerate_in_order() {
        let xs = BTreeSet::from([id("a"), id("b")]);
        let got: Vec<(i64, i64)> =
            GridStates::new(&xs, &Grid::new(0, 1).with_override(id("b"), 5, 7))
                .unwrap()
                .map(|s| {
                    let v = |n: &str| i64::try_from(s.get(&id(n))).unwrap();
                    (v("a"), v("b"))
                })
                .collect();
        assert_eq!(got, vec![(0, 5), (0, 6), (0, 7), (1, 5), (1, 6), (1, 7)]);
        assert_eq!(
            GridStates::<Identifier>::new(&BTreeSet::new(), &Grid::new(0, 0))
                .unwrap()
                .count(),
            1
        );
    }

    #[test]
    fn grid_cap_is_enforced() {
        let defs = SymbolTable::with_builtins();
        let ctx = EvalContext::new(&defs);
        let vars: BTreeSet<_> = ["a", "b", "c", "d", "e", "f", "g", "h"]
            .iter()
            .map(|n| id(n))
            .collect();
        let err =
            bounded_validity(&Assertion::Const(true), &vars, &Grid::new(-8, 8), &ctx).unwrap_err();
        assert!(matches!(err, CheckError::GridTooLarge { .. }));
        let mut g = Grid::new(0, 1);
        g.lo = 2;
        assert!(matches!(
            bounded_validity(&Assertion::Const(true), &vars, &g, &ctx),
            Err(CheckError::EmptyRange { .. })
        ));
    }
}
