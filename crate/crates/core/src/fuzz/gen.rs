//! Seeded random programs, states, renamings and assertions.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::lang::{
    AnnCommand, ArithOp, Assertion, BoolExpr, CmpOp, Expr, Identifier, Renaming, SaVar, Variable,
    Version,
};
use crate::semantics::State;

/// Chance that a composite command position becomes a loop.
pub const DEFAULT_LOOP_PROBABILITY: f64 = 0.2;

/// Share of loops built from the terminating counter pattern
/// `while c < K do { ...; c := c + 1 }`.
const COUNTER_LOOP_SHARE: f64 = 0.7;

const NAMES: &[&str] = &["x", "y", "z", "w", "v", "u"];

const CMP_OPS: &[CmpOp] = &[
    CmpOp::Eq,
    CmpOp::Le,
    CmpOp::Lt,
    CmpOp::Ge,
    CmpOp::Gt,
    CmpOp::Ne,
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenParams {
    pub max_depth: u32,
    pub pool_size: usize,
    pub const_lo: i64,
    pub const_hi: i64,
    pub loop_probability: f64,
    /// Maximum number of conjuncts in a generated invariant.
    pub max_invariant_size: u32,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            max_depth: 4,
            pool_size: 3,
            const_lo: -3,
            const_hi: 3,
            loop_probability: DEFAULT_LOOP_PROBABILITY,
            max_invariant_size: 2,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenParamsError {
    #[error("maximum depth must be at least 1")]
    Depth,
    #[error("the variable pool must not be empty")]
    Pool,
    #[error("empty constant range [{0}, {1}]")]
    Constants(i64, i64),
    #[error("loop probability {0} is not in [0, 1]")]
    Probability(f64),
    #[error("maximum invariant size must be at least 1")]
    InvariantSize,
}

impl GenParams {
    pub fn validate(&self) -> Result<(), GenParamsError> {
        if self.max_depth == 0 {
            return Err(GenParamsError::Depth);
        }
        if self.pool_size == 0 {
            return Err(GenParamsError::Pool);
        }
        if self.const_lo > self.const_hi {
            return Err(GenParamsError::Constants(self.const_lo, self.const_hi));
        }
        if !(0.0..=1.0).contains(&self.loop_probability) {
            return Err(GenParamsError::Probability(self.loop_probability));
        }
        if self.max_invariant_size == 0 {
            return Err(GenParamsError::InvariantSize);
        }
        Ok(())
    }

    /// `x, y, z, w, v, u`, then `x6, x7, ...`.
    pub fn pool(&self) -> Vec<Identifier> {
        (0..self.pool_size)
            .map(|i| match NAMES.get(i) {
                Some(n) => Identifier::new(n),
                None => Identifier::new(&format!("x{i}")),
            })
            .collect()
    }
}

/// A random annotated program over the parameter pool.
pub fn gen_program<R: Rng>(p: &GenParams, rng: &mut R) -> AnnCommand<Identifier> {
    let pool = p.pool();
    Gen {
        p,
        rng,
        rich: false,
    }
    .command(&pool, p.max_depth)
}

/// A state over `vars` with values in the constant range widened by one.
pub fn gen_state<V: Variable, R: Rng>(p: &GenParams, vars: &[V], rng: &mut R) -> State<V> {
    State::from_pairs(vars.iter().map(|x| {
        (
            x.clone(),
            BigInt::from(rng.gen_range(p.const_lo - 1..=p.const_hi + 1)),
        )
    }))
}

/// A quantifier-free assertion without function applications.
pub fn gen_assertion<V: Variable, R: Rng>(
    p: &GenParams,
    vars: &[V],
    depth: u32,
    rng: &mut R,
) -> Assertion<V> {
    Gen {
        p,
        rng,
        rich: false,
    }
    .assertion(vars, depth)
}

/// An assertion that may use quantifiers and `fact`, for printing tests.
/// Binders are drawn from `binders`.
pub fn gen_rich_assertion<V: Variable, R: Rng>(
    p: &GenParams,
    vars: &[V],
    binders: &[V],
    depth: u32,
    rng: &mut R,
) -> Assertion<V> {
    Gen { p, rng, rich: true }.rich_assertion(vars, binders, depth)
}

/// Versioned variables over the first three pool names.
pub fn sa_pool(p: &GenParams) -> Vec<SaVar> {
    let versions: Vec<Version> = ["0", "1", "2", "1.0", "2.1"]
        .iter()
        .map(|v| v.parse().expect("literal version"))
        .collect();
    p.pool()
        .into_iter()
        .take(3)
        .flat_map(|x| {
            versions
                .iter()
                .map(move |v| SaVar::new(x.clone(), v.clone()))
        })
        .collect()
}

/// Up to four copy pairs over distinct variables of `vars`.
pub fn gen_renaming<R: Rng>(vars: &[SaVar], rng: &mut R) -> Renaming {
    let k = rng.gen_range(0..=4.min(vars.len() / 2));
    let picked: Vec<SaVar> = vars.choose_multiple(rng, 2 * k).cloned().collect();
    Renaming::new(picked.chunks(2).map(|p| (p[0].clone(), p[1].clone())))
        .expect("distinct by sampling")
}

/// A random loop-free program.
pub fn gen_loop_free<R: Rng>(p: &GenParams, rng: &mut R) -> AnnCommand<Identifier> {
    let p = GenParams {
        loop_probability: 0.0,
        ..p.clone()
    };
    gen_program(&p, rng)
}

struct Gen<'a, R> {
    p: &'a GenParams,
    rng: &'a mut R,
    rich: bool,
}

impl<R: Rng> Gen<'_, R> {
    fn constant(&mut self) -> BigInt {
        BigInt::from(self.rng.gen_range(self.p.const_lo..=self.p.const_hi))
    }

    fn pick<V: Clone>(&mut self, vars: &[V]) -> V {
        vars.choose(self.rng).expect("non-empty pool").clone()
    }

    fn command(&mut self, vars: &[Identifier], depth: u32) -> AnnCommand<Identifier> {
        if depth <= 1 {
            return if self.rng.gen_bool(0.2) {
                AnnCommand::Skip
            } else {
                self.assign(vars)
            };
        }
        if self.rng.gen_bool(self.p.loop_probability) {
            return self.while_loop(vars, depth);
        }
        match self.rng.gen_range(0..20) {
            0..=8 => AnnCommand::seq(self.command(vars, depth - 1), self.command(vars, depth - 1)),
            9..=13 => AnnCommand::If(
                self.condition(vars, 1),
                Box::new(self.command(vars, depth - 1)),
                Box::new(self.command(vars, depth - 1)),
            ),
            14..=18 => self.assign(vars),
            _ => AnnCommand::Skip,
        }
    }

    fn assign(&mut self, vars: &[Identifier]) -> AnnCommand<Identifier> {
        AnnCommand::Assign(self.pick(vars), self.expr(vars, 2))
    }

    fn while_loop(&mut self, vars: &[Identifier], depth: u32) -> AnnCommand<Identifier> {
        let inv = self.invariant(vars);
        if self.rng.gen_bool(COUNTER_LOOP_SHARE) {
            let c = self.pick(vars);
            let bound = Expr::int(self.rng.gen_range(0..=self.p.const_hi.max(0)));
            let step = AnnCommand::Assign(
                c.clone(),
                Expr::bin(ArithOp::Add, Expr::Var(c.clone()), Expr::int(1)),
            );
            let body = AnnCommand::seq(self.command(vars, depth - 1), step);
            AnnCommand::While(
                BoolExpr::cmp(CmpOp::Lt, Expr::Var(c), bound),
                inv,
                Box::new(body),
            )
        } else {
            AnnCommand::While(
                self.condition(vars, 1),
                inv,
                Box::new(self.command(vars, depth - 1)),
            )
        }
    }

    /// `true`, or a conjunction of bounds `x <= K`, `x >= K`, `x + y <= K`.
    fn invariant<V: Variable>(&mut self, vars: &[V]) -> Assertion<V> {
        let n = self.rng.gen_range(0..=self.p.max_invariant_size);
        let mut conjuncts = (0..n).map(|_| {
            let k = Expr::Int(self.constant());
            match self.rng.gen_range(0..3) {
                0 => Assertion::Cmp(CmpOp::Le, Expr::Var(self.pick(vars)), k),
                1 => Assertion::Cmp(CmpOp::Ge, Expr::Var(self.pick(vars)), k),
                _ => {
                    let sum = Expr::bin(
                        ArithOp::Add,
                        Expr::Var(self.pick(vars)),
                        Expr::Var(self.pick(vars)),
                    );
                    Assertion::Cmp(CmpOp::Le, sum, k)
                }
            }
        });
        let first = conjuncts.next();
        let rest: Vec<_> = conjuncts.collect();
        match first {
            None => Assertion::Const(true),
            Some(a) => rest.into_iter().fold(a, Assertion::and),
        }
    }

    /// Products always have a literal operand, which keeps programs linear.
    fn expr<V: Variable>(&mut self, vars: &[V], depth: u32) -> Expr<V> {
        if depth == 0 || self.rng.gen_bool(0.4) {
            return if self.rng.gen_bool(0.5) {
                Expr::Var(self.pick(vars))
            } else {
                Expr::Int(self.constant())
            };
        }
        if self.rich && self.rng.gen_bool(0.1) {
            return Expr::App(Identifier::new("fact"), vec![self.expr(vars, depth - 1)]);
        }
        match self.rng.gen_range(0..3) {
            0 => Expr::bin(
                ArithOp::Add,
                self.expr(vars, depth - 1),
                self.expr(vars, depth - 1),
            ),
            1 => Expr::bin(
                ArithOp::Sub,
                self.expr(vars, depth - 1),
                self.expr(vars, depth - 1),
            ),
            _ => {
                let k = Expr::Int(self.constant());
                let e = self.expr(vars, depth - 1);
                if self.rng.gen_bool(0.5) {
                    Expr::bin(ArithOp::Mul, k, e)
                } else {
                    Expr::bin(ArithOp::Mul, e, k)
                }
            }
        }
    }

    fn comparison<V: Variable>(&mut self, vars: &[V]) -> (CmpOp, Expr<V>, Expr<V>) {
        let op = *CMP_OPS.choose(self.rng).expect("non-empty");
        (op, self.expr(vars, 1), self.expr(vars, 1))
    }

    fn condition<V: Variable>(&mut self, vars: &[V], depth: u32) -> BoolExpr<V> {
        if depth == 0 || self.rng.gen_bool(0.5) {
            if self.rng.gen_bool(0.05) {
                return BoolExpr::Const(self.rng.gen_bool(0.5));
            }
            let (op, a, b) = self.comparison(vars);
            return BoolExpr::Cmp(op, a, b);
        }
        match self.rng.gen_range(0..3) {
            0 => BoolExpr::Not(Box::new(self.condition(vars, depth - 1))),
            1 => BoolExpr::And(
                Box::new(self.condition(vars, depth - 1)),
                Box::new(self.condition(vars, depth - 1)),
            ),
            _ => BoolExpr::Or(
                Box::new(self.condition(vars, depth - 1)),
                Box::new(self.condition(vars, depth - 1)),
            ),
        }
    }

    fn assertion<V: Variable>(&mut self, vars: &[V], depth: u32) -> Assertion<V> {
        if depth == 0 || self.rng.gen_bool(0.4) {
            if self.rng.gen_bool(0.05) {
                return Assertion::Const(self.rng.gen_bool(0.5));
            }
            let (op, a, b) = self.comparison(vars);
            return Assertion::Cmp(op, a, b);
        }
        match self.rng.gen_range(0..4) {
            0 => Assertion::negate(self.assertion(vars, depth - 1)),
            1 => Assertion::and(
                self.assertion(vars, depth - 1),
                self.assertion(vars, depth - 1),
            ),
            2 => Assertion::or(
                self.assertion(vars, depth - 1),
                self.assertion(vars, depth - 1),
            ),
            _ => Assertion::implies(
                self.assertion(vars, depth - 1),
                self.assertion(vars, depth - 1),
            ),
        }
    }

    fn rich_assertion<V: Variable>(
        &mut self,
        vars: &[V],
        binders: &[V],
        depth: u32,
    ) -> Assertion<V> {
        if depth > 0 && !binders.is_empty() && self.rng.gen_bool(0.2) {
            let x = self.pick(binders);
            let mut scope = vars.to_vec();
            scope.push(x.clone());
            let body = Box::new(self.rich_assertion(&scope, binders, depth - 1));
            return if self.rng.gen_bool(0.5) {
                Assertion::Forall(x, body)
            } else {
                Assertion::Exists(x, body)
            };
        }
        if depth == 0 || self.rng.gen_bool(0.3) {
            return self.assertion(vars, 0);
        }
        match self.rng.gen_range(0..4) {
            0 => Assertion::negate(self.rich_assertion(vars, binders, depth - 1)),
            1 => Assertion::and(
                self.rich_assertion(vars, binders, depth - 1),
                self.rich_assertion(vars, binders, depth - 1),
            ),
            2 => Assertion::or(
                self.rich_assertion(vars, binders, depth - 1),
                self.rich_assertion(vars, binders, depth - 1),
            ),
            _ => Assertion::implies(
                self.rich_assertion(vars, binders, depth - 1),
                self.rich_assertion(vars, binders, depth - 1),
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::Program;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn depth_one_is_a_leaf() {
        let p = GenParams {
            max_depth: 1,
            ..GenParams::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            assert!(matches!(
                gen_program(&p, &mut rng),
                AnnCommand::Skip | AnnCommand::Assign(..)
            ));
        }
    }

    #[test]
    fn fixed_seed_is_deterministic() {
        let p = GenParams::default();
        let a = gen_program(&p, &mut ChaCha8Rng::seed_from_u64(42));
        let b = gen_program(&p, &mut ChaCha8Rng::seed_from_u64(42));
        assert_eq!(a, b);
    }

    #[test]
    fn programs_stay_in_pool_and_depth() {
        let p = GenParams::default();
        let pool: std::collections::BTreeSet<_> = p.pool().into_iter().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let c = gen_program(&p, &mut rng);
            assert!(c.vars().is_subset(&pool));
            assert!(depth(&c) <= p.max_depth as usize, "{c}");
        }
    }

    // a counter loop's trailing increment belongs to the loop itself
    fn depth(c: &AnnCommand<Identifier>) -> usize {
        match c {
            AnnCommand::Skip | AnnCommand::Assign(..) => 1,
            AnnCommand::While(BoolExpr::Cmp(CmpOp::Lt, Expr::Var(x), _), _, body) => {
                match &**body {
                    AnnCommand::Seq(a, step) if matches!(&**step, AnnCommand::Assign(y, _) if y == x) => {
                        1 + depth(a)
                    }
                    other => 1 + depth(other),
                }
            }
            AnnCommand::Seq(a, b) | AnnCommand::If(_, a, b) => 1 + depth(a).max(depth(b)),
            AnnCommand::While(_, _, b) => 1 + depth(b),
        }
    }

    #[test]
    fn renamings_are_valid_and_params_checked() {
        let p = GenParams::default();
        let pool = sa_pool(&p);
        assert_eq!(pool.len(), 15);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            assert!(gen_renaming(&pool, &mut rng).is_valid());
        }
        assert_eq!(
            GenParams {
                max_depth: 0,
                ..p.clone()
            }
            .validate(),
            Err(GenParamsError::Depth)
        );
        assert_eq!(
            GenParams {
                pool_size: 0,
                ..p.clone()
            }
            .validate(),
            Err(GenParamsError::Pool)
        );
        assert!(p.validate().is_ok());
        assert_eq!(
            GenParams { pool_size: 8, ..p }.pool()[7],
            Identifier::new("x7")
        );
    }
}
