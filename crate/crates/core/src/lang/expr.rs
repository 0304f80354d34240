//! Integer expressions, boolean conditions and first-order assertions.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use super::ident::{Identifier, Variable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr<V> {
    Int(BigInt),
    Var(V),
    Bin(ArithOp, Box<Expr<V>>, Box<Expr<V>>),
    /// Application of a declared function symbol.
    App(Identifier, Vec<Expr<V>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Le,
    Lt,
    Ge,
    Gt,
    Ne,
}

impl CmpOp {
    pub fn holds<T: Ord>(self, a: &T, b: &T) -> bool {
        match self {
            CmpOp::Eq => a == b,
            CmpOp::Le => a <= b,
            CmpOp::Lt => a < b,
            CmpOp::Ge => a >= b,
            CmpOp::Gt => a > b,
            CmpOp::Ne => a != b,
        }
    }
}

/// Program conditions: comparisons closed under the connectives.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BoolExpr<V> {
    Const(bool),
    Cmp(CmpOp, Expr<V>, Expr<V>),
    Not(Box<BoolExpr<V>>),
    And(Box<BoolExpr<V>>, Box<BoolExpr<V>>),
    Or(Box<BoolExpr<V>>, Box<BoolExpr<V>>),
}

/// First-order formulas over program variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Assertion<V> {
    Const(bool),
    Cmp(CmpOp, Expr<V>, Expr<V>),
    Not(Box<Assertion<V>>),
    And(Box<Assertion<V>>, Box<Assertion<V>>),
    Or(Box<Assertion<V>>, Box<Assertion<V>>),
    Implies(Box<Assertion<V>>, Box<Assertion<V>>),
    Forall(V, Box<Assertion<V>>),
    Exists(V, Box<Assertion<V>>),
}

impl<V: Variable> Expr<V> {
    pub fn int(n: i64) -> Self {
        Expr::Int(BigInt::from(n))
    }

    pub fn var(v: V) -> Self {
        Expr::Var(v)
    }

    pub fn bin(op: ArithOp, a: Expr<V>, b: Expr<V>) -> Self {
        Expr::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<V>) {
        match self {
            Expr::Int(_) => {}
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Bin(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<V> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_functions(&self, out: &mut BTreeSet<Identifier>) {
        match self {
            Expr::Int(_) | Expr::Var(_) => {}
            Expr::Bin(_, a, b) => {
                a.collect_functions(out);
                b.collect_functions(out);
            }
            Expr::App(f, args) => {
                out.insert(f.clone());
                args.iter().for_each(|a| a.collect_functions(out));
            }
        }
    }

    pub fn map_vars<W>(&self, f: &impl Fn(&V) -> W) -> Expr<W> {
        match self {
            Expr::Int(n) => Expr::Int(n.clone()),
            Expr::Var(v) => Expr::Var(f(v)),
            Expr::Bin(op, a, b) => Expr::Bin(*op, Box::new(a.map_vars(f)), Box::new(b.map_vars(f))),
            Expr::App(g, args) => {
                Expr::App(g.clone(), args.iter().map(|a| a.map_vars(f)).collect())
            }
        }
    }

    /// Simultaneous replacement of variables by expressions.
    pub fn subst_many(&self, map: &BTreeMap<V, Expr<V>>) -> Expr<V> {
        match self {
            Expr::Int(_) => self.clone(),
            Expr::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Expr::Bin(op, a, b) => Expr::Bin(
                *op,
                Box::new(a.subst_many(map)),
                Box::new(b.subst_many(map)),
            ),
            Expr::App(g, args) => {
                Expr::App(g.clone(), args.iter().map(|a| a.subst_many(map)).collect())
            }
        }
    }

    pub fn subst(&self, x: &V, e: &Expr<V>) -> Expr<V> {
        self.subst_many(&BTreeMap::from([(x.clone(), e.clone())]))
    }
}

impl<V: Variable> BoolExpr<V> {
    pub fn cmp(op: CmpOp, a: Expr<V>, b: Expr<V>) -> Self {
        BoolExpr::Cmp(op, a, b)
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<V>) {
        match self {
            BoolExpr::Const(_) => {}
            BoolExpr::Cmp(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            BoolExpr::Not(b) => b.collect_vars(out),
            BoolExpr::And(a, b) | BoolExpr::Or(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<V> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_functions(&self, out: &mut BTreeSet<Identifier>) {
        self.embed().collect_functions(out)
    }

    pub fn map_vars<W>(&self, f: &impl Fn(&V) -> W) -> BoolExpr<W> {
        match self {
            BoolExpr::Const(c) => BoolExpr::Const(*c),
            BoolExpr::Cmp(op, a, b) => BoolExpr::Cmp(*op, a.map_vars(f), b.map_vars(f)),
            BoolExpr::Not(b) => BoolExpr::Not(Box::new(b.map_vars(f))),
            BoolExpr::And(a, b) => BoolExpr::And(Box::new(a.map_vars(f)), Box::new(b.map_vars(f))),
            BoolExpr::Or(a, b) => BoolExpr::Or(Box::new(a.map_vars(f)), Box::new(b.map_vars(f))),
        }
    }

    pub fn subst_many(&self, map: &BTreeMap<V, Expr<V>>) -> BoolExpr<V> {
        match self {
            BoolExpr::Const(c) => BoolExpr::Const(*c),
            BoolExpr::Cmp(op, a, b) => BoolExpr::Cmp(*op, a.subst_many(map), b.subst_many(map)),
            BoolExpr::Not(b) => BoolExpr::Not(Box::new(b.subst_many(map))),
            BoolExpr::And(a, b) => {
                BoolExpr::And(Box::new(a.subst_many(map)), Box::new(b.subst_many(map)))
            }
            BoolExpr::Or(a, b) => {
                BoolExpr::Or(Box::new(a.subst_many(map)), Box::new(b.subst_many(map)))
            }
        }
    }

    /// The embedding of a condition into the assertion language.
    pub fn embed(&self) -> Assertion<V> {
        match self {
            BoolExpr::Const(c) => Assertion::Const(*c),
            BoolExpr::Cmp(op, a, b) => Assertion::Cmp(*op, a.clone(), b.clone()),
            BoolExpr::Not(b) => Assertion::Not(Box::new(b.embed())),
            BoolExpr::And(a, b) => Assertion::And(Box::new(a.embed()), Box::new(b.embed())),
            BoolExpr::Or(a, b) => Assertion::Or(Box::new(a.embed()), Box::new(b.embed())),
        }
    }
}

impl<V: Variable> Assertion<V> {
    pub fn and(a: Assertion<V>, b: Assertion<V>) -> Self {
        Assertion::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Assertion<V>, b: Assertion<V>) -> Self {
        Assertion::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Assertion<V>, b: Assertion<V>) -> Self {
        Assertion::Implies(Box::new(a), Box::new(b))
    }

    pub fn negate(a: Assertion<V>) -> Self {
        Assertion::Not(Box::new(a))
    }

    pub fn free_vars(&self) -> BTreeSet<V> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(&mut out);
        out
    }

    pub fn collect_free_vars(&self, out: &mut BTreeSet<V>) {
        match self {
            Assertion::Const(_) => {}
            Assertion::Cmp(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Assertion::Not(a) => a.collect_free_vars(out),
            Assertion::And(a, b) | Assertion::Or(a, b) | Assertion::Implies(a, b) => {
                a.collect_free_vars(out);
                b.collect_free_vars(out);
            }
            Assertion::Forall(z, body) | Assertion::Exists(z, body) => {
                let mut inner = body.free_vars();
                inner.remove(z);
                out.extend(inner);
            }
        }
    }

    pub fn collect_functions(&self, out: &mut BTreeSet<Identifier>) {
        match self {
            Assertion::Const(_) => {}
            Assertion::Cmp(_, a, b) => {
                a.collect_functions(out);
                b.collect_functions(out);
            }
            Assertion::Not(a) | Assertion::Forall(_, a) | Assertion::Exists(_, a) => {
                a.collect_functions(out)
            }
            Assertion::And(a, b) | Assertion::Or(a, b) | Assertion::Implies(a, b) => {
                a.collect_functions(out);
                b.collect_functions(out);
            }
        }
    }

    pub fn has_quantifier(&self) -> bool {
        match self {
            Assertion::Const(_) | Assertion::Cmp(..) => false,
            Assertion::Not(a) => a.has_quantifier(),
            Assertion::And(a, b) | Assertion::Or(a, b) | Assertion::Implies(a, b) => {
                a.has_quantifier() || b.has_quantifier()
            }
            Assertion::Forall(..) | Assertion::Exists(..) => true,
        }
    }

    /// Renames every variable occurrence, binders included.
    ///
    /// Capture-free whenever `f` is injective.
    pub fn map_vars<W>(&self, f: &impl Fn(&V) -> W) -> Assertion<W> {
        match self {
            Assertion::Const(c) => Assertion::Const(*c),
            Assertion::Cmp(op, a, b) => Assertion::Cmp(*op, a.map_vars(f), b.map_vars(f)),
            Assertion::Not(a) => Assertion::Not(Box::new(a.map_vars(f))),
            Assertion::And(a, b) => {
                Assertion::And(Box::new(a.map_vars(f)), Box::new(b.map_vars(f)))
            }
            Assertion::Or(a, b) => Assertion::Or(Box::new(a.map_vars(f)), Box::new(b.map_vars(f))),
            Assertion::Implies(a, b) => {
                Assertion::Implies(Box::new(a.map_vars(f)), Box::new(b.map_vars(f)))
            }
            Assertion::Forall(z, a) => Assertion::Forall(f(z), Box::new(a.map_vars(f))),
            Assertion::Exists(z, a) => Assertion::Exists(f(z), Box::new(a.map_vars(f))),
        }
    }

    /// `self[x/e]`, capture-avoiding.
    pub fn subst(&self, x: &V, e: &Expr<V>) -> Assertion<V> {
        self.subst_many(&BTreeMap::from([(x.clone(), e.clone())]))
    }

    /// Simultaneous capture-avoiding substitution.
    ///
    /// A binder is renamed only when it would capture a variable of a
    /// replacement that actually gets inserted under it.
    pub fn subst_many(&self, map: &BTreeMap<V, Expr<V>>) -> Assertion<V> {
        if map.is_empty() {
            return self.clone();
        }
        match self {
            Assertion::Const(c) => Assertion::Const(*c),
            Assertion::Cmp(op, a, b) => Assertion::Cmp(*op, a.subst_many(map), b.subst_many(map)),
            Assertion::Not(a) => Assertion::Not(Box::new(a.subst_many(map))),
            Assertion::And(a, b) => {
                Assertion::And(Box::new(a.subst_many(map)), Box::new(b.subst_many(map)))
            }
            Assertion::Or(a, b) => {
                Assertion::Or(Box::new(a.subst_many(map)), Box::new(b.subst_many(map)))
            }
            Assertion::Implies(a, b) => {
                Assertion::Implies(Box::new(a.subst_many(map)), Box::new(b.subst_many(map)))
            }
            Assertion::Forall(z, body) => {
                let (z, body) = subst_under_binder(z, body, map);
                Assertion::Forall(z, Box::new(body))
            }
            Assertion::Exists(z, body) => {
                let (z, body) = subst_under_binder(z, body, map);
                Assertion::Exists(z, Box::new(body))
            }
        }
    }

    /// `Some` when the assertion is inside the condition sublanguage.
    pub fn to_bool_expr(&self) -> Option<BoolExpr<V>> {
        Some(match self {
            Assertion::Const(c) => BoolExpr::Const(*c),
            Assertion::Cmp(op, a, b) => BoolExpr::Cmp(*op, a.clone(), b.clone()),
            Assertion::Not(a) => BoolExpr::Not(Box::new(a.to_bool_expr()?)),
            Assertion::And(a, b) => {
                BoolExpr::And(Box::new(a.to_bool_expr()?), Box::new(b.to_bool_expr()?))
            }
            Assertion::Or(a, b) => {
                BoolExpr::Or(Box::new(a.to_bool_expr()?), Box::new(b.to_bool_expr()?))
            }
            Assertion::Implies(..) | Assertion::Forall(..) | Assertion::Exists(..) => return None,
        })
    }
}

fn subst_under_binder<V: Variable>(
    z: &V,
    body: &Assertion<V>,
    map: &BTreeMap<V, Expr<V>>,
) -> (V, Assertion<V>) {
    let body_fv = body.free_vars();
    let live: BTreeMap<V, Expr<V>> = map
        .iter()
        .filter(|(k, _)| *k != z && body_fv.contains(*k))
        .map(|(k, e)| (k.clone(), e.clone()))
        .collect();
    if live.is_empty() {
        return (z.clone(), body.clone());
    }
    let mut inserted = BTreeSet::new();
    for e in live.values() {
        e.collect_vars(&mut inserted);
    }
    if !inserted.contains(z) {
        return (z.clone(), body.subst_many(&live));
    }
    let mut avoid = inserted;
    avoid.extend(body_fv);
    avoid.extend(live.keys().cloned());
    avoid.insert(z.clone());
    let fresh = z.fresh_variant(&avoid);
    let renamed = body.subst_many(&BTreeMap::from([(z.clone(), Expr::Var(fresh.clone()))]));
    (fresh, renamed.subst_many(&live))
}
