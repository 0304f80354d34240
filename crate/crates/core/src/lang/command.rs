//! Plain, annotated and single-assignment command trees.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use super::expr::{Assertion, BoolExpr, Expr};
use super::ident::{SaVar, Variable};

/// Unannotated While programs; what the interpreter runs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Command<V> {
    Skip,
    Assign(V, Expr<V>),
    Seq(Box<Command<V>>, Box<Command<V>>),
    If(BoolExpr<V>, Box<Command<V>>, Box<Command<V>>),
    While(BoolExpr<V>, Box<Command<V>>),
}

/// While programs whose loops carry an invariant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AnnCommand<V> {
    Skip,
    Assign(V, Expr<V>),
    Seq(Box<AnnCommand<V>>, Box<AnnCommand<V>>),
    If(BoolExpr<V>, Box<AnnCommand<V>>, Box<AnnCommand<V>>),
    While(BoolExpr<V>, Assertion<V>, Box<AnnCommand<V>>),
}

/// Annotated single-assignment programs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SaCommand {
    Skip,
    Assign(SaVar, Expr<SaVar>),
    Seq(Box<SaCommand>, Box<SaCommand>),
    If(BoolExpr<SaVar>, Box<SaCommand>, Box<SaCommand>),
    For(Box<ForLoop>),
}

/// `for (init; cond; update) invariant inv do { body }`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ForLoop {
    pub init: Renaming,
    pub cond: BoolExpr<SaVar>,
    pub update: Renaming,
    pub invariant: Assertion<SaVar>,
    pub body: SaCommand,
}

impl<V: Variable> AnnCommand<V> {
    pub fn seq(a: AnnCommand<V>, b: AnnCommand<V>) -> Self {
        AnnCommand::Seq(Box::new(a), Box::new(b))
    }

    /// Right-nested sequence; `Skip` when empty.
    pub fn seq_all(cmds: impl IntoIterator<Item = AnnCommand<V>>) -> Self {
        let mut cmds: Vec<_> = cmds.into_iter().collect();
        let Some(mut acc) = cmds.pop() else {
            return AnnCommand::Skip;
        };
        while let Some(c) = cmds.pop() {
            acc = AnnCommand::seq(c, acc);
        }
        acc
    }

    /// Drops every invariant annotation.
    pub fn erase(&self) -> Command<V> {
        match self {
            AnnCommand::Skip => Command::Skip,
            AnnCommand::Assign(x, e) => Command::Assign(x.clone(), e.clone()),
            AnnCommand::Seq(a, b) => Command::Seq(Box::new(a.erase()), Box::new(b.erase())),
            AnnCommand::If(b, t, f) => {
                Command::If(b.clone(), Box::new(t.erase()), Box::new(f.erase()))
            }
            AnnCommand::While(b, _, body) => Command::While(b.clone(), Box::new(body.erase())),
        }
    }

    pub fn while_count(&self) -> usize {
        match self {
            AnnCommand::Skip | AnnCommand::Assign(..) => 0,
            AnnCommand::Seq(a, b) | AnnCommand::If(_, a, b) => a.while_count() + b.while_count(),
            AnnCommand::While(_, _, body) => 1 + body.while_count(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            AnnCommand::Skip | AnnCommand::Assign(..) => 1,
            AnnCommand::Seq(a, b) | AnnCommand::If(_, a, b) => 1 + a.size() + b.size(),
            AnnCommand::While(_, _, body) => 1 + body.size(),
        }
    }
}

impl SaCommand {
    pub fn seq(a: SaCommand, b: SaCommand) -> Self {
        SaCommand::Seq(Box::new(a), Box::new(b))
    }

    /// Right-nested sequence; `Skip` when empty.
    pub fn seq_all(cmds: impl IntoIterator<Item = SaCommand>) -> Self {
        let mut cmds: Vec<_> = cmds.into_iter().collect();
        let Some(mut acc) = cmds.pop() else {
            return SaCommand::Skip;
        };
        while let Some(c) = cmds.pop() {
            acc = SaCommand::seq(c, acc);
        }
        acc
    }

    pub fn for_count(&self) -> usize {
        match self {
            SaCommand::Skip | SaCommand::Assign(..) => 0,
            SaCommand::Seq(a, b) | SaCommand::If(_, a, b) => a.for_count() + b.for_count(),
            SaCommand::For(l) => 1 + l.body.for_count(),
        }
    }
}

/// Occurring and assigned variables of a program.
pub trait Program {
    type Var: Variable;

    fn collect_vars(&self, out: &mut BTreeSet<Self::Var>);
    fn collect_assd(&self, out: &mut BTreeSet<Self::Var>);

    /// Variables occurring in the program, annotation free variables included.
    fn vars(&self) -> BTreeSet<Self::Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    /// Variables assigned by the program.
    fn assd(&self) -> BTreeSet<Self::Var> {
        let mut out = BTreeSet::new();
        self.collect_assd(&mut out);
        out
    }
}

impl<V: Variable> Program for Command<V> {
    type Var = V;

    fn collect_vars(&self, out: &mut BTreeSet<V>) {
        match self {
            Command::Skip => {}
            Command::Assign(x, e) => {
                out.insert(x.clone());
                e.collect_vars(out);
            }
            Command::Seq(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Command::If(c, a, b) => {
                c.collect_vars(out);
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Command::While(c, body) => {
                c.collect_vars(out);
                body.collect_vars(out);
            }
        }
    }

    fn collect_assd(&self, out: &mut BTreeSet<V>) {
        match self {
            Command::Skip => {}
            Command::Assign(x, _) => {
                out.insert(x.clone());
            }
            Command::Seq(a, b) | Command::If(_, a, b) => {
                a.collect_assd(out);
                b.collect_assd(out);
            }
            Command::While(_, body) => body.collect_assd(out),
        }
    }
}

impl<V: Variable> Program for AnnCommand<V> {
    type Var = V;

    fn collect_vars(&self, out: &mut BTreeSet<V>) {
        match self {
            AnnCommand::Skip => {}
            AnnCommand::Assign(x, e) => {
                out.insert(x.clone());
                e.collect_vars(out);
            }
            AnnCommand::Seq(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            AnnCommand::If(c, a, b) => {
                c.collect_vars(out);
                a.collect_vars(out);
                b.collect_vars(out);
            }
            AnnCommand::While(c, inv, body) => {
                c.collect_vars(out);
                inv.collect_free_vars(out);
                body.collect_vars(out);
            }
        }
    }

    fn collect_assd(&self, out: &mut BTreeSet<V>) {
        match self {
            AnnCommand::Skip => {}
            AnnCommand::Assign(x, _) => {
                out.insert(x.clone());
            }
            AnnCommand::Seq(a, b) | AnnCommand::If(_, a, b) => {
                a.collect_assd(out);
                b.collect_assd(out);
            }
            AnnCommand::While(_, _, body) => body.collect_assd(out),
        }
    }
}

impl Program for SaCommand {
    type Var = SaVar;

    fn collect_vars(&self, out: &mut BTreeSet<SaVar>) {
        match self {
            SaCommand::Skip => {}
            SaCommand::Assign(x, e) => {
                out.insert(x.clone());
                e.collect_vars(out);
            }
            SaCommand::Seq(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            SaCommand::If(c, a, b) => {
                c.collect_vars(out);
                a.collect_vars(out);
                b.collect_vars(out);
            }
            // the update renaming is deliberately not part of the occurring set
            SaCommand::For(l) => {
                l.init.collect_vars(out);
                l.cond.collect_vars(out);
                l.invariant.collect_free_vars(out);
                l.body.collect_vars(out);
            }
        }
    }

    fn collect_assd(&self, out: &mut BTreeSet<SaVar>) {
        match self {
            SaCommand::Skip => {}
            SaCommand::Assign(x, _) => {
                out.insert(x.clone());
            }
            SaCommand::Seq(a, b) | SaCommand::If(_, a, b) => {
                a.collect_assd(out);
                b.collect_assd(out);
            }
            SaCommand::For(l) => {
                out.extend(l.init.targets().cloned());
                l.body.collect_assd(out);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenamingError {
    #[error("variable {0} occurs more than once in a renaming")]
    Repeated(SaVar),
}

/// A block of copy assignments `x1 := y1; ...; xn := yn` with all
/// variables distinct.
///
/// Kept sorted by target (base name, then version). Doubles as the finite
/// map from targets to sources.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Renaming {
    pairs: Vec<(SaVar, SaVar)>,
}

impl Renaming {
    /// Builds a renaming from `(target, source)` pairs in any order.
    pub fn new(pairs: impl IntoIterator<Item = (SaVar, SaVar)>) -> Result<Self, RenamingError> {
        let mut pairs: Vec<_> = pairs.into_iter().collect();
        let mut seen = BTreeSet::new();
        for (t, s) in &pairs {
            for v in [t, s] {
                if !seen.insert(v.clone()) {
                    return Err(RenamingError::Repeated(v.clone()));
                }
            }
        }
        pairs.sort();
        Ok(Renaming { pairs })
    }

    pub fn empty() -> Self {
        Renaming::default()
    }

    pub fn pairs(&self) -> &[(SaVar, SaVar)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn targets(&self) -> impl Iterator<Item = &SaVar> {
        self.pairs.iter().map(|(t, _)| t)
    }

    pub fn sources(&self) -> impl Iterator<Item = &SaVar> {
        self.pairs.iter().map(|(_, s)| s)
    }

    /// `dom(R)`: the assigned variables.
    pub fn domain(&self) -> BTreeSet<SaVar> {
        self.targets().cloned().collect()
    }

    /// `rng(R)`: the copied-from variables.
    pub fn range(&self) -> BTreeSet<SaVar> {
        self.sources().cloned().collect()
    }

    pub fn lookup(&self, target: &SaVar) -> Option<&SaVar> {
        self.pairs
            .binary_search_by(|(t, _)| t.cmp(target))
            .ok()
            .map(|i| &self.pairs[i].1)
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<SaVar>) {
        for (t, s) in &self.pairs {
            out.insert(t.clone());
            out.insert(s.clone());
        }
    }

    /// True when the distinctness condition holds.
    pub fn is_valid(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.pairs
            .iter()
            .all(|(t, s)| seen.insert(t) && seen.insert(s))
    }

    /// The renaming with the roles of targets and sources swapped.
    pub fn inverse(&self) -> Renaming {
        let mut pairs: Vec<_> = self
            .pairs
            .iter()
            .map(|(t, s)| (s.clone(), t.clone()))
            .collect();
        pairs.sort();
        Renaming { pairs }
    }

    /// Substitution map `target ↦ source`.
    pub fn as_substitution(&self) -> BTreeMap<SaVar, Expr<SaVar>> {
        self.pairs
            .iter()
            .map(|(t, s)| (t.clone(), Expr::Var(s.clone())))
            .collect()
    }

    pub fn assignments(&self) -> impl Iterator<Item = (SaVar, Expr<SaVar>)> + '_ {
        self.pairs
            .iter()
            .map(|(t, s)| (t.clone(), Expr::Var(s.clone())))
    }

    /// The renaming as an annotated command; `skip` when empty.
    pub fn to_ann_command(&self) -> AnnCommand<SaVar> {
        AnnCommand::seq_all(self.assignments().map(|(t, e)| AnnCommand::Assign(t, e)))
    }

    /// The renaming as single-assignment code; `skip` when empty.
    pub fn to_sa_command(&self) -> SaCommand {
        SaCommand::seq_all(self.assignments().map(|(t, e)| SaCommand::Assign(t, e)))
    }

    pub fn to_command(&self) -> Command<SaVar> {
        self.to_ann_command().erase()
    }
}

impl fmt::Debug for Renaming {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (t, s)) in self.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t} := {s}")?;
        }
        f.write_str("]")
    }
}

/// Position of a subterm: child indices from the root.
///
/// `Seq`: 0 first, 1 second. `If`: 0 then, 1 else. `While`/`For`: 0 body.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AstPath(pub Vec<u8>);

impl AstPath {
    pub fn root() -> Self {
        AstPath(Vec::new())
    }

    pub fn child(&self, i: u8) -> Self {
        let mut v = self.0.clone();
        v.push(i);
        AstPath(v)
    }
}

impl fmt::Display for AstPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("/");
        }
        for i in &self.0 {
            write!(f, "/{i}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::expr::{ArithOp, CmpOp};
    use crate::lang::ident::{Identifier, Version};

    fn id(n: &str) -> Identifier {
        Identifier::new(n)
    }

    fn v(n: &str) -> Expr<Identifier> {
        Expr::Var(id(n))
    }

    fn sv(s: &str) -> SaVar {
        SaVar::parse(s).unwrap()
    }

    fn assign(x: &str, e: Expr<Identifier>) -> AnnCommand<Identifier> {
        AnnCommand::Assign(id(x), e)
    }

    #[test]
    fn vars_and_assd_of_small_programs() {
        let skip: AnnCommand<Identifier> = AnnCommand::Skip;
        assert!(skip.vars().is_empty());
        assert!(skip.assd().is_empty());

        let inc = assign("x", Expr::bin(ArithOp::Add, v("x"), Expr::int(1)));
        assert_eq!(inc.vars(), [id("x")].into_iter().collect());

        let branch = AnnCommand::If(
            BoolExpr::Const(true),
            Box::new(assign("x", Expr::int(1))),
            Box::new(assign("y", Expr::int(2))),
        );
        assert_eq!(branch.assd(), [id("x"), id("y")].into_iter().collect());
    }

    #[test]
    fn while_vars_include_invariant() {
        // while i <= n inv f = fact(i-1) && i <= n+1 do { f := f*i; i := i+1 }
        let inv = Assertion::and(
            Assertion::Cmp(
                CmpOp::Eq,
                v("f"),
                Expr::App(
                    id("fact"),
                    vec![Expr::bin(ArithOp::Sub, v("i"), Expr::int(1))],
                ),
            ),
            Assertion::Cmp(
                CmpOp::Le,
                v("i"),
                Expr::bin(ArithOp::Add, v("n"), Expr::int(1)),
            ),
        );
        let body = AnnCommand::seq(
            assign("f", Expr::bin(ArithOp::Mul, v("f"), v("i"))),
            assign("i", Expr::bin(ArithOp::Add, v("i"), Expr::int(1))),
        );
        let w = AnnCommand::While(
            BoolExpr::cmp(CmpOp::Le, v("i"), v("n")),
            inv,
            Box::new(body),
        );
        assert_eq!(w.vars(), [id("f"), id("i"), id("n")].into_iter().collect());
        assert_eq!(w.assd(), [id("f"), id("i")].into_iter().collect());
        assert_eq!(w.erase().assd(), w.assd());
    }

    #[test]
    fn erase_drops_invariants() {
        let w = AnnCommand::While(
            BoolExpr::Const(false),
            Assertion::Const(true),
            Box::new(AnnCommand::<Identifier>::Skip),
        );
        assert_eq!(
            w.erase(),
            Command::While(BoolExpr::Const(false), Box::new(Command::Skip))
        );
        assert_eq!(AnnCommand::<Identifier>::Skip.erase(), Command::Skip);
    }

    #[test]
    fn renaming_invariants() {
        let r = Renaming::new([(sv("x_1"), sv("x_0")), (sv("a_1"), sv("a_0"))]).unwrap();
        assert_eq!(r.pairs()[0].0, sv("a_1"));
        assert_eq!(r.lookup(&sv("x_1")), Some(&sv("x_0")));
        assert!(r.is_valid());
        assert_eq!(r.inverse().lookup(&sv("x_0")), Some(&sv("x_1")));

        assert!(Renaming::new([(sv("x_1"), sv("x_0")), (sv("x_2"), sv("x_0"))]).is_err());
        assert!(Renaming::new([(sv("x_1"), sv("x_0")), (sv("x_0"), sv("y_0"))]).is_err());
        assert!(Renaming::new([(sv("x_1"), sv("x_1"))]).is_err());
    }

    #[test]
    fn renaming_order_uses_version_after_base() {
        let r = Renaming::new([
            (
                SaVar::new(id("j"), Version::new(vec![1, 2, 0]).unwrap()),
                sv("j_2.0"),
            ),
            (
                SaVar::new(id("j"), Version::new(vec![1, 0]).unwrap()),
                sv("j_0"),
            ),
        ])
        .unwrap();
        assert_eq!(r.pairs()[0].0, sv("j_1.0"));
        assert_eq!(r.pairs()[1].0, sv("j_1.2.0"));
    }

    #[test]
    fn sa_for_vars_skip_update() {
        let l = ForLoop {
            init: Renaming::new([(sv("x_1.0"), sv("x_0"))]).unwrap(),
            cond: BoolExpr::cmp(CmpOp::Lt, Expr::Var(sv("x_1.0")), Expr::int(3)),
            update: Renaming::new([(sv("x_1.0"), sv("x_2.0"))]).unwrap(),
            invariant: Assertion::Const(true),
            body: SaCommand::Assign(
                sv("x_2.0"),
                Expr::bin(ArithOp::Add, Expr::Var(sv("x_1.0")), Expr::int(1)),
            ),
        };
        let c = SaCommand::For(Box::new(l));
        assert_eq!(
            c.vars(),
            [sv("x_0"), sv("x_1.0"), sv("x_2.0")].into_iter().collect()
        );
        assert_eq!(c.assd(), [sv("x_1.0"), sv("x_2.0")].into_iter().collect());
    }

    #[test]
    fn ast_path_display() {
        assert_eq!(AstPath::root().to_string(), "/");
        assert_eq!(AstPath::root().child(1).child(0).to_string(), "/1/0");
    }
}
