//! Verification conditions by backward propagation, with loop invariants
//! as cut points.
//!
//! `wp(skip, ψ) = ψ`, `wp(x := e, ψ) = ψ[x/e]`, sequences compose, a
//! conditional yields `(b ⟹ wp(Ct, ψ)) ∧ (¬b ⟹ wp(Cf, ψ))`, and a loop
//! yields its invariant θ while emitting `θ ∧ b ⟹ wp(body, θ)` and
//! `θ ∧ ¬b ⟹ ψ`. Formulas are never simplified.

use std::fmt;

use serde::Serialize;

use crate::lang::{AnnCommand, Assertion, AstPath, Triple, Variable};
use crate::semantics::{bounded_validity, CheckError, EvalContext, Grid, Validity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VcRule {
    Precondition,
    WhilePreserve,
    WhileExit,
}

impl fmt::Display for VcRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VcRule::Precondition => "precondition",
            VcRule::WhilePreserve => "while-preserve",
            VcRule::WhileExit => "while-exit",
        })
    }
}

/// Which rule produced a condition, at which node, and where that node
/// sits in the source when known.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Origin {
    pub rule: VcRule,
    pub path: AstPath,
    pub location: Option<(u32, u32)>,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.location {
            Some((line, col)) => write!(f, "{} @ {line}:{col}", self.rule),
            None => write!(f, "{} @ {}", self.rule, self.path),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationCondition<V> {
    pub formula: Assertion<V>,
    pub origin: Origin,
}

impl<V: Variable> VerificationCondition<V> {
    /// `vc 3 [while-preserve @ 12:5]: formula`, numbered from 1.
    pub fn listing(&self, index: usize) -> String {
        format!("vc {} [{}]: {}", index + 1, self.origin, self.formula)
    }
}

fn loop_vc<V>(rule: VcRule, path: &AstPath, formula: Assertion<V>) -> VerificationCondition<V> {
    VerificationCondition {
        formula,
        origin: Origin {
            rule,
            path: path.clone(),
            location: None,
        },
    }
}

/// The precondition of `c` for `post`; loop conditions are pushed to `out`.
pub fn wp<V: Variable>(
    c: &AnnCommand<V>,
    post: &Assertion<V>,
    path: &AstPath,
    out: &mut Vec<VerificationCondition<V>>,
) -> Assertion<V> {
    match c {
        AnnCommand::Skip => post.clone(),
        AnnCommand::Assign(x, e) => post.subst(x, e),
        AnnCommand::Seq(a, b) => {
            let mid = wp(b, post, &path.child(1), out);
            wp(a, &mid, &path.child(0), out)
        }
        AnnCommand::If(b, t, f) => {
            let b = b.embed();
            let then_pre = wp(t, post, &path.child(0), out);
            let else_pre = wp(f, post, &path.child(1), out);
            Assertion::and(
                Assertion::implies(b.clone(), then_pre),
                Assertion::implies(Assertion::negate(b), else_pre),
            )
        }
        AnnCommand::While(b, inv, body) => {
            let b = b.embed();
            let body_pre = wp(body, inv, &path.child(0), out);
            out.push(loop_vc(
                VcRule::WhilePreserve,
                path,
                Assertion::implies(Assertion::and(inv.clone(), b.clone()), body_pre),
            ));
            out.push(loop_vc(
                VcRule::WhileExit,
                path,
                Assertion::implies(
                    Assertion::and(inv.clone(), Assertion::negate(b)),
                    post.clone(),
                ),
            ));
            inv.clone()
        }
    }
}

/// `pre ⟹ wp(C, post)` first, then the two conditions of every loop in
/// pre-order of the loops' positions.
pub fn vcs<V: Variable>(t: &Triple<V, AnnCommand<V>>) -> Vec<VerificationCondition<V>> {
    let mut loops = Vec::new();
    let root = AstPath::root();
    let weakest = wp(&t.program, &t.post, &root, &mut loops);
    loops.sort_by(|a, b| (&a.origin.path, a.origin.rule).cmp(&(&b.origin.path, b.origin.rule)));
    let mut all = vec![VerificationCondition {
        formula: Assertion::implies(t.pre.clone(), weakest),
        origin: Origin {
            rule: VcRule::Precondition,
            path: root,
            location: None,
        },
    }];
    all.extend(loops);
    all
}

/// Fills in source positions from a path lookup.
pub fn locate<V>(
    vcs: &mut [VerificationCondition<V>],
    lookup: impl Fn(&AstPath) -> Option<(u32, u32)>,
) {
    for vc in vcs {
        vc.origin.location = lookup(&vc.origin.path);
    }
}

/// Bounded verdict for each condition, over its own free variables.
pub fn verify_bounded<V: Variable>(
    vcs: &[VerificationCondition<V>],
    grid: &Grid,
    ctx: &EvalContext<'_>,
) -> Result<Vec<Validity<V>>, CheckError> {
    vcs.iter()
        .map(|vc| bounded_validity(&vc.formula, &vc.formula.free_vars(), grid, ctx))
        .collect()
}

/// A condition paired with its grid verdict.
pub type BoundedVerdict<V> = (VerificationCondition<V>, Validity<V>);

/// Bounded verdicts for a whole triple.
pub fn verify_triple_bounded<V: Variable>(
    t: &Triple<V, AnnCommand<V>>,
    grid: &Grid,
    ctx: &EvalContext<'_>,
) -> Result<Vec<BoundedVerdict<V>>, CheckError> {
    let conditions = vcs(t);
    let verdicts = verify_bounded(&conditions, grid, ctx)?;
    Ok(conditions.into_iter().zip(verdicts).collect())
}
