//! Syntactic restrictions on single-assignment programs.

use std::collections::BTreeSet;
use std::fmt;

use super::command::{AstPath, Program, SaCommand};
use super::expr::Assertion;
use super::ident::SaVar;

/// The restriction a subterm breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SaRule {
    /// `x := e` with `x` occurring in `e`.
    AssignReadsTarget,
    /// `C1; C2` where `C2` assigns something `C1` mentions.
    SeqOverlap,
    /// `if b ...` where a branch assigns a variable of `b`.
    IfConditionAssigned,
    /// A loop renaming repeats a variable.
    ForRenamingInvalid,
    /// Initialisation and update renamings assign different variables.
    ForInitUpdateMismatch,
    /// The update renaming copies from a variable the body never assigns.
    ForUpdateRange,
    /// The body assigns a variable of the initialisation, condition or invariant.
    ForBodyClobbers,
}

impl fmt::Display for SaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SaRule::AssignReadsTarget => "assign: target occurs in its right-hand side",
            SaRule::SeqOverlap => "seq: second command assigns a variable of the first",
            SaRule::IfConditionAssigned => "if: a branch assigns a variable of the condition",
            SaRule::ForRenamingInvalid => "for: init/update is not a renaming",
            SaRule::ForInitUpdateMismatch => "for: init and update assign different variables",
            SaRule::ForUpdateRange => "for: update reads a variable the body does not assign",
            SaRule::ForBodyClobbers => {
                "for: body assigns a variable of init, condition or invariant"
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub rule: SaRule,
    pub path: AstPath,
    pub offending: BTreeSet<SaVar>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {} {{", self.rule, self.path)?;
        for (i, v) in self.offending.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl std::error::Error for Violation {}

/// Checks the single-assignment restrictions; reports the first violation
/// in pre-order.
pub fn check_sa_wellformed(c: &SaCommand) -> Result<(), Violation> {
    let mut out = Vec::new();
    walk(c, &AstPath::root(), &mut out, true);
    match out.into_iter().next() {
        Some(v) => Err(v),
        None => Ok(()),
    }
}

/// Every violation, in pre-order.
pub fn sa_violations(c: &SaCommand) -> Vec<Violation> {
    let mut out = Vec::new();
    walk(c, &AstPath::root(), &mut out, false);
    out
}

/// True iff `c` assigns none of the free variables of `a`.
pub fn check_no_assign(a: &Assertion<SaVar>, c: &SaCommand) -> bool {
    let fv = a.free_vars();
    c.assd().is_disjoint(&fv)
}

fn report(out: &mut Vec<Violation>, rule: SaRule, path: &AstPath, offending: BTreeSet<SaVar>) {
    out.push(Violation {
        rule,
        path: path.clone(),
        offending,
    });
}

// returns true when the walk should stop (first-only mode with a hit)
fn walk(c: &SaCommand, path: &AstPath, out: &mut Vec<Violation>, first_only: bool) -> bool {
    let stop = |out: &Vec<Violation>| first_only && !out.is_empty();
    match c {
        SaCommand::Skip => {}
        SaCommand::Assign(x, e) => {
            if e.vars().contains(x) {
                report(
                    out,
                    SaRule::AssignReadsTarget,
                    path,
                    BTreeSet::from([x.clone()]),
                );
            }
        }
        SaCommand::Seq(a, b) => {
            let clash: BTreeSet<_> = a.vars().intersection(&b.assd()).cloned().collect();
            if !clash.is_empty() {
                report(out, SaRule::SeqOverlap, path, clash);
            }
            if stop(out) || walk(a, &path.child(0), out, first_only) {
                return true;
            }
            walk(b, &path.child(1), out, first_only);
        }
        SaCommand::If(b, t, f) => {
            let mut assigned = t.assd();
            assigned.extend(f.assd());
            let clash: BTreeSet<_> = b.vars().intersection(&assigned).cloned().collect();
            if !clash.is_empty() {
                report(out, SaRule::IfConditionAssigned, path, clash);
            }
            if stop(out) || walk(t, &path.child(0), out, first_only) {
                return true;
            }
            walk(f, &path.child(1), out, first_only);
        }
        SaCommand::For(l) => {
            for r in [&l.init, &l.update] {
                if !r.is_valid() {
                    let mut vs = BTreeSet::new();
                    r.collect_vars(&mut vs);
                    report(out, SaRule::ForRenamingInvalid, path, vs);
                }
            }
            let (init_dom, upd_dom) = (l.init.domain(), l.update.domain());
            if init_dom != upd_dom {
                let diff = init_dom.symmetric_difference(&upd_dom).cloned().collect();
                report(out, SaRule::ForInitUpdateMismatch, path, diff);
            }
            let body_assd = l.body.assd();
            let missing: BTreeSet<_> = l.update.range().difference(&body_assd).cloned().collect();
            if !missing.is_empty() {
                report(out, SaRule::ForUpdateRange, path, missing);
            }
            let mut read = BTreeSet::new();
            l.init.collect_vars(&mut read);
            l.cond.collect_vars(&mut read);
            l.invariant.collect_free_vars(&mut read);
            let clash: BTreeSet<_> = read.intersection(&body_assd).cloned().collect();
            if !clash.is_empty() {
                report(out, SaRule::ForBodyClobbers, path, clash);
            }
            if stop(out) {
                return true;
            }
            walk(&l.body, &path.child(0), out, first_only);
        }
    }
    stop(out)
}
