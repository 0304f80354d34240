//! Translation of annotated While programs into single-assignment form.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::lang::{
    check_no_assign, check_sa_wellformed, AnnCommand, Assertion, ForLoop, Identifier, Program,
    Renaming, SaCommand, SaTriple, SaVar, Triple, Version, VersionContractError, Violation,
};

use super::versions::{merge, sup, upd, VersionMap};

/// Deliberate translator bugs, used to show that the property checks
/// catch them.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// Conditional branches receive each other's merge renaming.
    SwapMerge,
    /// Loops are not followed by their exit renaming.
    OmitUpd,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Translator {
    pub fault: Fault,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationResult {
    pub final_versions: VersionMap,
    pub program: SaCommand,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("internal: {0}")]
    Contract(#[from] VersionContractError),
    #[error("internal: translated program is not single-assignment: {0}")]
    IllFormed(Violation),
    #[error("internal: version of unassigned `{var}` moved from {before:?} to {after:?}")]
    VersionDrift {
        var: Identifier,
        before: Version,
        after: Version,
    },
    #[error("internal: translated program assigns precondition variables {0:?}")]
    PreconditionAssigned(BTreeSet<SaVar>),
}

impl Translator {
    pub fn new() -> Self {
        Self::default()
    }

    /// The bare translation, without post-checks.
    pub fn translate(
        &self,
        v: &VersionMap,
        c: &AnnCommand<Identifier>,
    ) -> Result<(VersionMap, SaCommand), VersionContractError> {
        match c {
            AnnCommand::Skip => Ok((v.clone(), SaCommand::Skip)),
            AnnCommand::Assign(x, e) => {
                let rhs = e.map_vars(&|y| v.sa_var(y));
                let version = v.get(x).next();
                let mut out = v.clone();
                out.set(x.clone(), version.clone());
                Ok((out, SaCommand::Assign(SaVar::new(x.clone(), version), rhs)))
            }
            AnnCommand::Seq(a, b) => {
                let (v1, a) = self.translate(v, a)?;
                let (v2, b) = self.translate(&v1, b)?;
                Ok((v2, SaCommand::seq(a, b)))
            }
            AnnCommand::If(b, t, f) => {
                let (vt, t) = self.translate(v, t)?;
                let (vf, f) = self.translate(v, f)?;
                let (into_then, into_else) = match self.fault {
                    Fault::SwapMerge => (merge(&vf, &vt), merge(&vt, &vf)),
                    _ => (merge(&vt, &vf), merge(&vf, &vt)),
                };
                let cond = b.map_vars(&|y| v.sa_var(y));
                let cmd = SaCommand::If(
                    cond,
                    Box::new(append_renaming(t, &into_then)),
                    Box::new(append_renaming(f, &into_else)),
                );
                Ok((sup(&vt, &vf), cmd))
            }
            AnnCommand::While(b, inv, body) => {
                let assigned = body.assd();
                let mut entry = v.clone();
                for x in &assigned {
                    entry.set(x.clone(), v.get(x).nest());
                }
                let init = Renaming::new(assigned.iter().map(|x| (entry.sa_var(x), v.sa_var(x))))
                    .expect("nested versions are fresh");
                let (after_body, body) = self.translate(&entry, body)?;
                let update = Renaming::new(
                    assigned
                        .iter()
                        .map(|x| (entry.sa_var(x), after_body.sa_var(x))),
                )
                .expect("assigned variables move away from their entry version");
                let mut exit = after_body;
                for target in update.targets() {
                    exit.set(target.base.clone(), target.version.jump()?);
                }
                let epilogue = upd(&update.domain())?;
                let for_loop = SaCommand::For(Box::new(ForLoop {
                    init,
                    cond: b.map_vars(&|y| entry.sa_var(y)),
                    update,
                    invariant: inv.map_vars(&|y| entry.sa_var(y)),
                    body,
                }));
                let cmd = match self.fault {
                    Fault::OmitUpd => for_loop,
                    _ => append_renaming(for_loop, &epilogue),
                };
                Ok((exit, cmd))
            }
        }
    }

    /// Translation followed by the single-assignment and version-stability
    /// checks.
    pub fn translate_checked(
        &self,
        v: &VersionMap,
        c: &AnnCommand<Identifier>,
    ) -> Result<TranslationResult, TranslateError> {
        let (final_versions, program) = self.translate(v, c)?;
        check_sa_wellformed(&program).map_err(TranslateError::IllFormed)?;
        let assigned = c.assd();
        let universe: BTreeSet<Identifier> = v.keys().cloned().chain(c.vars()).collect();
        for x in universe.difference(&assigned) {
            let (before, after) = (v.get(x), final_versions.get(x));
            if before != after {
                return Err(TranslateError::VersionDrift {
                    var: x.clone(),
                    before,
                    after,
                });
            }
        }
        Ok(TranslationResult {
            final_versions,
            program,
        })
    }
}

fn append_renaming(c: SaCommand, r: &Renaming) -> SaCommand {
    if r.is_empty() {
        c
    } else {
        SaCommand::seq(c, r.to_sa_command())
    }
}

/// Translates `c` starting from the versions `v`, then checks the result.
pub fn tsa_cmd(
    v: &VersionMap,
    c: &AnnCommand<Identifier>,
) -> Result<TranslationResult, TranslateError> {
    Translator::new().translate_checked(v, c)
}

/// Translates a triple: the precondition is renamed by the initial
/// versions, the postcondition by the final ones.
///
/// `initial` defaults to every variable at `[0]`. The returned map covers
/// the variables of the program and of both assertions.
pub fn tsa_triple(
    pre: &Assertion<Identifier>,
    c: &AnnCommand<Identifier>,
    post: &Assertion<Identifier>,
    initial: Option<&VersionMap>,
) -> Result<(SaTriple, VersionMap), TranslateError> {
    let mut universe = c.vars();
    universe.extend(pre.free_vars());
    universe.extend(post.free_vars());
    let mut v0 = initial.cloned().unwrap_or_default();
    v0.extend_universe(&universe);

    let result = tsa_cmd(&v0, c)?;
    let pre = pre.map_vars(&|x| v0.sa_var(x));
    let post = post.map_vars(&|x| result.final_versions.sa_var(x));
    if !check_no_assign(&pre, &result.program) {
        let clash = pre
            .free_vars()
            .intersection(&result.program.assd())
            .cloned()
            .collect();
        return Err(TranslateError::PreconditionAssigned(clash));
    }
    Ok((
        Triple::new(pre, result.program, post),
        result.final_versions,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{ArithOp, BoolExpr, CmpOp, Expr};

    fn id(n: &str) -> Identifier {
        Identifier::new(n)
    }

    fn sv(s: &str) -> SaVar {
        SaVar::parse(s).unwrap()
    }

    #[test]
    fn skip_keeps_versions() {
        let v = VersionMap::initial([&id("x")]);
        let r = tsa_cmd(&v, &AnnCommand::Skip).unwrap();
        assert_eq!(r.final_versions, v);
        assert_eq!(r.program, SaCommand::Skip);
    }

    #[test]
    fn assignment_bumps_target() {
        let v = VersionMap::initial([&id("x")]);
        let inc = AnnCommand::Assign(
            id("x"),
            Expr::bin(ArithOp::Add, Expr::Var(id("x")), Expr::int(1)),
        );
        let r = tsa_cmd(&v, &inc).unwrap();
        assert_eq!(
            r.final_versions.get(&id("x")),
            Version::new(vec![1]).unwrap()
        );
        assert_eq!(
            r.program,
            SaCommand::Assign(
                sv("x_1"),
                Expr::bin(ArithOp::Add, Expr::Var(sv("x_0")), Expr::int(1))
            )
        );
    }

    #[test]
    fn conditional_gets_merge_in_else_branch() {
        // if x > 0 then x := x + 10 else skip
        let c = AnnCommand::If(
            BoolExpr::cmp(CmpOp::Gt, Expr::Var(id("x")), Expr::int(0)),
            Box::new(AnnCommand::Assign(
                id("x"),
                Expr::bin(ArithOp::Add, Expr::Var(id("x")), Expr::int(10)),
            )),
            Box::new(AnnCommand::Skip),
        );
        let r = tsa_cmd(&VersionMap::new(), &c).unwrap();
        let expected = SaCommand::If(
            BoolExpr::cmp(CmpOp::Gt, Expr::Var(sv("x_0")), Expr::int(0)),
            Box::new(SaCommand::Assign(
                sv("x_1"),
                Expr::bin(ArithOp::Add, Expr::Var(sv("x_0")), Expr::int(10)),
            )),
            Box::new(SaCommand::seq(
                SaCommand::Skip,
                SaCommand::Assign(sv("x_1"), Expr::Var(sv("x_0"))),
            )),
        );
        assert_eq!(r.program, expected);
        assert_eq!(
            r.final_versions.get(&id("x")),
            Version::new(vec![1]).unwrap()
        );
    }

    #[test]
    fn triple_renames_pre_and_post() {
        let x = || Expr::Var(id("x"));
        let pre = Assertion::Cmp(CmpOp::Eq, x(), Expr::int(0));
        let post = Assertion::Cmp(CmpOp::Eq, x(), Expr::int(1));
        let c = AnnCommand::Assign(id("x"), Expr::bin(ArithOp::Add, x(), Expr::int(1)));
        let (t, _) = tsa_triple(&pre, &c, &post, None).unwrap();
        assert_eq!(
            t.pre,
            Assertion::Cmp(CmpOp::Eq, Expr::Var(sv("x_0")), Expr::int(0))
        );
        assert_eq!(
            t.post,
            Assertion::Cmp(CmpOp::Eq, Expr::Var(sv("x_1")), Expr::int(1))
        );

        let (t, vs) = tsa_triple(
            &Assertion::Const(true),
            &AnnCommand::Skip,
            &Assertion::Const(true),
            None,
        )
        .unwrap();
        assert_eq!(
            t,
            Triple::new(
                Assertion::Const(true),
                SaCommand::Skip,
                Assertion::Const(true)
            )
        );
        assert_eq!(vs.iter().count(), 0);
    }

    #[test]
    fn simple_loop_shape() {
        // while x < 3 invariant true do x := x + 1
        let c = AnnCommand::While(
            BoolExpr::cmp(CmpOp::Lt, Expr::Var(id("x")), Expr::int(3)),
            Assertion::Const(true),
            Box::new(AnnCommand::Assign(
                id("x"),
                Expr::bin(ArithOp::Add, Expr::Var(id("x")), Expr::int(1)),
            )),
        );
        let r = tsa_cmd(&VersionMap::new(), &c).unwrap();
        let SaCommand::Seq(l, epilogue) = &r.program else {
            panic!("{:?}", r.program)
        };
        let SaCommand::For(l) = &**l else { panic!() };
        assert_eq!(l.init, Renaming::new([(sv("x_1.0"), sv("x_0"))]).unwrap());
        assert_eq!(
            l.update,
            Renaming::new([(sv("x_1.0"), sv("x_2.0"))]).unwrap()
        );
        assert_eq!(
            **epilogue,
            SaCommand::Assign(sv("x_1"), Expr::Var(sv("x_1.0")))
        );
        assert_eq!(
            r.final_versions.get(&id("x")),
            Version::new(vec![1]).unwrap()
        );
    }

    #[test]
    fn swapped_merge_breaks_single_assignment() {
        let c = AnnCommand::If(
            BoolExpr::Const(true),
            Box::new(AnnCommand::Assign(id("x"), Expr::int(1))),
            Box::new(AnnCommand::Skip),
        );
        let bad = Translator {
            fault: Fault::SwapMerge,
        };
        assert!(matches!(
            bad.translate_checked(&VersionMap::new(), &c),
            Err(TranslateError::IllFormed(_))
        ));
    }
}
