use std::collections::BTreeMap;

use crate::lang::{AnnCommand, AstPath, SaCommand, SaVar};

/// Back-translation to annotated While code over versioned variables.
///
/// Homomorphic except on loops:
/// `for (I; b; U) inv θ do { C }` becomes `I; while b inv θ do { C'; U }`.
pub fn t_inv(c: &SaCommand) -> AnnCommand<SaVar> {
    match c {
        SaCommand::Skip => AnnCommand::Skip,
        SaCommand::Assign(x, e) => AnnCommand::Assign(x.clone(), e.clone()),
        SaCommand::Seq(a, b) => AnnCommand::seq(t_inv(a), t_inv(b)),
        SaCommand::If(b, t, f) => AnnCommand::If(b.clone(), Box::new(t_inv(t)), Box::new(t_inv(f))),
        SaCommand::For(l) => AnnCommand::seq(
            l.init.to_ann_command(),
            AnnCommand::While(
                l.cond.clone(),
                l.invariant.clone(),
                Box::new(AnnCommand::seq(t_inv(&l.body), l.update.to_ann_command())),
            ),
        ),
    }
}

/// For each `while` in `t_inv(c)`, the path of the `for` it came from.
pub fn t_inv_loop_origins(c: &SaCommand) -> BTreeMap<AstPath, AstPath> {
    fn walk(c: &SaCommand, src: AstPath, img: AstPath, out: &mut BTreeMap<AstPath, AstPath>) {
        match c {
            SaCommand::Skip | SaCommand::Assign(..) => {}
            SaCommand::Seq(a, b) | SaCommand::If(_, a, b) => {
                walk(a, src.child(0), img.child(0), out);
                walk(b, src.child(1), img.child(1), out);
            }
            SaCommand::For(l) => {
                // I; while b inv θ do { body; U }
                let w = img.child(1);
                walk(&l.body, src.child(0), w.child(0).child(0), out);
                out.insert(w, src);
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(c, AstPath::root(), AstPath::root(), &mut out);
    out
}
