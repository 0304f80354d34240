//! Shared helpers for the integration tests.

#![allow(dead_code)]

use std::path::PathBuf;

use sav_core::lang::{Expr, ForLoop, SaCommand, SaVar};

pub fn repo_file(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join(rel)
}

pub fn program_text(name: &str) -> String {
    std::fs::read_to_string(repo_file(&format!("programs/{name}"))).expect("program file")
}

pub fn golden_text(name: &str) -> String {
    std::fs::read_to_string(
        PathBuf::from(env!("CARGO_MANIFEST_DIR"))
            .join("tests/golden")
            .join(name),
    )
    .expect("golden file")
}

/// Canonical shape for comparing translations whose copy blocks may be
/// listed in any order.
///
/// Sequences are flattened; every maximal run of consecutive copies
/// `x := y` in which no copy reads or overwrites a variable that another
/// copy of the run writes or reads is sorted by target. Loop bodies and branches are normalized
/// recursively. The result is rebuilt as a right-nested sequence.
pub fn normalize(c: &SaCommand) -> SaCommand {
    let mut items = Vec::new();
    flatten(c, &mut items);
    let mut out = Vec::new();
    let mut run: Vec<(SaVar, SaVar)> = Vec::new();
    for item in items {
        match copy_of(&item) {
            Some((t, s)) => {
                if run.iter().any(|(rt, rs)| *rt == s || *rs == t) {
                    flush(&mut run, &mut out);
                }
                run.push((t, s));
            }
            None => {
                flush(&mut run, &mut out);
                out.push(item);
            }
        }
    }
    flush(&mut run, &mut out);
    SaCommand::seq_all(out)
}

fn flatten(c: &SaCommand, items: &mut Vec<SaCommand>) {
    match c {
        SaCommand::Seq(a, b) => {
            flatten(a, items);
            flatten(b, items);
        }
        SaCommand::If(b, t, f) => items.push(SaCommand::If(
            b.clone(),
            Box::new(normalize(t)),
            Box::new(normalize(f)),
        )),
        SaCommand::For(l) => items.push(SaCommand::For(Box::new(ForLoop {
            body: normalize(&l.body),
            ..(**l).clone()
        }))),
        other => items.push(other.clone()),
    }
}

fn copy_of(c: &SaCommand) -> Option<(SaVar, SaVar)> {
    match c {
        SaCommand::Assign(t, Expr::Var(s)) => Some((t.clone(), s.clone())),
        _ => None,
    }
}

fn flush(run: &mut Vec<(SaVar, SaVar)>, out: &mut Vec<SaCommand>) {
    run.sort();
    out.extend(
        run.drain(..)
            .map(|(t, s)| SaCommand::Assign(t, Expr::Var(s))),
    );
}
