use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use num_bigint::{BigInt, Sign};
use thiserror::Error;

use crate::lang::{ArithOp, Assertion, CmpOp, Expr, Identifier, Variable};
use crate::symbols::{Clause, FunctionDecl, Pattern, SymbolTable};
use crate::vcgen::VerificationCondition;

/// A complete SMT-LIB2 script for one condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmtScript {
    pub text: String,
    /// Zero-based position of the condition in its listing.
    pub vc_index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SmtError {
    #[error("function `{0}` is not declared")]
    UndeclaredFunction(Identifier),
    #[error("variable `{var}` and function `{function}` share the SMT name `{symbol}`")]
    NameClash {
        var: String,
        function: Identifier,
        symbol: String,
    },
    #[error("unsupported construct: {0}")]
    Unsupported(String),
}

/// Words SMT-LIB gives a meaning to; such names are written as `|name|`.
const RESERVED: &[&str] = &[
    "and",
    "or",
    "not",
    "xor",
    "ite",
    "let",
    "forall",
    "exists",
    "match",
    "par",
    "as",
    "distinct",
    "true",
    "false",
    "div",
    "mod",
    "abs",
    "assert",
    "Int",
    "Bool",
    "BINARY",
    "DECIMAL",
    "HEXADECIMAL",
    "NUMERAL",
    "STRING",
    "to_real",
    "to_int",
    "is_int",
];

fn symbol(name: &str) -> String {
    if RESERVED.contains(&name) {
        format!("|{name}|")
    } else {
        name.to_string()
    }
}

fn int(n: &BigInt) -> String {
    match n.sign() {
        Sign::Minus => format!("(- {})", n.magnitude()),
        _ => n.to_string(),
    }
}

fn expr<V>(e: &Expr<V>, var: &impl Fn(&V) -> String, out: &mut String) {
    match e {
        Expr::Int(n) => out.push_str(&int(n)),
        Expr::Var(x) => out.push_str(&var(x)),
        Expr::Bin(op, a, b) => {
            let op = match op {
                ArithOp::Add => "+",
                ArithOp::Sub => "-",
                ArithOp::Mul => "*",
            };
            write!(out, "({op} ").unwrap();
            expr(a, var, out);
            out.push(' ');
            expr(b, var, out);
            out.push(')');
        }
        Expr::App(f, args) => {
            write!(out, "({}", symbol(f.as_str())).unwrap();
            for a in args {
                out.push(' ');
                expr(a, var, out);
            }
            out.push(')');
        }
    }
}

fn assertion<V: Variable>(a: &Assertion<V>, out: &mut String) {
    let var = |x: &V| symbol(&x.smt_symbol());
    match a {
        Assertion::Const(b) => write!(out, "{b}").unwrap(),
        Assertion::Cmp(op, l, r) => {
            let (op, negate) = match op {
                CmpOp::Eq => ("=", false),
                CmpOp::Ne => ("=", true),
                CmpOp::Le => ("<=", false),
                CmpOp::Lt => ("<", false),
                CmpOp::Ge => (">=", false),
                CmpOp::Gt => (">", false),
            };
            if negate {
                out.push_str("(not ");
            }
            write!(out, "({op} ").unwrap();
            expr(l, &var, out);
            out.push(' ');
            expr(r, &var, out);
            out.push(')');
            if negate {
                out.push(')');
            }
        }
        Assertion::Not(x) => {
            out.push_str("(not ");
            assertion(x, out);
            out.push(')');
        }
        Assertion::And(l, r) | Assertion::Or(l, r) | Assertion::Implies(l, r) => {
            let op = match a {
                Assertion::And(..) => "and",
                Assertion::Or(..) => "or",
                _ => "=>",
            };
            write!(out, "({op} ").unwrap();
            assertion(l, out);
            out.push(' ');
            assertion(r, out);
            out.push(')');
        }
        Assertion::Forall(x, body) | Assertion::Exists(x, body) => {
            let q = if matches!(a, Assertion::Forall(..)) {
                "forall"
            } else {
                "exists"
            };
            write!(out, "({q} (({} Int)) ", var(x)).unwrap();
            assertion(body, out);
            out.push(')');
        }
    }
}

/// Functions used by `roots`, directly or through definitions.
fn function_closure(
    roots: BTreeSet<Identifier>,
    decls: &SymbolTable,
) -> Result<Vec<&FunctionDecl>, SmtError> {
    let mut seen = BTreeSet::new();
    let mut queue: VecDeque<Identifier> = roots.into_iter().collect();
    while let Some(f) = queue.pop_front() {
        if !seen.insert(f.clone()) {
            continue;
        }
        let d = decls
            .get(&f)
            .ok_or_else(|| SmtError::UndeclaredFunction(f.clone()))?;
        for c in &d.clauses {
            let mut used = BTreeSet::new();
            c.body.collect_functions(&mut used);
            queue.extend(used);
        }
    }
    Ok(seen
        .iter()
        .map(|f| decls.get(f).expect("looked up above"))
        .collect())
}

/// The equation of clause `k`, applicable where no earlier clause matches.
///
/// Arguments range over the naturals: variable parameters are guarded by
/// `p >= 0`, and clauses with a negative literal never fire.
fn clause_axiom(d: &FunctionDecl, k: usize) -> Option<String> {
    let clause: &Clause = &d.clauses[k];
    if clause
        .params
        .iter()
        .any(|p| matches!(p, Pattern::Lit(n) if n.sign() == Sign::Minus))
    {
        return None;
    }
    let arg = |p: &Pattern| match p {
        Pattern::Lit(n) => int(n),
        Pattern::Var(x) => symbol(x.as_str()),
    };
    let bound: Vec<&Identifier> = clause
        .params
        .iter()
        .filter_map(|p| match p {
            Pattern::Var(x) => Some(x),
            Pattern::Lit(_) => None,
        })
        .collect();

    let mut guards: Vec<String> = bound
        .iter()
        .map(|x| format!("(>= {} 0)", symbol(x.as_str())))
        .collect();
    for earlier in &d.clauses[..k] {
        // the earlier clause matches when each of its literals equals our argument
        let mut conds = Vec::new();
        let mut impossible = false;
        for (mine, theirs) in clause.params.iter().zip(&earlier.params) {
            if let Pattern::Lit(n) = theirs {
                match mine {
                    Pattern::Lit(m) if m == n => {}
                    Pattern::Lit(_) => impossible = true,
                    Pattern::Var(x) => conds.push(format!("(= {} {})", symbol(x.as_str()), int(n))),
                }
            }
        }
        if impossible {
            continue;
        }
        guards.push(match conds.len() {
            0 => "false".to_string(),
            1 => format!("(not {})", conds[0]),
            _ => format!("(not (and {}))", conds.join(" ")),
        });
    }

    let mut head = format!("({}", symbol(d.name.as_str()));
    for p in &clause.params {
        head.push(' ');
        head.push_str(&arg(p));
    }
    head.push(')');
    let mut body = String::new();
    expr(
        &clause.body,
        &|x: &Identifier| symbol(x.as_str()),
        &mut body,
    );
    let eq = format!("(= {head} {body})");

    let guarded = match guards.len() {
        0 => eq,
        1 => format!("(=> {} {eq})", guards[0]),
        _ => format!("(=> (and {}) {eq})", guards.join(" ")),
    };
    if bound.is_empty() {
        Some(guarded)
    } else {
        let binders: Vec<String> = bound
            .iter()
            .map(|x| format!("({} Int)", symbol(x.as_str())))
            .collect();
        Some(format!("(forall ({}) {guarded})", binders.join(" ")))
    }
}

/// The script asserting the negation of `vc`: unsatisfiable iff valid.
pub fn emit<V: Variable>(
    vc: &VerificationCondition<V>,
    vc_index: usize,
    decls: &SymbolTable,
) -> Result<SmtScript, SmtError> {
    let mut used = BTreeSet::new();
    vc.formula.collect_functions(&mut used);
    let functions = function_closure(used, decls)?;
    let vars = vc.formula.free_vars();
    for x in &vars {
        let s = x.smt_symbol();
        if let Some(f) = functions.iter().find(|f| f.name.as_str() == s) {
            return Err(SmtError::NameClash {
                var: x.to_string(),
                function: f.name.clone(),
                symbol: s,
            });
        }
    }

    let mut text = String::new();
    writeln!(text, "; vc {} [{}]", vc_index + 1, vc.origin).unwrap();
    text.push_str("(set-option :produce-models true)\n");
    text.push_str("(set-logic UFNIA)\n");
    for f in &functions {
        let sorts = vec!["Int"; f.arity].join(" ");
        writeln!(
            text,
            "(declare-fun {} ({sorts}) Int)",
            symbol(f.name.as_str())
        )
        .unwrap();
    }
    for f in &functions {
        for k in 0..f.clauses.len() {
            if let Some(axiom) = clause_axiom(f, k) {
                writeln!(text, "(assert {axiom})").unwrap();
            }
        }
    }
    for x in &vars {
        writeln!(text, "(declare-const {} Int)", symbol(&x.smt_symbol())).unwrap();
    }
    let mut goal = String::new();
    assertion(&vc.formula, &mut goal);
    writeln!(text, "(assert (not {goal}))").unwrap();
    text.push_str("(check-sat)\n");
    Ok(SmtScript { text, vc_index })
}

pub fn emit_all<V: Variable>(
    vcs: &[VerificationCondition<V>],
    decls: &SymbolTable,
) -> Result<Vec<SmtScript>, SmtError> {
    vcs.iter()
        .enumerate()
        .map(|(i, vc)| emit(vc, i, decls))
        .collect()
}

/// Writes `vc_<n>.smt2` (numbered from 1) into `dir`, creating it if needed.
pub fn write_scripts(dir: &Path, scripts: &[SmtScript]) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    scripts
        .iter()
        .map(|s| {
            let path = dir.join(format!("vc_{}.smt2", s.vc_index + 1));
            fs::write(&path, &s.text)?;
            Ok(path)
        })
        .collect()
}
