//! Pretty-printing. The output parses back to the same tree.

use std::fmt::{self, Write as _};

use crate::lang::{
    AnnCommand, ArithOp, Assertion, BoolExpr, CmpOp, Expr, Renaming, SaCommand, Variable,
};
use crate::symbols::{FunctionDecl, Pattern};

use super::SourceUnit;

impl fmt::Display for ArithOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
        })
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Le => "<=",
            CmpOp::Lt => "<",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
        })
    }
}

fn arith_prec(op: ArithOp) -> u8 {
    match op {
        ArithOp::Add | ArithOp::Sub => 1,
        ArithOp::Mul => 2,
    }
}

fn write_expr<V: fmt::Display>(e: &Expr<V>, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e {
        Expr::Int(n) => write!(f, "{n}"),
        Expr::Var(v) => write!(f, "{v}"),
        Expr::App(name, args) => {
            write!(f, "{name}(")?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write_expr(a, 0, f)?;
            }
            f.write_str(")")
        }
        Expr::Bin(op, a, b) => {
            let p = arith_prec(*op);
            if p < min {
                f.write_str("(")?;
            }
            write_expr(a, p, f)?;
            write!(f, " {op} ")?;
            write_expr(b, p + 1, f)?;
            if p < min {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

impl<V: fmt::Display> fmt::Display for Expr<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(self, 0, f)
    }
}

// Assertion precedence: 0 quantifier, 1 implication, 2 or, 3 and, 4 not,
// 5 atoms. Quantifiers extend as far right as possible, so they are
// bracketed anywhere but at the top or directly under another binder.
fn write_assert<V: fmt::Display>(
    a: &Assertion<V>,
    min: u8,
    f: &mut fmt::Formatter<'_>,
) -> fmt::Result {
    let open = match a {
        Assertion::Forall(..) | Assertion::Exists(..) => min > 0,
        Assertion::Implies(..) => min > 1,
        Assertion::Or(..) => min > 2,
        Assertion::And(..) => min > 3,
        // a negated comparison reads as `!(x < y)`
        Assertion::Cmp(..) => min > 4,
        _ => false,
    };
    if open {
        f.write_str("(")?;
    }
    match a {
        Assertion::Const(b) => write!(f, "{b}")?,
        Assertion::Cmp(op, l, r) => write!(f, "{l} {op} {r}")?,
        Assertion::Not(x) => {
            f.write_str("!")?;
            write_assert(x, 5, f)?;
        }
        Assertion::And(l, r) => {
            write_assert(l, 3, f)?;
            f.write_str(" && ")?;
            write_assert(r, 4, f)?;
        }
        Assertion::Or(l, r) => {
            write_assert(l, 2, f)?;
            f.write_str(" || ")?;
            write_assert(r, 3, f)?;
        }
        Assertion::Implies(l, r) => {
            write_assert(l, 2, f)?;
            f.write_str(" ==> ")?;
            write_assert(r, 1, f)?;
        }
        Assertion::Forall(x, body) => {
            write!(f, "forall {x}. ")?;
            write_assert(body, 0, f)?;
        }
        Assertion::Exists(x, body) => {
            write!(f, "exists {x}. ")?;
            write_assert(body, 0, f)?;
        }
    }
    if open {
        f.write_str(")")?;
    }
    Ok(())
}

impl<V: fmt::Display> fmt::Display for Assertion<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_assert(self, 0, f)
    }
}

impl<V: Variable> fmt::Display for BoolExpr<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_assert(&self.embed(), 0, f)
    }
}

/// `[t1 := s1, t2 := s2,]`; every pair carries a trailing comma.
impl fmt::Display for Renaming {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (t, s)) in self.pairs().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t} := {s},")?;
        }
        f.write_str("]")
    }
}

enum View<'a, C> {
    Leaf(String),
    Seq(&'a C, &'a C),
    /// Header text around each braced body: `segments[i] { bodies[i] }`.
    Nested {
        segments: Vec<String>,
        bodies: Vec<&'a C>,
    },
}

trait Layout: Sized {
    fn view(&self) -> View<'_, Self>;
    fn is_seq(&self) -> bool;
}

impl<V: Variable> Layout for AnnCommand<V> {
    fn view(&self) -> View<'_, Self> {
        match self {
            AnnCommand::Skip => View::Leaf("skip".into()),
            AnnCommand::Assign(x, e) => View::Leaf(format!("{x} := {e}")),
            AnnCommand::Seq(a, b) => View::Seq(a, b),
            AnnCommand::If(b, t, e) => View::Nested {
                segments: vec![format!("if {b} then {{"), "} else {".into(), "}".into()],
                bodies: vec![t, e],
            },
            AnnCommand::While(b, inv, body) => View::Nested {
                segments: vec![format!("while {b} invariant {inv} do {{"), "}".into()],
                bodies: vec![body],
            },
        }
    }

    fn is_seq(&self) -> bool {
        matches!(self, AnnCommand::Seq(..))
    }
}

impl Layout for SaCommand {
    fn view(&self) -> View<'_, Self> {
        match self {
            SaCommand::Skip => View::Leaf("skip".into()),
            SaCommand::Assign(x, e) => View::Leaf(format!("{x} := {e}")),
            SaCommand::Seq(a, b) => View::Seq(a, b),
            SaCommand::If(b, t, e) => View::Nested {
                segments: vec![format!("if {b} then {{"), "} else {".into(), "}".into()],
                bodies: vec![t, e],
            },
            SaCommand::For(l) => View::Nested {
                segments: vec![
                    format!(
                        "for ({}; {}; {}) invariant {} do {{",
                        l.init, l.cond, l.update, l.invariant
                    ),
                    "}".into(),
                ],
                bodies: vec![&l.body],
            },
        }
    }

    fn is_seq(&self) -> bool {
        matches!(self, SaCommand::Seq(..))
    }
}

fn pad(out: &mut String, indent: usize) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

/// Writes `c` assuming the cursor already sits at `indent`.
fn layout<C: Layout>(c: &C, indent: usize, out: &mut String) {
    match c.view() {
        View::Leaf(s) => out.push_str(&s),
        View::Seq(a, b) => {
            if a.is_seq() {
                // a left-nested sequence needs its own block to survive reparsing
                out.push_str("{\n");
                pad(out, indent + 1);
                layout(a, indent + 1, out);
                out.push('\n');
                pad(out, indent);
                out.push('}');
            } else {
                layout(a, indent, out);
            }
            out.push_str(";\n");
            pad(out, indent);
            layout(b, indent, out);
        }
        View::Nested { segments, bodies } => {
            for (seg, body) in segments.iter().zip(&bodies) {
                out.push_str(seg);
                out.push('\n');
                pad(out, indent + 1);
                layout(*body, indent + 1, out);
                out.push('\n');
                pad(out, indent);
            }
            out.push_str(segments.last().expect("closing segment"));
        }
    }
}

fn render<C: Layout>(c: &C) -> String {
    let mut out = String::new();
    layout(c, 0, &mut out);
    out
}

impl<V: Variable> fmt::Display for AnnCommand<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

impl fmt::Display for SaCommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Lit(n) => write!(f, "{n}"),
            Pattern::Var(x) => write!(f, "{x}"),
        }
    }
}

/// One `define` line per equation; an uninterpreted symbol is printed with
/// placeholder parameter names.
impl fmt::Display for FunctionDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            let params: Vec<String> = (1..=self.arity).map(|i| format!("a{i}")).collect();
            return write!(f, "define {}({});", self.name, params.join(", "));
        }
        for (i, c) in self.clauses.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            let params: Vec<String> = c.params.iter().map(ToString::to_string).collect();
            write!(
                f,
                "define {}({}) = {};",
                self.name,
                params.join(", "),
                c.body
            )?;
        }
        Ok(())
    }
}

impl<V, C> fmt::Display for SourceUnit<V, C>
where
    V: fmt::Display,
    C: fmt::Display,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for d in &self.declarations {
            writeln!(out, "{d}")?;
        }
        writeln!(out, "requires {};", self.pre)?;
        writeln!(out, "ensures {};", self.post)?;
        write!(out, "{}", self.program)?;
        f.write_str(&out)
    }
}
