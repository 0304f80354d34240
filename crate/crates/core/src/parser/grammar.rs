use std::collections::{BTreeMap, BTreeSet};

use crate::lang::{
    AnnCommand, ArithOp, Assertion, AstPath, BoolExpr, CmpOp, Expr, ForLoop, Identifier, Renaming,
    SaCommand, SaVar, Variable, KEYWORDS,
};
use crate::symbols::{Clause, FunctionDecl, Pattern, SymbolError, SymbolTable};

use super::lexer::{Tok, Token};
use super::{ParseError, SourceUnit, SpanTable};

pub(crate) enum Fail {
    /// An ordinary syntax error; the furthest one reached is reported.
    Soft,
    /// Reported as is, never backtracked over.
    Hard(ParseError),
}

type PResult<T> = Result<T, Fail>;

/// Source position of a command node and of its children.
pub(crate) struct Span {
    at: (u32, u32),
    kids: Vec<Span>,
}

impl Span {
    fn leaf(at: (u32, u32)) -> Self {
        Span {
            at,
            kids: Vec::new(),
        }
    }

    pub(crate) fn flatten(&self, path: AstPath, out: &mut SpanTable) {
        out.insert(path.clone(), self.at);
        for (i, k) in self.kids.iter().enumerate() {
            k.flatten(path.child(i as u8), out);
        }
    }
}

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
    furthest: usize,
    expected: BTreeSet<String>,
    pub(crate) symbols: SymbolTable,
    /// Off while reading definition bodies, which are checked as a group.
    check_functions: bool,
}

fn is_keyword(w: &str) -> bool {
    KEYWORDS.contains(&w)
}

impl Parser {
    pub(crate) fn new(toks: Vec<Token>) -> Self {
        Parser {
            toks,
            pos: 0,
            furthest: 0,
            expected: BTreeSet::new(),
            symbols: SymbolTable::with_builtins(),
            check_functions: true,
        }
    }

    /// The error for the furthest point any alternative reached.
    pub(crate) fn syntax_error(&self) -> ParseError {
        let t = &self.toks[self.furthest.min(self.toks.len() - 1)];
        ParseError::Syntax {
            line: t.line,
            col: t.col,
            found: t.tok.to_string(),
            expected: self.expected.iter().cloned().collect(),
        }
    }

    pub(crate) fn resolve(&self, f: Fail) -> ParseError {
        match f {
            Fail::Soft => self.syntax_error(),
            Fail::Hard(e) => e,
        }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn here(&self) -> (u32, u32) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn expect_here(&mut self, what: impl Into<String>) {
        if self.pos > self.furthest {
            self.furthest = self.pos;
            self.expected.clear();
        }
        if self.pos == self.furthest {
            self.expected.insert(what.into());
        }
    }

    fn bump(&mut self) {
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
    }

    fn eat_sym(&mut self, s: &'static str) -> bool {
        if *self.peek() == Tok::Sym(s) {
            self.bump();
            true
        } else {
            self.expect_here(format!("`{s}`"));
            false
        }
    }

    fn sym(&mut self, s: &'static str) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(Fail::Soft)
        }
    }

    fn at_kw(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), Tok::Word(w) if w == kw) {
            true
        } else {
            self.expect_here(format!("`{kw}`"));
            false
        }
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        let hit = self.at_kw(kw);
        if hit {
            self.bump();
        }
        hit
    }

    fn kw(&mut self, kw: &str) -> PResult<()> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            Err(Fail::Soft)
        }
    }

    pub(crate) fn end(&mut self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.expect_here("end of input");
            Err(Fail::Soft)
        }
    }

    fn hard<T>(&self, at: (u32, u32), make: impl FnOnce(u32, u32) -> ParseError) -> PResult<T> {
        Err(Fail::Hard(make(at.0, at.1)))
    }

    fn word(&self) -> Option<String> {
        match self.peek() {
            Tok::Word(w) if !is_keyword(w) => Some(w.clone()),
            _ => None,
        }
    }

    fn identifier(&mut self) -> PResult<Identifier> {
        if let Some(w) = self.word() {
            if let Ok(x) = Identifier::parse(&w) {
                self.bump();
                return Ok(x);
            }
        }
        self.expect_here(Identifier::KIND);
        Err(Fail::Soft)
    }

    fn variable<V: Variable>(&mut self) -> PResult<V> {
        let at = self.here();
        if let Some(w) = self.word() {
            if let Ok(v) = V::parse_token(&w) {
                if let Ok(name) = Identifier::parse(&w) {
                    if self.symbols.contains(&name) {
                        return self.hard(at, |line, col| ParseError::FunctionAsVariable {
                            line,
                            col,
                            name,
                        });
                    }
                }
                self.bump();
                return Ok(v);
            }
        }
        self.expect_here(V::KIND);
        Err(Fail::Soft)
    }

    // ---- expressions ----

    pub(crate) fn expr<V: Variable>(&mut self) -> PResult<Expr<V>> {
        let mut acc = self.term()?;
        loop {
            let op = if self.eat_sym("+") {
                ArithOp::Add
            } else if self.eat_sym("-") {
                ArithOp::Sub
            } else {
                return Ok(acc);
            };
            acc = Expr::bin(op, acc, self.term()?);
        }
    }

    fn term<V: Variable>(&mut self) -> PResult<Expr<V>> {
        let mut acc = self.postfix()?;
        while self.eat_sym("*") {
            acc = Expr::bin(ArithOp::Mul, acc, self.postfix()?);
        }
        Ok(acc)
    }

    /// `e!` abbreviates `fact(e)`.
    fn postfix<V: Variable>(&mut self) -> PResult<Expr<V>> {
        let mut e = self.primary()?;
        loop {
            let at = self.here();
            if !self.eat_sym("!") {
                return Ok(e);
            }
            let fact = Identifier::new("fact");
            self.check_application(&fact, 1, at)?;
            e = Expr::App(fact, vec![e]);
        }
    }

    fn check_application(&self, name: &Identifier, arity: usize, at: (u32, u32)) -> PResult<()> {
        if !self.check_functions {
            return Ok(());
        }
        match self.symbols.check_use(name, arity) {
            Ok(_) => Ok(()),
            Err(SymbolError::Undeclared(name)) => self.hard(at, |line, col| {
                ParseError::UndeclaredFunction { line, col, name }
            }),
            Err(source) => self.hard(at, |line, col| ParseError::Symbol { line, col, source }),
        }
    }

    fn primary<V: Variable>(&mut self) -> PResult<Expr<V>> {
        let at = self.here();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Int(n))
            }
            Tok::Sym("-") => {
                self.bump();
                match self.peek().clone() {
                    Tok::Int(n) => {
                        self.bump();
                        Ok(Expr::Int(-n))
                    }
                    _ => {
                        self.expect_here("integer");
                        Err(Fail::Soft)
                    }
                }
            }
            Tok::Sym("(") => {
                self.bump();
                let e = self.expr()?;
                self.sym(")")?;
                Ok(e)
            }
            Tok::Word(w) if !is_keyword(&w) && *self.peek_at(1) == Tok::Sym("(") => {
                let name = self.identifier()?;
                self.bump();
                let mut args = vec![self.expr()?];
                while self.eat_sym(",") {
                    args.push(self.expr()?);
                }
                self.sym(")")?;
                self.check_application(&name, args.len(), at)?;
                Ok(Expr::App(name, args))
            }
            Tok::Word(w) if !is_keyword(&w) => Ok(Expr::Var(self.variable()?)),
            _ => {
                for what in ["integer", V::KIND, "`(`", "`-`"] {
                    self.expect_here(what);
                }
                Err(Fail::Soft)
            }
        }
    }

    // ---- assertions ----

    pub(crate) fn assertion<V: Variable>(&mut self) -> PResult<Assertion<V>> {
        let lhs = self.disjunction()?;
        if self.eat_sym("==>") {
            Ok(Assertion::implies(lhs, self.assertion()?))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction<V: Variable>(&mut self) -> PResult<Assertion<V>> {
        let mut acc = self.conjunction()?;
        while self.eat_sym("||") {
            acc = Assertion::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction<V: Variable>(&mut self) -> PResult<Assertion<V>> {
        let mut acc = self.unary()?;
        while self.eat_sym("&&") {
            acc = Assertion::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary<V: Variable>(&mut self) -> PResult<Assertion<V>> {
        if self.eat_sym("!") {
            return Ok(Assertion::negate(self.unary()?));
        }
        for (kw, universal) in [("forall", true), ("exists", false)] {
            if self.eat_kw(kw) {
                let x: V = self.variable()?;
                self.sym(".")?;
                let body = Box::new(self.assertion()?);
                return Ok(if universal {
                    Assertion::Forall(x, body)
                } else {
                    Assertion::Exists(x, body)
                });
            }
        }
        self.atom()
    }

    fn atom<V: Variable>(&mut self) -> PResult<Assertion<V>> {
        if self.eat_kw("true") {
            return Ok(Assertion::Const(true));
        }
        if self.eat_kw("false") {
            return Ok(Assertion::Const(false));
        }
        if *self.peek() == Tok::Sym("(") {
            // `(e) < e'` and `(φ)` share a prefix; try the comparison first
            let save = self.pos;
            match self.comparison() {
                Ok(a) => return Ok(a),
                Err(Fail::Soft) => self.pos = save,
                Err(hard) => return Err(hard),
            }
            self.bump();
            let a = self.assertion()?;
            self.sym(")")?;
            return Ok(a);
        }
        self.comparison()
    }

    fn comparison<V: Variable>(&mut self) -> PResult<Assertion<V>> {
        let lhs = self.expr()?;
        let op = self.cmp_op()?;
        let rhs = self.expr()?;
        Ok(Assertion::Cmp(op, lhs, rhs))
    }

    fn cmp_op(&mut self) -> PResult<CmpOp> {
        const OPS: [(&str, CmpOp); 6] = [
            ("=", CmpOp::Eq),
            ("!=", CmpOp::Ne),
            ("<=", CmpOp::Le),
            ("<", CmpOp::Lt),
            (">=", CmpOp::Ge),
            (">", CmpOp::Gt),
        ];
        for (s, op) in OPS {
            if *self.peek() == Tok::Sym(s) {
                self.bump();
                return Ok(op);
            }
        }
        for (s, _) in OPS {
            self.expect_here(format!("`{s}`"));
        }
        Err(Fail::Soft)
    }

    fn condition<V: Variable>(&mut self) -> PResult<BoolExpr<V>> {
        let at = self.here();
        let a = self.assertion()?;
        match a.to_bool_expr() {
            Some(b) => Ok(b),
            None => self.hard(at, |line, col| ParseError::ConditionNotBoolean {
                line,
                col,
            }),
        }
    }

    // ---- commands ----

    /// `c1; c2; ...; cn` nested to the right, with an optional trailing `;`.
    fn sequence<C>(
        &mut self,
        simple: fn(&mut Self) -> PResult<(C, Span)>,
        seq: fn(C, C) -> C,
    ) -> PResult<(C, Span)> {
        let mut items = vec![simple(self)?];
        while self.eat_sym(";") {
            if matches!(self.peek(), Tok::Sym("}") | Tok::Eof) {
                break;
            }
            items.push(simple(self)?);
        }
        let (mut acc, mut acc_span) = items.pop().expect("at least one command");
        while let Some((c, span)) = items.pop() {
            let at = span.at;
            acc = seq(c, acc);
            acc_span = Span {
                at,
                kids: vec![span, acc_span],
            };
        }
        Ok((acc, acc_span))
    }

    fn block<C>(&mut self, body: fn(&mut Self) -> PResult<(C, Span)>) -> PResult<(C, Span)> {
        self.sym("{")?;
        let inner = body(self)?;
        self.sym("}")?;
        Ok(inner)
    }

    pub(crate) fn ann_command(&mut self) -> PResult<(AnnCommand<Identifier>, Span)> {
        self.sequence(Self::ann_simple, AnnCommand::seq)
    }

    fn ann_simple(&mut self) -> PResult<(AnnCommand<Identifier>, Span)> {
        let at = self.here();
        if self.eat_kw("skip") {
            return Ok((AnnCommand::Skip, Span::leaf(at)));
        }
        if self.eat_kw("if") {
            let b = self.condition()?;
            self.kw("then")?;
            let (t, ts) = self.block(Self::ann_command)?;
            self.kw("else")?;
            let (f, fs) = self.block(Self::ann_command)?;
            return Ok((
                AnnCommand::If(b, Box::new(t), Box::new(f)),
                Span {
                    at,
                    kids: vec![ts, fs],
                },
            ));
        }
        if self.eat_kw("while") {
            let b = self.condition()?;
            self.kw("invariant")?;
            let inv = self.assertion()?;
            self.kw("do")?;
            let (body, bs) = self.block(Self::ann_command)?;
            return Ok((
                AnnCommand::While(b, inv, Box::new(body)),
                Span { at, kids: vec![bs] },
            ));
        }
        if *self.peek() == Tok::Sym("{") {
            return self.block(Self::ann_command);
        }
        if self.word().is_some() {
            let x = self.variable()?;
            self.sym(":=")?;
            let e = self.expr()?;
            return Ok((AnnCommand::Assign(x, e), Span::leaf(at)));
        }
        self.expect_here("`{`");
        self.expect_here(Identifier::KIND);
        Err(Fail::Soft)
    }

    pub(crate) fn sa_command(&mut self) -> PResult<(SaCommand, Span)> {
        self.sequence(Self::sa_simple, SaCommand::seq)
    }

    fn sa_simple(&mut self) -> PResult<(SaCommand, Span)> {
        let at = self.here();
        if self.eat_kw("skip") {
            return Ok((SaCommand::Skip, Span::leaf(at)));
        }
        if self.eat_kw("if") {
            let b = self.condition()?;
            self.kw("then")?;
            let (t, ts) = self.block(Self::sa_command)?;
            self.kw("else")?;
            let (f, fs) = self.block(Self::sa_command)?;
            return Ok((
                SaCommand::If(b, Box::new(t), Box::new(f)),
                Span {
                    at,
                    kids: vec![ts, fs],
                },
            ));
        }
        if self.eat_kw("for") {
            self.sym("(")?;
            let init = self.renaming()?;
            self.sym(";")?;
            let cond = self.condition()?;
            self.sym(";")?;
            let update = self.renaming()?;
            self.sym(")")?;
            self.kw("invariant")?;
            let invariant = self.assertion()?;
            self.kw("do")?;
            let (body, bs) = self.block(Self::sa_command)?;
            let l = ForLoop {
                init,
                cond,
                update,
                invariant,
                body,
            };
            return Ok((SaCommand::For(Box::new(l)), Span { at, kids: vec![bs] }));
        }
        if *self.peek() == Tok::Sym("{") {
            return self.block(Self::sa_command);
        }
        if self.word().is_some() {
            let x = self.variable()?;
            self.sym(":=")?;
            let e = self.expr()?;
            return Ok((SaCommand::Assign(x, e), Span::leaf(at)));
        }
        self.expect_here("`{`");
        self.expect_here(SaVar::KIND);
        Err(Fail::Soft)
    }

    /// `[t := s, ...]`; the comma after the last pair is optional.
    fn renaming(&mut self) -> PResult<Renaming> {
        let at = self.here();
        self.sym("[")?;
        let mut pairs = Vec::new();
        while *self.peek() != Tok::Sym("]") {
            let t: SaVar = self.variable()?;
            self.sym(":=")?;
            let s: SaVar = self.variable()?;
            pairs.push((t, s));
            if !self.eat_sym(",") {
                break;
            }
        }
        self.sym("]")?;
        Renaming::new(pairs)
            .or_else(|source| self.hard(at, |line, col| ParseError::Renaming { line, col, source }))
    }

    // ---- units ----

    /// `define f(p, ...) = e;` or, for an uninterpreted symbol, `define f(p, ...);`.
    fn declarations(&mut self) -> PResult<Vec<FunctionDecl>> {
        let mut order: Vec<Identifier> = Vec::new();
        let mut decls: BTreeMap<Identifier, (FunctionDecl, (u32, u32))> = BTreeMap::new();
        self.check_functions = false;
        while self.eat_kw("define") {
            let at = self.here();
            let name = self.identifier()?;
            self.sym("(")?;
            let mut params = vec![self.pattern()?];
            while self.eat_sym(",") {
                params.push(self.pattern()?);
            }
            self.sym(")")?;
            let body = if self.eat_sym("=") {
                Some(self.expr::<Identifier>()?)
            } else {
                None
            };
            self.sym(";")?;

            // equations for one symbol may repeat; an uninterpreted symbol is declared once
            let repeated = decls.get(&name);
            if repeated.is_some_and(|(d, _)| d.clauses.is_empty() || body.is_none()) {
                self.check_functions = true;
                return self.hard(at, |line, col| ParseError::ConflictingDeclaration {
                    line,
                    col,
                    name,
                });
            }
            let arity = params.len();
            let entry = decls.entry(name.clone()).or_insert_with(|| {
                order.push(name.clone());
                (FunctionDecl::uninterpreted(name.clone(), arity), at)
            });
            if let Some(body) = body {
                entry.0.clauses.push(Clause { params, body });
            }
        }
        self.check_functions = true;

        let list: Vec<FunctionDecl> = order.iter().map(|n| decls[n].0.clone()).collect();
        match SymbolTable::from_decls(&list) {
            Ok(t) => {
                self.symbols = t;
                Ok(list)
            }
            Err(source) => {
                let at = symbol_error_name(&source)
                    .and_then(|n| decls.get(n))
                    .map(|(_, at)| *at)
                    .unwrap_or_else(|| self.here());
                self.hard(at, |line, col| ParseError::Symbol { line, col, source })
            }
        }
    }

    fn pattern(&mut self) -> PResult<Pattern> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Pattern::Lit(n))
            }
            Tok::Sym("-") if matches!(self.peek_at(1), Tok::Int(_)) => {
                self.bump();
                let Tok::Int(n) = self.peek().clone() else {
                    unreachable!()
                };
                self.bump();
                Ok(Pattern::Lit(-n))
            }
            _ => {
                self.expect_here("integer");
                Ok(Pattern::Var(self.identifier()?))
            }
        }
    }

    /// Declarations, then one `requires` and one `ensures` in either order,
    /// then the program.
    pub(crate) fn unit<V: Variable, C>(
        &mut self,
        program: fn(&mut Self) -> PResult<(C, Span)>,
    ) -> PResult<(SourceUnit<V, C>, Span)> {
        let declarations = self.declarations()?;
        let mut pre = None;
        let mut post = None;
        loop {
            let at = self.here();
            let (slot, clause) = if self.at_kw("requires") {
                (&mut pre, "requires")
            } else if self.at_kw("ensures") {
                (&mut post, "ensures")
            } else {
                break;
            };
            if slot.is_some() {
                return Err(Fail::Hard(ParseError::Duplicate {
                    line: at.0,
                    col: at.1,
                    clause,
                }));
            }
            self.bump();
            let a = self.assertion()?;
            self.sym(";")?;
            match clause {
                "requires" => pre = Some(a),
                _ => post = Some(a),
            }
        }
        let (Some(pre), Some(post)) = (pre, post) else {
            return Err(Fail::Soft);
        };
        let (program, span) = program(self)?;
        self.end()?;
        Ok((
            SourceUnit {
                declarations,
                pre,
                post,
                program,
            },
            span,
        ))
    }
}

fn symbol_error_name(e: &SymbolError) -> Option<&Identifier> {
    match e {
        SymbolError::NullaryFunction(n) | SymbolError::Undeclared(n) => Some(n),
        SymbolError::ClauseArity { name, .. }
        | SymbolError::RepeatedParam { name, .. }
        | SymbolError::UnboundVariable { name, .. }
        | SymbolError::NotDecreasing { name }
        | SymbolError::Arity { name, .. } => Some(name),
    }
}
