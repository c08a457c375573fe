//! Reader for the λProlog subset produced by the emitter. Binder types are
//! inferred from the declared constant types; unconstrained binders default
//! to `lf_obj`.

use indexmap::IndexMap;

use crate::hohh::{Atom, Formula, Head, Program, ProgramClause, SimpleType, Term};
use crate::lf::syntax::{sym, Binder, Sym};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {message}")]
pub struct ReadError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Backslash,
    LParen,
    RParen,
    Dot,
    Imp,
    Arrow,
    Eof,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
}

fn lex(src: &str) -> Result<Lexer, ReadError> {
    let mut toks = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize| {
        if chars[*i] == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
        *i += 1;
    };
    while i < chars.len() {
        let c = chars[i];
        let (l, co) = (line, col);
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col);
        } else if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col);
            }
        } else if c.is_alphanumeric() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                s.push(chars[i]);
                advance(&mut i, &mut line, &mut col);
            }
            toks.push((Tok::Ident(s), l, co));
        } else {
            let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
            let (tok, n) = match c {
                '\\' => (Tok::Backslash, 1),
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                '.' => (Tok::Dot, 1),
                _ if two == "=>" => (Tok::Imp, 2),
                _ if two == "->" => (Tok::Arrow, 2),
                _ => return Err(ReadError { line: l, col: co, message: format!("unexpected character `{c}`") }),
            };
            for _ in 0..n {
                advance(&mut i, &mut line, &mut col);
            }
            toks.push((tok, l, co));
        }
    }
    toks.push((Tok::Eof, line, col));
    Ok(Lexer { toks })
}

/// Type with inference variables.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Ty {
    Var(usize),
    Obj,
    Type,
    Prop,
    Arrow(Box<Ty>, Box<Ty>),
}

impl Ty {
    fn from_simple(t: &SimpleType) -> Ty {
        match t {
            SimpleType::Obj => Ty::Obj,
            SimpleType::Type => Ty::Type,
            SimpleType::Prop => Ty::Prop,
            SimpleType::Arrow(a, b) => Ty::Arrow(Box::new(Ty::from_simple(a)), Box::new(Ty::from_simple(b))),
        }
    }
}

#[derive(Default)]
struct Infer {
    subst: Vec<Option<Ty>>,
}

impl Infer {
    fn fresh(&mut self) -> Ty {
        self.subst.push(None);
        Ty::Var(self.subst.len() - 1)
    }

    fn walk(&self, t: &Ty) -> Ty {
        match t {
            Ty::Var(v) => match &self.subst[*v] {
                Some(u) => self.walk(u),
                None => t.clone(),
            },
            _ => t.clone(),
        }
    }

    fn occurs(&self, v: usize, t: &Ty) -> bool {
        match self.walk(t) {
            Ty::Var(w) => v == w,
            Ty::Arrow(a, b) => self.occurs(v, &a) || self.occurs(v, &b),
            _ => false,
        }
    }

    fn unify(&mut self, a: &Ty, b: &Ty) -> bool {
        let (a, b) = (self.walk(a), self.walk(b));
        match (a, b) {
            (Ty::Var(v), Ty::Var(w)) if v == w => true,
            (Ty::Var(v), t) | (t, Ty::Var(v)) => {
                if self.occurs(v, &t) {
                    return false;
                }
                self.subst[v] = Some(t);
                true
            }
            (Ty::Arrow(a1, b1), Ty::Arrow(a2, b2)) => self.unify(&a1, &a2) && self.unify(&b1, &b2),
            (x, y) => x == y,
        }
    }

    fn finish(&self, t: &Ty) -> SimpleType {
        match self.walk(t) {
            Ty::Var(_) | Ty::Obj => SimpleType::Obj,
            Ty::Type => SimpleType::Type,
            Ty::Prop => SimpleType::Prop,
            Ty::Arrow(a, b) => SimpleType::arrow(self.finish(&a), self.finish(&b)),
        }
    }
}

/// Term whose binder types are inference variables.
enum RTerm {
    Lam(Binder, usize, Box<RTerm>),
    App(Head, Vec<RTerm>),
}

enum RForm {
    True,
    Atom(Sym, Vec<RTerm>),
    Imp(Box<RForm>, Box<RForm>),
    All(Binder, usize, Box<RForm>),
}

struct Reader {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    types: IndexMap<Sym, SimpleType>,
    /// Bound names with their inference variables, innermost last.
    scope: Vec<(String, Ty)>,
    infer: Infer,
    /// Inference variable of each binder, by binder id.
    binder_tys: Vec<Ty>,
}

fn is_var(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_uppercase() || c == '_')
}

impl Reader {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ReadError> {
        let (_, line, col) = self.toks[self.pos];
        Err(ReadError { line, col, message: message.into() })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok) -> Result<(), ReadError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {t:?}, found {:?}", self.peek()))
        }
    }

    fn ident(&mut self) -> Result<String, ReadError> {
        match self.bump() {
            Tok::Ident(s) => Ok(s),
            t => {
                self.pos -= 1;
                self.err(format!("expected identifier, found {t:?}"))
            }
        }
    }

    fn simple_type(&mut self) -> Result<SimpleType, ReadError> {
        let a = match self.bump() {
            Tok::LParen => {
                let t = self.simple_type()?;
                self.expect(Tok::RParen)?;
                t
            }
            Tok::Ident(s) if s == "lf_obj" => SimpleType::Obj,
            Tok::Ident(s) if s == "lf_type" => SimpleType::Type,
            Tok::Ident(s) if s == "o" => SimpleType::Prop,
            t => {
                self.pos -= 1;
                return self.err(format!("unknown type {t:?}"));
            }
        };
        if *self.peek() == Tok::Arrow {
            self.bump();
            Ok(SimpleType::arrow(a, self.simple_type()?))
        } else {
            Ok(a)
        }
    }

    fn binder(&mut self) -> Result<(Binder, usize), ReadError> {
        let name = self.ident()?;
        if !is_var(&name) {
            return self.err(format!("bound variable `{name}` must be capitalised"));
        }
        self.expect(Tok::Backslash)?;
        let ty = self.infer.fresh();
        self.binder_tys.push(ty.clone());
        self.scope.push((name.clone(), ty));
        Ok((Binder::new(&name.to_lowercase()), self.binder_tys.len() - 1))
    }

    fn formula(&mut self) -> Result<RForm, ReadError> {
        let lhs = self.formula_primary()?;
        if *self.peek() == Tok::Imp {
            self.bump();
            let rhs = self.formula()?;
            return Ok(RForm::Imp(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn formula_primary(&mut self) -> Result<RForm, ReadError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(s) if s == "true" => {
                self.bump();
                Ok(RForm::True)
            }
            Tok::Ident(s) if s == "pi" => {
                self.bump();
                let paren = *self.peek() == Tok::LParen;
                if paren {
                    self.bump();
                }
                let (x, id) = self.binder()?;
                let body = self.formula()?;
                self.scope.pop();
                if paren {
                    self.expect(Tok::RParen)?;
                }
                Ok(RForm::All(x, id, Box::new(body)))
            }
            Tok::Ident(p) => {
                self.bump();
                let Some(pty) = self.types.get(p.as_str()).cloned() else {
                    return self.err(format!("undeclared predicate `{p}`"));
                };
                let mut args = Vec::new();
                let mut ty = Ty::from_simple(&pty);
                while self.starts_atom() {
                    let (a, aty) = self.term_atom()?;
                    let r = self.infer.fresh();
                    if !self.infer.unify(&ty, &Ty::Arrow(Box::new(aty), Box::new(r.clone()))) {
                        return self.err(format!("ill-typed argument of `{p}`"));
                    }
                    ty = r;
                    args.push(a);
                }
                if !self.infer.unify(&ty, &Ty::Prop) {
                    return self.err(format!("`{p}` is not fully applied to a proposition"));
                }
                Ok(RForm::Atom(sym(&p), args))
            }
            t => self.err(format!("expected a formula, found {t:?}")),
        }
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::LParen => true,
            Tok::Ident(s) => s != "pi" && s != "true",
            _ => false,
        }
    }

    fn term(&mut self) -> Result<(RTerm, Ty), ReadError> {
        if let (Tok::Ident(s), Tok::Backslash) = (self.peek().clone(), self.toks[self.pos + 1].0.clone()) {
            if is_var(&s) {
                let (x, id) = self.binder()?;
                let (body, bty) = self.term()?;
                self.scope.pop();
                let ty = Ty::Arrow(Box::new(self.binder_tys[id].clone()), Box::new(bty));
                return Ok((RTerm::Lam(x, id, Box::new(body)), ty));
            }
        }
        let (head, mut ty) = self.term_atom()?;
        let RTerm::App(h, mut args) = head else {
            if self.starts_atom() {
                return self.err("abstraction in head position");
            }
            return Ok((head, ty));
        };
        if !args.is_empty() && self.starts_atom() {
            return self.err("application in head position");
        }
        while self.starts_atom() {
            let (a, aty) = self.term_atom()?;
            let r = self.infer.fresh();
            if !self.infer.unify(&ty, &Ty::Arrow(Box::new(aty), Box::new(r.clone()))) {
                return self.err("ill-typed application");
            }
            ty = r;
            args.push(a);
        }
        Ok((RTerm::App(h, args), ty))
    }

    fn term_atom(&mut self) -> Result<(RTerm, Ty), ReadError> {
        match self.bump() {
            Tok::LParen => {
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(s) => {
                if let Some(k) = self.scope.iter().rev().position(|(n, _)| *n == s) {
                    let ty = self.scope[self.scope.len() - 1 - k].1.clone();
                    return Ok((RTerm::App(Head::Bound(k), Vec::new()), ty));
                }
                if is_var(&s) {
                    self.pos -= 1;
                    return self.err(format!("unbound variable `{s}`"));
                }
                match self.types.get(s.as_str()) {
                    Some(t) => Ok((RTerm::App(Head::Const(sym(&s)), Vec::new()), Ty::from_simple(t))),
                    None => {
                        self.pos -= 1;
                        self.err(format!("undeclared constant `{s}`"))
                    }
                }
            }
            t => {
                self.pos -= 1;
                self.err(format!("expected a term, found {t:?}"))
            }
        }
    }

    fn build_term(&self, t: RTerm) -> Term {
        match t {
            RTerm::Lam(x, id, b) => Term::Lam(x, self.infer.finish(&self.binder_tys[id]), Box::new(self.build_term(*b))),
            RTerm::App(h, args) => Term::App(h, args.into_iter().map(|a| self.build_term(a)).collect()),
        }
    }

    fn build_formula(&self, f: RForm) -> Formula {
        match f {
            RForm::True => Formula::True,
            RForm::Atom(p, args) => {
                Formula::Atom(Atom { pred: p, args: args.into_iter().map(|a| self.build_term(a)).collect() })
            }
            RForm::Imp(a, b) => Formula::imp(self.build_formula(*a), self.build_formula(*b)),
            RForm::All(x, id, b) => Formula::all(x, self.infer.finish(&self.binder_tys[id]), self.build_formula(*b)),
        }
    }
}

fn origin_of(f: &Formula, i: usize) -> Sym {
    match f {
        Formula::All(_, _, b) | Formula::Imp(_, b) => origin_of(b, i),
        Formula::Atom(a) => match a.args.first() {
            Some(Term::App(Head::Const(c), _)) => c.clone(),
            _ => sym(&format!("clause{i}")),
        },
        Formula::True => sym(&format!("clause{i}")),
    }
}

/// Reads declarations and clauses. Also accepts `sig`/`module` headers and
/// `end`, so the two halves of a split program can be read concatenated.
pub fn parse_lambdaprolog(src: &str) -> Result<Program, ReadError> {
    let lexer = lex(src)?;
    let mut r = Reader {
        toks: lexer.toks,
        pos: 0,
        types: Program::new().types,
        scope: Vec::new(),
        infer: Infer::default(),
        binder_tys: Vec::new(),
    };
    let mut clauses = Vec::new();
    let mut declared: Vec<Sym> = Vec::new();
    loop {
        match r.peek().clone() {
            Tok::Eof => break,
            Tok::Ident(s) if s == "sig" || s == "module" => {
                r.bump();
                r.ident()?;
                r.expect(Tok::Dot)?;
            }
            Tok::Ident(s) if s == "end" => {
                r.bump();
            }
            Tok::Ident(s) if s == "kind" => {
                r.bump();
                let name = r.ident()?;
                if name != "lf_obj" && name != "lf_type" {
                    return r.err(format!("unexpected kind `{name}`"));
                }
                r.expect(Tok::Ident("type".into()))?;
                r.expect(Tok::Dot)?;
            }
            Tok::Ident(s) if s == "type" => {
                r.bump();
                let name = r.ident()?;
                let ty = r.simple_type()?;
                r.expect(Tok::Dot)?;
                let name = sym(&name);
                if let Some(old) = r.types.get(&name) {
                    if *old != ty || declared.contains(&name) {
                        return r.err(format!("`{name}` declared twice"));
                    }
                }
                declared.push(name.clone());
                r.types.insert(name, ty);
            }
            _ => {
                r.infer = Infer::default();
                r.binder_tys.clear();
                let f = r.formula()?;
                r.expect(Tok::Dot)?;
                let formula = r.build_formula(f);
                clauses.push(ProgramClause { origin: origin_of(&formula, clauses.len()), formula });
            }
        }
    }
    Ok(Program { types: r.types, clauses })
}
