//! Twelf-style concrete syntax.
//!
//! ```text
//! decl   ::= ident ':' term '.'
//! term   ::= '{' ident ':' term '}' term      Pi
//!          | '[' ident ':' term ']' term      lambda
//!          | app ('->' term)?
//! app    ::= atom+
//! atom   ::= ident | 'type' | '(' term ')'
//! ```
//!
//! `%` starts a line comment, `%{ ... }%` a block comment.

use std::fmt;

use super::syntax::{sym, Binder, Classifier, Decl, Family, Kind, Object, Pos, Signature, Sym};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)
    }
}

fn err<T>(pos: Pos, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, message: message.into() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Type,
    Colon,
    Dot,
    LBrace,
    RBrace,
    LBrack,
    RBrack,
    LParen,
    RParen,
    Arrow,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Type => f.write_str("`type`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::LBrack => f.write_str("`[`"),
            Tok::RBrack => f.write_str("`]`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    // open delimiters, for balance errors
    let mut open: Vec<(char, Pos)> = Vec::new();

    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, c: char| {
        *i += 1;
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };

    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, c);
            continue;
        }
        if c == '%' {
            if chars.get(i + 1) == Some(&'{') {
                // block comment
                let start = pos;
                advance(&mut i, &mut line, &mut col, '%');
                advance(&mut i, &mut line, &mut col, '{');
                loop {
                    if i >= chars.len() {
                        return err(start, "unterminated block comment");
                    }
                    if chars[i] == '}' && chars.get(i + 1) == Some(&'%') {
                        advance(&mut i, &mut line, &mut col, '}');
                        advance(&mut i, &mut line, &mut col, '%');
                        break;
                    }
                    let ch = chars[i];
                    advance(&mut i, &mut line, &mut col, ch);
                }
            } else {
                while i < chars.len() && chars[i] != '\n' {
                    let ch = chars[i];
                    advance(&mut i, &mut line, &mut col, ch);
                }
            }
            continue;
        }
        let single = match c {
            ':' => Some(Tok::Colon),
            '.' => Some(Tok::Dot),
            '{' | '[' | '(' => {
                open.push((c, pos));
                Some(match c {
                    '{' => Tok::LBrace,
                    '[' => Tok::LBrack,
                    _ => Tok::LParen,
                })
            }
            '}' | ']' | ')' => {
                let want = match c {
                    '}' => '{',
                    ']' => '[',
                    _ => '(',
                };
                match open.pop() {
                    Some((o, _)) if o == want => {}
                    Some((o, opos)) => {
                        return err(pos, format!("`{c}` does not match `{o}` opened at {opos}"))
                    }
                    None => return err(pos, format!("unbalanced `{c}`")),
                }
                Some(match c {
                    '}' => Tok::RBrace,
                    ']' => Tok::RBrack,
                    _ => Tok::RParen,
                })
            }
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, pos));
            advance(&mut i, &mut line, &mut col, c);
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push((Tok::Arrow, pos));
            advance(&mut i, &mut line, &mut col, '-');
            advance(&mut i, &mut line, &mut col, '>');
            continue;
        }
        if is_ident_char(c) {
            let mut s = String::new();
            while i < chars.len() && is_ident_char(chars[i]) {
                s.push(chars[i]);
                let ch = chars[i];
                advance(&mut i, &mut line, &mut col, ch);
            }
            out.push((if s == "type" { Tok::Type } else { Tok::Ident(s) }, pos));
            continue;
        }
        return err(pos, format!("unexpected character `{c}`"));
    }
    if let Some((o, opos)) = open.pop() {
        return err(opos, format!("unclosed `{o}`"));
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

/// Surface term before scope resolution.
#[derive(Clone, Debug)]
enum Raw {
    Ident(String, Pos),
    Type(Pos),
    Pi(String, Box<Raw>, Box<Raw>, Pos),
    Lam(String, Box<Raw>, Box<Raw>, Pos),
    Arrow(Box<Raw>, Box<Raw>, Pos),
    App(Box<Raw>, Box<Raw>, Pos),
}

impl Raw {
    fn pos(&self) -> Pos {
        match self {
            Raw::Ident(_, p)
            | Raw::Type(p)
            | Raw::Pi(.., p)
            | Raw::Lam(.., p)
            | Raw::Arrow(.., p)
            | Raw::App(.., p) => *p,
        }
    }

    /// Does the classifier end in `type`?
    fn is_kind(&self) -> bool {
        match self {
            Raw::Type(_) => true,
            Raw::Pi(_, _, body, _) | Raw::Arrow(_, body, _) => body.is_kind(),
            _ => false,
        }
    }
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(src)?, at: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<Pos, ParseError> {
        let (t, p) = self.bump();
        if t == want {
            Ok(p)
        } else {
            err(p, format!("expected {want}, found {t}"))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), ParseError> {
        match self.bump() {
            (Tok::Ident(s), p) => Ok((s, p)),
            (t, p) => err(p, format!("expected an identifier, found {t}")),
        }
    }

    fn term(&mut self) -> Result<Raw, ParseError> {
        let pos = self.pos();
        match self.peek() {
            Tok::LBrace | Tok::LBrack => {
                let is_pi = *self.peek() == Tok::LBrace;
                self.bump();
                let (x, _) = self.ident()?;
                self.expect(Tok::Colon)?;
                let a = self.term()?;
                self.expect(if is_pi { Tok::RBrace } else { Tok::RBrack })?;
                let body = self.term()?;
                Ok(if is_pi {
                    Raw::Pi(x, Box::new(a), Box::new(body), pos)
                } else {
                    Raw::Lam(x, Box::new(a), Box::new(body), pos)
                })
            }
            _ => {
                let lhs = self.app()?;
                if *self.peek() == Tok::Arrow {
                    let p = self.bump().1;
                    let rhs = self.term()?;
                    Ok(Raw::Arrow(Box::new(lhs), Box::new(rhs), p))
                } else {
                    Ok(lhs)
                }
            }
        }
    }

    fn app(&mut self) -> Result<Raw, ParseError> {
        let mut head = self.atom()?;
        loop {
            match self.peek() {
                Tok::Ident(_) | Tok::Type | Tok::LParen => {
                    let arg = self.atom()?;
                    let p = head.pos();
                    head = Raw::App(Box::new(head), Box::new(arg), p);
                }
                // binders extend as far right as possible
                Tok::LBrace | Tok::LBrack => {
                    let arg = self.term()?;
                    let p = head.pos();
                    head = Raw::App(Box::new(head), Box::new(arg), p);
                }
                _ => return Ok(head),
            }
        }
    }

    fn atom(&mut self) -> Result<Raw, ParseError> {
        match self.bump() {
            (Tok::Ident(s), p) => Ok(Raw::Ident(s, p)),
            (Tok::Type, p) => Ok(Raw::Type(p)),
            (Tok::LParen, _) => {
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            (t, p) => err(p, format!("expected a term, found {t}")),
        }
    }
}

/// How unresolved identifiers are read.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Signature,
    Query,
}

struct Elab<'a> {
    sig: &'a Signature,
    mode: Mode,
    /// innermost binder last; `None` for arrow binders
    scope: Vec<Option<String>>,
}

impl Elab<'_> {
    fn lookup(&self, name: &str) -> Option<usize> {
        self.scope.iter().rev().position(|x| x.as_deref() == Some(name))
    }

    fn with_binder<T>(&mut self, x: Option<String>, f: impl FnOnce(&mut Self) -> T) -> T {
        self.scope.push(x);
        let r = f(self);
        self.scope.pop();
        r
    }

    fn kind(&mut self, r: &Raw) -> Result<Kind, ParseError> {
        match r {
            Raw::Type(_) => Ok(Kind::Type),
            Raw::Pi(x, a, k, _) => {
                let a = self.family(a)?;
                let k = self.with_binder(Some(x.clone()), |e| e.kind(k))?;
                Ok(Kind::Pi(Binder::new(x), Box::new(a), Box::new(k)))
            }
            Raw::Arrow(a, k, _) => {
                let a = self.family(a)?;
                let k = self.with_binder(None, |e| e.kind(k))?;
                Ok(Kind::Pi(Binder::anonymous(), Box::new(a), Box::new(k)))
            }
            other => err(other.pos(), "expected a kind"),
        }
    }

    fn family(&mut self, r: &Raw) -> Result<Family, ParseError> {
        match r {
            Raw::Pi(x, a, b, _) => {
                let a = self.family(a)?;
                let b = self.with_binder(Some(x.clone()), |e| e.family(b))?;
                Ok(Family::Pi(Binder::new(x), Box::new(a), Box::new(b)))
            }
            Raw::Arrow(a, b, _) => {
                let a = self.family(a)?;
                let b = self.with_binder(None, |e| e.family(b))?;
                Ok(Family::Pi(Binder::anonymous(), Box::new(a), Box::new(b)))
            }
            Raw::Ident(..) | Raw::App(..) => {
                let mut args = Vec::new();
                let mut cur = r;
                while let Raw::App(f, a, _) = cur {
                    args.push(&**a);
                    cur = f;
                }
                args.reverse();
                let Raw::Ident(head, p) = cur else {
                    return err(cur.pos(), "the head of a base type must be a type constant");
                };
                if self.lookup(head).is_some() {
                    return err(*p, format!("bound variable `{head}` used as a type family"));
                }
                let args = args.into_iter().map(|a| self.object(a)).collect::<Result<_, _>>()?;
                Ok(Family::Base(sym(head), args))
            }
            Raw::Lam(.., p) => err(*p, "abstraction in type position"),
            Raw::Type(p) => err(*p, "`type` is a kind, not a type"),
        }
    }

    fn object(&mut self, r: &Raw) -> Result<Object, ParseError> {
        match r {
            Raw::Ident(x, _) => Ok(match self.lookup(x) {
                Some(i) => Object::Var(i),
                None if self.mode == Mode::Query
                    && !self.sig.contains(x)
                    && x.starts_with(|c: char| c.is_uppercase()) =>
                {
                    Object::Meta(sym(x))
                }
                None => Object::Const(sym(x)),
            }),
            Raw::Lam(x, a, m, _) => {
                let a = self.family(a)?;
                let m = self.with_binder(Some(x.clone()), |e| e.object(m))?;
                Ok(Object::Lam(Binder::new(x), Box::new(a), Box::new(m)))
            }
            Raw::App(f, a, _) => Ok(Object::app(self.object(f)?, self.object(a)?)),
            Raw::Pi(.., p) | Raw::Arrow(.., p) => err(*p, "Pi type in object position"),
            Raw::Type(p) => err(*p, "`type` in object position"),
        }
    }
}

/// Parses a sequence of `name : classifier.` declarations in source order.
pub fn parse_signature(src: &str) -> Result<Signature, ParseError> {
    let mut p = Parser::new(src)?;
    let mut sig = Signature::new();
    while *p.peek() != Tok::Eof {
        let (name, pos) = match p.bump() {
            (Tok::Ident(s), pos) => (s, pos),
            (t, pos) => return err(pos, format!("expected a declaration, found {t}")),
        };
        p.expect(Tok::Colon)?;
        let raw = p.term()?;
        p.expect(Tok::Dot)?;
        let mut e = Elab { sig: &sig, mode: Mode::Signature, scope: Vec::new() };
        let class = if raw.is_kind() {
            Classifier::Kind(e.kind(&raw)?)
        } else {
            Classifier::Type(e.family(&raw)?)
        };
        let decl = Decl { name: sym(&name), class, pos: Some(pos) };
        if sig.push(decl).is_err() {
            return err(pos, format!("duplicate declaration `{name}`"));
        }
    }
    Ok(sig)
}

/// A query: a type whose capitalised identifiers not declared in the
/// signature are existential variables. The inhabitant is implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    /// Free variables in order of first occurrence.
    pub free: Vec<Sym>,
    pub ty: Family,
}

pub fn parse_query(src: &str, sig: &Signature) -> Result<Query, ParseError> {
    let mut p = Parser::new(src)?;
    let start = p.pos();
    let raw = p.term()?;
    if *p.peek() == Tok::Dot {
        p.bump();
    }
    if *p.peek() != Tok::Eof {
        let (t, pos) = p.bump();
        return err(pos, format!("unexpected {t} after query"));
    }
    if raw.is_kind() {
        return err(start, "a query must be a type, not a kind");
    }
    let mut e = Elab { sig, mode: Mode::Query, scope: Vec::new() };
    let ty = e.family(&raw)?;
    let (_, target) = ty.split_pis();
    if let Family::Base(head, _) = target {
        if sig.kind_of(head).is_none() {
            return err(start, format!("query head `{head}` is not a declared type constant"));
        }
    }
    let mut free = Vec::new();
    ty.metas(&mut free);
    Ok(Query { free, ty })
}

fn parse_single(src: &str) -> Result<Raw, ParseError> {
    let mut p = Parser::new(src)?;
    let raw = p.term()?;
    if *p.peek() != Tok::Eof {
        let (t, pos) = p.bump();
        return err(pos, format!("unexpected {t}"));
    }
    Ok(raw)
}

/// Parses a closed object; identifiers not bound locally are constants.
pub fn parse_object(src: &str, sig: &Signature) -> Result<Object, ParseError> {
    let raw = parse_single(src)?;
    Elab { sig, mode: Mode::Signature, scope: Vec::new() }.object(&raw)
}

pub fn parse_family(src: &str, sig: &Signature) -> Result<Family, ParseError> {
    let raw = parse_single(src)?;
    Elab { sig, mode: Mode::Signature, scope: Vec::new() }.family(&raw)
}

pub fn parse_kind(src: &str, sig: &Signature) -> Result<Kind, ParseError> {
    let raw = parse_single(src)?;
    Elab { sig, mode: Mode::Signature, scope: Vec::new() }.kind(&raw)
}

/// Parses an object in a scope of named variables (outermost first).
pub fn parse_object_in(src: &str, sig: &Signature, scope: &[&str]) -> Result<Object, ParseError> {
    let raw = parse_single(src)?;
    let scope = scope.iter().map(|s| Some(s.to_string())).collect();
    Elab { sig, mode: Mode::Signature, scope }.object(&raw)
}

pub fn parse_family_in(src: &str, sig: &Signature, scope: &[&str]) -> Result<Family, ParseError> {
    let raw = parse_single(src)?;
    let scope = scope.iter().map(|s| Some(s.to_string())).collect();
    Elab { sig, mode: Mode::Signature, scope }.family(&raw)
}
