//! Goal and clause formulas, programs, and a printer shared by the
//! mathematical display and the λProlog emitter.

use std::collections::HashSet;
use std::fmt;

use indexmap::IndexMap;

use super::term::{Head, SimpleType, Term};
use crate::lf::syntax::{sym, Binder, Sym};

/// Name of the distinguished typing predicate.
pub const HASTYPE: &str = "hastype";

/// Predicate constant applied to its arguments.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub pred: Sym,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn hastype(subject: Term, ty: Term) -> Atom {
        Atom { pred: sym(HASTYPE), args: vec![subject, ty] }
    }

    fn map_terms(&self, f: impl Fn(&Term) -> Term) -> Atom {
        Atom { pred: self.pred.clone(), args: self.args.iter().map(f).collect() }
    }
}

/// Goals `G ::= ⊤ | A | D ⊃ G | ∀x.G` and clauses `D ::= A | G ⊃ D | ∀x.D`
/// share one representation; [`Formula::is_goal`] and
/// [`Formula::is_clause`] check the grammar.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    Atom(Atom),
    Imp(Box<Formula>, Box<Formula>),
    All(Binder, SimpleType, Box<Formula>),
}

impl Formula {
    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn all(x: Binder, ty: SimpleType, body: Formula) -> Formula {
        Formula::All(x, ty, Box::new(body))
    }

    pub fn hastype(subject: Term, ty: Term) -> Formula {
        Formula::Atom(Atom::hastype(subject, ty))
    }

    pub fn is_goal(&self) -> bool {
        match self {
            Formula::True | Formula::Atom(_) => true,
            Formula::Imp(d, g) => d.is_clause() && g.is_goal(),
            Formula::All(_, _, g) => g.is_goal(),
        }
    }

    pub fn is_clause(&self) -> bool {
        match self {
            Formula::True => false,
            Formula::Atom(_) => true,
            Formula::Imp(g, d) => g.is_goal() && d.is_clause(),
            Formula::All(_, _, d) => d.is_clause(),
        }
    }

    pub fn shift(&self, d: usize) -> Formula {
        self.shift_from(d, 0)
    }

    fn shift_from(&self, d: usize, cutoff: usize) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::Atom(a) => Formula::Atom(a.map_terms(|t| t.shift_from(d, cutoff))),
            Formula::Imp(a, b) => Formula::imp(a.shift_from(d, cutoff), b.shift_from(d, cutoff)),
            Formula::All(x, ty, b) => Formula::all(x.clone(), ty.clone(), b.shift_from(d, cutoff + 1)),
        }
    }

    /// Substitutes for the innermost free indices, as [`Term::instantiate`].
    pub fn instantiate(&self, vals: &[Term]) -> Formula {
        self.inst_at(vals, 0)
    }

    fn inst_at(&self, vals: &[Term], depth: usize) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::Atom(a) => Formula::Atom(a.map_terms(|t| t.inst_at(vals, depth))),
            Formula::Imp(a, b) => Formula::imp(a.inst_at(vals, depth), b.inst_at(vals, depth)),
            Formula::All(x, ty, b) => Formula::all(x.clone(), ty.clone(), b.inst_at(vals, depth + 1)),
        }
    }

    /// Applies `f` to every term, passing the number of enclosing ∀s.
    pub fn map_terms(&self, f: &mut impl FnMut(&Term, usize) -> Term) -> Formula {
        self.map_terms_at(f, 0)
    }

    fn map_terms_at(&self, f: &mut impl FnMut(&Term, usize) -> Term, depth: usize) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::Atom(a) => Formula::Atom(Atom {
                pred: a.pred.clone(),
                args: a.args.iter().map(|t| f(t, depth)).collect(),
            }),
            Formula::Imp(a, b) => Formula::imp(a.map_terms_at(f, depth), b.map_terms_at(f, depth)),
            Formula::All(x, ty, b) => Formula::all(x.clone(), ty.clone(), b.map_terms_at(f, depth + 1)),
        }
    }

    /// Removes `⊤ ⊃` premises.
    pub fn simplify_top(&self) -> Formula {
        match self {
            Formula::Imp(a, b) if **a == Formula::True => b.simplify_top(),
            Formula::Imp(a, b) => Formula::imp(a.simplify_top(), b.simplify_top()),
            Formula::All(x, ty, b) => Formula::all(x.clone(), ty.clone(), b.simplify_top()),
            other => other.clone(),
        }
    }

    /// Number of `⊃` premises along the clause spine.
    pub fn premise_count(&self) -> usize {
        match self {
            Formula::Imp(_, b) => 1 + b.premise_count(),
            Formula::All(_, _, b) => b.premise_count(),
            _ => 0,
        }
    }
}

/// Clause together with the declaration it was generated from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProgramClause {
    pub origin: Sym,
    pub formula: Formula,
}

/// The signature Ξ (including `hastype`) and the clause list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub types: IndexMap<Sym, SimpleType>,
    pub clauses: Vec<ProgramClause>,
}

impl Default for Program {
    fn default() -> Self {
        let mut types = IndexMap::new();
        types.insert(
            sym(HASTYPE),
            SimpleType::arrows([SimpleType::Obj, SimpleType::Type], SimpleType::Prop),
        );
        Program { types, clauses: Vec::new() }
    }
}

impl Program {
    pub fn new() -> Self {
        Self::default()
    }

    /// Ξ entries other than `hastype`, in declaration order.
    pub fn declarations(&self) -> impl Iterator<Item = (&Sym, &SimpleType)> {
        self.types.iter().filter(|(k, _)| &***k != HASTYPE)
    }

    pub fn clause_for(&self, origin: &str) -> Option<&Formula> {
        self.clauses.iter().find(|c| &*c.origin == origin).map(|c| &c.formula)
    }
}

// ---------------------------------------------------------------------------
// printing

/// Concrete notation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    /// `λx. t`, `∀x. G`, `⊃`, `⊤`.
    Math,
    /// `X\ t`, `pi X\ G`, `=>`, `true`; bound names are capitalised.
    LambdaProlog,
}

/// Printer with a scope of bound names and a naming function for
/// eigenvariables and logic variables.
pub struct Printer<'a> {
    style: Style,
    stack: Vec<String>,
    free: &'a dyn Fn(&Head) -> String,
}

fn default_free(h: &Head) -> String {
    match h {
        Head::Eigen(e) => format!("c{e}"),
        Head::LVar(v) => format!("_X{v}"),
        Head::Const(c) => c.to_string(),
        Head::Bound(i) => format!("#{i}"),
    }
}

fn consts_term(t: &Term, out: &mut HashSet<String>) {
    t.any_head(&mut |h| {
        if let Head::Const(c) = h {
            out.insert(c.to_string());
        }
        false
    });
}

fn consts_formula(f: &Formula, out: &mut HashSet<String>) {
    match f {
        Formula::True => {}
        Formula::Atom(a) => {
            out.insert(a.pred.to_string());
            a.args.iter().for_each(|t| consts_term(t, out));
        }
        Formula::Imp(a, b) => {
            consts_formula(a, out);
            consts_formula(b, out);
        }
        Formula::All(_, _, b) => consts_formula(b, out),
    }
}

impl<'a> Printer<'a> {
    pub fn new(style: Style) -> Printer<'static> {
        Printer { style, stack: Vec::new(), free: &default_free }
    }

    pub fn with_free_names(style: Style, free: &'a dyn Fn(&Head) -> String) -> Printer<'a> {
        Printer { style, stack: Vec::new(), free }
    }

    fn fresh(&self, hint: &str, avoid: &HashSet<String>) -> String {
        let base = if hint == "_" || hint.is_empty() { "x" } else { hint };
        let base: String = match self.style {
            Style::Math => base.to_string(),
            Style::LambdaProlog => {
                let mut cs = base.chars();
                let first = cs.next().unwrap();
                let first = if first.is_alphabetic() { first.to_uppercase().collect::<String>() } else { "X".into() };
                let rest: String = cs.filter(|c| c.is_alphanumeric() || *c == '_').collect();
                first + &rest
            }
        };
        let taken = |s: &str| self.stack.iter().any(|t| t == s) || avoid.contains(s);
        if !taken(&base) {
            return base;
        }
        let stem = base.trim_end_matches(|c: char| c.is_ascii_digit()).to_string();
        (1..).map(|k| format!("{stem}{k}")).find(|s| !taken(s)).unwrap()
    }

    fn head(&self, h: &Head) -> String {
        match h {
            Head::Const(c) => c.to_string(),
            Head::Bound(i) if *i < self.stack.len() => self.stack[self.stack.len() - 1 - i].clone(),
            other => (self.free)(other),
        }
    }

    pub fn term(&mut self, t: &Term) -> String {
        let mut out = String::new();
        self.term_into(t, false, &mut out);
        out
    }

    fn term_into(&mut self, t: &Term, atomic: bool, out: &mut String) {
        match t {
            Term::Lam(x, _, body) => {
                if atomic {
                    out.push('(');
                }
                let mut avoid = HashSet::new();
                consts_term(body, &mut avoid);
                let name = self.fresh(x.name(), &avoid);
                match self.style {
                    Style::Math => out.push_str(&format!("λ{name}. ")),
                    Style::LambdaProlog => out.push_str(&format!("{name}\\ ")),
                }
                self.stack.push(name);
                self.term_into(body, false, out);
                self.stack.pop();
                if atomic {
                    out.push(')');
                }
            }
            Term::App(h, args) => {
                let paren = atomic && !args.is_empty();
                if paren {
                    out.push('(');
                }
                out.push_str(&self.head(h));
                for a in args {
                    out.push(' ');
                    self.term_into(a, true, out);
                }
                if paren {
                    out.push(')');
                }
            }
        }
    }

    pub fn formula(&mut self, f: &Formula) -> String {
        let mut out = String::new();
        self.formula_into(f, 0, &mut out);
        out
    }

    /// `prec`: 0 top, 1 left of an implication.
    fn formula_into(&mut self, f: &Formula, prec: u8, out: &mut String) {
        match f {
            Formula::True => out.push_str(match self.style {
                Style::Math => "⊤",
                Style::LambdaProlog => "true",
            }),
            Formula::Atom(a) => {
                out.push_str(&a.pred);
                for t in &a.args {
                    out.push(' ');
                    self.term_into(t, true, out);
                }
            }
            Formula::Imp(a, b) => {
                if prec > 0 {
                    out.push('(');
                }
                self.formula_into(a, 1, out);
                out.push_str(match self.style {
                    Style::Math => " ⊃ ",
                    Style::LambdaProlog => " => ",
                });
                self.formula_into(b, 0, out);
                if prec > 0 {
                    out.push(')');
                }
            }
            Formula::All(x, _, b) => {
                let mut avoid = HashSet::new();
                consts_formula(b, &mut avoid);
                let name = self.fresh(x.name(), &avoid);
                match self.style {
                    Style::Math => {
                        if prec > 0 {
                            out.push('(');
                        }
                        out.push_str(&format!("∀{name}. "));
                        self.stack.push(name);
                        self.formula_into(b, 0, out);
                        self.stack.pop();
                        if prec > 0 {
                            out.push(')');
                        }
                    }
                    Style::LambdaProlog => {
                        if prec > 0 {
                            out.push('(');
                        }
                        out.push_str(&format!("pi {name}\\ "));
                        self.stack.push(name);
                        self.formula_into(b, 0, out);
                        self.stack.pop();
                        if prec > 0 {
                            out.push(')');
                        }
                    }
                }
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Printer::new(Style::Math).term(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Printer::new(Style::Math).formula(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn append_nil_clause() -> Formula {
        // ∀l. hastype (appNil l) (append nil l l)
        Formula::all(
            Binder::new("l"),
            SimpleType::Obj,
            Formula::hastype(
                Term::capp("appNil", vec![Term::bound(0)]),
                Term::capp("append", vec![Term::konst("nil"), Term::bound(0), Term::bound(0)]),
            ),
        )
    }

    #[test]
    fn grammar_checks() {
        let c = append_nil_clause();
        assert!(c.is_clause());
        assert!(c.is_goal());
        let t = Formula::imp(Formula::True, c.clone());
        assert!(t.is_clause());
        assert!(!Formula::imp(c.clone(), Formula::True).is_clause());
        assert!(Formula::imp(c, Formula::True).is_goal());
        assert!(!Formula::True.is_clause());
    }

    #[test]
    fn printing_styles() {
        let c = append_nil_clause();
        assert_eq!(c.to_string(), "∀l. hastype (appNil l) (append nil l l)");
        assert_eq!(
            Printer::new(Style::LambdaProlog).formula(&c),
            "pi L\\ hastype (appNil L) (append nil L L)"
        );
    }

    #[test]
    fn simplify_removes_top_premises_only() {
        let body = Formula::hastype(Term::bound(0), Term::konst("nat"));
        let f = Formula::all(Binder::new("x"), SimpleType::Obj, Formula::imp(Formula::True, body.clone()));
        assert_eq!(f.simplify_top(), Formula::all(Binder::new("x"), SimpleType::Obj, body.clone()));
        let g = Formula::imp(body.clone(), body);
        assert_eq!(g.simplify_top(), g);
    }
}
