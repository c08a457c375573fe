//! Simply typed λ-terms in spine form, kept β-normal by hereditary
//! substitution. Bound variables are de Bruijn indices.

use std::fmt;

use crate::lf::syntax::{Binder, Sym};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SimpleType {
    Obj,
    Type,
    Prop,
    Arrow(Box<SimpleType>, Box<SimpleType>),
}

impl SimpleType {
    pub fn arrow(a: SimpleType, b: SimpleType) -> SimpleType {
        SimpleType::Arrow(Box::new(a), Box::new(b))
    }

    /// `a1 -> .. -> an -> target`
    pub fn arrows(args: impl IntoIterator<Item = SimpleType>, target: SimpleType) -> SimpleType {
        let args: Vec<_> = args.into_iter().collect();
        args.into_iter().rev().fold(target, |acc, a| SimpleType::arrow(a, acc))
    }

    /// Splits into argument types and atomic target.
    pub fn split(&self) -> (Vec<&SimpleType>, &SimpleType) {
        let mut args = Vec::new();
        let mut cur = self;
        while let SimpleType::Arrow(a, b) = cur {
            args.push(&**a);
            cur = b;
        }
        (args, cur)
    }

    /// Does `o` occur to the left of an arrow?
    pub fn has_prop_argument(&self) -> bool {
        self.split().0.iter().any(|a| a.mentions_prop())
    }

    fn mentions_prop(&self) -> bool {
        match self {
            SimpleType::Prop => true,
            SimpleType::Obj | SimpleType::Type => false,
            SimpleType::Arrow(a, b) => a.mentions_prop() || b.mentions_prop(),
        }
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleType::Obj => f.write_str("lf_obj"),
            SimpleType::Type => f.write_str("lf_type"),
            SimpleType::Prop => f.write_str("o"),
            SimpleType::Arrow(a, b) => {
                if matches!(**a, SimpleType::Arrow(..)) {
                    write!(f, "({a}) -> {b}")
                } else {
                    write!(f, "{a} -> {b}")
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Head {
    Const(Sym),
    /// de Bruijn index.
    Bound(usize),
    /// Eigenvariable introduced by ∀R (or locally by unification).
    Eigen(usize),
    /// Logic variable.
    LVar(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Lam(Binder, SimpleType, Box<Term>),
    App(Head, Vec<Term>),
}

impl Term {
    pub fn konst(c: &str) -> Term {
        Term::App(Head::Const(crate::lf::syntax::sym(c)), Vec::new())
    }

    pub fn capp(c: &str, args: Vec<Term>) -> Term {
        Term::App(Head::Const(crate::lf::syntax::sym(c)), args)
    }

    pub fn bound(i: usize) -> Term {
        Term::App(Head::Bound(i), Vec::new())
    }

    pub fn eigen(e: usize) -> Term {
        Term::App(Head::Eigen(e), Vec::new())
    }

    pub fn lvar(v: usize) -> Term {
        Term::App(Head::LVar(v), Vec::new())
    }

    pub fn lam(x: &str, ty: SimpleType, body: Term) -> Term {
        Term::Lam(Binder::new(x), ty, Box::new(body))
    }

    pub fn shift(&self, d: usize) -> Term {
        self.shift_from(d, 0)
    }

    pub fn shift_from(&self, d: usize, cutoff: usize) -> Term {
        if d == 0 {
            return self.clone();
        }
        match self {
            Term::Lam(x, ty, b) => Term::Lam(x.clone(), ty.clone(), Box::new(b.shift_from(d, cutoff + 1))),
            Term::App(h, args) => {
                let h = match h {
                    Head::Bound(i) if *i >= cutoff => Head::Bound(i + d),
                    _ => h.clone(),
                };
                Term::App(h, args.iter().map(|a| a.shift_from(d, cutoff)).collect())
            }
        }
    }

    /// Replaces the `n = vals.len()` innermost free indices: `vals[k]` for
    /// index `n-1-k`; remaining free indices drop by `n`. Redexes created at
    /// heads are reduced hereditarily.
    pub fn instantiate(&self, vals: &[Term]) -> Term {
        self.inst_at(vals, 0)
    }

    pub(crate) fn inst_at(&self, vals: &[Term], depth: usize) -> Term {
        let n = vals.len();
        if n == 0 {
            return self.clone();
        }
        match self {
            Term::Lam(x, ty, b) => Term::Lam(x.clone(), ty.clone(), Box::new(b.inst_at(vals, depth + 1))),
            Term::App(h, args) => {
                let args: Vec<Term> = args.iter().map(|a| a.inst_at(vals, depth)).collect();
                match h {
                    Head::Bound(i) if *i >= depth && *i < depth + n => {
                        let v = vals[n - 1 - (i - depth)].shift(depth);
                        v.apply(args)
                    }
                    Head::Bound(i) if *i >= depth + n => Term::App(Head::Bound(i - n), args),
                    _ => Term::App(h.clone(), args),
                }
            }
        }
    }

    /// β-normal application.
    pub fn apply(self, args: Vec<Term>) -> Term {
        let mut t = self;
        for a in args {
            t = match t {
                Term::Lam(_, _, body) => body.instantiate(std::slice::from_ref(&a)),
                Term::App(h, mut xs) => {
                    xs.push(a);
                    Term::App(h, xs)
                }
            };
        }
        t
    }

    pub fn head(&self) -> Option<&Head> {
        match self {
            Term::App(h, _) => Some(h),
            Term::Lam(..) => None,
        }
    }

    /// Does bound index `i` occur free?
    pub fn mentions_bound(&self, i: usize) -> bool {
        match self {
            Term::Lam(_, _, b) => b.mentions_bound(i + 1),
            Term::App(h, args) => *h == Head::Bound(i) || args.iter().any(|a| a.mentions_bound(i)),
        }
    }

    pub fn any_head(&self, p: &mut impl FnMut(&Head) -> bool) -> bool {
        match self {
            Term::Lam(_, _, b) => b.any_head(p),
            Term::App(h, args) => p(h) || args.iter().any(|a| a.any_head(p)),
        }
    }

    pub fn lvars(&self, out: &mut Vec<usize>) {
        self.any_head(&mut |h| {
            if let Head::LVar(v) = h {
                if !out.contains(v) {
                    out.push(*v);
                }
            }
            false
        });
    }

    pub fn is_closed(&self) -> bool {
        !self.any_head(&mut |h| matches!(h, Head::Eigen(_) | Head::LVar(_)))
    }

    /// η-contraction: `λx. t x` with `x` not free in `t` becomes `t`.
    pub fn eta_contract(&self) -> Term {
        match self {
            Term::Lam(x, ty, b) => {
                let b = b.eta_contract();
                if let Term::App(h, args) = &b {
                    if let Some(Term::App(Head::Bound(0), last)) = args.last() {
                        let rest = &args[..args.len() - 1];
                        if last.is_empty()
                            && *h != Head::Bound(0)
                            && !rest.iter().any(|a| a.mentions_bound(0))
                        {
                            let h = match h {
                                Head::Bound(i) => Head::Bound(i - 1),
                                other => other.clone(),
                            };
                            let rest = rest.iter().map(|a| a.unshift()).collect();
                            return Term::App(h, rest);
                        }
                    }
                }
                Term::Lam(x.clone(), ty.clone(), Box::new(b))
            }
            Term::App(h, args) => Term::App(h.clone(), args.iter().map(Term::eta_contract).collect()),
        }
    }

    /// Lowers free indices by one; index 0 must not occur.
    fn unshift(&self) -> Term {
        self.lower_from(0)
    }

    fn lower_from(&self, cutoff: usize) -> Term {
        match self {
            Term::Lam(x, ty, b) => Term::Lam(x.clone(), ty.clone(), Box::new(b.lower_from(cutoff + 1))),
            Term::App(h, args) => {
                let h = match h {
                    Head::Bound(i) if *i > cutoff => Head::Bound(i - 1),
                    _ => h.clone(),
                };
                Term::App(h, args.iter().map(|a| a.lower_from(cutoff)).collect())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id() -> Term {
        Term::lam("x", SimpleType::Obj, Term::bound(0))
    }

    #[test]
    fn apply_reduces_hereditarily() {
        // (λf. f z) (λx. x)  ~>  z
        let t = Term::lam(
            "f",
            SimpleType::arrow(SimpleType::Obj, SimpleType::Obj),
            Term::App(Head::Bound(0), vec![Term::konst("z")]),
        );
        assert_eq!(t.apply(vec![id()]), Term::konst("z"));
    }

    #[test]
    fn instantiate_lowers_outer_indices() {
        // body under one binder: c #0 #1 ; instantiate #0 := z
        let t = Term::capp("c", vec![Term::bound(0), Term::bound(1)]);
        assert_eq!(t.instantiate(&[Term::konst("z")]), Term::capp("c", vec![Term::konst("z"), Term::bound(0)]));
    }

    #[test]
    fn eta_contract_simple() {
        let t = Term::lam("x", SimpleType::Obj, Term::capp("s", vec![Term::bound(0)]));
        assert_eq!(t.eta_contract(), Term::konst("s"));
        assert_eq!(id().eta_contract(), id());
    }

    #[test]
    fn simple_type_display() {
        let t = SimpleType::arrows([SimpleType::Obj, SimpleType::Obj], SimpleType::Type);
        assert_eq!(t.to_string(), "lf_obj -> lf_obj -> lf_type");
        let h = SimpleType::arrow(SimpleType::arrow(SimpleType::Obj, SimpleType::Obj), SimpleType::Obj);
        assert_eq!(h.to_string(), "(lf_obj -> lf_obj) -> lf_obj");
    }
}
