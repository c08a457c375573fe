//! Translation of LF signatures and queries into hohh programs and goals.

mod emit;
mod query;
mod read;

pub use emit::{emit_lambdaprolog, emit_split};
pub use query::{plan_query, QueryError, QueryPlan};
pub use read::{parse_lambdaprolog, ReadError};

use crate::hohh::{Formula, Program, ProgramClause, SimpleType, Term};
use crate::lf::syntax::{Classifier, Family, Kind, Object, Signature, Sym};
use crate::strictness::{strict_for_translation, StrictContext};

/// Which judgment translation to use for signature clauses and query goals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    Naive,
    #[default]
    Optimized,
}

/// Simple type of objects classified by `a`.
pub fn phi(a: &Family) -> SimpleType {
    match a {
        Family::Base(..) => SimpleType::Obj,
        Family::Pi(_, a, b) => SimpleType::arrow(phi(a), phi(b)),
    }
}

/// Simple type of families classified by `k`.
pub fn phi_kind(k: &Kind) -> SimpleType {
    match k {
        Kind::Type => SimpleType::Type,
        Kind::Pi(_, a, k) => SimpleType::arrow(phi(a), phi_kind(k)),
    }
}

/// Erases type annotations. Query metavariables are mapped by `metas`.
pub fn encode_with(m: &Object, metas: &dyn Fn(&Sym) -> Term) -> Term {
    match m {
        Object::Const(c) => Term::App(crate::hohh::Head::Const(c.clone()), Vec::new()),
        Object::Var(i) => Term::bound(*i),
        Object::Meta(x) => metas(x),
        Object::Lam(x, a, body) => Term::Lam(x.clone(), phi(a), Box::new(encode_with(body, metas))),
        Object::App(..) => {
            let (head, args) = m.spine();
            let args = args.into_iter().map(|a| encode_with(a, metas)).collect();
            encode_with(head, metas).apply(args)
        }
    }
}

/// Encoding of an object without metavariables.
pub fn encode(m: &Object) -> Term {
    encode_with(m, &|x| panic!("metavariable `{x}` has no encoding"))
}

/// Encoding of a base family `a M1 .. Mn`.
pub fn encode_family_with(a: &Family, metas: &dyn Fn(&Sym) -> Term) -> Term {
    match a {
        Family::Base(c, args) => Term::App(
            crate::hohh::Head::Const(c.clone()),
            args.iter().map(|m| encode_with(m, metas)).collect(),
        ),
        Family::Pi(..) => panic!("only base families have an encoding"),
    }
}

pub fn encode_family(a: &Family) -> Term {
    encode_family_with(a, &|x| panic!("metavariable `{x}` has no encoding"))
}

type Metas<'a> = &'a dyn Fn(&Sym) -> Term;

fn no_metas(x: &Sym) -> Term {
    panic!("metavariable `{x}` in a signature type")
}

/// `M x` where `M` lives outside the new binder.
fn apply_fresh(subject: &Term) -> Term {
    subject.shift(1).apply(vec![Term::bound(0)])
}

/// The naive translation of `subject : a`.
pub fn translate_naive(a: &Family, subject: &Term) -> Formula {
    naive(a, subject, &no_metas)
}

fn naive(a: &Family, subject: &Term, metas: Metas) -> Formula {
    match a {
        Family::Base(..) => Formula::hastype(subject.clone(), encode_family_with(a, metas)),
        Family::Pi(x, dom, cod) => Formula::all(
            x.clone(),
            phi(dom),
            Formula::imp(naive(&dom.shift(1), &Term::bound(0), metas), naive(cod, &apply_fresh(subject), metas)),
        ),
    }
}

/// Positive translation: premises for binders that are strict in the rest
/// of the type become `⊤`. `prefix` holds the binders already traversed.
pub fn translate_optimized_pos(prefix: &StrictContext, a: &Family, subject: &Term) -> Formula {
    pos(prefix, a, subject, &no_metas)
}

fn pos(prefix: &StrictContext, a: &Family, subject: &Term, metas: Metas) -> Formula {
    match a {
        Family::Base(..) => Formula::hastype(subject.clone(), encode_family_with(a, metas)),
        Family::Pi(x, dom, cod) => {
            let premise = if strict_for_translation(prefix, x, dom, cod).is_some() {
                Formula::True
            } else {
                neg(&dom.shift(1), &Term::bound(0), metas)
            };
            let mut inner = prefix.clone();
            inner.push_candidate(x.clone(), (**dom).clone());
            Formula::all(x.clone(), phi(dom), Formula::imp(premise, pos(&inner, cod, &apply_fresh(subject), metas)))
        }
    }
}

/// Negative translation: argument types are translated positively with an
/// empty binder prefix.
pub fn translate_optimized_neg(a: &Family, subject: &Term) -> Formula {
    neg(a, subject, &no_metas)
}

fn neg(a: &Family, subject: &Term, metas: Metas) -> Formula {
    match a {
        Family::Base(..) => Formula::hastype(subject.clone(), encode_family_with(a, metas)),
        Family::Pi(x, dom, cod) => Formula::all(
            x.clone(),
            phi(dom),
            Formula::imp(
                pos(&StrictContext::new(), &dom.shift(1), &Term::bound(0), metas),
                neg(cod, &apply_fresh(subject), metas),
            ),
        ),
    }
}

/// Formula stating that `subject` has type `a`, as used for goals.
pub fn goal_for(mode: Mode, a: &Family, subject: &Term, metas: &dyn Fn(&Sym) -> Term) -> Formula {
    match mode {
        Mode::Naive => naive(a, subject, metas),
        Mode::Optimized => neg(a, subject, metas),
    }
}

/// Clause for constant `c : a`.
pub fn clause_for(mode: Mode, c: &str, a: &Family) -> Formula {
    let subject = Term::konst(c);
    match mode {
        Mode::Naive => translate_naive(a, &subject),
        Mode::Optimized => translate_optimized_pos(&StrictContext::new(), a, &subject),
    }
}

/// Translates a checked signature. Type families contribute declarations
/// only; object constants contribute a declaration and one clause each.
/// Clauses are not simplified.
pub fn translate_signature(sig: &Signature, mode: Mode) -> Program {
    let mut p = Program::new();
    for d in sig.iter() {
        match &d.class {
            Classifier::Kind(k) => {
                p.types.insert(d.name.clone(), phi_kind(k));
            }
            Classifier::Type(a) => {
                p.types.insert(d.name.clone(), phi(a));
                p.clauses.push(ProgramClause { origin: d.name.clone(), formula: clause_for(mode, &d.name, a) });
            }
        }
    }
    p
}

/// Removes `⊤ ⊃` premises from every clause.
pub fn simplify_program(p: &Program) -> Program {
    Program {
        types: p.types.clone(),
        clauses: p
            .clauses
            .iter()
            .map(|c| ProgramClause { origin: c.origin.clone(), formula: c.formula.simplify_top() })
            .collect(),
    }
}

/// Replaces metavariables by closed objects.
pub fn replace_metas_family(a: &Family, val: &dyn Fn(&Sym) -> Option<Object>) -> Family {
    match a {
        Family::Base(c, ms) => Family::Base(c.clone(), ms.iter().map(|m| replace_metas(m, val)).collect()),
        Family::Pi(x, d, b) => Family::Pi(
            x.clone(),
            Box::new(replace_metas_family(d, val)),
            Box::new(replace_metas_family(b, val)),
        ),
    }
}

pub fn replace_metas(m: &Object, val: &dyn Fn(&Sym) -> Option<Object>) -> Object {
    match m {
        Object::Meta(x) => val(x).unwrap_or_else(|| m.clone()),
        Object::Const(_) | Object::Var(_) => m.clone(),
        Object::Lam(x, a, b) => {
            Object::Lam(x.clone(), Box::new(replace_metas_family(a, val)), Box::new(replace_metas(b, val)))
        }
        Object::App(f, a) => Object::App(Box::new(replace_metas(f, val)), Box::new(replace_metas(a, val))),
    }
}

/// Binder used for the subject of a query goal, avoiding `taken`.
pub(crate) fn fresh_name(hint: &str, taken: &[Sym]) -> Sym {
    let ok = |s: &str| !taken.iter().any(|t| &**t == s);
    if ok(hint) {
        return crate::lf::syntax::sym(hint);
    }
    (1..).map(|k| format!("{hint}{k}")).find(|s| ok(s)).map(|s| crate::lf::syntax::sym(&s)).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hohh::{Printer, Style};
    use crate::lf::parse::{parse_family, parse_signature};

    const APPEND: &str = "
        nat : type. z : nat. s : nat -> nat.
        list : type. nil : list. cons : nat -> list -> list.
        append : list -> list -> list -> type.
        appNil : {l:list} append nil l l.
        appCons : {x:nat}{l:list}{k:list}{m:list} append l k m -> append (cons x l) k (cons x m).";

    fn show(f: &Formula) -> String {
        Printer::new(Style::Math).formula(f)
    }

    #[test]
    fn phi_examples() {
        let sig = parse_signature(APPEND).unwrap();
        assert_eq!(phi(&parse_family("nat", &sig).unwrap()), SimpleType::Obj);
        assert_eq!(phi_kind(sig.kind_of("append").unwrap()).to_string(), "lf_obj -> lf_obj -> lf_obj -> lf_type");
        assert_eq!(phi_kind(&Kind::Type), SimpleType::Type);
        assert_eq!(phi(sig.type_of("s").unwrap()).to_string(), "lf_obj -> lf_obj");
    }

    #[test]
    fn naive_clauses() {
        let sig = parse_signature(APPEND).unwrap();
        let p = translate_signature(&sig, Mode::Naive);
        assert_eq!(p.declarations().count(), 9);
        assert_eq!(p.clauses.len(), 6);
        assert_eq!(show(p.clause_for("appNil").unwrap()), "∀l. hastype l list ⊃ hastype (appNil l) (append nil l l)");
        assert_eq!(
            show(p.clause_for("appCons").unwrap()),
            "∀x. hastype x nat ⊃ ∀l. hastype l list ⊃ ∀k. hastype k list ⊃ ∀m. hastype m list ⊃ \
             ∀x1. hastype x1 (append l k m) ⊃ hastype (appCons x l k m x1) (append (cons x l) k (cons x m))"
        );
    }

    #[test]
    fn optimized_clauses() {
        let sig = parse_signature(APPEND).unwrap();
        let p = simplify_program(&translate_signature(&sig, Mode::Optimized));
        assert_eq!(show(p.clause_for("appNil").unwrap()), "∀l. hastype (appNil l) (append nil l l)");
        assert_eq!(
            show(p.clause_for("appCons").unwrap()),
            "∀x. ∀l. ∀k. ∀m. ∀x1. hastype x1 (append l k m) ⊃ hastype (appCons x l k m x1) (append (cons x l) k (cons x m))"
        );
        assert_eq!(p.clause_for("appCons").unwrap().premise_count(), 1);
        assert_eq!(p.clause_for("appNil").unwrap().premise_count(), 0);
        // s's argument is not strict in nat
        assert_eq!(show(p.clause_for("s").unwrap()), "∀x. hastype x nat ⊃ hastype (s x) nat");
        let raw = translate_signature(&sig, Mode::Optimized);
        assert_eq!(show(raw.clause_for("appNil").unwrap()), "∀l. ⊤ ⊃ hastype (appNil l) (append nil l l)");
    }

    #[test]
    fn higher_order_argument() {
        let sig = parse_signature("nat : type. z : nat. c : (nat -> nat) -> nat.").unwrap();
        let p = translate_signature(&sig, Mode::Naive);
        assert_eq!(
            show(p.clause_for("c").unwrap()),
            "∀x. (∀x1. hastype x1 nat ⊃ hastype (x x1) nat) ⊃ hastype (c x) nat"
        );
    }

    #[test]
    fn encode_erases_annotations() {
        let sig = parse_signature(APPEND).unwrap();
        let m = crate::lf::parse::parse_object("[y:nat] y", &sig).unwrap();
        assert_eq!(encode(&m), Term::lam("y", SimpleType::Obj, Term::bound(0)));
        let m = crate::lf::parse::parse_object("cons z nil", &sig).unwrap();
        assert_eq!(encode(&m), Term::capp("cons", vec![Term::konst("z"), Term::konst("nil")]));
    }

    #[test]
    fn empty_signature() {
        let p = translate_signature(&Signature::new(), Mode::Optimized);
        assert!(p.clauses.is_empty());
        assert_eq!(p.types.len(), 1);
    }
}
