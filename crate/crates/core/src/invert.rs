//! Reading hohh answers back as LF objects at a known type.

use indexmap::IndexMap;

use crate::hohh::{Head, SimpleType, Solution, Term};
use crate::lf::kernel::Checker;
use crate::lf::print::{family_in, object_in};
use crate::lf::subst::{Instantiate, Normalizer};
use crate::lf::syntax::{Context, Family, Object, Signature, Sym};
use crate::translate::{phi, replace_metas_family, QueryPlan};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvertError {
    #[error("unknown head `{0}`")]
    UnknownHead(String),
    #[error("`{head}` is applied to more arguments than its type allows")]
    TooManyArguments { head: String },
    #[error("term is not η-long: {0}")]
    NotEtaLong(String),
    #[error("inferred type `{found}` differs from expected `{expected}`")]
    TargetMismatch { found: String, expected: String },
    #[error("answer not closed: `{0}` contains uninstantiated variables")]
    NotClosed(Sym),
    #[error("normalisation failed: {0}")]
    Normalize(String),
    #[error("the types of {0:?} depend on each other")]
    Cyclic(Vec<Sym>),
}

fn normalize(a: &Family) -> Result<Family, InvertError> {
    Normalizer::default().family(a).map_err(|e| InvertError::Normalize(e.to_string()))
}

/// The LF object `m` denotes at type `ty` in `ctx`. `m` must be β-normal,
/// η-long and closed apart from variables bound in `ctx`.
pub fn invert(sig: &Signature, ctx: &Context, m: &Term, ty: &Family) -> Result<Object, InvertError> {
    let ty = normalize(ty)?;
    inv(&Checker::new(sig), ctx, m, &ty)
}

fn inv(checker: &Checker, ctx: &Context, m: &Term, ty: &Family) -> Result<Object, InvertError> {
    match (m, ty) {
        (Term::Lam(_, sty, body), Family::Pi(x, dom, cod)) => {
            if *sty != phi(dom) {
                return Err(InvertError::TargetMismatch {
                    found: sty.to_string(),
                    expected: family_in(ctx, dom),
                });
            }
            let body = inv(checker, &ctx.extended(x.clone(), (**dom).clone()), body, cod)?;
            Ok(Object::Lam(x.clone(), dom.clone(), Box::new(body)))
        }
        (Term::Lam(..), Family::Base(..)) => {
            Err(InvertError::TargetMismatch { found: "an abstraction".into(), expected: family_in(ctx, ty) })
        }
        (Term::App(..), Family::Pi(..)) => Err(InvertError::NotEtaLong(format!("{m} at `{}`", family_in(ctx, ty)))),
        (Term::App(h, args), Family::Base(..)) => {
            let (head, head_ty) = match h {
                Head::Const(c) => match checker.signature().type_of(c) {
                    Some(a) => (Object::Const(c.clone()), a.clone()),
                    None => return Err(InvertError::UnknownHead(c.to_string())),
                },
                Head::Bound(i) => match ctx.lookup(*i) {
                    Some(a) => (Object::Var(*i), a),
                    None => return Err(InvertError::UnknownHead(format!("#{i}"))),
                },
                Head::Eigen(_) | Head::LVar(_) => return Err(InvertError::NotClosed(crate::lf::syntax::sym(&m.to_string()))),
            };
            let mut cur = normalize(&head_ty)?;
            let mut out = head;
            for a in args {
                let Family::Pi(_, dom, cod) = cur else {
                    return Err(InvertError::TooManyArguments { head: object_in(ctx, &out) });
                };
                let a = inv(checker, ctx, a, &dom)?;
                cur = normalize(&cod.instantiate(std::slice::from_ref(&a)))?;
                out = Object::App(Box::new(out), Box::new(a));
            }
            if let Family::Pi(..) = cur {
                return Err(InvertError::NotEtaLong(object_in(ctx, &out)));
            }
            if !checker.conv_family(ctx, &cur, ty) {
                return Err(InvertError::TargetMismatch { found: family_in(ctx, &cur), expected: family_in(ctx, ty) });
            }
            Ok(out)
        }
    }
}

/// η-long form of `m` at `ty`. Constant types come from `types`; heads of
/// unknown type keep their arguments as they are.
pub fn eta_expand_answer(types: &IndexMap<Sym, SimpleType>, m: &Term, ty: &SimpleType) -> Term {
    expand(types, &mut Vec::new(), m, ty)
}

fn expand(types: &IndexMap<Sym, SimpleType>, scope: &mut Vec<SimpleType>, m: &Term, ty: &SimpleType) -> Term {
    match (m, ty) {
        (Term::Lam(x, xty, body), SimpleType::Arrow(_, b)) => {
            scope.push(xty.clone());
            let body = expand(types, scope, body, b);
            scope.pop();
            Term::Lam(x.clone(), xty.clone(), Box::new(body))
        }
        (Term::App(..), SimpleType::Arrow(a, b)) => {
            scope.push((**a).clone());
            let arg = expand(types, scope, &Term::bound(0), a);
            let body = expand(types, scope, &m.shift(1).apply(vec![arg]), b);
            scope.pop();
            Term::Lam(crate::lf::syntax::Binder::new("x"), (**a).clone(), Box::new(body))
        }
        (Term::App(h, args), _) => {
            let hty = match h {
                Head::Const(c) => types.get(c).cloned(),
                Head::Bound(i) if *i < scope.len() => Some(scope[scope.len() - 1 - i].clone()),
                _ => None,
            };
            let args = match hty {
                Some(hty) => {
                    let (arg_tys, _) = hty.split();
                    args.iter()
                        .enumerate()
                        .map(|(k, a)| match arg_tys.get(k) {
                            Some(t) => expand(types, scope, a, t),
                            None => a.clone(),
                        })
                        .collect()
                }
                None => args.clone(),
            };
            Term::App(h.clone(), args)
        }
        (Term::Lam(..), _) => m.clone(),
    }
}

/// An answer to a query in LF terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Answer {
    /// Values of the query's free variables, in order of first occurrence.
    pub bindings: Vec<(Sym, Object)>,
    pub inhabitant: Object,
    /// The query type with the bindings substituted.
    pub ty: Family,
}

/// Inverts the metavariable bindings and the subject of a solution.
pub fn invert_solution(
    sig: &Signature,
    types: &IndexMap<Sym, SimpleType>,
    plan: &QueryPlan,
    s: &Solution,
) -> Result<Answer, InvertError> {
    let mut known: Vec<Option<Object>> = vec![None; plan.metas.len()];
    let lookup = |known: &Vec<Option<Object>>, x: &Sym| {
        plan.metas.iter().position(|(y, _)| y == x).and_then(|i| known[i].clone())
    };
    let read = |name: &Sym, t: &Term, ty: &Family| -> Result<Object, InvertError> {
        if !t.is_closed() {
            return Err(InvertError::NotClosed(name.clone()));
        }
        let ty = normalize(ty)?;
        invert(sig, &Context::new(), &eta_expand_answer(types, t, &phi(&ty)), &ty)
    };
    loop {
        let mut progress = false;
        for (i, (x, a)) in plan.metas.iter().enumerate() {
            if known[i].is_some() {
                continue;
            }
            let a = replace_metas_family(a, &|y| lookup(&known, y));
            if a.has_metas() {
                continue;
            }
            known[i] = Some(read(x, &s.bindings[i].1, &a)?);
            progress = true;
        }
        if known.iter().all(Option::is_some) {
            break;
        }
        if !progress {
            let stuck = plan.metas.iter().zip(&known).filter(|(_, k)| k.is_none()).map(|((x, _), _)| x.clone());
            return Err(InvertError::Cyclic(stuck.collect()));
        }
    }
    let ty = normalize(&replace_metas_family(&plan.ty, &|y| lookup(&known, y)))?;
    let subject = &s.bindings[plan.metas.len()];
    let inhabitant = read(&subject.0, &subject.1, &ty)?;
    let bindings = plan.metas.iter().zip(known).map(|((x, _), o)| (x.clone(), o.unwrap())).collect();
    Ok(Answer { bindings, inhabitant, ty })
}
