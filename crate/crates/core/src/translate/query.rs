//! Query goals: the subject and each metavariable become logic variables.

use crate::hohh::{QueryGoal, SimpleType, Term};
use crate::lf::kernel::Checker;
use crate::lf::parse::Query;
use crate::lf::subst::{unshift_family, Instantiate, Normalizer};
use crate::lf::syntax::{Context, Family, Object, Signature, Sym};

use super::{goal_for, phi, Mode};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QueryError {
    #[error("query type is ill-formed: {0}")]
    IllFormed(String),
    #[error("`{0}` is applied to arguments; query variables must occur unapplied")]
    AppliedMeta(Sym),
    #[error("the type of `{0}` depends on variables bound inside the query")]
    DependentMeta(Sym),
    #[error("cannot determine the type of `{0}`")]
    Untyped(Sym),
}

/// A query ready for the solver, with what is needed to read answers back.
#[derive(Clone, Debug)]
pub struct QueryPlan {
    pub ty: Family,
    /// Metavariables in order of first occurrence, with their expected LF
    /// types. These types may mention other metavariables.
    pub metas: Vec<(Sym, Family)>,
    /// Name of the logic variable standing for the inhabitant.
    pub subject: Sym,
    pub goal: QueryGoal,
}

/// Builds the goal `M : ty` for query `q`. Logic variable `i < metas.len()`
/// is metavariable `i`; the last one is the subject.
pub fn plan_query(sig: &Signature, q: &Query, mode: Mode) -> Result<QueryPlan, QueryError> {
    let checker = Checker::new(sig).allowing_metas();
    checker.check_is_type(&Context::new(), &q.ty).map_err(|e| QueryError::IllFormed(e.to_string()))?;
    let ty = Normalizer::default().family(&q.ty).map_err(|e| QueryError::IllFormed(e.to_string()))?;
    let mut typer = MetaTyper { sig, found: Vec::new() };
    typer.family(&Context::new(), &ty)?;
    let mut metas = Vec::new();
    for x in &q.free {
        match typer.found.iter().find(|(y, _)| y == x) {
            Some((_, a)) => metas.push((x.clone(), a.clone())),
            None => return Err(QueryError::Untyped(x.clone())),
        }
    }
    let subject = super::fresh_name("M", &q.free);
    let mut vars: Vec<(Sym, SimpleType)> = metas.iter().map(|(x, a)| (x.clone(), phi(a))).collect();
    vars.push((subject.clone(), phi(&ty)));
    let index = |x: &Sym| metas.iter().position(|(y, _)| y == x).expect("metavariable was typed");
    let goal = goal_for(mode, &ty, &Term::lvar(metas.len()), &|x| Term::lvar(index(x)));
    Ok(QueryPlan { ty, metas, subject, goal: QueryGoal { vars, goal } })
}

struct MetaTyper<'s> {
    sig: &'s Signature,
    found: Vec<(Sym, Family)>,
}

impl MetaTyper<'_> {
    fn family(&mut self, ctx: &Context, a: &Family) -> Result<(), QueryError> {
        match a {
            Family::Base(c, args) => {
                let kind = self.sig.kind_of(c).ok_or_else(|| QueryError::IllFormed(format!("unknown family `{c}`")))?;
                let mut doms = Vec::new();
                let mut k = kind.clone();
                for m in args {
                    let crate::lf::syntax::Kind::Pi(_, dom, rest) = k else {
                        return Err(QueryError::IllFormed(format!("`{c}` has too many arguments")));
                    };
                    doms.push(self.norm(&dom)?);
                    k = rest.instantiate(std::slice::from_ref(m));
                }
                for (m, dom) in args.iter().zip(doms) {
                    self.object(ctx, m, &dom)?;
                }
                Ok(())
            }
            Family::Pi(x, dom, cod) => {
                self.family(ctx, dom)?;
                self.family(&ctx.extended(x.clone(), (**dom).clone()), cod)
            }
        }
    }

    fn norm(&self, a: &Family) -> Result<Family, QueryError> {
        Normalizer::default().family(a).map_err(|e| QueryError::IllFormed(e.to_string()))
    }

    /// Walks `m`, expected at type `expected` in `ctx`.
    fn object(&mut self, ctx: &Context, m: &Object, expected: &Family) -> Result<(), QueryError> {
        match m {
            Object::Meta(x) => {
                if !self.found.iter().any(|(y, _)| y == x) {
                    let closed = unshift_family(expected, ctx.len(), 0).ok_or_else(|| QueryError::DependentMeta(x.clone()))?;
                    self.found.push((x.clone(), closed));
                }
                Ok(())
            }
            Object::Lam(x, dom, body) => match expected {
                Family::Pi(_, _, cod) => self.object(&ctx.extended(x.clone(), (**dom).clone()), body, cod),
                _ => Err(QueryError::IllFormed("abstraction at a base type".into())),
            },
            Object::App(..) | Object::Const(_) | Object::Var(_) => {
                let (head, args) = m.spine();
                let head_ty = match head {
                    Object::Const(c) => self.sig.type_of(c).cloned(),
                    Object::Var(i) => ctx.lookup(*i),
                    Object::Meta(x) => return Err(QueryError::AppliedMeta(x.clone())),
                    _ => None,
                };
                let mut cur = self.norm(&head_ty.ok_or_else(|| QueryError::IllFormed("unknown head".into()))?)?;
                for a in args {
                    let Family::Pi(_, dom, cod) = cur else {
                        return Err(QueryError::IllFormed("too many arguments".into()));
                    };
                    self.object(ctx, a, &dom)?;
                    cur = self.norm(&cod.instantiate(std::slice::from_ref(a)))?;
                }
                Ok(())
            }
        }
    }
}
