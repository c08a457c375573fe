//! Logic-variable store and higher-order pattern unification.
//!
//! Logic variables and eigenvariables carry levels. A logic variable of
//! level `l` may only be instantiated with terms whose eigenvariables have
//! level `<= l`. Unification under a λ introduces a local eigenvariable of
//! level [`LOCAL_LEVEL`], which no logic variable can capture except by
//! abstraction. Equations outside the pattern fragment are postponed as
//! residuals and retried whenever a variable is bound.

use std::mem;

use super::term::{Head, SimpleType, Term};
use crate::lf::syntax::Binder;

/// Level of eigenvariables introduced while unifying under binders.
pub const LOCAL_LEVEL: usize = usize::MAX;

#[derive(Clone, Debug)]
pub struct VarInfo {
    pub level: usize,
    pub ty: SimpleType,
    pub binding: Option<Term>,
}

#[derive(Clone, Debug)]
pub struct EigenInfo {
    pub level: usize,
    pub ty: SimpleType,
}

/// Snapshot for backtracking.
#[derive(Clone, Debug)]
pub struct Mark {
    vars: usize,
    eigens: usize,
    trail: usize,
    residuals: Vec<(Term, Term)>,
}

#[derive(Clone, Debug, Default)]
pub struct Store {
    vars: Vec<VarInfo>,
    eigens: Vec<EigenInfo>,
    trail: Vec<usize>,
    residuals: Vec<(Term, Term)>,
    dirty: bool,
}

enum InvertError {
    Fail,
    NotPattern,
}

/// Bound on residual wake-up passes per unification call.
const MAX_WAKE_PASSES: usize = 10_000;

impl Store {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn new_var(&mut self, level: usize, ty: SimpleType) -> usize {
        self.vars.push(VarInfo { level, ty, binding: None });
        self.vars.len() - 1
    }

    pub fn new_eigen(&mut self, level: usize, ty: SimpleType) -> usize {
        self.eigens.push(EigenInfo { level, ty });
        self.eigens.len() - 1
    }

    pub fn var(&self, v: usize) -> &VarInfo {
        &self.vars[v]
    }

    pub fn eigen(&self, e: usize) -> &EigenInfo {
        &self.eigens[e]
    }

    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    pub fn residuals(&self) -> &[(Term, Term)] {
        &self.residuals
    }

    pub fn mark(&self) -> Mark {
        Mark {
            vars: self.vars.len(),
            eigens: self.eigens.len(),
            trail: self.trail.len(),
            residuals: self.residuals.clone(),
        }
    }

    pub fn undo(&mut self, m: &Mark) {
        while self.trail.len() > m.trail {
            let v = self.trail.pop().unwrap();
            if v < self.vars.len() {
                self.vars[v].binding = None;
            }
        }
        self.vars.truncate(m.vars);
        self.eigens.truncate(m.eigens);
        self.residuals = m.residuals.clone();
        self.dirty = false;
    }

    /// Instantiates `v`. The caller guarantees level soundness.
    pub fn bind(&mut self, v: usize, t: Term) {
        debug_assert!(self.vars[v].binding.is_none());
        self.vars[v].binding = Some(t);
        self.trail.push(v);
        self.dirty = true;
    }

    /// Dereferences bound logic variables at the head.
    pub fn whnf(&self, t: &Term) -> Term {
        let mut t = t.clone();
        loop {
            match &t {
                Term::App(Head::LVar(v), args) => match &self.vars[*v].binding {
                    Some(b) => t = b.clone().apply(args.clone()),
                    None => return t,
                },
                _ => return t,
            }
        }
    }

    /// Fully instantiated form.
    pub fn resolve(&self, t: &Term) -> Term {
        match self.whnf(t) {
            Term::Lam(x, ty, b) => Term::Lam(x, ty, Box::new(self.resolve(&b))),
            Term::App(h, args) => Term::App(h, args.iter().map(|a| self.resolve(a)).collect()),
        }
    }

    /// Unifies `a` and `b`, postponing non-pattern equations. Returns
    /// `false` on a definite clash.
    pub fn unify(&mut self, a: &Term, b: &Term) -> bool {
        self.eq(a, b) && self.wake()
    }

    /// Retries residuals until no new bindings occur.
    fn wake(&mut self) -> bool {
        let mut passes = 0;
        while self.dirty && !self.residuals.is_empty() && passes < MAX_WAKE_PASSES {
            passes += 1;
            self.dirty = false;
            let pending = mem::take(&mut self.residuals);
            for (a, b) in pending {
                if !self.eq(&a, &b) {
                    return false;
                }
            }
        }
        self.dirty = false;
        true
    }

    fn postpone(&mut self, a: Term, b: Term) -> bool {
        self.residuals.push((a, b));
        true
    }

    fn eq(&mut self, a: &Term, b: &Term) -> bool {
        let a = self.whnf(a);
        let b = self.whnf(b);
        match (a, b) {
            (Term::Lam(_, ty, ba), Term::Lam(_, _, bb)) => {
                let e = Term::eigen(self.new_eigen(LOCAL_LEVEL, ty));
                let ba = ba.instantiate(std::slice::from_ref(&e));
                let bb = bb.instantiate(std::slice::from_ref(&e));
                self.eq(&ba, &bb)
            }
            (Term::Lam(_, ty, body), other) | (other, Term::Lam(_, ty, body)) => {
                let e = Term::eigen(self.new_eigen(LOCAL_LEVEL, ty));
                let body = body.instantiate(std::slice::from_ref(&e));
                let other = other.apply(vec![e]);
                self.eq(&body, &other)
            }
            (Term::App(h1, a1), Term::App(h2, a2)) => match (&h1, &h2) {
                (Head::LVar(v1), Head::LVar(v2)) => self.flex_flex(*v1, a1, *v2, a2),
                (Head::LVar(v), _) => self.flex_rigid(*v, a1, Term::App(h2, a2)),
                (_, Head::LVar(v)) => self.flex_rigid(*v, a2, Term::App(h1, a1)),
                _ => {
                    if h1 != h2 || a1.len() != a2.len() {
                        return false;
                    }
                    a1.iter().zip(&a2).all(|(x, y)| self.eq(x, y))
                }
            },
        }
    }

    /// Eigenvariables the arguments denote, if `v args` is a pattern.
    fn pattern_args(&self, v: usize, args: &[Term]) -> Option<Vec<usize>> {
        let level = self.vars[v].level;
        let mut out = Vec::with_capacity(args.len());
        for a in args {
            match self.resolve(a).eta_contract() {
                Term::App(Head::Eigen(e), xs) if xs.is_empty() && self.eigens[e].level > level => {
                    if out.contains(&e) {
                        return None;
                    }
                    out.push(e);
                }
                _ => return None,
            }
        }
        Some(out)
    }

    fn flex_rigid(&mut self, v: usize, args: Vec<Term>, t: Term) -> bool {
        let flex = Term::App(Head::LVar(v), args.clone());
        let Some(pat) = self.pattern_args(v, &args) else { return self.postpone(flex, t) };
        self.solve_pattern(v, &pat, flex, t)
    }

    fn solve_pattern(&mut self, v: usize, pat: &[usize], flex: Term, t: Term) -> bool {
        let mark = self.mark();
        let dirty = self.dirty;
        match self.invert(v, pat, &t, 0, true) {
            Ok(body) => {
                let value = pat.iter().rev().fold(body, |acc, &e| {
                    Term::Lam(Binder::new("x"), self.eigens[e].ty.clone(), Box::new(acc))
                });
                self.bind(v, value);
                true
            }
            Err(InvertError::Fail) => false,
            Err(InvertError::NotPattern) => {
                // pruning done before giving up is not justified
                self.undo(&mark);
                self.dirty = dirty;
                self.postpone(flex, t)
            }
        }
    }

    fn flex_flex(&mut self, v1: usize, a1: Vec<Term>, v2: usize, a2: Vec<Term>) -> bool {
        let p1 = self.pattern_args(v1, &a1);
        let p2 = self.pattern_args(v2, &a2);
        let t1 = Term::App(Head::LVar(v1), a1);
        let t2 = Term::App(Head::LVar(v2), a2);
        if v1 == v2 {
            return match (p1, p2) {
                (Some(x), Some(y)) if x.len() == y.len() => {
                    if x == y {
                        return true;
                    }
                    let keep: Vec<usize> = (0..x.len()).filter(|&i| x[i] == y[i]).collect();
                    let info = self.vars[v1].clone();
                    let (arg_tys, target) = info.ty.split();
                    let z_ty = SimpleType::arrows(keep.iter().map(|&i| arg_tys[i].clone()), target.clone());
                    let z = self.new_var(info.level, z_ty);
                    let n = x.len();
                    let body = Term::App(Head::LVar(z), keep.iter().map(|&i| Term::bound(n - 1 - i)).collect());
                    let value = arg_tys.iter().rev().fold(body, |acc, ty| {
                        Term::Lam(Binder::new("x"), (*ty).clone(), Box::new(acc))
                    });
                    self.bind(v1, value);
                    true
                }
                _ => {
                    if t1 == t2 {
                        true
                    } else {
                        self.postpone(t1, t2)
                    }
                }
            };
        }
        let newer_first = (self.vars[v1].level, v1) > (self.vars[v2].level, v2);
        match (p1, p2) {
            (Some(p), _) if newer_first => self.solve_pattern(v1, &p, t1, t2),
            (_, Some(p)) => self.solve_pattern(v2, &p, t2, t1),
            (Some(p), None) => self.solve_pattern(v1, &p, t1, t2),
            (None, None) => self.postpone(t1, t2),
        }
    }

    /// Builds the body of the solution for `v pat = t`: pattern eigens
    /// become bound variables, inner logic variables are pruned or lowered.
    fn invert(&mut self, v: usize, pat: &[usize], t: &Term, depth: usize, rigid: bool) -> Result<Term, InvertError> {
        let level = self.vars[v].level;
        let err = if rigid { InvertError::Fail } else { InvertError::NotPattern };
        match self.whnf(t) {
            Term::Lam(x, ty, b) => Ok(Term::Lam(x, ty, Box::new(self.invert(v, pat, &b, depth + 1, rigid)?))),
            Term::App(Head::LVar(w), args) => {
                if w == v {
                    return Err(err);
                }
                self.invert_flex(v, pat, w, args, depth)
            }
            Term::App(h, args) => {
                let h = match h {
                    Head::Eigen(e) => match pat.iter().position(|&p| p == e) {
                        Some(k) => Head::Bound(depth + pat.len() - 1 - k),
                        None if self.eigens[e].level <= level => Head::Eigen(e),
                        None => return Err(err),
                    },
                    other => other,
                };
                let args = args
                    .iter()
                    .map(|a| self.invert(v, pat, a, depth, rigid))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Term::App(h, args))
            }
        }
    }

    fn invert_flex(&mut self, v: usize, pat: &[usize], w: usize, args: Vec<Term>, depth: usize) -> Result<Term, InvertError> {
        let level = self.vars[v].level;
        // classify each argument
        enum Arg {
            Keep(Term),
            Prune,
        }
        let mut classified = Vec::with_capacity(args.len());
        let mut var_like = true;
        let mut seen: Vec<Term> = Vec::new();
        for a in &args {
            let r = self.resolve(a).eta_contract();
            match &r {
                Term::App(Head::Bound(i), xs) if xs.is_empty() && *i < depth => {
                    if seen.contains(&r) {
                        var_like = false;
                    }
                    seen.push(r.clone());
                    classified.push(Arg::Keep(r));
                }
                Term::App(Head::Eigen(e), xs) if xs.is_empty() => {
                    if seen.contains(&r) {
                        var_like = false;
                    }
                    seen.push(r.clone());
                    if let Some(k) = pat.iter().position(|p| p == e) {
                        classified.push(Arg::Keep(Term::bound(depth + pat.len() - 1 - k)));
                    } else if self.eigens[*e].level <= level {
                        if self.eigens[*e].level <= self.vars[w].level {
                            var_like = false;
                        }
                        classified.push(Arg::Keep(r));
                    } else {
                        classified.push(Arg::Prune);
                    }
                }
                _ => {
                    var_like = false;
                    let inv = self.invert(v, pat, a, depth, false)?;
                    classified.push(Arg::Keep(inv));
                }
            }
        }
        let needs_prune = classified.iter().any(|c| matches!(c, Arg::Prune));
        if needs_prune && !var_like {
            return Err(InvertError::NotPattern);
        }
        let w_info = self.vars[w].clone();
        if !needs_prune && w_info.level <= level {
            let args = classified
                .into_iter()
                .map(|c| match c {
                    Arg::Keep(t) => t,
                    Arg::Prune => unreachable!(),
                })
                .collect();
            return Ok(Term::App(Head::LVar(w), args));
        }
        // w := λȳ. w2 ȳ' r̄, where ȳ' drops pruned arguments and r̄ raises w
        // over the pattern eigenvariables it may mention.
        let (arg_tys, target) = w_info.ty.split();
        let m = classified.len();
        if m > arg_tys.len() {
            return Err(InvertError::NotPattern);
        }
        let raise: Vec<usize> = pat
            .iter()
            .copied()
            .filter(|&e| self.eigens[e].level <= w_info.level)
            .filter(|&e| !args.iter().any(|a| self.resolve(a).eta_contract() == Term::eigen(e)))
            .collect();
        let rest = SimpleType::arrows(arg_tys[m..].iter().map(|t| (*t).clone()), target.clone());
        let keep: Vec<usize> = (0..m).filter(|&i| matches!(classified[i], Arg::Keep(_))).collect();
        let w2_ty = SimpleType::arrows(
            keep.iter().map(|&i| arg_tys[i].clone()).chain(raise.iter().map(|&e| self.eigens[e].ty.clone())),
            rest,
        );
        let w2 = self.new_var(w_info.level.min(level), w2_ty);
        let body = Term::App(
            Head::LVar(w2),
            keep.iter().map(|&i| Term::bound(m - 1 - i)).chain(raise.iter().map(|&e| Term::eigen(e))).collect(),
        );
        let value = arg_tys[..m]
            .iter()
            .rev()
            .fold(body, |acc, ty| Term::Lam(Binder::new("y"), (*ty).clone(), Box::new(acc)));
        self.bind(w, value);
        let raised = raise.iter().map(|e| {
            let k = pat.iter().position(|p| p == e).unwrap();
            Term::bound(depth + pat.len() - 1 - k)
        });
        let kept_args = classified
            .into_iter()
            .filter_map(|c| match c {
                Arg::Keep(t) => Some(t),
                Arg::Prune => None,
            })
            .chain(raised)
            .collect();
        Ok(Term::App(Head::LVar(w2), kept_args))
    }
}
