//! Capture-avoiding substitution and β-normalisation.

use super::syntax::{Family, Kind, Object};

/// Default bound on β-contractions performed by one normalisation call.
pub const DEFAULT_FUEL: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("normalisation exceeded {0} beta steps")]
pub struct FuelExhausted(pub usize);

/// Replaces the `args.len()` innermost free variables. `args[k]` is the
/// value of the k-th binder counted from the outside, so for a body under
/// binders `x1 .. xn`, `Var(n-1-k)` becomes `args[k]`. The arguments live
/// in the scope outside those binders; remaining free variables are lowered.
pub trait Instantiate: Sized {
    fn inst_at(&self, args: &[Object], depth: usize) -> Self;

    fn instantiate(&self, args: &[Object]) -> Self {
        self.inst_at(args, 0)
    }
}

impl Instantiate for Object {
    fn inst_at(&self, args: &[Object], depth: usize) -> Object {
        let n = args.len();
        match self {
            Object::Var(i) if *i < depth => Object::Var(*i),
            Object::Var(i) => {
                let k = i - depth;
                if k < n {
                    args[n - 1 - k].shift(depth)
                } else {
                    Object::Var(i - n)
                }
            }
            Object::Const(_) | Object::Meta(_) => self.clone(),
            Object::Lam(x, a, m) => Object::Lam(
                x.clone(),
                Box::new(a.inst_at(args, depth)),
                Box::new(m.inst_at(args, depth + 1)),
            ),
            Object::App(f, a) => {
                Object::App(Box::new(f.inst_at(args, depth)), Box::new(a.inst_at(args, depth)))
            }
        }
    }
}

impl Instantiate for Family {
    fn inst_at(&self, args: &[Object], depth: usize) -> Family {
        match self {
            Family::Base(a, ms) => {
                Family::Base(a.clone(), ms.iter().map(|m| m.inst_at(args, depth)).collect())
            }
            Family::Pi(x, a, b) => Family::Pi(
                x.clone(),
                Box::new(a.inst_at(args, depth)),
                Box::new(b.inst_at(args, depth + 1)),
            ),
        }
    }
}

impl Instantiate for Kind {
    fn inst_at(&self, args: &[Object], depth: usize) -> Kind {
        match self {
            Kind::Type => Kind::Type,
            Kind::Pi(x, a, k) => Kind::Pi(
                x.clone(),
                Box::new(a.inst_at(args, depth)),
                Box::new(k.inst_at(args, depth + 1)),
            ),
        }
    }
}

/// Substitutes `value` for free variable `Var(index)` of `e`, where `value`
/// lives in the same scope as `e`. The variable's binder stays in place, so
/// no indices are lowered.
pub fn substitute_var<T: Substitute>(e: &T, index: usize, value: &Object) -> T {
    e.subst_var(index, value, 0)
}

pub trait Substitute: Sized {
    fn subst_var(&self, index: usize, value: &Object, depth: usize) -> Self;
}

impl Substitute for Object {
    fn subst_var(&self, index: usize, value: &Object, depth: usize) -> Object {
        match self {
            Object::Var(i) if *i == index + depth => value.shift(depth),
            Object::Var(_) | Object::Const(_) | Object::Meta(_) => self.clone(),
            Object::Lam(x, a, m) => Object::Lam(
                x.clone(),
                Box::new(a.subst_var(index, value, depth)),
                Box::new(m.subst_var(index, value, depth + 1)),
            ),
            Object::App(f, a) => Object::App(
                Box::new(f.subst_var(index, value, depth)),
                Box::new(a.subst_var(index, value, depth)),
            ),
        }
    }
}

impl Substitute for Family {
    fn subst_var(&self, index: usize, value: &Object, depth: usize) -> Family {
        match self {
            Family::Base(a, ms) => Family::Base(
                a.clone(),
                ms.iter().map(|m| m.subst_var(index, value, depth)).collect(),
            ),
            Family::Pi(x, a, b) => Family::Pi(
                x.clone(),
                Box::new(a.subst_var(index, value, depth)),
                Box::new(b.subst_var(index, value, depth + 1)),
            ),
        }
    }
}

impl Substitute for Kind {
    fn subst_var(&self, index: usize, value: &Object, depth: usize) -> Kind {
        match self {
            Kind::Type => Kind::Type,
            Kind::Pi(x, a, k) => Kind::Pi(
                x.clone(),
                Box::new(a.subst_var(index, value, depth)),
                Box::new(k.subst_var(index, value, depth + 1)),
            ),
        }
    }
}

/// β-normaliser with a step budget.
#[derive(Debug)]
pub struct Normalizer {
    budget: usize,
    left: usize,
}

impl Default for Normalizer {
    fn default() -> Self {
        Normalizer::new(DEFAULT_FUEL)
    }
}

impl Normalizer {
    pub fn new(fuel: usize) -> Self {
        Normalizer { budget: fuel, left: fuel }
    }

    pub fn steps_taken(&self) -> usize {
        self.budget - self.left
    }

    fn tick(&mut self) -> Result<(), FuelExhausted> {
        if self.left == 0 {
            return Err(FuelExhausted(self.budget));
        }
        self.left -= 1;
        Ok(())
    }

    pub fn object(&mut self, m: &Object) -> Result<Object, FuelExhausted> {
        // Contract head redexes iteratively so divergent input burns fuel
        // instead of stack.
        let mut cur = m.clone();
        loop {
            let (head, args) = cur.spine();
            match head {
                Object::Lam(_, _, body) if !args.is_empty() => {
                    self.tick()?;
                    let reduced = body.instantiate(&[args[0].clone()]);
                    let rest: Vec<Object> = args[1..].iter().map(|a| (*a).clone()).collect();
                    cur = Object::apps(reduced, rest);
                }
                Object::Lam(x, a, body) => {
                    return Ok(Object::Lam(
                        x.clone(),
                        Box::new(self.family(a)?),
                        Box::new(self.object(body)?),
                    ));
                }
                _ => {
                    let head = head.clone();
                    let args: Vec<Object> = args.into_iter().cloned().collect();
                    let mut out = Vec::with_capacity(args.len());
                    for a in &args {
                        out.push(self.object(a)?);
                    }
                    return Ok(Object::apps(head, out));
                }
            }
        }
    }

    pub fn family(&mut self, a: &Family) -> Result<Family, FuelExhausted> {
        match a {
            Family::Base(c, ms) => {
                let mut out = Vec::with_capacity(ms.len());
                for m in ms {
                    out.push(self.object(m)?);
                }
                Ok(Family::Base(c.clone(), out))
            }
            Family::Pi(x, a, b) => {
                Ok(Family::Pi(x.clone(), Box::new(self.family(a)?), Box::new(self.family(b)?)))
            }
        }
    }

    pub fn kind(&mut self, k: &Kind) -> Result<Kind, FuelExhausted> {
        match k {
            Kind::Type => Ok(Kind::Type),
            Kind::Pi(x, a, k) => {
                Ok(Kind::Pi(x.clone(), Box::new(self.family(a)?), Box::new(self.kind(k)?)))
            }
        }
    }
}

pub fn beta_normalize_object(m: &Object) -> Result<Object, FuelExhausted> {
    Normalizer::default().object(m)
}

pub fn beta_normalize_family(a: &Family) -> Result<Family, FuelExhausted> {
    Normalizer::default().family(a)
}

pub fn beta_normalize_kind(k: &Kind) -> Result<Kind, FuelExhausted> {
    Normalizer::default().kind(k)
}

impl Object {
    pub fn is_beta_normal(&self) -> bool {
        match self {
            Object::App(f, a) => {
                !matches!(**f, Object::Lam(..)) && f.is_beta_normal() && a.is_beta_normal()
            }
            Object::Lam(_, a, m) => a.is_beta_normal() && m.is_beta_normal(),
            _ => true,
        }
    }
}

impl Family {
    pub fn is_beta_normal(&self) -> bool {
        match self {
            Family::Base(_, ms) => ms.iter().all(Object::is_beta_normal),
            Family::Pi(_, a, b) => a.is_beta_normal() && b.is_beta_normal(),
        }
    }
}

/// Lowers every free index by `d`; `None` if one of the lowered variables
/// below `d` occurs.
pub(crate) fn unshift_object(m: &Object, d: usize, cutoff: usize) -> Option<Object> {
    Some(match m {
        Object::Var(i) if *i >= cutoff => {
            if *i < cutoff + d {
                return None;
            }
            Object::Var(i - d)
        }
        Object::Var(_) | Object::Const(_) | Object::Meta(_) => m.clone(),
        Object::Lam(x, a, b) => Object::Lam(
            x.clone(),
            Box::new(unshift_family(a, d, cutoff)?),
            Box::new(unshift_object(b, d, cutoff + 1)?),
        ),
        Object::App(f, a) => Object::App(
            Box::new(unshift_object(f, d, cutoff)?),
            Box::new(unshift_object(a, d, cutoff)?),
        ),
    })
}

pub(crate) fn unshift_family(a: &Family, d: usize, cutoff: usize) -> Option<Family> {
    Some(match a {
        Family::Base(c, ms) => Family::Base(
            c.clone(),
            ms.iter().map(|m| unshift_object(m, d, cutoff)).collect::<Option<_>>()?,
        ),
        Family::Pi(x, a, b) => Family::Pi(
            x.clone(),
            Box::new(unshift_family(a, d, cutoff)?),
            Box::new(unshift_family(b, d, cutoff + 1)?),
        ),
    })
}

/// η-contracts every `λx. M x` with `x` not free in `M`, bottom up.
pub fn eta_contract_object(m: &Object) -> Object {
    match m {
        Object::Lam(x, a, body) => {
            let body = eta_contract_object(body);
            if let Object::App(f, arg) = &body {
                if **arg == Object::Var(0) {
                    if let Some(f) = unshift_object(f, 1, 0) {
                        return f;
                    }
                }
            }
            Object::Lam(x.clone(), Box::new(eta_contract_family(a)), Box::new(body))
        }
        Object::App(f, a) => {
            Object::App(Box::new(eta_contract_object(f)), Box::new(eta_contract_object(a)))
        }
        _ => m.clone(),
    }
}

pub fn eta_contract_family(a: &Family) -> Family {
    match a {
        Family::Base(c, ms) => Family::Base(c.clone(), ms.iter().map(eta_contract_object).collect()),
        Family::Pi(x, a, b) => Family::Pi(
            x.clone(),
            Box::new(eta_contract_family(a)),
            Box::new(eta_contract_family(b)),
        ),
    }
}
