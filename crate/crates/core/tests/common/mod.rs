//! Generators for well-typed LF expressions driven by a choice tape, and a
//! denotational evaluator used as an independent normalisation oracle.

#![allow(dead_code)]

use std::rc::Rc;

use lfhohh::lf::{parse_signature, Binder, Family, Object, Signature};
use proptest::prelude::*;

pub const SIG: &str = "
    nat : type. z : nat. s : nat -> nat.
    list : type. nil : list. cons : nat -> list -> list.
    plus : nat -> nat -> nat -> type.
    plusZ : {x:nat} plus z x x.
    plusS : {l:nat}{m:nat}{n:nat} plus l m n -> plus (s l) m (s n).
    append : list -> list -> list -> type.
    appNil : {l:list} append nil l l.
    appCons : {x:nat}{l:list}{k:list}{m:list} append l k m -> append (cons x l) k (cons x m).
    it : (nat -> nat) -> nat.
    map : (nat -> nat) -> list -> list.
    eqf : (nat -> nat) -> type.
    tgt : {g:nat -> nat} eqf g -> type.
    pk : {g:(nat -> nat) -> nat -> nat} ({z:eqf (g ([u:nat] u))} tgt (g ([u:nat] u)) z) -> type.";

pub fn sig() -> Signature {
    parse_signature(SIG).unwrap()
}

/// Finite sequence of choices; reads past the end yield 0, which always
/// selects a terminating alternative.
pub struct Tape {
    xs: Vec<u32>,
    pos: usize,
}

impl Tape {
    pub fn new(xs: Vec<u32>) -> Self {
        Tape { xs, pos: 0 }
    }

    pub fn pick(&mut self, n: usize) -> usize {
        let x = self.xs.get(self.pos).copied().unwrap_or(0);
        self.pos += 1;
        x as usize % n.max(1)
    }

    pub fn name(&mut self) -> &'static str {
        ["x", "y", "u", "x"][self.pick(4)]
    }
}

pub fn tape() -> impl Strategy<Value = Vec<u32>> {
    proptest::collection::vec(any::<u32>(), 0..96)
}

/// Simple types over `nat` and `list`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ty {
    Nat,
    List,
    Arr(Box<Ty>, Box<Ty>),
}

impl Ty {
    pub fn arr(a: Ty, b: Ty) -> Ty {
        Ty::Arr(Box::new(a), Box::new(b))
    }

    pub fn family(&self) -> Family {
        match self {
            Ty::Nat => Family::konst("nat"),
            Ty::List => Family::konst("list"),
            Ty::Arr(a, b) => Family::arrow(a.family(), b.family()),
        }
    }

    pub fn random(t: &mut Tape, fuel: usize) -> Ty {
        match if fuel == 0 { t.pick(2) } else { t.pick(4) } {
            0 => Ty::Nat,
            1 => Ty::List,
            2 => Ty::arr(Ty::Nat, Ty::random(t, fuel - 1)),
            _ => Ty::arr(Ty::random(t, fuel - 1), Ty::random(t, fuel - 1)),
        }
    }

    fn split(&self) -> (Vec<&Ty>, &Ty) {
        match self {
            Ty::Arr(a, b) => {
                let (mut args, r) = b.split();
                args.insert(0, a);
                (args, r)
            }
            _ => (Vec::new(), self),
        }
    }
}

/// The simple type a family stands for, if it is built from `nat`,
/// `list` and non-dependent arrows.
pub fn ty_of(a: &Family) -> Option<Ty> {
    match a {
        Family::Base(c, args) if args.is_empty() && &**c == "nat" => Some(Ty::Nat),
        Family::Base(c, args) if args.is_empty() && &**c == "list" => Some(Ty::List),
        Family::Pi(_, a, b) => Some(Ty::arr(ty_of(a)?, ty_of(&lower(b)?)?)),
        _ => None,
    }
}

/// `b` with its innermost variable removed, if it does not occur. `b` is
/// assumed free of query variables.
fn lower(b: &Family) -> Option<Family> {
    use lfhohh::lf::subst::Instantiate;
    let inst = b.instantiate(&[Object::meta("Unused")]);
    (!inst.has_metas()).then_some(inst)
}

fn constants() -> Vec<(&'static str, Ty)> {
    let nn = || Ty::arr(Ty::Nat, Ty::Nat);
    vec![
        ("z", Ty::Nat),
        ("nil", Ty::List),
        ("s", Ty::arr(Ty::Nat, Ty::Nat)),
        ("cons", Ty::arr(Ty::Nat, Ty::arr(Ty::List, Ty::List))),
        ("it", Ty::arr(nn(), Ty::Nat)),
        ("map", Ty::arr(nn(), Ty::arr(Ty::List, Ty::List))),
    ]
}

/// Context of families, outermost first.
pub type Ctx = Vec<Family>;

fn heads(ctx: &Ctx, target: &Ty) -> Vec<(Object, Ty)> {
    let mut hs: Vec<(Object, Ty)> = constants()
        .into_iter()
        .filter(|(_, ty)| ty.split().1 == target)
        .map(|(c, ty)| (Object::konst(c), ty))
        .collect();
    for (lvl, a) in ctx.iter().enumerate() {
        if let Some(ty) = ty_of(a) {
            if ty.split().1 == target {
                hs.push((Object::Var(ctx.len() - 1 - lvl), ty));
            }
        }
    }
    hs
}

/// A canonical (β-normal, η-long) object of type `ty` in `ctx`.
pub fn canonical(t: &mut Tape, ctx: &Ctx, ty: &Ty, fuel: usize) -> Object {
    match ty {
        Ty::Arr(a, b) => {
            let x = t.name();
            let inner = [ctx.clone(), vec![a.family()]].concat();
            Object::lam(x, a.family(), canonical(t, &inner, b, fuel))
        }
        _ => {
            let hs = heads(ctx, ty);
            let candidates: Vec<_> = if fuel == 0 {
                hs.into_iter().filter(|(_, hty)| hty.split().0.is_empty()).collect()
            } else {
                hs
            };
            let (h, hty) = candidates[t.pick(candidates.len())].clone();
            let args = hty.split().0.into_iter().map(|a| canonical(t, ctx, a, fuel.saturating_sub(1))).collect::<Vec<_>>();
            Object::apps(h, args)
        }
    }
}

/// Any well-typed object of type `ty`, possibly with β-redexes and
/// η-short arguments.
pub fn any_object(t: &mut Tape, ctx: &Ctx, ty: &Ty, fuel: usize) -> Object {
    if fuel > 0 {
        match t.pick(6) {
            1 => {
                let a = [Ty::Nat, Ty::List, Ty::arr(Ty::Nat, Ty::Nat)][t.pick(3)].clone();
                let inner = [ctx.clone(), vec![a.family()]].concat();
                let body = any_object(t, &inner, ty, fuel - 1);
                let arg = any_object(t, ctx, &a, fuel - 1);
                return Object::app(Object::lam(t.name(), a.family(), body), arg);
            }
            2 if *ty == Ty::arr(Ty::Nat, Ty::Nat) => return Object::konst("s"),
            _ => {}
        }
    }
    match ty {
        Ty::Arr(a, b) => {
            let x = t.name();
            let inner = [ctx.clone(), vec![a.family()]].concat();
            Object::lam(x, a.family(), any_object(t, &inner, b, fuel))
        }
        _ => {
            let hs = heads(ctx, ty);
            let candidates: Vec<_> = if fuel == 0 {
                hs.into_iter().filter(|(_, hty)| hty.split().0.is_empty()).collect()
            } else {
                hs
            };
            let (h, hty) = candidates[t.pick(candidates.len())].clone();
            let args = hty.split().0.into_iter().map(|a| any_object(t, ctx, a, fuel.saturating_sub(1))).collect::<Vec<_>>();
            Object::apps(h, args)
        }
    }
}

/// A well-formed family in `ctx`, possibly dependent.
pub fn family(t: &mut Tape, ctx: &Ctx, fuel: usize) -> Family {
    let choice = if fuel == 0 { t.pick(4) } else { t.pick(8) };
    match choice {
        7 => {
            // `x` occurs strictly only in the type of `y`.
            let g = ["[w:nat -> nat][v:nat] x (w v)", "[w:nat -> nat][v:nat] x v", "[w:nat -> nat][v:nat] x (w (w v))"];
            let text = format!("{{x:nat -> nat}}{{y:{{z:eqf x}} tgt x z}} pk ({}) y", g[t.pick(g.len())]);
            lfhohh::lf::parse_family(&text, &sig()).unwrap()
        }
        0 => Family::konst("nat"),
        1 => Family::konst("list"),
        2 => Family::base("plus", (0..3).map(|_| canonical(t, ctx, &Ty::Nat, 2)).collect()),
        3 => Family::base("append", (0..3).map(|_| canonical(t, ctx, &Ty::List, 2)).collect()),
        _ => {
            let dom = if t.pick(2) == 0 { Ty::random(t, 1).family() } else { family(t, ctx, fuel - 1) };
            let inner = [ctx.clone(), vec![dom.clone()]].concat();
            let body = family(t, &inner, fuel - 1);
            Family::Pi(Binder::new(t.name()), Box::new(dom), Box::new(body))
        }
    }
}

/// Renames every binder.
pub fn rename_family(a: &Family, t: &mut Tape) -> Family {
    match a {
        Family::Base(c, args) => Family::Base(c.clone(), args.iter().map(|m| rename_object(m, t)).collect()),
        Family::Pi(_, a, b) => {
            Family::Pi(Binder::new(t.name()), Box::new(rename_family(a, t)), Box::new(rename_family(b, t)))
        }
    }
}

pub fn rename_object(m: &Object, t: &mut Tape) -> Object {
    match m {
        Object::Lam(_, a, b) => {
            Object::Lam(Binder::new(t.name()), Box::new(rename_family(a, t)), Box::new(rename_object(b, t)))
        }
        Object::App(f, a) => Object::app(rename_object(f, t), rename_object(a, t)),
        other => other.clone(),
    }
}

/// Denotation of closed objects.
#[derive(Clone)]
pub enum Value {
    Con(String, Vec<Value>),
    Fun(Rc<dyn Fn(Value) -> Value>),
}

/// First-order observation of a value: functions become the table of
/// their results at a few probe arguments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obs {
    Con(String, Vec<Obs>),
    Table(Vec<Obs>),
}

fn probes(ty: &Ty) -> Vec<Value> {
    let con = |c: &str, xs| Value::Con(c.to_string(), xs);
    match ty {
        Ty::Nat => vec![con("z", vec![]), con("s", vec![con("z", vec![])])],
        Ty::List => vec![con("nil", vec![]), con("cons", vec![con("z", vec![]), con("nil", vec![])])],
        Ty::Arr(_, b) => probes(b)
            .into_iter()
            .map(|r| Value::Fun(Rc::new(move |_| r.clone())))
            .chain((**b == Ty::Nat).then(|| {
                Value::Fun(Rc::new(|v: Value| Value::Con("s".into(), vec![v])))
            }))
            .collect(),
    }
}

pub fn observe(v: &Value, ty: &Ty) -> Obs {
    match (v, ty) {
        (Value::Con(c, xs), _) => {
            let arg_tys = constants().into_iter().find(|(d, _)| d == c).map(|(_, t)| t).unwrap();
            let (tys, _) = arg_tys.split();
            Obs::Con(c.clone(), xs.iter().zip(tys).map(|(x, t)| observe(x, t)).collect())
        }
        (Value::Fun(f), Ty::Arr(a, b)) => Obs::Table(probes(a).into_iter().map(|p| observe(&f(p), b)).collect()),
        (Value::Fun(_), _) => panic!("function value at a base type"),
    }
}

fn constant(c: String, arity: usize, got: Vec<Value>) -> Value {
    if got.len() == arity {
        return Value::Con(c, got);
    }
    Value::Fun(Rc::new(move |v| {
        let mut got = got.clone();
        got.push(v);
        constant(c.clone(), arity, got)
    }))
}

/// Evaluates `m` in `env` (innermost last).
pub fn eval(m: &Object, env: &[Value]) -> Value {
    match m {
        Object::Const(c) => {
            let arity = constants().into_iter().find(|(d, _)| *d == &**c).map(|(_, ty)| ty.split().0.len()).unwrap();
            constant(c.to_string(), arity, Vec::new())
        }
        Object::Var(i) => env[env.len() - 1 - i].clone(),
        Object::Meta(x) => panic!("meta {x}"),
        Object::Lam(_, _, body) => {
            let (env, body) = (env.to_vec(), (**body).clone());
            Value::Fun(Rc::new(move |v| {
                let mut env = env.clone();
                env.push(v);
                eval(&body, &env)
            }))
        }
        Object::App(f, a) => match eval(f, env) {
            Value::Fun(f) => f(eval(a, env)),
            Value::Con(..) => panic!("applying a constructor value"),
        },
    }
}

/// Observation of the closed object `m` of type `ty`.
pub fn meaning(m: &Object, ty: &Ty) -> Obs {
    observe(&eval(m, &[]), ty)
}

pub fn config() -> ProptestConfig {
    ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() }
}
