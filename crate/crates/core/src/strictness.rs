//! Strict occurrences of Pi-bound variables.
//!
//! Variables live in a [`StrictContext`] indexed by level (outermost binder
//! is level 0). Pi-bound variables are candidates and can never serve as the
//! rigid head of APP_o; λ-bound variables (the δ set) and constants can.
//! The variable being tested is itself a candidate, so it only ever
//! contributes through INIT_o.

use std::collections::BTreeSet;
use std::fmt;

use crate::lf::subst::eta_contract_object;
use crate::lf::syntax::{Binder, Family, Object, Sym};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Role {
    /// Pi-bound; the type is written in the scope of the entries before it.
    Candidate(Family),
    /// λ-bound inside an object (member of δ).
    Local,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub name: Binder,
    pub role: Role,
}

/// Ordered variable scope for the strictness judgments.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StrictContext {
    entries: Vec<Entry>,
}

/// Justification of a strict occurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Derivation {
    /// `x ȳ` with distinct δ-variables `ȳ`.
    Init,
    /// Rigid head with a strict argument (1-based position).
    App { head: String, arg: usize, sub: Box<Derivation> },
    Abs { var: String, sub: Box<Derivation> },
    /// Constant-headed base type with a strict argument.
    AppT { family: Sym, arg: usize, sub: Box<Derivation> },
    PiT { var: String, sub: Box<Derivation> },
    /// Strict in the type of `via`, which is itself strict.
    CtxT { via: String, in_type: Box<Derivation>, via_strict: Box<Derivation> },
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Derivation::Init => f.write_str("INIT_o"),
            Derivation::App { head, arg, sub } => write!(f, "APP_o({head}, arg {arg}) > {sub}"),
            Derivation::Abs { var, sub } => write!(f, "ABS_o({var}) > {sub}"),
            Derivation::AppT { family, arg, sub } => write!(f, "APP_t({family}, arg {arg}) > {sub}"),
            Derivation::PiT { var, sub } => write!(f, "PI_t({var}) > {sub}"),
            Derivation::CtxT { via, in_type, via_strict } => {
                write!(f, "CTX_t(via {via}: [{in_type}] and {via} strict: [{via_strict}])")
            }
        }
    }
}

impl Derivation {
    /// Does the derivation use CTX_t anywhere?
    pub fn uses_ctx(&self) -> bool {
        match self {
            Derivation::Init => false,
            Derivation::CtxT { .. } => true,
            Derivation::App { sub, .. }
            | Derivation::Abs { sub, .. }
            | Derivation::AppT { sub, .. }
            | Derivation::PiT { sub, .. } => sub.uses_ctx(),
        }
    }
}

impl StrictContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push_candidate(&mut self, name: Binder, ty: Family) {
        self.entries.push(Entry { name, role: Role::Candidate(ty) });
    }

    pub fn push_local(&mut self, name: Binder) {
        self.entries.push(Entry { name, role: Role::Local });
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    fn truncated(&self, len: usize) -> StrictContext {
        StrictContext { entries: self.entries[..len].to_vec() }
    }

    /// Level of de Bruijn index `i`, if bound in this scope.
    fn level(&self, i: usize) -> Option<usize> {
        (i < self.entries.len()).then(|| self.entries.len() - 1 - i)
    }

    fn display_name(&self, level: usize) -> String {
        self.entries[level].name.name().to_string()
    }

    /// `Γ;δ;x ⊢o M`, where `x` is given by level.
    pub fn strict_in_object(&self, x: usize, m: &Object) -> Option<Derivation> {
        let mut scope = self.clone();
        scope.object(x, m)
    }

    /// `Γ;x ⊢t A`, where `x` is given by level.
    pub fn strict_in_type(&self, x: usize, a: &Family) -> Option<Derivation> {
        let mut scope = self.clone();
        scope.family(x, a)
    }

    fn object(&mut self, x: usize, m: &Object) -> Option<Derivation> {
        match m {
            Object::Lam(y, _, body) => {
                self.push_local(y.clone());
                let r = self.object(x, body);
                self.entries.pop();
                r.map(|sub| Derivation::Abs { var: y.name().to_string(), sub: Box::new(sub) })
            }
            _ => {
                let (head, args) = m.spine();
                let head_level = match head {
                    Object::Var(i) => self.level(*i),
                    _ => None,
                };
                if head_level == Some(x) {
                    return self.init_args(&args).then_some(Derivation::Init);
                }
                let rigid = match (head, head_level) {
                    (Object::Var(_), Some(l)) => matches!(self.entries[l].role, Role::Local),
                    // constants, query variables and variables outside the scope
                    (Object::Const(_) | Object::Var(_), None) => true,
                    _ => false,
                };
                if !rigid {
                    return None;
                }
                let head_name = match (head, head_level) {
                    (_, Some(l)) => self.display_name(l),
                    (Object::Const(c), _) => c.to_string(),
                    _ => "?".to_string(),
                };
                args.iter().enumerate().find_map(|(k, a)| {
                    self.object(x, a).map(|sub| Derivation::App {
                        head: head_name.clone(),
                        arg: k + 1,
                        sub: Box::new(sub),
                    })
                })
            }
        }
    }

    /// Arguments are distinct δ-variables, up to η.
    fn init_args(&self, args: &[&Object]) -> bool {
        let mut seen = BTreeSet::new();
        args.iter().all(|a| match eta_contract_object(a) {
            Object::Var(i) => match self.level(i) {
                Some(l) => matches!(self.entries[l].role, Role::Local) && seen.insert(l),
                None => false,
            },
            _ => false,
        })
    }

    fn family(&mut self, x: usize, a: &Family) -> Option<Derivation> {
        match a {
            Family::Pi(y, dom, body) => {
                self.push_candidate(y.clone(), (**dom).clone());
                let r = self.family(x, body);
                self.entries.pop();
                r.map(|sub| Derivation::PiT { var: y.name().to_string(), sub: Box::new(sub) })
            }
            Family::Base(c, args) => {
                for (k, m) in args.iter().enumerate() {
                    if let Some(sub) = self.object(x, m) {
                        return Some(Derivation::AppT { family: c.clone(), arg: k + 1, sub: Box::new(sub) });
                    }
                }
                // CTX_t over candidates introduced after x
                for y in x + 1..self.entries.len() {
                    let Role::Candidate(ty) = &self.entries[y].role else { continue };
                    let ty = ty.clone();
                    let Some(in_type) = self.truncated(y).strict_in_type(x, &ty) else { continue };
                    if let Some(via_strict) = self.family(y, a) {
                        return Some(Derivation::CtxT {
                            via: self.display_name(y),
                            in_type: Box::new(in_type),
                            via_strict: Box::new(via_strict),
                        });
                    }
                }
                None
            }
        }
    }
}

/// Verdict for one binder of a constant's type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinderVerdict {
    pub index: usize,
    pub name: String,
    pub derivation: Option<Derivation>,
}

impl BinderVerdict {
    pub fn is_strict(&self) -> bool {
        self.derivation.is_some()
    }
}

fn binder_scope(a: &Family) -> (StrictContext, &Family) {
    let (binders, target) = a.split_pis();
    let mut scope = StrictContext::new();
    for (x, ty) in binders {
        scope.push_candidate(x.clone(), ty.clone());
    }
    (scope, target)
}

/// Indices of the binders of `{x1:A1}..{xn:An} B` that occur strictly,
/// computed as a least fixpoint: first the binders strict directly in
/// `B`, then closing under CTX_t.
pub fn strict_binders(a: &Family) -> BTreeSet<usize> {
    let n = a.arity();
    strict_binders_in_order(a, &(0..n).collect::<Vec<_>>())
}

/// As [`strict_binders`], visiting binders in the given order on each pass.
pub fn strict_binders_in_order(a: &Family, order: &[usize]) -> BTreeSet<usize> {
    let (scope, target) = binder_scope(a);
    let mut strict: BTreeSet<usize> = BTreeSet::new();
    let mut changed = true;
    while changed {
        changed = false;
        for &i in order {
            if strict.contains(&i) {
                continue;
            }
            let direct = scope.strict_in_type(i, target).is_some_and(|d| !matches!(d, Derivation::CtxT { .. }));
            let via = || {
                strict.iter().any(|&y| {
                    y > i && matches!(&scope.entries[y].role, Role::Candidate(ty)
                        if scope.truncated(y).strict_in_type(i, ty).is_some())
                })
            };
            if direct || via() {
                strict.insert(i);
                changed = true;
            }
        }
    }
    strict
}

/// Per-binder verdicts with justifications for `{x1:A1}..{xn:An} B`.
pub fn explain(a: &Family) -> Vec<BinderVerdict> {
    let (scope, target) = binder_scope(a);
    (0..scope.len())
        .map(|i| BinderVerdict {
            index: i,
            name: scope.display_name(i),
            derivation: scope.strict_in_type(i, target),
        })
        .collect()
}

/// `Γ;x ⊢t B` for the positive translation: `prefix` holds the binders
/// before `x`, `x` is de Bruijn index 0 of `body`.
pub fn strict_for_translation(prefix: &StrictContext, x: &Binder, x_ty: &Family, body: &Family) -> Option<Derivation> {
    let mut scope = prefix.clone();
    scope.push_candidate(x.clone(), x_ty.clone());
    let lvl = scope.len() - 1;
    scope.strict_in_type(lvl, body)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lf::parse::{parse_family, parse_object_in, parse_signature};
    use crate::lf::syntax::Signature;

    fn nat_sig() -> Signature {
        parse_signature(
            "nat : type. z : nat. s : nat -> nat. list : type. nil : list.
             cons : nat -> list -> list. append : list -> list -> list -> type.
             i : type. bar : nat -> type. bari : i -> type.",
        )
        .unwrap()
    }

    fn scope(cands: &[&str], locals: &[&str]) -> StrictContext {
        let mut s = StrictContext::new();
        for c in cands {
            s.push_candidate(Binder::new(c), Family::konst("nat"));
        }
        for l in locals {
            s.push_local(Binder::new(l));
        }
        s
    }

    fn names<'a>(c: &'a [&'a str], l: &'a [&'a str]) -> Vec<&'a str> {
        c.iter().chain(l).copied().collect()
    }

    #[test]
    fn bare_variable_is_strict() {
        let s = nat_sig();
        let sc = scope(&["x"], &[]);
        let m = parse_object_in("x", &s, &["x"]).unwrap();
        assert_eq!(sc.strict_in_object(0, &m), Some(Derivation::Init));
    }

    #[test]
    fn applied_to_non_local_is_not_strict() {
        let s = nat_sig();
        let (c, l) = (["x", "w"], ["y"]);
        let sc = scope(&c, &l);
        let m = parse_object_in("x (w y)", &s, &names(&c, &l)).unwrap();
        assert_eq!(sc.strict_in_object(0, &m), None);
    }

    #[test]
    fn candidate_head_blocks_app() {
        let s = nat_sig();
        let c = ["Y", "F"];
        let sc = scope(&c, &[]);
        let m = parse_object_in("F Y", &s, &c).unwrap();
        assert_eq!(sc.strict_in_object(0, &m), None);
        assert_eq!(sc.strict_in_object(1, &m), None);
    }

    #[test]
    fn rigid_constant_and_local_heads() {
        let s = nat_sig();
        let sc = scope(&["x"], &[]);
        let m = parse_object_in("s (s x)", &s, &["x"]).unwrap();
        assert!(sc.strict_in_object(0, &m).is_some());
        let m = parse_object_in("[f:nat -> nat] f x", &s, &["x"]).unwrap();
        assert!(sc.strict_in_object(0, &m).is_some());
        let m = parse_object_in("[y:nat] x y", &s, &["x"]).unwrap();
        assert!(sc.strict_in_object(0, &m).is_some());
        let m = parse_object_in("[y:nat] x y y", &s, &["x"]).unwrap();
        assert!(sc.strict_in_object(0, &m).is_none(), "repeated δ arguments");
    }

    #[test]
    fn alpha_invariant() {
        let s = nat_sig();
        let sc = scope(&["x"], &[]);
        let a = parse_object_in("[y:nat] s (x y)", &s, &["x"]).unwrap();
        let b = parse_object_in("[q:nat] s (x q)", &s, &["x"]).unwrap();
        assert_eq!(sc.strict_in_object(0, &a).is_some(), sc.strict_in_object(0, &b).is_some());
    }

    #[test]
    fn append_nil_binder() {
        let s = nat_sig();
        let a = parse_family("{l:list} append nil l l", &s).unwrap();
        assert_eq!(strict_binders(&a), BTreeSet::from([0]));
    }

    #[test]
    fn foo_variants() {
        let s = nat_sig();
        let a = parse_family("{X:i} bar z", &s).unwrap();
        assert!(strict_binders(&a).is_empty());
        let a = parse_family("{X:i} bari X", &s).unwrap();
        assert_eq!(strict_binders(&a), BTreeSet::from([0]));
        let a = parse_family("{Y:nat}{F:nat -> nat} bar (F Y)", &s).unwrap();
        assert!(strict_binders(&a).is_empty());
    }

    #[test]
    fn ctx_extension_through_binder_type() {
        let s = parse_signature(
            "nat : type.
             b : (nat -> nat) -> type.
             c : {w1:nat -> nat}{w2:(nat -> nat) -> nat -> nat} b (w2 w1) -> type.
             d : {w1:nat -> nat}{w2:(nat -> nat) -> nat -> nat}
                 ({z:b ([y:nat] w2 w1 (w1 y))} c w1 ([w:nat -> nat][y:nat] w2 w1 (w y)) z) -> type.",
        )
        .unwrap();
        let f = parse_family(
            "{x:nat -> nat}
             {y:{z:b x} c ([y:nat] y) ([w:nat -> nat][y:nat] x (w y)) z}
             d ([y:nat] y) ([w:nat -> nat][y:nat] x (w y)) y",
            &s,
        )
        .unwrap();
        assert_eq!(strict_binders(&f), BTreeSet::from([0, 1]));
        let verdicts = explain(&f);
        let dx = verdicts[0].derivation.as_ref().unwrap();
        assert!(matches!(dx, Derivation::CtxT { via, .. } if via == "y"), "{dx}");
        assert!(!verdicts[1].derivation.as_ref().unwrap().uses_ctx());
    }

    #[test]
    fn fixpoint_agrees_with_recursive_judgement() {
        let s = parse_signature(
            "nat : type. list : type. append : list -> list -> list -> type. nil : list.
             cons : nat -> list -> list.",
        )
        .unwrap();
        let a = parse_family(
            "{x:nat}{l:list}{m:list}{n:list} append l m n -> append (cons x l) m (cons x n)",
            &s,
        )
        .unwrap();
        let fix = strict_binders(&a);
        assert_eq!(fix, BTreeSet::from([0, 1, 2, 3]));
        let rec: BTreeSet<usize> = explain(&a).into_iter().filter(|v| v.is_strict()).map(|v| v.index).collect();
        assert_eq!(fix, rec);
        assert_eq!(strict_binders_in_order(&a, &[4, 3, 2, 1, 0]), fix);
    }
}
