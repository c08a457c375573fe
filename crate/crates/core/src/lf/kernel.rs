//! Bidirectional checker for the LF judgments, η-long canonicalisation and
//! βη-conversion.
//!
//! Every synthesized classifier is β-normal. Contexts are validated once on
//! entry rather than at every variable lookup.

use std::fmt;

use super::subst::{
    eta_contract_family, FuelExhausted, Instantiate, Normalizer, DEFAULT_FUEL,
};
use super::syntax::{Classifier, Context, Family, Kind, Object, Pos, Signature, Sym};

/// Inference rule that failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    KindSig,
    TypeSig,
    TypeCtx,
    PiKind,
    VarFam,
    PiFam,
    AppFam,
    VarObj,
    AbsObj,
    AppObj,
    Normalize,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::KindSig => "kind-sig",
            Rule::TypeSig => "type-sig",
            Rule::TypeCtx => "type-ctx",
            Rule::PiKind => "pi-kind",
            Rule::VarFam => "var-fam",
            Rule::PiFam => "pi-fam",
            Rule::AppFam => "app-fam",
            Rule::VarObj => "var-obj",
            Rule::AbsObj => "abs-obj",
            Rule::AppObj => "app-obj",
            Rule::Normalize => "normalize",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct CheckError {
    pub rule: Rule,
    /// Declaration being checked, when checking a signature.
    pub decl: Option<Sym>,
    pub pos: Option<Pos>,
    pub message: String,
}

impl fmt::Display for CheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(pos) = self.pos {
            write!(f, "{pos}: ")?;
        }
        if let Some(d) = &self.decl {
            write!(f, "in declaration `{d}`: ")?;
        }
        write!(f, "{} ({})", self.message, self.rule)
    }
}

impl CheckError {
    fn new(rule: Rule, message: impl Into<String>) -> Self {
        CheckError { rule, decl: None, pos: None, message: message.into() }
    }

    fn in_decl(mut self, name: &Sym, pos: Option<Pos>) -> Self {
        self.decl = Some(name.clone());
        self.pos = pos;
        self
    }
}

impl From<FuelExhausted> for CheckError {
    fn from(e: FuelExhausted) -> Self {
        CheckError::new(Rule::Normalize, e.to_string())
    }
}

pub type Judgment<T> = Result<T, CheckError>;

/// Checker over a signature. Only the first `visible` declarations may be
/// referenced, which is how each declaration is checked against its prefix.
#[derive(Clone, Debug)]
pub struct Checker<'s> {
    sig: &'s Signature,
    visible: usize,
    fuel: usize,
    allow_metas: bool,
}

impl<'s> Checker<'s> {
    pub fn new(sig: &'s Signature) -> Self {
        Checker { sig, visible: sig.len(), fuel: DEFAULT_FUEL, allow_metas: false }
    }

    pub fn with_fuel(mut self, fuel: usize) -> Self {
        self.fuel = fuel;
        self
    }

    /// Treat query variables as placeholders: their types are unknown and
    /// comparisons involving them are skipped.
    pub fn allowing_metas(mut self) -> Self {
        self.allow_metas = true;
        self
    }

    pub fn signature(&self) -> &'s Signature {
        self.sig
    }

    fn normalizer(&self) -> Normalizer {
        Normalizer::new(self.fuel)
    }

    fn visible_decl(&self, name: &str) -> Option<&'s Classifier> {
        let idx = self.sig.index_of(name)?;
        (idx < self.visible).then(|| &self.sig.get(name).unwrap().class)
    }

    fn const_type(&self, c: &str) -> Option<&'s Family> {
        match self.visible_decl(c) {
            Some(Classifier::Type(a)) => Some(a),
            _ => None,
        }
    }

    fn const_kind(&self, a: &str) -> Option<&'s Kind> {
        match self.visible_decl(a) {
            Some(Classifier::Kind(k)) => Some(k),
            _ => None,
        }
    }

    // -- contexts and kinds -------------------------------------------------

    pub fn check_context(&self, ctx: &Context) -> Judgment<()> {
        let mut prefix = Context::new();
        for (x, a) in ctx.entries() {
            self.check_is_type(&prefix, a).map_err(|mut e| {
                e.rule = Rule::TypeCtx;
                e.message = format!("context entry `{}`: {}", x.name(), e.message);
                e
            })?;
            prefix.push(x.clone(), a.clone());
        }
        Ok(())
    }

    pub fn check_kind(&self, ctx: &Context, k: &Kind) -> Judgment<()> {
        match k {
            Kind::Type => Ok(()),
            Kind::Pi(x, a, k) => {
                self.check_is_type(ctx, a).map_err(|mut e| {
                    if e.rule == Rule::PiFam {
                        e.rule = Rule::PiKind;
                    }
                    e
                })?;
                let a = self.normalizer().family(a)?;
                self.check_kind(&ctx.extended(x.clone(), a), k)
            }
        }
    }

    // -- type families ------------------------------------------------------

    /// Synthesizes the β-normal kind of `a`.
    pub fn synth_family(&self, ctx: &Context, a: &Family) -> Judgment<Kind> {
        match a {
            Family::Base(c, args) => {
                let Some(kind) = self.const_kind(c) else {
                    let msg = if self.const_type(c).is_some() {
                        format!("`{c}` is an object constant, not a type family")
                    } else {
                        format!("unknown type constant `{c}`")
                    };
                    return Err(CheckError::new(Rule::VarFam, msg));
                };
                let mut k = self.normalizer().kind(kind)?;
                for (i, m) in args.iter().enumerate() {
                    let Kind::Pi(_, dom, rest) = k else {
                        return Err(CheckError::new(
                            Rule::AppFam,
                            format!("`{c}` applied to {} arguments, expects {}", args.len(), i),
                        ));
                    };
                    self.check_object_at(ctx, m, &dom).map_err(|mut e| {
                        if e.rule == Rule::AppObj && e.message.starts_with("argument") {
                            e.rule = Rule::AppFam;
                        }
                        e.message = format!("argument {} of `{c}`: {}", i + 1, e.message);
                        e
                    })?;
                    k = self.normalizer().kind(&rest.instantiate(std::slice::from_ref(m)))?;
                }
                Ok(k)
            }
            Family::Pi(x, dom, body) => {
                self.check_is_type(ctx, dom)?;
                let dom = self.normalizer().family(dom)?;
                self.check_is_type(&ctx.extended(x.clone(), dom), body)?;
                Ok(Kind::Type)
            }
        }
    }

    /// Accepts iff `ctx ⊢ a : Type`.
    pub fn check_is_type(&self, ctx: &Context, a: &Family) -> Judgment<()> {
        match self.synth_family(ctx, a)? {
            Kind::Type => Ok(()),
            k => Err(CheckError::new(
                if matches!(a, Family::Pi(..)) { Rule::PiFam } else { Rule::AppFam },
                format!(
                    "expected a type but `{}` has kind `{}` (missing {} argument(s))",
                    super::print::family_in(ctx, a),
                    super::print::kind_in(ctx, &k),
                    k.arity()
                ),
            )),
        }
    }

    // -- objects ------------------------------------------------------------

    /// Synthesizes the β-normal type of `m`.
    pub fn synth_object(&self, ctx: &Context, m: &Object) -> Judgment<Family> {
        match self.synth_object_opt(ctx, m)? {
            Some(a) => Ok(a),
            None => Err(CheckError::new(Rule::VarObj, "type depends on an unresolved query variable")),
        }
    }

    fn synth_object_opt(&self, ctx: &Context, m: &Object) -> Judgment<Option<Family>> {
        match m {
            Object::Const(c) => match self.const_type(c) {
                Some(a) => Ok(Some(self.normalizer().family(a)?)),
                None if self.const_kind(c).is_some() => Err(CheckError::new(
                    Rule::VarObj,
                    format!("`{c}` is a type family, not an object"),
                )),
                None => Err(CheckError::new(Rule::VarObj, format!("unknown constant `{c}`"))),
            },
            Object::Var(i) => match ctx.lookup(*i) {
                Some(a) => Ok(Some(self.normalizer().family(&a)?)),
                None => Err(CheckError::new(Rule::VarObj, format!("unbound variable #{i}"))),
            },
            Object::Meta(x) => {
                if self.allow_metas {
                    Ok(None)
                } else {
                    Err(CheckError::new(Rule::VarObj, format!("free variable `{x}`")))
                }
            }
            Object::Lam(x, dom, body) => {
                self.check_is_type(ctx, dom).map_err(|mut e| {
                    e.rule = Rule::AbsObj;
                    e
                })?;
                let dom = self.normalizer().family(dom)?;
                let body_ty = self.synth_object_opt(&ctx.extended(x.clone(), dom.clone()), body)?;
                Ok(body_ty.map(|b| Family::Pi(x.clone(), Box::new(dom), Box::new(b))))
            }
            Object::App(f, arg) => {
                let fty = self.synth_object_opt(ctx, f)?;
                match fty {
                    None => {
                        self.synth_object_opt(ctx, arg)?;
                        Ok(None)
                    }
                    Some(Family::Pi(_, dom, cod)) => {
                        self.check_object_at(ctx, arg, &dom)?;
                        let b = cod.instantiate(std::slice::from_ref(&**arg));
                        Ok(Some(self.normalizer().family(&b)?))
                    }
                    Some(base) => Err(CheckError::new(
                        Rule::AppObj,
                        format!(
                            "`{}` of type `{}` is applied to an argument",
                            super::print::object_in(ctx, f),
                            super::print::family_in(ctx, &base)
                        ),
                    )),
                }
            }
        }
    }

    /// Checks `m` against `expected` up to βη-equality.
    pub fn check_object_at(&self, ctx: &Context, m: &Object, expected: &Family) -> Judgment<()> {
        let found = self.synth_object_opt(ctx, m)?;
        let Some(found) = found else { return Ok(()) };
        if expected.has_metas() || found.has_metas() {
            return Ok(());
        }
        if self.conv_family(ctx, &found, expected) {
            Ok(())
        } else {
            Err(CheckError::new(
                Rule::AppObj,
                format!(
                    "argument `{}` has type `{}` but `{}` was expected",
                    super::print::object_in(ctx, m),
                    super::print::family_in(ctx, &found),
                    super::print::family_in(ctx, expected)
                ),
            ))
        }
    }

    // -- equality -----------------------------------------------------------

    /// βη-equality: β-normalise, η-expand to long form, compare up to α.
    pub fn conv_family(&self, ctx: &Context, a: &Family, b: &Family) -> bool {
        let mut n = self.normalizer();
        let (Ok(a), Ok(b)) = (n.family(a), n.family(b)) else { return false };
        if a == b {
            return true;
        }
        match (self.canonical_family(ctx, &a), self.canonical_family(ctx, &b)) {
            (Ok(a), Ok(b)) => a == b,
            _ => eta_contract_family(&a) == eta_contract_family(&b),
        }
    }

    pub fn conv_object(&self, ctx: &Context, m: &Object, n: &Object, ty: &Family) -> bool {
        let mut norm = self.normalizer();
        let (Ok(m), Ok(n)) = (norm.object(m), norm.object(n)) else { return false };
        if m == n {
            return true;
        }
        match (self.canonical_object(ctx, &m, ty), self.canonical_object(ctx, &n, ty)) {
            (Ok(a), Ok(b)) => a == b,
            _ => super::subst::eta_contract_object(&m) == super::subst::eta_contract_object(&n),
        }
    }

    // -- canonical forms ----------------------------------------------------

    /// η-long form of a β-normal object of type `ty`.
    pub fn canonical_object(&self, ctx: &Context, m: &Object, ty: &Family) -> Judgment<Object> {
        let ty = self.normalizer().family(ty)?;
        match ty {
            Family::Pi(x, dom, cod) => match m {
                Object::Lam(y, ann, body) => {
                    let ann_c = self.canonical_family(ctx, ann)?;
                    let inner = ctx.extended(y.clone(), (**ann).clone());
                    let body = self.canonical_object(&inner, body, &cod)?;
                    Ok(Object::Lam(y.clone(), Box::new(ann_c), Box::new(body)))
                }
                _ => {
                    let dom_c = self.canonical_family(ctx, &dom)?;
                    let inner = ctx.extended(x.clone(), (*dom).clone());
                    let expanded = Object::app(m.shift(1), Object::Var(0));
                    let body = self.canonical_object(&inner, &expanded, &cod)?;
                    Ok(Object::Lam(x, Box::new(dom_c), Box::new(body)))
                }
            },
            Family::Base(..) => self.canonical_spine(ctx, m).map(|(m, _)| m),
        }
    }

    /// Canonicalises a head-applied object, returning it with its type.
    fn canonical_spine(&self, ctx: &Context, m: &Object) -> Judgment<(Object, Option<Family>)> {
        let (head, args) = m.spine();
        let head_ty = match head {
            Object::Const(c) => self.const_type(c).cloned().ok_or_else(|| {
                CheckError::new(Rule::VarObj, format!("unknown constant `{c}`"))
            })?,
            Object::Var(i) => ctx
                .lookup(*i)
                .ok_or_else(|| CheckError::new(Rule::VarObj, format!("unbound variable #{i}")))?,
            Object::Meta(_) => return Ok((m.clone(), None)),
            Object::Lam(..) => {
                return Err(CheckError::new(Rule::Normalize, "canonicalisation needs a β-normal term"))
            }
            Object::App(..) => unreachable!("spine head is never an application"),
        };
        let mut cur = self.normalizer().family(&head_ty)?;
        let mut out = Vec::with_capacity(args.len());
        for a in args {
            let Family::Pi(_, dom, cod) = cur else {
                return Err(CheckError::new(Rule::AppObj, "too many arguments"));
            };
            let a = self.canonical_object(ctx, a, &dom)?;
            cur = self.normalizer().family(&cod.instantiate(std::slice::from_ref(&a)))?;
            out.push(a);
        }
        if !cur.is_base() {
            return Err(CheckError::new(Rule::AppObj, "head is not fully applied at a base type"));
        }
        Ok((Object::apps(head.clone(), out), Some(cur)))
    }

    pub fn canonical_family(&self, ctx: &Context, a: &Family) -> Judgment<Family> {
        let a = self.normalizer().family(a)?;
        match a {
            Family::Pi(x, dom, cod) => {
                let dom_c = self.canonical_family(ctx, &dom)?;
                let inner = ctx.extended(x.clone(), *dom);
                let cod = self.canonical_family(&inner, &cod)?;
                Ok(Family::Pi(x, Box::new(dom_c), Box::new(cod)))
            }
            Family::Base(c, args) => {
                let kind = self
                    .const_kind(&c)
                    .ok_or_else(|| CheckError::new(Rule::VarFam, format!("unknown type constant `{c}`")))?;
                let mut k = self.normalizer().kind(kind)?;
                let mut out = Vec::with_capacity(args.len());
                for m in &args {
                    let Kind::Pi(_, dom, rest) = k else {
                        return Err(CheckError::new(Rule::AppFam, "too many arguments"));
                    };
                    let m = self.canonical_object(ctx, m, &dom)?;
                    k = self.normalizer().kind(&rest.instantiate(std::slice::from_ref(&m)))?;
                    out.push(m);
                }
                Ok(Family::Base(c, out))
            }
        }
    }

    pub fn canonical_kind(&self, ctx: &Context, k: &Kind) -> Judgment<Kind> {
        match k {
            Kind::Type => Ok(Kind::Type),
            Kind::Pi(x, a, k) => {
                let a_c = self.canonical_family(ctx, a)?;
                let inner = ctx.extended(x.clone(), (**a).clone());
                Ok(Kind::Pi(x.clone(), Box::new(a_c), Box::new(self.canonical_kind(&inner, k)?)))
            }
        }
    }
}

/// Accepts iff the signature is derivable by null-sig / kind-sig / type-sig,
/// checking each classifier against the declarations before it.
pub fn check_signature(sig: &Signature) -> Judgment<()> {
    let empty = Context::new();
    for (i, d) in sig.iter().enumerate() {
        let checker = Checker { sig, visible: i, fuel: DEFAULT_FUEL, allow_metas: false };
        let res = match &d.class {
            Classifier::Kind(k) => checker.check_kind(&empty, k).map_err(|mut e| {
                if matches!(e.rule, Rule::Normalize) {
                    e.rule = Rule::KindSig;
                }
                e
            }),
            Classifier::Type(a) => checker.check_is_type(&empty, a),
        };
        res.map_err(|e| e.in_decl(&d.name, d.pos))?;
        if !d.class_has_no_metas() {
            return Err(CheckError::new(
                if matches!(d.class, Classifier::Kind(_)) { Rule::KindSig } else { Rule::TypeSig },
                "free variable in declaration",
            )
            .in_decl(&d.name, d.pos));
        }
    }
    Ok(())
}

impl super::syntax::Decl {
    fn class_has_no_metas(&self) -> bool {
        match &self.class {
            Classifier::Type(a) => !a.has_metas(),
            Classifier::Kind(k) => {
                let mut cur = k;
                while let Kind::Pi(_, a, rest) = cur {
                    if a.has_metas() {
                        return false;
                    }
                    cur = rest;
                }
                true
            }
        }
    }
}

/// `Γ ⊢ A : K` with synthesized `K`; `ctx` is validated first.
pub fn check_type(sig: &Signature, ctx: &Context, a: &Family) -> Judgment<Kind> {
    let c = Checker::new(sig);
    c.check_context(ctx)?;
    c.synth_family(ctx, a)
}

/// `Γ ⊢ M : A` with synthesized `A`; `ctx` is validated first.
pub fn check_object(sig: &Signature, ctx: &Context, m: &Object) -> Judgment<Family> {
    let c = Checker::new(sig);
    c.check_context(ctx)?;
    c.synth_object(ctx, m)
}

/// η-long β-normal form of `e` at `classifier`.
pub fn canonicalize(sig: &Signature, ctx: &Context, m: &Object, ty: &Family) -> Judgment<Object> {
    let c = Checker::new(sig);
    let m = c.normalizer().object(m)?;
    c.canonical_object(ctx, &m, ty)
}

/// Canonical form of the type of every binder, used when comparing
/// classifiers structurally.
pub fn canonicalize_family(sig: &Signature, ctx: &Context, a: &Family) -> Judgment<Family> {
    Checker::new(sig).canonical_family(ctx, a)
}
