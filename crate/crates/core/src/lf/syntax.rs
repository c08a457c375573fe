//! Abstract syntax for LF kinds, type families and objects.
//!
//! Bound variables are de Bruijn indices; binders keep their source name only
//! as a printing hint. Equality ignores hints, so the derived `PartialEq` on
//! every expression is α-equivalence.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use indexmap::IndexMap;

/// Interned-ish identifier used for constants and binder hints.
pub type Sym = Arc<str>;

pub fn sym(s: &str) -> Sym {
    Arc::from(s)
}

/// Name hint attached to a binder. Never participates in equality.
#[derive(Clone)]
pub struct Binder(pub Sym);

impl Binder {
    pub fn new(name: &str) -> Self {
        Binder(sym(name))
    }

    /// Hint used for binders introduced by `A -> B`.
    pub fn anonymous() -> Self {
        Binder(sym("_"))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn is_anonymous(&self) -> bool {
        &*self.0 == "_"
    }
}

impl PartialEq for Binder {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Binder {}

impl Hash for Binder {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl fmt::Debug for Binder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Type,
    Pi(Binder, Box<Family>, Box<Kind>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// A type constant applied to a possibly empty argument list.
    Base(Sym, Vec<Object>),
    Pi(Binder, Box<Family>, Box<Family>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Object {
    Const(Sym),
    /// de Bruijn index into the enclosing binders.
    Var(usize),
    /// Free existential variable of a query (capitalised, unbound in the
    /// signature). Never appears in signatures.
    Meta(Sym),
    Lam(Binder, Box<Family>, Box<Object>),
    App(Box<Object>, Box<Object>),
}

impl Kind {
    pub fn pi(x: &str, a: Family, k: Kind) -> Kind {
        Kind::Pi(Binder::new(x), Box::new(a), Box::new(k))
    }

    pub fn arrow(a: Family, k: Kind) -> Kind {
        Kind::Pi(Binder::anonymous(), Box::new(a), Box::new(k.shift(1)))
    }

    /// Number of leading Pi binders.
    pub fn arity(&self) -> usize {
        match self {
            Kind::Type => 0,
            Kind::Pi(_, _, k) => 1 + k.arity(),
        }
    }
}

impl Family {
    pub fn base(a: &str, args: Vec<Object>) -> Family {
        Family::Base(sym(a), args)
    }

    pub fn konst(a: &str) -> Family {
        Family::Base(sym(a), Vec::new())
    }

    pub fn pi(x: &str, a: Family, b: Family) -> Family {
        Family::Pi(Binder::new(x), Box::new(a), Box::new(b))
    }

    /// Non-dependent function type; `b` is written in the outer scope.
    pub fn arrow(a: Family, b: Family) -> Family {
        Family::Pi(Binder::anonymous(), Box::new(a), Box::new(b.shift(1)))
    }

    pub fn arity(&self) -> usize {
        match self {
            Family::Base(..) => 0,
            Family::Pi(_, _, b) => 1 + b.arity(),
        }
    }

    /// Splits `{x1:A1}..{xn:An} B` into its binders and target.
    pub fn split_pis(&self) -> (Vec<(&Binder, &Family)>, &Family) {
        let mut binders = Vec::new();
        let mut cur = self;
        while let Family::Pi(x, a, b) = cur {
            binders.push((x, &**a));
            cur = b;
        }
        (binders, cur)
    }

    pub fn is_base(&self) -> bool {
        matches!(self, Family::Base(..))
    }
}

impl Object {
    pub fn konst(c: &str) -> Object {
        Object::Const(sym(c))
    }

    pub fn var(i: usize) -> Object {
        Object::Var(i)
    }

    pub fn meta(x: &str) -> Object {
        Object::Meta(sym(x))
    }

    pub fn lam(x: &str, a: Family, m: Object) -> Object {
        Object::Lam(Binder::new(x), Box::new(a), Box::new(m))
    }

    pub fn app(f: Object, a: Object) -> Object {
        Object::App(Box::new(f), Box::new(a))
    }

    /// `h a1 .. an`
    pub fn apps(h: Object, args: impl IntoIterator<Item = Object>) -> Object {
        args.into_iter().fold(h, Object::app)
    }

    /// Constant applied to arguments.
    pub fn capp(c: &str, args: impl IntoIterator<Item = Object>) -> Object {
        Object::apps(Object::konst(c), args)
    }

    /// Views an application chain as head plus arguments, left to right.
    pub fn spine(&self) -> (&Object, Vec<&Object>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Object::App(f, a) = cur {
            args.push(&**a);
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    /// Collects the names of query variables in order of first occurrence.
    pub fn metas(&self, out: &mut Vec<Sym>) {
        match self {
            Object::Meta(x) => {
                if !out.contains(x) {
                    out.push(x.clone());
                }
            }
            Object::Const(_) | Object::Var(_) => {}
            Object::Lam(_, a, m) => {
                a.metas(out);
                m.metas(out);
            }
            Object::App(f, a) => {
                f.metas(out);
                a.metas(out);
            }
        }
    }

    pub fn has_metas(&self) -> bool {
        let mut v = Vec::new();
        self.metas(&mut v);
        !v.is_empty()
    }
}

impl Family {
    pub fn metas(&self, out: &mut Vec<Sym>) {
        match self {
            Family::Base(_, args) => args.iter().for_each(|m| m.metas(out)),
            Family::Pi(_, a, b) => {
                a.metas(out);
                b.metas(out);
            }
        }
    }

    pub fn has_metas(&self) -> bool {
        let mut v = Vec::new();
        self.metas(&mut v);
        !v.is_empty()
    }
}

/// Source position, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classifier {
    Kind(Kind),
    Type(Family),
}

#[derive(Clone, Debug)]
pub struct Decl {
    pub name: Sym,
    pub class: Classifier,
    pub pos: Option<Pos>,
}

/// Ordered declaration list. Names are pairwise distinct.
#[derive(Clone, Debug, Default)]
pub struct Signature {
    decls: IndexMap<Sym, Decl>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("duplicate declaration `{0}`")]
pub struct DuplicateDecl(pub Sym);

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, decl: Decl) -> Result<(), DuplicateDecl> {
        if self.decls.contains_key(&decl.name) {
            return Err(DuplicateDecl(decl.name));
        }
        self.decls.insert(decl.name.clone(), decl);
        Ok(())
    }

    pub fn declare_kind(&mut self, name: &str, k: Kind) -> Result<(), DuplicateDecl> {
        self.push(Decl { name: sym(name), class: Classifier::Kind(k), pos: None })
    }

    pub fn declare_type(&mut self, name: &str, a: Family) -> Result<(), DuplicateDecl> {
        self.push(Decl { name: sym(name), class: Classifier::Type(a), pos: None })
    }

    pub fn get(&self, name: &str) -> Option<&Decl> {
        self.decls.get(name)
    }

    pub fn kind_of(&self, name: &str) -> Option<&Kind> {
        match self.decls.get(name).map(|d| &d.class) {
            Some(Classifier::Kind(k)) => Some(k),
            _ => None,
        }
    }

    pub fn type_of(&self, name: &str) -> Option<&Family> {
        match self.decls.get(name).map(|d| &d.class) {
            Some(Classifier::Type(a)) => Some(a),
            _ => None,
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.decls.get_index_of(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.decls.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Decl> {
        self.decls.values()
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    /// Declarations strictly before `name`, in order.
    pub fn prefix(&self, name: &str) -> Signature {
        let mut out = Signature::new();
        for d in self.decls.values() {
            if &*d.name == name {
                break;
            }
            out.decls.insert(d.name.clone(), d.clone());
        }
        out
    }
}

/// Ordered variable bindings. Entry `i` is typed in the context of entries
/// `0..i`; lookups by de Bruijn index shift the stored type accordingly.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Context {
    entries: Vec<(Binder, Family)>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, x: Binder, a: Family) {
        self.entries.push((x, a));
    }

    pub fn pop(&mut self) -> Option<(Binder, Family)> {
        self.entries.pop()
    }

    pub fn extended(&self, x: Binder, a: Family) -> Context {
        let mut c = self.clone();
        c.push(x, a);
        c
    }

    /// Type of de Bruijn index `i`, valid in the full context.
    pub fn lookup(&self, i: usize) -> Option<Family> {
        let n = self.entries.len();
        if i >= n {
            return None;
        }
        Some(self.entries[n - 1 - i].1.shift(i + 1))
    }

    pub fn name(&self, i: usize) -> Option<&Binder> {
        let n = self.entries.len();
        (i < n).then(|| &self.entries[n - 1 - i].0)
    }

    /// Entries outermost first, each in its own prefix scope.
    pub fn entries(&self) -> &[(Binder, Family)] {
        &self.entries
    }
}

// ---------------------------------------------------------------------------
// de Bruijn shifting

impl Kind {
    pub fn shift(&self, d: usize) -> Kind {
        self.shift_from(d, 0)
    }

    pub(crate) fn shift_from(&self, d: usize, cutoff: usize) -> Kind {
        if d == 0 {
            return self.clone();
        }
        match self {
            Kind::Type => Kind::Type,
            Kind::Pi(x, a, k) => Kind::Pi(
                x.clone(),
                Box::new(a.shift_from(d, cutoff)),
                Box::new(k.shift_from(d, cutoff + 1)),
            ),
        }
    }
}

impl Family {
    pub fn shift(&self, d: usize) -> Family {
        self.shift_from(d, 0)
    }

    pub(crate) fn shift_from(&self, d: usize, cutoff: usize) -> Family {
        if d == 0 {
            return self.clone();
        }
        match self {
            Family::Base(a, args) => {
                Family::Base(a.clone(), args.iter().map(|m| m.shift_from(d, cutoff)).collect())
            }
            Family::Pi(x, a, b) => Family::Pi(
                x.clone(),
                Box::new(a.shift_from(d, cutoff)),
                Box::new(b.shift_from(d, cutoff + 1)),
            ),
        }
    }
}

impl Object {
    pub fn shift(&self, d: usize) -> Object {
        self.shift_from(d, 0)
    }

    pub(crate) fn shift_from(&self, d: usize, cutoff: usize) -> Object {
        if d == 0 {
            return self.clone();
        }
        match self {
            Object::Var(i) if *i >= cutoff => Object::Var(i + d),
            Object::Var(_) | Object::Const(_) | Object::Meta(_) => self.clone(),
            Object::Lam(x, a, m) => Object::Lam(
                x.clone(),
                Box::new(a.shift_from(d, cutoff)),
                Box::new(m.shift_from(d, cutoff + 1)),
            ),
            Object::App(f, a) => {
                Object::App(Box::new(f.shift_from(d, cutoff)), Box::new(a.shift_from(d, cutoff)))
            }
        }
    }

    /// Does de Bruijn index `i` (relative to this term's scope) occur?
    pub fn mentions(&self, i: usize) -> bool {
        match self {
            Object::Var(j) => *j == i,
            Object::Const(_) | Object::Meta(_) => false,
            Object::Lam(_, a, m) => a.mentions(i) || m.mentions(i + 1),
            Object::App(f, a) => f.mentions(i) || a.mentions(i),
        }
    }
}

impl Family {
    pub fn mentions(&self, i: usize) -> bool {
        match self {
            Family::Base(_, args) => args.iter().any(|m| m.mentions(i)),
            Family::Pi(_, a, b) => a.mentions(i) || b.mentions(i + 1),
        }
    }
}

impl Kind {
    pub fn mentions(&self, i: usize) -> bool {
        match self {
            Kind::Type => false,
            Kind::Pi(_, a, k) => a.mentions(i) || k.mentions(i + 1),
        }
    }
}
