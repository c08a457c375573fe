//! Pretty printer producing text the parser reads back to an α-equivalent
//! term. Binders whose variable is unused in a Pi body print as arrows.

use std::collections::HashSet;
use std::fmt;

use super::syntax::{Classifier, Context, Family, Kind, Object, Signature};

struct Names {
    /// outermost first
    stack: Vec<String>,
}

impl Names {
    fn from_context(ctx: &Context) -> Self {
        let mut n = Names { stack: Vec::new() };
        for (x, _) in ctx.entries() {
            let name = n.fresh(x.name(), &HashSet::new());
            n.stack.push(name);
        }
        n
    }

    fn var(&self, i: usize) -> String {
        let n = self.stack.len();
        if i < n {
            self.stack[n - 1 - i].clone()
        } else {
            format!("#{}", i - n)
        }
    }

    fn fresh(&self, hint: &str, avoid: &HashSet<String>) -> String {
        let base = if hint == "_" || hint.is_empty() { "x" } else { hint };
        let taken = |s: &str| self.stack.iter().any(|t| t == s) || avoid.contains(s);
        if !taken(base) {
            return base.to_string();
        }
        let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
        let stem = if stem.is_empty() { "x" } else { stem };
        (1..).map(|k| format!("{stem}{k}")).find(|s| !taken(s)).unwrap()
    }
}

fn consts_obj(m: &Object, out: &mut HashSet<String>) {
    match m {
        Object::Const(c) | Object::Meta(c) => {
            out.insert(c.to_string());
        }
        Object::Var(_) => {}
        Object::Lam(_, a, b) => {
            consts_fam(a, out);
            consts_obj(b, out);
        }
        Object::App(f, a) => {
            consts_obj(f, out);
            consts_obj(a, out);
        }
    }
}

fn consts_fam(a: &Family, out: &mut HashSet<String>) {
    match a {
        Family::Base(c, args) => {
            out.insert(c.to_string());
            args.iter().for_each(|m| consts_obj(m, out));
        }
        Family::Pi(_, a, b) => {
            consts_fam(a, out);
            consts_fam(b, out);
        }
    }
}

fn consts_kind(k: &Kind, out: &mut HashSet<String>) {
    if let Kind::Pi(_, a, k) = k {
        consts_fam(a, out);
        consts_kind(k, out);
    }
}

impl Names {
    fn kind(&mut self, k: &Kind, out: &mut String) {
        match k {
            Kind::Type => out.push_str("type"),
            Kind::Pi(x, a, body) => {
                if x.is_anonymous() && !body.mentions(0) {
                    self.family_prec(a, true, out);
                    out.push_str(" -> ");
                    self.stack.push("_".into());
                    self.kind(body, out);
                    self.stack.pop();
                } else {
                    let mut avoid = HashSet::new();
                    consts_kind(body, &mut avoid);
                    let name = self.fresh(x.name(), &avoid);
                    out.push_str(&format!("{{{name}:"));
                    self.family(a, out);
                    out.push('}');
                    out.push(' ');
                    self.stack.push(name);
                    self.kind(body, out);
                    self.stack.pop();
                }
            }
        }
    }

    fn family(&mut self, a: &Family, out: &mut String) {
        self.family_prec(a, false, out)
    }

    /// `left` means the family sits left of an arrow and a Pi needs parens.
    fn family_prec(&mut self, a: &Family, left: bool, out: &mut String) {
        match a {
            Family::Base(c, args) => {
                out.push_str(c);
                for m in args {
                    out.push(' ');
                    self.object_atom(m, out);
                }
            }
            Family::Pi(..) if left => {
                out.push('(');
                self.family_prec(a, false, out);
                out.push(')');
            }
            Family::Pi(x, dom, body) => {
                if x.is_anonymous() && !body.mentions(0) {
                    self.family_prec(dom, true, out);
                    out.push_str(" -> ");
                    self.stack.push("_".into());
                    self.family_prec(body, false, out);
                    self.stack.pop();
                } else {
                    let mut avoid = HashSet::new();
                    consts_fam(body, &mut avoid);
                    let name = self.fresh(x.name(), &avoid);
                    out.push_str(&format!("{{{name}:"));
                    self.family(dom, out);
                    out.push_str("} ");
                    self.stack.push(name);
                    self.family_prec(body, false, out);
                    self.stack.pop();
                }
            }
        }
    }

    fn object(&mut self, m: &Object, out: &mut String) {
        match m {
            Object::Lam(x, a, body) => {
                let mut avoid = HashSet::new();
                consts_obj(body, &mut avoid);
                let name = self.fresh(x.name(), &avoid);
                out.push_str(&format!("[{name}:"));
                self.family(a, out);
                out.push_str("] ");
                self.stack.push(name);
                self.object(body, out);
                self.stack.pop();
            }
            Object::App(..) => {
                let (head, args) = m.spine();
                self.object_atom(head, out);
                for a in args {
                    out.push(' ');
                    self.object_atom(a, out);
                }
            }
            _ => self.object_atom(m, out),
        }
    }

    fn object_atom(&mut self, m: &Object, out: &mut String) {
        match m {
            Object::Const(c) | Object::Meta(c) => out.push_str(c),
            Object::Var(i) => out.push_str(&self.var(*i)),
            _ => {
                out.push('(');
                self.object(m, out);
                out.push(')');
            }
        }
    }
}

pub fn object_in(ctx: &Context, m: &Object) -> String {
    let mut out = String::new();
    Names::from_context(ctx).object(m, &mut out);
    out
}

pub fn family_in(ctx: &Context, a: &Family) -> String {
    let mut out = String::new();
    Names::from_context(ctx).family(a, &mut out);
    out
}

pub fn kind_in(ctx: &Context, k: &Kind) -> String {
    let mut out = String::new();
    Names::from_context(ctx).kind(k, &mut out);
    out
}

impl fmt::Display for Object {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&object_in(&Context::new(), self))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&family_in(&Context::new(), self))
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&kind_in(&Context::new(), self))
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in self.iter() {
            match &d.class {
                Classifier::Kind(k) => writeln!(f, "{} : {k}.", d.name)?,
                Classifier::Type(a) => writeln!(f, "{} : {a}.", d.name)?,
            }
        }
        Ok(())
    }
}
