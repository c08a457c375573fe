//! λProlog concrete syntax for programs.

use std::fmt::Write;

use crate::hohh::{Printer, Program, Style};

fn declarations(p: &Program, out: &mut String) {
    out.push_str("kind lf_obj type.\n");
    out.push_str("kind lf_type type.\n");
    for (name, ty) in &p.types {
        writeln!(out, "type {name} {ty}.").unwrap();
    }
}

fn clauses(p: &Program, out: &mut String) {
    for c in &p.clauses {
        writeln!(out, "{}.", Printer::new(Style::LambdaProlog).formula(&c.formula)).unwrap();
    }
}

/// Declarations followed by clauses, as a single file.
pub fn emit_lambdaprolog(p: &Program) -> String {
    let mut out = String::new();
    declarations(p, &mut out);
    if !p.clauses.is_empty() {
        out.push('\n');
    }
    clauses(p, &mut out);
    out
}

/// A signature file and a module file named `name`.
pub fn emit_split(p: &Program, name: &str) -> (String, String) {
    let mut sig = format!("sig {name}.\n\n");
    declarations(p, &mut sig);
    let mut module = format!("module {name}.\n\n");
    clauses(p, &mut module);
    (sig, module)
}
