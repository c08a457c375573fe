//! Replays a recorded derivation with every unification step replaced by an
//! equality test on βη-normal terms.

use std::collections::{HashMap, HashSet};

use super::formula::{Atom, Formula, Program};
use super::solve::{backchain_view, ClauseRef, QueryGoal, Solution, Step};
use super::term::{Head, Term};

/// Does `s` witness a derivation of the query goal in `program`?
pub fn validate_solution(program: &Program, query: &QueryGoal, s: &Solution) -> bool {
    if s.bindings.len() != query.vars.len() {
        return false;
    }
    let mut r = Replay { program, free: HashMap::new(), next_free: 0, scope: HashSet::new(), backchains: 0 };
    r.next_free = s
        .derivation
        .iter()
        .filter_map(|st| match st {
            Step::Intro(e) => Some(e + 1),
            Step::Backchain { .. } => None,
        })
        .max()
        .unwrap_or(0);
    let answers: Vec<Term> = s.bindings.iter().map(|(_, t)| r.ground(t)).collect();
    if answers.iter().any(|t| r.has_stray_eigen(t)) {
        return false;
    }
    let goal = replace_lvars_in(&query.goal, &|v| answers.get(v).cloned());
    if goal.map_terms(&mut |t, _| t.clone()) != goal || has_lvar(&goal) {
        return false;
    }
    let mut steps = s.derivation.iter();
    let mut assumptions = Vec::new();
    r.prove(&goal, &mut assumptions, &mut steps) && steps.next().is_none() && r.backchains == s.cost
}

struct Replay<'p> {
    program: &'p Program,
    /// Free logic variables of the answer, read as fresh eigenvariables.
    free: HashMap<usize, usize>,
    next_free: usize,
    scope: HashSet<usize>,
    backchains: usize,
}

impl Replay<'_> {
    fn ground(&mut self, t: &Term) -> Term {
        let mut ids = Vec::new();
        t.lvars(&mut ids);
        for v in ids {
            if !self.free.contains_key(&v) {
                self.free.insert(v, self.next_free);
                self.next_free += 1;
            }
        }
        let free = &self.free;
        replace_lvars(t, 0, &|v| free.get(&v).map(|&e| Term::eigen(e)))
    }

    /// Eigenvariables not yet introduced on the path and not standing for a
    /// free logic variable.
    fn has_stray_eigen(&self, t: &Term) -> bool {
        t.any_head(&mut |h| match h {
            Head::Eigen(e) => !self.scope.contains(e) && !self.free.values().any(|f| f == e),
            _ => false,
        })
    }

    fn prove<'s>(&mut self, goal: &Formula, assumptions: &mut Vec<Formula>, steps: &mut impl Iterator<Item = &'s Step>) -> bool {
        match goal {
            Formula::True => true,
            Formula::Imp(d, g) => {
                assumptions.push((**d).clone());
                let ok = self.prove(g, assumptions, steps);
                assumptions.pop();
                ok
            }
            Formula::All(_, _, body) => {
                let Some(Step::Intro(e)) = steps.next() else { return false };
                if self.scope.contains(e) || self.free.values().any(|f| f == e) {
                    return false;
                }
                self.scope.insert(*e);
                let ok = self.prove(&body.instantiate(&[Term::eigen(*e)]), assumptions, steps);
                self.scope.remove(e);
                ok
            }
            Formula::Atom(atom) => {
                let Some(Step::Backchain { clause, witnesses }) = steps.next() else { return false };
                let formula = match *clause {
                    ClauseRef::Dynamic(i) if i < assumptions.len() => assumptions[assumptions.len() - 1 - i].clone(),
                    ClauseRef::Program(j) if j < self.program.clauses.len() => self.program.clauses[j].formula.clone(),
                    _ => return false,
                };
                let Some(view) = backchain_view(&formula) else { return false };
                if view.binders.len() != witnesses.len() {
                    return false;
                }
                let vals: Vec<Term> = witnesses.iter().map(|w| self.ground(w)).collect();
                if vals.iter().any(|w| self.has_stray_eigen(w)) {
                    return false;
                }
                let (premises, head) = view.instantiate(&vals);
                if !same_atom(&head, atom) {
                    return false;
                }
                self.backchains += 1;
                premises.iter().all(|p| self.prove(p, assumptions, steps))
            }
        }
    }
}

fn same_atom(a: &Atom, b: &Atom) -> bool {
    a.pred == b.pred
        && a.args.len() == b.args.len()
        && a.args.iter().zip(&b.args).all(|(x, y)| x.eta_contract() == y.eta_contract())
}

fn has_lvar(f: &Formula) -> bool {
    let mut found = false;
    f.map_terms(&mut |t, _| {
        found |= t.any_head(&mut |h| matches!(h, Head::LVar(_)));
        t.clone()
    });
    found
}

fn replace_lvars_in(f: &Formula, val: &dyn Fn(usize) -> Option<Term>) -> Formula {
    f.map_terms(&mut |t, depth| replace_lvars(t, depth, val))
}

/// Replaces logic variables by closed terms, reducing the redexes this
/// creates. Variables without a value are kept.
pub(crate) fn replace_lvars(t: &Term, depth: usize, val: &dyn Fn(usize) -> Option<Term>) -> Term {
    match t {
        Term::Lam(x, ty, b) => Term::Lam(x.clone(), ty.clone(), Box::new(replace_lvars(b, depth + 1, val))),
        Term::App(h, args) => {
            let args: Vec<Term> = args.iter().map(|a| replace_lvars(a, depth, val)).collect();
            match h {
                Head::LVar(v) => match val(*v) {
                    Some(s) => s.shift(depth).apply(args),
                    None => Term::App(h.clone(), args),
                },
                _ => Term::App(h.clone(), args),
            }
        }
    }
}
