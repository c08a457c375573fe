//! Goal-directed proof search with backchaining and iterative deepening on
//! the number of backchain steps.
//!
//! The machine keeps a persistent continuation of pending goals, a stack of
//! choice points and the unification store. Round `d` of the deepening
//! explores every derivation using at most `d` backchains and reports those
//! using exactly `d`, so no answer is reported twice.

use std::rc::Rc;

use super::formula::{Atom, Formula, Program};
use super::term::{SimpleType, Term};
use super::unify::{Mark, Store};
use crate::lf::syntax::Sym;

/// Goal with its free logic variables. Variable `i` of `vars` appears in
/// `goal` as `Head::LVar(i)` and is created at level 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryGoal {
    pub vars: Vec<(Sym, SimpleType)>,
    pub goal: Formula,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest number of backchain steps in a derivation.
    pub max_depth: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_depth: 32 }
    }
}

/// How enumeration ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Running,
    /// Every derivation has been explored.
    Exhausted,
    /// Some branch was cut by the depth bound.
    DepthExhausted,
}

/// One answer: the instantiation of each query variable (in query order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub bindings: Vec<(Sym, Term)>,
    /// Backchain steps in the derivation.
    pub cost: usize,
    /// Logic variables left uninstantiated, with display names.
    pub free: Vec<(usize, Sym)>,
    /// The derivation in the order the goals were reduced.
    pub derivation: Vec<Step>,
}

/// Which clause a backchain step used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClauseRef {
    /// Assumption `i`, counting from the most recent.
    Dynamic(usize),
    /// Program clause `j`.
    Program(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    /// A universal goal introduced this eigenvariable.
    Intro(usize),
    /// Backchaining on a clause whose quantifiers were instantiated with
    /// `witnesses`.
    Backchain { clause: ClauseRef, witnesses: Vec<Term> },
}

#[derive(Clone, Debug)]
enum Event {
    Intro(usize),
    Backchain(ClauseRef, Vec<usize>),
}

impl Solution {
    pub fn get(&self, name: &str) -> Option<&Term> {
        self.bindings.iter().find(|(n, _)| &**n == name).map(|(_, t)| t)
    }

    /// Display name for a logic variable occurring in this solution.
    pub fn var_name(&self, v: usize) -> String {
        self.free
            .iter()
            .find(|(id, _)| *id == v)
            .map(|(_, n)| n.to_string())
            .unwrap_or_else(|| format!("_G{v}"))
    }
}

/// Persistent list.
#[derive(Debug)]
struct Node<T> {
    head: T,
    next: List<T>,
}

type List<T> = Option<Rc<Node<T>>>;

fn cons<T>(head: T, next: List<T>) -> List<T> {
    Some(Rc::new(Node { head, next }))
}

#[derive(Clone, Debug)]
struct Pending {
    goal: Formula,
    assumptions: List<Formula>,
    level: usize,
}

struct ChoicePoint {
    atom: Atom,
    trail: List<Event>,
    assumptions: List<Formula>,
    level: usize,
    cont: List<Pending>,
    dynamic: Rc<Vec<Formula>>,
    next_alt: usize,
    mark: Mark,
    cost: usize,
}

/// Clause split into quantifier types, premises (outermost first) and head,
/// all in the scope of the quantifiers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BackchainView {
    pub binders: Vec<SimpleType>,
    pub premises: Vec<Formula>,
    pub head: Atom,
}

/// Flattens a clause in ∀/⊃ prefix form. Premises under a quantifier are
/// shifted into the scope of all quantifiers.
pub fn backchain_view(clause: &Formula) -> Option<BackchainView> {
    let mut binders = Vec::new();
    let mut premises: Vec<(Formula, usize)> = Vec::new();
    let mut cur = clause;
    loop {
        match cur {
            Formula::All(_, ty, b) => {
                binders.push(ty.clone());
                cur = b;
            }
            Formula::Imp(g, d) => {
                premises.push(((**g).clone(), binders.len()));
                cur = d;
            }
            Formula::Atom(a) => {
                let n = binders.len();
                let premises = premises.into_iter().map(|(g, at)| g.shift(n - at)).collect();
                return Some(BackchainView { binders, premises, head: a.clone() });
            }
            Formula::True => return None,
        }
    }
}

/// Instantiates a clause's quantifiers with fresh logic variables at
/// `level`, returning the variables, the premises and the head.
pub fn instantiate_clause(store: &mut Store, clause: &Formula, level: usize) -> Option<(Vec<usize>, Vec<Formula>, Atom)> {
    let view = backchain_view(clause)?;
    let ids: Vec<usize> = view.binders.iter().map(|ty| store.new_var(level, ty.clone())).collect();
    let vals: Vec<Term> = ids.iter().map(|&v| Term::lvar(v)).collect();
    let (premises, head) = view.instantiate(&vals);
    Some((ids, premises, head))
}

impl BackchainView {
    /// Premises and head with the quantifiers replaced by `vals`.
    pub fn instantiate(&self, vals: &[Term]) -> (Vec<Formula>, Atom) {
        let premises = self.premises.iter().map(|g| g.instantiate(vals)).collect();
        let head = match Formula::Atom(self.head.clone()).instantiate(vals) {
            Formula::Atom(a) => a,
            _ => unreachable!(),
        };
        (premises, head)
    }
}

/// Unifies two atoms.
pub fn unify_atoms(store: &mut Store, a: &Atom, b: &Atom) -> bool {
    a.pred == b.pred && a.args.len() == b.args.len() && a.args.iter().zip(&b.args).all(|(x, y)| store.unify(x, y))
}

/// Lazy enumeration of answers.
pub struct Solver<'p> {
    program: &'p Program,
    query: QueryGoal,
    limits: Limits,
    store: Store,
    base: Mark,
    budget: usize,
    cost: usize,
    cont: List<Pending>,
    trail: List<Event>,
    choices: Vec<ChoicePoint>,
    cutoff: bool,
    in_round: bool,
    /// The round's search space is spent but its end is not yet processed.
    drained: bool,
    status: Status,
    suspended: usize,
    steps: u64,
}

impl<'p> Solver<'p> {
    pub fn new(program: &'p Program, query: QueryGoal, limits: Limits) -> Self {
        let mut store = Store::new();
        for (_, ty) in &query.vars {
            store.new_var(0, ty.clone());
        }
        let base = store.mark();
        Solver {
            program,
            query,
            limits,
            store,
            base,
            budget: 0,
            cost: 0,
            cont: None,
            trail: None,
            choices: Vec::new(),
            cutoff: false,
            in_round: false,
            drained: false,
            status: Status::Running,
            suspended: 0,
            steps: 0,
        }
    }

    pub fn status(&self) -> Status {
        self.status
    }

    /// Branches that succeeded only up to postponed equations.
    pub fn suspended(&self) -> usize {
        self.suspended
    }

    /// Goal reductions performed so far, across all rounds.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    fn start_round(&mut self) {
        self.store.undo(&self.base);
        self.cost = 0;
        self.cutoff = false;
        self.choices.clear();
        self.trail = None;
        self.cont = cons(Pending { goal: self.query.goal.clone(), assumptions: None, level: 0 }, None);
        self.in_round = true;
    }

    fn solution(&self) -> Solution {
        let bindings: Vec<(Sym, Term)> = self
            .query
            .vars
            .iter()
            .enumerate()
            .map(|(i, (name, _))| (name.clone(), self.store.resolve(&Term::lvar(i))))
            .collect();
        let mut ids = Vec::new();
        for (_, t) in &bindings {
            t.lvars(&mut ids);
        }
        let free = ids
            .into_iter()
            .map(|v| {
                let name = match self.query.vars.get(v) {
                    Some((n, _)) => n.clone(),
                    None => crate::lf::syntax::sym(&format!("_G{v}")),
                };
                (v, name)
            })
            .collect();
        let mut events = Vec::new();
        let mut cur = &self.trail;
        while let Some(n) = cur {
            events.push(n.head.clone());
            cur = &n.next;
        }
        events.reverse();
        let derivation = events
            .into_iter()
            .map(|e| match e {
                Event::Intro(e) => Step::Intro(e),
                Event::Backchain(clause, ids) => Step::Backchain {
                    clause,
                    witnesses: ids.iter().map(|&v| self.store.resolve(&Term::lvar(v))).collect(),
                },
            })
            .collect();
        Solution { bindings, cost: self.cost, free, derivation }
    }

    /// Resumes the most recent choice point; `false` when none is left.
    fn backtrack(&mut self) -> bool {
        while let Some(mut cp) = self.choices.pop() {
            if self.try_alternatives(&mut cp) {
                self.choices.push(cp);
                return true;
            }
        }
        false
    }

    fn alternative(&self, cp: &ChoicePoint, i: usize) -> Option<(ClauseRef, Formula)> {
        if i < cp.dynamic.len() {
            Some((ClauseRef::Dynamic(i), cp.dynamic[i].clone()))
        } else {
            let j = i - cp.dynamic.len();
            self.program.clauses.get(j).map(|c| (ClauseRef::Program(j), c.formula.clone()))
        }
    }

    /// Tries alternatives from `cp.next_alt`; on success the machine state
    /// continues with that clause's premises.
    fn try_alternatives(&mut self, cp: &mut ChoicePoint) -> bool {
        while let Some((which, clause)) = self.alternative(cp, cp.next_alt) {
            cp.next_alt += 1;
            self.store.undo(&cp.mark);
            let Some((ids, premises, head)) = instantiate_clause(&mut self.store, &clause, cp.level) else { continue };
            if !unify_atoms(&mut self.store, &head, &cp.atom) {
                continue;
            }
            if cp.cost + 1 > self.budget {
                self.cutoff = true;
                continue;
            }
            self.cost = cp.cost + 1;
            let mut cont = cp.cont.clone();
            for g in premises.into_iter().rev() {
                cont = cons(Pending { goal: g, assumptions: cp.assumptions.clone(), level: cp.level }, cont);
            }
            self.cont = cont;
            self.trail = cons(Event::Backchain(which, ids), cp.trail.clone());
            return true;
        }
        self.store.undo(&cp.mark);
        false
    }

    /// Runs until the next answer of the current round, or the round ends.
    fn run_round(&mut self) -> Option<Solution> {
        if self.drained {
            self.drained = false;
            self.in_round = false;
            return None;
        }
        loop {
            let Some(node) = self.cont.clone() else {
                let answer = if !self.store.residuals().is_empty() {
                    self.suspended += 1;
                    None
                } else if self.cost == self.budget {
                    Some(self.solution())
                } else {
                    None
                };
                if !self.backtrack() {
                    self.cont = None;
                    self.drained = true;
                    return answer.or_else(|| self.run_round());
                }
                if answer.is_some() {
                    return answer;
                }
                continue;
            };
            self.steps += 1;
            self.cont = node.next.clone();
            let Pending { goal, assumptions, level } = node.head.clone();
            match goal {
                Formula::True => {}
                Formula::All(_, ty, body) => {
                    let e = self.store.new_eigen(level + 1, ty);
                    self.trail = cons(Event::Intro(e), self.trail.take());
                    let body = body.instantiate(&[Term::eigen(e)]);
                    self.cont = cons(Pending { goal: body, assumptions, level: level + 1 }, self.cont.take());
                }
                Formula::Imp(d, g) => {
                    let assumptions = cons(*d, assumptions);
                    self.cont = cons(Pending { goal: *g, assumptions, level }, self.cont.take());
                }
                Formula::Atom(atom) => {
                    let mut dynamic = Vec::new();
                    let mut cur = &assumptions;
                    while let Some(n) = cur {
                        dynamic.push(n.head.clone());
                        cur = &n.next;
                    }
                    let mut cp = ChoicePoint {
                        atom,
                        trail: self.trail.clone(),
                        assumptions,
                        level,
                        cont: self.cont.clone(),
                        dynamic: Rc::new(dynamic),
                        next_alt: 0,
                        mark: self.store.mark(),
                        cost: self.cost,
                    };
                    if self.try_alternatives(&mut cp) {
                        self.choices.push(cp);
                    } else if !self.backtrack() {
                        self.in_round = false;
                        return None;
                    }
                }
            }
        }
    }
}

impl Iterator for Solver<'_> {
    type Item = Solution;

    fn next(&mut self) -> Option<Solution> {
        loop {
            if self.status != Status::Running {
                return None;
            }
            if !self.in_round {
                self.start_round();
            }
            if let Some(s) = self.run_round() {
                return Some(s);
            }
            if !self.in_round {
                if !self.cutoff {
                    self.status = Status::Exhausted;
                } else if self.budget >= self.limits.max_depth {
                    self.status = Status::DepthExhausted;
                } else {
                    self.budget += 1;
                }
            }
        }
    }
}

/// Convenience: all answers within the limits.
pub fn solve(program: &Program, query: QueryGoal, limits: Limits) -> (Vec<Solution>, Status) {
    let mut s = Solver::new(program, query, limits);
    let all: Vec<Solution> = s.by_ref().collect();
    (all, s.status())
}
