//! Higher-order hereditary Harrop formulas: terms, unification and proof
//! search.

pub mod formula;
pub mod solve;
pub mod term;
pub mod unify;
pub mod validate;

pub use formula::{Atom, Formula, Printer, Program, ProgramClause, Style, HASTYPE};
pub use solve::{
    backchain_view, instantiate_clause, solve, unify_atoms, BackchainView, ClauseRef, Limits, QueryGoal, Solution,
    Solver, Status, Step,
};
pub use term::{Head, SimpleType, Term};
pub use unify::{Mark, Store};
pub use validate::validate_solution;
