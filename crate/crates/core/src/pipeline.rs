//! Parse, check, translate, solve and read back, in one place.

use crate::hohh::{Limits, Program, Solution, Solver};
use crate::invert::{invert_solution, Answer, InvertError};
use crate::lf::kernel::{check_signature, CheckError};
use crate::lf::parse::{parse_query, parse_signature, ParseError};
use crate::lf::syntax::Signature;
use crate::translate::{plan_query, simplify_program, translate_signature, Mode, QueryError, QueryPlan};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PipelineError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Check(#[from] CheckError),
    #[error("{0}")]
    Query(#[from] QueryError),
}

/// A checked signature with its translation.
#[derive(Clone, Debug)]
pub struct Pipeline {
    pub sig: Signature,
    pub mode: Mode,
    pub program: Program,
}

impl Pipeline {
    /// Parses and checks `src`, then translates it. `simplify` removes
    /// trivially true premises.
    pub fn new(src: &str, mode: Mode, simplify: bool) -> Result<Self, PipelineError> {
        let sig = parse_signature(src)?;
        Self::from_signature(sig, mode, simplify)
    }

    pub fn from_signature(sig: Signature, mode: Mode, simplify: bool) -> Result<Self, PipelineError> {
        check_signature(&sig)?;
        let mut program = translate_signature(&sig, mode);
        if simplify {
            program = simplify_program(&program);
        }
        Ok(Pipeline { sig, mode, program })
    }

    pub fn query(&self, text: &str) -> Result<QueryPlan, PipelineError> {
        let q = parse_query(text, &self.sig)?;
        Ok(plan_query(&self.sig, &q, self.mode)?)
    }

    pub fn solver<'a>(&'a self, plan: &QueryPlan, limits: Limits) -> Solver<'a> {
        Solver::new(&self.program, plan.goal.clone(), limits)
    }

    pub fn answer(&self, plan: &QueryPlan, s: &Solution) -> Result<Answer, InvertError> {
        invert_solution(&self.sig, &self.program.types, plan, s)
    }
}
