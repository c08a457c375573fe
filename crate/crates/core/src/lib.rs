//! Type checking, translation and execution of LF signatures through
//! higher-order hereditary Harrop logic programs.

pub mod lf;
pub mod pipeline;
pub mod hohh;
pub mod invert;
pub mod strictness;
pub mod translate;

pub use lf::{Binder, Context, Family, Kind, Object, Signature, Sym};
