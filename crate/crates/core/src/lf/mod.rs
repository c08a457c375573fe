//! The Edinburgh Logical Framework: syntax, substitution and normalisation,
//! the type checker, and a Twelf-style reader and printer.

pub mod kernel;
pub mod parse;
pub mod print;
pub mod subst;
pub mod syntax;

pub use kernel::{
    canonicalize, canonicalize_family, check_object, check_signature, check_type, CheckError,
    Checker, Judgment, Rule,
};
pub use parse::{parse_family, parse_object, parse_query, parse_signature, ParseError, Query};
pub use subst::{beta_normalize_family, beta_normalize_kind, beta_normalize_object, FuelExhausted, Normalizer};
pub use syntax::{sym, Binder, Classifier, Context, Decl, Family, Kind, Object, Pos, Signature, Sym};
