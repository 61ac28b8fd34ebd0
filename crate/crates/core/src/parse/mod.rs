//! The expression language shared by class expressions, polynomial inputs
//! and record geometry.

mod ast;
mod eval;
mod parser;

pub use ast::{Expr, Exponent, Kind, Var};
pub use eval::{eval_bi, eval_lefschetz, reciprocal_bi, reciprocal_lefschetz};
pub use parser::{parse_class_expr, parse_expr};

pub(crate) use eval::divide_lefschetz;

use crate::error::Result;
use crate::lring::{BiRational, Exp2, LefschetzRational};

/// Parses and evaluates a rational function in `u, v`.
pub fn parse_bi(src: &str, sig: Exp2) -> Result<BiRational> {
    eval_bi(&parse_expr(src)?, sig)
}

/// Parses and evaluates a rational function in `L`.
pub fn parse_lefschetz(src: &str) -> Result<LefschetzRational> {
    eval_lefschetz(&parse_expr(src)?)
}
