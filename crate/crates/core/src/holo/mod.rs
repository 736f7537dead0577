//! Parsing, printing and jet evaluation of holomorphic expressions.

mod ast;
mod jet;
mod parser;

pub use ast::{compose_affine, differentiate, eval_jet, format_expr, Func, HoloExpr};
pub use jet::Jet;
pub use parser::parse_expr;
