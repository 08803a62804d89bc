//! Syntax: AST, parser, desugarer, pretty-printer, linear contexts, and
//! program elaboration.

pub mod ast;
pub mod context;
pub mod desugar;
pub mod parser;
pub mod pretty;
pub mod program;

pub use ast::{fresh_name, str_tail, Aspect, Name, Term, Type};
pub use context::{subst_ctx_for_var, CtxTerm};
pub use desugar::{desugar, eq_term, neg_term};
pub use parser::{parse_program_str, parse_term_str, parse_type_str, ParseError, Span};
pub use pretty::{pretty, pretty_ctx, pretty_type};
pub use program::{Def, Program, ProgramError};
