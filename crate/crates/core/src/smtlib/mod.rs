//! The supported SMT-LIB2 subset: reading, sort checking and printing.
//!
//! Commands: `set-logic`, `set-info`, `set-option`, `declare-fun`,
//! `declare-const`, `define-fun` (inlined), `assert`, `check-sat`, `exit`.
//! Anything else is recorded verbatim in [`Script::unsupported`].
//!
//! Terms range over `Real`, `Int` and `Bool` with `+ - * / < <= > >= =
//! distinct not and or => ite forall exists let` and applications of
//! declared functions. Numerals and decimals are exact rationals.

pub mod ast;
mod parser;
mod printer;
pub mod sexpr;
mod sorts;

use thiserror::Error;

pub use ast::{
    Attribute, AttributeCommand, Declaration, Loc, Op, Quantifier, Script, Sort, Term, TermKind,
    UnsupportedCommand,
};
pub use parser::{is_integer_logic, numeral_sort, parse_script, parse_term};
pub use printer::{print_script, print_term};
pub use sorts::{check_script, sort_of};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{loc}: sort error: {msg}")]
pub struct SortError {
    pub loc: Loc,
    pub msg: String,
}

impl SortError {
    pub fn new(loc: Loc, msg: impl Into<String>) -> Self {
        SortError {
            loc,
            msg: msg.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{loc}: syntax error: {msg}")]
    Syntax { loc: Loc, msg: String },
    #[error(transparent)]
    Sort(#[from] SortError),
    #[error("{loc}: undeclared symbol `{name}`")]
    Undeclared { loc: Loc, name: String },
    #[error("{loc}: symbol `{name}` is already declared")]
    Duplicate { loc: Loc, name: String },
    #[error("{loc}: unsupported construct `{what}`")]
    Unsupported { loc: Loc, what: String },
}

impl ParseError {
    pub(crate) fn syntax(loc: Loc, msg: impl Into<String>) -> Self {
        ParseError::Syntax {
            loc,
            msg: msg.into(),
        }
    }

    pub fn loc(&self) -> Option<Loc> {
        Some(match self {
            ParseError::Syntax { loc, .. }
            | ParseError::Undeclared { loc, .. }
            | ParseError::Duplicate { loc, .. }
            | ParseError::Unsupported { loc, .. } => *loc,
            ParseError::Sort(e) => e.loc,
        })
    }
}
