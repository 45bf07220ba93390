//! Surface syntax for theories and documents, and document checking.
//!
//! ```text
//! theory NAME            document THEORY
//! base N                 param obj NAME : TYPE = #HEX
//! prim NAME : TYPE       param known NAME = #HEX
//! notation NAME BINDERS := TERM
//! axiom NAME : TERM      def NAME : TYPE := TERM
//!                        thm NAME : TERM proof PROOF
//!                        conj NAME "TAG" : TERM
//! ```
//!
//! Terms: `fun (x : T) => t`, `all (x : T) => t`, `a -> b`, application by
//! juxtaposition, `#HEX` references. Proofs: `assume (h : t) => p`,
//! `allintro (x : T) => p`, `apply(p, q, ...)`, `allelim(p, t, ...)`,
//! `ext(T, U)`, `known(NAME)` and hypothesis names. `--` starts a comment.

mod ast;
mod check;
pub mod corpus;
mod lexer;
mod parser;
mod printer;

pub use ast::{AxiomDecl, Document, Item, Library, ParamTarget, PrimDecl, TheorySpec, DEFAULT_TAG};
pub use check::{check_doc, check_doc_report, DocEffect, ItemReport, ItemStatus, NewConj, NewDef, NewThm};
pub use parser::{is_keyword, parse_doc, parse_term_in, parse_theory, KEYWORDS};
pub use printer::{print_doc, print_proof, print_term, print_theory, Names};

use crate::kernel::KernelError;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: expected {expected}")]
    Syntax { line: u32, col: u32, expected: String },
    #[error("{line}:{col}: unknown name `{name}`")]
    UnknownName { name: String, line: u32, col: u32 },
    #[error("{line}:{col}: `{name}` takes {expected} arguments, got {found}")]
    Arity { name: String, expected: usize, found: usize, line: u32, col: u32 },
    #[error("{line}:{col}: `{name}` is already defined")]
    Duplicate { name: String, line: u32, col: u32 },
    #[error("{line}:{col}: unknown theory `{key}`")]
    UnknownTheory { key: String, line: u32, col: u32 },
}

impl ParseError {
    pub fn code(&self) -> &'static str {
        match self {
            ParseError::Syntax { .. } => "SyntaxError",
            ParseError::UnknownName { .. } => "UnknownName",
            ParseError::Arity { .. } => "ArityError",
            ParseError::Duplicate { .. } => "DuplicateName",
            ParseError::UnknownTheory { .. } => "UnknownTheory",
        }
    }

    pub fn position(&self) -> (u32, u32) {
        match self {
            ParseError::Syntax { line, col, .. }
            | ParseError::UnknownName { line, col, .. }
            | ParseError::Arity { line, col, .. }
            | ParseError::Duplicate { line, col, .. }
            | ParseError::UnknownTheory { line, col, .. } => (*line, *col),
        }
    }
}

/// A kernel failure at a particular document item.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("item {index} (`{name}`): {error}")]
pub struct DocError {
    pub index: usize,
    pub name: String,
    pub error: KernelError,
}
