//! The logic: simple types, de Bruijn terms, proof terms, conversion and
//! proof checking for intuitionistic higher-order logic with functional
//! extensionality, plus canonical encoding and content identifiers.
//!
//! Everything here is a pure function over immutable values.

mod check;
mod encode;
mod syntax;

pub use check::{
    as_negation, beta_eta, check_proof, check_theorem, conv, ext_prop, leibniz_eq, normalize,
    prop_check, typecheck,
};
pub use encode::{
    decode_proof, decode_term, decode_ty, encode_proof, encode_term, encode_ty, prop_id,
    term_bytes, term_id, theory_bytes, theory_id, theory_signature,
};
pub(crate) use encode::raw_term_hash;
pub use syntax::{Definition, Proof, Signature, Term, Ty, SET};

use crate::hash::{ObjId, PropId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KernelError {
    #[error("unbound variable #{0}")]
    UnboundVariable(u32),
    #[error("unknown primitive p{0}")]
    UnknownPrim(u32),
    #[error("unknown object {0}")]
    UnknownRef(ObjId),
    #[error("base type {0} is not declared by the theory")]
    BadBaseType(u32),
    #[error("type mismatch: expected {expected}, found {found}")]
    TypeMismatch { expected: Ty, found: Ty },
    #[error("cannot apply a term of type {0}")]
    NotAFunction(Ty),
    #[error("no hypothesis {0}")]
    BadHyp(u32),
    #[error("unknown axiom or theorem {0}")]
    UnknownKnown(PropId),
    #[error("not an implication: {0:?}")]
    NotAnImplication(Term),
    #[error("not a universal statement: {0:?}")]
    NotAForall(Term),
    #[error("propositions are not convertible: expected {expected:?}, found {found:?}")]
    ConvFailure { expected: Term, found: Term },
    #[error("ill-typed witness: {0}")]
    IllTypedWitness(Box<KernelError>),
    #[error("term is not closed")]
    NotClosed,
    #[error("ill-typed: {0}")]
    IllTyped(Box<KernelError>),
}

impl KernelError {
    /// Stable short name, used in structured API errors.
    pub fn code(&self) -> &'static str {
        match self {
            KernelError::UnboundVariable(_) => "UnboundVariable",
            KernelError::UnknownPrim(_) => "UnknownPrim",
            KernelError::UnknownRef(_) => "UnknownRef",
            KernelError::BadBaseType(_) => "BadBaseType",
            KernelError::TypeMismatch { .. } => "TypeMismatch",
            KernelError::NotAFunction(_) => "NotAFunction",
            KernelError::BadHyp(_) => "BadHyp",
            KernelError::UnknownKnown(_) => "UnknownKnown",
            KernelError::NotAnImplication(_) => "NotAnImplication",
            KernelError::NotAForall(_) => "NotAForall",
            KernelError::ConvFailure { .. } => "ConvFailure",
            KernelError::IllTypedWitness(_) => "IllTypedWitness",
            KernelError::NotClosed => "NotClosed",
            KernelError::IllTyped(_) => "IllTyped",
        }
    }
}
