//! Text formats (explicit, compact, QNP) and grounding of compact descriptions.
//!
//! Every document starts with `format: fondplus-v1` and `kind: <explicit|compact|qnp>`.
//! `#` starts a comment. See `docs/formats.md` for the full grammar.

mod compact;
mod explicit;
mod ground;
mod qnp;
mod syntax;

use thiserror::Error;

use crate::model::ModelError;

pub use compact::{
    parse_compact, serialize_compact, CompactAction, CompactError, CompactFond, ConstraintSpec,
    Literal,
};
pub use explicit::{
    parse_explicit, parse_explicit_document, parse_explicit_dual, serialize_explicit,
    serialize_explicit_with_fair, ExplicitDocument,
};
pub use ground::{ground, ground_with_cap, GroundError, GroundingResult, DEFAULT_MAX_STATES};
pub use qnp::{parse_qnp, serialize_qnp, Qnp, QnpAction, QnpCondition, QnpEffect, QnpError};
pub use syntax::document_kind;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{0}")]
    Semantic(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl ParseError {
    pub(crate) fn syntax(line: usize, msg: impl Into<String>) -> Self {
        ParseError::Syntax {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn semantic(msg: impl Into<String>) -> Self {
        ParseError::Semantic(msg.into())
    }

    /// Source line of a syntax error.
    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { line, .. } => Some(*line),
            _ => None,
        }
    }
}
