//! Iterated-reflection theory expressions and a traced rewrite system built
//! from conservation theorems, computing reflection ranks and proof-theoretic
//! ordinals.

mod engine;
mod expr;

pub use engine::{
    check_trace, interpret_worm, proof_theoretic_ordinal, reduce, reflection_rank, wo_from_rank,
    InterpFlavor, NoRuleApplies, RankBase, RankResult, RankValue, Reduction, RuleId, TraceStep,
    TraceValue, WoRegime,
};
pub use expr::{parse_class, parse_theory, BaseName, ReflClass, SentenceExpr, TheoryExpr};

use thiserror::Error;

use crate::error::ParseError;
use crate::formula::Level;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("class mismatch: {0}")]
    ClassMismatch(String),
    #[error("no rule applies to ({}, {})", .0.base, .0.class)]
    NoRuleApplies(Box<NoRuleApplies>),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unsupported level {0}: only letter 0 has an RCA0 interpretation")]
    UnsupportedLevel(Level),
}

impl TheoryError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            TheoryError::Parse(_) => "PARSE_ERROR",
            TheoryError::ClassMismatch(_) => "CLASS_MISMATCH",
            TheoryError::NoRuleApplies(_) => "NO_RULE_APPLIES",
            TheoryError::Unsupported(_) => "UNSUPPORTED",
            TheoryError::UnsupportedLevel(_) => "UNSUPPORTED_LEVEL",
        }
    }
}
