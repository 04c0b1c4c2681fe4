//! Independent ground truth for derivability: bounded proof search with
//! replayable certificates, and bounded countermodel search.

mod model;
mod proof;

pub use model::{
    canonical_model, countermodel_bounded, enumerate_countermodel, tree_worlds, CounterModel,
    FrameViolation, MAX_ENUMERATED_WORLDS,
};
pub use proof::{
    context_formula, prove_bounded, replay_proof, ProofBudget, ProofObject, ProofSearch, RuleTag,
    DEFAULT_PROOF_DEPTH,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{RcFormula, Sequent};

pub const DEFAULT_MAX_WORLDS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleBudget {
    pub proof_depth: usize,
    /// Size bound for formulas in proof search; `None` means
    /// `2·(size(A)+size(B))`.
    pub max_formula_size: Option<usize>,
    pub max_worlds: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            proof_depth: DEFAULT_PROOF_DEPTH,
            max_formula_size: None,
            max_worlds: DEFAULT_MAX_WORLDS,
        }
    }
}

impl OracleBudget {
    fn proof_budget(&self, a: &RcFormula, b: &RcFormula) -> ProofBudget {
        ProofBudget {
            max_depth: self.proof_depth,
            max_size: self
                .max_formula_size
                .unwrap_or_else(|| 2 * (a.size() + b.size())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "certificate", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Derivable(ProofObject),
    NotDerivable(CounterModel),
    Unresolved,
}

impl Verdict {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Verdict::Derivable(_) => Some(true),
            Verdict::NotDerivable(_) => Some(false),
            Verdict::Unresolved => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("both a proof and a countermodel were found for {0}")]
    Conflict(Sequent),
    #[error("certificate for {0} failed verification")]
    InvalidCertificate(Sequent),
}

/// Runs both searches and verifies whatever they return.
pub fn decide_oracle(a: &RcFormula, b: &RcFormula, budget: &OracleBudget) -> Result<Verdict, OracleError> {
    let sequent = || Sequent::new(a.clone(), b.clone());
    let proof = prove_bounded(a, b, &budget.proof_budget(a, b));
    if let Some(p) = &proof {
        if !replay_proof(p) || p.sequent != sequent() {
            return Err(OracleError::InvalidCertificate(sequent()));
        }
    }
    let mut model = None;
    if tree_worlds(a) <= budget.max_worlds {
        let m = canonical_model(a, b);
        if m.refutes(a, b) {
            model = Some(m);
        }
    }
    if proof.is_none() && model.is_none() {
        model = enumerate_countermodel(a, b, budget.max_worlds);
    }
    if let Some(m) = &model {
        if !m.refutes(a, b) {
            return Err(OracleError::InvalidCertificate(sequent()));
        }
    }
    match (proof, model) {
        (Some(_), Some(_)) => Err(OracleError::Conflict(sequent())),
        (Some(p), None) => Ok(Verdict::Derivable(p)),
        (None, Some(m)) => Ok(Verdict::NotDerivable(m)),
        (None, None) => Ok(Verdict::Unresolved),
    }
}
