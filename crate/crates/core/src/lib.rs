//! Symbolic toolkit for the strictly positive reflection calculus and
//! iterated-reflection ordinal analysis.
//!
//! * [`ordinal`]: Cantor-normal-form terms below the first fixed point of `ε`.
//! * [`formula`]: formulas, sequents and the derivability decision procedure.
//! * [`worm`]: worms and their ordinal assignment.
//! * [`oracle`]: certificate-producing proof search and countermodel search.
//! * [`theory`]: theory expressions and the traced conservation rewrite engine.
//! * [`checks`]: exhaustive property suites shared by the CLI and tests.

pub mod checks;
pub mod error;
pub mod formula;
mod lex;
pub mod oracle;
pub mod ordinal;
pub mod theory;
pub mod worm;

pub use error::ParseError;
pub use formula::{derives, DECIDER_VERSION, enumerate_formulas, equivalent, flatten, less_n, parse_formula, Decider, Level, RcFormula, Sequent};
pub use ordinal::{add, compare, eps, normalize, omega_pow, omega_tower, one_plus, OrdinalTerm};
pub use worm::{as_formula, enumerate_worms, find_equivalent_worm, worm_ordinal, Worm};
pub use oracle::{decide_oracle, replay_proof, CounterModel, OracleBudget, ProofObject, Verdict};
pub use theory::{parse_theory, ReflClass, TheoryError, TheoryExpr};
