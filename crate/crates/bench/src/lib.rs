//! Fixed inputs shared by the benchmarks.

use ordrefl_core::formula::{parse_formula, RcFormula};
use ordrefl_core::theory::{parse_theory, TheoryExpr};
use ordrefl_core::worm::{as_formula, enumerate_worms, Worm};

/// Sequents that exercise packing and transitive descent.
pub fn sequents() -> Vec<(&'static str, RcFormula, RcFormula)> {
    [
        ("downshift", "<2><1>T", "<0><1>T"),
        ("packing", "<2>T & <1><0>T", "<2>(<1><0>T)"),
        ("transitive", "<1><0><1>T", "<0><1>T"),
        ("refuted", "<0><1><0>T", "<1>T"),
    ]
    .into_iter()
    .map(|(name, a, b)| (name, parse_formula(a).unwrap(), parse_formula(b).unwrap()))
    .collect()
}

/// Every worm over letters `≤ max_letter` of length `≤ max_len`, as formulas.
pub fn worm_formulas(max_letter: u32, max_len: usize) -> Vec<RcFormula> {
    enumerate_worms(max_letter, max_len).iter().map(as_formula).collect()
}

pub fn long_worms() -> Vec<Worm> {
    ["[0,1,2,0,1,2,0,1,2]", "[3,2,1,0,3,2,1,0]", "[1,3,0,2,3,1,2,0,3]"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
}

pub fn theories() -> Vec<TheoryExpr> {
    ["ISigma1", "R[Pi11, e(w)](ACA0)", "R[Pi3, w^(w)](EA+)", "R[Pi11Pi03, w](RCA0)"]
        .iter()
        .map(|s| parse_theory(s).unwrap())
        .collect()
}
