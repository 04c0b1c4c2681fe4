use std::cmp::Ordering;

use ordrefl_core::formula::{derives, enumerate_formulas, flatten, parse_formula, parse_formula_exact, Decider, Level, RcFormula};
use ordrefl_core::oracle::{canonical_model, countermodel_bounded, decide_oracle, prove_bounded, replay_proof, OracleBudget, ProofBudget};
use ordrefl_core::ordinal::compare;
use ordrefl_core::worm::{as_formula, enumerate_worms, find_equivalent_worm, worm_ordinal, Worm};
use proptest::prelude::*;

fn formula(max_level: Level) -> impl Strategy<Value = RcFormula> {
    let leaf = Just(RcFormula::Top);
    leaf.prop_recursive(5, 12, 2, move |inner| {
        prop_oneof![
            3 => (0..=max_level, inner.clone()).prop_map(|(n, b)| RcFormula::dia(n, b)),
            1 => (inner.clone(), inner).prop_map(|(a, b)| RcFormula::and(a, b)),
        ]
    })
}

fn worm(max_letter: Level, max_len: usize) -> impl Strategy<Value = Worm> {
    prop::collection::vec(0..=max_letter, 0..=max_len).prop_map(Worm)
}

#[test]
fn oracle_soundness_and_completeness_on_small_formulas() {
    let fs = enumerate_formulas(4, 2);
    let mut dec = Decider::new();
    for a in &fs {
        for b in &fs {
            if dec.derives(a, b) {
                let p = prove_bounded(a, b, &ProofBudget::for_sequent(a, b));
                assert!(p.is_some_and(|p| replay_proof(&p)), "no proof for {a} |- {b}");
            } else {
                let m = countermodel_bounded(a, b, OracleBudget::default().max_worlds);
                assert!(m.is_some_and(|m| m.refutes(a, b)), "no countermodel for {a} |- {b}");
            }
        }
    }
}

#[test]
fn derivability_is_transitive_on_short_worms() {
    let ws: Vec<RcFormula> = enumerate_worms(2, 3).iter().map(as_formula).collect();
    let mut dec = Decider::new();
    let table: Vec<Vec<bool>> = ws.iter().map(|a| ws.iter().map(|b| dec.derives(a, b)).collect()).collect();
    let n = ws.len();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if table[i][j] && table[j][k] {
                    assert!(table[i][k], "{} |- {} |- {}", ws[i], ws[j], ws[k]);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn printer_round_trips(f in formula(3)) {
        prop_assert_eq!(parse_formula_exact(&f.to_string()).unwrap(), f.clone());
        prop_assert_eq!(parse_formula(&f.to_string()).unwrap(), f.normalized());
    }

    #[test]
    fn flatten_is_idempotent(f in formula(2)) {
        let once = flatten(&f);
        prop_assert_eq!(flatten(&RcFormula::from_conjuncts(once.clone())), once);
    }

    #[test]
    fn derives_matches_the_canonical_model(a in formula(2), b in formula(2)) {
        let semantic = canonical_model(&a, &b).satisfies(0, &b);
        prop_assert_eq!(derives(&a, &b), semantic, "{} |- {}", a, b);
    }

    #[test]
    fn oracle_certificates_check(a in formula(2), b in formula(2)) {
        let budget = OracleBudget { max_worlds: 16, ..OracleBudget::default() };
        let verdict = decide_oracle(&a, &b, &budget).unwrap();
        if let Some(decided) = verdict.as_bool() {
            prop_assert_eq!(decided, derives(&a, &b));
        }
    }

    #[test]
    fn derives_is_reflexive_and_weakens(a in formula(2), b in formula(2)) {
        prop_assert!(derives(&a, &a));
        prop_assert!(derives(&RcFormula::and(a.clone(), b.clone()), &a));
        prop_assert!(derives(&a, &RcFormula::Top));
    }

    #[test]
    fn worm_order_matches_ordinals(a in worm(3, 6), b in worm(3, 6)) {
        let (fa, fb) = (as_formula(&a), as_formula(&b));
        let mut dec = Decider::new();
        let c = compare(&worm_ordinal(&a), &worm_ordinal(&b));
        prop_assert_eq!(dec.less_n(0, &fa, &fb), c == Ordering::Less);
        prop_assert_eq!(dec.equivalent(&fa, &fb), c == Ordering::Equal);
    }

    #[test]
    fn worm_literals_round_trip(w in worm(9, 8)) {
        prop_assert_eq!(w.to_string().parse::<Worm>().unwrap(), w.clone());
        prop_assert_eq!(Worm::from_formula(&as_formula(&w)), Some(w));
    }

    #[test]
    fn equivalent_worms_are_verified(f in formula(1)) {
        if let Some(w) = find_equivalent_worm(&f, 6) {
            let mut dec = Decider::new();
            prop_assert!(dec.equivalent(&as_formula(&w), &f));
        }
    }
}
