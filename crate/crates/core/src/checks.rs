//! Exhaustive and randomized property suites over desk-scale domains. Each
//! suite returns a [`SuiteReport`]; the CLI and the acceptance tests share
//! them.

use std::cmp::Ordering;
use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::formula::{enumerate_formulas, Decider, Level, RcFormula};
use crate::oracle::{decide_oracle, replay_proof, OracleBudget, Verdict};
use crate::ordinal::{add, compare, eps, normalize, omega_pow, omega_tower, one_plus, ExpTerm, OrdinalTerm, RawOrdinal};
use crate::theory::{
    check_trace, parse_theory, proof_theoretic_ordinal, reduce, reflection_rank, RankBase, ReflClass, TheoryExpr,
};
use crate::worm::{as_formula, enumerate_worms, find_equivalent_worm_with, worm_ordinal, Worm};

/// Failures kept verbatim in a report; the rest are only counted.
const MAX_REPORTED: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checked: usize,
    pub failed: usize,
    pub failures: Vec<String>,
    pub elapsed_ms: u128,
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} {:<20} checked={} failed={} ({} ms)",
            self.suite, self.checked, self.failed, self.elapsed_ms
        )
    }
}

struct Tally {
    name: &'static str,
    start: Instant,
    checked: usize,
    failed: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            start: Instant::now(),
            checked: 0,
            failed: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_REPORTED {
                self.failures.push(describe());
            }
        }
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            suite: self.name.to_string(),
            passed: self.failed == 0 && self.checked > 0,
            checked: self.checked,
            failed: self.failed,
            failures: self.failures,
            elapsed_ms: self.start.elapsed().as_millis(),
        }
    }
}

/// Every axiom instance over formulas of size `≤ max_size` and levels
/// `≤ max_level` is derivable, and cut, conjunction introduction and
/// monotonicity preserve derivability on the same family.
pub fn axioms(max_size: usize, max_level: Level) -> SuiteReport {
    axioms_with(&mut Decider::new(), max_size, max_level)
}

pub fn axioms_with(dec: &mut Decider, max_size: usize, max_level: Level) -> SuiteReport {
    let mut t = Tally::new("axioms");
    let fs = enumerate_formulas(max_size, max_level);
    let dia = RcFormula::dia;
    let and = RcFormula::and;
    let mut expect = |t: &mut Tally, tag: &str, a: RcFormula, b: RcFormula| {
        let ok = dec.derives(&a, &b);
        t.check(ok, || format!("{tag}: {a} |- {b}"));
    };
    for a in &fs {
        expect(&mut t, "identity", a.clone(), a.clone());
        expect(&mut t, "top", a.clone(), RcFormula::Top);
        for b in &fs {
            expect(&mut t, "conj-elim-left", and(a.clone(), b.clone()), a.clone());
            expect(&mut t, "conj-elim-right", and(a.clone(), b.clone()), b.clone());
        }
        for n in 0..=max_level {
            expect(&mut t, "transitivity", dia(n, dia(n, a.clone())), dia(n, a.clone()));
            for m in 0..n {
                expect(&mut t, "downshift", dia(n, a.clone()), dia(m, a.clone()));
                for b in &fs {
                    expect(
                        &mut t,
                        "packing",
                        and(dia(n, a.clone()), dia(m, b.clone())),
                        dia(n, and(a.clone(), dia(m, b.clone()))),
                    );
                }
            }
        }
    }
    let n = fs.len();
    let table: Vec<Vec<bool>> = fs.iter().map(|a| fs.iter().map(|b| dec.derives(a, b)).collect()).collect();
    for i in 0..n {
        for j in 0..n {
            if !table[i][j] {
                continue;
            }
            for k in 0..n {
                if table[j][k] {
                    t.check(table[i][k], || format!("cut: {} |- {}", fs[i], fs[k]));
                }
                if table[i][k] {
                    let ok = dec.derives(&fs[i], &and(fs[j].clone(), fs[k].clone()));
                    t.check(ok, || format!("conj-intro: {} |- {} & {}", fs[i], fs[j], fs[k]));
                }
            }
            for l in 0..=max_level {
                let ok = dec.derives(&dia(l, fs[i].clone()), &dia(l, fs[j].clone()));
                t.check(ok, || format!("mono: <{l}>{} |- <{l}>{}", fs[i], fs[j]));
            }
        }
    }
    t.finish()
}

/// `<_0` and `~` over a worm family, computed once and shared by the order
/// suites.
pub struct WormTable {
    pub worms: Vec<Worm>,
    pub less: Vec<Vec<bool>>,
    pub equiv: Vec<Vec<bool>>,
}

impl WormTable {
    pub fn build(max_letter: Level, max_len: usize) -> Self {
        Self::build_with(&mut Decider::new(), max_letter, max_len)
    }

    pub fn build_with(dec: &mut Decider, max_letter: Level, max_len: usize) -> Self {
        let worms = enumerate_worms(max_letter, max_len);
        let fs: Vec<RcFormula> = worms.iter().map(as_formula).collect();
        let derives: Vec<Vec<bool>> = fs.iter().map(|a| fs.iter().map(|b| dec.derives(a, b)).collect()).collect();
        let less = fs
            .iter()
            .map(|a| fs.iter().map(|b| dec.less_n(0, a, b)).collect())
            .collect();
        let n = fs.len();
        let equiv = (0..n).map(|i| (0..n).map(|j| derives[i][j] && derives[j][i]).collect()).collect();
        WormTable { worms, less, equiv }
    }

    pub fn len(&self) -> usize {
        self.worms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worms.is_empty()
    }
}

/// Exactly one of `A <_0 B`, `B <_0 A`, `A ~ B` for every pair.
pub fn trichotomy(table: &WormTable) -> SuiteReport {
    let mut t = Tally::new("trichotomy");
    let n = table.len();
    for i in 0..n {
        for j in i..n {
            let count = [table.less[i][j], table.less[j][i], table.equiv[i][j]]
                .iter()
                .filter(|&&b| b)
                .count();
            t.check(count == 1, || {
                format!("{} vs {}: {count} of <, >, ~ hold", table.worms[i], table.worms[j])
            });
        }
    }
    t.finish()
}

/// `<_0` is irreflexive, transitive and has no cycles.
pub fn acyclic(table: &WormTable) -> SuiteReport {
    let mut t = Tally::new("acyclic");
    let n = table.len();
    let w = &table.worms;
    for i in 0..n {
        t.check(!table.less[i][i], || format!("reflexive at {}", w[i]));
    }
    for i in 0..n {
        for j in 0..n {
            if !table.less[i][j] {
                continue;
            }
            for k in 0..n {
                if table.less[j][k] {
                    t.check(table.less[i][k], || format!("not transitive: {} < {} < {}", w[i], w[j], w[k]));
                }
            }
        }
    }
    // Kahn's algorithm: every node is removed iff the graph is acyclic.
    let mut indegree: Vec<usize> = (0..n).map(|j| (0..n).filter(|&i| table.less[i][j]).count()).collect();
    let mut ready: Vec<usize> = (0..n).filter(|&j| indegree[j] == 0).collect();
    let mut removed = 0;
    while let Some(i) = ready.pop() {
        removed += 1;
        for j in 0..n {
            if table.less[i][j] {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    ready.push(j);
                }
            }
        }
    }
    t.check(removed == n, || format!("cycle among {} worms", n - removed));
    t.finish()
}

/// `A <_0 B` iff `o(A) < o(B)`, `A ~ B` iff `o(A) = o(B)`, plus the
/// closed-form values of `o` on `0`-worms and single letters.
pub fn iso(table: &WormTable) -> SuiteReport {
    let mut t = Tally::new("iso");
    let ords: Vec<OrdinalTerm> = table.worms.iter().map(worm_ordinal).collect();
    let n = table.len();
    for i in 0..n {
        for j in 0..n {
            let c = compare(&ords[i], &ords[j]);
            let (wi, wj) = (&table.worms[i], &table.worms[j]);
            t.check(table.less[i][j] == (c == Ordering::Less), || {
                format!("{wi} <0 {wj} is {} but o gives {c:?}", table.less[i][j])
            });
            t.check(table.equiv[i][j] == (c == Ordering::Equal), || {
                format!("{wi} ~ {wj} is {} but o gives {c:?}", table.equiv[i][j])
            });
        }
    }
    for k in 0..=8 {
        let o = worm_ordinal(&Worm(vec![0; k]));
        t.check(o == OrdinalTerm::nat(k), || format!("o([0]x{k}) = {o}"));
    }
    for letter in 0..=3u32 {
        let o = worm_ordinal(&Worm(vec![letter]));
        let tower = omega_tower(letter as usize, &OrdinalTerm::one());
        t.check(o == tower, || format!("o([{letter}]) = {o}, expected {tower}"));
    }
    t.finish()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleCorpus {
    pub agreement: SuiteReport,
    pub certificates: SuiteReport,
    pub derivable: usize,
    pub refuted: usize,
    pub unresolved: usize,
}

/// Runs the oracle on every ordered pair of worms and compares with
/// `derives`; every certificate is re-verified independently.
pub fn oracle_agreement(max_letter: Level, max_len: usize, budget: &OracleBudget) -> OracleCorpus {
    oracle_agreement_with(&mut Decider::new(), max_letter, max_len, budget)
}

pub fn oracle_agreement_with(
    dec: &mut Decider,
    max_letter: Level,
    max_len: usize,
    budget: &OracleBudget,
) -> OracleCorpus {
    let mut agree = Tally::new("oracle-agreement");
    let mut certs = Tally::new("certificates");
    let fs: Vec<RcFormula> = enumerate_worms(max_letter, max_len).iter().map(as_formula).collect();
    let (mut derivable, mut refuted, mut unresolved) = (0, 0, 0);
    for a in &fs {
        for b in &fs {
            let expected = dec.derives(a, b);
            match decide_oracle(a, b, budget) {
                Ok(v) => {
                    match &v {
                        Verdict::Derivable(p) => {
                            derivable += 1;
                            certs.check(replay_proof(p) && p.sequent.lhs == *a && p.sequent.rhs == *b, || {
                                format!("proof of {a} |- {b} does not replay")
                            });
                        }
                        Verdict::NotDerivable(m) => {
                            refuted += 1;
                            certs.check(m.check_frame().is_ok() && m.refutes(a, b), || {
                                format!("model for {a} |- {b} fails its checks")
                            });
                        }
                        Verdict::Unresolved => unresolved += 1,
                    }
                    agree.check(v.as_bool() == Some(expected), || {
                        format!("{a} |- {b}: derives={expected}, oracle={:?}", v.as_bool())
                    });
                }
                Err(e) => {
                    agree.check(false, || format!("{a} |- {b}: {e}"));
                    certs.check(false, || format!("{a} |- {b}: {e}"));
                }
            }
        }
    }
    OracleCorpus {
        agreement: agree.finish(),
        certificates: certs.finish(),
        derivable,
        refuted,
        unresolved,
    }
}

fn theory(text: &str) -> TheoryExpr {
    parse_theory(text).expect("fixed expression parses")
}

/// The ordinal identities of the conservation rule table.
pub fn schmerl() -> SuiteReport {
    let mut t = Tally::new("schmerl");
    let alphas: Vec<OrdinalTerm> = ["0", "1", "w", "e(0)"].iter().map(|s| s.parse().unwrap()).collect();
    for alpha in &alphas {
        let e = TheoryExpr::iter(ReflClass::Pi11, alpha.clone(), theory("ACA0"));
        match proof_theoretic_ordinal(&e) {
            Ok(r) => t.check(r.ordinal() == Some(&eps(alpha)) && check_trace(&r.trace), || {
                format!("|{e}|_WO = {}, expected e({alpha})", r.value)
            }),
            Err(err) => t.check(false, || format!("|{e}|_WO: {err}")),
        }
        match reflection_rank(&e, RankBase::ACA0) {
            Ok(r) => t.check(r.ordinal() == Some(alpha) && check_trace(&r.trace), || {
                format!("|{e}|_ACA0 = {}, expected {alpha}", r.value)
            }),
            Err(err) => t.check(false, || format!("|{e}|_ACA0: {err}")),
        }
        match reduce(&e, ReflClass::BoldPi0(3)) {
            Ok(r) => {
                let index = match &r.result {
                    TheoryExpr::Iter { ord, .. } => Some(ord.clone()),
                    _ => None,
                };
                let composed = one_plus(&eps(alpha));
                t.check(
                    index.as_ref() == Some(&composed) && composed == eps(alpha) && check_trace(&r.trace),
                    || format!("S4 then S3 on {e} gave {}", r.result),
                );
            }
            Err(err) => t.check(false, || format!("reduce {e}: {err}")),
        }
    }
    let omega_omega = omega_tower(2, &OrdinalTerm::one());
    let e = theory("R[Pi3, 1](EA+)");
    match reduce(&e, ReflClass::Pi(1)) {
        Ok(r) => t.check(
            r.result == TheoryExpr::iter(ReflClass::Pi(1), omega_omega.clone(), theory("EA+")) && check_trace(&r.trace),
            || format!("reduce {e} to Pi1 gave {}", r.result),
        ),
        Err(err) => t.check(false, || format!("reduce {e}: {err}")),
    }
    match reduce(&theory("ISigma1"), ReflClass::Pi(1)) {
        Ok(r) => t.check(
            r.result == TheoryExpr::iter(ReflClass::Pi(1), omega_omega, theory("EA+")) && check_trace(&r.trace),
            || format!("reduce ISigma1 to Pi1 gave {}", r.result),
        ),
        Err(err) => t.check(false, || format!("reduce ISigma1: {err}")),
    }
    t.finish()
}

/// A random raw term of nesting depth `≤ depth`, normalized.
pub fn random_ordinal(rng: &mut impl Rng, depth: usize) -> OrdinalTerm {
    normalize(&random_raw(rng, depth))
}

fn random_raw(rng: &mut impl Rng, depth: usize) -> RawOrdinal {
    if depth == 0 {
        return RawOrdinal::Zero;
    }
    match rng.gen_range(0..10) {
        0 => RawOrdinal::Zero,
        1..=3 => {
            let parts = rng.gen_range(2..=3);
            RawOrdinal::Sum((0..parts).map(|_| random_raw(rng, depth)).collect())
        }
        4..=8 => RawOrdinal::OmegaPow(Box::new(random_raw(rng, depth - 1))),
        _ => RawOrdinal::Eps(Box::new(random_raw(rng, depth - 1))),
    }
}

fn leading_power(b: &OrdinalTerm) -> Option<OrdinalTerm> {
    b.summands().first().map(|s| match s {
        ExpTerm::OmegaExp(x) => omega_pow(x),
        ExpTerm::EpsAtom(x) => eps(x),
    })
}

/// Algebraic laws on `samples` seeded random terms of depth `≤ depth`.
pub fn ordinal_algebra(samples: usize, depth: usize, seed: u64) -> SuiteReport {
    let mut t = Tally::new("ordinal-algebra");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let a = random_ordinal(&mut rng, depth);
        let b = random_ordinal(&mut rng, depth);
        let c = random_ordinal(&mut rng, depth);
        for x in [&a, &b, &c] {
            t.check(x.is_normal(), || format!("not normal: {x}"));
        }
        let ab = compare(&a, &b);
        t.check(compare(&b, &a) == ab.reverse() && (ab == Ordering::Equal) == (a == b), || {
            format!("trichotomy: {a} vs {b}")
        });
        let left = add(&add(&a, &b), &c);
        let right = add(&a, &add(&b, &c));
        t.check(left == right, || format!("associativity: ({a} + {b}) + {c} = {left} but {a} + ({b} + {c}) = {right}"));
        if let Some(lead) = leading_power(&b) {
            if compare(&a, &lead) == Ordering::Less {
                let sum = add(&a, &b);
                t.check(sum == b, || format!("absorption: {a} + {b} = {sum}"));
            }
        }
        let (wa, wb) = (omega_pow(&a), omega_pow(&b));
        t.check(compare(&wa, &wb) == ab, || format!("monotonicity: w^{a} vs w^{b}"));
        let e = eps(&a);
        t.check(omega_pow(&e) == e && one_plus(&e) == e, || format!("fixed point: e({a})"));
        t.check(compare(&a, &add(&a, &OrdinalTerm::one())) == Ordering::Less, || format!("successor: {a}"));
    }
    t.finish()
}

/// Every closed formula of size `≤ max_size` over levels `≤ max_level` has
/// a verified equivalent worm of length `≤ max_len`.
pub fn worm_normalization(max_size: usize, max_level: Level, max_len: usize) -> SuiteReport {
    worm_normalization_with(&mut Decider::new(), max_size, max_level, max_len)
}

pub fn worm_normalization_with(dec: &mut Decider, max_size: usize, max_level: Level, max_len: usize) -> SuiteReport {
    let mut t = Tally::new("worm-normalization");
    for f in enumerate_formulas(max_size, max_level) {
        let found = find_equivalent_worm_with(dec, &f, max_len);
        let ok = found.as_ref().is_some_and(|w| dec.equivalent(&as_formula(w), &f));
        t.check(ok, || format!("no worm of length <= {max_len} for {f}"));
    }
    t.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        assert!(axioms(2, 1).passed);
        let table = WormTable::build(1, 3);
        assert!(trichotomy(&table).passed);
        assert!(acyclic(&table).passed);
        assert!(iso(&table).passed);
        assert!(schmerl().passed);
        assert!(ordinal_algebra(50, 3, 7).passed);
        assert!(worm_normalization(3, 1, 6).passed);
        let corpus = oracle_agreement(1, 2, &OracleBudget::default());
        assert!(corpus.agreement.passed && corpus.certificates.passed);
        assert_eq!(corpus.unresolved, 0);
    }

    #[test]
    fn reports_count_failures() {
        let mut t = Tally::new("demo");
        for i in 0..30 {
            t.check(i % 2 == 0, || format!("odd {i}"));
        }
        let r = t.finish();
        assert!(!r.passed);
        assert_eq!((r.checked, r.failed, r.failures.len()), (30, 15, 15));
        assert!(r.to_string().starts_with("FAIL demo"));
    }

    #[test]
    fn random_terms_respect_depth() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            assert!(random_ordinal(&mut rng, 4).depth() <= 4);
        }
    }
}
