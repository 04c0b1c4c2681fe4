use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::ordinal::{eps, omega_tower, one_plus, OrdinalTerm};
use crate::worm::Worm;

use super::expr::{BaseName, ReflClass, SentenceExpr, TheoryExpr};
use super::TheoryError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RuleId {
    S1,
    S2,
    S3,
    S4,
    B1,
    B2,
    R1,
    W1,
    E1,
    RR,
}

impl RuleId {
    pub const ALL: [RuleId; 10] = [
        RuleId::S1,
        RuleId::S2,
        RuleId::S3,
        RuleId::S4,
        RuleId::B1,
        RuleId::B2,
        RuleId::R1,
        RuleId::W1,
        RuleId::E1,
        RuleId::RR,
    ];

    pub fn citation(self) -> &'static str {
        match self {
            RuleId::S1 => {
                "Theorem original Schmerl: \"In EA⁺, for any notation system α, \
                 R^α_{Π⁰_{n+m}}(EA⁺) ≡_{Π⁰_n} R^{ω_m(α)}_{Π⁰_n}(EA⁺)\""
            }
            RuleId::S2 => {
                "Theorem generalized Schmerl: \"Provably in EA⁺, for any ordinal notation α, \
                 R^α_{𝚷⁰_∞}(PA(X)) ≡_{𝚷⁰_n} R^{ε_α}_{𝚷⁰_n}(EA⁺(X))\""
            }
            RuleId::S3 => {
                "Theorem rca theorem: \"R^α_{Π¹₁(Π⁰₃)}(RCA₀) ≡_{𝚷⁰_∞} R^{1+α}_{𝚷⁰₃}(EA⁺(X))\""
            }
            RuleId::S4 => {
                "Theorem main tool: \"R^α_{Π¹₁}(ACA₀) is Π¹₁(Π⁰₃) conservative over \
                 R^{ε_α}_{Π¹₁(Π⁰₃)}(RCA₀)\""
            }
            RuleId::B1 => "Remark sigma1equivalence: \"IΣ₁ ≡ EA⁺ + RFN_{Π₃}(EA⁺)\"",
            RuleId::B2 => {
                "Remark sigma1equivalence: \"IΣ₁(X) ≡ EA⁺(X) + RFN_{𝚷⁰₃}(EA⁺(X))\""
            }
            RuleId::R1 => {
                "Proposition rank_of_iteration: \"For each Π¹₂(Π⁰₂)-sound theory T₀ and ordinal \
                 notation α: |R^α_{Π¹₁(Π⁰₃)}(T₀)|_{T₀} = |α|\""
            }
            RuleId::W1 => {
                "Theorem iterated: \"|R^α_{Π¹₁}(ACA₀)|_{ACA₀} = α and |R^α_{Π¹₁}(ACA₀)|_WO = ε_α\""
            }
            RuleId::E1 => "Theorem omega_model_reflection_rank: \"|T|_WO = |T|_{ACA₀}\"",
            RuleId::RR => "Theorem robust_rank_theorem: \"we have |T|_WO = ε_α\"",
        }
    }

    /// Class whose consequences a rewrite preserves; `None` for identities
    /// and for rules that produce a value.
    pub fn preserved(self, after: &TraceValue) -> Option<ReflClass> {
        match (self, after) {
            (RuleId::S1 | RuleId::S2, TraceValue::Theory(TheoryExpr::Iter { cls, .. })) => Some(*cls),
            (RuleId::S3, _) => Some(ReflClass::BoldPi0Inf),
            (RuleId::S4, _) => Some(ReflClass::Pi11Pi03),
            _ => None,
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceValue {
    Theory(TheoryExpr),
    Ordinal(OrdinalTerm),
}

impl fmt::Display for TraceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceValue::Theory(t) => write!(f, "{t}"),
            TraceValue::Ordinal(o) => write!(f, "{o}"),
        }
    }
}

impl Serialize for TraceValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// One rewrite. Serializes as `{rule, citation, before, after, preserves}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    #[serde(rename = "rule")]
    pub rule_id: RuleId,
    pub citation: &'static str,
    pub before: TheoryExpr,
    pub after: TraceValue,
    pub preserves: Option<ReflClass>,
}

impl TraceStep {
    fn new(rule_id: RuleId, before: TheoryExpr, after: TraceValue) -> Self {
        TraceStep {
            rule_id,
            citation: rule_id.citation(),
            preserves: rule_id.preserved(&after),
            before,
            after,
        }
    }
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} => {}", self.rule_id, self.before, self.after)?;
        if let Some(c) = self.preserves {
            write!(f, "  [preserves {c}]")?;
        }
        Ok(())
    }
}

/// Serializes as text: an ordinal term or `INFINITY`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RankValue {
    Ordinal(OrdinalTerm),
    Infinity,
}

impl fmt::Display for RankValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankValue::Ordinal(o) => write!(f, "{o}"),
            RankValue::Infinity => write!(f, "INFINITY"),
        }
    }
}

impl Serialize for RankValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankResult {
    pub value: RankValue,
    pub trace: Vec<TraceStep>,
}

impl RankResult {
    pub fn ordinal(&self) -> Option<&OrdinalTerm> {
        match &self.value {
            RankValue::Ordinal(o) => Some(o),
            RankValue::Infinity => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reduction {
    pub result: TheoryExpr,
    pub trace: Vec<TraceStep>,
}

/// The partial normal form reached when no rule leads to the target class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NoRuleApplies {
    pub partial: TheoryExpr,
    pub trace: Vec<TraceStep>,
    pub base: String,
    pub class: String,
    pub target: ReflClass,
}

fn is_base(e: &TheoryExpr, name: BaseName, x: bool) -> bool {
    matches!(e, TheoryExpr::Base { name: n, free_set_var } if *n == name && *free_set_var == x)
}

fn iter_parts(e: &TheoryExpr) -> Option<(ReflClass, &OrdinalTerm, &TheoryExpr)> {
    match e {
        TheoryExpr::Iter { cls, ord, body } => Some((*cls, ord, body)),
        _ => None,
    }
}

fn ea_plus(x: bool) -> TheoryExpr {
    TheoryExpr::Base {
        name: BaseName::EAPlus,
        free_set_var: x,
    }
}

// The unique rule applicable to `e` whose preserved class contains `target`.
fn step(e: &TheoryExpr, target: ReflClass) -> Option<(RuleId, TheoryExpr)> {
    use ReflClass::*;
    if is_base(e, BaseName::ISigma1, false) {
        return Some((RuleId::B1, TheoryExpr::iter(Pi(3), OrdinalTerm::one(), ea_plus(false))));
    }
    if is_base(e, BaseName::ACA0, false) && target.is_subclass_of(Pi11Pi03) {
        return Some((RuleId::S4, s4(&OrdinalTerm::zero())));
    }
    let (cls, ord, body) = iter_parts(e)?;
    match cls {
        Pi(k) if is_base(body, BaseName::EAPlus, false) => match target {
            Pi(n) if k > n => Some((
                RuleId::S1,
                TheoryExpr::iter(Pi(n), omega_tower((k - n) as usize, ord), ea_plus(false)),
            )),
            _ => None,
        },
        BoldPi0Inf if is_base(body, BaseName::PA, true) => match target {
            Pi(n) | BoldPi0(n) => Some((RuleId::S2, TheoryExpr::iter(BoldPi0(n), eps(ord), ea_plus(true)))),
            _ => None,
        },
        Pi11Pi03 if is_base(body, BaseName::RCA0, false) && target.is_subclass_of(BoldPi0Inf) => Some((
            RuleId::S3,
            TheoryExpr::iter(BoldPi0(3), one_plus(ord), ea_plus(true)),
        )),
        Pi11 if is_base(body, BaseName::ACA0, false) && target.is_subclass_of(Pi11Pi03) => {
            Some((RuleId::S4, s4(ord)))
        }
        BoldPi0(3) if is_base(body, BaseName::EAPlus, true) && *ord == OrdinalTerm::one() => {
            Some((RuleId::B2, TheoryExpr::base_x(BaseName::ISigma1)))
        }
        _ => None,
    }
}

fn s4(alpha: &OrdinalTerm) -> TheoryExpr {
    TheoryExpr::iter(ReflClass::Pi11Pi03, eps(alpha), TheoryExpr::base(BaseName::RCA0))
}

const MAX_STEPS: usize = 64;

/// Rewrites `e` towards an iteration of class `target`, one conservation
/// step at a time.
pub fn reduce(e: &TheoryExpr, target: ReflClass) -> Result<Reduction, TheoryError> {
    e.validate()?;
    let mut cur = e.clone();
    let mut trace: Vec<TraceStep> = Vec::new();
    while trace.len() < MAX_STEPS {
        let Some((rule, next)) = step(&cur, target) else { break };
        trace.push(TraceStep::new(rule, cur, TraceValue::Theory(next.clone())));
        cur = next;
    }
    let reached = match &cur {
        TheoryExpr::Iter { cls, .. } => *cls == target,
        TheoryExpr::Base { .. } => trace.last().is_some_and(|s| s.rule_id == RuleId::B2),
        TheoryExpr::Plus { .. } => false,
    };
    if reached {
        return Ok(Reduction { result: cur, trace });
    }
    let (base, class) = match &cur {
        TheoryExpr::Iter { cls, body, .. } => (body.to_string(), cls.to_string()),
        TheoryExpr::Base { .. } => (cur.to_string(), "none".to_string()),
        TheoryExpr::Plus { body, .. } => (body.to_string(), "Plus".to_string()),
    };
    Err(TheoryError::NoRuleApplies(Box::new(NoRuleApplies {
        partial: cur,
        trace,
        base,
        class,
        target,
    })))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RankBase {
    ACA0,
    RCA0,
}

fn contains_plus(e: &TheoryExpr) -> bool {
    match e {
        TheoryExpr::Base { .. } => false,
        TheoryExpr::Iter { body, .. } => contains_plus(body),
        TheoryExpr::Plus { .. } => true,
    }
}

// Rank of `R^β_{Π¹₁(Π⁰₃)}(base)` (or `Π¹₁` over ACA₀, or the bare base as
// β = 0) over `base`.
fn rank_value(e: &TheoryExpr, base: BaseName) -> Option<OrdinalTerm> {
    if is_base(e, base, false) {
        return Some(OrdinalTerm::zero());
    }
    let (cls, ord, body) = iter_parts(e)?;
    let class_ok = cls == ReflClass::Pi11Pi03 || (cls == ReflClass::Pi11 && base == BaseName::ACA0);
    (class_ok && is_base(body, base, false)).then(|| ord.clone())
}

/// `|e|_base`, the reflection rank over ACA₀ or RCA₀.
pub fn reflection_rank(e: &TheoryExpr, base: RankBase) -> Result<RankResult, TheoryError> {
    e.validate()?;
    if contains_plus(e) {
        return Err(TheoryError::Unsupported(format!(
            "reflection rank of an expression with added sentences: {e}"
        )));
    }
    let (base_name, mut trace, normal) = match base {
        RankBase::ACA0 => (BaseName::ACA0, Vec::new(), e.clone()),
        RankBase::RCA0 if is_base(e, BaseName::RCA0, false) => (BaseName::RCA0, Vec::new(), e.clone()),
        RankBase::RCA0 => {
            let red = reduce(e, ReflClass::Pi11Pi03)?;
            (BaseName::RCA0, red.trace, red.result)
        }
    };
    let Some(value) = rank_value(&normal, base_name) else {
        let class = iter_parts(&normal).map_or("none".to_string(), |(c, _, _)| c.to_string());
        return Err(TheoryError::NoRuleApplies(Box::new(NoRuleApplies {
            base: base_name.to_string(),
            class,
            partial: normal,
            trace,
            target: ReflClass::Pi11Pi03,
        })));
    };
    trace.push(TraceStep::new(RuleId::R1, normal, TraceValue::Ordinal(value.clone())));
    Ok(RankResult {
        value: RankValue::Ordinal(value),
        trace,
    })
}

/// `|e|_WO` for `ACA₀` and its `Π¹₁` iterations.
pub fn proof_theoretic_ordinal(e: &TheoryExpr) -> Result<RankResult, TheoryError> {
    let Some(alpha) = rank_value(e, BaseName::ACA0).filter(|_| {
        is_base(e, BaseName::ACA0, false) || matches!(iter_parts(e), Some((ReflClass::Pi11, _, _)))
    }) else {
        return Err(TheoryError::Unsupported(format!(
            "proof-theoretic ordinal is only computed for ACA0 and R[Pi11, a](ACA0), not {e}"
        )));
    };
    let value = eps(&alpha);
    Ok(RankResult {
        value: RankValue::Ordinal(value.clone()),
        trace: vec![TraceStep::new(RuleId::W1, e.clone(), TraceValue::Ordinal(value))],
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WoRegime {
    /// Extensions of ACA₀⁺: the WO-ordinal equals the rank.
    Aca0PlusExtension,
    /// Theories with robust rank `α`: the WO-ordinal is `ε_α`.
    RobustRank,
}

impl WoRegime {
    pub fn rule(self) -> RuleId {
        match self {
            WoRegime::Aca0PlusExtension => RuleId::E1,
            WoRegime::RobustRank => RuleId::RR,
        }
    }
}

pub fn wo_from_rank(rank: &OrdinalTerm, regime: WoRegime) -> OrdinalTerm {
    match regime {
        WoRegime::Aca0PlusExtension => rank.clone(),
        WoRegime::RobustRank => eps(rank),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum InterpFlavor {
    /// `(◇_n A)* = ACA₀ + RFN_{Π¹_{n+1}}(A*)`.
    Aca0Pi1n,
    /// `(◇_0 A)* = RCA₀ + RFN_{Π¹₁(Π⁰₃)}(A*)`.
    Rca0Pi11Pi03,
}

/// The arithmetical reading of a worm as a theory.
pub fn interpret_worm(w: &Worm, flavor: InterpFlavor) -> Result<TheoryExpr, TheoryError> {
    let base = TheoryExpr::base(match flavor {
        InterpFlavor::Aca0Pi1n => BaseName::ACA0,
        InterpFlavor::Rca0Pi11Pi03 => BaseName::RCA0,
    });
    w.letters().iter().rev().try_fold(base.clone(), |inner, &n| {
        let cls = match flavor {
            InterpFlavor::Aca0Pi1n => ReflClass::Pi1(n + 1),
            InterpFlavor::Rca0Pi11Pi03 if n == 0 => ReflClass::Pi11Pi03,
            InterpFlavor::Rca0Pi11Pi03 => return Err(TheoryError::UnsupportedLevel(n)),
        };
        Ok(TheoryExpr::plus(base.clone(), SentenceExpr::rfn(cls, inner)))
    })
}

// Re-applies `rule` to `before`. S1 and S2 take their target index from the
// class recorded in `after`.
fn replay_step(rule: RuleId, before: &TheoryExpr, after: &TraceValue) -> Option<TraceValue> {
    use ReflClass::*;
    let target = match (rule, after) {
        (RuleId::S1 | RuleId::S2, TraceValue::Theory(t)) => iter_parts(t)?.0,
        (RuleId::S3, _) => BoldPi0Inf,
        (RuleId::S4, _) => Pi11Pi03,
        (RuleId::B1 | RuleId::B2, _) => Pi(1),
        (RuleId::R1, _) => {
            let value = rank_value(before, BaseName::ACA0).or_else(|| rank_value(before, BaseName::RCA0))?;
            return Some(TraceValue::Ordinal(value));
        }
        (RuleId::W1, _) => return proof_theoretic_ordinal(before).ok()?.trace.pop().map(|s| s.after),
        _ => return None,
    };
    match step(before, target) {
        Some((r, next)) if r == rule => Some(TraceValue::Theory(next)),
        _ => None,
    }
}

/// Checks that a trace chains and that every step instantiates its rule.
pub fn check_trace(trace: &[TraceStep]) -> bool {
    let chained = trace
        .windows(2)
        .all(|w| w[0].after == TraceValue::Theory(w[1].before.clone()));
    chained
        && trace.iter().all(|s| {
            s.citation == s.rule_id.citation()
                && replay_step(s.rule_id, &s.before, &s.after).as_ref() == Some(&s.after)
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::parse_theory;

    fn t(s: &str) -> TheoryExpr {
        parse_theory(s).unwrap()
    }

    fn ord(s: &str) -> OrdinalTerm {
        s.parse().unwrap()
    }

    fn rules(trace: &[TraceStep]) -> Vec<RuleId> {
        trace.iter().map(|s| s.rule_id).collect()
    }

    #[test]
    fn original_schmerl() {
        for a in ["1", "w", "e(0)", "w^(w) + 1"] {
            let r = reduce(&t(&format!("R[Pi3, {a}](EA+)")), ReflClass::Pi(1)).unwrap();
            assert_eq!(r.result, TheoryExpr::iter(ReflClass::Pi(1), omega_tower(2, &ord(a)), t("EA+")));
            assert_eq!(rules(&r.trace), vec![RuleId::S1]);
            assert!(check_trace(&r.trace));
        }
        let r = reduce(&t("R[Pi3, 1](EA+)"), ReflClass::Pi(1)).unwrap();
        assert_eq!(r.result, t("R[Pi1, w^(w)](EA+)"));
    }

    #[test]
    fn main_tool() {
        let r = reduce(&t("R[Pi11, w](ACA0)"), ReflClass::Pi11Pi03).unwrap();
        assert_eq!(r.result, t("R[Pi11Pi03, e(w)](RCA0)"));
        assert_eq!(rules(&r.trace), vec![RuleId::S4]);
        assert!(r.trace[0].citation.contains("main tool"));
    }

    #[test]
    fn isigma1_pi1_ordinal() {
        let r = reduce(&t("ISigma1"), ReflClass::Pi(1)).unwrap();
        assert_eq!(r.result, t("R[Pi1, w^(w)](EA+)"));
        assert_eq!(rules(&r.trace), vec![RuleId::B1, RuleId::S1]);
        assert!(check_trace(&r.trace));
    }

    #[test]
    fn s4_then_s3_absorbs_one() {
        for a in ["0", "1", "w", "e(0)"] {
            let alpha = ord(a);
            let e = TheoryExpr::iter(ReflClass::Pi11, alpha.clone(), t("ACA0"));
            let r = reduce(&e, ReflClass::BoldPi0(3)).unwrap();
            assert_eq!(rules(&r.trace), vec![RuleId::S4, RuleId::S3]);
            let TheoryExpr::Iter { ord: index, .. } = &r.result else { panic!() };
            assert_eq!(*index, one_plus(&eps(&alpha)));
            assert_eq!(*index, eps(&alpha));
            assert!(check_trace(&r.trace));
        }
    }

    #[test]
    fn rca_base_case_reaches_isigma1() {
        let r = reduce(&t("R[Pi11Pi03, 0](RCA0)"), ReflClass::BoldPi0(3)).unwrap();
        assert_eq!(rules(&r.trace), vec![RuleId::S3, RuleId::B2]);
        assert_eq!(r.result, t("ISigma1(X)"));
    }

    #[test]
    fn generalized_schmerl() {
        let r = reduce(&t("R[bPi0inf, w](PA(X))"), ReflClass::BoldPi0(2)).unwrap();
        assert_eq!(r.result, t("R[bPi02, e(w)](EA+(X))"));
        assert!(check_trace(&r.trace));
    }

    #[test]
    fn no_rule_diagnostics() {
        let err = reduce(&t("R[Pi2, 1](PA)"), ReflClass::Pi(1)).unwrap_err();
        let TheoryError::NoRuleApplies(info) = err else { panic!() };
        assert_eq!(info.base, "PA");
        assert_eq!(info.class, "Pi2");
        assert!(info.trace.is_empty());
        let done = reduce(&t("R[Pi11, 1](ACA0)"), ReflClass::Pi11).unwrap();
        assert!(done.trace.is_empty());
        let err = reduce(&t("R[Pi11, 1](ACA0)"), ReflClass::Pi(2)).unwrap_err();
        assert_eq!(err.code(), "NO_RULE_APPLIES");
        let TheoryError::NoRuleApplies(info) = err else { panic!() };
        assert_eq!(rules(&info.trace), vec![RuleId::S4, RuleId::S3]);
        assert_eq!(info.base, "EA+(X)");
        assert!(reduce(&t("R[Pi11, 1](ACA0)"), ReflClass::BoldPi0Inf).is_err());
    }

    #[test]
    fn at_most_one_rule_applies() {
        let exprs = ["ISigma1", "ACA0", "R[Pi3, 1](EA+)", "R[bPi0inf, 1](PA(X))", "R[Pi11Pi03, 1](RCA0)",
            "R[Pi11, 1](ACA0)", "R[bPi03, 1](EA+(X))"];
        let targets = [ReflClass::Pi(1), ReflClass::Pi(2), ReflClass::BoldPi0(3), ReflClass::BoldPi0Inf,
            ReflClass::Pi11Pi03, ReflClass::Pi11];
        for e in exprs {
            for target in targets {
                let e = t(e);
                let first = step(&e, target);
                assert_eq!(first, step(&e, target));
            }
        }
    }

    #[test]
    fn rank_examples() {
        let r = reflection_rank(&t("R[Pi11, w](ACA0)"), RankBase::ACA0).unwrap();
        assert_eq!(r.value, RankValue::Ordinal(ord("w")));
        assert!(check_trace(&r.trace));
        let r = reflection_rank(&t("ACA0"), RankBase::ACA0).unwrap();
        assert_eq!(r.value, RankValue::Ordinal(OrdinalTerm::zero()));
        let r = reflection_rank(&t("R[Pi11Pi03, e(0)](RCA0)"), RankBase::RCA0).unwrap();
        assert_eq!(r.value, RankValue::Ordinal(ord("e(0)")));
        let r = reflection_rank(&t("R[Pi11, 1](ACA0)"), RankBase::RCA0).unwrap();
        assert_eq!(r.ordinal(), Some(&ord("e(1)")));
        assert_eq!(rules(&r.trace), vec![RuleId::S4, RuleId::R1]);
        assert!(check_trace(&r.trace));
        let plus = t("ACA0 + RFN[Pi1_1](ACA0)");
        assert!(matches!(reflection_rank(&plus, RankBase::ACA0), Err(TheoryError::Unsupported(_))));
        assert!(matches!(reflection_rank(&t("PA"), RankBase::ACA0), Err(TheoryError::NoRuleApplies(_))));
    }

    #[test]
    fn ordinal_of_aca0_iterations() {
        for (e, v) in [("ACA0", "e(0)"), ("R[Pi11, 1](ACA0)", "e(1)"), ("R[Pi11, w](ACA0)", "e(w)")] {
            let r = proof_theoretic_ordinal(&t(e)).unwrap();
            assert_eq!(r.ordinal(), Some(&ord(v)));
            assert_eq!(rules(&r.trace), vec![RuleId::W1]);
            assert!(check_trace(&r.trace));
        }
        assert!(matches!(proof_theoretic_ordinal(&t("RCA0")), Err(TheoryError::Unsupported(_))));
        assert!(proof_theoretic_ordinal(&t("R[Pi11Pi03, 1](ACA0)")).is_err());
    }

    #[test]
    fn wo_from_rank_examples() {
        assert_eq!(wo_from_rank(&ord("w"), WoRegime::Aca0PlusExtension), ord("w"));
        assert_eq!(wo_from_rank(&OrdinalTerm::zero(), WoRegime::RobustRank), ord("e(0)"));
        assert_eq!(wo_from_rank(&ord("e(0)"), WoRegime::RobustRank), ord("e(e(0))"));
    }

    #[test]
    fn worm_interpretations() {
        let aca = InterpFlavor::Aca0Pi1n;
        assert_eq!(interpret_worm(&Worm(vec![]), aca).unwrap(), t("ACA0"));
        assert_eq!(interpret_worm(&Worm(vec![0]), aca).unwrap(), t("ACA0 + RFN[Pi1_1](ACA0)"));
        assert_eq!(
            interpret_worm(&Worm(vec![1, 0]), aca).unwrap(),
            t("ACA0 + RFN[Pi1_2](ACA0 + RFN[Pi1_1](ACA0))")
        );
        let rca = InterpFlavor::Rca0Pi11Pi03;
        assert_eq!(interpret_worm(&Worm(vec![0, 0]), rca).unwrap(),
            t("RCA0 + RFN[Pi11Pi03](RCA0 + RFN[Pi11Pi03](RCA0))"));
        assert_eq!(interpret_worm(&Worm(vec![0, 1]), rca), Err(TheoryError::UnsupportedLevel(1)));
    }

    #[test]
    fn tampered_traces_fail() {
        let r = reduce(&t("ISigma1"), ReflClass::Pi(1)).unwrap();
        let mut bad = r.trace.clone();
        bad[1].after = TraceValue::Theory(t("R[Pi1, w](EA+)"));
        assert!(!check_trace(&bad));
        let mut swapped = r.trace.clone();
        swapped.swap(0, 1);
        assert!(!check_trace(&swapped));
    }

    #[test]
    fn trace_json_fields() {
        let r = reduce(&t("R[Pi3, 1](EA+)"), ReflClass::Pi(1)).unwrap();
        let json = serde_json::to_value(&r.trace).unwrap();
        let step = &json[0];
        assert_eq!(step["rule"], "S1");
        assert_eq!(step["before"], "R[Pi3, 1](EA+)");
        assert_eq!(step["after"], "R[Pi1, w^(w)](EA+)");
        assert_eq!(step["preserves"], "Pi1");
        assert!(step["citation"].as_str().unwrap().contains("original Schmerl"));
    }
}
