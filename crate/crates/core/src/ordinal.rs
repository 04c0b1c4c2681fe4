//! Ordinal terms in Cantor normal form over ω-powers and ε-atoms.
//!
//! A term is a weakly decreasing sum of summands, each either `ω^a` or
//! `ε_a` with `a` itself a normal term. Coefficients are spelled out as
//! repeated summands (`ω + ω`, never `ω·2`), and `ω^{ε_a}` is always stored as
//! `ε_a`, so structural equality coincides with ordinal equality.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;
use crate::lex::Cursor;

/// A single summand of a normal-form term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExpTerm {
    OmegaExp(OrdinalTerm),
    EpsAtom(OrdinalTerm),
}

/// An ordinal in normal form. The empty sum is 0. Serializes as its text.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct OrdinalTerm {
    summands: Vec<ExpTerm>,
}

/// Unnormalized syntax over `0`, `+`, `ω^·` and `ε_·`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawOrdinal {
    Zero,
    Sum(Vec<RawOrdinal>),
    OmegaPow(Box<RawOrdinal>),
    Eps(Box<RawOrdinal>),
}

impl RawOrdinal {
    pub fn one() -> Self {
        RawOrdinal::OmegaPow(Box::new(RawOrdinal::Zero))
    }

    pub fn omega() -> Self {
        RawOrdinal::OmegaPow(Box::new(RawOrdinal::one()))
    }
}

impl OrdinalTerm {
    pub fn zero() -> Self {
        OrdinalTerm { summands: Vec::new() }
    }

    pub fn one() -> Self {
        omega_pow(&OrdinalTerm::zero())
    }

    pub fn omega() -> Self {
        omega_pow(&OrdinalTerm::one())
    }

    /// The finite ordinal `n`, as `n` copies of `ω^0`.
    pub fn nat(n: usize) -> Self {
        OrdinalTerm {
            summands: vec![ExpTerm::OmegaExp(OrdinalTerm::zero()); n],
        }
    }

    pub fn summands(&self) -> &[ExpTerm] {
        &self.summands
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    /// `Some(n)` when the term is a natural number.
    pub fn as_nat(&self) -> Option<usize> {
        self.summands
            .iter()
            .all(|s| matches!(s, ExpTerm::OmegaExp(e) if e.is_zero()))
            .then_some(self.summands.len())
    }

    fn single_eps(&self) -> Option<&OrdinalTerm> {
        match self.summands.as_slice() {
            [ExpTerm::EpsAtom(index)] => Some(index),
            _ => None,
        }
    }

    /// Checks every structural invariant, recursively.
    pub fn is_normal(&self) -> bool {
        self.summands.windows(2).all(|w| compare_exp(&w[0], &w[1]) != Ordering::Less)
            && self.summands.iter().all(|s| match s {
                ExpTerm::OmegaExp(e) => e.single_eps().is_none() && e.is_normal(),
                ExpTerm::EpsAtom(i) => i.is_normal(),
            })
    }

    /// Number of constructor nodes; used to bound random generation.
    pub fn depth(&self) -> usize {
        self.summands
            .iter()
            .map(|s| match s {
                ExpTerm::OmegaExp(e) | ExpTerm::EpsAtom(e) => 1 + e.depth(),
            })
            .max()
            .unwrap_or(0)
    }
}

/// Canonicalizes raw syntax: absorbed summands are dropped and `ω^{ε_a}`
/// collapses to `ε_a`.
pub fn normalize(raw: &RawOrdinal) -> OrdinalTerm {
    match raw {
        RawOrdinal::Zero => OrdinalTerm::zero(),
        RawOrdinal::Sum(parts) => parts
            .iter()
            .fold(OrdinalTerm::zero(), |acc, p| add(&acc, &normalize(p))),
        RawOrdinal::OmegaPow(e) => omega_pow(&normalize(e)),
        RawOrdinal::Eps(i) => eps(&normalize(i)),
    }
}

fn compare_exp(a: &ExpTerm, b: &ExpTerm) -> Ordering {
    use ExpTerm::*;
    match (a, b) {
        (OmegaExp(x), OmegaExp(y)) => compare(x, y),
        (EpsAtom(x), EpsAtom(y)) => compare(x, y),
        // ω^x against ε_y = ω^{ε_y}: compare the exponents.
        (OmegaExp(x), EpsAtom(y)) => compare_with_eps(x, y),
        (EpsAtom(x), OmegaExp(y)) => compare_with_eps(y, x).reverse(),
    }
}

/// Compares `x` with `ε_index`.
fn compare_with_eps(x: &OrdinalTerm, index: &OrdinalTerm) -> Ordering {
    let atom = ExpTerm::EpsAtom(index.clone());
    match x.summands.first() {
        None => Ordering::Less,
        Some(head) => match compare_exp(head, &atom) {
            Ordering::Equal if x.summands.len() > 1 => Ordering::Greater,
            ord => ord,
        },
    }
}

/// Total order on normal forms: lexicographic on summands, with a proper
/// prefix being smaller.
pub fn compare(a: &OrdinalTerm, b: &OrdinalTerm) -> Ordering {
    for (x, y) in a.summands.iter().zip(&b.summands) {
        match compare_exp(x, y) {
            Ordering::Equal => continue,
            ord => return ord,
        }
    }
    a.summands.len().cmp(&b.summands.len())
}

impl PartialOrd for OrdinalTerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdinalTerm {
    fn cmp(&self, other: &Self) -> Ordering {
        compare(self, other)
    }
}

/// Ordinal addition.
pub fn add(a: &OrdinalTerm, b: &OrdinalTerm) -> OrdinalTerm {
    let Some(lead) = b.summands.first() else {
        return a.clone();
    };
    let keep = a
        .summands
        .iter()
        .take_while(|s| compare_exp(s, lead) != Ordering::Less)
        .count();
    let mut summands = a.summands[..keep].to_vec();
    summands.extend(b.summands.iter().cloned());
    OrdinalTerm { summands }
}

/// `ω^a`. A lone ε-atom is its own ω-power.
pub fn omega_pow(a: &OrdinalTerm) -> OrdinalTerm {
    if a.single_eps().is_some() {
        return a.clone();
    }
    OrdinalTerm {
        summands: vec![ExpTerm::OmegaExp(a.clone())],
    }
}

/// `ε_a`.
pub fn eps(a: &OrdinalTerm) -> OrdinalTerm {
    OrdinalTerm {
        summands: vec![ExpTerm::EpsAtom(a.clone())],
    }
}

/// `ω_m(a)`: `m` nested applications of `ω^·` to `a`.
pub fn omega_tower(m: usize, a: &OrdinalTerm) -> OrdinalTerm {
    (0..m).fold(a.clone(), |acc, _| omega_pow(&acc))
}

/// `1 + a`.
pub fn one_plus(a: &OrdinalTerm) -> OrdinalTerm {
    add(&OrdinalTerm::one(), a)
}

impl fmt::Display for ExpTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpTerm::OmegaExp(e) if e.is_zero() => write!(f, "1"),
            ExpTerm::OmegaExp(e) if e.as_nat() == Some(1) => write!(f, "w"),
            ExpTerm::OmegaExp(e) => write!(f, "w^({e})"),
            ExpTerm::EpsAtom(i) => write!(f, "e({i})"),
        }
    }
}

impl fmt::Display for OrdinalTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return write!(f, "0");
        }
        for (i, s) in self.summands.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Parses the textual ordinal grammar into raw syntax, without normalizing.
pub fn parse_raw(text: &str) -> Result<RawOrdinal, ParseError> {
    let mut cur = Cursor::new(text);
    let raw = parse_ord(&mut cur)?;
    cur.expect_end()?;
    Ok(raw)
}

// `0` is accepted as a summand too, so raw inputs like `0 + 0` parse.
pub(crate) fn parse_ord(cur: &mut Cursor<'_>) -> Result<RawOrdinal, ParseError> {
    let mut terms = vec![parse_term(cur)?];
    while cur.eat("+") {
        terms.push(parse_term(cur)?);
    }
    Ok(if terms.len() == 1 {
        terms.pop().unwrap()
    } else {
        RawOrdinal::Sum(terms)
    })
}

fn parse_term(cur: &mut Cursor<'_>) -> Result<RawOrdinal, ParseError> {
    if cur.eat("0") {
        Ok(RawOrdinal::Zero)
    } else if cur.eat("1") {
        Ok(RawOrdinal::one())
    } else if cur.eat("w^(") {
        let inner = parse_ord(cur)?;
        cur.expect(")")?;
        Ok(RawOrdinal::OmegaPow(Box::new(inner)))
    } else if cur.eat("w") {
        Ok(RawOrdinal::omega())
    } else if cur.eat("e(") {
        let inner = parse_ord(cur)?;
        cur.expect(")")?;
        Ok(RawOrdinal::Eps(Box::new(inner)))
    } else {
        Err(cur.error("expected ordinal term `1`, `w`, `w^(..)` or `e(..)`"))
    }
}

impl Serialize for OrdinalTerm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for OrdinalTerm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for OrdinalTerm {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_raw(s).map(|raw| normalize(&raw))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(s: &str) -> OrdinalTerm {
        s.parse().unwrap()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(ord("1 + w"), OrdinalTerm::omega());
        assert_eq!(ord("w^(e(0))"), eps(&OrdinalTerm::zero()));
        assert_eq!(ord("0 + 0"), OrdinalTerm::zero());
        assert_eq!(ord("1 + w").to_string(), "w");
    }

    #[test]
    fn compare_examples() {
        assert_eq!(compare(&ord("w"), &ord("w")), Ordering::Equal);
        assert_eq!(compare(&ord("w + w"), &ord("w^(w)")), Ordering::Less);
        assert_eq!(compare(&ord("e(0)"), &ord("w^(w^(w))")), Ordering::Greater);
        assert_eq!(compare(&ord("e(0) + 1"), &ord("e(0)")), Ordering::Greater);
        assert_eq!(compare(&ord("w^(e(0) + 1)"), &ord("e(0) + e(0)")), Ordering::Greater);
        assert_eq!(compare(&ord("e(1)"), &ord("w^(e(0) + 1)")), Ordering::Greater);
    }

    #[test]
    fn add_examples() {
        assert_eq!(add(&ord("1"), &ord("w")), ord("w"));
        assert_eq!(add(&ord("w"), &ord("1")).to_string(), "w + 1");
        assert_eq!(add(&ord("0"), &ord("e(0)")), ord("e(0)"));
        assert_eq!(add(&ord("w + 1"), &ord("w")).to_string(), "w + w");
    }

    #[test]
    fn omega_pow_and_eps_examples() {
        assert_eq!(omega_pow(&ord("0")), ord("1"));
        assert_eq!(omega_pow(&ord("1")), ord("w"));
        assert_eq!(omega_pow(&ord("e(0)")), ord("e(0)"));
        assert_eq!(eps(&ord("0")).to_string(), "e(0)");
        assert_eq!(compare(&eps(&ord("0")), &eps(&ord("1"))), Ordering::Less);
        assert_eq!(omega_pow(&eps(&ord("w"))), eps(&ord("w")));
    }

    #[test]
    fn tower_and_one_plus_examples() {
        let alpha = ord("w + 1");
        assert_eq!(omega_tower(0, &alpha), alpha);
        // ω_1(1) = ω^1, ω_2(1) = ω^ω
        assert_eq!(omega_tower(2, &ord("1")), ord("w^(w)"));
        assert_eq!(omega_tower(1, &ord("0")), ord("1"));
        assert_eq!(one_plus(&ord("0")), ord("1"));
        assert_eq!(one_plus(&ord("w")), ord("w"));
        assert_eq!(one_plus(&OrdinalTerm::nat(3)), OrdinalTerm::nat(4));
    }

    #[test]
    fn printer_round_trips_small_terms() {
        for s in ["0", "1", "w", "w + 1", "w^(w) + w + 1 + 1", "e(e(0) + 1) + w^(e(0) + 1)"] {
            assert_eq!(ord(s).to_string(), s);
        }
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = "w + ".parse::<OrdinalTerm>().unwrap_err();
        assert_eq!(err.pos, 4);
        assert!("e(0".parse::<OrdinalTerm>().is_err());
        assert!("2".parse::<OrdinalTerm>().is_err());
    }

    #[test]
    fn natural_numbers() {
        assert_eq!(OrdinalTerm::nat(3).as_nat(), Some(3));
        assert_eq!(OrdinalTerm::omega().as_nat(), None);
        assert!(OrdinalTerm::nat(5).is_normal());
    }
}
