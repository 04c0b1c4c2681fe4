//! Worms: conjunction-free closed formulas `◇_{a1} … ◇_{ak} ⊤`, and their
//! ordinal assignment onto ε₀.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::ParseError;
use crate::formula::{parse_formula, Decider, Level, RcFormula};
use crate::lex::Cursor;
use crate::ordinal::{add, omega_pow, OrdinalTerm};

/// Letters listed outermost diamond first; the empty worm is `⊤`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Worm(pub Vec<Level>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WormError {
    #[error("letter underflow: cannot decrement a worm containing 0")]
    LetterUnderflow,
}

impl Worm {
    pub fn top() -> Self {
        Worm(Vec::new())
    }

    pub fn letters(&self) -> &[Level] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Reads a formula back as a worm if it has no conjunctions (after
    /// dropping `⊤` conjuncts).
    pub fn from_formula(f: &RcFormula) -> Option<Worm> {
        let mut letters = Vec::new();
        let mut cur = f.normalized();
        loop {
            match cur {
                RcFormula::Top => return Some(Worm(letters)),
                RcFormula::Dia(n, body) => {
                    letters.push(n);
                    cur = *body;
                }
                RcFormula::Conj(_) => return None,
            }
        }
    }
}

pub fn as_formula(w: &Worm) -> RcFormula {
    w.0.iter()
        .rev()
        .fold(RcFormula::Top, |acc, &n| RcFormula::dia(n, acc))
}

impl From<&Worm> for RcFormula {
    fn from(w: &Worm) -> Self {
        as_formula(w)
    }
}

pub fn decrement(w: &Worm) -> Result<Worm, WormError> {
    w.0.iter()
        .map(|&n| n.checked_sub(1).ok_or(WormError::LetterUnderflow))
        .collect::<Result<Vec<_>, _>>()
        .map(Worm)
}

/// The ordinal `o(w)`: `o(⊤) = 0`; a worm without `0` maps to
/// `ω^{o(w↓)}`; otherwise `w = B 0 C` split at the first `0` maps to
/// `o(C) + ω^{o(B↓)}`.
pub fn worm_ordinal(w: &Worm) -> OrdinalTerm {
    if w.is_empty() {
        return OrdinalTerm::zero();
    }
    match w.0.iter().position(|&n| n == 0) {
        None => {
            let lowered = decrement(w).expect("no zero letters");
            omega_pow(&worm_ordinal(&lowered))
        }
        Some(i) => {
            let head = Worm(w.0[..i].to_vec());
            let tail = Worm(w.0[i + 1..].to_vec());
            let lowered = decrement(&head).expect("head is 0-free");
            add(&worm_ordinal(&tail), &omega_pow(&worm_ordinal(&lowered)))
        }
    }
}

/// All worms with letters `≤ max_letter` and length `≤ max_len`, shortest
/// first and lexicographic within a length.
pub fn enumerate_worms(max_letter: Level, max_len: usize) -> Vec<Worm> {
    let mut out = vec![Worm::top()];
    let mut layer = vec![Worm::top()];
    for _ in 0..max_len {
        let next: Vec<Worm> = layer
            .iter()
            .flat_map(|w| {
                (0..=max_letter).map(move |n| {
                    let mut letters = w.0.clone();
                    letters.push(n);
                    Worm(letters)
                })
            })
            .collect();
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Shortest worm equivalent to `f`, searching lengths up to `max_len` over
/// the letters occurring in `f`. Every returned worm has been checked.
pub fn find_equivalent_worm(f: &RcFormula, max_len: usize) -> Option<Worm> {
    find_equivalent_worm_with(&mut Decider::new(), f, max_len)
}

pub fn find_equivalent_worm_with(
    decider: &mut Decider,
    f: &RcFormula,
    max_len: usize,
) -> Option<Worm> {
    let max_letter = f.max_level();
    let candidates = match max_letter {
        None => vec![Worm::top()],
        Some(top) => enumerate_worms(top, max_len),
    };
    candidates
        .into_iter()
        .find(|w| decider.equivalent(&as_formula(w), f))
}

impl fmt::Display for Worm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for Worm {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor::new(s);
        cur.expect("[")?;
        let mut letters = Vec::new();
        if !cur.eat("]") {
            loop {
                letters.push(cur.nat()?);
                if cur.eat("]") {
                    break;
                }
                cur.expect(",")?;
            }
        }
        cur.expect_end()?;
        Ok(Worm(letters))
    }
}

/// Accepts either a worm literal `[1,0]` or a formula.
pub fn parse_formula_or_worm(text: &str) -> Result<RcFormula, ParseError> {
    if text.trim_start().starts_with('[') {
        text.parse::<Worm>().map(|w| as_formula(&w))
    } else {
        parse_formula(text)
    }
}
