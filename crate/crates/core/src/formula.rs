//! Strictly positive reflection-calculus formulas and the derivability
//! decision procedure for sequents `A ⊢ B`.
//!
//! `derives` recurses on the right-hand side. To discharge `◇_n B` it picks a
//! conjunct `◇_j C` of the left-hand side with `j ≥ n` and continues inside
//! `C`, carrying a context made of
//!
//! * every left conjunct `◇_m D`, lowered to `◇_{min(m, j-1)} D`;
//! * every diamond `◇_k Z` occurring in `B` with `k < j` that the outer context
//!   already derives.
//!
//! Both kinds of entries are packed under `◇_j` by the packing axiom
//! `◇_j A ∧ ◇_k B ⊢ ◇_j (A ∧ ◇_k B)` (after lowering with `◇_m A ⊢ ◇_k A`).
//! The search may also keep the goal `◇_n B` and descend further, which is
//! `◇_j ◇_n A ⊢ ◇_n ◇_n A ⊢ ◇_n A`. Contexts range over a finite set, so a
//! query that reaches itself again is cut off; a refutation obtained below
//! such a cut is not cached.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;
use crate::lex::Cursor;

pub type Level = u32;

// Serialized as its printed text; see the serde impls below.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RcFormula {
    Top,
    /// At least two parts.
    Conj(Vec<RcFormula>),
    Dia(Level, Box<RcFormula>),
}

/// A derivability query `lhs ⊢ rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sequent {
    pub lhs: RcFormula,
    pub rhs: RcFormula,
}

impl Sequent {
    pub fn new(lhs: RcFormula, rhs: RcFormula) -> Self {
        Sequent { lhs, rhs }
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |- {}", self.lhs, self.rhs)
    }
}

impl RcFormula {
    pub fn dia(level: Level, body: RcFormula) -> Self {
        RcFormula::Dia(level, Box::new(body))
    }

    /// Binary conjunction, kept exactly as given (no flattening).
    pub fn and(a: RcFormula, b: RcFormula) -> Self {
        RcFormula::Conj(vec![a, b])
    }

    /// Rebuilds a formula from a conjunct list: `⊤` for none, the element
    /// itself for one.
    pub fn from_conjuncts(mut parts: Vec<RcFormula>) -> Self {
        match parts.len() {
            0 => RcFormula::Top,
            1 => parts.pop().unwrap(),
            _ => RcFormula::Conj(parts),
        }
    }

    /// Node count, with an n-ary conjunction counted as its n-1 binary nodes.
    pub fn size(&self) -> usize {
        match self {
            RcFormula::Top => 1,
            RcFormula::Dia(_, b) => 1 + b.size(),
            RcFormula::Conj(ps) => ps.iter().map(RcFormula::size).sum::<usize>() + ps.len() - 1,
        }
    }

    pub fn max_level(&self) -> Option<Level> {
        match self {
            RcFormula::Top => None,
            RcFormula::Dia(n, b) => Some(b.max_level().map_or(*n, |m| m.max(*n))),
            RcFormula::Conj(ps) => ps.iter().filter_map(RcFormula::max_level).max(),
        }
    }

    /// Flattens conjunctions everywhere, including under diamonds.
    pub fn normalized(&self) -> RcFormula {
        let parts = flatten(self)
            .into_iter()
            .map(|p| match p {
                RcFormula::Dia(n, b) => RcFormula::dia(n, b.normalized()),
                other => other,
            })
            .collect();
        RcFormula::from_conjuncts(parts)
    }

    /// Every subformula of the shape `◇_k Z`, outermost first.
    pub fn diamonds(&self) -> Vec<RcFormula> {
        let mut out = Vec::new();
        collect_diamonds(self, &mut out);
        out
    }
}

fn collect_diamonds(f: &RcFormula, out: &mut Vec<RcFormula>) {
    match f {
        RcFormula::Top => {}
        RcFormula::Conj(ps) => ps.iter().for_each(|p| collect_diamonds(p, out)),
        RcFormula::Dia(_, b) => {
            if !out.contains(f) {
                out.push(f.clone());
            }
            collect_diamonds(b, out);
        }
    }
}

/// The conjunct list of `f`: nested conjunctions dissolved, `⊤` dropped.
pub fn flatten(f: &RcFormula) -> Vec<RcFormula> {
    let mut out = Vec::new();
    flatten_into(f, &mut out);
    out
}

fn flatten_into(f: &RcFormula, out: &mut Vec<RcFormula>) {
    match f {
        RcFormula::Top => {}
        RcFormula::Conj(ps) => ps.iter().for_each(|p| flatten_into(p, out)),
        d @ RcFormula::Dia(..) => out.push(d.clone()),
    }
}

/// Sorted, duplicate-free conjunct list. Conjunction is idempotent and
/// commutative, so this is a sound cache key for a left-hand side.
pub fn canonical_context<I: IntoIterator<Item = RcFormula>>(parts: I) -> Vec<RcFormula> {
    let mut v: Vec<RcFormula> = parts
        .into_iter()
        .flat_map(|p| flatten(&p))
        .collect();
    v.sort();
    v.dedup();
    v
}

/// Every formula of exactly-counted size `≤ max_size` with levels
/// `≤ max_level`, conjunctions kept binary as built. Ordered by size.
pub fn enumerate_formulas(max_size: usize, max_level: Level) -> Vec<RcFormula> {
    let mut by_size: Vec<Vec<RcFormula>> = vec![Vec::new()];
    for size in 1..=max_size {
        let mut here = Vec::new();
        if size == 1 {
            here.push(RcFormula::Top);
        } else {
            for n in 0..=max_level {
                for body in &by_size[size - 1] {
                    here.push(RcFormula::dia(n, body.clone()));
                }
            }
            for left in 1..size - 1 {
                let right = size - 1 - left;
                for a in &by_size[left] {
                    for b in &by_size[right] {
                        here.push(RcFormula::and(a.clone(), b.clone()));
                    }
                }
            }
        }
        by_size.push(here);
    }
    by_size.into_iter().flatten().collect()
}

/// Changes whenever the results of [`Decider`] may change.
pub const DECIDER_VERSION: &str = "rc-derives/2";

/// Memoizing decision procedure. The memo is a cache of a pure function;
/// sharing one `Decider` across many queries only saves time.
#[derive(Default)]
pub struct Decider {
    memo: HashMap<(Vec<RcFormula>, RcFormula), bool>,
    active: HashSet<(Vec<RcFormula>, RcFormula)>,
    cut_off: bool,
}

impl Decider {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn derives(&mut self, lhs: &RcFormula, rhs: &RcFormula) -> bool {
        let ctx = canonical_context([lhs.clone()]);
        self.holds(&ctx, rhs)
    }

    pub fn equivalent(&mut self, a: &RcFormula, b: &RcFormula) -> bool {
        self.derives(a, b) && self.derives(b, a)
    }

    /// `a <_n b`, i.e. `b ⊢ ◇_n a`.
    pub fn less_n(&mut self, n: Level, a: &RcFormula, b: &RcFormula) -> bool {
        self.derives(b, &RcFormula::dia(n, a.clone()))
    }

    pub fn cache_len(&self) -> usize {
        self.memo.len()
    }

    /// Every settled `context ⊢ ◇_n B` query, as `(lhs, rhs, value)`.
    pub fn decided(&self) -> impl Iterator<Item = (RcFormula, &RcFormula, bool)> + '_ {
        self.memo
            .iter()
            .map(|((ctx, goal), &v)| (RcFormula::from_conjuncts(ctx.clone()), goal, v))
    }

    /// Seeds the memo with a known result. Only sound for values produced by
    /// a decider carrying the same [`DECIDER_VERSION`].
    pub fn remember(&mut self, lhs: &RcFormula, rhs: &RcFormula, value: bool) {
        if matches!(rhs, RcFormula::Dia(..)) {
            self.memo.insert((canonical_context([lhs.clone()]), rhs.clone()), value);
        }
    }

    fn holds(&mut self, ctx: &[RcFormula], goal: &RcFormula) -> bool {
        match goal {
            RcFormula::Top => true,
            RcFormula::Conj(ps) => ps.iter().all(|p| self.holds(ctx, p)),
            RcFormula::Dia(n, body) => {
                let key = (ctx.to_vec(), goal.clone());
                if let Some(&hit) = self.memo.get(&key) {
                    return hit;
                }
                if self.active.contains(&key) {
                    self.cut_off = true;
                    return false;
                }
                let outer_cut = std::mem::replace(&mut self.cut_off, false);
                self.active.insert(key.clone());
                let result = self.holds_dia(ctx, *n, body);
                self.active.remove(&key);
                if result || !self.cut_off {
                    self.memo.insert(key, result);
                }
                self.cut_off = outer_cut || (!result && self.cut_off);
                result
            }
        }
    }

    fn holds_dia(&mut self, ctx: &[RcFormula], n: Level, body: &RcFormula) -> bool {
        if ctx.contains(&RcFormula::dia(n, body.clone())) {
            return true;
        }
        for conjunct in ctx {
            let RcFormula::Dia(j, inner) = conjunct else {
                continue;
            };
            let j = *j;
            if j < n {
                continue;
            }
            let inner_ctx = self.descend(ctx, j, inner, body);
            if self.holds(&inner_ctx, body) {
                return true;
            }
            if self.holds(&inner_ctx, &RcFormula::dia(n, body.clone())) {
                return true;
            }
        }
        false
    }

    // Context seen inside the chosen conjunct `◇_j inner`.
    fn descend(
        &mut self,
        ctx: &[RcFormula],
        j: Level,
        inner: &RcFormula,
        body: &RcFormula,
    ) -> Vec<RcFormula> {
        let mut parts = flatten(inner);
        if j > 0 {
            for c in ctx {
                if let RcFormula::Dia(m, d) = c {
                    parts.push(RcFormula::Dia((*m).min(j - 1), d.clone()));
                }
            }
            for d in body.diamonds() {
                if matches!(d, RcFormula::Dia(k, _) if k < j) && self.holds(ctx, &d) {
                    parts.push(d);
                }
            }
        }
        canonical_context(parts)
    }
}

/// Decides `lhs ⊢ rhs`.
pub fn derives(lhs: &RcFormula, rhs: &RcFormula) -> bool {
    Decider::new().derives(lhs, rhs)
}

/// `a ∼ b`: derivable in both directions.
pub fn equivalent(a: &RcFormula, b: &RcFormula) -> bool {
    Decider::new().equivalent(a, b)
}

/// `a <_n b`, defined as `b ⊢ ◇_n a`.
pub fn less_n(n: Level, a: &RcFormula, b: &RcFormula) -> bool {
    Decider::new().less_n(n, a, b)
}

impl fmt::Display for RcFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RcFormula::Top => write!(f, "T"),
            RcFormula::Dia(n, b) => match **b {
                RcFormula::Conj(_) => write!(f, "<{n}>({b})"),
                _ => write!(f, "<{n}>{b}"),
            },
            RcFormula::Conj(ps) => {
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        write!(f, " & ")?;
                    }
                    // Conjunction is right-associative, so only a nested
                    // conjunction in the last slot could print without parens;
                    // parenthesize every nested one to keep the tree exact.
                    match p {
                        RcFormula::Conj(_) => write!(f, "({p})")?,
                        _ => write!(f, "{p}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

/// Parses a formula and flattens its conjunctions.
pub fn parse_formula(text: &str) -> Result<RcFormula, ParseError> {
    parse_formula_exact(text).map(|f| f.normalized())
}

/// Parses a formula keeping the conjunction tree exactly as written; a
/// parenthesized group becomes its own conjunction node.
pub fn parse_formula_exact(text: &str) -> Result<RcFormula, ParseError> {
    let mut cur = Cursor::new(text);
    let f = parse_conj(&mut cur)?;
    cur.expect_end()?;
    Ok(f)
}

fn parse_conj(cur: &mut Cursor<'_>) -> Result<RcFormula, ParseError> {
    let mut parts = vec![parse_unary(cur)?];
    while cur.eat("&") {
        parts.push(parse_unary(cur)?);
    }
    Ok(RcFormula::from_conjuncts(parts))
}

fn parse_unary(cur: &mut Cursor<'_>) -> Result<RcFormula, ParseError> {
    if cur.eat("T") {
        Ok(RcFormula::Top)
    } else if cur.eat("<") {
        let n = cur.nat()?;
        cur.expect(">")?;
        Ok(RcFormula::dia(n, parse_unary(cur)?))
    } else if cur.eat("(") {
        let inner = parse_conj(cur)?;
        cur.expect(")")?;
        Ok(inner)
    } else {
        Err(cur.error("expected `T`, `<n>` or `(`"))
    }
}

impl Serialize for RcFormula {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RcFormula {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_formula_exact(&text).map_err(serde::de::Error::custom)
    }
}

impl FromStr for RcFormula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}
