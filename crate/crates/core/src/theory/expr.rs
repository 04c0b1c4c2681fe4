use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;
use crate::lex::Cursor;
use crate::ordinal::{normalize, parse_ord, OrdinalTerm};

use super::TheoryError;

/// Complexity classes for reflection principles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReflClass {
    /// Lightface first-order `Π_n`.
    Pi(u32),
    /// Boldface `𝚷⁰_n`, allowing free set variables.
    BoldPi0(u32),
    BoldPi0Inf,
    Pi11,
    /// `∀X F` with `F ∈ Π⁰₃`.
    Pi11Pi03,
    /// `Π¹_n`.
    Pi1(u32),
}

impl ReflClass {
    pub fn is_second_order(self) -> bool {
        matches!(self, ReflClass::Pi11 | ReflClass::Pi11Pi03 | ReflClass::Pi1(_))
    }

    /// Class inclusion `self ⊆ other`.
    pub fn is_subclass_of(self, other: ReflClass) -> bool {
        use ReflClass::*;
        if self == other {
            return true;
        }
        match (self, other) {
            (Pi(n), Pi(m)) | (Pi(n), BoldPi0(m)) | (BoldPi0(n), BoldPi0(m)) => n <= m,
            (Pi(n), Pi11Pi03) | (BoldPi0(n), Pi11Pi03) => n <= 3,
            (Pi(_) | BoldPi0(_), BoldPi0Inf | Pi11) => true,
            (BoldPi0Inf, Pi11) => true,
            (Pi11Pi03, Pi11) => true,
            (Pi(_) | BoldPi0(_) | BoldPi0Inf | Pi11Pi03 | Pi11, Pi1(m)) => m >= 1,
            (Pi1(n), Pi1(m)) => n <= m,
            _ => false,
        }
    }
}

impl fmt::Display for ReflClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReflClass::Pi(n) if *n < 10 => write!(f, "Pi{n}"),
            ReflClass::Pi(n) => write!(f, "Pi_{n}"),
            ReflClass::BoldPi0(n) => write!(f, "bPi0{n}"),
            ReflClass::BoldPi0Inf => write!(f, "bPi0inf"),
            ReflClass::Pi11 => write!(f, "Pi11"),
            ReflClass::Pi11Pi03 => write!(f, "Pi11Pi03"),
            ReflClass::Pi1(n) => write!(f, "Pi1_{n}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseName {
    EA,
    EAPlus,
    ISigma1,
    PA,
    RCA0,
    ACA0,
    ACA0Plus,
}

impl BaseName {
    pub const ALL: [BaseName; 7] = [
        BaseName::EA,
        BaseName::EAPlus,
        BaseName::ISigma1,
        BaseName::PA,
        BaseName::RCA0,
        BaseName::ACA0,
        BaseName::ACA0Plus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BaseName::EA => "EA",
            BaseName::EAPlus => "EA+",
            BaseName::ISigma1 => "ISigma1",
            BaseName::PA => "PA",
            BaseName::RCA0 => "RCA0",
            BaseName::ACA0 => "ACA0",
            BaseName::ACA0Plus => "ACA0+",
        }
    }

    pub fn is_second_order(self) -> bool {
        matches!(self, BaseName::RCA0 | BaseName::ACA0 | BaseName::ACA0Plus)
    }
}

impl fmt::Display for BaseName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TheoryExpr {
    /// A base theory; `free_set_var` marks the pseudo-`Π¹₁` pendant `T(X)`.
    Base { name: BaseName, free_set_var: bool },
    /// `R^ord_cls(body)`.
    Iter {
        cls: ReflClass,
        ord: OrdinalTerm,
        body: Box<TheoryExpr>,
    },
    /// `body + sent`.
    Plus { body: Box<TheoryExpr>, sent: SentenceExpr },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SentenceExpr {
    /// `RFN_cls(of)`.
    RfnSent { cls: ReflClass, of: Box<TheoryExpr> },
    ConjSent(Vec<SentenceExpr>),
}

impl TheoryExpr {
    pub fn base(name: BaseName) -> Self {
        TheoryExpr::Base {
            name,
            free_set_var: false,
        }
    }

    pub fn base_x(name: BaseName) -> Self {
        TheoryExpr::Base {
            name,
            free_set_var: true,
        }
    }

    pub fn iter(cls: ReflClass, ord: OrdinalTerm, body: TheoryExpr) -> Self {
        TheoryExpr::Iter {
            cls,
            ord,
            body: Box::new(body),
        }
    }

    pub fn plus(body: TheoryExpr, sent: SentenceExpr) -> Self {
        TheoryExpr::Plus {
            body: Box::new(body),
            sent,
        }
    }

    pub fn is_second_order(&self) -> bool {
        match self {
            TheoryExpr::Base { name, .. } => name.is_second_order(),
            TheoryExpr::Iter { body, .. } | TheoryExpr::Plus { body, .. } => body.is_second_order(),
        }
    }

    /// The innermost base theory.
    pub fn root_base(&self) -> (BaseName, bool) {
        match self {
            TheoryExpr::Base { name, free_set_var } => (*name, *free_set_var),
            TheoryExpr::Iter { body, .. } | TheoryExpr::Plus { body, .. } => body.root_base(),
        }
    }

    /// Node count, used to check that constructions stay linear.
    pub fn size(&self) -> usize {
        match self {
            TheoryExpr::Base { .. } => 1,
            TheoryExpr::Iter { body, .. } => 1 + body.size(),
            TheoryExpr::Plus { body, sent } => 1 + body.size() + sent.size(),
        }
    }

    /// Checks sort agreement between every class and the theory it reflects
    /// over or is added to.
    pub fn validate(&self) -> Result<(), TheoryError> {
        match self {
            TheoryExpr::Base { name, free_set_var } => {
                if *free_set_var && name.is_second_order() {
                    return Err(TheoryError::ClassMismatch(format!(
                        "free set variable on second-order base {name}"
                    )));
                }
                Ok(())
            }
            TheoryExpr::Iter { cls, body, .. } => {
                body.validate()?;
                check_sort(*cls, body)
            }
            TheoryExpr::Plus { body, sent } => {
                body.validate()?;
                sent.validate()?;
                if sent.is_second_order() != body.is_second_order() {
                    return Err(TheoryError::ClassMismatch(format!(
                        "sentence {sent} does not match the language of {body}"
                    )));
                }
                Ok(())
            }
        }
    }
}

fn check_sort(cls: ReflClass, body: &TheoryExpr) -> Result<(), TheoryError> {
    if cls.is_second_order() != body.is_second_order() {
        let (c, b) = if cls.is_second_order() {
            ("second-order", "first-order")
        } else {
            ("first-order", "second-order")
        };
        return Err(TheoryError::ClassMismatch(format!(
            "{c} class {cls} over {b} theory {body}"
        )));
    }
    Ok(())
}

impl SentenceExpr {
    pub fn rfn(cls: ReflClass, of: TheoryExpr) -> Self {
        SentenceExpr::RfnSent {
            cls,
            of: Box::new(of),
        }
    }

    pub fn is_second_order(&self) -> bool {
        match self {
            SentenceExpr::RfnSent { cls, .. } => cls.is_second_order(),
            SentenceExpr::ConjSent(parts) => parts.iter().any(SentenceExpr::is_second_order),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            SentenceExpr::RfnSent { of, .. } => 1 + of.size(),
            SentenceExpr::ConjSent(parts) => 1 + parts.iter().map(SentenceExpr::size).sum::<usize>(),
        }
    }

    fn validate(&self) -> Result<(), TheoryError> {
        match self {
            SentenceExpr::RfnSent { cls, of } => {
                of.validate()?;
                check_sort(*cls, of)
            }
            SentenceExpr::ConjSent(parts) => {
                if parts.is_empty() {
                    return Err(TheoryError::ClassMismatch("empty conjunction".into()));
                }
                parts.iter().try_for_each(SentenceExpr::validate)
            }
        }
    }
}

impl fmt::Display for TheoryExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TheoryExpr::Base { name, free_set_var } => {
                write!(f, "{name}")?;
                if *free_set_var {
                    write!(f, "(X)")?;
                }
                Ok(())
            }
            TheoryExpr::Iter { cls, ord, body } => write!(f, "R[{cls}, {ord}]({body})"),
            TheoryExpr::Plus { body, sent } => write!(f, "{body} + {sent}"),
        }
    }
}

impl fmt::Display for SentenceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SentenceExpr::RfnSent { cls, of } => write!(f, "RFN[{cls}]({of})"),
            SentenceExpr::ConjSent(parts) => {
                write!(f, "(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " & ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Parses and validates a theory expression.
pub fn parse_theory(text: &str) -> Result<TheoryExpr, TheoryError> {
    let mut cur = Cursor::new(text);
    let e = parse_thy(&mut cur)?;
    cur.expect_end()?;
    e.validate()?;
    Ok(e)
}

pub fn parse_class(text: &str) -> Result<ReflClass, ParseError> {
    let mut cur = Cursor::new(text);
    let c = parse_cls(&mut cur)?;
    cur.expect_end()?;
    Ok(c)
}

fn parse_thy(cur: &mut Cursor<'_>) -> Result<TheoryExpr, ParseError> {
    let mut e = parse_atom(cur)?;
    while sentence_follows(cur) {
        cur.expect("+")?;
        let sent = parse_sent(cur)?;
        e = TheoryExpr::plus(e, sent);
    }
    Ok(e)
}

// A `+` starts an added sentence only when followed by `RFN` or a
// parenthesized conjunction.
fn sentence_follows(cur: &Cursor<'_>) -> bool {
    let mut look = cur.clone();
    look.eat("+") && (look.peek("RFN") || (look.peek("(") && !look.peek("(X)")))
}

fn parse_atom(cur: &mut Cursor<'_>) -> Result<TheoryExpr, ParseError> {
    if cur.eat("R[") {
        let cls = parse_cls(cur)?;
        cur.expect(",")?;
        let ord = normalize(&parse_ord(cur)?);
        cur.expect("](")?;
        let body = parse_thy(cur)?;
        cur.expect(")")?;
        return Ok(TheoryExpr::iter(cls, ord, body));
    }
    let start = cur.pos();
    let name = if cur.eat("ISigma1") {
        BaseName::ISigma1
    } else if cur.eat("PA") {
        BaseName::PA
    } else if cur.eat("RCA0") {
        BaseName::RCA0
    } else if cur.eat("ACA0") {
        if !sentence_follows(cur) && cur.eat("+") {
            BaseName::ACA0Plus
        } else {
            BaseName::ACA0
        }
    } else if cur.eat("EA") {
        if !sentence_follows(cur) && cur.eat("+") {
            BaseName::EAPlus
        } else {
            BaseName::EA
        }
    } else {
        return Err(cur.error("expected a base theory or `R[`"));
    };
    let free_set_var = cur.eat("(X)");
    if free_set_var && name.is_second_order() {
        return Err(ParseError {
            pos: start,
            message: format!("`(X)` is only allowed on first-order bases, not {name}"),
        });
    }
    Ok(TheoryExpr::Base { name, free_set_var })
}

fn parse_sent(cur: &mut Cursor<'_>) -> Result<SentenceExpr, ParseError> {
    if cur.eat("RFN[") {
        let cls = parse_cls(cur)?;
        cur.expect("](")?;
        let of = parse_thy(cur)?;
        cur.expect(")")?;
        Ok(SentenceExpr::rfn(cls, of))
    } else if cur.eat("(") {
        let mut parts = vec![parse_sent(cur)?];
        while cur.eat("&") {
            parts.push(parse_sent(cur)?);
        }
        cur.expect(")")?;
        Ok(SentenceExpr::ConjSent(parts))
    } else {
        Err(cur.error("expected `RFN[` or `(`"))
    }
}

fn parse_cls(cur: &mut Cursor<'_>) -> Result<ReflClass, ParseError> {
    let cls = if cur.eat("Pi11Pi03") {
        ReflClass::Pi11Pi03
    } else if cur.eat("Pi11") {
        ReflClass::Pi11
    } else if cur.eat("Pi1_") {
        ReflClass::Pi1(cur.nat()?)
    } else if cur.eat("Pi") {
        cur.eat("_");
        ReflClass::Pi(cur.nat()?)
    } else if cur.eat("bPi0inf") {
        ReflClass::BoldPi0Inf
    } else if cur.eat("bPi0") {
        cur.eat("_");
        ReflClass::BoldPi0(cur.nat()?)
    } else {
        return Err(cur.error("expected a class: Pi n, bPi0 n, bPi0inf, Pi11, Pi11Pi03 or Pi1_n"));
    };
    match cls {
        ReflClass::Pi(0) | ReflClass::BoldPi0(0) | ReflClass::Pi1(0) => {
            Err(cur.error("class index must be at least 1"))
        }
        c => Ok(c),
    }
}

impl FromStr for TheoryExpr {
    type Err = TheoryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_theory(s)
    }
}

impl FromStr for ReflClass {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_class(s)
    }
}

macro_rules! string_serde {
    ($ty:ty, $parse:expr) => {
        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                serializer.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
                let text = String::deserialize(deserializer)?;
                $parse(&text).map_err(serde::de::Error::custom)
            }
        }
    };
}

string_serde!(TheoryExpr, parse_theory);
string_serde!(ReflClass, parse_class);
