// Hilbert-style certificates for RC⁰ sequents: bounded search and replay.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::formula::{canonical_context, flatten, Level, RcFormula, Sequent};

/// Justification of a proof node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RuleTag {
    /// `A ⊢ A`
    #[serde(rename = "AX1-ID")]
    Identity,
    /// `A ⊢ ⊤`
    #[serde(rename = "AX1-TOP")]
    TopIntro,
    /// `A1 ∧ … ∧ Ak ⊢ Ai`
    #[serde(rename = "AX2")]
    ConjElim,
    /// `◇n◇nA ⊢ ◇nA`
    #[serde(rename = "AX4")]
    Transitive,
    /// `◇nA ⊢ ◇mA` for `n > m`
    #[serde(rename = "AX5")]
    Downshift,
    /// `◇nA ∧ ◇mB ⊢ ◇n(A ∧ ◇mB)` for `n > m`
    #[serde(rename = "AX6")]
    Pack,
    #[serde(rename = "CUT")]
    Cut,
    #[serde(rename = "CONJ-INTRO")]
    ConjIntro,
    #[serde(rename = "MONO")]
    Mono,
}

impl RuleTag {
    pub fn name(self) -> &'static str {
        match self {
            RuleTag::Identity => "AX1-ID",
            RuleTag::TopIntro => "AX1-TOP",
            RuleTag::ConjElim => "AX2",
            RuleTag::Transitive => "AX4",
            RuleTag::Downshift => "AX5",
            RuleTag::Pack => "AX6",
            RuleTag::Cut => "CUT",
            RuleTag::ConjIntro => "CONJ-INTRO",
            RuleTag::Mono => "MONO",
        }
    }
}

/// A proof tree. Serializes as nested `{sequent, rule, children}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofObject {
    pub sequent: Sequent,
    pub rule: RuleTag,
    pub children: Vec<ProofObject>,
}

impl ProofObject {
    pub fn leaf(rule: RuleTag, lhs: RcFormula, rhs: RcFormula) -> Self {
        ProofObject {
            sequent: Sequent::new(lhs, rhs),
            rule,
            children: Vec::new(),
        }
    }

    pub fn lhs(&self) -> &RcFormula {
        &self.sequent.lhs
    }

    pub fn rhs(&self) -> &RcFormula {
        &self.sequent.rhs
    }

    /// `A ⊢ B` and `B ⊢ C` give `A ⊢ C`. Identity halves are dropped.
    pub fn cut(first: ProofObject, second: ProofObject) -> Self {
        if first.rule == RuleTag::Identity {
            return second;
        }
        if second.rule == RuleTag::Identity {
            return first;
        }
        ProofObject {
            sequent: Sequent::new(first.lhs().clone(), second.rhs().clone()),
            rule: RuleTag::Cut,
            children: vec![first, second],
        }
    }

    pub fn conj_intro(lhs: RcFormula, parts: Vec<ProofObject>) -> Self {
        let rhs = RcFormula::Conj(parts.iter().map(|p| p.rhs().clone()).collect());
        ProofObject {
            sequent: Sequent::new(lhs, rhs),
            rule: RuleTag::ConjIntro,
            children: parts,
        }
    }

    pub fn mono(level: Level, premise: ProofObject) -> Self {
        ProofObject {
            sequent: Sequent::new(
                RcFormula::dia(level, premise.lhs().clone()),
                RcFormula::dia(level, premise.rhs().clone()),
            ),
            rule: RuleTag::Mono,
            children: vec![premise],
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(ProofObject::node_count).sum::<usize>()
    }

    /// Every rule tag used, in pre-order.
    pub fn rules(&self) -> Vec<RuleTag> {
        let mut out = vec![self.rule];
        for c in &self.children {
            out.extend(c.rules());
        }
        out
    }
}

/// Checks every node of a proof against its rule. Nothing else is trusted.
pub fn replay_proof(p: &ProofObject) -> bool {
    node_ok(p) && p.children.iter().all(replay_proof)
}

fn node_ok(p: &ProofObject) -> bool {
    use RcFormula::*;
    let (lhs, rhs) = (p.lhs(), p.rhs());
    let kids = &p.children;
    match p.rule {
        RuleTag::Identity => kids.is_empty() && lhs == rhs,
        RuleTag::TopIntro => kids.is_empty() && *rhs == Top,
        RuleTag::ConjElim => {
            kids.is_empty() && matches!(lhs, Conj(parts) if parts.contains(rhs))
        }
        RuleTag::Transitive => {
            kids.is_empty()
                && matches!((lhs, rhs), (Dia(n, outer), Dia(k, a))
                    if n == k && matches!(&**outer, Dia(m, inner) if m == n && inner == a))
        }
        RuleTag::Downshift => {
            kids.is_empty() && matches!((lhs, rhs), (Dia(n, a), Dia(m, b)) if n > m && a == b)
        }
        RuleTag::Pack => kids.is_empty() && pack_ok(lhs, rhs),
        RuleTag::Cut => {
            kids.len() == 2
                && kids[0].lhs() == lhs
                && kids[0].rhs() == kids[1].lhs()
                && kids[1].rhs() == rhs
        }
        RuleTag::ConjIntro => match rhs {
            Conj(parts) => {
                parts.len() == kids.len()
                    && parts
                        .iter()
                        .zip(kids)
                        .all(|(part, k)| k.lhs() == lhs && k.rhs() == part)
            }
            _ => false,
        },
        RuleTag::Mono => match (lhs, rhs, kids.as_slice()) {
            (Dia(n, a), Dia(m, b), [k]) => n == m && k.lhs() == &**a && k.rhs() == &**b,
            _ => false,
        },
    }
}

// ◇n A ∧ ◇m B ⊢ ◇n (A ∧ ◇m B), n > m
fn pack_ok(lhs: &RcFormula, rhs: &RcFormula) -> bool {
    use RcFormula::*;
    let (Conj(l), Dia(k, body)) = (lhs, rhs) else {
        return false;
    };
    let [Dia(n, a), Dia(m, b)] = l.as_slice() else {
        return false;
    };
    let Conj(r) = &**body else {
        return false;
    };
    let [ra, Dia(rm, rb)] = r.as_slice() else {
        return false;
    };
    n > m && k == n && ra == &**a && rm == m && rb == b
}

/// Limits for proof search: nesting of diamond steps, and the size of any
/// formula placed in a search context or goal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofBudget {
    pub max_depth: usize,
    pub max_size: usize,
}

pub const DEFAULT_PROOF_DEPTH: usize = 10;

impl ProofBudget {
    pub fn for_sequent(a: &RcFormula, b: &RcFormula) -> Self {
        ProofBudget {
            max_depth: DEFAULT_PROOF_DEPTH,
            max_size: 2 * (a.size() + b.size()),
        }
    }

    pub fn with_size(max_size: usize) -> Self {
        ProofBudget {
            max_depth: DEFAULT_PROOF_DEPTH,
            max_size,
        }
    }
}

/// Bounded proof search for `a ⊢ b`. Returns a certificate, or `None` when no
/// proof exists within the budget.
pub fn prove_bounded(a: &RcFormula, b: &RcFormula, budget: &ProofBudget) -> Option<ProofObject> {
    ProofSearch::new(*budget).prove(a, b)
}

enum Memo {
    Proved(ProofObject),
    // Failed with this much depth left.
    Failed(usize),
}

/// Goal-directed search over sequents `⋀Γ ⊢ G` with `Γ` a canonical conjunct
/// list. Each successful step is expanded into primitive rule applications.
pub struct ProofSearch {
    budget: ProofBudget,
    memo: HashMap<(Vec<RcFormula>, RcFormula), Memo>,
}

impl ProofSearch {
    pub fn new(budget: ProofBudget) -> Self {
        ProofSearch {
            budget,
            memo: HashMap::new(),
        }
    }

    pub fn prove(&mut self, a: &RcFormula, b: &RcFormula) -> Option<ProofObject> {
        if *b == RcFormula::Top {
            return Some(ProofObject::leaf(RuleTag::TopIntro, a.clone(), RcFormula::Top));
        }
        let ctx = canonical_context([a.clone()]);
        let body = self.search(&ctx, b, self.budget.max_depth)?;
        Some(ProofObject::cut(to_context(a, &ctx), body))
    }

    fn search(&mut self, ctx: &[RcFormula], goal: &RcFormula, depth: usize) -> Option<ProofObject> {
        let lhs = context_formula(ctx);
        if goal.size() > self.budget.max_size {
            return None;
        }
        if *goal == RcFormula::Top {
            return Some(ProofObject::leaf(RuleTag::TopIntro, lhs, RcFormula::Top));
        }
        if ctx.contains(goal) {
            return Some(project(&lhs, goal));
        }
        match goal {
            RcFormula::Top => unreachable!(),
            RcFormula::Conj(parts) => {
                let proofs = parts
                    .iter()
                    .map(|p| self.search(ctx, p, depth))
                    .collect::<Option<Vec<_>>>()?;
                Some(ProofObject::conj_intro(lhs, proofs))
            }
            RcFormula::Dia(n, body) => {
                let key = (ctx.to_vec(), goal.clone());
                match self.memo.get(&key) {
                    Some(Memo::Proved(p)) => return Some(p.clone()),
                    Some(Memo::Failed(d)) if *d >= depth => return None,
                    _ => {}
                }
                let found = self.search_dia(ctx, &lhs, *n, body, depth);
                let entry = match &found {
                    Some(p) => Memo::Proved(p.clone()),
                    None => Memo::Failed(depth),
                };
                self.memo.insert(key, entry);
                found
            }
        }
    }

    fn search_dia(
        &mut self,
        ctx: &[RcFormula],
        lhs: &RcFormula,
        n: Level,
        body: &RcFormula,
        depth: usize,
    ) -> Option<ProofObject> {
        // Direct axiom instances first.
        for c in ctx {
            if let RcFormula::Dia(m, a) = c {
                if *m > n && **a == *body {
                    let down = ProofObject::leaf(RuleTag::Downshift, c.clone(), RcFormula::dia(n, body.clone()));
                    return Some(ProofObject::cut(project(lhs, c), down));
                }
            }
        }
        if depth == 0 {
            return None;
        }
        for c in ctx {
            let RcFormula::Dia(j, inner) = c else { continue };
            let j = *j;
            if j < n {
                continue;
            }
            let own = flatten(inner);
            let mut packs: Vec<(RcFormula, ProofObject)> = Vec::new();
            if j > 0 {
                for d in ctx {
                    let RcFormula::Dia(m, dbody) = d else { continue };
                    let lowered = RcFormula::Dia((*m).min(j - 1), dbody.clone());
                    if own.contains(&lowered) || packs.iter().any(|(f, _)| *f == lowered) {
                        continue;
                    }
                    let mut proof = project(lhs, d);
                    if *m > j - 1 {
                        proof = ProofObject::cut(
                            proof,
                            ProofObject::leaf(RuleTag::Downshift, d.clone(), lowered.clone()),
                        );
                    }
                    packs.push((lowered, proof));
                }
                for z in body.diamonds() {
                    let RcFormula::Dia(k, _) = &z else { continue };
                    if *k >= j || own.contains(&z) || packs.iter().any(|(f, _)| *f == z) {
                        continue;
                    }
                    if let Some(proof) = self.search(ctx, &z, depth) {
                        packs.push((z, proof));
                    }
                }
            }
            let inner_ctx = canonical_context(own.into_iter().chain(packs.iter().map(|(f, _)| f.clone())));
            if inner_ctx.iter().any(|f| f.size() > self.budget.max_size) {
                continue;
            }
            if let Some(sub) = self.search(&inner_ctx, body, depth - 1) {
                return Some(assemble(lhs, j, n, inner, &packs, &inner_ctx, sub, false));
            }
            {
                let again = RcFormula::dia(n, body.clone());
                if let Some(sub) = self.search(&inner_ctx, &again, depth - 1) {
                    return Some(assemble(lhs, j, n, inner, &packs, &inner_ctx, sub, true));
                }
            }
        }
        None
    }
}

// Builds `lhs ⊢ ◇n body` from `⋀inner_ctx ⊢ body` (or `⊢ ◇n body` when
// `again` is set) by packing each extra conjunct under the chosen `◇j inner`.
#[allow(clippy::too_many_arguments)]
fn assemble(
    lhs: &RcFormula,
    j: Level,
    n: Level,
    inner: &RcFormula,
    packs: &[(RcFormula, ProofObject)],
    inner_ctx: &[RcFormula],
    sub: ProofObject,
    again: bool,
) -> ProofObject {
    let chosen = RcFormula::dia(j, inner.clone());
    let mut carrier = inner.clone();
    let mut carrier_proof = project(lhs, &chosen);
    for (extra, extra_proof) in packs {
        let boxed = RcFormula::dia(j, carrier.clone());
        let both = ProofObject::conj_intro(lhs.clone(), vec![carrier_proof, extra_proof.clone()]);
        let packed_body = RcFormula::and(carrier.clone(), extra.clone());
        let pack = ProofObject::leaf(
            RuleTag::Pack,
            RcFormula::and(boxed, extra.clone()),
            RcFormula::dia(j, packed_body.clone()),
        );
        carrier_proof = ProofObject::cut(both, pack);
        carrier = packed_body;
    }
    let inside = ProofObject::cut(to_context(&carrier, inner_ctx), sub);
    let proof = ProofObject::cut(carrier_proof, ProofObject::mono(j, inside));
    let body = match proof.rhs() {
        RcFormula::Dia(_, b) => (**b).clone(),
        _ => unreachable!("mono yields a diamond"),
    };
    let proof = if j > n {
        let lowered = RcFormula::dia(n, body.clone());
        let down = ProofObject::leaf(RuleTag::Downshift, proof.rhs().clone(), lowered);
        ProofObject::cut(proof, down)
    } else {
        proof
    };
    if again {
        let RcFormula::Dia(_, goal_body) = &body else {
            unreachable!("goal kept its diamond")
        };
        let trans = ProofObject::leaf(RuleTag::Transitive, proof.rhs().clone(), body.clone());
        debug_assert_eq!(trans.rhs(), &RcFormula::dia(n, (**goal_body).clone()));
        ProofObject::cut(proof, trans)
    } else {
        proof
    }
}

/// The left-hand side formula for a conjunct list.
pub fn context_formula(ctx: &[RcFormula]) -> RcFormula {
    RcFormula::from_conjuncts(ctx.to_vec())
}

/// `x ⊢ g` for a conjunct `g` of `x`, by conjunction eliminations.
fn project(x: &RcFormula, g: &RcFormula) -> ProofObject {
    if x == g {
        return ProofObject::leaf(RuleTag::Identity, x.clone(), g.clone());
    }
    let RcFormula::Conj(parts) = x else {
        panic!("{g} is not a conjunct of {x}");
    };
    if parts.contains(g) {
        return ProofObject::leaf(RuleTag::ConjElim, x.clone(), g.clone());
    }
    let part = parts
        .iter()
        .find(|p| flatten(p).contains(g))
        .unwrap_or_else(|| panic!("{g} is not a conjunct of {x}"));
    ProofObject::cut(
        ProofObject::leaf(RuleTag::ConjElim, x.clone(), part.clone()),
        project(part, g),
    )
}

/// `x ⊢ ⋀ctx` when every member of `ctx` is a conjunct of `x`.
fn to_context(x: &RcFormula, ctx: &[RcFormula]) -> ProofObject {
    let target = context_formula(ctx);
    if *x == target {
        return ProofObject::leaf(RuleTag::Identity, x.clone(), target);
    }
    match ctx {
        [] => ProofObject::leaf(RuleTag::TopIntro, x.clone(), RcFormula::Top),
        [single] => project(x, single),
        _ => ProofObject::conj_intro(x.clone(), ctx.iter().map(|g| project(x, g)).collect()),
    }
}
