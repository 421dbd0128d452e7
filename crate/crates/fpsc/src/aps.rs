//! Finite abstract provability structures: a carrier with a preorder, top
//! and bottom elements, and provability/refutability endofunctions, together
//! with exhaustive condition checking and certified derivation traces.
//!
//! Text format (sections separated by `;`):
//! ```text
//! carrier a b c ; top c ; bot a ;
//! leq a b, b c, a c, a a, b b, c c ;
//! box a->b b->c c->c ; boxtimes a->c b->b c->b
//! ```
//! The reflexive closure is implicit; the transitive closure must be listed
//! in full and is validated at load time, never repaired.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::parse::{lex, Cursor, ParseError, Tok};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApsError {
    #[error("unknown carrier element `{0}`")]
    UnknownElement(String),
    #[error("`{0}` is not a fixed point of the refutability operator")]
    NotFixedPoint(String),
    #[error("condition {0} fails on the needed instance: {1}")]
    ConditionMissing(&'static str, String),
    #[error("malformed structure: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApsInstance {
    pub carrier: Vec<String>,
    pub top: usize,
    pub bot: usize,
    leq: Vec<Vec<bool>>,
    box_op: Vec<usize>,
    boxtimes_op: Vec<usize>,
}

impl ApsInstance {
    pub fn new(
        carrier: Vec<String>,
        top: &str,
        bot: &str,
        leq_pairs: &[(String, String)],
        box_table: &[(String, String)],
        boxtimes_table: &[(String, String)],
    ) -> Result<Self, ApsError> {
        let n = carrier.len();
        if n == 0 {
            return Err(ApsError::Malformed("empty carrier".into()));
        }
        let mut seen = BTreeMap::new();
        for (k, t) in carrier.iter().enumerate() {
            if seen.insert(t.clone(), k).is_some() {
                return Err(ApsError::Malformed(format!("duplicate carrier element `{t}`")));
            }
        }
        let idx = |t: &str| -> Result<usize, ApsError> {
            seen.get(t).copied().ok_or_else(|| ApsError::UnknownElement(t.to_string()))
        };
        let top = idx(top)?;
        let bot = idx(bot)?;
        let mut leq = vec![vec![false; n]; n];
        for k in 0..n {
            leq[k][k] = true; // reflexive closure is implicit
        }
        for (a, b) in leq_pairs {
            leq[idx(a)?][idx(b)?] = true;
        }
        let table = |entries: &[(String, String)], name: &str| -> Result<Vec<usize>, ApsError> {
            let mut t = vec![usize::MAX; n];
            for (a, b) in entries {
                let a = idx(a)?;
                if t[a] != usize::MAX {
                    return Err(ApsError::Malformed(format!(
                        "{name} maps `{}` twice",
                        carrier[a]
                    )));
                }
                t[a] = idx(b)?;
            }
            if let Some(k) = t.iter().position(|&v| v == usize::MAX) {
                return Err(ApsError::Malformed(format!(
                    "{name} is not total: `{}` unmapped",
                    carrier[k]
                )));
            }
            Ok(t)
        };
        let box_op = table(box_table, "box")?;
        let boxtimes_op = table(boxtimes_table, "boxtimes")?;
        Ok(ApsInstance { carrier, top, bot, leq, box_op, boxtimes_op })
    }

    pub fn size(&self) -> usize {
        self.carrier.len()
    }

    pub fn index_of(&self, token: &str) -> Result<usize, ApsError> {
        self.carrier
            .iter()
            .position(|t| t == token)
            .ok_or_else(|| ApsError::UnknownElement(token.to_string()))
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn boxed(&self, x: usize) -> usize {
        self.box_op[x]
    }

    pub fn boxtimes(&self, x: usize) -> usize {
        self.boxtimes_op[x]
    }

    pub fn provable(&self, x: usize) -> bool {
        self.leq(self.top, x)
    }

    pub fn refutable(&self, x: usize) -> bool {
        self.leq(x, self.bot)
    }

    pub fn consistent(&self) -> bool {
        !self.leq(self.top, self.bot)
    }

    pub fn complete(&self) -> bool {
        (0..self.size()).all(|x| self.provable(x) || self.refutable(x))
    }

    pub fn equivalent(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) && self.leq(y, x)
    }

    /// All sentences equivalent to their own refutability assertion.
    pub fn goedelian_fixed_points(&self) -> Vec<usize> {
        (0..self.size())
            .filter(|&p| self.equivalent(p, self.boxtimes(p)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionId {
    Reflexivity,
    Transitivity,
    C1,
    C2,
    C3,
    C4,
    C5,
    C3Weak,
    C5Weak,
}

impl ConditionId {
    pub fn name(&self) -> &'static str {
        match self {
            ConditionId::Reflexivity => "reflexivity",
            ConditionId::Transitivity => "transitivity",
            ConditionId::C1 => "C1",
            ConditionId::C2 => "C2",
            ConditionId::C3 => "C3",
            ConditionId::C4 => "C4",
            ConditionId::C5 => "C5",
            ConditionId::C3Weak => "C3'",
            ConditionId::C5Weak => "C5'",
        }
    }
}

pub const ALL_CONDITIONS: [ConditionId; 9] = [
    ConditionId::Reflexivity,
    ConditionId::Transitivity,
    ConditionId::C1,
    ConditionId::C2,
    ConditionId::C3,
    ConditionId::C4,
    ConditionId::C5,
    ConditionId::C3Weak,
    ConditionId::C5Weak,
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionCheck {
    pub id: ConditionId,
    /// A failure carries the witness tuple, rendered with carrier tokens.
    pub witness: Option<Vec<String>>,
}

impl ConditionCheck {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionsReport {
    pub checks: Vec<ConditionCheck>,
    /// The optional identity `box bot = boxtimes top`, reported but never
    /// enforced.
    pub box_bot_equals_boxtimes_top: bool,
}

impl ConditionsReport {
    pub fn passes(&self, id: ConditionId) -> bool {
        self.checks.iter().any(|c| c.id == id && c.passed())
    }

    pub fn all_core_pass(&self) -> bool {
        [ConditionId::Reflexivity, ConditionId::Transitivity, ConditionId::C1,
         ConditionId::C2, ConditionId::C3, ConditionId::C4]
        .iter()
        .all(|&id| self.passes(id))
    }
}

impl fmt::Display for ConditionsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.witness {
                None => writeln!(f, "{} holds", c.id.name())?,
                Some(w) => writeln!(f, "{} fails [{}]", c.id.name(), w.join(", "))?,
            }
        }
        writeln!(
            f,
            "info box-bot-equals-boxtimes-top {}",
            self.box_bot_equals_boxtimes_top
        )
    }
}

/// Exhaustive check of every condition over the finite carrier; each failure
/// reports a witness tuple.
pub fn check_conditions(inst: &ApsInstance) -> ConditionsReport {
    let n = inst.size();
    let t = |k: usize| inst.carrier[k].clone();
    let mut checks = Vec::new();

    let mut refl = None;
    for x in 0..n {
        if !inst.leq(x, x) {
            refl = Some(vec![t(x)]);
            break;
        }
    }
    checks.push(ConditionCheck { id: ConditionId::Reflexivity, witness: refl });

    let mut trans = None;
    'trans: for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if inst.leq(x, y) && inst.leq(y, z) && !inst.leq(x, z) {
                    trans = Some(vec![t(x), t(y), t(z)]);
                    break 'trans;
                }
            }
        }
    }
    checks.push(ConditionCheck { id: ConditionId::Transitivity, witness: trans });

    let mut c1 = None;
    'c1: for x in 0..n {
        for y in 0..n {
            if inst.leq(x, y) {
                if !inst.leq(inst.boxed(x), inst.boxed(y)) {
                    c1 = Some(vec![t(x), t(y), "box-half".into()]);
                    break 'c1;
                }
                if !inst.leq(inst.boxtimes(y), inst.boxtimes(x)) {
                    c1 = Some(vec![t(x), t(y), "boxtimes-half".into()]);
                    break 'c1;
                }
            }
        }
    }
    checks.push(ConditionCheck { id: ConditionId::C1, witness: c1 });

    let c2 = if inst.leq(inst.top, inst.boxtimes(inst.bot)) {
        None
    } else {
        Some(vec![t(inst.top), t(inst.boxtimes(inst.bot))])
    };
    checks.push(ConditionCheck { id: ConditionId::C2, witness: c2 });

    let mut c3 = None;
    'c3: for x in 0..n {
        for y in 0..n {
            if inst.leq(x, inst.boxed(y))
                && inst.leq(x, inst.boxtimes(y))
                && !inst.leq(x, inst.boxtimes(inst.top))
            {
                c3 = Some(vec![t(x), t(y)]);
                break 'c3;
            }
        }
    }
    checks.push(ConditionCheck { id: ConditionId::C3, witness: c3 });

    let mut c4 = None;
    for x in 0..n {
        let bx = inst.boxtimes(x);
        if !inst.leq(bx, inst.boxed(bx)) {
            c4 = Some(vec![t(x)]);
            break;
        }
    }
    checks.push(ConditionCheck { id: ConditionId::C4, witness: c4 });

    let mut c5 = None;
    for x in 0..n {
        if !inst.leq(x, inst.top) {
            c5 = Some(vec![t(x)]);
            break;
        }
    }
    checks.push(ConditionCheck { id: ConditionId::C5, witness: c5 });

    let mut c3w = None;
    'c3w: for x in 0..n {
        let bx = inst.boxtimes(x);
        for y in 0..n {
            if inst.leq(bx, inst.boxed(y))
                && inst.leq(bx, inst.boxtimes(y))
                && !inst.leq(bx, inst.boxtimes(inst.top))
            {
                c3w = Some(vec![t(x), t(y)]);
                break 'c3w;
            }
        }
    }
    checks.push(ConditionCheck { id: ConditionId::C3Weak, witness: c3w });

    let mut c5w = None;
    for x in 0..n {
        if !inst.leq(inst.boxtimes(x), inst.top) {
            c5w = Some(vec![t(x)]);
            break;
        }
    }
    checks.push(ConditionCheck { id: ConditionId::C5Weak, witness: c5w });

    ConditionsReport {
        checks,
        box_bot_equals_boxtimes_top: inst
            .equivalent(inst.boxed(inst.bot), inst.boxtimes(inst.top)),
    }
}

/// One step of a certified derivation chain, justified by a named condition
/// instance, the fixed-point hypothesis, or transitivity of earlier steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub lhs: usize,
    pub rhs: usize,
    pub why: Justification,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    /// `x <= y` gives `box x <= box y`.
    C1Box { x: usize, y: usize },
    /// `x <= y` gives `boxtimes y <= boxtimes x`.
    C1Boxtimes { x: usize, y: usize },
    /// `x <= box y` and `x <= boxtimes y` give `x <= boxtimes top`.
    C3 { x: usize, y: usize },
    /// `boxtimes x <= box boxtimes x`.
    C4 { x: usize },
    /// Either direction of the fixed-point equivalence `p = boxtimes p`.
    Hypothesis,
    /// Chains two earlier steps.
    Transitivity(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationTrace {
    pub fixed_point: usize,
    pub steps: Vec<TraceStep>,
}

impl DerivationTrace {
    /// Validates every step against the instance's order oracle: the
    /// justification must be locally well-formed, its side conditions must
    /// hold in the oracle, and the step's own pair must be in the oracle.
    pub fn validate(&self, inst: &ApsInstance) -> Result<(), ApsError> {
        let p = self.fixed_point;
        if !inst.equivalent(p, inst.boxtimes(p)) {
            return Err(ApsError::NotFixedPoint(inst.carrier[p].clone()));
        }
        for (k, step) in self.steps.iter().enumerate() {
            let shape_ok = match step.why {
                Justification::C1Box { x, y } => {
                    inst.leq(x, y)
                        && step.lhs == inst.boxed(x)
                        && step.rhs == inst.boxed(y)
                }
                Justification::C1Boxtimes { x, y } => {
                    inst.leq(x, y)
                        && step.lhs == inst.boxtimes(y)
                        && step.rhs == inst.boxtimes(x)
                }
                Justification::C3 { x, y } => {
                    inst.leq(x, inst.boxed(y))
                        && inst.leq(x, inst.boxtimes(y))
                        && step.lhs == x
                        && step.rhs == inst.boxtimes(inst.top)
                }
                Justification::C4 { x } => {
                    step.lhs == inst.boxtimes(x) && step.rhs == inst.boxed(inst.boxtimes(x))
                }
                Justification::Hypothesis => {
                    (step.lhs == p && step.rhs == inst.boxtimes(p))
                        || (step.lhs == inst.boxtimes(p) && step.rhs == p)
                }
                Justification::Transitivity(i, j) => {
                    i < k
                        && j < k
                        && self.steps[i].rhs == self.steps[j].lhs
                        && step.lhs == self.steps[i].lhs
                        && step.rhs == self.steps[j].rhs
                }
            };
            if !shape_ok {
                return Err(ApsError::Malformed(format!(
                    "step {k} is not justified by {:?}",
                    step.why
                )));
            }
            if !inst.leq(step.lhs, step.rhs) {
                return Err(ApsError::Malformed(format!(
                    "step {k} pair ({}, {}) is not in the order oracle",
                    inst.carrier[step.lhs], inst.carrier[step.rhs]
                )));
            }
        }
        Ok(())
    }

    pub fn render(&self, inst: &ApsInstance) -> String {
        let mut out = String::new();
        for (k, s) in self.steps.iter().enumerate() {
            out.push_str(&format!(
                "{k}: {} <= {}  by {:?}\n",
                inst.carrier[s.lhs], inst.carrier[s.rhs], s.why
            ));
        }
        out
    }
}

/// Builds the derivation of `boxtimes boxtimes top <= boxtimes top` from a
/// Gödelian fixed point, mirroring the abstract argument step by step:
/// C4 at p, monotonicity twice, C3 at the fixed point, chained by the
/// hypothesis and one final transitivity.
pub fn g2_trace(inst: &ApsInstance, p: usize) -> Result<DerivationTrace, ApsError> {
    if !inst.equivalent(p, inst.boxtimes(p)) {
        return Err(ApsError::NotFixedPoint(inst.carrier[p].clone()));
    }
    let bt = |x: usize| inst.boxtimes(x);
    let bx = |x: usize| inst.boxed(x);
    let top = inst.top;
    let need = |cond: &'static str, lhs: usize, rhs: usize| -> Result<(), ApsError> {
        if inst.leq(lhs, rhs) {
            Ok(())
        } else {
            Err(ApsError::ConditionMissing(
                cond,
                format!("{} <= {}", inst.carrier[lhs], inst.carrier[rhs]),
            ))
        }
    };

    // 1. boxtimes p <= box boxtimes p             (C4 at p)
    need("C4", bt(p), bx(bt(p)))?;
    // 2. box boxtimes p <= box p                  (C1, box half, from boxtimes p <= p)
    need("C1", bx(bt(p)), bx(p))?;
    // 3. boxtimes p <= boxtimes top               (C3 at x = boxtimes p, y = p;
    //    the first C3 premise chains steps 1-2 through the oracle)
    need("C3", bt(p), bx(p))?;
    need("C3", bt(p), bt(top))?;
    // 4. boxtimes boxtimes top <= boxtimes p      (C1, boxtimes half, from p <= boxtimes top)
    need("C1", bt(bt(top)), bt(p))?;

    let steps = vec![
        TraceStep { lhs: bt(p), rhs: bx(bt(p)), why: Justification::C4 { x: p } },
        TraceStep { lhs: bx(bt(p)), rhs: bx(p), why: Justification::C1Box { x: bt(p), y: p } },
        TraceStep { lhs: bt(p), rhs: bt(top), why: Justification::C3 { x: bt(p), y: p } },
        TraceStep {
            lhs: bt(bt(top)),
            rhs: bt(p),
            why: Justification::C1Boxtimes { x: p, y: bt(top) },
        },
        TraceStep { lhs: bt(bt(top)), rhs: bt(top), why: Justification::Transitivity(3, 2) },
    ];
    let trace = DerivationTrace { fixed_point: p, steps };
    trace.validate(inst)?;
    Ok(trace)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum G2Consistency {
    Holds,
    /// Consistent instance whose inconsistency assertion is refutable; by
    /// the abstract theorem this indicates a condition failure, which is
    /// cross-reported.
    Violated { failing_conditions: Vec<&'static str> },
}

/// Verifies: if the instance is consistent then `boxtimes top` is
/// irrefutable.
pub fn g2_consistency_check(inst: &ApsInstance, p: usize) -> Result<G2Consistency, ApsError> {
    if !inst.equivalent(p, inst.boxtimes(p)) {
        return Err(ApsError::NotFixedPoint(inst.carrier[p].clone()));
    }
    if !inst.consistent() || !inst.refutable(inst.boxtimes(inst.top)) {
        return Ok(G2Consistency::Holds);
    }
    let report = check_conditions(inst);
    let failing_conditions = report
        .checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| c.id.name())
        .collect();
    Ok(G2Consistency::Violated { failing_conditions })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UniquenessOutcome {
    /// Every Gödelian fixed point is equivalent to `boxtimes top`, and when
    /// one exists, `boxtimes boxtimes top` is equivalent to `boxtimes top`.
    Holds { fixed_points: Vec<usize> },
    Violated { first: usize, second: usize },
}

/// Uniqueness of the fixed point under C1-C5: reports `ConditionMissing`
/// before any verdict when a required condition fails.
pub fn uniqueness_check(inst: &ApsInstance) -> Result<UniquenessOutcome, ApsError> {
    let report = check_conditions(inst);
    for c in &report.checks {
        let required = matches!(
            c.id,
            ConditionId::Reflexivity
                | ConditionId::Transitivity
                | ConditionId::C1
                | ConditionId::C2
                | ConditionId::C3
                | ConditionId::C4
                | ConditionId::C5
        );
        if required && !c.passed() {
            return Err(ApsError::ConditionMissing(
                c.id.name(),
                c.witness.clone().unwrap_or_default().join(", "),
            ));
        }
    }
    let fixed_points = inst.goedelian_fixed_points();
    let btop = inst.boxtimes(inst.top);
    for &p in &fixed_points {
        if !inst.equivalent(p, btop) {
            return Ok(UniquenessOutcome::Violated { first: p, second: btop });
        }
    }
    if !fixed_points.is_empty() && !inst.equivalent(inst.boxtimes(btop), btop) {
        return Ok(UniquenessOutcome::Violated { first: inst.boxtimes(btop), second: btop });
    }
    Ok(UniquenessOutcome::Holds { fixed_points })
}

/// The three-element chain fixture: bot <= p <= top with
/// box: bot->p, p->top, top->top and boxtimes: bot->top, p->p, top->p.
pub fn aps3() -> ApsInstance {
    parse_aps(
        "carrier bot p top ; top top ; bot bot ; \
         leq bot p, p top, bot top ; \
         box bot->p p->top top->top ; boxtimes bot->top p->p top->p",
    )
    .expect("fixture parses")
}

pub fn parse_aps(input: &str) -> Result<ApsInstance, ApsError> {
    parse_aps_inner(input).map_err(|e| ApsError::Malformed(e.to_string()))
}

fn parse_aps_inner(input: &str) -> Result<ApsInstance, ParseError> {
    let toks = lex(input)?;
    let mut cur = Cursor::new(&toks, input.len());
    let mut carrier: Option<Vec<String>> = None;
    let mut top = None;
    let mut bot = None;
    let mut leq_pairs: Vec<(String, String)> = Vec::new();
    let mut box_table: Vec<(String, String)> = Vec::new();
    let mut boxtimes_table: Vec<(String, String)> = Vec::new();
    let mut saw_leq = false;

    while !cur.at_end() {
        let section = cur.expect_ident()?;
        match section.as_str() {
            "carrier" => {
                let mut elems = Vec::new();
                while let Some(Tok::Ident(_)) = cur.peek() {
                    elems.push(cur.expect_ident()?);
                }
                carrier = Some(elems);
            }
            "top" => top = Some(cur.expect_ident()?),
            "bot" => bot = Some(cur.expect_ident()?),
            "leq" => {
                saw_leq = true;
                if !matches!(cur.peek(), Some(Tok::Semi) | None) {
                    loop {
                        let a = cur.expect_ident()?;
                        let b = cur.expect_ident()?;
                        leq_pairs.push((a, b));
                        if !cur.eat(&Tok::Comma) {
                            break;
                        }
                    }
                }
            }
            "box" | "boxtimes" => {
                let table = if section == "box" { &mut box_table } else { &mut boxtimes_table };
                while let Some(Tok::Ident(_)) = cur.peek() {
                    let a = cur.expect_ident()?;
                    cur.expect(&Tok::Arrow)?;
                    let b = cur.expect_ident()?;
                    table.push((a, b));
                }
            }
            other => {
                return Err(cur.error(format!("unknown section `{other}`")));
            }
        }
        if !cur.at_end() {
            cur.expect(&Tok::Semi)?;
        }
    }

    let missing = |what: &str| ParseError { pos: input.len(), msg: format!("missing `{what}` section") };
    let carrier = carrier.ok_or_else(|| missing("carrier"))?;
    let top = top.ok_or_else(|| missing("top"))?;
    let bot = bot.ok_or_else(|| missing("bot"))?;
    if !saw_leq {
        return Err(missing("leq"));
    }
    let inst = ApsInstance::new(carrier, &top, &bot, &leq_pairs, &box_table, &boxtimes_table)
        .map_err(|e| ParseError { pos: 0, msg: e.to_string() })?;
    // the transitive closure must be given in full; detect, do not repair
    let report = check_conditions(&inst);
    if let Some(c) = report
        .checks
        .iter()
        .find(|c| c.id == ConditionId::Transitivity && !c.passed())
    {
        return Err(ParseError {
            pos: 0,
            msg: format!(
                "leq is not transitively closed: missing {} <= {} (via {})",
                c.witness.as_ref().unwrap()[0],
                c.witness.as_ref().unwrap()[2],
                c.witness.as_ref().unwrap()[1]
            ),
        });
    }
    Ok(inst)
}

pub fn format_aps(inst: &ApsInstance) -> String {
    let pairs: Vec<String> = (0..inst.size())
        .flat_map(|x| (0..inst.size()).map(move |y| (x, y)))
        .filter(|&(x, y)| inst.leq(x, y))
        .map(|(x, y)| format!("{} {}", inst.carrier[x], inst.carrier[y]))
        .collect();
    let table = |t: &dyn Fn(usize) -> usize| {
        (0..inst.size())
            .map(|x| format!("{}->{}", inst.carrier[x], inst.carrier[t(x)]))
            .collect::<Vec<_>>()
            .join(" ")
    };
    format!(
        "carrier {} ; top {} ; bot {} ; leq {} ; box {} ; boxtimes {}",
        inst.carrier.join(" "),
        inst.carrier[inst.top],
        inst.carrier[inst.bot],
        pairs.join(", "),
        table(&|x| inst.boxed(x)),
        table(&|x| inst.boxtimes(x)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn singleton() -> ApsInstance {
        parse_aps("carrier o ; top o ; bot o ; leq o o ; box o->o ; boxtimes o->o").unwrap()
    }

    #[test]
    fn singleton_passes_everything() {
        let inst = singleton();
        let report = check_conditions(&inst);
        assert!(report.checks.iter().all(ConditionCheck::passed));
        assert_eq!(inst.goedelian_fixed_points(), vec![0]);
        assert!(!inst.consistent());
        let trace = g2_trace(&inst, 0).unwrap();
        assert!(trace.validate(&inst).is_ok());
        assert_eq!(g2_consistency_check(&inst, 0).unwrap(), G2Consistency::Holds);
    }

    #[test]
    fn aps3_satisfies_all_conditions() {
        let inst = aps3();
        let report = check_conditions(&inst);
        for c in &report.checks {
            assert!(c.passed(), "{} failed: {:?}", c.id.name(), c.witness);
        }
        assert!(inst.consistent());
        assert!(!inst.complete());
    }

    #[test]
    fn aps3_fixed_point_is_p() {
        let inst = aps3();
        let p = inst.index_of("p").unwrap();
        assert_eq!(inst.goedelian_fixed_points(), vec![p]);
    }

    #[test]
    fn aps3_with_broken_boxtimes_fails_c2() {
        let broken = parse_aps(
            "carrier bot p top ; top top ; bot bot ; \
             leq bot p, p top, bot top ; \
             box bot->p p->top top->top ; boxtimes bot->bot p->p top->p",
        )
        .unwrap();
        let report = check_conditions(&broken);
        let c2 = report.checks.iter().find(|c| c.id == ConditionId::C2).unwrap();
        assert_eq!(c2.witness, Some(vec!["top".into(), "bot".into()]));
    }

    #[test]
    fn aps3_trace_is_five_steps_ending_at_target() {
        let inst = aps3();
        let p = inst.index_of("p").unwrap();
        let trace = g2_trace(&inst, p).unwrap();
        assert_eq!(trace.steps.len(), 5);
        let last = trace.steps.last().unwrap();
        let btop = inst.boxtimes(inst.top);
        assert_eq!((last.lhs, last.rhs), (inst.boxtimes(btop), btop));
    }

    #[test]
    fn trace_requires_fixed_point() {
        let inst = aps3();
        let top = inst.top;
        assert!(matches!(g2_trace(&inst, top), Err(ApsError::NotFixedPoint(_))));
    }

    #[test]
    fn broken_c4_reported_as_missing() {
        // redefine box so that C4 fails at p: box p = bot while boxtimes p = p
        let broken = parse_aps(
            "carrier bot p top ; top top ; bot bot ; \
             leq bot p, p top, bot top ; \
             box bot->p p->bot top->top ; boxtimes bot->top p->p top->p",
        )
        .unwrap();
        let p = broken.index_of("p").unwrap();
        match g2_trace(&broken, p) {
            Err(ApsError::ConditionMissing(name, _)) => assert_eq!(name, "C4"),
            other => panic!("expected ConditionMissing(C4), got {other:?}"),
        }
    }

    #[test]
    fn no_fixed_points_when_boxtimes_shifted() {
        let inst = parse_aps(
            "carrier bot p top ; top top ; bot bot ; \
             leq bot p, p top, bot top ; \
             box bot->p p->top top->top ; boxtimes bot->top p->top top->p",
        )
        .unwrap();
        assert!(inst.goedelian_fixed_points().is_empty());
    }

    #[test]
    fn singleton_uniqueness_holds() {
        let inst = singleton();
        match uniqueness_check(&inst).unwrap() {
            UniquenessOutcome::Holds { fixed_points } => assert_eq!(fixed_points, vec![0]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn consistency_violation_cross_reports_condition_failures() {
        // consistent two-chain where the inconsistency assertion is
        // refutable; the abstract theorem pins this on a condition failure
        let inst = parse_aps(
            "carrier a b ; top b ; bot a ; leq a b ; \
             box a->a b->b ; boxtimes a->a b->a",
        )
        .unwrap();
        assert!(inst.consistent());
        let a = inst.index_of("a").unwrap();
        assert!(inst.equivalent(a, inst.boxtimes(a)), "a is a fixed point");
        match g2_consistency_check(&inst, a).unwrap() {
            G2Consistency::Violated { failing_conditions } => {
                assert!(failing_conditions.contains(&"C2"), "{failing_conditions:?}");
            }
            other => panic!("expected a violation, got {other:?}"),
        }
    }

    #[test]
    fn uniqueness_on_aps3() {
        let inst = aps3();
        let p = inst.index_of("p").unwrap();
        match uniqueness_check(&inst).unwrap() {
            UniquenessOutcome::Holds { fixed_points } => assert_eq!(fixed_points, vec![p]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn uniqueness_requires_c5() {
        // two incomparable points: C1-C4 hold trivially, C5 fails at b
        let inst = parse_aps(
            "carrier a b ; top a ; bot a ; leq ; \
             box a->a b->a ; boxtimes a->a b->a",
        )
        .unwrap();
        match uniqueness_check(&inst) {
            Err(ApsError::ConditionMissing(name, _)) => assert_eq!(name, "C5"),
            other => panic!("expected ConditionMissing(C5), got {other:?}"),
        }
    }

    #[test]
    fn load_rejects_untransitive_leq() {
        let err = parse_aps(
            "carrier a b c ; top c ; bot a ; leq a b, b c ; \
             box a->a b->b c->c ; boxtimes a->a b->b c->c",
        )
        .unwrap_err();
        assert!(err.to_string().contains("not transitively closed"));
    }

    #[test]
    fn format_round_trip() {
        let inst = aps3();
        let text = format_aps(&inst);
        let back = parse_aps(&text).unwrap();
        assert_eq!(inst, back);
    }
}
