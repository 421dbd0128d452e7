//! Role-annotated proof trees and the proof checker.
//!
//! Every node carries its conclusion sequent plus an annotation resolving all
//! context partitions, so checking is deterministic: the checker reconstructs
//! the required premise multisets from conclusion + annotation and compares
//! them against the actual premises. It never searches for an annotation.

use std::fmt;

use thiserror::Error;

use crate::formula::{Formula, F};
use crate::sequent::{replace_at, without, Sequent};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ruleset {
    /// The cut-free base calculus.
    S,
    /// Base calculus plus explicit left contraction and explicit cut.
    Sc,
}

impl fmt::Display for Ruleset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ruleset::S => write!(f, "S"),
            Ruleset::Sc => write!(f, "Sc"),
        }
    }
}

/// Rule tag plus designated occurrences. All indices are 0-based positions
/// into the node's own conclusion, except for `CtrL` (indices into the
/// premise's antecedent, naming the two contracted occurrences) and `Cut`
/// (left premise succedent / right premise antecedent), whose designated
/// formulas do not occur in the conclusion.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleApp {
    Init { ante: usize, succ: usize },
    BotInit { ante: usize },
    FixL { prin: usize },
    FixR { prin: usize },
    ImpL { prin: usize, lsplit: Vec<usize>, rsplit: Vec<usize> },
    ImpR { prin: usize },
    BoxRule { prin: usize, sigma: Vec<usize>, pi: Vec<usize> },
    CtrL { first: usize, second: usize },
    Cut { left: usize, right: usize },
}

impl RuleApp {
    pub fn tag(&self) -> &'static str {
        match self {
            RuleApp::Init { .. } => "Init",
            RuleApp::BotInit { .. } => "BotInit",
            RuleApp::FixL { .. } => "FixL",
            RuleApp::FixR { .. } => "FixR",
            RuleApp::ImpL { .. } => "ImpL",
            RuleApp::ImpR { .. } => "ImpR",
            RuleApp::BoxRule { .. } => "BoxRule",
            RuleApp::CtrL { .. } => "CtrL",
            RuleApp::Cut { .. } => "Cut",
        }
    }

    fn in_ruleset(&self, ruleset: Ruleset) -> bool {
        match self {
            RuleApp::CtrL { .. } | RuleApp::Cut { .. } => ruleset == Ruleset::Sc,
            _ => true,
        }
    }
}

/// Role of a conclusion occurrence in its node's final inference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OccRole {
    Principal,
    Axiomatic,
    Weakening,
    Side,
    ActiveSigma,
    ActivePi,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Proof {
    pub conclusion: Sequent,
    pub rule: RuleApp,
    pub premises: Vec<Proof>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid {rule} node at {}: {msg}", render_path(path))]
pub struct CheckError {
    /// Premise indices from the root down to the offending node.
    pub path: Vec<usize>,
    pub rule: String,
    pub msg: String,
}

fn render_path(path: &[usize]) -> String {
    let mut s = String::from("root");
    for p in path {
        s.push('.');
        s.push_str(&p.to_string());
    }
    s
}

impl Proof {
    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Proof::size).sum::<usize>()
    }

    /// Checks the whole tree under `ruleset`. Premises are visited before
    /// their node, so the reported error is the first failure in post-order.
    pub fn check(&self, ruleset: Ruleset) -> Result<(), CheckError> {
        if let Some(f) = self.conclusion.first_open_formula() {
            return Err(CheckError {
                path: vec![],
                rule: self.rule.tag().into(),
                msg: format!("conclusion formula `{f}` is not closed"),
            });
        }
        let mut path = Vec::new();
        self.check_rec(ruleset, &mut path)
    }

    fn check_rec(&self, ruleset: Ruleset, path: &mut Vec<usize>) -> Result<(), CheckError> {
        for (k, p) in self.premises.iter().enumerate() {
            path.push(k);
            p.check_rec(ruleset, path)?;
            path.pop();
        }
        self.check_node(ruleset).map_err(|msg| CheckError {
            path: path.clone(),
            rule: self.rule.tag().into(),
            msg,
        })
    }

    /// Local validity of this node against its (already present) premises.
    pub fn check_node(&self, ruleset: Ruleset) -> Result<(), String> {
        if !self.rule.in_ruleset(ruleset) {
            return Err(format!("rule {} not in ruleset {}", self.rule.tag(), ruleset));
        }
        let ante = &self.conclusion.ante;
        let succ = &self.conclusion.succ;
        let arity = |n: usize| -> Result<(), String> {
            if self.premises.len() == n {
                Ok(())
            } else {
                Err(format!(
                    "expected {n} premise(s), found {}",
                    self.premises.len()
                ))
            }
        };
        match &self.rule {
            RuleApp::Init { ante: i, succ: j } => {
                arity(0)?;
                let a = get(ante, *i, "antecedent")?;
                let b = get(succ, *j, "succedent")?;
                if a != b {
                    return Err(format!("axiomatic pair differs: `{a}` vs `{b}`"));
                }
                Ok(())
            }
            RuleApp::BotInit { ante: i } => {
                arity(0)?;
                let a = get(ante, *i, "antecedent")?;
                if **a != Formula::Bot {
                    return Err(format!("designated formula `{a}` is not bot"));
                }
                Ok(())
            }
            RuleApp::FixL { prin } => {
                arity(1)?;
                let fp = get(ante, *prin, "antecedent")?;
                let unfolded = Formula::unfold(fp)
                    .map_err(|_| format!("principal `{fp}` is not an fp formula"))?;
                let required =
                    Sequent::new(replace_at(ante, *prin, unfolded), succ.clone());
                match_premise(&self.premises[0], &required, 0)
            }
            RuleApp::FixR { prin } => {
                arity(1)?;
                let fp = get(succ, *prin, "succedent")?;
                let unfolded = Formula::unfold(fp)
                    .map_err(|_| format!("principal `{fp}` is not an fp formula"))?;
                let required =
                    Sequent::new(ante.clone(), replace_at(succ, *prin, unfolded));
                match_premise(&self.premises[0], &required, 0)
            }
            RuleApp::ImpR { prin } => {
                arity(1)?;
                let (a, b) = imp_parts(get(succ, *prin, "succedent")?)?;
                let mut premise_ante = ante.clone();
                premise_ante.push(a);
                let required = Sequent::new(premise_ante, replace_at(succ, *prin, b));
                match_premise(&self.premises[0], &required, 0)
            }
            RuleApp::ImpL { prin, lsplit, rsplit } => {
                arity(2)?;
                let (a, b) = imp_parts(get(ante, *prin, "antecedent")?)?;
                check_index_set(lsplit, ante.len(), Some(*prin), "lsplit")?;
                check_index_set(rsplit, succ.len(), None, "rsplit")?;
                let mut p0_ante = pick(ante, lsplit);
                p0_ante.push(b);
                let p0_req = Sequent::new(p0_ante, pick(succ, rsplit));
                let mut p1_succ = vec![a];
                p1_succ.extend(pick_complement(succ, rsplit, None));
                let p1_req =
                    Sequent::new(pick_complement(ante, lsplit, Some(*prin)), p1_succ);
                match_premise(&self.premises[0], &p0_req, 0)?;
                match_premise(&self.premises[1], &p1_req, 1)
            }
            RuleApp::BoxRule { prin, sigma, pi } => {
                arity(1)?;
                let boxed = get(succ, *prin, "succedent")?;
                let body = box_body(boxed)?;
                check_index_set(sigma, ante.len(), None, "sigma")?;
                check_index_set(pi, ante.len(), None, "pi")?;
                if let Some(k) = sigma.iter().find(|k| pi.contains(k)) {
                    return Err(format!("index {k} classified both sigma and pi"));
                }
                let mut premise_ante = Vec::new();
                for &k in sigma {
                    let f = &ante[k];
                    premise_ante.push(box_body(f).map_err(|_| {
                        format!("sigma occurrence `{f}` is not boxed in the conclusion")
                    })?);
                }
                for &k in pi {
                    let f = &ante[k];
                    box_body(f).map_err(|_| {
                        format!("pi occurrence `{f}` is not boxed in the conclusion")
                    })?;
                    premise_ante.push(f.clone());
                }
                let required = Sequent::new(premise_ante, vec![body]);
                match_premise(&self.premises[0], &required, 0)
            }
            RuleApp::CtrL { first, second } => {
                arity(1)?;
                let p = &self.premises[0].conclusion;
                let a = get(&p.ante, *first, "premise antecedent")?;
                let b = get(&p.ante, *second, "premise antecedent")?;
                if first == second {
                    return Err("contracted pair designates a single occurrence".into());
                }
                if a != b {
                    return Err(format!("contracted occurrences differ: `{a}` vs `{b}`"));
                }
                let required = Sequent::new(without(&p.ante, *second), p.succ.clone());
                if !self.conclusion.multiset_eq(&required) {
                    return Err(format!(
                        "conclusion `{}` does not match contracted premise `{}`",
                        self.conclusion, required
                    ));
                }
                Ok(())
            }
            RuleApp::Cut { left, right } => {
                arity(2)?;
                let p0 = &self.premises[0].conclusion;
                let p1 = &self.premises[1].conclusion;
                let a = get(&p0.succ, *left, "left premise succedent")?;
                let b = get(&p1.ante, *right, "right premise antecedent")?;
                if a != b {
                    return Err(format!("cut formulas differ: `{a}` vs `{b}`"));
                }
                let mut req_ante = p0.ante.clone();
                req_ante.extend(without(&p1.ante, *right));
                let mut req_succ = p1.succ.clone();
                req_succ.extend(without(&p0.succ, *left));
                let required = Sequent::new(req_ante, req_succ);
                if !self.conclusion.multiset_eq(&required) {
                    return Err(format!(
                        "conclusion `{}` does not match cut of premises `{}`",
                        self.conclusion, required
                    ));
                }
                Ok(())
            }
        }
    }

    /// Role of antecedent occurrence `i` in this node's final inference.
    pub fn ante_role(&self, i: usize) -> OccRole {
        match &self.rule {
            RuleApp::Init { ante, .. } => {
                if *ante == i {
                    OccRole::Axiomatic
                } else {
                    OccRole::Weakening
                }
            }
            RuleApp::BotInit { ante } => {
                if *ante == i {
                    OccRole::Axiomatic
                } else {
                    OccRole::Weakening
                }
            }
            RuleApp::FixL { prin } => {
                if *prin == i {
                    OccRole::Principal
                } else {
                    OccRole::Side
                }
            }
            RuleApp::FixR { .. } | RuleApp::ImpR { .. } => OccRole::Side,
            RuleApp::ImpL { prin, .. } => {
                if *prin == i {
                    OccRole::Principal
                } else {
                    OccRole::Side
                }
            }
            RuleApp::BoxRule { sigma, pi, .. } => {
                if sigma.contains(&i) {
                    OccRole::ActiveSigma
                } else if pi.contains(&i) {
                    OccRole::ActivePi
                } else {
                    OccRole::Weakening
                }
            }
            RuleApp::CtrL { .. } | RuleApp::Cut { .. } => OccRole::Side,
        }
    }

    /// Role of succedent occurrence `j` in this node's final inference.
    pub fn succ_role(&self, j: usize) -> OccRole {
        match &self.rule {
            RuleApp::Init { succ, .. } => {
                if *succ == j {
                    OccRole::Axiomatic
                } else {
                    OccRole::Weakening
                }
            }
            RuleApp::BotInit { .. } => OccRole::Weakening,
            RuleApp::FixR { prin } | RuleApp::ImpR { prin } => {
                if *prin == j {
                    OccRole::Principal
                } else {
                    OccRole::Side
                }
            }
            RuleApp::FixL { .. } | RuleApp::ImpL { .. } => OccRole::Side,
            RuleApp::BoxRule { prin, .. } => {
                if *prin == j {
                    OccRole::Principal
                } else {
                    OccRole::Weakening
                }
            }
            RuleApp::CtrL { .. } | RuleApp::Cut { .. } => OccRole::Side,
        }
    }
}

fn get<'a>(side: &'a [F], idx: usize, name: &str) -> Result<&'a F, String> {
    side.get(idx)
        .ok_or_else(|| format!("{name} index {idx} out of range (len {})", side.len()))
}

fn imp_parts(f: &F) -> Result<(F, F), String> {
    match f.as_ref() {
        Formula::Imp(a, b) => Ok((a.clone(), b.clone())),
        _ => Err(format!("principal `{f}` is not an implication")),
    }
}

fn box_body(f: &F) -> Result<F, String> {
    match f.as_ref() {
        Formula::Box(a) => Ok(a.clone()),
        _ => Err(format!("`{f}` is not a boxed formula")),
    }
}

fn check_index_set(
    set: &[usize],
    len: usize,
    excluded: Option<usize>,
    name: &str,
) -> Result<(), String> {
    for w in set.windows(2) {
        if w[0] >= w[1] {
            return Err(format!("{name} must be strictly increasing"));
        }
    }
    for &k in set {
        if k >= len {
            return Err(format!("{name} index {k} out of range (len {len})"));
        }
        if excluded == Some(k) {
            return Err(format!("{name} contains the principal index {k}"));
        }
    }
    Ok(())
}

fn pick(side: &[F], idxs: &[usize]) -> Vec<F> {
    idxs.iter().map(|&k| side[k].clone()).collect()
}

fn pick_complement(side: &[F], idxs: &[usize], also_skip: Option<usize>) -> Vec<F> {
    side.iter()
        .enumerate()
        .filter(|(k, _)| !idxs.contains(k) && Some(*k) != also_skip)
        .map(|(_, f)| f.clone())
        .collect()
}

fn match_premise(premise: &Proof, required: &Sequent, which: usize) -> Result<(), String> {
    if premise.conclusion.multiset_eq(required) {
        Ok(())
    } else {
        Err(format!(
            "premise {which} is `{}` but the rule requires `{}`",
            premise.conclusion, required
        ))
    }
}

// Forward constructors. These compute the conclusion from the premises and
// panic on violated preconditions; they are the building blocks for the
// enumeration oracle and for mechanical proof assembly.
impl Proof {
    pub fn leaf_init(ante: Vec<F>, succ: Vec<F>, i: usize, j: usize) -> Proof {
        assert_eq!(ante[i], succ[j], "leaf_init: formulas differ");
        Proof {
            conclusion: Sequent::new(ante, succ),
            rule: RuleApp::Init { ante: i, succ: j },
            premises: vec![],
        }
    }

    pub fn leaf_bot(ante: Vec<F>, succ: Vec<F>, i: usize) -> Proof {
        assert_eq!(*ante[i], Formula::Bot, "leaf_bot: designated formula is not bot");
        Proof {
            conclusion: Sequent::new(ante, succ),
            rule: RuleApp::BotInit { ante: i },
            premises: vec![],
        }
    }

    /// Folds the unfolding at `premise.ante[pos]` back into `fp`.
    pub fn by_fix_l(premise: Proof, pos: usize, fp: F) -> Proof {
        let unfolded = Formula::unfold(&fp).expect("by_fix_l: not an fp formula");
        assert_eq!(premise.conclusion.ante[pos], unfolded, "by_fix_l: wrong unfolding");
        let conclusion = Sequent::new(
            replace_at(&premise.conclusion.ante, pos, fp),
            premise.conclusion.succ.clone(),
        );
        Proof {
            conclusion,
            rule: RuleApp::FixL { prin: pos },
            premises: vec![premise],
        }
    }

    pub fn by_fix_r(premise: Proof, pos: usize, fp: F) -> Proof {
        let unfolded = Formula::unfold(&fp).expect("by_fix_r: not an fp formula");
        assert_eq!(premise.conclusion.succ[pos], unfolded, "by_fix_r: wrong unfolding");
        let conclusion = Sequent::new(
            premise.conclusion.ante.clone(),
            replace_at(&premise.conclusion.succ, pos, fp),
        );
        Proof {
            conclusion,
            rule: RuleApp::FixR { prin: pos },
            premises: vec![premise],
        }
    }

    /// Introduces `A -> B` on the right from premise `Γ, A => B, Δ`;
    /// `a_pos` locates A in the premise antecedent, `b_pos` locates B in the
    /// premise succedent.
    pub fn by_imp_r(premise: Proof, a_pos: usize, b_pos: usize) -> Proof {
        let a = premise.conclusion.ante[a_pos].clone();
        let b = premise.conclusion.succ[b_pos].clone();
        let conclusion = Sequent::new(
            without(&premise.conclusion.ante, a_pos),
            replace_at(&premise.conclusion.succ, b_pos, Formula::imp(a, b)),
        );
        Proof {
            conclusion,
            rule: RuleApp::ImpR { prin: b_pos },
            premises: vec![premise],
        }
    }

    /// Introduces `A -> B` on the left from premises `Γ, B => Δ` and
    /// `Σ => A, Π`. The conclusion is laid out as `Γ, Σ, A->B => Π, Δ`.
    pub fn by_imp_l(p0: Proof, b_pos: usize, p1: Proof, a_pos: usize) -> Proof {
        let b = p0.conclusion.ante[b_pos].clone();
        let a = p1.conclusion.succ[a_pos].clone();
        let gamma = without(&p0.conclusion.ante, b_pos);
        let delta = p0.conclusion.succ.clone();
        let sigma = p1.conclusion.ante.clone();
        let pi = without(&p1.conclusion.succ, a_pos);
        let mut ante = gamma.clone();
        ante.extend(sigma);
        ante.push(Formula::imp(a, b));
        let mut succ = pi.clone();
        succ.extend(delta);
        let rule = RuleApp::ImpL {
            prin: ante.len() - 1,
            lsplit: (0..gamma.len()).collect(),
            rsplit: (pi.len()..succ.len()).collect(),
        };
        Proof {
            conclusion: Sequent::new(ante, succ),
            rule,
            premises: vec![p0, p1],
        }
    }

    /// Applies the box rule to a single-succedent premise `Σ, □Π => A`.
    /// `classes[k]` says whether premise antecedent occurrence `k` is carried
    /// as sigma (boxed in the conclusion, unboxed in the premise) or pi
    /// (boxed in both). Weakening contexts are appended.
    pub fn by_box(
        premise: Proof,
        classes: &[BoxClass],
        weak_l: Vec<F>,
        weak_r: Vec<F>,
    ) -> Proof {
        assert_eq!(
            premise.conclusion.succ.len(),
            1,
            "by_box: premise succedent must be a single formula"
        );
        assert_eq!(classes.len(), premise.conclusion.ante.len());
        let a = premise.conclusion.succ[0].clone();
        let mut ante = Vec::new();
        let mut sigma = Vec::new();
        let mut pi = Vec::new();
        for (k, f) in premise.conclusion.ante.iter().enumerate() {
            match classes[k] {
                BoxClass::Sigma => {
                    sigma.push(ante.len());
                    ante.push(Formula::boxed(f.clone()));
                }
                BoxClass::Pi => {
                    assert!(
                        matches!(f.as_ref(), Formula::Box(_)),
                        "by_box: pi occurrence `{f}` is not boxed"
                    );
                    pi.push(ante.len());
                    ante.push(f.clone());
                }
            }
        }
        ante.extend(weak_l);
        let mut succ = vec![Formula::boxed(a)];
        succ.extend(weak_r);
        Proof {
            conclusion: Sequent::new(ante, succ),
            rule: RuleApp::BoxRule { prin: 0, sigma, pi },
            premises: vec![premise],
        }
    }

    /// Contracts the two equal premise occurrences `first`/`second` into one.
    pub fn by_ctr_l(premise: Proof, first: usize, second: usize) -> Proof {
        assert_ne!(first, second);
        assert_eq!(
            premise.conclusion.ante[first], premise.conclusion.ante[second],
            "by_ctr_l: occurrences differ"
        );
        let conclusion = Sequent::new(
            without(&premise.conclusion.ante, second),
            premise.conclusion.succ.clone(),
        );
        Proof {
            conclusion,
            rule: RuleApp::CtrL { first, second },
            premises: vec![premise],
        }
    }

    /// Joins `Γ => Δ, A` and `A, Σ => Π` by an explicit cut on the
    /// designated occurrences; conclusion `Γ, Σ => Π, Δ`.
    pub fn by_cut(p0: Proof, left: usize, p1: Proof, right: usize) -> Proof {
        assert_eq!(
            p0.conclusion.succ[left], p1.conclusion.ante[right],
            "by_cut: cut formulas differ"
        );
        let mut ante = p0.conclusion.ante.clone();
        ante.extend(without(&p1.conclusion.ante, right));
        let mut succ = p1.conclusion.succ.clone();
        succ.extend(without(&p0.conclusion.succ, left));
        Proof {
            conclusion: Sequent::new(ante, succ),
            rule: RuleApp::Cut { left, right },
            premises: vec![p0, p1],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoxClass {
    Sigma,
    Pi,
}
