//! Backward proof search for the cut-free ruleset, with ancestor-based loop
//! pruning and a three-valued verdict.
//!
//! A branch is abandoned when its sequent multiset-equals an ancestor
//! sequent: a minimal proof never repeats a sequent along a branch, since
//! each subtree is itself a proof of its root. Refuted is reported only when
//! the whole pruned search space was exhausted; resource caps yield Unknown,
//! never Refuted.

use std::collections::HashMap;

use crate::formula::{Formula, F};
use crate::proof::{BoxClass, Proof};
use crate::sequent::{replace_at, without, Sequent};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_depth: usize,
    pub max_sequents: usize,
    pub max_formula_size: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_depth: 64,
            max_sequents: 200_000,
            max_formula_size: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchVerdict {
    Provable(Proof),
    Refuted,
    Unknown,
}

impl SearchVerdict {
    pub fn is_provable(&self) -> bool {
        matches!(self, SearchVerdict::Provable(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, SearchVerdict::Refuted)
    }

    pub fn witness(&self) -> Option<&Proof> {
        match self {
            SearchVerdict::Provable(p) => Some(p),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquivAnswer {
    Yes,
    No,
    Unknown,
}

/// Decides provability of `goal` in the cut-free calculus within `budget`.
pub fn search(goal: &Sequent, budget: &SearchBudget) -> SearchVerdict {
    let mut searcher = Searcher {
        budget: *budget,
        visited: 0,
        cache: HashMap::new(),
        ancestors: Vec::new(),
    };
    match searcher.solve(goal, 0) {
        Outcome::Proved(p) => SearchVerdict::Provable(p),
        Outcome::Failed { .. } => SearchVerdict::Refuted,
        Outcome::Exhausted => SearchVerdict::Unknown,
    }
}

/// `A =_S B`: both directions provable.
pub fn equiv(a: &F, b: &F, budget: &SearchBudget) -> EquivAnswer {
    let fwd = search(&Sequent::new(vec![a.clone()], vec![b.clone()]), budget);
    let bwd = search(&Sequent::new(vec![b.clone()], vec![a.clone()]), budget);
    match (&fwd, &bwd) {
        (SearchVerdict::Provable(_), SearchVerdict::Provable(_)) => EquivAnswer::Yes,
        (SearchVerdict::Refuted, _) | (_, SearchVerdict::Refuted) => EquivAnswer::No,
        _ => EquivAnswer::Unknown,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdmissibilityOutcome {
    /// All premises provable, conclusion refuted.
    Counterexample { premise_witnesses: Vec<Proof> },
    /// Anything else: the per-sequent verdict vector.
    Report {
        premise_verdicts: Vec<SearchVerdict>,
        conclusion_verdict: Box<SearchVerdict>,
    },
}

/// Probes one rule instance for admissibility: a counterexample is found
/// when every premise is provable while the conclusion is refuted.
pub fn rule_admissibility_probe(
    premises: &[Sequent],
    conclusion: &Sequent,
    budget: &SearchBudget,
) -> AdmissibilityOutcome {
    let premise_verdicts: Vec<SearchVerdict> =
        premises.iter().map(|s| search(s, budget)).collect();
    let conclusion_verdict = search(conclusion, budget);
    if premise_verdicts.iter().all(SearchVerdict::is_provable)
        && conclusion_verdict.is_refuted()
    {
        let premise_witnesses = premise_verdicts
            .into_iter()
            .map(|v| match v {
                SearchVerdict::Provable(p) => p,
                _ => unreachable!(),
            })
            .collect();
        AdmissibilityOutcome::Counterexample { premise_witnesses }
    } else {
        AdmissibilityOutcome::Report {
            premise_verdicts,
            conclusion_verdict: Box::new(conclusion_verdict),
        }
    }
}

enum Outcome {
    Proved(Proof),
    /// No proof exists in the pruned space. `external_prune_depth` is the
    /// shallowest ancestor depth matched by any prune event below; `None`
    /// means the refutation is complete regardless of ancestors and may be
    /// cached.
    Failed { external_prune_depth: Option<usize> },
    Exhausted,
}

enum CacheEntry {
    Proved(Proof),
    Refuted,
}

struct Searcher {
    budget: SearchBudget,
    visited: usize,
    cache: HashMap<Sequent, CacheEntry>,
    ancestors: Vec<Sequent>,
}

impl Searcher {
    fn solve(&mut self, goal: &Sequent, depth: usize) -> Outcome {
        self.visited += 1;
        if self.visited > self.budget.max_sequents {
            return Outcome::Exhausted;
        }
        // ancestor pruning by multiset identity
        let key = goal.canon();
        if let Some(d) = self.ancestors.iter().position(|s| *s == key) {
            return Outcome::Failed { external_prune_depth: Some(d) };
        }
        if let Some(entry) = self.cache.get(&key) {
            return match entry {
                CacheEntry::Proved(p) => Outcome::Proved(p.clone()),
                CacheEntry::Refuted => Outcome::Failed { external_prune_depth: None },
            };
        }
        if depth >= self.budget.max_depth {
            return Outcome::Exhausted;
        }

        self.ancestors.push(key.clone());
        let out = self.expand(goal, depth);
        self.ancestors.pop();

        match &out {
            Outcome::Proved(p) => {
                self.cache.insert(key, CacheEntry::Proved(p.clone()));
            }
            // A refutation is ancestor-independent when every prune below
            // matched an ancestor at this depth or deeper.
            Outcome::Failed { external_prune_depth } => {
                if external_prune_depth.is_none_or(|d| d >= depth) {
                    self.cache.insert(key, CacheEntry::Refuted);
                }
            }
            Outcome::Exhausted => {}
        }
        // prune depths below this node are external only if above this node
        match out {
            Outcome::Failed { external_prune_depth: Some(d) } if d >= depth => {
                Outcome::Failed { external_prune_depth: None }
            }
            other => other,
        }
    }

    fn expand(&mut self, goal: &Sequent, depth: usize) -> Outcome {
        let ante = &goal.ante;
        let succ = &goal.succ;
        let mut saw_unknown = false;
        let mut min_prune: Option<usize> = None;
        let note = |o: &Outcome, saw_unknown: &mut bool, min_prune: &mut Option<usize>| {
            match o {
                Outcome::Exhausted => *saw_unknown = true,
                Outcome::Failed { external_prune_depth: Some(d) } => {
                    *min_prune = Some(min_prune.map_or(*d, |m: usize| m.min(*d)));
                }
                _ => {}
            }
        };

        // Init
        for i in 0..ante.len() {
            for j in 0..succ.len() {
                if ante[i] == succ[j] {
                    return Outcome::Proved(Proof::leaf_init(
                        ante.clone(),
                        succ.clone(),
                        i,
                        j,
                    ));
                }
            }
        }
        // BotInit
        for i in 0..ante.len() {
            if *ante[i] == Formula::Bot {
                return Outcome::Proved(Proof::leaf_bot(ante.clone(), succ.clone(), i));
            }
        }
        // FixL
        for i in 0..ante.len() {
            if let Formula::Fp(..) = ante[i].as_ref() {
                let fp = ante[i].clone();
                let unfolded = Formula::unfold(&fp).expect("closed fp unfolds");
                if unfolded.size() > self.budget.max_formula_size {
                    saw_unknown = true;
                    continue;
                }
                let sub = Sequent::new(replace_at(ante, i, unfolded), succ.clone());
                let o = self.solve(&sub, depth + 1);
                if let Outcome::Proved(p) = o {
                    return Outcome::Proved(Proof::by_fix_l(p_relabel(p, &sub), i, fp));
                }
                note(&o, &mut saw_unknown, &mut min_prune);
            }
        }
        // FixR
        for j in 0..succ.len() {
            if let Formula::Fp(..) = succ[j].as_ref() {
                let fp = succ[j].clone();
                let unfolded = Formula::unfold(&fp).expect("closed fp unfolds");
                if unfolded.size() > self.budget.max_formula_size {
                    saw_unknown = true;
                    continue;
                }
                let sub = Sequent::new(ante.clone(), replace_at(succ, j, unfolded));
                let o = self.solve(&sub, depth + 1);
                if let Outcome::Proved(p) = o {
                    return Outcome::Proved(Proof::by_fix_r(p_relabel(p, &sub), j, fp));
                }
                note(&o, &mut saw_unknown, &mut min_prune);
            }
        }
        // ImpR
        for j in 0..succ.len() {
            if let Formula::Imp(a, b) = succ[j].as_ref() {
                let mut sub_ante = ante.clone();
                sub_ante.push(a.clone());
                let sub = Sequent::new(sub_ante, replace_at(succ, j, b.clone()));
                let o = self.solve(&sub, depth + 1);
                if let Outcome::Proved(p) = o {
                    let p = p_relabel(p, &sub);
                    return Outcome::Proved(Proof::by_imp_r(p, ante.len(), j));
                }
                note(&o, &mut saw_unknown, &mut min_prune);
            }
        }
        // ImpL: every split of the remaining contexts, bitmask ascending
        for i in 0..ante.len() {
            if let Formula::Imp(a, b) = ante[i].as_ref() {
                let rest: Vec<usize> = (0..ante.len()).filter(|&k| k != i).collect();
                for lmask in 0..(1u32 << rest.len()) {
                    for rmask in 0..(1u32 << succ.len()) {
                        let mut p0_ante: Vec<F> = rest
                            .iter()
                            .enumerate()
                            .filter(|(bit, _)| lmask & (1 << bit) != 0)
                            .map(|(_, &k)| ante[k].clone())
                            .collect();
                        let b_pos = p0_ante.len();
                        p0_ante.push(b.clone());
                        let p0_succ: Vec<F> = (0..succ.len())
                            .filter(|k| rmask & (1 << k) != 0)
                            .map(|k| succ[k].clone())
                            .collect();
                        let p1_ante: Vec<F> = rest
                            .iter()
                            .enumerate()
                            .filter(|(bit, _)| lmask & (1 << bit) == 0)
                            .map(|(_, &k)| ante[k].clone())
                            .collect();
                        let mut p1_succ = vec![a.clone()];
                        p1_succ.extend(
                            (0..succ.len())
                                .filter(|k| rmask & (1 << k) == 0)
                                .map(|k| succ[k].clone()),
                        );
                        let s0 = Sequent::new(p0_ante, p0_succ);
                        let s1 = Sequent::new(p1_ante, p1_succ);
                        let o0 = self.solve(&s0, depth + 1);
                        match o0 {
                            Outcome::Proved(w0) => {
                                let o1 = self.solve(&s1, depth + 1);
                                if let Outcome::Proved(w1) = o1 {
                                    let w0 = p_relabel(w0, &s0);
                                    let w1 = p_relabel(w1, &s1);
                                    return Outcome::Proved(Proof::by_imp_l(w0, b_pos, w1, 0));
                                }
                                note(&o1, &mut saw_unknown, &mut min_prune);
                            }
                            o0 => note(&o0, &mut saw_unknown, &mut min_prune),
                        }
                    }
                }
            }
        }
        // Box: each succedent box as principal, each classification of the
        // boxed antecedent occurrences into sigma/pi/weakened (base-3
        // counter ascending; digit order by occurrence index)
        for j in 0..succ.len() {
            if let Formula::Box(a) = succ[j].as_ref() {
                let boxed: Vec<usize> = (0..ante.len())
                    .filter(|&k| matches!(ante[k].as_ref(), Formula::Box(_)))
                    .collect();
                let combos = 3usize.pow(boxed.len() as u32);
                for combo in 0..combos {
                    let mut sub_ante = Vec::new();
                    let mut classes = Vec::new();
                    let mut c = combo;
                    for &k in &boxed {
                        match c % 3 {
                            0 => {} // weakened
                            1 => {
                                // sigma: appears unboxed in the premise
                                if let Formula::Box(body) = ante[k].as_ref() {
                                    sub_ante.push(body.clone());
                                    classes.push(BoxClass::Sigma);
                                }
                            }
                            _ => {
                                sub_ante.push(ante[k].clone());
                                classes.push(BoxClass::Pi);
                            }
                        }
                        c /= 3;
                    }
                    let sub = Sequent::new(sub_ante, vec![a.clone()]);
                    let o = self.solve(&sub, depth + 1);
                    if let Outcome::Proved(p) = o {
                        let p = p_relabel(p, &sub);
                        let weak_l: Vec<F> = {
                            // conclusion occurrences not carried into the premise
                            let mut carried = vec![false; ante.len()];
                            let mut ci = 0;
                            let mut c = combo;
                            for &k in &boxed {
                                if c % 3 != 0 {
                                    carried[k] = true;
                                    ci += 1;
                                }
                                c /= 3;
                            }
                            let _ = ci;
                            (0..ante.len())
                                .filter(|&k| !carried[k])
                                .map(|k| ante[k].clone())
                                .collect()
                        };
                        let weak_r: Vec<F> = without(succ, j);
                        return Outcome::Proved(Proof::by_box(p, &classes, weak_l, weak_r));
                    }
                    note(&o, &mut saw_unknown, &mut min_prune);
                }
            }
        }

        if saw_unknown {
            Outcome::Exhausted
        } else {
            Outcome::Failed { external_prune_depth: min_prune }
        }
    }
}

/// Reorders a found witness so its root literally equals the subgoal the
/// searcher posed. Cached witnesses may carry a permuted (canonical) layout;
/// the surrounding forward constructors expect positional agreement.
fn p_relabel(p: Proof, want: &Sequent) -> Proof {
    if p.conclusion == *want {
        return p;
    }
    debug_assert!(p.conclusion.multiset_eq(want));
    // Re-derive by weakening-free relabeling: wrap is unnecessary since all
    // constructors compare by multiset; only the root layout matters here.
    relabel_root(p, want.clone())
}

/// Rewrites the root conclusion to `want` (a permutation of the current
/// root), fixing up the annotation indices to follow their formulas.
fn relabel_root(mut p: Proof, want: Sequent) -> Proof {
    use crate::proof::RuleApp::*;
    let cur = p.conclusion.clone();
    // permutation: position in `want` -> position in `cur`
    let perm_side = |from: &[F], to: &[F]| -> Vec<usize> {
        let mut used = vec![false; from.len()];
        to.iter()
            .map(|f| {
                let k = from
                    .iter()
                    .enumerate()
                    .position(|(k, g)| !used[k] && g == f)
                    .expect("relabel: not a permutation");
                used[k] = true;
                k
            })
            .collect()
    };
    let ante_perm = perm_side(&cur.ante, &want.ante); // want idx -> cur idx
    let succ_perm = perm_side(&cur.succ, &want.succ);
    let find_a = |old: usize| ante_perm.iter().position(|&k| k == old).expect("ante idx");
    let find_s = |old: usize| succ_perm.iter().position(|&k| k == old).expect("succ idx");
    p.rule = match p.rule {
        Init { ante, succ } => Init { ante: find_a(ante), succ: find_s(succ) },
        BotInit { ante } => BotInit { ante: find_a(ante) },
        FixL { prin } => FixL { prin: find_a(prin) },
        FixR { prin } => FixR { prin: find_s(prin) },
        ImpR { prin } => ImpR { prin: find_s(prin) },
        ImpL { prin, lsplit, rsplit } => {
            let mut l: Vec<usize> = lsplit.iter().map(|&k| find_a(k)).collect();
            let mut r: Vec<usize> = rsplit.iter().map(|&k| find_s(k)).collect();
            l.sort_unstable();
            r.sort_unstable();
            ImpL { prin: find_a(prin), lsplit: l, rsplit: r }
        }
        BoxRule { prin, sigma, pi } => {
            let mut s: Vec<usize> = sigma.iter().map(|&k| find_a(k)).collect();
            let mut pp: Vec<usize> = pi.iter().map(|&k| find_a(k)).collect();
            s.sort_unstable();
            pp.sort_unstable();
            BoxRule { prin: find_s(prin), sigma: s, pi: pp }
        }
        other => other,
    };
    p.conclusion = want;
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_sequent;
    use crate::proof::Ruleset;

    fn dec(s: &str) -> SearchVerdict {
        search(&parse_sequent(s).unwrap(), &SearchBudget::default())
    }

    #[test]
    fn formalized_g2_sequent_refuted() {
        assert!(dec("box (box bot -> bot) => box bot").is_refuted());
    }

    #[test]
    fn henkin_sequent_refuted() {
        assert!(dec("=> fp $x. box $x").is_refuted());
    }

    #[test]
    fn distinct_henkin_fixed_points_inequivalent() {
        assert!(dec("fp $x. box $x => fp $y. box $y").is_refuted());
    }

    #[test]
    fn negated_box_bot_refuted() {
        assert!(dec("=> ~ box bot").is_refuted());
    }

    #[test]
    fn formalized_loeb_shape_refuted() {
        assert!(dec("box (box p -> p) => box p").is_refuted());
    }

    #[test]
    fn k_axiom_provable() {
        let v = dec("box (p -> q), box p => box q");
        let w = v.witness().expect("provable");
        assert!(w.check(Ruleset::S).is_ok());
    }

    #[test]
    fn four_axiom_provable() {
        let v = dec("box p => box box p");
        let w = v.witness().expect("provable");
        assert!(w.check(Ruleset::S).is_ok());
        assert_eq!(w.size(), 2);
    }

    #[test]
    fn goedel_unfolding_equivalence() {
        let p = Formula::goedel_fp("x");
        let u = Formula::unfold(&p).unwrap();
        assert_eq!(equiv(&p, &u, &SearchBudget::default()), EquivAnswer::Yes);
    }

    #[test]
    fn box_contraction_failure_pair() {
        let v1 = dec("box p, box p => box ((p * p))");
        assert!(v1.is_provable());
        assert!(v1.witness().unwrap().check(Ruleset::S).is_ok());
        assert!(dec("box p => box ((p * p))").is_refuted());
    }

    #[test]
    fn equiv_cases() {
        let b = SearchBudget::default();
        let bot = Formula::bot();
        let tb = Formula::imp(Formula::top(), Formula::bot());
        assert_eq!(equiv(&bot, &tb, &b), EquivAnswer::Yes);
        assert_eq!(
            equiv(&Formula::henkin_fp("x"), &Formula::henkin_fp("y"), &b),
            EquivAnswer::No
        );
        let p = Formula::atom("p");
        assert_eq!(equiv(&p, &p, &b), EquivAnswer::Yes);
    }

    #[test]
    fn loeb_and_henkin_rules_not_admissible() {
        let a = Formula::henkin_fp("x");
        let box_a_to_a = Sequent::new(vec![Formula::boxed(a.clone())], vec![a.clone()]);
        let a_to_box_a = Sequent::new(vec![a.clone()], vec![Formula::boxed(a.clone())]);
        let concl = Sequent::new(vec![], vec![a.clone()]);
        let b = SearchBudget::default();
        match rule_admissibility_probe(std::slice::from_ref(&box_a_to_a), &concl, &b) {
            AdmissibilityOutcome::Counterexample { premise_witnesses } => {
                assert_eq!(premise_witnesses.len(), 1);
                assert!(premise_witnesses[0].check(Ruleset::S).is_ok());
            }
            other => panic!("expected counterexample, got {other:?}"),
        }
        match rule_admissibility_probe(&[box_a_to_a, a_to_box_a], &concl, &b) {
            AdmissibilityOutcome::Counterexample { premise_witnesses } => {
                assert_eq!(premise_witnesses.len(), 2);
            }
            other => panic!("expected counterexample, got {other:?}"),
        }
    }

    #[test]
    fn weakening_rule_admissible_instance() {
        let b = SearchBudget::default();
        let premise = parse_sequent("p => p").unwrap();
        let concl = parse_sequent("q, p => p").unwrap();
        match rule_admissibility_probe(&[premise], &concl, &b) {
            AdmissibilityOutcome::Report { premise_verdicts, conclusion_verdict } => {
                assert!(premise_verdicts[0].is_provable());
                assert!(conclusion_verdict.is_provable());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn witnesses_are_deterministic() {
        let s = parse_sequent("box (p -> q), box p => box q").unwrap();
        let b = SearchBudget::default();
        let w1 = search(&s, &b);
        let w2 = search(&s, &b);
        assert_eq!(w1, w2);
    }

    #[test]
    fn unknown_on_tiny_budget() {
        let tight = SearchBudget { max_depth: 1, max_sequents: 2, max_formula_size: 200 };
        let v = search(&parse_sequent("box (box bot -> bot) => box bot").unwrap(), &tight);
        assert_eq!(v, SearchVerdict::Unknown);
    }

    #[test]
    fn unknown_when_unfolding_exceeds_formula_budget() {
        let tight = SearchBudget { max_formula_size: 1, ..SearchBudget::default() };
        let v = search(&parse_sequent("=> fp $x. box $x").unwrap(), &tight);
        assert_eq!(v, SearchVerdict::Unknown);
    }

    #[test]
    fn degenerate_sequents() {
        assert!(dec("=>").is_refuted());
        assert!(dec("bot =>").is_provable());
        assert!(dec("p =>").is_refuted());
    }
}
