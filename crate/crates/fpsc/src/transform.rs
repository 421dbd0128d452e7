//! Admissible structural transformations: weakening, weakening-erasure, and
//! size-decreasing cut elimination.
//!
//! Cut elimination dispatches on the role of the two designated occurrences
//! in a fixed priority: weakening / axiomatic / side on the left proof, then
//! the same three on the right proof, then principal-against-principal (or
//! active) by the shape of the cut formula. When several cases could apply,
//! the earlier one fires. Every recursive call is checked against the strict
//! decrease of `size(left) + size(right)`.

use thiserror::Error;

use crate::formula::{Formula, F};
use crate::proof::{OccRole, Proof, RuleApp, Ruleset};
use crate::sequent::{without, Sequent};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("final inference is not a box rule")]
    NotBoxFinal,
    #[error("invalid cut problem: {0}")]
    InvalidCutProblem(String),
    #[error("recursion measure failed to decrease: {0}")]
    MeasureViolation(String),
    #[error("internal transform invariant broken: {0}")]
    Internal(String),
}

/// A cut instance: `left` proves `Γ => Δ, A`, `right` proves `A, Σ => Π`,
/// with the two designated occurrences of the cut formula A.
#[derive(Debug, Clone)]
pub struct CutProblem {
    pub left: Proof,
    pub right: Proof,
    pub left_occ: usize,
    pub right_occ: usize,
}

impl CutProblem {
    pub fn cut_formula(&self) -> Option<&F> {
        self.left.conclusion.succ.get(self.left_occ)
    }

    /// Root of the cut conclusion `Γ, Σ => Π, Δ`.
    pub fn target(&self) -> Sequent {
        let mut ante = self.left.conclusion.ante.clone();
        ante.extend(without(&self.right.conclusion.ante, self.right_occ));
        let mut succ = self.right.conclusion.succ.clone();
        succ.extend(without(&self.left.conclusion.succ, self.left_occ));
        Sequent::new(ante, succ)
    }
}

/// Adds `add_left` / `add_right` to the root sequent, pushing the new
/// formulas into the weakening slots of the final Init/BotInit/box node or
/// recursively through side-formula contexts. The result has exactly the
/// same size as the input.
pub fn weaken(p: &Proof, add_left: &[F], add_right: &[F]) -> Proof {
    if add_left.is_empty() && add_right.is_empty() {
        return p.clone();
    }
    let nl = add_left.len();
    let old = &p.conclusion;
    let mut ante = add_left.to_vec();
    ante.extend(old.ante.iter().cloned());
    let mut succ = old.succ.clone();
    succ.extend(add_right.iter().cloned());
    let conclusion = Sequent::new(ante, succ);
    match &p.rule {
        RuleApp::Init { ante: i, succ: j } => Proof {
            conclusion,
            rule: RuleApp::Init { ante: i + nl, succ: *j },
            premises: vec![],
        },
        RuleApp::BotInit { ante: i } => Proof {
            conclusion,
            rule: RuleApp::BotInit { ante: i + nl },
            premises: vec![],
        },
        RuleApp::BoxRule { prin, sigma, pi } => Proof {
            conclusion,
            rule: RuleApp::BoxRule {
                prin: *prin,
                sigma: sigma.iter().map(|k| k + nl).collect(),
                pi: pi.iter().map(|k| k + nl).collect(),
            },
            premises: p.premises.clone(),
        },
        RuleApp::FixL { prin } => Proof {
            conclusion,
            rule: RuleApp::FixL { prin: prin + nl },
            premises: vec![weaken(&p.premises[0], add_left, add_right)],
        },
        RuleApp::FixR { prin } => Proof {
            conclusion,
            rule: RuleApp::FixR { prin: *prin },
            premises: vec![weaken(&p.premises[0], add_left, add_right)],
        },
        RuleApp::ImpR { prin } => Proof {
            conclusion,
            rule: RuleApp::ImpR { prin: *prin },
            premises: vec![weaken(&p.premises[0], add_left, add_right)],
        },
        RuleApp::ImpL { prin, lsplit, rsplit } => {
            // route the additions through the Γ, B => Δ premise
            let mut new_lsplit: Vec<usize> = (0..nl).collect();
            new_lsplit.extend(lsplit.iter().map(|k| k + nl));
            let mut new_rsplit = rsplit.clone();
            new_rsplit.extend(old.succ.len()..old.succ.len() + add_right.len());
            Proof {
                conclusion,
                rule: RuleApp::ImpL {
                    prin: prin + nl,
                    lsplit: new_lsplit,
                    rsplit: new_rsplit,
                },
                premises: vec![
                    weaken(&p.premises[0], add_left, add_right),
                    p.premises[1].clone(),
                ],
            }
        }
        RuleApp::CtrL { first, second } => Proof {
            conclusion,
            rule: RuleApp::CtrL { first: first + nl, second: second + nl },
            premises: vec![weaken(&p.premises[0], add_left, add_right)],
        },
        RuleApp::Cut { left, right } => Proof {
            conclusion,
            rule: RuleApp::Cut { left: *left, right: *right },
            premises: vec![
                weaken(&p.premises[0], add_left, add_right),
                p.premises[1].clone(),
            ],
        },
    }
}

/// Erases all weakening occurrences from the conclusion of a box-final
/// proof, leaving `□Σ, □Π => □A`. Size is unchanged.
pub fn strip_weakening(p: &Proof) -> Result<Proof, TransformError> {
    let RuleApp::BoxRule { prin, sigma, pi } = &p.rule else {
        return Err(TransformError::NotBoxFinal);
    };
    let mut kept: Vec<usize> = sigma.iter().chain(pi.iter()).copied().collect();
    kept.sort_unstable();
    if kept.iter().any(|&k| k >= p.conclusion.ante.len()) || *prin >= p.conclusion.succ.len()
    {
        return Err(TransformError::Internal("annotation indices out of range".into()));
    }
    let ante: Vec<F> = kept.iter().map(|&k| p.conclusion.ante[k].clone()).collect();
    let remap = |set: &[usize]| -> Vec<usize> {
        let mut out: Vec<usize> = set
            .iter()
            .map(|k| kept.iter().position(|x| x == k).expect("kept index"))
            .collect();
        out.sort_unstable();
        out
    };
    Ok(Proof {
        conclusion: Sequent::new(ante, vec![p.conclusion.succ[*prin].clone()]),
        rule: RuleApp::BoxRule { prin: 0, sigma: remap(sigma), pi: remap(pi) },
        premises: p.premises.clone(),
    })
}

/// Cut elimination. Returns a proof of `Γ, Σ => Π, Δ` that checks under the
/// cut-free ruleset with size strictly below `size(left) + size(right)`.
pub fn eliminate_cut(prob: &CutProblem) -> Result<Proof, TransformError> {
    let CutProblem { left, right, left_occ, right_occ } = prob;
    let a = left
        .conclusion
        .succ
        .get(*left_occ)
        .ok_or_else(|| TransformError::InvalidCutProblem("left occurrence out of range".into()))?;
    let b = right
        .conclusion
        .ante
        .get(*right_occ)
        .ok_or_else(|| TransformError::InvalidCutProblem("right occurrence out of range".into()))?;
    if a != b {
        return Err(TransformError::InvalidCutProblem(format!(
            "cut formulas differ: `{a}` vs `{b}`"
        )));
    }
    left.check(Ruleset::S)
        .map_err(|e| TransformError::InvalidCutProblem(format!("left proof: {e}")))?;
    right
        .check(Ruleset::S)
        .map_err(|e| TransformError::InvalidCutProblem(format!("right proof: {e}")))?;

    let result = elim(left, right, *left_occ, *right_occ)?;

    let bound = left.size() + right.size();
    if result.size() >= bound {
        return Err(TransformError::MeasureViolation(format!(
            "result size {} is not below {bound}",
            result.size()
        )));
    }
    if !result.conclusion.multiset_eq(&prob.target()) {
        return Err(TransformError::Internal(format!(
            "result root `{}` differs from target `{}`",
            result.conclusion,
            prob.target()
        )));
    }
    result
        .check(Ruleset::S)
        .map_err(|e| TransformError::Internal(format!("result does not check: {e}")))?;
    Ok(result)
}

fn recurse(
    l: &Proof,
    r: &Proof,
    locc: usize,
    rocc: usize,
    parent: usize,
) -> Result<Proof, TransformError> {
    let m = l.size() + r.size();
    if m >= parent {
        return Err(TransformError::MeasureViolation(format!(
            "recursive call has measure {m}, parent {parent}"
        )));
    }
    elim(l, r, locc, rocc)
}

fn find_occ(side: &[F], f: &F) -> Result<usize, TransformError> {
    side.iter()
        .position(|g| g == f)
        .ok_or_else(|| TransformError::Internal(format!("occurrence of `{f}` not found")))
}

fn elim(l: &Proof, r: &Proof, locc: usize, rocc: usize) -> Result<Proof, TransformError> {
    let measure = l.size() + r.size();
    let cut_formula = l.conclusion.succ[locc].clone();
    let sigma_part = without(&r.conclusion.ante, rocc);
    let pi_part = r.conclusion.succ.clone();
    let delta_part = without(&l.conclusion.succ, locc);

    match l.succ_role(locc) {
        // (1) the cut occurrence is a weakening formula in the left final
        // inference: erase it and enlarge the weakening slots to cover Σ, Π.
        OccRole::Weakening => {
            let mut ante = l.conclusion.ante.clone();
            ante.extend(sigma_part);
            let mut succ = pi_part.clone();
            succ.extend(delta_part);
            let shift_succ = |j: usize| -> usize {
                debug_assert_ne!(j, locc);
                pi_part.len() + if j > locc { j - 1 } else { j }
            };
            let rule = match &l.rule {
                RuleApp::Init { ante: i, succ: j } => {
                    RuleApp::Init { ante: *i, succ: shift_succ(*j) }
                }
                RuleApp::BotInit { ante: i } => RuleApp::BotInit { ante: *i },
                RuleApp::BoxRule { prin, sigma, pi } => RuleApp::BoxRule {
                    prin: shift_succ(*prin),
                    sigma: sigma.clone(),
                    pi: pi.clone(),
                },
                other => {
                    return Err(TransformError::Internal(format!(
                        "weakening succedent occurrence under rule {}",
                        other.tag()
                    )))
                }
            };
            return Ok(Proof {
                conclusion: Sequent::new(ante, succ),
                rule,
                premises: l.premises.clone(),
            });
        }
        // (2) axiomatic in a left initial sequent: the antecedent carries A,
        // so the result is the right proof weakened by Γ₀ and Δ.
        OccRole::Axiomatic => {
            let RuleApp::Init { ante: ia, .. } = &l.rule else {
                return Err(TransformError::Internal(
                    "axiomatic succedent occurrence outside Init".into(),
                ));
            };
            let gamma0 = without(&l.conclusion.ante, *ia);
            return Ok(weaken(r, &gamma0, &delta_part));
        }
        // (3) side formula: recurse into the premise carrying the occurrence
        // and reapply the final rule.
        OccRole::Side => return left_side_case(l, r, locc, rocc, measure, &cut_formula),
        OccRole::Principal => {}
        OccRole::ActiveSigma | OccRole::ActivePi => {
            return Err(TransformError::Internal(
                "active role on a succedent occurrence".into(),
            ))
        }
    }

    match r.ante_role(rocc) {
        // (4) weakening on the right: mirror of case (1).
        OccRole::Weakening => {
            let gamma_len = l.conclusion.ante.len();
            let mut ante = l.conclusion.ante.clone();
            ante.extend(without(&r.conclusion.ante, rocc));
            let mut succ = r.conclusion.succ.clone();
            succ.extend(delta_part);
            let shift_ante = |i: usize| -> usize {
                debug_assert_ne!(i, rocc);
                gamma_len + if i > rocc { i - 1 } else { i }
            };
            let rule = match &r.rule {
                RuleApp::Init { ante: i, succ: j } => {
                    RuleApp::Init { ante: shift_ante(*i), succ: *j }
                }
                RuleApp::BotInit { ante: i } => RuleApp::BotInit { ante: shift_ante(*i) },
                RuleApp::BoxRule { prin, sigma, pi } => RuleApp::BoxRule {
                    prin: *prin,
                    sigma: sigma.iter().map(|k| shift_ante(*k)).collect(),
                    pi: pi.iter().map(|k| shift_ante(*k)).collect(),
                },
                other => {
                    return Err(TransformError::Internal(format!(
                        "weakening antecedent occurrence under rule {}",
                        other.tag()
                    )))
                }
            };
            return Ok(Proof {
                conclusion: Sequent::new(ante, succ),
                rule,
                premises: r.premises.clone(),
            });
        }
        // (5) axiomatic on the right: mirror of case (2). A bot-initial
        // right proof cannot reach here, because a bot cut formula is always
        // weakening, axiomatic or side on the left.
        OccRole::Axiomatic => {
            return match &r.rule {
                RuleApp::Init { succ: js, .. } => {
                    let pi0 = without(&r.conclusion.succ, *js);
                    Ok(weaken(l, &sigma_part, &pi0))
                }
                RuleApp::BotInit { .. } => Err(TransformError::Internal(
                    "bot cut formula survived the left-hand case analysis".into(),
                )),
                other => Err(TransformError::Internal(format!(
                    "axiomatic antecedent occurrence under rule {}",
                    other.tag()
                ))),
            };
        }
        // (6) side formula on the right: mirror of case (3).
        OccRole::Side => return right_side_case(l, r, locc, rocc, measure, &cut_formula),
        OccRole::Principal | OccRole::ActiveSigma | OccRole::ActivePi => {}
    }

    // (7) principal or active in both final inferences; dispatch on the
    // shape of the cut formula.
    match cut_formula.as_ref() {
        Formula::Fp(..) => {
            let (RuleApp::FixR { prin: lp }, RuleApp::FixL { prin: rp }) = (&l.rule, &r.rule)
            else {
                return Err(TransformError::Internal(
                    "fp cut formula is principal but final rules are not fix_R/fix_L".into(),
                ));
            };
            debug_assert_eq!((*lp, *rp), (locc, rocc));
            let unfolded = Formula::unfold(&cut_formula)
                .map_err(|e| TransformError::Internal(e.to_string()))?;
            let lsub = &l.premises[0];
            let rsub = &r.premises[0];
            let locc2 = find_occ(&lsub.conclusion.succ, &unfolded)?;
            let rocc2 = find_occ(&rsub.conclusion.ante, &unfolded)?;
            recurse(lsub, rsub, locc2, rocc2, measure)
        }
        Formula::Imp(a0, a1) => {
            let (RuleApp::ImpR { .. }, RuleApp::ImpL { .. }) = (&l.rule, &r.rule) else {
                return Err(TransformError::Internal(
                    "implication cut formula is principal but final rules are not ->R/->L".into(),
                ));
            };
            let l_sub = &l.premises[0]; // A₀, Γ => Δ, A₁
            let r_b = &r.premises[0]; // A₁, Σ₁ => Π₁
            let r_a = &r.premises[1]; // Σ₀ => Π₀, A₀
            let inner = recurse(
                r_a,
                l_sub,
                find_occ(&r_a.conclusion.succ, a0)?,
                find_occ(&l_sub.conclusion.ante, a0)?,
                measure,
            )?;
            recurse(
                &inner,
                r_b,
                find_occ(&inner.conclusion.succ, a1)?,
                find_occ(&r_b.conclusion.ante, a1)?,
                measure,
            )
        }
        Formula::Box(a0) => box_principal_case(l, r, locc, rocc, measure, &cut_formula, a0),
        other => Err(TransformError::Internal(format!(
            "cut formula `{other}` cannot be principal on both sides"
        ))),
    }
}

fn left_side_case(
    l: &Proof,
    r: &Proof,
    locc: usize,
    rocc: usize,
    measure: usize,
    a: &F,
) -> Result<Proof, TransformError> {
    match &l.rule {
        RuleApp::FixR { prin } => {
            let fp = l.conclusion.succ[*prin].clone();
            let unfolded =
                Formula::unfold(&fp).map_err(|e| TransformError::Internal(e.to_string()))?;
            let sub = &l.premises[0];
            let e = recurse(sub, r, find_occ(&sub.conclusion.succ, a)?, rocc, measure)?;
            let pos = find_occ(&e.conclusion.succ, &unfolded)?;
            Ok(Proof::by_fix_r(e, pos, fp))
        }
        RuleApp::FixL { prin } => {
            let fp = l.conclusion.ante[*prin].clone();
            let unfolded =
                Formula::unfold(&fp).map_err(|e| TransformError::Internal(e.to_string()))?;
            let sub = &l.premises[0];
            let e = recurse(sub, r, find_occ(&sub.conclusion.succ, a)?, rocc, measure)?;
            let pos = find_occ(&e.conclusion.ante, &unfolded)?;
            Ok(Proof::by_fix_l(e, pos, fp))
        }
        RuleApp::ImpR { prin } => {
            let (b0, c0) = match l.conclusion.succ[*prin].as_ref() {
                Formula::Imp(x, y) => (x.clone(), y.clone()),
                _ => return Err(TransformError::Internal("ImpR principal not Imp".into())),
            };
            let sub = &l.premises[0];
            let e = recurse(sub, r, find_occ(&sub.conclusion.succ, a)?, rocc, measure)?;
            let apos = find_occ(&e.conclusion.ante, &b0)?;
            let bpos = find_occ(&e.conclusion.succ, &c0)?;
            Ok(Proof::by_imp_r(e, apos, bpos))
        }
        RuleApp::ImpL { prin, rsplit, .. } => {
            let (a0, b0) = match l.conclusion.ante[*prin].as_ref() {
                Formula::Imp(x, y) => (x.clone(), y.clone()),
                _ => return Err(TransformError::Internal("ImpL principal not Imp".into())),
            };
            if rsplit.contains(&locc) {
                // occurrence lives in the Γ, B => Δ premise
                let sub = &l.premises[0];
                let e = recurse(sub, r, find_occ(&sub.conclusion.succ, a)?, rocc, measure)?;
                let bpos = find_occ(&e.conclusion.ante, &b0)?;
                let p1 = l.premises[1].clone();
                let apos = find_occ(&p1.conclusion.succ, &a0)?;
                Ok(Proof::by_imp_l(e, bpos, p1, apos))
            } else {
                // occurrence lives in the Σ => A, Π premise
                let sub = &l.premises[1];
                let e = recurse(sub, r, find_occ(&sub.conclusion.succ, a)?, rocc, measure)?;
                let apos = find_occ(&e.conclusion.succ, &a0)?;
                let p0 = l.premises[0].clone();
                let bpos = find_occ(&p0.conclusion.ante, &b0)?;
                Ok(Proof::by_imp_l(p0, bpos, e, apos))
            }
        }
        other => Err(TransformError::Internal(format!(
            "side succedent occurrence under rule {}",
            other.tag()
        ))),
    }
}

fn right_side_case(
    l: &Proof,
    r: &Proof,
    locc: usize,
    rocc: usize,
    measure: usize,
    a: &F,
) -> Result<Proof, TransformError> {
    match &r.rule {
        RuleApp::FixL { prin } => {
            let fp = r.conclusion.ante[*prin].clone();
            let unfolded =
                Formula::unfold(&fp).map_err(|e| TransformError::Internal(e.to_string()))?;
            let sub = &r.premises[0];
            let e = recurse(l, sub, locc, find_occ(&sub.conclusion.ante, a)?, measure)?;
            let pos = find_occ(&e.conclusion.ante, &unfolded)?;
            Ok(Proof::by_fix_l(e, pos, fp))
        }
        RuleApp::FixR { prin } => {
            let fp = r.conclusion.succ[*prin].clone();
            let unfolded =
                Formula::unfold(&fp).map_err(|e| TransformError::Internal(e.to_string()))?;
            let sub = &r.premises[0];
            let e = recurse(l, sub, locc, find_occ(&sub.conclusion.ante, a)?, measure)?;
            let pos = find_occ(&e.conclusion.succ, &unfolded)?;
            Ok(Proof::by_fix_r(e, pos, fp))
        }
        RuleApp::ImpR { prin } => {
            let (b0, c0) = match r.conclusion.succ[*prin].as_ref() {
                Formula::Imp(x, y) => (x.clone(), y.clone()),
                _ => return Err(TransformError::Internal("ImpR principal not Imp".into())),
            };
            let sub = &r.premises[0];
            let e = recurse(l, sub, locc, find_occ(&sub.conclusion.ante, a)?, measure)?;
            let apos = find_occ(&e.conclusion.ante, &b0)?;
            let bpos = find_occ(&e.conclusion.succ, &c0)?;
            Ok(Proof::by_imp_r(e, apos, bpos))
        }
        RuleApp::ImpL { prin, lsplit, .. } => {
            let (a0, b0) = match r.conclusion.ante[*prin].as_ref() {
                Formula::Imp(x, y) => (x.clone(), y.clone()),
                _ => return Err(TransformError::Internal("ImpL principal not Imp".into())),
            };
            if lsplit.contains(&rocc) {
                let sub = &r.premises[0];
                let e = recurse(l, sub, locc, find_occ(&sub.conclusion.ante, a)?, measure)?;
                let bpos = find_occ(&e.conclusion.ante, &b0)?;
                let p1 = r.premises[1].clone();
                let apos = find_occ(&p1.conclusion.succ, &a0)?;
                Ok(Proof::by_imp_l(e, bpos, p1, apos))
            } else {
                let sub = &r.premises[1];
                let e = recurse(l, sub, locc, find_occ(&sub.conclusion.ante, a)?, measure)?;
                let apos = find_occ(&e.conclusion.succ, &a0)?;
                let p0 = r.premises[0].clone();
                let bpos = find_occ(&p0.conclusion.ante, &b0)?;
                Ok(Proof::by_imp_l(p0, bpos, e, apos))
            }
        }
        other => Err(TransformError::Internal(format!(
            "side antecedent occurrence under rule {}",
            other.tag()
        ))),
    }
}

fn box_principal_case(
    l: &Proof,
    r: &Proof,
    locc: usize,
    rocc: usize,
    measure: usize,
    a: &F,
    a0: &F,
) -> Result<Proof, TransformError> {
    let RuleApp::BoxRule { prin: lprin, sigma: lsigma, pi: lpi } = &l.rule else {
        return Err(TransformError::Internal(
            "box cut formula is principal but left rule is not the box rule".into(),
        ));
    };
    debug_assert_eq!(*lprin, locc);
    let RuleApp::BoxRule { prin: rprin, sigma: rsigma, pi: rpi } = &r.rule else {
        return Err(TransformError::Internal(
            "box cut formula is active but right rule is not the box rule".into(),
        ));
    };
    let first_form = rsigma.contains(&rocc);
    if !first_form && !rpi.contains(&rocc) {
        return Err(TransformError::Internal(
            "right occurrence is neither sigma- nor pi-classified".into(),
        ));
    }

    let rsub = &r.premises[0];
    let premise = if first_form {
        // the occurrence appears unboxed in the right premise: one recursive
        // cut on the two premises, then a single box inference.
        let lsub = &l.premises[0];
        let locc2 = find_occ(&lsub.conclusion.succ, a0)?;
        let rocc2 = find_occ(&rsub.conclusion.ante, a0)?;
        recurse(lsub, rsub, locc2, rocc2, measure)?
    } else {
        // the occurrence is carried boxed: cut the weakening-stripped left
        // proof against the right premise with the same cut formula.
        let stripped = strip_weakening(l)?;
        let rocc2 = find_occ(&rsub.conclusion.ante, a)?;
        recurse(&stripped, rsub, 0, rocc2, measure)?
    };

    // final box node over the recursive result, re-adding Γ₀, Σ₀, Δ, Π₀
    let gamma_len = l.conclusion.ante.len();
    let mut ante = l.conclusion.ante.clone();
    ante.extend(without(&r.conclusion.ante, rocc));
    let mut succ = r.conclusion.succ.clone();
    succ.extend(without(&l.conclusion.succ, locc));
    let shift_r = |k: usize| -> usize { gamma_len + if k > rocc { k - 1 } else { k } };
    let mut sigma = Vec::new();
    let mut pi = Vec::new();
    if first_form {
        sigma.extend(lsigma.iter().copied());
        pi.extend(lpi.iter().copied());
    } else {
        // everything active on the left stays boxed in the stripped premise
        pi.extend(lsigma.iter().copied());
        pi.extend(lpi.iter().copied());
    }
    sigma.extend(rsigma.iter().filter(|&&k| k != rocc).map(|&k| shift_r(k)));
    pi.extend(rpi.iter().filter(|&&k| k != rocc).map(|&k| shift_r(k)));
    sigma.sort_unstable();
    pi.sort_unstable();
    Ok(Proof {
        conclusion: Sequent::new(ante, succ),
        rule: RuleApp::BoxRule { prin: *rprin, sigma, pi },
        premises: vec![premise],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_formula, parse_sequent};
    use crate::proof::BoxClass;

    fn f(s: &str) -> F {
        parse_formula(s).unwrap()
    }

    fn fp_intro_proof() -> Proof {
        let fp = f("fp $x. bot -> box $x");
        let leaf = Proof::leaf_bot(vec![Formula::bot()], vec![f("box (fp $x. bot -> box $x)")], 0);
        let imp = Proof::by_imp_r(leaf, 0, 0);
        Proof::by_fix_r(imp, 0, fp)
    }

    #[test]
    fn weaken_into_init_slot() {
        let p = Proof::leaf_init(vec![f("p")], vec![f("p")], 0, 0);
        let w = weaken(&p, &[f("q")], &[]);
        assert_eq!(w.conclusion, parse_sequent("q, p => p").unwrap());
        assert_eq!(w.size(), 1);
        assert!(w.check(Ruleset::S).is_ok());
    }

    #[test]
    fn weaken_through_side_contexts() {
        let p = fp_intro_proof();
        let w = weaken(&p, &[f("box bot")], &[]);
        assert!(w
            .conclusion
            .multiset_eq(&parse_sequent("box bot => fp $x. bot -> box $x").unwrap()));
        assert_eq!(w.size(), 3);
        assert!(w.check(Ruleset::S).is_ok());
    }

    #[test]
    fn weaken_empty_is_identity() {
        let p = fp_intro_proof();
        assert_eq!(weaken(&p, &[], &[]), p);
    }

    #[test]
    fn strip_weakening_on_box_node() {
        let premise = Proof::leaf_init(vec![f("box p")], vec![f("box p")], 0, 0);
        let node = Proof::by_box(premise, &[BoxClass::Pi], vec![f("q")], vec![f("r")]);
        let stripped = strip_weakening(&node).unwrap();
        assert_eq!(stripped.conclusion, parse_sequent("box p => box box p").unwrap());
        assert_eq!(stripped.size(), node.size());
        assert!(stripped.check(Ruleset::S).is_ok());
    }

    #[test]
    fn strip_weakening_requires_box_final() {
        let p = fp_intro_proof();
        assert_eq!(strip_weakening(&p).unwrap_err(), TransformError::NotBoxFinal);
    }

    #[test]
    fn strip_weakening_without_contexts_is_identity() {
        let premise = Proof::leaf_init(vec![f("box p")], vec![f("box p")], 0, 0);
        let node = Proof::by_box(premise, &[BoxClass::Pi], vec![], vec![]);
        assert_eq!(strip_weakening(&node).unwrap(), node);
    }

    #[test]
    fn cut_axiomatic_against_axiomatic() {
        let a = f("box bot -> p");
        let left = Proof::leaf_init(vec![a.clone()], vec![a.clone()], 0, 0);
        let right = Proof::leaf_init(vec![a.clone()], vec![a.clone()], 0, 0);
        let prob = CutProblem { left, right, left_occ: 0, right_occ: 0 };
        let out = eliminate_cut(&prob).unwrap();
        assert_eq!(out.size(), 1);
        assert!(out
            .conclusion
            .multiset_eq(&Sequent::new(vec![a.clone()], vec![a])));
    }

    #[test]
    fn cut_fp_principal_pair() {
        // left: => F (fix_R final), right: F => bot -> bot (fix_L final)
        let left = fp_intro_proof();
        let fp = f("fp $x. bot -> box $x");
        let unf = Formula::unfold(&fp).unwrap();
        let leaf = Proof::leaf_bot(vec![unf.clone(), Formula::bot()], vec![Formula::bot()], 1);
        let imp = Proof::by_imp_r(leaf, 1, 0);
        assert_eq!(imp.conclusion.succ[0], f("bot -> bot"));
        let right = Proof::by_fix_l(imp, 0, fp);
        assert_eq!(right.size(), 3);
        assert!(right.check(Ruleset::S).is_ok());

        let prob = CutProblem { left, right, left_occ: 0, right_occ: 0 };
        let out = eliminate_cut(&prob).unwrap();
        assert!(out.conclusion.multiset_eq(&parse_sequent("=> bot -> bot").unwrap()));
        assert!(out.size() <= 5, "size {} not within the bound", out.size());
    }

    #[test]
    fn cut_box_second_form() {
        let p1 = Proof::by_box(
            Proof::leaf_init(vec![f("box p")], vec![f("box p")], 0, 0),
            &[BoxClass::Pi],
            vec![],
            vec![],
        );
        assert_eq!(p1.conclusion, parse_sequent("box p => box box p").unwrap());
        let p2 = Proof::by_box(
            Proof::leaf_init(vec![f("box box p")], vec![f("box box p")], 0, 0),
            &[BoxClass::Pi],
            vec![],
            vec![],
        );
        assert_eq!(p2.conclusion, parse_sequent("box box p => box box box p").unwrap());
        let prob = CutProblem { left: p1, right: p2, left_occ: 0, right_occ: 0 };
        let out = eliminate_cut(&prob).unwrap();
        assert!(out
            .conclusion
            .multiset_eq(&parse_sequent("box p => box box box p").unwrap()));
        assert!(out.size() < 4);
    }

    #[test]
    fn cut_through_left_imp_l_side_contexts() {
        // conclusion `p, p -> q => q, box bot` with the cut occurrence
        // routed through the Γ, B => Δ premise
        let p0 = Proof::leaf_init(vec![f("q")], vec![f("q"), f("box bot")], 0, 0);
        let p1 = Proof::leaf_init(vec![f("p")], vec![f("p")], 0, 0);
        let left = Proof::by_imp_l(p0, 0, p1, 0);
        let locc = left
            .conclusion
            .succ
            .iter()
            .position(|x| *x == f("box bot"))
            .unwrap();
        let right = Proof::leaf_init(vec![f("box bot")], vec![f("box bot")], 0, 0);
        let out = eliminate_cut(&CutProblem { left, right, left_occ: locc, right_occ: 0 })
            .unwrap();
        assert!(out
            .conclusion
            .multiset_eq(&parse_sequent("p, p -> q => q, box bot").unwrap()));

        // and through the Σ => A, Π premise
        let p0 = Proof::leaf_init(vec![f("q")], vec![f("q")], 0, 0);
        let p1 = Proof::leaf_init(vec![f("p")], vec![f("p"), f("box bot")], 0, 0);
        let left = Proof::by_imp_l(p0, 0, p1, 0);
        let locc = left
            .conclusion
            .succ
            .iter()
            .position(|x| *x == f("box bot"))
            .unwrap();
        let right = Proof::leaf_init(vec![f("box bot")], vec![f("box bot")], 0, 0);
        let out = eliminate_cut(&CutProblem { left, right, left_occ: locc, right_occ: 0 })
            .unwrap();
        assert!(out
            .conclusion
            .multiset_eq(&parse_sequent("p, p -> q => q, box bot").unwrap()));
    }

    #[test]
    fn cut_through_right_imp_l_side_contexts() {
        // right proof `r, p -> q => q` with the cut occurrence r in the
        // lsplit part, then in the complement
        let right_of = |in_lsplit: bool| {
            let (p0, p1) = if in_lsplit {
                (
                    Proof::leaf_init(vec![f("r"), f("q")], vec![f("q")], 1, 0),
                    Proof::leaf_init(vec![f("p")], vec![f("p")], 0, 0),
                )
            } else {
                (
                    Proof::leaf_init(vec![f("q")], vec![f("q")], 0, 0),
                    Proof::leaf_init(vec![f("r"), f("p")], vec![f("p")], 1, 0),
                )
            };
            Proof::by_imp_l(p0, if in_lsplit { 1 } else { 0 }, p1, 0)
        };
        for in_lsplit in [true, false] {
            let right = right_of(in_lsplit);
            let rocc = right.conclusion.ante.iter().position(|x| *x == f("r")).unwrap();
            let left = Proof::leaf_init(vec![f("r")], vec![f("r")], 0, 0);
            let out =
                eliminate_cut(&CutProblem { left, right, left_occ: 0, right_occ: rocc })
                    .unwrap();
            assert!(
                out.conclusion
                    .multiset_eq(&parse_sequent("r, p, p -> q => q").unwrap()),
                "lsplit={in_lsplit}: got {}",
                out.conclusion
            );
        }
    }

    #[test]
    fn cut_with_implication_principal_on_both_sides() {
        let tt = f("bot -> bot");
        let left = Proof::by_imp_r(Proof::leaf_bot(vec![f("bot")], vec![f("bot")], 0), 0, 0);
        assert_eq!(left.conclusion.succ[0], tt);
        let p0 = Proof::leaf_bot(vec![f("bot")], vec![], 0);
        let p1 = Proof::leaf_bot(vec![f("bot")], vec![f("bot")], 0);
        let right = Proof::by_imp_l(p0, 0, p1, 0);
        assert!(right
            .conclusion
            .multiset_eq(&parse_sequent("bot, bot -> bot =>").unwrap()));
        let rocc = right.conclusion.ante.iter().position(|x| *x == tt).unwrap();
        let out =
            eliminate_cut(&CutProblem { left, right, left_occ: 0, right_occ: rocc }).unwrap();
        assert!(out.conclusion.multiset_eq(&parse_sequent("bot =>").unwrap()));
        assert_eq!(out.size(), 1);
    }

    #[test]
    fn cut_on_box_node_weakening_occurrence() {
        let left = Proof::by_box(
            Proof::leaf_init(vec![f("box p")], vec![f("box p")], 0, 0),
            &[BoxClass::Pi],
            vec![],
            vec![f("q")],
        ); // box p => box box p, q
        let right = Proof::leaf_init(vec![f("q"), f("r")], vec![f("r")], 1, 0);
        let out = eliminate_cut(&CutProblem { left, right, left_occ: 1, right_occ: 0 })
            .unwrap();
        assert!(out
            .conclusion
            .multiset_eq(&parse_sequent("box p, r => r, box box p").unwrap()));
        assert_eq!(out.size(), 2);
    }

    #[test]
    fn cut_side_occurrence_colliding_with_the_unfolding() {
        // the side occurrence equals the unfolding of the principal
        let h = f("fp $x. box $x");
        let bh = Formula::unfold(&h).unwrap();
        let leaf = Proof::leaf_init(vec![bh.clone()], vec![bh.clone(), bh.clone()], 0, 0);
        let left = Proof::by_fix_r(leaf, 0, h.clone()); // box H => H, box H
        let right = Proof::leaf_init(vec![bh.clone()], vec![bh.clone()], 0, 0);
        let out = eliminate_cut(&CutProblem { left, right, left_occ: 1, right_occ: 0 })
            .unwrap();
        let mut want_succ = vec![bh.clone()];
        want_succ.push(h.clone());
        assert!(out
            .conclusion
            .multiset_eq(&Sequent::new(vec![bh], want_succ)));
    }

    #[test]
    fn cut_rejects_mismatched_formulas() {
        let left = Proof::leaf_init(vec![f("p")], vec![f("p")], 0, 0);
        let right = Proof::leaf_init(vec![f("q")], vec![f("q")], 0, 0);
        let prob = CutProblem { left, right, left_occ: 0, right_occ: 0 };
        match eliminate_cut(&prob) {
            Err(TransformError::InvalidCutProblem(msg)) => {
                assert!(msg.contains("cut formulas differ"))
            }
            other => panic!("expected InvalidCutProblem, got {other:?}"),
        }
    }
}
