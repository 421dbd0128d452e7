//! Consequence relations over the calculus: instance-level condition
//! checking (implication laws, Löb conditions, structural-rule probes), the
//! induced refutability construction, and the mechanical contraction-based
//! derivation of the formalized consistency sequent.
//!
//! All verdicts are "on samples": the sample grids are fixed lists shipped
//! with the crate, and every `holds` is backed by checkable witnesses while
//! every `fails` is backed by complete refutations, never by budget
//! exhaustion.

use std::fmt;

use thiserror::Error;

use crate::formula::{Formula, F};
use crate::parse::parse_formula;
use crate::proof::{BoxClass, Proof, Ruleset};
use crate::prover::{search, SearchBudget, SearchVerdict};
use crate::sequent::Sequent;
use crate::transform::{eliminate_cut, CutProblem, TransformError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleTag {
    S,
    Sc,
}

/// Three-valued judgment backed by a checkable witness on yes.
#[derive(Debug, Clone)]
pub enum Judgment {
    Yes(Proof),
    No,
    Unknown,
}

impl Judgment {
    pub fn is_yes(&self) -> bool {
        matches!(self, Judgment::Yes(_))
    }
}

/// Judge of multiset-to-formula consequences. The base system answers via
/// backward search; the extension with explicit contraction and cut reuses
/// those answers (it proves at least as much) but never refutes, and its
/// own facts are established by constructed proofs.
#[derive(Debug, Clone)]
pub struct ConseqOracle {
    pub tag: OracleTag,
    pub budget: SearchBudget,
}

impl ConseqOracle {
    pub fn s(budget: SearchBudget) -> Self {
        ConseqOracle { tag: OracleTag::S, budget }
    }

    pub fn sc(budget: SearchBudget) -> Self {
        ConseqOracle { tag: OracleTag::Sc, budget }
    }

    pub fn ruleset(&self) -> Ruleset {
        match self.tag {
            OracleTag::S => Ruleset::S,
            OracleTag::Sc => Ruleset::Sc,
        }
    }

    pub fn judge(&self, gamma: &[F], phi: &F) -> Judgment {
        let seq = Sequent::new(gamma.to_vec(), vec![phi.clone()]);
        match search(&seq, &self.budget) {
            SearchVerdict::Provable(w) => {
                debug_assert!(w.check(Ruleset::S).is_ok(), "searcher witness must check");
                Judgment::Yes(w)
            }
            SearchVerdict::Refuted => match self.tag {
                OracleTag::S => Judgment::No,
                OracleTag::Sc => Judgment::Unknown,
            },
            SearchVerdict::Unknown => Judgment::Unknown,
        }
    }
}

/// `boxtimes phi := box (phi -> bot)`.
pub fn induced_boxtimes(a: &F) -> F {
    Formula::boxed(Formula::imp(a.clone(), Formula::bot()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => write!(f, "holds-on-samples"),
            Verdict::Fails => write!(f, "fails"),
            Verdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConditionLine {
    pub name: &'static str,
    pub verdict: Verdict,
    /// For a failure: the concrete sequents with their verdicts.
    pub witnesses: Vec<String>,
    /// Number of informative sample instances behind the verdict.
    pub informative: usize,
}

#[derive(Debug, Clone)]
pub struct ConditionReport {
    pub oracle: OracleTag,
    /// The sample grid the verdicts were computed over.
    pub samples: Vec<String>,
    pub lines: Vec<ConditionLine>,
}

impl ConditionReport {
    pub fn line(&self, name: &str) -> Option<&ConditionLine> {
        self.lines.iter().find(|l| l.name == name)
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            write!(f, "{} {}", l.name, l.verdict)?;
            if !l.witnesses.is_empty() {
                write!(f, " [{}]", l.witnesses.join(" | "))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

struct Agg {
    fails: Option<Vec<String>>,
    unknown: bool,
    informative: usize,
}

impl Agg {
    fn new() -> Self {
        Agg { fails: None, unknown: false, informative: 0 }
    }

    fn holds(&mut self) {
        self.informative += 1;
    }

    fn fail(&mut self, witness: Vec<String>) {
        if self.fails.is_none() {
            self.fails = Some(witness);
        }
    }

    fn inconclusive(&mut self) {
        self.unknown = true;
    }

    fn line(self, name: &'static str) -> ConditionLine {
        let (verdict, witnesses) = match self.fails {
            Some(w) => (Verdict::Fails, w),
            None if self.unknown => (Verdict::Inconclusive, vec![]),
            None => (Verdict::Holds, vec![]),
        };
        ConditionLine { name, verdict, witnesses, informative: self.informative }
    }
}

fn show(gamma: &[F], phi: &F) -> String {
    Sequent::new(gamma.to_vec(), vec![phi.clone()]).to_string()
}

/// Fixed default sample formulas for the condition suite.
pub fn default_samples() -> Vec<F> {
    ["p", "q", "bot", "box p"]
        .iter()
        .map(|s| parse_formula(s).expect("sample parses"))
        .collect()
}

/// Fixed grid backing the L1/L2 instance batteries.
pub const LOEB_GRID: [&str; 21] = [
    "p", "q", "r", "bot", "top", "box p", "box q", "box bot", "p -> q", "q -> p",
    "p -> bot", "bot -> p", "box (p -> q)", "(p * q)", "p -> q -> p",
    "fp $x. box $x", "fp $x. box ($x -> bot)", "box (fp $x. box $x)",
    "(p -> q) -> q", "top -> p", "box ((p * q))",
];

/// Fixed grid of provable formulas backing the L3 instance battery.
pub const LOEB_L3_GRID: [&str; 21] = [
    "top", "bot -> bot", "bot -> p", "bot -> q", "bot -> r", "bot -> top",
    "bot -> box p", "p -> p", "q -> q", "r -> r", "box p -> box p", "p -> top",
    "q -> top", "r -> top", "box p -> top", "(p * q) -> top", "top -> top",
    "p -> q -> p", "q -> p -> q", "(p -> q) -> p -> q", "bot -> fp $x. box $x",
];

pub fn loeb_grid() -> Vec<F> {
    LOEB_GRID.iter().map(|s| parse_formula(s).expect("grid parses")).collect()
}

pub fn loeb_l3_grid() -> Vec<F> {
    LOEB_L3_GRID.iter().map(|s| parse_formula(s).expect("grid parses")).collect()
}

/// Instance-level check of the consequence-relation conditions over
/// `samples`, with small fixed context grids.
pub fn condition_suite(oracle: &ConseqOracle, samples: &[F]) -> ConditionReport {
    let mut lines = Vec::new();
    let contexts: Vec<Vec<F>> = std::iter::once(Vec::new())
        .chain(samples.iter().map(|f| vec![f.clone()]))
        .collect();

    // simple implication tuples shared by most conditions:
    // if every premise is provable, the conclusion must be too
    let run =
        |name: &'static str, tuples: Vec<(Vec<(Vec<F>, F)>, (Vec<F>, F))>| -> ConditionLine {
            let mut agg = Agg::new();
            for (premises, conclusion) in tuples {
                // an undecided or failed premise makes the instance
                // uninformative, never a counterexample
                let all_yes = premises
                    .iter()
                    .all(|(g, f)| oracle.judge(g, f).is_yes());
                if !all_yes {
                    continue;
                }
                match oracle.judge(&conclusion.0, &conclusion.1) {
                    Judgment::Yes(_) => agg.holds(),
                    Judgment::No => {
                        let mut w: Vec<String> =
                            premises.iter().map(|(g, f)| show(g, f)).collect();
                        w.push(format!("{} refuted", show(&conclusion.0, &conclusion.1)));
                        agg.fail(w);
                    }
                    Judgment::Unknown => agg.inconclusive(),
                }
            }
            agg.line(name)
        };

    // I1: phi |- phi
    {
        let mut agg = Agg::new();
        for f in samples {
            match oracle.judge(std::slice::from_ref(f), f) {
                Judgment::Yes(_) => agg.holds(),
                Judgment::No => agg.fail(vec![format!("{} refuted", show(std::slice::from_ref(f), f))]),
                Judgment::Unknown => agg.inconclusive(),
            }
        }
        lines.push(agg.line("I1"));
    }

    // I2: transitivity, established by composing witnesses (cut elimination
    // for the base system, an explicit cut node for the extension)
    {
        let mut agg = Agg::new();
        for g in &contexts {
            for d in &contexts {
                for psi in samples {
                    for phi in samples {
                        let mut gp = g.clone();
                        gp.push(psi.clone());
                        let left = oracle.judge(d, psi);
                        let right = oracle.judge(&gp, phi);
                        let (Judgment::Yes(wl), Judgment::Yes(wr)) = (&left, &right) else {
                            continue;
                        };
                        let psi_pos = gp.len() - 1;
                        let composed: Result<Proof, String> = match oracle.tag {
                            OracleTag::S => eliminate_cut(&CutProblem {
                                left: wl.clone(),
                                right: wr.clone(),
                                left_occ: 0,
                                right_occ: psi_pos,
                            })
                            .map_err(|e| e.to_string()),
                            OracleTag::Sc => {
                                Ok(Proof::by_cut(wl.clone(), 0, wr.clone(), psi_pos))
                            }
                        };
                        let mut want = g.clone();
                        want.extend(d.iter().cloned());
                        let want = Sequent::new(want, vec![phi.clone()]);
                        match composed {
                            Ok(p)
                                if p.conclusion.multiset_eq(&want)
                                    && p.check(oracle.ruleset()).is_ok() =>
                            {
                                agg.holds()
                            }
                            Ok(p) => agg.fail(vec![format!(
                                "composition of {} and {} yields {}",
                                show(d, psi),
                                show(&gp, phi),
                                p.conclusion
                            )]),
                            Err(e) => agg.fail(vec![format!(
                                "composition of {} and {} failed: {e}",
                                show(d, psi),
                                show(&gp, phi)
                            )]),
                        }
                    }
                }
            }
        }
        lines.push(agg.line("I2"));
    }

    // I3: Γ, phi |- psi iff Γ |- phi -> psi (both directions)
    {
        let mut tuples = Vec::new();
        for g in &contexts {
            for phi in samples {
                for psi in samples {
                    let mut gphi = g.clone();
                    gphi.push(phi.clone());
                    let lhs = (gphi, psi.clone());
                    let rhs = (g.clone(), Formula::imp(phi.clone(), psi.clone()));
                    tuples.push((vec![lhs.clone()], rhs.clone()));
                    tuples.push((vec![rhs], lhs));
                }
            }
        }
        lines.push(run("I3", tuples));
    }

    // I4: Γ, top |- phi iff Γ |- phi
    {
        let mut tuples = Vec::new();
        for g in &contexts {
            for phi in samples {
                let mut gt = g.clone();
                gt.push(Formula::top());
                let lhs = (gt, phi.clone());
                let rhs = (g.clone(), phi.clone());
                tuples.push((vec![lhs.clone()], rhs.clone()));
                tuples.push((vec![rhs], lhs));
            }
        }
        lines.push(run("I4", tuples));
    }

    // conjunction law: Γ, phi, psi |- theta iff Γ, phi (*) psi |- theta
    {
        let mut tuples = Vec::new();
        for g in &contexts {
            for phi in samples {
                for psi in samples {
                    for theta in samples {
                        let mut both = g.clone();
                        both.push(phi.clone());
                        both.push(psi.clone());
                        let mut conj = g.clone();
                        conj.push(Formula::conj(phi.clone(), psi.clone()));
                        let lhs = (both, theta.clone());
                        let rhs = (conj, theta.clone());
                        tuples.push((vec![lhs.clone()], rhs.clone()));
                        tuples.push((vec![rhs], lhs));
                    }
                }
            }
        }
        lines.push(run("CONJ", tuples));
    }

    // implication lemma (i): modus ponens closure
    {
        let mut tuples = Vec::new();
        for g in &contexts {
            for d in &contexts {
                for phi in samples {
                    for psi in samples {
                        let p1 = (g.clone(), Formula::imp(phi.clone(), psi.clone()));
                        let p2 = (d.clone(), phi.clone());
                        let mut gd = g.clone();
                        gd.extend(d.iter().cloned());
                        tuples.push((vec![p1, p2], (gd, psi.clone())));
                    }
                }
            }
        }
        lines.push(run("IMP_MODUS_PONENS", tuples));
    }

    // implication lemma (ii): congruence with respect to equivalence
    {
        let pairs: Vec<(F, F)> = vec![
            (parse_formula("p").unwrap(), parse_formula("p").unwrap()),
            (parse_formula("q").unwrap(), parse_formula("q").unwrap()),
            (parse_formula("bot").unwrap(), parse_formula("top -> bot").unwrap()),
            (parse_formula("box p").unwrap(), parse_formula("box p").unwrap()),
        ];
        let mut tuples = Vec::new();
        for (a1, a2) in &pairs {
            for (b1, b2) in &pairs {
                let premises = vec![
                    (vec![a1.clone()], a2.clone()),
                    (vec![a2.clone()], a1.clone()),
                    (vec![b1.clone()], b2.clone()),
                    (vec![b2.clone()], b1.clone()),
                ];
                let i1 = Formula::imp(a1.clone(), b1.clone());
                let i2 = Formula::imp(a2.clone(), b2.clone());
                let mut t1 = premises.clone();
                t1.push((vec![i1.clone()], i2.clone()));
                tuples.push((premises.clone(), (vec![i1.clone()], i2.clone())));
                tuples.push((premises, (vec![i2], i1)));
            }
        }
        lines.push(run("IMP_CONGRUENCE", tuples));
    }

    // implication lemma (iii): contraposition closure
    {
        let mut tuples = Vec::new();
        for g in &contexts {
            for phi in samples {
                for psi in samples {
                    let mut gphi = g.clone();
                    gphi.push(phi.clone());
                    let mut gneg = g.clone();
                    gneg.push(Formula::neg(psi.clone()));
                    tuples.push((
                        vec![(gphi, psi.clone())],
                        (gneg, Formula::neg(phi.clone())),
                    ));
                }
            }
        }
        lines.push(run("IMP_CONTRAPOSITION", tuples));
    }

    // L1-L3
    {
        let mut tuples = Vec::new();
        for phi in samples {
            for psi in samples {
                tuples.push((
                    vec![],
                    (
                        vec![Formula::boxed(Formula::imp(phi.clone(), psi.clone()))],
                        Formula::imp(
                            Formula::boxed(phi.clone()),
                            Formula::boxed(psi.clone()),
                        ),
                    ),
                ));
            }
        }
        lines.push(run("L1", tuples));

        let mut tuples = Vec::new();
        for phi in samples {
            tuples.push((
                vec![],
                (
                    vec![Formula::boxed(phi.clone())],
                    Formula::boxed(Formula::boxed(phi.clone())),
                ),
            ));
        }
        lines.push(run("L2", tuples));

        // L3 over the samples plus derived provable instances
        let mut l3_formulas: Vec<F> = samples.to_vec();
        l3_formulas.push(Formula::top());
        for phi in samples {
            l3_formulas.push(Formula::imp(Formula::bot(), phi.clone()));
        }
        let mut tuples = Vec::new();
        for phi in &l3_formulas {
            tuples.push((
                vec![(vec![], phi.clone())],
                (vec![], Formula::boxed(phi.clone())),
            ));
        }
        lines.push(run("L3", tuples));
    }

    // equivalence lemma, form (ii): Γ |- phi gives box Γ |- box phi
    {
        let mut gammas: Vec<Vec<F>> = contexts.clone();
        for a in samples {
            for b in samples {
                gammas.push(vec![a.clone(), b.clone()]);
            }
        }
        let mut tuples = Vec::new();
        for g in &gammas {
            for phi in samples {
                let boxed: Vec<F> = g.iter().map(|f| Formula::boxed(f.clone())).collect();
                tuples.push((
                    vec![(g.clone(), phi.clone())],
                    (boxed, Formula::boxed(phi.clone())),
                ));
            }
        }
        lines.push(run("LOEB_FORM_II", tuples));
    }

    // equivalence lemma, form (iii): Γ, box Δ |- phi gives
    // box Γ, box Δ |- box phi
    {
        let mut tuples = Vec::new();
        for g in &contexts {
            for d in &contexts {
                for phi in samples {
                    let boxed_d: Vec<F> =
                        d.iter().map(|f| Formula::boxed(f.clone())).collect();
                    let mut lhs = g.clone();
                    lhs.extend(boxed_d.iter().cloned());
                    let mut rhs: Vec<F> =
                        g.iter().map(|f| Formula::boxed(f.clone())).collect();
                    rhs.extend(boxed_d);
                    tuples.push((
                        vec![(lhs, phi.clone())],
                        (rhs, Formula::boxed(phi.clone())),
                    ));
                }
            }
        }
        lines.push(run("LOEB_FORM_III", tuples));
    }

    // contraction and box-contraction, with constructed recovery in the
    // extended ruleset
    lines.push(structural_contraction(oracle, samples, false));
    lines.push(structural_contraction(oracle, samples, true));

    // weakening
    {
        let mut tuples = Vec::new();
        for g in &contexts {
            for phi in samples {
                for psi in samples {
                    let mut gphi = g.clone();
                    gphi.push(phi.clone());
                    tuples.push((vec![(g.clone(), psi.clone())], (gphi, psi.clone())));
                }
            }
        }
        lines.push(run("WEAKENING", tuples));
    }

    // box-weakening
    {
        let mut tuples = Vec::new();
        for g in &contexts {
            for phi in samples {
                for psi in samples {
                    let mut gbox = g.clone();
                    gbox.push(Formula::boxed(psi.clone()));
                    tuples.push((vec![(g.clone(), phi.clone())], (gbox, phi.clone())));
                }
            }
        }
        lines.push(run("BOX_WEAKENING", tuples));
    }

    // keep the declared order: contraction lines were computed above,
    // weakening placed after them
    let order = [
        "I1", "I2", "I3", "I4", "CONJ", "IMP_MODUS_PONENS", "IMP_CONGRUENCE",
        "IMP_CONTRAPOSITION", "L1", "L2", "L3", "LOEB_FORM_II", "LOEB_FORM_III",
        "CONTRACTION", "WEAKENING", "BOX_CONTRACTION", "BOX_WEAKENING",
    ];
    let mut ordered = Vec::new();
    for name in order {
        if let Some(pos) = lines.iter().position(|l| l.name == name) {
            ordered.push(lines.remove(pos));
        }
    }
    ConditionReport {
        oracle: oracle.tag,
        samples: samples.iter().map(|f| f.to_string()).collect(),
        lines: ordered,
    }
}

fn structural_contraction(
    oracle: &ConseqOracle,
    samples: &[F],
    boxed: bool,
) -> ConditionLine {
    let name = if boxed { "BOX_CONTRACTION" } else { "CONTRACTION" };
    let mut agg = Agg::new();
    for phi0 in samples {
        let phi = if boxed { Formula::boxed(phi0.clone()) } else { phi0.clone() };
        let conj = Formula::conj(phi0.clone(), phi0.clone());
        let mut targets: Vec<F> = samples.to_vec();
        targets.push(if boxed { Formula::boxed(conj) } else { conj });
        for psi in &targets {
            let premise = vec![phi.clone(), phi.clone()];
            let conclusion = vec![phi.clone()];
            if let Judgment::Yes(w) = oracle.judge(&premise, psi) { match oracle.tag {
                OracleTag::S => match oracle.judge(&conclusion, psi) {
                    Judgment::Yes(_) => agg.holds(),
                    Judgment::No => agg.fail(vec![
                        format!("{} provable", show(&premise, psi)),
                        format!("{} refuted", show(&conclusion, psi)),
                    ]),
                    Judgment::Unknown => agg.inconclusive(),
                },
                OracleTag::Sc => {
                    // recover the conclusion by an explicit contraction
                    let positions: Vec<usize> = w
                        .conclusion
                        .ante
                        .iter()
                        .enumerate()
                        .filter(|(_, f)| **f == phi)
                        .map(|(k, _)| k)
                        .collect();
                    let ctr = Proof::by_ctr_l(w.clone(), positions[0], positions[1]);
                    if ctr.check(Ruleset::Sc).is_ok() {
                        agg.holds();
                    } else {
                        agg.fail(vec![format!(
                            "contracted proof of {} fails checking",
                            show(&conclusion, psi)
                        )]);
                    }
                }
            } }
        }
    }
    agg.line(name)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApsCondition {
    C1,
    C2,
    C3,
    C4,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProbeOutcome {
    Holds { evidence: Vec<Sequent> },
    Fails { witness: Vec<String> },
    Inconclusive,
}

/// Checks one condition instance of the induced structure where the order
/// is the single-premise consequence, box is the modality and boxtimes is
/// the induced refutability operator.
pub fn aps_condition_probe(
    oracle: &ConseqOracle,
    condition: ApsCondition,
    x: Option<&F>,
    y: Option<&F>,
) -> ProbeOutcome {
    let le = |a: &F, b: &F| oracle.judge(std::slice::from_ref(a), b);
    let mut evidence = Vec::new();
    let mut witness = Vec::new();
    let mut failed = false;
    let mut unknown = false;
    let note = |tag: &str,
                    a: &F,
                    b: &F,
                    j: &Judgment,
                    evidence: &mut Vec<Sequent>,
                    witness: &mut Vec<String>| {
        let seq = Sequent::new(vec![a.clone()], vec![b.clone()]);
        match j {
            Judgment::Yes(_) => {
                evidence.push(seq.clone());
                witness.push(format!("{seq} provable"));
                true
            }
            Judgment::No => {
                witness.push(format!("{seq} refuted"));
                false
            }
            Judgment::Unknown => {
                witness.push(format!("{tag} {seq} unknown"));
                false
            }
        }
    };

    match condition {
        ApsCondition::C1 => {
            let (Some(x), Some(y)) = (x, y) else { return ProbeOutcome::Inconclusive };
            let premise = le(x, y);
            if !premise.is_yes() {
                // vacuous instance
                return match premise {
                    Judgment::No => ProbeOutcome::Holds { evidence },
                    _ => ProbeOutcome::Inconclusive,
                };
            }
            evidence.push(Sequent::new(vec![x.clone()], vec![y.clone()]));
            for (a, b) in [
                (Formula::boxed(x.clone()), Formula::boxed(y.clone())),
                (induced_boxtimes(y), induced_boxtimes(x)),
            ] {
                let j = le(&a, &b);
                match j {
                    Judgment::Unknown => unknown = true,
                    _ => {
                        if !note("C1", &a, &b, &j, &mut evidence, &mut witness) {
                            failed = true;
                        }
                    }
                }
            }
        }
        ApsCondition::C2 => {
            let bt_bot = induced_boxtimes(&Formula::bot());
            for gamma in [vec![Formula::top()], vec![]] {
                match oracle.judge(&gamma, &bt_bot) {
                    Judgment::Yes(_) => {
                        evidence.push(Sequent::new(gamma, vec![bt_bot.clone()]))
                    }
                    Judgment::No => {
                        failed = true;
                        witness.push(format!(
                            "{} refuted",
                            Sequent::new(gamma, vec![bt_bot.clone()])
                        ));
                    }
                    Judgment::Unknown => unknown = true,
                }
            }
        }
        ApsCondition::C3 => {
            let (Some(x), Some(y)) = (x, y) else { return ProbeOutcome::Inconclusive };
            let p1 = le(x, &Formula::boxed(y.clone()));
            let p2 = le(x, &induced_boxtimes(y));
            if !(p1.is_yes() && p2.is_yes()) {
                return match (&p1, &p2) {
                    (Judgment::Unknown, _) | (_, Judgment::Unknown) => {
                        ProbeOutcome::Inconclusive
                    }
                    _ => ProbeOutcome::Holds { evidence },
                };
            }
            witness.push(format!(
                "{} provable",
                Sequent::new(vec![x.clone()], vec![Formula::boxed(y.clone())])
            ));
            witness.push(format!(
                "{} provable",
                Sequent::new(vec![x.clone()], vec![induced_boxtimes(y)])
            ));
            let target = induced_boxtimes(&Formula::top());
            let j = le(x, &target);
            match j {
                Judgment::Unknown => unknown = true,
                _ => {
                    if !note("C3", x, &target, &j, &mut evidence, &mut witness) {
                        failed = true;
                    }
                }
            }
        }
        ApsCondition::C4 => {
            let Some(x) = x else { return ProbeOutcome::Inconclusive };
            let bt = induced_boxtimes(x);
            let j = le(&bt, &Formula::boxed(bt.clone()));
            match j {
                Judgment::Unknown => unknown = true,
                _ => {
                    if !note("C4", &bt, &Formula::boxed(bt.clone()), &j, &mut evidence, &mut witness)
                    {
                        failed = true;
                    }
                }
            }
        }
    }
    if failed {
        ProbeOutcome::Fails { witness }
    } else if unknown {
        ProbeOutcome::Inconclusive
    } else {
        ProbeOutcome::Holds { evidence }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConseqError {
    #[error("the construction requires the ruleset with explicit contraction and cut")]
    RulesetUnsupported,
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("constructed proof fails checking: {0}")]
    BadConstruction(String),
}

/// Mechanically compiles the contraction-based derivation of
/// `box (box bot -> bot) => box bot`: fixed-point equivalences, the
/// monotonicity and self-certification schemas, the one contraction step,
/// and the bridging equivalences, joined by explicit cuts. Sub-compositions
/// below the contraction are performed by cut elimination, so the single
/// contraction node is the first rule outside the cut-free system.
pub fn compile_g2_proof(ruleset: Ruleset) -> Result<Proof, ConseqError> {
    compile_g2_proof_with(ruleset, "x")
}

/// Same construction with a chosen fixed-point variable; the root sequent
/// does not depend on the choice, only the internal fp subformulas do.
pub fn compile_g2_proof_with(ruleset: Ruleset, var: &str) -> Result<Proof, ConseqError> {
    if ruleset != Ruleset::Sc {
        return Err(ConseqError::RulesetUnsupported);
    }
    let bot = Formula::bot();
    let top = Formula::top();
    let p = Formula::goedel_fp(var);
    let bt_p = induced_boxtimes(&p); // equals the unfolding of p
    let bt_top = induced_boxtimes(&top);
    let bt_bt_top = induced_boxtimes(&bt_top);
    let box_bot = Formula::boxed(bot.clone());
    let g2_lhs = Formula::boxed(Formula::imp(box_bot.clone(), bot.clone()));

    let init = |f: &F| Proof::leaf_init(vec![f.clone()], vec![f.clone()], 0, 0);

    // C4 schema: boxtimes p => box boxtimes p
    let s1 = Proof::by_box(init(&bt_p), &[BoxClass::Pi], vec![], vec![]);
    // C1 schema from the fixed-point direction boxtimes p => p:
    // box boxtimes p => box p
    let s2 = {
        let unfolding = Proof::by_fix_r(init(&bt_p), 0, p.clone());
        Proof::by_box(unfolding, &[BoxClass::Sigma], vec![], vec![])
    };
    // boxtimes p => box p, composed without explicit cut
    let s3 = eliminate_cut(&CutProblem { left: s1, right: s2, left_occ: 0, right_occ: 0 })?;

    // C3 schema: box p, boxtimes p => boxtimes top
    let s4 = {
        let w = Proof::leaf_bot(vec![top.clone(), bot.clone()], vec![bot.clone()], 1);
        let imp_l = Proof::by_imp_l(w, 1, init(&p), 0); // top, p, p -> bot => bot
        let imp_r = Proof::by_imp_r(imp_l, 0, 0); // p, p -> bot => top -> bot
        Proof::by_box(imp_r, &[BoxClass::Sigma, BoxClass::Sigma], vec![], vec![])
    };
    // boxtimes p, boxtimes p => boxtimes top, still cut-free
    let s5 = eliminate_cut(&CutProblem {
        left: s3,
        right: s4.clone(),
        left_occ: 0,
        right_occ: 0,
    })?;
    debug_assert_eq!(s5.conclusion.ante.len(), 2);

    // the single contraction step
    let s6 = Proof::by_ctr_l(s5, 0, 1); // boxtimes p => boxtimes top

    // p => boxtimes p and boxtimes p => p (fixed-point equivalences)
    let s7 = Proof::by_fix_l(init(&bt_p), 0, p.clone());
    let s8 = Proof::by_cut(s7, 0, s6, 0); // p => boxtimes top

    // C1 schema from p => boxtimes top:
    // boxtimes boxtimes top => boxtimes p
    let s9 = {
        let imp_l = Proof::by_imp_l(
            Proof::leaf_bot(vec![bot.clone()], vec![bot.clone()], 0),
            0,
            s8.clone(),
            0,
        ); // p, boxtimes top -> bot => bot
        let imp_r = Proof::by_imp_r(imp_l, 0, 0); // boxtimes top -> bot => p -> bot
        Proof::by_box(imp_r, &[BoxClass::Sigma], vec![], vec![])
    };
    let s10 = Proof::by_fix_r(init(&bt_p), 0, p.clone());
    let s11 = Proof::by_cut(s9, 0, s10, 0); // boxtimes boxtimes top => p
    let s12 = Proof::by_cut(s11, 0, s8, 0); // boxtimes boxtimes top => boxtimes top

    // bridge: box (top -> bot) => box bot
    let b2 = {
        let to_bot = Proof::by_imp_l(
            Proof::leaf_bot(vec![bot.clone()], vec![bot.clone()], 0),
            0,
            Proof::by_imp_r(Proof::leaf_bot(vec![bot.clone()], vec![bot.clone()], 0), 0, 0),
            0,
        ); // top -> bot => bot
        Proof::by_box(to_bot, &[BoxClass::Sigma], vec![], vec![])
    };
    // bridge: box (box bot -> bot) => boxtimes boxtimes top
    let b1 = {
        let imp_l = Proof::by_imp_l(
            Proof::leaf_bot(vec![bot.clone()], vec![bot.clone()], 0),
            0,
            b2.clone(),
            0,
        ); // bt_top, box bot -> bot => bot
        let imp_r = Proof::by_imp_r(imp_l, 0, 0); // box bot -> bot => bt_top -> bot
        Proof::by_box(imp_r, &[BoxClass::Sigma], vec![], vec![])
    };
    debug_assert_eq!(b1.conclusion.succ[0], bt_bt_top);

    let t1 = Proof::by_cut(b1, 0, s12, 0); // g2_lhs => boxtimes top
    let t2 = Proof::by_cut(t1, 0, b2, 0); // g2_lhs => box bot
    debug_assert_eq!(t2.conclusion.ante[0], g2_lhs);

    t2.check(Ruleset::Sc)
        .map_err(|e| ConseqError::BadConstruction(e.to_string()))?;
    Ok(t2)
}

/// The target sequent of the compiled derivation.
pub fn formalized_g2_sequent() -> Sequent {
    crate::parse::parse_sequent("box (box bot -> bot) => box bot").expect("parses")
}

#[derive(Debug, Clone)]
pub struct FixedPointFamily {
    pub points: Vec<F>,
    /// Both directions of `p = boxtimes p` for every point, with witnesses.
    pub equivalences: Vec<(Sequent, Proof)>,
    /// All cross-direction sequents between distinct points, each refuted.
    pub cross_refuted: Vec<Sequent>,
    /// Unexpected verdicts; empty on success.
    pub failures: Vec<String>,
}

/// Produces `n` pairwise-inequivalent refutability fixed points, verifying
/// every fixed-point equivalence and the refutation of every cross
/// direction. Intended for desk scale (n up to 5); the search cost grows
/// quadratically in `n`.
pub fn uniqueness_failure_demo(n: usize, budget: &SearchBudget) -> FixedPointFamily {
    let points: Vec<F> = (1..=n).map(|k| Formula::goedel_fp(format!("x{k}"))).collect();
    let mut equivalences = Vec::new();
    let mut cross_refuted = Vec::new();
    let mut failures = Vec::new();

    for p in &points {
        let bt = induced_boxtimes(p);
        for (a, b) in [(p.clone(), bt.clone()), (bt.clone(), p.clone())] {
            let seq = Sequent::new(vec![a], vec![b]);
            match search(&seq, budget) {
                SearchVerdict::Provable(w) => equivalences.push((seq, w)),
                other => failures.push(format!("{seq}: expected provable, got {other:?}")),
            }
        }
    }
    for (i, pi) in points.iter().enumerate() {
        for (j, pj) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let seq = Sequent::new(vec![pi.clone()], vec![pj.clone()]);
            match search(&seq, budget) {
                SearchVerdict::Refuted => cross_refuted.push(seq),
                other => failures.push(format!("{seq}: expected refuted, got {other:?}")),
            }
        }
    }
    FixedPointFamily { points, equivalences, cross_refuted, failures }
}
