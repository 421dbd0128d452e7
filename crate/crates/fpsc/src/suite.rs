//! The acceptance battery: one callable check per claim reproduced by this
//! crate, shared by the command-line driver and the integration tests.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::aps::{self, ConditionId};
use crate::conseq::{
    aps_condition_probe, compile_g2_proof, condition_suite, default_samples,
    formalized_g2_sequent, induced_boxtimes, loeb_grid, loeb_l3_grid,
    uniqueness_failure_demo, ApsCondition, ConseqOracle, ProbeOutcome, Verdict,
};
use crate::enumerate::{closure, enumerate_proofs, random_proofs, EnumParams};
use crate::formula::{Formula, F};
use crate::parse::{parse_formula, parse_sequent};
use crate::proof::{Proof, Ruleset};
use crate::prover::{
    rule_admissibility_probe, search, AdmissibilityOutcome, SearchBudget, SearchVerdict,
};
use crate::sequent::Sequent;
use crate::transform::{eliminate_cut, weaken, CutProblem};

#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl CriterionOutcome {
    pub fn render(&self) -> String {
        format!(
            "criterion {:2} {:32} {}  ({:.2}s) {}",
            self.id,
            self.name,
            if self.pass { "pass" } else { "FAIL" },
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

pub const CRITERION_NAMES: [&str; 10] = [
    "formalized-g2-refuted",
    "loeb-henkin-not-admissible",
    "fixed-point-multiplicity",
    "cut-admissibility-sweep",
    "weakening-admissibility",
    "loeb-conditions-structural",
    "induced-aps-breakdown",
    "neg-box-bot-refuted",
    "abstract-g2-finite",
    "sc-formalized-g2",
];

pub fn run_all() -> Vec<CriterionOutcome> {
    (1..=10).map(run_criterion).collect()
}

pub fn run_criterion(id: usize) -> CriterionOutcome {
    let start = Instant::now();
    let (pass, detail) = match id {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(),
        5 => criterion_5(),
        6 => criterion_6(),
        7 => criterion_7(),
        8 => criterion_8(),
        9 => criterion_9(),
        10 => criterion_10(),
        _ => (false, format!("no criterion {id}")),
    };
    let elapsed = start.elapsed();
    // pinned runtime bounds
    let (pass, detail) = match id {
        1 if elapsed >= Duration::from_secs(60) => {
            (false, format!("{detail}; exceeded 60 s"))
        }
        4 if elapsed >= Duration::from_secs(300) => {
            (false, format!("{detail}; exceeded 5 min"))
        }
        _ => (pass, detail),
    };
    CriterionOutcome { id, name: CRITERION_NAMES[id - 1], pass, detail, elapsed }
}

fn criterion_1() -> (bool, String) {
    let goal = formalized_g2_sequent();
    match search(&goal, &SearchBudget::default()) {
        SearchVerdict::Refuted => (true, format!("`{goal}` refuted by complete search")),
        other => (false, format!("`{goal}`: expected Refuted, got {other:?}")),
    }
}

fn criterion_2() -> (bool, String) {
    let budget = SearchBudget::default();
    let a = Formula::henkin_fp("x");
    let box_a_to_a = Sequent::new(vec![Formula::boxed(a.clone())], vec![a.clone()]);
    let a_to_box_a = Sequent::new(vec![a.clone()], vec![Formula::boxed(a.clone())]);
    let conclusion = Sequent::new(vec![], vec![a.clone()]);

    let loeb = rule_admissibility_probe(std::slice::from_ref(&box_a_to_a), &conclusion, &budget);
    let henkin =
        rule_admissibility_probe(&[box_a_to_a, a_to_box_a], &conclusion, &budget);
    let check_cex = |o: &AdmissibilityOutcome, rule: &str| -> Result<usize, String> {
        match o {
            AdmissibilityOutcome::Counterexample { premise_witnesses } => {
                for w in premise_witnesses {
                    w.check(Ruleset::S).map_err(|e| format!("{rule} witness: {e}"))?;
                }
                Ok(premise_witnesses.len())
            }
            other => Err(format!("{rule}: expected counterexample, got {other:?}")),
        }
    };
    match (check_cex(&loeb, "loeb"), check_cex(&henkin, "henkin")) {
        (Ok(n1), Ok(n2)) => (
            true,
            format!("counterexamples with {n1}+{n2} checked premise witnesses"),
        ),
        (Err(e), _) | (_, Err(e)) => (false, e),
    }
}

fn criterion_3() -> (bool, String) {
    let fam = uniqueness_failure_demo(3, &SearchBudget::default());
    if !fam.failures.is_empty() {
        return (false, fam.failures.join("; "));
    }
    for (seq, w) in &fam.equivalences {
        if let Err(e) = w.check(Ruleset::S) {
            return (false, format!("witness for `{seq}` fails: {e}"));
        }
    }
    let ok = fam.points.len() == 3
        && fam.equivalences.len() == 6
        && fam.cross_refuted.len() == 6;
    (
        ok,
        format!(
            "{} fixed points, {} equivalence sequents provable, {} cross sequents refuted",
            fam.points.len(),
            fam.equivalences.len(),
            fam.cross_refuted.len()
        ),
    )
}

/// Vocabulary pinned by the cut-admissibility criterion.
pub fn cut_sweep_vocabulary() -> Vec<F> {
    ["bot", "p", "box p", "p -> bot", "box bot"]
        .iter()
        .map(|s| parse_formula(s).expect("vocabulary parses"))
        .collect()
}

/// Every compatible cut pair among `proofs`: both occurrences carry the same
/// formula. Returns (pairs tried, first failure).
fn sweep_pairs(proofs: &[Proof]) -> (usize, Option<String>) {
    let mut tried = 0usize;
    for left in proofs {
        for right in proofs {
            for (locc, a) in left.conclusion.succ.iter().enumerate() {
                for (rocc, b) in right.conclusion.ante.iter().enumerate() {
                    if a != b {
                        continue;
                    }
                    tried += 1;
                    let prob = CutProblem {
                        left: left.clone(),
                        right: right.clone(),
                        left_occ: locc,
                        right_occ: rocc,
                    };
                    if let Err(e) = eliminate_cut(&prob) {
                        return (
                            tried,
                            Some(format!(
                                "cut of `{}` [{locc}] against `{}` [{rocc}]: {e}",
                                left.conclusion, right.conclusion
                            )),
                        );
                    }
                }
            }
        }
    }
    (tried, None)
}

fn criterion_4() -> (bool, String) {
    let vocab = cut_sweep_vocabulary();
    let proofs = enumerate_proofs(&vocab, &EnumParams::default());
    let (exhaustive_pairs, failure) = sweep_pairs(&proofs);
    if let Some(f) = failure {
        return (false, f);
    }

    // randomized fp-containing pairs
    let fp_vocab = vec![
        Formula::henkin_fp("x"),
        Formula::goedel_fp("x"),
        Formula::atom("p"),
        Formula::bot(),
    ];
    let pool = random_proofs(&fp_vocab, 1500, 6, 20240719);
    let mut rng = ChaCha8Rng::seed_from_u64(20240720);
    let contains_fp = |f: &F| {
        fn go(f: &Formula) -> bool {
            match f {
                Formula::Fp(..) => true,
                Formula::Imp(a, b) => go(a) || go(b),
                Formula::Box(a) => go(a),
                _ => false,
            }
        }
        go(f)
    };
    let mut random_pairs = 0usize;
    let mut guard = 0usize;
    while random_pairs < 1000 && guard < 2_000_000 {
        guard += 1;
        let left = &pool[rng.random_range(0..pool.len())];
        let right = &pool[rng.random_range(0..pool.len())];
        let mut candidates = Vec::new();
        for (locc, a) in left.conclusion.succ.iter().enumerate() {
            for (rocc, b) in right.conclusion.ante.iter().enumerate() {
                if a == b && contains_fp(a) {
                    candidates.push((locc, rocc));
                }
            }
        }
        if candidates.is_empty() {
            continue;
        }
        let (locc, rocc) = candidates[rng.random_range(0..candidates.len())];
        let prob = CutProblem {
            left: left.clone(),
            right: right.clone(),
            left_occ: locc,
            right_occ: rocc,
        };
        if let Err(e) = eliminate_cut(&prob) {
            return (
                false,
                format!(
                    "random cut of `{}` against `{}`: {e}",
                    left.conclusion, right.conclusion
                ),
            );
        }
        random_pairs += 1;
    }
    if random_pairs < 1000 {
        return (false, format!("only {random_pairs} random fp pairs found"));
    }
    (
        true,
        format!(
            "{exhaustive_pairs} exhaustive pairs and {random_pairs} random fp pairs, zero violations"
        ),
    )
}

fn criterion_5() -> (bool, String) {
    let vocab = cut_sweep_vocabulary();
    let uni = closure(&vocab, 3);
    let proofs = enumerate_proofs(&vocab, &EnumParams::default());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut used = 0usize;
    for p in proofs.iter().take(500) {
        let nl = rng.random_range(0..=2);
        let nr = rng.random_range(0..=2);
        let add_l: Vec<F> =
            (0..nl).map(|_| uni[rng.random_range(0..uni.len())].clone()).collect();
        let add_r: Vec<F> =
            (0..nr).map(|_| uni[rng.random_range(0..uni.len())].clone()).collect();
        let w = weaken(p, &add_l, &add_r);
        if w.size() > p.size() {
            return (false, format!("weakening grew `{}`", p.conclusion));
        }
        if let Err(e) = w.check(Ruleset::S) {
            return (false, format!("weakened `{}` fails: {e}", p.conclusion));
        }
        used += 1;
    }
    if used < 500 {
        return (false, format!("only {used} enumerated proofs available"));
    }
    (true, format!("{used} proofs weakened, size never increased"))
}

fn criterion_6() -> (bool, String) {
    let budget = SearchBudget::default();
    let grid = loeb_grid();
    let mut l1 = 0usize;
    for (i, phi) in grid.iter().enumerate() {
        for psi in [&grid[(i + 1) % grid.len()], phi] {
            let seq = Sequent::new(
                vec![Formula::boxed(Formula::imp(phi.clone(), psi.clone()))],
                vec![Formula::imp(Formula::boxed(phi.clone()), Formula::boxed(psi.clone()))],
            );
            match search(&seq, &budget) {
                SearchVerdict::Provable(w) if w.check(Ruleset::S).is_ok() => l1 += 1,
                other => return (false, format!("L1 `{seq}`: {other:?}")),
            }
        }
    }
    let mut l2 = 0usize;
    for phi in &grid {
        let seq = Sequent::new(
            vec![Formula::boxed(phi.clone())],
            vec![Formula::boxed(Formula::boxed(phi.clone()))],
        );
        match search(&seq, &budget) {
            SearchVerdict::Provable(w) if w.check(Ruleset::S).is_ok() => l2 += 1,
            other => return (false, format!("L2 `{seq}`: {other:?}")),
        }
    }
    let mut l3 = 0usize;
    for phi in loeb_l3_grid() {
        let premise = Sequent::new(vec![], vec![phi.clone()]);
        let concl = Sequent::new(vec![], vec![Formula::boxed(phi.clone())]);
        match (search(&premise, &budget), search(&concl, &budget)) {
            (SearchVerdict::Provable(_), SearchVerdict::Provable(w))
                if w.check(Ruleset::S).is_ok() =>
            {
                l3 += 1
            }
            (p, c) => return (false, format!("L3 at `{phi}`: premise {p:?}, concl {c:?}")),
        }
    }
    if l1 < 20 || l2 < 20 || l3 < 20 {
        return (false, format!("grid too small: L1={l1} L2={l2} L3={l3}"));
    }

    // structural probes on the default samples
    let oracle = ConseqOracle::s(budget);
    let report = condition_suite(&oracle, &default_samples());
    let verdict_of = |name: &str| report.line(name).map(|l| l.verdict);
    if verdict_of("WEAKENING") != Some(Verdict::Holds) {
        return (false, "weakening probe did not hold".into());
    }
    if verdict_of("CONTRACTION") != Some(Verdict::Fails) {
        return (false, "contraction probe did not fail".into());
    }
    if verdict_of("BOX_CONTRACTION") != Some(Verdict::Fails) {
        return (false, "box-contraction probe did not fail".into());
    }
    // the recorded box-contraction witness pair
    let both = parse_sequent("box p, box p => box ((p * p))").unwrap();
    let one = parse_sequent("box p => box ((p * p))").unwrap();
    let w1 = search(&both, &budget);
    let w2 = search(&one, &budget);
    if !(w1.is_provable() && w2.is_refuted()) {
        return (false, format!("witness pair: `{both}` {w1:?}, `{one}` {w2:?}"));
    }
    (
        true,
        format!(
            "L1/L2/L3 instances {l1}/{l2}/{l3} provable; weakening holds; contraction and box-contraction fail with recorded witnesses"
        ),
    )
}

fn criterion_7() -> (bool, String) {
    let oracle = ConseqOracle::s(SearchBudget::default());
    let p = Formula::goedel_fp("x");

    let c2 = aps_condition_probe(&oracle, ApsCondition::C2, None, None);
    if !matches!(c2, ProbeOutcome::Holds { .. }) {
        return (false, format!("C2 probe: {c2:?}"));
    }
    for x in [parse_formula("p").unwrap(), parse_formula("bot").unwrap(), p.clone()] {
        let c4 = aps_condition_probe(&oracle, ApsCondition::C4, Some(&x), None);
        if !matches!(c4, ProbeOutcome::Holds { .. }) {
            return (false, format!("C4 probe at `{x}`: {c4:?}"));
        }
    }
    // C1 instances used by the abstract derivation
    let bt_p = induced_boxtimes(&p);
    let bt_top = induced_boxtimes(&Formula::top());
    let c1_grid = [
        (bt_p.clone(), p.clone()),
        (p.clone(), bt_p.clone()),
        (Formula::bot(), parse_formula("p").unwrap()),
        (parse_formula("p").unwrap(), Formula::top()),
    ];
    for (x, y) in &c1_grid {
        let c1 = aps_condition_probe(&oracle, ApsCondition::C1, Some(x), Some(y));
        if !matches!(c1, ProbeOutcome::Holds { .. }) {
            return (false, format!("C1 probe at (`{x}`, `{y}`): {c1:?}"));
        }
    }

    let c3 = aps_condition_probe(&oracle, ApsCondition::C3, Some(&p), Some(&p));
    let ProbeOutcome::Fails { witness } = &c3 else {
        return (false, format!("C3 probe at the fixed point: {c3:?}"));
    };
    // the three recorded facts
    let budget = SearchBudget::default();
    let f1 = Sequent::new(vec![p.clone()], vec![Formula::boxed(p.clone())]);
    let f2 = Sequent::new(vec![p.clone()], vec![bt_p]);
    let f3 = Sequent::new(vec![p.clone()], vec![bt_top]);
    if !search(&f1, &budget).is_provable()
        || !search(&f2, &budget).is_provable()
        || !search(&f3, &budget).is_refuted()
    {
        return (false, "recorded C3 facts do not hold".into());
    }

    // consistency triangle: formalized-g2 refuted plus C1/C2/C4 holding
    // forces the C3 failure just observed
    let g2_refuted = search(&formalized_g2_sequent(), &budget).is_refuted();
    if !g2_refuted {
        return (false, "triangle antecedent broken: formalized g2 not refuted".into());
    }
    (
        true,
        format!(
            "C2/C4/C1 probes hold, C3 fails at the fixed point ({} witness lines); triangle implication verified",
            witness.len()
        ),
    )
}

fn criterion_8() -> (bool, String) {
    let goal = parse_sequent("=> ~ box bot").unwrap();
    match search(&goal, &SearchBudget::default()) {
        SearchVerdict::Refuted => (true, format!("`{goal}` refuted")),
        other => (false, format!("`{goal}`: {other:?}")),
    }
}

fn criterion_9() -> (bool, String) {
    let inst = aps::aps3();
    let report = aps::check_conditions(&inst);
    for c in &report.checks {
        if !c.passed() {
            return (false, format!("fixture fails {}: {:?}", c.id.name(), c.witness));
        }
    }
    let p = inst.index_of("p").expect("fixture has p");
    let trace = match aps::g2_trace(&inst, p) {
        Ok(t) => t,
        Err(e) => return (false, format!("trace construction: {e}")),
    };
    if let Err(e) = trace.validate(&inst) {
        return (false, format!("trace validation: {e}"));
    }
    match aps::g2_consistency_check(&inst, p) {
        Ok(aps::G2Consistency::Holds) => {}
        other => return (false, format!("consistency check: {other:?}")),
    }
    match aps::uniqueness_check(&inst) {
        Ok(aps::UniquenessOutcome::Holds { fixed_points }) => {
            let btop = inst.boxtimes(inst.top);
            if fixed_points != vec![p] || !inst.equivalent(p, btop) {
                return (false, "fixture fixed point is not the inconsistency assertion".into());
            }
            if !inst.equivalent(inst.boxtimes(btop), btop) {
                return (false, "double refutability not equivalent".into());
            }
        }
        other => return (false, format!("uniqueness: {other:?}")),
    }

    // sweep over all operation tables on the three-element chain
    let tokens = ["bot", "p", "top"];
    let chain_leq = [
        ("bot".to_string(), "p".to_string()),
        ("p".to_string(), "top".to_string()),
        ("bot".to_string(), "top".to_string()),
    ];
    let mut passing = 0usize;
    let mut with_fp = 0usize;
    let mut violations = 0usize;
    for box_table in 0..27usize {
        for bt_table in 0..27usize {
            let digits = |mut n: usize| -> [usize; 3] {
                let mut d = [0; 3];
                for slot in d.iter_mut() {
                    *slot = n % 3;
                    n /= 3;
                }
                d
            };
            let bx = digits(box_table);
            let bt = digits(bt_table);
            let table = |d: &[usize; 3]| -> Vec<(String, String)> {
                (0..3).map(|k| (tokens[k].to_string(), tokens[d[k]].to_string())).collect()
            };
            let inst = aps::ApsInstance::new(
                tokens.iter().map(|s| s.to_string()).collect(),
                "top",
                "bot",
                &chain_leq,
                &table(&bx),
                &table(&bt),
            )
            .expect("chain instance is well-formed");
            let report = aps::check_conditions(&inst);
            let core = [
                ConditionId::Reflexivity,
                ConditionId::Transitivity,
                ConditionId::C1,
                ConditionId::C2,
                ConditionId::C3,
                ConditionId::C4,
                ConditionId::C5,
            ];
            if !core.iter().all(|&id| report.passes(id)) {
                continue;
            }
            passing += 1;
            let fps = inst.goedelian_fixed_points();
            if fps.is_empty() {
                continue;
            }
            with_fp += 1;
            let btop = inst.boxtimes(inst.top);
            let theorem2_ok = fps.iter().all(|&q| inst.equivalent(q, btop))
                && inst.equivalent(inst.boxtimes(btop), btop);
            if !theorem2_ok {
                violations += 1;
            }
        }
    }
    if violations > 0 {
        return (false, format!("{violations} sweep instances violate uniqueness"));
    }
    (
        true,
        format!(
            "fixture battery passed; sweep: {passing}/729 instances satisfy the conditions, {with_fp} with fixed points, zero uniqueness violations"
        ),
    )
}

fn criterion_10() -> (bool, String) {
    let proof = match compile_g2_proof(Ruleset::Sc) {
        Ok(p) => p,
        Err(e) => return (false, format!("construction failed: {e}")),
    };
    if !proof.conclusion.multiset_eq(&formalized_g2_sequent()) {
        return (false, format!("wrong root `{}`", proof.conclusion));
    }
    if let Err(e) = proof.check(Ruleset::Sc) {
        return (false, format!("fails under the extended ruleset: {e}"));
    }
    match proof.check(Ruleset::S) {
        Err(e) if e.rule == "CtrL" => (
            true,
            format!(
                "constructed proof of size {} checks with contraction and cut; cut-free check fails at its contraction node",
                proof.size()
            ),
        ),
        Err(e) => (false, format!("cut-free check failed at {} instead of the contraction", e.rule)),
        Ok(()) => (false, "proof unexpectedly checks without contraction".into()),
    }
}

/// Renders the battery as one line per criterion.
pub fn render_all(outcomes: &[CriterionOutcome]) -> String {
    let mut out = String::new();
    for o in outcomes {
        let _ = writeln!(out, "{}", o.render());
    }
    let passed = outcomes.iter().filter(|o| o.pass).count();
    let _ = writeln!(out, "{passed}/{} criteria passed", outcomes.len());
    out
}
