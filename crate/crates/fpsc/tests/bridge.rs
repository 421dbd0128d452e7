//! Bridge-level checks: the condition suite's stable report, the extended
//! ruleset's constructive recoveries, and the induced-structure probes.

use fpsc::conseq::{
    aps_condition_probe, compile_g2_proof_with, condition_suite, default_samples,
    uniqueness_failure_demo, ApsCondition, ConseqOracle, OracleTag, ProbeOutcome, Verdict,
};
use fpsc::formula::Formula;
use fpsc::parse::parse_formula;
use fpsc::prover::SearchBudget;
use fpsc::proof::{Proof, RuleApp, Ruleset};

fn s_oracle() -> ConseqOracle {
    ConseqOracle::s(SearchBudget::default())
}

fn sc_oracle() -> ConseqOracle {
    ConseqOracle::sc(SearchBudget::default())
}

/// The line-oriented report for the base system on the default samples is
/// frozen for golden-file comparison.
#[test]
fn base_system_report_is_stable() {
    let report = condition_suite(&s_oracle(), &default_samples());
    let expected = "\
I1 holds-on-samples
I2 holds-on-samples
I3 holds-on-samples
I4 holds-on-samples
CONJ holds-on-samples
IMP_MODUS_PONENS holds-on-samples
IMP_CONGRUENCE holds-on-samples
IMP_CONTRAPOSITION holds-on-samples
L1 holds-on-samples
L2 holds-on-samples
L3 holds-on-samples
LOEB_FORM_II holds-on-samples
LOEB_FORM_III holds-on-samples
CONTRACTION fails [p, p => (p -> p -> bot) -> bot provable | p => (p -> p -> bot) -> bot refuted]
WEAKENING holds-on-samples
BOX_CONTRACTION fails [box p, box p => box ((p -> p -> bot) -> bot) provable | box p => box ((p -> p -> bot) -> bot) refuted]
BOX_WEAKENING holds-on-samples
";
    assert_eq!(report.to_string(), expected);
}

#[test]
fn base_system_report_verdicts() {
    let report = condition_suite(&s_oracle(), &default_samples());
    for name in [
        "I1", "I2", "I3", "I4", "CONJ", "IMP_MODUS_PONENS", "IMP_CONGRUENCE",
        "IMP_CONTRAPOSITION", "L1", "L2", "L3", "LOEB_FORM_II", "LOEB_FORM_III",
        "WEAKENING", "BOX_WEAKENING",
    ] {
        let line = report.line(name).unwrap();
        assert_eq!(line.verdict, Verdict::Holds, "{name}");
        assert!(line.informative > 0, "{name} had no informative instance");
    }
    for name in ["CONTRACTION", "BOX_CONTRACTION"] {
        assert_eq!(report.line(name).unwrap().verdict, Verdict::Fails, "{name}");
    }
}

/// With explicit structural rules, contraction instances are recovered by a
/// contraction node and transitivity by an explicit cut.
#[test]
fn extended_system_recovers_contraction_and_cut() {
    let report = condition_suite(&sc_oracle(), &default_samples());
    assert_eq!(report.line("CONTRACTION").unwrap().verdict, Verdict::Holds);
    assert_eq!(report.line("BOX_CONTRACTION").unwrap().verdict, Verdict::Holds);
    assert_eq!(report.line("I2").unwrap().verdict, Verdict::Holds);
    assert_eq!(report.line("I1").unwrap().verdict, Verdict::Holds);
}

#[test]
fn extended_system_report_is_stable() {
    let report = condition_suite(&sc_oracle(), &default_samples());
    let expected = "\
I1 holds-on-samples
I2 holds-on-samples
I3 holds-on-samples
I4 holds-on-samples
CONJ holds-on-samples
IMP_MODUS_PONENS holds-on-samples
IMP_CONGRUENCE holds-on-samples
IMP_CONTRAPOSITION holds-on-samples
L1 holds-on-samples
L2 holds-on-samples
L3 holds-on-samples
LOEB_FORM_II holds-on-samples
LOEB_FORM_III holds-on-samples
CONTRACTION holds-on-samples
WEAKENING holds-on-samples
BOX_CONTRACTION holds-on-samples
BOX_WEAKENING holds-on-samples
";
    assert_eq!(report.to_string(), expected);
}

/// The compiled derivation survives the text format unchanged, contraction
/// and cut nodes included.
#[test]
fn compiled_derivation_round_trips_through_text() {
    let proof = compile_g2_proof_with(Ruleset::Sc, "x").unwrap();
    let text = fpsc::proof_to_text(&proof);
    let back = fpsc::proof_from_text(&text).unwrap();
    assert_eq!(proof, back);
    assert!(back.check(Ruleset::Sc).is_ok());
}

/// The induced-structure conditions hold in the extended system on
/// instantiations whose premises the searcher can settle.
#[test]
fn induced_conditions_hold_with_contraction_present() {
    let oracle = sc_oracle();
    let bot = Formula::bot();
    let p = parse_formula("p").unwrap();
    let top = Formula::top();
    let c1_grid = [(bot.clone(), p.clone()), (bot.clone(), top.clone()), (p.clone(), top.clone())];
    for (x, y) in &c1_grid {
        let out = aps_condition_probe(&oracle, ApsCondition::C1, Some(x), Some(y));
        assert!(matches!(out, ProbeOutcome::Holds { .. }), "C1 at (`{x}`, `{y}`): {out:?}");
    }
    let out = aps_condition_probe(&oracle, ApsCondition::C2, None, None);
    assert!(matches!(out, ProbeOutcome::Holds { .. }), "C2: {out:?}");
    for y in [&p, &top, &bot] {
        let out = aps_condition_probe(&oracle, ApsCondition::C3, Some(&bot), Some(y));
        assert!(matches!(out, ProbeOutcome::Holds { .. }), "C3 at (bot, `{y}`): {out:?}");
    }
    for x in [&p, &bot, &top] {
        let out = aps_condition_probe(&oracle, ApsCondition::C4, Some(x), None);
        assert!(matches!(out, ProbeOutcome::Holds { .. }), "C4 at `{x}`: {out:?}");
    }
}

#[test]
fn single_fixed_point_demo_is_trivial() {
    let fam = uniqueness_failure_demo(1, &SearchBudget::default());
    assert!(fam.failures.is_empty());
    assert_eq!(fam.points.len(), 1);
    assert_eq!(fam.equivalences.len(), 2);
    assert!(fam.cross_refuted.is_empty());
}

/// The compiled derivation only depends on the fixed-point variable through
/// its internal subformulas; the root sequent stays the same.
#[test]
fn alternative_fixed_point_variable_changes_internals_only() {
    let with_x = compile_g2_proof_with(Ruleset::Sc, "x").unwrap();
    let with_y = compile_g2_proof_with(Ruleset::Sc, "y").unwrap();
    assert_eq!(with_x.conclusion, with_y.conclusion);
    assert_ne!(with_x, with_y);
    assert!(with_y.check(Ruleset::Sc).is_ok());

    fn mentions(p: &Proof, f: &fpsc::F) -> bool {
        fn in_formula(g: &Formula, f: &fpsc::F) -> bool {
            if *g == **f {
                return true;
            }
            match g {
                Formula::Imp(a, b) => in_formula(a, f) || in_formula(b, f),
                Formula::Box(a) | Formula::Fp(_, a) => in_formula(a, f),
                _ => false,
            }
        }
        p.conclusion.ante.iter().chain(p.conclusion.succ.iter()).any(|g| in_formula(g, f))
            || p.premises.iter().any(|q| mentions(q, f))
    }
    assert!(mentions(&with_y, &Formula::goedel_fp("y")));
    assert!(!mentions(&with_y, &Formula::goedel_fp("x")));
}

/// Every failure verdict in the base-system report rests on complete
/// refutations: rerunning the recorded sequents confirms provable/refuted,
/// never unknown.
#[test]
fn failure_verdicts_are_backed_by_refutations() {
    let report = condition_suite(&s_oracle(), &default_samples());
    assert_eq!(report.oracle, OracleTag::S);
    for line in &report.lines {
        assert_ne!(line.verdict, Verdict::Inconclusive, "{} inconclusive", line.name);
        if line.verdict == Verdict::Fails {
            for w in &line.witnesses {
                assert!(
                    w.ends_with("provable") || w.ends_with("refuted"),
                    "witness `{w}` carries no definite verdict"
                );
            }
        }
    }
}

#[test]
fn contraction_recovery_node_is_a_contraction() {
    // direct shape check of the constructive recovery
    let p = parse_formula("p").unwrap();
    let conj = Formula::conj(p.clone(), p.clone());
    let oracle = sc_oracle();
    let premise = vec![p.clone(), p.clone()];
    let fpsc::conseq::Judgment::Yes(w) = oracle.judge(&premise, &conj) else {
        panic!("premise should be provable");
    };
    let positions: Vec<usize> = w
        .conclusion
        .ante
        .iter()
        .enumerate()
        .filter(|(_, f)| **f == p)
        .map(|(k, _)| k)
        .collect();
    let ctr = Proof::by_ctr_l(w, positions[0], positions[1]);
    assert!(matches!(ctr.rule, RuleApp::CtrL { .. }));
    assert!(ctr.check(Ruleset::Sc).is_ok());
    assert!(ctr.check(Ruleset::S).is_err());
}
