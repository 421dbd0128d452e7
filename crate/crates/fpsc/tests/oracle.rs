//! Cross-checks between the independent routes: the forward enumeration
//! oracle, the capped provability sweep, the exhaustive fp-free decider,
//! the loop-pruned backward searcher, and the proof checker.

use std::collections::HashSet;

use fpsc::enumerate::{
    closure, decide_fp_free, enumerate_proofs, provable_within, EnumParams, FpFreeDecider,
};
use fpsc::formula::{Formula, F};
use fpsc::parse::{parse_formula, parse_sequent};
use fpsc::proof::{Proof, RuleApp, Ruleset};
use fpsc::prover::{search, SearchBudget, SearchVerdict};
use fpsc::sequent::Sequent;
use fpsc::suite::cut_sweep_vocabulary;
use fpsc::transform::{eliminate_cut, weaken, CutProblem};

fn default_enumeration() -> Vec<Proof> {
    enumerate_proofs(&cut_sweep_vocabulary(), &EnumParams::default())
}

#[test]
fn enumeration_is_deterministic() {
    let a = default_enumeration();
    let b = default_enumeration();
    assert_eq!(a, b);
}

#[test]
fn every_enumerated_proof_checks_and_has_no_structural_rules() {
    let proofs = default_enumeration();
    assert!(proofs.len() > 500, "unexpectedly small enumeration: {}", proofs.len());
    for p in &proofs {
        p.check(Ruleset::S).unwrap_or_else(|e| panic!("{e}"));
        let mut stack = vec![p];
        while let Some(node) = stack.pop() {
            assert!(
                !matches!(node.rule, RuleApp::CtrL { .. } | RuleApp::Cut { .. }),
                "cut-free proof contains {}",
                node.rule.tag()
            );
            stack.extend(node.premises.iter());
        }
    }
}

/// Mutations that are guaranteed to break a valid proof: swapped premises
/// with distinct conclusions, designated indices moved to occurrences with a
/// different formula, and premises enlarged past the rule's requirement.
fn breaking_mutants(p: &Proof) -> Vec<Proof> {
    let mut out = Vec::new();
    let ante = &p.conclusion.ante;
    let succ = &p.conclusion.succ;
    if p.premises.len() == 2
        && !p.premises[0].conclusion.multiset_eq(&p.premises[1].conclusion)
    {
        let mut m = p.clone();
        m.premises.swap(0, 1);
        out.push(m);
    }
    let with_rule = |rule: RuleApp| -> Proof {
        Proof { conclusion: p.conclusion.clone(), rule, premises: p.premises.clone() }
    };
    match &p.rule {
        RuleApp::Init { ante: i, succ: j } => {
            for j2 in 0..succ.len() {
                if succ[j2] != succ[*j] {
                    out.push(with_rule(RuleApp::Init { ante: *i, succ: j2 }));
                }
            }
        }
        RuleApp::BotInit { ante: i } => {
            for i2 in 0..ante.len() {
                if ante[i2] != ante[*i] {
                    out.push(with_rule(RuleApp::BotInit { ante: i2 }));
                }
            }
        }
        RuleApp::FixL { prin } => {
            for i2 in 0..ante.len() {
                if ante[i2] != ante[*prin] {
                    out.push(with_rule(RuleApp::FixL { prin: i2 }));
                }
            }
        }
        RuleApp::FixR { prin } | RuleApp::ImpR { prin } => {
            for j2 in 0..succ.len() {
                if succ[j2] != succ[*prin] {
                    let rule = match &p.rule {
                        RuleApp::FixR { .. } => RuleApp::FixR { prin: j2 },
                        _ => RuleApp::ImpR { prin: j2 },
                    };
                    out.push(with_rule(rule));
                }
            }
        }
        RuleApp::ImpL { lsplit, rsplit, .. } => {
            for i2 in 0..ante.len() {
                if !matches!(ante[i2].as_ref(), Formula::Imp(..)) {
                    out.push(with_rule(RuleApp::ImpL {
                        prin: i2,
                        lsplit: lsplit.clone(),
                        rsplit: rsplit.clone(),
                    }));
                }
            }
        }
        RuleApp::BoxRule { prin, sigma, pi } => {
            for j2 in 0..succ.len() {
                if succ[j2] != succ[*prin] {
                    out.push(with_rule(RuleApp::BoxRule {
                        prin: j2,
                        sigma: sigma.clone(),
                        pi: pi.clone(),
                    }));
                }
            }
            // reclassifying a sigma occurrence as pi changes the premise
            for &k in sigma {
                let mut s2: Vec<usize> = sigma.iter().copied().filter(|&x| x != k).collect();
                let mut p2 = pi.clone();
                p2.push(k);
                p2.sort_unstable();
                s2.sort_unstable();
                out.push(with_rule(RuleApp::BoxRule { prin: *prin, sigma: s2, pi: p2 }));
            }
        }
        _ => {}
    }
    if !p.premises.is_empty() {
        let mut m = p.clone();
        m.premises[0] = weaken(&m.premises[0], &[Formula::atom("zz")], &[]);
        out.push(m);
    }
    out
}

#[test]
fn mutated_proofs_fail_checking() {
    let proofs = default_enumeration();
    let mut mutant_count = 0usize;
    for p in proofs.iter().step_by(7) {
        for m in breaking_mutants(p) {
            mutant_count += 1;
            assert!(
                m.check(Ruleset::S).is_err(),
                "mutant still checks:\noriginal {:?}\nmutant {:?}",
                p,
                m
            );
        }
    }
    assert!(mutant_count > 100, "too few mutants exercised: {mutant_count}");
}

/// All sequents over sorted multisets of `uni` within the caps.
fn all_sequents(uni: &[F], max_ante: usize, max_succ: usize) -> Vec<Sequent> {
    fn multis(uni: &[F], max: usize) -> Vec<Vec<F>> {
        let mut out = vec![vec![]];
        let mut cur = Vec::new();
        fn go(uni: &[F], from: usize, left: usize, cur: &mut Vec<F>, out: &mut Vec<Vec<F>>) {
            if left == 0 {
                return;
            }
            for k in from..uni.len() {
                cur.push(uni[k].clone());
                out.push(cur.clone());
                go(uni, k, left - 1, cur, out);
                cur.pop();
            }
        }
        go(uni, 0, max, &mut cur, &mut out);
        out
    }
    let antes = multis(uni, max_ante);
    let succs = multis(uni, max_succ);
    let mut out = Vec::new();
    for a in &antes {
        for s in &succs {
            out.push(Sequent::new(a.clone(), s.clone()));
        }
    }
    out
}

#[test]
fn enumeration_roots_match_capped_provability_sweep() {
    let vocab = vec![
        Formula::atom("p"),
        Formula::bot(),
        parse_formula("box p").unwrap(),
        parse_formula("box bot").unwrap(),
    ];
    let params = EnumParams { max_size: 4, max_ante: 2, max_succ: 2 };
    let uni = closure(&vocab, params.max_size);
    let roots: HashSet<Sequent> = enumerate_proofs(&vocab, &params)
        .iter()
        .map(|p| p.conclusion.canon())
        .collect();
    let mut checked = 0usize;
    for seq in all_sequents(&uni, params.max_ante, params.max_succ) {
        let dp = provable_within(&seq, &uni, params.max_ante, params.max_succ, params.max_size);
        let enumerated = roots.contains(&seq.canon());
        assert_eq!(
            dp.is_some(),
            enumerated,
            "dp and enumeration disagree on `{seq}`: dp={dp:?}"
        );
        // a capped proof is a proof, so search must prove every enumerated root
        if enumerated {
            assert!(
                search(&seq, &SearchBudget::default()).is_provable(),
                "search misses enumerated root `{seq}`"
            );
        }
        checked += 1;
    }
    assert!(checked > 200);
}

fn formulas_up_to(atoms: &[&str], max_size: usize) -> Vec<Vec<F>> {
    // by_size[s-1] = all fp-free formulas of size s over the atoms and bot
    let mut by_size: Vec<Vec<F>> = Vec::new();
    let mut base: Vec<F> = atoms.iter().map(|a| Formula::atom(*a)).collect();
    base.push(Formula::bot());
    by_size.push(base);
    for s in 2..=max_size {
        let mut batch = Vec::new();
        for f in &by_size[s - 2] {
            batch.push(Formula::boxed(f.clone()));
        }
        for a_size in 1..s - 1 {
            let b_size = s - 1 - a_size;
            for a in &by_size[a_size - 1] {
                for b in &by_size[b_size - 1] {
                    batch.push(Formula::imp(a.clone(), b.clone()));
                }
            }
        }
        by_size.push(batch);
    }
    by_size
}

/// Exhaustive agreement between the budgeted searcher and the measure-based
/// decider on all fp-free sequents over {bot, p, q} with bounded total size.
/// The searcher must never return Unknown there.
#[test]
fn fp_free_completeness_sweep() {
    let total_cap = 7usize;
    let by_size = formulas_up_to(&["p", "q"], total_cap - 1);
    // multisets of formulas with a total-size budget, sorted generation
    let mut pool: Vec<(F, usize)> = Vec::new();
    for (s, batch) in by_size.iter().enumerate() {
        for f in batch {
            pool.push((f.clone(), s + 1));
        }
    }
    fn multis(
        pool: &[(F, usize)],
        from: usize,
        budget: usize,
        cur: &mut Vec<F>,
        out: &mut Vec<(Vec<F>, usize)>,
        used: usize,
    ) {
        out.push((cur.clone(), used));
        for k in from..pool.len() {
            let (f, s) = &pool[k];
            if *s <= budget {
                cur.push(f.clone());
                multis(pool, k, budget - s, cur, out, used + s);
                cur.pop();
            }
        }
    }
    let mut sides = Vec::new();
    multis(&pool, 0, total_cap, &mut Vec::new(), &mut sides, 0);

    let mut decider = FpFreeDecider::new();
    let budget = SearchBudget::default();
    let mut agreements = 0usize;
    for (ante, a_used) in &sides {
        for (succ, s_used) in &sides {
            if a_used + s_used > total_cap || (ante.is_empty() && succ.is_empty()) {
                continue;
            }
            let seq = Sequent::new(ante.clone(), succ.clone());
            let expected = decider.decide(&seq).expect("fp-free by construction");
            match search(&seq, &budget) {
                SearchVerdict::Provable(w) => {
                    assert!(expected, "search proves `{seq}` but the decider refutes it");
                    w.check(Ruleset::S).unwrap_or_else(|e| panic!("witness for `{seq}`: {e}"));
                }
                SearchVerdict::Refuted => {
                    assert!(!expected, "search refutes `{seq}` but the decider proves it");
                }
                SearchVerdict::Unknown => panic!("search returned Unknown on fp-free `{seq}`"),
            }
            agreements += 1;
        }
    }
    println!("fp-free agreement on {agreements} sequents");
    assert!(agreements > 10_000, "sweep unexpectedly small: {agreements}");
}

/// For each refuted acceptance sequent, the capped enumeration space up to
/// size 8 over its reachable closure contains no proof of it.
#[test]
fn loop_pruning_soundness_at_size_eight() {
    let goals = [
        "box (box bot -> bot) => box bot",
        "=> fp $x. box $x",
        "fp $x. box $x => fp $y. box $y",
        "=> ~ box bot",
        "box p => box ((p * p))",
        "fp $x. box ($x -> bot) => box (top -> bot)",
    ];
    for text in goals {
        let goal = parse_sequent(text).unwrap();
        let mut vocab: Vec<F> = goal.ante.clone();
        vocab.extend(goal.succ.iter().cloned());
        let uni = closure(&vocab, 8);
        assert_eq!(
            search(&goal, &SearchBudget::default()),
            SearchVerdict::Refuted,
            "{text}"
        );
        assert_eq!(
            provable_within(&goal, &uni, 3, 3, 8),
            None,
            "capped sweep found a proof of `{text}`"
        );
    }
}

/// Composing searched witnesses through cut elimination realizes
/// transitivity of the consequence relation.
#[test]
fn eliminate_cut_composes_provable_chains() {
    let chains = [
        ("bot", "top -> bot", "bot"),
        ("box p", "box box p", "box box box p"),
        ("fp $x. box ($x -> bot)", "box ((fp $x. box ($x -> bot)) -> bot)", "box (fp $x. box ($x -> bot))"),
        ("p", "(p * p) -> p", "top"),
    ];
    let budget = SearchBudget::default();
    for (a, b, c) in chains {
        let a = parse_formula(a).unwrap();
        let b = parse_formula(b).unwrap();
        let c = parse_formula(c).unwrap();
        let ab = Sequent::new(vec![a.clone()], vec![b.clone()]);
        let bc = Sequent::new(vec![b.clone()], vec![c.clone()]);
        let w1 = match search(&ab, &budget) {
            SearchVerdict::Provable(w) => w,
            other => panic!("`{ab}` not provable: {other:?}"),
        };
        let w2 = match search(&bc, &budget) {
            SearchVerdict::Provable(w) => w,
            other => panic!("`{bc}` not provable: {other:?}"),
        };
        let out = eliminate_cut(&CutProblem { left: w1, right: w2, left_occ: 0, right_occ: 0 })
            .unwrap_or_else(|e| panic!("composition for `{a}` |- `{c}` failed: {e}"));
        assert!(out
            .conclusion
            .multiset_eq(&Sequent::new(vec![a.clone()], vec![c.clone()])));
    }
}

/// The fp-principal cut example lands inside the enumeration of its root.
#[test]
fn cut_result_is_a_member_of_the_enumeration() {
    let fp = parse_formula("fp $x. bot -> box $x").unwrap();
    let unf = Formula::unfold(&fp).unwrap();
    let boxed_fp = Formula::boxed(fp.clone());

    let leaf = Proof::leaf_bot(vec![Formula::bot()], vec![boxed_fp], 0);
    let imp = Proof::by_imp_r(leaf, 0, 0);
    let left = Proof::by_fix_r(imp, 0, fp.clone());

    let leaf2 = Proof::leaf_bot(vec![unf.clone(), Formula::bot()], vec![Formula::bot()], 1);
    let imp2 = Proof::by_imp_r(leaf2, 1, 0);
    let right = Proof::by_fix_l(imp2, 0, fp);

    let out = eliminate_cut(&CutProblem { left, right, left_occ: 0, right_occ: 0 }).unwrap();
    assert!(out.size() <= 5);
    let target = parse_sequent("=> bot -> bot").unwrap();
    assert!(out.conclusion.multiset_eq(&target));

    let vocab = vec![parse_formula("bot -> bot").unwrap()];
    let params = EnumParams { max_size: 5, max_ante: 2, max_succ: 2 };
    let candidates: Vec<Proof> = enumerate_proofs(&vocab, &params)
        .into_iter()
        .filter(|p| p.conclusion.multiset_eq(&target))
        .collect();
    assert!(
        candidates.contains(&out),
        "produced tree not among the {} enumerated proofs of `{target}`",
        candidates.len()
    );
}

#[test]
fn searcher_decides_remaining_named_sequents() {
    let budget = SearchBudget::default();
    // fixed-point unfolding equivalences for the refutability point
    let p = Formula::goedel_fp("x");
    let u = Formula::unfold(&p).unwrap();
    for (a, b) in [(p.clone(), u.clone()), (u, p)] {
        let seq = Sequent::new(vec![a], vec![b]);
        assert!(search(&seq, &budget).is_provable(), "`{seq}`");
    }
    let dec = |s: &str| search(&parse_sequent(s).unwrap(), &budget);
    assert!(dec("box (p -> q), box p => box q").is_provable());
    assert!(dec("box p, box p => box ((p * p))").is_provable());
    assert!(dec("box p => box ((p * p))").is_refuted());
}

/// The searcher against the capped sweep on fixed-point sequents: a capped
/// proof must be found, and a refutation must empty the capped space.
#[test]
fn search_agrees_with_capped_sweep_on_fp_sequents() {
    let vocab = vec![
        Formula::henkin_fp("x"),
        Formula::goedel_fp("x"),
        Formula::bot(),
        Formula::atom("p"),
    ];
    let uni = closure(&vocab, 6);
    let budget = SearchBudget::default();
    let mut provable = 0usize;
    let mut refuted = 0usize;
    for seq in all_sequents(&uni, 2, 2) {
        let dp = provable_within(&seq, &uni, 2, 2, 6);
        match search(&seq, &budget) {
            SearchVerdict::Provable(w) => {
                w.check(Ruleset::S).unwrap_or_else(|e| panic!("witness for `{seq}`: {e}"));
                provable += 1;
            }
            SearchVerdict::Refuted => {
                assert_eq!(dp, None, "search refutes `{seq}` but the capped sweep proves it");
                refuted += 1;
            }
            SearchVerdict::Unknown => {
                assert_eq!(dp, None, "budget trip on `{seq}` hides a capped proof");
            }
        }
        if let Some(min) = dp {
            assert!(
                search(&seq, &budget).is_provable(),
                "capped proof of size {min} exists for `{seq}` but search does not prove it"
            );
        }
    }
    println!("fp sweep: {provable} provable, {refuted} refuted");
    assert!(provable > 500 && refuted > 200);
}

#[test]
fn decide_fp_free_matches_enumeration_roots_on_small_vocab() {
    let vocab = vec![Formula::atom("p"), Formula::bot()];
    let params = EnumParams { max_size: 5, max_ante: 2, max_succ: 2 };
    let roots: HashSet<Sequent> = enumerate_proofs(&vocab, &params)
        .iter()
        .map(|p| p.conclusion.canon())
        .collect();
    // every enumerated root is provable outright
    let mut decider = FpFreeDecider::new();
    for seq in &roots {
        assert_eq!(decider.decide(seq), Some(true), "`{seq}`");
    }
    let _ = decide_fp_free(&parse_sequent("p => p").unwrap());
}
