//! Property tests for the syntax layer and the structural transformations.

use std::sync::OnceLock;

use proptest::prelude::*;

use fpsc::enumerate::{enumerate_proofs, EnumParams};
use fpsc::formula::{Formula, F};
use fpsc::parse::parse_formula;
use fpsc::proof::{Proof, RuleApp, Ruleset};
use fpsc::sequent::Sequent;
use fpsc::suite::cut_sweep_vocabulary;
use fpsc::transform::weaken;

fn arb_formula() -> impl Strategy<Value = F> {
    let leaf = prop_oneof![
        Just(Formula::bot()),
        prop_oneof![Just("p"), Just("q"), Just("r")].prop_map(Formula::atom),
        prop_oneof![Just("x"), Just("y")].prop_map(Formula::var),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            inner.clone().prop_map(Formula::boxed),
            (prop_oneof![Just("x"), Just("y")], inner)
                .prop_map(|(v, body)| Formula::fp(v, Formula::boxed(body))
                    .expect("boxed body is modalized")),
        ]
    })
}

fn arb_closed_formula() -> impl Strategy<Value = F> {
    let leaf = prop_oneof![
        Just(Formula::bot()),
        prop_oneof![Just("p"), Just("q")].prop_map(Formula::atom),
        Just(Formula::henkin_fp("x")),
        Just(Formula::goedel_fp("x")),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            inner.prop_map(Formula::boxed),
        ]
    })
}

/// Formulas whose free variables are contained in {x}.
fn arb_x_formula() -> impl Strategy<Value = F> {
    let leaf = prop_oneof![
        Just(Formula::bot()),
        Just(Formula::atom("p")),
        Just(Formula::var("x")),
    ];
    leaf.prop_recursive(4, 20, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            inner.prop_map(Formula::boxed),
        ]
    })
}

proptest! {
    #[test]
    fn print_parse_round_trip(f in arb_formula()) {
        let printed = f.to_string();
        let back = parse_formula(&printed).unwrap();
        prop_assert_eq!(f, back);
    }

    #[test]
    fn substitution_of_closed_formula_closes(a in arb_x_formula(), b in arb_closed_formula()) {
        let out = Formula::substitute(&a, &b, "x").unwrap();
        prop_assert!(out.is_closed(), "{out} has free variables");
    }

    #[test]
    fn fp_constructor_outputs_revalidate(body in arb_x_formula()) {
        let f = Formula::fp("x", Formula::boxed(body)).unwrap();
        match f.as_ref() {
            Formula::Fp(v, inner) => prop_assert!(inner.is_modalized(v)),
            _ => prop_assert!(false),
        }
        prop_assert!(f.is_closed() || f.free_vars().iter().all(|v| v != "x"));
    }

    #[test]
    fn unguarded_fp_rejected(v in prop_oneof![Just("x"), Just("y")]) {
        prop_assert!(Formula::fp(v, Formula::var(v)).is_err());
    }
}

fn fixture() -> &'static Vec<Proof> {
    static FIXTURE: OnceLock<Vec<Proof>> = OnceLock::new();
    FIXTURE.get_or_init(|| enumerate_proofs(&cut_sweep_vocabulary(), &EnumParams::default()))
}

fn apply_perm<T: Clone>(v: &[T], perm: &[usize]) -> Vec<T> {
    perm.iter().map(|&k| v[k].clone()).collect()
}

/// Reindexes the root annotation through a permutation of the sides.
/// Written independently of any library helper.
fn permute_root(p: &Proof, ante_perm: &[usize], succ_perm: &[usize]) -> Proof {
    let conclusion = Sequent::new(
        apply_perm(&p.conclusion.ante, ante_perm),
        apply_perm(&p.conclusion.succ, succ_perm),
    );
    // new position of old index k
    let a = |k: usize| ante_perm.iter().position(|&x| x == k).unwrap();
    let s = |k: usize| succ_perm.iter().position(|&x| x == k).unwrap();
    let sorted = |mut v: Vec<usize>| {
        v.sort_unstable();
        v
    };
    let rule = match &p.rule {
        RuleApp::Init { ante, succ } => RuleApp::Init { ante: a(*ante), succ: s(*succ) },
        RuleApp::BotInit { ante } => RuleApp::BotInit { ante: a(*ante) },
        RuleApp::FixL { prin } => RuleApp::FixL { prin: a(*prin) },
        RuleApp::FixR { prin } => RuleApp::FixR { prin: s(*prin) },
        RuleApp::ImpR { prin } => RuleApp::ImpR { prin: s(*prin) },
        RuleApp::ImpL { prin, lsplit, rsplit } => RuleApp::ImpL {
            prin: a(*prin),
            lsplit: sorted(lsplit.iter().map(|&k| a(k)).collect()),
            rsplit: sorted(rsplit.iter().map(|&k| s(k)).collect()),
        },
        RuleApp::BoxRule { prin, sigma, pi } => RuleApp::BoxRule {
            prin: s(*prin),
            sigma: sorted(sigma.iter().map(|&k| a(k)).collect()),
            pi: sorted(pi.iter().map(|&k| a(k)).collect()),
        },
        other => other.clone(),
    };
    Proof { conclusion, rule, premises: p.premises.clone() }
}

proptest! {
    #[test]
    fn weakening_never_grows_and_still_checks(
        idx in 0usize..4096,
        adds in proptest::collection::vec(0usize..5, 0..3),
        adds_r in proptest::collection::vec(0usize..5, 0..3),
    ) {
        let proofs = fixture();
        let p = &proofs[idx % proofs.len()];
        let vocab = cut_sweep_vocabulary();
        let add_l: Vec<F> = adds.iter().map(|&k| vocab[k].clone()).collect();
        let add_r: Vec<F> = adds_r.iter().map(|&k| vocab[k].clone()).collect();
        let w = weaken(p, &add_l, &add_r);
        prop_assert!(w.size() <= p.size());
        prop_assert!(w.check(Ruleset::S).is_ok());
        prop_assert_eq!(w.conclusion.ante.len(), p.conclusion.ante.len() + add_l.len());
    }

    #[test]
    fn proof_files_round_trip(idx in 0usize..4096) {
        let proofs = fixture();
        let p = &proofs[idx % proofs.len()];
        let text = fpsc::proof_to_text(p);
        let back = fpsc::proof_from_text(&text).unwrap();
        prop_assert_eq!(p, &back);
    }

    #[test]
    fn permuted_nodes_preserve_the_verdict(
        idx in 0usize..4096,
        which in 0usize..16,
        seed in 0u64..1000,
    ) {
        let proofs = fixture();
        let p = &proofs[idx % proofs.len()];
        // deterministic pseudo-permutations from the seed
        let perm = |n: usize, salt: u64| -> Vec<usize> {
            let mut v: Vec<usize> = (0..n).collect();
            let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(salt);
            for i in (1..n).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let j = (state >> 33) as usize % (i + 1);
                v.swap(i, j);
            }
            v
        };
        // permute the `which`-th node in preorder, not just the root
        fn permute_nth(
            p: &Proof,
            n: &mut usize,
            target: usize,
            perm: &dyn Fn(usize, u64) -> Vec<usize>,
        ) -> Proof {
            if *n == target {
                let ante_perm = perm(p.conclusion.ante.len(), 1);
                let succ_perm = perm(p.conclusion.succ.len(), 2);
                return permute_root(p, &ante_perm, &succ_perm);
            }
            let mut out = p.clone();
            for q in out.premises.iter_mut() {
                *n += 1;
                *q = permute_nth(q, n, target, perm);
            }
            out
        }
        let target = which % p.size();
        let permuted = permute_nth(p, &mut 0, target, &perm);
        prop_assert!(permuted.check(Ruleset::S).is_ok());
    }
}
