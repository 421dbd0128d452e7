//! Structure-level sweeps: condition verdicts are intrinsic to the order
//! structure, not to the carrier's token names.

use fpsc::aps::{check_conditions, ApsInstance};

fn chain_instance(tokens: [&str; 3], bx: [usize; 3], bt: [usize; 3]) -> ApsInstance {
    let leq: Vec<(String, String)> = vec![
        (tokens[0].into(), tokens[1].into()),
        (tokens[1].into(), tokens[2].into()),
        (tokens[0].into(), tokens[2].into()),
    ];
    let table = |d: &[usize; 3]| -> Vec<(String, String)> {
        (0..3).map(|k| (tokens[k].to_string(), tokens[d[k]].to_string())).collect()
    };
    ApsInstance::new(
        tokens.iter().map(|s| s.to_string()).collect(),
        tokens[2],
        tokens[0],
        &leq,
        &table(&bx),
        &table(&bt),
    )
    .expect("chain instance is well-formed")
}

fn digits(mut n: usize) -> [usize; 3] {
    let mut d = [0; 3];
    for slot in d.iter_mut() {
        *slot = n % 3;
        n /= 3;
    }
    d
}

fn monotone(d: &[usize; 3]) -> bool {
    d[0] <= d[1] && d[1] <= d[2]
}

fn antitone(d: &[usize; 3]) -> bool {
    d[0] >= d[1] && d[1] >= d[2]
}

/// The chain 0 <= 1 <= 2 with every monotone box table and antitone
/// boxtimes table, checked under two different token alphabets: the
/// per-condition pass/fail verdicts must coincide.
#[test]
fn chain_verdicts_are_stable_under_relabeling() {
    let mut swept = 0usize;
    for bx_code in 0..27usize {
        let bx = digits(bx_code);
        if !monotone(&bx) {
            continue;
        }
        for bt_code in 0..27usize {
            let bt = digits(bt_code);
            if !antitone(&bt) {
                continue;
            }
            let original = chain_instance(["bot", "p", "top"], bx, bt);
            let relabeled = chain_instance(["zero", "mid", "one"], bx, bt);
            let a = check_conditions(&original);
            let b = check_conditions(&relabeled);
            for (ca, cb) in a.checks.iter().zip(b.checks.iter()) {
                assert_eq!(ca.id, cb.id);
                assert_eq!(
                    ca.passed(),
                    cb.passed(),
                    "{} verdict changed under relabeling (box {bx:?}, boxtimes {bt:?})",
                    ca.id.name()
                );
            }
            assert_eq!(
                a.box_bot_equals_boxtimes_top, b.box_bot_equals_boxtimes_top,
                "informational identity changed under relabeling"
            );
            // fixed-point sets correspond positionally
            assert_eq!(
                original.goedelian_fixed_points(),
                relabeled.goedelian_fixed_points()
            );
            swept += 1;
        }
    }
    // 10 monotone box tables times 10 antitone boxtimes tables
    assert_eq!(swept, 100);
}
