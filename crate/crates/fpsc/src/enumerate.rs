//! Forward proof enumeration and related oracles.
//!
//! `enumerate_proofs` generates, bottom-up, every valid cut-free proof of
//! size at most `max_size` whose sequents draw their formulas from the
//! closure of a vocabulary under closed subformulas and fp-unfolding, with
//! both sequent sides bounded by the context caps in `EnumParams`. It is the
//! independent oracle against which the checker, the transformations and the
//! backward prover are tested.

use std::collections::{HashMap, HashSet, VecDeque};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::formula::{Formula, F};
use crate::proof::{BoxClass, Proof};
use crate::sequent::{replace_at, Sequent};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumParams {
    pub max_size: usize,
    /// Cap on the antecedent length of every sequent in a generated proof.
    pub max_ante: usize,
    /// Cap on the succedent length.
    pub max_succ: usize,
}

impl Default for EnumParams {
    fn default() -> Self {
        EnumParams { max_size: 3, max_ante: 2, max_succ: 2 }
    }
}

/// Closed-formula closure of `vocab` under subformulas and one-step
/// fp-unfolding, iterated `rounds` times. Sorted and deduplicated.
pub fn closure(vocab: &[F], rounds: usize) -> Vec<F> {
    let mut set: HashSet<F> = vocab.iter().filter(|f| f.is_closed()).cloned().collect();
    for _ in 0..rounds {
        let mut fresh = Vec::new();
        for f in &set {
            collect_closed_subformulas(f, &mut fresh);
            if matches!(f.as_ref(), Formula::Fp(..)) {
                fresh.push(Formula::unfold(f).expect("closed fp unfolds"));
            }
        }
        let before = set.len();
        set.extend(fresh);
        if set.len() == before {
            break;
        }
    }
    let mut out: Vec<F> = set.into_iter().collect();
    out.sort();
    out
}

fn collect_closed_subformulas(f: &F, out: &mut Vec<F>) {
    if f.is_closed() {
        out.push(f.clone());
    }
    match f.as_ref() {
        Formula::Imp(a, b) => {
            collect_closed_subformulas(a, out);
            collect_closed_subformulas(b, out);
        }
        Formula::Box(a) | Formula::Fp(_, a) => collect_closed_subformulas(a, out),
        _ => {}
    }
}

/// Sorted multisets over `uni` with sizes in `min..=max`.
fn multisets(uni: &[F], min: usize, max: usize) -> Vec<Vec<F>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(uni: &[F], from: usize, left: usize, cur: &mut Vec<F>, out: &mut Vec<Vec<F>>) {
        out.push(cur.clone());
        if left == 0 {
            return;
        }
        for k in from..uni.len() {
            cur.push(uni[k].clone());
            go(uni, k, left - 1, cur, out);
            cur.pop();
        }
    }
    go(uni, 0, max, &mut cur, &mut out);
    out.retain(|m| m.len() >= min);
    out.sort();
    out.dedup();
    out
}

pub fn enumerate_proofs(vocab: &[F], params: &EnumParams) -> Vec<Proof> {
    let uni = closure(vocab, params.max_size);
    let fp_formulas: Vec<F> = uni
        .iter()
        .filter(|f| matches!(f.as_ref(), Formula::Fp(..)))
        .cloned()
        .collect();
    let imp_formulas: Vec<F> = uni
        .iter()
        .filter(|f| matches!(f.as_ref(), Formula::Imp(..)))
        .cloned()
        .collect();
    let boxed_set: HashSet<F> = uni
        .iter()
        .filter(|f| matches!(f.as_ref(), Formula::Box(_)))
        .cloned()
        .collect();

    let mut by_size: Vec<Vec<Proof>> = Vec::new();
    by_size.push(leaves(&uni, params));

    for size in 2..=params.max_size {
        let mut batch: HashSet<Proof> = HashSet::new();
        // unary rules over proofs of size-1
        for p in &by_size[size - 2] {
            unary_extensions(p, &uni, &fp_formulas, &imp_formulas, &boxed_set, params, &mut batch);
        }
        // left implication over pairs of smaller proofs
        for k0 in 1..size - 1 {
            let k1 = size - 1 - k0;
            for p0 in &by_size[k0 - 1] {
                for p1 in &by_size[k1 - 1] {
                    imp_l_extensions(p0, p1, &imp_formulas, params, &mut batch);
                }
            }
        }
        let mut batch: Vec<Proof> = batch.into_iter().collect();
        batch.sort();
        by_size.push(batch);
    }

    by_size.into_iter().flatten().collect()
}

fn leaves(uni: &[F], params: &EnumParams) -> Vec<Proof> {
    let mut out = Vec::new();
    let antes = multisets(uni, 1, params.max_ante);
    let succs = multisets(uni, 1, params.max_succ);
    for ante in &antes {
        for succ in &succs {
            for i in 0..ante.len() {
                for j in 0..succ.len() {
                    if ante[i] == succ[j] {
                        out.push(Proof::leaf_init(ante.clone(), succ.clone(), i, j));
                    }
                }
            }
        }
    }
    let succs0 = multisets(uni, 0, params.max_succ);
    for ante in &antes {
        for succ in &succs0 {
            for i in 0..ante.len() {
                if *ante[i] == Formula::Bot {
                    out.push(Proof::leaf_bot(ante.clone(), succ.clone(), i));
                }
            }
        }
    }
    out.sort();
    out
}

fn unary_extensions(
    p: &Proof,
    uni: &[F],
    fp_formulas: &[F],
    imp_formulas: &[F],
    boxed_set: &HashSet<F>,
    params: &EnumParams,
    out: &mut HashSet<Proof>,
) {
    let ante = &p.conclusion.ante;
    let succ = &p.conclusion.succ;
    for g in fp_formulas {
        let u = Formula::unfold(g).expect("closed fp unfolds");
        for i in 0..ante.len() {
            if ante[i] == u {
                out.insert(Proof::by_fix_l(p.clone(), i, g.clone()));
            }
        }
        for j in 0..succ.len() {
            if succ[j] == u {
                out.insert(Proof::by_fix_r(p.clone(), j, g.clone()));
            }
        }
    }
    for imp in imp_formulas {
        let Formula::Imp(a, b) = imp.as_ref() else { unreachable!() };
        for i in 0..ante.len() {
            if ante[i] == *a {
                for j in 0..succ.len() {
                    if succ[j] == *b {
                        out.insert(Proof::by_imp_r(p.clone(), i, j));
                    }
                }
            }
        }
    }
    // box rule: single-succedent premise, every sigma/pi classification of
    // the antecedent, every weakening context within the caps
    if succ.len() == 1 && boxed_set.contains(&Formula::boxed(succ[0].clone())) {
        let mut options: Vec<Vec<BoxClass>> = Vec::new();
        for f in ante.iter() {
            let mut opts = Vec::new();
            if boxed_set.contains(&Formula::boxed(f.clone())) {
                opts.push(BoxClass::Sigma);
            }
            if matches!(f.as_ref(), Formula::Box(_)) {
                opts.push(BoxClass::Pi);
            }
            if opts.is_empty() {
                return; // some occurrence cannot be carried into a box node
            }
            options.push(opts);
        }
        let mut assignments = vec![Vec::new()];
        for opts in &options {
            let mut next = Vec::new();
            for asg in &assignments {
                for &o in opts {
                    let mut a = asg.clone();
                    a.push(o);
                    next.push(a);
                }
            }
            assignments = next;
        }
        for classes in &assignments {
            if ante.len() > params.max_ante {
                continue;
            }
            for wl in multisets(uni, 0, params.max_ante - ante.len()) {
                for wr in multisets(uni, 0, params.max_succ - 1) {
                    out.insert(Proof::by_box(p.clone(), classes, wl.clone(), wr));
                }
            }
        }
    }
}

fn imp_l_extensions(
    p0: &Proof,
    p1: &Proof,
    imp_formulas: &[F],
    params: &EnumParams,
    out: &mut HashSet<Proof>,
) {
    let new_ante = p0.conclusion.ante.len() + p1.conclusion.ante.len();
    let new_succ = p0.conclusion.succ.len() + p1.conclusion.succ.len();
    if new_ante > params.max_ante || new_succ == 0 || new_succ - 1 > params.max_succ {
        return;
    }
    for imp in imp_formulas {
        let Formula::Imp(a, b) = imp.as_ref() else { unreachable!() };
        for i0 in 0..p0.conclusion.ante.len() {
            if p0.conclusion.ante[i0] != *b {
                continue;
            }
            for j1 in 0..p1.conclusion.succ.len() {
                if p1.conclusion.succ[j1] == *a {
                    out.insert(Proof::by_imp_l(p0.clone(), i0, p1.clone(), j1));
                }
            }
        }
    }
}

/// Minimal proof size of `goal` among proofs whose every sequent stays
/// within `universe` and the context caps, or `None` when no proof of size
/// at most `max_size` exists in that space. Computed by a backward
/// reachability sweep plus fixpoint relaxation, independently of the
/// loop-pruned searcher.
pub fn provable_within(
    goal: &Sequent,
    universe: &[F],
    max_ante: usize,
    max_succ: usize,
    max_size: usize,
) -> Option<usize> {
    let uni: HashSet<F> = universe.iter().cloned().collect();
    let goal_key = goal.canon();
    if goal.ante.len() > max_ante || goal.succ.len() > max_succ {
        return None;
    }
    if !goal.ante.iter().chain(goal.succ.iter()).all(|f| uni.contains(f)) {
        return None;
    }

    // backward-reachable cone
    let mut instances: HashMap<Sequent, Vec<Vec<Sequent>>> = HashMap::new();
    let mut queue = VecDeque::from([goal_key.clone()]);
    while let Some(seq) = queue.pop_front() {
        if instances.contains_key(&seq) {
            continue;
        }
        let insts = backward_instances(&seq);
        let mut kept = Vec::new();
        for premises in insts {
            let ok = premises.iter().all(|p| {
                p.ante.len() <= max_ante
                    && p.succ.len() <= max_succ
                    && p.ante.iter().chain(p.succ.iter()).all(|f| uni.contains(f))
            });
            if ok {
                let premises: Vec<Sequent> = premises.iter().map(Sequent::canon).collect();
                for p in &premises {
                    if !instances.contains_key(p) {
                        queue.push_back(p.clone());
                    }
                }
                kept.push(premises);
            }
        }
        instances.insert(seq, kept);
    }

    // fixpoint relaxation on minimal sizes
    let mut minsize: HashMap<&Sequent, usize> = HashMap::new();
    for _ in 0..max_size {
        let mut changed = false;
        for (seq, insts) in &instances {
            let mut best = minsize.get(seq).copied();
            for premises in insts {
                let mut total = 1usize;
                let mut all_known = true;
                for p in premises {
                    match minsize.get(p) {
                        Some(s) => total += s,
                        None => {
                            all_known = false;
                            break;
                        }
                    }
                }
                if all_known && best.is_none_or(|b| total < b) {
                    best = Some(total);
                }
            }
            if let Some(b) = best {
                if minsize.get(seq) != Some(&b) {
                    minsize.insert(seq, b);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    minsize.get(&goal_key).copied().filter(|&s| s <= max_size)
}

/// All backward rule instances of `seq` as premise lists; an empty premise
/// list means the sequent is initial.
fn backward_instances(seq: &Sequent) -> Vec<Vec<Sequent>> {
    let ante = &seq.ante;
    let succ = &seq.succ;
    let mut out = Vec::new();
    let initial = ante.iter().any(|a| succ.iter().any(|b| a == b))
        || ante.iter().any(|a| **a == Formula::Bot);
    if initial {
        out.push(Vec::new());
    }
    for i in 0..ante.len() {
        if matches!(ante[i].as_ref(), Formula::Fp(..)) {
            let u = Formula::unfold(&ante[i]).expect("closed fp unfolds");
            out.push(vec![Sequent::new(replace_at(ante, i, u), succ.clone())]);
        }
    }
    for j in 0..succ.len() {
        if matches!(succ[j].as_ref(), Formula::Fp(..)) {
            let u = Formula::unfold(&succ[j]).expect("closed fp unfolds");
            out.push(vec![Sequent::new(ante.clone(), replace_at(succ, j, u))]);
        }
    }
    for j in 0..succ.len() {
        if let Formula::Imp(a, b) = succ[j].as_ref() {
            let mut sub_ante = ante.clone();
            sub_ante.push(a.clone());
            out.push(vec![Sequent::new(sub_ante, replace_at(succ, j, b.clone()))]);
        }
    }
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
                    out.push(vec![
                        Sequent::new(p0_ante, p0_succ),
                        Sequent::new(p1_ante, p1_succ),
                    ]);
                }
            }
        }
    }
    for j in 0..succ.len() {
        if let Formula::Box(a) = succ[j].as_ref() {
            let boxed: Vec<usize> = (0..ante.len())
                .filter(|&k| matches!(ante[k].as_ref(), Formula::Box(_)))
                .collect();
            for combo in 0..3usize.pow(boxed.len() as u32) {
                let mut sub_ante = Vec::new();
                let mut c = combo;
                for &k in &boxed {
                    match c % 3 {
                        0 => {}
                        1 => {
                            if let Formula::Box(body) = ante[k].as_ref() {
                                sub_ante.push(body.clone());
                            }
                        }
                        _ => sub_ante.push(ante[k].clone()),
                    }
                    c /= 3;
                }
                out.push(vec![Sequent::new(sub_ante, vec![a.clone()])]);
            }
        }
    }
    out
}

/// Exhaustive backward decision for fp-free sequents. The backward rules
/// strictly decrease the total formula size, so plain memoized recursion
/// terminates; the memo may be shared across queries.
#[derive(Default)]
pub struct FpFreeDecider {
    memo: HashMap<Sequent, bool>,
}

impl FpFreeDecider {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `None` when an fp formula is present.
    pub fn decide(&mut self, goal: &Sequent) -> Option<bool> {
        fn has_fp(f: &Formula) -> bool {
            match f {
                Formula::Fp(..) => true,
                Formula::Imp(a, b) => has_fp(a) || has_fp(b),
                Formula::Box(a) => has_fp(a),
                _ => false,
            }
        }
        if goal.ante.iter().chain(goal.succ.iter()).any(|f| has_fp(f)) {
            return None;
        }
        Some(self.decide_rec(&goal.canon()))
    }

    fn decide_rec(&mut self, seq: &Sequent) -> bool {
        if let Some(&v) = self.memo.get(seq) {
            return v;
        }
        let mut provable = false;
        for premises in backward_instances(seq) {
            if premises.iter().all(|p| {
                let p = p.canon();
                self.decide_rec(&p)
            }) {
                provable = true;
                break;
            }
        }
        self.memo.insert(seq.clone(), provable);
        provable
    }
}

/// One-shot form of [`FpFreeDecider`].
pub fn decide_fp_free(goal: &Sequent) -> Option<bool> {
    FpFreeDecider::new().decide(goal)
}

/// Pool of random valid proofs over the closure of `vocab`, grown by random
/// forward rule applications. Deterministic per seed.
pub fn random_proofs(vocab: &[F], target: usize, max_size: usize, seed: u64) -> Vec<Proof> {
    let uni = closure(vocab, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<Proof> = Vec::new();
    let max_ante = 3usize;
    let max_succ = 3usize;

    let random_multiset = |rng: &mut ChaCha8Rng, max: usize| -> Vec<F> {
        let n = rng.random_range(0..=max);
        (0..n).map(|_| uni[rng.random_range(0..uni.len())].clone()).collect()
    };

    // seed with random initial sequents
    for _ in 0..target / 4 + 8 {
        let a = uni[rng.random_range(0..uni.len())].clone();
        if rng.random_bool(0.5) {
            let mut ante = random_multiset(&mut rng, max_ante - 1);
            let mut succ = random_multiset(&mut rng, max_succ - 1);
            let i = rng.random_range(0..=ante.len());
            let j = rng.random_range(0..=succ.len());
            ante.insert(i, a.clone());
            succ.insert(j, a);
            pool.push(Proof::leaf_init(ante, succ, i, j));
        } else {
            let mut ante = random_multiset(&mut rng, max_ante - 1);
            let succ = random_multiset(&mut rng, max_succ);
            let i = rng.random_range(0..=ante.len());
            ante.insert(i, Formula::bot());
            pool.push(Proof::leaf_bot(ante, succ, i));
        }
    }

    let fp_formulas: Vec<F> = uni
        .iter()
        .filter(|f| matches!(f.as_ref(), Formula::Fp(..)))
        .cloned()
        .collect();
    let imp_formulas: Vec<F> = uni
        .iter()
        .filter(|f| matches!(f.as_ref(), Formula::Imp(..)))
        .cloned()
        .collect();

    let mut guard = 0usize;
    while pool.len() < target && guard < target * 100 {
        guard += 1;
        let p = pool[rng.random_range(0..pool.len())].clone();
        if p.size() >= max_size {
            continue;
        }
        let ante = &p.conclusion.ante;
        let succ = &p.conclusion.succ;
        match rng.random_range(0..5) {
            0 => {
                // fold some unfolding back into fp, left or right
                if fp_formulas.is_empty() {
                    continue;
                }
                let g = &fp_formulas[rng.random_range(0..fp_formulas.len())];
                let u = Formula::unfold(g).expect("closed fp unfolds");
                let left: Vec<usize> =
                    (0..ante.len()).filter(|&i| ante[i] == u).collect();
                let right: Vec<usize> =
                    (0..succ.len()).filter(|&j| succ[j] == u).collect();
                if !left.is_empty() && (right.is_empty() || rng.random_bool(0.5)) {
                    let i = left[rng.random_range(0..left.len())];
                    pool.push(Proof::by_fix_l(p, i, g.clone()));
                } else if !right.is_empty() {
                    let j = right[rng.random_range(0..right.len())];
                    pool.push(Proof::by_fix_r(p, j, g.clone()));
                }
            }
            1 => {
                if imp_formulas.is_empty() {
                    continue;
                }
                let imp = &imp_formulas[rng.random_range(0..imp_formulas.len())];
                let Formula::Imp(a, b) = imp.as_ref() else { unreachable!() };
                let is_: Vec<usize> = (0..ante.len()).filter(|&i| ante[i] == *a).collect();
                let js: Vec<usize> = (0..succ.len()).filter(|&j| succ[j] == *b).collect();
                if !is_.is_empty() && !js.is_empty() {
                    let i = is_[rng.random_range(0..is_.len())];
                    let j = js[rng.random_range(0..js.len())];
                    pool.push(Proof::by_imp_r(p, i, j));
                }
            }
            2 => {
                // box rule over a single-succedent premise
                if succ.len() != 1 {
                    continue;
                }
                let mut classes = Vec::new();
                for f in ante.iter() {
                    let can_pi = matches!(f.as_ref(), Formula::Box(_));
                    if can_pi && rng.random_bool(0.5) {
                        classes.push(BoxClass::Pi);
                    } else {
                        classes.push(BoxClass::Sigma);
                    }
                }
                if ante.len() > max_ante {
                    continue;
                }
                let wl = random_multiset(&mut rng, max_ante - ante.len());
                let wr = random_multiset(&mut rng, max_succ - 1);
                pool.push(Proof::by_box(p, &classes, wl, wr));
            }
            3 => {
                if imp_formulas.is_empty() {
                    continue;
                }
                let q = pool[rng.random_range(0..pool.len())].clone();
                if p.size() + q.size() + 1 > max_size {
                    continue;
                }
                let imp = &imp_formulas[rng.random_range(0..imp_formulas.len())];
                let Formula::Imp(a, b) = imp.as_ref() else { unreachable!() };
                let is_: Vec<usize> = (0..ante.len()).filter(|&i| ante[i] == *b).collect();
                let js: Vec<usize> =
                    (0..q.conclusion.succ.len()).filter(|&j| q.conclusion.succ[j] == *a).collect();
                if is_.is_empty() || js.is_empty() {
                    continue;
                }
                let na = ante.len() - 1 + q.conclusion.ante.len() + 1;
                let ns = succ.len() + q.conclusion.succ.len() - 1;
                if na > max_ante || ns > max_succ {
                    continue;
                }
                let i = is_[rng.random_range(0..is_.len())];
                let j = js[rng.random_range(0..js.len())];
                pool.push(Proof::by_imp_l(p, i, q, j));
            }
            _ => {
                // grow the contexts through the admissible transform
                let wl = random_multiset(&mut rng, 1);
                let wr = random_multiset(&mut rng, 1);
                if ante.len() + wl.len() <= max_ante && succ.len() + wr.len() <= max_succ {
                    pool.push(crate::transform::weaken(&p, &wl, &wr));
                }
            }
        }
    }
    pool.truncate(target);
    pool
}
