//! Small hand-made nets and a seeded generator of random bounded nets, used
//! for property suites and cross-checks between the decision procedures.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::decide_interleaving;
use crate::engine::Outcome;
use crate::multiset::{Multiset, PlaceId};
use crate::net::PtNet;

/// A net with two markings to compare.
#[derive(Debug, Clone)]
pub struct Case {
    pub name: String,
    pub net: PtNet,
    pub m1: Multiset,
    pub m2: Multiset,
}

fn ms(pairs: &[(u32, u32)]) -> Multiset {
    Multiset::from_pairs(pairs.iter().map(|&(p, n)| (PlaceId(p), n)))
}

/// Two `a`-labelled transitions, `t1 : s1 -> s2` and `t4 : s3 -> 0`.
pub fn two_a() -> PtNet {
    let mut net = PtNet::new();
    for p in ["s1", "s2", "s3"] {
        net.add_place(p).expect("fresh place");
    }
    net.add_transition("t1", "a", ms(&[(0, 1)]), ms(&[(1, 1)])).expect("valid");
    net.add_transition("t4", "a", ms(&[(2, 1)]), Multiset::empty()).expect("valid");
    net
}

/// `t1 u : s1 -> 2*s2` and `t2 v : s2 -> s3`, usually started from
/// `s1 + 3*s2`.
pub fn split() -> PtNet {
    let mut net = PtNet::new();
    for p in ["s1", "s2", "s3"] {
        net.add_place(p).expect("fresh place");
    }
    net.add_transition("t1", "u", ms(&[(0, 1)]), ms(&[(1, 2)])).expect("valid");
    net.add_transition("t2", "v", ms(&[(1, 1)]), ms(&[(2, 1)])).expect("valid");
    net
}

pub fn split_m0() -> Multiset {
    ms(&[(0, 1), (1, 3)])
}

/// `a | b` from `p1 + q1` next to `a.b + b.a` from `c`.
pub fn parallel_vs_choice() -> PtNet {
    let mut net = PtNet::new();
    for p in ["p1", "p2", "q1", "q2", "c", "x", "y", "z"] {
        net.add_place(p).expect("fresh place");
    }
    net.add_transition("ta", "a", ms(&[(0, 1)]), ms(&[(1, 1)])).expect("valid");
    net.add_transition("tb", "b", ms(&[(2, 1)]), ms(&[(3, 1)])).expect("valid");
    net.add_transition("ca", "a", ms(&[(4, 1)]), ms(&[(5, 1)])).expect("valid");
    net.add_transition("cb", "b", ms(&[(4, 1)]), ms(&[(6, 1)])).expect("valid");
    net.add_transition("xb", "b", ms(&[(5, 1)]), ms(&[(7, 1)])).expect("valid");
    net.add_transition("ya", "a", ms(&[(6, 1)]), ms(&[(7, 1)])).expect("valid");
    net
}

/// `t1 b : 2*s2 -> 2*s1` and `t2 b : s1 + s3 -> s2 + s3`. From `2*s2 + s3`
/// against `2*s1 + s3` the markings are fully-concurrent bisimilar but not
/// causal-net bisimilar, and telling them apart requires remembering which
/// generated token was paired with which.
pub fn pairing() -> PtNet {
    let mut net = PtNet::new();
    for p in ["s1", "s2", "s3"] {
        net.add_place(p).expect("fresh place");
    }
    net.add_transition("t1", "b", ms(&[(1, 2)]), ms(&[(0, 2)])).expect("valid");
    net.add_transition("t2", "b", ms(&[(0, 1), (2, 1)]), ms(&[(1, 1), (2, 1)])).expect("valid");
    net
}

/// A cycle through a synchronisation: `t1 a : p + q -> 2*r`, then each `r`
/// returns to `p` (`b`) or `q` (`c`).
pub fn sync() -> PtNet {
    let mut net = PtNet::new();
    for p in ["p", "q", "r"] {
        net.add_place(p).expect("fresh place");
    }
    net.add_transition("t1", "a", ms(&[(0, 1), (1, 1)]), ms(&[(2, 2)])).expect("valid");
    net.add_transition("t2", "b", ms(&[(2, 1)]), ms(&[(0, 1)])).expect("valid");
    net.add_transition("t3", "c", ms(&[(2, 1)]), ms(&[(1, 1)])).expect("valid");
    net
}

/// Five small marked nets covering splitting, choice, concurrency and
/// synchronisation.
pub fn marked_nets() -> Vec<(String, PtNet, Multiset)> {
    vec![
        ("two-a".into(), two_a(), ms(&[(0, 1), (2, 1)])),
        ("split".into(), split(), split_m0()),
        ("parallel-vs-choice".into(), parallel_vs_choice(), ms(&[(0, 1), (2, 1), (4, 1)])),
        ("pairing".into(), pairing(), ms(&[(0, 1), (1, 2), (2, 1)])),
        ("sync".into(), sync(), ms(&[(0, 1), (1, 1)])),
    ]
}

/// The hand-made pairs every corpus starts with.
pub fn hand_made() -> Vec<Case> {
    vec![
        Case {
            name: "two-a".into(),
            net: two_a(),
            m1: ms(&[(0, 1)]),
            m2: ms(&[(2, 1)]),
        },
        Case {
            name: "parallel-vs-choice".into(),
            net: parallel_vs_choice(),
            m1: ms(&[(0, 1), (2, 1)]),
            m2: ms(&[(4, 1)]),
        },
        Case {
            name: "pairing".into(),
            net: pairing(),
            m1: ms(&[(1, 2), (2, 1)]),
            m2: ms(&[(0, 2), (2, 1)]),
        },
    ]
}

/// Shape limits of generated nets.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub max_places: usize,
    pub max_transitions: usize,
    pub bound: u32,
    pub pairs_per_net: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_places: 4,
            max_transitions: 4,
            bound: 2,
            pairs_per_net: 2,
        }
    }
}

fn random_multiset(rng: &mut ChaCha8Rng, places: usize, n: u32) -> Multiset {
    (0..n).map(|_| PlaceId(rng.gen_range(0..places as u32))).collect()
}

/// A random net over labels `a`, `b` together with an initial marking under
/// which it is `limits.bound`-bounded and reaches at least three markings.
///
/// Most transitions preserve the token count; the rest grow or shrink it by
/// one, so that random nets are neither mostly unbounded nor mostly dead.
pub fn random_net(rng: &mut ChaCha8Rng, limits: &Limits) -> (PtNet, Multiset) {
    loop {
        let places = rng.gen_range(2..=limits.max_places);
        let transitions = rng.gen_range(2..=limits.max_transitions.max(2));
        let mut net = PtNet::new();
        for p in 0..places {
            net.add_place(&format!("s{}", p + 1)).expect("fresh place");
        }
        for t in 0..transitions {
            let label = if rng.gen_bool(0.5) { "a" } else { "b" };
            let n_pre = rng.gen_range(1..=2u32);
            let n_post = match rng.gen_range(0..6) {
                0 => n_pre - 1,
                1 => (n_pre + 1).min(2),
                _ => n_pre,
            };
            let pre = random_multiset(rng, places, n_pre);
            let post = random_multiset(rng, places, n_post);
            net.add_transition(&format!("t{}", t + 1), label, pre, post).expect("valid");
        }
        let size = rng.gen_range(1..=3);
        let m0 = random_multiset(rng, places, size);
        if let Ok(r) = net.reachable(&m0, limits.bound) {
            if r.graph.len() >= 3 {
                return (net, m0);
            }
        }
    }
}

/// `count` random nets with up to `limits.pairs_per_net` marking pairs each.
///
/// Pairs are drawn from the markings reachable from the initial marking and
/// from a second random root. Distinct interleaving-equivalent pairs are
/// preferred since they are the ones where the finer equivalences have
/// something to decide.
pub fn generate(seed: u64, count: usize, limits: &Limits) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::new();
    for i in 0..count {
        let (net, m0) = random_net(&mut rng, limits);
        let mut markings = net.reachable(&m0, limits.bound).expect("checked bound").markings().to_vec();
        let size = rng.gen_range(1..=3);
        let other = random_multiset(&mut rng, net.place_count(), size);
        if let Ok(r) = net.reachable(&other, limits.bound) {
            markings.extend(r.markings().iter().filter(|m| !markings.contains(m)).cloned().collect::<Vec<_>>());
        }
        let mut candidates: Vec<(Multiset, Multiset)> = Vec::new();
        for (x, a) in markings.iter().enumerate() {
            for b in &markings[x + 1..] {
                candidates.push((a.clone(), b.clone()));
            }
        }
        candidates.shuffle(&mut rng);
        let (mut close, mut far): (Vec<_>, Vec<_>) = candidates.into_iter().partition(|(a, b)| {
            decide_interleaving(&net, a, b, limits.bound).map(|v| v.outcome) == Ok(Outcome::Equivalent)
        });
        close.truncate(limits.pairs_per_net);
        far.truncate(limits.pairs_per_net - close.len());
        let mut chosen = close;
        chosen.extend(far);
        for (k, (m1, m2)) in chosen.into_iter().enumerate() {
            let (m1, m2) = if rng.gen_bool(0.5) { (m2, m1) } else { (m1, m2) };
            cases.push(Case {
                name: format!("random-{seed}-{i}-{k}"),
                net: net.clone(),
                m1,
                m2,
            });
        }
    }
    cases
}
