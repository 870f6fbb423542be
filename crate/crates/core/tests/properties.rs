//! Algebraic properties of the decision procedures on random nets.

use pnbisim::corpus::{random_net, Limits};
use pnbisim::engine::witness::{replay_distinguishing, validate_witness, GameEvidence};
use pnbisim::engine::{decide, decide_interleaving, Flavor, GameConfig, Outcome};
use pnbisim::{Multiset, PtNet};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CAP: u32 = 2;

/// A random bounded net with two of its reachable markings.
fn instance(seed: u64) -> (PtNet, Multiset, Multiset) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (net, m0) = random_net(&mut rng, &Limits::default());
    let markings = net.reachable(&m0, CAP).unwrap().markings().to_vec();
    let m1 = markings.choose(&mut rng).unwrap().clone();
    let m2 = markings.choose(&mut rng).unwrap().clone();
    (net, m1, m2)
}

fn game(net: &PtNet, m1: &Multiset, m2: &Multiset, flavor: Flavor) -> Outcome {
    let v = decide(net, m1, m2, CAP, &GameConfig::new(flavor)).unwrap();
    match &v.evidence {
        Some(GameEvidence::Witness(w)) => validate_witness(net, m1, m2, w).unwrap(),
        Some(GameEvidence::Distinguishing(d)) => replay_distinguishing(net, m1, m2, d).unwrap(),
        None => panic!("no evidence"),
    }
    v.outcome
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reflexive(seed in any::<u64>()) {
        let (net, m1, _) = instance(seed);
        for flavor in [Flavor::Fc, Flavor::Cn] {
            prop_assert_eq!(game(&net, &m1, &m1, flavor), Outcome::Equivalent);
        }
        prop_assert_eq!(decide_interleaving(&net, &m1, &m1, CAP).unwrap().outcome, Outcome::Equivalent);
    }

    #[test]
    fn symmetric(seed in any::<u64>()) {
        let (net, m1, m2) = instance(seed);
        for flavor in [Flavor::Fc, Flavor::Cn] {
            prop_assert_eq!(game(&net, &m1, &m2, flavor), game(&net, &m2, &m1, flavor));
        }
        prop_assert_eq!(
            decide_interleaving(&net, &m1, &m2, CAP).unwrap().outcome,
            decide_interleaving(&net, &m2, &m1, CAP).unwrap().outcome
        );
    }

    #[test]
    fn finer_implies_coarser(seed in any::<u64>()) {
        let (net, m1, m2) = instance(seed);
        let cn = game(&net, &m1, &m2, Flavor::Cn);
        let fc = game(&net, &m1, &m2, Flavor::Fc);
        let il = decide_interleaving(&net, &m1, &m2, CAP).unwrap().outcome;
        if cn == Outcome::Equivalent {
            prop_assert_eq!(fc, Outcome::Equivalent);
        }
        if fc == Outcome::Equivalent {
            prop_assert_eq!(il, Outcome::Equivalent);
        }
    }

    #[test]
    fn coarse_cn_relation_is_coarser(seed in any::<u64>()) {
        let (net, m1, m2) = instance(seed);
        let coarse = GameConfig { coarse_cn_relation: true, ..GameConfig::new(Flavor::Cn) };
        let v = decide(&net, &m1, &m2, CAP, &coarse).unwrap();
        if game(&net, &m1, &m2, Flavor::Cn) == Outcome::Equivalent {
            prop_assert_eq!(v.outcome, Outcome::Equivalent);
        }
    }
}
