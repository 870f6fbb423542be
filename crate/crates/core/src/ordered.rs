//! Ordered indexed markings: indexed markings with a preorder recording the
//! precedence in which tokens were generated.

use itertools::Itertools;

use crate::indexed::{im_successors, ImLabel, IndexedMarking, Token};
use crate::net::{NetError, PtNet, TransitionId};
use crate::relation::BitMatrix;
use crate::space::StateSpace;

/// `(k, ≤)`. Row/column `i` of `order` is the `i`-th token of `marking` in
/// canonical `(place, index)` order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Oim {
    pub marking: IndexedMarking,
    pub order: BitMatrix,
}

impl Oim {
    /// `init(N(k0)) = (k0, k0 × k0)`.
    pub fn initial(k0: &IndexedMarking) -> Self {
        Oim {
            marking: k0.clone(),
            order: BitMatrix::full(k0.len(), k0.len()),
        }
    }

    pub fn tokens(&self) -> &[Token] {
        self.marking.tokens()
    }

    pub fn len(&self) -> usize {
        self.marking.len()
    }

    pub fn is_empty(&self) -> bool {
        self.marking.is_empty()
    }

    /// `a ≤ b`; false when either token is absent.
    pub fn leq(&self, a: &Token, b: &Token) -> bool {
        match (self.marking.position(a), self.marking.position(b)) {
            (Some(i), Some(j)) => self.order.get(i, j),
            _ => false,
        }
    }

    /// The order as explicit token pairs, lexicographically sorted.
    pub fn order_pairs(&self) -> Vec<(Token, Token)> {
        let tokens = self.tokens();
        self.order.pairs().map(|(i, j)| (tokens[i], tokens[j])).collect()
    }

    pub fn is_preorder(&self) -> bool {
        self.order.rows() == self.len() && self.order.is_reflexive() && self.order.is_transitive()
    }

    /// Covering pairs of the strict part of `≤` modulo its equivalence
    /// classes, as drawn in a Hasse diagram. Equivalent tokens are listed
    /// separately by [`Oim::equivalence_classes`].
    pub fn hasse_edges(&self) -> Vec<(Token, Token)> {
        let n = self.len();
        let strict = |i: usize, j: usize| self.order.get(i, j) && !self.order.get(j, i);
        let reps: Vec<usize> = (0..n)
            .filter(|&i| (0..i).all(|j| !(self.order.get(i, j) && self.order.get(j, i))))
            .collect();
        let mut edges = Vec::new();
        for &i in &reps {
            for &j in &reps {
                if strict(i, j) && !reps.iter().any(|&m| strict(i, m) && strict(m, j)) {
                    edges.push((self.tokens()[i], self.tokens()[j]));
                }
            }
        }
        edges
    }

    /// Groups of tokens related both ways, each listed in token order.
    pub fn equivalence_classes(&self) -> Vec<Vec<Token>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let class: Vec<usize> = (i..n)
                .filter(|&j| self.order.get(i, j) && self.order.get(j, i))
                .collect();
            for &j in &class {
                seen[j] = true;
            }
            classes.push(class.into_iter().map(|j| self.tokens()[j]).collect());
        }
        classes
    }

    pub fn show(&self, net: &PtNet) -> String {
        let tokens = self.marking.show(net);
        let classes = self
            .equivalence_classes()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| c.iter().map(|t| t.show(net)).join("~"))
            .collect::<Vec<_>>();
        let edges = self
            .hasse_edges()
            .into_iter()
            .map(|(a, b)| format!("{}<{}", a.show(net), b.show(net)))
            .collect::<Vec<_>>();
        format!("{tokens} [{}]", classes.into_iter().chain(edges).join(" "))
    }
}

/// One firing in the ordered token game.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OimMove {
    pub transition: TransitionId,
    pub removed: Vec<Token>,
    pub untouched: IndexedMarking,
    pub result: Oim,
}

impl OimMove {
    pub fn generated(&self) -> Vec<Token> {
        self.result.marking.minus(&self.untouched)
    }
}

/// Order after a firing that deletes `removed` from `before` and ends in
/// `after`, with `untouched = before ∖ removed`.
///
/// `p ≤' q` holds iff both are untouched and `p ≤ q`, or both are generated,
/// or `p` is untouched, `q` generated and `p ≤ r` for some deleted `r`.
pub fn successor_order(
    before: &Oim,
    removed: &[Token],
    untouched: &IndexedMarking,
    after: &IndexedMarking,
) -> BitMatrix {
    let n = after.len();
    let old_pos: Vec<Option<usize>> = after
        .tokens()
        .iter()
        .map(|t| {
            if untouched.contains(t) {
                before.marking.position(t)
            } else {
                None
            }
        })
        .collect();
    let removed_pos: Vec<usize> = removed
        .iter()
        .map(|t| before.marking.position(t).expect("removed token was present"))
        .collect();
    let mut order = BitMatrix::new(n, n);
    for i in 0..n {
        for j in 0..n {
            let related = match (old_pos[i], old_pos[j]) {
                (Some(a), Some(b)) => before.order.get(a, b),
                (None, None) => true,
                (Some(a), None) => removed_pos.iter().any(|&r| before.order.get(a, r)),
                (None, Some(_)) => false,
            };
            if related {
                order.set(i, j);
            }
        }
    }
    order
}

/// Every ordered firing enabled at `o`, one per indexed firing of its marking.
pub fn oim_successors(net: &PtNet, o: &Oim) -> Vec<OimMove> {
    im_successors(net, &o.marking)
        .into_iter()
        .map(|mv| {
            let order = successor_order(o, &mv.removed, &mv.untouched, &mv.result);
            OimMove {
                transition: mv.transition,
                removed: mv.removed,
                untouched: mv.untouched,
                result: Oim {
                    marking: mv.result,
                    order,
                },
            }
        })
        .collect()
}

/// Reachable ordered indexed markings from `init(N(k0))`, after checking the
/// collective net is `cap`-bounded.
pub fn reachable_oim(
    net: &PtNet,
    k0: &IndexedMarking,
    cap: u32,
) -> Result<StateSpace<Oim, ImLabel>, NetError> {
    net.reachable(&k0.alpha(), cap)?;
    StateSpace::explore(Oim::initial(k0), |o| {
        Ok::<_, NetError>(
            oim_successors(net, o)
                .into_iter()
                .map(|mv| {
                    (
                        ImLabel {
                            transition: mv.transition,
                            removed: mv.removed,
                        },
                        mv.result,
                    )
                })
                .collect::<Vec<_>>(),
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indexed::reachable_im;
    use crate::multiset::{Multiset, PlaceId};
    use crate::net::fixtures::{two_a, split};
    use rustc_hash::FxHashSet;

    fn tok(p: u32, i: u32) -> Token {
        Token::new(PlaceId(p), i)
    }

    fn k0() -> IndexedMarking {
        IndexedMarking::of(&[(0, 1), (1, 1), (1, 2), (1, 3)])
    }

    #[test]
    fn initial_order_is_full() {
        assert_eq!(Oim::initial(&k0()).order.count(), 16);
        let empty = Oim::initial(&IndexedMarking::empty());
        assert_eq!(empty.order.count(), 0);
        let single = Oim::initial(&IndexedMarking::of(&[(0, 1)]));
        assert_eq!(single.order_pairs(), vec![(tok(0, 1), tok(0, 1))]);
    }

    #[test]
    fn split_first_step_order() {
        let net = split();
        let o0 = Oim::initial(&k0());
        let mv = oim_successors(&net, &o0)
            .into_iter()
            .find(|m| m.transition == TransitionId(1) && m.removed == vec![tok(1, 2)])
            .unwrap();
        let mut expected: FxHashSet<(Token, Token)> = o0
            .order_pairs()
            .into_iter()
            .filter(|&(a, b)| a != tok(1, 2) && b != tok(1, 2))
            .collect();
        expected.extend([
            (tok(0, 1), tok(2, 1)),
            (tok(1, 1), tok(2, 1)),
            (tok(1, 3), tok(2, 1)),
            (tok(2, 1), tok(2, 1)),
        ]);
        let got: FxHashSet<(Token, Token)> = mv.result.order_pairs().into_iter().collect();
        assert_eq!(got, expected);
        assert_eq!(got.len(), 13);
    }

    #[test]
    fn consuming_top_of_chain_puts_new_token_above_survivors() {
        // Chain a < b < c on places 0,1,2; t consumes c (place 2) and makes d on place 3.
        let mut net = crate::net::PtNet::new();
        for p in ["a", "b", "c", "d"] {
            net.add_place(p).unwrap();
        }
        net.add_transition("t", "x", Multiset::singleton(PlaceId(2), 1), Multiset::singleton(PlaceId(3), 1))
            .unwrap();
        let marking = IndexedMarking::of(&[(0, 1), (1, 1), (2, 1)]);
        let mut order = BitMatrix::new(3, 3);
        for (i, j) in [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (0, 2)] {
            order.set(i, j);
        }
        let o = Oim { marking, order };
        let moves = oim_successors(&net, &o);
        assert_eq!(moves.len(), 1);
        let r = &moves[0].result;
        assert!(r.leq(&tok(0, 1), &tok(3, 1)));
        assert!(r.leq(&tok(1, 1), &tok(3, 1)));
        assert!(!r.leq(&tok(3, 1), &tok(0, 1)));
        assert!(r.leq(&tok(0, 1), &tok(1, 1)) && !r.leq(&tok(1, 1), &tok(0, 1)));
        assert!(r.is_preorder());
    }

    #[test]
    fn dead_marking_has_no_ordered_moves() {
        let net = two_a();
        let o = Oim::initial(&IndexedMarking::of(&[(1, 1)]));
        assert!(oim_successors(&net, &o).is_empty());
        let space = reachable_oim(&net, &o.marking, 1).unwrap();
        assert_eq!(space.states, vec![o]);
    }

    #[test]
    fn two_a_safe_from_s1_has_two_oims() {
        let net = two_a();
        let space = reachable_oim(&net, &IndexedMarking::of(&[(0, 1)]), 1).unwrap();
        assert_eq!(space.len(), 2);
        assert_eq!(space.states[1], Oim::initial(&IndexedMarking::of(&[(1, 1)])));
    }

    #[test]
    fn split_oim_space_invariants() {
        let net = split();
        let space = reachable_oim(&net, &k0(), 5).unwrap();
        let ims = reachable_im(&net, &k0(), 5).unwrap();
        let projected: FxHashSet<IndexedMarking> =
            space.states.iter().map(|o| o.marking.clone()).collect();
        let expected: FxHashSet<IndexedMarking> = ims.states.into_iter().collect();
        assert_eq!(projected, expected);
        for o in &space.states {
            assert!(o.is_preorder());
        }
        for o in &space.states {
            for mv in oim_successors(&net, o) {
                let generated = mv.generated();
                for a in &generated {
                    for b in &generated {
                        assert!(mv.result.leq(a, b));
                    }
                    for u in mv.untouched.tokens() {
                        assert!(!mv.result.leq(a, u), "generated token below an untouched one");
                    }
                }
            }
        }
    }
}
