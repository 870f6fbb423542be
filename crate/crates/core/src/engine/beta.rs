//! Token relations `β ⊆ k1 × k2` and the per-move conditions of the OIM and
//! OIMC games, stated over tokens.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;

use super::matching::perfect_matching;
use crate::indexed::{IndexedMarking, Token};
use crate::ordered::{Oim, OimMove};
use crate::net::PtNet;

/// A relation between left and right tokens, kept sorted.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TokenRelation {
    pairs: BTreeSet<(Token, Token)>,
}

impl TokenRelation {
    pub fn new() -> Self {
        Self::default()
    }

    /// `k1 × k2`.
    pub fn product(left: &[Token], right: &[Token]) -> Self {
        left.iter().cartesian_product(right).map(|(&a, &b)| (a, b)).collect()
    }

    pub fn contains(&self, a: &Token, b: &Token) -> bool {
        self.pairs.contains(&(*a, *b))
    }

    pub fn insert(&mut self, a: Token, b: Token) -> bool {
        self.pairs.insert((a, b))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Token, Token)> {
        self.pairs.iter()
    }

    /// Every left member lies in `k1` and every right member in `k2`.
    pub fn is_typed(&self, k1: &IndexedMarking, k2: &IndexedMarking) -> bool {
        self.pairs.iter().all(|(a, b)| k1.contains(a) && k2.contains(b))
    }

    pub fn show(&self, left: &PtNet, right: &PtNet) -> String {
        let body = self.pairs.iter().map(|(a, b)| format!("{}-{}", a.show(left), b.show(right))).join(" ");
        format!("{{{body}}}")
    }
}

impl FromIterator<(Token, Token)> for TokenRelation {
    fn from_iter<I: IntoIterator<Item = (Token, Token)>>(iter: I) -> Self {
        TokenRelation {
            pairs: iter.into_iter().collect(),
        }
    }
}

impl fmt::Debug for TokenRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs.iter().map(|(a, b)| format!("{a}-{b}"))).finish()
    }
}

/// `β' = (β ∩ (k1'' × k2'')) ∪ (gen1 × gen2)`.
pub fn beta_update(left: &OimMove, right: &OimMove, beta: &TokenRelation) -> TokenRelation {
    let mut next: TokenRelation = beta
        .iter()
        .filter(|(a, b)| left.untouched.contains(a) && right.untouched.contains(b))
        .copied()
        .collect();
    for a in left.generated() {
        for b in right.generated() {
            next.insert(a, b);
        }
    }
    next
}

/// The deleted-token condition of the OIM game.
///
/// Every `p1 ∈ removed1` needs `p1 ≤1 p1'` and `p1' β p2'` for some deleted
/// `p1'` and `p2'`. In the default reading the right side is symmetric:
/// every `p2 ∈ removed2` needs `p2 ≤2 p2'` and `p1' β p2'` for deleted `p1'`,
/// `p2'`. With `strict` the right side instead needs, for every `p2` and every
/// deleted `p1`, a deleted `p2'` with `p2 ≤2 p2'` and `p1 β p2'`.
pub fn deleted_condition_fc(
    removed1: &[Token],
    removed2: &[Token],
    o1: &Oim,
    o2: &Oim,
    beta: &TokenRelation,
    strict: bool,
) -> bool {
    let left = removed1.iter().all(|p1| {
        removed1
            .iter()
            .any(|q1| o1.leq(p1, q1) && removed2.iter().any(|q2| beta.contains(q1, q2)))
    });
    let right = if strict {
        removed2.iter().all(|p2| {
            removed1
                .iter()
                .all(|p1| removed2.iter().any(|q2| o2.leq(p2, q2) && beta.contains(p1, q2)))
        })
    } else {
        removed2.iter().all(|p2| {
            removed2
                .iter()
                .any(|q2| o2.leq(p2, q2) && removed1.iter().any(|q1| beta.contains(q1, q2)))
        })
    };
    left && right
}

/// The deleted-token condition of the OIMC game: `β` restricted to the
/// deleted tokens contains a bijection between them.
pub fn deleted_condition_cn(removed1: &[Token], removed2: &[Token], beta: &TokenRelation) -> bool {
    perfect_matching(removed1.len(), removed2.len(), |i, j| beta.contains(&removed1[i], &removed2[j])).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiset::PlaceId;
    use crate::net::fixtures::two_a;
    use crate::ordered::oim_successors;
    use crate::relation::BitMatrix;

    fn tok(p: u32, i: u32) -> Token {
        Token::new(PlaceId(p), i)
    }

    fn flat(tokens: &[Token]) -> Oim {
        Oim::initial(&IndexedMarking::from_tokens(tokens.iter().copied()).unwrap())
    }

    #[test]
    fn update_after_one_step_each() {
        // Left: s1 and s3 in the two-a net; fire t1 consuming s1. Right: same marking, fire t2.
        let net = two_a();
        let k = IndexedMarking::of(&[(0, 1), (2, 1)]);
        let o = Oim::initial(&k);
        let moves = oim_successors(&net, &o);
        let (t1, t2) = (&moves[0], &moves[1]);
        let beta = TokenRelation::product(k.tokens(), k.tokens());
        let next = beta_update(t1, t2, &beta);
        // Survivors: (s3,1) on the left, (s1,1) on the right; new: (s2,1) on the left only.
        let expected: TokenRelation = [(tok(2, 1), tok(0, 1))].into_iter().collect();
        assert_eq!(next, expected);
        assert!(next.is_typed(&t1.result.marking, &t2.result.marking));

        let same = beta_update(t1, t1, &beta);
        let expected: TokenRelation = [(tok(2, 1), tok(2, 1)), (tok(1, 1), tok(1, 1))].into_iter().collect();
        assert_eq!(same, expected);
    }

    #[test]
    fn fc_condition_examples() {
        let (a, b, c) = (tok(0, 1), tok(0, 2), tok(1, 1));
        let single: TokenRelation = [(a, c)].into_iter().collect();
        let o1 = flat(&[a]);
        let o2 = flat(&[c]);
        assert!(deleted_condition_fc(&[a], &[c], &o1, &o2, &single, false));

        // a ≤1 b, b β c.
        let mut order = BitMatrix::identity(2);
        order.set(0, 1);
        let o1 = Oim {
            marking: IndexedMarking::from_tokens([a, b]).unwrap(),
            order,
        };
        let beta: TokenRelation = [(b, c)].into_iter().collect();
        assert!(deleted_condition_fc(&[a, b], &[c], &o1, &o2, &beta, false));
        // In the strict reading a itself must relate to something above c.
        assert!(!deleted_condition_fc(&[a, b], &[c], &o1, &o2, &beta, true));

        let o1 = flat(&[a]);
        assert!(!deleted_condition_fc(&[a], &[c], &o1, &o2, &TokenRelation::new(), false));
    }

    #[test]
    fn cn_condition_examples() {
        let (a, b, c, d) = (tok(0, 1), tok(0, 2), tok(1, 1), tok(1, 2));
        let ident: TokenRelation = [(a, c), (b, d)].into_iter().collect();
        assert!(deleted_condition_cn(&[a, b], &[c, d], &ident));
        assert!(!deleted_condition_cn(&[a, b], &[c], &ident));
        let crowded: TokenRelation = [(a, c), (b, c)].into_iter().collect();
        assert!(!deleted_condition_cn(&[a, b], &[c, d], &crowded));
    }
}
