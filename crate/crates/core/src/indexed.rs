//! Indexed markings and the individual token game.
//!
//! A token is an indexed place `(s, i)`. Consuming tokens is nondeterministic
//! (every choice of which tokens to delete is a separate outcome) while
//! producing tokens always uses the least free index of the place.

use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::multiset::{Multiset, PlaceId};
use crate::net::{NetError, PtNet, TransitionId};
use crate::space::StateSpace;

/// An indexed place `(place, index)` with `index ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Token {
    pub place: PlaceId,
    pub index: u32,
}

impl Token {
    pub fn new(place: PlaceId, index: u32) -> Self {
        debug_assert!(index >= 1);
        Token { place, index }
    }

    pub fn show(&self, net: &PtNet) -> String {
        format!("({},{})", net.place_name(self.place), self.index)
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.place, self.index)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IndexedError {
    #[error("not enough tokens on place {0} to delete")]
    InsufficientTokens(PlaceId),
    #[error("token index must be at least 1")]
    ZeroIndex,
}

/// A finite set of tokens, kept sorted by `(place, index)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexedMarking {
    tokens: Vec<Token>,
}

impl IndexedMarking {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_tokens(tokens: impl IntoIterator<Item = Token>) -> Result<Self, IndexedError> {
        let mut tokens: Vec<Token> = tokens.into_iter().collect();
        if tokens.iter().any(|t| t.index == 0) {
            return Err(IndexedError::ZeroIndex);
        }
        tokens.sort_unstable();
        tokens.dedup();
        Ok(IndexedMarking { tokens })
    }

    /// Convenience constructor from `(place ordinal, index)` pairs.
    pub fn of(pairs: &[(u32, u32)]) -> Self {
        Self::from_tokens(pairs.iter().map(|&(p, i)| Token::new(PlaceId(p), i)))
            .expect("indices are positive")
    }

    /// The unique closed indexed marking `k` with `α(k) = m`.
    pub fn initial(m: &Multiset) -> Self {
        let tokens = m
            .iter()
            .flat_map(|(p, n)| (1..=n).map(move |i| Token::new(p, i)))
            .collect();
        IndexedMarking { tokens }
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn contains(&self, t: &Token) -> bool {
        self.tokens.binary_search(t).is_ok()
    }

    /// Position of `t` in the canonical token order.
    pub fn position(&self, t: &Token) -> Option<usize> {
        self.tokens.binary_search(t).ok()
    }

    /// Tokens lying on `place`.
    pub fn on_place(&self, place: PlaceId) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(move |t| t.place == place)
    }

    /// The de-indexed marking `α(k)`.
    pub fn alpha(&self) -> Multiset {
        self.tokens.iter().map(|t| t.place).collect()
    }

    /// No holes in the indexing: each place holds exactly `1..=|k(s)|`.
    pub fn is_closed(&self) -> bool {
        let mut expected = 1;
        let mut current = None;
        for t in &self.tokens {
            if current != Some(t.place) {
                current = Some(t.place);
                expected = 1;
            }
            if t.index != expected {
                return false;
            }
            expected += 1;
        }
        true
    }

    pub fn max_index(&self) -> u32 {
        self.tokens.iter().map(|t| t.index).max().unwrap_or(0)
    }

    /// Set difference `self ∖ other`.
    pub fn minus(&self, other: &IndexedMarking) -> Vec<Token> {
        self.tokens
            .iter()
            .filter(|t| !other.contains(t))
            .copied()
            .collect()
    }

    pub fn without(&self, removed: &[Token]) -> IndexedMarking {
        IndexedMarking {
            tokens: self
                .tokens
                .iter()
                .filter(|t| !removed.contains(t))
                .copied()
                .collect(),
        }
    }

    /// `k ⊟ m`: all ways of deleting `m(s)` tokens from every place `s`.
    ///
    /// Results are listed in lexicographic order of the deleted token sets and
    /// are pairwise distinct.
    pub fn box_minus(&self, m: &Multiset) -> Result<Vec<IndexedMarking>, IndexedError> {
        Ok(self
            .deletions(m)?
            .into_iter()
            .map(|removed| self.without(&removed))
            .collect())
    }

    /// The token sets that `k ⊟ m` may delete, in lexicographic order.
    pub fn deletions(&self, m: &Multiset) -> Result<Vec<Vec<Token>>, IndexedError> {
        let mut per_place = Vec::new();
        for (p, n) in m.iter() {
            let available: Vec<Token> = self.on_place(p).copied().collect();
            if available.len() < n as usize {
                return Err(IndexedError::InsufficientTokens(p));
            }
            per_place.push(available.into_iter().combinations(n as usize).collect::<Vec<_>>());
        }
        if per_place.is_empty() {
            return Ok(vec![Vec::new()]);
        }
        Ok(per_place
            .into_iter()
            .multi_cartesian_product()
            .map(|choice| choice.into_iter().flatten().collect())
            .collect())
    }

    /// `k ⊞ m`: adds each unit of `m` at the least free index of its place.
    pub fn box_plus(&self, m: &Multiset) -> IndexedMarking {
        let mut tokens = self.tokens.clone();
        for (p, n) in m.iter() {
            let mut used: Vec<u32> = self.on_place(p).map(|t| t.index).collect();
            let mut candidate = 1;
            for _ in 0..n {
                while used.contains(&candidate) {
                    candidate += 1;
                }
                used.push(candidate);
                tokens.push(Token::new(p, candidate));
            }
        }
        tokens.sort_unstable();
        IndexedMarking { tokens }
    }

    pub fn show(&self, net: &PtNet) -> String {
        format!(
            "{{{}}}",
            self.tokens.iter().map(|t| t.show(net)).join(",")
        )
    }
}

/// One firing in the individual token game.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ImMove {
    pub transition: TransitionId,
    /// Deleted tokens `k ∖ k''`.
    pub removed: Vec<Token>,
    /// Untouched tokens `k''`.
    pub untouched: IndexedMarking,
    /// Resulting marking `k' = k'' ⊞ t•`.
    pub result: IndexedMarking,
}

impl ImMove {
    /// Generated tokens `k' ∖ k''`.
    pub fn generated(&self) -> Vec<Token> {
        self.result.minus(&self.untouched)
    }
}

/// Every firing enabled at `k`: transitions in declaration order, then every
/// deletion choice.
pub fn im_successors(net: &PtNet, k: &IndexedMarking) -> Vec<ImMove> {
    let m = k.alpha();
    let mut moves = Vec::new();
    for t in net.enabled(&m) {
        let tr = net.transition(t);
        let deletions = k
            .deletions(&tr.pre)
            .expect("enabled transitions have enough tokens");
        for removed in deletions {
            let untouched = k.without(&removed);
            let result = untouched.box_plus(&tr.post);
            moves.push(ImMove {
                transition: t,
                removed,
                untouched,
                result,
            });
        }
    }
    moves
}

/// The reachable indexed markings `IM(N(k0))`, after verifying that the
/// collective net is `cap`-bounded.
pub fn reachable_im(
    net: &PtNet,
    k0: &IndexedMarking,
    cap: u32,
) -> Result<StateSpace<IndexedMarking, ImLabel>, NetError> {
    net.reachable(&k0.alpha(), cap)?;
    StateSpace::explore(k0.clone(), |k| {
        Ok::<_, NetError>(
            im_successors(net, k)
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

/// Edge label of indexed and ordered-indexed state spaces.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ImLabel {
    pub transition: TransitionId,
    pub removed: Vec<Token>,
}
