//! Evidence produced by the OIM and OIMC games, with checkers that recompute
//! everything from the net rather than trusting the search.

use std::fmt::Write as _;

use itertools::Itertools;
use rustc_hash::FxHashSet;
use thiserror::Error;

use super::beta::{deleted_condition_cn, deleted_condition_fc, TokenRelation};
use super::Flavor;
use crate::indexed::{IndexedMarking, Token};
use crate::multiset::{Multiset, PlaceId};
use crate::net::{PtNet, TransitionId};
use crate::ordered::{oim_successors, Oim, OimMove};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// The variant of the game being played.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rules {
    pub flavor: Flavor,
    /// Fully-concurrent only: the alternative reading of the right-hand
    /// deleted-token clause.
    pub strict: bool,
    /// Causal-net only: relate every pair of generated tokens and start from
    /// `k1 × k2`, instead of keeping `β` a bijection chosen by the defender.
    pub coarse: bool,
}

impl Rules {
    pub fn new(flavor: Flavor) -> Self {
        Rules {
            flavor,
            strict: false,
            coarse: false,
        }
    }

    /// Whether `β` is a bijection whose new pairs the defender picks.
    pub fn commits_pairing(&self) -> bool {
        self.flavor == Flavor::Cn && !self.coarse
    }
}

/// A firing identified by its transition and the tokens it deletes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MoveRef {
    pub transition: TransitionId,
    pub removed: Vec<Token>,
}

impl MoveRef {
    pub fn of(mv: &OimMove) -> Self {
        MoveRef {
            transition: mv.transition,
            removed: mv.removed.clone(),
        }
    }

    fn matches(&self, mv: &OimMove) -> bool {
        self.transition == mv.transition && self.removed == mv.removed
    }

    pub fn show(&self, net: &PtNet) -> String {
        let removed = self.removed.iter().map(|t| t.show(net)).join(" ");
        format!("{}[{}]", net.transition(self.transition).name, removed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WitnessTriple {
    pub left: Oim,
    pub right: Oim,
    pub beta: TokenRelation,
}

/// A set of game triples containing an initial one and closed under both
/// transfer directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub rules: Rules,
    /// The initial triple comes first.
    pub triples: Vec<WitnessTriple>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Round {
    pub attacker: Side,
    pub attack: MoveRef,
    pub defence: MoveRef,
    /// Generated `(left, right)` token pairs chosen by the defender; empty
    /// unless the rules commit pairings.
    pub pairing: Vec<(Token, Token)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// The attacker's move cannot be answered at all.
    NoResponse { attacker: Side, attack: MoveRef },
    /// The two markings have different sizes (causal-net flavour only).
    SizeMismatch { left: usize, right: usize },
}

/// One line of play from an initial triple to a transfer failure. Every
/// defence is the one that held out longest during the search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub initial: TokenRelation,
    pub rounds: Vec<Round>,
    pub failure: Failure,
}

/// A refutation of every admissible initial triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distinguishing {
    pub rules: Rules,
    pub lines: Vec<Line>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GameEvidence {
    Witness(Witness),
    Distinguishing(Distinguishing),
}

/// Bijections from `left` to `right` listed once up to swapping tokens that
/// sit on the same place on either side. Each is given as `result[i]`, the
/// partner of `left[i]`. Both inputs must be sorted.
pub fn canonical_bijections(left: &[Token], right: &[Token]) -> Vec<Vec<Token>> {
    if left.len() != right.len() {
        return Vec::new();
    }
    let fixed: Vec<PlaceId> = left.iter().map(|t| t.place).collect();
    let pool: Multiset = right.iter().map(|t| t.place).collect();
    super::oracle::pairings(&fixed, &pool)
        .into_iter()
        .map(|places| {
            let mut used = vec![false; right.len()];
            places
                .into_iter()
                .map(|p| {
                    let k = (0..right.len())
                        .find(|&k| !used[k] && right[k].place == p)
                        .expect("pairing respects the pool");
                    used[k] = true;
                    right[k]
                })
                .collect()
        })
        .collect()
}

/// The initial token relations admitted by `rules`.
pub fn initial_relations(rules: &Rules, m1: &Multiset, m2: &Multiset) -> Vec<TokenRelation> {
    let (k1, k2) = (IndexedMarking::initial(m1), IndexedMarking::initial(m2));
    if rules.commits_pairing() {
        canonical_bijections(k1.tokens(), k2.tokens())
            .into_iter()
            .map(|img| k1.tokens().iter().copied().zip(img).collect())
            .collect()
    } else {
        vec![TokenRelation::product(k1.tokens(), k2.tokens())]
    }
}

fn is_bijection(beta: &TokenRelation, k1: &IndexedMarking, k2: &IndexedMarking) -> bool {
    beta.len() == k1.len()
        && k1.len() == k2.len()
        && beta.iter().map(|p| p.0).all_unique()
        && beta.iter().map(|p| p.1).all_unique()
}

/// Whether `(mv1, mv2)` is an admissible move pair at `t`, ignoring the
/// successor triple.
pub fn answers(net: &PtNet, rules: &Rules, t: &WitnessTriple, mv1: &OimMove, mv2: &OimMove) -> bool {
    net.label_of(mv1.transition) == net.label_of(mv2.transition)
        && match rules.flavor {
            Flavor::Fc => deleted_condition_fc(&mv1.removed, &mv2.removed, &t.left, &t.right, &t.beta, rules.strict),
            Flavor::Cn => {
                deleted_condition_cn(&mv1.removed, &mv2.removed, &t.beta)
                    && (rules.coarse || mv1.generated().len() == mv2.generated().len())
            }
        }
}

/// `β'`: the pairs of untouched tokens kept from `β`, plus either every
/// generated pair or, when pairings are committed, exactly `pairing`.
pub fn successor_triple(
    rules: &Rules,
    t: &WitnessTriple,
    mv1: &OimMove,
    mv2: &OimMove,
    pairing: &[(Token, Token)],
) -> WitnessTriple {
    let mut beta: TokenRelation = t
        .beta
        .iter()
        .filter(|(a, b)| mv1.untouched.contains(a) && mv2.untouched.contains(b))
        .copied()
        .collect();
    if rules.commits_pairing() {
        for &(a, b) in pairing {
            beta.insert(a, b);
        }
    } else {
        for a in mv1.generated() {
            for b in mv2.generated() {
                beta.insert(a, b);
            }
        }
    }
    WitnessTriple {
        left: mv1.result.clone(),
        right: mv2.result.clone(),
        beta,
    }
}

/// Every pairing of generated tokens the defender may choose: all bijections
/// when pairings are committed, otherwise only the empty one.
fn all_pairings(rules: &Rules, mv1: &OimMove, mv2: &OimMove) -> Vec<Vec<(Token, Token)>> {
    if !rules.commits_pairing() {
        return vec![Vec::new()];
    }
    let (g1, g2) = (mv1.generated(), mv2.generated());
    if g1.len() != g2.len() {
        return Vec::new();
    }
    g2.iter()
        .copied()
        .permutations(g2.len())
        .map(|img| g1.iter().copied().zip(img).collect())
        .collect()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("the first triple is not an initial triple")]
    MissingInitial,
    #[error("triple {0}: the token relation mentions tokens outside the markings")]
    Untyped(usize),
    #[error("triple {0}: markings of different sizes")]
    SizeMismatch(usize),
    #[error("triple {0}: the token relation is not a bijection")]
    NotBijective(usize),
    #[error("triple {triple}: {side:?} move `{transition}` has no answer inside the witness")]
    Unanswered {
        triple: usize,
        side: Side,
        transition: String,
    },
}

/// Checks that `w` is a bisimulation for its rules containing an initial
/// triple for `m1`, `m2`.
pub fn validate_witness(net: &PtNet, m1: &Multiset, m2: &Multiset, w: &Witness) -> Result<(), WitnessError> {
    let rules = &w.rules;
    let first = w.triples.first().ok_or(WitnessError::MissingInitial)?;
    let (k1, k2) = (IndexedMarking::initial(m1), IndexedMarking::initial(m2));
    let initial_ok = first.left == Oim::initial(&k1)
        && first.right == Oim::initial(&k2)
        && if rules.commits_pairing() {
            is_bijection(&first.beta, &k1, &k2) && first.beta.is_typed(&k1, &k2)
        } else {
            first.beta == TokenRelation::product(k1.tokens(), k2.tokens())
        };
    if !initial_ok {
        return Err(WitnessError::MissingInitial);
    }
    let members: FxHashSet<&WitnessTriple> = w.triples.iter().collect();
    for (i, t) in w.triples.iter().enumerate() {
        if !t.beta.is_typed(&t.left.marking, &t.right.marking) {
            return Err(WitnessError::Untyped(i));
        }
        if rules.flavor == Flavor::Cn && t.left.len() != t.right.len() {
            return Err(WitnessError::SizeMismatch(i));
        }
        if rules.commits_pairing() && !is_bijection(&t.beta, &t.left.marking, &t.right.marking) {
            return Err(WitnessError::NotBijective(i));
        }
        let left = oim_successors(net, &t.left);
        let right = oim_successors(net, &t.right);
        let closed = |mv1: &OimMove, mv2: &OimMove| {
            answers(net, rules, t, mv1, mv2)
                && all_pairings(rules, mv1, mv2)
                    .iter()
                    .any(|p| members.contains(&successor_triple(rules, t, mv1, mv2, p)))
        };
        for mv1 in &left {
            if !right.iter().any(|mv2| closed(mv1, mv2)) {
                return Err(WitnessError::Unanswered {
                    triple: i,
                    side: Side::Left,
                    transition: net.transition(mv1.transition).name.clone(),
                });
            }
        }
        for mv2 in &right {
            if !left.iter().any(|mv1| closed(mv1, mv2)) {
                return Err(WitnessError::Unanswered {
                    triple: i,
                    side: Side::Right,
                    transition: net.transition(mv2.transition).name.clone(),
                });
            }
        }
    }
    Ok(())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReplayError {
    #[error("initial relations are not all refuted")]
    Incomplete,
    #[error("line {0}: not an admissible initial relation")]
    BadInitial(usize),
    #[error("line {0}, round {1}: the attack is not a legal firing")]
    IllegalAttack(usize, usize),
    #[error("line {0}, round {1}: the defence is not a legal firing")]
    IllegalDefence(usize, usize),
    #[error("line {0}, round {1}: the defence does not answer the attack")]
    InvalidDefence(usize, usize),
    #[error("line {0}, round {1}: the pairing is not a bijection between generated tokens")]
    InvalidPairing(usize, usize),
    #[error("line {0}, round {1}: the game had already ended on a size mismatch")]
    PlayedPastMismatch(usize, usize),
    #[error("line {0}: the final attack is not a legal firing")]
    IllegalFinalAttack(usize),
    #[error("line {0}: the final attack can be answered")]
    FinalAttackAnswered(usize),
    #[error("line {0}: there is no size mismatch to end on")]
    NoSizeMismatch(usize),
}

fn find<'a>(moves: &'a [OimMove], r: &MoveRef) -> Option<&'a OimMove> {
    moves.iter().find(|mv| r.matches(mv))
}

/// Replays every line of `d` and checks that together they refute each
/// admissible initial relation.
pub fn replay_distinguishing(net: &PtNet, m1: &Multiset, m2: &Multiset, d: &Distinguishing) -> Result<(), ReplayError> {
    let rules = &d.rules;
    let admissible = initial_relations(rules, m1, m2);
    if admissible.is_empty() {
        // Only a root size mismatch can refute an empty set of initial triples.
        return match d.lines.as_slice() {
            [Line {
                rounds,
                failure: Failure::SizeMismatch { .. },
                ..
            }] if rounds.is_empty() && m1.size() != m2.size() => Ok(()),
            _ => Err(ReplayError::NoSizeMismatch(0)),
        };
    }
    if !admissible.iter().all(|b| d.lines.iter().any(|l| &l.initial == b)) {
        return Err(ReplayError::Incomplete);
    }
    let (k1, k2) = (IndexedMarking::initial(m1), IndexedMarking::initial(m2));
    for (n, line) in d.lines.iter().enumerate() {
        if !admissible.contains(&line.initial) {
            return Err(ReplayError::BadInitial(n));
        }
        let mut t = WitnessTriple {
            left: Oim::initial(&k1),
            right: Oim::initial(&k2),
            beta: line.initial.clone(),
        };
        for (i, round) in line.rounds.iter().enumerate() {
            if rules.flavor == Flavor::Cn && t.left.len() != t.right.len() {
                return Err(ReplayError::PlayedPastMismatch(n, i));
            }
            let left = oim_successors(net, &t.left);
            let right = oim_successors(net, &t.right);
            let (att, def) = match round.attacker {
                Side::Left => (&left, &right),
                Side::Right => (&right, &left),
            };
            let a = find(att, &round.attack).ok_or(ReplayError::IllegalAttack(n, i))?;
            let b = find(def, &round.defence).ok_or(ReplayError::IllegalDefence(n, i))?;
            let (mv1, mv2) = match round.attacker {
                Side::Left => (a, b),
                Side::Right => (b, a),
            };
            if !answers(net, rules, &t, mv1, mv2) {
                return Err(ReplayError::InvalidDefence(n, i));
            }
            let mut pairing = round.pairing.clone();
            pairing.sort_unstable();
            if !all_pairings(rules, mv1, mv2).into_iter().any(|mut p| {
                p.sort_unstable();
                p == pairing
            }) {
                return Err(ReplayError::InvalidPairing(n, i));
            }
            t = successor_triple(rules, &t, mv1, mv2, &round.pairing);
        }
        match &line.failure {
            Failure::SizeMismatch { .. } => {
                if rules.flavor != Flavor::Cn || t.left.len() == t.right.len() {
                    return Err(ReplayError::NoSizeMismatch(n));
                }
            }
            Failure::NoResponse { attacker, attack } => {
                if rules.flavor == Flavor::Cn && t.left.len() != t.right.len() {
                    return Err(ReplayError::PlayedPastMismatch(n, line.rounds.len()));
                }
                let left = oim_successors(net, &t.left);
                let right = oim_successors(net, &t.right);
                let (att, def) = match attacker {
                    Side::Left => (&left, &right),
                    Side::Right => (&right, &left),
                };
                let a = find(att, attack).ok_or(ReplayError::IllegalFinalAttack(n))?;
                let answered = def.iter().any(|b| match attacker {
                    Side::Left => answers(net, rules, &t, a, b),
                    Side::Right => answers(net, rules, &t, b, a),
                });
                if answered {
                    return Err(ReplayError::FinalAttackAnswered(n));
                }
            }
        }
    }
    Ok(())
}

fn rules_text(r: &Rules) -> String {
    let mut s = String::from(match r.flavor {
        Flavor::Fc => "fc",
        Flavor::Cn => "cn",
    });
    if r.strict {
        s.push_str(" strict");
    }
    if r.coarse {
        s.push_str(" coarse");
    }
    s
}

fn tokens_text(net: &PtNet, tokens: &[Token]) -> String {
    tokens.iter().map(|t| t.show(net)).join(" ")
}

fn pairs_text(net: &PtNet, pairs: impl Iterator<Item = (Token, Token)>) -> String {
    pairs.map(|(a, b)| format!("{}-{}", a.show(net), b.show(net))).join(" ")
}

impl Witness {
    /// Deterministic listing: triples in discovery order, tokens and pairs
    /// sorted.
    pub fn to_text(&self, net: &PtNet) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "witness {} triples={}", rules_text(&self.rules), self.triples.len());
        for (i, t) in self.triples.iter().enumerate() {
            let _ = writeln!(s, "triple {i}");
            let _ = writeln!(s, "  left    {}", tokens_text(net, t.left.tokens()));
            let _ = writeln!(s, "  left<=  {}", pairs_text(net, t.left.order_pairs().into_iter()));
            let _ = writeln!(s, "  right   {}", tokens_text(net, t.right.tokens()));
            let _ = writeln!(s, "  right<= {}", pairs_text(net, t.right.order_pairs().into_iter()));
            let _ = writeln!(s, "  beta    {}", pairs_text(net, t.beta.iter().copied()));
        }
        s
    }
}

impl Distinguishing {
    pub fn to_text(&self, net: &PtNet) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "distinguishing {} lines={}", rules_text(&self.rules), self.lines.len());
        for (n, line) in self.lines.iter().enumerate() {
            let _ = writeln!(s, "line {n} from beta {}", pairs_text(net, line.initial.iter().copied()));
            for (i, r) in line.rounds.iter().enumerate() {
                let paired = if r.pairing.is_empty() {
                    String::new()
                } else {
                    format!(" pairing {}", pairs_text(net, r.pairing.iter().copied()))
                };
                let _ = writeln!(
                    s,
                    "  round {i}: {:?} plays {}, answered by {}{paired}",
                    r.attacker,
                    r.attack.show(net),
                    r.defence.show(net)
                );
            }
            match &line.failure {
                Failure::NoResponse { attacker, attack } => {
                    let _ = writeln!(s, "  final: {attacker:?} plays {}, no answer", attack.show(net));
                }
                Failure::SizeMismatch { left, right } => {
                    let _ = writeln!(s, "  final: marking sizes differ ({left} vs {right})");
                }
            }
        }
        s
    }
}
