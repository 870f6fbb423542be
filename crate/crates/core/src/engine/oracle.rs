//! The process-based bisimulation games, played literally up to a depth.
//!
//! For fully-concurrent bisimilarity a state is a pair of processes whose
//! `i`-th events correspond, so the isomorphism `f` is implicit. For
//! causal-net bisimilarity a state is one causal net with two foldings. Both
//! games are evaluated three-valued: a state is won by the defender only when
//! every line of play ends inside the depth, lost when the attacker forces a
//! stuck defender inside the depth, and unknown otherwise.

use std::hash::Hash;
use std::time::Instant;

use itertools::Itertools;
use rustc_hash::FxHashMap;

use super::witness::Side;
use super::{Flavor, Outcome, Stats, Verdict};
use crate::multiset::{Multiset, PlaceId};
use crate::net::{PtNet, TransitionId};
use crate::process::{process_extensions, CondName, ConditionId, Process};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub flavor: Flavor,
    pub depth: u32,
    /// Memo entries after which every further state counts as unknown.
    pub max_states: usize,
}

impl OracleConfig {
    pub fn new(flavor: Flavor, depth: u32) -> Self {
        OracleConfig {
            flavor,
            depth,
            max_states: 2_000_000,
        }
    }
}

/// Human-readable trace of the decisive part of the game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleEvidence {
    /// States visited by the defender's winning strategy.
    Witness(Vec<String>),
    /// Attacker moves with the defender's replies, ending in a stuck defender.
    Distinguishing(Vec<String>),
}

pub fn oracle_game(net: &PtNet, m1: &Multiset, m2: &Multiset, flavor: Flavor, depth: u32) -> Verdict<OracleEvidence> {
    oracle_with(net, m1, m2, &OracleConfig::new(flavor, depth))
}

pub fn oracle_with(net: &PtNet, m1: &Multiset, m2: &Multiset, config: &OracleConfig) -> Verdict<OracleEvidence> {
    let start = Instant::now();
    let (outcome, evidence, explored) = match config.flavor {
        Flavor::Fc => {
            let mut solver = Solver::new(net, config.max_states);
            let root = FcState {
                left: Process::empty(m1),
                right: Process::empty(m2),
            };
            let outcome = solver.eval(&root, config.depth);
            let evidence = solver.evidence(&root, outcome, config.depth);
            (outcome, evidence, solver.memo.len())
        }
        Flavor::Cn => {
            let mut solver = Solver::new(net, config.max_states);
            let left = Process::empty(m1);
            let fixed: Vec<PlaceId> = m1.units().collect();
            let roots: Vec<CnState> = pairings(&fixed, m2)
                .into_iter()
                .map(|places| CnState {
                    left: left.clone(),
                    right: Process::from_places(places),
                })
                .collect();
            let mut outcome = Outcome::NotEquivalent;
            let mut evidence = Vec::new();
            for root in &roots {
                let o = solver.eval(root, config.depth);
                if o == Outcome::Equivalent {
                    outcome = o;
                    evidence = vec![root.show(net)];
                    if let Some(OracleEvidence::Witness(w)) = solver.evidence(root, o, config.depth) {
                        evidence = w;
                    }
                    break;
                }
                if o == Outcome::Unknown {
                    outcome = o;
                }
                if let Some(OracleEvidence::Distinguishing(lines)) = solver.evidence(root, o, config.depth) {
                    evidence.push(format!("initial pairing {}", root.show(net)));
                    evidence.extend(lines.into_iter().map(|l| format!("  {l}")));
                }
            }
            if roots.is_empty() {
                evidence.push(format!("no initial pairing: sizes {} and {}", m1.size(), m2.size()));
            }
            let evidence = match outcome {
                Outcome::Equivalent => Some(OracleEvidence::Witness(evidence)),
                Outcome::NotEquivalent => Some(OracleEvidence::Distinguishing(evidence)),
                Outcome::Unknown => None,
            };
            (outcome, evidence, solver.memo.len())
        }
    };
    Verdict {
        outcome,
        evidence,
        stats: Stats {
            explored,
            elapsed: start.elapsed(),
        },
    }
}

/// Every sequence over the units of `pool` with `result[i]` free, except that
/// positions sharing a `fixed` place with their predecessor take
/// non-decreasing places. Positions with equal `fixed` places are
/// interchangeable, so this lists each pairing once up to that symmetry.
pub fn pairings(fixed: &[PlaceId], pool: &Multiset) -> Vec<Vec<PlaceId>> {
    fn go(
        i: usize,
        fixed: &[PlaceId],
        counts: &mut Vec<(PlaceId, u32)>,
        cur: &mut Vec<PlaceId>,
        out: &mut Vec<Vec<PlaceId>>,
    ) {
        if i == fixed.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..counts.len() {
            let (p, n) = counts[k];
            if n == 0 {
                continue;
            }
            if i > 0 && fixed[i] == fixed[i - 1] && p < cur[i - 1] {
                continue;
            }
            counts[k].1 -= 1;
            cur.push(p);
            go(i + 1, fixed, counts, cur, out);
            cur.pop();
            counts[k].1 += 1;
        }
    }
    if fixed.len() as u32 != pool.size() {
        return Vec::new();
    }
    let mut counts: Vec<(PlaceId, u32)> = pool.iter().collect();
    let mut out = Vec::new();
    go(0, fixed, &mut counts, &mut Vec::new(), &mut out);
    out
}

/// A move of one player: a transition fired on a set of maximal conditions.
#[derive(Debug, Clone)]
struct MoveDesc {
    transition: TransitionId,
    preset: Vec<ConditionId>,
    post: Vec<PlaceId>,
}

impl MoveDesc {
    fn show(&self, net: &PtNet) -> String {
        let pre = self.preset.iter().map(|b| format!("b{}", b.0)).join(" ");
        let post = self.post.iter().map(|&p| net.place_name(p)).join(" ");
        format!("{} on [{}] -> [{}]", net.transition(self.transition).name, pre, post)
    }
}

struct Attack<S> {
    side: Side,
    mv: MoveDesc,
    responses: Vec<(MoveDesc, S)>,
}

trait GameState: Sized {
    type Key: Hash + Eq;
    fn key(&self) -> Self::Key;
    fn attacks(&self, net: &PtNet) -> Vec<Attack<Self>>;
    fn show(&self, net: &PtNet) -> String;
}

/// `(π1, f, π2)` with `f` mapping the `i`-th event of `π1` to the `i`-th
/// event of `π2`.
#[derive(Debug, Clone)]
struct FcState {
    left: Process,
    right: Process,
}

type FcKey = (Vec<((TransitionId, TransitionId), Vec<CondName>)>, Vec<Vec<CondName>>);

impl GameState for FcState {
    type Key = FcKey;

    fn key(&self) -> FcKey {
        let (form, rank) = self
            .left
            .canonical_form(|e| (self.left.transition_of(e), self.right.transition_of(e)));
        (form, self.right.presets_under(&rank))
    }

    fn attacks(&self, net: &PtNet) -> Vec<Attack<Self>> {
        let left = process_extensions(net, &self.left);
        let right = process_extensions(net, &self.right);
        let preds = |ext: &crate::process::Extension| ext.process.event_order().strict_predecessors(ext.event);
        let left_preds: Vec<_> = left.iter().map(preds).collect();
        let right_preds: Vec<_> = right.iter().map(preds).collect();
        let desc = |ext: &crate::process::Extension| MoveDesc {
            transition: ext.transition,
            preset: ext.preset.clone(),
            post: net.transition(ext.transition).post.units().collect(),
        };
        let matches = |i: usize, j: usize| {
            net.label_of(left[i].transition) == net.label_of(right[j].transition) && left_preds[i] == right_preds[j]
        };
        let mut attacks = Vec::new();
        for (i, l) in left.iter().enumerate() {
            let responses = (0..right.len())
                .filter(|&j| matches(i, j))
                .map(|j| {
                    let next = FcState {
                        left: l.process.clone(),
                        right: right[j].process.clone(),
                    };
                    (desc(&right[j]), next)
                })
                .collect();
            attacks.push(Attack {
                side: Side::Left,
                mv: desc(l),
                responses,
            });
        }
        for (j, r) in right.iter().enumerate() {
            let responses = (0..left.len())
                .filter(|&i| matches(i, j))
                .map(|i| {
                    let next = FcState {
                        left: left[i].process.clone(),
                        right: r.process.clone(),
                    };
                    (desc(&left[i]), next)
                })
                .collect();
            attacks.push(Attack {
                side: Side::Right,
                mv: desc(r),
                responses,
            });
        }
        attacks
    }

    fn show(&self, net: &PtNet) -> String {
        let f = (0..self.left.event_count()).map(|i| format!("e{i}->e{i}")).join(" ");
        format!("pi1: {} | f: {{{f}}} | pi2: {}", self.left.show(net), self.right.show(net))
    }
}

/// `(ρ1, C, ρ2)`: both processes share their causal net and differ only in
/// the folding.
#[derive(Debug, Clone)]
struct CnState {
    left: Process,
    right: Process,
}

type CnTag = (TransitionId, TransitionId, Vec<PlaceId>, Vec<PlaceId>);
type CnKey = (Vec<PlaceId>, Vec<(CnTag, Vec<CondName>)>);

impl CnState {
    fn side(&self, side: Side) -> &Process {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }
}

impl GameState for CnState {
    type Key = CnKey;

    fn key(&self) -> CnKey {
        let causal = self.left.causal();
        let min: Vec<PlaceId> = causal.min().into_iter().map(|b| self.right.place_of(b)).collect();
        let (form, _) = self.left.canonical_form(|e| {
            // Either folding of the new conditions may be a permutation of the
            // transition's postset, depending on who attacked.
            let post = &causal.event(e).postset;
            (
                self.left.transition_of(e),
                self.right.transition_of(e),
                post.iter().map(|&b| self.left.place_of(b)).collect(),
                post.iter().map(|&b| self.right.place_of(b)).collect(),
            )
        });
        (min, form)
    }

    fn attacks(&self, net: &PtNet) -> Vec<Attack<Self>> {
        let mut attacks = Vec::new();
        for side in [Side::Left, Side::Right] {
            let (mine, theirs) = (self.side(side), self.side(side.other()));
            for ext in process_extensions(net, mine) {
                let tr = net.transition(ext.transition);
                let attacker_post: Vec<PlaceId> = tr.post.units().collect();
                let folded: Multiset = ext.preset.iter().map(|&b| theirs.place_of(b)).collect();
                let mut responses = Vec::new();
                for t2 in net.transition_ids() {
                    let tr2 = net.transition(t2);
                    if tr2.label != tr.label || tr2.pre != folded || tr2.post.size() != tr.post.size() {
                        continue;
                    }
                    for post in pairings(&attacker_post, &tr2.post) {
                        let (_, answered) = theirs
                            .extend(net, &ext.preset, t2, &post)
                            .expect("preset folds onto the answering transition");
                        let next = match side {
                            Side::Left => CnState {
                                left: ext.process.clone(),
                                right: answered,
                            },
                            Side::Right => CnState {
                                left: answered,
                                right: ext.process.clone(),
                            },
                        };
                        let desc = MoveDesc {
                            transition: t2,
                            preset: ext.preset.clone(),
                            post,
                        };
                        responses.push((desc, next));
                    }
                }
                attacks.push(Attack {
                    side,
                    mv: MoveDesc {
                        transition: ext.transition,
                        preset: ext.preset.clone(),
                        post: attacker_post,
                    },
                    responses,
                });
            }
        }
        attacks
    }

    fn show(&self, net: &PtNet) -> String {
        let causal = self.left.causal();
        let conds = causal
            .condition_ids()
            .map(|b| {
                format!(
                    "b{}:{}/{}",
                    b.0,
                    net.place_name(self.left.place_of(b)),
                    net.place_name(self.right.place_of(b))
                )
            })
            .join(" ");
        let events = causal
            .event_ids()
            .map(|e| {
                let ev = causal.event(e);
                format!(
                    "e{}:{}/{} [{}] -> [{}]",
                    e.0,
                    net.transition(self.left.transition_of(e)).name,
                    net.transition(self.right.transition_of(e)).name,
                    ev.preset.iter().map(|b| format!("b{}", b.0)).join(" "),
                    ev.postset.iter().map(|b| format!("b{}", b.0)).join(" ")
                )
            })
            .join(" ");
        format!("C: [{conds}] {events}")
    }
}

struct Solver<'a, S: GameState> {
    net: &'a PtNet,
    max_states: usize,
    memo: FxHashMap<S::Key, (Outcome, u32)>,
}

impl<'a, S: GameState> Solver<'a, S> {
    fn new(net: &'a PtNet, max_states: usize) -> Self {
        Solver {
            net,
            max_states,
            memo: FxHashMap::default(),
        }
    }

    fn eval(&mut self, state: &S, depth: u32) -> Outcome {
        let key = state.key();
        if let Some(&(o, d)) = self.memo.get(&key) {
            if o.is_conclusive() || d >= depth {
                return o;
            }
        }
        if self.memo.len() >= self.max_states {
            return Outcome::Unknown;
        }
        let attacks = state.attacks(self.net);
        let outcome = if attacks.is_empty() {
            Outcome::Equivalent
        } else if depth == 0 {
            Outcome::Unknown
        } else {
            let mut all_won = true;
            let mut lost = false;
            for attack in &attacks {
                let mut best = Outcome::NotEquivalent;
                for (_, next) in &attack.responses {
                    match self.eval(next, depth - 1) {
                        Outcome::Equivalent => {
                            best = Outcome::Equivalent;
                            break;
                        }
                        Outcome::Unknown => best = Outcome::Unknown,
                        Outcome::NotEquivalent => {}
                    }
                }
                match best {
                    Outcome::NotEquivalent => {
                        lost = true;
                        break;
                    }
                    Outcome::Unknown => all_won = false,
                    Outcome::Equivalent => {}
                }
            }
            if lost {
                Outcome::NotEquivalent
            } else if all_won {
                Outcome::Equivalent
            } else {
                Outcome::Unknown
            }
        };
        self.memo.insert(key, (outcome, depth));
        outcome
    }

    fn evidence(&mut self, root: &S, outcome: Outcome, depth: u32) -> Option<OracleEvidence> {
        match outcome {
            Outcome::Equivalent => Some(OracleEvidence::Witness(self.strategy(root, depth))),
            Outcome::NotEquivalent => Some(OracleEvidence::Distinguishing(self.refutation(root, depth))),
            Outcome::Unknown => None,
        }
    }

    /// The states of a winning defender strategy, breadth-first, each listed
    /// once up to isomorphism.
    fn strategy(&mut self, root: &S, depth: u32) -> Vec<String> {
        const LIMIT: usize = 10_000;
        let mut seen: FxHashMap<S::Key, ()> = FxHashMap::default();
        let mut lines = Vec::new();
        let mut frontier = vec![(root.key(), depth, root.show(self.net), Some(root.attacks(self.net)))];
        seen.insert(root.key(), ());
        while let Some((_, d, shown, attacks)) = frontier.pop() {
            lines.push(shown);
            if lines.len() >= LIMIT {
                break;
            }
            for attack in attacks.unwrap_or_default() {
                let chosen = attack
                    .responses
                    .into_iter()
                    .find(|(_, next)| self.eval(next, d.saturating_sub(1)) == Outcome::Equivalent);
                if let Some((_, next)) = chosen {
                    let key = next.key();
                    if !seen.contains_key(&key) {
                        seen.insert(next.key(), ());
                        let shown = next.show(self.net);
                        let attacks = Some(next.attacks(self.net));
                        frontier.insert(0, (key, d.saturating_sub(1), shown, attacks));
                    }
                }
            }
        }
        lines
    }

    /// One line of play where the attacker wins; every reply is refuted.
    fn refutation(&mut self, root: &S, depth: u32) -> Vec<String> {
        let mut lines = Vec::new();
        let mut cur_attacks = root.attacks(self.net);
        let mut d = depth;
        loop {
            let mut decisive = None;
            for attack in cur_attacks {
                let all_lost = attack
                    .responses
                    .iter()
                    .all(|(_, next)| self.eval(next, d.saturating_sub(1)) == Outcome::NotEquivalent);
                if all_lost {
                    decisive = Some(attack);
                    break;
                }
            }
            let attack = decisive.expect("a refuted state has a winning attack");
            let who = match attack.side {
                Side::Left => "left",
                Side::Right => "right",
            };
            match attack.responses.into_iter().next() {
                None => {
                    lines.push(format!("{who} plays {}, no answer", attack.mv.show(self.net)));
                    return lines;
                }
                Some((reply, next)) => {
                    lines.push(format!(
                        "{who} plays {}, answered by {}",
                        attack.mv.show(self.net),
                        reply.show(self.net)
                    ));
                    cur_attacks = next.attacks(self.net);
                    d = d.saturating_sub(1);
                }
            }
        }
    }
}
