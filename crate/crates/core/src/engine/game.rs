//! On-the-fly solver for the OIM and OIMC bisimulation games.
//!
//! Triples `(o1, o2, β)` are explored breadth-first from the initial one. A
//! triple is lost once some attacker move has no live answer; losses are
//! propagated backwards through per-attack counters, so the triples left alive
//! when exploration ends form the largest bisimulation among them.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use rustc_hash::FxHashMap;

use super::witness::{
    canonical_bijections, Distinguishing, Failure, GameEvidence, Line, MoveRef, Round, Rules, Side, Witness,
    WitnessTriple,
};
use super::{Flavor, Outcome, Stats, TokenRelation, Verdict};
use crate::indexed::IndexedMarking;
use crate::multiset::Multiset;
use crate::net::{LabelId, NetError, PtNet};
use crate::ordered::{oim_successors, Oim, OimMove};
use crate::relation::BitMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameConfig {
    pub flavor: Flavor,
    /// Use the alternative reading of the right-hand deleted-token clause.
    pub strict_deleted_clause: bool,
    /// Causal-net flavour: relate all generated tokens instead of letting the
    /// defender commit to a pairing. Coarser than causal-net bisimilarity.
    pub coarse_cn_relation: bool,
    pub max_triples: usize,
    pub time_limit: Option<Duration>,
}

impl GameConfig {
    pub fn new(flavor: Flavor) -> Self {
        GameConfig {
            flavor,
            strict_deleted_clause: false,
            coarse_cn_relation: false,
            max_triples: 2_000_000,
            time_limit: None,
        }
    }

    pub fn rules(&self) -> Rules {
        Rules {
            flavor: self.flavor,
            strict: self.flavor == Flavor::Fc && self.strict_deleted_clause,
            coarse: self.flavor == Flavor::Cn && self.coarse_cn_relation,
        }
    }
}

/// Fully-concurrent bisimilarity of `m1` and `m2`.
pub fn decide_oim(net: &PtNet, m1: &Multiset, m2: &Multiset, cap: u32) -> Result<Verdict<GameEvidence>, NetError> {
    decide(net, m1, m2, cap, &GameConfig::new(Flavor::Fc))
}

/// Causal-net bisimilarity of `m1` and `m2`.
pub fn decide_oimc(net: &PtNet, m1: &Multiset, m2: &Multiset, cap: u32) -> Result<Verdict<GameEvidence>, NetError> {
    decide(net, m1, m2, cap, &GameConfig::new(Flavor::Cn))
}

pub fn decide(
    net: &PtNet,
    m1: &Multiset,
    m2: &Multiset,
    cap: u32,
    config: &GameConfig,
) -> Result<Verdict<GameEvidence>, NetError> {
    net.reachable(m1, cap)?;
    net.reachable(m2, cap)?;
    let start = Instant::now();
    let rules = config.rules();
    let mut solver = Solver::new(net, config, rules);
    let k1 = IndexedMarking::initial(m1);
    let k2 = IndexedMarking::initial(m2);
    let l0 = solver.arena.intern(Oim::initial(&k1));
    let r0 = solver.arena.intern(Oim::initial(&k2));
    let relations = if rules.commits_pairing() {
        canonical_bijections(k1.tokens(), k2.tokens())
            .into_iter()
            .map(|img| {
                let mut b = BitMatrix::new(k1.len(), k2.len());
                for (i, t) in img.iter().enumerate() {
                    b.set(i, k2.position(t).expect("initial token"));
                }
                b
            })
            .collect()
    } else {
        vec![BitMatrix::full(k1.len(), k2.len())]
    };
    let roots: Vec<u32> = relations.into_iter().map(|b| solver.intern(l0, r0, b)).collect();
    let finished = solver.run(&roots, start);
    let stats = Stats {
        explored: solver.triples.len(),
        elapsed: start.elapsed(),
    };
    let alive = roots.iter().copied().find(|&r| solver.triples[r as usize].death.is_none());
    let (outcome, evidence) = match alive {
        None => {
            let lines = if roots.is_empty() {
                vec![Line {
                    initial: TokenRelation::new(),
                    rounds: Vec::new(),
                    failure: Failure::SizeMismatch {
                        left: k1.len(),
                        right: k2.len(),
                    },
                }]
            } else {
                roots.iter().map(|&r| solver.line(r)).collect()
            };
            let d = Distinguishing { rules, lines };
            (Outcome::NotEquivalent, Some(GameEvidence::Distinguishing(d)))
        }
        Some(root) if finished => (Outcome::Equivalent, Some(GameEvidence::Witness(solver.witness(root)))),
        Some(_) => (Outcome::Unknown, None),
    };
    log::debug!("game {rules:?}: {outcome} after {} triples", stats.explored);
    Ok(Verdict {
        outcome,
        evidence,
        stats,
    })
}

const FRESH: u32 = u32::MAX;

/// A firing seen from an interned OIM, in positional form.
struct SideMove {
    label: LabelId,
    removed: Vec<usize>,
    /// For every token of the target, its position in the source or `FRESH`.
    origin: Vec<u32>,
    target: u32,
    source_move: OimMove,
}

#[derive(Default)]
struct Arena {
    oims: Vec<Oim>,
    index: FxHashMap<Oim, u32>,
    moves: Vec<Option<std::rc::Rc<[SideMove]>>>,
}

impl Arena {
    fn intern(&mut self, o: Oim) -> u32 {
        if let Some(&id) = self.index.get(&o) {
            return id;
        }
        let id = self.oims.len() as u32;
        self.index.insert(o.clone(), id);
        self.oims.push(o);
        self.moves.push(None);
        id
    }

    fn moves(&mut self, net: &PtNet, id: u32) -> std::rc::Rc<[SideMove]> {
        if let Some(m) = &self.moves[id as usize] {
            return m.clone();
        }
        let source = self.oims[id as usize].clone();
        let mut out = Vec::new();
        for mv in oim_successors(net, &source) {
            let removed = mv
                .removed
                .iter()
                .map(|t| source.marking.position(t).expect("removed token present"))
                .collect();
            let origin = mv
                .result
                .tokens()
                .iter()
                .map(|t| {
                    if mv.untouched.contains(t) {
                        source.marking.position(t).expect("untouched token present") as u32
                    } else {
                        FRESH
                    }
                })
                .collect();
            let target = self.intern(mv.result.clone());
            out.push(SideMove {
                label: net.label_of(mv.transition),
                removed,
                origin,
                target,
                source_move: mv,
            });
        }
        let rc: std::rc::Rc<[SideMove]> = out.into();
        self.moves[id as usize] = Some(rc.clone());
        rc
    }
}

#[derive(Debug, Clone, Copy)]
enum Cause {
    SizeMismatch,
    NoResponse(u32),
    Refuted(u32),
}

#[derive(Debug, Clone, Copy)]
struct Death {
    rank: u32,
    cause: Cause,
}

struct Attack {
    side: Side,
    mv: u32,
    /// `(defender move, successor triple)`.
    responses: Vec<(u32, u32)>,
    live: u32,
}

struct Triple {
    left: u32,
    right: u32,
    beta: BitMatrix,
    death: Option<Death>,
    attacks: Vec<Attack>,
}

struct Solver<'a> {
    net: &'a PtNet,
    config: &'a GameConfig,
    rules: Rules,
    arena: Arena,
    triples: Vec<Triple>,
    index: FxHashMap<(u32, u32, BitMatrix), u32>,
    preds: Vec<Vec<(u32, u32)>>,
    queue: VecDeque<u32>,
}

impl<'a> Solver<'a> {
    fn new(net: &'a PtNet, config: &'a GameConfig, rules: Rules) -> Self {
        Solver {
            net,
            config,
            rules,
            arena: Arena::default(),
            triples: Vec::new(),
            index: FxHashMap::default(),
            preds: Vec::new(),
            queue: VecDeque::new(),
        }
    }

    fn intern(&mut self, left: u32, right: u32, beta: BitMatrix) -> u32 {
        let key = (left, right, beta);
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        let id = self.triples.len() as u32;
        self.triples.push(Triple {
            left,
            right,
            beta: key.2.clone(),
            death: None,
            attacks: Vec::new(),
        });
        self.preds.push(Vec::new());
        self.index.insert(key, id);
        self.queue.push_back(id);
        id
    }

    /// Explores until every root is lost or nothing is left. Returns false
    /// when a resource limit stopped the search first.
    fn run(&mut self, roots: &[u32], start: Instant) -> bool {
        let mut expanded = 0usize;
        while let Some(t) = self.queue.pop_front() {
            if roots.iter().all(|&r| self.triples[r as usize].death.is_some()) {
                return true;
            }
            if self.triples.len() > self.config.max_triples {
                return false;
            }
            expanded += 1;
            if expanded.is_multiple_of(256) {
                if let Some(limit) = self.config.time_limit {
                    if start.elapsed() > limit {
                        return false;
                    }
                }
            }
            self.expand(t);
        }
        true
    }

    fn deleted_ok(&self, t: &Triple, a: &SideMove, b: &SideMove) -> bool {
        let o1 = &self.arena.oims[t.left as usize];
        let o2 = &self.arena.oims[t.right as usize];
        let (d1, d2, beta) = (&a.removed, &b.removed, &t.beta);
        match self.rules.flavor {
            Flavor::Cn => super::matching::perfect_matching(d1.len(), d2.len(), |i, j| beta.get(d1[i], d2[j])).is_some(),
            Flavor::Fc => {
                let left = d1
                    .iter()
                    .all(|&p| d1.iter().any(|&q| o1.order.get(p, q) && d2.iter().any(|&r| beta.get(q, r))));
                let right = if self.rules.strict {
                    d2.iter()
                        .all(|&p| d1.iter().all(|&s| d2.iter().any(|&q| o2.order.get(p, q) && beta.get(s, q))))
                } else {
                    d2.iter()
                        .all(|&p| d2.iter().any(|&q| o2.order.get(p, q) && d1.iter().any(|&s| beta.get(s, q))))
                };
                left && right
            }
        }
    }

    /// `β'` from the untouched pairs of `β` plus the generated pairs in
    /// `fresh`, given by positions in the two targets.
    fn next_beta(beta: &BitMatrix, a: &SideMove, b: &SideMove, fresh: &[(usize, usize)]) -> BitMatrix {
        let mut next = BitMatrix::new(a.origin.len(), b.origin.len());
        for (i, &oi) in a.origin.iter().enumerate() {
            for (j, &oj) in b.origin.iter().enumerate() {
                if oi != FRESH && oj != FRESH && beta.get(oi as usize, oj as usize) {
                    next.set(i, j);
                }
            }
        }
        for &(i, j) in fresh {
            next.set(i, j);
        }
        next
    }

    /// The generated-token pairings the defender may commit to, up to
    /// swapping tokens on the same place; a single full product otherwise.
    fn fresh_pairings(&self, a: &SideMove, b: &SideMove) -> Vec<Vec<(usize, usize)>> {
        let gen = |m: &SideMove| -> Vec<usize> { (0..m.origin.len()).filter(|&i| m.origin[i] == FRESH).collect() };
        let (g1, g2) = (gen(a), gen(b));
        if !self.rules.commits_pairing() {
            return vec![g1.iter().flat_map(|&i| g2.iter().map(move |&j| (i, j))).collect()];
        }
        let o1 = &self.arena.oims[a.target as usize];
        let o2 = &self.arena.oims[b.target as usize];
        let t1: Vec<_> = g1.iter().map(|&i| o1.tokens()[i]).collect();
        let t2: Vec<_> = g2.iter().map(|&j| o2.tokens()[j]).collect();
        canonical_bijections(&t1, &t2)
            .into_iter()
            .map(|img| {
                g1.iter()
                    .zip(img)
                    .map(|(&i, t)| (i, o2.marking.position(&t).expect("generated token")))
                    .collect()
            })
            .collect()
    }

    fn expand(&mut self, t: u32) {
        let (l, r) = (self.triples[t as usize].left, self.triples[t as usize].right);
        if self.rules.flavor == Flavor::Cn && self.arena.oims[l as usize].len() != self.arena.oims[r as usize].len() {
            self.kill(
                t,
                Death {
                    rank: 0,
                    cause: Cause::SizeMismatch,
                },
            );
            return;
        }
        let left = self.arena.moves(self.net, l);
        let right = self.arena.moves(self.net, r);
        let mut by_left: Vec<Vec<(u32, u32)>> = vec![Vec::new(); left.len()];
        let mut by_right: Vec<Vec<(u32, u32)>> = vec![Vec::new(); right.len()];
        for (i, a) in left.iter().enumerate() {
            for (j, b) in right.iter().enumerate() {
                if a.label != b.label || !self.deleted_ok(&self.triples[t as usize], a, b) {
                    continue;
                }
                for fresh in self.fresh_pairings(a, b) {
                    let beta = Self::next_beta(&self.triples[t as usize].beta, a, b, &fresh);
                    let s = self.intern(a.target, b.target, beta);
                    by_left[i].push((j as u32, s));
                    by_right[j].push((i as u32, s));
                }
            }
        }
        let attacks: Vec<Attack> = by_left
            .into_iter()
            .enumerate()
            .map(|(i, responses)| (Side::Left, i, responses))
            .chain(by_right.into_iter().enumerate().map(|(j, responses)| (Side::Right, j, responses)))
            .map(|(side, mv, responses)| Attack {
                side,
                mv: mv as u32,
                responses,
                live: 0,
            })
            .collect();
        let unanswered = attacks.iter().position(|a| a.responses.is_empty());
        self.triples[t as usize].attacks = attacks;
        if let Some(a) = unanswered {
            self.kill(
                t,
                Death {
                    rank: 0,
                    cause: Cause::NoResponse(a as u32),
                },
            );
            return;
        }
        for a in 0..self.triples[t as usize].attacks.len() {
            let mut live = 0;
            for k in 0..self.triples[t as usize].attacks[a].responses.len() {
                let s = self.triples[t as usize].attacks[a].responses[k].1;
                if self.triples[s as usize].death.is_none() {
                    live += 1;
                    self.preds[s as usize].push((t, a as u32));
                }
            }
            self.triples[t as usize].attacks[a].live = live;
            if live == 0 && self.triples[t as usize].death.is_none() {
                let rank = self.refutation_rank(t, a);
                self.kill(
                    t,
                    Death {
                        rank,
                        cause: Cause::Refuted(a as u32),
                    },
                );
            }
        }
    }

    fn refutation_rank(&self, t: u32, a: usize) -> u32 {
        1 + self.triples[t as usize].attacks[a]
            .responses
            .iter()
            .map(|&(_, s)| self.triples[s as usize].death.expect("all answers lost").rank)
            .max()
            .unwrap_or(0)
    }

    fn kill(&mut self, t: u32, death: Death) {
        let mut pending = vec![(t, death)];
        while let Some((t, death)) = pending.pop() {
            if self.triples[t as usize].death.is_some() {
                continue;
            }
            self.triples[t as usize].death = Some(death);
            for (p, a) in std::mem::take(&mut self.preds[t as usize]) {
                let pt = &mut self.triples[p as usize];
                if pt.death.is_some() {
                    continue;
                }
                pt.attacks[a as usize].live -= 1;
                if pt.attacks[a as usize].live == 0 {
                    let rank = self.refutation_rank(p, a as usize);
                    pending.push((
                        p,
                        Death {
                            rank,
                            cause: Cause::Refuted(a),
                        },
                    ));
                }
            }
        }
    }

    fn side_move(&self, t: &Triple, side: Side, mv: u32) -> &SideMove {
        let id = match side {
            Side::Left => t.left,
            Side::Right => t.right,
        };
        let moves = self.arena.moves[id as usize].as_ref().expect("expanded");
        &moves[mv as usize]
    }

    fn move_ref(&self, t: &Triple, side: Side, mv: u32) -> MoveRef {
        MoveRef::of(&self.side_move(t, side, mv).source_move)
    }

    /// The committed generated pairs in the step from `t` to `s`, as tokens.
    fn pairing(&self, left: &SideMove, right: &SideMove, s: u32) -> Vec<(crate::indexed::Token, crate::indexed::Token)> {
        if !self.rules.commits_pairing() {
            return Vec::new();
        }
        let st = &self.triples[s as usize];
        let o1 = &self.arena.oims[st.left as usize];
        let o2 = &self.arena.oims[st.right as usize];
        st.beta
            .pairs()
            .filter(|&(i, j)| left.origin[i] == FRESH && right.origin[j] == FRESH)
            .map(|(i, j)| (o1.tokens()[i], o2.tokens()[j]))
            .collect()
    }

    /// Play from a lost root in which the defender always picks the answer
    /// that was lost last.
    fn line(&self, root: u32) -> Line {
        let mut rounds = Vec::new();
        let mut cur = root;
        let failure = loop {
            let t = &self.triples[cur as usize];
            let death = t.death.expect("lost triple");
            match death.cause {
                Cause::SizeMismatch => {
                    break Failure::SizeMismatch {
                        left: self.arena.oims[t.left as usize].len(),
                        right: self.arena.oims[t.right as usize].len(),
                    }
                }
                Cause::NoResponse(a) => {
                    let attack = &t.attacks[a as usize];
                    break Failure::NoResponse {
                        attacker: attack.side,
                        attack: self.move_ref(t, attack.side, attack.mv),
                    };
                }
                Cause::Refuted(a) => {
                    let attack = &t.attacks[a as usize];
                    let &(d, s) = attack
                        .responses
                        .iter()
                        .rev()
                        .max_by_key(|&&(_, s)| self.triples[s as usize].death.expect("lost").rank)
                        .expect("refuted attacks have answers");
                    let am = self.side_move(t, attack.side, attack.mv);
                    let dm = self.side_move(t, attack.side.other(), d);
                    let pairing = match attack.side {
                        Side::Left => self.pairing(am, dm, s),
                        Side::Right => self.pairing(dm, am, s),
                    };
                    rounds.push(Round {
                        attacker: attack.side,
                        attack: MoveRef::of(&am.source_move),
                        defence: MoveRef::of(&dm.source_move),
                        pairing,
                    });
                    cur = s;
                }
            }
        };
        Line {
            initial: self.to_witness_triple(root).beta,
            rounds,
            failure,
        }
    }

    fn to_witness_triple(&self, id: u32) -> WitnessTriple {
        let t = &self.triples[id as usize];
        let left = self.arena.oims[t.left as usize].clone();
        let right = self.arena.oims[t.right as usize].clone();
        let beta: TokenRelation = t
            .beta
            .pairs()
            .map(|(i, j)| (left.tokens()[i], right.tokens()[j]))
            .collect();
        WitnessTriple { left, right, beta }
    }

    /// Live triples reachable from `init` through live answers.
    fn witness(&self, init: u32) -> Witness {
        let mut seen = vec![false; self.triples.len()];
        let mut order = vec![init];
        seen[init as usize] = true;
        let mut next = 0;
        while next < order.len() {
            let t = &self.triples[order[next] as usize];
            next += 1;
            for attack in &t.attacks {
                for &(_, s) in &attack.responses {
                    if !seen[s as usize] && self.triples[s as usize].death.is_none() {
                        seen[s as usize] = true;
                        order.push(s);
                    }
                }
            }
        }
        Witness {
            rules: self.rules,
            triples: order.into_iter().map(|id| self.to_witness_triple(id)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::witness::{replay_distinguishing, validate_witness};
    use crate::multiset::PlaceId;
    use crate::net::fixtures::{two_a, split, split_m0};

    fn one(p: u32) -> Multiset {
        Multiset::singleton(PlaceId(p), 1)
    }

    fn check(net: &PtNet, m1: &Multiset, m2: &Multiset, flavor: Flavor) -> Outcome {
        let v = decide(net, m1, m2, 8, &GameConfig::new(flavor)).unwrap();
        match &v.evidence {
            Some(GameEvidence::Witness(w)) => validate_witness(net, m1, m2, w).unwrap(),
            Some(GameEvidence::Distinguishing(d)) => replay_distinguishing(net, m1, m2, d).unwrap(),
            None => panic!("no evidence"),
        }
        v.outcome
    }

    #[test]
    fn two_a_fc_but_not_cn() {
        let net = two_a();
        assert_eq!(check(&net, &one(0), &one(2), Flavor::Fc), Outcome::Equivalent);
        assert_eq!(check(&net, &one(0), &one(2), Flavor::Cn), Outcome::NotEquivalent);
        let v = decide_oim(&net, &one(0), &one(2), 1).unwrap();
        let Some(GameEvidence::Witness(w)) = v.evidence else { panic!() };
        assert_eq!(w.triples.len(), 2);
    }

    #[test]
    fn cn_size_gate() {
        let net = two_a();
        let v = decide_oimc(&net, &one(1), &Multiset::from_counts([0, 2]), 2).unwrap();
        assert_eq!(v.outcome, Outcome::NotEquivalent);
        let Some(GameEvidence::Distinguishing(d)) = v.evidence else { panic!() };
        assert_eq!(d.lines.len(), 1);
        assert!(d.lines[0].rounds.is_empty());
        assert_eq!(d.lines[0].failure, Failure::SizeMismatch { left: 1, right: 2 });
        // Both deadlocked, so fc does not see the size difference.
        assert_eq!(check(&net, &one(1), &Multiset::from_counts([0, 2]), Flavor::Fc), Outcome::Equivalent);
    }

    #[test]
    fn reflexive_on_split() {
        let net = split();
        for flavor in [Flavor::Fc, Flavor::Cn] {
            assert_eq!(check(&net, &split_m0(), &split_m0(), flavor), Outcome::Equivalent);
        }
    }

    #[test]
    fn action_versus_deadlock() {
        let net = two_a();
        for flavor in [Flavor::Fc, Flavor::Cn] {
            assert_eq!(check(&net, &one(0), &one(1), flavor), Outcome::NotEquivalent);
        }
    }

    #[test]
    fn concurrency_versus_interleaving() {
        // a | b against a.b + b.a.
        let mut net = PtNet::new();
        for p in ["p1", "q1", "p2", "q2", "c", "x", "y", "z"] {
            net.add_place(p).unwrap();
        }
        let m = |pairs: &[(u32, u32)]| Multiset::from_pairs(pairs.iter().map(|&(p, n)| (PlaceId(p), n)));
        net.add_transition("ta", "a", m(&[(0, 1)]), m(&[(1, 1)])).unwrap();
        net.add_transition("tb", "b", m(&[(2, 1)]), m(&[(3, 1)])).unwrap();
        net.add_transition("ua", "a", m(&[(4, 1)]), m(&[(5, 1)])).unwrap();
        net.add_transition("ub2", "b", m(&[(5, 1)]), m(&[(7, 1)])).unwrap();
        net.add_transition("ub", "b", m(&[(4, 1)]), m(&[(6, 1)])).unwrap();
        net.add_transition("ua2", "a", m(&[(6, 1)]), m(&[(7, 1)])).unwrap();
        let par = m(&[(0, 1), (2, 1)]);
        let seq = m(&[(4, 1)]);
        assert_eq!(check(&net, &par, &seq, Flavor::Fc), Outcome::NotEquivalent);
        assert_eq!(check(&net, &seq, &par, Flavor::Fc), Outcome::NotEquivalent);
    }

    #[test]
    fn cn_commits_to_a_pairing_of_generated_tokens() {
        // t1 turns two s2 tokens into two s1 tokens; t2 needs s1 + s3 and
        // gives back s2 + s3. From 2*s2 + s3 against 2*s1 + s3, the right
        // answers t1 with t2, and which new left s1 corresponds to the new
        // right s3 must be fixed at that point.
        let mut net = PtNet::new();
        for p in ["s1", "s2", "s3"] {
            net.add_place(p).unwrap();
        }
        let m = |c: &[u32]| Multiset::from_counts(c.to_vec());
        net.add_transition("t1", "b", m(&[0, 2]), m(&[2])).unwrap();
        net.add_transition("t2", "b", m(&[1, 0, 1]), m(&[0, 1, 1])).unwrap();
        let (m1, m2) = (m(&[0, 2, 1]), m(&[2, 0, 1]));
        assert_eq!(check(&net, &m1, &m2, Flavor::Cn), Outcome::NotEquivalent);
        assert_eq!(check(&net, &m2, &m1, Flavor::Cn), Outcome::NotEquivalent);
        let coarse = GameConfig {
            coarse_cn_relation: true,
            ..GameConfig::new(Flavor::Cn)
        };
        let v = decide(&net, &m1, &m2, 2, &coarse).unwrap();
        assert_eq!(v.outcome, Outcome::Equivalent);
        let Some(GameEvidence::Witness(w)) = v.evidence else { panic!() };
        validate_witness(&net, &m1, &m2, &w).unwrap();
    }

    #[test]
    fn resource_limit_gives_unknown() {
        let net = split();
        let config = GameConfig {
            max_triples: 1,
            ..GameConfig::new(Flavor::Fc)
        };
        let v = decide(&net, &split_m0(), &split_m0(), 8, &config).unwrap();
        assert_eq!(v.outcome, Outcome::Unknown);
        assert!(v.evidence.is_none());
    }

    #[test]
    fn bound_is_checked_first() {
        let net = split();
        assert!(matches!(
            decide_oim(&net, &split_m0(), &split_m0(), 3),
            Err(NetError::BoundExceeded { .. })
        ));
    }
}
