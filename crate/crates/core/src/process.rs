//! Causal nets, processes and process sequences.
//!
//! A [`Process`] is a causal net together with its folding into a P/T net.
//! Processes grow one event at a time ([`process_extensions`]); a
//! [`ProcessSequence`] runs a process in lockstep with the ordered token game
//! through a bijection between maximal conditions and concrete tokens.

use std::fmt::Write as _;

use itertools::Itertools;
use thiserror::Error;

use crate::indexed::{IndexedMarking, Token};
use crate::multiset::{Multiset, PlaceId};
use crate::net::{LabelId, PtNet, TransitionId};
use crate::ordered::{oim_successors, successor_order, Oim};
use crate::relation::BitMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConditionId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventId(pub u32);

impl ConditionId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EventId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProcessError {
    #[error("condition {0:?} is not maximal")]
    NotMaximal(ConditionId),
    #[error("event preset does not fold onto the preset of `{0}`")]
    PresetMismatch(String),
    #[error("event postset does not fold onto the postset of `{0}`")]
    PostsetMismatch(String),
    #[error("invalid token assignment: {0}")]
    InvalidDelta(String),
    #[error("extension does not extend this process")]
    ForeignExtension,
    #[error("malformed causal net: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Condition {
    pub preset: Option<EventId>,
    pub postset: Option<EventId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Event {
    pub label: LabelId,
    pub preset: Vec<ConditionId>,
    pub postset: Vec<ConditionId>,
}

/// A node of a causal net, for flow arcs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Condition(ConditionId),
    Event(EventId),
}

/// An acyclic net with unbranched conditions and unit arc weights. Condition
/// and event ids are creation sequence numbers.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct CausalNet {
    conditions: Vec<Condition>,
    events: Vec<Event>,
}

impl CausalNet {
    /// A causal net with `n` conditions and no events.
    pub fn with_conditions(n: usize) -> Self {
        CausalNet {
            conditions: vec![
                Condition {
                    preset: None,
                    postset: None
                };
                n
            ],
            events: Vec::new(),
        }
    }

    pub fn conditions(&self) -> &[Condition] {
        &self.conditions
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn condition(&self, b: ConditionId) -> &Condition {
        &self.conditions[b.index()]
    }

    pub fn event(&self, e: EventId) -> &Event {
        &self.events[e.index()]
    }

    pub fn condition_ids(&self) -> impl Iterator<Item = ConditionId> {
        (0..self.conditions.len() as u32).map(ConditionId)
    }

    pub fn event_ids(&self) -> impl Iterator<Item = EventId> {
        (0..self.events.len() as u32).map(EventId)
    }

    /// Conditions with empty preset.
    pub fn min(&self) -> Vec<ConditionId> {
        self.condition_ids()
            .filter(|&b| self.condition(b).preset.is_none())
            .collect()
    }

    /// Conditions with empty postset.
    pub fn max(&self) -> Vec<ConditionId> {
        self.condition_ids()
            .filter(|&b| self.condition(b).postset.is_none())
            .collect()
    }

    pub fn is_max(&self, b: ConditionId) -> bool {
        self.condition(b).postset.is_none()
    }

    pub fn is_min(&self, b: ConditionId) -> bool {
        self.condition(b).preset.is_none()
    }

    /// All flow arcs: condition→event then event→condition, by event order.
    pub fn flow(&self) -> Vec<(Node, Node)> {
        let mut arcs = Vec::new();
        for (i, e) in self.events.iter().enumerate() {
            let ev = Node::Event(EventId(i as u32));
            arcs.extend(e.preset.iter().map(|&b| (Node::Condition(b), ev)));
            arcs.extend(e.postset.iter().map(|&b| (ev, Node::Condition(b))));
        }
        arcs
    }

    /// Adds a fresh event consuming `preset` and producing `n_post` fresh
    /// conditions.
    pub fn extend(
        &self,
        preset: &[ConditionId],
        label: LabelId,
        n_post: usize,
    ) -> Result<(CausalNet, EventId, Vec<ConditionId>), ProcessError> {
        let mut next = self.clone();
        let e = EventId(self.events.len() as u32);
        for &b in preset {
            if b.index() >= self.conditions.len() || !self.is_max(b) {
                return Err(ProcessError::NotMaximal(b));
            }
            next.conditions[b.index()].postset = Some(e);
        }
        if preset.iter().duplicates().next().is_some() {
            return Err(ProcessError::Malformed("repeated preset condition".into()));
        }
        let first = self.conditions.len() as u32;
        let postset: Vec<ConditionId> = (first..first + n_post as u32).map(ConditionId).collect();
        next.conditions.extend(postset.iter().map(|_| Condition {
            preset: Some(e),
            postset: None,
        }));
        next.events.push(Event {
            label,
            preset: preset.to_vec(),
            postset: postset.clone(),
        });
        Ok((next, e, postset))
    }

    /// Checks the structural conditions of a causal net.
    pub fn validate(&self) -> Result<(), ProcessError> {
        let mut consumers = vec![None; self.conditions.len()];
        let mut producers = vec![None; self.conditions.len()];
        for (i, e) in self.events.iter().enumerate() {
            let id = EventId(i as u32);
            if e.preset.iter().chain(&e.postset).duplicates().next().is_some() {
                return Err(ProcessError::Malformed(format!("arc weight above one at event {i}")));
            }
            for &b in &e.preset {
                if consumers[b.index()].replace(id).is_some() {
                    return Err(ProcessError::Malformed(format!("condition {} has two consumers", b.0)));
                }
            }
            for &b in &e.postset {
                if producers[b.index()].replace(id).is_some() {
                    return Err(ProcessError::Malformed(format!("condition {} has two producers", b.0)));
                }
            }
        }
        for (i, c) in self.conditions.iter().enumerate() {
            if c.preset != producers[i] || c.postset != consumers[i] {
                return Err(ProcessError::Malformed(format!("condition {i} has stale adjacency")));
            }
        }
        // Acyclic iff the strict successor relation closes without self-loops.
        let n = self.events.len();
        let mut step = BitMatrix::new(n, n);
        for (i, e) in self.events.iter().enumerate() {
            for &b in &e.postset {
                if let Some(c) = self.conditions[b.index()].postset {
                    step.set(i, c.index());
                }
            }
        }
        let mut reach = step.clone();
        for k in 0..n {
            for i in 0..n {
                if reach.get(i, k) {
                    for j in 0..n {
                        if reach.get(k, j) {
                            reach.set(i, j);
                        }
                    }
                }
            }
        }
        if (0..n).any(|i| reach.get(i, i)) {
            return Err(ProcessError::Malformed("flow relation is cyclic".into()));
        }
        Ok(())
    }
}

/// The partial order `≤π` on events: `e1 ≤ e2` iff there is a flow path from
/// `e1` to `e2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventOrder {
    matrix: BitMatrix,
}

impl EventOrder {
    pub fn leq(&self, a: EventId, b: EventId) -> bool {
        self.matrix.get(a.index(), b.index())
    }

    pub fn pairs(&self) -> Vec<(EventId, EventId)> {
        self.matrix
            .pairs()
            .map(|(a, b)| (EventId(a as u32), EventId(b as u32)))
            .collect()
    }

    pub fn is_partial_order(&self) -> bool {
        self.matrix.is_reflexive() && self.matrix.is_transitive() && self.matrix.is_antisymmetric()
    }

    /// Events strictly below `e`.
    pub fn strict_predecessors(&self, e: EventId) -> Vec<EventId> {
        (0..self.matrix.rows())
            .filter(|&i| i != e.index() && self.matrix.get(i, e.index()))
            .map(|i| EventId(i as u32))
            .collect()
    }
}

/// A causal net folded onto a P/T net.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Process {
    causal: CausalNet,
    fold_conditions: Vec<PlaceId>,
    fold_events: Vec<TransitionId>,
}

impl Process {
    /// The process with no events whose conditions fold onto `m0`, one
    /// condition per unit in place order.
    pub fn empty(m0: &Multiset) -> Self {
        let fold_conditions: Vec<PlaceId> = m0.units().collect();
        Process {
            causal: CausalNet::with_conditions(fold_conditions.len()),
            fold_conditions,
            fold_events: Vec::new(),
        }
    }

    /// The process with no events whose `i`-th condition folds onto
    /// `places[i]`.
    pub fn from_places(places: Vec<PlaceId>) -> Self {
        Process {
            causal: CausalNet::with_conditions(places.len()),
            fold_conditions: places,
            fold_events: Vec::new(),
        }
    }

    pub fn causal(&self) -> &CausalNet {
        &self.causal
    }

    pub fn place_of(&self, b: ConditionId) -> PlaceId {
        self.fold_conditions[b.index()]
    }

    pub fn transition_of(&self, e: EventId) -> TransitionId {
        self.fold_events[e.index()]
    }

    pub fn event_count(&self) -> usize {
        self.causal.events.len()
    }

    pub fn condition_count(&self) -> usize {
        self.causal.conditions.len()
    }

    /// `ρ(Max(C))`.
    pub fn max_marking(&self) -> Multiset {
        self.causal.max().into_iter().map(|b| self.place_of(b)).collect()
    }

    /// `ρ(Min(C))`.
    pub fn min_marking(&self) -> Multiset {
        self.causal.min().into_iter().map(|b| self.place_of(b)).collect()
    }

    /// Adds an event folded onto `t` that consumes `preset` and produces one
    /// condition per entry of `post_places`.
    pub fn extend(
        &self,
        net: &PtNet,
        preset: &[ConditionId],
        t: TransitionId,
        post_places: &[PlaceId],
    ) -> Result<(EventId, Process), ProcessError> {
        let tr = net.transition(t);
        let folded_pre: Multiset = preset.iter().map(|&b| self.place_of(b)).collect();
        if folded_pre != tr.pre {
            return Err(ProcessError::PresetMismatch(tr.name.clone()));
        }
        let folded_post: Multiset = post_places.iter().copied().collect();
        if folded_post != tr.post {
            return Err(ProcessError::PostsetMismatch(tr.name.clone()));
        }
        let (causal, e, _) = self.causal.extend(preset, tr.label, post_places.len())?;
        let mut fold_conditions = self.fold_conditions.clone();
        fold_conditions.extend_from_slice(post_places);
        let mut fold_events = self.fold_events.clone();
        fold_events.push(t);
        Ok((
            e,
            Process {
                causal,
                fold_conditions,
                fold_events,
            },
        ))
    }

    /// Checks that this is a process of `N(m0)`.
    pub fn validate(&self, net: &PtNet, m0: &Multiset) -> Result<(), ProcessError> {
        self.causal.validate()?;
        if self.min_marking() != *m0 {
            return Err(ProcessError::Malformed("minimal conditions do not fold onto m0".into()));
        }
        for e in self.causal.event_ids() {
            let ev = self.causal.event(e);
            let tr = net.transition(self.transition_of(e));
            if ev.label != tr.label {
                return Err(ProcessError::Malformed("label not preserved".into()));
            }
            let pre: Multiset = ev.preset.iter().map(|&b| self.place_of(b)).collect();
            if pre != tr.pre {
                return Err(ProcessError::PresetMismatch(tr.name.clone()));
            }
            let post: Multiset = ev.postset.iter().map(|&b| self.place_of(b)).collect();
            if post != tr.post {
                return Err(ProcessError::PostsetMismatch(tr.name.clone()));
            }
        }
        Ok(())
    }

    pub fn event_order(&self) -> EventOrder {
        let n = self.event_count();
        let mut step = BitMatrix::new(n, n);
        for (i, e) in self.causal.events.iter().enumerate() {
            for &b in &e.preset {
                if let Some(p) = self.causal.condition(b).preset {
                    step.set(p.index(), i);
                }
            }
        }
        EventOrder {
            matrix: step.closure(),
        }
    }

    /// Canonical form used to recognise the same process reached through
    /// different interleavings.
    ///
    /// Events are sorted by depth, then by `tag`, then by their preset written
    /// in canonical condition names. Minimal conditions keep their creation
    /// index and generated conditions are named by their producer's canonical
    /// index and position in its postset. Returns the canonical event list and
    /// the canonical position of every event.
    pub fn canonical_form<T: Ord + Clone>(
        &self,
        tag: impl Fn(EventId) -> T,
    ) -> (Vec<(T, Vec<CondName>)>, Vec<u32>) {
        let n = self.event_count();
        let mut depth = vec![0usize; n];
        for (i, e) in self.causal.events.iter().enumerate() {
            depth[i] = e
                .preset
                .iter()
                .filter_map(|&b| self.causal.condition(b).preset)
                .map(|p| depth[p.index()] + 1)
                .max()
                .unwrap_or(0);
        }
        let mut rank = vec![u32::MAX; n];
        let mut out = Vec::with_capacity(n);
        let max_depth = depth.iter().copied().max().unwrap_or(0);
        for d in 0..=max_depth {
            let mut level: Vec<(T, Vec<CondName>, usize)> = (0..n)
                .filter(|&i| depth[i] == d)
                .map(|i| {
                    let ev = &self.causal.events[i];
                    let mut names: Vec<CondName> =
                        ev.preset.iter().map(|&b| self.cond_name(b, &rank)).collect();
                    names.sort_unstable();
                    (tag(EventId(i as u32)), names, i)
                })
                .collect();
            level.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
            for (t, names, i) in level {
                rank[i] = out.len() as u32;
                out.push((t, names));
            }
        }
        (out, rank)
    }

    /// Event presets in the canonical names induced by `rank`, listed in rank
    /// order. `rank` usually comes from the canonical form of a partner
    /// process with the same number of events.
    pub fn presets_under(&self, rank: &[u32]) -> Vec<Vec<CondName>> {
        let mut out = vec![Vec::new(); self.event_count()];
        for (i, e) in self.causal.events.iter().enumerate() {
            let mut names: Vec<CondName> = e.preset.iter().map(|&b| self.cond_name(b, rank)).collect();
            names.sort_unstable();
            out[rank[i] as usize] = names;
        }
        out
    }

    fn cond_name(&self, b: ConditionId, rank: &[u32]) -> CondName {
        match self.causal.condition(b).preset {
            None => CondName::Min(b.0),
            Some(e) => {
                let pos = self
                    .causal
                    .event(e)
                    .postset
                    .iter()
                    .position(|&c| c == b)
                    .expect("producer lists its postset");
                CondName::Post(rank[e.index()], pos as u32)
            }
        }
    }

    pub fn show(&self, net: &PtNet) -> String {
        let mut s = String::new();
        let conds = self
            .causal
            .condition_ids()
            .map(|b| format!("b{}:{}", b.0, net.place_name(self.place_of(b))))
            .join(" ");
        let _ = write!(s, "conditions [{conds}]");
        for e in self.causal.event_ids() {
            let ev = self.causal.event(e);
            let _ = write!(
                s,
                " e{}:{}({}) [{}] -> [{}]",
                e.0,
                net.transition(self.transition_of(e)).name,
                net.label_name(ev.label),
                ev.preset.iter().map(|b| format!("b{}", b.0)).join(" "),
                ev.postset.iter().map(|b| format!("b{}", b.0)).join(" ")
            );
        }
        s
    }
}

/// Canonical condition name inside [`Process::canonical_form`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CondName {
    Min(u32),
    Post(u32, u32),
}

/// `empty_process(N, m0)`; the net is not needed beyond documenting intent.
pub fn empty_process(_net: &PtNet, m0: &Multiset) -> Process {
    Process::empty(m0)
}

/// One way of growing a process by a single event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    pub event: EventId,
    pub transition: TransitionId,
    pub preset: Vec<ConditionId>,
    pub process: Process,
}

/// Every pair `(t, B')` with `B' ⊆ Max(C)` folding onto `•t`, in transition
/// declaration order and then lexicographic order of `B'`. New conditions fold
/// onto the units of `t•` in place order.
pub fn process_extensions(net: &PtNet, p: &Process) -> Vec<Extension> {
    let max = p.causal.max();
    let mut out = Vec::new();
    for t in net.transition_ids() {
        for preset in preset_choices(&max, |b| p.place_of(b), &net.transition(t).pre) {
            let post: Vec<PlaceId> = net.transition(t).post.units().collect();
            let (event, process) = p
                .extend(net, &preset, t, &post)
                .expect("preset chosen among maximal conditions");
            out.push(Extension {
                event,
                transition: t,
                preset,
                process,
            });
        }
    }
    out
}

/// All subsets of `max` whose folding equals `pre`, each sorted.
pub fn preset_choices(
    max: &[ConditionId],
    place_of: impl Fn(ConditionId) -> PlaceId,
    pre: &Multiset,
) -> Vec<Vec<ConditionId>> {
    let mut per_place = Vec::new();
    for (s, n) in pre.iter() {
        let on_s: Vec<ConditionId> = max.iter().copied().filter(|&b| place_of(b) == s).collect();
        if on_s.len() < n as usize {
            return Vec::new();
        }
        per_place.push(on_s.into_iter().combinations(n as usize).collect::<Vec<_>>());
    }
    if per_place.is_empty() {
        return Vec::new();
    }
    per_place
        .into_iter()
        .multi_cartesian_product()
        .map(|choice| {
            let mut v: Vec<ConditionId> = choice.into_iter().flatten().collect();
            v.sort_unstable();
            v
        })
        .collect()
}

/// A process run in lockstep with the ordered token game.
///
/// `delta` maps every maximal condition to the token it denotes; entries of
/// non-maximal conditions are `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessSequence {
    pub process: Process,
    pub trace: Vec<EventId>,
    pub k0: IndexedMarking,
    pub oim: Oim,
    delta: Vec<Option<Token>>,
}

/// All place-respecting bijections from `places[i]` to tokens of `pool`,
/// written as `assignment[i]`.
pub fn place_respecting_bijections(places: &[PlaceId], pool: &[Token]) -> Vec<Vec<Token>> {
    fn go(
        i: usize,
        places: &[PlaceId],
        pool: &[Token],
        used: &mut Vec<bool>,
        cur: &mut Vec<Token>,
        out: &mut Vec<Vec<Token>>,
    ) {
        if i == places.len() {
            out.push(cur.clone());
            return;
        }
        for (j, tok) in pool.iter().enumerate() {
            if !used[j] && tok.place == places[i] {
                used[j] = true;
                cur.push(*tok);
                go(i + 1, places, pool, used, cur, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    if places.len() != pool.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    go(0, places, pool, &mut vec![false; pool.len()], &mut Vec::new(), &mut out);
    out
}

fn check_bijection(places: &[PlaceId], pool: &[Token], assignment: &[Token]) -> Result<(), ProcessError> {
    if assignment.len() != places.len() || pool.len() != places.len() {
        return Err(ProcessError::InvalidDelta(format!(
            "expected {} tokens, got {}",
            pool.len(),
            assignment.len()
        )));
    }
    for (i, tok) in assignment.iter().enumerate() {
        if tok.place != places[i] {
            return Err(ProcessError::InvalidDelta(format!("token {tok} is on the wrong place")));
        }
        if !pool.contains(tok) {
            return Err(ProcessError::InvalidDelta(format!("token {tok} is not available")));
        }
    }
    if assignment.iter().duplicates().next().is_some() {
        return Err(ProcessError::InvalidDelta("token assigned twice".into()));
    }
    Ok(())
}

impl ProcessSequence {
    /// The empty process sequence for `N(k0)`, with `delta0[i]` the token of
    /// the `i`-th condition of the empty process.
    pub fn init(k0: &IndexedMarking, delta0: &[Token]) -> Result<Self, ProcessError> {
        let process = Process::empty(&k0.alpha());
        check_bijection(&process.fold_conditions, k0.tokens(), delta0)?;
        Ok(ProcessSequence {
            process,
            trace: Vec::new(),
            k0: k0.clone(),
            oim: Oim::initial(k0),
            delta: delta0.iter().copied().map(Some).collect(),
        })
    }

    /// Every valid `delta0` for `k0`.
    pub fn initial_deltas(k0: &IndexedMarking) -> Vec<Vec<Token>> {
        let places: Vec<PlaceId> = k0.alpha().units().collect();
        place_respecting_bijections(&places, k0.tokens())
    }

    pub fn delta(&self, b: ConditionId) -> Option<Token> {
        self.delta.get(b.index()).copied().flatten()
    }

    /// Tokens created by `⊞` when firing `ext` from this sequence.
    fn step_parts(
        &self,
        net: &PtNet,
        ext: &Extension,
    ) -> Result<(Vec<Token>, IndexedMarking, IndexedMarking), ProcessError> {
        let old = &self.process;
        let new = &ext.process;
        if new.event_count() != old.event_count() + 1
            || ext.event.index() != old.event_count()
            || new.causal.events[..old.event_count()] != old.causal.events[..]
            || new.fold_conditions[..old.condition_count()] != old.fold_conditions[..]
            || new.fold_events[..old.event_count()] != old.fold_events[..]
        {
            return Err(ProcessError::ForeignExtension);
        }
        let removed: Vec<Token> = ext
            .preset
            .iter()
            .map(|&b| self.delta(b).ok_or(ProcessError::NotMaximal(b)))
            .collect::<Result<_, _>>()?;
        let untouched = self.oim.marking.without(&removed);
        let post: Multiset = new.causal.event(ext.event)
            .postset
            .iter()
            .map(|&b| new.place_of(b))
            .collect();
        debug_assert_eq!(post, net.transition(ext.transition).post);
        let result = untouched.box_plus(&post);
        Ok((removed, untouched, result))
    }

    /// Place-respecting bijections from the new conditions of `ext` onto the
    /// tokens that firing it creates.
    pub fn new_token_assignments(&self, net: &PtNet, ext: &Extension) -> Result<Vec<Vec<Token>>, ProcessError> {
        let (_, untouched, result) = self.step_parts(net, ext)?;
        let created = result.minus(&untouched);
        let places: Vec<PlaceId> = ext
            .process
            .causal
            .event(ext.event)
            .postset
            .iter()
            .map(|&b| ext.process.place_of(b))
            .collect();
        Ok(place_respecting_bijections(&places, &created))
    }

    /// Extends the sequence by `ext`, mapping the `i`-th new condition to
    /// `assignment[i]`.
    pub fn step(&self, net: &PtNet, ext: &Extension, assignment: &[Token]) -> Result<Self, ProcessError> {
        let (removed, untouched, result) = self.step_parts(net, ext)?;
        let created = result.minus(&untouched);
        let post = &ext.process.causal.event(ext.event).postset;
        let places: Vec<PlaceId> = post.iter().map(|&b| ext.process.place_of(b)).collect();
        check_bijection(&places, &created, assignment)?;

        let order = successor_order(&self.oim, &removed, &untouched, &result);
        let mut delta = self.delta.clone();
        for &b in &ext.preset {
            delta[b.index()] = None;
        }
        delta.resize(ext.process.condition_count(), None);
        for (&b, &tok) in post.iter().zip(assignment) {
            delta[b.index()] = Some(tok);
        }
        let mut trace = self.trace.clone();
        trace.push(ext.event);
        Ok(ProcessSequence {
            process: ext.process.clone(),
            trace,
            k0: self.k0.clone(),
            oim: Oim {
                marking: result,
                order,
            },
            delta,
        })
    }

    /// Checks that `delta` is a place-respecting bijection from `Max(C)` onto
    /// the current tokens.
    pub fn delta_is_bijective(&self) -> bool {
        let max = self.process.causal.max();
        let mut image: Vec<Token> = Vec::new();
        for &b in &max {
            match self.delta(b) {
                Some(t) if t.place == self.process.place_of(b) => image.push(t),
                _ => return false,
            }
        }
        image.sort_unstable();
        let non_max = self
            .process
            .causal
            .condition_ids()
            .filter(|&b| !self.process.causal.is_max(b))
            .all(|b| self.delta(b).is_none());
        non_max && image == self.oim.marking.tokens()
    }
}

/// A pair of maximal conditions on which the order of the ordered token game
/// and the process order disagree.
/// Calls `visit` on every process sequence of `net` from `k0` with at most
/// `max_len` events, over all initial and new-token assignments.
pub fn for_each_sequence(net: &PtNet, k0: &IndexedMarking, max_len: usize, mut visit: impl FnMut(&ProcessSequence)) {
    fn go(net: &PtNet, ps: &ProcessSequence, left: usize, visit: &mut impl FnMut(&ProcessSequence)) {
        visit(ps);
        if left == 0 {
            return;
        }
        for ext in process_extensions(net, &ps.process) {
            for a in ps.new_token_assignments(net, &ext).expect("extension of this process") {
                let next = ps.step(net, &ext, &a).expect("valid assignment");
                go(net, &next, left - 1, visit);
            }
        }
    }
    for d in ProcessSequence::initial_deltas(k0) {
        let ps = ProcessSequence::init(k0, &d).expect("initial assignment");
        go(net, &ps, max_len, &mut visit);
    }
}

/// Whether the ordered token game and process extension agree one step
/// ahead of `ps`: every extension step lands on the OIM reached by firing the
/// same transition on the tokens its preset maps to, and every OIM firing is
/// matched by some extension step.
pub fn step_correspondence_holds(net: &PtNet, ps: &ProcessSequence) -> bool {
    let moves = oim_successors(net, &ps.oim);
    let mut covered = vec![false; moves.len()];
    for ext in process_extensions(net, &ps.process) {
        let mut removed: Vec<Token> = match ext.preset.iter().map(|&b| ps.delta(b)).collect() {
            Some(r) => r,
            None => return false,
        };
        removed.sort_unstable();
        let Ok(assignments) = ps.new_token_assignments(net, &ext) else {
            return false;
        };
        for a in assignments {
            let Ok(next) = ps.step(net, &ext, &a) else {
                return false;
            };
            match moves
                .iter()
                .position(|m| m.transition == ext.transition && m.removed == removed && m.result == next.oim)
            {
                Some(i) => covered[i] = true,
                None => return false,
            }
        }
    }
    covered.into_iter().all(|c| c)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherenceViolation {
    pub lower: ConditionId,
    pub upper: ConditionId,
    pub token_order: bool,
    pub process_order: bool,
}

/// For all maximal `b, b'`: `δ(b) ≤ δ(b')` iff `b` is minimal with
/// `δ(b) ∈ k0`, or both have producers with `•b ≤π •b'`.
pub fn coherence_violations(ps: &ProcessSequence) -> Vec<CoherenceViolation> {
    let causal = ps.process.causal();
    let order = ps.process.event_order();
    let max = causal.max();
    let mut violations = Vec::new();
    for &b in &max {
        for &b2 in &max {
            let (d, d2) = (ps.delta(b).unwrap(), ps.delta(b2).unwrap());
            let token_order = ps.oim.leq(&d, &d2);
            let from_min = causal.is_min(b) && ps.k0.contains(&d);
            let from_events = match (causal.condition(b).preset, causal.condition(b2).preset) {
                (Some(e), Some(e2)) => order.leq(e, e2),
                _ => false,
            };
            let process_order = from_min || from_events;
            if token_order != process_order {
                violations.push(CoherenceViolation {
                    lower: b,
                    upper: b2,
                    token_order,
                    process_order,
                });
            }
        }
    }
    violations
}

/// Maximal conditions that are also minimal must denote initial tokens lying
/// below every current token.
pub fn minimality_holds(ps: &ProcessSequence) -> bool {
    let causal = ps.process.causal();
    let max = causal.max();
    max.iter().filter(|&&b| causal.is_min(b)).all(|&b| {
        let d = ps.delta(b).unwrap();
        ps.k0.contains(&d) && max.iter().all(|&b2| ps.oim.leq(&d, &ps.delta(b2).unwrap()))
    })
}
