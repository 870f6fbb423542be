//! Labelled Place/Transition nets and the collective token game.

use std::fmt;

use rustc_hash::FxHashSet;
use thiserror::Error;

use crate::multiset::{Multiset, PlaceId};
use crate::space::StateSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransitionId(pub u32);

impl TransitionId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelId(pub u32);

impl LabelId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetError {
    #[error("place `{0}` declared twice")]
    DuplicatePlace(String),
    #[error("transition `{0}` declared twice")]
    DuplicateTransition(String),
    #[error("place {0} is not declared")]
    UnknownPlace(PlaceId),
    #[error("transition `{0}` has an empty preset")]
    EmptyPreset(String),
    #[error("transition `{transition}` is not enabled at {marking}")]
    NotEnabled { transition: String, marking: String },
    #[error("place `{place}` holds {count} tokens in reachable marking {marking}, exceeding the cap {cap}")]
    BoundExceeded {
        place: String,
        count: u32,
        cap: u32,
        marking: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transition {
    pub name: String,
    pub label: LabelId,
    pub pre: Multiset,
    pub post: Multiset,
}

/// A finite labelled P/T net `(S, A, T)`.
///
/// Places, labels and transitions are referred to by their declaration
/// ordinal; names are kept only for presentation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PtNet {
    places: Vec<String>,
    labels: Vec<String>,
    transitions: Vec<Transition>,
}

impl PtNet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_place(&mut self, name: &str) -> Result<PlaceId, NetError> {
        if self.place_by_name(name).is_some() {
            return Err(NetError::DuplicatePlace(name.to_owned()));
        }
        self.places.push(name.to_owned());
        Ok(PlaceId(self.places.len() as u32 - 1))
    }

    /// Returns the id of `name`, registering it if it is new.
    pub fn intern_label(&mut self, name: &str) -> LabelId {
        if let Some(i) = self.labels.iter().position(|l| l == name) {
            return LabelId(i as u32);
        }
        self.labels.push(name.to_owned());
        LabelId(self.labels.len() as u32 - 1)
    }

    pub fn add_transition(
        &mut self,
        name: &str,
        label: &str,
        pre: Multiset,
        post: Multiset,
    ) -> Result<TransitionId, NetError> {
        if self.transition_by_name(name).is_some() {
            return Err(NetError::DuplicateTransition(name.to_owned()));
        }
        if pre.is_empty() {
            return Err(NetError::EmptyPreset(name.to_owned()));
        }
        for p in pre.support().chain(post.support()) {
            if p.index() >= self.places.len() {
                return Err(NetError::UnknownPlace(p));
            }
        }
        let label = self.intern_label(label);
        self.transitions.push(Transition {
            name: name.to_owned(),
            label,
            pre,
            post,
        });
        Ok(TransitionId(self.transitions.len() as u32 - 1))
    }

    pub fn place_count(&self) -> usize {
        self.places.len()
    }

    pub fn places(&self) -> impl Iterator<Item = PlaceId> {
        (0..self.places.len() as u32).map(PlaceId)
    }

    pub fn place_name(&self, p: PlaceId) -> &str {
        &self.places[p.index()]
    }

    pub fn place_by_name(&self, name: &str) -> Option<PlaceId> {
        self.places
            .iter()
            .position(|p| p == name)
            .map(|i| PlaceId(i as u32))
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_name(&self, l: LabelId) -> &str {
        &self.labels[l.index()]
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn transition_ids(&self) -> impl Iterator<Item = TransitionId> {
        (0..self.transitions.len() as u32).map(TransitionId)
    }

    pub fn transition(&self, t: TransitionId) -> &Transition {
        &self.transitions[t.index()]
    }

    pub fn transition_by_name(&self, name: &str) -> Option<TransitionId> {
        self.transitions
            .iter()
            .position(|t| t.name == name)
            .map(|i| TransitionId(i as u32))
    }

    pub fn label_of(&self, t: TransitionId) -> LabelId {
        self.transitions[t.index()].label
    }

    /// Renders a multiset with place names, e.g. `s1 + 3*s2`; `0` for θ.
    pub fn show_marking(&self, m: &Multiset) -> String {
        if m.is_empty() {
            return "0".to_owned();
        }
        m.iter()
            .map(|(p, n)| {
                if n == 1 {
                    self.place_name(p).to_owned()
                } else {
                    format!("{n}*{}", self.place_name(p))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Transitions enabled at `m`, in declaration order.
    pub fn enabled(&self, m: &Multiset) -> Vec<TransitionId> {
        self.transition_ids()
            .filter(|&t| self.transition(t).pre.is_subset_of(m))
            .collect()
    }

    pub fn is_enabled(&self, m: &Multiset, t: TransitionId) -> bool {
        self.transition(t).pre.is_subset_of(m)
    }

    /// `(m ⊖ •t) ⊕ t•`.
    pub fn fire(&self, m: &Multiset, t: TransitionId) -> Result<Multiset, NetError> {
        let tr = self.transition(t);
        if !tr.pre.is_subset_of(m) {
            return Err(NetError::NotEnabled {
                transition: tr.name.clone(),
                marking: self.show_marking(m),
            });
        }
        Ok(m.difference(&tr.pre).sum(&tr.post))
    }

    /// Checks that `m` respects `cap` on every place.
    pub fn check_cap(&self, m: &Multiset, cap: u32) -> Result<(), NetError> {
        match m.iter().find(|&(_, n)| n > cap) {
            Some((p, n)) => Err(NetError::BoundExceeded {
                place: self.place_name(p).to_owned(),
                count: n,
                cap,
                marking: self.show_marking(m),
            }),
            None => Ok(()),
        }
    }

    /// Explores `[m0⟩`, failing as soon as a marking exceeds `cap` on some place.
    pub fn reachable(&self, m0: &Multiset, cap: u32) -> Result<Reachability, NetError> {
        self.check_cap(m0, cap)?;
        let graph = StateSpace::explore(m0.clone(), |m| {
            self.enabled(m)
                .into_iter()
                .map(|t| {
                    let next = self.fire(m, t)?;
                    self.check_cap(&next, cap)?;
                    Ok((t, next))
                })
                .collect::<Result<Vec<_>, NetError>>()
        })?;
        let bound = graph.states.iter().map(Multiset::max_count).max().unwrap_or(0);
        Ok(Reachability { graph, bound })
    }
}

/// A marked net `N(m0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetSystem {
    pub net: PtNet,
    pub initial: Multiset,
}

impl NetSystem {
    pub fn new(net: PtNet, initial: Multiset) -> Result<Self, NetError> {
        if let Some(p) = initial.support().find(|p| p.index() >= net.place_count()) {
            return Err(NetError::UnknownPlace(p));
        }
        Ok(NetSystem { net, initial })
    }

    pub fn reachable(&self, cap: u32) -> Result<Reachability, NetError> {
        self.net.reachable(&self.initial, cap)
    }
}

/// The reachability graph of a marked net together with its least bound.
#[derive(Debug, Clone)]
pub struct Reachability {
    pub graph: StateSpace<Multiset, TransitionId>,
    /// Least `k` such that the net is `k`-bounded.
    pub bound: u32,
}

impl Reachability {
    pub fn markings(&self) -> &[Multiset] {
        &self.graph.states
    }

    pub fn marking_set(&self) -> FxHashSet<Multiset> {
        self.graph.states.iter().cloned().collect()
    }
}

impl fmt::Display for TransitionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// Two a-labelled transitions: `s1 -> s2` and `s3 -> 0`.
    pub fn two_a() -> PtNet {
        let mut net = PtNet::new();
        let s1 = net.add_place("s1").unwrap();
        let s2 = net.add_place("s2").unwrap();
        let s3 = net.add_place("s3").unwrap();
        net.add_transition("t1", "a", Multiset::singleton(s1, 1), Multiset::singleton(s2, 1))
            .unwrap();
        net.add_transition("t2", "a", Multiset::singleton(s3, 1), Multiset::empty())
            .unwrap();
        net
    }

    /// `t1 u : s1 -> 2*s2`, `t2 v : s2 -> s3`.
    pub fn split() -> PtNet {
        let mut net = PtNet::new();
        let s1 = net.add_place("s1").unwrap();
        let s2 = net.add_place("s2").unwrap();
        let s3 = net.add_place("s3").unwrap();
        net.add_transition("t1", "u", Multiset::singleton(s1, 1), Multiset::singleton(s2, 2))
            .unwrap();
        net.add_transition("t2", "v", Multiset::singleton(s2, 1), Multiset::singleton(s3, 1))
            .unwrap();
        net
    }

    pub fn split_m0() -> Multiset {
        Multiset::from_counts(vec![1, 3])
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    /// Independent breadth-first enumeration over plain count vectors.
    fn brute_force_reachable(net: &PtNet, m0: Vec<u32>) -> Vec<Vec<u32>> {
        let n = net.place_count();
        let mut m0 = m0;
        m0.resize(n, 0);
        let mut seen = vec![m0.clone()];
        let mut frontier = vec![m0];
        while let Some(m) = frontier.pop() {
            for t in net.transitions() {
                let pre: Vec<u32> = (0..n).map(|i| t.pre.get(PlaceId(i as u32))).collect();
                let post: Vec<u32> = (0..n).map(|i| t.post.get(PlaceId(i as u32))).collect();
                if (0..n).all(|i| pre[i] <= m[i]) {
                    let next: Vec<u32> = (0..n).map(|i| m[i] - pre[i] + post[i]).collect();
                    if !seen.contains(&next) {
                        seen.push(next.clone());
                        frontier.push(next);
                    }
                }
            }
        }
        seen
    }

    #[test]
    fn enabled_at_split_initial() {
        let net = split();
        assert_eq!(net.enabled(&split_m0()), vec![TransitionId(0), TransitionId(1)]);
        assert!(net.enabled(&Multiset::empty()).is_empty());
    }

    #[test]
    fn enabled_two_a_at_s3() {
        let net = two_a();
        let s3 = net.place_by_name("s3").unwrap();
        assert_eq!(net.enabled(&Multiset::singleton(s3, 1)), vec![TransitionId(1)]);
    }

    #[test]
    fn fire_split_sequence() {
        let net = split();
        let m1 = net.fire(&split_m0(), TransitionId(1)).unwrap();
        assert_eq!(m1, Multiset::from_counts(vec![1, 2, 1]));
        let m2 = net.fire(&m1, TransitionId(0)).unwrap();
        assert_eq!(m2, Multiset::from_counts(vec![0, 4, 1]));
    }

    #[test]
    fn fire_self_loop_and_not_enabled() {
        let mut net = PtNet::new();
        let s = net.add_place("s").unwrap();
        let t = net
            .add_transition("t", "a", Multiset::singleton(s, 1), Multiset::singleton(s, 1))
            .unwrap();
        let m = Multiset::singleton(s, 1);
        assert_eq!(net.fire(&m, t).unwrap(), m);
        assert!(matches!(
            net.fire(&Multiset::empty(), t),
            Err(NetError::NotEnabled { .. })
        ));
    }

    #[test]
    fn split_reachability_matches_brute_force() {
        let net = split();
        let r = net.reachable(&split_m0(), 5).unwrap();
        let oracle = brute_force_reachable(&net, vec![1, 3, 0]);
        assert_eq!(oracle.len(), 10);
        assert_eq!(r.markings().len(), 10);
        for m in oracle {
            assert!(r.marking_set().contains(&Multiset::from_counts(m)));
        }
        assert_eq!(r.bound, 5);
        assert!(matches!(
            net.reachable(&split_m0(), 4),
            Err(NetError::BoundExceeded { cap: 4, .. })
        ));
    }

    #[test]
    fn dead_net_reaches_only_initial() {
        let net = two_a();
        let s2 = net.place_by_name("s2").unwrap();
        let r = net.reachable(&Multiset::singleton(s2, 2), 3).unwrap();
        assert_eq!(r.markings(), &[Multiset::singleton(s2, 2)]);
        assert_eq!(r.bound, 2);
    }

    #[test]
    fn growing_place_exceeds_cap() {
        let mut net = PtNet::new();
        let s = net.add_place("s").unwrap();
        net.add_transition("t", "a", Multiset::singleton(s, 1), Multiset::singleton(s, 2))
            .unwrap();
        let err = net.reachable(&Multiset::singleton(s, 1), 3).unwrap_err();
        assert!(matches!(err, NetError::BoundExceeded { count: 4, .. }));
    }

    #[test]
    fn construction_errors() {
        let mut net = PtNet::new();
        let s = net.add_place("s").unwrap();
        assert_eq!(net.add_place("s"), Err(NetError::DuplicatePlace("s".into())));
        assert_eq!(
            net.add_transition("t", "a", Multiset::empty(), Multiset::singleton(s, 1)),
            Err(NetError::EmptyPreset("t".into()))
        );
        assert_eq!(
            net.add_transition("t", "a", Multiset::singleton(PlaceId(4), 1), Multiset::empty()),
            Err(NetError::UnknownPlace(PlaceId(4)))
        );
        net.add_transition("t", "a", Multiset::singleton(s, 1), Multiset::empty())
            .unwrap();
        assert_eq!(
            net.add_transition("t", "b", Multiset::singleton(s, 1), Multiset::empty()),
            Err(NetError::DuplicateTransition("t".into()))
        );
    }
}
