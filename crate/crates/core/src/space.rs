//! Explicit state spaces produced by breadth-first exploration.

use std::hash::Hash;

use rustc_hash::FxHashMap;

/// An edge of an explored state space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge<L> {
    pub source: usize,
    pub label: L,
    pub target: usize,
}

/// States in discovery order plus the arcs between them.
///
/// Exploration is breadth-first over successors in the order the successor
/// function yields them, so the numbering is deterministic.
#[derive(Debug, Clone)]
pub struct StateSpace<S, L> {
    pub states: Vec<S>,
    pub arcs: Vec<Edge<L>>,
}

impl<S: Clone + Eq + Hash, L> StateSpace<S, L> {
    /// Explores everything reachable from `initial`. `successors` may fail, in
    /// which case exploration stops with that error.
    pub fn explore<E, F, I>(initial: S, mut successors: F) -> Result<Self, E>
    where
        F: FnMut(&S) -> Result<I, E>,
        I: IntoIterator<Item = (L, S)>,
    {
        let mut index: FxHashMap<S, usize> = FxHashMap::default();
        let mut states = vec![initial.clone()];
        index.insert(initial, 0);
        let mut arcs = Vec::new();
        let mut next = 0;
        while next < states.len() {
            let succ = successors(&states[next])?;
            for (label, target) in succ {
                let t = match index.get(&target) {
                    Some(&t) => t,
                    None => {
                        let t = states.len();
                        index.insert(target.clone(), t);
                        states.push(target);
                        t
                    }
                };
                arcs.push(Edge {
                    source: next,
                    label,
                    target: t,
                });
            }
            next += 1;
        }
        Ok(StateSpace { states, arcs })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn contains(&self, s: &S) -> bool {
        self.states.contains(s)
    }

    pub fn outgoing(&self, source: usize) -> impl Iterator<Item = &Edge<L>> {
        self.arcs.iter().filter(move |a| a.source == source)
    }
}
