//! Strong bisimilarity on the collective reachability graph, with transition
//! labels as actions.

use std::time::Instant;

use rustc_hash::FxHashMap;

use super::{Outcome, Stats, Verdict};
use crate::multiset::Multiset;
use crate::net::{LabelId, NetError, PtNet};

/// A labelled transition system with states `0..n`.
#[derive(Debug, Clone, Default)]
pub struct Lts {
    pub states: Vec<Multiset>,
    pub edges: Vec<Vec<(LabelId, usize)>>,
}

impl Lts {
    /// The union of the reachability graphs from every marking in `roots`.
    pub fn collective(net: &PtNet, roots: &[&Multiset], cap: u32) -> Result<Self, NetError> {
        let mut lts = Lts::default();
        let mut index: FxHashMap<Multiset, usize> = FxHashMap::default();
        for root in roots {
            let reach = net.reachable(root, cap)?;
            let ids: Vec<usize> = reach
                .graph
                .states
                .iter()
                .map(|m| {
                    *index.entry(m.clone()).or_insert_with(|| {
                        lts.states.push(m.clone());
                        lts.edges.push(Vec::new());
                        lts.states.len() - 1
                    })
                })
                .collect();
            for arc in &reach.graph.arcs {
                let e = (net.label_of(arc.label), ids[arc.target]);
                let out = &mut lts.edges[ids[arc.source]];
                if !out.contains(&e) {
                    out.push(e);
                }
            }
        }
        Ok(lts)
    }

    pub fn state(&self, m: &Multiset) -> Option<usize> {
        self.states.iter().position(|s| s == m)
    }

    /// The coarsest stable partition, as a block number per state. Blocks are
    /// refined by signatures until their count stops growing.
    pub fn bisimulation_classes(&self) -> Vec<usize> {
        let n = self.states.len();
        let mut block = vec![0usize; n];
        let mut count = usize::from(n > 0);
        loop {
            let mut ids: FxHashMap<(usize, Vec<(LabelId, usize)>), usize> = FxHashMap::default();
            let next: Vec<usize> = (0..n)
                .map(|s| {
                    let mut sig: Vec<(LabelId, usize)> =
                        self.edges[s].iter().map(|&(l, t)| (l, block[t])).collect();
                    sig.sort_unstable();
                    sig.dedup();
                    let fresh = ids.len();
                    *ids.entry((block[s], sig)).or_insert(fresh)
                })
                .collect();
            let new_count = ids.len();
            block = next;
            if new_count == count {
                return block;
            }
            count = new_count;
        }
    }
}

/// Interleaving bisimilarity of `m1` and `m2`.
pub fn decide_interleaving(net: &PtNet, m1: &Multiset, m2: &Multiset, cap: u32) -> Result<Verdict, NetError> {
    let start = Instant::now();
    let lts = Lts::collective(net, &[m1, m2], cap)?;
    let blocks = lts.bisimulation_classes();
    let (a, b) = (lts.state(m1).expect("root"), lts.state(m2).expect("root"));
    let outcome = if blocks[a] == blocks[b] {
        Outcome::Equivalent
    } else {
        Outcome::NotEquivalent
    };
    Ok(Verdict {
        outcome,
        evidence: None,
        stats: Stats {
            explored: lts.states.len(),
            elapsed: start.elapsed(),
        },
    })
}
