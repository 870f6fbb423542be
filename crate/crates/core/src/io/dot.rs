//! Graphviz output. Nodes and edges are written in state-space and
//! declaration order, so the output is deterministic.

use std::fmt::Write as _;

use itertools::Itertools;

use crate::indexed::{ImLabel, IndexedMarking};
use crate::net::{PtNet, Reachability};
use crate::ordered::Oim;
use crate::process::Process;
use crate::space::StateSpace;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' | '\\' => {
                out.push('\\');
                out.push(c);
            }
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn state_space_dot<S, L>(
    name: &str,
    space: &StateSpace<S, L>,
    node: impl Fn(&S) -> String,
    edge: impl Fn(&L) -> String,
) -> String {
    let mut s = format!("digraph {name} {{\n  node [shape=box];\n");
    for (i, state) in space.states.iter().enumerate() {
        let extra = if i == 0 { ", penwidth=2" } else { "" };
        let _ = writeln!(s, "  n{i} [label={}{extra}];", quote(&node(state)));
    }
    for a in &space.arcs {
        let _ = writeln!(s, "  n{} -> n{} [label={}];", a.source, a.target, quote(&edge(&a.label)));
    }
    s.push_str("}\n");
    s
}

fn im_label(net: &PtNet, l: &ImLabel) -> String {
    format!(
        "{} {{{}}}",
        net.transition(l.transition).name,
        l.removed.iter().map(|t| t.show(net)).join(",")
    )
}

/// The collective reachability graph; the initial marking is drawn bold.
pub fn reachability_dot(net: &PtNet, r: &Reachability) -> String {
    state_space_dot("reachability", &r.graph, |m| net.show_marking(m), |t| net.transition(*t).name.clone())
}

pub fn im_dot(net: &PtNet, space: &StateSpace<IndexedMarking, ImLabel>) -> String {
    state_space_dot("indexed", space, |k| k.show(net), |l| im_label(net, l))
}

/// OIM transition system. Each node lists its tokens, then its classes of
/// equivalent tokens and the Hasse edges of the order.
pub fn oim_dot(net: &PtNet, space: &StateSpace<Oim, ImLabel>) -> String {
    state_space_dot(
        "oim",
        space,
        |o| {
            let mut lines = vec![o.marking.show(net)];
            lines.extend(
                o.equivalence_classes()
                    .into_iter()
                    .filter(|c| c.len() > 1)
                    .map(|c| c.iter().map(|t| t.show(net)).join(" ~ ")),
            );
            lines.extend(
                o.hasse_edges()
                    .into_iter()
                    .map(|(a, b)| format!("{} < {}", a.show(net), b.show(net))),
            );
            lines.join("\n")
        },
        |l| im_label(net, l),
    )
}

/// The causal net of a process: conditions as circles labelled with their
/// place, events as boxes labelled with their action.
pub fn causal_net_dot(net: &PtNet, p: &Process) -> String {
    let c = p.causal();
    let mut s = String::from("digraph causal {\n  rankdir=LR;\n");
    for b in c.condition_ids() {
        let _ = writeln!(
            s,
            "  b{} [shape=circle, label={}];",
            b.index(),
            quote(net.place_name(p.place_of(b)))
        );
    }
    for e in c.event_ids() {
        let label = net.label_name(c.event(e).label);
        let _ = writeln!(s, "  e{} [shape=box, label={}];", e.index(), quote(label));
    }
    for e in c.event_ids() {
        let ev = c.event(e);
        for b in &ev.preset {
            let _ = writeln!(s, "  b{} -> e{};", b.index(), e.index());
        }
        for b in &ev.postset {
            let _ = writeln!(s, "  e{} -> b{};", e.index(), b.index());
        }
    }
    s.push_str("}\n");
    s
}
