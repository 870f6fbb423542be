//! The line-based net format and Graphviz export.

mod dot;
mod text;

pub use dot::{causal_net_dot, im_dot, oim_dot, reachability_dot};
pub use text::{parse_net, ErrorKind, NetDocument, ParseError};
