//! Fully-concurrent and causal-net bisimilarity for finite bounded
//! Place/Transition nets.
//!
//! The crate is layered bottom-up:
//!
//! - [`multiset`], [`net`]: multisets, P/T nets and the collective token game;
//! - [`indexed`]: indexed markings and the individual token game;
//! - [`ordered`]: ordered indexed markings (tokens plus a generation preorder);
//! - [`process`]: causal nets, processes and process sequences;
//! - [`engine`]: the OIM / OIMC bisimulation games, an interleaving baseline
//!   and a process-based oracle;
//! - [`io`]: the text format and DOT export;
//! - [`corpus`]: example nets and a seeded random net generator.

pub mod corpus;
pub mod engine;
pub mod indexed;
pub mod io;
pub mod multiset;
pub mod net;
pub mod ordered;
pub mod process;
pub mod relation;
pub mod space;

pub use indexed::{IndexedMarking, Token};
pub use multiset::{Multiset, PlaceId};
pub use net::{LabelId, NetError, NetSystem, PtNet, TransitionId};
pub use ordered::Oim;
pub use process::Process;
