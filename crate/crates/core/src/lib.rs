//! Canonical Ramsey structures for even cycles in sparse random graphs.
//!
//! The crate is organised around the objects that show up when one asks
//! whether every edge colouring of a graph forces a monochromatic, rainbow,
//! or lexicographic copy of a target cycle:
//!
//! * [`graph`] — plain, coloured, and oriented graphs with bitset adjacency,
//!   plus `G(n,p)` sampling with a reproducible seeding contract and a
//!   statistical verifier for standard random-graph properties.
//! * [`patterns`] — vertex orderings, lexicographic colour patterns, edge
//!   partitions, canonical-copy search, and the arrow deciders.
//! * [`paths`] — path-count tables, rainbow-focused graphs, local density,
//!   and the mono / lex-all / dense trichotomy.
//! * [`heavy`] — heavy-colour classification of vertices, colour allocations
//!   with the ★ sentinel, light/balanced edge classes, and the layered
//!   construction with its admissible-path counts.
//! * [`cycles`] — even-cycle censuses, relative Turán checks, acyclic cycle
//!   orientations, tournaments, and transitive-subtournament extraction.
//! * [`regularity`] — exact-rational pair densities, (δ,p)-regularity,
//!   upper uniformity, reduced digraphs, and transversal cycle counts.
//!
//! Everything is deterministic given the seeds stored in the inputs; sampled
//! verification modes say so in their reports instead of pretending to be
//! exhaustive.

pub mod cycles;
pub mod error;
pub mod graph;
pub mod heavy;
pub mod paths;
pub mod patterns;
pub mod rational;
pub mod regularity;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Colour identifier. An unbounded colour alphabet is represented by dense
/// ids `0..c`; the ★ sentinel used by colour allocations lives in
/// [`heavy::LambdaValue`], never in edge colourings.
pub type Colour = u32;

/// Vertex identifier (index into `0..n`).
pub type Vertex = usize;
