//! Experiment harness for canonical Ramsey search on random graphs.
//!
//! The binary wires the core library into reproducible experiments:
//! exhaustive small-case verification (`canarrow`, `k24-verify`), Monte
//! Carlo threshold sweeps (`sweep`, `report`), and the two-round exposure
//! pipeline (`two-round`), plus `gen`, `paths`, and `trichotomy` for
//! poking at individual graphs.
//!
//! # The quantifier gap
//!
//! "G arrows H canonically" quantifies over *every* edge colouring of G
//! with *any* number of colours; a sampled experiment cannot exhaust
//! that. The sweep therefore plays a fixed roster of adversary colouring
//! strategies ([`adversary`]) chosen to attack each canonical kind —
//! properness against monochromatic copies, small palettes against
//! rainbow ones, endpoint colourings for the lexicographic shapes. Sweep
//! frequencies are statements about those adversaries, not about the
//! arrowing property itself; the exhaustive commands are the ground
//! truth and exist precisely because of this gap.
//!
//! Everything is deterministic given the config: per-trial seeds are
//! stable hashes of (master seed, n, grid index, adversary, trial), so
//! results do not depend on scheduling or worker count.

pub mod adversary;
pub mod cli;
pub mod config;
pub mod k24;
pub mod report;
pub mod sweep;
pub mod two_round;
