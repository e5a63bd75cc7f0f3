//! Pass evaluation engine for ice-hockey tracking data.
//!
//! Given a tracked game frame, the engine computes the full surface of
//! possible direct passes: interception-aware success probabilities, rink
//! control, scoring potential, and composite pass-value metrics, then
//! aggregates per-play results into player decision-making summaries.
//!
//! Module map:
//! - [`config`] / [`rink`] / [`snapshot`]: model constants, rink geometry,
//!   and the immutable per-frame state shared by everything else.
//! - [`motion`]: closed-form player and puck motion models, reachable-set
//!   queries, and pass-trajectory grids.
//! - [`control`]: rink control fields.
//! - [`scoring`]: scoring probability and location value.
//! - [`passing`]: ordered pick-up probabilities along a trajectory and pass
//!   success probability.
//! - [`metrics`]: conditional/location pass values, per-lane and per-play
//!   evaluation over the angle x speed surface.
//! - [`analysis`]: per-player decision and outcome summaries.
//! - [`ingest`]: tracking/event CSV parsing and pass-play assembly.
//! - [`export`]: CSV grids, SVG heatmaps, polar lane maps, and scatter plots.
//! - [`testkit`]: independent oracles (RK4 integrators, sequential
//!   Monte-Carlo pick-up simulation) and fixture builders. Test support
//!   only; not part of the evaluation path.

pub mod analysis;
pub mod config;
pub mod control;
pub mod export;
pub mod grid;
pub mod ingest;
pub mod metrics;
pub mod motion;
pub mod passing;
pub mod rink;
pub mod scoring;
pub mod snapshot;
pub mod testkit;
pub mod vec2;

pub use config::{Config, ConfigError};
pub use rink::Rink;
pub use snapshot::{PlayerId, PlayerState, Snapshot, SnapshotError, Team, Triplet};
pub use vec2::Vec2;
