//! Rink control: per-location, per-time team control of the ice.

use crate::config::Config;
use crate::grid::ScalarGrid;
use crate::motion::time_to_reach;
use crate::snapshot::{Snapshot, Triplet};
use crate::vec2::Vec2;

/// Control of the point `at` when the puck arrives there at `puck_time`,
/// on a 0 (defence) to 1 (offence) scale.
///
/// Each player contributes a charge-like weight `tau^-beta`, where `tau` is
/// her arrival delay behind the puck, floored at `tau_floor` to keep the
/// weights finite when someone beats the puck to the spot. Weights are
/// normalized by the smallest delay so arbitrarily large exponents stay
/// within f64 range.
pub fn rink_control_at(snapshot: &Snapshot, at: Vec2, puck_time: f64, cfg: &Config) -> f64 {
    let mut taus = Vec::with_capacity(snapshot.players.len());
    let mut labels = Vec::with_capacity(snapshot.players.len());
    for p in &snapshot.players {
        if cfg.exclude_passer_from_control && p.id == snapshot.passer_id {
            continue;
        }
        let arrival = time_to_reach(p, at, cfg);
        taus.push((arrival.time - puck_time).max(cfg.tau_floor));
        labels.push(p.team.label());
    }
    if taus.is_empty() {
        return 0.5;
    }
    let tau_min = taus.iter().copied().fold(f64::INFINITY, f64::min);
    let mut signed = 0.0;
    let mut total = 0.0;
    for (tau, label) in taus.iter().zip(&labels) {
        let w = if cfg.beta == 0.0 {
            1.0
        } else {
            (tau_min / tau).powf(cfg.beta)
        };
        signed += label * w;
        total += w;
    }
    (signed / total + 1.0) * 0.5
}

/// Control at a trajectory triplet: the puck-arrival time is the triplet's.
pub fn rink_control(snapshot: &Snapshot, triplet: &Triplet, cfg: &Config) -> f64 {
    rink_control_at(snapshot, triplet.point(), triplet.t, cfg)
}

/// Control sampled over the whole rink at a fixed puck-arrival time
/// (`t = 0` for current-frame maps).
pub fn control_grid(snapshot: &Snapshot, resolution: f64, t: f64, cfg: &Config) -> ScalarGrid {
    ScalarGrid::sample(
        cfg.rink_length,
        cfg.rink_width,
        resolution,
        Some(t),
        |x, y| rink_control_at(snapshot, Vec2::new(x, y), t, cfg),
    )
}
