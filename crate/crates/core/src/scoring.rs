//! Scoring probability surface and location value.

use crate::config::Config;
use crate::control::rink_control;
use crate::grid::ScalarGrid;
use crate::snapshot::{Snapshot, Triplet};
use crate::vec2::Vec2;

/// Distance-only scoring decay: a squared-exponential kernel centered on the
/// goal with separate x and y length scales.
pub fn raw_scoring_probability(p: Vec2, cfg: &Config) -> f64 {
    let dx = p.x - cfg.goal_x;
    let dy = p.y - cfg.goal_y;
    (-(dx * dx / cfg.ell_x + dy * dy / cfg.ell_y)).exp()
}

/// Scoring probability with the shot-angle adjustment.
///
/// `sin(theta)` is 1 straight out from the net, 0 on the goal-line extension;
/// points behind the goal line keep a halved (nonzero) chance for plays
/// developing from behind the net. The goal center itself takes
/// `sin(theta) = 1` for continuity along the center line.
pub fn scoring_probability(p: Vec2, cfg: &Config) -> f64 {
    let dx = p.x - cfg.goal_x;
    let dy = p.y - cfg.goal_y;
    let dist = (dx * dx + dy * dy).sqrt();
    let sin_theta = if dist == 0.0 { 1.0 } else { dx.abs() / dist };
    let angle_factor = if p.x < cfg.goal_x {
        (sin_theta + 1.0) / 4.0
    } else {
        (sin_theta + 1.0) / 8.0
    };
    raw_scoring_probability(p, cfg) * angle_factor
}

/// Location value: scoring probability weighted by rink control at the
/// triplet's arrival time.
pub fn location_value(snapshot: &Snapshot, triplet: &Triplet, cfg: &Config) -> f64 {
    scoring_probability(triplet.point(), cfg) * rink_control(snapshot, triplet, cfg)
}

/// Scoring probability sampled over the rink (static field).
pub fn scoring_grid(resolution: f64, cfg: &Config) -> ScalarGrid {
    ScalarGrid::sample(cfg.rink_length, cfg.rink_width, resolution, None, |x, y| {
        scoring_probability(Vec2::new(x, y), cfg)
    })
}

/// Location value sampled over the rink at a fixed puck-arrival time.
pub fn location_value_grid(
    snapshot: &Snapshot,
    resolution: f64,
    t: f64,
    cfg: &Config,
) -> ScalarGrid {
    ScalarGrid::sample(
        cfg.rink_length,
        cfg.rink_width,
        resolution,
        Some(t),
        |x, y| location_value(snapshot, &Triplet::new(x, y, t), cfg),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::snapshot::{PlayerId, PlayerState, Team};
    use crate::testkit;
    use proptest::prelude::*;

    // Frozen by direct high-precision evaluation of the kernel and angle
    // factor with the default parameters.
    const SCPR_SLOT: f64 = 0.480154582255706;
    const SCPR_GOAL_LINE: f64 = 0.045413696169876;
    const SCPR_BEHIND_NET: f64 = 0.245540258089575;

    #[test]
    fn raw_kernel_examples() {
        let cfg = Config::default();
        assert_eq!(raw_scoring_probability(Vec2::new(189.0, 42.5), &cfg), 1.0);
        let near = raw_scoring_probability(Vec2::new(180.0, 42.5), &cfg);
        assert!((near - (-81.0f64 / 2000.0).exp()).abs() < 1e-15);
        assert!((near - 0.960309).abs() < 1e-6);
        let far = raw_scoring_probability(Vec2::new(100.0, 42.5), &cfg);
        assert!((far - 0.019054).abs() < 1e-6);
    }

    #[test]
    fn angle_adjusted_spot_checks() {
        let cfg = Config::default();
        let slot = scoring_probability(Vec2::new(180.0, 42.5), &cfg);
        assert!((slot - SCPR_SLOT).abs() < 1e-8, "slot = {slot}");
        let goal_line = scoring_probability(Vec2::new(189.0, 20.0), &cfg);
        assert!(
            (goal_line - SCPR_GOAL_LINE).abs() < 1e-8,
            "goal line = {goal_line}"
        );
        let behind = scoring_probability(Vec2::new(195.0, 42.5), &cfg);
        assert!((behind - SCPR_BEHIND_NET).abs() < 1e-8, "behind = {behind}");
        assert!(behind > 0.0);
    }

    #[test]
    fn bounded_by_branch() {
        let cfg = Config::default();
        for x in 0..40 {
            for y in 0..17 {
                let p = Vec2::new(x as f64 * 5.0, y as f64 * 5.0);
                let v = scoring_probability(p, &cfg);
                assert!(v > 0.0);
                if p.x < cfg.goal_x {
                    assert!(v <= 0.5 + 1e-12);
                } else {
                    assert!(v <= 0.25 + 1e-12);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn mirror_symmetric_about_goal_y(x in 0.0..200.0f64, d in 0.0..42.0f64) {
            let cfg = Config::default();
            let up = scoring_probability(Vec2::new(x, 42.5 + d), &cfg);
            let down = scoring_probability(Vec2::new(x, 42.5 - d), &cfg);
            prop_assert!((up - down).abs() < 1e-14);
        }
    }

    #[test]
    fn location_value_in_trivial_control_regimes() {
        let cfg = Config::default();
        let mut all_off = testkit::power_play_snapshot();
        all_off.players.retain(|p| p.team == Team::Offence);
        let triplet = Triplet::new(170.0, 40.0, 0.4);
        let lv = location_value(&all_off, &triplet, &cfg);
        assert_eq!(lv, scoring_probability(triplet.point(), &cfg));

        let mut all_def = testkit::power_play_snapshot();
        for p in &mut all_def.players {
            p.team = Team::Defence;
        }
        let lv = location_value(&all_def, &triplet, &cfg);
        assert_eq!(lv, 0.0);
    }

    #[test]
    fn symmetric_duel_halves_the_scoring_probability() {
        let cfg = Config::default();
        let mk = |id: &str, team, y: f64| PlayerState {
            id: PlayerId::new(id),
            team,
            position: Vec2::new(180.0, y),
            velocity: crate::vec2::Vec2::ZERO,
            is_goalie: false,
        };
        let snap = Snapshot {
            players: vec![
                mk("a", Team::Offence, 32.5),
                mk("b", Team::Defence, 52.5),
            ],
            puck: Vec2::new(180.0, 32.5),
            passer_id: PlayerId::new("a"),
            frame_time: 0.0,
        };
        let lv = location_value(&snap, &Triplet::new(180.0, 42.5, 0.0), &cfg);
        assert!((lv - 0.5 * SCPR_SLOT).abs() < 1e-6, "lv = {lv}");
    }

    #[test]
    fn location_value_never_exceeds_scoring_probability() {
        let cfg = Config::default();
        let snap = testkit::random_snapshot_seeded(17, &cfg);
        for k in 0..30 {
            let triplet = Triplet::new(126.0 + 2.0 * k as f64, 5.0 + 2.3 * k as f64 % 75.0, 0.3);
            let lv = location_value(&snap, &triplet, &cfg);
            assert!(lv <= scoring_probability(triplet.point(), &cfg) + 1e-15);
        }
    }
}
