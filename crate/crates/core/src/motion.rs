//! Closed-form player and puck motion models.
//!
//! Players coast along their current velocity for the reaction time, then
//! accelerate toward top speed in a chosen direction against drag. Choosing
//! the direction freely turns the closed form into a reachable disk per time,
//! which is what every downstream arrival query consumes. The puck obeys
//! Stokes drag plus constant ice friction along a straight line and freezes
//! once friction would reverse it.

use crate::config::Config;
use crate::rink::Rink;
use crate::snapshot::{PlayerState, Triplet};
use crate::vec2::Vec2;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Set of points a player can occupy at exactly time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReachableDisk {
    pub center: Vec2,
    pub radius: f64,
    pub t: f64,
}

/// Result of an arrival-time query; `capped` marks targets the player cannot
/// reach within the time cap (goalies held near the net, mostly).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arrival {
    pub time: f64,
    pub capped: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PuckState {
    pub position: Vec2,
    pub velocity: Vec2,
}

impl PuckState {
    pub fn speed(&self) -> f64 {
        self.velocity.norm()
    }
}

/// Why a trajectory stopped producing triplets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Board,
    Stopped,
    TimeCap,
}

/// Sampled path of one candidate pass at a fixed angle and release speed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassTrajectory {
    pub angle: f64,
    pub speed: f64,
    pub triplets: Vec<Triplet>,
    pub termination: Termination,
}

#[derive(Debug, Error, PartialEq)]
pub enum MotionError {
    #[error("puck at rest has no trajectory")]
    PuckAtRest,
}

/// Exponential lag factor (1 - e^(-gamma t)) / gamma shared by the player
/// closed forms.
fn drag_lag(gamma: f64, t: f64) -> f64 {
    (1.0 - (-gamma * t).exp()) / gamma
}

/// Player position when steering in direction `phi` from `t = 0`.
///
/// For `t` below the reaction time the player coasts on her frame velocity;
/// afterwards the drag model runs from the coasted state.
pub fn player_position(state: &PlayerState, phi: f64, t: f64, cfg: &Config) -> Vec2 {
    let coast = t.min(cfg.t_reaction);
    let te = (t - cfg.t_reaction).max(0.0);
    let start = state.position + state.velocity * coast;
    if te == 0.0 {
        return start;
    }
    let lag = drag_lag(cfg.gamma, te);
    start + Vec2::from_angle(phi) * (cfg.v_max * (te - lag)) + state.velocity * lag
}

/// Reachable disk at time `t`: sweep of `player_position` over all steering
/// directions. Goalies are additionally confined to `goalie_radius` around
/// the goal center; the returned disk is the largest one inscribed in the
/// intersection of the motion disk with that constraint.
pub fn reachable_disk(state: &PlayerState, t: f64, cfg: &Config) -> ReachableDisk {
    let coast = t.min(cfg.t_reaction);
    let te = (t - cfg.t_reaction).max(0.0);
    let lag = if te > 0.0 { drag_lag(cfg.gamma, te) } else { 0.0 };
    let center = state.position + state.velocity * (coast + lag);
    let radius = cfg.v_max * (te - lag);
    let disk = ReachableDisk { center, radius, t };
    if state.is_goalie {
        confine_to_goal(disk, cfg)
    } else {
        disk
    }
}

fn confine_to_goal(disk: ReachableDisk, cfg: &Config) -> ReachableDisk {
    let goal = Vec2::new(cfg.goal_x, cfg.goal_y);
    let cap = cfg.goalie_radius;
    let offset = disk.center - goal;
    let dist = offset.norm();
    if dist + disk.radius <= cap {
        return disk;
    }
    let axis = if dist > 0.0 {
        offset * (1.0 / dist)
    } else {
        Vec2::ZERO
    };
    // Interval the intersection occupies along the goal->center axis.
    let lo = (-cap).max(dist - disk.radius);
    let hi = cap.min(dist + disk.radius);
    if lo > hi {
        // Motion disk entirely outside the constraint (out-of-position data);
        // pin the goalie to the nearest admissible point.
        return ReachableDisk {
            center: goal + axis * cap,
            radius: 0.0,
            t: disk.t,
        };
    }
    ReachableDisk {
        center: goal + axis * (0.5 * (lo + hi)),
        radius: 0.5 * (hi - lo),
        t: disk.t,
    }
}

/// How close the player can get to `target` by time `t` (0 when the target
/// falls inside the reachable disk).
pub fn min_distance(state: &PlayerState, target: Vec2, t: f64, cfg: &Config) -> f64 {
    let disk = reachable_disk(state, t, cfg);
    (target.distance(disk.center) - disk.radius).max(0.0)
}

const ARRIVAL_TIME_TOL: f64 = 1e-4;
const ARRIVAL_MAX_STEPS: usize = 200_000;

/// Earliest time at which `min_distance` reaches zero, to 1e-4 s.
///
/// The search steps forward by `d / rate` where `rate` bounds how fast the
/// distance can shrink (radius growth plus the decaying coast drift), so it
/// can never skip past the first crossing; a bisection then sharpens the
/// bracket. Targets still unreached at `t_max` come back capped.
pub fn time_to_reach(state: &PlayerState, target: Vec2, cfg: &Config) -> Arrival {
    let mut t_lo = 0.0;
    let mut d_lo = min_distance(state, target, 0.0, cfg);
    if d_lo <= 0.0 {
        return Arrival {
            time: 0.0,
            capped: false,
        };
    }
    let speed = state.velocity.norm();
    // The goalie disk's center and radius both respond to the motion disk and
    // the constraint circle, so its distance can change up to ~3x faster.
    let slack = if state.is_goalie { 3.0 } else { 1.0 };
    let mut bracket = None;
    for _ in 0..ARRIVAL_MAX_STEPS {
        let te = (t_lo - cfg.t_reaction).max(0.0);
        let rate = slack * (cfg.v_max + speed * (-cfg.gamma * te).exp());
        let t_hi = (t_lo + (d_lo / rate).max(ARRIVAL_TIME_TOL)).min(cfg.t_max);
        let d_hi = min_distance(state, target, t_hi, cfg);
        if d_hi <= 0.0 {
            bracket = Some((t_lo, t_hi));
            break;
        }
        if t_hi >= cfg.t_max {
            return Arrival {
                time: cfg.t_max,
                capped: true,
            };
        }
        t_lo = t_hi;
        d_lo = d_hi;
    }
    let (mut lo, mut hi) = match bracket {
        Some(b) => b,
        None => {
            return Arrival {
                time: cfg.t_max,
                capped: true,
            }
        }
    };
    while hi - lo > ARRIVAL_TIME_TOL {
        let mid = 0.5 * (lo + hi);
        if min_distance(state, target, mid, cfg) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Arrival {
        time: hi,
        capped: false,
    }
}

/// Puck state at time `t` for a release from `p0` with velocity `v0`.
///
/// Motion is a straight line in the release direction with speed
/// `(|v0| + mu/kappa) e^(-kappa t) - mu/kappa`; once that hits zero the puck
/// stays put. Errors when `v0` is exactly zero.
pub fn puck_state(p0: Vec2, v0: Vec2, t: f64, cfg: &Config) -> Result<PuckState, MotionError> {
    let speed0 = v0.norm();
    if speed0 == 0.0 {
        return Err(MotionError::PuckAtRest);
    }
    let kappa = cfg.kappa;
    let t_stop = (kappa * speed0 / cfg.mu_decel).ln_1p() / kappa;
    let th = t.min(t_stop);
    // expm1 keeps both terms accurate as kappa -> 0, where the closed form
    // degenerates to the pure-friction quadratic.
    let em = (-kappa * th).exp_m1();
    let travelled = speed0 * (-em / kappa) - cfg.mu_decel * (em + kappa * th) / (kappa * kappa);
    let dir = v0 * (1.0 / speed0);
    let speed = if t >= t_stop {
        0.0
    } else {
        let em_t = (-kappa * t).exp_m1();
        speed0 * (em_t + 1.0) + cfg.mu_decel * em_t / kappa
    };
    Ok(PuckState {
        position: p0 + dir * travelled,
        velocity: dir * speed,
    })
}

/// Samples a pass at `dt` intervals until the puck leaves the rink, slows
/// below the stop speed, or exceeds the time cap. The offending sample is
/// excluded in every case.
pub fn pass_trajectory(
    origin: Vec2,
    speed: f64,
    angle: f64,
    cfg: &Config,
) -> Result<PassTrajectory, MotionError> {
    let rink = Rink::from_config(cfg);
    let v0 = Vec2::from_angle(angle) * speed;
    let mut triplets = Vec::new();
    let mut termination = Termination::TimeCap;
    for j in 0.. {
        let t = j as f64 * cfg.dt;
        if t > cfg.t_max {
            termination = Termination::TimeCap;
            break;
        }
        let state = puck_state(origin, v0, t, cfg)?;
        if !rink.contains(state.position) {
            termination = Termination::Board;
            break;
        }
        if state.speed() < cfg.puck_stop_speed {
            termination = Termination::Stopped;
            break;
        }
        triplets.push(Triplet::new(state.position.x, state.position.y, t));
    }
    Ok(PassTrajectory {
        angle,
        speed,
        triplets,
        termination,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::snapshot::{PlayerId, Team};
    use crate::testkit;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn skater(position: Vec2, velocity: Vec2) -> PlayerState {
        PlayerState {
            id: PlayerId::new("s"),
            team: Team::Offence,
            position,
            velocity,
            is_goalie: false,
        }
    }

    fn goalie(position: Vec2, velocity: Vec2) -> PlayerState {
        PlayerState {
            is_goalie: true,
            ..skater(position, velocity)
        }
    }

    #[test]
    fn position_at_zero_is_start() {
        let cfg = Config::default();
        let p = skater(Vec2::new(120.0, 40.0), Vec2::new(5.0, -3.0));
        let got = player_position(&p, 1.0, 0.0, &cfg);
        assert_eq!(got, p.position);
    }

    #[test]
    fn stationary_player_matches_rk4_oracle() {
        let cfg = Config {
            t_reaction: 0.0,
            ..Config::default()
        };
        let p = skater(Vec2::ZERO, Vec2::ZERO);
        let got = player_position(&p, 0.0, 1.0, &cfg);
        // Frozen from the drag ODE oracle: 35.5 * (1 - (1 - e^-1.3)/1.3).
        assert!((got.x - 15.634520).abs() < 1e-5, "x = {}", got.x);
        assert!(got.y.abs() < 1e-12);
        let oracle = testkit::rk4_player_position(&p, 0.0, 1.0, &cfg);
        assert!((got.x - oracle.x).abs() < 1e-6);
        assert!((got.y - oracle.y).abs() < 1e-6);
    }

    #[test]
    fn full_speed_player_moves_linearly() {
        let cfg = Config {
            t_reaction: 0.0,
            ..Config::default()
        };
        let p = skater(Vec2::new(10.0, 20.0), Vec2::new(35.5, 0.0));
        for t in [0.3, 1.0, 2.7] {
            let got = player_position(&p, 0.0, t, &cfg);
            assert!((got.x - (10.0 + 35.5 * t)).abs() < 1e-9, "t={t}");
            assert!((got.y - 20.0).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_form_matches_rk4_for_random_states() {
        let cfg = Config::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let p = skater(
                Vec2::new(rng.gen_range(10.0..190.0), rng.gen_range(5.0..80.0)),
                Vec2::new(rng.gen_range(-30.0..30.0), rng.gen_range(-30.0..30.0)),
            );
            let phi = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
            let t = rng.gen_range(0.0..3.0);
            let got = player_position(&p, phi, t, &cfg);
            let want = testkit::rk4_player_position(&p, phi, t, &cfg);
            assert!(
                (got.x - want.x).abs() < 1e-6 && (got.y - want.y).abs() < 1e-6,
                "got {got:?} want {want:?}"
            );
        }
    }

    #[test]
    fn no_steering_during_reaction_time() {
        let cfg = Config::default();
        let p = skater(Vec2::new(50.0, 50.0), Vec2::new(10.0, 0.0));
        let disk = reachable_disk(&p, 0.1, &cfg);
        assert_eq!(disk.radius, 0.0);
        assert!((disk.center.x - 51.0).abs() < 1e-12);
    }

    #[test]
    fn stationary_disk_radius_matches_position_reach() {
        let cfg = Config {
            t_reaction: 0.0,
            ..Config::default()
        };
        let p = skater(Vec2::ZERO, Vec2::ZERO);
        let disk = reachable_disk(&p, 1.0, &cfg);
        assert!((disk.radius - 15.634520).abs() < 1e-5);
        assert_eq!(disk.center, Vec2::ZERO);
    }

    #[test]
    fn position_sweeps_the_disk_boundary() {
        let cfg = Config::default();
        let p = skater(Vec2::new(80.0, 40.0), Vec2::new(12.0, -4.0));
        for t in [0.4, 1.0, 2.5] {
            let disk = reachable_disk(&p, t, &cfg);
            for k in 0..16 {
                let phi = -std::f64::consts::PI + (k as f64 + 1.0) * std::f64::consts::TAU / 16.0;
                let pos = player_position(&p, phi, t, &cfg);
                let r = pos.distance(disk.center);
                assert!((r - disk.radius).abs() < 1e-9, "t={t} phi={phi}");
            }
        }
    }

    #[test]
    fn goalie_disk_stays_within_the_crease_cap() {
        let cfg = Config::default();
        let g = goalie(Vec2::new(189.0, 42.5), Vec2::ZERO);
        let disk = reachable_disk(&g, 10.0_f64.min(Config::default().t_max), &cfg);
        let goal = Vec2::new(cfg.goal_x, cfg.goal_y);
        assert!(disk.center.distance(goal) + disk.radius <= cfg.goalie_radius + 1e-9);
        assert!((disk.radius - cfg.goalie_radius).abs() < 1e-9);
    }

    #[test]
    fn out_of_position_goalie_is_pinned_to_the_cap_boundary() {
        let cfg = Config::default();
        let g = goalie(Vec2::new(160.0, 42.5), Vec2::ZERO);
        let disk = reachable_disk(&g, 0.2, &cfg);
        let goal = Vec2::new(cfg.goal_x, cfg.goal_y);
        assert_eq!(disk.radius, 0.0);
        assert!((disk.center.distance(goal) - cfg.goalie_radius).abs() < 1e-9);
    }

    #[test]
    fn min_distance_examples() {
        let cfg = Config {
            t_reaction: 0.0,
            ..Config::default()
        };
        let p = skater(Vec2::ZERO, Vec2::ZERO);
        assert_eq!(min_distance(&p, Vec2::ZERO, 0.0, &cfg), 0.0);
        let d = min_distance(&p, Vec2::new(20.0, 0.0), 1.0, &cfg);
        assert!((d - (20.0 - 15.634520)).abs() < 1e-5, "d = {d}");
        assert_eq!(min_distance(&p, Vec2::new(1.0, 0.0), 1.0, &cfg), 0.0);
    }

    #[test]
    fn time_to_reach_inverts_the_distance() {
        let cfg = Config {
            t_reaction: 0.0,
            ..Config::default()
        };
        let p = skater(Vec2::ZERO, Vec2::ZERO);
        let arrival = time_to_reach(&p, Vec2::new(15.634520, 0.0), &cfg);
        assert!(!arrival.capped);
        assert!((arrival.time - 1.0).abs() < 1e-3, "t = {}", arrival.time);
        assert_eq!(time_to_reach(&p, Vec2::ZERO, &cfg).time, 0.0);
    }

    #[test]
    fn time_to_reach_is_first_zero_of_min_distance() {
        let cfg = Config::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let p = skater(
                Vec2::new(rng.gen_range(0.0..200.0), rng.gen_range(0.0..85.0)),
                Vec2::new(rng.gen_range(-35.0..35.0), rng.gen_range(-35.0..35.0)),
            );
            let target = Vec2::new(rng.gen_range(0.0..200.0), rng.gen_range(0.0..85.0));
            let arrival = time_to_reach(&p, target, &cfg);
            if arrival.capped {
                assert!(min_distance(&p, target, cfg.t_max, &cfg) > 0.0);
                continue;
            }
            assert!(min_distance(&p, target, arrival.time, &cfg) <= 1e-6);
            // No earlier crossing: sample a grid strictly before the arrival.
            let probe = arrival.time - 2.0 * ARRIVAL_TIME_TOL;
            if probe > 0.0 {
                for k in 0..20 {
                    let t = probe * (k as f64 + 0.5) / 20.0;
                    assert!(
                        min_distance(&p, target, t, &cfg) > -1e-9,
                        "early reach at {t}"
                    );
                }
            }
        }
    }

    #[test]
    fn goalie_cannot_reach_the_corner() {
        let cfg = Config::default();
        let g = goalie(Vec2::new(189.0, 42.5), Vec2::ZERO);
        let arrival = time_to_reach(&g, Vec2::new(200.0, 85.0), &cfg);
        assert!(arrival.capped);
        assert_eq!(arrival.time, cfg.t_max);
    }

    #[test]
    fn puck_at_zero_time_is_at_release_point() {
        let cfg = Config::default();
        let p0 = Vec2::new(150.0, 42.5);
        let s = puck_state(p0, Vec2::new(65.0, 0.0), 0.0, &cfg).unwrap();
        assert_eq!(s.position, p0);
        assert!((s.speed() - 65.0).abs() < 1e-12);
    }

    #[test]
    fn puck_at_rest_is_an_error() {
        let cfg = Config::default();
        let err = puck_state(Vec2::ZERO, Vec2::ZERO, 1.0, &cfg).unwrap_err();
        assert_eq!(err, MotionError::PuckAtRest);
    }

    #[test]
    fn vanishing_drag_limit_is_pure_friction() {
        let cfg = Config {
            kappa: 1e-6,
            ..Config::default()
        };
        let v0 = Vec2::new(65.0, 0.0);
        for t in [0.5, 1.0, 2.0] {
            let s = puck_state(Vec2::ZERO, v0, t, &cfg).unwrap();
            let quadratic = 65.0 * t - 0.5 * cfg.mu_decel * t * t;
            assert!((s.position.x - quadratic).abs() < 1e-6, "t={t}");
        }
    }

    #[test]
    fn puck_closed_form_matches_rk4() {
        let cfg = Config::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let v0 = Vec2::from_angle(rng.gen_range(-3.0..3.0)) * rng.gen_range(20.0..120.0);
            let p0 = Vec2::new(rng.gen_range(50.0..150.0), rng.gen_range(20.0..60.0));
            let t = rng.gen_range(0.0..3.0);
            let got = puck_state(p0, v0, t, &cfg).unwrap();
            let (want_pos, want_vel) = testkit::rk4_puck_state(p0, v0, t, &cfg);
            assert!(
                (got.position.x - want_pos.x).abs() < 1e-6
                    && (got.position.y - want_pos.y).abs() < 1e-6,
                "pos {got:?} vs {want_pos:?}"
            );
            assert!((got.velocity - want_vel).norm() < 1e-5);
        }
    }

    #[test]
    fn puck_freezes_after_stopping() {
        let cfg = Config::default();
        let v0 = Vec2::new(2.0, 0.0);
        let t_stop = (1.0 + cfg.kappa * 2.0 / cfg.mu_decel).ln() / cfg.kappa;
        let at_stop = puck_state(Vec2::ZERO, v0, t_stop, &cfg).unwrap();
        let later = puck_state(Vec2::ZERO, v0, t_stop + 5.0, &cfg).unwrap();
        assert_eq!(at_stop.position, later.position);
        assert_eq!(later.velocity, Vec2::ZERO);
    }

    #[test]
    fn trajectory_toward_end_boards_terminates_at_board() {
        let cfg = Config::default();
        let tr = pass_trajectory(Vec2::new(150.0, 42.5), 85.0, 0.0, &cfg).unwrap();
        assert_eq!(tr.termination, Termination::Board);
        assert!(!tr.triplets.is_empty());
        assert!(tr.triplets.iter().all(|t| t.x < 200.0));
        // Crossing sample excluded: the next sample after the last would exit.
        let last = tr.triplets.last().unwrap();
        let v0 = Vec2::new(85.0, 0.0);
        let next = puck_state(Vec2::new(150.0, 42.5), v0, last.t + cfg.dt, &cfg).unwrap();
        assert!(next.position.x > 200.0);
    }

    #[test]
    fn slow_pass_stops_after_a_couple_of_triplets() {
        let cfg = Config::default();
        let tr = pass_trajectory(Vec2::new(150.0, 42.5), 1.05, 0.0, &cfg).unwrap();
        assert_eq!(tr.termination, Termination::Stopped);
        assert!(
            (1..=2).contains(&tr.triplets.len()),
            "got {} triplets",
            tr.triplets.len()
        );
    }

    #[test]
    fn sideways_pass_near_the_boards_exits_quickly() {
        let cfg = Config::default();
        let tr =
            pass_trajectory(Vec2::new(150.0, 80.0), 85.0, std::f64::consts::FRAC_PI_2, &cfg)
                .unwrap();
        assert_eq!(tr.termination, Termination::Board);
        assert!(tr.triplets.len() <= 3, "got {}", tr.triplets.len());
    }

    #[test]
    fn trajectory_grid_and_speed_are_monotone() {
        let cfg = Config::default();
        let tr = pass_trajectory(Vec2::new(130.0, 20.0), 45.0, 0.7, &cfg).unwrap();
        let mut prev_speed = f64::INFINITY;
        let mut prev_spacing = f64::INFINITY;
        let rink = Rink::from_config(&cfg);
        for (j, triplet) in tr.triplets.iter().enumerate() {
            assert!((triplet.t - j as f64 * cfg.dt).abs() < 1e-12);
            assert!(rink.contains(triplet.point()));
            let v0 = Vec2::from_angle(0.7) * 45.0;
            let speed = puck_state(Vec2::new(130.0, 20.0), v0, triplet.t, &cfg)
                .unwrap()
                .speed();
            assert!(speed < prev_speed);
            prev_speed = speed;
            if j > 0 {
                let spacing = tr.triplets[j].point().distance(tr.triplets[j - 1].point());
                assert!(spacing <= prev_spacing + 1e-9);
                prev_spacing = spacing;
            }
        }
    }

    #[test]
    fn disk_radius_grows_toward_top_speed() {
        let cfg = Config::default();
        let p = skater(Vec2::new(100.0, 40.0), Vec2::new(8.0, 2.0));
        let mut prev = -1.0;
        for k in 1..=60 {
            let t = k as f64 * 0.1;
            let disk = reachable_disk(&p, t, &cfg);
            assert!(disk.radius >= prev);
            prev = disk.radius;
        }
        // Asymptotic slope approaches v_max.
        let r8 = reachable_disk(&p, 8.0, &cfg).radius;
        let r9 = reachable_disk(&p, 9.0, &cfg).radius;
        assert!(((r9 - r8) - cfg.v_max).abs() < 1e-2);
    }
}
