//! Test support: independent numerical oracles and fixture builders.
//!
//! Everything here exists to check the engine from the outside. The oracles
//! integrate the defining ODEs directly or simulate the stochastic pick-up
//! process; none of them call the closed forms or recursions they verify.
//! Fixture builders produce deterministic snapshots for tests and benches.

use crate::config::Config;
use crate::snapshot::{PlayerId, PlayerState, Snapshot, Team};
use crate::vec2::Vec2;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const RK4_STEP: f64 = 1e-3;

/// RK4 integration of the player drag ODE dv/dt = gamma (v_max u - v) with
/// the reaction-time coast, steering direction fixed at `phi`.
pub fn rk4_player_position(state: &PlayerState, phi: f64, t: f64, cfg: &Config) -> Vec2 {
    let coast = t.min(cfg.t_reaction);
    let mut pos = state.position + state.velocity * coast;
    let mut vel = state.velocity;
    let mut remaining = t - coast;
    let target = Vec2::from_angle(phi) * cfg.v_max;
    let accel = |v: Vec2| (target - v) * cfg.gamma;
    while remaining > 0.0 {
        let h = RK4_STEP.min(remaining);
        let (k1p, k1v) = (vel, accel(vel));
        let (k2p, k2v) = (vel + k1v * (h / 2.0), accel(vel + k1v * (h / 2.0)));
        let (k3p, k3v) = (vel + k2v * (h / 2.0), accel(vel + k2v * (h / 2.0)));
        let (k4p, k4v) = (vel + k3v * h, accel(vel + k3v * h));
        pos += (k1p + k2p * 2.0 + k3p * 2.0 + k4p) * (h / 6.0);
        vel += (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (h / 6.0);
        remaining -= h;
    }
    pos
}

/// RK4 integration of the puck ODE dv/dt = -kappa v - mu v_hat, freezing the
/// puck once the speed collapses. Returns (position, velocity).
pub fn rk4_puck_state(p0: Vec2, v0: Vec2, t: f64, cfg: &Config) -> (Vec2, Vec2) {
    let mut pos = p0;
    let mut vel = v0;
    let mut remaining = t;
    let accel = |v: Vec2| -> Vec2 {
        let speed = v.norm();
        if speed == 0.0 {
            return Vec2::ZERO;
        }
        v * (-cfg.kappa) + v * (-cfg.mu_decel / speed)
    };
    while remaining > 0.0 {
        if vel.norm() < 1e-9 {
            return (pos, Vec2::ZERO);
        }
        // Do not integrate across the stop: the friction term would push the
        // puck backwards. Shrink the step so speed stays positive.
        let decel = cfg.kappa * vel.norm() + cfg.mu_decel;
        let mut h = RK4_STEP.min(remaining);
        if vel.norm() - decel * h < 0.0 {
            h = (vel.norm() / decel) * 0.5;
            if h < 1e-12 {
                return (pos, Vec2::ZERO);
            }
        }
        let (k1p, k1v) = (vel, accel(vel));
        let (k2p, k2v) = (vel + k1v * (h / 2.0), accel(vel + k1v * (h / 2.0)));
        let (k3p, k3v) = (vel + k2v * (h / 2.0), accel(vel + k2v * (h / 2.0)));
        let (k4p, k4v) = (vel + k3v * h, accel(vel + k3v * h));
        pos += (k1p + k2p * 2.0 + k3p * 2.0 + k4p) * (h / 6.0);
        vel += (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (h / 6.0);
        remaining -= h;
    }
    (pos, vel)
}

/// Simulates the sequential pick-up process: the puck visits triplets in
/// order; at each one the players try in arrival order with their base
/// probabilities, and the first success ends the trial.
///
/// `order[j]` lists player indices by arrival rank at triplet `j`;
/// `bases[j][i]` is player `i`'s base probability there. Returns the
/// per-player pick-up fractions and the fraction of untouched runs.
pub fn simulate_sequential_pickup(
    order: &[Vec<usize>],
    bases: &[Vec<f64>],
    trials: u64,
    seed: u64,
) -> (Vec<f64>, f64) {
    assert_eq!(order.len(), bases.len());
    let players = bases.first().map_or(0, |b| b.len());
    let mut counts = vec![0u64; players];
    let mut untouched = 0u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let mut taken = false;
        'trajectory: for (j, ranks) in order.iter().enumerate() {
            for &i in ranks {
                if rng.gen::<f64>() < bases[j][i] {
                    counts[i] += 1;
                    taken = true;
                    break 'trajectory;
                }
            }
        }
        if !taken {
            untouched += 1;
        }
    }
    let totals = counts
        .iter()
        .map(|&c| c as f64 / trials as f64)
        .collect();
    (totals, untouched as f64 / trials as f64)
}

fn player(
    id: &str,
    team: Team,
    pos: (f64, f64),
    vel: (f64, f64),
    is_goalie: bool,
) -> PlayerState {
    PlayerState {
        id: PlayerId::new(id),
        team,
        position: Vec2::new(pos.0, pos.1),
        velocity: Vec2::new(vel.0, vel.1),
        is_goalie,
    }
}

/// Canonical 5v4 power-play frame: five attackers around the zone perimeter,
/// four defenders boxed in front, goalie in the net. Passer holds the puck
/// at the top of the zone.
pub fn power_play_snapshot() -> Snapshot {
    let players = vec![
        player("OFF #33", Team::Offence, (135.0, 42.5), (3.0, 0.0), false),
        player("OFF #16", Team::Offence, (160.0, 70.0), (5.0, -2.0), false),
        player("OFF #21", Team::Offence, (160.0, 15.0), (4.0, 2.0), false),
        player("OFF #11", Team::Offence, (178.0, 60.0), (-2.0, -3.0), false),
        player("OFF #9", Team::Offence, (178.0, 25.0), (-1.0, 3.0), false),
        player("DEF #7", Team::Defence, (165.0, 52.0), (-3.0, -1.0), false),
        player("DEF #8", Team::Defence, (165.0, 33.0), (-2.0, 1.0), false),
        player("DEF #22", Team::Defence, (180.0, 50.0), (0.0, -2.0), false),
        player("DEF #5", Team::Defence, (180.0, 35.0), (0.0, 2.0), false),
        player("DEF #30", Team::Defence, (188.0, 42.5), (0.0, 0.0), true),
    ];
    Snapshot {
        players,
        puck: Vec2::new(135.0, 42.5),
        passer_id: PlayerId::new("OFF #33"),
        frame_time: 612.4,
    }
}

/// Randomized offensive-zone snapshot with 5 attackers, 4 defenders and a
/// goalie; player speeds stay within the ingestion clamp.
pub fn random_snapshot(rng: &mut impl Rng, cfg: &Config) -> Snapshot {
    let mut players = Vec::new();
    let spot = |rng: &mut dyn rand::RngCore| {
        (
            rng.gen_range(cfg.blue_line_x..cfg.rink_length - 2.0),
            rng.gen_range(2.0..cfg.rink_width - 2.0),
        )
    };
    for k in 0..5 {
        let vel = (rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0));
        players.push(player(
            &format!("OFF #{}", k + 10),
            Team::Offence,
            spot(rng),
            vel,
            false,
        ));
    }
    for k in 0..4 {
        let vel = (rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0));
        players.push(player(
            &format!("DEF #{}", k + 40),
            Team::Defence,
            spot(rng),
            vel,
            false,
        ));
    }
    players.push(player(
        "DEF #30",
        Team::Defence,
        (
            cfg.goal_x - rng.gen_range(0.5..3.0),
            cfg.goal_y + rng.gen_range(-3.0..3.0),
        ),
        (0.0, 0.0),
        true,
    ));
    let passer = players[0].clone();
    Snapshot {
        puck: passer.position,
        passer_id: passer.id,
        players,
        frame_time: rng.gen_range(0.0..1200.0),
    }
}

/// Seeded convenience wrapper around [`random_snapshot`].
pub fn random_snapshot_seeded(seed: u64, cfg: &Config) -> Snapshot {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_snapshot(&mut rng, cfg)
}

/// Passer with one wide-open teammate and no opposition anywhere near the
/// lane. Too sparse to pass frame validation; meant for operation-level
/// probability tests.
pub fn open_receiver_snapshot(receiver_distance: f64) -> Snapshot {
    let players = vec![
        player("OFF #1", Team::Offence, (140.0, 42.5), (0.0, 0.0), false),
        player(
            "OFF #2",
            Team::Offence,
            (140.0 + receiver_distance, 42.5),
            (0.0, 0.0),
            false,
        ),
    ];
    Snapshot {
        players,
        puck: Vec2::new(140.0, 42.5),
        passer_id: PlayerId::new("OFF #1"),
        frame_time: 0.0,
    }
}

/// Two passing options, one lane blocked: from a low-value spot near the
/// half-boards the passer can hit an open teammate in the high slot or a
/// better-placed teammate whose lane has a defender parked on it. The
/// remaining players sit far from both lanes so the frame still passes
/// validation, and both passes beat holding the puck.
///
/// Returns the snapshot plus the bearings toward the open and blocked
/// receivers.
pub fn two_lane_snapshot() -> (Snapshot, f64, f64) {
    let passer = Vec2::new(145.0, 75.0);
    let open = Vec2::new(160.0, 60.0);
    let blocked = Vec2::new(150.0, 42.0);
    // Blocker sits on the passer->B segment, well before the receiver.
    let lane = (blocked - passer).unit();
    let blocker = passer + lane * 16.0;
    let players = vec![
        player("OFF #1", Team::Offence, (passer.x, passer.y), (0.0, 0.0), false),
        player("OFF #2", Team::Offence, (open.x, open.y), (0.0, 0.0), false),
        player("OFF #3", Team::Offence, (blocked.x, blocked.y), (0.0, 0.0), false),
        player(
            "DEF #4",
            Team::Defence,
            (blocker.x, blocker.y),
            (0.0, 0.0),
            false,
        ),
        player("DEF #5", Team::Defence, (128.0, 5.0), (0.0, 0.0), false),
        player("DEF #30", Team::Defence, (188.0, 42.5), (0.0, 0.0), true),
    ];
    let snap = Snapshot {
        players,
        puck: passer,
        passer_id: PlayerId::new("OFF #1"),
        frame_time: 0.0,
    };
    let open_bearing = (open - passer).angle();
    let blocked_bearing = (blocked - passer).angle();
    (snap, open_bearing, blocked_bearing)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monte_carlo_matches_hand_computed_two_triplet_case() {
        // One player, base 0.5 at each of two triplets: totals 0.5 + 0.25.
        let order = vec![vec![0], vec![0]];
        let bases = vec![vec![0.5], vec![0.5]];
        let (totals, untouched) = simulate_sequential_pickup(&order, &bases, 200_000, 42);
        assert!((totals[0] - 0.75).abs() < 0.01, "{totals:?}");
        assert!((untouched - 0.25).abs() < 0.01);
    }

    #[test]
    fn fixtures_are_deterministic() {
        let cfg = Config::default();
        let a = random_snapshot_seeded(9, &cfg);
        let b = random_snapshot_seeded(9, &cfg);
        assert_eq!(a, b);
    }
}
