//! Pick-up probabilities along a pass trajectory and pass success.
//!
//! Every skater except the passer races the puck to each triplet. A normal
//! kernel over her closing distance gives a base pick-up chance, arrival
//! order turns bases into conditional probabilities, and a survival pass down
//! the trajectory converts those into unconditional pick-up probabilities
//! that conserve total mass.

use crate::config::Config;
use crate::motion::{min_distance, pass_trajectory, MotionError, PassTrajectory};
use crate::snapshot::{PlayerId, Snapshot, Team};
use serde::{Deserialize, Serialize};

/// Standard normal CDF.
fn normal_cdf(z: f64) -> f64 {
    0.5 * (1.0 + libm::erf(z / std::f64::consts::SQRT_2))
}

/// Base pick-up probability for a player whose reachable set ends `d` feet
/// short of a triplet the puck reaches at time `t`.
///
/// The normal-kernel mass within one reach is scaled by the intercept
/// reaction decay for the player's side and by `dt / coverage_window`, the
/// fraction of the covered window one trajectory step represents.
pub fn base_pickup(d: f64, t: f64, side: Team, cfg: &Config) -> f64 {
    let s = cfg.reach;
    let window = normal_cdf((d + s) / s) - normal_cdf((d - s) / s);
    let t_i = cfg.intercept_constant(side);
    window * (-t / t_i).exp() * (cfg.dt / cfg.coverage_window)
}

/// Turns base probabilities ranked by arrival into conditional ones: the
/// first arrival keeps her base chance, every later player only gets her base
/// chance on the mass the earlier arrivals left behind.
pub fn ordered_pickup(bases_in_rank_order: &[f64]) -> Vec<f64> {
    let mut cumulative: f64 = 0.0;
    bases_in_rank_order
        .iter()
        .map(|base| {
            let p = base * (1.0 - cumulative).max(0.0);
            cumulative += p;
            p
        })
        .collect()
}

/// Per-player, per-triplet pick-up probabilities for one trajectory, with
/// team aggregates and the survival of the pass along the way.
///
/// Matrices are row-major over `[triplet][player]`; players are every
/// snapshot skater except the passer, in snapshot order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PickupField {
    pub player_ids: Vec<PlayerId>,
    pub teams: Vec<Team>,
    pub triplet_count: usize,
    /// Closing distance d at the puck-arrival time.
    pub distances: Vec<f64>,
    /// Base pick-up probabilities.
    pub bases: Vec<f64>,
    /// Player indices sorted by arrival rank, per triplet.
    pub arrival_order: Vec<u32>,
    /// Conditional pick-up given the puck arrives at the triplet.
    pub conditional: Vec<f64>,
    /// Unconditional pick-up (pass survival folded in).
    pub unconditional: Vec<f64>,
    /// Team sums of `conditional`, per triplet.
    pub off_conditional: Vec<f64>,
    pub def_conditional: Vec<f64>,
    /// Team sums of `unconditional`, per triplet.
    pub off_unconditional: Vec<f64>,
    pub def_unconditional: Vec<f64>,
    /// Probability the pass is still untouched arriving at each triplet;
    /// `survival[0] = 1`, with one trailing entry for the leftover mass.
    pub survival: Vec<f64>,
}

impl PickupField {
    pub fn player_count(&self) -> usize {
        self.player_ids.len()
    }

    pub fn at(&self, values: &[f64], triplet: usize, player: usize) -> f64 {
        values[triplet * self.player_count() + player]
    }

    /// Leftover probability of the pass running its whole sampled length
    /// untouched (counted as a failure).
    pub fn leftover(&self) -> f64 {
        *self.survival.last().unwrap_or(&1.0)
    }
}

/// Computes the pick-up field for one trajectory.
pub fn trajectory_pickup(snapshot: &Snapshot, trajectory: &PassTrajectory, cfg: &Config) -> PickupField {
    let participants: Vec<_> = snapshot
        .players
        .iter()
        .filter(|p| p.id != snapshot.passer_id)
        .collect();
    let n = participants.len();
    let k = trajectory.triplets.len();

    let mut field = PickupField {
        player_ids: participants.iter().map(|p| p.id.clone()).collect(),
        teams: participants.iter().map(|p| p.team).collect(),
        triplet_count: k,
        distances: Vec::with_capacity(n * k),
        bases: Vec::with_capacity(n * k),
        arrival_order: Vec::with_capacity(n * k),
        conditional: vec![0.0; n * k],
        unconditional: vec![0.0; n * k],
        off_conditional: Vec::with_capacity(k),
        def_conditional: Vec::with_capacity(k),
        off_unconditional: Vec::with_capacity(k),
        def_unconditional: Vec::with_capacity(k),
        survival: Vec::with_capacity(k + 1),
    };

    let mut survival = 1.0;
    // Per-player blocked mass for the literal per-player survival variant.
    let mut own_cumulative = vec![0.0_f64; n];
    let mut rank: Vec<usize> = (0..n).collect();

    for (j, triplet) in trajectory.triplets.iter().enumerate() {
        field.survival.push(survival);
        let point = triplet.point();
        let row = j * n;
        for p in &participants {
            let d = min_distance(p, point, triplet.t, cfg);
            field.distances.push(d);
            field.bases.push(base_pickup(d, triplet.t, p.team, cfg));
        }
        rank.sort_by(|&a, &b| {
            field.distances[row + a]
                .total_cmp(&field.distances[row + b])
                .then_with(|| field.player_ids[a].cmp(&field.player_ids[b]))
        });
        field
            .arrival_order
            .extend(rank.iter().map(|&i| i as u32));

        let mut cumulative: f64 = 0.0;
        for &i in &rank {
            let p = field.bases[row + i] * (1.0 - cumulative).max(0.0);
            cumulative += p;
            field.conditional[row + i] = p;
        }

        let mut row_total = 0.0;
        let mut off_c = 0.0;
        let mut def_c = 0.0;
        let mut off_u = 0.0;
        let mut def_u = 0.0;
        for i in 0..n {
            let cond = field.conditional[row + i];
            let uncond = if cfg.per_player_survival {
                cond * (1.0 - own_cumulative[i]).max(0.0)
            } else {
                cond * survival
            };
            field.unconditional[row + i] = uncond;
            own_cumulative[i] += uncond;
            row_total += uncond;
            match field.teams[i] {
                Team::Offence => {
                    off_c += cond;
                    off_u += uncond;
                }
                Team::Defence => {
                    def_c += cond;
                    def_u += uncond;
                }
            }
        }
        field.off_conditional.push(off_c);
        field.def_conditional.push(def_c);
        field.off_unconditional.push(off_u);
        field.def_unconditional.push(def_u);
        survival = (survival - row_total).max(0.0);
    }
    field.survival.push(survival);
    field
}

/// Probability that a pass released at `angle` and `speed` ends in offensive
/// control anywhere along its trajectory. Mass that reaches the end of the
/// sampled trajectory untouched counts as failure.
pub fn success_probability(
    snapshot: &Snapshot,
    speed: f64,
    angle: f64,
    cfg: &Config,
) -> Result<f64, MotionError> {
    let trajectory = pass_trajectory(snapshot.puck, speed, angle, cfg)?;
    let field = trajectory_pickup(snapshot, &trajectory, cfg);
    Ok(field.off_unconditional.iter().sum())
}

/// Success probability per surface angle at one release speed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuccessMap {
    pub speed: f64,
    pub angles: Vec<f64>,
    pub values: Vec<f64>,
}

pub fn success_map(snapshot: &Snapshot, speed: f64, cfg: &Config) -> Result<SuccessMap, MotionError> {
    let n = cfg.angle_count();
    let mut angles = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    for k in 0..n {
        let angle = cfg.angle_at(k);
        angles.push(angle);
        values.push(success_probability(snapshot, speed, angle, cfg)?);
    }
    Ok(SuccessMap {
        speed,
        angles,
        values,
    })
}
