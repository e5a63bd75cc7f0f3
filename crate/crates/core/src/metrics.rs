//! Composite pass metrics over the angle x speed surface.
//!
//! A lane is one (angle, speed) candidate: its trajectory, pick-up field and
//! per-triplet values. Surfaces collect every lane for a snapshot; play
//! evaluation adds the no-pass option, the actual pass, and the outcome
//! ratios.

use crate::config::Config;
use crate::control::{rink_control, rink_control_at};
use crate::ingest::PassPlay;
use crate::motion::{pass_trajectory, MotionError, PassTrajectory};
use crate::passing::{trajectory_pickup, PickupField};
use crate::scoring::scoring_probability;
use crate::snapshot::{PlayerId, Snapshot, SnapshotError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Conditional location value: what a triplet is worth if the puck gets
/// there, given the chance the offence controls it on arrival.
pub fn conditional_location_value(location_value: f64, off_conditional: f64) -> f64 {
    location_value * off_conditional
}

/// Location pass value: the same worth weighted by the unconditional chance
/// the offence picks the puck up at the triplet.
pub fn location_pass_value(location_value: f64, off_unconditional: f64) -> f64 {
    location_value * off_unconditional
}

/// Maximum conditional location value along a lane; 0 for an empty lane.
pub fn best_case_pass_value(clv: &[f64]) -> f64 {
    clv.iter().copied().fold(0.0, f64::max)
}

/// Sum of location pass values along a lane (compensated so the result does
/// not depend on summation order); 0 for an empty lane.
pub fn expected_pass_value(lpv: &[f64]) -> f64 {
    kahan_sum(lpv.iter().copied())
}

pub(crate) fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Full evaluation of one candidate lane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaneEvaluation {
    pub angle: f64,
    pub speed: f64,
    pub trajectory: PassTrajectory,
    pub pickup: PickupField,
    /// Rink control per triplet, at the triplet's arrival time.
    pub control: Vec<f64>,
    /// Scoring probability per triplet.
    pub scoring: Vec<f64>,
    pub location_value: Vec<f64>,
    pub clv: Vec<f64>,
    pub lpv: Vec<f64>,
    pub success: f64,
    pub best_case: f64,
    pub expected: f64,
    /// Set when the trajectory produced no triplets at all.
    pub empty: bool,
}

pub fn evaluate_lane(
    snapshot: &Snapshot,
    angle: f64,
    speed: f64,
    cfg: &Config,
) -> Result<LaneEvaluation, MotionError> {
    let trajectory = pass_trajectory(snapshot.puck, speed, angle, cfg)?;
    let pickup = trajectory_pickup(snapshot, &trajectory, cfg);
    let k = trajectory.triplets.len();
    let mut control = Vec::with_capacity(k);
    let mut scoring = Vec::with_capacity(k);
    let mut location_value = Vec::with_capacity(k);
    let mut clv = Vec::with_capacity(k);
    let mut lpv = Vec::with_capacity(k);
    for (j, triplet) in trajectory.triplets.iter().enumerate() {
        let rc = rink_control(snapshot, triplet, cfg);
        let sc = scoring_probability(triplet.point(), cfg);
        let lv = sc * rc;
        control.push(rc);
        scoring.push(sc);
        location_value.push(lv);
        clv.push(conditional_location_value(lv, pickup.off_conditional[j]));
        lpv.push(location_pass_value(lv, pickup.off_unconditional[j]));
    }
    let success = kahan_sum(pickup.off_unconditional.iter().copied());
    let best_case = best_case_pass_value(&clv);
    let expected = expected_pass_value(&lpv);
    Ok(LaneEvaluation {
        angle,
        speed,
        trajectory,
        pickup,
        control,
        scoring,
        location_value,
        clv,
        lpv,
        success,
        best_case,
        expected,
        empty: k == 0,
    })
}

/// Per-lane scalar summary kept on the surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceCell {
    pub success: f64,
    pub best_case: f64,
    pub expected: f64,
}

/// The full angle x speed surface of lane summaries for one snapshot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassSurface {
    pub angles: Vec<f64>,
    pub speeds: Vec<f64>,
    /// Row-major over `[speed][angle]`.
    pub cells: Vec<SurfaceCell>,
}

impl PassSurface {
    pub fn cell(&self, speed_idx: usize, angle_idx: usize) -> &SurfaceCell {
        &self.cells[speed_idx * self.angles.len() + angle_idx]
    }

    /// Lane with the maximal expected pass value.
    pub fn argmax_expected(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, f64)> = None;
        for si in 0..self.speeds.len() {
            for ai in 0..self.angles.len() {
                let v = self.cell(si, ai).expected;
                if best.map_or(true, |(_, _, b)| v > b) {
                    best = Some((si, ai, v));
                }
            }
        }
        best.map(|(si, ai, _)| (si, ai))
    }
}

/// Evaluates the full surface: every grid angle at every speed.
pub fn pass_surface(
    snapshot: &Snapshot,
    speeds: &[f64],
    cfg: &Config,
) -> Result<PassSurface, MotionError> {
    let n = cfg.angle_count();
    let angles: Vec<f64> = (0..n).map(|k| cfg.angle_at(k)).collect();
    let mut cells = Vec::with_capacity(n * speeds.len());
    for &speed in speeds {
        for &angle in &angles {
            let lane = evaluate_lane(snapshot, angle, speed, cfg)?;
            cells.push(SurfaceCell {
                success: lane.success,
                best_case: lane.best_case,
                expected: lane.expected,
            });
        }
    }
    Ok(PassSurface {
        angles,
        speeds: speeds.to_vec(),
        cells,
    })
}

/// Everything the engine concludes about one recorded pass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayEvaluation {
    pub game: String,
    pub period: u32,
    pub clock: f64,
    pub passer_id: PlayerId,
    pub receiver_id: PlayerId,
    pub completed: bool,
    pub actual_angle: f64,
    pub actual_speed: f64,
    /// Location value of simply keeping the puck at the passer's position.
    pub no_pass_value: f64,
    /// Expected pass value credited to the actual pass: the window maximum
    /// around the recorded direction at the recorded speed.
    pub actual_value: f64,
    /// Success probability and best-case value of the credited actual lane.
    pub actual_success_probability: f64,
    pub actual_best_case: f64,
    /// Maximum over the full surface, the actual-window candidates, and the
    /// no-pass option.
    pub best_outcome: f64,
    /// False when holding the puck beat every candidate pass.
    pub best_is_pass: bool,
    /// Argmax lane over all pass candidates (surface plus actual window).
    pub best_angle: f64,
    pub best_speed: f64,
    /// `actual_value / best_outcome`; 0 when there was nothing to gain.
    pub relative_outcome: f64,
    pub surface: PassSurface,
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("snapshot rejected: {0}")]
    Snapshot(#[from] SnapshotError),
    #[error(transparent)]
    Motion(#[from] MotionError),
    #[error("actual pass speed must be positive (got {0})")]
    BadSpeed(f64),
}

/// Number of angles on the refinement window around the recorded direction.
const ACTUAL_WINDOW_POINTS: usize = 9;

/// Normalizes to (-pi, pi], leaving in-range angles bit-identical.
fn wrap_angle(a: f64) -> f64 {
    if a > -std::f64::consts::PI && a <= std::f64::consts::PI {
        return a;
    }
    let mut a = a.rem_euclid(std::f64::consts::TAU);
    if a > std::f64::consts::PI {
        a -= std::f64::consts::TAU;
    }
    if a <= -std::f64::consts::PI {
        a += std::f64::consts::TAU;
    }
    a
}

/// Evaluates one recorded play: full surface over the candidate speeds plus
/// the actual one, the no-pass option, the credited actual lane, and the
/// best/relative outcome.
pub fn evaluate_play(play: &PassPlay, cfg: &Config) -> Result<PlayEvaluation, EvalError> {
    play.snapshot.validate(cfg)?;
    if !(play.actual_speed > 0.0) {
        return Err(EvalError::BadSpeed(play.actual_speed));
    }

    let mut speeds = cfg.candidate_speeds.clone();
    if !speeds.iter().any(|s| *s == play.actual_speed) {
        speeds.push(play.actual_speed);
    }
    let surface = pass_surface(&play.snapshot, &speeds, cfg)?;

    let passer = play
        .snapshot
        .passer()
        .expect("validated snapshot has a passer");
    let no_pass_value = scoring_probability(passer.position, cfg)
        * rink_control_at(&play.snapshot, passer.position, 0.0, cfg);

    // Refined sub-grid across the window around the recorded direction,
    // centered on the exact recorded angle, all at the recorded speed.
    let w = cfg.actual_angle_window;
    let mut actual_value = 0.0;
    let mut actual_success = 0.0;
    let mut actual_best_case = 0.0;
    let mut actual_angle_credited = play.actual_angle;
    for k in 0..ACTUAL_WINDOW_POINTS {
        let offset = -w + 2.0 * w * k as f64 / (ACTUAL_WINDOW_POINTS - 1) as f64;
        let angle = wrap_angle(play.actual_angle + offset);
        let lane = evaluate_lane(&play.snapshot, angle, play.actual_speed, cfg)?;
        if k == 0 || lane.expected > actual_value {
            actual_value = lane.expected;
            actual_success = lane.success;
            actual_best_case = lane.best_case;
            actual_angle_credited = angle;
        }
    }

    // Best pass candidate over the surface and the window.
    let mut best_pass = actual_value;
    let mut best_angle = actual_angle_credited;
    let mut best_speed = play.actual_speed;
    for si in 0..surface.speeds.len() {
        for ai in 0..surface.angles.len() {
            let v = surface.cell(si, ai).expected;
            if v > best_pass {
                best_pass = v;
                best_angle = surface.angles[ai];
                best_speed = surface.speeds[si];
            }
        }
    }
    let best_is_pass = best_pass >= no_pass_value;
    let best_outcome = best_pass.max(no_pass_value);
    let relative_outcome = if best_outcome > 0.0 {
        actual_value / best_outcome
    } else {
        0.0
    };

    Ok(PlayEvaluation {
        game: play.game.clone(),
        period: play.period,
        clock: play.clock,
        passer_id: play.snapshot.passer_id.clone(),
        receiver_id: play.receiver_id.clone(),
        completed: play.completed,
        actual_angle: play.actual_angle,
        actual_speed: play.actual_speed,
        no_pass_value,
        actual_value,
        actual_success_probability: actual_success,
        actual_best_case,
        best_outcome,
        best_is_pass,
        best_angle,
        best_speed,
        relative_outcome,
        surface,
    })
}

impl PlayEvaluation {
    pub fn key(&self) -> String {
        format!("{}:{}:{}", self.game, self.period, crate::ingest::format_clock(self.clock))
    }
}
