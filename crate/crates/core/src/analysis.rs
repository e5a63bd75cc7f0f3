//! Per-player aggregation of play evaluations.

use crate::metrics::PlayEvaluation;
use crate::snapshot::PlayerId;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Quadrant of the two-axis summary plots, split at the cohort medians.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quadrant {
    /// Above the median on both axes.
    Best,
    /// Above on the first axis (safety / available value), below on the second.
    Conservative,
    /// Below on the first axis, above on the second.
    Aggressive,
    /// Below on both.
    Worst,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerSummary {
    pub player_id: PlayerId,
    pub pass_count: usize,
    pub avg_success_probability: f64,
    pub avg_best_case_value: f64,
    pub avg_best_outcome: f64,
    pub avg_relative_outcome: f64,
    pub quadrant: Quadrant,
}

struct PlayerAccumulator {
    success: Vec<f64>,
    best_case: Vec<f64>,
    best_outcome: Vec<f64>,
    relative_outcome: Vec<f64>,
}

/// Mean over values sorted before summation, so input play order never
/// changes the result.
fn stable_mean(values: &mut Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    values.iter().sum::<f64>() / values.len() as f64
}

fn median(mut values: Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

fn collect(evaluations: &[PlayEvaluation], min_passes: usize) -> Vec<PlayerSummary> {
    let mut by_player: BTreeMap<PlayerId, PlayerAccumulator> = BTreeMap::new();
    for e in evaluations {
        let acc = by_player
            .entry(e.passer_id.clone())
            .or_insert_with(|| PlayerAccumulator {
                success: Vec::new(),
                best_case: Vec::new(),
                best_outcome: Vec::new(),
                relative_outcome: Vec::new(),
            });
        acc.success.push(e.actual_success_probability);
        acc.best_case.push(e.actual_best_case);
        acc.best_outcome.push(e.best_outcome);
        acc.relative_outcome.push(e.relative_outcome);
    }
    by_player
        .into_iter()
        .filter(|(_, acc)| acc.success.len() >= min_passes)
        .map(|(player_id, mut acc)| PlayerSummary {
            player_id,
            pass_count: acc.success.len(),
            avg_success_probability: stable_mean(&mut acc.success),
            avg_best_case_value: stable_mean(&mut acc.best_case),
            avg_best_outcome: stable_mean(&mut acc.best_outcome),
            avg_relative_outcome: stable_mean(&mut acc.relative_outcome),
            quadrant: Quadrant::Worst, // assigned after the cohort is known
        })
        .collect()
}

fn assign_quadrants(
    summaries: &mut [PlayerSummary],
    axis_x: impl Fn(&PlayerSummary) -> f64,
    axis_y: impl Fn(&PlayerSummary) -> f64,
    thresholds: Option<(f64, f64)>,
) {
    if summaries.is_empty() {
        return;
    }
    let (mx, my) = thresholds.unwrap_or_else(|| {
        (
            median(summaries.iter().map(&axis_x).collect()),
            median(summaries.iter().map(&axis_y).collect()),
        )
    });
    for s in summaries.iter_mut() {
        let high_x = axis_x(s) >= mx;
        let high_y = axis_y(s) >= my;
        s.quadrant = match (high_x, high_y) {
            (true, true) => Quadrant::Best,
            (true, false) => Quadrant::Conservative,
            (false, true) => Quadrant::Aggressive,
            (false, false) => Quadrant::Worst,
        };
    }
}

/// Passing-tendency summary: average success probability of the credited
/// actual pass against its average best-case value. Quadrants split at the
/// cohort medians unless fixed `thresholds` (success, best-case) are given.
pub fn decision_summary(
    evaluations: &[PlayEvaluation],
    min_passes: usize,
    thresholds: Option<(f64, f64)>,
) -> Vec<PlayerSummary> {
    let mut summaries = collect(evaluations, min_passes);
    assign_quadrants(
        &mut summaries,
        |s| s.avg_success_probability,
        |s| s.avg_best_case_value,
        thresholds,
    );
    summaries
}

/// Performance summary: average best outcome available against the average
/// relative outcome achieved.
pub fn outcome_summary(
    evaluations: &[PlayEvaluation],
    min_passes: usize,
    thresholds: Option<(f64, f64)>,
) -> Vec<PlayerSummary> {
    let mut summaries = collect(evaluations, min_passes);
    assign_quadrants(
        &mut summaries,
        |s| s.avg_best_outcome,
        |s| s.avg_relative_outcome,
        thresholds,
    );
    summaries
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{PassSurface, PlayEvaluation};

    fn eval(passer: &str, success: f64, best_case: f64, best: f64, relative: f64) -> PlayEvaluation {
        PlayEvaluation {
            game: "g".into(),
            period: 1,
            clock: 100.0,
            passer_id: PlayerId::new(passer),
            receiver_id: PlayerId::new("r"),
            completed: true,
            actual_angle: 0.0,
            actual_speed: 65.0,
            no_pass_value: 0.0,
            actual_value: relative * best,
            actual_success_probability: success,
            actual_best_case: best_case,
            best_outcome: best,
            best_is_pass: true,
            best_angle: 0.0,
            best_speed: 65.0,
            relative_outcome: relative,
            surface: PassSurface {
                angles: vec![],
                speeds: vec![],
                cells: vec![],
            },
        }
    }

    #[test]
    fn averages_identical_plays() {
        let evals = vec![
            eval("a", 0.4, 0.1, 0.2, 0.5),
            eval("a", 0.4, 0.1, 0.2, 0.5),
            eval("a", 0.4, 0.1, 0.2, 0.5),
        ];
        let got = decision_summary(&evals, 3, None);
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].pass_count, 3);
        assert!((got[0].avg_success_probability - 0.4).abs() < 1e-15);
        assert!((got[0].avg_best_case_value - 0.1).abs() < 1e-15);
    }

    #[test]
    fn below_threshold_players_are_excluded() {
        let evals = vec![eval("a", 0.4, 0.1, 0.2, 0.5), eval("a", 0.4, 0.1, 0.2, 0.5)];
        assert!(decision_summary(&evals, 3, None).is_empty());
        assert_eq!(decision_summary(&evals, 2, None).len(), 1);
    }

    #[test]
    fn symmetric_players_land_in_opposite_quadrants() {
        let mut evals = Vec::new();
        for _ in 0..3 {
            evals.push(eval("high", 0.8, 0.3, 0.3, 0.9));
            evals.push(eval("low", 0.2, 0.1, 0.1, 0.3));
        }
        let got = decision_summary(&evals, 3, None);
        assert_eq!(got.len(), 2);
        let high = got.iter().find(|s| s.player_id.0 == "high").unwrap();
        let low = got.iter().find(|s| s.player_id.0 == "low").unwrap();
        assert_eq!(high.quadrant, Quadrant::Best);
        assert_eq!(low.quadrant, Quadrant::Worst);
    }

    #[test]
    fn quadrants_track_axis_mix() {
        let mut evals = Vec::new();
        for _ in 0..3 {
            evals.push(eval("safe-dull", 0.9, 0.05, 0.3, 0.2));
            evals.push(eval("risky-rich", 0.1, 0.40, 0.6, 0.8));
        }
        let got = decision_summary(&evals, 3, None);
        let safe = got.iter().find(|s| s.player_id.0 == "safe-dull").unwrap();
        let risky = got.iter().find(|s| s.player_id.0 == "risky-rich").unwrap();
        assert_eq!(safe.quadrant, Quadrant::Conservative);
        assert_eq!(risky.quadrant, Quadrant::Aggressive);
    }

    #[test]
    fn outcome_summary_shares_counts_with_decision_summary() {
        let mut evals = Vec::new();
        for k in 0..4 {
            evals.push(eval("a", 0.1 * k as f64, 0.2, 0.3, 0.5));
        }
        for _ in 0..3 {
            evals.push(eval("b", 0.5, 0.1, 0.2, 1.0));
        }
        let decision = decision_summary(&evals, 3, None);
        let outcome = outcome_summary(&evals, 3, None);
        assert_eq!(decision.len(), outcome.len());
        for (d, o) in decision.iter().zip(&outcome) {
            assert_eq!(d.player_id, o.player_id);
            assert_eq!(d.pass_count, o.pass_count);
        }
        let b = outcome.iter().find(|s| s.player_id.0 == "b").unwrap();
        assert_eq!(b.avg_relative_outcome, 1.0);
    }

    #[test]
    fn summaries_are_permutation_invariant() {
        let mut evals = Vec::new();
        for k in 0..6 {
            evals.push(eval("a", 0.1 + 0.07 * k as f64, 0.2 - 0.01 * k as f64, 0.3, 0.4));
            evals.push(eval("b", 0.3 + 0.11 * k as f64, 0.1 + 0.02 * k as f64, 0.2, 0.6));
        }
        let forward = decision_summary(&evals, 3, None);
        evals.reverse();
        let backward = decision_summary(&evals, 3, None);
        assert_eq!(forward, backward);
    }

    #[test]
    fn empty_cohort_is_empty() {
        assert!(decision_summary(&[], 3, None).is_empty());
        assert!(outcome_summary(&[], 1, None).is_empty());
    }

    #[test]
    fn quadrants_survive_monotone_rescaling() {
        let mut evals = Vec::new();
        for (name, s, b) in [
            ("p1", 0.2, 0.05),
            ("p2", 0.5, 0.15),
            ("p3", 0.7, 0.02),
            ("p4", 0.9, 0.30),
        ] {
            for _ in 0..3 {
                evals.push(eval(name, s, b, 0.3, 0.5));
            }
        }
        let base = decision_summary(&evals, 3, None);
        // Strictly monotone rescaling of both axes.
        for e in &mut evals {
            e.actual_success_probability = e.actual_success_probability.powi(3);
            e.actual_best_case = (1.0 + e.actual_best_case).ln();
        }
        let rescaled = decision_summary(&evals, 3, None);
        for (a, b) in base.iter().zip(&rescaled) {
            assert_eq!(a.player_id, b.player_id);
            assert_eq!(a.quadrant, b.quadrant);
        }
    }
}
