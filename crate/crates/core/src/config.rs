//! Model constants and their validation.
//!
//! Every constant of the evaluation model lives here so a single flat JSON
//! document fully determines a run. Absent keys take defaults, unknown keys
//! are rejected, and all invariants are checked up front.

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::path::Path;
use thiserror::Error;

/// All tunable constants of the evaluation model.
///
/// Units: feet, seconds, radians throughout. Angles live in (-pi, pi].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Player drag rate (1/sec). Controls how quickly skaters approach top speed.
    pub gamma: f64,
    /// Player top speed (ft/sec).
    pub v_max: f64,
    /// Tracking frames per second.
    pub frame_rate: f64,
    /// Player reaction time (sec): skaters coast on their current path this long.
    pub t_reaction: f64,
    /// Maximum goalie excursion from the net center (ft).
    pub goalie_radius: f64,
    /// Puck Stokes-drag rate kappa = k/m (1/sec).
    pub kappa: f64,
    /// Puck friction deceleration mu*g (ft/sec^2). Stored as the product;
    /// the friction coefficient alone never enters the model.
    pub mu_decel: f64,
    /// Trajectory time step (sec).
    pub dt: f64,
    /// Angular resolution of the pass surface (rad).
    pub d_alpha: f64,
    /// Rink-control exponent; 0 ignores arrival order, large values approach
    /// a nearest-arrival indicator.
    pub beta: f64,
    /// Player reach (ft): body, stick and arm coverage around the skater.
    pub reach: f64,
    /// Time window one reach is assumed to cover a passing puck (sec).
    pub coverage_window: f64,
    /// Intercept reaction constant for the offence (sec).
    pub t_intercept_off: f64,
    /// Intercept reaction constant for the defence (sec).
    pub t_intercept_def: f64,
    /// Scoring decay length along x (ft^2).
    pub ell_x: f64,
    /// Scoring decay length along y (ft^2).
    pub ell_y: f64,
    /// Goal center x (ft).
    pub goal_x: f64,
    /// Goal center y (ft).
    pub goal_y: f64,
    /// Rink length (ft).
    pub rink_length: f64,
    /// Rink width (ft).
    pub rink_width: f64,
    /// Offensive-zone boundary after right-half normalization (ft).
    pub blue_line_x: f64,
    /// Candidate pass speeds evaluated for every play (ft/sec).
    pub candidate_speeds: Vec<f64>,
    /// Half-width of the angle window around the recorded pass direction (rad).
    pub actual_angle_window: f64,
    /// Minimum arrival-delay tau in rink control (sec).
    pub tau_floor: f64,
    /// Puck speed below which a trajectory terminates (ft/sec).
    pub puck_stop_speed: f64,
    /// Trajectory time cap (sec).
    pub t_max: f64,
    /// Drop the passer from rink-control sums as well as pick-up sums.
    pub exclude_passer_from_control: bool,
    /// Swap the offensive/defensive intercept constants in the pick-up decay.
    pub swap_intercept_constants: bool,
    /// Use the per-player survival recursion (each player only blocked by her
    /// own earlier pick-ups) instead of the conserving all-player survival.
    pub per_player_survival: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            gamma: 1.3,
            v_max: 35.5,
            frame_rate: 30.0,
            t_reaction: 0.189,
            goalie_radius: 8.0,
            kappa: 0.05,
            mu_decel: 3.217,
            dt: 0.05,
            d_alpha: 0.05,
            beta: 2.5,
            reach: 6.5,
            coverage_window: 0.1,
            t_intercept_off: 0.189,
            t_intercept_def: 0.289,
            ell_x: 2000.0,
            ell_y: 500.0,
            goal_x: 189.0,
            goal_y: 42.5,
            rink_length: 200.0,
            rink_width: 85.0,
            blue_line_x: 125.0,
            candidate_speeds: vec![45.0, 65.0, 85.0],
            actual_angle_window: 0.10,
            tau_floor: 0.05,
            puck_stop_speed: 1.0,
            t_max: 5.0,
            exclude_passer_from_control: false,
            swap_intercept_constants: false,
            per_player_survival: false,
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("failed to read config file: {0}")]
    Io(#[from] std::io::Error),
    #[error("failed to parse config JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid config: {}", .0.join("; "))]
    Invalid(Vec<String>),
}

impl Config {
    /// Checks every invariant and returns the config unchanged if all hold.
    ///
    /// Violations are reported together, one message per offending field.
    pub fn validate(self) -> Result<Config, ConfigError> {
        let mut errors = Vec::new();
        let positive = [
            ("gamma", self.gamma),
            ("v_max", self.v_max),
            ("frame_rate", self.frame_rate),
            ("t_reaction", self.t_reaction),
            ("goalie_radius", self.goalie_radius),
            ("kappa", self.kappa),
            ("mu_decel", self.mu_decel),
            ("dt", self.dt),
            ("d_alpha", self.d_alpha),
            ("reach", self.reach),
            ("coverage_window", self.coverage_window),
            ("t_intercept_off", self.t_intercept_off),
            ("t_intercept_def", self.t_intercept_def),
            ("ell_x", self.ell_x),
            ("ell_y", self.ell_y),
            ("rink_length", self.rink_length),
            ("rink_width", self.rink_width),
            ("blue_line_x", self.blue_line_x),
            ("actual_angle_window", self.actual_angle_window),
            ("tau_floor", self.tau_floor),
            ("puck_stop_speed", self.puck_stop_speed),
            ("t_max", self.t_max),
        ];
        for (name, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                errors.push(format!("{name} must be positive (got {value})"));
            }
        }
        if !(self.beta >= 0.0) || !self.beta.is_finite() {
            errors.push(format!("beta must be non-negative (got {})", self.beta));
        }
        if self.dt > self.coverage_window {
            errors.push(format!(
                "dt must not exceed coverage_window (dt {} > coverage_window {})",
                self.dt, self.coverage_window
            ));
        }
        if self.d_alpha > 0.0 {
            let n = (TAU / self.d_alpha).round();
            if n < 1.0 || (TAU - n * self.d_alpha).abs() > self.d_alpha {
                errors.push(format!(
                    "d_alpha must divide 2*pi to within one grid cell (got {})",
                    self.d_alpha
                ));
            }
        }
        if !(self.goal_x > 0.0 && self.goal_x < self.rink_length) {
            errors.push(format!(
                "goal_x must lie inside the rink (got {} for rink length {})",
                self.goal_x, self.rink_length
            ));
        }
        if !(self.goal_y > 0.0 && self.goal_y < self.rink_width) {
            errors.push(format!(
                "goal_y must lie inside the rink (got {} for rink width {})",
                self.goal_y, self.rink_width
            ));
        }
        if self.blue_line_x >= self.rink_length {
            errors.push(format!(
                "blue_line_x must lie inside the rink (got {})",
                self.blue_line_x
            ));
        }
        if self.candidate_speeds.is_empty() {
            errors.push("candidate_speeds must not be empty".to_string());
        }
        for (i, s) in self.candidate_speeds.iter().enumerate() {
            if !(*s > 0.0) || !s.is_finite() {
                errors.push(format!("candidate_speeds[{i}] must be positive (got {s})"));
            }
        }
        if errors.is_empty() {
            Ok(self)
        } else {
            Err(ConfigError::Invalid(errors))
        }
    }

    /// Loads a config from a flat JSON document; absent keys take defaults.
    pub fn from_json(text: &str) -> Result<Config, ConfigError> {
        let cfg: Config = serde_json::from_str(text)?;
        cfg.validate()
    }

    pub fn from_file(path: &Path) -> Result<Config, ConfigError> {
        Config::from_json(&std::fs::read_to_string(path)?)
    }

    /// Number of angles on the pass surface grid over (-pi, pi].
    pub fn angle_count(&self) -> usize {
        (TAU / self.d_alpha).round().max(1.0) as usize
    }

    /// The k-th surface angle; k in 0..angle_count(). Spans (-pi, pi].
    pub fn angle_at(&self, k: usize) -> f64 {
        let n = self.angle_count() as f64;
        -std::f64::consts::PI + TAU * (k as f64 + 1.0) / n
    }

    /// Intercept reaction constant for one side, honoring the swap switch.
    pub fn intercept_constant(&self, side: crate::snapshot::Team) -> f64 {
        use crate::snapshot::Team;
        let (off, def) = if self.swap_intercept_constants {
            (self.t_intercept_def, self.t_intercept_off)
        } else {
            (self.t_intercept_off, self.t_intercept_def)
        };
        match side {
            Team::Offence => off,
            Team::Defence => def,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid_and_unchanged() {
        let cfg = Config::default();
        let validated = cfg.clone().validate().unwrap();
        assert_eq!(cfg, validated);
    }

    #[test]
    fn zero_gamma_is_rejected_by_name() {
        let cfg = Config {
            gamma: 0.0,
            ..Config::default()
        };
        let err = cfg.validate().unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("gamma must be positive"), "{msg}");
    }

    #[test]
    fn dt_exceeding_coverage_window_is_rejected() {
        let cfg = Config {
            dt: 0.2,
            coverage_window: 0.1,
            ..Config::default()
        };
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("coverage_window"), "{err}");
    }

    #[test]
    fn goal_outside_rink_is_rejected() {
        let cfg = Config {
            goal_x: 250.0,
            ..Config::default()
        };
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("goal_x"), "{err}");
    }

    #[test]
    fn multiple_violations_are_all_reported() {
        let cfg = Config {
            gamma: -1.0,
            ell_x: 0.0,
            ..Config::default()
        };
        match cfg.validate().unwrap_err() {
            ConfigError::Invalid(errors) => {
                assert!(errors.iter().any(|e| e.contains("gamma")));
                assert!(errors.iter().any(|e| e.contains("ell_x")));
            }
            other => panic!("expected Invalid, got {other}"),
        }
    }

    #[test]
    fn absent_keys_take_defaults_and_unknown_keys_error() {
        let cfg = Config::from_json(r#"{"beta": 3.0}"#).unwrap();
        assert_eq!(cfg.beta, 3.0);
        assert_eq!(cfg.gamma, Config::default().gamma);

        let err = Config::from_json(r#"{"betaa": 3.0}"#).unwrap_err();
        assert!(matches!(err, ConfigError::Json(_)));
    }

    #[test]
    fn round_trips_bit_exactly() {
        let cfg = Config::default();
        let json = serde_json::to_string(&cfg).unwrap();
        let back: Config = serde_json::from_str(&json).unwrap();
        assert_eq!(cfg, back);
        assert!(back.gamma.to_bits() == cfg.gamma.to_bits());
        assert!(back.mu_decel.to_bits() == cfg.mu_decel.to_bits());
    }

    #[test]
    fn angle_grid_spans_half_open_circle() {
        let cfg = Config::default();
        let n = cfg.angle_count();
        assert_eq!(n, 126);
        let first = cfg.angle_at(0);
        let last = cfg.angle_at(n - 1);
        assert!(first > -std::f64::consts::PI);
        assert!((last - std::f64::consts::PI).abs() < 1e-12);
    }
}
