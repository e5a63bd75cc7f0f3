//! Rink geometry helpers.

use crate::config::Config;
use crate::vec2::Vec2;
use serde::{Deserialize, Serialize};

/// Rink rectangle with the attacking goal. All plays are normalized so the
/// offence attacks the right-half goal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rink {
    pub length: f64,
    pub width: f64,
    pub goal: Vec2,
    pub blue_line_x: f64,
}

impl Rink {
    pub fn from_config(cfg: &Config) -> Rink {
        Rink {
            length: cfg.rink_length,
            width: cfg.rink_width,
            goal: Vec2::new(cfg.goal_x, cfg.goal_y),
            blue_line_x: cfg.blue_line_x,
        }
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= 0.0 && p.x <= self.length && p.y >= 0.0 && p.y <= self.width
    }

    /// Point reflection about the rink center: maps the left-half attack onto
    /// the right half. Applying it twice is the identity.
    pub fn mirror(&self, p: Vec2) -> Vec2 {
        Vec2::new(self.length - p.x, self.width - p.y)
    }

    /// Whether a point lies in the offensive zone after normalization.
    pub fn in_offensive_zone(&self, p: Vec2) -> bool {
        self.contains(p) && p.x >= self.blue_line_x
    }

    /// Nearest in-rink point; used when cleaning slightly out-of-bounds data.
    pub fn clamp(&self, p: Vec2) -> Vec2 {
        Vec2::new(p.x.clamp(0.0, self.length), p.y.clamp(0.0, self.width))
    }
}
