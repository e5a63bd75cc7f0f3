//! Immutable per-frame state: players, puck, and the passer.

use crate::config::Config;
use crate::rink::Rink;
use crate::vec2::Vec2;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Team role relative to the evaluated play: the passer's team is the offence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Team {
    Offence,
    Defence,
}

impl Team {
    /// Charge-style label: +1 offence, -1 defence.
    pub fn label(self) -> f64 {
        match self {
            Team::Offence => 1.0,
            Team::Defence => -1.0,
        }
    }

    pub fn opponent(self) -> Team {
        match self {
            Team::Offence => Team::Defence,
            Team::Defence => Team::Offence,
        }
    }
}

/// Opaque player identifier; also the deterministic tie-breaker wherever
/// players are ranked.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlayerId(pub String);

impl PlayerId {
    pub fn new(s: impl Into<String>) -> Self {
        PlayerId(s.into())
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerState {
    pub id: PlayerId,
    pub team: Team,
    pub position: Vec2,
    pub velocity: Vec2,
    pub is_goalie: bool,
}

/// One (x, y, t) sample along a candidate pass trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Triplet {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

impl Triplet {
    pub fn new(x: f64, y: f64, t: f64) -> Self {
        Triplet { x, y, t }
    }

    pub fn point(&self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }
}

/// Immutable state of one tracked frame, normalized to right-half attack.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub players: Vec<PlayerState>,
    pub puck: Vec2,
    pub passer_id: PlayerId,
    /// Seconds since the period start.
    pub frame_time: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum SnapshotError {
    #[error("no player matches passer id {0}")]
    MissingPasser(PlayerId),
    #[error("{count} players match passer id {id}")]
    AmbiguousPasser { id: PlayerId, count: usize },
    #[error("fewer than two {0:?} players tracked")]
    TooFewPlayers(Team),
    #[error("puck position ({0}, {1}) outside the rink")]
    PuckOutsideRink(f64, f64),
    #[error("player {id} position ({x}, {y}) outside the rink")]
    PlayerOutsideRink { id: PlayerId, x: f64, y: f64 },
    #[error("player {id} speed {speed:.1} exceeds the {limit:.1} ft/sec cap")]
    SpeedOutOfRange {
        id: PlayerId,
        speed: f64,
        limit: f64,
    },
}

impl Snapshot {
    pub fn passer(&self) -> Option<&PlayerState> {
        self.players.iter().find(|p| p.id == self.passer_id)
    }

    pub fn team_count(&self, team: Team) -> usize {
        self.players.iter().filter(|p| p.team == team).count()
    }

    /// Checks the frame invariants: exactly one passer, at least two players
    /// per team, everything inside the rink, velocities within the clamp cap.
    pub fn validate(&self, cfg: &Config) -> Result<(), SnapshotError> {
        let rink = Rink::from_config(cfg);
        let matches = self
            .players
            .iter()
            .filter(|p| p.id == self.passer_id)
            .count();
        match matches {
            0 => return Err(SnapshotError::MissingPasser(self.passer_id.clone())),
            1 => {}
            count => {
                return Err(SnapshotError::AmbiguousPasser {
                    id: self.passer_id.clone(),
                    count,
                })
            }
        }
        for team in [Team::Offence, Team::Defence] {
            if self.team_count(team) < 2 {
                return Err(SnapshotError::TooFewPlayers(team));
            }
        }
        if !rink.contains(self.puck) {
            return Err(SnapshotError::PuckOutsideRink(self.puck.x, self.puck.y));
        }
        let speed_cap = 1.5 * cfg.v_max;
        for p in &self.players {
            if !rink.contains(p.position) {
                return Err(SnapshotError::PlayerOutsideRink {
                    id: p.id.clone(),
                    x: p.position.x,
                    y: p.position.y,
                });
            }
            let speed = p.velocity.norm();
            if speed > speed_cap * (1.0 + 1e-9) {
                return Err(SnapshotError::SpeedOutOfRange {
                    id: p.id.clone(),
                    speed,
                    limit: speed_cap,
                });
            }
        }
        Ok(())
    }
}
