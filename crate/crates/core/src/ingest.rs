//! Tracking and event CSV ingestion.
//!
//! Canonical column layouts (header names are matched case-insensitively;
//! a [`ColumnMap`] renames them when the source uses different labels):
//!
//! tracking: `frame_id, clock, team, jersey, x, y` plus optional `period`
//! (defaults to 1) and `goalie` (0/1). Clocks count down in seconds remaining
//! in the period and accept either numbers or `MM:SS`.
//!
//! events: `event, period, clock, team, player, x, y` plus optional
//! `player_2, x2, y2, detail_1, travel_time`. Pass events are `Play`
//! (completed) and `Incomplete Play`; `detail_1` distinguishes `Direct`
//! from `Indirect` (absent means direct). Tracked players are identified as
//! `<team> #<jersey>`; event player fields using the same form join exactly,
//! anything else falls back to a nearest-tracked match and finally to
//! injecting the player at the event coordinates.

use crate::config::Config;
use crate::rink::Rink;
use crate::snapshot::{PlayerId, PlayerState, Snapshot, SnapshotError, Team};
use crate::vec2::Vec2;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::io::Read;
use thiserror::Error;

/// Seconds in a regulation period; converts countdown clocks to elapsed time.
pub const PERIOD_SECONDS: f64 = 1200.0;
/// Matching radius for joining event players to tracked players (ft).
pub const PLAYER_MATCH_RADIUS: f64 = 10.0;
/// Bounds for the inferred release speed (ft/sec).
pub const SPEED_BOUNDS: (f64, f64) = (20.0, 120.0);
/// Fallback release speed when no travel time can be recovered (ft/sec).
pub const DEFAULT_PASS_SPEED: f64 = 65.0;
/// Longest gap to the receiver's next event still read as the reception (sec).
const RECEPTION_WINDOW: f64 = 5.0;

/// Optional renaming of canonical column names to the ones present in the
/// source files (canonical -> actual).
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ColumnMap {
    pub tracking: HashMap<String, String>,
    pub events: HashMap<String, String>,
}

impl ColumnMap {
    pub fn from_file(path: &std::path::Path) -> Result<ColumnMap, IngestError> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(IngestError::BadColumnMap)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackingRecord {
    pub frame_id: i64,
    pub period: u32,
    /// Seconds remaining in the period.
    pub clock: f64,
    pub team: String,
    pub jersey: u32,
    pub x: f64,
    pub y: f64,
    pub goalie: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub event_type: String,
    pub period: u32,
    pub clock: f64,
    pub team: String,
    pub player: String,
    pub x: f64,
    pub y: f64,
    pub player_2: Option<String>,
    pub x2: Option<f64>,
    pub y2: Option<f64>,
    pub detail_1: Option<String>,
    pub travel_time: Option<f64>,
}

impl EventRecord {
    pub fn is_pass(&self) -> bool {
        matches!(self.event_type.as_str(), "Play" | "Incomplete Play")
    }

    pub fn is_direct(&self) -> bool {
        self.detail_1
            .as_deref()
            .map_or(true, |d| d.eq_ignore_ascii_case("direct"))
    }
}

/// One evaluable pass: the normalized frame plus the recorded pass geometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassPlay {
    pub game: String,
    pub period: u32,
    /// Seconds remaining in the period at the pass event.
    pub clock: f64,
    pub snapshot: Snapshot,
    pub actual_angle: f64,
    pub actual_speed: f64,
    pub receiver_id: PlayerId,
    pub completed: bool,
}

impl PassPlay {
    pub fn key(&self) -> String {
        format!("{}:{}:{}", self.game, self.period, format_clock(self.clock))
    }
}

pub fn format_clock(clock: f64) -> String {
    format!("{clock}")
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("{file}: missing header")]
    MissingHeader { file: &'static str },
    #[error("{file}: missing mandatory column '{column}'")]
    MissingColumn { file: &'static str, column: String },
    #[error("column map is not valid JSON: {0}")]
    BadColumnMap(serde_json::Error),
}

/// Row-level accounting for one parsed file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ParseReport {
    pub rows: usize,
    pub skipped: usize,
    pub warnings: Vec<String>,
}

impl ParseReport {
    fn warn(&mut self, message: String) {
        self.skipped += 1;
        if self.warnings.len() < 20 {
            self.warnings.push(message);
        }
    }
}

fn parse_clock(text: &str) -> Option<f64> {
    let text = text.trim();
    if let Ok(v) = text.parse::<f64>() {
        return v.is_finite().then_some(v);
    }
    let (minutes, seconds) = text.split_once(':')?;
    let m: f64 = minutes.trim().parse().ok()?;
    let s: f64 = seconds.trim().parse().ok()?;
    (m >= 0.0 && s >= 0.0).then_some(m * 60.0 + s)
}

fn parse_flag(text: &str) -> Option<bool> {
    match text.trim().to_ascii_lowercase().as_str() {
        "" => None,
        "1" | "true" | "t" | "yes" | "g" => Some(true),
        "0" | "false" | "f" | "no" => Some(false),
        _ => None,
    }
}

struct Columns {
    index: HashMap<String, usize>,
}

impl Columns {
    fn resolve(
        headers: &csv::StringRecord,
        map: &HashMap<String, String>,
        mandatory: &[&str],
        file: &'static str,
    ) -> Result<Columns, IngestError> {
        let mut index = HashMap::new();
        for canonical in mandatory.iter().copied().chain(OPTIONAL.iter().copied()) {
            let wanted = map
                .get(canonical)
                .cloned()
                .unwrap_or_else(|| canonical.to_string());
            let found = headers
                .iter()
                .position(|h| h.trim().eq_ignore_ascii_case(&wanted));
            if let Some(pos) = found {
                index.insert(canonical.to_string(), pos);
            } else if mandatory.contains(&canonical) {
                return Err(IngestError::MissingColumn {
                    file,
                    column: wanted,
                });
            }
        }
        Ok(Columns { index })
    }

    fn get<'r>(&self, record: &'r csv::StringRecord, canonical: &str) -> Option<&'r str> {
        self.index
            .get(canonical)
            .and_then(|&i| record.get(i))
            .map(str::trim)
            .filter(|s| !s.is_empty())
    }
}

const OPTIONAL: &[&str] = &[
    "period",
    "goalie",
    "player_2",
    "x2",
    "y2",
    "detail_1",
    "travel_time",
];

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

/// Parses a tracking CSV; rows with unparseable fields are skipped and
/// counted, missing mandatory columns are fatal.
pub fn parse_tracking(
    reader: impl Read,
    map: &ColumnMap,
) -> Result<(Vec<TrackingRecord>, ParseReport), IngestError> {
    let mut csv_reader = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let headers = csv_reader
        .headers()
        .map_err(|_| IngestError::MissingHeader { file: "tracking" })?
        .clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].trim().is_empty()) {
        return Err(IngestError::MissingHeader { file: "tracking" });
    }
    let cols = Columns::resolve(
        &headers,
        &map.tracking,
        &["frame_id", "clock", "team", "jersey", "x", "y"],
        "tracking",
    )?;
    let mut records = Vec::new();
    let mut report = ParseReport::default();
    for (line, row) in csv_reader.records().enumerate() {
        let row = match row {
            Ok(r) => r,
            Err(e) => {
                report.warn(format!("row {}: {e}", line + 2));
                continue;
            }
        };
        report.rows += 1;
        let parsed = (|| -> Option<TrackingRecord> {
            Some(TrackingRecord {
                frame_id: cols.get(&row, "frame_id")?.parse().ok()?,
                period: match cols.get(&row, "period") {
                    Some(p) => p.parse().ok()?,
                    None => 1,
                },
                clock: parse_clock(cols.get(&row, "clock")?)?,
                team: cols.get(&row, "team")?.to_string(),
                jersey: cols.get(&row, "jersey")?.parse().ok()?,
                x: finite(cols.get(&row, "x")?.parse().ok()?)?,
                y: finite(cols.get(&row, "y")?.parse().ok()?)?,
                goalie: cols.get(&row, "goalie").and_then(parse_flag),
            })
        })();
        match parsed {
            Some(rec) => records.push(rec),
            None => report.warn(format!("row {}: unparseable tracking fields", line + 2)),
        }
    }
    report.rows = records.len();
    Ok((records, report))
}

/// Parses an event CSV with the same row-level tolerance as tracking.
pub fn parse_events(
    reader: impl Read,
    map: &ColumnMap,
) -> Result<(Vec<EventRecord>, ParseReport), IngestError> {
    let mut csv_reader = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let headers = csv_reader
        .headers()
        .map_err(|_| IngestError::MissingHeader { file: "events" })?
        .clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].trim().is_empty()) {
        return Err(IngestError::MissingHeader { file: "events" });
    }
    let cols = Columns::resolve(
        &headers,
        &map.events,
        &["event", "period", "clock", "team", "player", "x", "y"],
        "events",
    )?;
    let mut records = Vec::new();
    let mut report = ParseReport::default();
    for (line, row) in csv_reader.records().enumerate() {
        let row = match row {
            Ok(r) => r,
            Err(e) => {
                report.warn(format!("row {}: {e}", line + 2));
                continue;
            }
        };
        let parsed = (|| -> Option<EventRecord> {
            Some(EventRecord {
                event_type: cols.get(&row, "event")?.to_string(),
                period: cols.get(&row, "period")?.parse().ok()?,
                clock: parse_clock(cols.get(&row, "clock")?)?,
                team: cols.get(&row, "team")?.to_string(),
                player: cols.get(&row, "player")?.to_string(),
                x: finite(cols.get(&row, "x")?.parse().ok()?)?,
                y: finite(cols.get(&row, "y")?.parse().ok()?)?,
                player_2: cols.get(&row, "player_2").map(str::to_string),
                x2: cols.get(&row, "x2").and_then(|v| v.parse().ok()).and_then(finite),
                y2: cols.get(&row, "y2").and_then(|v| v.parse().ok()).and_then(finite),
                detail_1: cols.get(&row, "detail_1").map(str::to_string),
                travel_time: cols
                    .get(&row, "travel_time")
                    .and_then(|v| v.parse().ok())
                    .and_then(finite),
            })
        })();
        match parsed {
            Some(rec) => records.push(rec),
            None => report.warn(format!("row {}: unparseable event fields", line + 2)),
        }
    }
    report.rows = records.len();
    Ok((records, report))
}

/// Difference quotient between consecutive frames; no history means rest.
pub fn estimate_velocity(prev: Option<Vec2>, curr: Vec2, frame_rate: f64) -> Vec2 {
    match prev {
        Some(p) => (curr - p) * frame_rate,
        None => Vec2::ZERO,
    }
}

/// Why a pass event was not turned into an evaluable play.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    IndirectPass,
    MissingReceiverFields,
    NoTrackedFrame,
    OutsideOffensiveZone,
    OneTeamOnly,
    TooFewPlayers,
    ZeroLengthPass,
    SelfPass,
    InvalidSnapshot,
}

impl RejectReason {
    pub fn as_str(self) -> &'static str {
        match self {
            RejectReason::IndirectPass => "indirect pass",
            RejectReason::MissingReceiverFields => "missing receiver fields",
            RejectReason::NoTrackedFrame => "no tracked frame at or before event",
            RejectReason::OutsideOffensiveZone => "outside offensive zone",
            RejectReason::OneTeamOnly => "one team only",
            RejectReason::TooFewPlayers => "fewer than two tracked players on a team",
            RejectReason::ZeroLengthPass => "zero-length pass",
            RejectReason::SelfPass => "passer and receiver resolve to the same player",
            RejectReason::InvalidSnapshot => "snapshot failed validation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectedPlay {
    pub key: String,
    pub reason: RejectReason,
}

/// Accounting for one game's assembly; `accepted + rejected.len()` always
/// equals `pass_events`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IngestReport {
    pub pass_events: usize,
    pub accepted: usize,
    pub rejected: Vec<RejectedPlay>,
    pub reason_counts: BTreeMap<RejectReason, usize>,
    pub velocity_clamps: usize,
    pub position_clamps: usize,
}

impl IngestReport {
    fn reject(&mut self, key: String, reason: RejectReason) {
        *self.reason_counts.entry(reason).or_insert(0) += 1;
        self.rejected.push(RejectedPlay { key, reason });
    }
}

struct FrameIndex<'a> {
    /// (period, frame_id) -> tracking rows.
    rows: BTreeMap<(u32, i64), Vec<&'a TrackingRecord>>,
    /// period -> (frame_id, clock) in frame order.
    frames: BTreeMap<u32, Vec<(i64, f64)>>,
}

impl<'a> FrameIndex<'a> {
    fn build(tracking: &'a [TrackingRecord]) -> FrameIndex<'a> {
        let mut rows: BTreeMap<(u32, i64), Vec<&TrackingRecord>> = BTreeMap::new();
        for rec in tracking {
            rows.entry((rec.period, rec.frame_id)).or_default().push(rec);
        }
        let mut frames: BTreeMap<u32, Vec<(i64, f64)>> = BTreeMap::new();
        for (&(period, frame_id), recs) in &rows {
            frames
                .entry(period)
                .or_default()
                .push((frame_id, recs[0].clock));
        }
        FrameIndex { rows, frames }
    }

    /// Frame nearest to and not after the event clock (clocks count down, so
    /// "not after" means frame clock >= event clock). Ties take the latest
    /// frame id.
    fn snapshot_frame(&self, period: u32, clock: f64) -> Option<i64> {
        let mut best: Option<(f64, i64)> = None;
        for &(frame_id, frame_clock) in self.frames.get(&period)? {
            if frame_clock < clock {
                continue;
            }
            let better = match best {
                None => true,
                Some((bc, bf)) => frame_clock < bc || (frame_clock == bc && frame_id > bf),
            };
            if better {
                best = Some((frame_clock, frame_id));
            }
        }
        best.map(|(_, f)| f)
    }
}

fn track_id(team: &str, jersey: u32) -> PlayerId {
    PlayerId::new(format!("{team} #{jersey}"))
}

/// Solve the release speed so the puck model covers `distance` in `time`.
fn infer_speed(distance: f64, time: f64, cfg: &Config) -> f64 {
    let travel = |u0: f64| -> f64 {
        crate::motion::puck_state(Vec2::ZERO, Vec2::new(u0, 0.0), time, cfg)
            .map(|s| s.position.x)
            .unwrap_or(0.0)
    };
    let (lo_bound, hi_bound) = SPEED_BOUNDS;
    if travel(hi_bound) < distance {
        return hi_bound;
    }
    if travel(lo_bound) > distance {
        return lo_bound;
    }
    let (mut lo, mut hi) = (lo_bound, hi_bound);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if travel(mid) < distance {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Travel time for a pass event: an explicit `travel_time` column wins,
/// otherwise the gap to the receiver's next event within a short window.
fn travel_time_for(event: &EventRecord, events: &[EventRecord]) -> Option<f64> {
    if let Some(t) = event.travel_time {
        if t > 0.0 {
            return Some(t);
        }
    }
    let receiver = event.player_2.as_deref()?;
    let mut best: Option<f64> = None;
    for other in events {
        if other.period != event.period || other.player != receiver {
            continue;
        }
        let dt = event.clock - other.clock;
        if dt > 0.0 && dt <= RECEPTION_WINDOW && best.map_or(true, |b| dt < b) {
            best = Some(dt);
        }
    }
    best
}

/// Assembles evaluable pass plays from one game's parsed files.
///
/// Keeps direct passes whose origin lands in the offensive zone after
/// right-half normalization, requires two tracked players per team, backfills
/// untracked passers/receivers from the event coordinates, and infers the
/// release angle and speed from the event geometry and the puck model.
pub fn build_pass_plays(
    tracking: &[TrackingRecord],
    events: &[EventRecord],
    cfg: &Config,
    game: &str,
) -> (Vec<PassPlay>, IngestReport) {
    let rink = Rink::from_config(cfg);
    let index = FrameIndex::build(tracking);
    let mut plays = Vec::new();
    let mut report = IngestReport::default();
    let speed_cap = 1.5 * cfg.v_max;

    for event in events {
        if !event.is_pass() {
            continue;
        }
        report.pass_events += 1;
        let key = format!("{game}:{}:{}", event.period, format_clock(event.clock));

        if !event.is_direct() {
            report.reject(key, RejectReason::IndirectPass);
            continue;
        }
        let (receiver_name, target) = match (&event.player_2, event.x2, event.y2) {
            (Some(name), Some(x2), Some(y2)) => (name.clone(), Vec2::new(x2, y2)),
            _ => {
                report.reject(key, RejectReason::MissingReceiverFields);
                continue;
            }
        };
        let frame_id = match index.snapshot_frame(event.period, event.clock) {
            Some(f) => f,
            None => {
                report.reject(key, RejectReason::NoTrackedFrame);
                continue;
            }
        };

        // Right-half normalization is decided by the recorded pass origin.
        let mirror = event.x < rink.length / 2.0;
        let fix_point = |p: Vec2| if mirror { rink.mirror(p) } else { p };
        let fix_vel = |v: Vec2| if mirror { -v } else { v };
        let origin = fix_point(Vec2::new(event.x, event.y));
        let target = fix_point(target);

        if !rink.in_offensive_zone(origin) {
            report.reject(key, RejectReason::OutsideOffensiveZone);
            continue;
        }

        // Build the tracked roster for the frame.
        let frame_rows = &index.rows[&(event.period, frame_id)];
        let prev_rows = index
            .rows
            .get(&(event.period, frame_id - 1))
            .map(Vec::as_slice)
            .unwrap_or(&[]);
        let mut players: Vec<PlayerState> = Vec::new();
        let mut explicit_goalie = false;
        for rec in frame_rows {
            let id = track_id(&rec.team, rec.jersey);
            if players.iter().any(|p| p.id == id) {
                continue;
            }
            let raw_pos = Vec2::new(rec.x, rec.y);
            let prev = prev_rows
                .iter()
                .find(|r| r.team == rec.team && r.jersey == rec.jersey)
                .map(|r| Vec2::new(r.x, r.y));
            let mut velocity = fix_vel(estimate_velocity(prev, raw_pos, cfg.frame_rate));
            if velocity.norm() > speed_cap {
                velocity = velocity.unit() * speed_cap;
                report.velocity_clamps += 1;
            }
            let position = fix_point(raw_pos);
            let clamped = rink.clamp(position);
            if clamped.distance(position) > 1e-9 {
                report.position_clamps += 1;
            }
            let goalie = rec.goalie.unwrap_or(false);
            explicit_goalie |= goalie;
            players.push(PlayerState {
                id,
                team: if rec.team == event.team {
                    Team::Offence
                } else {
                    Team::Defence
                },
                position: clamped,
                velocity,
                is_goalie: goalie,
            });
        }

        let tracked_off = players.iter().filter(|p| p.team == Team::Offence).count();
        let tracked_def = players.iter().filter(|p| p.team == Team::Defence).count();
        if tracked_off == 0 || tracked_def == 0 {
            report.reject(key, RejectReason::OneTeamOnly);
            continue;
        }
        if tracked_off < 2 || tracked_def < 2 {
            report.reject(key, RejectReason::TooFewPlayers);
            continue;
        }

        if !explicit_goalie {
            let goal = rink.goal;
            if let Some(nearest) = players
                .iter_mut()
                .filter(|p| p.team == Team::Defence)
                .min_by(|a, b| {
                    a.position
                        .distance(goal)
                        .total_cmp(&b.position.distance(goal))
                        .then_with(|| a.id.cmp(&b.id))
                })
            {
                nearest.is_goalie = true;
            }
        }

        // Join the passer and receiver; inject from event data when untracked.
        let passer_id = match resolve_player(&players, &event.player, origin) {
            Some(id) => id,
            None => {
                let id = PlayerId::new(event.player.clone());
                players.push(PlayerState {
                    id: id.clone(),
                    team: Team::Offence,
                    position: rink.clamp(origin),
                    velocity: Vec2::ZERO,
                    is_goalie: false,
                });
                id
            }
        };
        let receiver_id = match resolve_player(&players, &receiver_name, target) {
            Some(id) => id,
            None => {
                let id = PlayerId::new(receiver_name.clone());
                players.push(PlayerState {
                    id: id.clone(),
                    team: Team::Offence,
                    position: rink.clamp(target),
                    velocity: Vec2::ZERO,
                    is_goalie: false,
                });
                id
            }
        };
        if passer_id == receiver_id {
            report.reject(key, RejectReason::SelfPass);
            continue;
        }

        let displacement = target - origin;
        if displacement.norm() < 1e-9 {
            report.reject(key, RejectReason::ZeroLengthPass);
            continue;
        }
        let actual_angle = displacement.angle();
        let actual_speed = match travel_time_for(event, events) {
            Some(t) => infer_speed(displacement.norm(), t, cfg),
            None => DEFAULT_PASS_SPEED,
        };

        let snapshot = Snapshot {
            players,
            puck: rink.clamp(origin),
            passer_id,
            frame_time: (PERIOD_SECONDS - event.clock).max(0.0),
        };
        match snapshot.validate(cfg) {
            Ok(()) => {}
            Err(SnapshotError::TooFewPlayers(_)) => {
                report.reject(key, RejectReason::TooFewPlayers);
                continue;
            }
            Err(_) => {
                report.reject(key, RejectReason::InvalidSnapshot);
                continue;
            }
        }

        report.accepted += 1;
        plays.push(PassPlay {
            game: game.to_string(),
            period: event.period,
            clock: event.clock,
            snapshot,
            actual_angle,
            actual_speed,
            receiver_id,
            completed: event.event_type == "Play",
        });
    }
    (plays, report)
}

/// Exact `<team> #<jersey>` id match first, then the nearest same-side tracked
/// player within the match radius of the event coordinates.
fn resolve_player(players: &[PlayerState], name: &str, at: Vec2) -> Option<PlayerId> {
    if let Some(p) = players.iter().find(|p| p.id.0 == name) {
        return Some(p.id.clone());
    }
    players
        .iter()
        .filter(|p| p.team == Team::Offence && p.position.distance(at) <= PLAYER_MATCH_RADIUS)
        .min_by(|a, b| {
            a.position
                .distance(at)
                .total_cmp(&b.position.distance(at))
                .then_with(|| a.id.cmp(&b.id))
        })
        .map(|p| p.id.clone())
}
