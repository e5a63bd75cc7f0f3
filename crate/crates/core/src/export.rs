//! CSV and SVG exports for grids, lane fans, and summary scatters.
//!
//! SVGs are self-contained (inline styles only) so they diff cleanly as
//! golden files. All numeric output uses fixed precision for byte-stable
//! reruns.

use crate::analysis::{PlayerSummary, Quadrant};
use crate::config::Config;
use crate::grid::ScalarGrid;
use crate::metrics::{LaneEvaluation, PassSurface};
use crate::snapshot::{Snapshot, Team};
use std::fmt::Write;

/// Cell-center grid as `x,y,value` rows.
pub fn grid_csv(grid: &ScalarGrid) -> String {
    let mut out = String::from("x,y,value\n");
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            let (x, y) = grid.cell_center(ix, iy);
            let _ = writeln!(out, "{x:.3},{y:.3},{:.9}", grid.value(ix, iy));
        }
    }
    out
}

/// Per-triplet lane samples as `angle,x,y,t,value` rows.
pub fn lane_samples_csv(lanes: &[LaneEvaluation], values: impl Fn(&LaneEvaluation) -> &[f64]) -> String {
    let mut out = String::from("angle,x,y,t,value\n");
    for lane in lanes {
        let vals = values(lane);
        for (triplet, v) in lane.trajectory.triplets.iter().zip(vals) {
            let _ = writeln!(
                out,
                "{:.6},{:.3},{:.3},{:.2},{v:.9}",
                lane.angle, triplet.x, triplet.y, triplet.t
            );
        }
    }
    out
}

/// Polar summary of a surface as `angle,speed,value` rows.
pub fn polar_csv(surface: &PassSurface, value: impl Fn(usize, usize) -> f64) -> String {
    let mut out = String::from("angle,speed,value\n");
    for si in 0..surface.speeds.len() {
        for ai in 0..surface.angles.len() {
            let _ = writeln!(
                out,
                "{:.6},{:.1},{:.9}",
                surface.angles[ai],
                surface.speeds[si],
                value(si, ai)
            );
        }
    }
    out
}

/// Full surface as `angle,speed,success,best_case,expected` rows.
pub fn surface_csv(surface: &PassSurface) -> String {
    let mut out = String::from("angle,speed,success,best_case,expected\n");
    for si in 0..surface.speeds.len() {
        for ai in 0..surface.angles.len() {
            let c = surface.cell(si, ai);
            let _ = writeln!(
                out,
                "{:.6},{:.1},{:.9},{:.9},{:.9}",
                surface.angles[ai],
                surface.speeds[si],
                c.success,
                c.best_case,
                c.expected
            );
        }
    }
    out
}

/// Diverging color scale over [0, 1]: red marks the defence-controlled end
/// (0), blue the offence-controlled end (1), white the middle.
pub fn diverging_color(v: f64) -> String {
    let v = v.clamp(0.0, 1.0);
    let red = (178.0, 24.0, 43.0);
    let white = (247.0, 247.0, 247.0);
    let blue = (33.0, 102.0, 172.0);
    let lerp = |a: (f64, f64, f64), b: (f64, f64, f64), t: f64| {
        (
            a.0 + (b.0 - a.0) * t,
            a.1 + (b.1 - a.1) * t,
            a.2 + (b.2 - a.2) * t,
        )
    };
    let (r, g, b) = if v < 0.5 {
        lerp(red, white, v * 2.0)
    } else {
        lerp(white, blue, (v - 0.5) * 2.0)
    };
    format!("rgb({},{},{})", r.round() as u8, g.round() as u8, b.round() as u8)
}

const SCALE: f64 = 4.0;
const MARGIN: f64 = 24.0;

fn svg_open(out: &mut String, width: f64, height: f64, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN:.0}" y="16" font-family="monospace" font-size="12">{title}</text>"#
    );
}

/// y grows upward on the rink, downward in SVG.
fn to_canvas(x: f64, y: f64, cfg: &Config) -> (f64, f64) {
    (MARGIN + x * SCALE, MARGIN + (cfg.rink_width - y) * SCALE)
}

fn rink_frame(out: &mut String, cfg: &Config) {
    let (x0, y0) = to_canvas(0.0, cfg.rink_width, cfg);
    let _ = writeln!(
        out,
        r#"<rect x="{x0:.1}" y="{y0:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="black" stroke-width="1.5"/>"#,
        cfg.rink_length * SCALE,
        cfg.rink_width * SCALE
    );
    let (bx, by0) = to_canvas(cfg.blue_line_x, cfg.rink_width, cfg);
    let (_, by1) = to_canvas(cfg.blue_line_x, 0.0, cfg);
    let _ = writeln!(
        out,
        r#"<line x1="{bx:.1}" y1="{by0:.1}" x2="{bx:.1}" y2="{by1:.1}" stroke="blue" stroke-width="1" stroke-dasharray="4 3"/>"#
    );
    let (gx, gy) = to_canvas(cfg.goal_x, cfg.goal_y, cfg);
    let _ = writeln!(
        out,
        r#"<circle cx="{gx:.1}" cy="{gy:.1}" r="3" fill="none" stroke="black" stroke-width="1.2"/>"#
    );
}

fn players_overlay(out: &mut String, snapshot: &Snapshot, cfg: &Config) {
    for p in &snapshot.players {
        let (cx, cy) = to_canvas(p.position.x, p.position.y, cfg);
        let fill = match p.team {
            Team::Offence => "#1f4e9c",
            Team::Defence => "#a31621",
        };
        let stroke = if p.is_goalie { "black" } else { "white" };
        let _ = writeln!(
            out,
            r#"<circle cx="{cx:.1}" cy="{cy:.1}" r="5" fill="{fill}" stroke="{stroke}" stroke-width="1.5"/>"#
        );
        if p.id == snapshot.passer_id {
            let _ = writeln!(
                out,
                r#"<circle cx="{cx:.1}" cy="{cy:.1}" r="8" fill="none" stroke="{fill}" stroke-width="1"/>"#
            );
        }
    }
    let (px, py) = to_canvas(snapshot.puck.x, snapshot.puck.y, cfg);
    let _ = writeln!(out, r#"<circle cx="{px:.1}" cy="{py:.1}" r="2.5" fill="black"/>"#);
}

/// Rink heatmap of a scalar grid with an optional player overlay.
pub fn heatmap_svg(grid: &ScalarGrid, snapshot: Option<&Snapshot>, cfg: &Config, title: &str) -> String {
    let width = cfg.rink_length * SCALE + 2.0 * MARGIN;
    let height = cfg.rink_width * SCALE + 2.0 * MARGIN;
    let mut out = String::new();
    svg_open(&mut out, width, height, title);
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            let (x, y) = grid.cell_center(ix, iy);
            let (cx, cy) = to_canvas(x - grid.dx / 2.0, y + grid.dy / 2.0, cfg);
            let _ = writeln!(
                out,
                r#"<rect x="{cx:.1}" y="{cy:.1}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                grid.dx * SCALE,
                grid.dy * SCALE,
                diverging_color(grid.value(ix, iy))
            );
        }
    }
    rink_frame(&mut out, cfg);
    if let Some(s) = snapshot {
        players_overlay(&mut out, s, cfg);
    }
    out.push_str("</svg>\n");
    out
}

/// Fan of candidate trajectories colored by a per-lane scalar (success,
/// expected value, ...), normalized by the fan maximum.
pub fn lanes_svg(
    snapshot: &Snapshot,
    lanes: &[LaneEvaluation],
    value: impl Fn(&LaneEvaluation) -> f64,
    cfg: &Config,
    title: &str,
) -> String {
    let width = cfg.rink_length * SCALE + 2.0 * MARGIN;
    let height = cfg.rink_width * SCALE + 2.0 * MARGIN;
    let peak = lanes.iter().map(&value).fold(0.0, f64::max);
    let mut out = String::new();
    svg_open(&mut out, width, height, &format!("{title} (max {peak:.4})"));
    rink_frame(&mut out, cfg);
    for lane in lanes {
        if lane.trajectory.triplets.is_empty() {
            continue;
        }
        let v = if peak > 0.0 { value(lane) / peak } else { 0.0 };
        let mut points = String::new();
        let (px, py) = to_canvas(snapshot.puck.x, snapshot.puck.y, cfg);
        let _ = write!(points, "{px:.1},{py:.1}");
        for t in &lane.trajectory.triplets {
            let (cx, cy) = to_canvas(t.x, t.y, cfg);
            let _ = write!(points, " {cx:.1},{cy:.1}");
        }
        let _ = writeln!(
            out,
            r#"<polyline points="{points}" fill="none" stroke="{}" stroke-width="1.6" stroke-opacity="0.85"/>"#,
            diverging_color(v)
        );
    }
    players_overlay(&mut out, snapshot, cfg);
    out.push_str("</svg>\n");
    out
}

fn quadrant_fill(q: Quadrant) -> &'static str {
    match q {
        Quadrant::Best => "#2e7d32",
        Quadrant::Conservative => "#f9a825",
        Quadrant::Aggressive => "#6a1b9a",
        Quadrant::Worst => "#c62828",
    }
}

struct Panel {
    x0: f64,
    y0: f64,
    w: f64,
    h: f64,
    x_range: (f64, f64),
    y_range: (f64, f64),
}

impl Panel {
    fn place(&self, x: f64, y: f64) -> (f64, f64) {
        let fx = (x - self.x_range.0) / (self.x_range.1 - self.x_range.0);
        let fy = (y - self.y_range.0) / (self.y_range.1 - self.y_range.0);
        (self.x0 + fx * self.w, self.y0 + self.h - fy * self.h)
    }
}

fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    let pad = ((hi - lo) * 0.15).max(0.02);
    (lo - pad, hi + pad)
}

fn median_of(mut values: Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n == 0 {
        0.0
    } else if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

fn scatter_panel(
    out: &mut String,
    panel: &Panel,
    rows: &[PlayerSummary],
    axis_x: impl Fn(&PlayerSummary) -> f64,
    axis_y: impl Fn(&PlayerSummary) -> f64,
    title: &str,
    x_label: &str,
    y_label: &str,
) {
    let _ = writeln!(
        out,
        r#"<text x="{:.0}" y="{:.0}" font-family="monospace" font-size="12">{title}</text>"#,
        panel.x0,
        panel.y0 - 8.0
    );
    let mx = median_of(rows.iter().map(&axis_x).collect());
    let my = median_of(rows.iter().map(&axis_y).collect());
    let (mxc, myc) = panel.place(mx, my);
    // Quadrant shading split at the medians.
    let shade = [
        (mxc, panel.y0, panel.x0 + panel.w - mxc, myc - panel.y0, Quadrant::Best),
        (panel.x0, panel.y0, mxc - panel.x0, myc - panel.y0, Quadrant::Aggressive),
        (mxc, myc, panel.x0 + panel.w - mxc, panel.y0 + panel.h - myc, Quadrant::Conservative),
        (panel.x0, myc, mxc - panel.x0, panel.y0 + panel.h - myc, Quadrant::Worst),
    ];
    for (x, y, w, h, q) in shade {
        if w > 0.0 && h > 0.0 {
            let _ = writeln!(
                out,
                r#"<rect x="{x:.1}" y="{y:.1}" width="{w:.1}" height="{h:.1}" fill="{}" fill-opacity="0.12"/>"#,
                quadrant_fill(q)
            );
        }
    }
    let _ = writeln!(
        out,
        r#"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="black" stroke-width="1"/>"#,
        panel.x0, panel.y0, panel.w, panel.h
    );
    let _ = writeln!(
        out,
        r#"<line x1="{mxc:.1}" y1="{:.1}" x2="{mxc:.1}" y2="{:.1}" stroke="gray" stroke-width="0.8" stroke-dasharray="3 3"/>"#,
        panel.y0,
        panel.y0 + panel.h
    );
    let _ = writeln!(
        out,
        r#"<line x1="{:.1}" y1="{myc:.1}" x2="{:.1}" y2="{myc:.1}" stroke="gray" stroke-width="0.8" stroke-dasharray="3 3"/>"#,
        panel.x0,
        panel.x0 + panel.w
    );
    for s in rows {
        let (cx, cy) = panel.place(axis_x(s), axis_y(s));
        let _ = writeln!(
            out,
            r#"<circle cx="{cx:.1}" cy="{cy:.1}" r="4" fill="{}"/>"#,
            quadrant_fill(s.quadrant)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="monospace" font-size="9">{}</text>"#,
            cx + 6.0,
            cy + 3.0,
            s.player_id
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.0}" y="{:.0}" font-family="monospace" font-size="10">{x_label}</text>"#,
        panel.x0 + panel.w / 2.0 - 40.0,
        panel.y0 + panel.h + 16.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.0}" y="{:.0}" font-family="monospace" font-size="10" transform="rotate(-90 {:.0} {:.0})">{y_label}</text>"#,
        panel.x0 - 10.0,
        panel.y0 + panel.h / 2.0,
        panel.x0 - 10.0,
        panel.y0 + panel.h / 2.0
    );
}

/// Two-panel scatter: passing tendencies (success vs best case) and outcome
/// capitalization (best outcome vs relative outcome), quadrants shaded.
pub fn scatter_svg(decision: &[PlayerSummary], outcome: &[PlayerSummary]) -> String {
    let mut out = String::new();
    let (w, h) = (900.0, 420.0);
    svg_open(&mut out, w, h, "player passing summaries");
    let left = Panel {
        x0: 60.0,
        y0: 50.0,
        w: 340.0,
        h: 300.0,
        x_range: padded_range(decision.iter().map(|s| s.avg_success_probability)),
        y_range: padded_range(decision.iter().map(|s| s.avg_best_case_value)),
    };
    scatter_panel(
        &mut out,
        &left,
        decision,
        |s| s.avg_success_probability,
        |s| s.avg_best_case_value,
        "decision making",
        "avg success probability",
        "avg best case value",
    );
    let right = Panel {
        x0: 520.0,
        y0: 50.0,
        w: 340.0,
        h: 300.0,
        x_range: padded_range(outcome.iter().map(|s| s.avg_best_outcome)),
        y_range: padded_range(outcome.iter().map(|s| s.avg_relative_outcome)),
    };
    scatter_panel(
        &mut out,
        &right,
        outcome,
        |s| s.avg_best_outcome,
        |s| s.avg_relative_outcome,
        "overall outcomes",
        "avg best outcome",
        "avg relative outcome",
    );
    out.push_str("</svg>\n");
    out
}

/// Summaries as CSV rows.
pub fn summary_csv(rows: &[PlayerSummary]) -> String {
    let mut out = String::from(
        "player_id,pass_count,avg_success_probability,avg_best_case_value,avg_best_outcome,avg_relative_outcome,quadrant\n",
    );
    for s in rows {
        let quadrant = match s.quadrant {
            Quadrant::Best => "best",
            Quadrant::Conservative => "conservative",
            Quadrant::Aggressive => "aggressive",
            Quadrant::Worst => "worst",
        };
        let _ = writeln!(
            out,
            "{},{},{:.9},{:.9},{:.9},{:.9},{quadrant}",
            s.player_id,
            s.pass_count,
            s.avg_success_probability,
            s.avg_best_case_value,
            s.avg_best_outcome,
            s.avg_relative_outcome
        );
    }
    out
}
