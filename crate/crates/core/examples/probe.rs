// Scratch probe for fixture tuning (removed before release).
use rinkpass::config::Config;
use rinkpass::control::rink_control_at;
use rinkpass::metrics::{evaluate_lane, pass_surface};
use rinkpass::passing::success_probability;
use rinkpass::scoring::scoring_probability;
use rinkpass::snapshot::*;
use rinkpass::testkit;
use rinkpass::vec2::Vec2;

fn main() {
    let cfg = Config::default();

    // open receiver scenarios
    for (d, sp) in [(6.0, 20.0), (8.0, 25.0), (12.0, 30.0), (12.0, 45.0), (6.0, 45.0)] {
        let snap = testkit::open_receiver_snapshot(d);
        let s = success_probability(&snap, sp, 0.0, &cfg).unwrap();
        let away = success_probability(&snap, sp, std::f64::consts::PI, &cfg).unwrap();
        println!("open receiver d={d} speed={sp}: toward={s:.4} away={away:.6}");
    }

    // power play snapshot: no-pass vs surface max
    let snap = testkit::power_play_snapshot();
    let passer = snap.passer().unwrap();
    let np = scoring_probability(passer.position, &cfg)
        * rink_control_at(&snap, passer.position, 0.0, &cfg);
    let surface = pass_surface(&snap, &cfg.candidate_speeds, &cfg).unwrap();
    let (si, ai) = surface.argmax_expected().unwrap();
    println!(
        "power play: no_pass={np:.5} surface max={:.5} at angle {:.3} speed {}",
        surface.cell(si, ai).expected,
        surface.angles[ai],
        surface.speeds[si]
    );

    // two lane snapshot
    let (snap, open_b, blocked_b) = testkit::two_lane_snapshot();
    let passer = snap.passer().unwrap();
    let np = scoring_probability(passer.position, &cfg)
        * rink_control_at(&snap, passer.position, 0.0, &cfg);
    let open = evaluate_lane(&snap, open_b, 65.0, &cfg).unwrap();
    let blocked = evaluate_lane(&snap, blocked_b, 65.0, &cfg).unwrap();
    let surface = pass_surface(&snap, &cfg.candidate_speeds, &cfg).unwrap();
    let (si, ai) = surface.argmax_expected().unwrap();
    println!(
        "two lanes: no_pass={np:.5} open@65={:.5} blocked@65={:.5} surfmax={:.5} angle {:.3} (open bearing {:.3}) speed {}",
        open.expected,
        blocked.expected,
        surface.cell(si, ai).expected,
        surface.angles[ai],
        open_b,
        surface.speeds[si]
    );
}
