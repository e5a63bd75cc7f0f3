//! Shared scenario builders for the evaluation benchmarks.

use rinkpass::ingest::PassPlay;
use rinkpass::snapshot::{Snapshot, Team};
use rinkpass::testkit;

/// The canonical 10-player power-play frame.
pub fn bench_snapshot() -> Snapshot {
    testkit::power_play_snapshot()
}

/// A full play built on the bench snapshot with a recorded cross-ice pass.
pub fn bench_play() -> PassPlay {
    let snapshot = bench_snapshot();
    let receiver = snapshot
        .players
        .iter()
        .find(|p| p.team == Team::Offence && p.id != snapshot.passer_id)
        .expect("snapshot has a receiver")
        .id
        .clone();
    let actual_angle = (snapshot.players[1].position - snapshot.puck).angle();
    PassPlay {
        game: "bench".into(),
        period: 1,
        clock: 600.0,
        snapshot,
        actual_angle,
        actual_speed: 65.0,
        receiver_id: receiver,
        completed: true,
    }
}
