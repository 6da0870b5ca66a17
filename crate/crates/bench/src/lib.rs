//! Seeded fixtures shared by the benchmarks.

use rand::Rng;

use cotrace::rng::{stream, Stream};
use cotrace::sensing::PERSON_CLASS;
use cotrace::{CameraZone, Detection, Position, Rect};

/// A 500 m camera at the default 0.05 m/px.
pub fn zone() -> CameraZone {
    CameraZone {
        camera_id: "cam-00-00".into(),
        world_rect: Rect::new(0.0, 0.0, 500.0, 500.0),
        meters_per_pixel: 0.05,
        mapped_cells: vec![],
        miss_prob: 0.0,
    }
}

/// `n` person detections spread uniformly over a `side_px` square.
pub fn frame(n: usize, side_px: f64, seed: u64) -> Vec<Detection> {
    let mut rng = stream(seed, Stream::Sensing);
    (0..n)
        .map(|_| Detection {
            camera_id: "cam-00-00".into(),
            frame_time: 0.0,
            cx: rng.random_range(0.0..side_px),
            cy: rng.random_range(0.0..side_px),
            width: 10.0,
            height: 34.0,
            confidence: 1.0,
            class_label: PERSON_CLASS.into(),
            source_agent: None,
        })
        .collect()
}

pub fn points(n: usize, side: f64, seed: u64) -> Vec<Position> {
    let mut rng = stream(seed, Stream::World);
    (0..n)
        .map(|_| Position::new(rng.random_range(0.0..side), rng.random_range(0.0..side)))
        .collect()
}
