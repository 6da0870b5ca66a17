//! Camera zones, synthetic detections and the inter-object distance rule.
//!
//! Cameras look straight down: a detection's pixel center maps to world
//! meters through one scalar `meters_per_pixel`, so distances in the image
//! are distances on the ground.

use std::collections::{BTreeMap, HashSet};
use std::io::{BufRead, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::SimConfig;
use crate::error::{IngestError, SensingError};
use crate::infra::{cells_for_camera, CellMap};
use crate::types::{tile, AgentId, CellId, Position, Rect};
use crate::world::WorldState;

/// Nominal person footprint used for synthetic boxes, meters.
pub const PERSON_WIDTH_M: f64 = 0.5;
pub const PERSON_HEIGHT_M: f64 = 1.7;
pub const PERSON_CLASS: &str = "person";

/// One bounding box. Serialized as one line of the detection wire format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    pub camera_id: String,
    pub frame_time: f64,
    pub cx: f64,
    pub cy: f64,
    #[serde(rename = "w")]
    pub width: f64,
    #[serde(rename = "h")]
    pub height: f64,
    pub confidence: f64,
    #[serde(rename = "class")]
    pub class_label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_agent: Option<AgentId>,
}

impl Detection {
    pub fn is_person(&self) -> bool {
        self.class_label == PERSON_CLASS
    }

    fn check(&self) -> Result<(), String> {
        let finite = [
            self.frame_time,
            self.cx,
            self.cy,
            self.width,
            self.height,
            self.confidence,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err("non-finite number".into());
        }
        if self.width <= 0.0 || self.height <= 0.0 {
            return Err(format!(
                "box size must be positive (w={}, h={})",
                self.width, self.height
            ));
        }
        if !(0.0..=1.0).contains(&self.confidence) {
            return Err(format!("confidence {} outside [0, 1]", self.confidence));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CameraZone {
    pub camera_id: String,
    pub world_rect: Rect,
    pub meters_per_pixel: f64,
    pub mapped_cells: Vec<CellId>,
    pub miss_prob: f64,
}

impl CameraZone {
    pub fn to_pixels(&self, p: Position) -> (f64, f64) {
        (
            (p.x - self.world_rect.x0) / self.meters_per_pixel,
            (p.y - self.world_rect.y0) / self.meters_per_pixel,
        )
    }

    pub fn to_world(&self, cx: f64, cy: f64) -> Position {
        Position::new(
            cx * self.meters_per_pixel + self.world_rect.x0,
            cy * self.meters_per_pixel + self.world_rect.y0,
        )
    }
}

pub fn camera_id(row: u32, col: u32) -> String {
    format!("cam-{row:02}-{col:02}")
}

/// Tiles the area with `config.camera_grid` cameras and maps each to the
/// base-station cells it overlaps.
pub fn build_cameras(config: &SimConfig, cells: &CellMap) -> Vec<CameraZone> {
    let g = config.camera_grid;
    tile(&config.area(), g.rows, g.cols)
        .into_iter()
        .enumerate()
        .map(|(i, rect)| {
            let (row, col) = (i as u32 / g.cols, i as u32 % g.cols);
            let mut zone = CameraZone {
                camera_id: camera_id(row, col),
                world_rect: rect,
                meters_per_pixel: config.meters_per_pixel,
                mapped_cells: Vec::new(),
                miss_prob: config.miss_prob,
            };
            zone.mapped_cells = cells_for_camera(&zone, cells.cells());
            zone
        })
        .collect()
}

/// Synthetic detector: every non-quarantined agent inside the zone becomes a
/// person box unless the detector misses it. One uniform is drawn per agent
/// in view whether or not it is dropped.
pub fn project_agents(zone: &CameraZone, world: &WorldState, rng: &mut impl Rng) -> Vec<Detection> {
    let mpp = zone.meters_per_pixel;
    let mut out = Vec::new();
    for agent in &world.agents {
        if agent.quarantined || !zone.world_rect.contains_tiled(agent.position, &world.area) {
            continue;
        }
        let u: f64 = rng.random();
        if u < zone.miss_prob {
            continue;
        }
        let (cx, cy) = zone.to_pixels(agent.position);
        out.push(Detection {
            camera_id: zone.camera_id.clone(),
            frame_time: f64::from(world.now),
            cx,
            cy,
            width: PERSON_WIDTH_M / mpp,
            height: PERSON_HEIGHT_M / mpp,
            confidence: 1.0,
            class_label: PERSON_CLASS.to_string(),
            source_agent: Some(agent.id),
        });
    }
    out
}

#[inline]
fn center_distance(a: &Detection, b: &Detection, mpp: f64) -> f64 {
    let dx = a.cx - b.cx;
    let dy = a.cy - b.cy;
    (dx * dx + dy * dy).sqrt() * mpp
}

/// Center-to-center distance in meters.
pub fn inter_object_distance(a: &Detection, b: &Detection, zone: &CameraZone) -> Result<f64, SensingError> {
    if a.camera_id != b.camera_id {
        return Err(SensingError::CrossCamera(a.camera_id.clone(), b.camera_id.clone()));
    }
    Ok(center_distance(a, b, zone.meters_per_pixel))
}

/// A pair of detections closer than the distancing threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationEvent {
    pub camera_id: String,
    pub frame_time: f64,
    /// Indices into the frame, `pair.0 < pair.1`.
    pub pair: (usize, usize),
    /// Source agents when the frame is synthetic, ordered like `pair`.
    pub agents: Option<(AgentId, AgentId)>,
    pub distance: f64,
}

/// Reports every unordered pair of `person` detections whose distance is
/// strictly below `threshold`, ordered by `pair`.
///
/// Large frames are pruned with a sweep over the horizontal pixel
/// coordinate; each candidate is then checked with the exact distance, so
/// the result equals the all-pairs check.
pub fn detect_violations(frame: &[Detection], zone: &CameraZone, threshold: f64) -> Vec<ViolationEvent> {
    let mpp = zone.meters_per_pixel;
    let people: Vec<usize> = (0..frame.len()).filter(|&i| frame[i].is_person()).collect();
    let mut pairs: Vec<(usize, usize, f64)> = Vec::new();
    let mut consider = |i: usize, j: usize| {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let d = center_distance(&frame[i], &frame[j], mpp);
        if d < threshold {
            pairs.push((i, j, d));
        }
    };

    if people.len() <= 32 {
        for (k, &i) in people.iter().enumerate() {
            for &j in &people[k + 1..] {
                consider(i, j);
            }
        }
    } else {
        // Sweep along x: only detections less than the threshold apart in x
        // can violate. The window is slightly oversized so rounding in the
        // pixel → meter conversion never drops a boundary pair.
        let window = (threshold / mpp) * (1.0 + 1e-9) + f64::EPSILON;
        let mut by_x = people;
        by_x.sort_by(|&a, &b| frame[a].cx.total_cmp(&frame[b].cx));
        for (k, &i) in by_x.iter().enumerate() {
            for &j in &by_x[k + 1..] {
                if frame[j].cx - frame[i].cx >= window {
                    break;
                }
                if (frame[j].cy - frame[i].cy).abs() < window {
                    consider(i, j);
                }
            }
        }
    }

    pairs.sort_by_key(|&(i, j, _)| (i, j));
    pairs
        .into_iter()
        .map(|(i, j, distance)| ViolationEvent {
            camera_id: zone.camera_id.clone(),
            frame_time: frame[i].frame_time,
            pair: (i, j),
            agents: frame[i].source_agent.zip(frame[j].source_agent),
            distance,
        })
        .collect()
}

/// All detections from one camera at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub frame_time: f64,
    pub camera_id: String,
    pub detections: Vec<Detection>,
}

/// Parses the line-delimited detection format and groups lines into frames
/// keyed by `(camera_id, frame_time)`. Frames come back sorted by time, then
/// camera; detections keep their input order within a frame.
///
/// When `known_cameras` is given, any other camera id is rejected.
pub fn ingest_detection_stream(
    input: impl BufRead,
    known_cameras: Option<&HashSet<String>>,
) -> Result<Vec<Frame>, IngestError> {
    let mut frames: BTreeMap<(u64, String), Vec<Detection>> = BTreeMap::new();
    for (n, line) in input.lines().enumerate() {
        let line_no = n + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let det: Detection = serde_json::from_str(&line).map_err(|e| IngestError::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        det.check()
            .map_err(|message| IngestError::Parse { line: line_no, message })?;
        if let Some(known) = known_cameras {
            if !known.contains(&det.camera_id) {
                return Err(IngestError::UnknownCamera {
                    line: line_no,
                    camera_id: det.camera_id,
                });
            }
        }
        frames
            .entry((order_key(det.frame_time), det.camera_id.clone()))
            .or_default()
            .push(det);
    }
    Ok(frames
        .into_iter()
        .map(|((_, camera_id), detections)| Frame {
            frame_time: detections[0].frame_time,
            camera_id,
            detections,
        })
        .collect())
}

/// Total order on finite floats that matches numeric order.
fn order_key(t: f64) -> u64 {
    let t = if t == 0.0 { 0.0 } else { t };
    let bits = t.to_bits();
    if bits >> 63 == 1 {
        !bits
    } else {
        bits | (1 << 63)
    }
}

pub fn write_detections<'a>(
    out: &mut impl Write,
    detections: impl IntoIterator<Item = &'a Detection>,
) -> std::io::Result<()> {
    for d in detections {
        serde_json::to_writer(&mut *out, d)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
