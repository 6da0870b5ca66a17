use std::fmt;

use serde::{Deserialize, Serialize};

/// Simulation clock, in whole minutes.
pub type Minute = u32;

/// Agents are numbered `0..population`; the id doubles as the index into
/// [`crate::world::WorldState::agents`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AgentId(pub u32);

impl AgentId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CellId(pub u32);

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A point in world coordinates (meters).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Position) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        (dx * dx + dy * dy).sqrt()
    }
}

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]` in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub const fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Self { x0, y0, x1, y1 }
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    /// Half-open membership `[x0, x1) × [y0, y1)`. An edge that lies on the
    /// outer boundary of `area` is treated as closed so that tiles of `area`
    /// cover it exactly once.
    pub fn contains_tiled(&self, p: Position, area: &Rect) -> bool {
        let in_x = p.x >= self.x0 && (p.x < self.x1 || (self.x1 >= area.x1 && p.x <= self.x1));
        let in_y = p.y >= self.y0 && (p.y < self.y1 || (self.y1 >= area.y1 && p.y <= self.y1));
        in_x && in_y
    }

    pub fn contains_closed(&self, p: Position) -> bool {
        p.x >= self.x0 && p.x <= self.x1 && p.y >= self.y0 && p.y <= self.y1
    }

    /// True when the two rectangles share a region of positive area.
    pub fn overlaps(&self, other: &Rect) -> bool {
        let w = self.x1.min(other.x1) - self.x0.max(other.x0);
        let h = self.y1.min(other.y1) - self.y0.max(other.y0);
        w > 0.0 && h > 0.0
    }
}

/// Splits `area` into a `rows × cols` grid of equal rectangles, row-major
/// starting at the `(x0, y0)` corner.
pub(crate) fn tile(area: &Rect, rows: u32, cols: u32) -> Vec<Rect> {
    let w = area.width();
    let h = area.height();
    let edge = |lo: f64, span: f64, i: u32, n: u32| {
        if i == n {
            lo + span
        } else {
            lo + span * f64::from(i) / f64::from(n)
        }
    };
    let mut out = Vec::with_capacity((rows * cols) as usize);
    for r in 0..rows {
        for c in 0..cols {
            out.push(Rect::new(
                edge(area.x0, w, c, cols),
                edge(area.y0, h, r, rows),
                edge(area.x0, w, c + 1, cols),
                edge(area.y0, h, r + 1, rows),
            ));
        }
    }
    out
}
