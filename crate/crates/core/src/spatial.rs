//! Uniform-grid spatial index for radius queries.
//!
//! Points are bucketed with a counting sort into a flat cell array (`starts`
//! holds prefix offsets into `items`), so a rebuild is two linear passes and
//! no per-cell allocation.

use crate::types::{Position, Rect};

#[derive(Debug, Clone)]
pub struct GridIndex {
    bounds: Rect,
    cell: f64,
    cols: usize,
    rows: usize,
    starts: Vec<u32>,
    items: Vec<u32>,
}

impl GridIndex {
    /// Picks a cell size near `target_per_cell` points per cell but never
    /// smaller than `min_cell`.
    pub fn auto_cell_size(bounds: &Rect, n_points: usize, min_cell: f64) -> f64 {
        let area = bounds.width().max(f64::MIN_POSITIVE) * bounds.height().max(f64::MIN_POSITIVE);
        let per_cell = area / n_points.max(1) as f64;
        let side = (per_cell * 2.0).sqrt();
        side.max(min_cell).max(1e-9)
    }

    pub fn build(bounds: Rect, cell: f64, points: &[Position]) -> Self {
        let cols = ((bounds.width() / cell).ceil() as usize).max(1);
        let rows = ((bounds.height() / cell).ceil() as usize).max(1);
        let mut idx = GridIndex {
            bounds,
            cell,
            cols,
            rows,
            starts: vec![0; cols * rows + 1],
            items: vec![0; points.len()],
        };
        let slots: Vec<usize> = points.iter().map(|p| idx.slot(*p)).collect();
        for &s in &slots {
            idx.starts[s + 1] += 1;
        }
        for i in 0..cols * rows {
            idx.starts[i + 1] += idx.starts[i];
        }
        let mut fill = idx.starts.clone();
        for (i, &s) in slots.iter().enumerate() {
            idx.items[fill[s] as usize] = i as u32;
            fill[s] += 1;
        }
        idx
    }

    fn col_of(&self, x: f64) -> usize {
        let c = ((x - self.bounds.x0) / self.cell).floor();
        (c.max(0.0) as usize).min(self.cols - 1)
    }

    fn row_of(&self, y: f64) -> usize {
        let r = ((y - self.bounds.y0) / self.cell).floor();
        (r.max(0.0) as usize).min(self.rows - 1)
    }

    fn slot(&self, p: Position) -> usize {
        self.row_of(p.y) * self.cols + self.col_of(p.x)
    }

    /// Appends to `out` the indices of all points with Euclidean distance
    /// `<= radius` from `center`, in ascending index order.
    pub fn query_into(&self, points: &[Position], center: Position, radius: f64, out: &mut Vec<u32>) {
        let start = out.len();
        // Points clamped into border cells still sit inside the scanned range
        // because the range is clamped the same way.
        let c0 = self.col_of(center.x - radius);
        let c1 = self.col_of(center.x + radius);
        let r0 = self.row_of(center.y - radius);
        let r1 = self.row_of(center.y + radius);
        for r in r0..=r1 {
            let row = r * self.cols;
            for c in c0..=c1 {
                let s = row + c;
                for &i in &self.items[self.starts[s] as usize..self.starts[s + 1] as usize] {
                    if points[i as usize].distance(center) <= radius {
                        out.push(i);
                    }
                }
            }
        }
        out[start..].sort_unstable();
    }

    pub fn query(&self, points: &[Position], center: Position, radius: f64) -> Vec<u32> {
        let mut out = Vec::new();
        self.query_into(points, center, radius, &mut out);
        out
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}
