use serde::Serialize;

use crate::error::{LabError, Result};
use crate::geom::Point;

/// Resource caps for exact iteration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Budget {
    /// Maximum vertices in any single computed polyline or polygon.
    pub max_vertices: usize,
    /// Maximum storage bits of any single coordinate pair.
    pub max_bits: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_vertices: 200_000, max_bits: 1 << 16 }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { max_vertices: usize::MAX, max_bits: u64::MAX }
    }

    pub fn check(&self, pts: &[Point], what: &str, depth: usize) -> Result<()> {
        if pts.len() > self.max_vertices {
            return Err(LabError::BudgetExhausted { what: format!("{what} ({} vertices)", pts.len()), depth_reached: depth });
        }
        if self.max_bits != u64::MAX {
            if let Some(b) = pts.iter().map(Point::bit_size).max() {
                if b > self.max_bits {
                    return Err(LabError::BudgetExhausted { what: format!("{what} ({b} bits)"), depth_reached: depth });
                }
            }
        }
        Ok(())
    }
}
