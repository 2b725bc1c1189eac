//! Intersections of planar polyhedral cones with the unit circle.

use std::f64::consts::{PI, TAU};

use crate::cones::PolyhedralCone;
use crate::error::{ConeError, Result};

const EPS_GAP: f64 = 1e-12;

/// `P ∩ S₂` for a polyhedral cone `P ⊆ ℝ²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CircleSection {
    /// Counter-clockwise arc `[start, start + len]` with `len ≤ π` (a ray when `len = 0`).
    Arc { start: f64, len: f64 },
    /// The two unit vectors of a line, at `angle` and `angle + π`.
    Line { angle: f64 },
    /// The whole circle.
    Circle,
}

/// Angle in `[0, 2π)`.
pub fn wrap(t: f64) -> f64 {
    let r = t.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

pub fn unit_at(t: f64) -> Vec<f64> {
    vec![t.cos(), t.sin()]
}

impl CircleSection {
    pub fn of(p: &PolyhedralCone) -> Result<Self> {
        if p.dim() != 2 {
            return Err(ConeError::DimensionMismatch {
                expected: 2,
                found: p.dim(),
            });
        }
        let mut angles: Vec<f64> = p
            .generators()
            .iter()
            .map(|g| wrap(g[1].atan2(g[0])))
            .collect();
        angles.sort_by(f64::total_cmp);
        let k = angles.len();
        if k == 1 {
            return Ok(CircleSection::Arc {
                start: angles[0],
                len: 0.0,
            });
        }
        // Largest counter-clockwise gap between consecutive generators.
        let mut best = (0, f64::NEG_INFINITY);
        let mut big_gaps = 0;
        for i in 0..k {
            let next = if i + 1 < k {
                angles[i + 1]
            } else {
                angles[0] + TAU
            };
            let gap = next - angles[i];
            if gap >= PI - EPS_GAP {
                big_gaps += 1;
            }
            if gap > best.1 {
                best = (i, gap);
            }
        }
        let (i, gap) = best;
        if gap < PI - EPS_GAP {
            return Ok(CircleSection::Circle);
        }
        if big_gaps == 2 && k == 2 {
            return Ok(CircleSection::Line { angle: angles[0] });
        }
        let start = angles[(i + 1) % k];
        Ok(CircleSection::Arc {
            start,
            len: (TAU - gap).max(0.0),
        })
    }

    /// Whether the direction at angle `t` lies in the section.
    pub fn contains(&self, t: f64) -> bool {
        match *self {
            CircleSection::Arc { start, len } => {
                let d = wrap(t - start);
                d <= len + EPS_GAP || d >= TAU - EPS_GAP
            }
            CircleSection::Line { angle } => {
                let d = wrap(t - angle);
                d <= EPS_GAP || (d - PI).abs() <= EPS_GAP || d >= TAU - EPS_GAP
            }
            CircleSection::Circle => true,
        }
    }

    /// Arc length of the section (0 for a ray or a line).
    pub fn length(&self) -> f64 {
        match *self {
            CircleSection::Arc { len, .. } => len,
            CircleSection::Line { .. } => 0.0,
            CircleSection::Circle => TAU,
        }
    }

    /// Isolated candidate points of the section (arc ends or the two line directions).
    pub fn endpoints(&self) -> Vec<f64> {
        match *self {
            CircleSection::Arc { start, len } => vec![start, start + len],
            CircleSection::Line { angle } => vec![angle, angle + PI],
            CircleSection::Circle => Vec::new(),
        }
    }
}
