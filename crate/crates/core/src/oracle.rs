//! Brute-force reference values: grid sweeps in the plane and simplex sampling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cones::{Cone, PolyhedralCone};
use crate::error::{ConeError, Result};
use crate::linalg;
use crate::planar::{unit_at, CircleSection};
use crate::sampling;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub grid_size: usize,
    /// Radians.
    pub theta_estimate: f64,
    /// Grid spacing along the arc; bounds the error on the cosine since `F_Q` is 1-Lipschitz.
    pub delta: f64,
    /// Grid point attaining the estimate.
    pub argmax: Vec<f64>,
    /// Grid points and the objective there (`F_Q(u)` for [`sweep_theta_2d`], `F_Q(−u)` for [`sweep_theta_hat_2d`]).
    pub grid: Vec<Vec<f64>>,
    pub f_values: Vec<f64>,
}

/// Grid over `P ∩ S₂` with spacing `δ`.
fn grid_2d(p: &PolyhedralCone, m: usize) -> Result<(Vec<Vec<f64>>, f64)> {
    if m < 8 {
        return Err(ConeError::InvalidInput(format!("grid size {m} < 8")));
    }
    match CircleSection::of(p)? {
        CircleSection::Arc { start, len } => {
            let delta = len / m as f64;
            let pts = (0..=m).map(|i| unit_at(start + delta * i as f64)).collect();
            Ok((pts, delta))
        }
        CircleSection::Line { angle } => Ok((
            vec![unit_at(angle), unit_at(angle + std::f64::consts::PI)],
            0.0,
        )),
        CircleSection::Circle => Err(ConeError::InvalidInput(
            "sweep needs P different from the whole plane".into(),
        )),
    }
}

fn support_on_grid(q: &Cone, pts: &[Vec<f64>], negate: bool) -> Result<Vec<f64>> {
    pts.par_iter()
        .map(|u| {
            if negate {
                q.support_value(&linalg::scaled(u, -1.0)).map(|(f, _)| f)
            } else {
                q.support_value(u).map(|(f, _)| f)
            }
        })
        .collect()
}

/// `Θ(P, Q) ≈ max over the grid of arccos F_Q(u)`.
pub fn sweep_theta_2d(p: &PolyhedralCone, q: &Cone, m: usize) -> Result<SweepReport> {
    if q.dim() != 2 {
        return Err(ConeError::DimensionMismatch {
            expected: 2,
            found: q.dim(),
        });
    }
    let (grid, delta) = grid_2d(p, m)?;
    let f_values = support_on_grid(q, &grid, false)?;
    let mut best = 0;
    for (i, &f) in f_values.iter().enumerate() {
        if f < f_values[best] {
            best = i;
        }
    }
    Ok(SweepReport {
        grid_size: m,
        theta_estimate: f_values[best].clamp(-1.0, 1.0).acos(),
        delta,
        argmax: grid[best].clone(),
        grid,
        f_values,
    })
}

/// `Θ̂(P, Q) ≈ min over the grid of max_{v ∈ Q ∩ S₂} arccos ⟨u, v⟩ = π − arccos F_Q(−u)`.
pub fn sweep_theta_hat_2d(p: &PolyhedralCone, q: &Cone, m: usize) -> Result<SweepReport> {
    if q.dim() != 2 {
        return Err(ConeError::DimensionMismatch {
            expected: 2,
            found: q.dim(),
        });
    }
    let (grid, delta) = grid_2d(p, m)?;
    let f_values = support_on_grid(q, &grid, true)?;
    let mut best = 0;
    for (i, &f) in f_values.iter().enumerate() {
        if f < f_values[best] {
            best = i;
        }
    }
    Ok(SweepReport {
        grid_size: m,
        theta_estimate: std::f64::consts::PI - f_values[best].clamp(-1.0, 1.0).acos(),
        delta,
        argmax: grid[best].clone(),
        grid,
        f_values,
    })
}

/// Lower bound on `Θ(P, Q)` from `n` Dirichlet samples `u = Gx/‖Gx‖`.
pub fn sample_theta(p: &PolyhedralCone, q: &Cone, n: usize, seed: u64) -> Result<f64> {
    if n == 0 {
        return Err(ConeError::InvalidInput("need at least one sample".into()));
    }
    if p.dim() != q.dim() {
        return Err(ConeError::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = p.matrix();
    let mut worst: f64 = 1.0;
    for _ in 0..n {
        let x = sampling::dirichlet(&mut rng, p.num_generators());
        let Some(u) = linalg::normalized(&g.mul_vec(&x)) else {
            continue;
        };
        if linalg::norm(&g.mul_vec(&x)) < 1e-8 {
            continue;
        }
        let (f, _) = q.support_value(&u)?;
        worst = worst.min(f);
    }
    Ok(worst.clamp(-1.0, 1.0).acos())
}
