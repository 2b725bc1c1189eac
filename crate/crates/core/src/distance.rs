//! Dissimilarity `Dis_r` built from the two max-min angles, and sampled set distances.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::angles::{cutting_plane_angle, theta, AngleResult, SolverConfig};
use crate::cones::{Cone, PolyhedralCone};
use crate::error::{ConeError, Result};
use crate::linalg::{norm, sub};

/// The `ℓʳ` norm used to combine the two directional terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NormKind {
    #[serde(rename = "1")]
    L1,
    #[serde(rename = "2")]
    L2,
    #[serde(rename = "inf")]
    Inf,
}

impl NormKind {
    pub fn combine(self, a: f64, b: f64) -> f64 {
        match self {
            NormKind::L1 => a.abs() + b.abs(),
            NormKind::L2 => a.hypot(b),
            NormKind::Inf => a.abs().max(b.abs()),
        }
    }
}

impl FromStr for NormKind {
    type Err = ConeError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1" => Ok(NormKind::L1),
            "2" => Ok(NormKind::L2),
            "inf" | "infinity" => Ok(NormKind::Inf),
            other => Err(ConeError::InvalidInput(format!(
                "norm must be 1, 2 or inf, got {other:?}"
            ))),
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormKind::L1 => "1",
            NormKind::L2 => "2",
            NormKind::Inf => "inf",
        })
    }
}

/// `2‖(sin(θ₁/2), sin(θ₂/2))‖_r`.
pub fn dis_from_angles(theta_pq: f64, theta_qp: f64, r: NormKind) -> f64 {
    2.0 * r.combine((0.5 * theta_pq).sin(), (0.5 * theta_qp).sin())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceResult {
    pub theta_pq: AngleResult,
    pub theta_qp: AngleResult,
    pub r: NormKind,
    pub value: f64,
}

impl DistanceResult {
    pub fn from_angles(theta_pq: AngleResult, theta_qp: AngleResult, r: NormKind) -> Self {
        let value = dis_from_angles(theta_pq.angle, theta_qp.angle, r);
        Self {
            theta_pq,
            theta_qp,
            r,
            value,
        }
    }
}

/// `Dis_r(P, Q)`; the two angles are computed independently and concurrently.
pub fn dis_measure(p: &Cone, q: &Cone, r: NormKind, cfg: &SolverConfig) -> Result<DistanceResult> {
    if p.dim() != q.dim() {
        return Err(ConeError::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    let (pq, qp) = rayon::join(|| theta(p, q, cfg), || theta(q, p, cfg));
    Ok(DistanceResult::from_angles(pq?, qp?, r))
}

/// [`dis_measure`] for two polyhedral cones, always by the cutting-plane method.
pub fn dis_polyhedral(
    p: &PolyhedralCone,
    q: &PolyhedralCone,
    r: NormKind,
    cfg: &SolverConfig,
) -> Result<DistanceResult> {
    let (pq, qp) = rayon::join(
        || cutting_plane_angle(p, q, cfg),
        || cutting_plane_angle(q, p, cfg),
    );
    Ok(DistanceResult::from_angles(pq?, qp?, r))
}

fn check_samples(c: &[Vec<f64>], d: &[Vec<f64>]) -> Result<()> {
    if c.is_empty() || d.is_empty() {
        return Err(ConeError::InvalidInput("empty sample set".into()));
    }
    Ok(())
}

/// `max_{x ∈ C} min_{y ∈ D} ‖x − y‖` over finite samples.
pub fn lambda_sampled(c: &[Vec<f64>], d: &[Vec<f64>]) -> Result<f64> {
    check_samples(c, d)?;
    Ok(c.iter()
        .map(|x| {
            d.iter()
                .map(|y| norm(&sub(x, y)))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max))
}

/// `‖(Λ(C, D), Λ(D, C))‖_r`; `r = ∞` is the Pompeiu–Hausdorff distance, `r = 1` the Pompeiu–Eggleston one.
pub fn dis_sampled(c: &[Vec<f64>], d: &[Vec<f64>], r: NormKind) -> Result<f64> {
    Ok(r.combine(lambda_sampled(c, d)?, lambda_sampled(d, c)?))
}

pub fn hausdorff_sampled(c: &[Vec<f64>], d: &[Vec<f64>]) -> Result<f64> {
    dis_sampled(c, d, NormKind::Inf)
}
