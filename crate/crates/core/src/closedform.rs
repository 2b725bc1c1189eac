//! Exact angles for pairs of subspaces and pairs of revolution cones.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use crate::angles::{AngleResult, Method};
use crate::cones::{AxisReflection, LinearSubspace, RevolutionCone};
use crate::distance::NormKind;
use crate::error::{ConeError, Result};
use crate::linalg::{self, dot, norm, scaled, sub};

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(ConeError::DimensionMismatch {
            expected: a,
            found: b,
        });
    }
    Ok(())
}

/// Angle between unit vectors, accurate near 0 and π.
pub(crate) fn angle_between(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = sub(a, b);
    let s: Vec<f64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
    2.0 * norm(&d).atan2(norm(&s))
}

/// `max{0, min{π, β + φ₁} − φ₂}` with `β` the angle between the axes.
pub fn revolution_theta(p: &RevolutionCone, q: &RevolutionCone) -> Result<f64> {
    check_dims(p.dim(), q.dim())?;
    let beta = angle_between(p.axis(), q.axis());
    Ok(((beta + p.phi()).min(PI) - q.phi()).max(0.0))
}

/// [`revolution_theta`] with a certificate pair `(u, v)`.
pub fn revolution_angle(p: &RevolutionCone, q: &RevolutionCone) -> Result<AngleResult> {
    let angle = revolution_theta(p, q)?;
    let (b1, b2) = (p.axis(), q.axis());
    let beta = angle_between(b1, b2);
    let u = if beta + p.phi() <= q.phi() {
        b1.to_vec()
    } else if beta + p.phi() >= PI {
        scaled(b2, -1.0)
    } else {
        // Rim point of P in the plane of the axes, on the side away from b₂.
        let mut w = scaled(b2, -1.0);
        linalg::axpy(dot(b1, b2), b1, &mut w);
        let w = match linalg::normalized(&w) {
            Some(w) if norm(&w) > 0.0 && beta > 1e-12 => w,
            _ => AxisReflection::new(b1).column(0),
        };
        let (s, c) = p.phi().sin_cos();
        let mut u = scaled(b1, c);
        linalg::axpy(s, &w, &mut u);
        u
    };
    let (v, _) = q.project_cap(&u)?;
    Ok(AngleResult::exact(angle, u, v, Method::ClosedForm))
}

struct SubspaceSolve {
    angle: f64,
    u: Vec<f64>,
}

fn subspace_solve(p: &LinearSubspace, q: &LinearSubspace) -> Result<SubspaceSolve> {
    check_dims(p.dim(), q.dim())?;
    let (u_basis, v_basis) = (p.basis(), q.basis());
    // M = VᵀU; its right singular vectors live in the coordinates of P.
    let m = v_basis.transpose().matmul(u_basis)?;
    let (vals, vecs) = linalg::symmetric_eigen(&m.gram())?;
    let last = vals.len() - 1;
    let z = vecs.column(last);
    let u = u_basis.mul_vec(&z);
    if p.rank() > q.rank() {
        return Ok(SubspaceSolve {
            angle: FRAC_PI_2,
            u,
        });
    }
    let sigma_min = vals[last].max(0.0).sqrt();
    let angle = if sigma_min > FRAC_1_SQRT_2 {
        // Small angles: sin θ = ‖(I − VVᵀ)Uz‖ is better conditioned than cos θ.
        let r = linalg::Matrix::new(
            u_basis.rows(),
            u_basis.cols(),
            sub(u_basis.as_slice(), v_basis.matmul(&m)?.as_slice()),
        )?;
        let (rv, _) = linalg::symmetric_eigen(&r.gram())?;
        rv[0].max(0.0).sqrt().min(1.0).asin()
    } else {
        sigma_min.min(1.0).acos()
    };
    Ok(SubspaceSolve { angle, u })
}

/// `Θ(P, Q)` for subspaces: `π/2` if `dim P > dim Q`, else `arccos σ_min(VᵀU)`.
pub fn subspace_theta(p: &LinearSubspace, q: &LinearSubspace) -> Result<f64> {
    Ok(subspace_solve(p, q)?.angle)
}

/// [`subspace_theta`] with a certificate pair.
pub fn subspace_angle(p: &LinearSubspace, q: &LinearSubspace) -> Result<AngleResult> {
    let s = subspace_solve(p, q)?;
    let (_, v) = q.support_value(&linalg::normalized(&s.u).expect("unit basis combination"))?;
    Ok(AngleResult::exact(s.angle, s.u, v, Method::ClosedForm))
}

/// `Dis_r` between subspaces from the largest principal angle.
pub fn subspace_dis(p: &LinearSubspace, q: &LinearSubspace, r: NormKind) -> Result<f64> {
    check_dims(p.dim(), q.dim())?;
    let (small, large) = if p.rank() <= q.rank() { (p, q) } else { (q, p) };
    let theta_max = subspace_theta(small, large)?;
    let s = (0.5 * theta_max).sin();
    Ok(if p.rank() == q.rank() {
        2.0 * r.combine(s, s)
    } else {
        2.0 * r.combine(FRAC_1_SQRT_2, s)
    })
}
