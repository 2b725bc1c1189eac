//! Seeded random instances: simplex points, unit vectors, rotations and cones.

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::cones::PolyhedralCone;
use crate::error::{ConeError, Result};
use crate::linalg::{self, Matrix};

/// Uniform point on the probability simplex (Dirichlet(1, …, 1)).
pub fn dirichlet<R: Rng + ?Sized>(rng: &mut R, p: usize) -> Vec<f64> {
    let mut x: Vec<f64> = (0..p).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = x.iter().sum();
    if s > 0.0 {
        x.iter_mut().for_each(|v| *v /= s);
    } else {
        x.iter_mut().for_each(|v| *v = 1.0 / p as f64);
    }
    x
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

/// Uniformly distributed point of the unit sphere.
pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        if let Some(u) = linalg::normalized(&gaussian_vector(rng, n)) {
            return u;
        }
    }
}

/// Haar-distributed orthogonal matrix (Gram–Schmidt of a Gaussian matrix).
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    loop {
        let cols: Vec<Vec<f64>> = (0..n).map(|_| gaussian_vector(rng, n)).collect();
        let q = linalg::orthonormalize(&Matrix::from_columns(&cols).expect("square"));
        if q.cols() == n {
            return q;
        }
    }
}

/// Rotation of the plane by `t` radians.
pub fn rotation_2d(t: f64) -> Matrix {
    let (s, c) = t.sin_cos();
    Matrix::new(2, 2, vec![c, -s, s, c]).expect("finite")
}

/// Entry distribution for [`random_generators`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryDist {
    Normal,
    Uniform,
}

/// `p` random generators in ℝⁿ; each entry is kept with probability `density`.
///
/// All-zero generators are redrawn, so every returned vector is nonzero
/// (not yet normalized).
pub fn random_generators<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    p: usize,
    density: f64,
    dist: EntryDist,
) -> Result<Vec<Vec<f64>>> {
    if n == 0 || p == 0 {
        return Err(ConeError::InvalidInput("n and p must be positive".into()));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(ConeError::InvalidInput(format!(
            "density {density} outside (0, 1]"
        )));
    }
    let mut out = Vec::with_capacity(p);
    while out.len() < p {
        let g: Vec<f64> = (0..n)
            .map(|_| {
                let value = match dist {
                    EntryDist::Normal => StandardNormal.sample(rng),
                    EntryDist::Uniform => rng.random::<f64>(),
                };
                if rng.random::<f64>() < density {
                    value
                } else {
                    0.0
                }
            })
            .collect();
        if g.iter().any(|&v| v != 0.0) {
            out.push(g);
        }
    }
    Ok(out)
}

/// Random polyhedral cone with normally distributed, sparsified generators.
pub fn random_cone<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    p: usize,
    density: f64,
) -> Result<PolyhedralCone> {
    PolyhedralCone::new(random_generators(rng, n, p, density, EntryDist::Normal)?)
}

/// Random pointed planar cone: an arc of random position and length below `max_len`
/// carrying `p ≥ 1` generators, two of which sit at the arc ends.
pub fn random_planar_cone<R: Rng + ?Sized>(rng: &mut R, p: usize, max_len: f64) -> PolyhedralCone {
    let start = rng.random_range(0.0..std::f64::consts::TAU);
    let len = if p == 1 {
        0.0
    } else {
        rng.random_range(0.0..max_len)
    };
    let mut angles = vec![start];
    if p >= 2 {
        angles.push(start + len);
    }
    for _ in 2..p {
        angles.push(start + rng.random_range(0.0..=len));
    }
    PolyhedralCone::new(angles.iter().map(|t| vec![t.cos(), t.sin()]).collect())
        .expect("unit generators")
}
