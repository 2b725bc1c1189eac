//! Cone types, membership tests and projections onto `Q ∩ Sₙ`.

use serde::{Deserialize, Serialize};

use crate::error::{ConeError, Result};
use crate::linalg::{self, dot, norm, scaled, sub, Matrix};

/// Threshold deciding the sign of `max(Hᵀu)` in [`PolyhedralCone::project_sphere`].
pub const EPS_CASE: f64 = 1e-9;
/// Accepted deviation of `‖u‖` from one for unit-vector arguments.
pub const EPS_UNIT: f64 = 1e-9;
/// Generators whose cosine exceeds `1 - EPS_DEDUP` are merged.
pub const EPS_DEDUP: f64 = 1e-12;

pub(crate) fn check_unit(u: &[f64]) -> Result<()> {
    let n = norm(u);
    if !n.is_finite() || (n - 1.0).abs() > EPS_UNIT {
        return Err(ConeError::NonUnit { norm: n });
    }
    Ok(())
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(ConeError::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Which branch of the polyhedral projection onto `Q ∩ Sₙ` applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectionCase {
    /// `max(Hᵀu) > 0` and `u ∉ Q`: the normalized Euclidean projection.
    InteriorPositive,
    /// `max(Hᵀu) = 0`: every unit vector of the face spanned by the maximizing generators.
    OrthogonalFace,
    /// `max(Hᵀu) < 0`: the maximizing generators themselves.
    AllNegative,
    /// `u` already lies in `Q`.
    InsideCone,
}

/// Result of projecting a unit vector onto `Q ∩ Sₙ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionOutcome {
    /// Deterministic representative of the projection set.
    pub v: Vec<f64>,
    pub case: ProjectionCase,
    /// Whether the projection set is the single point `v`.
    pub singleton: bool,
    /// `F_Q(u) = ⟨u, v⟩`.
    pub value: f64,
    /// Maximizing generator indices `J(u)`; empty in the positive cases.
    pub active: Vec<usize>,
}

/// Finitely generated cone `G(ℝᵖ₊)` with unit, pairwise distinct generators.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyhedralCone {
    gens: Vec<Vec<f64>>,
    mat: Matrix,
}

impl PolyhedralCone {
    /// Normalizes and deduplicates `generators`. Zero generators are rejected.
    pub fn new(generators: Vec<Vec<f64>>) -> Result<Self> {
        if generators.is_empty() {
            return Err(ConeError::EmptyCone);
        }
        let n = generators[0].len();
        if n == 0 {
            return Err(ConeError::InvalidInput("generators of dimension 0".into()));
        }
        let mut unit = Vec::with_capacity(generators.len());
        for (index, g) in generators.iter().enumerate() {
            check_dim(n, g.len())?;
            if !linalg::all_finite(g) {
                return Err(ConeError::InvalidInput(format!(
                    "generator {index} has a non-finite entry"
                )));
            }
            let n = norm(g);
            if n == 0.0 {
                return Err(ConeError::ZeroGenerator { index });
            }
            // Already-unit input is kept bit-for-bit so that reloading a written cone is lossless.
            if (n - 1.0).abs() <= 4.0 * f64::EPSILON {
                unit.push(g.clone());
            } else {
                unit.push(scaled(g, 1.0 / n));
            }
        }
        Ok(Self::from_unit(unit))
    }

    /// Like [`PolyhedralCone::new`] but silently drops zero generators.
    pub fn from_nonzero(generators: Vec<Vec<f64>>) -> Result<Self> {
        let kept: Vec<Vec<f64>> = generators
            .into_iter()
            .filter(|g| g.iter().any(|&x| x != 0.0))
            .collect();
        Self::new(kept)
    }

    /// Cone generated by the columns of `g`.
    pub fn from_columns(g: &Matrix) -> Result<Self> {
        Self::new(g.columns())
    }

    fn from_unit(unit: Vec<Vec<f64>>) -> Self {
        let mut gens: Vec<Vec<f64>> = Vec::with_capacity(unit.len());
        for u in unit {
            if gens.iter().all(|g| dot(g, &u) <= 1.0 - EPS_DEDUP) {
                gens.push(u);
            }
        }
        let mat = Matrix::from_columns(&gens).expect("generators share a dimension");
        Self { gens, mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn num_generators(&self) -> usize {
        self.gens.len()
    }

    pub fn generators(&self) -> &[Vec<f64>] {
        &self.gens
    }

    /// Generator matrix, one generator per column.
    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    /// `−P`.
    pub fn negated(&self) -> Self {
        let gens = self.gens.iter().map(|g| scaled(g, -1.0)).collect();
        Self::from_unit(gens)
    }

    /// Image `V(P)` under a square matrix `V` (typically orthogonal).
    pub fn transformed(&self, v: &Matrix) -> Result<Self> {
        check_dim(self.dim(), v.cols())?;
        Self::new(self.gens.iter().map(|g| v.mul_vec(g)).collect())
    }

    /// `min_{x ≥ 0} ‖Gx − u‖ ≤ tol`, together with that residual.
    pub fn membership(&self, u: &[f64], tol: f64) -> Result<(bool, f64)> {
        check_dim(self.dim(), u.len())?;
        let s = linalg::nnls(&self.mat, u)?;
        Ok((s.residual <= tol, s.residual))
    }

    /// `Gᵀw ≥ −tol`, i.e. `w ∈ P*`; the residual is `max(0, −min_i ⟨g_i, w⟩)`.
    pub fn dual_membership(&self, w: &[f64], tol: f64) -> Result<(bool, f64)> {
        check_dim(self.dim(), w.len())?;
        let worst = self
            .gens
            .iter()
            .map(|g| dot(g, w))
            .fold(f64::INFINITY, f64::min);
        let residual = (-worst).max(0.0);
        Ok((residual <= tol, residual))
    }

    /// Euclidean projection `Proj_Q(u) = H y*` with `y* = argmin_{y ≥ 0} ‖Hy − u‖`.
    pub fn project(&self, u: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), u.len())?;
        let s = linalg::nnls(&self.mat, u)?;
        Ok(self.mat.mul_vec(&s.x))
    }

    /// Projection of a unit vector onto `Q ∩ Sₙ`, split on the sign of `max(Hᵀu)`.
    pub fn project_sphere(&self, u: &[f64]) -> Result<ProjectionOutcome> {
        check_dim(self.dim(), u.len())?;
        check_unit(u)?;
        let s = self.mat.tr_mul_vec(u);
        let m = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if m > EPS_CASE {
            let p = self.project(u)?;
            let pn = norm(&p);
            if norm(&sub(&p, u)) <= EPS_CASE {
                return Ok(ProjectionOutcome {
                    v: u.to_vec(),
                    case: ProjectionCase::InsideCone,
                    singleton: true,
                    value: 1.0,
                    active: Vec::new(),
                });
            }
            let v = scaled(&p, 1.0 / pn);
            let value = dot(u, &v).clamp(-1.0, 1.0);
            return Ok(ProjectionOutcome {
                v,
                case: ProjectionCase::InteriorPositive,
                singleton: true,
                value,
                active: Vec::new(),
            });
        }
        let active: Vec<usize> = (0..s.len()).filter(|&j| s[j] >= m - EPS_CASE).collect();
        let j0 = active[0];
        let case = if m >= -EPS_CASE {
            ProjectionCase::OrthogonalFace
        } else {
            ProjectionCase::AllNegative
        };
        Ok(ProjectionOutcome {
            v: self.gens[j0].clone(),
            case,
            singleton: active.len() == 1,
            value: s[j0].clamp(-1.0, 1.0),
            active,
        })
    }

    /// `F_Q(u) = max_{v ∈ Q ∩ Sₙ} ⟨u, v⟩` and a maximizer.
    pub fn support_value(&self, u: &[f64]) -> Result<(f64, Vec<f64>)> {
        let out = self.project_sphere(u)?;
        Ok((out.value, out.v))
    }

    /// One element of `∂F_Q(u)`.
    pub fn subgradient(&self, u: &[f64]) -> Result<Vec<f64>> {
        Ok(self.project_sphere(u)?.v)
    }
}

/// Householder reflection `H = I − 2wwᵀ/‖w‖²` with `H b = eₙ` for a unit `b`.
#[derive(Debug, Clone)]
pub(crate) struct AxisReflection {
    w: Vec<f64>,
    ww: f64,
}

impl AxisReflection {
    pub(crate) fn new(b: &[f64]) -> Self {
        let n = b.len();
        let mut w = b.to_vec();
        let bn = b[n - 1];
        let tail: f64 = b[..n - 1].iter().map(|x| x * x).sum();
        // bₙ − 1 without cancellation when bₙ is close to one.
        w[n - 1] = if bn > 0.0 {
            -tail / (1.0 + bn)
        } else {
            bn - 1.0
        };
        let ww = dot(&w, &w);
        Self { w, ww }
    }

    pub(crate) fn apply(&self, x: &[f64]) -> Vec<f64> {
        if self.ww == 0.0 {
            return x.to_vec();
        }
        let f = 2.0 * dot(&self.w, x) / self.ww;
        let mut y = x.to_vec();
        linalg::axpy(-f, &self.w, &mut y);
        y
    }

    /// `H eᵢ`; the reflection is symmetric, so this maps `eᵢ` back from the rotated frame.
    pub(crate) fn column(&self, i: usize) -> Vec<f64> {
        let mut e = vec![0.0; self.w.len()];
        e[i] = 1.0;
        self.apply(&e)
    }
}

/// Revolution cone `{x : ⟨x, b⟩ ≥ ‖x‖ cos φ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RevolutionCone {
    axis: Vec<f64>,
    phi: f64,
}

impl RevolutionCone {
    pub fn new(axis: Vec<f64>, phi: f64) -> Result<Self> {
        if axis.len() < 2 {
            return Err(ConeError::UnsupportedDimension(axis.len()));
        }
        if !linalg::all_finite(&axis) {
            return Err(ConeError::InvalidInput("non-finite axis".into()));
        }
        check_unit(&axis)?;
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&phi) {
            return Err(ConeError::InvalidInput(format!(
                "half-aperture {phi} outside [0, pi/2]"
            )));
        }
        let axis = scaled(&axis, 1.0 / norm(&axis));
        Ok(Self { axis, phi })
    }

    pub fn dim(&self) -> usize {
        self.axis.len()
    }

    pub fn axis(&self) -> &[f64] {
        &self.axis
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn negated(&self) -> Self {
        Self {
            axis: scaled(&self.axis, -1.0),
            phi: self.phi,
        }
    }

    pub fn transformed(&self, v: &Matrix) -> Result<Self> {
        check_dim(self.dim(), v.cols())?;
        let b = v.mul_vec(&self.axis);
        let b = linalg::normalized(&b).ok_or(ConeError::InvalidInput("singular map".into()))?;
        Self::new(b, self.phi)
    }

    pub fn contains(&self, u: &[f64]) -> bool {
        dot(u, &self.axis) >= norm(u) * self.phi.cos() - 1e-12
    }

    /// Projection of a unit vector onto the cap `R ∩ Sₙ` and `F_R(u)`.
    pub fn project_cap(&self, u: &[f64]) -> Result<(Vec<f64>, f64)> {
        check_dim(self.dim(), u.len())?;
        check_unit(u)?;
        let (s, c) = self.phi.sin_cos();
        let un = dot(u, &self.axis);
        if un >= c - 1e-12 {
            return Ok((u.to_vec(), 1.0));
        }
        let mut tilde = u.to_vec();
        linalg::axpy(-un, &self.axis, &mut tilde);
        let tn = norm(&tilde);
        if tn <= 1e-12 {
            // u = −b: every rim point is a maximizer.
            let e1 = AxisReflection::new(&self.axis).column(0);
            let mut v = scaled(&e1, s);
            linalg::axpy(c, &self.axis, &mut v);
            return Ok((v, -c));
        }
        let mut v = scaled(&tilde, s / tn);
        linalg::axpy(c, &self.axis, &mut v);
        let value = (tn * s + un * c).clamp(-1.0, 1.0);
        Ok((v, value))
    }

    /// Rim generators alone would only span the boundary hyperplane.
    fn is_half_space(&self) -> bool {
        self.phi > std::f64::consts::FRAC_PI_2 - 1e-9
    }

    /// Polyhedral cone with `m` generators equally spaced on the rim
    /// (plus the axis when `φ = π/2`).
    ///
    /// Exact in the plane, where the two rim rays are used regardless of `m`.
    pub fn to_polyhedral(&self, m: usize) -> Result<PolyhedralCone> {
        if m < 2 {
            return Err(ConeError::InvalidInput(format!("rim size {m} < 2")));
        }
        let b = &self.axis;
        let (s, c) = self.phi.sin_cos();
        match self.dim() {
            2 => {
                let alpha = b[1].atan2(b[0]);
                let mut gens: Vec<Vec<f64>> = [alpha - self.phi, alpha + self.phi]
                    .iter()
                    .map(|t| vec![t.cos(), t.sin()])
                    .collect();
                if self.is_half_space() {
                    gens.push(b.clone());
                }
                PolyhedralCone::new(gens)
            }
            3 => {
                let h = AxisReflection::new(b);
                let (e1, e2) = (h.column(0), h.column(1));
                let gens = (0..m)
                    .map(|k| {
                        let t = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                        let mut g = scaled(b, c);
                        linalg::axpy(s * t.cos(), &e1, &mut g);
                        linalg::axpy(s * t.sin(), &e2, &mut g);
                        g
                    })
                    .collect::<Vec<_>>();
                let mut gens = gens;
                if self.is_half_space() {
                    gens.push(b.clone());
                }
                PolyhedralCone::new(gens)
            }
            n => Err(ConeError::UnsupportedDimension(n)),
        }
    }
}

/// Linear subspace with an orthonormal basis `U`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSubspace {
    basis: Matrix,
}

impl LinearSubspace {
    /// Span of the columns of `columns`; dependent columns are dropped.
    pub fn from_spanning(columns: &Matrix) -> Result<Self> {
        if columns.rows() == 0 {
            return Err(ConeError::InvalidInput("ambient dimension 0".into()));
        }
        let basis = linalg::orthonormalize(columns);
        if basis.cols() == 0 {
            return Err(ConeError::EmptyCone);
        }
        Ok(Self { basis })
    }

    /// Wraps a basis that must already be orthonormal within `1e-10`.
    pub fn from_orthonormal(basis: Matrix) -> Result<Self> {
        if basis.cols() == 0 {
            return Err(ConeError::EmptyCone);
        }
        let dev = sub(
            basis.gram().as_slice(),
            Matrix::identity(basis.cols()).as_slice(),
        );
        if norm(&dev) > 1e-10 {
            return Err(ConeError::InvalidInput("basis is not orthonormal".into()));
        }
        Ok(Self { basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Dimension of the subspace itself.
    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn transformed(&self, v: &Matrix) -> Result<Self> {
        Self::from_spanning(&v.matmul(&self.basis)?)
    }

    /// Orthogonal projection onto the subspace.
    pub fn project(&self, u: &[f64]) -> Vec<f64> {
        self.basis.mul_vec(&self.basis.tr_mul_vec(u))
    }

    /// Support value on the sphere: `‖UUᵀu‖`; any unit vector of the subspace when that is zero.
    pub fn support_value(&self, u: &[f64]) -> Result<(f64, Vec<f64>)> {
        check_dim(self.dim(), u.len())?;
        check_unit(u)?;
        let p = self.project(u);
        let pn = norm(&p);
        if pn <= 1e-15 {
            return Ok((0.0, self.basis.column(0)));
        }
        Ok((pn.min(1.0), scaled(&p, 1.0 / pn)))
    }

    /// The subspace as the polyhedral cone generated by `±` basis vectors.
    pub fn to_polyhedral(&self) -> Result<PolyhedralCone> {
        let mut gens = Vec::with_capacity(2 * self.rank());
        for c in self.basis.columns() {
            gens.push(scaled(&c, -1.0));
            gens.push(c);
        }
        PolyhedralCone::new(gens)
    }
}

/// Any of the supported cone families.
#[derive(Debug, Clone, PartialEq)]
pub enum Cone {
    Polyhedral(PolyhedralCone),
    Revolution(RevolutionCone),
    Subspace(LinearSubspace),
}

/// Rim size used when a three-dimensional revolution cone must be made polyhedral.
pub const DEFAULT_RIM: usize = 64;

impl Cone {
    pub fn dim(&self) -> usize {
        match self {
            Cone::Polyhedral(p) => p.dim(),
            Cone::Revolution(r) => r.dim(),
            Cone::Subspace(s) => s.dim(),
        }
    }

    pub fn negated(&self) -> Cone {
        match self {
            Cone::Polyhedral(p) => Cone::Polyhedral(p.negated()),
            Cone::Revolution(r) => Cone::Revolution(r.negated()),
            Cone::Subspace(s) => Cone::Subspace(s.clone()),
        }
    }

    pub fn transformed(&self, v: &Matrix) -> Result<Cone> {
        Ok(match self {
            Cone::Polyhedral(p) => Cone::Polyhedral(p.transformed(v)?),
            Cone::Revolution(r) => Cone::Revolution(r.transformed(v)?),
            Cone::Subspace(s) => Cone::Subspace(s.transformed(v)?),
        })
    }

    /// Polyhedral form; revolution cones use a rim of `rim` generators (dims 2 and 3 only).
    pub fn to_polyhedral(&self, rim: usize) -> Result<PolyhedralCone> {
        match self {
            Cone::Polyhedral(p) => Ok(p.clone()),
            Cone::Revolution(r) => r.to_polyhedral(rim),
            Cone::Subspace(s) => s.to_polyhedral(),
        }
    }

    /// `F(u)` and a maximizer over the cone's intersection with the sphere.
    pub fn support_value(&self, u: &[f64]) -> Result<(f64, Vec<f64>)> {
        match self {
            Cone::Polyhedral(p) => p.support_value(u),
            Cone::Revolution(r) => {
                let (v, f) = r.project_cap(u)?;
                Ok((f, v))
            }
            Cone::Subspace(s) => s.support_value(u),
        }
    }
}

impl From<PolyhedralCone> for Cone {
    fn from(p: PolyhedralCone) -> Self {
        Cone::Polyhedral(p)
    }
}

impl From<RevolutionCone> for Cone {
    fn from(r: RevolutionCone) -> Self {
        Cone::Revolution(r)
    }
}

impl From<LinearSubspace> for Cone {
    fn from(s: LinearSubspace) -> Self {
        Cone::Subspace(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_6, PI};

    fn orthant() -> PolyhedralCone {
        PolyhedralCone::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap()
    }

    fn lorentz() -> PolyhedralCone {
        PolyhedralCone::new(vec![vec![1.0, 1.0], vec![-1.0, 1.0]]).unwrap()
    }

    #[test]
    fn construction_normalizes_and_dedups() {
        let p = PolyhedralCone::new(vec![vec![2.0, 0.0], vec![1.0, 0.0], vec![0.0, 3.0]]).unwrap();
        assert_eq!(p.num_generators(), 2);
        assert_eq!(p.generators()[1], vec![0.0, 1.0]);
        let err = PolyhedralCone::new(vec![vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap_err();
        assert_eq!(err, ConeError::ZeroGenerator { index: 1 });
        assert_eq!(
            PolyhedralCone::new(vec![]).unwrap_err(),
            ConeError::EmptyCone
        );
        let ray = PolyhedralCone::from_nonzero(vec![vec![0.0, 0.0], vec![0.0, 2.0]]).unwrap();
        assert_eq!(ray.num_generators(), 1);
    }

    #[test]
    fn membership_examples() {
        let p = orthant();
        assert_eq!(p.membership(&[1.0, 2.0], 1e-9).unwrap(), (true, 0.0));
        let (inside, r) = p.membership(&[-1.0, 0.0], 1e-9).unwrap();
        assert!(!inside);
        assert_abs_diff_eq!(r, 1.0, epsilon = 1e-14);
        assert!(matches!(
            p.membership(&[1.0], 1e-9),
            Err(ConeError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn dual_membership_examples() {
        let p = orthant();
        assert!(p.dual_membership(&[1.0, 1.0], 0.0).unwrap().0);
        assert_eq!(p.dual_membership(&[-1.0, 0.0], 0.0).unwrap(), (false, 1.0));
        let ray = PolyhedralCone::new(vec![vec![1.0, 0.0]]).unwrap();
        assert!(ray.dual_membership(&[0.0, 5.0], 0.0).unwrap().0);
    }

    #[test]
    fn project_examples() {
        let q = orthant();
        assert_eq!(q.project(&[2.0, 3.0]).unwrap(), vec![2.0, 3.0]);
        assert_eq!(q.project(&[1.0, -1.0]).unwrap(), vec![1.0, 0.0]);
        let p = lorentz().project(&[0.0, -1.0]).unwrap();
        assert!(norm(&p) <= 1e-15);
    }

    #[test]
    fn project_sphere_cases() {
        let q = orthant();
        let u = [FRAC_1_SQRT_2, FRAC_1_SQRT_2];
        let out = q.project_sphere(&u).unwrap();
        assert_eq!(out.case, ProjectionCase::InsideCone);
        assert_eq!(out.value, 1.0);
        assert_eq!(out.v, u.to_vec());

        let out = q.project_sphere(&[-1.0, 0.0]).unwrap();
        assert_eq!(out.case, ProjectionCase::OrthogonalFace);
        assert_eq!(out.active, vec![1]);
        assert_eq!(out.v, vec![0.0, 1.0]);
        assert_eq!(out.value, 0.0);

        let out = lorentz().project_sphere(&[0.0, -1.0]).unwrap();
        assert_eq!(out.case, ProjectionCase::AllNegative);
        assert_eq!(out.active, vec![0, 1]);
        assert!(!out.singleton);
        assert_abs_diff_eq!(out.v[0], FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(out.v[1], FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(out.value, (3.0 * FRAC_PI_4).cos(), epsilon = 1e-15);

        let out = q.project_sphere(&[0.6, -0.8]).unwrap();
        assert_eq!(out.case, ProjectionCase::InteriorPositive);
        assert_eq!(out.v, vec![1.0, 0.0]);
        assert_abs_diff_eq!(out.value, 0.6, epsilon = 1e-15);
    }

    #[test]
    fn non_unit_arguments_rejected() {
        assert!(matches!(
            orthant().project_sphere(&[2.0, 0.0]),
            Err(ConeError::NonUnit { .. })
        ));
        let r = RevolutionCone::new(vec![0.0, 1.0], 0.3).unwrap();
        assert!(matches!(
            r.project_cap(&[0.5, 0.0]),
            Err(ConeError::NonUnit { .. })
        ));
    }

    #[test]
    fn revolution_cap_examples() {
        let r = RevolutionCone::new(vec![0.0, 0.0, 1.0], FRAC_PI_4).unwrap();
        let (v, f) = r.project_cap(&[0.0, 0.0, 1.0]).unwrap();
        assert_eq!((v, f), (vec![0.0, 0.0, 1.0], 1.0));
        let (v, f) = r.project_cap(&[0.0, 0.0, -1.0]).unwrap();
        assert_abs_diff_eq!(f, -FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(norm(&v), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(dot(&v, r.axis()), FRAC_1_SQRT_2, epsilon = 1e-15);

        let r = RevolutionCone::new(vec![0.0, 1.0], FRAC_PI_6).unwrap();
        let (_, f) = r.project_cap(&[1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(f, 0.5, epsilon = 1e-15);
        let (f_poly, _) = r
            .to_polyhedral(2)
            .unwrap()
            .support_value(&[1.0, 0.0])
            .unwrap();
        assert_abs_diff_eq!(f, f_poly, epsilon = 1e-12);
    }

    #[test]
    fn revolution_rim_in_plane() {
        let b = vec![60f64.to_radians().cos(), 60f64.to_radians().sin()];
        let p = RevolutionCone::new(b, 15f64.to_radians())
            .unwrap()
            .to_polyhedral(2)
            .unwrap();
        let angles: Vec<f64> = p
            .generators()
            .iter()
            .map(|g| g[1].atan2(g[0]).to_degrees())
            .collect();
        assert_abs_diff_eq!(angles[0], 45.0, epsilon = 1e-12);
        assert_abs_diff_eq!(angles[1], 75.0, epsilon = 1e-12);
    }

    #[test]
    fn revolution_rim_in_space() {
        let r = RevolutionCone::new(vec![0.0, 0.0, 1.0], FRAC_PI_4).unwrap();
        let p = r.to_polyhedral(4).unwrap();
        assert_eq!(p.num_generators(), 4);
        for g in p.generators() {
            assert_abs_diff_eq!(dot(g, r.axis()), FRAC_PI_4.cos(), epsilon = 1e-12);
        }
        let b = linalg::normalized(&[1.0, -2.0, 0.5]).unwrap();
        let r = RevolutionCone::new(b, 0.7).unwrap();
        let p = r.to_polyhedral(64).unwrap();
        let rim: Vec<Vec<f64>> = p
            .generators()
            .iter()
            .map(|g| {
                let mut t = g.clone();
                linalg::axpy(-dot(g, r.axis()), r.axis(), &mut t);
                linalg::normalized(&t).unwrap()
            })
            .collect();
        for k in 0..64 {
            let c = dot(&rim[k], &rim[(k + 1) % 64]).clamp(-1.0, 1.0);
            assert_abs_diff_eq!(c.acos(), 2.0 * PI / 64.0, epsilon = 1e-9);
        }
        let half = RevolutionCone::new(vec![0.0, 1.0], std::f64::consts::FRAC_PI_2).unwrap();
        let p = half.to_polyhedral(2).unwrap();
        assert!(p.membership(&[0.0, 1.0], 1e-12).unwrap().0);
        assert!(!p.membership(&[0.0, -1.0], 1e-6).unwrap().0);
        let r4 = RevolutionCone::new(vec![0.0, 0.0, 0.0, 1.0], 0.2).unwrap();
        assert_eq!(
            r4.to_polyhedral(8).unwrap_err(),
            ConeError::UnsupportedDimension(4)
        );
    }

    #[test]
    fn subspace_support_and_polyhedral_form() {
        let s =
            LinearSubspace::from_spanning(&Matrix::from_columns(&[vec![1.0, 0.0, 0.0]]).unwrap())
                .unwrap();
        let u = [0.6, 0.8, 0.0];
        let (f, v) = s.support_value(&u).unwrap();
        assert_abs_diff_eq!(f, 0.6, epsilon = 1e-15);
        assert_eq!(v, vec![1.0, 0.0, 0.0]);
        let (f, _) = s.support_value(&[-0.6, 0.8, 0.0]).unwrap();
        assert_abs_diff_eq!(f, 0.6, epsilon = 1e-15);
        let (fp, _) = s
            .to_polyhedral()
            .unwrap()
            .support_value(&[-0.6, 0.8, 0.0])
            .unwrap();
        assert_abs_diff_eq!(fp, 0.6, epsilon = 1e-12);
    }

    #[test]
    fn reflection_maps_axis_to_last_coordinate() {
        for b in [
            vec![0.6, 0.0, 0.8],
            vec![0.0, 0.0, -1.0],
            vec![0.0, 0.0, 1.0],
            vec![1.0, 0.0, 0.0],
        ] {
            let h = AxisReflection::new(&b);
            let e = h.apply(&b);
            assert_abs_diff_eq!(e[2], 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(e[0], 0.0, epsilon = 1e-15);
        }
    }
}
