//! Small dense linear algebra.
//!
//! Everything here is sized for cone generator matrices of a few thousand
//! entries at most: a row-major [`Matrix`], plain `&[f64]` vectors, an
//! active-set nonnegative least-squares solver, Jacobi eigenvalues of
//! symmetric matrices and Gram–Schmidt orthonormalization.

use crate::error::{ConeError, Result};

/// Relative tolerance on the NNLS optimality conditions.
///
/// A dual value `⟨a_j, r⟩` counts as positive when it exceeds this times
/// `‖a_j‖_max ‖r‖`, so the stopping test does not depend on the scale of the
/// residual. Thin cones need that: an absolute test would stop with a residual
/// of order `EPS_NNLS / sin(gap)` between nearly parallel generators.
pub const EPS_NNLS: f64 = 1e-10;
/// Tolerance used when comparing singular values.
pub const EPS_SVD: f64 = 1e-10;
/// Orthonormality tolerance of [`orthonormalize`].
pub const EPS_ORTH: f64 = 1e-12;
/// Columns whose post-projection norm falls below this are dropped.
const DROP_TOL: f64 = 1e-10;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(ConeError::InvalidInput(format!(
                "matrix {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(ConeError::InvalidInput("non-finite matrix entry".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    /// Builds a matrix from equally long rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(ConeError::InvalidInput("ragged rows".into()));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    /// Builds an `n x k` matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(ConeError::InvalidInput("columns of unequal length".into()));
        }
        let cols = columns.len();
        let mut data = vec![0.0; rows * cols];
        for (j, c) in columns.iter().enumerate() {
            for (i, &v) in c.iter().enumerate() {
                data[i * cols + j] = v;
            }
        }
        Self::new(rows, cols, data)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<f64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(ConeError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `A x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    /// `Aᵀ y`.
    pub fn tr_mul_vec(&self, y: &[f64]) -> Vec<f64> {
        debug_assert_eq!(y.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for (i, &yi) in y.iter().enumerate() {
            if yi == 0.0 {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += a * yi;
            }
        }
        out
    }

    /// `AᵀA`.
    pub fn gram(&self) -> Matrix {
        let mut g = Matrix::zeros(self.cols, self.cols);
        for i in 0..self.rows {
            let r = self.row(i);
            for a in 0..self.cols {
                if r[a] == 0.0 {
                    continue;
                }
                for b in a..self.cols {
                    g.data[a * self.cols + b] += r[a] * r[b];
                }
            }
        }
        for a in 0..self.cols {
            for b in 0..a {
                g.data[a * self.cols + b] = g.data[b * self.cols + a];
            }
        }
        g
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        norm(&self.data)
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scaled(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// `y += alpha * x`
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Unit vector in the direction of `a`, or `None` for (near) zero input.
pub fn normalized(a: &[f64]) -> Option<Vec<f64>> {
    let n = norm(a);
    if n > 0.0 && n.is_finite() {
        Some(scaled(a, 1.0 / n))
    } else {
        None
    }
}

pub fn all_finite(a: &[f64]) -> bool {
    a.iter().all(|x| x.is_finite())
}

/// Solution of a nonnegative least-squares problem.
#[derive(Debug, Clone, PartialEq)]
pub struct NnlsSolution {
    pub x: Vec<f64>,
    /// `‖Ax − b‖`
    pub residual: f64,
}

/// Least squares on a handful of columns through Householder QR.
///
/// Returns `None` when some column lies (relatively) within `rank_tol` of the
/// span of the preceding ones.
fn least_squares(cols: &[&[f64]], b: &[f64], rank_tol: f64) -> Option<Vec<f64>> {
    let n = b.len();
    let k = cols.len();
    if k > n {
        return None;
    }
    let mut a: Vec<Vec<f64>> = cols.iter().map(|c| c.to_vec()).collect();
    let orig: Vec<f64> = a.iter().map(|c| norm(c)).collect();
    let mut qb = b.to_vec();
    for j in 0..k {
        let tail_norm = a[j][j..].iter().map(|x| x * x).sum::<f64>().sqrt();
        if tail_norm <= rank_tol * orig[j].max(f64::MIN_POSITIVE) {
            return None;
        }
        let alpha = if a[j][j] > 0.0 { -tail_norm } else { tail_norm };
        let mut v = a[j][j..].to_vec();
        v[0] -= alpha;
        let vv = dot(&v, &v);
        if vv > 0.0 {
            for col in a.iter_mut().skip(j) {
                let f = 2.0 * dot(&v, &col[j..]) / vv;
                axpy(-f, &v, &mut col[j..]);
            }
            let f = 2.0 * dot(&v, &qb[j..]) / vv;
            axpy(-f, &v, &mut qb[j..]);
        }
    }
    let mut z = vec![0.0; k];
    for i in (0..k).rev() {
        let mut s = qb[i];
        for (jj, zj) in z.iter().enumerate().skip(i + 1) {
            s -= a[jj][i] * zj;
        }
        z[i] = s / a[i][i];
    }
    Some(z)
}

/// Nonnegative least squares `min ‖Ax − b‖ s.t. x ≥ 0` (Lawson–Hanson).
///
/// Entering variables are chosen by largest dual value with the smallest
/// index breaking ties; columns that are numerically dependent on the current
/// passive set are skipped.
pub fn nnls(a: &Matrix, b: &[f64]) -> Result<NnlsSolution> {
    if b.len() != a.rows() {
        return Err(ConeError::DimensionMismatch {
            expected: a.rows(),
            found: b.len(),
        });
    }
    if !all_finite(b) || !all_finite(a.as_slice()) {
        return Err(ConeError::InvalidInput("non-finite NNLS input".into()));
    }
    let m = a.cols();
    let cols = a.columns();
    let max_col = cols.iter().map(|c| norm(c)).fold(0.0, f64::max);
    let floor = 8.0 * f64::EPSILON * max_col * norm(b);

    let mut x = vec![0.0; m];
    let mut passive = vec![false; m];
    let mut excluded = vec![false; m];
    let mut resid = b.to_vec();
    let max_outer = 3 * (m + a.rows()) + 30;

    for _ in 0..max_outer {
        let w = a.tr_mul_vec(&resid);
        let tol = (EPS_NNLS * max_col * norm(&resid)).max(floor);
        // Entering column: largest positive dual value among free, independent columns.
        let entering = loop {
            let mut best: Option<usize> = None;
            for j in 0..m {
                if passive[j] || excluded[j] || w[j] <= tol {
                    continue;
                }
                if best.is_none_or(|bj| w[j] > w[bj]) {
                    best = Some(j);
                }
            }
            let Some(j) = best else { break None };
            let pcols: Vec<&[f64]> = (0..m)
                .filter(|&i| passive[i])
                .map(|i| cols[i].as_slice())
                .collect();
            let independent = if pcols.is_empty() {
                max_col > 0.0 && norm(&cols[j]) > 0.0
            } else if pcols.len() >= a.rows() {
                false
            } else {
                match least_squares(&pcols, &cols[j], 1e-13) {
                    Some(c) => {
                        let mut r = cols[j].clone();
                        for (pc, ci) in pcols.iter().zip(&c) {
                            axpy(-ci, pc, &mut r);
                        }
                        norm(&r) > 1e-10 * norm(&cols[j])
                    }
                    None => false,
                }
            };
            if independent {
                break Some(j);
            }
            excluded[j] = true;
        };
        let Some(j) = entering else {
            let residual = norm(&resid);
            return Ok(NnlsSolution { x, residual });
        };

        passive[j] = true;
        let x_before = x.clone();
        for _ in 0..(m + 5) {
            let idx: Vec<usize> = (0..m).filter(|&i| passive[i]).collect();
            if idx.is_empty() {
                break;
            }
            let pcols: Vec<&[f64]> = idx.iter().map(|&i| cols[i].as_slice()).collect();
            let Some(z) = least_squares(&pcols, b, 1e-14) else {
                passive[j] = false;
                x[j] = 0.0;
                break;
            };
            if z.iter().all(|&zi| zi > 0.0) {
                for (&i, &zi) in idx.iter().zip(&z) {
                    x[i] = zi;
                }
                break;
            }
            // Step back towards the feasible region.
            let mut alpha = f64::INFINITY;
            let mut blocking = idx[0];
            for (&i, &zi) in idx.iter().zip(&z) {
                if zi <= 0.0 {
                    let t = x[i] / (x[i] - zi);
                    if t < alpha {
                        alpha = t;
                        blocking = i;
                    }
                }
            }
            for (&i, &zi) in idx.iter().zip(&z) {
                x[i] += alpha * (zi - x[i]);
            }
            x[blocking] = 0.0;
            for &i in &idx {
                if x[i] <= 0.0 {
                    x[i] = 0.0;
                    passive[i] = false;
                }
            }
        }

        if x == x_before {
            passive[j] = false;
            excluded[j] = true;
        } else {
            excluded.iter_mut().for_each(|e| *e = false);
        }
        resid = sub(b, &a.mul_vec(&x));
    }
    let residual = norm(&resid);
    Err(ConeError::Convergence {
        iterations: max_outer,
        best: x,
        residual,
    })
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in descending order and the matching eigenvectors as
/// the columns of the second component.
pub fn symmetric_eigen(s: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    let n = s.rows();
    if s.cols() != n {
        return Err(ConeError::DimensionMismatch {
            expected: n,
            found: s.cols(),
        });
    }
    if !all_finite(s.as_slice()) {
        return Err(ConeError::InvalidInput("non-finite matrix entry".into()));
    }
    let mut a = s.clone();
    let mut v = Matrix::identity(n);
    let scale = a.norm();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a.get(p, q) * a.get(p, q);
            }
        }
        if off.sqrt() <= 1e-16 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - sn * akq);
                    a.set(k, q, sn * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - sn * aqk);
                    a.set(q, k, sn * apk + c * aqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - sn * vkq);
                    v.set(k, q, sn * vkp + c * vkq);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(j, j).total_cmp(&a.get(i, i)));
    let values = order.iter().map(|&i| a.get(i, i)).collect();
    let mut vecs = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for k in 0..n {
            vecs.set(k, dst, v.get(k, src));
        }
    }
    Ok((values, vecs))
}

/// All `min(rows, cols)` singular values, descending.
///
/// Computed from the eigenvalues of the smaller Gram matrix.
pub fn singular_values(a: &Matrix) -> Result<Vec<f64>> {
    if !all_finite(a.as_slice()) {
        return Err(ConeError::InvalidInput("non-finite matrix entry".into()));
    }
    let gram = if a.rows() >= a.cols() {
        a.gram()
    } else {
        a.transpose().gram()
    };
    let (values, _) = symmetric_eigen(&gram)?;
    Ok(values.into_iter().map(|l| l.max(0.0).sqrt()).collect())
}

/// Orthonormal basis for the span of the columns of `columns`.
///
/// Modified Gram–Schmidt with one reorthogonalization pass; columns that are
/// (numerically) dependent on earlier ones are dropped, so the result has
/// `rank` columns (possibly zero).
pub fn orthonormalize(columns: &Matrix) -> Matrix {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for c in columns.columns() {
        let scale = norm(&c).max(1.0);
        let mut r = c;
        for _pass in 0..2 {
            for q in &basis {
                let d = dot(q, &r);
                axpy(-d, q, &mut r);
            }
        }
        let rn = norm(&r);
        if rn < DROP_TOL * scale {
            continue;
        }
        basis.push(scaled(&r, 1.0 / rn));
    }
    if basis.is_empty() {
        return Matrix::zeros(columns.rows(), 0);
    }
    Matrix::from_columns(&basis).expect("finite basis")
}
