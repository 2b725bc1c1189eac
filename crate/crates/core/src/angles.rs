//! Max-min angles between cones.
//!
//! For polyhedral cones `P = G(ℝᵖ₊)` and `Q = H(ℝ^q₊)` the angle is
//! `Θ(P, Q) = arccos min_{u ∈ P ∩ Sₙ} F_Q(u)`, where `F_Q` is the support
//! function of `Q ∩ Sₙ`. [`cutting_plane_angle`] minimizes `F_Q` with a Kelley
//! cutting-plane scheme: every iterate `u` contributes the cut `⟨v, ·⟩` with
//! `v ∈ Proj_{Q∩Sₙ}(u)`, and the next iterate minimizes the piecewise-linear
//! model `max_j ⟨vʲ, u⟩` over `P ∩ Sₙ` (the master program).
//!
//! The master program is nonconvex. In the plane it is solved exactly by
//! enumerating the breakpoints of the model along the arc `P ∩ S₂`; in higher
//! dimensions it is solved locally by projected subgradient descent on the
//! simplex parameterization `u = Gx/‖Gx‖`, from several starting points.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::closedform;
use crate::cones::{Cone, PolyhedralCone, DEFAULT_RIM};
use crate::error::{ConeError, Result};
use crate::linalg::{self, dot, norm, scaled, Matrix};
use crate::planar::{self, CircleSection};
use crate::sampling;

/// Cutting-plane solver settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Stop once `F_Q(u) − r ≤ tol` for the incumbent `u` and model value `r`.
    pub tol: f64,
    pub max_iter: usize,
    /// Number of local descents per master solve.
    pub restarts: usize,
    /// Subgradient steps per local descent.
    pub master_max_steps: usize,
    /// Step size `step_a / (k + step_b)` at descent step `k`.
    pub step_a: f64,
    pub step_b: f64,
    pub seed: u64,
    /// Solve planar master programs exactly instead of by local descent.
    pub exact_planar_master: bool,
    /// Rim size when a 3-D revolution cone has to be made polyhedral.
    pub rim: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-3,
            max_iter: 200,
            restarts: 8,
            master_max_steps: 500,
            step_a: 1.0,
            step_b: 10.0,
            seed: 0,
            exact_planar_master: true,
            rim: DEFAULT_RIM,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(ConeError::InvalidInput(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(ConeError::InvalidInput(
                "max_iter must be at least 1".into(),
            ));
        }
        if self.restarts == 0 || self.master_max_steps == 0 {
            return Err(ConeError::InvalidInput(
                "restarts and master_max_steps must be at least 1".into(),
            ));
        }
        if !(self.step_a > 0.0 && self.step_b >= 0.0) {
            return Err(ConeError::InvalidInput("invalid step-size schedule".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Converged,
    MaxIter,
    MasterFailure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    CuttingPlane,
    ClosedForm,
    Oracle,
}

/// A computed angle with its certificate pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleResult {
    /// `⟨u, v⟩`, an upper estimate of `min_{P∩Sₙ} F_Q`.
    pub cos_value: f64,
    /// Radians; a lower estimate of the max-min angle.
    pub angle: f64,
    /// Unit vector of `P`.
    pub u: Vec<f64>,
    /// Unit vector of `Q` maximizing `⟨u, ·⟩` over `Q ∩ Sₙ`.
    pub v: Vec<f64>,
    /// Value `r` of the last master program, a lower estimate of `cos_value` when that program is solved globally.
    pub model_value: f64,
    /// `cos_value − model_value`.
    pub gap: f64,
    pub iterations: usize,
    /// Residual of the first-order optimality system at `u` (cutting-plane results only).
    pub stationarity_residual: Option<f64>,
    pub status: Status,
    pub method: Method,
}

impl AngleResult {
    /// Result for a directly known `(u, v)` with `⟨u, v⟩ = cos_value`.
    pub(crate) fn exact(angle: f64, u: Vec<f64>, v: Vec<f64>, method: Method) -> Self {
        let cos_value = angle.cos();
        Self {
            cos_value,
            angle,
            u,
            v,
            model_value: cos_value,
            gap: 0.0,
            iterations: 0,
            stationarity_residual: None,
            status: Status::Converged,
            method,
        }
    }
}

/// Piecewise-linear under-model `max_j ⟨vʲ, u⟩` of `F_Q`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CuttingPlaneModel {
    cuts: Vec<Vec<f64>>,
}

impl CuttingPlaneModel {
    pub fn new(cuts: Vec<Vec<f64>>) -> Self {
        Self { cuts }
    }

    pub fn cuts(&self) -> &[Vec<f64>] {
        &self.cuts
    }

    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    pub fn push(&mut self, v: Vec<f64>) {
        self.cuts.push(v);
    }

    /// Model value at `u` and the first maximizing cut.
    pub fn value(&self, u: &[f64]) -> (f64, usize) {
        let mut best = (f64::NEG_INFINITY, 0);
        for (j, c) in self.cuts.iter().enumerate() {
            let t = dot(c, u);
            if t > best.0 {
                best = (t, j);
            }
        }
        best
    }
}

/// Outcome of projecting every generator of `P` onto `Q ∩ Sₙ`.
#[derive(Debug, Clone, PartialEq)]
pub struct WarmStart {
    /// One cut per generator of `P`, in generator order.
    pub cuts: Vec<Vec<f64>>,
    /// `F_Q(g_j)` per generator.
    pub values: Vec<f64>,
    /// Generator with the smallest value (first one on ties).
    pub best_index: usize,
    pub best_angle: f64,
}

pub fn warm_start(p: &PolyhedralCone, q: &PolyhedralCone) -> Result<WarmStart> {
    check_dims(p.dim(), q.dim())?;
    let mut cuts = Vec::with_capacity(p.num_generators());
    let mut values = Vec::with_capacity(p.num_generators());
    for g in p.generators() {
        let out = q.project_sphere(g)?;
        cuts.push(out.v);
        values.push(out.value);
    }
    let mut best_index = 0;
    for (j, &f) in values.iter().enumerate() {
        if f < values[best_index] {
            best_index = j;
        }
    }
    let best_angle = values[best_index].clamp(-1.0, 1.0).acos();
    Ok(WarmStart {
        cuts,
        values,
        best_index,
        best_angle,
    })
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(ConeError::DimensionMismatch {
            expected: a,
            found: b,
        });
    }
    Ok(())
}

/// Master-program solution: unit `u ∈ P`, its simplex weights when known, and `r = F̌(u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MasterSolution {
    pub u: Vec<f64>,
    pub x: Option<Vec<f64>>,
    pub r: f64,
}

/// Euclidean projection onto the probability simplex.
fn project_simplex(y: &[f64]) -> Vec<f64> {
    let mut s = y.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (i, &si) in s.iter().enumerate() {
        cum += si;
        let t = (cum - 1.0) / (i + 1) as f64;
        if si - t > 0.0 {
            theta = t;
        }
    }
    y.iter().map(|&v| (v - theta).max(0.0)).collect()
}

const DEGENERATE_NORM: f64 = 1e-8;

/// `φ(x) = max_j ⟨vʲ, Gx⟩/‖Gx‖` with everything needed for a subgradient step.
struct Eval {
    value: f64,
    active: usize,
    yhat: Vec<f64>,
    ny: f64,
}

fn eval_master(g: &Matrix, model: &CuttingPlaneModel, x: &[f64]) -> Option<Eval> {
    let y = g.mul_vec(x);
    let ny = norm(&y);
    if ny.is_nan() || ny < DEGENERATE_NORM {
        return None;
    }
    let yhat = scaled(&y, 1.0 / ny);
    let (value, active) = model.value(&yhat);
    Some(Eval {
        value,
        active,
        yhat,
        ny,
    })
}

/// Projected subgradient descent on the simplex from `x0`; returns the best point visited.
fn descend(
    g: &Matrix,
    model: &CuttingPlaneModel,
    x0: Vec<f64>,
    cfg: &SolverConfig,
) -> Option<(f64, Vec<f64>)> {
    let mut x = x0;
    let mut best: Option<(f64, Vec<f64>)> = None;
    for k in 0..cfg.master_max_steps {
        let Some(e) = eval_master(g, model, &x) else {
            break;
        };
        if best.as_ref().is_none_or(|b| e.value < b.0) {
            best = Some((e.value, x.clone()));
        }
        // ∇ₓ ⟨v, Gx⟩/‖Gx‖ = Gᵀ(v − ⟨v, ŷ⟩ŷ)/‖Gx‖
        let mut d = model.cuts[e.active].clone();
        linalg::axpy(-e.value, &e.yhat, &mut d);
        let grad = scaled(&g.tr_mul_vec(&d), 1.0 / e.ny);
        let gn = norm(&grad);
        if gn <= 1e-14 {
            break;
        }
        let step = cfg.step_a / (k as f64 + cfg.step_b);
        let trial: Vec<f64> = x
            .iter()
            .zip(&grad)
            .map(|(xi, gi)| xi - step * gi / gn)
            .collect();
        x = project_simplex(&trial);
    }
    best
}

/// Descent along the ridge of nearly active cuts.
///
/// Subgradient steps zigzag across a ridge where two or more cuts tie. Here
/// the step direction is minus the min-norm point of the convex hull of the
/// ε-active cut gradients, restricted to the current face of the simplex,
/// with a backtracking line search. ε shrinks when no descent is found.
fn polish(g: &Matrix, model: &CuttingPlaneModel, mut val: f64, mut x: Vec<f64>) -> (f64, Vec<f64>) {
    let mut eps = 1e-3;
    for _ in 0..POLISH_STEPS {
        if eps < 1e-10 {
            break;
        }
        let Some(e) = eval_master(g, model, &x) else {
            break;
        };
        let free: Vec<usize> = (0..x.len()).filter(|&j| x[j] > 0.0).collect();
        if free.len() < 2 {
            break;
        }
        let grads: Vec<Vec<f64>> = model
            .cuts
            .iter()
            .filter(|v| dot(v, &e.yhat) >= e.value - eps)
            .map(|v| {
                let mut d = v.clone();
                linalg::axpy(-dot(v, &e.yhat), &e.yhat, &mut d);
                let full = g.tr_mul_vec(&d);
                let mut t: Vec<f64> = free.iter().map(|&j| full[j] / e.ny).collect();
                let mean = t.iter().sum::<f64>() / t.len() as f64;
                t.iter_mut().for_each(|ti| *ti -= mean);
                t
            })
            .collect();
        let Some(dir) = min_norm_hull(&grads) else {
            break;
        };
        let dn = norm(&dir);
        if dn <= 1e-12 {
            eps *= 0.01;
            continue;
        }
        // Largest step keeping x ≥ 0.
        let mut tmax = f64::INFINITY;
        for (k, &j) in free.iter().enumerate() {
            if dir[k] > 0.0 {
                tmax = tmax.min(x[j] / dir[k]);
            }
        }
        let mut t = tmax.min(1.0 / dn);
        let mut moved = false;
        for _ in 0..40 {
            let mut trial = x.clone();
            for (k, &j) in free.iter().enumerate() {
                trial[j] = (trial[j] - t * dir[k]).max(0.0);
            }
            if let Some(te) = eval_master(g, model, &trial) {
                if te.value < val - 1e-4 * t * dn * dn {
                    val = te.value;
                    x = trial;
                    moved = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !moved {
            eps *= 0.01;
        }
    }
    (val, x)
}

const POLISH_STEPS: usize = 200;

/// Min-norm point of `conv{a_i}`, via NNLS with a heavily weighted `Σλ = 1` row.
fn min_norm_hull(a: &[Vec<f64>]) -> Option<Vec<f64>> {
    let first = a.first()?;
    if a.len() == 1 {
        return Some(first.clone());
    }
    let scale = a.iter().map(|v| norm(v)).fold(0.0, f64::max).max(1.0);
    let w = 1e4 * scale;
    let cols: Vec<Vec<f64>> = a
        .iter()
        .map(|v| {
            let mut c = v.clone();
            c.push(w);
            c
        })
        .collect();
    let mut b = vec![0.0; first.len()];
    b.push(w);
    let lambda = linalg::nnls(&Matrix::from_columns(&cols).ok()?, &b).ok()?.x;
    let total: f64 = lambda.iter().sum();
    if total.is_nan() || total <= 0.0 {
        return None;
    }
    let mut out = vec![0.0; first.len()];
    for (l, v) in lambda.iter().zip(a) {
        linalg::axpy(l / total, v, &mut out);
    }
    Some(out)
}

/// Local master solve: the best `cfg.restarts` of the given simplex starts
/// (ranked by model value) are refined by subgradient descent followed by
/// [`polish`].
///
/// `anchors` are always refined. Starts with degenerate `‖Gx‖` are dropped.
pub fn solve_master_local(
    model: &CuttingPlaneModel,
    p: &PolyhedralCone,
    anchors: &[Vec<f64>],
    starts: &[Vec<f64>],
    cfg: &SolverConfig,
) -> Option<MasterSolution> {
    if model.is_empty() {
        return None;
    }
    let g = p.matrix();
    let mut launch: Vec<Vec<f64>> = Vec::new();
    for a in anchors {
        if eval_master(g, model, a).is_some() && !launch.contains(a) {
            launch.push(a.clone());
        }
    }
    let mut ranked: Vec<(f64, usize)> = starts
        .iter()
        .enumerate()
        .filter_map(|(i, x)| eval_master(g, model, x).map(|e| (e.value, i)))
        .collect();
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    for (_, i) in ranked {
        if launch.len() >= cfg.restarts.max(anchors.len()) {
            break;
        }
        if !launch.contains(&starts[i]) {
            launch.push(starts[i].clone());
        }
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    for x0 in launch {
        if let Some((val, x)) = descend(g, model, x0, cfg).map(|(v, x)| polish(g, model, v, x)) {
            if best.as_ref().is_none_or(|b| val < b.0) {
                best = Some((val, x));
            }
        }
    }
    let (_, x) = best?;
    let e = eval_master(g, model, &x)?;
    Some(MasterSolution {
        u: e.yhat,
        x: Some(x),
        r: e.value,
    })
}

/// Exact master solve in the plane.
///
/// Along the circle the model is a maximum of shifted cosines, so its minimum
/// over an arc is attained at an arc end, at a crossing of two cuts, or at the
/// antipode of a single cut.
pub fn solve_master_planar(
    model: &CuttingPlaneModel,
    section: &CircleSection,
) -> Option<MasterSolution> {
    if model.is_empty() {
        return None;
    }
    let betas: Vec<f64> = model.cuts().iter().map(|c| c[1].atan2(c[0])).collect();
    let mut candidates = section.endpoints();
    if !matches!(section, CircleSection::Line { .. }) && section.length() > 0.0 {
        for (i, &bi) in betas.iter().enumerate() {
            candidates.push(bi + std::f64::consts::PI);
            for &bj in &betas[i + 1..] {
                let mid = 0.5 * (bi + bj);
                candidates.push(mid);
                candidates.push(mid + std::f64::consts::PI);
            }
        }
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    for (idx, t) in candidates.into_iter().enumerate() {
        // The first entries are the section's own points and need no test.
        if idx >= 2 && !section.contains(t) {
            continue;
        }
        let u = planar::unit_at(t);
        let (val, _) = model.value(&u);
        if best.as_ref().is_none_or(|b| val < b.0) {
            best = Some((val, u));
        }
    }
    let (r, u) = best?;
    Some(MasterSolution { u, x: None, r })
}

/// Simplex weights of the minimizer of `⟨v, ·⟩` over `P ∩ Sₙ`, namely `Proj_{P∩Sₙ}(−v)`.
///
/// Exact master solution whenever a single cut is active there.
fn cut_start(p: &PolyhedralCone, v: &[f64]) -> Vec<f64> {
    let g = p.matrix();
    let target = scaled(v, -1.0);
    if let Ok(s) = linalg::nnls(g, &target) {
        let total: f64 = s.x.iter().sum();
        if norm(&g.mul_vec(&s.x)) > DEGENERATE_NORM && total > 0.0 {
            return scaled(&s.x, 1.0 / total);
        }
    }
    let scores = g.tr_mul_vec(&target);
    let mut best = 0;
    for (j, &t) in scores.iter().enumerate() {
        if t > scores[best] {
            best = j;
        }
    }
    unit_weights(p.num_generators(), best)
}

/// Per-iteration record of a cutting-plane run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trace {
    /// Number of warm-start cuts at the front of `cuts`.
    pub warm_cuts: usize,
    /// All cuts in insertion order; the model used at iteration `k` (1-based) is `cuts[..warm_cuts + k − 1]`.
    pub cuts: Vec<Vec<f64>>,
    /// Master iterates `uᵏ`.
    pub iterates: Vec<Vec<f64>>,
    /// Master values `rᵏ`.
    pub model_values: Vec<f64>,
    /// `F_Q(uᵏ)`.
    pub support_values: Vec<f64>,
}

struct Incumbent {
    u: Vec<f64>,
    x: Option<Vec<f64>>,
    v: Vec<f64>,
    f: f64,
}

/// Cutting-plane computation of `Θ(P, Q)` for polyhedral cones.
pub fn cutting_plane_angle(
    p: &PolyhedralCone,
    q: &PolyhedralCone,
    cfg: &SolverConfig,
) -> Result<AngleResult> {
    run(p, q, cfg, None)
}

/// [`cutting_plane_angle`] that also records the iteration history.
pub fn cutting_plane_traced(
    p: &PolyhedralCone,
    q: &PolyhedralCone,
    cfg: &SolverConfig,
) -> Result<(AngleResult, Trace)> {
    let mut trace = Trace::default();
    let res = run(p, q, cfg, Some(&mut trace))?;
    Ok((res, trace))
}

fn unit_weights(p: usize, j: usize) -> Vec<f64> {
    let mut x = vec![0.0; p];
    x[j] = 1.0;
    x
}

fn run(
    p: &PolyhedralCone,
    q: &PolyhedralCone,
    cfg: &SolverConfig,
    mut trace: Option<&mut Trace>,
) -> Result<AngleResult> {
    check_dims(p.dim(), q.dim())?;
    cfg.validate()?;
    let np = p.num_generators();
    let ws = warm_start(p, q)?;
    let mut inc = Incumbent {
        u: p.generators()[ws.best_index].clone(),
        x: Some(unit_weights(np, ws.best_index)),
        v: ws.cuts[ws.best_index].clone(),
        f: ws.values[ws.best_index],
    };
    let mut model = CuttingPlaneModel::new(ws.cuts);
    if let Some(t) = trace.as_deref_mut() {
        t.warm_cuts = model.len();
        t.cuts = model.cuts().to_vec();
    }

    // Every generator lies in Q, hence so does P.
    if inc.f >= 1.0 - 1e-12 {
        let u = inc.u.clone();
        return Ok(AngleResult {
            cos_value: 1.0,
            angle: 0.0,
            v: u.clone(),
            u,
            model_value: 1.0,
            gap: 0.0,
            iterations: 0,
            stationarity_residual: Some(0.0),
            status: Status::Converged,
            method: Method::CuttingPlane,
        });
    }

    let section = if p.dim() == 2 && cfg.exact_planar_master {
        Some(CircleSection::of(p)?)
    } else {
        None
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cut_starts: Vec<Vec<f64>> = match section {
        Some(_) => Vec::new(),
        None => model.cuts().iter().map(|v| cut_start(p, v)).collect(),
    };
    let mut prev_x: Option<Vec<f64>> = None;
    let mut r = -1.0;
    let mut iterations = 0;
    let mut status = Status::MaxIter;

    for k in 1..=cfg.max_iter {
        let sol = match &section {
            Some(s) => solve_master_planar(&model, s),
            None => {
                let mut anchors: Vec<Vec<f64>> = inc.x.iter().cloned().collect();
                anchors.extend(prev_x.iter().cloned());
                let mut starts: Vec<Vec<f64>> = (0..np).map(|j| unit_weights(np, j)).collect();
                starts.extend(cut_starts.iter().cloned());
                starts.extend((0..cfg.restarts).map(|_| sampling::dirichlet(&mut rng, np)));
                solve_master_local(&model, p, &anchors, &starts, cfg)
            }
        };
        let Some(sol) = sol else {
            status = Status::MasterFailure;
            break;
        };
        iterations = k;
        let out = q.project_sphere(&sol.u)?;
        if let Some(t) = trace.as_deref_mut() {
            t.iterates.push(sol.u.clone());
            t.model_values.push(sol.r);
            t.support_values.push(out.value);
            t.cuts.push(out.v.clone());
        }
        if section.is_none() {
            cut_starts.push(cut_start(p, &out.v));
        }
        model.push(out.v.clone());
        if out.value < inc.f {
            inc = Incumbent {
                u: sol.u.clone(),
                x: sol.x.clone(),
                v: out.v,
                f: out.value,
            };
        }
        r = sol.r;
        prev_x = sol.x;
        if inc.f - r <= cfg.tol {
            status = Status::Converged;
            break;
        }
    }

    let cos_value = inc.f.clamp(-1.0, 1.0);
    let stationarity = certificate_residual(p, q, &inc.u)?;
    Ok(AngleResult {
        cos_value,
        angle: cos_value.acos(),
        u: inc.u,
        v: inc.v,
        model_value: r,
        gap: cos_value - r,
        iterations,
        stationarity_residual: Some(stationarity),
        status,
        method: Method::CuttingPlane,
    })
}

/// Residual of the stationarity system at the pair `(u, v)`:
/// `u ∈ P`, `w = v − ⟨u, v⟩u ⊥ u`, `w ∈ P*` and `⟨u, v⟩ = F_Q(u)`.
///
/// `v` may be any element of `∂F_Q(u)`, not necessarily a unit vector.
pub fn stationarity_residual(
    p: &PolyhedralCone,
    q: &PolyhedralCone,
    u: &[f64],
    v: &[f64],
) -> Result<f64> {
    check_dims(p.dim(), u.len())?;
    check_dims(q.dim(), v.len())?;
    let nu = norm(u);
    if (nu - 1.0).abs() > 1e-8 {
        return Err(ConeError::NonUnit { norm: nu });
    }
    let (_, member) = p.membership(u, 0.0)?;
    let c = dot(u, v);
    let mut w = v.to_vec();
    linalg::axpy(-c, u, &mut w);
    let comp = dot(u, &w).abs();
    let (_, dual) = p.dual_membership(&w, 0.0)?;
    let (f, _) = q.support_value(&scaled(u, 1.0 / nu))?;
    Ok(member.max(comp).max(dual).max((c - f).abs()))
}

/// Smallest stationarity residual over `v̄ ∈ conv Proj_{Q∩Sₙ}(u)`.
///
/// When the projection set is not a singleton the convex weights on the
/// maximizing generators are chosen to make `w` as dual-feasible as possible.
pub fn certificate_residual(p: &PolyhedralCone, q: &PolyhedralCone, u: &[f64]) -> Result<f64> {
    let u = linalg::normalized(u).ok_or(ConeError::NonUnit { norm: 0.0 })?;
    let out = q.project_sphere(&u)?;
    if out.active.len() <= 1 {
        return stationarity_residual(p, q, &u, &out.v);
    }
    // w(λ) = (I − uuᵀ) B λ, minimize ½‖min(0, Gᵀw)‖² over the simplex.
    let b: Vec<Vec<f64>> = out
        .active
        .iter()
        .map(|&j| q.generators()[j].clone())
        .collect();
    let tangential: Vec<Vec<f64>> = b
        .iter()
        .map(|h| {
            let mut t = h.clone();
            linalg::axpy(-dot(h, &u), &u, &mut t);
            t
        })
        .collect();
    let a: Vec<Vec<f64>> = tangential
        .iter()
        .map(|t| p.matrix().tr_mul_vec(t))
        .collect();
    let lip: f64 = a.iter().map(|c| dot(c, c)).sum::<f64>().max(1e-300);
    let m = b.len();
    let mut lambda = vec![1.0 / m as f64; m];
    for _ in 0..500 {
        let mut s = vec![0.0; p.num_generators()];
        for (ai, &li) in a.iter().zip(&lambda) {
            linalg::axpy(li, ai, &mut s);
        }
        s.iter_mut().for_each(|x| *x = x.min(0.0));
        if s.iter().all(|&x| x == 0.0) {
            break;
        }
        let grad: Vec<f64> = a.iter().map(|ai| dot(ai, &s)).collect();
        let trial: Vec<f64> = lambda.iter().zip(&grad).map(|(l, g)| l - g / lip).collect();
        lambda = project_simplex(&trial);
    }
    let mut v = vec![0.0; q.dim()];
    for (h, &l) in b.iter().zip(&lambda) {
        linalg::axpy(l, h, &mut v);
    }
    stationarity_residual(p, q, &u, &v)
}

/// `Θ(P, Q)`, by closed form when both cones are revolution cones or both are
/// subspaces, otherwise by the cutting-plane method on polyhedral forms.
pub fn theta(p: &Cone, q: &Cone, cfg: &SolverConfig) -> Result<AngleResult> {
    check_dims(p.dim(), q.dim())?;
    match (p, q) {
        (Cone::Revolution(a), Cone::Revolution(b)) => closedform::revolution_angle(a, b),
        (Cone::Subspace(a), Cone::Subspace(b)) => closedform::subspace_angle(a, b),
        _ => cutting_plane_angle(&p.to_polyhedral(cfg.rim)?, &q.to_polyhedral(cfg.rim)?, cfg),
    }
}

/// Min-max angle `Θ̂(P, Q) = π − Θ(P, −Q)`; the certificate `v` lies in `Q`.
pub fn theta_hat(p: &Cone, q: &Cone, cfg: &SolverConfig) -> Result<AngleResult> {
    let mut res = theta(p, &q.negated(), cfg)?;
    res.angle = std::f64::consts::PI - res.angle;
    res.cos_value = -res.cos_value;
    res.model_value = -res.model_value;
    res.v = scaled(&res.v, -1.0);
    Ok(res)
}
