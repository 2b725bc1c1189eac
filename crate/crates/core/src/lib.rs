//! Max-min angles and dissimilarity distances between convex cones.
//!
//! For closed convex cones `P, Q ⊆ ℝⁿ` the max-min angle is
//!
//! ```text
//! Θ(P, Q) = max_{u ∈ P ∩ Sₙ} min_{v ∈ Q ∩ Sₙ} arccos ⟨u, v⟩
//! ```
//!
//! and `Dis_r(P, Q) = 2‖(sin(Θ(P,Q)/2), sin(Θ(Q,P)/2))‖_r` is a distance on
//! closed convex cones. Pairs of subspaces and pairs of revolution cones have
//! closed forms ([`closedform`]); polyhedral cones go through a cutting-plane
//! solver ([`angles`]). [`oracle`] holds brute-force references and
//! [`classify`] a nearest-cone classifier.
//!
//! ```
//! use conedist::{cutting_plane_angle, PolyhedralCone, SolverConfig};
//!
//! let q = PolyhedralCone::new(vec![vec![1.0, 1.0], vec![-1.0, 1.0]]).unwrap();
//! let p = q.negated();
//! let res = cutting_plane_angle(&p, &q, &SolverConfig::default()).unwrap();
//! assert!((res.angle - 3.0 * std::f64::consts::FRAC_PI_4).abs() < 1e-9);
//! ```

pub mod angles;
pub mod classify;
pub mod closedform;
pub mod cones;
pub mod distance;
pub mod error;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod planar;
pub mod sampling;

pub use angles::{
    cutting_plane_angle, theta, theta_hat, AngleResult, Method, SolverConfig, Status,
};
pub use cones::{Cone, LinearSubspace, PolyhedralCone, RevolutionCone};
pub use distance::{dis_measure, DistanceResult, NormKind};
pub use error::{ConeError, Result};
pub use linalg::Matrix;
