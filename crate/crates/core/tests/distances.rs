use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use approx::assert_abs_diff_eq;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use conedist::distance::{dis_polyhedral, dis_sampled, hausdorff_sampled, lambda_sampled};
use conedist::oracle::sweep_theta_2d;
use conedist::planar::{unit_at, CircleSection};
use conedist::sampling::{random_cone, random_planar_cone};
use conedist::{dis_measure, Cone, NormKind, PolyhedralCone, RevolutionCone, SolverConfig};

const NORMS: [NormKind; 3] = [NormKind::L1, NormKind::L2, NormKind::Inf];

fn lorentz() -> PolyhedralCone {
    PolyhedralCone::new(vec![vec![1.0, 1.0], vec![-1.0, 1.0]]).unwrap()
}

/// Equally spaced points of `P ∩ S₂`.
fn arc_samples(p: &PolyhedralCone, m: usize) -> Vec<Vec<f64>> {
    match CircleSection::of(p).unwrap() {
        CircleSection::Arc { start, len } => (0..=m)
            .map(|i| unit_at(start + len * i as f64 / m as f64))
            .collect(),
        CircleSection::Line { angle } => vec![unit_at(angle), unit_at(angle + PI)],
        CircleSection::Circle => panic!("whole plane"),
    }
}

#[test]
fn equal_cones_are_at_distance_zero() {
    let cfg = SolverConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let p = random_cone(&mut rng, 4, 6, 0.7).unwrap();
    for r in NORMS {
        assert_eq!(dis_polyhedral(&p, &p, r, &cfg).unwrap().value, 0.0);
    }
}

#[test]
fn lorentz_pair_distance() {
    let q = lorentz();
    let d = dis_polyhedral(&q.negated(), &q, NormKind::L2, &SolverConfig::default()).unwrap();
    assert_abs_diff_eq!(
        d.value,
        2.0 * SQRT_2 * (3.0 * PI / 8.0).sin(),
        epsilon = 1e-9
    );
}

#[test]
fn example_pair_distance() {
    let p: Cone = RevolutionCone::new(unit_at(PI / 3.0), PI / 12.0)
        .unwrap()
        .into();
    let q: Cone = RevolutionCone::new(unit_at(PI / 4.0), PI / 6.0)
        .unwrap()
        .into();
    let cfg = SolverConfig::default();
    let d = dis_measure(&p, &q, NormKind::L1, &cfg).unwrap();
    assert_abs_diff_eq!(d.value, 2.0 * (PI / 12.0).sin(), epsilon = 1e-12);
    // Same through the polyhedral route.
    let pp = p.to_polyhedral(2).unwrap();
    let qp = q.to_polyhedral(2).unwrap();
    let d = dis_polyhedral(&pp, &qp, NormKind::L1, &cfg).unwrap();
    assert_abs_diff_eq!(d.value, 2.0 * (PI / 12.0).sin(), epsilon = 1e-9);
}

#[test]
fn symmetric_bit_for_bit() {
    let cfg = SolverConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..10 {
        let p = random_cone(&mut rng, 3, 4, 1.0).unwrap();
        let q = random_cone(&mut rng, 3, 5, 1.0).unwrap();
        for r in NORMS {
            let a = dis_polyhedral(&p, &q, r, &cfg).unwrap().value;
            let b = dis_polyhedral(&q, &p, r, &cfg).unwrap().value;
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}

#[test]
fn norm_ordering_and_range() {
    let cfg = SolverConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let n = rng.random_range(2..6);
        let p = random_cone(&mut rng, n, n + 1, 0.6).unwrap();
        let q = random_cone(&mut rng, n, n + 1, 0.6).unwrap();
        let d = |r| dis_polyhedral(&p, &q, r, &cfg).unwrap().value;
        let (d1, d2, di) = (d(NormKind::L1), d(NormKind::L2), d(NormKind::Inf));
        assert!(di <= d2 + 1e-15 && d2 <= d1 + 1e-15 && d1 <= 2.0 * di + 1e-15);
        assert!(d1 <= 4.0 && d2 <= 2.0 * SQRT_2 && di <= 2.0);
    }
}

#[test]
fn zero_distance_iff_mutual_containment() {
    let cfg = SolverConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10 {
        let p = random_cone(&mut rng, 3, 3, 1.0).unwrap();
        // Same cone with an extra redundant generator.
        let mut gens = p.generators().to_vec();
        gens.push(p.matrix().mul_vec(&[0.2, 0.3, 0.5]));
        let q = PolyhedralCone::new(gens).unwrap();
        assert_eq!(
            dis_polyhedral(&p, &q, NormKind::L2, &cfg).unwrap().value,
            0.0
        );
        for g in q.generators() {
            assert!(p.membership(g, 1e-9).unwrap().0);
        }
        let other = random_cone(&mut rng, 3, 3, 1.0).unwrap();
        let d = dis_polyhedral(&p, &other, NormKind::L2, &cfg)
            .unwrap()
            .value;
        let mutual = other
            .generators()
            .iter()
            .all(|g| p.membership(g, 1e-9).unwrap().0)
            && p.generators()
                .iter()
                .all(|g| other.membership(g, 1e-9).unwrap().0);
        assert_eq!(d <= 1e-9, mutual);
    }
}

#[test]
fn sampled_examples() {
    let e1 = vec![vec![1.0, 0.0]];
    let e2 = vec![vec![0.0, 1.0]];
    assert_eq!(lambda_sampled(&e1, &e1).unwrap(), 0.0);
    assert_abs_diff_eq!(lambda_sampled(&e1, &e2).unwrap(), SQRT_2, epsilon = 1e-15);
    assert_abs_diff_eq!(
        hausdorff_sampled(&e1, &e2).unwrap(),
        SQRT_2,
        epsilon = 1e-15
    );
    assert!(lambda_sampled(&[], &e1).is_err());
}

#[test]
fn sampled_distances_match_angle_identities() {
    const M: usize = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let (a, b) = (rng.random_range(1..=3), rng.random_range(1..=3));
        let p = random_planar_cone(&mut rng, a, PI);
        let q = random_planar_cone(&mut rng, b, PI);
        let sp = arc_samples(&p, M);
        let sq = arc_samples(&q, M);
        let pq = sweep_theta_2d(&p, &q.clone().into(), M).unwrap();
        let qp = sweep_theta_2d(&q, &p.clone().into(), M).unwrap();
        let delta = pq.delta.max(qp.delta);
        // Grid-to-grid distances can exceed the grid-to-set ones by one spacing.
        let slack = 2.0 * delta + 1e-12;
        assert_abs_diff_eq!(
            lambda_sampled(&sp, &sq).unwrap(),
            2.0 * (pq.theta_estimate / 2.0).sin(),
            epsilon = slack
        );
        let hauss = hausdorff_sampled(&sp, &sq).unwrap();
        let dis_inf = NormKind::Inf.combine(
            2.0 * (pq.theta_estimate / 2.0).sin(),
            2.0 * (qp.theta_estimate / 2.0).sin(),
        );
        assert_abs_diff_eq!(hauss, dis_inf, epsilon = slack);
        let d1 = dis_sampled(&sp, &sq, NormKind::L1).unwrap();
        assert_abs_diff_eq!(
            d1,
            2.0 * ((pq.theta_estimate / 2.0).sin() + (qp.theta_estimate / 2.0).sin()),
            epsilon = 2.0 * slack
        );
    }
}

#[test]
fn orthogonal_rays_in_three_dims() {
    let p = PolyhedralCone::new(vec![vec![1.0, 0.0, 0.0]]).unwrap();
    let q = PolyhedralCone::new(vec![vec![0.0, 0.0, 1.0]]).unwrap();
    let d = dis_polyhedral(&p, &q, NormKind::Inf, &SolverConfig::default()).unwrap();
    assert_abs_diff_eq!(d.theta_pq.angle, FRAC_PI_2, epsilon = 1e-12);
    assert_abs_diff_eq!(d.value, SQRT_2, epsilon = 1e-12);
}
