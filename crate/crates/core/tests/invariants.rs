//! Property tests for the algebraic invariants of the geometry and kernel
//! layers.

use hncap_core::geometry::{HPoint, Space, UPoint};
use hncap_core::kernels::{
    hs_kernel, kernel_gauge_identity, riesz_kernel, KernelParams,
};
use hncap_core::linalg::eig_range;
use hncap_core::quadrature::{integrate_box, BoxDomain, Budget};
use num_complex::Complex64;
use proptest::prelude::*;

fn coord() -> impl Strategy<Value = f64> {
    -3.0..3.0f64
}

fn hpoint() -> impl Strategy<Value = HPoint> {
    (coord(), coord(), coord())
        .prop_map(|(x, y, t)| HPoint::new(vec![Complex64::new(x, y)], t))
}

fn upoint() -> impl Strategy<Value = UPoint> {
    (hpoint(), 0.01..2.0f64).prop_map(|(b, h)| UPoint::new(b, h))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn group_associativity(p in hpoint(), q in hpoint(), s in hpoint()) {
        let space = Space::new(1);
        let a = space.group_mul(&space.group_mul(&p, &q).unwrap(), &s).unwrap();
        let b = space.group_mul(&p, &space.group_mul(&q, &s).unwrap()).unwrap();
        prop_assert!((a.t - b.t).abs() < 1e-12);
        prop_assert!((a.z[0] - b.z[0]).norm() < 1e-12);
    }

    #[test]
    fn inverse_cancels(p in hpoint()) {
        let space = Space::new(1);
        let e = space.group_mul(&p, &space.group_inv(&p)).unwrap();
        prop_assert!(space.gauge_boundary(&e) < 1e-12);
    }

    #[test]
    fn distance_symmetry_and_triangle(p in hpoint(), q in hpoint(), r in hpoint()) {
        let space = Space::new(1);
        let dpq = space.dist_boundary(&p, &q).unwrap();
        let dqp = space.dist_boundary(&q, &p).unwrap();
        prop_assert!((dpq - dqp).abs() <= 1e-13 * (1.0 + dpq));
        let dqr = space.dist_boundary(&q, &r).unwrap();
        let dpr = space.dist_boundary(&p, &r).unwrap();
        prop_assert!(dpr <= dpq + dqr + 1e-12);
    }

    #[test]
    fn distance_invariant_under_translation_action(
        g in hpoint(), p in upoint(), q in upoint()
    ) {
        let space = Space::new(1);
        let d0 = space.dist(&p, &q).unwrap();
        let d1 = space.dist(
            &space.translate_upoint(&g, &p).unwrap(),
            &space.translate_upoint(&g, &q).unwrap(),
        ).unwrap();
        prop_assert!((d0 - d1).abs() <= 1e-12 * (1.0 + d0));
    }

    #[test]
    fn gauge_dilation_homogeneity(u in upoint(), r in 0.1..4.0f64) {
        let space = Space::new(1);
        let lhs = space.gauge(&space.dilate(r, &u));
        let rhs = r * space.gauge(&u);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
    }

    #[test]
    fn rho_invariant_under_translation(g in hpoint(), u in upoint()) {
        let space = Space::new(1);
        let zeta = space.psi_inv(&u).unwrap();
        let moved = space.left_translate(&g, &zeta).unwrap();
        prop_assert!((space.rho(&moved) - space.rho(&zeta)).abs() < 1e-12);
    }

    #[test]
    fn kernel_riesz_identity(p in hpoint(), q in hpoint(), alpha in 0.55..0.95f64) {
        let space = Space::new(1);
        let params = KernelParams::new(1, alpha).unwrap();
        if space.dist_boundary(&p, &q).unwrap() > 1e-6 {
            let (lhs, rhs) = kernel_gauge_identity(&params, &space, &p, &q).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs);
        }
    }

    #[test]
    fn kernel_hermitian(a in upoint(), b in upoint()) {
        let p = KernelParams::new(1, 0.75).unwrap();
        let k1 = hs_kernel(&p, &a, &b).unwrap();
        let k2 = hs_kernel(&p, &b, &a).unwrap();
        prop_assert!((k1 - k2.conj()).norm() <= 1e-12 * k1.norm());
    }

    #[test]
    fn riesz_kernel_symmetric_positive(p in hpoint(), q in hpoint()) {
        let space = Space::new(1);
        let params = KernelParams::new(1, 0.75).unwrap();
        if space.dist_boundary(&p, &q).unwrap() > 0.0 {
            let a = riesz_kernel(&params, &space, &p, &q).unwrap();
            let b = riesz_kernel(&params, &space, &q, &p).unwrap();
            prop_assert!(a > 0.0);
            prop_assert!(a == b);
        }
    }
}

proptest! {
    // Gram matrices get expensive per case; fewer cases suffice
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gram_positive_semidefinite(
        centers in proptest::collection::vec(upoint(), 2..10)
    ) {
        let p = KernelParams::new(1, 0.75).unwrap();
        match hncap_core::carleson::gram_matrix(&p, &centers) {
            Ok(g) => {
                let (lo, _) = eig_range(&g);
                prop_assert!(lo > -1e-10);
            }
            // random centers may coincide; that rejection is also correct
            Err(hncap_core::Error::DuplicateCenters(_)) => {}
            Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
        }
    }

    #[test]
    fn tent_monotone_in_family(
        u in upoint(), c1 in hpoint(), c2 in hpoint(),
        r1 in 0.2..2.0f64, r2 in 0.2..2.0f64
    ) {
        use hncap_core::carleson::{tent_contains, TentMode};
        use hncap_core::geometry::{Ball, BallFamily};
        let space = Space::new(1);
        let small = BallFamily::new(vec![Ball { center: c1, r: r1 }]);
        let mut balls = small.balls.clone();
        balls.push(Ball { center: c2, r: r2 });
        let big = BallFamily::new(balls);
        if tent_contains(&space, &small, &u, TentMode::Metric).unwrap() {
            prop_assert!(tent_contains(&space, &big, &u, TentMode::Metric).unwrap());
        }
    }
}

/// Ψ is measure-preserving: the Monte-Carlo volume of a coordinate box,
/// pulled back through Ψ to ambient coordinates, matches its Lebesgue
/// volume within sampling error.
#[test]
fn psi_preserves_volume() {
    let space = Space::new(1);
    // target box in [z,t,h]-coordinates
    let target_lo = [-0.5, -0.5, -0.5, 0.2];
    let target_hi = [0.5, 0.5, 0.5, 1.2];
    let target_vol: f64 = target_lo
        .iter()
        .zip(&target_hi)
        .map(|(a, b)| b - a)
        .product();
    // ambient sampling box in (Re z, Im z, Re zeta_2, Im zeta_2): the shear
    // h = Im zeta_2 - |z|^2/4 keeps the image inside Im zeta_2 in [0.2, 1.7]
    let domain = BoxDomain::new(
        vec![-0.5, -0.5, -0.5, 0.0],
        vec![0.5, 0.5, 0.5, 2.0],
    );
    let est = integrate_box(
        |c| {
            let zeta = hncap_core::geometry::SiegelPoint::new(vec![
                Complex64::new(c[0], c[1]),
                Complex64::new(c[2], c[3]),
            ]);
            match space.psi(&zeta) {
                Ok(u) => {
                    let inside = u.base.z[0].re >= target_lo[0]
                        && u.base.z[0].re < target_hi[0]
                        && u.base.z[0].im >= target_lo[1]
                        && u.base.z[0].im < target_hi[1]
                        && u.base.t >= target_lo[2]
                        && u.base.t < target_hi[2]
                        && u.h >= target_lo[3]
                        && u.h < target_hi[3];
                    if inside { 1.0 } else { 0.0 }
                }
                Err(_) => 0.0,
            }
        },
        &domain,
        &Budget::new(400_000, 31),
    )
    .unwrap();
    assert!(
        (est.value - target_vol).abs() < 4.0 * est.stderr.max(1e-3),
        "pullback volume {} vs Lebesgue {}",
        est.value,
        target_vol
    );
}
