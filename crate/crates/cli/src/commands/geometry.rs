//! `verify-geometry`: the algebraic identity battery at tolerance 1e-12.

use hncap_core::geometry::{Space, UPoint};
use hncap_core::Result;
use rand::Rng;

use crate::config::ExperimentConfig;
use crate::report::{Check, Report, Table};

use super::{random_hpoint, random_upoint, rng_for};

const TOL: f64 = 1e-12;

fn component_deviation(a: &hncap_core::geometry::HPoint, b: &hncap_core::geometry::HPoint) -> f64 {
    let mut dev = (a.t - b.t).abs();
    for (x, y) in a.z.iter().zip(&b.z) {
        dev = dev.max((x - y).norm());
    }
    dev
}

pub fn verify_geometry(config: &ExperimentConfig) -> Result<Report> {
    let space = Space::new(config.n);
    let mut report = Report::new("verify-geometry", config);
    let samples = config.samples.max(10_000) as usize;
    let mut rng = rng_for(config.seed, 1);

    let mut max_assoc: f64 = 0.0;
    let mut max_inverse: f64 = 0.0;
    let mut max_invariance: f64 = 0.0;
    let mut max_homog: f64 = 0.0;
    let mut max_rho: f64 = 0.0;
    let mut max_roundtrip: f64 = 0.0;
    for _ in 0..samples {
        let p = random_hpoint(&space, &mut rng, 2.0);
        let q = random_hpoint(&space, &mut rng, 2.0);
        let s = random_hpoint(&space, &mut rng, 2.0);
        let a = space.group_mul(&space.group_mul(&p, &q)?, &s)?;
        let b = space.group_mul(&p, &space.group_mul(&q, &s)?)?;
        max_assoc = max_assoc.max(component_deviation(&a, &b));

        let e = space.group_mul(&p, &space.group_inv(&p))?;
        max_inverse = max_inverse.max(space.gauge_boundary(&e));

        let u = random_upoint(&space, &mut rng, 2.0);
        let v = random_upoint(&space, &mut rng, 2.0);
        let d0 = space.dist(&u, &v)?;
        let d1 = space.dist(
            &space.translate_upoint(&p, &u)?,
            &space.translate_upoint(&p, &v)?,
        )?;
        max_invariance = max_invariance.max((d0 - d1).abs() / (1.0 + d0));

        let r = rng.random_range(0.2..3.0);
        max_homog = max_homog
            .max((space.gauge(&space.dilate(r, &u)) - r * space.gauge(&u)).abs() / (1.0 + r));

        let zeta = space.psi_inv(&u)?;
        max_rho =
            max_rho.max((space.rho(&space.left_translate(&p, &zeta)?) - space.rho(&zeta)).abs());

        let back = space.psi(&zeta)?;
        let rt = component_deviation(&back.base, &u.base) + (back.h - u.h).abs();
        max_roundtrip = max_roundtrip.max(rt / (1.0 + space.gauge(&u)));
    }

    // metric triangle inequality on a denser sample
    let mut rng = rng_for(config.seed, 2);
    let mut worst_triangle: f64 = f64::NEG_INFINITY;
    for _ in 0..samples.max(100_000) {
        let p = UPoint::boundary(random_hpoint(&space, &mut rng, 2.0));
        let q = UPoint::boundary(random_hpoint(&space, &mut rng, 2.0));
        let s = UPoint::boundary(random_hpoint(&space, &mut rng, 2.0));
        let excess = space.dist(&p, &s)? - space.dist(&p, &q)? - space.dist(&q, &s)?;
        worst_triangle = worst_triangle.max(excess);
    }

    let mut t = Table::new("identities", &["max_deviation", "tolerance"]);
    for (name, v) in [
        ("associativity", max_assoc),
        ("inverse", max_inverse),
        ("dist_translation_invariance", max_invariance),
        ("gauge_homogeneity", max_homog),
        ("rho_translation_invariance", max_rho),
        ("psi_roundtrip", max_roundtrip),
        ("triangle_excess", worst_triangle.max(0.0)),
    ] {
        t.push(vec![v, TOL]);
        report.check(Check::bound(name, v, TOL));
    }
    report.table(t);
    Ok(report)
}
