//! `verify-kernels`: the kernel–Riesz identity sweep and the agreement of
//! the two admissible-region definitions.

use hncap_core::geometry::{Space, UPoint};
use hncap_core::kernels::{
    admissible_contains_gauge, admissible_contains_siegel, kernel_gauge_identity,
    AdmissibleParams, KernelParams,
};
use hncap_core::Result;

use crate::config::ExperimentConfig;
use crate::report::{Check, Report, Table};

use super::{random_hpoint, random_upoint, rng_for};

pub fn verify_kernels(config: &ExperimentConfig) -> Result<Report> {
    let space = Space::new(config.n);
    let mut report = Report::new("verify-kernels", config);
    let pairs = config.samples.max(10_000) as usize;

    let mut t = Table::new("kernel_riesz", &["alpha", "max_rel_error", "pairs"]);
    for (i, &alpha) in config.alphas.iter().enumerate() {
        let p = KernelParams::new(config.n, alpha)?;
        let mut rng = rng_for(config.seed, 10 + i as u64);
        let mut max_rel: f64 = 0.0;
        for _ in 0..pairs {
            let x = random_hpoint(&space, &mut rng, 2.0);
            let y = random_hpoint(&space, &mut rng, 2.0);
            if space.dist_boundary(&x, &y)? < 1e-8 {
                continue;
            }
            let (lhs, rhs) = kernel_gauge_identity(&p, &space, &x, &y)?;
            max_rel = max_rel.max((lhs - rhs).abs() / rhs);
        }
        t.push(vec![alpha, max_rel, pairs as f64]);
        report.check(Check::bound(&format!("kernel_riesz_alpha_{alpha}"), max_rel, 1e-10));
    }
    report.table(t);

    // the two displays of the admissible region agree outside a margin band
    let band = 1e-9;
    let mut t = Table::new(
        "admissible_agreement",
        &["gamma", "samples", "disagreements_outside_band"],
    );
    for (i, &gamma) in config.gammas.iter().enumerate() {
        let ap = AdmissibleParams::new(gamma)?;
        let mut rng = rng_for(config.seed, 100 + i as u64);
        let mut bad = 0u64;
        let total = config.samples.max(100_000);
        for _ in 0..total {
            let omega = random_hpoint(&space, &mut rng, 2.0);
            let zeta = random_upoint(&space, &mut rng, 2.0);
            let g = admissible_contains_gauge(&ap, &space, &omega, &zeta)?;
            let s = admissible_contains_siegel(
                &ap,
                &space,
                &space.psi_inv(&UPoint::boundary(omega.clone()))?,
                &space.psi_inv(&zeta)?,
            )?;
            if g != s {
                let d = space.dist(&zeta, &UPoint::boundary(omega))?;
                if (d - (2.0 * gamma * zeta.h).sqrt()).abs() >= band {
                    bad += 1;
                }
            }
        }
        t.push(vec![gamma, total as f64, bad as f64]);
        report.check(Check::bound(&format!("admissible_forms_gamma_{gamma}"), bad as f64, 0.0));
    }
    report.table(t);
    Ok(report)
}
