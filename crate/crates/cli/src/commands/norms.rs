//! `norm-identity` (m-independence of the volume norm + Gram agreement)
//! and `inner-product` (boundary quadrature of the half-order pairing
//! against its closed form).

use num_complex::Complex64;
use rand::Rng;

use hncap_core::carleson::{
    frac_diff, h2_pairing_quadrature, hs_norm_gram, hs_norm_volume, KernelCombo,
};
use hncap_core::geometry::Space;
use hncap_core::kernels::{hs_kernel, KernelParams};
use hncap_core::quadrature::Budget;
use hncap_core::Result;

use crate::config::ExperimentConfig;
use crate::report::{Check, Report, Table};

use super::{random_upoint, rng_for};

fn random_combo(
    space: &Space,
    p: &KernelParams,
    terms: usize,
    seed: u64,
) -> Result<KernelCombo> {
    let mut rng = rng_for(seed, 777);
    let t = (0..terms)
        .map(|_| {
            (
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                random_upoint(space, &mut rng, 1.2),
            )
        })
        .collect();
    KernelCombo::new(*p, t)
}

pub fn norm_identity(config: &ExperimentConfig) -> Result<Report> {
    let space = Space::new(config.n);
    let p = KernelParams::new(config.n, config.alpha)?;
    let mut report = Report::new("norm-identity", config);
    let budget = Budget::new(config.samples.max(500_000), config.seed);

    let mut t = Table::new(
        "norms",
        &["case", "gram", "volume_m1", "volume_m2", "stderr_m1", "stderr_m2"],
    );
    for case in 0..config.cases.min(4).max(1) {
        let combo = random_combo(&space, &p, 3, config.seed + case as u64)?;
        let gram = hs_norm_gram(&combo)?;
        let v1 = hs_norm_volume(&space, &combo, 1, &budget)?;
        let v2 = hs_norm_volume(
            &space,
            &combo,
            2,
            &Budget { seed: budget.seed + 1, ..budget },
        )?;
        let n1 = v1.value.sqrt();
        let n2 = v2.value.sqrt();
        t.push(vec![case as f64, gram, n1, n2, v1.stderr, v2.stderr]);
        report.check(Check::relative(
            &format!("m_independence_case_{case}"),
            n1,
            n2,
            0.05,
        ));
        report.check(Check::relative(&format!("gram_agreement_m1_case_{case}"), n1, gram, 0.05));
        report.check(Check::relative(&format!("gram_agreement_m2_case_{case}"), n2, gram, 0.05));
    }
    report.table(t);
    Ok(report)
}

pub fn inner_product(config: &ExperimentConfig) -> Result<Report> {
    let space = Space::new(config.n);
    let p = KernelParams::new(config.n, config.alpha)?;
    let mut report = Report::new("inner-product", config);
    let budget = Budget::new(config.samples.max(200_000), config.seed);
    let mut rng = rng_for(config.seed, 5);

    let mut t = Table::new(
        "pairing",
        &["case", "quad_re", "quad_im", "closed_re", "closed_im", "rel_error", "stderr"],
    );
    for case in 0..config.cases.max(5) {
        let zeta = random_upoint(&space, &mut rng, 1.0);
        let omega = random_upoint(&space, &mut rng, 1.0);
        // half-order kernel vectors at the two centers
        let kz = frac_diff(&KernelCombo::new(p, vec![(Complex64::ONE, zeta.clone())])?);
        let kw = frac_diff(&KernelCombo::new(p, vec![(Complex64::ONE, omega.clone())])?);
        let quad = h2_pairing_quadrature(
            &space,
            &kz,
            &kw,
            &Budget { seed: budget.seed + case as u64, ..budget },
        )?;
        // closed form: the pairing of half-order kernels is K_alpha(omega, zeta)
        let closed = hs_kernel(&p, &omega, &zeta)?;
        let rel = (quad.value - closed).norm() / closed.norm();
        t.push(vec![
            case as f64,
            quad.value.re,
            quad.value.im,
            closed.re,
            closed.im,
            rel,
            quad.stderr,
        ]);
        report.check(Check::bound(&format!("pairing_case_{case}"), rel, 0.02));
    }
    report.table(t);
    Ok(report)
}
