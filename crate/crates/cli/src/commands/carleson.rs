//! `subcap` (tent masses against capacities), `carleson` (eigenvalue lower
//! bounds on the embedding constant), and `main-theorem` (both pipelines
//! side by side under radius scaling, plus the necessity probe).

use num_complex::Complex64;
use rand::Rng;

use hncap_core::carleson::{
    carleson_quotient, gram_matrix, mass_matrix, necessity_check, subcap_ratio, tent_contains,
    HermitianSystem, TentMode,
};
use hncap_core::geometry::{Ball, BallFamily, HPoint, Space, UPoint};
use hncap_core::kernels::KernelParams;
use hncap_core::potential::AtomicMeasure;
use hncap_core::Result;

use crate::config::ExperimentConfig;
use crate::report::{Check, Report, Table};

use super::rng_for;

/// A disjoint two-ball family with atoms above the centers and kernel
/// centers in the tents; everything scales exactly under dilation.
struct Configuration {
    family: BallFamily,
    mu: AtomicMeasure,
    centers: Vec<UPoint>,
}

fn build_configuration(seed: u64, case: u64) -> Result<Configuration> {
    let mut rng = rng_for(seed, 61 + case);
    let sep = rng.random_range(5.0..8.0);
    let r1 = rng.random_range(0.7..1.3);
    let r2 = rng.random_range(0.7..1.3);
    let c1 = HPoint::new(vec![Complex64::new(-sep / 2.0, rng.random_range(-1.0..1.0))], 0.0);
    let c2 = HPoint::new(vec![Complex64::new(sep / 2.0, rng.random_range(-1.0..1.0))], 0.0);
    let family = BallFamily::new(vec![
        Ball { center: c1.clone(), r: r1 },
        Ball { center: c2.clone(), r: r2 },
    ]);
    let mut atoms = Vec::new();
    let mut centers = Vec::new();
    for (c, r) in [(c1, r1), (c2, r2)] {
        for k in 0..3 {
            let frac = 0.05 + 0.08 * k as f64;
            let u = UPoint::new(c.clone(), frac * r * r);
            atoms.push((u.clone(), rng.random_range(0.2..1.0)));
            if k < 2 {
                centers.push(u);
            }
        }
    }
    Ok(Configuration { family, mu: AtomicMeasure::new(atoms)?, centers })
}

fn scaled(space: &Space, cfg: &Configuration, s: f64) -> Configuration {
    Configuration {
        family: cfg.family.dilate(space, s),
        mu: cfg.mu.dilate(space, s),
        centers: cfg.centers.iter().map(|u| space.dilate(s, u)).collect(),
    }
}

fn carleson_constant(p: &KernelParams, cfg: &Configuration) -> Result<f64> {
    let g = gram_matrix(p, &cfg.centers)?;
    let m = mass_matrix(p, &cfg.centers, &cfg.mu)?;
    carleson_quotient(&HermitianSystem { g, m })
}

pub fn subcap(config: &ExperimentConfig) -> Result<Report> {
    let space = Space::new(config.n);
    let p = KernelParams::main_theorem(config.n, config.alpha)?;
    let mut report = Report::new("subcap", config);
    let spec = config.grid.to_spec();
    let opts = config.solver.to_options();

    let cfg = build_configuration(config.seed, 0)?;
    let mut t = Table::new("scaling", &["scale", "subcap_ratio", "tent_mode_disagreements"]);
    let mut log_pairs = Vec::new();
    for &s in &config.scales {
        let sc = scaled(&space, &cfg, s);
        let ratio = subcap_ratio(&p, &space, &sc.mu, &sc.family, &spec, &opts, TentMode::Metric)?;
        // log disagreement between the two tent membership modes
        let mut disagreements = 0u64;
        for (u, _) in &sc.mu.atoms {
            let a = tent_contains(&space, &sc.family, u, TentMode::Metric)?;
            let b = tent_contains(
                &space,
                &sc.family,
                u,
                TentMode::Sampled { samples: 200, seed: config.seed },
            )?;
            if a != b {
                disagreements += 1;
            }
        }
        t.push(vec![s, ratio, disagreements as f64]);
        log_pairs.push((s.ln(), ratio.ln()));
        report.check(Check::positive(&format!("subcap_ratio_scale_{s}"), ratio));
    }
    report.table(t);

    // the ratio scales like r^{-(2n+2-4alpha)}
    if log_pairs.len() >= 2 {
        let slope = fit_slope(&log_pairs);
        let expected = -(2.0 * config.n as f64 + 2.0 - 4.0 * config.alpha);
        report.check(Check::relative("scaling_exponent", slope, expected, 0.10));
    }
    Ok(report)
}

pub fn carleson(config: &ExperimentConfig) -> Result<Report> {
    let _space = Space::new(config.n);
    let p = KernelParams::main_theorem(config.n, config.alpha)?;
    let mut report = Report::new("carleson", config);

    let cfg = build_configuration(config.seed, 0)?;
    // nested center families: the quotient is nondecreasing in the span
    let mut t = Table::new("nested_quotients", &["centers", "quotient"]);
    let mut prev = 0.0;
    let mut monotone = true;
    for k in 1..=cfg.centers.len() {
        let g = gram_matrix(&p, &cfg.centers[..k])?;
        let m = mass_matrix(&p, &cfg.centers[..k], &cfg.mu)?;
        let q = carleson_quotient(&HermitianSystem { g, m })?;
        monotone &= q >= prev - 1e-10;
        t.push(vec![k as f64, q]);
        prev = q;
    }
    report.table(t);
    report.check(Check::bound("nested_monotonicity_violations", if monotone { 0.0 } else { 1.0 }, 0.0));
    report.check(Check::positive("quotient", prev));
    Ok(report)
}

pub fn main_theorem(config: &ExperimentConfig) -> Result<Report> {
    let space = Space::new(config.n);
    let p = KernelParams::main_theorem(config.n, config.alpha)?;
    let mut report = Report::new("main-theorem", config);
    let spec = config.grid.to_spec();
    let opts = config.solver.to_options();

    let mut t = Table::new(
        "two_pipelines",
        &["configuration", "scale", "carleson_lower", "subcap_constant", "ratio"],
    );
    let mut nt = Table::new(
        "necessity",
        &["configuration", "scale", "min_re_f", "norm_sq_over_cap", "tent_samples"],
    );
    for case in 0..config.cases.max(5) as u64 {
        let cfg = build_configuration(config.seed, case)?;
        let mut logs_c = Vec::new();
        let mut logs_s = Vec::new();
        let mut necessity_mins = Vec::new();
        for &s in &config.scales {
            let sc = scaled(&space, &cfg, s);
            let carl = carleson_constant(&p, &sc)?;
            let sub = subcap_ratio(
                &p,
                &space,
                &sc.mu,
                &sc.family,
                &spec,
                &opts,
                TentMode::Metric,
            )?;
            let ratio = carl / sub;
            t.push(vec![case as f64, s, carl, sub, ratio]);
            logs_c.push((s.ln(), carl.ln()));
            logs_s.push((s.ln(), sub.ln()));
            report.check(Check::bound(
                &format!("comparable_case_{case}_scale_{s}"),
                ratio.log10().abs(),
                1.0,
            ));

            let nec = necessity_check(&p, &space, &sc.family, &spec, &opts, 300, config.seed)?;
            match nec.min_re {
                Some(m) => {
                    nt.push(vec![case as f64, s, m, nec.norm_ratio, nec.samples as f64]);
                    report.check(Check::positive(
                        &format!("necessity_min_re_case_{case}_scale_{s}"),
                        m,
                    ));
                    necessity_mins.push(m);
                }
                None => nt.push(vec![case as f64, s, f64::NAN, nec.norm_ratio, 0.0]),
            }
        }
        // both constants scale together: log-log slopes agree within 30%
        let slope_c = fit_slope(&logs_c);
        let slope_s = fit_slope(&logs_s);
        report.check(Check::relative(
            &format!("slopes_agree_case_{case}"),
            slope_c,
            slope_s,
            0.30,
        ));
        // scale-freeness of the necessity bound
        if necessity_mins.len() >= 2 {
            let first = necessity_mins[0];
            let last = necessity_mins[necessity_mins.len() - 1];
            report.check(Check::relative(
                &format!("necessity_scale_free_case_{case}"),
                last,
                first,
                0.30,
            ));
        }
    }
    report.table(t);
    report.table(nt);
    Ok(report)
}

fn fit_slope(pairs: &[(f64, f64)]) -> f64 {
    let n = pairs.len() as f64;
    let sx: f64 = pairs.iter().map(|p| p.0).sum();
    let sy: f64 = pairs.iter().map(|p| p.1).sum();
    let sxx: f64 = pairs.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pairs.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}
