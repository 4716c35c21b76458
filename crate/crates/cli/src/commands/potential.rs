//! `conv-identity` (the convolution of the Riesz kernel with itself),
//! `a1` (Muckenhoupt-type ratios of kernel ball averages), and `maximal`
//! (admissible maximal function dominated by the Hardy–Littlewood one).

use rand::Rng;

use hncap_core::geometry::{HPoint, Space, UPoint};
use hncap_core::kernels::KernelParams;
use hncap_core::potential::{
    a1_ratio, admissible_max, conv_ratio, hardy_littlewood_max, poisson_extension_riemann,
    AdmissibleSampling, Grid, GridDensity,
};
use hncap_core::quadrature::Budget;
use hncap_core::Result;

use crate::config::ExperimentConfig;
use crate::report::{Check, Report, Table};

use super::{random_hpoint, rng_for};

pub fn conv_identity(config: &ExperimentConfig) -> Result<Report> {
    let space = Space::new(config.n);
    let p = KernelParams::main_theorem(config.n, config.alpha)?;
    let mut report = Report::new("conv-identity", config);
    let x = space.identity();

    let mut t = Table::new("conv_ratio", &["distance", "ratio", "stderr"]);
    let mut ratios = Vec::new();
    for (i, &d) in config.distances.iter().enumerate() {
        let u = HPoint::new(
            vec![num_complex::Complex64::new(2.0 * d, 0.0); 1],
            0.0,
        );
        let budget = Budget::new(config.samples.max(100_000), config.seed + i as u64);
        let est = conv_ratio(&p, &space, &x, &u, &budget)?;
        t.push(vec![d, est.value, est.stderr]);
        ratios.push(est);
        report.check(Check::positive(&format!("ratio_finite_d_{d}"), est.value));
    }
    report.table(t);

    let mean = ratios.iter().map(|e| e.value).sum::<f64>() / ratios.len() as f64;
    let spread = ratios
        .iter()
        .map(|e| (e.value - mean).abs())
        .fold(0.0, f64::max)
        / mean;
    report.check(Check::bound("ratio_spread", spread, 0.05));
    // each deviation explained by its own error bar (3 sigma slack)
    for (i, e) in ratios.iter().enumerate() {
        let sigma = e.stderr.max(1e-12);
        report.check(Check::bound(
            &format!("ratio_within_stderr_{i}"),
            (e.value - mean).abs() / (3.0 * sigma + 0.05 * mean),
            1.0,
        ));
    }
    Ok(report)
}

pub fn a1(config: &ExperimentConfig) -> Result<Report> {
    let space = Space::new(config.n);
    let p = KernelParams::new(config.n, config.alpha)?;
    let mut report = Report::new("a1", config);
    let radii: Vec<f64> = (0..16).map(|k| 2f64.powi(k - 8)).collect();
    let pairs = 100usize;

    let run = |budget_samples: u64| -> Result<(f64, Vec<f64>)> {
        let mut rng = rng_for(config.seed, 21);
        let mut max_ratio: f64 = 0.0;
        let mut per_pair = Vec::with_capacity(pairs);
        for i in 0..pairs {
            let x = random_hpoint(&space, &mut rng, 2.0);
            let mut u = random_hpoint(&space, &mut rng, 2.0);
            while space.dist_boundary(&x, &u)? < 1e-3 {
                u = random_hpoint(&space, &mut rng, 2.0);
            }
            let r = a1_ratio(
                &p,
                &space,
                &x,
                &u,
                &radii,
                &Budget::new(budget_samples, config.seed + i as u64),
            )?;
            per_pair.push(r);
            max_ratio = max_ratio.max(r);
        }
        Ok((max_ratio, per_pair))
    };

    let base = config.samples.max(32_000);
    let (max1, per_pair) = run(base)?;
    let (max2, _) = run(base * 2)?;

    let mut t = Table::new("a1_ratios", &["pair", "ratio"]);
    for (i, r) in per_pair.iter().enumerate() {
        t.push(vec![i as f64, *r]);
    }
    report.table(t);
    let mut s = Table::new("a1_stability", &["budget", "empirical_max"]);
    s.push(vec![base as f64, max1]);
    s.push(vec![2.0 * base as f64, max2]);
    report.table(s);

    report.check(Check::positive("empirical_max_finite", max1));
    report.check(Check::relative("stability_under_doubling", max2, max1, 0.10));
    Ok(report)
}

/// A smooth bump density on a boundary grid around `center`.
fn bump_density(space: &Space, center: &HPoint, width: f64, grid_nodes: usize) -> GridDensity {
    let (lo, hi) = space.ball_bounding_box(center, 4.0 * width);
    let grid = Grid::from_box(space.n(), lo, hi, grid_nodes);
    GridDensity::from_fn(&grid, |x| {
        let d = space.dist_boundary(x, center).expect("dims");
        (-(d * d) / (width * width)).exp()
    })
}

pub fn maximal(config: &ExperimentConfig) -> Result<Report> {
    let space = Space::new(config.n);
    let mut report = Report::new("maximal", config);
    let cases = config.cases.max(20);
    // half-octave radius schedule over [2^-8, 2^8]; the refined run uses
    // quarter-octave steps over the same range
    let radii: Vec<f64> = (0..=32).map(|k| 2f64.powf(0.5 * k as f64 - 8.0)).collect();

    let run = |layers: usize, per_layer: usize, radii: &[f64]| -> Result<(f64, Table)> {
        let mut rng = rng_for(config.seed, 31);
        let mut table = Table::new(
            "domination",
            &["case", "gamma", "admissible_max", "hl_max", "ratio"],
        );
        let mut worst: f64 = 0.0;
        for case in 0..cases {
            let center = random_hpoint(&space, &mut rng, 1.0);
            let width = rng.random_range(0.4..1.2);
            let f = bump_density(&space, &center, width, 12);
            // probe at a boundary point near the bump
            let omega = space.translate_boundary(
                &center,
                &random_hpoint(&space, &mut rng, 0.5 * width),
            )?;
            let gamma = config.gammas[case % config.gammas.len()];
            let sampling = AdmissibleSampling {
                h_max: 4.0 * width * width,
                layers,
                per_layer,
                seed: config.seed + case as u64,
            };
            let adm = admissible_max(
                &space,
                |u: &UPoint| poisson_extension_riemann(&space, &f, u),
                &omega,
                gamma,
                &sampling,
            )?;
            let hl = hardy_littlewood_max(&space, &f, &omega, radii)?;
            let ratio = adm / hl;
            worst = worst.max(ratio);
            table.push(vec![case as f64, gamma, adm, hl, ratio]);
        }
        Ok((worst, table))
    };

    let (c_emp, table) = run(20, 96, &radii)?;
    let dense: Vec<f64> = (0..=64).map(|k| 2f64.powf(0.25 * k as f64 - 8.0)).collect();
    let (c_emp_fine, _) = run(28, 192, &dense)?;

    report.table(table);
    let mut s = Table::new("constant", &["refinement", "empirical_C"]);
    s.push(vec![0.0, c_emp]);
    s.push(vec![1.0, c_emp_fine]);
    report.table(s);

    report.check(Check::positive("empirical_C_finite", c_emp));
    report.check(Check::relative("stability_under_refinement", c_emp_fine, c_emp, 0.20));
    Ok(report)
}
