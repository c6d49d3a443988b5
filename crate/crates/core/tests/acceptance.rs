//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use avs_channel::capacity::{
    capacity_upper_bound_closed_form, expected_total_energy, per_path_closed_form, per_path_expected_energy,
    vector_capacity_from_energies, vector_capacity_from_pressure, EnergyEnsemble, Receiver,
    SnrSpec,
};
use avs_channel::channel::{
    sample_channel, AoaDistribution, ScaledGaussianGainModel, TriangularAoaModel, TruncatedAoaModel, TruncatedKind,
};
use avs_channel::experiment::{sweep_rows, ExperimentConfig};
use avs_channel::fitting::{fit_scaled_gaussian, GainAoaPoint};
use avs_channel::geometry::{trace_image_method, ArrivalsFile, ParseErrorKind, Scenario};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn fixture(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect()
}

fn energy_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let n = rng.random_range(1..=18);
        let gain = ScaledGaussianGainModel::new(
            10f64.powf(rng.random_range(-6.0..1.0)),
            rng.random_range(-0.3..0.3),
            rng.random_range(0.05..1.0),
        )
        .unwrap();
        let aoa: Vec<_> = (0..n)
            .map(|_| TriangularAoaModel::new(rng.random_range(-1.3..1.3), rng.random_range(0.0..0.2)).unwrap())
            .collect();
        let delays: Vec<f64> = (0..n).map(|i| 0.6 + 0.01 * i as f64).collect();
        let ch = sample_channel(&aoa, &delays, &gain, &mut rng).map_err(|e| e.to_string())?;
        let e = ch.component_energies();
        if e.pressure == 0.0 {
            continue;
        }
        let lhs = e.pressure + 2.0 * e.range + 2.0 * e.depth;
        worst = worst.max(rel(lhs, 3.0 * e.pressure));
        let snr = SnrSpec::from_db(rng.random_range(-10.0..40.0)).unwrap();
        let a = vector_capacity_from_energies(&e, snr);
        let b = vector_capacity_from_pressure(e.pressure, snr);
        if a > 0.0 {
            worst = worst.max(rel(a, b));
        }
    }
    ensure(worst <= 1e-12, || format!("worst relative deviation {worst:e}"))?;
    Ok(format!("worst relative deviation {worst:e} over 10^4 realizations"))
}

fn closed_form_vs_quadrature() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let gain = ScaledGaussianGainModel::new(
            10f64.powf(rng.random_range(-8.0..1.0)),
            rng.random_range(-0.4..0.4),
            rng.random_range(0.05..1.5),
        )
        .unwrap();
        let aoa = TriangularAoaModel::new(rng.random_range(-1.0..1.0), rng.random_range(0.001..0.4)).unwrap();
        let c = per_path_closed_form(&gain, &aoa);
        let q = per_path_expected_energy(&gain, &aoa).map_err(|e| e.to_string())?;
        worst = worst.max(rel(c, q));
    }
    ensure(worst <= 1e-9, || format!("worst relative error {worst:e}"))?;
    let doc: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "docs", "closed_form.md"].iter().collect();
    let text = std::fs::read_to_string(&doc).map_err(|e| format!("{}: {e}", doc.display()))?;
    ensure(text.contains("Corrected expression"), || "closed-form correction not documented".into())?;
    Ok(format!("worst relative error {worst:e} over 100 draws"))
}

fn spread_channel(n: usize, beta: f64) -> (Vec<TriangularAoaModel<f64>>, Vec<f64>) {
    let aoa = (0..n)
        .map(|i| {
            let t = if n == 1 { 0.05 } else { -0.6 + 1.2 * i as f64 / (n - 1) as f64 };
            TriangularAoaModel::new(t, beta).unwrap()
        })
        .collect();
    let delays = (0..n).map(|i| 0.66 + 0.005 * i as f64).collect();
    (aoa, delays)
}

fn jensen_grid() -> Outcome {
    let gain = ScaledGaussianGainModel::new(0.5, 0.05, 0.35).unwrap();
    let mut cells = 0;
    let mut tightest = f64::INFINITY;
    for n in [1, 5, 15] {
        let (aoa, delays) = spread_channel(n, 0.05);
        let ens = EnergyEnsemble::simulate(&aoa, &delays, &gain, 100_000, 303 + n as u64).map_err(|e| e.to_string())?;
        for db in [-10.0, 0.0, 10.0, 20.0, 30.0] {
            let snr = SnrSpec::from_db(db).unwrap();
            let mc = ens.capacity(snr, Receiver::VectorSensor);
            let ub = capacity_upper_bound_closed_form(&aoa, &gain, snr);
            let slack = ub + 3.0 * mc.std_error - mc.mean;
            tightest = tightest.min(slack);
            ensure(slack >= 0.0, || format!("N={n} {db} dB: C_MC={} > C_UB={} + 3*{}", mc.mean, ub, mc.std_error))?;
            cells += 1;
        }
    }
    Ok(format!("{cells} cells, smallest margin {tightest:.4} bit/s/Hz"))
}

fn high_snr_gain() -> Outcome {
    let gain = ScaledGaussianGainModel::new(0.5, 0.05, 0.35).unwrap();
    let (aoa, delays) = spread_channel(15, 0.05);
    let gain = gain.scaled(1.0 / expected_total_energy(&aoa, &gain)).unwrap();
    let ens = EnergyEnsemble::simulate(&aoa, &delays, &gain, 100_000, 404).map_err(|e| e.to_string())?;
    let snr = SnrSpec::from_db(40.0).unwrap();
    let gap = ens.capacity(snr, Receiver::VectorSensor).mean - ens.capacity(snr, Receiver::Scalar).mean;
    let target = 3f64.log2();
    ensure((gap - target).abs() <= 0.02, || format!("gap {gap} vs log2(3) = {target}"))?;
    Ok(format!("gap {gap:.5} vs log2(3) = {target:.5}"))
}

/// Upper 0.1% point of χ² with 19 degrees of freedom.
const CHI2_19_999: f64 = 43.820_195_964_517_53;

fn chi_square<A: AoaDistribution<f64>>(model: &A, seed: u64) -> Result<f64, String> {
    let (lo, hi) = model.support();
    let bins = 20;
    let width = (hi - lo) / bins as f64;
    let draws = 100_000;
    let mut counts = vec![0usize; bins];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..draws {
        let g = model.sample(&mut rng);
        let i = (((g - lo) / width).floor() as usize).min(bins - 1);
        counts[i] += 1;
    }
    let mut stat = 0.0;
    for (i, &c) in counts.iter().enumerate() {
        let a = lo + width * i as f64;
        let p = model.probability(a, a + width).map_err(|e| e.to_string())?;
        let expected = p * draws as f64;
        stat += (c as f64 - expected).powi(2) / expected;
    }
    Ok(stat)
}

fn sampler_fidelity() -> Outcome {
    let mut report = Vec::new();
    let tri = TriangularAoaModel::new(0.1, 0.2).unwrap();
    let s = chi_square(&tri, 505)?;
    ensure(s < CHI2_19_999, || format!("triangular chi2 = {s:.2}"))?;
    report.push(format!("triangular chi2 {s:.2}"));
    for (kind, sigma) in [(TruncatedKind::Gaussian, 0.4), (TruncatedKind::Laplacian, 0.4)] {
        let m = TruncatedAoaModel::new(kind, 0.1, sigma).unwrap();
        let s = chi_square(&m, 506)?;
        ensure(s < CHI2_19_999, || format!("{kind:?} chi2 = {s:.2}"))?;
        report.push(format!("{kind:?} chi2 {s:.2}"));
    }
    let gain = ScaledGaussianGainModel::new(2.0f64, 0.1, 0.3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(507);
    for gamma in [-0.4, 0.0, 0.1, 0.5] {
        let n = 100_000;
        let e: Vec<f64> = (0..n).map(|_| gain.sample_path_gain(gamma, &mut rng).powi(2)).collect();
        let mean = e.iter().sum::<f64>() / n as f64;
        let var = e.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();
        let target = 2.0 * gain.sigma_squared(gamma);
        ensure((mean - target).abs() <= 3.0 * se, || {
            format!("gamma={gamma}: mean h^2 {mean} vs {target} +- {se}")
        })?;
    }
    report.push("Rayleigh E[h^2] within 3 SE at 4 angles".into());
    Ok(format!("{} (critical {CHI2_19_999:.2})", report.join(", ")))
}

fn fit_recovery() -> Outcome {
    let truth = ScaledGaussianGainModel::new(1e-3, 0.02, 0.25).unwrap();
    let aoas: Vec<f64> = (0..50).map(|i| -0.6 + 1.2 * i as f64 / 49.0).collect();
    let clean: Vec<_> = aoas
        .iter()
        .map(|&a| GainAoaPoint { aoa: a, gain_sq: truth.sigma_squared(a), weight: 1.0 })
        .collect();
    let f = fit_scaled_gaussian(&clean).map_err(|e| e.to_string())?;
    let worst_clean = rel(f.model.lambda(), 1e-3)
        .max(rel(f.model.xi(), 0.02))
        .max(rel(f.model.varsigma(), 0.25));
    ensure(worst_clean <= 1e-8 && f.converged, || format!("noiseless relative error {worst_clean:e}"))?;

    let (mut err_lambda, mut err_xi, mut err_varsigma): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut min_r2 = f64::INFINITY;
    for seed in 0..100 {
        let mut rng = ChaCha8Rng::seed_from_u64(600 + seed);
        let noisy: Vec<_> = clean
            .iter()
            .map(|p| {
                let z: f64 = StandardNormal.sample(&mut rng);
                GainAoaPoint { gain_sq: p.gain_sq * (1.0 + 0.05 * z), ..*p }
            })
            .collect();
        let f = fit_scaled_gaussian(&noisy).map_err(|e| e.to_string())?;
        err_lambda = err_lambda.max(rel(f.model.lambda(), 1e-3));
        err_xi = err_xi.max(rel(f.model.xi(), 0.02));
        err_varsigma = err_varsigma.max(rel(f.model.varsigma(), 0.25));
        min_r2 = min_r2.min(f.r2);
    }
    let detail = format!(
        "noiseless {worst_clean:.1e}; 5% noise over 100 seeds: worst relative error lambda {:.1}%, xi {:.1}% \
         ({:.4} rad), varsigma {:.1}%; min R2 {min_r2:.4}",
        100.0 * err_lambda,
        100.0 * err_xi,
        err_xi * 0.02,
        100.0 * err_varsigma
    );
    ensure(err_lambda.max(err_xi).max(err_varsigma) <= 0.1 && min_r2 >= 0.93, || detail.clone())?;
    Ok(detail)
}

fn trend_config(axis: &str, values: &str) -> ExperimentConfig {
    ExperimentConfig::parse(&format!(
        "channel.beta_rad = 0.01\ngain.source = fit\nlink.tx_power = 1\nmc.trials = 100000\nmc.seed = 11\n\
         sweep.axis = {axis}\nsweep.values = {values}\n"
    ))
    .unwrap()
}

fn trends() -> Outcome {
    let nonincreasing = |name: &str, values: &str| -> Result<Vec<f64>, String> {
        let rows = sweep_rows(&trend_config(name, values)).map_err(|e| e.to_string())?;
        let c: Vec<f64> = rows.iter().map(|r| r.c_mc_vector).collect();
        for w in rows.windows(2) {
            ensure(w[1].c_mc_vector <= w[0].c_mc_vector && w[1].c_ub_closed <= w[0].c_ub_closed, || {
                format!("{name}: capacity rises from {:?} to {:?}", w[0], w[1])
            })?;
        }
        Ok(c)
    };
    let f = nonincreasing("frequency_hz", "5000, 12000, 22000")?;
    let r = nonincreasing("range_m", "1000, 5000, 9000")?;

    let rows = sweep_rows(&trend_config("n_rays", "1:1:18")).map_err(|e| e.to_string())?;
    let c: Vec<f64> = rows.iter().map(|r| r.c_mc_vector).collect();
    let inc: Vec<f64> = c.windows(2).map(|w| w[1] - w[0]).collect();
    ensure(inc.iter().all(|&d| d >= 0.0), || format!("n_rays: capacity decreases somewhere: {c:?}"))?;
    let (early, late) = inc.split_at(inc.len() / 2);
    let early_gain: f64 = early.iter().sum();
    let late_gain: f64 = late.iter().sum();
    let last = *inc.last().unwrap();
    let total = c.last().unwrap() - c[0];
    ensure(late_gain < early_gain && last <= 1e-3 * total, || {
        format!("n_rays: no flattening, early {early_gain}, late {late_gain}, last {last}")
    })?;
    Ok(format!(
        "frequency {:.3}>={:.3}>={:.3}; range {:.3}>={:.3}>={:.3}; n_rays {:.3}->{:.3} (gain rays 2-10 {early_gain:.3}, rays 11-18 {late_gain:.1e})",
        f[0], f[1], f[2], r[0], r[1], r[2], c[0], c[17]
    ))
}

fn tracer_geometry() -> Outcome {
    let s = Scenario::<f64>::shallow_water_reference();
    let rays = trace_image_method(&s).map_err(|e| e.to_string())?;
    let expected = (1000.0f64.powi(2) + 20.0f64.powi(2)).sqrt() / 1520.0;
    let err = rel(rays[0].delay, expected);
    ensure(err <= 1e-12, || format!("LoS delay {} vs {expected}", rays[0].delay))?;
    for k in 0..=10 {
        let mut t = s;
        t.max_bounce_order = k;
        let n = trace_image_method(&t).map_err(|e| e.to_string())?.len();
        ensure(n == 1 + 2 * k, || format!("order {k}: {n} rays"))?;
    }
    Ok(format!("LoS delay {:.9} s (rel. error {err:.1e}); 1+2K rays for K=0..10", rays[0].delay))
}

fn arrivals_parser() -> Outcome {
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0);
    for name in ["minimal.arr", "three_arrivals.arr"] {
        let text = std::fs::read_to_string(fixture(name)).map_err(|e| e.to_string())?;
        let x = ArrivalsFile::parse(&text).map_err(|e| format!("{name}: {e}"))?;
        let y = ArrivalsFile::parse(&x.render()).map_err(|e| format!("{name} rendered: {e}"))?;
        let ok = close(x.frequency_hz, y.frequency_hz)
            && x.sources.len() == y.sources.len()
            && x.all_eigenrays().len() == y.all_eigenrays().len()
            && x.all_eigenrays().iter().zip(y.all_eigenrays()).all(|(a, b)| {
                close(a.aoa, b.aoa) && close(a.delay, b.delay) && close(a.amplitude, b.amplitude)
                    && (a.surface_bounces, a.bottom_bounces) == (b.surface_bounces, b.bottom_bounces)
            });
        ensure(ok && x == y, || format!("{name}: round trip differs"))?;
    }
    let cases = [
        ("malformed_header.arr", 1),
        ("malformed_count.arr", 8),
        ("malformed_number.arr", 8),
        ("malformed_trailing.arr", 9),
        ("malformed_truncated.arr", 4),
    ];
    for (name, line) in cases {
        let text = std::fs::read_to_string(fixture(name)).map_err(|e| e.to_string())?;
        match ArrivalsFile::parse(&text) {
            Ok(_) => return Err(format!("{name}: parsed without error")),
            Err(e) => {
                ensure(e.line == line, || format!("{name}: error on line {} ({e}), expected {line}", e.line))?;
                if name == "malformed_count.arr" {
                    ensure(matches!(e.kind, ParseErrorKind::CountMismatch { .. }), || e.to_string())?;
                }
            }
        }
    }
    Ok("2 fixtures round-trip; 5 malformed fixtures rejected with line numbers".into())
}

fn main() -> ExitCode {
    type Criterion = (&'static str, Duration, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        ("energy identity", Duration::from_secs(5), energy_identity),
        ("closed form vs quadrature", Duration::from_secs(10), closed_form_vs_quadrature),
        ("Jensen dominance", Duration::from_secs(120), jensen_grid),
        ("high-SNR vector gain", Duration::from_secs(30), high_snr_gain),
        ("sampler fidelity", Duration::from_secs(60), sampler_fidelity),
        ("fit recovery", Duration::from_secs(10), fit_recovery),
        ("trend reproduction", Duration::from_secs(120), trends),
        ("tracer geometry", Duration::from_secs(10), tracer_geometry),
        ("arrivals parser", Duration::from_secs(10), arrivals_parser),
    ];
    let mut failed = 0;
    for (name, limit, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} [{:.2?}]", elapsed),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why} [{:.2?}]", elapsed);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
