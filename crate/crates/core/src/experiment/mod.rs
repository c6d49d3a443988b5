//! Config-driven commands behind the `avs` binary. Each command returns its
//! CSV (or arrivals) output as a string; the binary only does I/O.
//!
//! CSV conventions: comma separated, `.` decimal point, one header row,
//! `#` lines carry provenance. Capacities are in bit/s/Hz.

mod config;

pub use config::{
    parse_values, ExperimentConfig, GainSource, LinkSpec, SweepAxis, SweepSpec, DEFAULT_BINS,
    DEFAULT_SEED, DEFAULT_TRIALS,
};

use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::capacity::{
    capacity_upper_bound_closed_form, capacity_upper_bound_quadrature, expected_total_energy,
    siso_upper_bound, EnergyEnsemble, Receiver, SnrSpec,
};
use crate::channel::{ModelError, ScaledGaussianGainModel, TriangularAoaModel};
use crate::fitting::{bin_gain_vs_aoa, fit_gain_model_from_rays, fit_scaled_gaussian, FitError, FitResult, GainAoaPoint};
use crate::geometry::{
    order_for_ray_count, trace_image_method, ArrivalsFile, Eigenray, GeometryError, ParseError, Scenario,
};
use crate::quadrature::QuadratureError;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("config key `{key}`: {reason}")]
    Config { key: String, reason: String },
    #[error("config line {line}: {reason}")]
    ConfigSyntax { line: usize, reason: String },
    #[error("{source_name} line {line}: {reason}")]
    Csv {
        source_name: String,
        line: usize,
        reason: String,
    },
    #[error("arrivals: {0}")]
    Arrivals(#[from] ParseError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("fit: {0}")]
    Fit(#[from] FitError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("sweep point {axis} = {value}: {source}")]
    SweepPoint {
        axis: &'static str,
        value: f64,
        source: Box<ExperimentError>,
    },
    #[error(
        "Jensen dominance violated at {snr_db} dB ({receiver}): Monte Carlo {c_mc} exceeds bound {c_ub} by more than 3 x {std_error}"
    )]
    Dominance {
        receiver: &'static str,
        snr_db: f64,
        c_mc: f64,
        c_ub: f64,
        std_error: f64,
    },
}

/// Everything needed to simulate one link: the rays in use, their AoA
/// models and the Rayleigh scale map.
#[derive(Debug, Clone)]
pub struct ChannelSetup {
    pub scenario: Scenario<f64>,
    pub rays: Vec<Eigenray<f64>>,
    pub aoa_models: Vec<TriangularAoaModel<f64>>,
    pub delays: Vec<f64>,
    pub gain: ScaledGaussianGainModel<f64>,
    /// Energy fit the gain map came from, when fitted.
    pub fit: Option<FitResult<f64>>,
}

impl ChannelSetup {
    /// Traces `scenario` (raising the bounce order if `n_rays` needs it),
    /// obtains the gain map and keeps the first `n_rays` rays.
    pub fn build(
        cfg: &ExperimentConfig,
        scenario: Scenario<f64>,
        n_rays: Option<usize>,
    ) -> Result<Self, ExperimentError> {
        let mut scenario = scenario;
        if let Some(n) = n_rays {
            scenario.max_bounce_order = scenario.max_bounce_order.max(order_for_ray_count(n));
        }
        let traced = trace_image_method(&scenario)?;
        let (mut gain, fit) = match cfg.gain {
            GainSource::Explicit(m) => (m, None),
            GainSource::Fit { bins } => {
                let f = fit_gain_model_from_rays(&traced, bins)?;
                if !f.energy_fit.converged {
                    log::warn!("gain fit did not converge after {} iterations", f.energy_fit.iterations);
                }
                (f.gain_model, Some(f.energy_fit))
            }
        };
        let rays = match n_rays {
            Some(n) => crate::geometry::first_rays(&traced, n)?.to_vec(),
            None => traced,
        };
        let mut aoa_models = Vec::with_capacity(rays.len());
        for (i, r) in rays.iter().enumerate() {
            aoa_models.push(TriangularAoaModel::new(r.aoa, cfg.beta_for(i)?)?);
        }
        let delays = rays.iter().map(|r| r.delay).collect();
        if cfg.normalize_energy {
            let energy = expected_total_energy(&aoa_models, &gain);
            gain = gain.scaled(1.0 / energy)?;
        }
        Ok(Self {
            scenario,
            rays,
            aoa_models,
            delays,
            gain,
            fit,
        })
    }

    pub fn ensemble(&self, n_paths: usize, trials: usize, seed: u64) -> Result<EnergyEnsemble<f64>, ExperimentError> {
        Ok(EnergyEnsemble::simulate(
            &self.aoa_models[..n_paths],
            &self.delays[..n_paths],
            &self.gain,
            trials,
            seed,
        )?)
    }
}

fn link_snr(cfg: &ExperimentConfig, scenario: &Scenario<f64>) -> Result<SnrSpec<f64>, ExperimentError> {
    match cfg.link {
        Some(LinkSpec::SnrDb(db)) => Ok(SnrSpec::from_db(db)?),
        Some(LinkSpec::TxPower(p)) => Ok(SnrSpec::from_power(p, scenario.noise_power)?),
        None => Err(ExperimentError::Config {
            key: "link.snr_db".into(),
            reason: "link.snr_db or link.tx_power is required".into(),
        }),
    }
}

fn provenance(out: &mut String, command: &str, cfg: &ExperimentConfig) {
    let s = &cfg.scenario;
    writeln!(out, "# avs {command}").unwrap();
    writeln!(
        out,
        "# scenario range_m={} water_depth_m={} tx_depth_m={} rx_depth_m={} frequency_hz={} max_bounce_order={}",
        s.range_m, s.water_depth_m, s.tx_depth_m, s.rx_depth_m, s.frequency_hz, s.max_bounce_order
    )
    .unwrap();
}

fn rays_csv(out: &mut String, rays: &[Eigenray<f64>]) {
    out.push_str("aoa_rad,delay_s,amplitude,surface_bounces,bottom_bounces\n");
    for r in rays {
        writeln!(out, "{},{},{},{},{}", r.aoa, r.delay, r.amplitude, r.surface_bounces, r.bottom_bounces).unwrap();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceFormat {
    Csv,
    Arrivals,
}

/// Eigenrays of the configured scenario, direct path first.
pub fn cmd_trace(cfg: &ExperimentConfig, format: TraceFormat) -> Result<String, ExperimentError> {
    let rays = trace_image_method(&cfg.scenario)?;
    Ok(match format {
        TraceFormat::Arrivals => ArrivalsFile::from_eigenrays(&cfg.scenario, &rays).render(),
        TraceFormat::Csv => {
            let mut out = String::new();
            provenance(&mut out, "trace", cfg);
            rays_csv(&mut out, &rays);
            out
        }
    })
}

/// Every arrival in a BELLHOP arrivals file, one row per ray.
pub fn cmd_parse_arrivals(text: &str) -> Result<String, ExperimentError> {
    let file = ArrivalsFile::parse(text)?;
    let mut out = String::new();
    writeln!(out, "# avs parse-arrivals frequency_hz={}", file.frequency_hz).unwrap();
    out.push_str(
        "source_depth_m,receiver_depth_m,receiver_range_m,aoa_rad,delay_s,amplitude,surface_bounces,bottom_bounces\n",
    );
    for (idx, rays) in file.eigenrays() {
        for r in rays {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                file.source_depths[idx.source],
                file.receiver_depths[idx.depth],
                file.receiver_ranges[idx.range],
                r.aoa,
                r.delay,
                r.amplitude,
                r.surface_bounces,
                r.bottom_bounces
            )
            .unwrap();
        }
    }
    Ok(out)
}

/// Input to the fit command.
#[derive(Debug, Clone, Copy)]
pub enum FitInput<'a> {
    /// BELLHOP arrivals text; all receivers are pooled.
    Arrivals { name: &'a str, text: &'a str },
    /// CSV with columns `aoa_rad,gain_sq,weight`.
    Points { name: &'a str, text: &'a str },
    /// Rays traced from a config.
    Trace(&'a ExperimentConfig),
}

/// Reads a `aoa_rad,gain_sq,weight` table. A header row and `#` lines are
/// allowed.
pub fn parse_points_csv(name: &str, text: &str) -> Result<Vec<GainAoaPoint<f64>>, ExperimentError> {
    let mut points = Vec::new();
    let err = |line: usize, reason: String| ExperimentError::Csv {
        source_name: name.to_string(),
        line,
        reason,
    };
    let mut seen_header = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = l.split(',').map(str::trim).collect();
        if !seen_header && points.is_empty() && cols.first().is_some_and(|c| c.parse::<f64>().is_err()) {
            if cols != ["aoa_rad", "gain_sq", "weight"] {
                return Err(err(line, format!("expected header aoa_rad,gain_sq,weight, found `{l}`")));
            }
            seen_header = true;
            continue;
        }
        if cols.len() != 3 {
            return Err(err(line, format!("expected 3 columns, found {}", cols.len())));
        }
        let mut v = [0.0; 3];
        for (slot, c) in v.iter_mut().zip(&cols) {
            *slot = c.parse().map_err(|_| err(line, format!("cannot parse `{c}`")))?;
        }
        points.push(GainAoaPoint {
            aoa: v[0],
            gain_sq: v[1],
            weight: v[2],
        });
    }
    Ok(points)
}

/// Bins, fits and reports goodness of fit. `lambda` is the fitted
/// mean-energy peak; `rayleigh_lambda` the corresponding scale-map peak.
pub fn cmd_fit(input: FitInput<'_>, bins: usize) -> Result<String, ExperimentError> {
    let mut out = String::new();
    out.push_str("# avs fit\n");
    let points = match input {
        FitInput::Arrivals { name, text } => {
            let file = ArrivalsFile::parse(text)?;
            let rays = file.all_eigenrays();
            writeln!(out, "# input: arrivals {name} ({} rays), bins={bins}", rays.len()).unwrap();
            bin_gain_vs_aoa(&rays, bins)?
        }
        FitInput::Points { name, text } => {
            let p = parse_points_csv(name, text)?;
            writeln!(out, "# input: points {name} ({} points)", p.len()).unwrap();
            p
        }
        FitInput::Trace(cfg) => {
            let rays = trace_image_method(&cfg.scenario)?;
            let s = &cfg.scenario;
            writeln!(
                out,
                "# input: image-method trace range_m={} frequency_hz={} max_bounce_order={} ({} rays), bins={bins}",
                s.range_m,
                s.frequency_hz,
                s.max_bounce_order,
                rays.len()
            )
            .unwrap();
            bin_gain_vs_aoa(&rays, bins)?
        }
    };
    let f = fit_scaled_gaussian(&points)?;
    if !f.converged {
        writeln!(out, "# warning: fit did not converge after {} iterations", f.iterations).unwrap();
    }
    out.push_str("lambda,xi_rad,varsigma_rad,sse,r2,rmse,converged,iterations,n_points,rayleigh_lambda\n");
    writeln!(
        out,
        "{},{},{},{},{},{},{},{},{},{}",
        f.model.lambda(),
        f.model.xi(),
        f.model.varsigma(),
        f.sse,
        f.r2,
        f.rmse,
        f.converged,
        f.iterations,
        points.len(),
        crate::fitting::rayleigh_scale_from_energy_fit(&f.model)?.lambda()
    )
    .unwrap();
    Ok(out)
}

fn gain_comment(out: &mut String, setup: &ChannelSetup, cfg: &ExperimentConfig) {
    let g = &setup.gain;
    let source = match setup.fit {
        Some(f) => format!("fit r2={} converged={}", f.r2, f.converged),
        None => "explicit".into(),
    };
    writeln!(
        out,
        "# gain lambda={} xi_rad={} varsigma_rad={} ({source}); trials={} seed={}",
        g.lambda(),
        g.xi(),
        g.varsigma(),
        cfg.trials,
        cfg.seed
    )
    .unwrap();
}

/// Ergodic capacity and bounds at the configured link SNR.
pub fn cmd_capacity(cfg: &ExperimentConfig) -> Result<String, ExperimentError> {
    let setup = ChannelSetup::build(cfg, cfg.scenario, cfg.n_rays)?;
    let snr = link_snr(cfg, &setup.scenario)?;
    let ens = setup.ensemble(setup.rays.len(), cfg.trials, cfg.seed)?;
    let v = ens.capacity(snr, Receiver::VectorSensor);
    let s = ens.capacity(snr, Receiver::Scalar);
    let mut out = String::new();
    provenance(&mut out, "capacity", cfg);
    gain_comment(&mut out, &setup, cfg);
    out.push_str("snr_db,n_rays,c_mc_vector,c_mc_stderr,c_mc_siso,c_mc_siso_stderr,c_ub_closed,c_ub_quadrature,c_ub_siso\n");
    writeln!(
        out,
        "{},{},{},{},{},{},{},{},{}",
        snr.db(),
        setup.rays.len(),
        v.mean,
        v.std_error,
        s.mean,
        s.std_error,
        capacity_upper_bound_closed_form(&setup.aoa_models, &setup.gain, snr),
        capacity_upper_bound_quadrature(&setup.aoa_models, &setup.gain, snr)?,
        siso_upper_bound(&setup.aoa_models, &setup.gain, snr)
    )
    .unwrap();
    Ok(out)
}

/// One row of a sweep table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub axis_value: f64,
    pub c_mc_vector: f64,
    pub c_mc_stderr: f64,
    pub c_mc_siso: f64,
    pub c_ub_closed: f64,
    pub c_ub_quadrature: f64,
}

fn row(axis_value: f64, setup: &ChannelSetup, n: usize, ens: &EnergyEnsemble<f64>, snr: SnrSpec<f64>) -> Result<SweepRow, ExperimentError> {
    let v = ens.capacity(snr, Receiver::VectorSensor);
    let s = ens.capacity(snr, Receiver::Scalar);
    let models = &setup.aoa_models[..n];
    Ok(SweepRow {
        axis_value,
        c_mc_vector: v.mean,
        c_mc_stderr: v.std_error,
        c_mc_siso: s.mean,
        c_ub_closed: capacity_upper_bound_closed_form(models, &setup.gain, snr),
        c_ub_quadrature: capacity_upper_bound_quadrature(models, &setup.gain, snr)?,
    })
}

fn sweep_spec(cfg: &ExperimentConfig) -> Result<&SweepSpec, ExperimentError> {
    cfg.sweep.as_ref().ok_or_else(|| ExperimentError::Config {
        key: "sweep.axis".into(),
        reason: "required for sweep and compare".into(),
    })
}

fn at_point<T>(axis: SweepAxis, value: f64, r: Result<T, ExperimentError>) -> Result<T, ExperimentError> {
    r.map_err(|e| ExperimentError::SweepPoint {
        axis: axis.column(),
        value,
        source: Box::new(e),
    })
}

/// Rows of the configured sweep, in sweep order.
///
/// SNR and ray-count sweeps reuse one channel setup (and, for SNR, one
/// ensemble); range and frequency sweeps re-trace and re-fit at every point
/// and run the points in parallel. All points share the seed.
pub fn sweep_rows(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>, ExperimentError> {
    let spec = sweep_spec(cfg)?;
    let axis = spec.axis;
    match axis {
        SweepAxis::SnrDb => {
            let setup = ChannelSetup::build(cfg, cfg.scenario, cfg.n_rays)?;
            let n = setup.rays.len();
            let ens = setup.ensemble(n, cfg.trials, cfg.seed)?;
            spec.values
                .iter()
                .map(|&db| at_point(axis, db, SnrSpec::from_db(db).map_err(Into::into).and_then(|snr| row(db, &setup, n, &ens, snr))))
                .collect()
        }
        SweepAxis::NRays => {
            let max_n = *spec.values.last().expect("non-empty") as usize;
            let setup = ChannelSetup::build(cfg, cfg.scenario, Some(max_n))?;
            let snr = link_snr(cfg, &setup.scenario)?;
            spec.values
                .par_iter()
                .map(|&v| {
                    let n = v as usize;
                    at_point(axis, v, setup.ensemble(n, cfg.trials, cfg.seed).and_then(|ens| row(v, &setup, n, &ens, snr)))
                })
                .collect()
        }
        SweepAxis::RangeM | SweepAxis::FrequencyHz => spec
            .values
            .par_iter()
            .map(|&v| {
                let mut scenario = cfg.scenario;
                if axis == SweepAxis::RangeM {
                    scenario.range_m = v;
                } else {
                    scenario.frequency_hz = v;
                }
                at_point(
                    axis,
                    v,
                    ChannelSetup::build(cfg, scenario, cfg.n_rays).and_then(|setup| {
                        let snr = link_snr(cfg, &setup.scenario)?;
                        let n = setup.rays.len();
                        let ens = setup.ensemble(n, cfg.trials, cfg.seed)?;
                        row(v, &setup, n, &ens, snr)
                    }),
                )
            })
            .collect(),
    }
}

pub fn cmd_sweep(cfg: &ExperimentConfig) -> Result<String, ExperimentError> {
    let spec = sweep_spec(cfg)?;
    let rows = sweep_rows(cfg)?;
    let mut out = String::new();
    provenance(&mut out, "sweep", cfg);
    writeln!(out, "# trials={} seed={}", cfg.trials, cfg.seed).unwrap();
    writeln!(out, "{},c_mc_vector,c_mc_stderr,c_mc_siso,c_ub_closed,c_ub_quadrature", spec.axis.column()).unwrap();
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.axis_value, r.c_mc_vector, r.c_mc_stderr, r.c_mc_siso, r.c_ub_closed, r.c_ub_quadrature
        )
        .unwrap();
    }
    Ok(out)
}

/// Vector sensor against pressure-only receiver and both Jensen bounds,
/// over the `snr_db` sweep. Fails if a Monte Carlo estimate exceeds its
/// bound by more than three standard errors.
pub fn cmd_compare(cfg: &ExperimentConfig) -> Result<String, ExperimentError> {
    let spec = sweep_spec(cfg)?;
    if spec.axis != SweepAxis::SnrDb {
        return Err(ExperimentError::Config {
            key: "sweep.axis".into(),
            reason: "compare needs sweep.axis = snr_db".into(),
        });
    }
    let setup = ChannelSetup::build(cfg, cfg.scenario, cfg.n_rays)?;
    let ens = setup.ensemble(setup.rays.len(), cfg.trials, cfg.seed)?;
    let mut out = String::new();
    provenance(&mut out, "compare", cfg);
    gain_comment(&mut out, &setup, cfg);
    out.push_str("snr_db,c_mc_vector,c_mc_vector_stderr,c_mc_siso,c_mc_siso_stderr,c_ub_vector,c_ub_siso,vector_minus_siso\n");
    for &db in &spec.values {
        let snr = SnrSpec::from_db(db)?;
        let v = ens.capacity(snr, Receiver::VectorSensor);
        let s = ens.capacity(snr, Receiver::Scalar);
        let ub_v = capacity_upper_bound_closed_form(&setup.aoa_models, &setup.gain, snr);
        let ub_s = siso_upper_bound(&setup.aoa_models, &setup.gain, snr);
        for (receiver, est, ub) in [("vector", v, ub_v), ("siso", s, ub_s)] {
            if est.mean > ub + 3.0 * est.std_error {
                return Err(ExperimentError::Dominance {
                    receiver,
                    snr_db: db,
                    c_mc: est.mean,
                    c_ub: ub,
                    std_error: est.std_error,
                });
            }
        }
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            db,
            v.mean,
            v.std_error,
            s.mean,
            s.std_error,
            ub_v,
            ub_s,
            v.mean - s.mean
        )
        .unwrap();
    }
    Ok(out)
}
