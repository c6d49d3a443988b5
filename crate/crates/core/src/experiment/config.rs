//! Flat `key = value` experiment configs with dotted section names.
//!
//! ```text
//! # comment
//! scenario.range_m = 1000
//! channel.beta_rad = 0.01
//! gain.source = fit
//! link.snr_db = 10
//! sweep.axis = snr_db
//! sweep.values = -10:5:30
//! ```
//!
//! Every key is optional except where a command needs it; unknown keys are
//! rejected so typos do not pass silently.

use std::collections::BTreeMap;
use std::str::FromStr;

use super::ExperimentError;
use crate::channel::ScaledGaussianGainModel;
use crate::geometry::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    SnrDb,
    RangeM,
    FrequencyHz,
    NRays,
}

impl SweepAxis {
    pub fn column(&self) -> &'static str {
        match self {
            SweepAxis::SnrDb => "snr_db",
            SweepAxis::RangeM => "range_m",
            SweepAxis::FrequencyHz => "frequency_hz",
            SweepAxis::NRays => "n_rays",
        }
    }
}

impl FromStr for SweepAxis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "snr_db" => Ok(SweepAxis::SnrDb),
            "range_m" => Ok(SweepAxis::RangeM),
            "frequency_hz" => Ok(SweepAxis::FrequencyHz),
            "n_rays" => Ok(SweepAxis::NRays),
            _ => Err(format!("unknown axis `{s}` (expected snr_db, range_m, frequency_hz or n_rays)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    /// Strictly increasing.
    pub values: Vec<f64>,
}

impl SweepSpec {
    pub fn new(axis: SweepAxis, values: Vec<f64>) -> Result<Self, ExperimentError> {
        let bad = |reason: String| ExperimentError::Config {
            key: "sweep.values".into(),
            reason,
        };
        if values.is_empty() {
            return Err(bad("must not be empty".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(bad("values must be finite".into()));
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(bad("values must be strictly increasing".into()));
        }
        if axis == SweepAxis::NRays && values.iter().any(|v| *v < 1.0 || v.fract() != 0.0) {
            return Err(bad("n_rays values must be positive integers".into()));
        }
        Ok(Self { axis, values })
    }
}

/// Where the AoA-to-scale map comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GainSource {
    /// Rayleigh scale map given directly.
    Explicit(ScaledGaussianGainModel<f64>),
    /// Fitted to the traced rays binned into `bins` AoA bins.
    Fit { bins: usize },
}

/// How the SNR `ρ` is set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LinkSpec {
    SnrDb(f64),
    /// `ρ = tx_power / Ω_N`, so path loss enters through the channel.
    TxPower(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: Scenario<f64>,
    /// Triangular AoA half-width shared by all paths, radians.
    pub beta: Option<f64>,
    /// Per-path half-width overrides by ray index (delay order, 0 = direct).
    pub beta_overrides: BTreeMap<usize, f64>,
    /// Use only the first `n` rays in delay order.
    pub n_rays: Option<usize>,
    pub gain: GainSource,
    /// Rescale Λ so the mean total pressure energy is 1, making `ρ` the mean
    /// received SNR.
    pub normalize_energy: bool,
    pub link: Option<LinkSpec>,
    pub trials: usize,
    pub seed: u64,
    pub sweep: Option<SweepSpec>,
}

pub const DEFAULT_TRIALS: usize = 100_000;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_BINS: usize = 15;

const SCENARIO_KEYS: &[&str] = &[
    "scenario.range_m",
    "scenario.water_depth_m",
    "scenario.tx_depth_m",
    "scenario.rx_depth_m",
    "scenario.sound_speed_m_s",
    "scenario.frequency_hz",
    "scenario.water_density_kg_m3",
    "scenario.bottom_speed_m_s",
    "scenario.bottom_density_g_cm3",
    "scenario.bottom_attenuation_db_per_wavelength",
    "scenario.noise_power",
    "scenario.max_bounce_order",
];

const OTHER_KEYS: &[&str] = &[
    "channel.beta_rad",
    "channel.n_rays",
    "channel.normalize_energy",
    "gain.source",
    "gain.lambda",
    "gain.xi_rad",
    "gain.varsigma_rad",
    "gain.bins",
    "link.snr_db",
    "link.tx_power",
    "mc.trials",
    "mc.seed",
    "sweep.axis",
    "sweep.values",
];

const BETA_OVERRIDE_PREFIX: &str = "channel.beta_rad.";

struct Entries {
    map: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn parse(text: &str) -> Result<Self, ExperimentError> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((k, v)) = content.split_once('=') else {
                return Err(ExperimentError::ConfigSyntax {
                    line,
                    reason: format!("expected `key = value`, found `{content}`"),
                });
            };
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() || v.is_empty() {
                return Err(ExperimentError::ConfigSyntax {
                    line,
                    reason: "empty key or value".into(),
                });
            }
            let known = SCENARIO_KEYS.contains(&k)
                || OTHER_KEYS.contains(&k)
                || k.strip_prefix(BETA_OVERRIDE_PREFIX).is_some_and(|i| i.parse::<usize>().is_ok());
            if !known {
                return Err(ExperimentError::Config {
                    key: k.into(),
                    reason: format!("unknown key (line {line})"),
                });
            }
            if let Some((prev, _)) = map.insert(k.to_string(), (line, v.to_string())) {
                return Err(ExperimentError::ConfigSyntax {
                    line,
                    reason: format!("duplicate key `{k}` (first set on line {prev})"),
                });
            }
        }
        Ok(Self { map })
    }

    fn get<V: FromStr>(&self, key: &str) -> Result<Option<V>, ExperimentError> {
        match self.map.get(key) {
            None => Ok(None),
            Some((line, v)) => v.parse().map(Some).map_err(|_| ExperimentError::Config {
                key: key.into(),
                reason: format!("cannot parse `{v}` (line {line})"),
            }),
        }
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|(_, v)| v.as_str())
    }
}

fn config_err(key: &str, reason: impl Into<String>) -> ExperimentError {
    ExperimentError::Config {
        key: key.into(),
        reason: reason.into(),
    }
}

/// Parses `a, b, c` or `start:step:stop` (inclusive of `stop` up to rounding).
pub fn parse_values(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').map(str::trim).collect();
    if parts.len() == 3 {
        let nums: Result<Vec<f64>, _> = parts.iter().map(|p| p.parse::<f64>()).collect();
        let [start, step, stop] = nums.map_err(|_| format!("cannot parse range `{text}`"))?[..] else {
            unreachable!()
        };
        if !(step > 0.0) || !(stop >= start) {
            return Err(format!("range `{text}` needs step > 0 and stop >= start"));
        }
        let n = ((stop - start) / step * (1.0 + 1e-12)).floor() as usize;
        return Ok((0..=n).map(|i| start + step * i as f64).collect());
    }
    if parts.len() != 1 {
        return Err(format!("expected a list or start:step:stop, found `{text}`"));
    }
    text.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("cannot parse `{}`", t.trim())))
        .collect()
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ExperimentError> {
        let e = Entries::parse(text)?;
        let mut scenario = Scenario::shallow_water_reference();
        {
            let s = &mut scenario;
            let fields: [(&str, &mut f64); 11] = [
                ("scenario.range_m", &mut s.range_m),
                ("scenario.water_depth_m", &mut s.water_depth_m),
                ("scenario.tx_depth_m", &mut s.tx_depth_m),
                ("scenario.rx_depth_m", &mut s.rx_depth_m),
                ("scenario.sound_speed_m_s", &mut s.sound_speed),
                ("scenario.frequency_hz", &mut s.frequency_hz),
                ("scenario.water_density_kg_m3", &mut s.water_density),
                ("scenario.bottom_speed_m_s", &mut s.bottom_speed),
                ("scenario.bottom_density_g_cm3", &mut s.bottom_density_g_cm3),
                (
                    "scenario.bottom_attenuation_db_per_wavelength",
                    &mut s.bottom_attenuation_db_per_wavelength,
                ),
                ("scenario.noise_power", &mut s.noise_power),
            ];
            for (key, slot) in fields {
                if let Some(v) = e.get::<f64>(key)? {
                    *slot = v;
                }
            }
            if let Some(v) = e.get::<usize>("scenario.max_bounce_order")? {
                s.max_bounce_order = v;
            }
        }

        let beta = e.get::<f64>("channel.beta_rad")?;
        let mut beta_overrides = BTreeMap::new();
        for (k, (line, v)) in &e.map {
            if let Some(idx) = k.strip_prefix(BETA_OVERRIDE_PREFIX) {
                let b = v
                    .parse::<f64>()
                    .map_err(|_| config_err(k, format!("cannot parse `{v}` (line {line})")))?;
                beta_overrides.insert(idx.parse::<usize>().expect("checked when reading"), b);
            }
        }
        let n_rays = e.get::<usize>("channel.n_rays")?;
        let normalize_energy = e.get::<bool>("channel.normalize_energy")?.unwrap_or(false);

        let bins = e.get::<usize>("gain.bins")?.unwrap_or(DEFAULT_BINS);
        let explicit = ["gain.lambda", "gain.xi_rad", "gain.varsigma_rad"];
        let gain = match e.raw("gain.source").unwrap_or("fit") {
            "fit" => {
                if let Some(k) = explicit.iter().find(|k| e.raw(k).is_some()) {
                    return Err(config_err(k, "only used with gain.source = explicit"));
                }
                GainSource::Fit { bins }
            }
            "explicit" => {
                let mut vals = [0.0; 3];
                for (slot, key) in vals.iter_mut().zip(explicit) {
                    *slot = e
                        .get::<f64>(key)?
                        .ok_or_else(|| config_err(key, "required when gain.source = explicit"))?;
                }
                let model = ScaledGaussianGainModel::new(vals[0], vals[1], vals[2]).map_err(|err| {
                    let key = match &err {
                        crate::channel::ModelError::InvalidParameter { name: "lambda", .. } => "gain.lambda",
                        crate::channel::ModelError::InvalidParameter { name: "xi", .. } => "gain.xi_rad",
                        _ => "gain.varsigma_rad",
                    };
                    config_err(key, err.to_string())
                })?;
                GainSource::Explicit(model)
            }
            other => return Err(config_err("gain.source", format!("expected fit or explicit, found `{other}`"))),
        };

        let link = match (e.get::<f64>("link.snr_db")?, e.get::<f64>("link.tx_power")?) {
            (Some(_), Some(_)) => {
                return Err(config_err("link.tx_power", "set either link.snr_db or link.tx_power, not both"))
            }
            (Some(db), None) => Some(LinkSpec::SnrDb(db)),
            (None, Some(p)) => Some(LinkSpec::TxPower(p)),
            (None, None) => None,
        };

        let trials = e.get::<usize>("mc.trials")?.unwrap_or(DEFAULT_TRIALS);
        let seed = e.get::<u64>("mc.seed")?.unwrap_or(DEFAULT_SEED);

        let sweep = match (e.raw("sweep.axis"), e.raw("sweep.values")) {
            (None, None) => None,
            (Some(_), None) => return Err(config_err("sweep.values", "required when sweep.axis is set")),
            (None, Some(_)) => return Err(config_err("sweep.axis", "required when sweep.values is set")),
            (Some(a), Some(v)) => {
                let axis = a.parse::<SweepAxis>().map_err(|r| config_err("sweep.axis", r))?;
                let values = parse_values(v).map_err(|r| config_err("sweep.values", r))?;
                Some(SweepSpec::new(axis, values)?)
            }
        };

        let cfg = Self {
            scenario,
            beta,
            beta_overrides,
            n_rays,
            gain,
            normalize_energy,
            link,
            trials,
            seed,
            sweep,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Range checks, reporting the offending config key.
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if let Err(crate::geometry::GeometryError::InvalidScenario { field, reason }) = self.scenario.validate() {
            let key = SCENARIO_KEYS
                .iter()
                .find(|k| k.strip_prefix("scenario.").is_some_and(|s| s.starts_with(field)))
                .copied()
                .unwrap_or("scenario");
            return Err(config_err(key, reason));
        }
        if let Some(b) = self.beta {
            if !(b >= 0.0) || !b.is_finite() {
                return Err(config_err("channel.beta_rad", format!("must be finite and >= 0, got {b}")));
            }
        }
        for (i, b) in &self.beta_overrides {
            if !(*b >= 0.0) || !b.is_finite() {
                return Err(config_err(
                    &format!("{BETA_OVERRIDE_PREFIX}{i}"),
                    format!("must be finite and >= 0, got {b}"),
                ));
            }
        }
        if self.n_rays == Some(0) {
            return Err(config_err("channel.n_rays", "must be >= 1"));
        }
        if let GainSource::Fit { bins } = self.gain {
            if bins < 2 {
                return Err(config_err("gain.bins", format!("must be >= 2, got {bins}")));
            }
        }
        if let Some(LinkSpec::TxPower(p)) = self.link {
            if !(p > 0.0) || !p.is_finite() {
                return Err(config_err("link.tx_power", format!("must be finite and > 0, got {p}")));
            }
        }
        if let Some(LinkSpec::SnrDb(db)) = self.link {
            if !db.is_finite() {
                return Err(config_err("link.snr_db", "must be finite"));
            }
        }
        if self.trials == 0 {
            return Err(config_err("mc.trials", "must be >= 1"));
        }
        Ok(())
    }

    pub fn beta_for(&self, index: usize) -> Result<f64, ExperimentError> {
        match self.beta_overrides.get(&index) {
            Some(&b) => Ok(b),
            None => self
                .beta
                .ok_or_else(|| config_err("channel.beta_rad", "required for capacity commands")),
        }
    }
}
