//! Flat `key = value` configuration files.
//!
//! Lines are `key = value`; `#` starts a comment, blank lines are ignored and
//! every key may appear once. Durations are tick counts or a number with one
//! of the units `min`, `h`, `d`, `y` in business time (1 tick = 3 minutes,
//! 1 h = 20 ticks, 1 d = 480 ticks, 1 y = 365 d); they must be whole ticks.
//! Lists are comma separated; matrix rows are separated by `;`.
//!
//! | key | meaning |
//! |---|---|
//! | `input` | log-price CSV to analyze |
//! | `process` | preset name (see [`crate::process::PRESET_NAMES`]) |
//! | `seed` | master seed |
//! | `runs` | ensemble size |
//! | `workers` | worker threads (default: all cores) |
//! | `n_ticks`, `burn_in` | simulated length and discarded prefix (durations) |
//! | `format` | `json` or `csv` for scalar tables |
//! | `stats` | statistics to compute, e.g. `A_p, A_sigma_cut` |
//! | `density.nodes` | histogram nodes (odd) |
//! | `pdf.horizon`, `pdf.granularity`, `pdf.bound` | volatility-increment density |
//! | `sigma.first`, `sigma.ratio`, `sigma.count` | historical/realized horizon ladder |
//! | `graining.horizon`, `graining.first`, `graining.ratio`, `graining.count` | granularity ladder |
//! | `return.dt`, `return.quantile` | return-density asymmetry |
//! | `rw.sigma_annual` | Gaussian random walk |
//! | `garch.alpha`, `garch.beta`, `garch.omega` or `garch.annual_vol` | GARCH(1,1) |
//! | `arch.variant`, `arch.components`, `arch.tau_1`, `arch.ratio`, `arch.coupling`, `arch.w_inf`, `arch.weights`, `arch.mean_vol_annual` | multiscale ARCH |
//! | `sv.mean_log_vol`, `sv.timescales`, `sv.amplitudes` | exponential stochastic volatility |
//! | `heston.kappa`, `heston.theta`, `heston.xi` | (multi-component) Heston |
//! | `regime.state_vols`, `regime.transition` | regime switching |

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::{StatId, StatParams, StatRequest, DEFAULT_RUNS};
use crate::process::{ArchVariant, Garch11, ProcessSpec, SimConfig};
use crate::series::{Tick, VolSpec, TICKS_PER_DAY, TICKS_PER_HOUR, TICKS_PER_YEAR};
use crate::stats::HorizonGrid;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigEntry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

pub fn parse_config_text(text: &str) -> Result<Vec<ConfigEntry>> {
    let mut seen = BTreeMap::new();
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {line}: expected 'key = value'")))?;
        let key = key.trim().to_string();
        if key.is_empty() {
            return Err(Error::Config(format!("line {line}: empty key")));
        }
        if let Some(first) = seen.insert(key.clone(), line) {
            return Err(Error::Config(format!(
                "line {line}: '{key}' already set on line {first}"
            )));
        }
        out.push(ConfigEntry {
            line,
            key,
            value: value.trim().to_string(),
        });
    }
    Ok(out)
}

pub fn read_config_file(path: &Path) -> Result<Vec<ConfigEntry>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config_text(&text)
}

/// Parses `480`, `480t`, `60min`, `8h`, `1d`, `1.5d` or `1y` into ticks.
pub fn parse_duration(text: &str) -> Result<Tick> {
    let t = text.trim();
    let split = t.find(|c: char| c.is_ascii_alphabetic()).unwrap_or(t.len());
    let (num, unit) = t.split_at(split);
    let num: f64 = num
        .trim()
        .parse()
        .map_err(|_| Error::InvalidDuration(format!("'{text}' is not a duration")))?;
    let ticks_per_unit = match unit.trim() {
        "" | "t" | "tick" | "ticks" => 1.0,
        "min" => 1.0 / 3.0,
        "h" => TICKS_PER_HOUR as f64,
        "d" => TICKS_PER_DAY as f64,
        "y" => TICKS_PER_YEAR as f64,
        u => return Err(Error::InvalidDuration(format!("unknown unit '{u}' in '{text}'"))),
    };
    let ticks = num * ticks_per_unit;
    let rounded = ticks.round();
    if rounded.is_nan() || rounded < 1.0 || (ticks - rounded).abs() > 1e-9 * rounded.max(1.0) {
        return Err(Error::InvalidDuration(format!(
            "'{text}' is not a positive whole number of ticks"
        )));
    }
    Ok(Tick(rounded as u64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(Error::Config(format!("format must be json or csv, got '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JobSource {
    Input(PathBuf),
    Process { name: String, spec: ProcessSpec },
}

/// Values given on the command line; they take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Overrides {
    pub input: Option<PathBuf>,
    pub process: Option<String>,
    pub seed: Option<u64>,
    pub runs: Option<usize>,
    pub workers: Option<usize>,
}

/// Fully resolved job configuration. Its serialized form is echoed into every
/// output; the worker count is left out because it never changes results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub source: JobSource,
    pub request: StatRequest,
    pub sim: SimConfig,
    pub runs: usize,
    pub format: OutputFormat,
    #[serde(skip)]
    pub workers: Option<usize>,
}

struct Entries(BTreeMap<String, ConfigEntry>);

impl Entries {
    fn take(&mut self, key: &str) -> Option<ConfigEntry> {
        self.0.remove(key)
    }

    fn parse<T: FromStr>(&mut self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.take(key)
            .map(|e| {
                e.value
                    .parse()
                    .map_err(|err| Error::Config(format!("line {}: {key}: {err}", e.line)))
            })
            .transpose()
    }

    fn duration(&mut self, key: &str) -> Result<Option<Tick>> {
        self.take(key)
            .map(|e| parse_duration(&e.value).map_err(|err| Error::Config(format!("line {}: {key}: {err}", e.line))))
            .transpose()
    }

    /// A length in ticks: zero or a duration.
    fn length(&mut self, key: &str) -> Result<Option<usize>> {
        match self.0.get(key) {
            Some(e) if e.value.trim() == "0" => {
                self.take(key);
                Ok(Some(0))
            }
            _ => Ok(self.duration(key)?.map(Tick::as_usize)),
        }
    }

    fn list(&mut self, key: &str) -> Result<Option<Vec<f64>>> {
        self.take(key).map(|e| parse_list(&e.value, e.line, key)).transpose()
    }

    fn matrix(&mut self, key: &str) -> Result<Option<Vec<Vec<f64>>>> {
        self.take(key)
            .map(|e| e.value.split(';').map(|row| parse_list(row, e.line, key)).collect())
            .transpose()
    }
}

fn parse_list(text: &str, line: usize, key: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|err| Error::Config(format!("line {line}: {key}: '{}': {err}", v.trim())))
        })
        .collect()
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

impl AnalysisConfig {
    /// Resolves a job from file entries and command-line overrides. Exactly
    /// one of `input` and `process` must be given; unknown keys, and process
    /// keys that do not match the chosen family, are errors.
    pub fn resolve(entries: &[ConfigEntry], overrides: &Overrides) -> Result<Self> {
        let mut e = Entries(entries.iter().map(|x| (x.key.clone(), x.clone())).collect());

        let input = overrides
            .input
            .clone()
            .or(e.take("input").map(|x| PathBuf::from(x.value)));
        let process = overrides.process.clone().or(e.take("process").map(|x| x.value));
        let mut source = match (input, process) {
            (Some(path), None) => JobSource::Input(path),
            (None, Some(name)) => JobSource::Process {
                spec: ProcessSpec::preset(&name).map_err(|err| Error::Config(err.to_string()))?,
                name,
            },
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "give either an input series or a process, not both".into(),
                ))
            }
            (None, None) => return Err(Error::Config("no input series or process given".into())),
        };

        let mut sim = SimConfig::new(TICKS_PER_YEAR as usize, 0);
        set(&mut sim.seed, e.parse("seed")?);
        set(&mut sim.n_ticks, e.length("n_ticks")?);
        sim.burn_in = e.length("burn_in")?.or(sim.burn_in);
        if let Some(seed) = overrides.seed {
            sim.seed = seed;
        }
        let mut runs = e.parse("runs")?.unwrap_or(DEFAULT_RUNS);
        if let Some(r) = overrides.runs {
            runs = r;
        }
        let workers = overrides.workers.or(e.parse("workers")?);
        if workers == Some(0) {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        let format = e.parse("format")?.unwrap_or_default();

        let stats = match e.take("stats") {
            Some(x) => x
                .value
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<StatId>()
                        .map_err(|err| Error::Config(format!("line {}: {err}", x.line)))
                })
                .collect::<Result<Vec<_>>>()?,
            None => StatId::ALL.to_vec(),
        };
        let params = resolve_params(&mut e)?;
        let request = StatRequest::new(stats, params).map_err(|err| Error::Config(err.to_string()))?;

        if let JobSource::Process { spec, .. } = &mut source {
            apply_process_keys(spec, &mut e)?;
            spec.validate().map_err(|err| Error::Config(err.to_string()))?;
        }

        if let Some((key, entry)) = e.0.into_iter().next() {
            let hint = if is_process_key(&key) {
                match &source {
                    JobSource::Input(_) => " (process parameters do not apply to an input series)".to_string(),
                    JobSource::Process { name, .. } => format!(" (not a parameter of process '{name}')"),
                }
            } else {
                String::new()
            };
            return Err(Error::Config(format!("line {}: unknown key '{key}'{hint}", entry.line)));
        }
        if sim.n_ticks == 0 {
            return Err(Error::Config("n_ticks must be positive".into()));
        }
        Ok(AnalysisConfig {
            source,
            request,
            sim,
            runs,
            format,
            workers,
        })
    }

    pub fn process(&self) -> Option<(&str, &ProcessSpec)> {
        match &self.source {
            JobSource::Process { name, spec } => Some((name, spec)),
            JobSource::Input(_) => None,
        }
    }

    /// Single-line JSON echo of the configuration.
    pub fn echo(&self) -> String {
        serde_json::to_string(self).expect("configuration serializes")
    }
}

fn is_process_key(key: &str) -> bool {
    ["rw.", "garch.", "arch.", "sv.", "heston.", "regime."]
        .iter()
        .any(|p| key.starts_with(p))
}

fn resolve_params(e: &mut Entries) -> Result<StatParams> {
    let mut p = StatParams::default();
    let config_err = |err: Error| Error::Config(err.to_string());

    set(&mut p.node_count, e.parse("density.nodes")?);
    if let Some(h) = e.duration("pdf.horizon")? {
        p.pdf_spec = VolSpec::with_default_granularity(h).map_err(config_err)?;
    }
    if let Some(g) = e.duration("pdf.granularity")? {
        p.pdf_spec = VolSpec::new(p.pdf_spec.horizon, g).map_err(config_err)?;
    }
    set(&mut p.pdf_bound, e.parse("pdf.bound")?);

    let (first, ratio, count) = (
        e.duration("sigma.first")?,
        e.parse("sigma.ratio")?,
        e.parse("sigma.count")?,
    );
    if first.is_some() || ratio.is_some() || count.is_some() {
        let d = p.sigma_grid.horizons();
        p.sigma_grid = HorizonGrid::geometric(
            first.unwrap_or(d[0]),
            ratio.unwrap_or(d[1].count() / d[0].count()),
            count.unwrap_or(d.len()),
        )
        .map_err(config_err)?;
    }
    set(&mut p.graining_horizon, e.duration("graining.horizon")?);
    let (first, ratio, count) = (
        e.duration("graining.first")?,
        e.parse("graining.ratio")?,
        e.parse("graining.count")?,
    );
    if first.is_some() || ratio.is_some() || count.is_some() {
        let d = p.grain_grid.horizons();
        p.grain_grid = HorizonGrid::geometric(
            first.unwrap_or(d[0]),
            ratio.unwrap_or(d[1].count() / d[0].count()),
            count.unwrap_or(d.len()),
        )
        .map_err(config_err)?;
    }
    if let Some(g) = p.grain_grid.horizons().iter().find(|g| **g > p.graining_horizon) {
        return Err(Error::Config(format!(
            "granularity {g} exceeds graining.horizon {}",
            p.graining_horizon
        )));
    }
    set(&mut p.return_dt, e.duration("return.dt")?);
    set(&mut p.return_quantile, e.parse("return.quantile")?);
    if p.pdf_bound.is_nan()
        || p.pdf_bound <= 0.0
        || !(0.0..=1.0).contains(&p.return_quantile)
        || p.return_quantile == 0.0
    {
        return Err(Error::Config(
            "pdf.bound must be positive and return.quantile in (0, 1]".into(),
        ));
    }
    if p.node_count < 3 || p.node_count.is_multiple_of(2) {
        return Err(Error::Config(format!(
            "density.nodes must be odd and at least 3, got {}",
            p.node_count
        )));
    }
    Ok(p)
}

fn apply_process_keys(spec: &mut ProcessSpec, e: &mut Entries) -> Result<()> {
    match spec {
        ProcessSpec::GaussianRw(p) => set(&mut p.sigma_annual, e.parse("rw.sigma_annual")?),
        ProcessSpec::Garch11(p) => {
            let unconditional = p.stationary_variance();
            set(&mut p.alpha, e.parse("garch.alpha")?);
            set(&mut p.beta, e.parse("garch.beta")?);
            let omega: Option<f64> = e.parse("garch.omega")?;
            let annual: Option<f64> = e.parse("garch.annual_vol")?;
            match (omega, annual) {
                (Some(_), Some(_)) => {
                    return Err(Error::Config("give garch.omega or garch.annual_vol, not both".into()))
                }
                (Some(w), None) => p.omega = w,
                (None, Some(v)) => *p = Garch11::with_annual_vol(p.alpha, p.beta, v),
                // keep the preset's unconditional variance
                (None, None) => p.omega = unconditional * (1.0 - p.alpha - p.beta),
            }
        }
        ProcessSpec::MultiscaleArch(p) => {
            if let Some(v) = e.take("arch.variant") {
                p.variant = match v.value.as_str() {
                    "lm_affine" => ArchVariant::LmAffine,
                    "mkt_affine" => ArchVariant::MktAffine,
                    other => {
                        return Err(Error::Config(format!(
                            "line {}: arch.variant must be lm_affine or mkt_affine, got '{other}'",
                            v.line
                        )))
                    }
                };
            }
            set(&mut p.components, e.parse("arch.components")?);
            set(&mut p.tau_1, e.parse("arch.tau_1")?);
            set(&mut p.ratio, e.parse("arch.ratio")?);
            set(&mut p.coupling, e.parse("arch.coupling")?);
            set(&mut p.w_inf, e.parse("arch.w_inf")?);
            set(&mut p.mean_vol_annual, e.parse("arch.mean_vol_annual")?);
            if let Some(w) = e.list("arch.weights")? {
                p.weights = Some(w);
            }
        }
        ProcessSpec::ExpOuSv(p) => {
            set(&mut p.mean_log_vol, e.parse("sv.mean_log_vol")?);
            set(&mut p.timescales, e.list("sv.timescales")?);
            set(&mut p.amplitudes, e.list("sv.amplitudes")?);
        }
        ProcessSpec::Heston(p) => {
            set(&mut p.kappa, e.list("heston.kappa")?);
            set(&mut p.theta, e.list("heston.theta")?);
            set(&mut p.xi, e.list("heston.xi")?);
        }
        ProcessSpec::RegimeSwitching(p) => {
            set(&mut p.state_vols, e.list("regime.state_vols")?);
            set(&mut p.transition, e.matrix("regime.transition")?);
        }
    }
    Ok(())
}
