//! Job runners behind the command line tool. Every job writes into a staging
//! directory and moves its files into place only once all of them exist, so
//! a failed job leaves no partial outputs behind.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::harness::{run_ensemble, EnsembleOptions, EnsembleSummary, StatId, StatRequest};
use crate::process::simulate;
use crate::series::RegularSeries;
use crate::stats::{
    density_asymmetry, estimate_density, graining_corr_surface, hist_real_corr_surface, vol_increments,
    CorrelationSurface,
};

use super::config::{AnalysisConfig, JobSource, OutputFormat};
use super::csv::{load_series_csv, save_series_csv};

/// Output directory that only receives files on [`Staging::commit`].
struct Staging {
    target: PathBuf,
    dir: PathBuf,
    created_target: bool,
    files: Vec<String>,
}

impl Staging {
    fn new(target: &Path) -> Result<Self> {
        let created_target = !target.exists();
        fs::create_dir_all(target).map_err(|e| Error::io(target, e))?;
        let dir = target.join(format!(".partial-{}", std::process::id()));
        if dir.exists() {
            fs::remove_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        }
        fs::create_dir(&dir).map_err(|e| Error::io(&dir, e))?;
        Ok(Staging {
            target: target.to_path_buf(),
            dir,
            created_target,
            files: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn commit(mut self) -> Result<Vec<PathBuf>> {
        let mut out = Vec::with_capacity(self.files.len());
        for name in std::mem::take(&mut self.files) {
            let to = self.target.join(&name);
            fs::rename(self.dir.join(&name), &to).map_err(|e| Error::io(&to, e))?;
            out.push(to);
        }
        Ok(out)
    }
}

impl Drop for Staging {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.dir);
        if self.created_target {
            // only succeeds if nothing else was put there
            let _ = fs::remove_dir(&self.target);
        }
    }
}

fn csv_header(cfg: &AnalysisConfig, columns: &str) -> String {
    format!("# config: {}\n{columns}\n", cfg.echo())
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn surface_rows(cfg: &AnalysisConfig, s: &CorrelationSurface<f64>, names: (&str, &str, &str)) -> (String, String) {
    let h = s.grid.horizons();
    let mut full = csv_header(cfg, &format!("{},{},rho,{}", names.0, names.1, names.2));
    for i in 0..s.size() {
        for j in 0..s.size() {
            let _ = writeln!(full, "{},{},{},{}", h[i], h[j], opt(s.rho(i, j)), opt(s.asym(i, j)));
        }
    }
    let mut cut = csv_header(cfg, &format!("{},{},{}", names.0, names.1, names.2));
    for k in 0..s.size() {
        let m = s.grid.mirror(k);
        let _ = writeln!(cut, "{},{},{}", h[k], h[m], opt(s.asym(k, m)));
    }
    (full, cut)
}

#[derive(Serialize)]
struct SeriesInfo {
    rows: usize,
    start: i64,
    end: i64,
}

#[derive(Serialize)]
struct NamedValue {
    name: StatId,
    value: f64,
}

#[derive(Serialize)]
struct AnalysisOutput<'a> {
    config: &'a AnalysisConfig,
    series: SeriesInfo,
    statistics: Vec<NamedValue>,
}

/// Statistics and curve data for an empirical series.
pub fn run_analyze(cfg: &AnalysisConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let JobSource::Input(path) = &cfg.source else {
        return Err(Error::Config("analyze needs an input series".into()));
    };
    let prices: RegularSeries<f64> = load_series_csv(path)?;
    analyze_series(cfg, &prices, out_dir)
}

pub fn analyze_series(cfg: &AnalysisConfig, prices: &RegularSeries<f64>, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let req = &cfg.request;
    let p = &req.params;
    let mut failures = Vec::new();
    let mut statistics = Vec::new();
    for id in req.stats() {
        let single = StatRequest::new([*id], p.clone())?;
        match single.evaluate(prices) {
            Ok(v) => statistics.push(NamedValue {
                name: *id,
                value: v[0].1,
            }),
            Err((id, e)) => {
                log::error!("{id}: {e}");
                failures.push(Error::Statistic {
                    stat: id.name().to_string(),
                    source: Box::new(e),
                });
            }
        }
    }
    if let Some(first) = failures.into_iter().next() {
        return Err(first);
    }

    let mut staging = Staging::new(out_dir)?;
    match cfg.format {
        OutputFormat::Json => staging.write(
            "statistics.json",
            &json(&AnalysisOutput {
                config: cfg,
                series: SeriesInfo {
                    rows: prices.len(),
                    start: prices.start(),
                    end: prices.end(),
                },
                statistics,
            }),
        )?,
        OutputFormat::Csv => {
            let mut s = csv_header(cfg, "name,value");
            for v in &statistics {
                let _ = writeln!(s, "{},{}", v.name, v.value);
            }
            staging.write("statistics.csv", &s)?;
        }
    }

    if req.stats().contains(&StatId::Ap) {
        let dsigma = vol_increments(prices, p.pdf_spec)?;
        let density = estimate_density(&dsigma, p.node_count)?;
        let mut s = csv_header(cfg, "delta_sigma,density");
        for (g, d) in density.grid().iter().zip(density.node_density()) {
            let _ = writeln!(s, "{g},{d}");
        }
        staging.write("dsigma_density.csv", &s)?;
        let curve = density_asymmetry(&density);
        let mut s = csv_header(cfg, "delta_sigma,a_p");
        for (g, a) in curve.positive_nodes.iter().zip(&curve.values) {
            let _ = writeln!(s, "{g},{a}");
        }
        staging.write("ap_curve.csv", &s)?;
    }
    if req
        .stats()
        .iter()
        .any(|s| matches!(s, StatId::SigmaTot | StatId::SigmaCut))
    {
        let surface = hist_real_corr_surface(prices, &p.sigma_grid)?;
        let (full, cut) = surface_rows(cfg, &surface, ("hist_horizon", "real_horizon", "a_sigma"));
        staging.write("sigma_surface.csv", &full)?;
        staging.write("sigma_cut.csv", &cut)?;
    }
    if req.stats().contains(&StatId::GrCut) {
        let surface = graining_corr_surface(prices, p.graining_horizon, &p.grain_grid)?;
        let (full, cut) = surface_rows(cfg, &surface, ("hist_grain", "real_grain", "a_gr"));
        staging.write("graining_surface.csv", &full)?;
        staging.write("graining_cut.csv", &cut)?;
    }
    staging.commit()
}

/// Simulates one path of the configured process and writes it as CSV.
pub fn run_simulate(cfg: &AnalysisConfig, out_file: &Path) -> Result<()> {
    let Some((name, spec)) = cfg.process() else {
        return Err(Error::Config("simulate needs a process".into()));
    };
    let path: RegularSeries<f64> = simulate(spec, &cfg.sim)?;
    log::info!("simulated {} ticks of {name}", path.len());
    let tmp = out_file.with_extension("partial");
    let result = save_series_csv(&path, &tmp, &[format!("config: {}", cfg.echo())])
        .and_then(|_| fs::rename(&tmp, out_file).map_err(|e| Error::io(out_file, e)));
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

#[derive(Serialize)]
struct TableRow {
    name: StatId,
    mean: f64,
    #[serde(rename = "stdDev")]
    std_dev: f64,
    #[serde(rename = "p-value")]
    p_value: f64,
}

#[derive(Serialize)]
struct EnsembleOutput<'a> {
    config: &'a AnalysisConfig,
    process: &'a str,
    runs: usize,
    burn_in: usize,
    rows: Vec<TableRow>,
    samples: Vec<(StatId, &'a [f64])>,
}

/// Equal-width histogram normalized to unit area: `(low, high, density)`.
pub fn histogram(samples: &[f64]) -> Vec<(f64, f64, f64)> {
    if samples.is_empty() {
        return Vec::new();
    }
    let lo = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let bins = ((samples.len() as f64).sqrt().ceil() as usize).clamp(5, 50);
    let width = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
    let mut counts = vec![0usize; bins];
    for v in samples {
        let b = (((v - lo) / width) as usize).min(bins - 1);
        counts[b] += 1;
    }
    counts
        .iter()
        .enumerate()
        .map(|(b, c)| {
            let low = lo + b as f64 * width;
            (low, low + width, *c as f64 / (samples.len() as f64 * width))
        })
        .collect()
}

/// Monte Carlo table for the configured process.
pub fn run_ensemble_job(cfg: &AnalysisConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let Some((name, spec)) = cfg.process() else {
        return Err(Error::Config("ensemble needs a process".into()));
    };
    let opts = EnsembleOptions {
        workers: cfg.workers,
        force_seed: None,
    };
    let summary: EnsembleSummary = run_ensemble::<f64>(spec, &cfg.sim, &cfg.request, cfg.runs, &opts)?;
    write_ensemble(cfg, name, &summary, out_dir)
}

fn write_ensemble(cfg: &AnalysisConfig, name: &str, summary: &EnsembleSummary, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let mut staging = Staging::new(out_dir)?;
    let rows: Vec<TableRow> = summary
        .stats
        .iter()
        .map(|s| TableRow {
            name: s.name,
            mean: s.mean,
            std_dev: s.std_dev,
            p_value: s.p_value,
        })
        .collect();
    match cfg.format {
        OutputFormat::Json => staging.write(
            "table.json",
            &json(&EnsembleOutput {
                config: cfg,
                process: name,
                runs: summary.run_count,
                burn_in: summary.burn_in,
                rows,
                samples: summary.stats.iter().map(|s| (s.name, s.samples.as_slice())).collect(),
            }),
        )?,
        OutputFormat::Csv => {
            let mut s = csv_header(cfg, "name,mean,stdDev,p-value");
            for r in &rows {
                let _ = writeln!(s, "{},{},{},{}", r.name, r.mean, r.std_dev, r.p_value);
            }
            staging.write("table.csv", &s)?;
        }
    }

    let mut s = csv_header(
        cfg,
        &std::iter::once("run".to_string())
            .chain(summary.stats.iter().map(|s| s.name.to_string()))
            .collect::<Vec<_>>()
            .join(","),
    );
    for run in 0..summary.run_count {
        s.push_str(&run.to_string());
        for st in &summary.stats {
            let _ = write!(s, ",{}", st.samples[run]);
        }
        s.push('\n');
    }
    staging.write("samples.csv", &s)?;

    if let Some(cut) = summary.get(StatId::SigmaCut) {
        let mut s = csv_header(cfg, "bin_low,bin_high,density");
        for (lo, hi, d) in histogram(&cut.samples) {
            let _ = writeln!(s, "{lo},{hi},{d}");
        }
        staging.write("a_sigma_cut_histogram.csv", &s)?;
    }
    staging.commit()
}

/// Machine-readable description of a failed job.
pub fn error_report(job: &str, err: &Error) -> serde_json::Value {
    let mut report = serde_json::json!({
        "job": job,
        "error": err.kind(),
        "message": err.to_string(),
    });
    let mut cur = err;
    loop {
        match cur {
            Error::Statistic { stat, source } => {
                report["statistic"] = stat.clone().into();
                cur = source;
            }
            Error::Run { run, source } => {
                report["run"] = (*run).into();
                cur = source;
            }
            Error::Parse { row, col, .. } => {
                report["row"] = (*row).into();
                report["column"] = (*col).into();
                break;
            }
            Error::GapDetected { row, tick } => {
                report["row"] = (*row).into();
                report["tick"] = (*tick).into();
                break;
            }
            Error::NonMonotonicTime { row } | Error::NonFiniteValue { row } => {
                report["row"] = (*row).into();
                break;
            }
            _ => break,
        }
    }
    report
}
