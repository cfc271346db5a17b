use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::{fit_rate, NormReport, RateFit};
use crate::error::{Error, Result};

use super::config::StudyConfig;

/// Acceptable slope range for one fitted series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Target {
    pub exponent: f64,
    pub lo: f64,
    /// `None` for one-sided (lower-bound) targets.
    pub hi: Option<f64>,
}

impl Target {
    pub fn band(exponent: f64, lo: f64, hi: f64) -> Self {
        Self { exponent, lo, hi: Some(hi) }
    }

    pub fn symmetric(exponent: f64, tol: f64) -> Self {
        Self::band(exponent, exponent - tol, exponent + tol)
    }

    pub fn at_least(exponent: f64, tol: f64) -> Self {
        Self {
            exponent,
            lo: exponent - tol,
            hi: None,
        }
    }

    pub fn contains(&self, slope: f64) -> bool {
        slope >= self.lo && self.hi.is_none_or(|h| slope <= h)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesFit {
    pub series: String,
    pub fit: Option<RateFit>,
    pub error: Option<String>,
    /// `None` for series that are reported without a target.
    pub target: Option<Target>,
    pub pass: bool,
}

/// A scalar check with its threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsFailure {
    pub epsilon: f64,
    pub error: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct WallClock {
    pub total_seconds: f64,
    pub per_item_seconds: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub config: StudyConfig,
    pub norms: Vec<NormReport>,
    pub fits: Vec<SeriesFit>,
    pub checks: Vec<CheckEntry>,
    pub failures: Vec<EpsFailure>,
    pub notes: Vec<String>,
    pub wall_clock: WallClock,
}

impl ConvergenceReport {
    pub fn new(config: &StudyConfig) -> Self {
        Self {
            config: config.clone(),
            norms: Vec::new(),
            fits: Vec::new(),
            checks: Vec::new(),
            failures: Vec::new(),
            notes: Vec::new(),
            wall_clock: WallClock::default(),
        }
    }

    /// Fits the slope of the named series from the stored norms.
    pub fn fit_series(&mut self, series: &str, target: Option<Target>) {
        let (eps, vals): (Vec<f64>, Vec<f64>) = self
            .norms
            .iter()
            .filter(|n| n.name == series)
            .map(|n| (n.epsilon, n.value))
            .unzip();
        let entry = match fit_rate(&eps, &vals) {
            Ok(fit) => SeriesFit {
                series: series.into(),
                pass: target.is_none_or(|t| t.contains(fit.slope)),
                fit: Some(fit),
                error: None,
                target,
            },
            Err(e) => SeriesFit {
                series: series.into(),
                fit: None,
                error: Some(e.to_string()),
                target,
                pass: false,
            },
        };
        self.fits.push(entry);
    }

    pub fn check(&mut self, name: &str, value: f64, threshold: f64, pass: bool, detail: impl Into<String>) {
        self.checks.push(CheckEntry {
            name: name.into(),
            value,
            threshold,
            pass,
            detail: detail.into(),
        });
    }

    pub fn fit(&self, series: &str) -> Option<&SeriesFit> {
        self.fits.iter().find(|f| f.series == series)
    }

    pub fn check_named(&self, name: &str) -> Option<&CheckEntry> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// All targets met, all checks passed, no failed sweep items.
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.fits.iter().all(|f| f.pass) && self.checks.iter().all(|c| c.pass)
    }

    /// JSON with wall-clock fields cleared, for reproducibility comparisons.
    pub fn to_json_without_timing(&self) -> Result<String> {
        let mut r = self.clone();
        r.wall_clock = WallClock::default();
        serde_json::to_string_pretty(&r).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

fn create(path: &Path) -> Result<std::io::BufWriter<std::fs::File>> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
    }
    Ok(std::io::BufWriter::new(
        std::fs::File::create(path).map_err(|e| Error::io(path, e))?,
    ))
}

fn region_label(r: &crate::analysis::Region) -> String {
    match r {
        crate::analysis::Region::Whole => "whole".into(),
        crate::analysis::Region::BoundaryStrip(a) => format!("boundary_strip({a})"),
        crate::analysis::Region::Interior(a) => format!("interior({a})"),
    }
}

/// Writes `<dir>/<prefix>.json` or `<dir>/<prefix>.csv` plus
/// `<dir>/<prefix>_plot.csv`; returns the written paths.
pub fn emit_report(report: &ConvergenceReport, dir: &Path, prefix: &str, format: ReportFormat) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    match format {
        ReportFormat::Json => {
            let p = dir.join(format!("{prefix}.json"));
            let text = serde_json::to_string_pretty(report).map_err(|e| Error::Parse(e.to_string()))?;
            let mut w = create(&p)?;
            w.write_all(text.as_bytes()).map_err(|e| Error::io(&p, e))?;
            w.flush().map_err(|e| Error::io(&p, e))?;
            out.push(p);
        }
        ReportFormat::Csv => {
            let p = dir.join(format!("{prefix}.csv"));
            let mut w = create(&p)?;
            let io = |e| Error::io(&p, e);
            writeln!(w, "epsilon,norm,region,value").map_err(io)?;
            for n in &report.norms {
                writeln!(w, "{:e},{},{},{:e}", n.epsilon, n.name, region_label(&n.region), n.value).map_err(io)?;
            }
            w.flush().map_err(io)?;
            out.push(p);
            let p = dir.join(format!("{prefix}_plot.csv"));
            let mut w = create(&p)?;
            let io = |e| Error::io(&p, e);
            writeln!(w, "series,log_epsilon,log_value").map_err(io)?;
            for f in &report.fits {
                if let Some(fit) = &f.fit {
                    for (e, v) in fit.eps_values.iter().zip(&fit.norm_values) {
                        writeln!(w, "{},{:e},{:e}", f.series, e.ln(), v.ln()).map_err(io)?;
                    }
                }
            }
            w.flush().map_err(io)?;
            out.push(p);
        }
    }
    Ok(out)
}

pub fn read_report_json(path: &Path) -> Result<ConvergenceReport> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}
