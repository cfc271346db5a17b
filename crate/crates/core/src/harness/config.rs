use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StudyKind {
    UncorrectedRates,
    CorrectedRates,
    CorrectorScalings,
    UniformRates,
    InequalitySuite,
    TorusSuite,
}

impl FromStr for StudyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "uncorrected_rates" | "uncorrected" => StudyKind::UncorrectedRates,
            "corrected_rates" | "corrected" => StudyKind::CorrectedRates,
            "corrector_scalings" | "scalings" => StudyKind::CorrectorScalings,
            "uniform_rates" | "uniform" => StudyKind::UniformRates,
            "inequality_suite" | "inequalities" => StudyKind::InequalitySuite,
            "torus_suite" | "torus" => StudyKind::TorusSuite,
            _ => return Err(Error::Config(format!("unknown study kind '{s}'"))),
        })
    }
}

/// Initial velocity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialData {
    /// `(U(z), 0, 0)` with `U = amplitude · tanh((z - h/2)/width)`.
    ShearTanh { amplitude: f64, width: f64 },
    /// `(U(z), 0, 0)` with `U = 1 + (2α/h) z (h - z)`, which satisfies the
    /// friction condition for `A = αI` on both walls.
    ShearCompatible,
    /// The tanh shear modulated by `1 + 0.1 cos(2πx/L1)`, with the normal
    /// component that makes it solenoidal and impermeable.
    PerturbedShear { amplitude: f64, width: f64 },
    /// Counter-rotating cells `ψ = sin(2πx/L1) sin(πz/h)`.
    TaylorGreenLike,
    /// Velocity read from a checkpoint file.
    Custom(PathBuf),
}

impl InitialData {
    /// Data that do not depend on `x` or `y`.
    pub fn is_shear(&self) -> bool {
        matches!(self, InitialData::ShearTanh { .. } | InitialData::ShearCompatible)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForcingSpec {
    Zero,
    /// Spatially uniform, steady force.
    Custom([f64; 3]),
}

/// Everything a study needs. Parsed from a `key = value` file; see
/// [`StudyConfig::parse`] for the keys.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub kind: StudyKind,
    pub l1: f64,
    pub l2: f64,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub clustering: f64,
    pub a_lower: [[f64; 2]; 2],
    pub a_upper: [[f64; 2]; 2],
    pub eps_list: Vec<f64>,
    pub t_final: f64,
    pub cadence: f64,
    pub initial: InitialData,
    pub forcing: ForcingSpec,
    /// Use the one-dimensional reference solver for x,y-invariant data.
    pub fast_path: bool,
    pub oracle_nz: usize,
    pub oracle_clustering: f64,
    pub oracle_steps: usize,
    pub dt_max: Option<f64>,
    /// Width of the wall strip for regional norms.
    pub region_a: f64,
    /// Regularity label for the uniform-rate targets.
    pub nominal_m: usize,
    /// Replace the corrector by zero (debugging the corrected study).
    pub zero_corrector: bool,
    pub scalings_eps: Vec<f64>,
    pub scalings_nz: usize,
    pub scalings_nxy: usize,
    pub scalings_clustering: f64,
    pub torus_major: f64,
    pub torus_minor: f64,
    pub output_dir: PathBuf,
    pub output_prefix: String,
    pub seed: u64,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            kind: StudyKind::UncorrectedRates,
            l1: 1.0,
            l2: 1.0,
            h: 1.0,
            nx: 4,
            ny: 4,
            nz: 2049,
            clustering: 2.0,
            a_lower: [[0.5, 0.0], [0.0, 0.5]],
            a_upper: [[0.5, 0.0], [0.0, 0.5]],
            eps_list: vec![1e-2, 3.16e-3, 1e-3, 3.16e-4, 1e-4],
            t_final: 0.25,
            cadence: 0.25 / 50.0,
            initial: InitialData::ShearTanh {
                amplitude: 0.5,
                width: 0.3,
            },
            forcing: ForcingSpec::Zero,
            fast_path: true,
            oracle_nz: 2049,
            oracle_clustering: 2.0,
            oracle_steps: 2000,
            dt_max: None,
            region_a: 0.125,
            nominal_m: 7,
            zero_corrector: false,
            scalings_eps: vec![1e-8, 1e-10, 1e-12, 1e-14],
            scalings_nz: 2049,
            scalings_nxy: 8,
            scalings_clustering: 7.0,
            torus_major: 2.0,
            torus_minor: 1.0,
            output_dir: PathBuf::from("out"),
            output_prefix: "study".into(),
            seed: 0,
        }
    }
}

fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse '{v}'")))
}

fn list(key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',').map(|s| num(key, s)).collect()
}

fn matrix(key: &str, v: &str) -> Result<[[f64; 2]; 2]> {
    let x = list(key, v)?;
    match x.as_slice() {
        [a] => Ok([[*a, 0.0], [0.0, *a]]),
        [a, b, c, d] => Ok([[*a, *b], [*c, *d]]),
        _ => Err(Error::Config(format!("{key}: expected 1 or 4 entries, got {}", x.len()))),
    }
}

fn boolean(key: &str, v: &str) -> Result<bool> {
    match v.trim() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected true or false, got '{v}'"))),
    }
}

impl StudyConfig {
    pub fn for_kind(kind: StudyKind) -> Self {
        Self {
            kind,
            ..Self::default()
        }
    }

    /// Parses `key = value` lines; `#` starts a comment. Keys:
    ///
    /// `kind`, `l1`, `l2`, `h`, `nx`, `ny`, `nz`, `clustering`,
    /// `a_lower`, `a_upper` (one value for `αI` or four, row-major),
    /// `eps_list`, `t_final`, `cadence` (default `t_final/50`),
    /// `initial` (`shear_tanh`, `shear_compatible`, `perturbed_shear`,
    /// `taylor_green_like`, `custom:<checkpoint path>`), `shear_amplitude`, `shear_width`,
    /// `forcing` (`zero` or `custom:f1,f2,f3`), `fast_path`, `oracle_nz`,
    /// `oracle_clustering`, `oracle_steps`, `dt_max`, `region_a` (default `h/8`),
    /// `nominal_m`, `zero_corrector`, `scalings_eps`, `scalings_nz`,
    /// `scalings_nxy`, `scalings_clustering`, `torus_major`, `torus_minor`,
    /// `output_dir`, `output_prefix`, `seed`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Self::default();
        let mut cadence = None;
        let mut region = None;
        let mut initial = "shear_tanh".to_string();
        let (mut amp, mut width) = (0.5, 0.3);
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", no + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            match k {
                "kind" => c.kind = v.parse()?,
                "l1" => c.l1 = num(k, v)?,
                "l2" => c.l2 = num(k, v)?,
                "h" => c.h = num(k, v)?,
                "nx" => c.nx = num(k, v)?,
                "ny" => c.ny = num(k, v)?,
                "nz" => c.nz = num(k, v)?,
                "clustering" => c.clustering = num(k, v)?,
                "a_lower" => c.a_lower = matrix(k, v)?,
                "a_upper" => c.a_upper = matrix(k, v)?,
                "eps_list" => c.eps_list = list(k, v)?,
                "t_final" => c.t_final = num(k, v)?,
                "cadence" => cadence = Some(num(k, v)?),
                "initial" => initial = v.to_string(),
                "shear_amplitude" => amp = num(k, v)?,
                "shear_width" => width = num(k, v)?,
                "forcing" => {
                    c.forcing = if v == "zero" {
                        ForcingSpec::Zero
                    } else if let Some(rest) = v.strip_prefix("custom:") {
                        let f = list(k, rest)?;
                        if f.len() != 3 {
                            return Err(Error::Config("forcing: custom needs three components".into()));
                        }
                        ForcingSpec::Custom([f[0], f[1], f[2]])
                    } else {
                        return Err(Error::Config(format!("forcing: unknown selector '{v}'")));
                    }
                }
                "fast_path" => c.fast_path = boolean(k, v)?,
                "oracle_nz" => c.oracle_nz = num(k, v)?,
                "oracle_clustering" => c.oracle_clustering = num(k, v)?,
                "oracle_steps" => c.oracle_steps = num(k, v)?,
                "dt_max" => c.dt_max = Some(num(k, v)?),
                "region_a" => region = Some(num(k, v)?),
                "nominal_m" => c.nominal_m = num(k, v)?,
                "zero_corrector" => c.zero_corrector = boolean(k, v)?,
                "scalings_eps" => c.scalings_eps = list(k, v)?,
                "scalings_nz" => c.scalings_nz = num(k, v)?,
                "scalings_nxy" => c.scalings_nxy = num(k, v)?,
                "scalings_clustering" => c.scalings_clustering = num(k, v)?,
                "torus_major" => c.torus_major = num(k, v)?,
                "torus_minor" => c.torus_minor = num(k, v)?,
                "output_dir" => c.output_dir = PathBuf::from(v),
                "output_prefix" => c.output_prefix = v.to_string(),
                "seed" => c.seed = num(k, v)?,
                _ => return Err(Error::Config(format!("line {}: unknown key '{k}'", no + 1))),
            }
        }
        c.initial = match initial.as_str() {
            "shear_tanh" => InitialData::ShearTanh { amplitude: amp, width },
            "shear_compatible" => InitialData::ShearCompatible,
            "perturbed_shear" => InitialData::PerturbedShear { amplitude: amp, width },
            "taylor_green_like" => InitialData::TaylorGreenLike,
            s => match s.strip_prefix("custom:") {
                Some(p) => InitialData::Custom(PathBuf::from(p.trim())),
                None => return Err(Error::Config(format!("initial: unknown selector '{s}'"))),
            },
        };
        c.cadence = cadence.unwrap_or(c.t_final / 50.0);
        c.region_a = region.unwrap_or(c.h / 8.0);
        c.validate()?;
        Ok(c)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let cfg = |m: String| Err(Error::Config(m));
        if !(self.h > 0.0 && self.l1 > 0.0 && self.l2 > 0.0) {
            return cfg("domain sizes must be positive".into());
        }
        let cap = (self.h / 8.0).powi(2);
        for list in [&self.eps_list, &self.scalings_eps] {
            if list.windows(2).any(|w| !(w[1] < w[0])) {
                return cfg(format!("viscosity list {list:?} must be strictly decreasing"));
            }
            if list.iter().any(|&e| !(e > 0.0 && e < cap)) {
                return cfg(format!("viscosities {list:?} must lie in (0, (h/8)^2) = (0, {cap})"));
            }
        }
        if !(self.t_final > 0.0 && self.cadence > 0.0) {
            return cfg("t_final and cadence must be positive".into());
        }
        let ratio = self.t_final / self.cadence;
        if (ratio - ratio.round()).abs() > 1e-9 * ratio {
            return cfg(format!("cadence {} does not divide t_final {}", self.cadence, self.t_final));
        }
        if self.kind == StudyKind::UniformRates && self.forcing != ForcingSpec::Zero {
            return cfg("uniform rates assume zero forcing (f = 0 is a hypothesis of the uniform estimate)".into());
        }
        if !(self.region_a > 0.0 && self.region_a < self.h / 2.0) {
            return cfg(format!("region_a must lie in (0, h/2), got {}", self.region_a));
        }
        if self.nominal_m < 2 {
            return cfg("nominal_m must be at least 2".into());
        }
        if self.oracle_steps == 0 || !self.oracle_steps.is_multiple_of(self.snapshots()) {
            return cfg(format!(
                "oracle_steps ({}) must be a positive multiple of the snapshot count ({})",
                self.oracle_steps,
                self.snapshots()
            ));
        }
        Ok(())
    }

    /// Snapshots after `t = 0`.
    pub fn snapshots(&self) -> usize {
        (self.t_final / self.cadence).round().max(1.0) as usize
    }
}
