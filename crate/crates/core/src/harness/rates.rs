use std::time::Instant;

use rayon::prelude::*;

use crate::analysis::{norm_h1, norm_l2, norm_linf, time_l2, time_sup, NormReport, Region, TimeMode};
use crate::corrector::{build_corrector_channel, corrector_residual_r};
use crate::error::{Error, Result};
use crate::field::{FieldKind, ScalarField, VectorField};
use crate::geometry::ChannelGrid;
use crate::solver::{
    euler_solve, ns_solve, shear_flow_oracle, FlowState, Forcing, ShearOracleConfig, SolverOptions, Trajectory,
};

use super::config::{StudyConfig, StudyKind};
use super::data::{forcing, friction_pair, initial_field, shear_profile, study_grid, uses_fast_path};
use super::report::{ConvergenceReport, EpsFailure, Target};

pub const LINF_L2_BAND: (f64, f64) = (0.60, 0.90);
pub const L2_H1_BAND: (f64, f64) = (0.15, 0.35);
pub const R_EPS_BAND: (f64, f64) = (0.65, 0.85);
/// Allowed shortfall below the uniform-rate lower bounds.
pub const UNIFORM_TOL: f64 = 0.1;

/// Uniform-rate exponents `(boundary, interior)` for regularity `m`.
pub fn uniform_targets(m: usize) -> (f64, f64) {
    let m = m as f64;
    (3.0 / 8.0 - 3.0 / (8.0 * (m - 1.0)), 3.0 / 4.0 - 9.0 / (8.0 * m))
}

fn solver_options(cfg: &StudyConfig) -> SolverOptions<f64> {
    let mut o = SolverOptions::with_cadence(cfg.cadence);
    o.dt_max = cfg.dt_max;
    o.record_diagnostics = false;
    o
}

/// Euler reference on the study grid. For shear data without forcing the
/// profile is itself the steady solution.
pub fn euler_reference(cfg: &StudyConfig, grid: &ChannelGrid<f64>) -> Result<Trajectory<f64>> {
    let u_init = initial_field(cfg, grid)?;
    if cfg.initial.is_shear() && cfg.forcing == super::config::ForcingSpec::Zero {
        let snapshots = (0..=cfg.snapshots())
            .map(|s| FlowState {
                u: u_init.clone(),
                p: ScalarField::zeros(grid),
                t: cfg.cadence * s as f64,
            })
            .collect();
        return Ok(Trajectory {
            snapshots,
            cadence: cfg.cadence,
            epsilon: 0.0,
            friction: None,
            forcing: Forcing::Zero,
            dt: cfg.cadence,
            diagnostics: Vec::new(),
        });
    }
    euler_solve(&u_init, &forcing(cfg), cfg.t_final, grid, &solver_options(cfg))
}

/// Navier–Stokes run for one viscosity, through the shear oracle when possible.
pub fn viscous_run(cfg: &StudyConfig, grid: &ChannelGrid<f64>, eps: f64) -> Result<Trajectory<f64>> {
    let (al, au) = friction_pair(cfg)?;
    if uses_fast_path(cfg) {
        let u = shear_profile(cfg)?;
        let oc = ShearOracleConfig {
            h: cfg.h,
            nz_fine: cfg.oracle_nz,
            clustering: cfg.oracle_clustering,
            steps: cfg.oracle_steps,
            snapshots: cfg.snapshots(),
        };
        let tr = shear_flow_oracle(|z| [u(z), 0.0], &al, &au, eps, cfg.t_final, &oc)?;
        return tr.to_trajectory(grid);
    }
    let u_init = initial_field(cfg, grid)?;
    ns_solve(&u_init, &forcing(cfg), eps, &al, &au, cfg.t_final, grid, &solver_options(cfg))
}

fn check_aligned(a: &Trajectory<f64>, b: &Trajectory<f64>) -> Result<()> {
    if a.snapshots.len() != b.snapshots.len() {
        return Err(Error::Input(format!(
            "trajectories have {} and {} snapshots",
            a.snapshots.len(),
            b.snapshots.len()
        )));
    }
    for (x, y) in a.snapshots.iter().zip(&b.snapshots) {
        if (x.t - y.t).abs() > 1e-9 * (1.0 + x.t.abs()) {
            return Err(Error::Input(format!("snapshot times {} and {} differ", x.t, y.t)));
        }
    }
    Ok(())
}

fn correctors(
    cfg: &StudyConfig,
    grid: &ChannelGrid<f64>,
    u0: &Trajectory<f64>,
    eps: f64,
) -> Result<Vec<crate::corrector::CorrectorField<f64>>> {
    let (al, au) = friction_pair(cfg)?;
    u0.snapshots
        .iter()
        .map(|s| build_corrector_channel(&s.u, &al, &au, eps, grid, s.t))
        .collect()
}

/// Time derivative of the corrector sequence by differences of snapshots.
fn corrector_rates(thetas: &[VectorField<f64>], times: &[f64]) -> Vec<VectorField<f64>> {
    let n = thetas.len();
    (0..n)
        .map(|s| {
            let (a, b) = if n == 1 {
                (0, 0)
            } else if s == 0 {
                (0, 1)
            } else if s == n - 1 {
                (n - 2, n - 1)
            } else {
                (s - 1, s + 1)
            };
            if a == b {
                return thetas[s].scaled(0.0);
            }
            let mut d = thetas[b].sub(&thetas[a], FieldKind::Other);
            for c in d.c.iter_mut() {
                for v in c.iter_mut() {
                    *v /= times[b] - times[a];
                }
            }
            d
        })
        .collect()
}

fn sweep_item(
    cfg: &StudyConfig,
    grid: &ChannelGrid<f64>,
    u0: &Trajectory<f64>,
    eps: f64,
) -> Result<Vec<NormReport>> {
    let ue = viscous_run(cfg, grid, eps)?;
    check_aligned(&ue, u0)?;
    let times: Vec<f64> = ue.times();
    let diffs: Vec<VectorField<f64>> = ue
        .snapshots
        .iter()
        .zip(&u0.snapshots)
        .map(|(a, b)| a.u.sub(&b.u, FieldKind::Difference))
        .collect();
    let mut out = Vec::new();
    let sup = |name: &str, v: &[f64], region: Region| NormReport::new(name, region, time_sup(v), eps, TimeMode::SupOverTime);
    let series = |f: &dyn Fn(&VectorField<f64>) -> Result<f64>, fs: &[VectorField<f64>]| -> Result<Vec<f64>> {
        fs.iter().map(f).collect()
    };
    let l2 = |f: &VectorField<f64>| norm_l2(f, grid, Region::Whole);
    let h1 = |f: &VectorField<f64>| norm_h1(f, grid, Region::Whole);
    match cfg.kind {
        StudyKind::UniformRates => {
            let a = cfg.region_a;
            let b = series(&|f| norm_linf(f, grid, Region::BoundaryStrip(a)), &diffs)?;
            let i = series(&|f| norm_linf(f, grid, Region::Interior(a)), &diffs)?;
            out.push(sup("diff_linf_boundary", &b, Region::BoundaryStrip(a))?);
            out.push(sup("diff_linf_interior", &i, Region::Interior(a))?);
        }
        _ => {
            let d2 = series(&l2, &diffs)?;
            let dh = series(&h1, &diffs)?;
            out.push(sup("diff_linf_l2", &d2, Region::Whole)?);
            out.push(NormReport::new("diff_l2_h1", Region::Whole, time_l2(&times, &dh)?, eps, TimeMode::L2OverTime)?);
            if cfg.kind == StudyKind::CorrectedRates {
                let thetas: Vec<VectorField<f64>>;
                let mut r_norms = Vec::new();
                if cfg.zero_corrector {
                    thetas = diffs.iter().map(|d| d.scaled(0.0)).collect();
                } else {
                    let cs = correctors(cfg, grid, u0, eps)?;
                    thetas = cs.iter().map(|c| c.theta.clone()).collect();
                    let steady = cfg.initial.is_shear() && cfg.forcing == super::config::ForcingSpec::Zero;
                    let rates = if steady { None } else { Some(corrector_rates(&thetas, &times)) };
                    for (s, c) in cs.iter().enumerate() {
                        let r = corrector_residual_r(c, rates.as_ref().map(|r| &r[s]), grid)?;
                        r_norms.push(l2(&r)?);
                    }
                }
                let rem: Vec<VectorField<f64>> = diffs
                    .iter()
                    .zip(&thetas)
                    .map(|(d, t)| {
                        let mut w = d.clone();
                        w.axpy(-1.0, t);
                        w.kind = FieldKind::Remainder;
                        w
                    })
                    .collect();
                let r2 = series(&l2, &rem)?;
                let rh = series(&h1, &rem)?;
                out.push(sup("rem_linf_l2", &r2, Region::Whole)?);
                out.push(NormReport::new("rem_l2_h1", Region::Whole, time_l2(&times, &rh)?, eps, TimeMode::L2OverTime)?);
                if !r_norms.is_empty() {
                    out.push(sup("r_eps_l2", &r_norms, Region::Whole)?);
                }
            }
        }
    }
    Ok(out)
}

/// Runs the viscosity sweep; a failing viscosity is recorded and the rest continue.
fn sweep(cfg: &StudyConfig) -> Result<ConvergenceReport> {
    cfg.validate()?;
    let start = Instant::now();
    let grid = study_grid(cfg)?;
    let mut report = ConvergenceReport::new(cfg);
    if uses_fast_path(cfg) {
        report.notes.push(format!(
            "x,y-invariant data: viscous runs use the one-dimensional reference solver on {} clustered nodes",
            cfg.oracle_nz
        ));
    }
    let u0 = euler_reference(cfg, &grid)?;
    let results: Vec<(f64, f64, Result<Vec<NormReport>>)> = cfg
        .eps_list
        .par_iter()
        .map(|&eps| {
            let t = Instant::now();
            let r = sweep_item(cfg, &grid, &u0, eps);
            (eps, t.elapsed().as_secs_f64(), r)
        })
        .collect();
    for (eps, secs, r) in results {
        report.wall_clock.per_item_seconds.push(secs);
        match r {
            Ok(n) => report.norms.extend(n),
            Err(e) => report.failures.push(EpsFailure {
                epsilon: eps,
                error: e.to_string(),
            }),
        }
    }
    report.wall_clock.total_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

fn band(b: (f64, f64), exponent: f64) -> Option<Target> {
    Some(Target::band(exponent, b.0, b.1))
}

/// `‖u^ε - u⁰‖` in `L^∞(0,T;L²)` and `L²(0,T;H¹)` across the sweep.
pub fn run_uncorrected_rates(cfg: &StudyConfig) -> Result<ConvergenceReport> {
    let cfg = StudyConfig {
        kind: StudyKind::UncorrectedRates,
        ..cfg.clone()
    };
    let mut r = sweep(&cfg)?;
    r.fit_series("diff_linf_l2", band(LINF_L2_BAND, 0.75));
    r.fit_series("diff_l2_h1", band(L2_H1_BAND, 0.25));
    Ok(r)
}

/// Same norms of the remainder `w^ε = u^ε - u⁰ - θ^ε`, plus `‖R_ε(θ)‖_{L²}`.
pub fn run_corrected_rates(cfg: &StudyConfig) -> Result<ConvergenceReport> {
    let cfg = StudyConfig {
        kind: StudyKind::CorrectedRates,
        ..cfg.clone()
    };
    let mut r = sweep(&cfg)?;
    r.fit_series("rem_linf_l2", band(LINF_L2_BAND, 0.75));
    r.fit_series("rem_l2_h1", band(L2_H1_BAND, 0.25));
    if !cfg.zero_corrector {
        r.fit_series("r_eps_l2", band(R_EPS_BAND, 0.75));
    }
    r.fit_series("diff_linf_l2", None);
    r.fit_series("diff_l2_h1", None);
    Ok(r)
}

/// Sup-norm rates near the walls and in the interior; requires zero forcing.
pub fn run_uniform_rates(cfg: &StudyConfig) -> Result<ConvergenceReport> {
    let cfg = StudyConfig {
        kind: StudyKind::UniformRates,
        ..cfg.clone()
    };
    let (tb, ti) = uniform_targets(cfg.nominal_m);
    let mut r = sweep(&cfg)?;
    r.fit_series("diff_linf_boundary", Some(Target::at_least(tb, UNIFORM_TOL)));
    r.fit_series("diff_linf_interior", Some(Target::at_least(ti, UNIFORM_TOL)));
    if let (Some(b), Some(i)) = (
        r.fit("diff_linf_boundary").and_then(|f| f.fit.as_ref()),
        r.fit("diff_linf_interior").and_then(|f| f.fit.as_ref()),
    ) {
        let ordered = i.slope >= b.slope;
        r.notes.push(format!(
            "interior slope {:.4} {} boundary slope {:.4}",
            i.slope,
            if ordered { ">=" } else { "<" },
            b.slope
        ));
    }
    r.notes.push(format!("targets use nominal regularity m = {}", cfg.nominal_m));
    Ok(r)
}
