use std::f64::consts::PI;
use std::time::Instant;

use crate::analysis::{
    agmon_anisotropic_check, lemma1_ibp_check, lemma_agmon_check, shape_bc_equivalence_check,
    trace_inequality_check, BoxField, NormReport, Region, TimeMode,
};
use crate::corrector::{
    build_corrector_channel, build_corrector_torus, channel_profile, corrector_norm_scalings, torus_multipliers,
    torus_profile, CorrectorLayers, CurvatureMode, DerivativeSpec, TorusBoundaryData, TorusGrid,
};
use crate::error::Result;
use crate::fd::fornberg;
use crate::field::{FieldKind, VectorField};
use crate::geometry::{make_channel_grid, ChannelGrid, TorusChart, Wall};
use crate::spectral::Spectral;

use super::config::{StudyConfig, StudyKind};
use super::data::{friction_pair, scaling_field};
use super::report::{ConvergenceReport, Target};

/// Half-width of the pass band for the explicit corrector exponents.
pub const SCALING_TOL: f64 = 0.05;
/// Minimum error reduction per mesh doubling for second-order quantities.
pub const REFINEMENT_RATIO: f64 = 3.5;
/// Largest admissible growth of an inequality ratio across a test family.
pub const MAX_GROWTH: f64 = 10.0;
/// Tolerance for the flat-limit comparison of torus and channel multipliers.
pub const FLAT_LIMIT_TOL: f64 = 1e-12;

/// Expected exponents `(tangential, normal)` of the L² norm of `∂t^l ∂τ^k ∂z^n θ`.
pub fn l2_exponents(n: usize) -> (f64, f64) {
    let tan = 0.75 - 0.5 * n as f64;
    let nor = match n {
        0 => 1.0,
        1 => 0.75,
        _ => 0.25,
    };
    (tan, nor)
}

fn spec_label(s: DerivativeSpec) -> String {
    format!("l{}k{}n{}", s.l, s.k, s.n)
}

/// ε-scalings of the explicit corrector over the admissible derivative grid.
pub fn run_corrector_scalings(cfg: &StudyConfig) -> Result<ConvergenceReport> {
    let cfg = StudyConfig {
        kind: StudyKind::CorrectorScalings,
        ..cfg.clone()
    };
    let start = Instant::now();
    let grid = make_channel_grid(
        cfg.l1,
        cfg.l2,
        cfg.h,
        cfg.scalings_nxy,
        cfg.scalings_nxy,
        cfg.scalings_nz,
        cfg.scalings_clustering,
    )?;
    let (al, au) = friction_pair(&cfg)?;
    let times = [0.0, cfg.t_final / 2.0, cfg.t_final];
    let dt = 1e-4 * cfg.t_final;
    let mut report = ConvergenceReport::new(&cfg);
    let mut fits: Vec<(String, f64)> = Vec::new();
    for (l, k) in [(0, 0), (0, 1), (0, 2), (1, 0)] {
        for n in 0..=2 {
            let spec = DerivativeSpec::new(l, k, n)?;
            let table = corrector_norm_scalings(
                |t| Ok(scaling_field(&grid, t)),
                &al,
                &au,
                &grid,
                &cfg.scalings_eps,
                spec,
                &times,
                dt,
            )?;
            let label = spec_label(spec);
            let (et, en) = l2_exponents(n);
            let mut series = vec![
                (format!("theta_tan_l2_{label}"), et, TimeMode::SupOverTime),
                (format!("theta_nor_l2_{label}"), en, TimeMode::SupOverTime),
            ];
            if n == 1 {
                series.push((format!("theta_tan_zeta_{label}"), 0.25, TimeMode::SupOverTime));
                series.push((format!("theta_nor_zeta_{label}"), 0.5, TimeMode::SupOverTime));
            }
            if l == 0 && k == 1 && n == 0 {
                series.push(("theta_tan_sup_dtau".into(), 0.5, TimeMode::SupOverTime));
                series.push(("theta_nor_sup_dtau".into(), 1.0, TimeMode::SupOverTime));
            }
            if l == 0 && k == 0 && n == 1 {
                series.push(("theta_tan_sup_dz".into(), 0.0, TimeMode::SupOverTime));
                series.push(("theta_nor_sup_dz".into(), 0.5, TimeMode::SupOverTime));
            }
            for row in &table.rows {
                let v = &row.norms;
                for (name, _, mode) in &series {
                    let value = if name.starts_with("theta_tan_l2") {
                        v.tan_l2
                    } else if name.starts_with("theta_nor_l2") {
                        v.nor_l2
                    } else if name.starts_with("theta_tan_zeta") {
                        v.tan_zeta
                    } else if name.starts_with("theta_nor_zeta") {
                        v.nor_zeta
                    } else if name.starts_with("theta_tan_sup") {
                        v.tan_sup
                    } else {
                        v.nor_sup
                    };
                    report
                        .norms
                        .push(NormReport::new(name.clone(), Region::Whole, value, row.epsilon, *mode)?);
                }
            }
            fits.extend(series.into_iter().map(|(s, e, _)| (s, e)));
        }
    }
    for (s, e) in fits {
        report.fit_series(&s, Some(Target::symmetric(e, SCALING_TOL)));
    }
    report.notes.push(format!(
        "sup over t in {:?}; time derivatives by central differences with dt = {dt:e}",
        times
    ));
    report.wall_clock.total_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

fn channel_check_grid(cfg: &StudyConfig, nxy: usize, nz: usize) -> Result<ChannelGrid<f64>> {
    make_channel_grid(cfg.l1, cfg.l2, cfg.h, nxy, nxy, nz, 2.0)
}

fn sci(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn ratios(errs: &[f64]) -> Vec<f64> {
    errs.windows(2).map(|w| w[0] / w[1]).collect()
}

fn refinement_check(report: &mut ConvergenceReport, name: &str, errs: &[f64], what: &str) {
    let r = ratios(errs);
    let worst = r.iter().cloned().fold(f64::INFINITY, f64::min);
    report.check(
        name,
        worst,
        REFINEMENT_RATIO,
        worst >= REFINEMENT_RATIO,
        format!("{what}: errors {}, ratios {r:.2?}", sci(errs)),
    );
}

/// Structural properties of the channel corrector: wall values of `θ₃`,
/// discrete divergence under refinement and the Neumann condition.
pub fn run_corrector_checks(cfg: &StudyConfig) -> Result<ConvergenceReport> {
    let cfg = StudyConfig {
        kind: StudyKind::CorrectorScalings,
        ..cfg.clone()
    };
    let start = Instant::now();
    let mut report = ConvergenceReport::new(&cfg);
    let (al, au) = friction_pair(&cfg)?;
    let eps = 1e-4;
    let mut div_errs = Vec::new();
    let mut neu_errs = Vec::new();
    let mut wall_theta3 = 0.0f64;
    let mut mult_err = 0.0f64;
    for nz in [513, 1025, 2049] {
        let grid = channel_check_grid(&cfg, 8, nz)?;
        let u0 = scaling_field(&grid, 0.0);
        let c = build_corrector_channel(&u0, &al, &au, eps, &grid, 0.0)?;
        wall_theta3 = wall_theta3.max(c.theta.wall_normal_max());
        let sp = Spectral::new(&grid);
        let dz = crate::fd::ColumnOp::d1(&grid.z_nodes);
        let tx = sp.derivative(&c.theta.c[0], 1, 0);
        let ty = sp.derivative(&c.theta.c[1], 0, 1);
        let mut div = 0.0f64;
        let mut scale = 0.0f64;
        for col in 0..grid.nx * grid.ny {
            let s = &c.theta.c[2][col * nz..(col + 1) * nz];
            for k in 0..nz {
                let id = col * nz + k;
                let d3 = dz.apply_at(s, k);
                div = div.max((tx[id] + ty[id] + d3).abs());
                scale = scale.max(d3.abs());
            }
        }
        div_errs.push(div / scale);
        let wl = fornberg(0.0, &grid.z_nodes[..3], 1)[1].clone();
        let top: Vec<f64> = grid.z_nodes[nz - 3..].to_vec();
        let wu = fornberg(grid.h, &top, 1)[1].clone();
        let mut neu = 0.0f64;
        let mut uscale = 0.0f64;
        for col in 0..grid.nx * grid.ny {
            for comp in 0..2 {
                let f = &c.theta.c[comp][col * nz..(col + 1) * nz];
                let dl: f64 = (0..3).map(|q| wl[q] * f[q]).sum();
                let du: f64 = (0..3).map(|q| wu[q] * f[nz - 3 + q]).sum();
                let ul = c.layers.lower.u_tilde[col][comp];
                let uu = c.layers.upper.u_tilde[col][comp];
                neu = neu.max((dl - ul).abs()).max((du - uu).abs());
                uscale = uscale.max(ul.abs()).max(uu.abs());
            }
        }
        neu_errs.push(neu / uscale);
        let layers: &CorrectorLayers<f64> = &c.layers;
        let (mt, _) = layers.multipliers(1)?;
        mult_err = mult_err.max((mt[0][0] - 1.0).abs()).max((mt[1][nz - 1] - 1.0).abs());
    }
    report.check(
        "theta3_wall",
        wall_theta3,
        0.0,
        wall_theta3 == 0.0,
        "largest |θ₃| on either wall",
    );
    refinement_check(&mut report, "divergence_refinement", &div_errs, "max |div θ| / max |∂zθ₃|");
    report.check(
        "neumann_continuum",
        mult_err,
        1e-12,
        mult_err <= 1e-12,
        "|-ε φ''(wall) - 1| for the exact normal-derivative multiplier",
    );
    refinement_check(
        &mut report,
        "neumann_refinement",
        &neu_errs,
        "one-sided ∂zθ_i at the walls against ũ_i, relative",
    );
    report.wall_clock.total_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

fn growth(values: &[f64]) -> f64 {
    let first = values[0];
    values.iter().cloned().fold(0.0, f64::max) / first
}

fn growth_check(report: &mut ConvergenceReport, name: &str, family: &[(String, f64)]) {
    let values: Vec<f64> = family.iter().map(|x| x.1).collect();
    let g = growth(&values);
    let worst = family
        .iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|x| x.0.clone())
        .unwrap_or_default();
    report.check(
        name,
        g,
        MAX_GROWTH,
        g.is_finite() && g <= MAX_GROWTH,
        format!("ratios {values:.4?}; largest at {worst}"),
    );
}

/// Field with a wall-normal component vanishing on both walls and zero divergence.
fn solenoidal_test_field(grid: &ChannelGrid<f64>) -> VectorField<f64> {
    let h = grid.h;
    let k = 2.0 * PI / grid.l1;
    VectorField::from_fn(grid, FieldKind::Other, |x, _, z| {
        let q = PI / h;
        [
            z * z + (k * x).sin() * (q * z).cos(),
            0.0,
            -(k / q) * (k * x).cos() * (q * z).sin(),
        ]
    })
}

fn shape_test_field(e1: f64, e2: f64, xi: f64) -> [f64; 3] {
    [e2.sin() * (1.0 + xi), e1.cos() + xi * xi, xi * e1.sin()]
}

fn shape_refinement(report: &mut ConvergenceReport, chart: &TorusChart<f64>) -> Result<()> {
    let mut errs = Vec::new();
    for d in [1e-2, 5e-3, 2.5e-3] {
        errs.push(shape_bc_equivalence_check(shape_test_field, chart, 16, 16, d)?.residual);
    }
    refinement_check(report, "shape_refinement", &errs, "shape-operator condition against (curl u) × n = 0");
    let rot = shape_bc_equivalence_check(|_, _, _| [0.0, 1.0, 0.0], chart, 16, 16, 2.5e-3)?.residual;
    report.check(
        "shape_rotation",
        rot,
        1e-6,
        rot < 1e-6,
        "toroidal rotation field (0, 1, 0)",
    );
    Ok(())
}

/// Agmon-type, trace and integration-by-parts inequalities over fixed test families.
pub fn run_inequality_suite(cfg: &StudyConfig) -> Result<ConvergenceReport> {
    let cfg = StudyConfig {
        kind: StudyKind::InequalitySuite,
        ..cfg.clone()
    };
    let start = Instant::now();
    let mut report = ConvergenceReport::new(&cfg);
    let tp = 2.0 * PI;

    let mut fam = Vec::new();
    for n in [1usize, 4, 16, 32] {
        let b = BoxField::from_fn(&[tp], &[128], |x| (n as f64 * x[0]).sin())?;
        fam.push((format!("sin({n}x), d=1, k=1"), lemma_agmon_check(&b, 1)?));
    }
    growth_check(&mut report, "lemma_agmon_1d", &fam);
    let mut fam = Vec::new();
    for n in [1usize, 2, 4, 8] {
        let b = BoxField::from_fn(&[tp, tp], &[64, 64], |x| (n as f64 * x[0]).sin() * (x[1]).cos())?;
        fam.push((format!("sin({n}x)cos(y), d=2, k=2"), lemma_agmon_check(&b, 2)?));
    }
    growth_check(&mut report, "lemma_agmon_2d", &fam);
    let mut fam = Vec::new();
    for w in [0.8, 0.4, 0.2, 0.1] {
        let b = BoxField::from_fn(&[tp, tp, tp], &[32, 32, 32], |x| {
            let r2: f64 = x.iter().map(|v| (v - PI).powi(2)).sum();
            (-r2 / (2.0 * w * w)).exp()
        })?;
        fam.push((format!("gaussian width {w}, d=3, k=3"), lemma_agmon_check(&b, 3)?));
    }
    growth_check(&mut report, "lemma_agmon_3d", &fam);

    let a = cfg.region_a;
    let m = 3;
    let g = make_channel_grid(cfg.l1, cfg.l2, cfg.h, 8, 8, 257, 2.0)?;
    let mut bfam = Vec::new();
    let mut ifam = Vec::new();
    for delta in [0.1, 0.03, 0.01, 0.003] {
        let f = VectorField::from_fn(&g, FieldKind::Other, |x, _, z| {
            [(-z / delta).exp() * (1.0 + 0.5 * (tp * x / cfg.l1).sin()), 0.0, 0.0]
        });
        let r = agmon_anisotropic_check(&f, &g, m, a)?;
        bfam.push((format!("exp(-z/{delta})"), r.ratio_boundary));
        ifam.push((format!("exp(-z/{delta})"), r.ratio_interior));
    }
    growth_check(&mut report, "agmon_boundary_delta_sweep", &bfam);
    growth_check(&mut report, "agmon_interior_delta_sweep", &ifam);
    let mut bfam = Vec::new();
    for n in [1usize, 2, 3] {
        let f = VectorField::from_fn(&g, FieldKind::Other, |x, y, z| {
            let s = (n as f64 * tp * x / cfg.l1).sin() * (tp * y / cfg.l2).cos();
            [s * z * (cfg.h - z), 0.0, 0.0]
        });
        bfam.push((format!("tangential mode {n}"), agmon_anisotropic_check(&f, &g, m, a)?.ratio_boundary));
    }
    growth_check(&mut report, "agmon_boundary_tangential", &bfam);

    let mut gaps = Vec::new();
    for nz in [33, 65, 129] {
        let g = make_channel_grid(cfg.l1, cfg.l2, cfg.h, 8, 8, nz, 1.0)?;
        let f = solenoidal_test_field(&g);
        let w = VectorField::from_fn(&g, FieldKind::Other, |x, y, z| {
            let s = (tp * x / cfg.l1).sin();
            [1.0 + z + s * z.exp(), (tp * y / cfg.l2).sin() * z, (tp * x / cfg.l1).cos() * z * z]
        });
        gaps.push(lemma1_ibp_check(&f, &w, &g)?.gap);
    }
    refinement_check(&mut report, "lemma1_refinement", &gaps, "integration-by-parts gap");

    let g = make_channel_grid(cfg.l1, cfg.l2, cfg.h, 8, 8, 257, 1.0)?;
    let mut fam = Vec::new();
    for n in [1usize, 2, 4, 8] {
        let u = VectorField::from_fn(&g, FieldKind::Other, |_, _, z| {
            [(n as f64 * PI * z / cfg.h).cos(), 0.0, 0.0]
        });
        if let Some(r) = trace_inequality_check(&u, &g)?.ratio {
            fam.push((format!("cos({n}πz/h)"), r));
        }
    }
    growth_check(&mut report, "trace_family", &fam);
    let c = VectorField::from_fn(&g, FieldKind::Other, |_, _, _| [1.0, 0.0, 0.0]);
    if let Some(note) = trace_inequality_check(&c, &g)?.note {
        report.notes.push(format!("trace check, constant field: {note}"));
    }

    let chart = TorusChart::with_default_collar(cfg.torus_major, cfg.torus_minor)?;
    shape_refinement(&mut report, &chart)?;
    report.wall_clock.total_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

fn torus_data(grid: &TorusGrid<f64>) -> TorusBoundaryData<f64> {
    TorusBoundaryData::from_fn(grid, 0.0, |e1, e2| [e2.sin() + 0.5 * e1.cos(), (e1 + e2).cos()])
}

/// Torus corrector: surface values, Neumann condition, metric divergence,
/// flat limit, shape-operator condition and L² scalings.
pub fn run_torus_suite(cfg: &StudyConfig) -> Result<ConvergenceReport> {
    let cfg = StudyConfig {
        kind: StudyKind::TorusSuite,
        ..cfg.clone()
    };
    let start = Instant::now();
    let mut report = ConvergenceReport::new(&cfg);
    let chart = TorusChart::with_default_collar(cfg.torus_major, cfg.torus_minor)?;
    let eps = 1e-4;

    let mut theta3 = 0.0f64;
    let mut neu = Vec::new();
    let mut div = Vec::new();
    for (n, n3) in [(32, 129), (64, 257), (128, 513)] {
        let grid = TorusGrid::new(chart, n, n, n3, 3.0)?;
        let c = build_corrector_torus(&torus_data(&grid), eps, &grid, CurvatureMode::Chart)?;
        theta3 = theta3.max(c.surface_normal_max());
        let d = c.surface_normal_derivative(3);
        let se = eps.sqrt();
        let mut e = 0.0f64;
        let mut s = 0.0f64;
        for (col, dv) in d.iter().enumerate() {
            let u = c.data.u_tilde[col];
            let ee = c.e_error[col];
            for q in 0..2 {
                e = e.max((dv[q] - (u[q] - se * ee[q])).abs());
                s = s.max(u[q].abs());
            }
        }
        neu.push(e / s);
        let md = c.metric_divergence()?;
        let dmax = md.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let scale = c.div_tau.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        div.push(dmax / scale);
    }
    report.check("theta3_surface", theta3, 0.0, theta3 == 0.0, "largest |θ₃| at ξ₃ = 0");
    refinement_check(&mut report, "neumann_refinement", &neu, "∂ξθ_i(0) against ũ_i − √ε E_i, relative");
    refinement_check(&mut report, "metric_divergence_refinement", &div, "max |div_q θ| / max |div_τ ũ|");

    let a = chart.a;
    let h = 8.0 * a;
    let mut flat = 0.0f64;
    for q in 0..=400 {
        let xi = 3.0 * a * q as f64 / 400.0;
        let phi_t = torus_profile(xi, a, eps);
        let m = torus_multipliers((0.0, 0.0), xi, eps, &phi_t);
        let phi_c = channel_profile(xi, Wall::Lower, h, eps)?;
        let tan = -eps * phi_c.deriv(1);
        let nor = eps * phi_c.value();
        flat = flat.max((m[0] - tan).abs()).max((m[1] - tan).abs()).max((m[2] - nor).abs());
    }
    report.check(
        "flat_limit",
        flat,
        FLAT_LIMIT_TOL,
        flat <= FLAT_LIMIT_TOL,
        format!("κ = 0 multipliers against the channel profile with h = 8a = {h}"),
    );

    shape_refinement(&mut report, &chart)?;

    let grid = TorusGrid::new(chart, 16, 16, cfg.scalings_nz, cfg.scalings_clustering)?;
    let data = torus_data(&grid);
    for &e in &cfg.scalings_eps {
        let c = build_corrector_torus(&data, e, &grid, CurvatureMode::Chart)?;
        let (t, n) = c.l2_norms()?;
        report
            .norms
            .push(NormReport::new("torus_theta_tan_l2", Region::Whole, t, e, TimeMode::Instant)?);
        report
            .norms
            .push(NormReport::new("torus_theta_nor_l2", Region::Whole, n, e, TimeMode::Instant)?);
    }
    let (et, en) = l2_exponents(0);
    report.fit_series("torus_theta_tan_l2", Some(Target::symmetric(et, SCALING_TOL)));
    report.fit_series("torus_theta_nor_l2", Some(Target::symmetric(en, SCALING_TOL)));
    report.wall_clock.total_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}
