//! Convergence studies: configuration, execution and reporting.

mod config;
mod data;
mod rates;
mod report;
mod suites;

pub use config::{ForcingSpec, InitialData, StudyConfig, StudyKind};
pub use data::{friction_pair, initial_field, scaling_field, shear_profile, study_grid, uses_fast_path};
pub use rates::{
    euler_reference, run_corrected_rates, run_uncorrected_rates, run_uniform_rates, uniform_targets, viscous_run,
    L2_H1_BAND, LINF_L2_BAND, R_EPS_BAND, UNIFORM_TOL,
};
pub use report::{
    emit_report, read_report_json, CheckEntry, ConvergenceReport, EpsFailure, ReportFormat, SeriesFit, Target,
    WallClock,
};
pub use suites::{
    l2_exponents, run_corrector_checks, run_corrector_scalings, run_inequality_suite, run_torus_suite,
    FLAT_LIMIT_TOL, MAX_GROWTH, REFINEMENT_RATIO, SCALING_TOL,
};

use crate::error::Result;

/// Runs the study selected by `cfg.kind`.
pub fn run_study(cfg: &StudyConfig) -> Result<ConvergenceReport> {
    match cfg.kind {
        StudyKind::UncorrectedRates => run_uncorrected_rates(cfg),
        StudyKind::CorrectedRates => run_corrected_rates(cfg),
        StudyKind::UniformRates => run_uniform_rates(cfg),
        StudyKind::CorrectorScalings => run_corrector_scalings(cfg),
        StudyKind::InequalitySuite => run_inequality_suite(cfg),
        StudyKind::TorusSuite => run_torus_suite(cfg),
    }
}
