//! Norms, rate fits and numerical checks of the functional inequalities.
mod conormal;
mod inequalities;
mod norms;
mod rates;
mod shape;

pub use conormal::{conormal_norm, conormal_norm_of_gradient, ConormalNorm, MAX_CONORMAL_ORDER};
pub use inequalities::{
    agmon_anisotropic_check, lemma1_ibp_check, lemma_agmon_check, trace_inequality_check, AgmonReport,
    BoxField, IbpReport, TraceReport, SOLENOIDAL_TOL, TRACE_GRAD_FLOOR,
};
pub use norms::{
    l2_sq_arrays, norm_grad, norm_h1, norm_l2, norm_linf, time_l2, time_sup, NormReport, Region, TimeMode,
};
pub use rates::{fit_rate, RateFit, FIT_FLOOR};
pub use shape::{shape_bc_equivalence_check, ShapeBcReport};
