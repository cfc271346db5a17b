//! Explicit boundary-layer corrector `θ^ε` on the channel and on the torus.

mod channel;
mod profile;
mod scalings;
mod torus;

pub use channel::{
    build_corrector_channel, corrector_residual_r, corrector_time_derivative, euler_boundary_data_channel,
    write_corrector_csv, BoundaryData, WallPair, CorrectorField, CorrectorLayers, LayerPlanes, SeparableNorms,
};
pub use profile::{channel_profile, torus_cutoff_jet, torus_profile, ProfileJet, JET};
pub use scalings::{corrector_norm_scalings, DerivativeSpec, ScalingRow, ScalingTable};
pub use torus::{
    build_corrector_torus, surface_divergence, torus_multipliers, CurvatureMode, TorusBoundaryData,
    TorusCorrectorField, TorusGrid,
};
