//! Channel grid, cutoff and weight functions, and the solid-torus chart.

mod channel;
mod friction;
mod torus;

pub use channel::{
    cutoff_sigma, cutoff_sigma_jet, make_channel_grid, smooth_step, smooth_step_jet, tanh_map,
    weight_zeta, ChannelGrid, Wall,
};
pub use friction::FrictionTensor;
pub use torus::{torus_metric, torus_point, torus_shape_operator, TorusChart, TorusMetric};
