//! Time integration on the channel grid.
mod checkpoint;
mod ns;
mod oracle;
mod projection;
mod remainder;
mod state;

pub use checkpoint::{read_checkpoint, write_checkpoint, Checkpoint};
pub use ns::{euler_solve, ns_solve, ChannelSolver};
pub use oracle::{interpolate_profile, shear_flow_oracle, ShearOracleConfig, ShearTrajectory};
pub use remainder::{nonlinear_gap_j, nonlinear_gap_split, remainder, JSplit};
pub use state::{FlowState, Forcing, SolverOptions, StepDiagnostics, Trajectory};
