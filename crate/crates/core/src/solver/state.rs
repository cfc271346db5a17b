use serde::{Deserialize, Serialize};

use crate::field::{ScalarField, VectorField};
use crate::geometry::FrictionTensor;
use crate::scalar::Real;

/// Body force.
#[derive(Clone, Debug, PartialEq)]
pub enum Forcing<T> {
    Zero,
    /// Spatially uniform, steady force.
    Uniform([T; 3]),
    /// Steady force field on the solver grid.
    Field(VectorField<T>),
}

impl<T: Real> Forcing<T> {
    pub fn is_zero(&self) -> bool {
        match self {
            Forcing::Zero => true,
            Forcing::Uniform(f) => f.iter().all(|v| *v == T::zero()),
            Forcing::Field(f) => f.c.iter().flatten().all(|v| *v == T::zero()),
        }
    }
}

/// One snapshot of the flow.
#[derive(Clone, Debug)]
pub struct FlowState<T> {
    pub u: VectorField<T>,
    /// Pressure, defined up to a constant (zero mean).
    pub p: ScalarField<T>,
    pub t: T,
}

/// Per-step diagnostics: kinetic energy `‖u‖²`, max discrete divergence, max
/// Robin residual on the walls (zero for Euler runs).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepDiagnostics {
    pub t: f64,
    pub energy: f64,
    pub div_max: f64,
    pub robin_residual: f64,
}

#[derive(Clone, Debug)]
pub struct Trajectory<T> {
    pub snapshots: Vec<FlowState<T>>,
    pub cadence: T,
    /// Viscosity; zero for Euler.
    pub epsilon: T,
    pub friction: Option<(FrictionTensor<T>, FrictionTensor<T>)>,
    pub forcing: Forcing<T>,
    pub dt: T,
    pub diagnostics: Vec<StepDiagnostics>,
}

impl<T: Real> Trajectory<T> {
    pub fn times(&self) -> Vec<T> {
        self.snapshots.iter().map(|s| s.t).collect()
    }

    pub fn last(&self) -> &FlowState<T> {
        self.snapshots.last().expect("trajectory has at least the initial state")
    }

    pub fn write_diagnostics_csv(&self, path: &std::path::Path) -> crate::Result<()> {
        use std::io::Write;
        let io = |e| crate::Error::io(path, e);
        let mut w = std::io::BufWriter::new(std::fs::File::create(path).map_err(io)?);
        writeln!(w, "t,energy,div_max,robin_residual").map_err(io)?;
        for d in &self.diagnostics {
            writeln!(w, "{:e},{:e},{:e},{:e}", d.t, d.energy, d.div_max, d.robin_residual).map_err(io)?;
        }
        w.flush().map_err(io)
    }
}

/// Time-stepping controls. The step is fixed for a run: the largest step not
/// exceeding `dt_max`, the CFL bound of the initial data, and the cadence, that
/// divides the cadence evenly.
#[derive(Clone, Copy, Debug)]
pub struct SolverOptions<T> {
    pub cadence: T,
    pub cfl: T,
    pub dt_max: Option<T>,
    pub dealias: bool,
    /// Abort when `‖u‖_∞` exceeds this multiple of its initial value.
    pub blowup_factor: T,
    pub record_diagnostics: bool,
}

impl<T: Real> SolverOptions<T> {
    pub fn with_cadence(cadence: T) -> Self {
        Self {
            cadence,
            cfl: T::lit(0.5),
            dt_max: None,
            dealias: true,
            blowup_factor: T::lit(10.0),
            record_diagnostics: true,
        }
    }
}
