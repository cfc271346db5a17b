use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::field::{FieldKind, VectorField};
use crate::geometry::{make_channel_grid, ChannelGrid, FrictionTensor, Wall};
use crate::solver::{read_checkpoint, Forcing};

use super::config::{ForcingSpec, InitialData, StudyConfig};

pub fn friction_pair(cfg: &StudyConfig) -> Result<(FrictionTensor<f64>, FrictionTensor<f64>)> {
    Ok((
        FrictionTensor::constant(Wall::Lower, cfg.a_lower)?,
        FrictionTensor::constant(Wall::Upper, cfg.a_upper)?,
    ))
}

pub fn forcing(cfg: &StudyConfig) -> Forcing<f64> {
    match cfg.forcing {
        ForcingSpec::Zero => Forcing::Zero,
        ForcingSpec::Custom(f) => Forcing::Uniform(f),
    }
}

/// Grid for the rate studies: the configured one, or `4×4×oracle_nz` when the
/// shear fast path is active.
pub fn study_grid(cfg: &StudyConfig) -> Result<ChannelGrid<f64>> {
    if uses_fast_path(cfg) {
        make_channel_grid(cfg.l1, cfg.l2, cfg.h, 4, 4, cfg.oracle_nz, cfg.oracle_clustering)
    } else {
        make_channel_grid(cfg.l1, cfg.l2, cfg.h, cfg.nx, cfg.ny, cfg.nz, cfg.clustering)
    }
}

pub fn uses_fast_path(cfg: &StudyConfig) -> bool {
    cfg.fast_path && cfg.initial.is_shear() && cfg.forcing == ForcingSpec::Zero
}

/// `U(z)` for x,y-invariant initial data.
pub fn shear_profile(cfg: &StudyConfig) -> Result<Box<dyn Fn(f64) -> f64 + Send + Sync>> {
    let h = cfg.h;
    match cfg.initial {
        InitialData::ShearTanh { amplitude, width } => {
            Ok(Box::new(move |z: f64| amplitude * ((z - h / 2.0) / width).tanh()))
        }
        InitialData::ShearCompatible => {
            let a = cfg.a_lower;
            if a != cfg.a_upper || a[0][1] != 0.0 || a[1][0] != 0.0 || a[0][0] != a[1][1] {
                return Err(Error::Config(
                    "shear_compatible needs the same isotropic friction on both walls".into(),
                ));
            }
            let alpha = a[0][0];
            Ok(Box::new(move |z: f64| 1.0 + 2.0 * alpha / h * z * (h - z)))
        }
        _ => Err(Error::Config("initial data are not a shear profile".into())),
    }
}

pub fn initial_field(cfg: &StudyConfig, grid: &ChannelGrid<f64>) -> Result<VectorField<f64>> {
    let h = cfg.h;
    let k = 2.0 * PI / cfg.l1;
    Ok(match &cfg.initial {
        InitialData::ShearTanh { .. } | InitialData::ShearCompatible => {
            let u = shear_profile(cfg)?;
            VectorField::from_fn(grid, FieldKind::Physical, |_, _, z| [u(z), 0.0, 0.0])
        }
        InitialData::PerturbedShear { amplitude, width } => {
            let (a, w) = (*amplitude, *width);
            let lc = |z: f64| ((z - h / 2.0) / w).cosh().ln();
            let top = (h / (2.0 * w)).cosh().ln();
            VectorField::from_fn(grid, FieldKind::Physical, |x, _, z| {
                let th = ((z - h / 2.0) / w).tanh();
                [
                    a * th * (1.0 + 0.1 * (k * x).cos()),
                    0.0,
                    0.1 * a * k * (k * x).sin() * w * (lc(z) - top),
                ]
            })
        }
        InitialData::TaylorGreenLike => VectorField::from_fn(grid, FieldKind::Physical, |x, _, z| {
            [
                PI / h * (k * x).sin() * (PI * z / h).cos(),
                0.0,
                -k * (k * x).cos() * (PI * z / h).sin(),
            ]
        }),
        InitialData::Custom(path) => {
            let c = read_checkpoint::<f64>(path)?;
            if !c.state.u.fits(grid) {
                return Err(Error::Input(format!(
                    "{}: checkpoint grid {}x{}x{} does not match the study grid",
                    path.display(),
                    c.grid.nx,
                    c.grid.ny,
                    c.grid.nz
                )));
            }
            c.state.u
        }
    })
}

/// Time-dependent solenoidal Euler-like field used for the corrector scalings:
/// a tanh shear plus one stream-function cell and a cross-stream component,
/// all scaled by `1 + t/2`.
pub fn scaling_field(grid: &ChannelGrid<f64>, t: f64) -> VectorField<f64> {
    let h = grid.h;
    let k = 2.0 * PI / grid.l1;
    let s = 1.0 + t / 2.0;
    VectorField::from_fn(grid, FieldKind::Physical, |x, _, z| {
        let u = 0.5 * ((z - h / 2.0) / 0.3).tanh();
        [
            s * (u + 0.1 * (k * x).sin() * (PI / h) * (PI * z / h).cos()),
            0.2 * (k * x).cos() * s * (z / h),
            -s * 0.1 * k * (k * x).cos() * (PI * z / h).sin(),
        ]
    })
}
