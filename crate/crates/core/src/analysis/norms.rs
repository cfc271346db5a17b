use serde::{Deserialize, Serialize};

use crate::diff::Gradient;
use crate::error::{Error, Result};
use crate::field::VectorField;
use crate::geometry::ChannelGrid;
use crate::scalar::Real;

/// Part of the channel a norm is taken over. Widths are distances from the
/// nearer wall.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Whole,
    BoundaryStrip(f64),
    Interior(f64),
}

impl Region {
    /// Node mask for the grid.
    pub fn mask<T: Real>(&self, grid: &ChannelGrid<T>) -> Result<Vec<bool>> {
        let h = grid.h.as_f64();
        let a = match *self {
            Region::Whole => return Ok(vec![true; grid.nz]),
            Region::BoundaryStrip(a) | Region::Interior(a) => a,
        };
        if !(a > 0.0 && a < h / 2.0) {
            return Err(Error::Config(format!("region width {a} must lie in (0, h/2) = (0, {})", h / 2.0)));
        }
        let strip = matches!(self, Region::BoundaryStrip(_));
        Ok(grid
            .z_nodes
            .iter()
            .map(|z| {
                let z = z.as_f64();
                let d = z.min(h - z);
                if strip { d <= a } else { d > a }
            })
            .collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeMode {
    Instant,
    SupOverTime,
    L2OverTime,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    #[serde(rename = "norm")]
    pub name: String,
    pub region: Region,
    pub value: f64,
    pub epsilon: f64,
    pub t_mode: TimeMode,
}

impl NormReport {
    pub fn new(name: impl Into<String>, region: Region, value: f64, epsilon: f64, t_mode: TimeMode) -> Result<Self> {
        if !(value >= 0.0) {
            return Err(Error::Input(format!("norm value must be >= 0, got {value}")));
        }
        Ok(Self {
            name: name.into(),
            region,
            value,
            epsilon,
            t_mode,
        })
    }
}

fn weighted_sq<T: Real>(grid: &ChannelGrid<T>, mask: &[bool], comps: &[&[T]]) -> T {
    let nz = grid.nz;
    let mut s = T::zero();
    for col in 0..grid.nx * grid.ny {
        for k in 0..nz {
            if !mask[k] {
                continue;
            }
            let id = col * nz + k;
            let w = grid.cell_weight(k);
            for c in comps {
                s += w * c[id] * c[id];
            }
        }
    }
    s
}

/// Squared L² norm of a list of scalar arrays on the grid.
pub fn l2_sq_arrays<T: Real>(grid: &ChannelGrid<T>, region: Region, comps: &[&[T]]) -> Result<T> {
    let mask = region.mask(grid)?;
    Ok(weighted_sq(grid, &mask, comps))
}

pub fn norm_l2<T: Real>(f: &VectorField<T>, grid: &ChannelGrid<T>, region: Region) -> Result<T> {
    f.check_grid(grid)?;
    Ok(l2_sq_arrays(grid, region, &[&f.c[0], &f.c[1], &f.c[2]])?.sqrt())
}

/// `‖∇f‖` over the region.
pub fn norm_grad<T: Real>(f: &VectorField<T>, grid: &ChannelGrid<T>, region: Region) -> Result<T> {
    f.check_grid(grid)?;
    let mask = region.mask(grid)?;
    let g = Gradient::standard(grid);
    let mut s = T::zero();
    for c in &f.c {
        let d = g.of(c);
        s += weighted_sq(grid, &mask, &[&d[0], &d[1], &d[2]]);
    }
    Ok(s.sqrt())
}

/// `(‖f‖² + ‖∇f‖²)^{1/2}`.
pub fn norm_h1<T: Real>(f: &VectorField<T>, grid: &ChannelGrid<T>, region: Region) -> Result<T> {
    let a = norm_l2(f, grid, region)?;
    let b = norm_grad(f, grid, region)?;
    Ok((a * a + b * b).sqrt())
}

/// Largest Euclidean length over the nodes of the region.
pub fn norm_linf<T: Real>(f: &VectorField<T>, grid: &ChannelGrid<T>, region: Region) -> Result<T> {
    f.check_grid(grid)?;
    let mask = region.mask(grid)?;
    let nz = grid.nz;
    let mut m = T::zero();
    for id in 0..f.len() {
        if mask[id % nz] {
            let v = f.get(id);
            m = m.max((v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt());
        }
    }
    Ok(m)
}

/// `sup_t v(t)` over snapshots.
pub fn time_sup<T: Real>(values: &[T]) -> T {
    values.iter().fold(T::zero(), |a, v| a.max(*v))
}

/// `(∫ v(t)² dt)^{1/2}` by the trapezoid rule over snapshot times.
pub fn time_l2<T: Real>(times: &[T], values: &[T]) -> Result<T> {
    if times.len() != values.len() || times.is_empty() {
        return Err(Error::Input(format!(
            "{} times against {} values",
            times.len(),
            values.len()
        )));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Input("snapshot times must increase strictly".into()));
    }
    let sq: Vec<T> = values.iter().map(|v| *v * *v).collect();
    Ok(crate::fd::trapezoid(times, &sq).sqrt())
}
