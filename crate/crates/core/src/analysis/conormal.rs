use crate::diff::Gradient;
use crate::error::{Error, Result};
use crate::fd::ColumnOp;
use crate::field::VectorField;
use crate::geometry::ChannelGrid;
use crate::scalar::Real;

use super::norms::{l2_sq_arrays, Region};

/// Highest supported conormal order.
pub const MAX_CONORMAL_ORDER: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct ConormalNorm<T> {
    pub value: T,
    /// Set when the grid is too coarse to resolve `m` derivatives reliably.
    pub warning: Option<String>,
}

/// Generators `∂x`, `∂y`, `φ(z)∂z` with `φ = z(h-z)/h`, which are tangent to
/// both walls.
pub(crate) struct Conormal<T: Real> {
    grad: Gradient<T>,
    dz: ColumnOp<T>,
    phi: Vec<T>,
    nz: usize,
}

impl<T: Real> Conormal<T> {
    pub fn new(grid: &ChannelGrid<T>) -> Self {
        Self {
            grad: Gradient::standard(grid),
            dz: ColumnOp::derivative(&grid.z_nodes, 1, 5),
            phi: grid.z_nodes.iter().map(|&z| z * (grid.h - z) / grid.h).collect(),
            nz: grid.nz,
        }
    }

    fn weighted_z(&self, f: &[T]) -> Vec<T> {
        let mut d = self.grad.along_z(&self.dz, f);
        for (id, v) in d.iter_mut().enumerate() {
            *v *= self.phi[id % self.nz];
        }
        d
    }

    /// `Σ_{|β|≤m} ‖Z^β f‖²` for one scalar array. `Z^β` applies the x
    /// generator first, then y, then the weighted z generator.
    pub fn sum_sq(&self, grid: &ChannelGrid<T>, f: &[T], m: usize) -> Result<T> {
        let sp = self.grad.spectral();
        let mut s = T::zero();
        for bx in 0..=m {
            for by in 0..=(m - bx) {
                let base = sp.derivative(f, bx, by);
                let mut g = base;
                for bz in 0..=(m - bx - by) {
                    if bz > 0 {
                        g = self.weighted_z(&g);
                    }
                    s += l2_sq_arrays(grid, Region::Whole, &[&g])?;
                }
            }
        }
        Ok(s)
    }
}

fn order_check(m: usize) -> Result<()> {
    if m > MAX_CONORMAL_ORDER {
        return Err(Error::Config(format!(
            "conormal order {m} exceeds the supported maximum {MAX_CONORMAL_ORDER}"
        )));
    }
    Ok(())
}

pub(crate) fn resolution_warning<T: Real>(grid: &ChannelGrid<T>, m: usize) -> Option<String> {
    let tangential = grid.nx.min(grid.ny) / 2;
    if m > 0 && (tangential < 2 * m || grid.nz < 8 * m) {
        Some(format!(
            "order {m} on a {}x{}x{} grid: derivatives of this order are poorly resolved",
            grid.nx, grid.ny, grid.nz
        ))
    } else {
        None
    }
}

/// `(Σ_{|β|≤m} ‖Z^β f‖²_{L²})^{1/2}` summed over the components of `f`.
pub fn conormal_norm<T: Real>(f: &VectorField<T>, grid: &ChannelGrid<T>, m: usize) -> Result<ConormalNorm<T>> {
    order_check(m)?;
    f.check_grid(grid)?;
    let z = Conormal::new(grid);
    let mut s = T::zero();
    for c in &f.c {
        s += z.sum_sq(grid, c, m)?;
    }
    Ok(ConormalNorm {
        value: s.sqrt(),
        warning: resolution_warning(grid, m),
    })
}

/// `‖∇f‖_{H^m_co}`: the conormal norm of every first derivative.
pub fn conormal_norm_of_gradient<T: Real>(f: &VectorField<T>, grid: &ChannelGrid<T>, m: usize) -> Result<T> {
    order_check(m)?;
    f.check_grid(grid)?;
    let z = Conormal::new(grid);
    let g = Gradient::new(grid, ColumnOp::derivative(&grid.z_nodes, 1, 5));
    let mut s = T::zero();
    for c in &f.c {
        for d in g.of(c) {
            s += z.sum_sq(grid, &d, m)?;
        }
    }
    Ok(s.sqrt())
}
