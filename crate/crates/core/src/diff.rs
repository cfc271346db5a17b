//! Discrete derivatives of channel fields: spectral in x, y and finite
//! differences in z.

use crate::fd::ColumnOp;
use crate::field::{FieldKind, VectorField};
use crate::geometry::ChannelGrid;
use crate::scalar::Real;
use crate::spectral::Spectral;

/// Discrete gradient: spectral in x, y and finite differences in z.
pub struct Gradient<T: Real> {
    sp: Spectral<T>,
    dz: ColumnOp<T>,
    nx: usize,
    ny: usize,
    nz: usize,
}

impl<T: Real> Gradient<T> {
    pub fn new(grid: &ChannelGrid<T>, dz: ColumnOp<T>) -> Self {
        Self {
            sp: Spectral::new(grid),
            dz,
            nx: grid.nx,
            ny: grid.ny,
            nz: grid.nz,
        }
    }

    /// Gradient with the second-order `d1` normal stencil.
    pub fn standard(grid: &ChannelGrid<T>) -> Self {
        Self::new(grid, ColumnOp::d1(&grid.z_nodes))
    }

    pub fn spectral(&self) -> &Spectral<T> {
        &self.sp
    }

    /// Applies a column operator along z.
    pub fn along_z(&self, op: &ColumnOp<T>, f: &[T]) -> Vec<T> {
        let nz = self.nz;
        let mut out = vec![T::zero(); f.len()];
        for col in 0..self.nx * self.ny {
            let r = col * nz..(col + 1) * nz;
            op.apply(&f[r.clone()], &mut out[r]);
        }
        out
    }

    /// `∂x² + ∂y²` spectrally plus `op` (a second-derivative column operator) in z.
    pub fn laplacian(&self, op: &ColumnOp<T>, f: &[T]) -> Vec<T> {
        let xx = self.sp.derivative(f, 2, 0);
        let yy = self.sp.derivative(f, 0, 2);
        let zz = self.along_z(op, f);
        xx.iter().zip(&yy).zip(&zz).map(|((a, b), c)| *a + *b + *c).collect()
    }

    pub fn of(&self, f: &[T]) -> [Vec<T>; 3] {
        let gx = self.sp.derivative(f, 1, 0);
        let gy = self.sp.derivative(f, 0, 1);
        let gz = self.along_z(&self.dz, f);
        [gx, gy, gz]
    }

    /// `(a·∇) b`.
    pub fn advect(&self, a: &VectorField<T>, b: &VectorField<T>, kind: FieldKind) -> VectorField<T> {
        let mut out = VectorField {
            nx: a.nx,
            ny: a.ny,
            nz: a.nz,
            kind,
            c: [vec![T::zero(); a.len()], vec![T::zero(); a.len()], vec![T::zero(); a.len()]],
        };
        for c in 0..3 {
            let g = self.of(&b.c[c]);
            for id in 0..a.len() {
                out.c[c][id] = a.c[0][id] * g[0][id] + a.c[1][id] * g[1][id] + a.c[2][id] * g[2][id];
            }
        }
        out
    }
}

