//! Grid functions on the channel, stored z-fastest: `idx = (i*ny + j)*nz + k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ChannelGrid;
use crate::scalar::Real;

/// What a vector field represents; carried for bookkeeping and dumps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    Physical,
    Corrector,
    Remainder,
    Difference,
    Other,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField<T> {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub data: Vec<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VectorField<T> {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub kind: FieldKind,
    pub c: [Vec<T>; 3],
}

impl<T: Real> ScalarField<T> {
    pub fn zeros(g: &ChannelGrid<T>) -> Self {
        Self {
            nx: g.nx,
            ny: g.ny,
            nz: g.nz,
            data: vec![T::zero(); g.len()],
        }
    }

    pub fn from_fn(g: &ChannelGrid<T>, f: impl Fn(T, T, T) -> T) -> Self {
        let mut s = Self::zeros(g);
        for i in 0..g.nx {
            for j in 0..g.ny {
                for k in 0..g.nz {
                    s.data[g.idx(i, j, k)] = f(g.x(i), g.y(j), g.z_nodes[k]);
                }
            }
        }
        s
    }

    pub fn scale(&mut self, s: T) {
        self.data.iter_mut().for_each(|v| *v *= s);
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

impl<T: Real> VectorField<T> {
    pub fn zeros(g: &ChannelGrid<T>, kind: FieldKind) -> Self {
        let n = g.len();
        Self {
            nx: g.nx,
            ny: g.ny,
            nz: g.nz,
            kind,
            c: [vec![T::zero(); n], vec![T::zero(); n], vec![T::zero(); n]],
        }
    }

    pub fn from_fn(g: &ChannelGrid<T>, kind: FieldKind, f: impl Fn(T, T, T) -> [T; 3]) -> Self {
        let mut v = Self::zeros(g, kind);
        for i in 0..g.nx {
            for j in 0..g.ny {
                for k in 0..g.nz {
                    let id = g.idx(i, j, k);
                    let u = f(g.x(i), g.y(j), g.z_nodes[k]);
                    for c in 0..3 {
                        v.c[c][id] = u[c];
                    }
                }
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.c[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn fits(&self, g: &ChannelGrid<T>) -> bool {
        self.nx == g.nx && self.ny == g.ny && self.nz == g.nz
    }

    pub fn check_grid(&self, g: &ChannelGrid<T>) -> Result<()> {
        if self.fits(g) {
            Ok(())
        } else {
            Err(Error::Input(format!(
                "field shape {}x{}x{} does not match grid {}x{}x{}",
                self.nx, self.ny, self.nz, g.nx, g.ny, g.nz
            )))
        }
    }

    pub fn same_shape(&self, o: &Self) -> bool {
        self.nx == o.nx && self.ny == o.ny && self.nz == o.nz
    }

    pub fn get(&self, id: usize) -> [T; 3] {
        [self.c[0][id], self.c[1][id], self.c[2][id]]
    }

    /// `self + s * o`
    pub fn axpy(&mut self, s: T, o: &Self) {
        for c in 0..3 {
            for (a, b) in self.c[c].iter_mut().zip(&o.c[c]) {
                *a += s * *b;
            }
        }
    }

    pub fn sub(&self, o: &Self, kind: FieldKind) -> Self {
        let mut r = self.clone();
        r.kind = kind;
        r.axpy(-T::one(), o);
        r
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.axpy(T::one(), o);
        r
    }

    pub fn scaled(&self, s: T) -> Self {
        let mut r = self.clone();
        for c in 0..3 {
            r.c[c].iter_mut().for_each(|v| *v *= s);
        }
        r
    }

    /// Largest pointwise Euclidean magnitude.
    pub fn max_norm(&self) -> T {
        (0..self.len()).fold(T::zero(), |m, id| {
            let u = self.get(id);
            m.max((u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt())
        })
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().flatten().all(|v| v.is_finite())
    }

    /// Largest `|u₃|` on either wall.
    pub fn wall_normal_max(&self) -> T {
        let mut m = T::zero();
        for col in 0..self.nx * self.ny {
            let b = col * self.nz;
            m = m.max(self.c[2][b].abs()).max(self.c[2][b + self.nz - 1].abs());
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_channel_grid;

    #[test]
    fn layout_and_ops() {
        let g = make_channel_grid(1.0, 2.0, 1.0, 4, 6, 9, 0.0).unwrap();
        let v = VectorField::from_fn(&g, FieldKind::Physical, |x, y, z| [x, y, z]);
        let id = g.idx(2, 3, 4);
        assert_eq!(v.get(id), [0.5, 1.0, 0.5]);
        let w = v.sub(&v, FieldKind::Remainder);
        assert_eq!(w.max_norm(), 0.0);
        assert_eq!(w.kind, FieldKind::Remainder);
        assert_eq!(v.wall_normal_max(), 1.0);
    }
}
