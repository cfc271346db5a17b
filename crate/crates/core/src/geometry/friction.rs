use crate::error::{Error, Result};
use crate::scalar::Real;

use super::Wall;

/// Boundary friction tensor `𝒜 = (α_ij)` on one wall, constant or sampled on
/// the tangential grid (row-major `i * ny + j`).
#[derive(Clone, Debug, PartialEq)]
pub struct FrictionTensor<T> {
    pub wall: Wall,
    pub entries: FrictionEntries<T>,
    /// Sampled sup of the operator 2-norm.
    pub alpha_bar: T,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FrictionEntries<T> {
    Constant([[T; 2]; 2]),
    Sampled { nx: usize, ny: usize, values: Vec<[[T; 2]; 2]> },
}

/// Largest singular value of a 2×2 matrix.
pub fn spectral_norm<T: Real>(m: &[[T; 2]; 2]) -> T {
    let (a, b, c, d) = (m[0][0], m[0][1], m[1][0], m[1][1]);
    let s = a * a + b * b + c * c + d * d;
    let det = a * d - b * c;
    let disc = (s * s - T::lit(4.0) * det * det).max(T::zero()).sqrt();
    ((s + disc) / T::lit(2.0)).sqrt()
}

fn check_finite<T: Real>(m: &[[T; 2]; 2]) -> Result<()> {
    if m.iter().flatten().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Config(format!("friction entries must be finite, got {m:?}")))
    }
}

impl<T: Real> FrictionTensor<T> {
    pub fn constant(wall: Wall, m: [[T; 2]; 2]) -> Result<Self> {
        check_finite(&m)?;
        Ok(Self {
            wall,
            alpha_bar: spectral_norm(&m),
            entries: FrictionEntries::Constant(m),
        })
    }

    pub fn isotropic(wall: Wall, alpha: T) -> Result<Self> {
        Self::constant(wall, [[alpha, T::zero()], [T::zero(), alpha]])
    }

    pub fn sampled(wall: Wall, nx: usize, ny: usize, values: Vec<[[T; 2]; 2]>) -> Result<Self> {
        if values.len() != nx * ny {
            return Err(Error::Config(format!(
                "expected {} friction samples, got {}",
                nx * ny,
                values.len()
            )));
        }
        let mut bar = T::zero();
        for m in &values {
            check_finite(m)?;
            bar = bar.max(spectral_norm(m));
        }
        Ok(Self {
            wall,
            alpha_bar: bar,
            entries: FrictionEntries::Sampled { nx, ny, values },
        })
    }

    /// Matrix at tangential node `(i, j)`.
    pub fn at(&self, i: usize, j: usize) -> [[T; 2]; 2] {
        match &self.entries {
            FrictionEntries::Constant(m) => *m,
            FrictionEntries::Sampled { ny, values, .. } => values[i * ny + j],
        }
    }

    pub fn as_constant(&self) -> Option<[[T; 2]; 2]> {
        match &self.entries {
            FrictionEntries::Constant(m) => Some(*m),
            FrictionEntries::Sampled { .. } => None,
        }
    }

    pub fn matches_grid(&self, nx: usize, ny: usize) -> bool {
        match &self.entries {
            FrictionEntries::Constant(_) => true,
            FrictionEntries::Sampled { nx: a, ny: b, .. } => *a == nx && *b == ny,
        }
    }
}
