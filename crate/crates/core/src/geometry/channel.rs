use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fd::trapezoid_weights;
use crate::jet::Jet;
use crate::scalar::Real;

/// Which wall of the channel (or the torus boundary) a quantity refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Wall {
    Lower,
    Upper,
    Torus,
}

/// Periodic channel `(0,L1)×(0,L2)×(0,h)` with a tanh-clustered normal grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelGrid<T> {
    pub l1: T,
    pub l2: T,
    pub h: T,
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub clustering: T,
    pub z_nodes: Vec<T>,
    pub z_weights: Vec<T>,
}

/// Maps `s ∈ [0,1]` to `z ∈ [0,h]`; identity (times `h`) when `c = 0`.
pub fn tanh_map<T: Real>(s: T, h: T, c: T) -> T {
    if c == T::zero() {
        return s * h;
    }
    let two = T::lit(2.0);
    h / two * (T::one() + (c * (two * s - T::one())).tanh() / c.tanh())
}

pub fn make_channel_grid<T: Real>(
    l1: T,
    l2: T,
    h: T,
    nx: usize,
    ny: usize,
    nz: usize,
    clustering: T,
) -> Result<ChannelGrid<T>> {
    if !(l1 > T::zero() && l2 > T::zero() && h > T::zero()) {
        return Err(Error::Config(format!(
            "channel dimensions must be positive, got L1={l1}, L2={l2}, h={h}"
        )));
    }
    if nx < 4 || ny < 4 || !nx.is_multiple_of(2) || !ny.is_multiple_of(2) {
        return Err(Error::Config(format!(
            "Nx, Ny must be even and at least 4, got {nx}, {ny}"
        )));
    }
    if nz < 9 {
        return Err(Error::Config(format!("Nz must be at least 9, got {nz}")));
    }
    if !(clustering >= T::zero()) || !clustering.is_finite() {
        return Err(Error::Config(format!("clustering must be >= 0, got {clustering}")));
    }
    let last = T::from_usize_lossy(nz - 1);
    let mut z: Vec<T> = (0..nz)
        .map(|k| tanh_map(T::from_usize_lossy(k) / last, h, clustering))
        .collect();
    z[0] = T::zero();
    z[nz - 1] = h;
    if z.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Config(format!(
            "clustering {clustering} too strong for Nz={nz}: nodes collapse in this precision"
        )));
    }
    let w = trapezoid_weights(&z);
    Ok(ChannelGrid {
        l1,
        l2,
        h,
        nx,
        ny,
        nz,
        clustering,
        z_nodes: z,
        z_weights: w,
    })
}

impl<T: Real> ChannelGrid<T> {
    pub fn dx(&self) -> T {
        self.l1 / T::from_usize_lossy(self.nx)
    }

    pub fn dy(&self) -> T {
        self.l2 / T::from_usize_lossy(self.ny)
    }

    pub fn x(&self, i: usize) -> T {
        self.dx() * T::from_usize_lossy(i)
    }

    pub fn y(&self, j: usize) -> T {
        self.dy() * T::from_usize_lossy(j)
    }

    pub fn volume(&self) -> T {
        self.l1 * self.l2 * self.h
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny * self.nz
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.ny + j) * self.nz + k
    }

    /// Quadrature weight of the node at height index `k`.
    #[inline]
    pub fn cell_weight(&self, k: usize) -> T {
        self.dx() * self.dy() * self.z_weights[k]
    }

    /// Smallest spacing adjacent to either wall.
    pub fn min_wall_spacing(&self) -> T {
        let n = self.nz;
        (self.z_nodes[1] - self.z_nodes[0]).min(self.z_nodes[n - 1] - self.z_nodes[n - 2])
    }

    /// Same tangential layout with a different normal resolution.
    pub fn with_nz(&self, nz: usize) -> Result<Self> {
        make_channel_grid(self.l1, self.l2, self.h, self.nx, self.ny, nz, self.clustering)
    }

    pub fn same_shape(&self, o: &Self) -> bool {
        self.nx == o.nx && self.ny == o.ny && self.nz == o.nz
    }
}

fn check_z<T: Real>(z: T, h: T) -> Result<()> {
    if !(h > T::zero()) {
        return Err(Error::Config(format!("channel height must be positive, got {h}")));
    }
    if !(z >= T::zero() && z <= h) {
        return Err(Error::Domain(format!("z = {z} outside [0, {h}]")));
    }
    Ok(())
}

/// `E(t) = exp(-1/t)` for `t > 0`, else 0, as a jet in the variable of `t`.
fn e_jet<T: Real, const N: usize>(t: Jet<T, N>) -> Jet<T, N> {
    // Below this the value and every derivative underflow to zero anyway, and
    // forming 1/t would overflow the higher coefficients.
    if t.value() <= T::lit(1e-3) {
        return Jet::zero();
    }
    (-t.recip()).exp()
}

/// Smooth step `S(t) = E(t) / (E(t) + E(1-t))`: 0 for `t ≤ 0`, 1 for `t ≥ 1`.
pub fn smooth_step_jet<T: Real, const N: usize>(t: Jet<T, N>) -> Jet<T, N> {
    let a = e_jet(t);
    let b = e_jet((-t).add_const(T::one()));
    if b.value() == T::zero() && t.value() > T::lit(0.5) {
        return Jet::constant(T::one());
    }
    if a.value() == T::zero() {
        return Jet::zero();
    }
    a.div(&(a + b))
}

pub fn smooth_step<T: Real>(t: T) -> T {
    smooth_step_jet::<T, 1>(Jet::constant(t)).value()
}

/// Cutoff `σ` with its z-derivatives packed in a jet. The lower-wall cutoff is
/// `S((h/4 - z)/(h/8))`, the upper one its mirror image.
pub fn cutoff_sigma_jet<T: Real, const N: usize>(z: T, wall: Wall, h: T) -> Result<Jet<T, N>> {
    check_z(z, h)?;
    let eighth = h / T::lit(8.0);
    let quarter = h / T::lit(4.0);
    let zj = Jet::<T, N>::var(z);
    let t = match wall {
        Wall::Lower => (-zj).add_const(quarter).scale(T::one() / eighth),
        Wall::Upper => zj.add_const(quarter - h).scale(T::one() / eighth),
        Wall::Torus => {
            return Err(Error::Unsupported(
                "channel cutoff requested for the torus wall".into(),
            ))
        }
    };
    Ok(smooth_step_jet(t))
}

pub fn cutoff_sigma<T: Real>(z: T, wall: Wall, h: T) -> Result<T> {
    Ok(cutoff_sigma_jet::<T, 1>(z, wall, h)?.value())
}

/// Piecewise-linear distance-like weight: `z`, then `h/4`, then `h - z`.
pub fn weight_zeta<T: Real>(z: T, h: T) -> Result<T> {
    check_z(z, h)?;
    let q = h / T::lit(4.0);
    Ok(z.min(q).min(h - z))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_examples() {
        assert_eq!(cutoff_sigma(0.1, Wall::Lower, 1.0).unwrap(), 1.0);
        assert_eq!(cutoff_sigma(0.5, Wall::Lower, 1.0).unwrap(), 0.0);
        assert_eq!(cutoff_sigma(0.1, Wall::Upper, 1.0).unwrap(), 0.0);
        assert!(matches!(cutoff_sigma(1.5, Wall::Lower, 1.0), Err(Error::Domain(_))));
        assert!(matches!(cutoff_sigma(-1e-9, Wall::Lower, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn sigma_midpoint_is_half() {
        let s = cutoff_sigma(3.0f64 / 16.0, Wall::Lower, 1.0).unwrap();
        assert!((s - 0.5).abs() < 1e-15);
    }

    #[test]
    fn zeta_examples() {
        assert_eq!(weight_zeta(0.5, 1.0).unwrap(), 0.25);
        assert_eq!(weight_zeta(0.0, 1.0).unwrap(), 0.0);
        assert!((weight_zeta(0.9f64, 1.0).unwrap() - 0.1).abs() < 1e-15);
        assert!(weight_zeta(2.0, 1.0).is_err());
    }

    #[test]
    fn grid_examples() {
        let g = make_channel_grid(1.0, 1.0, 1.0, 4, 4, 9, 0.0).unwrap();
        for (k, z) in g.z_nodes.iter().enumerate() {
            assert!((z - k as f64 / 8.0).abs() < 1e-15);
        }
        let s: f64 = g.z_weights.iter().sum();
        assert!((s - 1.0).abs() < 1e-12);
        let tau = std::f64::consts::TAU;
        let g = make_channel_grid(tau, tau, 1.0, 16, 16, 65, 2.0).unwrap();
        assert!(g.min_wall_spacing() < 1.0 / 65.0);
    }

    #[test]
    fn grid_rejects_bad_input() {
        assert!(matches!(make_channel_grid(0.0, 1.0, 1.0, 4, 4, 9, 0.0), Err(Error::Config(_))));
        assert!(matches!(make_channel_grid(1.0, 1.0, 1.0, 5, 4, 9, 0.0), Err(Error::Config(_))));
        assert!(matches!(make_channel_grid(1.0, 1.0, 1.0, 4, 4, 8, 0.0), Err(Error::Config(_))));
        assert!(matches!(make_channel_grid(1.0, 1.0, 1.0, 4, 4, 9, -1.0), Err(Error::Config(_))));
    }

    #[test]
    fn grid_f32() {
        let g = make_channel_grid(1.0f32, 1.0, 2.0, 8, 8, 17, 1.5).unwrap();
        assert_eq!(g.z_nodes[16], 2.0);
        let s: f32 = g.z_weights.iter().sum();
        assert!((s - 2.0).abs() < 1e-5);
    }
}
