use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fd::{fornberg, ColumnOp};
use crate::geometry::{ChannelGrid, FrictionTensor};
use crate::linalg::BandedLu;
use crate::scalar::Real;
use crate::spectral::Spectral;

pub(crate) type C<T> = Complex<T>;

/// Wall treatment of tangential velocity.
#[derive(Clone, Debug)]
pub(crate) enum WallRule<T> {
    /// Impermeability only; tangential velocity is free.
    Slip,
    /// Robin condition, wall value filled from the two nearest interior nodes:
    /// `u_wall = m1 u_next + m2 u_next2`.
    Robin { m1: [[T; 2]; 2], m2: [[T; 2]; 2], a: [[T; 2]; 2] },
}

/// One-sided three-point first-derivative weights at the lower wall `(a0, a1, a2)`
/// and at the upper wall `(b0, b1, b2)` acting on `(u_N-1, u_N-2, u_N-3)`.
pub(crate) fn wall_stencils<T: Real>(z: &[T]) -> ([T; 3], [T; 3]) {
    let n = z.len();
    let lo = fornberg(z[0], &z[0..3], 1)[1].clone();
    let up = fornberg(z[n - 1], &[z[n - 1], z[n - 2], z[n - 3]], 1)[1].clone();
    ([lo[0], lo[1], lo[2]], [up[0], up[1], up[2]])
}

fn inv2<T: Real>(m: [[T; 2]; 2]) -> Option<[[T; 2]; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let scale = m.iter().flatten().fold(T::zero(), |a, v| a.max(v.abs()));
    if !(det.abs() > T::lit(1e-10) * scale * scale) {
        return None;
    }
    Some([[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]])
}

fn scale2<T: Real>(m: [[T; 2]; 2], s: T) -> [[T; 2]; 2] {
    [[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]]
}

impl<T: Real> WallRule<T> {
    /// `sign = -1` at the lower wall, `+1` at the upper wall; `w` the one-sided weights.
    pub(crate) fn robin(a: &FrictionTensor<T>, w: [T; 3], sign: T) -> Result<Self> {
        let am = a.as_constant().ok_or_else(|| {
            Error::Config("the channel solver supports constant friction tensors only".into())
        })?;
        let two = T::lit(2.0);
        let b = [
            [w[0] + sign * two * am[0][0], sign * two * am[0][1]],
            [sign * two * am[1][0], w[0] + sign * two * am[1][1]],
        ];
        let bi = inv2(b).ok_or_else(|| {
            Error::Config(format!(
                "Robin wall row is ill-conditioned: one-sided weight {} against friction {:?}",
                w[0], am
            ))
        })?;
        Ok(WallRule::Robin {
            m1: scale2(bi, -w[1]),
            m2: scale2(bi, -w[2]),
            a: am,
        })
    }

    #[inline]
    pub(crate) fn fill<S>(&self, next: [S; 2], next2: [S; 2]) -> Option<[S; 2]>
    where
        S: Copy + std::ops::Add<Output = S> + std::ops::Mul<T, Output = S>,
    {
        match self {
            WallRule::Slip => None,
            WallRule::Robin { m1, m2, .. } => Some([
                next[0] * m1[0][0] + next[1] * m1[0][1] + next2[0] * m2[0][0] + next2[1] * m2[0][1],
                next[0] * m1[1][0] + next[1] * m1[1][1] + next2[0] * m2[1][0] + next2[1] * m2[1][1],
            ]),
        }
    }

    /// `Kᵀ M K` for the pressure coupling through a filled wall value.
    fn kmk(m: &[[T; 2]; 2], k: [T; 2]) -> T {
        k[0] * (m[0][0] * k[0] + m[0][1] * k[1]) + k[1] * (m[1][0] * k[0] + m[1][1] * k[1])
    }
}

/// Discrete Leray projection per Fourier mode. The divergence is
/// `i k·u_tan + D u₃` with the summation-by-parts `D`; after projection it
/// vanishes at every node, `u₃ = 0` on both walls, and Robin walls satisfy
/// their one-sided condition exactly.
pub(crate) struct Projector<T: Real> {
    pub nz: usize,
    pub lower: WallRule<T>,
    pub upper: WallRule<T>,
    /// `None` for modes with no tangential wavenumber.
    factors: Vec<Option<BandedLu<T>>>,
    kvec: Vec<[T; 2]>,
    sbp: ColumnOp<T>,
    /// `1/(z_{k+1} - z_{k-1})` for interior nodes.
    g: Vec<T>,
}

impl<T: Real> Projector<T> {
    pub fn new(grid: &ChannelGrid<T>, sp: &Spectral<T>, lower: WallRule<T>, upper: WallRule<T>) -> Result<Self> {
        let nz = grid.nz;
        let z = &grid.z_nodes;
        let sbp = ColumnOp::sbp(z);
        let mut g = vec![T::zero(); nz];
        for k in 1..nz - 1 {
            g[k] = T::one() / (z[k + 1] - z[k - 1]);
        }
        let mut kvec = Vec::with_capacity(grid.nx * grid.ny);
        for i in 0..grid.nx {
            for j in 0..grid.ny {
                kvec.push([sp.kx_odd[i], sp.ky_odd[j]]);
            }
        }
        let mut p = Self {
            nz,
            lower,
            upper,
            factors: Vec::new(),
            kvec,
            sbp,
            g,
        };
        let factors: Vec<Option<BandedLu<T>>> = p
            .kvec
            .par_iter()
            .map(|&k| p.factor_mode(k))
            .collect::<Result<_>>()?;
        p.factors = factors;
        Ok(p)
    }

    fn factor_mode(&self, k: [T; 2]) -> Result<Option<BandedLu<T>>> {
        let nz = self.nz;
        let k2 = k[0] * k[0] + k[1] * k[1];
        if k2 == T::zero() {
            return Ok(None);
        }
        let mut m = BandedLu::new(nz, 2, 2);
        for row in 0..nz {
            match (row, &self.lower, &self.upper) {
                (0, WallRule::Robin { m1, m2, .. }, _) => {
                    m.add(0, 1, WallRule::kmk(m1, k));
                    m.add(0, 2, WallRule::kmk(m2, k));
                }
                (r, _, WallRule::Robin { m1, m2, .. }) if r == nz - 1 => {
                    m.add(r, nz - 2, WallRule::kmk(m1, k));
                    m.add(r, nz - 3, WallRule::kmk(m2, k));
                }
                (r, _, _) => m.add(r, r, k2),
            }
            let s = self.sbp.start[row];
            for (q, w) in self.sbp.weights[row].iter().enumerate() {
                let node = s + q;
                if *w == T::zero() || node == 0 || node == nz - 1 {
                    continue;
                }
                // δu₃ at an interior node is -g (p_{node+1} - p_{node-1}).
                m.add(row, node + 1, -*w * self.g[node]);
                m.add(row, node - 1, *w * self.g[node]);
            }
        }
        m.factor()?;
        Ok(Some(m))
    }

    /// Applies the wall rules in place: `u₃ = 0`, Robin fill for tangential components.
    pub fn apply_walls(&self, u: [&mut [C<T>]; 3]) {
        let nz = self.nz;
        let [u1, u2, u3] = u;
        u3[0] = C::new(T::zero(), T::zero());
        u3[nz - 1] = C::new(T::zero(), T::zero());
        if let Some(v) = self.lower.fill([u1[1], u2[1]], [u1[2], u2[2]]) {
            u1[0] = v[0];
            u2[0] = v[1];
        }
        if let Some(v) = self.upper.fill([u1[nz - 2], u2[nz - 2]], [u1[nz - 3], u2[nz - 3]]) {
            u1[nz - 1] = v[0];
            u2[nz - 1] = v[1];
        }
    }

    /// Discrete divergence of one mode.
    pub fn divergence(&self, mode: usize, u: [&[C<T>]; 3], out: &mut [C<T>]) {
        let k = self.kvec[mode];
        let i = C::new(T::zero(), T::one());
        for r in 0..self.nz {
            let s = self.sbp.start[r];
            let mut d = (u[0][r] * k[0] + u[1][r] * k[1]) * i;
            for (q, w) in self.sbp.weights[r].iter().enumerate() {
                d += u[2][s + q] * *w;
            }
            out[r] = d;
        }
    }

    /// Projects one mode in place and returns the pressure increment `φ`
    /// (the velocity changes by `-∇φ`).
    pub fn project_mode(&self, mode: usize, u: [&mut [C<T>]; 3], phi: &mut [C<T>]) -> Result<()> {
        let nz = self.nz;
        let [u1, u2, u3] = u;
        self.apply_walls([&mut *u1, &mut *u2, &mut *u3]);
        let Some(lu) = &self.factors[mode] else {
            for v in u3.iter_mut() {
                *v = C::new(T::zero(), T::zero());
            }
            phi.iter_mut().for_each(|v| *v = C::new(T::zero(), T::zero()));
            return Ok(());
        };
        let mut rhs = vec![C::new(T::zero(), T::zero()); nz];
        self.divergence(mode, [&*u1, &*u2, &*u3], &mut rhs);
        for v in rhs.iter_mut() {
            *v = -*v;
        }
        lu.solve_in_place(&mut rhs);
        let k = self.kvec[mode];
        let i = C::new(T::zero(), T::one());
        for r in 0..nz {
            let wall = r == 0 || r == nz - 1;
            let robin_wall = (r == 0 && matches!(self.lower, WallRule::Robin { .. }))
                || (r == nz - 1 && matches!(self.upper, WallRule::Robin { .. }));
            if !robin_wall {
                u1[r] -= i * rhs[r] * k[0];
                u2[r] -= i * rhs[r] * k[1];
            }
            if !wall {
                u3[r] -= (rhs[r + 1] - rhs[r - 1]) * self.g[r];
            }
        }
        self.apply_walls([u1, u2, u3]);
        phi.copy_from_slice(&rhs);
        Ok(())
    }

    /// Largest modulus of the discrete divergence over all modes and nodes.
    pub fn max_divergence(&self, u: &[Vec<C<T>>; 3]) -> T {
        let nz = self.nz;
        let modes = u[0].len() / nz;
        let mut out = vec![C::new(T::zero(), T::zero()); nz];
        let mut m = T::zero();
        for mode in 0..modes {
            let r = mode * nz..(mode + 1) * nz;
            self.divergence(mode, [&u[0][r.clone()], &u[1][r.clone()], &u[2][r]], &mut out);
            m = out.iter().fold(m, |a, v| a.max(v.norm()));
        }
        m
    }
}

/// Pressure gradient of one mode at node `r`: `(i k p, D p)` with the
/// interior central difference; the normal part is unused on the walls.
pub(crate) fn grad_mode<T: Real>(k: [T; 2], p: &[C<T>], g: &[T], r: usize) -> [C<T>; 3] {
    let i = C::new(T::zero(), T::one());
    let n = p.len();
    let gz = if r == 0 || r == n - 1 {
        C::new(T::zero(), T::zero())
    } else {
        (p[r + 1] - p[r - 1]) * g[r]
    };
    [i * p[r] * k[0], i * p[r] * k[1], gz]
}

impl<T: Real> Projector<T> {
    pub fn kvec(&self, mode: usize) -> [T; 2] {
        self.kvec[mode]
    }

    pub fn g(&self) -> &[T] {
        &self.g
    }
}
