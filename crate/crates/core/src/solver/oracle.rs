use crate::error::{Error, Result};
use crate::fd::fornberg;
use crate::field::{FieldKind, ScalarField, VectorField};
use crate::geometry::{make_channel_grid, ChannelGrid, FrictionTensor};
use crate::linalg::{solve_block_tridiag, Block};
use crate::scalar::Real;

use super::state::{FlowState, Forcing, Trajectory};

/// Settings for the one-dimensional shear-flow reference solver.
#[derive(Clone, Copy, Debug)]
pub struct ShearOracleConfig<T> {
    pub h: T,
    pub nz_fine: usize,
    pub clustering: T,
    /// Crank–Nicolson steps over the whole interval.
    pub steps: usize,
    /// Number of stored snapshots after `t = 0`.
    pub snapshots: usize,
}

impl<T: Real> ShearOracleConfig<T> {
    pub fn new(h: T, nz_fine: usize) -> Self {
        Self {
            h,
            nz_fine,
            clustering: T::lit(2.0),
            steps: 2000,
            snapshots: 50,
        }
    }
}

/// Tangential velocity profiles `(u₁, u₂)(z, t)` of a shear flow.
#[derive(Clone, Debug)]
pub struct ShearTrajectory<T> {
    pub z: Vec<T>,
    pub times: Vec<T>,
    pub profiles: Vec<Vec<[T; 2]>>,
    pub epsilon: T,
}

struct Heat1d<T> {
    /// Interior rows `(l, d, r)` of `D_zz`.
    d2: Vec<[T; 3]>,
    lo: [T; 3],
    up: [T; 3],
    a_lo: [[T; 2]; 2],
    a_up: [[T; 2]; 2],
    eps: T,
}

impl<T: Real> Heat1d<T> {
    fn new(z: &[T], a_lo: [[T; 2]; 2], a_up: [[T; 2]; 2], eps: T) -> Self {
        let n = z.len();
        let two = T::lit(2.0);
        let mut d2 = vec![[T::zero(); 3]; n];
        for k in 1..n - 1 {
            let (h0, h1) = (z[k] - z[k - 1], z[k + 1] - z[k]);
            d2[k] = [two / (h0 * (h0 + h1)), -two / (h0 * h1), two / (h1 * (h0 + h1))];
        }
        let lo = fornberg(z[0], &z[0..3], 1)[1].clone();
        let up = fornberg(z[n - 1], &[z[n - 1], z[n - 2], z[n - 3]], 1)[1].clone();
        Self {
            d2,
            lo: [lo[0], lo[1], lo[2]],
            up: [up[0], up[1], up[2]],
            a_lo,
            a_up,
            eps,
        }
    }

    /// `u + c ε D_zz u` at interior nodes.
    fn explicit(&self, u: &[[T; 2]], c: T) -> Vec<[T; 2]> {
        let n = u.len();
        let mut out = u.to_vec();
        for k in 1..n - 1 {
            let w = self.d2[k];
            for i in 0..2 {
                out[k][i] = u[k][i] + c * self.eps * (w[0] * u[k - 1][i] + w[1] * u[k][i] + w[2] * u[k + 1][i]);
            }
        }
        out
    }

    /// Solves `(I - c ε D_zz) u = rhs` with Robin rows on both walls.
    fn implicit(&self, rhs: &[[T; 2]], c: T) -> Result<Vec<[T; 2]>> {
        let n = rhs.len();
        let z = T::zero();
        let two = T::lit(2.0);
        let diag = |s: T| -> Block<T> { [[s, z], [z, s]] };
        let row = |k: usize| -> [T; 3] {
            let w = self.d2[k];
            [-c * self.eps * w[0], T::one() - c * self.eps * w[1], -c * self.eps * w[2]]
        };
        let mut l = vec![diag(z); n];
        let mut d = vec![diag(T::one()); n];
        let mut u = vec![diag(z); n];
        let mut r = rhs.to_vec();
        for k in 1..n - 1 {
            let w = row(k);
            l[k] = diag(w[0]);
            d[k] = diag(w[1]);
            u[k] = diag(w[2]);
        }
        // ∂z u - 2A u = 0 at z = 0, third node eliminated with row 1.
        let w1 = row(1);
        let f = self.lo[2] / w1[2];
        let s = self.lo[0] - f * w1[0];
        let a = self.a_lo;
        d[0] = [[s - two * a[0][0], -two * a[0][1]], [-two * a[1][0], s - two * a[1][1]]];
        u[0] = diag(self.lo[1] - f * w1[1]);
        r[0] = [-f * rhs[1][0], -f * rhs[1][1]];
        // ∂z u + 2A u = 0 at z = h.
        let wn = row(n - 2);
        let f = self.up[2] / wn[0];
        let s = self.up[0] - f * wn[2];
        let a = self.a_up;
        d[n - 1] = [[s + two * a[0][0], two * a[0][1]], [two * a[1][0], s + two * a[1][1]]];
        l[n - 1] = diag(self.up[1] - f * wn[1]);
        r[n - 1] = [-f * rhs[n - 2][0], -f * rhs[n - 2][1]];
        solve_block_tridiag(&l, &d, &u, &r)
    }
}

/// Reference solution for x,y-invariant data, where advection vanishes and
/// the Navier–Stokes system reduces to `∂t u_i = ε ∂zz u_i` with Robin walls.
/// Crank–Nicolson in time; the first step is replaced by four backward-Euler
/// quarter steps to damp incompatible initial data.
pub fn shear_flow_oracle<T: Real>(
    u0: impl Fn(T) -> [T; 2],
    a_lower: &FrictionTensor<T>,
    a_upper: &FrictionTensor<T>,
    epsilon: T,
    t_final: T,
    cfg: &ShearOracleConfig<T>,
) -> Result<ShearTrajectory<T>> {
    let const_a = |a: &FrictionTensor<T>| {
        a.as_constant()
            .ok_or_else(|| Error::Config("the shear oracle needs constant friction tensors".into()))
    };
    let (al, au) = (const_a(a_lower)?, const_a(a_upper)?);
    if !(epsilon >= T::zero()) || !(t_final > T::zero()) {
        return Err(Error::Config(format!(
            "need epsilon >= 0 and T > 0, got {epsilon}, {t_final}"
        )));
    }
    if cfg.steps == 0 || cfg.snapshots == 0 || !cfg.steps.is_multiple_of(cfg.snapshots) {
        return Err(Error::Config(format!(
            "oracle steps ({}) must be a positive multiple of snapshots ({})",
            cfg.steps, cfg.snapshots
        )));
    }
    let g = make_channel_grid(T::one(), T::one(), cfg.h, 4, 4, cfg.nz_fine, cfg.clustering)?;
    let z = g.z_nodes.clone();
    let heat = Heat1d::new(&z, al, au, epsilon);
    let dt = t_final / T::from_usize_lossy(cfg.steps);
    let per = cfg.steps / cfg.snapshots;
    let half = T::lit(0.5);
    let mut u: Vec<[T; 2]> = z.iter().map(|&zz| u0(zz)).collect();
    let mut times = vec![T::zero()];
    let mut profiles = vec![u.clone()];
    for step in 1..=cfg.steps {
        if step == 1 {
            let q = dt * T::lit(0.25);
            for _ in 0..4 {
                u = heat.implicit(&u, q)?;
            }
        } else {
            let rhs = heat.explicit(&u, half * dt);
            u = heat.implicit(&rhs, half * dt)?;
        }
        if step % per == 0 {
            times.push(dt * T::from_usize_lossy(step));
            profiles.push(u.clone());
        }
    }
    Ok(ShearTrajectory {
        z,
        times,
        profiles,
        epsilon,
    })
}

/// Four-point Lagrange interpolation of nodal values onto `z_dst`.
pub fn interpolate_profile<T: Real>(z_src: &[T], v: &[[T; 2]], z_dst: &[T]) -> Vec<[T; 2]> {
    let n = z_src.len();
    z_dst
        .iter()
        .map(|&zz| {
            let k = z_src.partition_point(|&s| s < zz).clamp(1, n - 1);
            if (z_src[k] - zz).abs() <= T::epsilon() * (T::one() + zz.abs()) {
                return v[k];
            }
            if (z_src[k - 1] - zz).abs() <= T::epsilon() * (T::one() + zz.abs()) {
                return v[k - 1];
            }
            let s = (k.saturating_sub(2)).min(n - 4);
            let w = fornberg(zz, &z_src[s..s + 4], 0)[0].clone();
            let mut out = [T::zero(); 2];
            for (q, wq) in w.iter().enumerate() {
                out[0] += *wq * v[s + q][0];
                out[1] += *wq * v[s + q][1];
            }
            out
        })
        .collect()
}

impl<T: Real> ShearTrajectory<T> {
    /// Profile at snapshot `s` sampled on `z`.
    pub fn profile_on(&self, s: usize, z: &[T]) -> Vec<[T; 2]> {
        if z.len() == self.z.len() && z.iter().zip(&self.z).all(|(a, b)| *a == *b) {
            return self.profiles[s].clone();
        }
        interpolate_profile(&self.z, &self.profiles[s], z)
    }

    /// Replicates the profiles over a channel grid as x,y-invariant fields.
    pub fn to_trajectory(&self, grid: &ChannelGrid<T>) -> Result<Trajectory<T>> {
        if (grid.h - *self.z.last().unwrap()).abs() > T::lit(1e-12) * grid.h {
            return Err(Error::Input("oracle and grid heights differ".into()));
        }
        let nz = grid.nz;
        let mut snapshots = Vec::with_capacity(self.times.len());
        for (s, &t) in self.times.iter().enumerate() {
            let prof = self.profile_on(s, &grid.z_nodes);
            let mut u = VectorField::zeros(grid, FieldKind::Physical);
            for col in 0..grid.nx * grid.ny {
                for k in 0..nz {
                    u.c[0][col * nz + k] = prof[k][0];
                    u.c[1][col * nz + k] = prof[k][1];
                }
            }
            snapshots.push(FlowState {
                u,
                p: ScalarField::zeros(grid),
                t,
            });
        }
        let cadence = if self.times.len() > 1 { self.times[1] - self.times[0] } else { T::zero() };
        Ok(Trajectory {
            snapshots,
            cadence,
            epsilon: self.epsilon,
            friction: None,
            forcing: Forcing::Zero,
            dt: cadence,
            diagnostics: Vec::new(),
        })
    }
}
