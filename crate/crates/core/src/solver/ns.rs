use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fd::ColumnOp;
use crate::field::{FieldKind, ScalarField, VectorField};
use crate::geometry::{ChannelGrid, FrictionTensor};
use crate::linalg::{solve_block_tridiag, solve_tridiag, Block};
use crate::scalar::Real;
use crate::spectral::Spectral;

use super::projection::{grad_mode, wall_stencils, Projector, WallRule, C};
use super::state::{FlowState, Forcing, SolverOptions, StepDiagnostics, Trajectory};

/// Low-storage RK3 / Crank–Nicolson coefficients (γ, ζ, α, β) per substage.
const GAMMA: [f64; 3] = [8.0 / 15.0, 5.0 / 12.0, 3.0 / 4.0];
const ZETA: [f64; 3] = [0.0, -17.0 / 60.0, -5.0 / 12.0];
const ALPHA: [f64; 3] = [4.0 / 15.0, 1.0 / 15.0, 1.0 / 6.0];
const BETA: [f64; 3] = [4.0 / 15.0, 1.0 / 15.0, 1.0 / 6.0];

/// Fourier–finite-difference integrator for the channel, Euler (`ε = 0`) or
/// Navier–Stokes with Robin walls (`ε > 0`).
pub struct ChannelSolver<T: Real> {
    pub grid: ChannelGrid<T>,
    sp: Spectral<T>,
    proj: Projector<T>,
    epsilon: T,
    d1: ColumnOp<T>,
    /// Interior second-derivative rows `(l, d, r)`.
    d2: Vec<[T; 3]>,
    lo_w: [T; 3],
    up_w: [T; 3],
    forcing_hat: Option<[Vec<C<T>>; 3]>,
    dealias: bool,
}

fn czero<T: Real>() -> C<T> {
    C::new(T::zero(), T::zero())
}

impl<T: Real> ChannelSolver<T> {
    pub fn new(
        grid: &ChannelGrid<T>,
        epsilon: T,
        friction: Option<(&FrictionTensor<T>, &FrictionTensor<T>)>,
        forcing: &Forcing<T>,
        dealias: bool,
    ) -> Result<Self> {
        if !(epsilon >= T::zero()) {
            return Err(Error::Config(format!("viscosity must be >= 0, got {epsilon}")));
        }
        let sp = Spectral::new(grid);
        let z = &grid.z_nodes;
        let (lo_w, up_w) = wall_stencils(z);
        let (lower, upper) = if epsilon > T::zero() {
            let (a, b) = friction.ok_or_else(|| Error::Config("viscous runs need friction tensors".into()))?;
            (
                WallRule::robin(a, lo_w, -T::one())?,
                WallRule::robin(b, up_w, T::one())?,
            )
        } else {
            (WallRule::Slip, WallRule::Slip)
        };
        let proj = Projector::new(grid, &sp, lower, upper)?;
        let nz = grid.nz;
        let mut d2 = vec![[T::zero(); 3]; nz];
        for k in 1..nz - 1 {
            let h0 = z[k] - z[k - 1];
            let h1 = z[k + 1] - z[k];
            let two = T::lit(2.0);
            d2[k] = [two / (h0 * (h0 + h1)), -two / (h0 * h1), two / (h1 * (h0 + h1))];
        }
        let forcing_hat = match forcing {
            Forcing::Zero => None,
            Forcing::Uniform(f) => {
                let fld = VectorField::from_fn(grid, FieldKind::Other, |_, _, _| *f);
                Some([sp.forward(&fld.c[0]), sp.forward(&fld.c[1]), sp.forward(&fld.c[2])])
            }
            Forcing::Field(fld) => {
                fld.check_grid(grid)?;
                Some([sp.forward(&fld.c[0]), sp.forward(&fld.c[1]), sp.forward(&fld.c[2])])
            }
        };
        Ok(Self {
            grid: grid.clone(),
            sp,
            proj,
            epsilon,
            d1: ColumnOp::d1(z),
            d2,
            lo_w,
            up_w,
            forcing_hat,
            dealias,
        })
    }

    pub fn to_spectral(&self, u: &VectorField<T>) -> [Vec<C<T>>; 3] {
        [self.sp.forward(&u.c[0]), self.sp.forward(&u.c[1]), self.sp.forward(&u.c[2])]
    }

    pub fn to_physical(&self, uh: &[Vec<C<T>>; 3], kind: FieldKind) -> VectorField<T> {
        let mut v = VectorField::zeros(&self.grid, kind);
        for c in 0..3 {
            v.c[c] = self.sp.inverse(uh[c].clone());
        }
        v
    }

    fn modes(&self) -> usize {
        self.grid.nx * self.grid.ny
    }

    /// Projects a spectral field; returns the pressure increment.
    pub fn project(&self, uh: &mut [Vec<C<T>>; 3]) -> Result<Vec<C<T>>> {
        let nz = self.grid.nz;
        let mut phi = vec![czero(); uh[0].len()];
        let [a, b, c] = uh;
        a.par_chunks_mut(nz)
            .zip(b.par_chunks_mut(nz))
            .zip(c.par_chunks_mut(nz))
            .zip(phi.par_chunks_mut(nz))
            .enumerate()
            .try_for_each(|(m, (((u1, u2), u3), ph))| self.proj.project_mode(m, [u1, u2, u3], ph))?;
        Ok(phi)
    }

    /// Projects a physical field onto the discretely solenoidal, wall-compatible subspace.
    pub fn project_physical(&self, u: &VectorField<T>) -> Result<VectorField<T>> {
        u.check_grid(&self.grid)?;
        let mut uh = self.to_spectral(u);
        self.project(&mut uh)?;
        Ok(self.to_physical(&uh, u.kind))
    }

    /// `-(u·∇)u + f` in spectral space.
    fn nonlinear(&self, uh: &[Vec<C<T>>; 3]) -> [Vec<C<T>>; 3] {
        let g = &self.grid;
        let nz = g.nz;
        let u = self.to_physical(uh, FieldKind::Physical);
        let out: Vec<Vec<C<T>>> = (0..3)
            .into_par_iter()
            .map(|c| {
                let mut dx = uh[c].clone();
                self.sp.apply_symbol(&mut dx, nz, 1, 0);
                let dx = self.sp.inverse(dx);
                let mut dy = uh[c].clone();
                self.sp.apply_symbol(&mut dy, nz, 0, 1);
                let dy = self.sp.inverse(dy);
                let f = &u.c[c];
                let mut conv = vec![T::zero(); f.len()];
                for col in 0..g.nx * g.ny {
                    let s = &f[col * nz..(col + 1) * nz];
                    for k in 0..nz {
                        let id = col * nz + k;
                        let dz = self.d1.apply_at(s, k);
                        conv[id] = -(u.c[0][id] * dx[id] + u.c[1][id] * dy[id] + u.c[2][id] * dz);
                    }
                }
                let mut h = self.sp.forward(&conv);
                if let Some(fh) = &self.forcing_hat {
                    for (a, b) in h.iter_mut().zip(&fh[c]) {
                        *a += *b;
                    }
                }
                if self.dealias {
                    self.sp.dealias(&mut h);
                }
                h
            })
            .collect();
        let mut it = out.into_iter();
        [it.next().unwrap(), it.next().unwrap(), it.next().unwrap()]
    }

    /// Full Laplacian symbol `|k|²` for mode `m` (Nyquist included).
    fn k2_full(&self, m: usize) -> T {
        let i = m / self.grid.ny;
        let j = m % self.grid.ny;
        self.sp.kx[i] * self.sp.kx[i] + self.sp.ky[j] * self.sp.ky[j]
    }

    /// `ε (D_zz - |k|²) v` at interior nodes of one mode column.
    fn viscous_explicit(&self, m: usize, v: &[C<T>], out: &mut [C<T>]) {
        let nz = self.grid.nz;
        let k2 = self.k2_full(m);
        for r in 1..nz - 1 {
            let w = self.d2[r];
            out[r] = (v[r - 1] * w[0] + v[r] * w[1] + v[r + 1] * w[2] - v[r] * k2) * self.epsilon;
        }
        out[0] = czero();
        out[nz - 1] = czero();
    }

    /// Solves `(I - c ε (D_zz - |k|²)) u = rhs` for one mode with Robin rows
    /// for the tangential pair and Dirichlet rows for `u₃`.
    fn implicit_mode(&self, m: usize, c: T, u: [&mut [C<T>]; 3]) -> Result<()> {
        let nz = self.grid.nz;
        let k2 = self.k2_full(m);
        let ce = c * self.epsilon;
        let row = |r: usize| -> [T; 3] {
            let w = self.d2[r];
            [-ce * w[0], T::one() + ce * (k2 - w[1]), -ce * w[2]]
        };
        let [u1, u2, u3] = u;
        let one = T::one();
        let z = T::zero();
        let diag = |s: T| -> Block<C<T>> { [[C::new(s, z), czero()], [czero(), C::new(s, z)]] };
        let mut l = vec![diag(z); nz];
        let mut d = vec![diag(one); nz];
        let mut up = vec![diag(z); nz];
        let mut rhs: Vec<[C<T>; 2]> = (0..nz).map(|r| [u1[r], u2[r]]).collect();
        for r in 1..nz - 1 {
            let w = row(r);
            l[r] = diag(w[0]);
            d[r] = diag(w[1]);
            up[r] = diag(w[2]);
        }
        let robin_a = |rule: &WallRule<T>| match rule {
            WallRule::Robin { a, .. } => *a,
            WallRule::Slip => [[z, z], [z, z]],
        };
        let two = T::lit(2.0);
        // Lower wall: (a0 - 2A) u0 + a1 u1 + a2 u2 = 0, with u2 eliminated using row 1.
        let a = robin_a(&self.proj.lower);
        let w1 = row(1);
        let (a0, a1, a2) = (self.lo_w[0], self.lo_w[1], self.lo_w[2]);
        let f = a2 / w1[2];
        d[0] = [
            [C::new(a0 - f * w1[0] - two * a[0][0], z), C::new(-two * a[0][1], z)],
            [C::new(-two * a[1][0], z), C::new(a0 - f * w1[0] - two * a[1][1], z)],
        ];
        up[0] = diag(a1 - f * w1[1]);
        rhs[0] = [-rhs[1][0] * f, -rhs[1][1] * f];
        // Upper wall: (b0 + 2A) u_N + b1 u_{N-1} + b2 u_{N-2} = 0.
        let a = robin_a(&self.proj.upper);
        let wn = row(nz - 2);
        let (b0, b1, b2) = (self.up_w[0], self.up_w[1], self.up_w[2]);
        let f = b2 / wn[0];
        d[nz - 1] = [
            [C::new(b0 - f * wn[2] + two * a[0][0], z), C::new(two * a[0][1], z)],
            [C::new(two * a[1][0], z), C::new(b0 - f * wn[2] + two * a[1][1], z)],
        ];
        l[nz - 1] = diag(b1 - f * wn[1]);
        rhs[nz - 1] = [-rhs[nz - 2][0] * f, -rhs[nz - 2][1] * f];
        let x = solve_block_tridiag(&l, &d, &up, &rhs)?;
        for r in 0..nz {
            u1[r] = x[r][0];
            u2[r] = x[r][1];
        }
        let mut la = vec![czero(); nz];
        let mut lb = vec![C::new(one, z); nz];
        let mut lc = vec![czero(); nz];
        for r in 1..nz - 1 {
            let w = row(r);
            la[r] = C::new(w[0], z);
            lb[r] = C::new(w[1], z);
            lc[r] = C::new(w[2], z);
        }
        let mut r3 = u3.to_vec();
        r3[0] = czero();
        r3[nz - 1] = czero();
        let x3 = solve_tridiag(&la, &lb, &lc, &r3)?;
        u3.copy_from_slice(&x3);
        Ok(())
    }

    /// CFL number `dt · max(|u₁|/Δx + |u₂|/Δy + |u₃|/Δz)`.
    pub fn cfl_number(&self, u: &VectorField<T>, dt: T) -> T {
        let g = &self.grid;
        let nz = g.nz;
        let z = &g.z_nodes;
        let mut m = T::zero();
        for col in 0..g.nx * g.ny {
            for k in 0..nz {
                let id = col * nz + k;
                let dz = if k == 0 {
                    z[1] - z[0]
                } else if k == nz - 1 {
                    z[nz - 1] - z[nz - 2]
                } else {
                    (z[k + 1] - z[k - 1]) / T::lit(2.0)
                };
                let c = u.c[0][id].abs() / g.dx() + u.c[1][id].abs() / g.dy() + u.c[2][id].abs() / dz;
                m = m.max(c);
            }
        }
        m * dt
    }

    /// Max one-sided Robin residual over both walls (physical space).
    pub fn robin_residual(&self, u: &VectorField<T>) -> T {
        let g = &self.grid;
        let nz = g.nz;
        let two = T::lit(2.0);
        let mut m = T::zero();
        let check = |rule: &WallRule<T>, w: [T; 3], nodes: [usize; 3], sign: T, m: &mut T| {
            if let WallRule::Robin { a, .. } = rule {
                for col in 0..g.nx * g.ny {
                    let b = col * nz;
                    let uw = [u.c[0][b + nodes[0]], u.c[1][b + nodes[0]]];
                    for c in 0..2 {
                        let d = w[0] * u.c[c][b + nodes[0]] + w[1] * u.c[c][b + nodes[1]] + w[2] * u.c[c][b + nodes[2]];
                        let r = d + sign * two * (a[c][0] * uw[0] + a[c][1] * uw[1]);
                        *m = m.max(r.abs());
                    }
                }
            }
        };
        check(&self.proj.lower, self.lo_w, [0, 1, 2], -T::one(), &mut m);
        check(&self.proj.upper, self.up_w, [nz - 1, nz - 2, nz - 3], T::one(), &mut m);
        m
    }

    pub fn max_divergence(&self, uh: &[Vec<C<T>>; 3]) -> T {
        // Spectral coefficients are unnormalized; scale back to physical size.
        self.proj.max_divergence(uh) / T::from_usize_lossy(self.modes())
    }

    fn energy(&self, u: &VectorField<T>) -> T {
        let g = &self.grid;
        let nz = g.nz;
        let mut e = T::zero();
        for col in 0..g.nx * g.ny {
            for k in 0..nz {
                let id = col * nz + k;
                let v = u.get(id);
                e += g.cell_weight(k) * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
            }
        }
        e
    }

    /// One RK3/CN step. `p` carries the pressure (spectral) between steps.
    fn step(&self, uh: &mut [Vec<C<T>>; 3], p: &mut [C<T>], dt: T) -> Result<()> {
        let nz = self.grid.nz;
        let mut n_prev: Option<[Vec<C<T>>; 3]> = None;
        for s in 0..3 {
            let (g, zt, al, be) = (T::lit(GAMMA[s]), T::lit(ZETA[s]), T::lit(ALPHA[s]), T::lit(BETA[s]));
            let n_cur = self.nonlinear(uh);
            let ab = (al + be) * dt;
            let viscous = self.epsilon > T::zero();
            let [u1, u2, u3] = uh;
            let np = n_prev.as_ref();
            u1.par_chunks_mut(nz)
                .zip(u2.par_chunks_mut(nz))
                .zip(u3.par_chunks_mut(nz))
                .enumerate()
                .try_for_each(|(m, ((a, b), c))| -> Result<()> {
                    let cols: [&mut [C<T>]; 3] = [a, b, c];
                    let kv = self.proj.kvec(m);
                    let pm = &p[m * nz..(m + 1) * nz];
                    let mut lap = vec![czero(); nz];
                    let mut new_cols: Vec<Vec<C<T>>> = Vec::with_capacity(3);
                    for (ci, col) in cols.iter().enumerate() {
                        if viscous {
                            self.viscous_explicit(m, col, &mut lap);
                        }
                        let nc = &n_cur[ci][m * nz..(m + 1) * nz];
                        let mut out = vec![czero(); nz];
                        for r in 0..nz {
                            let gp = grad_mode(kv, pm, self.proj.g(), r)[ci];
                            let mut v = col[r] + (nc[r] * g - gp * (al + be)) * dt;
                            if viscous {
                                v += lap[r] * (al * dt);
                            }
                            if let Some(np) = np {
                                v += np[ci][m * nz + r] * (zt * dt);
                            }
                            out[r] = v;
                        }
                        new_cols.push(out);
                    }
                    let [a, b, c] = cols;
                    a.copy_from_slice(&new_cols[0]);
                    b.copy_from_slice(&new_cols[1]);
                    c.copy_from_slice(&new_cols[2]);
                    if viscous {
                        self.implicit_mode(m, be * dt, [a, b, c])?;
                    }
                    Ok(())
                })?;
            let phi = self.project(uh)?;
            for (pv, f) in p.iter_mut().zip(&phi) {
                *pv += *f / ab;
            }
            n_prev = Some(n_cur);
        }
        Ok(())
    }

    /// Integrates from `u_init` to `t_final`, storing snapshots every `cadence`.
    pub fn run(&self, u_init: &VectorField<T>, t_final: T, opts: &SolverOptions<T>) -> Result<(Vec<FlowState<T>>, T, Vec<StepDiagnostics>)> {
        u_init.check_grid(&self.grid)?;
        if !u_init.is_finite() {
            return Err(Error::Input("initial data has non-finite values".into()));
        }
        if !(t_final > T::zero()) || !(opts.cadence > T::zero()) {
            return Err(Error::Config("final time and cadence must be positive".into()));
        }
        let nsnap = (t_final / opts.cadence).round();
        if (nsnap * opts.cadence - t_final).abs() > T::lit(1e-9) * t_final {
            return Err(Error::Config(format!(
                "cadence {} does not divide the final time {}",
                opts.cadence, t_final
            )));
        }
        let nsnap = nsnap.to_usize().unwrap_or(1).max(1);
        let mut uh = self.to_spectral(u_init);
        // Initial data: make discretely solenoidal without touching tangential wall values.
        {
            let slip = Projector::new(&self.grid, &self.sp, WallRule::Slip, WallRule::Slip)?;
            let nz = self.grid.nz;
            let mut phi = vec![czero(); nz];
            let [a, b, c] = &mut uh;
            for m in 0..self.modes() {
                let r = m * nz..(m + 1) * nz;
                slip.project_mode(m, [&mut a[r.clone()], &mut b[r.clone()], &mut c[r]], &mut phi)?;
            }
        }
        let u0 = self.to_physical(&uh, FieldKind::Physical);
        let umax0 = u0.max_norm();
        let cfl1 = self.cfl_number(&u0, T::one());
        let mut dt = opts.cadence;
        if cfl1 > T::zero() {
            dt = dt.min(opts.cfl / cfl1);
        }
        if let Some(m) = opts.dt_max {
            dt = dt.min(m);
        }
        let sub = (opts.cadence / dt).ceil().to_usize().unwrap_or(1).max(1);
        let dt = opts.cadence / T::from_usize_lossy(sub);
        let stability = T::lit(1.5);
        let mut p = vec![czero(); uh[0].len()];
        let mut snaps = vec![FlowState {
            u: u0.clone(),
            p: ScalarField::zeros(&self.grid),
            t: T::zero(),
        }];
        let mut diags = Vec::new();
        let mut t = T::zero();
        for snap in 1..=nsnap {
            for _ in 0..sub {
                self.step(&mut uh, &mut p, dt)?;
                t += dt;
                let u = self.to_physical(&uh, FieldKind::Physical);
                let umax = u.max_norm();
                if !u.is_finite() || umax > opts.blowup_factor * umax0.max(T::lit(1e-30)) {
                    return Err(Error::BlowUp(format!(
                        "|u|_inf = {umax:e} at t = {t} exceeds {} x the initial {umax0:e}",
                        opts.blowup_factor
                    )));
                }
                let c = self.cfl_number(&u, dt);
                if c > stability {
                    return Err(Error::StepSize(format!(
                        "CFL number {c} at t = {t} exceeds {stability} with dt = {dt}"
                    )));
                }
                if opts.record_diagnostics {
                    diags.push(StepDiagnostics {
                        t: t.as_f64(),
                        energy: self.energy(&u).as_f64(),
                        div_max: self.max_divergence(&uh).as_f64(),
                        robin_residual: self.robin_residual(&u).as_f64(),
                    });
                }
            }
            let t_snap = opts.cadence * T::from_usize_lossy(snap);
            let u = self.to_physical(&uh, FieldKind::Physical);
            let mut pf = ScalarField::zeros(&self.grid);
            pf.data = self.sp.inverse(p.clone());
            snaps.push(FlowState { u, p: pf, t: t_snap });
        }
        Ok((snaps, dt, diags))
    }
}

pub fn euler_solve<T: Real>(
    u_init: &VectorField<T>,
    forcing: &Forcing<T>,
    t_final: T,
    grid: &ChannelGrid<T>,
    opts: &SolverOptions<T>,
) -> Result<Trajectory<T>> {
    let s = ChannelSolver::new(grid, T::zero(), None, forcing, opts.dealias)?;
    let (snapshots, dt, diagnostics) = s.run(u_init, t_final, opts)?;
    Ok(Trajectory {
        snapshots,
        cadence: opts.cadence,
        epsilon: T::zero(),
        friction: None,
        forcing: forcing.clone(),
        dt,
        diagnostics,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn ns_solve<T: Real>(
    u_init: &VectorField<T>,
    forcing: &Forcing<T>,
    epsilon: T,
    a_lower: &FrictionTensor<T>,
    a_upper: &FrictionTensor<T>,
    t_final: T,
    grid: &ChannelGrid<T>,
    opts: &SolverOptions<T>,
) -> Result<Trajectory<T>> {
    if !(epsilon > T::zero()) {
        return Err(Error::Config(format!("Navier-Stokes runs need epsilon > 0, got {epsilon}")));
    }
    let s = ChannelSolver::new(grid, epsilon, Some((a_lower, a_upper)), forcing, opts.dealias)?;
    let (snapshots, dt, diagnostics) = s.run(u_init, t_final, opts)?;
    Ok(Trajectory {
        snapshots,
        cadence: opts.cadence,
        epsilon,
        friction: Some((a_lower.clone(), a_upper.clone())),
        forcing: forcing.clone(),
        dt,
        diagnostics,
    })
}
