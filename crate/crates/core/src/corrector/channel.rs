use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fd::{fornberg, ColumnOp};
use crate::field::{FieldKind, VectorField};
use crate::geometry::{weight_zeta, ChannelGrid, FrictionTensor, Wall};
use crate::scalar::Real;
use crate::spectral::Spectral;

use super::profile::{channel_profile, check_epsilon, ProfileJet, JET};

/// Tangential boundary data `ũ` on one wall, stored as `i * ny + j`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryData<T> {
    pub wall: Wall,
    pub t: T,
    pub nx: usize,
    pub ny: usize,
    pub u_tilde: Vec<[T; 2]>,
}

impl<T: Real> BoundaryData<T> {
    pub fn zeros(wall: Wall, nx: usize, ny: usize, t: T) -> Self {
        Self {
            wall,
            t,
            nx,
            ny,
            u_tilde: vec![[T::zero(); 2]; nx * ny],
        }
    }

    pub fn scaled(&self, s: T) -> Self {
        let mut r = self.clone();
        r.u_tilde.iter_mut().for_each(|v| {
            v[0] *= s;
            v[1] *= s;
        });
        r
    }

    fn component(&self, c: usize) -> Vec<T> {
        self.u_tilde.iter().map(|v| v[c]).collect()
    }
}

/// Neumann data for the corrector from the Euler field:
/// `ũ = -(∂z u0 ∓ 2 A u0)` at the lower (−) and upper (+) wall, with the normal
/// derivative taken by a five-point one-sided stencil.
pub fn euler_boundary_data_channel<T: Real>(
    u0: &VectorField<T>,
    a: &FrictionTensor<T>,
    wall: Wall,
    grid: &ChannelGrid<T>,
    t: T,
) -> Result<BoundaryData<T>> {
    u0.check_grid(grid)?;
    if !a.matches_grid(grid.nx, grid.ny) {
        return Err(Error::Input("friction samples do not match the grid".into()));
    }
    let nz = grid.nz;
    let z = &grid.z_nodes;
    let (k0, sign, nodes): (usize, T, Vec<usize>) = match wall {
        Wall::Lower => (0, -T::one(), (0..5).collect()),
        Wall::Upper => (nz - 1, T::one(), (nz - 5..nz).collect()),
        Wall::Torus => return Err(Error::Unsupported("torus wall on the channel".into())),
    };
    let zs: Vec<T> = nodes.iter().map(|&k| z[k]).collect();
    let w = fornberg(z[k0], &zs, 1)[1].clone();
    let scale = u0.max_norm().max(T::one());
    let tol = T::lit(1e-10) * scale;
    let two = T::lit(2.0);
    let mut out = BoundaryData::zeros(wall, grid.nx, grid.ny, t);
    for i in 0..grid.nx {
        for j in 0..grid.ny {
            let base = grid.idx(i, j, 0);
            let u3 = u0.c[2][base + k0];
            if !(u3.abs() <= tol) {
                return Err(Error::Input(format!(
                    "u0_3 = {u3:e} at the {wall:?} wall, node ({i},{j}); impermeability required"
                )));
            }
            let m = a.at(i, j);
            let uw = [u0.c[0][base + k0], u0.c[1][base + k0]];
            let mut ut = [T::zero(); 2];
            for c in 0..2 {
                let mut d = T::zero();
                for (q, &k) in nodes.iter().enumerate() {
                    d += w[q] * u0.c[c][base + k];
                }
                let au = m[c][0] * uw[0] + m[c][1] * uw[1];
                ut[c] = -(d + sign * two * au);
            }
            out.u_tilde[i * grid.ny + j] = ut;
        }
    }
    Ok(out)
}

/// Per-wall columns `[lower, upper]`.
pub type WallPair<T> = [Vec<T>; 2];

/// Separable representation of the channel corrector: wall planes times
/// z-profiles. Every derivative and norm of `θ` is evaluated from these parts.
#[derive(Clone, Debug)]
pub struct CorrectorLayers<T> {
    pub epsilon: T,
    pub h: T,
    pub lower: BoundaryData<T>,
    pub upper: BoundaryData<T>,
    /// Tangential divergence of `ũ` on each wall.
    pub div_lower: Vec<T>,
    pub div_upper: Vec<T>,
    pub phi_lower: Vec<ProfileJet<T>>,
    pub phi_upper: Vec<ProfileJet<T>>,
}

/// Corrector with its construction data.
#[derive(Clone, Debug)]
pub struct CorrectorField<T> {
    pub theta: VectorField<T>,
    pub epsilon: T,
    /// Width of the cutoff plateau, `h/8`.
    pub cutoff_width: T,
    pub layers: CorrectorLayers<T>,
}

impl<T: Real> CorrectorField<T> {
    pub fn boundary_data(&self, wall: Wall) -> &BoundaryData<T> {
        match wall {
            Wall::Upper => &self.layers.upper,
            _ => &self.layers.lower,
        }
    }
}

/// Planes of one derivative of `θ`: tangential `[ũ_L, ũ_R]` and divergence `[d_L, d_R]`.
#[derive(Clone, Debug)]
pub struct LayerPlanes<T> {
    pub tan: [Vec<[T; 2]>; 2],
    pub div: [Vec<T>; 2],
}

impl<T: Real> CorrectorLayers<T> {
    pub fn new(
        lower: BoundaryData<T>,
        upper: BoundaryData<T>,
        epsilon: T,
        grid: &ChannelGrid<T>,
        sp: &Spectral<T>,
    ) -> Result<Self> {
        check_epsilon(epsilon, grid.h)?;
        for b in [&lower, &upper] {
            if b.nx != grid.nx || b.ny != grid.ny {
                return Err(Error::Input("boundary data does not match the grid".into()));
            }
        }
        let div = |b: &BoundaryData<T>| -> Vec<T> {
            let dx = sp.derivative(&b.component(0), 1, 0);
            let dy = sp.derivative(&b.component(1), 0, 1);
            dx.iter().zip(&dy).map(|(a, b)| *a + *b).collect()
        };
        let mut phi_lower = Vec::with_capacity(grid.nz);
        let mut phi_upper = Vec::with_capacity(grid.nz);
        for &z in &grid.z_nodes {
            phi_lower.push(channel_profile(z, Wall::Lower, grid.h, epsilon)?);
            phi_upper.push(channel_profile(z, Wall::Upper, grid.h, epsilon)?);
        }
        Ok(Self {
            epsilon,
            h: grid.h,
            div_lower: div(&lower),
            div_upper: div(&upper),
            lower,
            upper,
            phi_lower,
            phi_upper,
        })
    }

    /// Same boundary data with a different viscosity (profiles rebuilt).
    pub fn with_epsilon(&self, epsilon: T, grid: &ChannelGrid<T>) -> Result<Self> {
        check_epsilon(epsilon, grid.h)?;
        let mut r = self.clone();
        r.epsilon = epsilon;
        for (k, &z) in grid.z_nodes.iter().enumerate() {
            r.phi_lower[k] = channel_profile(z, Wall::Lower, grid.h, epsilon)?;
            r.phi_upper[k] = channel_profile(z, Wall::Upper, grid.h, epsilon)?;
        }
        Ok(r)
    }

    /// Planes for `∂x^a ∂y^b`.
    pub fn planes(&self, sp: &Spectral<T>, a: usize, b: usize) -> LayerPlanes<T> {
        let tan = |bd: &BoundaryData<T>| -> Vec<[T; 2]> {
            let c0 = sp.derivative(&bd.component(0), a, b);
            let c1 = sp.derivative(&bd.component(1), a, b);
            c0.into_iter().zip(c1).map(|(x, y)| [x, y]).collect()
        };
        LayerPlanes {
            tan: [tan(&self.lower), tan(&self.upper)],
            div: [
                sp.derivative(&self.div_lower, a, b),
                sp.derivative(&self.div_upper, a, b),
            ],
        }
    }

    /// z-multipliers for the n-th normal derivative: tangential `-ε φ^{(n+1)}`
    /// and normal `ε φ^{(n)}`, per wall, per node.
    pub fn multipliers(&self, n: usize) -> Result<(WallPair<T>, WallPair<T>)> {
        if n + 1 >= JET {
            return Err(Error::Config(format!(
                "normal derivative order {n} exceeds the supported {}",
                JET - 2
            )));
        }
        let e = self.epsilon;
        let m = |p: &[ProfileJet<T>], d: usize, s: T| -> Vec<T> { p.iter().map(|j| s * j.deriv(d)).collect() };
        Ok((
            [m(&self.phi_lower, n + 1, -e), m(&self.phi_upper, n + 1, -e)],
            [m(&self.phi_lower, n, e), m(&self.phi_upper, n, e)],
        ))
    }

    /// Materializes `∂x^a ∂y^b ∂z^n θ` from given planes.
    pub fn assemble(&self, planes: &LayerPlanes<T>, n: usize, grid: &ChannelGrid<T>) -> Result<VectorField<T>> {
        let (mt, mn) = self.multipliers(n)?;
        let mut f = VectorField::zeros(grid, FieldKind::Corrector);
        let nz = grid.nz;
        for col in 0..grid.nx * grid.ny {
            let base = col * nz;
            for k in 0..nz {
                for c in 0..2 {
                    f.c[c][base + k] = planes.tan[0][col][c] * mt[0][k] + planes.tan[1][col][c] * mt[1][k];
                }
                f.c[2][base + k] = planes.div[0][col] * mn[0][k] + planes.div[1][col] * mn[1][k];
            }
        }
        Ok(f)
    }

    pub fn derivative(&self, grid: &ChannelGrid<T>, sp: &Spectral<T>, a: usize, b: usize, n: usize) -> Result<VectorField<T>> {
        self.assemble(&self.planes(sp, a, b), n, grid)
    }

    pub fn materialize(&self, grid: &ChannelGrid<T>, sp: &Spectral<T>) -> Result<CorrectorField<T>> {
        let theta = self.derivative(grid, sp, 0, 0, 0)?;
        Ok(CorrectorField {
            theta,
            epsilon: self.epsilon,
            cutoff_width: self.h / T::lit(8.0),
            layers: self.clone(),
        })
    }

    /// L², sup and ζ-weighted norms of one derivative of `θ`, evaluated exactly
    /// on the discrete grid from the separable parts. The lower and upper
    /// profiles have disjoint supports, so cross terms vanish.
    pub fn norms(&self, planes: &LayerPlanes<T>, n: usize, grid: &ChannelGrid<T>) -> Result<SeparableNorms<T>> {
        let (mt, mn) = self.multipliers(n)?;
        let area = grid.dx() * grid.dy();
        let sqrt_eps = self.epsilon.sqrt();
        let zeta: Vec<T> = grid
            .z_nodes
            .iter()
            .map(|&z| weight_zeta(z, grid.h).map(|v| v / sqrt_eps))
            .collect::<Result<_>>()?;
        let mut out = SeparableNorms::<T>::default();
        for w in 0..2 {
            let (mut pt, mut pn, mut st, mut sn) = (T::zero(), T::zero(), T::zero(), T::zero());
            for (v, d) in planes.tan[w].iter().zip(&planes.div[w]) {
                let m2 = v[0] * v[0] + v[1] * v[1];
                pt += m2;
                pn += *d * *d;
                st = st.max(m2.sqrt());
                sn = sn.max(d.abs());
            }
            let (mut zt, mut zn, mut zwt, mut zwn, mut mxt, mut mxn) =
                (T::zero(), T::zero(), T::zero(), T::zero(), T::zero(), T::zero());
            for k in 0..grid.nz {
                let wk = grid.z_weights[k];
                let a = mt[w][k];
                let b = mn[w][k];
                zt += wk * a * a;
                zn += wk * b * b;
                zwt += wk * (zeta[k] * a).powi(2);
                zwn += wk * (zeta[k] * b).powi(2);
                mxt = mxt.max(a.abs());
                mxn = mxn.max(b.abs());
            }
            out.tan_l2 += area * pt * zt;
            out.nor_l2 += area * pn * zn;
            out.tan_zeta += area * pt * zwt;
            out.nor_zeta += area * pn * zwn;
            out.tan_sup = out.tan_sup.max(st * mxt);
            out.nor_sup = out.nor_sup.max(sn * mxn);
        }
        out.tan_l2 = out.tan_l2.sqrt();
        out.nor_l2 = out.nor_l2.sqrt();
        out.tan_zeta = out.tan_zeta.sqrt();
        out.nor_zeta = out.nor_zeta.sqrt();
        Ok(out)
    }
}

/// Norms of one derivative of the corrector; `tan` covers `(θ₁, θ₂)`, `nor` covers `θ₃`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SeparableNorms<T> {
    pub tan_l2: T,
    pub nor_l2: T,
    pub tan_sup: T,
    pub nor_sup: T,
    pub tan_zeta: T,
    pub nor_zeta: T,
}

pub fn build_corrector_channel<T: Real>(
    u0: &VectorField<T>,
    a_lower: &FrictionTensor<T>,
    a_upper: &FrictionTensor<T>,
    epsilon: T,
    grid: &ChannelGrid<T>,
    t: T,
) -> Result<CorrectorField<T>> {
    check_epsilon(epsilon, grid.h)?;
    let sp = Spectral::new(grid);
    let lower = euler_boundary_data_channel(u0, a_lower, Wall::Lower, grid, t)?;
    let upper = euler_boundary_data_channel(u0, a_upper, Wall::Upper, grid, t)?;
    CorrectorLayers::new(lower, upper, epsilon, grid, &sp)?.materialize(grid, &sp)
}

/// Central difference of two correctors built at `t ± δt`.
pub fn corrector_time_derivative<T: Real>(
    minus: &CorrectorField<T>,
    plus: &CorrectorField<T>,
) -> Result<VectorField<T>> {
    let dt = plus.layers.lower.t - minus.layers.lower.t;
    if !(dt > T::zero()) || !minus.theta.same_shape(&plus.theta) {
        return Err(Error::Input("time derivative needs two correctors at increasing times".into()));
    }
    let mut d = plus.theta.sub(&minus.theta, FieldKind::Corrector);
    d = d.scaled(T::one() / dt);
    Ok(d)
}

/// `R_ε(θ) = -∂θ/∂t + εΔθ` with a spectral tangential Laplacian and a
/// finite-difference normal second derivative. `None` means steady data.
pub fn corrector_residual_r<T: Real>(
    theta: &CorrectorField<T>,
    dtheta_dt: Option<&VectorField<T>>,
    grid: &ChannelGrid<T>,
) -> Result<VectorField<T>> {
    theta.theta.check_grid(grid)?;
    let sp = Spectral::new(grid);
    let d2 = ColumnOp::d2(&grid.z_nodes);
    let eps = theta.epsilon;
    let mut r = VectorField::zeros(grid, FieldKind::Other);
    let nz = grid.nz;
    for c in 0..3 {
        let f = &theta.theta.c[c];
        let fxx = sp.derivative(f, 2, 0);
        let fyy = sp.derivative(f, 0, 2);
        for col in 0..grid.nx * grid.ny {
            let s = &f[col * nz..(col + 1) * nz];
            for k in 0..nz {
                let id = col * nz + k;
                r.c[c][id] = eps * (fxx[id] + fyy[id] + d2.apply_at(s, k));
            }
        }
        if let Some(dt) = dtheta_dt {
            if !dt.fits(grid) {
                return Err(Error::Input("time derivative field does not match the grid".into()));
            }
            for (a, b) in r.c[c].iter_mut().zip(&dt.c[c]) {
                *a -= *b;
            }
        }
    }
    Ok(r)
}

/// Writes `i,j,k,theta1,theta2,theta3` rows.
pub fn write_corrector_csv<T: Real>(theta: &VectorField<T>, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    let io = |e| Error::io(path, e);
    writeln!(w, "i,j,k,theta1,theta2,theta3").map_err(io)?;
    for i in 0..theta.nx {
        for j in 0..theta.ny {
            for k in 0..theta.nz {
                let id = (i * theta.ny + j) * theta.nz + k;
                writeln!(
                    w,
                    "{i},{j},{k},{:e},{:e},{:e}",
                    theta.c[0][id], theta.c[1][id], theta.c[2][id]
                )
                .map_err(io)?;
            }
        }
    }
    w.flush().map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_channel_grid;

    #[test]
    fn boundary_data_examples() {
        let pi = std::f64::consts::PI;
        let g = make_channel_grid(1.0, 1.0, pi, 4, 4, 257, 1.0).unwrap();
        let u0 = VectorField::from_fn(&g, FieldKind::Physical, |_, _, z| [z.sin(), 0.0, 0.0]);
        let a = FrictionTensor::isotropic(Wall::Lower, 0.7).unwrap();
        let lo = euler_boundary_data_channel(&u0, &a, Wall::Lower, &g, 0.0).unwrap();
        let up = euler_boundary_data_channel(&u0, &a, Wall::Upper, &g, 0.0).unwrap();
        for v in &lo.u_tilde {
            assert!((v[0] + 1.0).abs() < 1e-9 && v[1] == 0.0);
        }
        for v in &up.u_tilde {
            assert!((v[0] - 1.0).abs() < 1e-9);
        }
        let zero = VectorField::zeros(&g, FieldKind::Physical);
        let lo = euler_boundary_data_channel(&zero, &a, Wall::Lower, &g, 0.0).unwrap();
        assert!(lo.u_tilde.iter().all(|v| v[0] == 0.0 && v[1] == 0.0));
    }

    #[test]
    fn rejects_permeable_wall() {
        let g = make_channel_grid(1.0, 1.0, 1.0, 4, 4, 33, 0.0).unwrap();
        let u0 = VectorField::from_fn(&g, FieldKind::Physical, |_, _, _| [0.0, 0.0, 1.0]);
        let a = FrictionTensor::isotropic(Wall::Lower, 0.5).unwrap();
        assert!(matches!(
            euler_boundary_data_channel(&u0, &a, Wall::Lower, &g, 0.0),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn epsilon_too_large() {
        let g = make_channel_grid(1.0, 1.0, 1.0, 4, 4, 33, 0.0).unwrap();
        let u0 = VectorField::zeros(&g, FieldKind::Physical);
        let a = FrictionTensor::isotropic(Wall::Lower, 0.5).unwrap();
        let b = FrictionTensor::isotropic(Wall::Upper, 0.5).unwrap();
        assert!(matches!(
            build_corrector_channel(&u0, &a, &b, 0.02, &g, 0.0),
            Err(Error::Config(_))
        ));
    }
}
