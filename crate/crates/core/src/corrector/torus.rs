use crate::error::{Error, Result};
use crate::fd::periodic_d1_4th;
use crate::geometry::{torus_metric, TorusChart};
use crate::scalar::Real;

use super::profile::{torus_profile, ProfileJet};

/// Tensor grid over `(η₁, η₂, ξ₃)`: uniform periodic angles, `ξ₃` nodes in `[0, 3a]`
/// clustered toward the surface. Layout `(i * n2 + j) * n3 + k`.
#[derive(Clone, Debug)]
pub struct TorusGrid<T> {
    pub chart: TorusChart<T>,
    pub n1: usize,
    pub n2: usize,
    pub xi3: Vec<T>,
}

impl<T: Real> TorusGrid<T> {
    /// `ξ₃(s) = 3a (1 - tanh(c(1-s))/tanh c)`, uniform when `c = 0`.
    pub fn new(chart: TorusChart<T>, n1: usize, n2: usize, n3: usize, clustering: T) -> Result<Self> {
        if n1 < 8 || n2 < 8 || n3 < 5 {
            return Err(Error::Config(format!(
                "torus grid needs n1, n2 >= 8 and n3 >= 5, got {n1}, {n2}, {n3}"
            )));
        }
        if !(clustering >= T::zero()) {
            return Err(Error::Config("clustering must be >= 0".into()));
        }
        let top = T::lit(3.0) * chart.a;
        let last = T::from_usize_lossy(n3 - 1);
        let mut xi3: Vec<T> = (0..n3)
            .map(|k| {
                let s = T::from_usize_lossy(k) / last;
                if clustering == T::zero() {
                    top * s
                } else {
                    top * (T::one() - (clustering * (T::one() - s)).tanh() / clustering.tanh())
                }
            })
            .collect();
        xi3[0] = T::zero();
        xi3[n3 - 1] = top;
        Ok(Self { chart, n1, n2, xi3 })
    }

    pub fn n3(&self) -> usize {
        self.xi3.len()
    }

    pub fn eta1(&self, i: usize) -> T {
        T::lit(2.0) * T::PI() * T::from_usize_lossy(i) / T::from_usize_lossy(self.n1)
    }

    pub fn eta2(&self, j: usize) -> T {
        T::lit(2.0) * T::PI() * T::from_usize_lossy(j) / T::from_usize_lossy(self.n2)
    }

    pub fn d_eta1(&self) -> T {
        T::lit(2.0) * T::PI() / T::from_usize_lossy(self.n1)
    }

    pub fn d_eta2(&self) -> T {
        T::lit(2.0) * T::PI() / T::from_usize_lossy(self.n2)
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n2 + j) * self.n3() + k
    }
}

/// Tangential boundary data on the torus surface, components along `(ê₁, ê₂)`,
/// stored as `i * n2 + j`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusBoundaryData<T> {
    pub n1: usize,
    pub n2: usize,
    pub t: T,
    pub u_tilde: Vec<[T; 2]>,
}

impl<T: Real> TorusBoundaryData<T> {
    pub fn from_fn(grid: &TorusGrid<T>, t: T, f: impl Fn(T, T) -> [T; 2]) -> Self {
        let mut u = Vec::with_capacity(grid.n1 * grid.n2);
        for i in 0..grid.n1 {
            for j in 0..grid.n2 {
                u.push(f(grid.eta1(i), grid.eta2(j)));
            }
        }
        Self {
            n1: grid.n1,
            n2: grid.n2,
            t,
            u_tilde: u,
        }
    }

    /// `ũ = 2([S(u⁰)n]_tan + 𝒜u⁰)` from surface samples of the Euler velocity
    /// and of its tangential traction, both in the principal frame.
    pub fn from_traction(
        grid: &TorusGrid<T>,
        t: T,
        u0_tan: impl Fn(T, T) -> [T; 2],
        sn_tan: impl Fn(T, T) -> [T; 2],
        friction: impl Fn(T, T) -> [[T; 2]; 2],
    ) -> Self {
        let two = T::lit(2.0);
        Self::from_fn(grid, t, |e1, e2| {
            let u = u0_tan(e1, e2);
            let s = sn_tan(e1, e2);
            let a = friction(e1, e2);
            [
                two * (s[0] + a[0][0] * u[0] + a[0][1] * u[1]),
                two * (s[1] + a[1][0] * u[0] + a[1][1] * u[1]),
            ]
        })
    }
}

/// Curvatures used by the construction; `Flat` substitutes `κ₁ = κ₂ = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurvatureMode {
    Chart,
    Flat,
}

/// Corrector on the torus collar with components along `(ê₁, ê₂, e₃ = -n)`.
#[derive(Clone, Debug)]
pub struct TorusCorrectorField<T> {
    pub grid: TorusGrid<T>,
    pub epsilon: T,
    pub mode: CurvatureMode,
    pub data: TorusBoundaryData<T>,
    /// Surface divergence `div_τ ũ`.
    pub div_tau: Vec<T>,
    /// Boundary error `E_i = κ_{3-i} ũ_i` of the Neumann condition.
    pub e_error: Vec<[T; 2]>,
    pub profile: Vec<ProfileJet<T>>,
    pub theta: [Vec<T>; 3],
}

/// Surface divergence `(1/(rρ)) [∂η₁(ρ ũ₁) + ∂η₂(r ũ₂)]` with fourth-order
/// periodic differences.
pub fn surface_divergence<T: Real>(grid: &TorusGrid<T>, data: &TorusBoundaryData<T>) -> Vec<T> {
    let (n1, n2) = (grid.n1, grid.n2);
    let c = &grid.chart;
    let r = c.minor;
    let mut out = vec![T::zero(); n1 * n2];
    for j in 0..n2 {
        let line: Vec<T> = (0..n1).map(|i| c.rho(grid.eta1(i)) * data.u_tilde[i * n2 + j][0]).collect();
        let d = periodic_d1_4th(&line, grid.d_eta1());
        for i in 0..n1 {
            out[i * n2 + j] += d[i];
        }
    }
    for i in 0..n1 {
        let line: Vec<T> = (0..n2).map(|j| r * data.u_tilde[i * n2 + j][1]).collect();
        let d = periodic_d1_4th(&line, grid.d_eta2());
        for j in 0..n2 {
            out[i * n2 + j] += d[j];
        }
    }
    for i in 0..n1 {
        let rho = c.rho(grid.eta1(i));
        for j in 0..n2 {
            out[i * n2 + j] /= r * rho;
        }
    }
    out
}

/// Multipliers at one point: `θ_i = m_i ũ_i`, `θ₃ = m₃ div_τ ũ`, for the
/// n-th `ξ₃`-derivative of the profile parts (`n = 0` gives `θ` itself).
pub fn torus_multipliers<T: Real>(kappa: (T, T), xi3: T, eps: T, phi: &ProfileJet<T>) -> [T; 3] {
    let f1 = T::one() - kappa.0 * xi3;
    let f2 = T::one() - kappa.1 * xi3;
    let dphi = phi.deriv(1);
    [-eps * dphi / f2, -eps * dphi / f1, eps * phi.value() / (f1 * f2)]
}

pub fn build_corrector_torus<T: Real>(
    data: &TorusBoundaryData<T>,
    epsilon: T,
    grid: &TorusGrid<T>,
    mode: CurvatureMode,
) -> Result<TorusCorrectorField<T>> {
    if !(epsilon > T::zero()) {
        return Err(Error::Config(format!("epsilon must be positive, got {epsilon}")));
    }
    if data.n1 != grid.n1 || data.n2 != grid.n2 {
        return Err(Error::Input("torus boundary data does not match the grid".into()));
    }
    let n3 = grid.n3();
    let chart = &grid.chart;
    let profile: Vec<ProfileJet<T>> = grid.xi3.iter().map(|&x| torus_profile(x, chart.a, epsilon)).collect();
    let div_tau = surface_divergence(grid, data);
    let len = grid.n1 * grid.n2 * n3;
    let mut theta = [vec![T::zero(); len], vec![T::zero(); len], vec![T::zero(); len]];
    let mut e_error = Vec::with_capacity(grid.n1 * grid.n2);
    for i in 0..grid.n1 {
        let e1 = grid.eta1(i);
        let kappa = match mode {
            CurvatureMode::Chart => chart.curvatures(e1),
            CurvatureMode::Flat => (T::zero(), T::zero()),
        };
        for j in 0..grid.n2 {
            let s = i * grid.n2 + j;
            let u = data.u_tilde[s];
            e_error.push([kappa.1 * u[0], kappa.0 * u[1]]);
            for k in 0..n3 {
                if mode == CurvatureMode::Chart {
                    torus_metric(chart, e1, grid.eta2(j), grid.xi3[k])?;
                }
                let m = torus_multipliers(kappa, grid.xi3[k], epsilon, &profile[k]);
                let id = grid.idx(i, j, k);
                theta[0][id] = m[0] * u[0];
                theta[1][id] = m[1] * u[1];
                theta[2][id] = m[2] * div_tau[s];
            }
        }
    }
    Ok(TorusCorrectorField {
        grid: grid.clone(),
        epsilon,
        mode,
        data: data.clone(),
        div_tau,
        e_error,
        profile,
        theta,
    })
}

impl<T: Real> TorusCorrectorField<T> {
    /// Divergence in the chart metric, `(1/√q) Σ ∂_i(√q θ^i)`, with fourth-order
    /// periodic differences in the angles and second-order differences in `ξ₃`.
    pub fn metric_divergence(&self) -> Result<Vec<T>> {
        let g = &self.grid;
        let (n1, n2, n3) = (g.n1, g.n2, g.n3());
        let chart = &g.chart;
        let mut sq = vec![T::zero(); n1 * n2 * n3];
        let mut f1 = vec![T::zero(); n1 * n2 * n3];
        let mut f2 = vec![T::zero(); n1 * n2 * n3];
        let mut f3 = vec![T::zero(); n1 * n2 * n3];
        for i in 0..n1 {
            for j in 0..n2 {
                for k in 0..n3 {
                    let m = torus_metric(chart, g.eta1(i), g.eta2(j), g.xi3[k])?;
                    let id = g.idx(i, j, k);
                    sq[id] = m.sqrt_q;
                    f1[id] = m.sqrt_q * self.theta[0][id] / m.q11.sqrt();
                    f2[id] = m.sqrt_q * self.theta[1][id] / m.q22.sqrt();
                    f3[id] = m.sqrt_q * self.theta[2][id];
                }
            }
        }
        let mut div = vec![T::zero(); n1 * n2 * n3];
        for j in 0..n2 {
            for k in 0..n3 {
                let line: Vec<T> = (0..n1).map(|i| f1[g.idx(i, j, k)]).collect();
                let d = periodic_d1_4th(&line, g.d_eta1());
                for i in 0..n1 {
                    div[g.idx(i, j, k)] += d[i];
                }
            }
        }
        for i in 0..n1 {
            for k in 0..n3 {
                let line: Vec<T> = (0..n2).map(|j| f2[g.idx(i, j, k)]).collect();
                let d = periodic_d1_4th(&line, g.d_eta2());
                for j in 0..n2 {
                    div[g.idx(i, j, k)] += d[j];
                }
            }
        }
        let dz = crate::fd::ColumnOp::d1(&g.xi3);
        for col in 0..n1 * n2 {
            let s = &f3[col * n3..(col + 1) * n3];
            for k in 0..n3 {
                div[col * n3 + k] += dz.apply_at(s, k);
            }
        }
        for (d, q) in div.iter_mut().zip(&sq) {
            *d /= *q;
        }
        Ok(div)
    }

    /// One-sided `∂θ_i/∂ξ₃` at the surface from the first `width` nodes.
    pub fn surface_normal_derivative(&self, width: usize) -> Vec<[T; 2]> {
        let g = &self.grid;
        let n3 = g.n3();
        let w = crate::fd::fornberg(T::zero(), &g.xi3[..width], 1)[1].clone();
        (0..g.n1 * g.n2)
            .map(|col| {
                let mut d = [T::zero(); 2];
                for c in 0..2 {
                    for q in 0..width {
                        d[c] += w[q] * self.theta[c][col * n3 + q];
                    }
                }
                d
            })
            .collect()
    }

    /// Largest `|θ₃|` on the surface `ξ₃ = 0`.
    pub fn surface_normal_max(&self) -> T {
        let n3 = self.grid.n3();
        (0..self.grid.n1 * self.grid.n2).fold(T::zero(), |m, col| m.max(self.theta[2][col * n3].abs()))
    }

    /// L² norms over the collar in the chart volume `√q dη₁ dη₂ dξ₃` of the
    /// tangential part and of `θ₃`.
    pub fn l2_norms(&self) -> Result<(T, T)> {
        let g = &self.grid;
        let n3 = g.n3();
        let wz = crate::fd::trapezoid_weights(&g.xi3);
        let da = g.d_eta1() * g.d_eta2();
        let (mut t, mut n) = (T::zero(), T::zero());
        for i in 0..g.n1 {
            for j in 0..g.n2 {
                for k in 0..n3 {
                    let m = torus_metric(&g.chart, g.eta1(i), g.eta2(j), g.xi3[k])?;
                    let id = g.idx(i, j, k);
                    let w = da * wz[k] * m.sqrt_q;
                    t += w * (self.theta[0][id].powi(2) + self.theta[1][id].powi(2));
                    n += w * self.theta[2][id].powi(2);
                }
            }
        }
        Ok((t.sqrt(), n.sqrt()))
    }
}
