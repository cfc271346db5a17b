use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{torus_shape_operator, TorusChart};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeBcReport {
    /// Max of `|2 S(u)n·τ + 2 𝒜u·τ - (curl u × n)·τ|` over samples and `τ = ê₁, ê₂`.
    pub residual: f64,
    /// Max of `|[S(u)n]_tan + 𝒜u|`.
    pub r1_max: f64,
    /// Max of `|(curl u) × n|`.
    pub r2_max: f64,
}

fn add<T: Real>(a: [T; 3], b: [T; 3], s: T) -> [T; 3] {
    [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]]
}

fn dot<T: Real>(a: [T; 3], b: [T; 3]) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross<T: Real>(a: [T; 3], b: [T; 3]) -> [T; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn inv3<T: Real>(m: [[T; 3]; 3]) -> Option<[[T; 3]; 3]> {
    let c = |i: usize, j: usize| {
        let (i1, i2) = ((i + 1) % 3, (i + 2) % 3);
        let (j1, j2) = ((j + 1) % 3, (j + 2) % 3);
        m[i1][j1] * m[i2][j2] - m[i1][j2] * m[i2][j1]
    };
    let det = m[0][0] * c(0, 0) + m[0][1] * c(0, 1) + m[0][2] * c(0, 2);
    if det.abs() < T::lit(1e-14) {
        return None;
    }
    let mut r = [[T::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            r[i][j] = c(j, i) / det;
        }
    }
    Some(r)
}

/// Checks, on an `n1 × n2` sample of the torus surface, that the friction
/// condition with `𝒜` the shape operator is the condition `(curl u) × n = 0`.
/// `u(η₁, η₂, ξ)` gives frame components `(ê₁, ê₂, e₃)` of a field defined on
/// a neighborhood of the surface (`ξ` may be slightly negative); derivatives
/// are central differences with step `delta`.
pub fn shape_bc_equivalence_check<T: Real>(
    u: impl Fn(T, T, T) -> [T; 3],
    chart: &TorusChart<T>,
    n1: usize,
    n2: usize,
    delta: T,
) -> Result<ShapeBcReport> {
    if n1 == 0 || n2 == 0 || !(delta > T::zero()) {
        return Err(Error::Config("need samples and a positive step".into()));
    }
    let pos = |e1: T, e2: T, xi: T| -> [T; 3] {
        let rho = chart.rho(e1);
        let n = chart.outer_normal(e1, e2);
        let s = [rho * e2.cos(), rho * e2.sin(), chart.minor * e1.sin()];
        add(s, n, -xi)
    };
    let cart = |e1: T, e2: T, xi: T| -> [T; 3] {
        let f = chart.frame(e1, e2);
        let c = u(e1, e2, xi);
        let mut v = [T::zero(); 3];
        for (cf, ef) in c.iter().zip(f.iter()) {
            v = add(v, *ef, *cf);
        }
        v
    };
    let two = T::lit(2.0);
    let tpi = T::PI() + T::PI();
    let mut rep = ShapeBcReport {
        residual: 0.0,
        r1_max: 0.0,
        r2_max: 0.0,
    };
    for i in 0..n1 {
        for j in 0..n2 {
            let e1 = tpi * T::from_usize_lossy(i) / T::from_usize_lossy(n1);
            let e2 = tpi * T::from_usize_lossy(j) / T::from_usize_lossy(n2);
            let c0 = u(e1, e2, T::zero());
            let scale = T::one().max(c0.iter().fold(T::zero(), |a, v| a.max(v.abs())));
            if c0[2].abs() > T::lit(1e-10) * scale {
                return Err(Error::Input(format!(
                    "normal component {} at (η1, η2) = ({e1}, {e2}) is not zero",
                    c0[2]
                )));
            }
            let q = [e1, e2, T::zero()];
            let shift = |k: usize, s: T| {
                let mut p = q;
                p[k] += s;
                p
            };
            // Columns: ∂x/∂q_k and ∂U/∂q_k.
            let mut jac = [[T::zero(); 3]; 3];
            let mut du = [[T::zero(); 3]; 3];
            for k in 0..3 {
                let (p, m) = (shift(k, delta), shift(k, -delta));
                let xp = pos(p[0], p[1], p[2]);
                let xm = pos(m[0], m[1], m[2]);
                let up = cart(p[0], p[1], p[2]);
                let um = cart(m[0], m[1], m[2]);
                for r in 0..3 {
                    jac[r][k] = (xp[r] - xm[r]) / (two * delta);
                    du[r][k] = (up[r] - um[r]) / (two * delta);
                }
            }
            let ji = inv3(jac).ok_or_else(|| Error::Geometry("singular chart Jacobian".into()))?;
            // ∇U[r][s] = ∂U_r/∂x_s = Σ_k ∂U_r/∂q_k ∂q_k/∂x_s.
            let mut g = [[T::zero(); 3]; 3];
            for r in 0..3 {
                for s in 0..3 {
                    for k in 0..3 {
                        g[r][s] += du[r][k] * ji[k][s];
                    }
                }
            }
            let n = chart.outer_normal(e1, e2);
            let mut sn = [T::zero(); 3];
            for r in 0..3 {
                for s in 0..3 {
                    sn[r] += T::lit(0.5) * (g[r][s] + g[s][r]) * n[s];
                }
            }
            let curl = [g[2][1] - g[1][2], g[0][2] - g[2][0], g[1][0] - g[0][1]];
            let cxn = cross(curl, n);
            let f = chart.frame(e1, e2);
            let sh = torus_shape_operator(chart, e1, e2);
            let mut r1 = [T::zero(); 2];
            for t in 0..2 {
                let au = sh[t][0] * c0[0] + sh[t][1] * c0[1];
                r1[t] = dot(sn, f[t]) + au;
                let res = (two * r1[t] - dot(cxn, f[t])).abs();
                rep.residual = rep.residual.max(res.as_f64());
            }
            rep.r1_max = rep.r1_max.max((r1[0] * r1[0] + r1[1] * r1[1]).sqrt().as_f64());
            rep.r2_max = rep.r2_max.max(dot(cxn, cxn).sqrt().as_f64());
        }
    }
    Ok(rep)
}
