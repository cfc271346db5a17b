use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::diff::Gradient;
use crate::error::{Error, Result};
use crate::fd::ColumnOp;
use crate::field::VectorField;
use crate::geometry::ChannelGrid;
use crate::scalar::Real;

use super::conormal::{conormal_norm, conormal_norm_of_gradient};
use super::norms::{l2_sq_arrays, norm_grad, norm_l2, norm_linf, Region};

/// Both sides of the anisotropic Agmon inequality near and away from the walls.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgmonReport {
    pub lhs_boundary: f64,
    pub rhs_boundary: f64,
    pub lhs_interior: f64,
    pub rhs_interior: f64,
    pub ratio_boundary: f64,
    pub ratio_interior: f64,
}

/// Boundary side: `‖f‖_{L∞(Γa)}` against
/// `‖f‖^{1/2-1/(2m)} ‖f‖_{co,m}^{1/(2m)} (‖f‖ + ‖∇f‖_{co,m})^{1/2}`;
/// interior side: `‖f‖_{L∞(Ω∖Γa)}` against `‖f‖^{1-3/(2m)} ‖f‖_{co,m}^{3/(2m)}`.
pub fn agmon_anisotropic_check<T: Real>(
    f: &VectorField<T>,
    grid: &ChannelGrid<T>,
    m: usize,
    a: T,
) -> Result<AgmonReport> {
    if m < 3 {
        return Err(Error::Config(format!("anisotropic Agmon needs m >= 3, got {m}")));
    }
    let a = a.as_f64();
    let lb = norm_linf(f, grid, Region::BoundaryStrip(a))?.as_f64();
    let li = norm_linf(f, grid, Region::Interior(a))?.as_f64();
    let l2 = norm_l2(f, grid, Region::Whole)?.as_f64();
    let co = conormal_norm(f, grid, m)?.value.as_f64();
    let gco = conormal_norm_of_gradient(f, grid, m)?.as_f64();
    let mf = m as f64;
    let rb = l2.powf(0.5 - 0.5 / mf) * co.powf(0.5 / mf) * (l2 + gco).sqrt();
    let ri = l2.powf(1.0 - 1.5 / mf) * co.powf(1.5 / mf);
    if !(rb > 0.0) || !(ri > 0.0) {
        return Err(Error::Degenerate("Agmon right-hand side vanishes (f = 0)".into()));
    }
    Ok(AgmonReport {
        lhs_boundary: lb,
        rhs_boundary: rb,
        lhs_interior: li,
        rhs_interior: ri,
        ratio_boundary: lb / rb,
        ratio_interior: li / ri,
    })
}

/// Samples of a function on a periodic box in one to three dimensions;
/// the last index varies fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxField<T> {
    pub lengths: Vec<T>,
    pub n: Vec<usize>,
    pub data: Vec<T>,
}

impl<T: Real> BoxField<T> {
    pub fn from_fn(lengths: &[T], n: &[usize], f: impl Fn(&[T]) -> T) -> Result<Self> {
        let d = lengths.len();
        if !(1..=3).contains(&d) || n.len() != d {
            return Err(Error::Config(format!("box dimension must be 1..=3, got {d}")));
        }
        if n.iter().any(|&k| k < 2) || lengths.iter().any(|l| !(*l > T::zero())) {
            return Err(Error::Config("box sizes and lengths must be positive".into()));
        }
        let total: usize = n.iter().product();
        let mut data = Vec::with_capacity(total);
        let mut x = vec![T::zero(); d];
        for id in 0..total {
            let mut r = id;
            for ax in (0..d).rev() {
                let i = r % n[ax];
                r /= n[ax];
                x[ax] = lengths[ax] * T::from_usize_lossy(i) / T::from_usize_lossy(n[ax]);
            }
            data.push(f(&x));
        }
        Ok(Self {
            lengths: lengths.to_vec(),
            n: n.to_vec(),
            data,
        })
    }

    pub fn dim(&self) -> usize {
        self.n.len()
    }

    pub fn volume(&self) -> T {
        self.lengths.iter().fold(T::one(), |a, l| a * *l)
    }

    fn spectrum(&self) -> Vec<Complex<T>> {
        let mut d: Vec<Complex<T>> = self.data.iter().map(|v| Complex::new(*v, T::zero())).collect();
        let mut planner = FftPlanner::new();
        let dims = self.dim();
        for ax in 0..dims {
            let len = self.n[ax];
            let stride: usize = self.n[ax + 1..].iter().product();
            let fft = planner.plan_fft_forward(len);
            let mut line = vec![Complex::new(T::zero(), T::zero()); len];
            let outer = d.len() / (len * stride);
            for o in 0..outer {
                for s in 0..stride {
                    let base = o * len * stride + s;
                    for i in 0..len {
                        line[i] = d[base + i * stride];
                    }
                    fft.process(&mut line);
                    for i in 0..len {
                        d[base + i * stride] = line[i];
                    }
                }
            }
        }
        d
    }

    /// `Σ_{|β|≤k} ‖∂^β f‖²`, exact for the trigonometric interpolant.
    pub fn sobolev_sq(&self, k: usize) -> T {
        let spec = self.spectrum();
        let d = self.dim();
        let total = spec.len();
        let two_pi = T::PI() + T::PI();
        let mut s = T::zero();
        for (id, c) in spec.iter().enumerate() {
            let mut r = id;
            let mut kk = [T::zero(); 3];
            for ax in (0..d).rev() {
                let i = r % self.n[ax];
                r /= self.n[ax];
                let m = if i <= self.n[ax] / 2 { i as f64 } else { i as f64 - self.n[ax] as f64 };
                kk[ax] = two_pi * T::lit(m) / self.lengths[ax];
            }
            // Σ over multi-indices of Π k_i^{2β_i}.
            let mut w = T::zero();
            for b0 in 0..=k {
                for b1 in 0..=(if d > 1 { k - b0 } else { 0 }) {
                    for b2 in 0..=(if d > 2 { k - b0 - b1 } else { 0 }) {
                        w += kk[0].powi(2 * b0 as i32) * kk[1].powi(2 * b1 as i32) * kk[2].powi(2 * b2 as i32);
                    }
                }
            }
            s += c.norm_sqr() * w;
        }
        let n = T::from_usize_lossy(total);
        s * self.volume() / (n * n)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |a, v| a.max(v.abs()))
    }
}

/// `‖f‖_∞ / (‖f‖^{1-d/(2k)} ‖f‖_{H^k}^{d/(2k)})` in dimension `d`.
pub fn lemma_agmon_check<T: Real>(f: &BoxField<T>, k: usize) -> Result<T> {
    let d = f.dim();
    if k < d {
        return Err(Error::Config(format!("need k >= d, got k = {k}, d = {d}")));
    }
    let l2 = f.sobolev_sq(0).sqrt();
    if !(l2 > T::zero()) {
        return Err(Error::Degenerate("f = 0: the Agmon ratio is 0/0".into()));
    }
    let hk = f.sobolev_sq(k).sqrt();
    let e = T::from_usize_lossy(d) / T::from_usize_lossy(2 * k);
    Ok(f.max_abs() / (l2.powf(T::one() - e) * hk.powf(e)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IbpReport {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

fn strain<T: Real>(g: &[[Vec<T>; 3]; 3], id: usize) -> [[T; 3]; 3] {
    let half = T::lit(0.5);
    let mut s = [[T::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            // g[c][d] = ∂_d f_c
            s[i][j] = half * (g[i][j][id] + g[j][i][id]);
        }
    }
    s
}

fn gradients<T: Real>(gr: &Gradient<T>, f: &VectorField<T>) -> [[Vec<T>; 3]; 3] {
    [gr.of(&f.c[0]), gr.of(&f.c[1]), gr.of(&f.c[2])]
}

/// Relative tolerance for the discrete divergence of inputs that must be solenoidal.
pub const SOLENOIDAL_TOL: f64 = 1e-2;

/// Integration by parts for solenoidal `f` with wall traction `Φ = S(f)n`:
/// `lhs = -∫Δf·g`, `rhs = 2∫S(f):S(g) - 2∫_Γ Φ·g`.
pub fn lemma1_ibp_check<T: Real>(f: &VectorField<T>, g: &VectorField<T>, grid: &ChannelGrid<T>) -> Result<IbpReport> {
    f.check_grid(grid)?;
    g.check_grid(grid)?;
    let gr = Gradient::standard(grid);
    let gf = gradients(&gr, f);
    let gg = gradients(&gr, g);
    let div: Vec<T> = (0..f.len()).map(|id| gf[0][0][id] + gf[1][1][id] + gf[2][2][id]).collect();
    let div_l2 = l2_sq_arrays(grid, Region::Whole, &[&div])?.sqrt();
    let grad_l2 = norm_grad(f, grid, Region::Whole)?;
    if div_l2 > T::lit(SOLENOIDAL_TOL) * grad_l2 + T::lit(1e-12) {
        return Err(Error::Input(format!(
            "f is not divergence-free: ‖div f‖ = {div_l2:e} against ‖∇f‖ = {grad_l2:e}"
        )));
    }
    let d2 = ColumnOp::d2(&grid.z_nodes);
    let nz = grid.nz;
    let mut lhs = T::zero();
    for c in 0..3 {
        let lap = gr.laplacian(&d2, &f.c[c]);
        for id in 0..f.len() {
            lhs -= grid.cell_weight(id % nz) * lap[id] * g.c[c][id];
        }
    }
    let mut vol = T::zero();
    for id in 0..f.len() {
        let sf = strain(&gf, id);
        let sg = strain(&gg, id);
        let mut p = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                p += sf[i][j] * sg[i][j];
            }
        }
        vol += grid.cell_weight(id % nz) * p;
    }
    let da = grid.dx() * grid.dy();
    let mut bnd = T::zero();
    for col in 0..grid.nx * grid.ny {
        for (k, n3) in [(0, -T::one()), (nz - 1, T::one())] {
            let id = col * nz + k;
            let sf = strain(&gf, id);
            for i in 0..3 {
                bnd += da * sf[i][2] * n3 * g.c[i][id];
            }
        }
    }
    let two = T::lit(2.0);
    let rhs = two * vol - two * bnd;
    Ok(IbpReport {
        lhs: lhs.as_f64(),
        rhs: rhs.as_f64(),
        gap: (lhs - rhs).abs().as_f64(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceReport {
    /// `‖u‖_{L²(Γ)}` over both walls.
    pub lhs: f64,
    pub l2: f64,
    pub grad_l2: f64,
    /// `None` when `‖∇u‖` vanishes and the ratio is undefined.
    pub ratio: Option<f64>,
    pub note: Option<String>,
}

/// Gradients below this are treated as zero by [`trace_inequality_check`].
pub const TRACE_GRAD_FLOOR: f64 = 1e-12;

/// `‖u‖_{L²(Γ)} / (‖u‖^{1/2} ‖∇u‖^{1/2})` for fields with `u₃ = 0` on the walls.
pub fn trace_inequality_check<T: Real>(u: &VectorField<T>, grid: &ChannelGrid<T>) -> Result<TraceReport> {
    u.check_grid(grid)?;
    let nz = grid.nz;
    let tol = T::lit(1e-10) * T::one().max(u.max_norm());
    let wn = u.wall_normal_max();
    if wn > tol {
        return Err(Error::Input(format!("normal component on the walls is {wn:e}, not zero")));
    }
    let da = grid.dx() * grid.dy();
    let mut s = T::zero();
    for col in 0..grid.nx * grid.ny {
        for k in [0, nz - 1] {
            let v = u.get(col * nz + k);
            s += da * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        }
    }
    let lhs = s.sqrt().as_f64();
    let l2 = norm_l2(u, grid, Region::Whole)?.as_f64();
    let grad_l2 = norm_grad(u, grid, Region::Whole)?.as_f64();
    let (ratio, note) = if grad_l2 < TRACE_GRAD_FLOOR {
        (None, Some("gradient vanishes; field excluded from the family".to_string()))
    } else if l2 == 0.0 {
        (None, Some("field vanishes".to_string()))
    } else {
        (Some(lhs / (l2 * grad_l2).sqrt()), None)
    };
    Ok(TraceReport {
        lhs,
        l2,
        grad_l2,
        ratio,
        note,
    })
}
