//! Fourier transforms and derivatives in the two periodic directions.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::geometry::ChannelGrid;
use crate::scalar::Real;

/// FFT plans and wavenumbers for one channel grid.
pub struct Spectral<T: Real> {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    fx: Arc<dyn Fft<T>>,
    ix: Arc<dyn Fft<T>>,
    fy: Arc<dyn Fft<T>>,
    iy: Arc<dyn Fft<T>>,
    /// Wavenumbers `2π m / L` in FFT order.
    pub kx: Vec<T>,
    pub ky: Vec<T>,
    /// Same, with the Nyquist entry zeroed for odd-order derivatives.
    pub kx_odd: Vec<T>,
    pub ky_odd: Vec<T>,
}

fn wavenumbers<T: Real>(n: usize, l: T) -> Vec<T> {
    let base = T::lit(2.0) * T::PI() / l;
    (0..n)
        .map(|m| {
            let mm = if m <= n / 2 { m as f64 } else { m as f64 - n as f64 };
            base * T::lit(mm)
        })
        .collect()
}

impl<T: Real> Spectral<T> {
    pub fn new(g: &ChannelGrid<T>) -> Self {
        let mut p = FftPlanner::new();
        let kx = wavenumbers(g.nx, g.l1);
        let ky = wavenumbers(g.ny, g.l2);
        let mut kx_odd = kx.clone();
        let mut ky_odd = ky.clone();
        kx_odd[g.nx / 2] = T::zero();
        ky_odd[g.ny / 2] = T::zero();
        Self {
            nx: g.nx,
            ny: g.ny,
            nz: g.nz,
            fx: p.plan_fft_forward(g.nx),
            ix: p.plan_fft_inverse(g.nx),
            fy: p.plan_fft_forward(g.ny),
            iy: p.plan_fft_inverse(g.ny),
            kx,
            ky,
            kx_odd,
            ky_odd,
        }
    }

    fn transform(&self, data: &mut [Complex<T>], nz: usize, ffx: &Arc<dyn Fft<T>>, ffy: &Arc<dyn Fft<T>>) {
        let (nx, ny) = (self.nx, self.ny);
        let mut buf = vec![Complex::new(T::zero(), T::zero()); nx.max(ny)];
        for j in 0..ny {
            for k in 0..nz {
                for i in 0..nx {
                    buf[i] = data[(i * ny + j) * nz + k];
                }
                ffx.process(&mut buf[..nx]);
                for i in 0..nx {
                    data[(i * ny + j) * nz + k] = buf[i];
                }
            }
        }
        for i in 0..nx {
            for k in 0..nz {
                for j in 0..ny {
                    buf[j] = data[(i * ny + j) * nz + k];
                }
                ffy.process(&mut buf[..ny]);
                for j in 0..ny {
                    data[(i * ny + j) * nz + k] = buf[j];
                }
            }
        }
    }

    pub fn forward(&self, f: &[T]) -> Vec<Complex<T>> {
        self.forward_n(f, self.nz)
    }

    /// Inverse transform, normalized, keeping the real part.
    pub fn inverse(&self, d: Vec<Complex<T>>) -> Vec<T> {
        self.inverse_n(d, self.nz)
    }

    /// Forward transform of data with `nz` levels per column.
    pub fn forward_n(&self, f: &[T], nz: usize) -> Vec<Complex<T>> {
        let mut d: Vec<Complex<T>> = f.iter().map(|&v| Complex::new(v, T::zero())).collect();
        self.transform(&mut d, nz, &self.fx, &self.fy);
        d
    }

    pub fn inverse_n(&self, mut d: Vec<Complex<T>>, nz: usize) -> Vec<T> {
        self.transform(&mut d, nz, &self.ix, &self.iy);
        let s = T::one() / T::from_usize_lossy(self.nx * self.ny);
        d.into_iter().map(|c| c.re * s).collect()
    }

    /// In-place complex transforms, unnormalized forward, normalized inverse.
    pub fn forward_complex(&self, d: &mut [Complex<T>], nz: usize) {
        self.transform(d, nz, &self.fx, &self.fy);
    }

    pub fn inverse_complex(&self, d: &mut [Complex<T>], nz: usize) {
        self.transform(d, nz, &self.ix, &self.iy);
        let s = T::one() / T::from_usize_lossy(self.nx * self.ny);
        d.iter_mut().for_each(|c| *c *= s);
    }

    /// Multiplier of `∂x^a ∂y^b` at mode `(i, j)`.
    pub fn symbol(&self, i: usize, j: usize, a: usize, b: usize) -> Complex<T> {
        let kx = if a % 2 == 1 { self.kx_odd[i] } else { self.kx[i] };
        let ky = if b % 2 == 1 { self.ky_odd[j] } else { self.ky[j] };
        let mut s = Complex::new(T::one(), T::zero());
        for _ in 0..a {
            s *= Complex::new(T::zero(), kx);
        }
        for _ in 0..b {
            s *= Complex::new(T::zero(), ky);
        }
        s
    }

    /// `∂x^a ∂y^b f` for a real grid function; the number of levels per column
    /// is inferred from the length, so wall planes work too.
    pub fn derivative(&self, f: &[T], a: usize, b: usize) -> Vec<T> {
        if a == 0 && b == 0 {
            return f.to_vec();
        }
        let nz = f.len() / (self.nx * self.ny);
        let mut d = self.forward_n(f, nz);
        self.apply_symbol(&mut d, nz, a, b);
        self.inverse_n(d, nz)
    }

    pub fn apply_symbol(&self, d: &mut [Complex<T>], nz: usize, a: usize, b: usize) {
        let ny = self.ny;
        for i in 0..self.nx {
            for j in 0..ny {
                let s = self.symbol(i, j, a, b);
                for k in 0..nz {
                    let id = (i * ny + j) * nz + k;
                    d[id] *= s;
                }
            }
        }
    }

    /// Zeroes modes outside the two-thirds band.
    pub fn dealias(&self, d: &mut [Complex<T>]) {
        let (nx, ny, nz) = (self.nx, self.ny, self.nz);
        let cx = nx / 3;
        let cy = ny / 3;
        for i in 0..nx {
            let mi = if i <= nx / 2 { i } else { nx - i };
            for j in 0..ny {
                let mj = if j <= ny / 2 { j } else { ny - j };
                if mi > cx || mj > cy {
                    let b = (i * ny + j) * nz;
                    for v in &mut d[b..b + nz] {
                        *v = Complex::new(T::zero(), T::zero());
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_channel_grid;

    #[test]
    fn derivative_of_trig() {
        let g = make_channel_grid(2.0, 3.0, 1.0, 16, 12, 9, 0.0).unwrap();
        let sp = Spectral::new(&g);
        let pi = std::f64::consts::PI;
        let f: Vec<f64> = (0..g.len())
            .map(|id| {
                let k = id % g.nz;
                let j = (id / g.nz) % g.ny;
                let i = id / (g.nz * g.ny);
                (pi * g.x(i)).sin() * (2.0 * pi * g.y(j) / 3.0).cos() * (1.0 + g.z_nodes[k])
            })
            .collect();
        let dx = sp.derivative(&f, 1, 0);
        let dyy = sp.derivative(&f, 0, 2);
        for id in 0..g.len() {
            let k = id % g.nz;
            let j = (id / g.nz) % g.ny;
            let i = id / (g.nz * g.ny);
            let z = 1.0 + g.z_nodes[k];
            let ex = pi * (pi * g.x(i)).cos() * (2.0 * pi * g.y(j) / 3.0).cos() * z;
            assert!((dx[id] - ex).abs() < 1e-12);
            let ey = -(2.0 * pi / 3.0f64).powi(2) * f[id];
            assert!((dyy[id] - ey).abs() < 1e-12);
        }
        let back = sp.inverse(sp.forward(&f));
        for id in 0..g.len() {
            assert!((back[id] - f[id]).abs() < 1e-14);
        }
    }
}
