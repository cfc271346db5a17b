//! Small direct solvers: scalar and 2×2-block tridiagonal systems, banded LU.

use num_complex::Complex;
use num_traits::NumAssign;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Field element usable by the tridiagonal solvers (real or complex).
pub trait Elem: Copy + NumAssign + std::fmt::Debug {
    fn mag(&self) -> f64;
}

impl Elem for f32 {
    fn mag(&self) -> f64 {
        self.abs() as f64
    }
}
impl Elem for f64 {
    fn mag(&self) -> f64 {
        self.abs()
    }
}
impl<T: Real> Elem for Complex<T> {
    fn mag(&self) -> f64 {
        self.norm().as_f64()
    }
}

pub type Block<S> = [[S; 2]; 2];
pub type Pair<S> = [S; 2];

pub fn bmul<S: Elem>(a: &Block<S>, b: &Block<S>) -> Block<S> {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

pub fn bvec<S: Elem>(a: &Block<S>, v: &Pair<S>) -> Pair<S> {
    [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]]
}

pub fn bsub<S: Elem>(a: &Block<S>, b: &Block<S>) -> Block<S> {
    [
        [a[0][0] - b[0][0], a[0][1] - b[0][1]],
        [a[1][0] - b[1][0], a[1][1] - b[1][1]],
    ]
}

pub fn binv<S: Elem>(a: &Block<S>, scale: f64) -> Result<Block<S>> {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if !(det.mag() > 1e-13 * scale.max(1e-300)) {
        return Err(Error::Singular(format!(
            "2x2 block determinant {:.3e} relative to scale {:.3e}",
            det.mag(),
            scale
        )));
    }
    let z = S::zero();
    Ok([
        [a[1][1] / det, z - a[0][1] / det],
        [z - a[1][0] / det, a[0][0] / det],
    ])
}

fn bmag<S: Elem>(a: &Block<S>) -> f64 {
    a.iter().flatten().map(|x| x.mag()).fold(0.0, f64::max)
}

/// Solves the block-tridiagonal system `l_k x_{k-1} + d_k x_k + u_k x_{k+1} = r_k`
/// with 2×2 blocks by block Thomas elimination. `l[0]` and `u[n-1]` are ignored.
pub fn solve_block_tridiag<S: Elem>(
    l: &[Block<S>],
    d: &[Block<S>],
    u: &[Block<S>],
    r: &[Pair<S>],
) -> Result<Vec<Pair<S>>> {
    let n = d.len();
    let mut cp: Vec<Block<S>> = Vec::with_capacity(n);
    let mut rp: Vec<Pair<S>> = Vec::with_capacity(n);
    for k in 0..n {
        let (m, rr) = if k == 0 {
            (d[0], r[0])
        } else {
            let m = bsub(&d[k], &bmul(&l[k], &cp[k - 1]));
            let lr = bvec(&l[k], &rp[k - 1]);
            (m, [r[k][0] - lr[0], r[k][1] - lr[1]])
        };
        let inv = binv(&m, bmag(&d[k]))?;
        cp.push(bmul(&inv, &u[k]));
        rp.push(bvec(&inv, &rr));
    }
    let mut x = vec![[S::zero(); 2]; n];
    x[n - 1] = rp[n - 1];
    for k in (0..n - 1).rev() {
        let c = bvec(&cp[k], &x[k + 1]);
        x[k] = [rp[k][0] - c[0], rp[k][1] - c[1]];
    }
    Ok(x)
}

/// Scalar tridiagonal solve (Thomas). `a` sub, `b` diagonal, `c` super.
pub fn solve_tridiag<S: Elem>(a: &[S], b: &[S], c: &[S], r: &[S]) -> Result<Vec<S>> {
    let n = b.len();
    let mut cp = vec![S::zero(); n];
    let mut rp = vec![S::zero(); n];
    for k in 0..n {
        let m = if k == 0 { b[0] } else { b[k] - a[k] * cp[k - 1] };
        if !(m.mag() > 1e-300) {
            return Err(Error::Singular(format!("zero pivot at row {k}")));
        }
        cp[k] = if k + 1 < n { c[k] / m } else { S::zero() };
        rp[k] = if k == 0 { r[0] / m } else { (r[k] - a[k] * rp[k - 1]) / m };
    }
    let mut x = vec![S::zero(); n];
    x[n - 1] = rp[n - 1];
    for k in (0..n - 1).rev() {
        x[k] = rp[k] - cp[k] * x[k + 1];
    }
    Ok(x)
}

/// Real banded matrix with `kl` sub- and `ku` super-diagonals, factored by
/// Gaussian elimination with partial pivoting. Rows store the absolute column
/// window `[i - kl, i + ku + kl]` so that pivoting fill-in fits.
#[derive(Clone, Debug)]
pub struct BandedLu<T> {
    n: usize,
    kl: usize,
    ku: usize,
    w: usize,
    a: Vec<T>,
    piv: Vec<usize>,
    factored: bool,
}

impl<T: Real> BandedLu<T> {
    pub fn new(n: usize, kl: usize, ku: usize) -> Self {
        let w = 2 * kl + ku + 1;
        Self {
            n,
            kl,
            ku,
            w,
            a: vec![T::zero(); n * w],
            piv: vec![0; n],
            factored: false,
        }
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        let off = j as isize - i as isize + self.kl as isize;
        if off < 0 || off as usize >= self.w {
            None
        } else {
            Some(i * self.w + off as usize)
        }
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.slot(i, j).map_or(T::zero(), |s| self.a[s])
    }

    /// Adds `v` to entry `(i, j)`; the entry must lie inside the declared band.
    pub fn add(&mut self, i: usize, j: usize, v: T) {
        let ji = j as isize - i as isize;
        assert!(
            ji >= -(self.kl as isize) && ji <= self.ku as isize,
            "entry ({i},{j}) outside band"
        );
        let s = self.slot(i, j).expect("inside band");
        self.a[s] += v;
    }

    pub fn factor(&mut self) -> Result<()> {
        let n = self.n;
        let scale = self.a.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        for k in 0..n {
            let last = (k + self.kl).min(n - 1);
            let mut p = k;
            let mut best = self.get(k, k).abs();
            for i in k + 1..=last {
                let v = self.get(i, k).abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if !(best > scale * T::lit(1e-14)) {
                return Err(Error::Singular(format!("banded LU pivot {k} vanishes")));
            }
            self.piv[k] = p;
            let jmax = (k + self.ku + self.kl).min(n - 1);
            if p != k {
                for j in k..=jmax {
                    let a = self.get(k, j);
                    let b = self.get(p, j);
                    if let Some(s) = self.slot(k, j) {
                        self.a[s] = b;
                    }
                    if let Some(s) = self.slot(p, j) {
                        self.a[s] = a;
                    }
                }
            }
            let pivot = self.get(k, k);
            for i in k + 1..=last {
                let f = self.get(i, k) / pivot;
                if f == T::zero() {
                    continue;
                }
                let s = self.slot(i, k).unwrap();
                self.a[s] = f;
                for j in k + 1..=jmax {
                    let akj = self.get(k, j);
                    if akj != T::zero() {
                        let s = self.slot(i, j).unwrap();
                        self.a[s] -= f * akj;
                    }
                }
            }
        }
        self.factored = true;
        Ok(())
    }

    /// Solves in place for a right-hand side over any element type that can be
    /// scaled by the real factor entries.
    pub fn solve_in_place<S>(&self, b: &mut [S])
    where
        S: Copy + std::ops::Sub<Output = S> + std::ops::Mul<T, Output = S> + std::ops::Div<T, Output = S>,
    {
        assert!(self.factored, "solve before factor");
        let n = self.n;
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                b.swap(k, p);
            }
            let last = (k + self.kl).min(n - 1);
            for i in k + 1..=last {
                let f = self.get(i, k);
                if f != T::zero() {
                    b[i] = b[i] - b[k] * f;
                }
            }
        }
        for k in (0..n).rev() {
            let jmax = (k + self.ku + self.kl).min(n - 1);
            let mut s = b[k];
            for j in k + 1..=jmax {
                let a = self.get(k, j);
                if a != T::zero() {
                    s = s - b[j] * a;
                }
            }
            b[k] = s / self.get(k, k);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiag_matches_dense() {
        let a = [0.0, 1.0, 1.0, 1.0];
        let b = [4.0, 4.0, 4.0, 4.0];
        let c = [1.0, 1.0, 1.0, 0.0];
        let x = [1.0, -2.0, 3.0, 0.5];
        let r: Vec<f64> = (0..4)
            .map(|i| {
                b[i] * x[i]
                    + if i > 0 { a[i] * x[i - 1] } else { 0.0 }
                    + if i < 3 { c[i] * x[i + 1] } else { 0.0 }
            })
            .collect();
        let got = solve_tridiag(&a, &b, &c, &r).unwrap();
        for i in 0..4 {
            assert!((got[i] - x[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn block_tridiag_complex() {
        let i1 = Complex::new(0.0, 1.0);
        let one = Complex::new(1.0, 0.0);
        let z = Complex::new(0.0, 0.0);
        let n = 5;
        let d = vec![[[one * 4.0, i1], [z, one * 3.0]]; n];
        let l = vec![[[one, z], [z, one]]; n];
        let u = vec![[[z - one, z], [i1, one]]; n];
        let x: Vec<Pair<Complex<f64>>> = (0..n)
            .map(|k| [Complex::new(k as f64, 1.0), Complex::new(-1.0, k as f64)])
            .collect();
        let mut r = vec![[z, z]; n];
        for k in 0..n {
            let mut acc = bvec(&d[k], &x[k]);
            if k > 0 {
                let t = bvec(&l[k], &x[k - 1]);
                acc = [acc[0] + t[0], acc[1] + t[1]];
            }
            if k + 1 < n {
                let t = bvec(&u[k], &x[k + 1]);
                acc = [acc[0] + t[0], acc[1] + t[1]];
            }
            r[k] = acc;
        }
        let got = solve_block_tridiag(&l, &d, &u, &r).unwrap();
        for k in 0..n {
            for c in 0..2 {
                assert!((got[k][c] - x[k][c]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn banded_lu_with_pivoting() {
        let n = 7;
        let mut m = BandedLu::<f64>::new(n, 2, 2);
        let mut dense = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i.saturating_sub(2)..=(i + 2).min(n - 1) {
                let v = if i == j { 0.1 } else { 1.0 + (i * 3 + j) as f64 * 0.1 };
                m.add(i, j, v);
                dense[i][j] = v;
            }
        }
        m.factor().unwrap();
        let x: Vec<f64> = (0..n).map(|i| (i as f64).sin() + 2.0).collect();
        let mut b: Vec<f64> = (0..n).map(|i| (0..n).map(|j| dense[i][j] * x[j]).sum()).collect();
        m.solve_in_place(&mut b);
        for i in 0..n {
            assert!((b[i] - x[i]).abs() < 1e-10, "{i}: {} vs {}", b[i], x[i]);
        }
    }
}
