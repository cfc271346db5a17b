//! Finite-difference weights on nonuniform one-dimensional grids.

use crate::scalar::Real;

/// Fornberg's algorithm: weights `w[d][j]` such that
/// `f^(d)(x0) ≈ Σ_j w[d][j] f(xs[j])` for `d = 0..=m`.
pub fn fornberg<T: Real>(x0: T, xs: &[T], m: usize) -> Vec<Vec<T>> {
    let n = xs.len();
    let mut c = vec![vec![T::zero(); n]; m + 1];
    let mut c1 = T::one();
    let mut c4 = xs[0] - x0;
    c[0][0] = T::one();
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = T::one();
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    let kk = T::from_usize_lossy(k);
                    c[k][i] = c1 * (kk * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                let kk = T::from_usize_lossy(k);
                c[k][j] = (c4 * c[k][j] - kk * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// A linear operator acting on a single z-column: row `k` reads
/// `width` consecutive entries starting at `start[k]`.
#[derive(Clone, Debug)]
pub struct ColumnOp<T> {
    pub start: Vec<usize>,
    pub weights: Vec<Vec<T>>,
}

impl<T: Real> ColumnOp<T> {
    /// Derivative of order `d` with stencils of `width` nodes, centered in the
    /// interior and one-sided near the ends.
    pub fn derivative(z: &[T], d: usize, width: usize) -> Self {
        let n = z.len();
        assert!(width <= n && width > d);
        let half = width / 2;
        let mut start = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for k in 0..n {
            let s = k.saturating_sub(half).min(n - width);
            let w = fornberg(z[k], &z[s..s + width], d);
            start.push(s);
            weights.push(w[d].clone());
        }
        Self { start, weights }
    }

    /// Second-order first derivative: 3-point central interior, 3-point one-sided walls.
    pub fn d1(z: &[T]) -> Self {
        Self::derivative(z, 1, 3)
    }

    /// Second-order second derivative: 3-point interior, 4-point one-sided walls.
    pub fn d2(z: &[T]) -> Self {
        let n = z.len();
        let mut op = Self::derivative(z, 2, 3);
        for k in [0, n - 1] {
            let s = if k == 0 { 0 } else { n - 4 };
            op.start[k] = s;
            op.weights[k] = fornberg(z[k], &z[s..s + 4], 2)[2].clone();
        }
        op
    }

    /// Summation-by-parts first derivative used by the projection: wide central
    /// differences in the interior and first-order one-sided differences at the
    /// ends. Its adjoint with respect to the trapezoid weights is the negative of
    /// the same operator up to boundary terms, which makes `∫ u·∇q` vanish for
    /// discretely solenoidal `u` with `u₃ = 0` on the walls.
    pub fn sbp(z: &[T]) -> Self {
        let n = z.len();
        let mut start = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                let d = z[1] - z[0];
                start.push(0);
                weights.push(vec![-T::one() / d, T::one() / d]);
            } else if k == n - 1 {
                let d = z[n - 1] - z[n - 2];
                start.push(n - 2);
                weights.push(vec![-T::one() / d, T::one() / d]);
            } else {
                let d = z[k + 1] - z[k - 1];
                start.push(k - 1);
                weights.push(vec![-T::one() / d, T::zero(), T::one() / d]);
            }
        }
        Self { start, weights }
    }

    pub fn len(&self) -> usize {
        self.start.len()
    }

    pub fn is_empty(&self) -> bool {
        self.start.is_empty()
    }

    #[inline]
    pub fn apply_at(&self, col: &[T], k: usize) -> T {
        let s = self.start[k];
        let mut acc = T::zero();
        for (j, w) in self.weights[k].iter().enumerate() {
            acc += *w * col[s + j];
        }
        acc
    }

    pub fn apply(&self, col: &[T], out: &mut [T]) {
        for k in 0..self.len() {
            out[k] = self.apply_at(col, k);
        }
    }
}

/// Trapezoid quadrature weights on arbitrary ordered nodes.
pub fn trapezoid_weights<T: Real>(z: &[T]) -> Vec<T> {
    let n = z.len();
    let half = T::lit(0.5);
    let mut w = vec![T::zero(); n];
    for k in 0..n - 1 {
        let d = (z[k + 1] - z[k]) * half;
        w[k] += d;
        w[k + 1] += d;
    }
    w
}

/// Trapezoid rule in time over arbitrary sample times.
pub fn trapezoid<T: Real>(t: &[T], v: &[T]) -> T {
    let half = T::lit(0.5);
    t.windows(2)
        .zip(v.windows(2))
        .fold(T::zero(), |acc, (tw, vw)| acc + (tw[1] - tw[0]) * (vw[0] + vw[1]) * half)
}

/// Fourth-order centered periodic first derivative on a uniform grid.
pub fn periodic_d1_4th<T: Real>(f: &[T], dx: T) -> Vec<T> {
    let n = f.len();
    let c1 = T::lit(8.0) / (T::lit(12.0) * dx);
    let c2 = T::one() / (T::lit(12.0) * dx);
    (0..n)
        .map(|i| {
            let p1 = f[(i + 1) % n];
            let m1 = f[(i + n - 1) % n];
            let p2 = f[(i + 2) % n];
            let m2 = f[(i + n - 2) % n];
            c1 * (p1 - m1) - c2 * (p2 - m2)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fornberg_central_second_derivative() {
        let w = fornberg(0.0, &[-1.0, 0.0, 1.0], 2);
        assert_eq!(w[2], vec![1.0, -2.0, 1.0]);
        assert_eq!(w[1], vec![-0.5, 0.0, 0.5]);
    }

    #[test]
    fn one_sided_exact_for_cubics() {
        let z: Vec<f64> = (0..7).map(|k| (k as f64 * 0.1).powf(1.3)).collect();
        let op = ColumnOp::derivative(&z, 1, 5);
        let f: Vec<f64> = z.iter().map(|x| x * x * x - 2.0 * x).collect();
        for k in 0..z.len() {
            let want = 3.0 * z[k] * z[k] - 2.0;
            assert!((op.apply_at(&f, k) - want).abs() < 1e-10);
        }
    }

    #[test]
    fn d2_exact_for_quadratics() {
        let z: Vec<f64> = (0..9).map(|k| ((k as f64) / 8.0).powi(2)).collect();
        let op = ColumnOp::d2(&z);
        let f: Vec<f64> = z.iter().map(|x| 3.0 * x * x + x).collect();
        for k in 0..z.len() {
            assert!((op.apply_at(&f, k) - 6.0).abs() < 1e-9);
        }
    }

    #[test]
    fn trapezoid_sums_to_length() {
        let z = [0.0, 0.1, 0.5, 0.75, 1.0];
        let s: f64 = trapezoid_weights(&z).iter().sum();
        assert!((s - 1.0).abs() < 1e-15);
    }

    #[test]
    fn periodic_fourth_order() {
        let n = 64;
        let dx = std::f64::consts::TAU / n as f64;
        let f: Vec<f64> = (0..n).map(|i| (i as f64 * dx).sin()).collect();
        let d = periodic_d1_4th(&f, dx);
        for i in 0..n {
            assert!((d[i] - (i as f64 * dx).cos()).abs() < 1e-5);
        }
    }
}
