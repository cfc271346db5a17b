//! Truncated Taylor jets: forward-mode arithmetic that carries `N` normalized
//! Taylor coefficients `f^(k)(x0) / k!`, used for exact z-derivatives of the
//! cutoff and layer profiles.

use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<T, const N: usize> {
    pub c: [T; N],
}

impl<T: Real, const N: usize> Jet<T, N> {
    pub fn constant(v: T) -> Self {
        let mut c = [T::zero(); N];
        c[0] = v;
        Self { c }
    }

    /// The independent variable evaluated at `x0`.
    pub fn var(x0: T) -> Self {
        let mut c = [T::zero(); N];
        c[0] = x0;
        if N > 1 {
            c[1] = T::one();
        }
        Self { c }
    }

    pub fn zero() -> Self {
        Self::constant(T::zero())
    }

    pub fn value(&self) -> T {
        self.c[0]
    }

    /// k-th derivative, `k! * c[k]`.
    pub fn deriv(&self, k: usize) -> T {
        let mut f = T::one();
        for j in 2..=k {
            f *= T::from_usize_lossy(j);
        }
        self.c[k] * f
    }

    pub fn scale(mut self, s: T) -> Self {
        for v in self.c.iter_mut() {
            *v *= s;
        }
        self
    }

    pub fn add_const(mut self, s: T) -> Self {
        self.c[0] += s;
        self
    }

    pub fn recip(&self) -> Self {
        let mut r = [T::zero(); N];
        let inv = T::one() / self.c[0];
        r[0] = inv;
        for k in 1..N {
            let mut s = T::zero();
            for j in 1..=k {
                s += self.c[j] * r[k - j];
            }
            r[k] = -s * inv;
        }
        Self { c: r }
    }

    pub fn exp(&self) -> Self {
        let mut e = [T::zero(); N];
        e[0] = self.c[0].exp();
        for k in 1..N {
            let mut s = T::zero();
            for j in 1..=k {
                s += T::from_usize_lossy(j) * self.c[j] * e[k - j];
            }
            e[k] = s / T::from_usize_lossy(k);
        }
        Self { c: e }
    }

    pub fn div(&self, other: &Self) -> Self {
        *self * other.recip()
    }
}

impl<T: Real, const N: usize> Add for Jet<T, N> {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        for k in 0..N {
            self.c[k] += o.c[k];
        }
        self
    }
}

impl<T: Real, const N: usize> Sub for Jet<T, N> {
    type Output = Self;
    fn sub(mut self, o: Self) -> Self {
        for k in 0..N {
            self.c[k] -= o.c[k];
        }
        self
    }
}

impl<T: Real, const N: usize> Neg for Jet<T, N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

impl<T: Real, const N: usize> Mul for Jet<T, N> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut r = [T::zero(); N];
        for i in 0..N {
            for j in 0..N - i {
                r[i + j] += self.c[i] * o.c[j];
            }
        }
        Self { c: r }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_derivatives() {
        let x = Jet::<f64, 5>::var(0.3).scale(2.0);
        let e = x.exp();
        for k in 0..5 {
            let want = 2f64.powi(k as i32) * (0.6f64).exp();
            assert!((e.deriv(k) - want).abs() < 1e-12 * want);
        }
    }

    #[test]
    fn recip_derivatives() {
        let r = Jet::<f64, 4>::var(2.0).recip();
        assert!((r.deriv(1) + 0.25).abs() < 1e-15);
        assert!((r.deriv(2) - 0.25).abs() < 1e-15);
        assert!((r.deriv(3) + 6.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn product_rule() {
        let x = Jet::<f64, 3>::var(1.5);
        let p = x * x * x;
        assert!((p.deriv(1) - 3.0 * 2.25).abs() < 1e-14);
        assert!((p.deriv(2) - 9.0).abs() < 1e-14);
    }
}
