use crate::error::{Error, Result};
use crate::scalar::Real;

/// Solid torus with major radius `R`, minor radius `r`, and collar parameter
/// `a`: the interior coordinate `ξ₃` (distance to the surface) ranges over `[0, 3a]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorusChart<T> {
    pub major: T,
    pub minor: T,
    pub a: T,
}

/// Diagonal metric of the principal-curvature chart at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorusMetric<T> {
    pub q11: T,
    pub q22: T,
    pub q33: T,
    pub sqrt_q: T,
}

impl<T: Real> TorusChart<T> {
    pub fn new(major: T, minor: T, a: T) -> Result<Self> {
        if !(minor > T::zero() && minor < major) {
            return Err(Error::Config(format!(
                "torus radii need 0 < r < R, got R={major}, r={minor}"
            )));
        }
        if !(a > T::zero() && T::lit(3.0) * a < minor) {
            return Err(Error::Config(format!(
                "collar parameter needs 0 < 3a < r, got a={a}, r={minor}"
            )));
        }
        Ok(Self { major, minor, a })
    }

    /// Chart with the default collar `a = r/4`.
    pub fn with_default_collar(major: T, minor: T) -> Result<Self> {
        Self::new(major, minor, minor / T::lit(4.0))
    }

    /// Distance from the symmetry axis of the surface point, `ρ = R + r cos η₁`.
    pub fn rho(&self, eta1: T) -> T {
        self.major + self.minor * eta1.cos()
    }

    /// Principal curvatures `(κ₁, κ₂)` with respect to the outer normal.
    pub fn curvatures(&self, eta1: T) -> (T, T) {
        (T::one() / self.minor, eta1.cos() / self.rho(eta1))
    }

    pub fn check_xi3(&self, xi3: T) -> Result<()> {
        if !(xi3 >= T::zero() && xi3 <= T::lit(3.0) * self.a) {
            return Err(Error::Domain(format!(
                "xi3 = {xi3} outside [0, 3a] = [0, {}]",
                T::lit(3.0) * self.a
            )));
        }
        Ok(())
    }

    /// Outer unit normal at surface angles `(η₁, η₂)`.
    pub fn outer_normal(&self, eta1: T, eta2: T) -> [T; 3] {
        [eta1.cos() * eta2.cos(), eta1.cos() * eta2.sin(), eta1.sin()]
    }

    /// Unit principal directions: poloidal `ê₁`, toroidal `ê₂`, and inward normal `e₃ = -n`.
    pub fn frame(&self, eta1: T, eta2: T) -> [[T; 3]; 3] {
        let (s1, c1) = eta1.sin_cos();
        let (s2, c2) = eta2.sin_cos();
        let n = self.outer_normal(eta1, eta2);
        [
            [-s1 * c2, -s1 * s2, c1],
            [-s2, c2, T::zero()],
            [-n[0], -n[1], -n[2]],
        ]
    }
}

pub fn torus_point<T: Real>(chart: &TorusChart<T>, eta1: T, eta2: T, xi3: T) -> Result<[T; 3]> {
    chart.check_xi3(xi3)?;
    let rho = chart.rho(eta1);
    let n = chart.outer_normal(eta1, eta2);
    let surf = [rho * eta2.cos(), rho * eta2.sin(), chart.minor * eta1.sin()];
    Ok([surf[0] - xi3 * n[0], surf[1] - xi3 * n[1], surf[2] - xi3 * n[2]])
}

pub fn torus_metric<T: Real>(chart: &TorusChart<T>, eta1: T, _eta2: T, xi3: T) -> Result<TorusMetric<T>> {
    chart.check_xi3(xi3)?;
    let (k1, k2) = chart.curvatures(eta1);
    let f1 = T::one() - k1 * xi3;
    let f2 = T::one() - k2 * xi3;
    if !(f1 > T::zero() && f2 > T::zero()) {
        return Err(Error::Geometry(format!(
            "metric degenerates at eta1={eta1}, xi3={xi3}: factors {f1}, {f2}"
        )));
    }
    let rho = chart.rho(eta1);
    let r = chart.minor;
    Ok(TorusMetric {
        q11: f1 * f1 * r * r,
        q22: f2 * f2 * rho * rho,
        q33: T::one(),
        sqrt_q: f1 * f2 * r * rho,
    })
}

/// Shape operator `v ↦ ∇_v n` in the principal frame: `diag(κ₁, κ₂)`.
pub fn torus_shape_operator<T: Real>(chart: &TorusChart<T>, eta1: T, _eta2: T) -> [[T; 2]; 2] {
    let (k1, k2) = chart.curvatures(eta1);
    [[k1, T::zero()], [T::zero(), k2]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn chart() -> TorusChart<f64> {
        TorusChart::new(2.0, 1.0, 0.3).unwrap()
    }

    fn close(a: [f64; 3], b: [f64; 3]) -> bool {
        (0..3).all(|i| (a[i] - b[i]).abs() < 1e-14)
    }

    #[test]
    fn point_examples() {
        let c = TorusChart::new(2.0, 1.0, 0.2).unwrap();
        assert!(close(torus_point(&c, 0.0, 0.0, 0.0).unwrap(), [3.0, 0.0, 0.0]));
        assert!(close(torus_point(&c, 0.0, 0.0, 0.5).unwrap(), [2.5, 0.0, 0.0]));
        assert!(close(torus_point(&c, FRAC_PI_2, 0.0, 0.0).unwrap(), [2.0, 0.0, 1.0]));
        assert!(matches!(torus_point(&c, 0.0, 0.0, 0.7), Err(Error::Domain(_))));
    }

    #[test]
    fn metric_examples() {
        let c = chart();
        let m0 = torus_metric(&c, 0.4, 1.0, 0.0).unwrap();
        assert!((m0.q11 - 1.0).abs() < 1e-15);
        assert!((m0.q22 - c.rho(0.4).powi(2)).abs() < 1e-14);
        let m = torus_metric(&c, 0.0, 0.0, 0.1).unwrap();
        assert!((m.q11 - 0.81).abs() < 1e-14);
        let f2: f64 = 1.0 - 0.1 / 3.0;
        assert!((m.q22 - f2 * f2 * 9.0).abs() < 1e-13);
        assert_eq!(m.q33, 1.0);
        assert!((m.sqrt_q - 0.9 * f2 * 3.0).abs() < 1e-14);
    }

    #[test]
    fn shape_operator_examples() {
        let c = chart();
        let s = torus_shape_operator(&c, 0.0, 0.0);
        assert!((s[0][0] - 1.0).abs() < 1e-15 && (s[1][1] - 1.0 / 3.0).abs() < 1e-15);
        let s = torus_shape_operator(&c, PI, 0.0);
        assert!((s[1][1] + 1.0).abs() < 1e-15);
        let s = torus_shape_operator(&c, FRAC_PI_2, 0.0);
        assert!(s[1][1].abs() < 1e-15);
        assert_eq!(s[0][1], 0.0);
    }

    #[test]
    fn rejects_bad_chart() {
        assert!(TorusChart::new(1.0, 2.0, 0.1).is_err());
        assert!(TorusChart::new(2.0, 1.0, 0.34).is_err());
        assert!(TorusChart::new(2.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn frame_is_orthonormal() {
        let c = chart();
        let f = c.frame(0.7, -1.3);
        for i in 0..3 {
            for j in 0..3 {
                let d: f64 = (0..3).map(|k| f[i][k] * f[j][k]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((d - want).abs() < 1e-14);
            }
        }
    }
}
