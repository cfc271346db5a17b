use crate::error::{Error, Result};
use crate::geometry::{cutoff_sigma_jet, smooth_step_jet, Wall};
use crate::jet::Jet;
use crate::scalar::Real;

/// Number of Taylor coefficients carried by layer profiles (derivatives 0..=4).
pub const JET: usize = 5;

pub type ProfileJet<T> = Jet<T, JET>;

/// `1 - exp(-d/√ε)` as a jet in `z`, where `d = z` (lower) or `d = h - z` (upper).
fn layer_factor<T: Real>(z: T, wall: Wall, h: T, sqrt_eps: T) -> ProfileJet<T> {
    let zj = ProfileJet::var(z);
    let d = match wall {
        Wall::Upper => (-zj).add_const(h),
        _ => zj,
    };
    let e = (-d.scale(T::one() / sqrt_eps)).exp();
    (-e).add_const(T::one())
}

/// Channel profile `φ(z) = σ(z) (1 - e^{-d/√ε})` with derivatives in `z`.
pub fn channel_profile<T: Real>(z: T, wall: Wall, h: T, eps: T) -> Result<ProfileJet<T>> {
    let s = cutoff_sigma_jet::<T, JET>(z, wall, h)?;
    if s.c.iter().all(|v| *v == T::zero()) {
        return Ok(ProfileJet::zero());
    }
    Ok(s * layer_factor(z, wall, h, eps.sqrt()))
}

/// Torus cutoff `σ(ξ₃) = S((2a - ξ₃)/a)`: 1 on `[0, a]`, 0 beyond `2a`.
pub fn torus_cutoff_jet<T: Real>(xi3: T, a: T) -> ProfileJet<T> {
    let t = (-ProfileJet::var(xi3)).add_const(T::lit(2.0) * a).scale(T::one() / a);
    smooth_step_jet(t)
}

/// Torus profile `φ(ξ₃) = σ(ξ₃)(1 - e^{-ξ₃/√ε})`.
pub fn torus_profile<T: Real>(xi3: T, a: T, eps: T) -> ProfileJet<T> {
    let s = torus_cutoff_jet(xi3, a);
    if s.c.iter().all(|v| *v == T::zero()) {
        return ProfileJet::zero();
    }
    s * layer_factor(xi3, Wall::Lower, T::zero(), eps.sqrt())
}

pub(crate) fn check_epsilon<T: Real>(eps: T, h: T) -> Result<()> {
    let bound = (h / T::lit(8.0)).powi(2);
    if !(eps > T::zero()) {
        return Err(Error::Config(format!("epsilon must be positive, got {eps}")));
    }
    if !(eps < bound) {
        return Err(Error::Config(format!(
            "epsilon = {eps} must be below (h/8)^2 = {bound}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_wall_values() {
        let eps = 1e-4;
        let p = channel_profile(0.0f64, Wall::Lower, 1.0, eps).unwrap();
        assert_eq!(p.value(), 0.0);
        assert!((p.deriv(1) - 100.0).abs() < 1e-9);
        assert!((p.deriv(2) + 1e4).abs() < 1e-6);
        let q = channel_profile(1.0f64, Wall::Upper, 1.0, eps).unwrap();
        assert!((q.deriv(1) + 100.0).abs() < 1e-9);
        assert!(channel_profile(0.5, Wall::Lower, 1.0, eps).unwrap().c.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn torus_profile_matches_channel_when_a_is_h_over_8() {
        let eps = 3e-4f64;
        for &z in &[0.0, 0.01, 0.13, 0.2, 0.24, 0.3] {
            let a = torus_profile(z, 0.125, eps);
            let b = channel_profile(z, Wall::Lower, 1.0, eps).unwrap();
            for k in 0..JET {
                assert!((a.c[k] - b.c[k]).abs() <= 1e-12 * (1.0 + b.c[k].abs()));
            }
        }
    }

    #[test]
    fn epsilon_bound() {
        assert!(check_epsilon(0.01, 1.0).is_ok());
        assert!(check_epsilon(1.0 / 64.0, 1.0).is_err());
        assert!(check_epsilon(0.0, 1.0).is_err());
    }
}
