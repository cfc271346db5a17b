use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::VectorField;
use crate::geometry::{ChannelGrid, FrictionTensor, Wall};
use crate::scalar::Real;
use crate::spectral::Spectral;

use super::channel::{euler_boundary_data_channel, CorrectorLayers, LayerPlanes, SeparableNorms};

/// Derivative `∂t^l ∂τ^k ∂z^n`; `∂τ^k` ranges over all `∂x^a ∂y^b` with `a + b = k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivativeSpec {
    pub l: usize,
    pub k: usize,
    pub n: usize,
}

impl DerivativeSpec {
    pub fn new(l: usize, k: usize, n: usize) -> Result<Self> {
        let s = Self { l, k, n };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let time_ok = (self.l == 1 && self.k == 0) || (self.l == 0 && self.k <= 2);
        if !time_ok || self.n > 2 {
            return Err(Error::Config(format!(
                "derivative (l,k,n) = ({},{},{}) outside the admissible range: \
                 l=1,k=0 or l=0,k<=2, and n<=2",
                self.l, self.k, self.n
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct ScalingRow<T> {
    pub epsilon: T,
    /// Each entry is the maximum over the sampled times.
    pub norms: SeparableNorms<T>,
}

#[derive(Clone, Debug)]
pub struct ScalingTable<T> {
    pub spec: DerivativeSpec,
    pub rows: Vec<ScalingRow<T>>,
}

fn combine<T: Real>(acc: &mut SeparableNorms<T>, n: &SeparableNorms<T>) {
    acc.tan_l2 += n.tan_l2 * n.tan_l2;
    acc.nor_l2 += n.nor_l2 * n.nor_l2;
    acc.tan_zeta += n.tan_zeta * n.tan_zeta;
    acc.nor_zeta += n.nor_zeta * n.nor_zeta;
    acc.tan_sup = acc.tan_sup.max(n.tan_sup);
    acc.nor_sup = acc.nor_sup.max(n.nor_sup);
}

fn finish<T: Real>(mut a: SeparableNorms<T>) -> SeparableNorms<T> {
    a.tan_l2 = a.tan_l2.sqrt();
    a.nor_l2 = a.nor_l2.sqrt();
    a.tan_zeta = a.tan_zeta.sqrt();
    a.nor_zeta = a.nor_zeta.sqrt();
    a
}

fn max_into<T: Real>(acc: &mut SeparableNorms<T>, n: &SeparableNorms<T>) {
    acc.tan_l2 = acc.tan_l2.max(n.tan_l2);
    acc.nor_l2 = acc.nor_l2.max(n.nor_l2);
    acc.tan_zeta = acc.tan_zeta.max(n.tan_zeta);
    acc.nor_zeta = acc.nor_zeta.max(n.nor_zeta);
    acc.tan_sup = acc.tan_sup.max(n.tan_sup);
    acc.nor_sup = acc.nor_sup.max(n.nor_sup);
}

fn planes_diff<T: Real>(p: &LayerPlanes<T>, m: &LayerPlanes<T>, s: T) -> LayerPlanes<T> {
    let tan = |a: &Vec<[T; 2]>, b: &Vec<[T; 2]>| -> Vec<[T; 2]> {
        a.iter().zip(b).map(|(x, y)| [(x[0] - y[0]) * s, (x[1] - y[1]) * s]).collect()
    };
    let div = |a: &Vec<T>, b: &Vec<T>| -> Vec<T> { a.iter().zip(b).map(|(x, y)| (*x - *y) * s).collect() };
    LayerPlanes {
        tan: [tan(&p.tan[0], &m.tan[0]), tan(&p.tan[1], &m.tan[1])],
        div: [div(&p.div[0], &m.div[0]), div(&p.div[1], &m.div[1])],
    }
}

/// Norms of `∂t^l ∂τ^k ∂z^n θ` in `L^∞(0,T; ·)` (max over `times`) for each
/// viscosity. `u0(t)` supplies the Euler field; time derivatives difference the
/// boundary data at `t ± dt`.
#[allow(clippy::too_many_arguments)]
pub fn corrector_norm_scalings<T, F>(
    u0: F,
    a_lower: &FrictionTensor<T>,
    a_upper: &FrictionTensor<T>,
    grid: &ChannelGrid<T>,
    eps_list: &[T],
    spec: DerivativeSpec,
    times: &[T],
    dt: T,
) -> Result<ScalingTable<T>>
where
    T: Real,
    F: Fn(T) -> Result<VectorField<T>>,
{
    spec.validate()?;
    if eps_list.is_empty() || times.is_empty() {
        return Err(Error::Config("need at least one viscosity and one time".into()));
    }
    if spec.l == 1 && !(dt > T::zero()) {
        return Err(Error::Config("time derivative needs dt > 0".into()));
    }
    let sp = Spectral::new(grid);
    let layers_at = |t: T, eps: T| -> Result<CorrectorLayers<T>> {
        let u = u0(t)?;
        let lo = euler_boundary_data_channel(&u, a_lower, Wall::Lower, grid, t)?;
        let up = euler_boundary_data_channel(&u, a_upper, Wall::Upper, grid, t)?;
        CorrectorLayers::new(lo, up, eps, grid, &sp)
    };
    let base = layers_at(times[0], eps_list[0])?;
    let profiles: Vec<CorrectorLayers<T>> = eps_list
        .iter()
        .map(|&e| base.with_epsilon(e, grid))
        .collect::<Result<_>>()?;
    let mut acc: Vec<SeparableNorms<T>> = vec![SeparableNorms::default(); eps_list.len()];
    let pairs: Vec<(usize, usize)> = (0..=spec.k).map(|a| (a, spec.k - a)).collect();
    for &t in times {
        let plane_sets: Vec<LayerPlanes<T>> = if spec.l == 0 {
            let l = layers_at(t, eps_list[0])?;
            pairs.iter().map(|&(a, b)| l.planes(&sp, a, b)).collect()
        } else {
            let p = layers_at(t + dt, eps_list[0])?;
            let m = layers_at(t - dt, eps_list[0])?;
            let s = T::one() / (T::lit(2.0) * dt);
            vec![planes_diff(&p.planes(&sp, 0, 0), &m.planes(&sp, 0, 0), s)]
        };
        for (e, prof) in profiles.iter().enumerate() {
            let mut sum = SeparableNorms::default();
            for pl in &plane_sets {
                combine(&mut sum, &prof.norms(pl, spec.n, grid)?);
            }
            max_into(&mut acc[e], &finish(sum));
        }
    }
    Ok(ScalingTable {
        spec,
        rows: eps_list
            .iter()
            .zip(acc)
            .map(|(&epsilon, norms)| ScalingRow { epsilon, norms })
            .collect(),
    })
}
