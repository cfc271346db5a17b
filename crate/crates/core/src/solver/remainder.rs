use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fd::ColumnOp;
use crate::field::{FieldKind, VectorField};
use crate::geometry::ChannelGrid;
use crate::scalar::Real;
use crate::diff::Gradient;

use super::state::{FlowState, Trajectory};

/// `w^ε = u^ε - u⁰ - θ^ε` snapshot by snapshot.
pub fn remainder<T: Real>(
    u_eps: &Trajectory<T>,
    u0: &Trajectory<T>,
    theta: &[VectorField<T>],
) -> Result<Trajectory<T>> {
    let n = u_eps.snapshots.len();
    if u0.snapshots.len() != n || theta.len() != n {
        return Err(Error::Input(format!(
            "snapshot counts differ: u_eps {n}, u0 {}, theta {}",
            u0.snapshots.len(),
            theta.len()
        )));
    }
    let mut snapshots = Vec::with_capacity(n);
    for (s, ((a, b), th)) in u_eps.snapshots.iter().zip(&u0.snapshots).zip(theta).enumerate() {
        let tol = T::lit(1e-9) * (T::one() + a.t.abs());
        if (a.t - b.t).abs() > tol {
            return Err(Error::Input(format!("snapshot {s}: times {} and {} differ", a.t, b.t)));
        }
        if !a.u.same_shape(&b.u) || !a.u.same_shape(th) {
            return Err(Error::Input(format!("snapshot {s}: field shapes differ")));
        }
        let mut w = a.u.sub(&b.u, FieldKind::Remainder);
        w.axpy(-T::one(), th);
        let mut p = a.p.clone();
        for (x, y) in p.data.iter_mut().zip(&b.p.data) {
            *x -= *y;
        }
        snapshots.push(FlowState { u: w, p, t: a.t });
    }
    Ok(Trajectory {
        snapshots,
        cadence: u_eps.cadence,
        epsilon: u_eps.epsilon,
        friction: u_eps.friction.clone(),
        forcing: u_eps.forcing.clone(),
        dt: u_eps.dt,
        diagnostics: Vec::new(),
    })
}

fn check<T: Real>(grid: &ChannelGrid<T>, fs: &[&VectorField<T>]) -> Result<()> {
    for f in fs {
        f.check_grid(grid)?;
    }
    Ok(())
}

/// `J = (u^ε·∇)u^ε - (u⁰·∇)u⁰`.
pub fn nonlinear_gap_j<T: Real>(
    u_eps: &VectorField<T>,
    u0: &VectorField<T>,
    grid: &ChannelGrid<T>,
) -> Result<VectorField<T>> {
    check(grid, &[u_eps, u0])?;
    let g = Gradient::standard(grid);
    let a = g.advect(u_eps, u_eps, FieldKind::Other);
    let b = g.advect(u0, u0, FieldKind::Other);
    Ok(a.sub(&b, FieldKind::Other))
}

/// The pairing `∫ J·w` and its five-term split with `w = u^ε - u⁰ - θ`:
/// `j[0] = ∫(u^ε·∇)w·w`, `j[1] = ∫(w·∇)(u^ε-w)·w`, `j[2] = ∫(θ·∇)u⁰·w`,
/// `j[3] = ∫(u⁰·∇)θ·w`, `j[4] = ∫(θ·∇)θ·w`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JSplit {
    pub total: f64,
    pub j: [f64; 5],
}

fn pair<T: Real>(grid: &ChannelGrid<T>, a: &VectorField<T>, b: &VectorField<T>) -> T {
    let nz = grid.nz;
    let mut s = T::zero();
    for col in 0..grid.nx * grid.ny {
        for k in 0..nz {
            let id = col * nz + k;
            s += grid.cell_weight(k) * (a.c[0][id] * b.c[0][id] + a.c[1][id] * b.c[1][id] + a.c[2][id] * b.c[2][id]);
        }
    }
    s
}

/// Evaluates [`JSplit`]. The first term is computed as `∫ u^ε·∇(|w|²/2)`
/// with the summation-by-parts normal difference, so it vanishes to
/// round-off whenever `u^ε` is discretely solenoidal with `u₃ = 0` on the walls.
pub fn nonlinear_gap_split<T: Real>(
    u_eps: &VectorField<T>,
    u0: &VectorField<T>,
    theta: &VectorField<T>,
    grid: &ChannelGrid<T>,
) -> Result<JSplit> {
    check(grid, &[u_eps, u0, theta])?;
    let g = Gradient::standard(grid);
    let mut w = u_eps.sub(u0, FieldKind::Remainder);
    w.axpy(-T::one(), theta);
    let total = pair(grid, &nonlinear_gap_j(u_eps, u0, grid)?, &w);
    let q: Vec<T> = (0..w.len())
        .map(|id| {
            let v = w.get(id);
            T::lit(0.5) * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2])
        })
        .collect();
    let gs = Gradient::new(grid, ColumnOp::sbp(&grid.z_nodes));
    let gq = gs.of(&q);
    let nz = grid.nz;
    let mut j1 = T::zero();
    for col in 0..grid.nx * grid.ny {
        for k in 0..nz {
            let id = col * nz + k;
            j1 += grid.cell_weight(k)
                * (u_eps.c[0][id] * gq[0][id] + u_eps.c[1][id] * gq[1][id] + u_eps.c[2][id] * gq[2][id]);
        }
    }
    let ue_minus_w = u_eps.sub(&w, FieldKind::Other);
    let j2 = pair(grid, &g.advect(&w, &ue_minus_w, FieldKind::Other), &w);
    let j3 = pair(grid, &g.advect(theta, u0, FieldKind::Other), &w);
    let j4 = pair(grid, &g.advect(u0, theta, FieldKind::Other), &w);
    let j5 = pair(grid, &g.advect(theta, theta, FieldKind::Other), &w);
    Ok(JSplit {
        total: total.as_f64(),
        j: [j1.as_f64(), j2.as_f64(), j3.as_f64(), j4.as_f64(), j5.as_f64()],
    })
}
