//! Binary snapshot files.
//!
//! Layout, all little-endian:
//!
//! | offset | size | content |
//! |---|---|---|
//! | 0 | 8 | magic `NSLCKPT1` |
//! | 8 | 8 | `u64` nx |
//! | 16 | 8 | `u64` ny |
//! | 24 | 8 | `u64` nz |
//! | 32 | 8×4 | `f64` L1, L2, h, clustering |
//! | 64 | 8×2 | `f64` ε, t |
//! | 80 | 8×8 | `f64` lower then upper friction tensor, row-major |
//! | 144 | 8·nz | `f64` z nodes |
//! | … | 8·N ×4 | `f64` u₁, u₂, u₃, p with N = nx·ny·nz in `(i, j, k)` order, `k` fastest |
//!
//! Sampled friction tensors are stored as zeros.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::{FieldKind, ScalarField, VectorField};
use crate::geometry::{make_channel_grid, ChannelGrid, FrictionTensor};
use crate::scalar::Real;

use super::state::FlowState;

const MAGIC: &[u8; 8] = b"NSLCKPT1";

/// Everything stored in a checkpoint.
#[derive(Clone, Debug)]
pub struct Checkpoint<T> {
    pub grid: ChannelGrid<T>,
    pub epsilon: T,
    pub friction: [[[T; 2]; 2]; 2],
    pub state: FlowState<T>,
}

pub fn write_checkpoint<T: Real>(
    path: &Path,
    grid: &ChannelGrid<T>,
    epsilon: T,
    friction: Option<(&FrictionTensor<T>, &FrictionTensor<T>)>,
    state: &FlowState<T>,
) -> Result<()> {
    state.u.check_grid(grid)?;
    let mut buf: Vec<u8> = Vec::with_capacity(160 + 32 * grid.len());
    buf.extend_from_slice(MAGIC);
    for n in [grid.nx, grid.ny, grid.nz] {
        buf.extend_from_slice(&(n as u64).to_le_bytes());
    }
    let mut put = |v: T| buf.extend_from_slice(&v.as_f64().to_le_bytes());
    for v in [grid.l1, grid.l2, grid.h, grid.clustering, epsilon, state.t] {
        put(v);
    }
    let z = T::zero();
    let zero = [[z, z], [z, z]];
    let (a, b) = friction
        .map(|(a, b)| (a.as_constant().unwrap_or(zero), b.as_constant().unwrap_or(zero)))
        .unwrap_or((zero, zero));
    for m in [a, b] {
        for v in m.iter().flatten() {
            put(*v);
        }
    }
    for v in &grid.z_nodes {
        put(*v);
    }
    for c in &state.u.c {
        for v in c {
            put(*v);
        }
    }
    for v in &state.p.data {
        put(*v);
    }
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(&buf).map_err(|e| Error::io(path, e))
}

pub fn read_checkpoint<T: Real>(path: &Path) -> Result<Checkpoint<T>> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| Error::io(path, e))?;
    let bad = |m: &str| Error::Parse(format!("{}: {m}", path.display()));
    if bytes.len() < 144 || &bytes[0..8] != MAGIC {
        return Err(bad("not a checkpoint file"));
    }
    let u64_at = |o: usize| u64::from_le_bytes(bytes[o..o + 8].try_into().unwrap()) as usize;
    let (nx, ny, nz) = (u64_at(8), u64_at(16), u64_at(24));
    let n = nx
        .checked_mul(ny)
        .and_then(|v| v.checked_mul(nz))
        .ok_or_else(|| bad("grid size overflows"))?;
    let expected = 144 + 8 * nz + 32 * n;
    if bytes.len() != expected {
        return Err(bad(&format!("expected {expected} bytes, found {}", bytes.len())));
    }
    let f_at = |o: usize| T::lit(f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap()));
    let grid = make_channel_grid(f_at(32), f_at(40), f_at(48), nx, ny, nz, f_at(56))?;
    let mut friction = [[[T::zero(); 2]; 2]; 2];
    for (q, v) in friction.iter_mut().flat_map(|m| m.iter_mut().flatten()).enumerate() {
        *v = f_at(80 + 8 * q);
    }
    let mut grid = grid;
    grid.z_nodes = (0..nz).map(|k| f_at(144 + 8 * k)).collect();
    grid.z_weights = crate::fd::trapezoid_weights(&grid.z_nodes);
    let base = 144 + 8 * nz;
    let arr = |q: usize| -> Vec<T> { (0..n).map(|i| f_at(base + 8 * (q * n + i))).collect() };
    let mut u = VectorField::zeros(&grid, FieldKind::Physical);
    for c in 0..3 {
        u.c[c] = arr(c);
    }
    let mut p = ScalarField::zeros(&grid);
    p.data = arr(3);
    Ok(Checkpoint {
        epsilon: f_at(64),
        friction,
        state: FlowState { u, p, t: f_at(72) },
        grid,
    })
}
