#![allow(dead_code)]

use rand_chacha::ChaCha8Rng;
use wtgp_core::channel::{GpModel, WiretapModel};
use wtgp_core::lab::{BlockCode, CodeShape, CodeSide};
use wtgp_core::prob::Pmf;
use wtgp_core::rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rng::stream(seed, 0xfeed, 0)
}

pub fn simplex(r: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let mut v = vec![0.0; k];
    rng::dirichlet_flat(r, &mut v);
    v
}

/// Random simplex point with roughly a third of the cells zeroed.
pub fn sparse_simplex(r: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let mut v = simplex(r, k);
    for c in v.iter_mut() {
        if rng::unit(r) < 0.33 {
            *c = 0.0;
        }
    }
    let s: f64 = v.iter().sum();
    if s == 0.0 {
        v[rng::index(r, k)] = 1.0;
        return v;
    }
    v.iter().map(|x| x / s).collect()
}

pub fn rows(r: &mut ChaCha8Rng, n_rows: usize, k: usize, sparse: bool) -> Vec<f64> {
    (0..n_rows)
        .flat_map(|_| if sparse { sparse_simplex(r, k) } else { simplex(r, k) })
        .collect()
}

pub fn wiretap(r: &mut ChaCha8Rng, x: usize, y1: usize, y2: usize, z: usize) -> WiretapModel {
    WiretapModel::new(x, y1, y2, z, rows(r, x, y1 * y2 * z, true)).unwrap()
}

/// A two-receiver semi-deterministic model: `y1` is a random function of
/// `x` and `(y2, z)` is random given `x`.
pub fn sd_wiretap(r: &mut ChaCha8Rng, x: usize, y1: usize, y2: usize, z: usize) -> WiretapModel {
    let f: Vec<usize> = (0..x).map(|_| rng::index(r, y1)).collect();
    let mut law = vec![0.0; x * y1 * y2 * z];
    for xi in 0..x {
        let row = sparse_simplex(r, y2 * z);
        for (k, &p) in row.iter().enumerate() {
            law[(xi * y1 + f[xi]) * y2 * z + k] = p;
        }
    }
    WiretapModel::new(x, y1, y2, z, law).unwrap()
}

pub fn gp_p2p(r: &mut ChaCha8Rng, x: usize, y: usize, z: usize) -> GpModel {
    let q = Pmf::new(simplex(r, z)).unwrap();
    GpModel::new(q, x, y, 1, rows(r, x * z, y, true)).unwrap()
}

pub fn random_code(r: &mut ChaCha8Rng, side: CodeSide, shape: CodeShape) -> BlockCode {
    let mut n_rows = shape.m1 * shape.m2;
    if side == CodeSide::Gp {
        n_rows *= shape.z.pow(shape.n as u32);
    }
    let nx = shape.x.pow(shape.n as u32);
    let enc = rows(r, n_rows, nx, true);
    let d1 = (0..shape.y1.pow(shape.n as u32)).map(|_| rng::index(r, shape.m1)).collect();
    let d2 = (0..shape.y2.pow(shape.n as u32)).map(|_| rng::index(r, shape.m2)).collect();
    BlockCode::new(side, shape, enc, d1, d2).unwrap()
}

/// Binary wiretap code with one or two messages per user.
pub fn binary_code(r: &mut ChaCha8Rng, n: usize) -> BlockCode {
    let shape = CodeShape {
        n,
        m1: 1 + rng::index(r, 2),
        m2: 1 + rng::index(r, 2),
        x: 2,
        y1: 2,
        y2: 2,
        z: 2,
    };
    random_code(r, CodeSide::Wiretap, shape)
}
