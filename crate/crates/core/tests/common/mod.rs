#![allow(dead_code)]

use csr_core::linalg::{CMatrix, Mat3};
use csr_core::{DensityMatrix3Q, PureState3Q};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn cnormal(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_pure(rng: &mut ChaCha8Rng) -> PureState3Q {
    PureState3Q::normalized([(); 8].map(|_| cnormal(rng))).unwrap()
}

/// G G† / Tr(G G†) with G of random rank 1..=8.
pub fn random_mixed(rng: &mut ChaCha8Rng) -> DensityMatrix3Q {
    let rank = rng.gen_range(1..=8);
    let g = CMatrix::from_vec(8, rank, (0..8 * rank).map(|_| cnormal(rng)).collect());
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix3Q::validate(m.scale_real(1.0 / tr)).unwrap()
}

pub fn random_state(rng: &mut ChaCha8Rng) -> DensityMatrix3Q {
    if rng.gen_bool(0.5) {
        DensityMatrix3Q::from_pure(&random_pure(rng))
    } else {
        random_mixed(rng)
    }
}

pub fn random_mat3(rng: &mut ChaCha8Rng) -> Mat3 {
    [(); 3].map(|_| [(); 3].map(|_| rng.gen_range(-1.0..1.0)))
}

/// Haar-ish orthogonal matrix via Gram-Schmidt of a Gaussian matrix.
pub fn random_orthogonal(rng: &mut ChaCha8Rng) -> Mat3 {
    let mut cols: Vec<[f64; 3]> = Vec::new();
    while cols.len() < 3 {
        let mut v: [f64; 3] = [(); 3].map(|_| rng.sample(StandardNormal));
        for c in &cols {
            let d: f64 = (0..3).map(|k| v[k] * c[k]).sum();
            for k in 0..3 {
                v[k] -= d * c[k];
            }
        }
        let n = (v.iter().map(|x| x * x).sum::<f64>()).sqrt();
        if n > 1e-8 {
            cols.push(v.map(|x| x / n));
        }
    }
    let mut m = [[0.0; 3]; 3];
    for (j, c) in cols.iter().enumerate() {
        for i in 0..3 {
            m[i][j] = c[i];
        }
    }
    m
}
