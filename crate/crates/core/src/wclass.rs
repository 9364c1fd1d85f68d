//! Generalized W-class states λ₀|000⟩ + λ₁|100⟩ + λ₂|101⟩ + λ₃|110⟩ and the
//! scatter of reconstruction fidelity against dealer–reconstructor
//! teleportation fidelity.

use std::io::{self, Write};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fidelity::{f_max, pair_correlation_for_setting, teleportation_fidelity, Setting, CLASSICAL_LIMIT};
use crate::linalg::{Mat3, C_ZERO};
use crate::qstate::{decompose_state, pure_to_density, PureState3Q};
use crate::sampling::substream;

/// Unnormalized parameters of the highlighted W-class example.
pub const EXAMPLE3_RAW: [f64; 4] = [0.7, 0.7, 0.09, 0.11];

pub const CSV_HEADER: &str = "lambda0,lambda1,lambda2,lambda3,f_tele,f_recon,region";

const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WClassParams {
    lambda: [f64; 4],
}

impl WClassParams {
    pub fn new(lambda: [f64; 4]) -> Result<Self> {
        if lambda.iter().any(|l| !l.is_finite() || *l < 0.0) {
            return Err(Error::InvalidParams(format!(
                "coefficients must be finite and non-negative, got {lambda:?}"
            )));
        }
        let norm_sq: f64 = lambda.iter().map(|l| l * l).sum();
        if (norm_sq - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParams(format!(
                "sum of squares is {norm_sq}, expected 1"
            )));
        }
        Ok(Self { lambda })
    }

    /// Scales non-negative coefficients to unit norm. Returns the parameters
    /// and the original Euclidean norm.
    pub fn renormalized(raw: [f64; 4]) -> Result<(Self, f64)> {
        let norm = raw.iter().map(|l| l * l).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidParams(format!("cannot normalize {raw:?}")));
        }
        let p = Self::new(raw.map(|l| l / norm))?;
        Ok((p, norm))
    }

    pub fn lambdas(&self) -> [f64; 4] {
        self.lambda
    }
}

/// Amplitudes at |000⟩, |100⟩, |101⟩, |110⟩ (indices 0, 4, 5, 6).
pub fn wclass_state(p: &WClassParams) -> PureState3Q {
    let [l0, l1, l2, l3] = p.lambda;
    let mut amps = [C_ZERO; 8];
    amps[0] = Complex64::new(l0, 0.0);
    amps[4] = Complex64::new(l1, 0.0);
    amps[5] = Complex64::new(l2, 0.0);
    amps[6] = Complex64::new(l3, 0.0);
    PureState3Q::new(amps).expect("W-class parameters are normalized")
}

/// Closed-form (R, T) for the (A, B, C) setting.
pub fn wclass_rt_closed_form(p: &WClassParams) -> (Mat3, Mat3) {
    let [l0, l1, l2, l3] = p.lambda;
    let r = [
        [2.0 * l0 * l2, 0.0, 2.0 * l0 * l1],
        [0.0, -2.0 * l0 * l2, 0.0],
        [-2.0 * l1 * l2, 0.0, 2.0 * (0.5 - l1 * l1 - l3 * l3)],
    ];
    let t = [
        [0.0, 0.0, 2.0 * l0 * l3],
        [0.0, 0.0, 0.0],
        [-2.0 * l2 * l3, 0.0, -2.0 * l1 * l3],
    ];
    (r, t)
}

/// One draw, uniform on the non-negative orthant of the unit 3-sphere.
pub fn sample_params<R: Rng + ?Sized>(rng: &mut R) -> WClassParams {
    loop {
        let g: [f64; 4] = [(); 4].map(|_| rng.sample::<f64, _>(StandardNormal).abs());
        let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-300 {
            let lambda = g.map(|x| x / norm);
            return WClassParams { lambda };
        }
    }
}

/// `n` parameter tuples; chunk `k` of the output comes from substream `k`.
pub fn sample_wclass(n: usize, seed: u64) -> Vec<WClassParams> {
    chunked(n, seed, sample_params)
}

fn chunked<T: Send>(
    n: usize,
    seed: u64,
    f: impl Fn(&mut rand_chacha::ChaCha8Rng) -> T + Sync,
) -> Vec<T> {
    let chunks = n.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .flat_map_iter(|k| {
            let mut rng = substream(seed, k as u64);
            let len = CHUNK.min(n - k * CHUNK);
            (0..len).map(|_| f(&mut rng)).collect::<Vec<_>>()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    /// Teleportation fidelity at most 2/3.
    Orange,
    /// Teleportation fidelity above 2/3.
    Blue,
}

impl Region {
    pub fn of(f_tele: f64) -> Self {
        if f_tele <= CLASSICAL_LIMIT {
            Region::Orange
        } else {
            Region::Blue
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Region::Orange => "orange",
            Region::Blue => "blue",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatterRecord {
    pub params: WClassParams,
    pub f_tele: f64,
    pub f_recon: f64,
    pub region: Region,
}

/// Evaluates one state numerically (via its density matrix) for (A, B, C).
pub fn evaluate(p: &WClassParams) -> ScatterRecord {
    let rho = pure_to_density(&wclass_state(p));
    let d = decompose_state(&rho).expect("pure states are Hermitian");
    let s = Setting::canonical();
    let f_tele = teleportation_fidelity(&pair_correlation_for_setting(&d, &s));
    ScatterRecord {
        params: *p,
        f_tele,
        f_recon: f_max(&d, &s),
        region: Region::of(f_tele),
    }
}

pub fn scatter_experiment(n: usize, seed: u64) -> Vec<ScatterRecord> {
    chunked(n, seed, |rng| evaluate(&sample_params(rng)))
}

/// Formats `x` with 12 significant digits in positional notation.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (11 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn write_csv<W: Write>(records: &[ScatterRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        let [l0, l1, l2, l3] = r.params.lambda;
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            format_sig12(l0),
            format_sig12(l1),
            format_sig12(l2),
            format_sig12(l3),
            format_sig12(r.f_tele),
            format_sig12(r.f_recon),
            r.region.as_str()
        )?;
    }
    Ok(())
}
