//! Reconstruction with classical channels only.
//!
//! The dealer measures the secret in the {|0⟩, |1⟩} basis, splits the outcome
//! bit `s` into shares `s1 ⊕ s2 = s`, and the shareholders rebuild |s⟩ from
//! the XOR of their shares. A single dishonest shareholder only has their own
//! share and must guess.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Vec3;
use crate::sampling::{mc_mean, uniform_unit_vector, McEstimate};

/// Expected fidelity for a secret at polar angle `theta`, averaged over the
/// measurement outcome: cos⁴(θ/2) + sin⁴(θ/2) = 1 − ½ sin²θ.
pub fn classical_fidelity(theta: f64) -> f64 {
    let c2 = (theta / 2.0).cos().powi(2);
    let s2 = 1.0 - c2;
    c2 * c2 + s2 * s2
}

/// Dealer's split of the measured bit. `p` is the probability that `s2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalShare {
    pub s: bool,
    pub s1: bool,
    pub s2: bool,
}

impl ClassicalShare {
    pub fn deal<R: Rng + ?Sized>(s: bool, p: f64, rng: &mut R) -> Self {
        let s2 = rng.gen_bool(p);
        Self { s, s1: s ^ s2, s2 }
    }

    pub fn combine(&self) -> bool {
        self.s1 ^ self.s2
    }
}

/// What a lone shareholder holding `s1` announces as the secret bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GuessStrategy {
    /// Take `s1` as the bit (i.e. assume `s2 = 0`).
    Same,
    /// Take `¬s1` as the bit (i.e. assume `s2 = 1`).
    Negate,
}

impl std::str::FromStr for GuessStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "same" => Ok(Self::Same),
            "negate" => Ok(Self::Negate),
            other => Err(Error::InvalidParams(format!(
                "unknown guess strategy {other:?} (expected same or negate)"
            ))),
        }
    }
}

/// Closed-form expected guess fidelity: (2 − p)/3 for `Same`, (1 + p)/3 for `Negate`.
pub fn guess_formula(p: f64, strategy: GuessStrategy) -> f64 {
    match strategy {
        GuessStrategy::Same => (2.0 - p) / 3.0,
        GuessStrategy::Negate => (1.0 + p) / 3.0,
    }
}

/// Measures the secret with Bloch vector `q` in the σz basis. Returns `s`.
fn measure<R: Rng + ?Sized>(q: &Vec3, rng: &mut R) -> bool {
    let p0 = ((1.0 + q[2]) / 2.0).clamp(0.0, 1.0);
    !rng.gen_bool(p0)
}

/// |⟨q|s⟩|² for a reconstructed basis state.
fn basis_overlap(q: &Vec3, s: bool) -> f64 {
    if s {
        (1.0 - q[2]) / 2.0
    } else {
        (1.0 + q[2]) / 2.0
    }
}

/// One honest run for a given secret.
pub fn classical_trial<R: Rng + ?Sized>(q: &Vec3, rng: &mut R) -> f64 {
    let s = measure(q, rng);
    let share = ClassicalShare::deal(s, 0.5, rng);
    basis_overlap(q, share.combine())
}

/// Honest classical protocol averaged over uniform secrets; converges to 2/3.
pub fn classical_baseline(n_samples: usize, seed: u64) -> Result<McEstimate> {
    mc_mean(n_samples, seed, |rng| {
        let q = uniform_unit_vector(rng);
        classical_trial(&q, rng)
    })
}

/// A lone shareholder's guess fidelity, averaged over uniform secrets.
pub fn dishonest_guess_fidelity(
    p: f64,
    strategy: GuessStrategy,
    n_samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    mc_mean(n_samples, seed, |rng| {
        let q = uniform_unit_vector(rng);
        let share = ClassicalShare::deal(measure(&q, rng), p, rng);
        let guess = match strategy {
            GuessStrategy::Same => share.s1,
            GuessStrategy::Negate => !share.s1,
        };
        basis_overlap(&q, guess)
    })
}
