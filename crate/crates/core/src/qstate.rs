//! Three-qubit states and their Pauli (Bloch) expansion.
//!
//! Conventions: σ₁ = σx, σ₂ = σy, σ₃ = σz with |0⟩ the +1 eigenstate of σz,
//! and qubit A is the most significant bit of the 8-dimensional index, so
//! `|abc⟩` sits at index `4a + 2b + c`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, Mat3, Vec3, C_ONE, C_ZERO};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_FLOOR: f64 = -1e-9;
pub const NORM_TOL: f64 = 1e-12;
const IMAG_RESIDUE_TOL: f64 = 1e-8;

/// One of the three qubits of the resource.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Qubit {
    A,
    B,
    C,
}

impl Qubit {
    pub const ALL: [Qubit; 3] = [Qubit::A, Qubit::B, Qubit::C];

    /// Position in the tensor product, 0 = most significant.
    pub fn index(self) -> usize {
        match self {
            Qubit::A => 0,
            Qubit::B => 1,
            Qubit::C => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Qubit> {
        Qubit::ALL.get(i).copied()
    }

    pub fn from_char(c: char) -> Option<Qubit> {
        match c.to_ascii_uppercase() {
            'A' => Some(Qubit::A),
            'B' => Some(Qubit::B),
            'C' => Some(Qubit::C),
            _ => None,
        }
    }

    fn shift(self) -> usize {
        2 - self.index()
    }
}

impl fmt::Display for Qubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Qubit::A => 'A',
            Qubit::B => 'B',
            Qubit::C => 'C',
        };
        write!(f, "{c}")
    }
}

/// Single-qubit Pauli `σ_mu` with `mu = 0` the identity, as a 2×2 matrix.
pub fn pauli(mu: usize) -> CMatrix {
    let i = Complex64::i();
    let rows = match mu {
        0 => [[C_ONE, C_ZERO], [C_ZERO, C_ONE]],
        1 => [[C_ZERO, C_ONE], [C_ONE, C_ZERO]],
        2 => [[C_ZERO, -i], [i, C_ZERO]],
        3 => [[C_ONE, C_ZERO], [C_ZERO, -C_ONE]],
        _ => panic!("Pauli index {mu} out of range"),
    };
    CMatrix::from_vec(2, 2, rows.concat())
}

/// Pauli matrices are monomial: row `r` of `σ_mu` has its only nonzero entry in
/// column `r ^ flip(mu)`. Returns `(flip bit, value)`.
#[inline]
fn pauli_row(mu: usize, r: usize) -> (usize, Complex64) {
    match (mu, r) {
        (0, _) => (0, C_ONE),
        (1, _) => (1, C_ONE),
        (2, 0) => (1, Complex64::new(0.0, -1.0)),
        (2, _) => (1, Complex64::new(0.0, 1.0)),
        (3, 0) => (0, C_ONE),
        (3, _) => (0, -C_ONE),
        _ => unreachable!(),
    }
}

/// Row `r` of the n-qubit Pauli string `σ_{idx[0]} ⊗ … ⊗ σ_{idx[n-1]}`:
/// returns `(column, value)` of its single nonzero entry.
#[inline]
fn pauli_string_row(idx: &[usize], r: usize) -> (usize, Complex64) {
    let n = idx.len();
    let mut col = 0;
    let mut val = C_ONE;
    for (q, &mu) in idx.iter().enumerate() {
        let shift = n - 1 - q;
        let bit = (r >> shift) & 1;
        let (flip, v) = pauli_row(mu, bit);
        col |= (bit ^ flip) << shift;
        val *= v;
    }
    (col, val)
}

/// `Tr(m · σ_{idx})` for an n-qubit operator `m` (2ⁿ × 2ⁿ).
pub fn pauli_expectation(m: &CMatrix, idx: &[usize]) -> Complex64 {
    let dim = 1 << idx.len();
    assert_eq!(m.dims(), (dim, dim));
    (0..dim)
        .map(|r| {
            let (c, v) = pauli_string_row(idx, r);
            v * m[(c, r)]
        })
        .sum()
}

/// Full Pauli string as a dense matrix.
pub fn pauli_string(idx: &[usize]) -> CMatrix {
    idx.iter()
        .fold(CMatrix::identity(1), |acc, &mu| acc.kron(&pauli(mu)))
}

/// Validated three-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix3Q {
    matrix: CMatrix,
}

impl DensityMatrix3Q {
    /// Checks Hermiticity, unit trace and positivity of an 8×8 matrix.
    pub fn validate(m: CMatrix) -> Result<Self> {
        if m.dims() != (8, 8) {
            return Err(Error::WrongDimensions {
                expected: 8,
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let herm = m.hermiticity_residual();
        if herm > HERMITIAN_TOL {
            return Err(Error::NotHermitian { violation: herm });
        }
        let tr = (m.trace() - C_ONE).norm();
        if tr > TRACE_TOL {
            return Err(Error::NotUnitTrace { violation: tr });
        }
        let min_eig = m.hermitian_eigenvalues()[0];
        if min_eig < PSD_FLOOR {
            return Err(Error::NotPsd {
                min_eigenvalue: min_eig,
            });
        }
        Ok(Self { matrix: m })
    }

    pub fn maximally_mixed() -> Self {
        Self {
            matrix: CMatrix::identity(8).scale_real(1.0 / 8.0),
        }
    }

    pub fn from_pure(psi: &PureState3Q) -> Self {
        Self {
            matrix: CMatrix::outer(&psi.amplitudes, &psi.amplitudes),
        }
    }

    /// Convex combination `Σ w_k ρ_k`. Weights must be non-negative and sum to 1.
    pub fn mixture(parts: &[(f64, &DensityMatrix3Q)]) -> Result<Self> {
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if parts.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotUnitTrace {
                violation: (total - 1.0).abs(),
            });
        }
        let mut m = CMatrix::zeros(8, 8);
        for (w, rho) in parts {
            m = &m + &rho.matrix.scale_real(*w);
        }
        Ok(Self { matrix: m })
    }

    /// Equal mixture of two pure states.
    pub fn equal_mixture(a: &PureState3Q, b: &PureState3Q) -> Self {
        let m = &CMatrix::outer(&a.amplitudes, &a.amplitudes)
            + &CMatrix::outer(&b.amplitudes, &b.amplitudes);
        Self {
            matrix: m.scale_real(0.5),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn decompose(&self) -> Result<BlochDecomposition> {
        decompose_state(self)
    }

    pub fn partial_trace(&self, discard: Qubit) -> CMatrix {
        partial_trace(self, discard)
    }

    /// Relabels the wires: qubit position `k` of the result carries original
    /// qubit `order[k]`. `order` must be a permutation of {A, B, C}.
    pub fn permute_qubits(&self, order: [Qubit; 3]) -> Self {
        let mut sorted = order;
        sorted.sort();
        assert_eq!(sorted, Qubit::ALL, "order must be a permutation of A, B, C");
        let map = |new_idx: usize| -> usize {
            let mut old = 0;
            for (pos, q) in order.iter().enumerate() {
                let bit = (new_idx >> (2 - pos)) & 1;
                old |= bit << q.shift();
            }
            old
        };
        let mut m = CMatrix::zeros(8, 8);
        for i in 0..8 {
            for j in 0..8 {
                m[(i, j)] = self.matrix[(map(i), map(j))];
            }
        }
        Self { matrix: m }
    }
}

/// Validates an arbitrary 8×8 matrix as a density matrix.
pub fn validate_state(m: CMatrix) -> Result<DensityMatrix3Q> {
    DensityMatrix3Q::validate(m)
}

/// Normalized pure three-qubit state, amplitudes in basis order |000⟩…|111⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState3Q {
    amplitudes: [Complex64; 8],
}

impl PureState3Q {
    pub fn new(amplitudes: [Complex64; 8]) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: [Complex64; 8]) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm_sq == 0.0 || !norm_sq.is_finite() {
            return Err(Error::NotNormalized { norm_sq });
        }
        let s = 1.0 / norm_sq.sqrt();
        Ok(Self {
            amplitudes: amplitudes.map(|a| a * s),
        })
    }

    /// Builds a state from `(bitstring, amplitude)` pairs such as `("101", 1.0)`,
    /// then normalizes.
    pub fn from_kets(terms: &[(&str, f64)]) -> Result<Self> {
        let mut amps = [C_ZERO; 8];
        for (bits, c) in terms {
            let idx = usize::from_str_radix(bits, 2)
                .ok()
                .filter(|i| bits.len() == 3 && *i < 8)
                .ok_or_else(|| Error::StateFile(format!("bad basis label {bits:?}")))?;
            amps[idx] += Complex64::new(*c, 0.0);
        }
        Self::normalized(amps)
    }

    pub fn amplitudes(&self) -> &[Complex64; 8] {
        &self.amplitudes
    }
}

/// Rank-one projector |ψ⟩⟨ψ|.
pub fn pure_to_density(psi: &PureState3Q) -> DensityMatrix3Q {
    DensityMatrix3Q::from_pure(psi)
}

/// Single-qubit Bloch vector with ‖φ‖ ≤ 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    phi: Vec3,
}

impl BlochVector {
    pub fn new(phi: Vec3) -> Result<Self> {
        let norm = crate::linalg::norm3(&phi);
        if norm.is_nan() || norm > 1.0 + NORM_TOL {
            return Err(Error::BlochVectorTooLong { norm });
        }
        Ok(Self { phi })
    }

    /// Point on the sphere at polar angle `theta`, azimuth `phi`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Self {
            phi: [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()],
        }
    }

    pub fn components(&self) -> Vec3 {
        self.phi
    }

    pub fn norm(&self) -> f64 {
        crate::linalg::norm3(&self.phi)
    }

    /// (I + φ·σ)/2
    pub fn density_matrix(&self) -> CMatrix {
        let [x, y, z] = self.phi;
        CMatrix::from_vec(
            2,
            2,
            vec![
                Complex64::new((1.0 + z) / 2.0, 0.0),
                Complex64::new(x / 2.0, -y / 2.0),
                Complex64::new(x / 2.0, y / 2.0),
                Complex64::new((1.0 - z) / 2.0, 0.0),
            ],
        )
    }
}

/// Pauli expansion coefficients of a three-qubit state:
///
/// ρ = ⅛[I + a·σ⊗I⊗I + I⊗b·σ⊗I + I⊗I⊗c·σ + Σ Q_ij σi⊗σj⊗I
///       + Σ R_ik σi⊗I⊗σk + Σ S_jk I⊗σj⊗σk + Σ τ_ijk σi⊗σj⊗σk]
///
/// Indices are zero-based here (`tau[0][0][0]` is ⟨σx⊗σx⊗σx⟩).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlochDecomposition {
    pub a: Vec3,
    pub b: Vec3,
    pub c: Vec3,
    #[serde(rename = "Q")]
    pub q: Mat3,
    #[serde(rename = "R")]
    pub r: Mat3,
    #[serde(rename = "S")]
    pub s: Mat3,
    pub tau: [Mat3; 3],
}

impl BlochDecomposition {
    pub fn zero() -> Self {
        Self {
            a: [0.0; 3],
            b: [0.0; 3],
            c: [0.0; 3],
            q: [[0.0; 3]; 3],
            r: [[0.0; 3]; 3],
            s: [[0.0; 3]; 3],
            tau: [[[0.0; 3]; 3]; 3],
        }
    }

    /// Coefficient of `σ_mu ⊗ σ_nu ⊗ σ_ka` with 0 meaning identity.
    pub fn coefficient(&self, mu: usize, nu: usize, ka: usize) -> f64 {
        match (mu, nu, ka) {
            (0, 0, 0) => 1.0,
            (i, 0, 0) => self.a[i - 1],
            (0, j, 0) => self.b[j - 1],
            (0, 0, k) => self.c[k - 1],
            (i, j, 0) => self.q[i - 1][j - 1],
            (i, 0, k) => self.r[i - 1][k - 1],
            (0, j, k) => self.s[j - 1][k - 1],
            (i, j, k) => self.tau[i - 1][j - 1][k - 1],
        }
    }

    fn set_coefficient(&mut self, mu: usize, nu: usize, ka: usize, v: f64) {
        match (mu, nu, ka) {
            (0, 0, 0) => {}
            (i, 0, 0) => self.a[i - 1] = v,
            (0, j, 0) => self.b[j - 1] = v,
            (0, 0, k) => self.c[k - 1] = v,
            (i, j, 0) => self.q[i - 1][j - 1] = v,
            (i, 0, k) => self.r[i - 1][k - 1] = v,
            (0, j, k) => self.s[j - 1][k - 1] = v,
            (i, j, k) => self.tau[i - 1][j - 1][k - 1] = v,
        }
    }

    /// Correlation between two distinct qubits, rows indexed by `first`.
    pub fn pair_correlation(&self, first: Qubit, second: Qubit) -> Mat3 {
        assert_ne!(first, second);
        let mut m = [[0.0; 3]; 3];
        for i in 1..=3 {
            for k in 1..=3 {
                let mut idx = [0usize; 3];
                idx[first.index()] = i;
                idx[second.index()] = k;
                m[i - 1][k - 1] = self.coefficient(idx[0], idx[1], idx[2]);
            }
        }
        m
    }

    /// Largest |coefficient| over all non-identity terms.
    pub fn max_abs_coefficient(&self) -> f64 {
        let mut worst = 0.0_f64;
        for_each_index(|mu, nu, ka| {
            if (mu, nu, ka) != (0, 0, 0) {
                worst = worst.max(self.coefficient(mu, nu, ka).abs());
            }
        });
        worst
    }

    pub fn compose(&self) -> CMatrix {
        compose_state(self)
    }
}

fn for_each_index(mut f: impl FnMut(usize, usize, usize)) {
    for mu in 0..4 {
        for nu in 0..4 {
            for ka in 0..4 {
                f(mu, nu, ka);
            }
        }
    }
}

/// Assembles ρ from its Pauli coefficients. The result is Hermitian with unit
/// trace; positivity depends on the coefficients and is not checked.
pub fn compose_state(d: &BlochDecomposition) -> CMatrix {
    let mut m = CMatrix::zeros(8, 8);
    for_each_index(|mu, nu, ka| {
        let w = d.coefficient(mu, nu, ka);
        if w == 0.0 {
            return;
        }
        let idx = [mu, nu, ka];
        for r in 0..8 {
            let (c, v) = pauli_string_row(&idx, r);
            m[(r, c)] += v * (w / 8.0);
        }
    });
    m
}

/// Pauli expansion of a validated state.
pub fn decompose_state(rho: &DensityMatrix3Q) -> Result<BlochDecomposition> {
    decompose_matrix(rho.matrix())
}

pub(crate) fn decompose_matrix(m: &CMatrix) -> Result<BlochDecomposition> {
    let mut d = BlochDecomposition::zero();
    let mut worst = 0.0_f64;
    for_each_index(|mu, nu, ka| {
        if (mu, nu, ka) == (0, 0, 0) {
            return;
        }
        let z = pauli_expectation(m, &[mu, nu, ka]);
        worst = worst.max(z.im.abs());
        d.set_coefficient(mu, nu, ka, z.re);
    });
    if worst > IMAG_RESIDUE_TOL {
        return Err(Error::NonHermitianInput { residue: worst });
    }
    Ok(d)
}

/// Traces out one qubit. The remaining two keep their original relative order.
pub fn partial_trace(rho: &DensityMatrix3Q, discard: Qubit) -> CMatrix {
    let m = rho.matrix();
    let keep: Vec<Qubit> = Qubit::ALL.into_iter().filter(|&q| q != discard).collect();
    let embed = |pair: usize, traced: usize| -> usize {
        let hi = (pair >> 1) & 1;
        let lo = pair & 1;
        (hi << keep[0].shift()) | (lo << keep[1].shift()) | (traced << discard.shift())
    };
    let mut out = CMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            out[(i, j)] = (0..2).map(|t| m[(embed(i, t), embed(j, t))]).sum();
        }
    }
    out
}

/// Correlation matrix Tr(ρ σi⊗σj) of a two-qubit operator.
pub fn two_qubit_correlation(rho2: &CMatrix) -> Mat3 {
    let mut m = [[0.0; 3]; 3];
    for i in 1..=3 {
        for j in 1..=3 {
            m[i - 1][j - 1] = pauli_expectation(rho2, &[i, j]).re;
        }
    }
    m
}
