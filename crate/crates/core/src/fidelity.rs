//! Closed-form reconstruction and teleportation fidelities.
//!
//! For a setting (dealer, assistant, reconstructor) the score
//!
//! ```text
//! ϑ = ½ (‖P + T‖₁ + ‖P − T‖₁)
//! ```
//!
//! combines the dealer–reconstructor correlation matrix `P` with the slice `T`
//! of the three-party tensor taken at σx on the assistant. The best expected
//! reconstruction fidelity is `F_max = ½(1 + ϑ/3)`; anything above the
//! classical 2/3 needs `ϑ > 1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{mat3_add, mat3_max_abs, mat3_sub, trace_norm, Mat3};
use crate::qstate::{decompose_state, BlochDecomposition, DensityMatrix3Q, Qubit};

/// Expected fidelity reachable with classical communication only.
pub const CLASSICAL_LIMIT: f64 = 2.0 / 3.0;

/// Default threshold below which a correlation matrix is treated as zero.
pub const DEFAULT_ZERO_EPS: f64 = 1e-9;

/// Slack on the `≤ 1` shareholder conditions of the QSS check.
pub const QSS_SLACK: f64 = 1e-12;

/// Ordered role assignment (dealer, assistant, reconstructor).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Setting {
    dealer: Qubit,
    assistant: Qubit,
    reconstructor: Qubit,
}

impl Setting {
    pub fn new(dealer: Qubit, assistant: Qubit, reconstructor: Qubit) -> Result<Self> {
        if dealer == assistant || dealer == reconstructor || assistant == reconstructor {
            return Err(Error::InvalidSetting(format!(
                "roles must be distinct qubits, got ({dealer}, {assistant}, {reconstructor})"
            )));
        }
        Ok(Self {
            dealer,
            assistant,
            reconstructor,
        })
    }

    /// (A, B, C): Alice deals, Bob assists, Charlie reconstructs.
    pub fn canonical() -> Self {
        Self {
            dealer: Qubit::A,
            assistant: Qubit::B,
            reconstructor: Qubit::C,
        }
    }

    /// All six settings, in the order ABC, ACB, BAC, BCA, CAB, CBA.
    pub fn all() -> [Setting; 6] {
        use Qubit::*;
        [
            (A, B, C),
            (A, C, B),
            (B, A, C),
            (B, C, A),
            (C, A, B),
            (C, B, A),
        ]
        .map(|(d, a, r)| Setting {
            dealer: d,
            assistant: a,
            reconstructor: r,
        })
    }

    pub fn dealer(&self) -> Qubit {
        self.dealer
    }

    pub fn assistant(&self) -> Qubit {
        self.assistant
    }

    pub fn reconstructor(&self) -> Qubit {
        self.reconstructor
    }

    /// Same assistant, dealer and reconstructor exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            dealer: self.reconstructor,
            assistant: self.assistant,
            reconstructor: self.dealer,
        }
    }

    /// Qubit order that moves this setting onto the (A, B, C) wires.
    pub fn wire_order(&self) -> [Qubit; 3] {
        [self.dealer, self.assistant, self.reconstructor]
    }
}

impl Default for Setting {
    fn default() -> Self {
        Self::canonical()
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.dealer, self.assistant, self.reconstructor)
    }
}

impl FromStr for Setting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let qubits: Vec<Qubit> = s.chars().filter_map(Qubit::from_char).collect();
        if qubits.len() != 3 || s.chars().count() != 3 {
            return Err(Error::InvalidSetting(format!(
                "expected three letters from A, B, C, got {s:?}"
            )));
        }
        Setting::new(qubits[0], qubits[1], qubits[2])
    }
}

impl Serialize for Setting {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Setting {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Slice of the three-party correlation tensor at σx on the assistant, rows
/// indexed by the dealer's Pauli and columns by the reconstructor's.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TMatrix(pub Mat3);

impl TMatrix {
    pub fn entries(&self) -> &Mat3 {
        &self.0
    }
}

pub fn t_matrix_for_setting(d: &BlochDecomposition, s: &Setting) -> TMatrix {
    let mut m = [[0.0; 3]; 3];
    for i in 1..=3 {
        for k in 1..=3 {
            let mut idx = [0usize; 3];
            idx[s.dealer.index()] = i;
            idx[s.assistant.index()] = 1;
            idx[s.reconstructor.index()] = k;
            m[i - 1][k - 1] = d.coefficient(idx[0], idx[1], idx[2]);
        }
    }
    TMatrix(m)
}

/// Dealer–reconstructor correlation matrix: R, Q or S depending on who assists.
pub fn pair_correlation_for_setting(d: &BlochDecomposition, s: &Setting) -> Mat3 {
    d.pair_correlation(s.dealer, s.reconstructor)
}

/// Dealer–assistant correlation matrix.
pub fn dealer_assistant_correlation(d: &BlochDecomposition, s: &Setting) -> Mat3 {
    d.pair_correlation(s.dealer, s.assistant)
}

/// ϑ = ½(‖P + T‖₁ + ‖P − T‖₁).
pub fn theta(d: &BlochDecomposition, s: &Setting) -> f64 {
    let p = pair_correlation_for_setting(d, s);
    let t = t_matrix_for_setting(d, s);
    theta_from(&p, &t)
}

pub fn theta_from(p: &Mat3, t: &TMatrix) -> f64 {
    0.5 * (trace_norm(&mat3_add(p, &t.0)) + trace_norm(&mat3_sub(p, &t.0)))
}

pub fn f_max_from_theta(theta: f64) -> f64 {
    0.5 * (1.0 + theta / 3.0)
}

pub fn f_max(d: &BlochDecomposition, s: &Setting) -> f64 {
    f_max_from_theta(theta(d, s))
}

/// Optimal teleportation fidelity of a two-qubit channel with correlation
/// matrix `pair`: ½(1 + ‖pair‖₁/3).
pub fn teleportation_fidelity(pair: &Mat3) -> f64 {
    0.5 * (1.0 + trace_norm(pair) / 3.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    /// P ≠ O, T ≠ O: source of any advantage is ambiguous.
    Case1,
    /// P = O, T ≠ O: advantage comes from the three-party resource alone.
    Case2,
    /// P ≠ O, T = O: advantage comes from the dealer–reconstructor channel alone.
    Case3,
    /// P = O, T = O: no information reaches the reconstructor.
    Case4,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Case::Case1 => "Case1",
            Case::Case2 => "Case2",
            Case::Case3 => "Case3",
            Case::Case4 => "Case4",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseLabel {
    pub case: Case,
    pub eps: f64,
    /// max |P_ik|
    pub pair_max_abs: f64,
    /// max |T_ik|
    pub t_max_abs: f64,
}

/// A matrix counts as zero iff its largest entry is below `eps`.
pub fn classify_case(p: &Mat3, t: &TMatrix, eps: f64) -> CaseLabel {
    let pair_max_abs = mat3_max_abs(p);
    let t_max_abs = mat3_max_abs(&t.0);
    let case = match (pair_max_abs < eps, t_max_abs < eps) {
        (false, false) => Case::Case1,
        (true, false) => Case::Case2,
        (false, true) => Case::Case3,
        (true, true) => Case::Case4,
    };
    CaseLabel {
        case,
        eps,
        pair_max_abs,
        t_max_abs,
    }
}

/// Left-hand sides of the three secret-sharing conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QssDetails {
    /// ‖dealer–assistant correlation‖₁, must be ≤ 1.
    pub dealer_assistant_trace_norm: f64,
    /// ‖dealer–reconstructor correlation‖₁, must be ≤ 1.
    pub dealer_reconstructor_trace_norm: f64,
    /// ϑ, must be > 1.
    pub theta: f64,
}

impl QssDetails {
    pub fn ok(&self) -> bool {
        self.dealer_assistant_trace_norm <= 1.0 + QSS_SLACK
            && self.dealer_reconstructor_trace_norm <= 1.0 + QSS_SLACK
            && self.theta > 1.0
    }
}

/// Secret sharing works when neither shareholder alone beats the classical
/// limit through its own channel to the dealer, while both together do.
pub fn qss_check(d: &BlochDecomposition, s: &Setting) -> (bool, QssDetails) {
    let details = QssDetails {
        dealer_assistant_trace_norm: trace_norm(&dealer_assistant_correlation(d, s)),
        dealer_reconstructor_trace_norm: trace_norm(&pair_correlation_for_setting(d, s)),
        theta: theta(d, s),
    };
    (details.ok(), details)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub setting: Setting,
    pub theta: f64,
    pub f_max: f64,
    pub f_tele_dealer_reconstructor: f64,
    pub f_tele_dealer_assistant: f64,
    pub case_label: Case,
    pub qss_ok: bool,
    pub quantum_advantage: bool,
    pub epsilon: f64,
    pub pair_matrix: Mat3,
    pub t_matrix: TMatrix,
    pub qss_details: QssDetails,
}

pub fn full_report(rho: &DensityMatrix3Q, s: &Setting, eps: f64) -> Result<FidelityReport> {
    let d = decompose_state(rho)?;
    Ok(report_from_decomposition(&d, s, eps))
}

pub fn report_from_decomposition(d: &BlochDecomposition, s: &Setting, eps: f64) -> FidelityReport {
    let p = pair_correlation_for_setting(d, s);
    let t = t_matrix_for_setting(d, s);
    let th = theta_from(&p, &t);
    let (qss_ok, qss_details) = qss_check(d, s);
    let label = classify_case(&p, &t, eps);
    let f = f_max_from_theta(th);
    FidelityReport {
        setting: *s,
        theta: th,
        f_max: f,
        f_tele_dealer_reconstructor: teleportation_fidelity(&p),
        f_tele_dealer_assistant: teleportation_fidelity(&dealer_assistant_correlation(d, s)),
        case_label: label.case,
        qss_ok,
        quantum_advantage: f > CLASSICAL_LIMIT,
        epsilon: eps,
        pair_matrix: p,
        t_matrix: t,
        qss_details,
    }
}
