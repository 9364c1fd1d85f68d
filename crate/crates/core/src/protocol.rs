//! Branch-by-branch simulation of the reconstruction protocol.
//!
//! Wires: the secret qubit S is prepended to the resource, giving the 16-dim
//! space S⊗A⊗B⊗C (S most significant). The dealer (A) makes a Bell
//! measurement on (S, A), the assistant (B) measures in the σx basis, and the
//! reconstructor (C) applies a correction unitary chosen per outcome.
//! Other settings are simulated by relabelling the wires first.
//!
//! Nothing here uses the Pauli-coefficient algebra of [`crate::fidelity`]
//! except [`optimal_rotations`], which needs the branch matrices to pick the
//! corrections; the fidelities themselves come from explicit density matrices.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fidelity::{pair_correlation_for_setting, t_matrix_for_setting, Setting};
use crate::linalg::{
    mat3_add, mat3_det, mat3_diag, mat3_identity, mat3_max_abs_diff, mat3_mul, mat3_scale,
    mat3_trace, mat3_transpose, svd3, CMatrix, Mat3, Vec3, C_ZERO,
};
use crate::qstate::{pauli, BlochDecomposition, BlochVector, DensityMatrix3Q};
use crate::sampling::{mc_mean, uniform_unit_vector, McEstimate};

/// Diagonals of the Bell-projector correlation matrices, indexed by outcome `l`.
pub const BELL_CORRELATIONS: [Vec3; 4] = [
    [-1.0, -1.0, -1.0],
    [-1.0, 1.0, 1.0],
    [1.0, -1.0, 1.0],
    [1.0, 1.0, -1.0],
];

/// Assistant outcomes: Bloch x-component of the σx eigenprojector.
pub const HADAMARD_OUTCOMES: [f64; 2] = [1.0, -1.0];

pub const N_BRANCHES: usize = 8;

/// Branch index for Bell outcome `l` and assistant outcome `x = ±1`.
pub fn branch_index(l: usize, x: f64) -> usize {
    2 * l + usize::from(x < 0.0)
}

/// P_l = ¼(I⊗I + Σ_i (T_l)_ii σi⊗σi)
pub fn bell_projectors() -> [CMatrix; 4] {
    BELL_CORRELATIONS.map(|t| {
        let mut p = CMatrix::identity(4);
        for (i, ti) in t.iter().enumerate() {
            let s = pauli(i + 1);
            p = &p + &s.kron(&s).scale_real(*ti);
        }
        p.scale_real(0.25)
    })
}

/// P_± = (I ± σx)/2, in the order of [`HADAMARD_OUTCOMES`].
pub fn hadamard_projectors() -> [CMatrix; 2] {
    HADAMARD_OUTCOMES.map(|x| (&CMatrix::identity(2) + &pauli(1).scale_real(x)).scale_real(0.5))
}

/// Proper rotation `omega` together with an SU(2) unitary `u` that realizes
/// it as `u (n·σ) u† = (omegaᵀ n)·σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionRotation {
    omega: Mat3,
    unitary: CMatrix,
}

impl CorrectionRotation {
    pub fn new(omega: Mat3) -> Result<Self> {
        let orth = mat3_max_abs_diff(&mat3_mul(&mat3_transpose(&omega), &omega), &mat3_identity());
        let det = (mat3_det(&omega) - 1.0).abs();
        if orth > 1e-10 || det > 1e-10 {
            return Err(Error::NotRotation {
                residual: orth.max(det),
            });
        }
        let unitary = su2_from_rotation(&mat3_transpose(&omega));
        Ok(Self { omega, unitary })
    }

    pub fn identity() -> Self {
        Self {
            omega: mat3_identity(),
            unitary: CMatrix::identity(2),
        }
    }

    pub fn omega(&self) -> &Mat3 {
        &self.omega
    }

    pub fn unitary(&self) -> &CMatrix {
        &self.unitary
    }

    /// Largest deviation of `u σ_k u†` from `Σ_j omega[k][j] σ_j` over k = x, y, z.
    pub fn consistency_residual(&self) -> f64 {
        let u = &self.unitary;
        let ud = u.adjoint();
        let mut worst = 0.0_f64;
        for k in 0..3 {
            let lhs = &(u * &pauli(k + 1)) * &ud;
            let mut rhs = CMatrix::zeros(2, 2);
            for j in 0..3 {
                rhs = &rhs + &pauli(j + 1).scale_real(self.omega[k][j]);
            }
            worst = worst.max(lhs.max_abs_diff(&rhs));
        }
        worst
    }
}

/// SU(2) element `w·I − i(x σx + y σy + z σz)` from the unit quaternion of
/// the rotation `rot`, so that `u (n·σ) u† = (rot n)·σ`.
fn su2_from_rotation(rot: &Mat3) -> CMatrix {
    let r = rot;
    let tr = mat3_trace(r);
    let (w, x, y, z) = if tr > 0.0 {
        let s = (tr + 1.0).sqrt() * 2.0;
        (
            0.25 * s,
            (r[2][1] - r[1][2]) / s,
            (r[0][2] - r[2][0]) / s,
            (r[1][0] - r[0][1]) / s,
        )
    } else if r[0][0] > r[1][1] && r[0][0] > r[2][2] {
        let s = (1.0 + r[0][0] - r[1][1] - r[2][2]).sqrt() * 2.0;
        (
            (r[2][1] - r[1][2]) / s,
            0.25 * s,
            (r[0][1] + r[1][0]) / s,
            (r[0][2] + r[2][0]) / s,
        )
    } else if r[1][1] > r[2][2] {
        let s = (1.0 + r[1][1] - r[0][0] - r[2][2]).sqrt() * 2.0;
        (
            (r[0][2] - r[2][0]) / s,
            (r[0][1] + r[1][0]) / s,
            0.25 * s,
            (r[1][2] + r[2][1]) / s,
        )
    } else {
        let s = (1.0 + r[2][2] - r[0][0] - r[1][1]).sqrt() * 2.0;
        (
            (r[1][0] - r[0][1]) / s,
            (r[0][2] + r[2][0]) / s,
            (r[1][2] + r[2][1]) / s,
            0.25 * s,
        )
    };
    let n = (w * w + x * x + y * y + z * z).sqrt();
    let (w, x, y, z) = (w / n, x / n, y / n, z / n);
    CMatrix::from_vec(
        2,
        2,
        vec![
            Complex64::new(w, -z),
            Complex64::new(-y, -x),
            Complex64::new(y, -x),
            Complex64::new(w, z),
        ],
    )
}

/// Per-branch view of the rotation optimisation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchDiagnostics {
    pub l: usize,
    pub x: f64,
    /// M = T_l (P + x T)
    pub branch_matrix: Mat3,
    pub singular_values: Vec3,
    pub det_sign: f64,
    /// max over proper rotations of Tr(M Ω): σ₁ + σ₂ + sign(det M)·σ₃
    pub so3_value: f64,
    /// max over all orthogonal Ω: σ₁ + σ₂ + σ₃
    pub trace_norm_value: f64,
    /// Singular values tied or σ₃ ≈ 0, so the optimal rotation is not unique.
    pub degenerate: bool,
    pub omega: Mat3,
}

/// Optimal corrections for all eight branches, with the closed-form fidelity
/// they achieve and the bound they are compared against.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationPlan {
    pub rotations: Vec<CorrectionRotation>,
    pub branches: Vec<BranchDiagnostics>,
    /// Expected fidelity attained by the proper-rotation optimum.
    pub so3_fidelity: f64,
    /// Expected fidelity if every branch reached its trace norm (= F_max).
    pub trace_norm_fidelity: f64,
}

impl RotationPlan {
    /// trace_norm_fidelity − so3_fidelity, ≥ 0.
    pub fn so3_gap(&self) -> f64 {
        self.trace_norm_fidelity - self.so3_fidelity
    }
}

/// Branch matrices M_α = T_l (P + x T) for the given setting.
pub fn branch_matrices(d: &BlochDecomposition, s: &Setting) -> [Mat3; N_BRANCHES] {
    let p = pair_correlation_for_setting(d, s);
    let t = t_matrix_for_setting(d, s).0;
    let mut out = [[[0.0; 3]; 3]; N_BRANCHES];
    for (l, tl) in BELL_CORRELATIONS.iter().enumerate() {
        for x in HADAMARD_OUTCOMES {
            out[branch_index(l, x)] = mat3_mul(&mat3_diag(*tl), &mat3_add(&p, &mat3_scale(&t, x)));
        }
    }
    out
}

/// For each branch, the proper rotation maximizing Tr(M Ω):
/// with M = U Σ Vᵀ, Ω = V·diag(1, 1, det(V Uᵀ))·Uᵀ.
pub fn optimal_rotations(d: &BlochDecomposition, s: &Setting) -> RotationPlan {
    let ms = branch_matrices(d, s);
    let mut rotations = Vec::with_capacity(N_BRANCHES);
    let mut branches = Vec::with_capacity(N_BRANCHES);
    let mut so3_sum = 0.0;
    let mut tn_sum = 0.0;
    for (l, _) in BELL_CORRELATIONS.iter().enumerate() {
        for x in HADAMARD_OUTCOMES {
            let m = ms[branch_index(l, x)];
            let svd = svd3(&m);
            let sign = mat3_det(&mat3_mul(&svd.v, &mat3_transpose(&svd.u))).signum();
            let omega = mat3_mul(
                &mat3_mul(&svd.v, &mat3_diag([1.0, 1.0, sign])),
                &mat3_transpose(&svd.u),
            );
            let [s1, s2, s3] = svd.sigma;
            let scale = s1.max(1e-300);
            let degenerate =
                (s1 - s2).abs() <= 1e-12 * scale || (s2 - s3).abs() <= 1e-12 * scale || s3 <= 1e-12 * scale;
            let det_sign = svd.det_sign();
            let so3_value = s1 + s2 + det_sign * s3;
            let trace_norm_value = s1 + s2 + s3;
            so3_sum += so3_value;
            tn_sum += trace_norm_value;
            rotations.push(
                CorrectionRotation::new(omega).expect("SVD factors give a proper rotation"),
            );
            branches.push(BranchDiagnostics {
                l,
                x,
                branch_matrix: m,
                singular_values: svd.sigma,
                det_sign,
                so3_value,
                trace_norm_value,
                degenerate,
                omega,
            });
        }
    }
    RotationPlan {
        rotations,
        branches,
        so3_fidelity: 0.5 + so3_sum / 48.0,
        trace_norm_fidelity: 0.5 + tn_sum / 48.0,
    }
}

/// Exact sphere-averaged fidelity of an arbitrary correction set:
/// ½ + (1/48) Σ_α Tr(M_α Ω_α).
pub fn closed_form_fidelity(
    d: &BlochDecomposition,
    s: &Setting,
    rotations: &[CorrectionRotation],
) -> f64 {
    assert_eq!(rotations.len(), N_BRANCHES);
    let ms = branch_matrices(d, s);
    let sum: f64 = ms
        .iter()
        .zip(rotations)
        .map(|(m, r)| mat3_trace(&mat3_mul(m, r.omega())))
        .sum();
    0.5 + sum / 48.0
}

/// One measurement branch of the protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolOutcome {
    pub l: usize,
    pub x: f64,
    pub p_alpha: f64,
    /// Reconstructor's corrected, normalized state; `None` when `p_alpha` is 0.
    pub charlie_state: Option<CMatrix>,
    /// Tr(ϱ_α ρ_S); 0 for impossible branches.
    pub branch_fidelity: f64,
}

/// Measurement operators P_l ⊗ P_x on (S, A, B), in branch order.
fn measurement_operators() -> Vec<CMatrix> {
    let bell = bell_projectors();
    let had = hadamard_projectors();
    let mut ops = vec![CMatrix::zeros(8, 8); N_BRANCHES];
    for (l, pl) in bell.iter().enumerate() {
        for (xi, px) in had.iter().enumerate() {
            ops[branch_index(l, HADAMARD_OUTCOMES[xi])] = pl.kron(px);
        }
    }
    ops
}

/// Tr_{SAB}[(Π ⊗ I) Ω] for an 8×8 Π on (S, A, B) and a 16×16 Ω.
///
/// Equal to Tr_{SAB}[(Π ⊗ I) Ω (Π ⊗ I)] because Π is a projector acting only
/// on the traced wires.
fn reconstructor_block(pi: &CMatrix, joint: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(2, 2);
    for c in 0..2 {
        for cp in 0..2 {
            let mut acc = C_ZERO;
            for m in 0..8 {
                for mp in 0..8 {
                    let w = pi[(m, mp)];
                    if w != C_ZERO {
                        acc += w * joint[(2 * mp + c, 2 * m + cp)];
                    }
                }
            }
            out[(c, cp)] = acc;
        }
    }
    out
}

struct Simulator {
    ops: Vec<CMatrix>,
    unitaries: Vec<(CMatrix, CMatrix)>,
    resource: CMatrix,
}

impl Simulator {
    fn new(resource: &DensityMatrix3Q, rotations: &[CorrectionRotation]) -> Self {
        assert_eq!(rotations.len(), N_BRANCHES);
        Self {
            ops: measurement_operators(),
            unitaries: rotations
                .iter()
                .map(|r| (r.unitary().clone(), r.unitary().adjoint()))
                .collect(),
            resource: resource.matrix().clone(),
        }
    }

    fn run(&self, phi: &BlochVector) -> Vec<ProtocolOutcome> {
        let secret = phi.density_matrix();
        let joint = secret.kron(&self.resource);
        let mut out = Vec::with_capacity(N_BRANCHES);
        for (l, _) in BELL_CORRELATIONS.iter().enumerate() {
            for x in HADAMARD_OUTCOMES {
                let a = branch_index(l, x);
                let block = reconstructor_block(&self.ops[a], &joint);
                let p = block.trace().re;
                let (u, ud) = &self.unitaries[a];
                let corrected = &(u * &block) * ud;
                // p·F without dividing, so impossible branches add exactly 0.
                let weighted = (&corrected * &secret).trace().re;
                let (state, fid) = if p > 1e-15 {
                    (Some(corrected.scale_real(1.0 / p)), weighted / p)
                } else {
                    (None, 0.0)
                };
                out.push(ProtocolOutcome {
                    l,
                    x,
                    p_alpha: p.max(0.0),
                    charlie_state: state,
                    branch_fidelity: fid,
                });
            }
        }
        out
    }

    fn expected(&self, phi: &BlochVector) -> f64 {
        self.run(phi)
            .iter()
            .map(|o| o.p_alpha * o.branch_fidelity)
            .sum()
    }
}

/// Runs all eight branches for the canonical wiring (dealer A, assistant B,
/// reconstructor C). `rotations` is indexed by [`branch_index`].
pub fn simulate_branches(
    rho: &DensityMatrix3Q,
    phi: &BlochVector,
    rotations: &[CorrectionRotation],
) -> Vec<ProtocolOutcome> {
    Simulator::new(rho, rotations).run(phi)
}

/// Σ_α p_α · F_α for one secret.
pub fn branch_average(outcomes: &[ProtocolOutcome]) -> f64 {
    outcomes.iter().map(|o| o.p_alpha * o.branch_fidelity).sum()
}

/// Result of a Monte-Carlo protocol run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McRun {
    #[serde(flatten)]
    pub estimate: McEstimate,
    pub per_branch: Vec<BranchDiagnostics>,
}

/// Monte-Carlo expected fidelity with explicit corrections, on a state already
/// in canonical wiring.
pub fn expected_fidelity_mc_with(
    canonical: &DensityMatrix3Q,
    rotations: &[CorrectionRotation],
    n_samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    let sim = Simulator::new(canonical, rotations);
    mc_mean(n_samples, seed, |rng| {
        let phi = BlochVector::new(uniform_unit_vector(rng)).expect("unit vector");
        sim.expected(&phi)
    })
}

/// Monte-Carlo expected fidelity for `s` with the optimal proper-rotation
/// corrections. The state is rewired so `s` maps onto (A, B, C).
pub fn expected_fidelity_mc(
    rho: &DensityMatrix3Q,
    s: &Setting,
    n_samples: usize,
    seed: u64,
) -> Result<McRun> {
    let canonical = rho.permute_qubits(s.wire_order());
    let d = canonical.decompose()?;
    let plan = optimal_rotations(&d, &Setting::canonical());
    let estimate = expected_fidelity_mc_with(&canonical, &plan.rotations, n_samples, seed)?;
    Ok(McRun {
        estimate,
        per_branch: plan.branches,
    })
}

/// MC estimate of the sphere average of ⟨φ, Y φ⟩ against Tr(Y)/3.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereAverage {
    pub lhs: f64,
    pub rhs: f64,
    pub std_error: f64,
}

pub fn sphere_average_identity_check(y: &Mat3, n_samples: usize, seed: u64) -> Result<SphereAverage> {
    let est = mc_mean(n_samples, seed, |rng| {
        let v = uniform_unit_vector(rng);
        crate::linalg::dot3(&v, &crate::linalg::mat3_apply(y, &v))
    })?;
    Ok(SphereAverage {
        lhs: est.mean,
        rhs: mat3_trace(y) / 3.0,
        std_error: est.std_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{pure_to_density, PureState3Q};

    fn ghz() -> DensityMatrix3Q {
        pure_to_density(&PureState3Q::from_kets(&[("000", 1.0), ("111", 1.0)]).unwrap())
    }

    #[test]
    fn bell_projectors_are_the_bell_states() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let c = |v: f64| Complex64::new(v, 0.0);
        let kets = [
            [C_ZERO, c(s), c(-s), C_ZERO],
            [c(s), C_ZERO, C_ZERO, c(-s)],
            [c(s), C_ZERO, C_ZERO, c(s)],
            [C_ZERO, c(s), c(s), C_ZERO],
        ];
        for (p, k) in bell_projectors().iter().zip(kets) {
            assert!(p.max_abs_diff(&CMatrix::outer(&k, &k)) < 1e-15);
        }
    }

    #[test]
    fn projector_sets_complete() {
        let bell = bell_projectors();
        let sum = bell.iter().fold(CMatrix::zeros(4, 4), |acc, p| &acc + p);
        assert!(sum.max_abs_diff(&CMatrix::identity(4)) < 1e-12);
        let had = hadamard_projectors();
        assert!((&had[0] + &had[1]).max_abs_diff(&CMatrix::identity(2)) < 1e-12);
        assert!((&had[0] * &had[1]).max_abs_diff(&CMatrix::zeros(2, 2)) < 1e-12);
    }

    #[test]
    fn rotation_about_z_gives_expected_unitary() {
        let t = 0.7_f64;
        let rz = [[t.cos(), -t.sin(), 0.0], [t.sin(), t.cos(), 0.0], [0.0, 0.0, 1.0]];
        // omega is the transpose of the Bloch-vector action
        let r = CorrectionRotation::new(mat3_transpose(&rz)).unwrap();
        assert!(r.consistency_residual() < 1e-14);
        let u = r.unitary();
        assert!((u[(0, 0)] - Complex64::from_polar(1.0, -t / 2.0)).norm() < 1e-14);
    }

    #[test]
    fn half_turns_are_handled() {
        for diag in [[1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]] {
            let r = CorrectionRotation::new(mat3_diag(diag)).unwrap();
            assert!(r.consistency_residual() < 1e-14);
        }
        assert!(CorrectionRotation::new(mat3_diag([1.0, 1.0, -1.0])).is_err());
        assert!(CorrectionRotation::new(mat3_scale(&mat3_identity(), 2.0)).is_err());
    }

    #[test]
    fn identity_branch_matrix_gives_identity_rotation() {
        // With P = −I, T = O every branch matrix is −T_l... pick a state-free check
        // straight on the SVD recipe instead.
        let svd = svd3(&mat3_identity());
        let sign = mat3_det(&mat3_mul(&svd.v, &mat3_transpose(&svd.u))).signum();
        let omega = mat3_mul(
            &mat3_mul(&svd.v, &mat3_diag([1.0, 1.0, sign])),
            &mat3_transpose(&svd.u),
        );
        assert!(mat3_max_abs_diff(&omega, &mat3_identity()) < 1e-15);
    }

    #[test]
    fn ghz_is_perfect_for_any_secret() {
        let rho = ghz();
        let plan = optimal_rotations(&rho.decompose().unwrap(), &Setting::canonical());
        assert!((plan.so3_fidelity - 1.0).abs() < 1e-12);
        assert!(plan.so3_gap().abs() < 1e-12);
        for (theta, az) in [(0.0, 0.0), (1.0, 2.0), (2.5, -0.3), (std::f64::consts::PI, 0.0)] {
            let phi = BlochVector::from_angles(theta, az);
            let out = simulate_branches(&rho, &phi, &plan.rotations);
            let total: f64 = out.iter().map(|o| o.p_alpha).sum();
            assert!((total - 1.0).abs() < 1e-12);
            assert!((branch_average(&out) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn maximally_mixed_resource_gives_half() {
        let rho = DensityMatrix3Q::maximally_mixed();
        let rots = vec![CorrectionRotation::identity(); N_BRANCHES];
        let phi = BlochVector::from_angles(0.4, 1.1);
        let out = simulate_branches(&rho, &phi, &rots);
        for o in &out {
            assert!((o.p_alpha - 0.125).abs() < 1e-14);
            assert!(o.branch_fidelity <= 1.0);
        }
        assert!((branch_average(&out) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn zero_probability_branches_are_dropped() {
        // |000⟩ resource: assistant outcomes are random, but Bell outcomes for
        // secret |0⟩ on (S, A) = |00⟩ only hit Φ±.
        let rho = pure_to_density(&PureState3Q::from_kets(&[("000", 1.0)]).unwrap());
        let rots = vec![CorrectionRotation::identity(); N_BRANCHES];
        let out = simulate_branches(&rho, &BlochVector::new([0.0, 0.0, 1.0]).unwrap(), &rots);
        let dead: Vec<_> = out.iter().filter(|o| o.charlie_state.is_none()).collect();
        assert_eq!(dead.len(), 4);
        assert!(dead.iter().all(|o| o.branch_fidelity == 0.0 && o.p_alpha == 0.0));
    }

    #[test]
    fn sphere_identity_for_identity_matrix() {
        let r = sphere_average_identity_check(&mat3_identity(), 1000, 1).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-12);
        assert_eq!(r.rhs, 1.0);
    }
}
