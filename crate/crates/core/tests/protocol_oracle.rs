mod common;

use csr_core::fidelity::{f_max, Setting};
use csr_core::linalg::{mat3_det, mat3_scale, Mat3};
use csr_core::protocol::{
    branch_average, closed_form_fidelity, expected_fidelity_mc, expected_fidelity_mc_with,
    optimal_rotations, simulate_branches, CorrectionRotation, N_BRANCHES,
};
use csr_core::qstate::{decompose_state, BlochVector};
use csr_core::DensityMatrix3Q;

/// ±x, ±y, ±z: a spherical 3-design, so its average is exact for the
/// quadratic dependence of the branch-weighted fidelity on the secret.
const OCTAHEDRON: [[f64; 3]; 6] = [
    [1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0],
    [0.0, 1.0, 0.0],
    [0.0, -1.0, 0.0],
    [0.0, 0.0, 1.0],
    [0.0, 0.0, -1.0],
];

fn octahedron_average(rho: &DensityMatrix3Q, rotations: &[CorrectionRotation]) -> f64 {
    OCTAHEDRON
        .iter()
        .map(|v| branch_average(&simulate_branches(rho, &BlochVector::new(*v).unwrap(), rotations)))
        .sum::<f64>()
        / 6.0
}

fn random_rotation(rng: &mut rand_chacha::ChaCha8Rng) -> Mat3 {
    let o = common::random_orthogonal(rng);
    if mat3_det(&o) < 0.0 {
        mat3_scale(&o, -1.0)
    } else {
        o
    }
}

fn random_rotations(rng: &mut rand_chacha::ChaCha8Rng) -> Vec<CorrectionRotation> {
    (0..N_BRANCHES)
        .map(|_| CorrectionRotation::new(random_rotation(rng)).unwrap())
        .collect()
}

#[test]
fn simulation_matches_closed_form_for_arbitrary_corrections() {
    let mut rng = common::rng(20);
    for _ in 0..100 {
        let rho = common::random_state(&mut rng);
        let d = decompose_state(&rho).unwrap();
        let rotations = random_rotations(&mut rng);
        let exact = octahedron_average(&rho, &rotations);
        let closed = closed_form_fidelity(&d, &Setting::canonical(), &rotations);
        assert!((exact - closed).abs() <= 1e-12, "{exact} vs {closed}");
    }
}

#[test]
fn optimal_corrections_attain_so3_value_and_respect_bound() {
    let mut rng = common::rng(21);
    for _ in 0..100 {
        let rho = common::random_state(&mut rng);
        let d = decompose_state(&rho).unwrap();
        let s = Setting::canonical();
        let plan = optimal_rotations(&d, &s);
        let exact = octahedron_average(&rho, &plan.rotations);
        assert!((exact - plan.so3_fidelity).abs() <= 1e-12);
        assert!(plan.so3_fidelity <= f_max(&d, &s) + 1e-12);
        assert!((plan.trace_norm_fidelity - f_max(&d, &s)).abs() <= 1e-12);
        assert!(plan.so3_gap() >= -1e-12);
        // no random correction set beats the per-branch optimum
        for _ in 0..5 {
            let other = random_rotations(&mut rng);
            assert!(closed_form_fidelity(&d, &s, &other) <= plan.so3_fidelity + 1e-12);
        }
    }
}

#[test]
fn branch_probabilities_are_complete() {
    let mut rng = common::rng(22);
    for _ in 0..100 {
        let rho = common::random_state(&mut rng);
        let phi = BlochVector::new(csr_core::sampling::uniform_unit_vector(&mut rng)).unwrap();
        let outcomes = simulate_branches(&rho, &phi, &random_rotations(&mut rng));
        assert_eq!(outcomes.len(), N_BRANCHES);
        let total: f64 = outcomes.iter().map(|o| o.p_alpha).sum();
        assert!((total - 1.0).abs() <= 1e-12);
        for o in &outcomes {
            assert!((-1e-12..=1.0 + 1e-12).contains(&o.branch_fidelity));
            if let Some(state) = &o.charlie_state {
                assert!((state.trace().re - 1.0).abs() <= 1e-10);
            }
        }
    }
}

#[test]
fn correction_unitaries_implement_their_rotation() {
    let mut rng = common::rng(23);
    for _ in 0..1000 {
        let r = CorrectionRotation::new(random_rotation(&mut rng)).unwrap();
        assert!(r.consistency_residual() <= 1e-12);
    }
    assert!(CorrectionRotation::new(mat3_scale(&csr_core::linalg::mat3_identity(), -1.0)).is_err());
}

#[test]
fn every_setting_is_simulated_by_rewiring() {
    let mut rng = common::rng(24);
    for _ in 0..30 {
        let rho = common::random_state(&mut rng);
        let d = decompose_state(&rho).unwrap();
        for s in Setting::all() {
            let plan = optimal_rotations(&d, &s);
            let canonical = rho.permute_qubits(s.wire_order());
            let exact = octahedron_average(&canonical, &plan.rotations);
            assert!((exact - plan.so3_fidelity).abs() <= 1e-12, "setting {s}");
        }
    }
}

#[test]
fn monte_carlo_agrees_with_closed_form() {
    let mut rng = common::rng(25);
    for _ in 0..5 {
        let rho = common::random_state(&mut rng);
        let d = decompose_state(&rho).unwrap();
        let rotations = random_rotations(&mut rng);
        let closed = closed_form_fidelity(&d, &Setting::canonical(), &rotations);
        let est = expected_fidelity_mc_with(&rho, &rotations, 20_000, 7).unwrap();
        assert!(est.within_sigma(closed, 4.0), "{est:?} vs {closed}");
    }
    let rho = common::random_state(&mut rng);
    let s: Setting = "CAB".parse().unwrap();
    let run = expected_fidelity_mc(&rho, &s, 20_000, 8).unwrap();
    let plan = optimal_rotations(&decompose_state(&rho).unwrap(), &s);
    assert!(run.estimate.within_sigma(plan.so3_fidelity, 4.0));
}
