use csr_core::fidelity::{pair_correlation_for_setting, t_matrix_for_setting, Setting, CLASSICAL_LIMIT};
use csr_core::linalg::mat3_max_abs_diff;
use csr_core::qstate::{decompose_state, pure_to_density};
use csr_core::wclass::{
    evaluate, sample_wclass, scatter_experiment, wclass_rt_closed_form, wclass_state, write_csv,
    Region, WClassParams, CSV_HEADER,
};

#[test]
fn closed_form_correlations_match_numerics() {
    let s = Setting::canonical();
    for p in sample_wclass(10_000, 3) {
        let d = decompose_state(&pure_to_density(&wclass_state(&p))).unwrap();
        let (r, t) = wclass_rt_closed_form(&p);
        assert!(mat3_max_abs_diff(&r, &pair_correlation_for_setting(&d, &s)) <= 1e-12);
        assert!(mat3_max_abs_diff(&t, &t_matrix_for_setting(&d, &s).0) <= 1e-12);
    }
}

#[test]
fn samples_are_normalized_nonnegative_and_isotropic() {
    let samples = sample_wclass(40_000, 4);
    let mut mean_sq = [0.0; 4];
    for p in &samples {
        let l = p.lambdas();
        assert!(l.iter().all(|x| *x >= 0.0));
        assert!((l.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() <= 1e-12);
        let rho = pure_to_density(&wclass_state(p));
        assert!((rho.purity() - 1.0).abs() <= 1e-12);
        for k in 0..4 {
            mean_sq[k] += l[k] * l[k] / samples.len() as f64;
        }
    }
    // E[λ_k²] = 1/4 with per-sample variance below 1/8
    for m in mean_sq {
        assert!((m - 0.25).abs() < 4.0 * (0.125f64 / 40_000.0).sqrt(), "{mean_sq:?}");
    }
}

#[test]
fn w_state_is_in_the_blue_region() {
    // σx on A maps |001⟩ + |010⟩ + |100⟩ onto λ₀ = λ₂ = λ₃ = 1/√3, λ₁ = 0.
    let third = (1.0f64 / 3.0).sqrt();
    let w = WClassParams::new([third, 0.0, third, third]).unwrap();
    let rec = evaluate(&w);
    assert_eq!(rec.region, Region::Blue);
    assert!((rec.f_tele - 7.0 / 9.0).abs() <= 1e-12);
    assert!((rec.f_recon - 8.0 / 9.0).abs() <= 1e-12);
}

#[test]
fn scatter_is_deterministic_and_bounded() {
    let a = scatter_experiment(5000, 9);
    let b = scatter_experiment(5000, 9);
    assert_eq!(a, b);
    for r in &a {
        assert!(r.f_recon + 1e-12 >= r.f_tele);
        assert!(r.f_recon >= CLASSICAL_LIMIT - 1e-9);
        assert!(r.f_recon <= 1.0 + 1e-12);
        assert_eq!(r.region, Region::of(r.f_tele));
    }
    let mut buf = Vec::new();
    write_csv(&a[..3], &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 4);
    assert!(lines[1].split(',').count() == 7);
}
