use csr_core::classical::{
    classical_baseline, classical_fidelity, dishonest_guess_fidelity, guess_formula,
    ClassicalShare, GuessStrategy,
};
use csr_core::Error;
use rand::SeedableRng;

#[test]
fn polar_average_of_classical_fidelity_is_two_thirds() {
    // ∫ (1 − ½ sin²θ) · ½ sinθ dθ by composite Simpson.
    let n = 2000;
    let h = std::f64::consts::PI / n as f64;
    let f = |t: f64| classical_fidelity(t) * 0.5 * t.sin();
    let mut acc = f(0.0) + f(std::f64::consts::PI);
    for i in 1..n {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    assert!((acc * h / 3.0 - 2.0 / 3.0).abs() < 1e-12);
}

#[test]
fn honest_shares_always_recombine() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    for i in 0..1000 {
        let s = i % 2 == 0;
        let p = (i as f64) / 1000.0;
        assert_eq!(ClassicalShare::deal(s, p, &mut rng).combine(), s);
    }
}

#[test]
fn baseline_and_guesses_match_formulas() {
    let est = classical_baseline(200_000, 5).unwrap();
    assert!(est.within_sigma(2.0 / 3.0, 4.0), "{est:?}");
    for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
        for strategy in [GuessStrategy::Same, GuessStrategy::Negate] {
            let est = dishonest_guess_fidelity(p, strategy, 100_000, 6).unwrap();
            assert!(est.within_sigma(guess_formula(p, strategy), 4.0), "{p} {strategy:?} {est:?}");
        }
    }
    assert!(matches!(
        dishonest_guess_fidelity(1.2, GuessStrategy::Same, 10, 1),
        Err(Error::InvalidProbability(_))
    ));
    assert!(matches!(classical_baseline(0, 1), Err(Error::NoSamples)));
}
