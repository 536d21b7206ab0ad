mod common;

use common::{hermitian_with_spectrum, log_uniform_spectrum};
use num_complex::Complex64;
use proptest::prelude::*;
use qspectral::matrix::{exact_spectrum, rescale, SparseHermitianMatrix, SpectralBounds, SpectrumInfo};
use qspectral::qpe::{outcome_distribution, statevector_qpe, OutcomeDistribution, QpeConfig, QpeInput, QpeMode};
use qspectral::sampler::draw_batch;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn full(m: u32) -> QpeConfig {
    QpeConfig::new(m, QpeMode::FullDistribution).unwrap()
}

#[test]
fn three_eighths_reference_values() {
    let d = outcome_distribution(0.375f64, &full(2)).unwrap();
    assert!((d.prob(1) - 0.4267766953).abs() < 1e-9);
    assert!((d.prob(2) - 0.4267766953).abs() < 1e-9);
    assert!((d.prob(0) - 0.0732233047).abs() < 1e-9);
    assert!((d.prob(3) - 0.0732233047).abs() < 1e-9);
}

#[test]
fn statevector_examples() {
    let d = SparseHermitianMatrix::diagonal(&[0.25, 0.5]).unwrap();
    let s = rescale(&d, SpectralBounds { lambda_max: Some(0.5), lambda_min: Some(0.25) }).unwrap();
    let p = statevector_qpe(&s, &QpeInput::EigenIndex(0), 2).unwrap();
    assert!((p.prob(1) - 1.0).abs() < 1e-12);

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let psi = vec![Complex64::new(h, 0.0), Complex64::new(h, 0.0)];
    let p = statevector_qpe(&s, &QpeInput::State(psi), 2).unwrap();
    let want = OutcomeDistribution::from_dense(2, vec![0.0, 0.5, 0.5, 0.0]);
    assert!(p.total_variation(&want) < 1e-12);

    let d = SparseHermitianMatrix::diagonal(&[0.375, 0.5]).unwrap();
    let s = rescale(&d, SpectralBounds { lambda_max: Some(0.5), lambda_min: Some(0.375) }).unwrap();
    let p = statevector_qpe(&s, &QpeInput::EigenIndex(0), 2).unwrap();
    let analytic = outcome_distribution(0.375, &full(2)).unwrap();
    assert!(p.total_variation(&analytic) < 1e-9);
}

#[test]
fn statevector_agrees_on_random_complex_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let eigs = log_uniform_spectrum(5, 6.0, &mut rng);
    let a = hermitian_with_spectrum(&eigs, false, &mut rng);
    let s = rescale(&a, SpectralBounds::default()).unwrap();
    let spec = exact_spectrum(&s).unwrap();
    for m in 1..=5 {
        for (j, &l) in spec.eigenvalues.iter().enumerate() {
            let p = statevector_qpe(&s, &QpeInput::EigenIndex(j), m).unwrap();
            assert!(p.total_variation(&outcome_distribution(l, &full(m)).unwrap()) < 1e-9);
        }
    }
}

#[test]
fn floor_and_nearest_on_three_eighths() {
    let f = outcome_distribution(0.375f64, &QpeConfig::new(2, QpeMode::Floor).unwrap()).unwrap();
    let n = outcome_distribution(0.375f64, &QpeConfig::new(2, QpeMode::Nearest).unwrap()).unwrap();
    assert_eq!(f.support(), &[(1, 1.0)]);
    assert_eq!(n.support(), &[(2, 1.0)]);
}

#[test]
fn spectrum_above_half_is_a_domain_error() {
    assert_eq!(outcome_distribution(0.6f64, &full(3)).unwrap_err().kind(), "DomainError");
}

#[test]
fn floor_sampling_is_biased_low_by_at_most_resolution() {
    let spec = SpectrumInfo::from_eigenvalues(vec![0.5, 0.125 + 1e-4]).unwrap();
    let cfg = QpeConfig::new(10, QpeMode::Floor).unwrap();
    let s = draw_batch(&spec, &cfg, 10_000, 3).unwrap();
    for r in &s.records {
        let l = spec.eigenvalues[r.eigen_index];
        assert!(r.lambda_tilde <= l && l - r.lambda_tilde < 1.0 / 1024.0);
    }
}

proptest! {
    #[test]
    fn distributions_are_normalized(lambda in 1e-6f64..=0.5, m in 1u32..=14) {
        for mode in [QpeMode::Floor, QpeMode::Nearest, QpeMode::FullDistribution] {
            let d = outcome_distribution(lambda, &QpeConfig::new(m, mode).unwrap()).unwrap();
            prop_assert!((d.total() - 1.0).abs() < 1e-10);
            prop_assert!(d.support().iter().all(|&(k, p)| p >= 0.0 && k < 1u64 << m));
        }
    }

    #[test]
    fn full_distribution_concentrates_near_lambda(lambda in 1e-3f64..=0.5, m in 2u32..=12) {
        let d = outcome_distribution(lambda, &full(m)).unwrap();
        let grid = (1u64 << m) as f64;
        let near: f64 = d
            .support()
            .iter()
            .filter(|&&(k, _)| {
                let diff = (k as f64 / grid - lambda).abs();
                diff.min(1.0 - diff) <= 1.0 / grid
            })
            .map(|&(_, p)| p)
            .sum();
        prop_assert!(near >= 8.0 / (std::f64::consts::PI * std::f64::consts::PI) - 1e-12);
    }

    #[test]
    fn dyadic_phases_are_point_masses(m in 1u32..=12, k in 1u64..4096) {
        let k = k % (1 << (m - 1)) + 1;
        let lambda = k as f64 / (1u64 << m) as f64;
        prop_assume!(lambda <= 0.5);
        for mode in [QpeMode::Floor, QpeMode::Nearest, QpeMode::FullDistribution] {
            let d = outcome_distribution(lambda, &QpeConfig::new(m, mode).unwrap()).unwrap();
            prop_assert!((d.prob(k) - 1.0).abs() < 1e-12);
        }
    }
}
