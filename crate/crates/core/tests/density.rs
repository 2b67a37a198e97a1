use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, StandardNormal};
use wbfa_core::dist::{self, DensityComparison};

fn gaussian(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
}

fn laplace(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let exp = Exp::new(1.0).unwrap();
    (0..n)
        .map(|_| {
            let e: f64 = exp.sample(&mut rng);
            if rng.random::<bool>() { e } else { -e }
        })
        .collect()
}

fn integral(d: &DensityComparison) -> f64 {
    d.bin_width * d.empirical_density.iter().sum::<f64>()
}

#[test]
fn gaussian_baseline() {
    let d = dist::density_compare_values(&gaussian(100_000, 1), 60).unwrap();
    assert!(d.excess_kurtosis.abs() <= 0.1, "kurtosis {}", d.excess_kurtosis);
    assert!((0.7..=1.4).contains(&d.tail_ratio), "tail ratio {}", d.tail_ratio);
    assert!((integral(&d) - 1.0).abs() < 1e-6);
}

#[test]
fn laplace_excess_kurtosis_three() {
    let d = dist::density_compare_values(&laplace(100_000, 2), 80).unwrap();
    assert!((d.excess_kurtosis - 3.0).abs() <= 0.3, "kurtosis {}", d.excess_kurtosis);
    assert!(d.tail_ratio > 2.0);
    assert!(d.empirical_peak > d.gaussian_peak);
}

#[test]
fn affine_rescaling_leaves_shape_metrics() {
    let x = laplace(5000, 3);
    let y: Vec<f64> = x.iter().map(|v| 3.5 * v + 0.2).collect();
    let a = dist::density_compare_values(&x, 40).unwrap();
    let b = dist::density_compare_values(&y, 40).unwrap();
    assert!((a.excess_kurtosis - b.excess_kurtosis).abs() < 1e-9);
    assert!((a.tail_ratio - b.tail_ratio).abs() < 1e-9);
    assert!((integral(&b) - 1.0).abs() < 1e-6);
}

#[test]
fn rejects_small_inputs() {
    assert!(dist::density_compare_values(&gaussian(99, 0), 20).is_err());
    assert!(dist::density_compare_values(&gaussian(500, 0), 9).is_err());
}
