use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wbfa_core::dwt::{
    decompose, extract_fluctuations, make_filter, reconstruct, Boundary, WaveletFamily, WaveletFilter,
};
use wbfa_core::ingest::Profile;

fn filters() -> Vec<WaveletFilter> {
    vec![
        make_filter(WaveletFamily::Haar, 2).unwrap(),
        make_filter(WaveletFamily::Daubechies, 4).unwrap(),
        make_filter(WaveletFamily::Daubechies, 6).unwrap(),
    ]
}

const LENGTHS: [usize; 6] = [256, 1024, 1000, 777, 2903, 4096];

fn noise(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn max_levels(n: usize, filter: &WaveletFilter) -> usize {
    let mut levels = 0;
    let mut len = n;
    while (1usize << (levels + 1)) <= n && len.div_ceil(2) >= filter.len() {
        len = len.div_ceil(2);
        levels += 1;
    }
    levels.min(8)
}

#[test]
fn perfect_reconstruction_all_lengths() {
    for f in filters() {
        for n in LENGTHS {
            for boundary in [Boundary::Periodic, Boundary::Symmetric] {
                let x = noise(n, n as u64);
                let d = decompose(&x, &f, max_levels(n, &f), boundary).unwrap();
                let y = reconstruct(&d, None).unwrap();
                let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                for (a, b) in x.iter().zip(&y) {
                    assert!((a - b).abs() <= 1e-9 * scale, "{f} n={n} {boundary:?}");
                }
            }
        }
    }
}

#[test]
fn parseval_periodic() {
    for f in filters() {
        for n in LENGTHS {
            let x = noise(n, 7 * n as u64);
            let d = decompose(&x, &f, max_levels(n, &f), Boundary::Periodic).unwrap();
            let energy: f64 = x.iter().map(|v| v * v).sum();
            let coeffs: f64 = d.approx().iter().chain(d.details().iter().flatten()).map(|v| v * v).sum();
            assert!(((energy - coeffs) / energy).abs() < 1e-8, "{f} n={n}: {energy} vs {coeffs}");
        }
    }
}

/// Detail coefficient `k` at `level` depends on original samples
/// `[k 2^level, k 2^level + (taps - 1)(2^level - 1)]`.
fn interior(k: usize, level: usize, taps: usize, n: usize) -> bool {
    k * (1 << level) + (taps - 1) * ((1 << level) - 1) < n
}

#[test]
fn vanishing_moments_annihilate_polynomials() {
    for f in filters() {
        let moments = f.vanishing_moments();
        for n in LENGTHS {
            // Degree moments - 1 on normalized time keeps values O(1).
            let x: Vec<f64> = (0..n)
                .map(|t| {
                    let u = t as f64 / n as f64;
                    (0..moments).map(|p| (p as f64 + 1.0) * u.powi(p as i32)).sum()
                })
                .collect();
            let levels = max_levels(n, &f).min(5);
            let d = decompose(&x, &f, levels, Boundary::Periodic).unwrap();
            let mut checked = 0;
            for level in 1..=levels {
                for (k, v) in d.detail(level).iter().enumerate() {
                    if interior(k, level, f.len(), n) {
                        assert!(v.abs() < 1e-7, "{f} n={n} level={level} k={k}: {v:e}");
                        checked += 1;
                    }
                }
            }
            assert!(checked > n / 4);
        }
    }
}

#[test]
fn fluctuations_commute_with_reversal() {
    for f in filters() {
        for n in [512, 2903] {
            let mut acc = 0.0;
            let values: Vec<f64> = noise(n, 3)
                .into_iter()
                .map(|v| {
                    acc += v;
                    acc
                })
                .collect();
            let reversed: Vec<f64> = values.iter().rev().copied().collect();
            let a = extract_fluctuations(&Profile::from_values(values, false), &f, 5, Boundary::Periodic).unwrap();
            let b = extract_fluctuations(&Profile::from_values(reversed, false), &f, 5, Boundary::Periodic).unwrap();
            for (la, lb) in a.levels.iter().zip(&b.levels) {
                for i in 0..n {
                    assert!((la.fluctuation[i] - lb.fluctuation[n - 1 - i]).abs() < 1e-10);
                }
            }
        }
    }
}

#[test]
fn trend_plus_fluctuation_is_profile() {
    let f = make_filter(WaveletFamily::Daubechies, 6).unwrap();
    let values = noise(2903, 11);
    let set = extract_fluctuations(&Profile::from_values(values.clone(), false), &f, 7, Boundary::Periodic).unwrap();
    let mut previous = 0;
    for level in &set.levels {
        assert!(level.scale > previous);
        previous = level.scale;
        for i in 0..values.len() {
            let sum = level.trend[i] + level.fluctuation[i];
            assert!((sum - values[i]).abs() <= 1e-9 * values[i].abs().max(1.0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reconstruction_round_trip(
        x in prop::collection::vec(-100f64..100.0, 12..400),
        order in prop::sample::select(vec![2usize, 4, 6, 8, 10]),
        symmetric in any::<bool>(),
    ) {
        let f = make_filter(WaveletFamily::Daubechies, order).unwrap();
        let boundary = if symmetric { Boundary::Symmetric } else { Boundary::Periodic };
        let levels = max_levels(x.len(), &f).max(1);
        prop_assume!(x.len() >= f.len());
        let d = decompose(&x, &f, levels, boundary).unwrap();
        let y = reconstruct(&d, None).unwrap();
        prop_assert_eq!(y.len(), x.len());
        for (a, b) in x.iter().zip(&y) {
            prop_assert!((a - b).abs() <= 1e-9 * 100.0);
        }
    }
}
