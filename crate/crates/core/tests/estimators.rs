use wbfa_core::dwt::{make_filter, Boundary, WaveletFamily, WaveletFilter};
use wbfa_core::fluct::{self, FluctuationMatrix, QGrid, ScalePolicy, ScalingResult};
use wbfa_core::ingest::{self, Normalization, Profile, ReturnSeries};
use wbfa_core::{synth, Error};

fn db6() -> WaveletFilter {
    make_filter(WaveletFamily::Daubechies, 6).unwrap()
}

fn returns(x: &[f64]) -> ReturnSeries {
    ReturnSeries::from_increments(x.to_vec(), Normalization::SeriesStd).unwrap()
}

fn prof(x: &[f64]) -> Profile {
    ingest::profile(&returns(x), true)
}

fn wbfa_fit(p: &Profile, q: &QGrid) -> ScalingResult {
    let m = fluct::wbfa(p, &db6(), q, &ScalePolicy::default(), Boundary::Periodic).unwrap();
    fluct::fit_scaling(&m, None).unwrap()
}

fn mfdfa_fit(p: &Profile, q: &QGrid) -> ScalingResult {
    let m = fluct::mfdfa(p, 2, q, &ScalePolicy::default()).unwrap();
    fluct::fit_scaling(&m, None).unwrap()
}

fn q2() -> QGrid {
    QGrid::new(vec![2.0], false).unwrap()
}

#[test]
fn white_noise_hurst_is_one_half() {
    let x = synth::gaussian_white(8192, 11).unwrap();
    let p = prof(x.values());
    let w = wbfa_fit(&p, &q2()).hurst;
    let m = mfdfa_fit(&p, &q2()).hurst;
    assert!((w - 0.5).abs() <= 0.05, "wbfa {w}");
    assert!((m - 0.5).abs() <= 0.05, "mfdfa {m}");
}

#[test]
fn fgn_targets_recovered() {
    for (h, tol) in [(0.7, 0.07), (0.3, 0.07)] {
        let x = synth::fgn(8192, h, 4).unwrap();
        let p = prof(x.values());
        let w = wbfa_fit(&p, &q2()).hurst;
        let m = mfdfa_fit(&p, &q2()).hurst;
        assert!((w - h).abs() <= tol, "H={h}: wbfa {w}");
        assert!((m - h).abs() <= tol, "H={h}: mfdfa {m}");
    }
}

#[test]
fn exact_power_law_matrix() {
    let scales = vec![8, 16, 32, 64, 128, 256];
    let q = QGrid::default();
    let fq = q.values().iter().map(|_| scales.iter().map(|&s| (s as f64).sqrt()).collect()).collect();
    let m = FluctuationMatrix {
        segment_counts: vec![10; scales.len()],
        excluded: vec![0; scales.len()],
        scales,
        q,
        fq,
    };
    let r = fluct::fit_scaling(&m, None).unwrap();
    for e in &r.hq {
        assert!((e.exponent - 0.5).abs() < 1e-12);
        assert!(e.stderr < 1e-12);
        assert!((e.r2 - 1.0).abs() < 1e-12);
    }
    assert!(r.multifractal_width < 1e-12);
}

#[test]
fn global_quadratic_is_degenerate_for_quadratic_mfdfa() {
    let p = Profile::from_values((0..1024).map(|t| 0.3 * (t * t) as f64 - 2.0 * t as f64 + 5.0).collect(), false);
    let err = fluct::mfdfa(&p, 2, &QGrid::default(), &ScalePolicy::default()).unwrap_err();
    assert!(matches!(err, Error::DegenerateSegments { .. }), "{err:?}");
}

#[test]
fn binomial_cascade_matches_closed_form() {
    let a = 0.75;
    let x = synth::binomial_cascade(1 << 13, a).unwrap();
    let r = ReturnSeries::from_increments(x.values().to_vec(), Normalization::None).unwrap();
    let p = ingest::profile(&r, true);
    let q = QGrid::new(vec![-4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0], true).unwrap();
    let fit = wbfa_fit(&p, &q);
    for e in &fit.hq {
        let theory = synth::cascade_hq(a, e.q);
        assert!((e.exponent - theory).abs() <= 0.1, "q={}: {} vs {theory}", e.q, e.exponent);
    }
    assert!(fit.multifractal_width > 0.5, "width {}", fit.multifractal_width);
}

#[test]
fn monofractal_exponents_independent_of_q() {
    let x = synth::fgn(8192, 0.6, 21).unwrap();
    let p = prof(x.values());
    let fit = wbfa_fit(&p, &QGrid::range(-4.0, 4.0, 1.0, true).unwrap());
    let h2 = fit.hurst;
    let se2 = fit.hq.iter().find(|e| e.q == 2.0).unwrap().stderr;
    for e in &fit.hq {
        // Standard error of the difference h(q) - h(2).
        let tol = 2.0 * e.stderr.hypot(se2);
        assert!((e.exponent - h2).abs() <= tol, "q={} h={} h2={h2}", e.q, e.exponent);
    }
}

#[test]
fn fluctuation_function_monotone_in_q() {
    let x = synth::fgn(4096, 0.4, 2).unwrap();
    let p = prof(x.values());
    let q = QGrid::default();
    let mats = [
        fluct::wbfa(&p, &db6(), &q, &ScalePolicy::default(), Boundary::Periodic).unwrap(),
        fluct::mfdfa(&p, 2, &q, &ScalePolicy::default()).unwrap(),
    ];
    for m in &mats {
        for si in 0..m.scales.len() {
            for qi in 1..q.len() {
                assert!(m.fq[qi][si] >= m.fq[qi - 1][si] * (1.0 - 1e-12));
            }
        }
    }
}

#[test]
fn exponents_invariant_under_rescaling() {
    let x = synth::fgn(4096, 0.65, 9).unwrap();
    let base = ReturnSeries::from_increments(x.values().to_vec(), Normalization::None).unwrap();
    let scaled = base.scaled(42.0);
    let q = QGrid::default();
    for (pa, pb) in [(ingest::profile(&base, true), ingest::profile(&scaled, true))] {
        let (wa, wb) = (wbfa_fit(&pa, &q), wbfa_fit(&pb, &q));
        let (ma, mb) = (mfdfa_fit(&pa, &q), mfdfa_fit(&pb, &q));
        for (a, b) in wa.hq.iter().zip(&wb.hq).chain(ma.hq.iter().zip(&mb.hq)) {
            assert!((a.exponent - b.exponent).abs() < 1e-9);
        }
    }
}

#[test]
fn shuffling_destroys_persistence() {
    let x = synth::fgn(8192, 0.8, 31).unwrap();
    let r = returns(x.values());
    let original = wbfa_fit(&ingest::profile(&r, true), &q2()).hurst;
    assert!(original > 0.7);
    let seeds = 10;
    let (mut w, mut m) = (0.0, 0.0);
    for seed in 0..seeds {
        let p = ingest::profile(&ingest::shuffle(&r, seed), true);
        w += wbfa_fit(&p, &q2()).hurst;
        m += mfdfa_fit(&p, &q2()).hurst;
    }
    let (w, m) = (w / seeds as f64, m / seeds as f64);
    assert!((0.45..=0.55).contains(&w), "wbfa shuffled {w}");
    assert!((0.45..=0.55).contains(&m), "mfdfa shuffled {m}");
}

#[test]
fn too_short_for_filter() {
    let p = prof(&synth::gaussian_white(64, 0).unwrap().values()[..16]);
    assert!(fluct::wbfa(&p, &db6(), &q2(), &ScalePolicy::default(), Boundary::Periodic).is_err());
}
