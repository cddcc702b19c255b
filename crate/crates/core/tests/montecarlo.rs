use afmimo_core::eigdist::{LinkBudget, MaxEigDistribution, SystemDims};
use afmimo_core::metrics::{outage_exact, OutageSpec};
use afmimo_core::montecarlo::*;
use num_complex::Complex64;

fn dims(ns: usize, nr: usize, nd: usize) -> SystemDims {
    SystemDims::new(ns, nr, nd).unwrap()
}

#[test]
fn draws_are_reproducible() {
    let d = dims(2, 3, 2);
    let a = sample_max_eigs(d, 0.4, 5000, RngSpec::new(7, 1)).unwrap();
    let b = sample_max_eigs(d, 0.4, 5000, RngSpec::new(7, 1)).unwrap();
    let c = sample_max_eigs(d, 0.4, 5000, RngSpec::new(7, 2)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert_eq!(sample_channel(d, RngSpec::new(3, 0)), sample_channel(d, RngSpec::new(3, 0)));
}

#[test]
fn thread_count_does_not_change_results() {
    let d = dims(2, 2, 3);
    std::env::set_var("AFMIMO_THREADS", "1");
    let one = sample_max_eigs(d, 0.3, 3 * CHUNK + 17, RngSpec::new(11, 4)).unwrap();
    std::env::set_var("AFMIMO_THREADS", "3");
    let three = sample_max_eigs(d, 0.3, 3 * CHUNK + 17, RngSpec::new(11, 4)).unwrap();
    std::env::remove_var("AFMIMO_THREADS");
    assert_eq!(one, three);
}

#[test]
fn gaussian_entries_have_unit_variance() {
    let mut g = RngSpec::new(5, 0).generator();
    let n = 200_000;
    let z: Vec<Complex64> = (0..n).map(|_| complex_gaussian(&mut g)).collect();
    let mean: Complex64 = z.iter().sum::<Complex64>() / n as f64;
    let power = z.iter().map(|v| v.norm_sqr()).sum::<f64>() / n as f64;
    let cross = z.iter().map(|v| v.re * v.im).sum::<f64>() / n as f64;
    let re2 = z.iter().map(|v| v.re * v.re).sum::<f64>() / n as f64;
    let se = 1.0 / (n as f64).sqrt();
    assert!(mean.norm() < 4.0 * se);
    assert!((power - 1.0).abs() < 4.0 * se);
    assert!((re2 - 0.5).abs() < 4.0 * se);
    assert!(cross.abs() < 4.0 * se);
}

#[test]
fn scalar_channel_has_closed_form() {
    let d = dims(1, 1, 1);
    for seed in 0..20 {
        let s = sample_channel(d, RngSpec::new(seed, 0));
        let (g1, g2) = (s.h1[(0, 0)].norm_sqr(), s.h2[(0, 0)].norm_sqr());
        let want = g1 * g2 / (0.7 * g2 + 1.0);
        assert!((max_eig(&s, 0.7).unwrap() - want).abs() < 1e-13 * want.max(1.0));
    }
}

// roots of det(M - λI) for a 3 × 3 Hermitian M by bisection
fn largest_root_3x3(m: &CMat) -> f64 {
    let det = |l: f64| {
        let e = |i: usize, j: usize| m[(i, j)] - if i == j { Complex64::new(l, 0.0) } else { Complex64::new(0.0, 0.0) };
        (e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
            + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0)))
        .re
    };
    let mut hi: f64 = (0..3).map(|i| (0..3).map(|j| m[(i, j)].norm()).sum::<f64>()).fold(0.0, f64::max);
    let mut lo = hi;
    // step down until the sign changes (det(M - λI) < 0 above the top root)
    let step = hi / 2000.0;
    while det(lo) < 0.0 {
        lo -= step;
    }
    hi = lo + step;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if det(mid) < 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn eigenvalue_matches_characteristic_polynomial() {
    let d = dims(3, 2, 4);
    let a = 0.6;
    for seed in 0..10 {
        let s = sample_channel(d, RngSpec::new(seed, 9));
        let nd = s.h2.rows();
        let am = s.h2.mul(&s.h2.adjoint()).scale(a).add(&CMat::identity(nd));
        let l = am.cholesky().unwrap();
        let y = l.forward_solve(&s.h2.mul(&s.h1));
        let m = y.adjoint().mul(&y);
        let want = largest_root_3x3(&m);
        let got = max_eig(&s, a).unwrap();
        assert!((got - want).abs() < 1e-9 * want, "{got} vs {want}");
    }
}

#[test]
fn zero_gain_gives_largest_singular_value() {
    let d = dims(3, 1, 1);
    let s = sample_channel(d, RngSpec::new(1, 1));
    let g = s.h2.mul(&s.h1);
    let want: f64 = (0..3).map(|j| g[(0, j)].norm_sqr()).sum();
    assert!((max_eig(&s, 0.0).unwrap() - want).abs() < 1e-12 * want);
}

#[test]
fn beamformer_is_optimal() {
    let mut g = RngSpec::new(2, 2).generator();
    let b = LinkBudget::from_db(10.0, 1.0, 3).unwrap();
    for _ in 0..50 {
        let s = ChannelSample::draw(dims(3, 3, 2), &mut g);
        let r = beamformer_consistency(&s, &b, 50, &mut g).unwrap();
        assert!(r.residual < 1e-10);
        assert!(r.worst_random_ratio <= 1.0 + 1e-12);
        assert!(r.worst_random_ratio < 1.0);
    }
}

#[test]
fn empirical_cdf_stays_in_band() {
    let d = dims(2, 2, 2);
    let b = LinkBudget::from_db(10.0, 0.5, 2).unwrap();
    let dist = MaxEigDistribution::<f64>::from_budget(d, &b).unwrap();
    let grid: Vec<f64> = (1..=30).map(|i| 0.5 * i as f64).collect();
    let e = estimate_cdf(d, b.a(), &grid, 100_000, RngSpec::new(4, 4)).unwrap();
    assert!((e.band - dkw_band(100_000, 0.01)).abs() < 1e-15);
    assert!(e.brackets(|x| dist.cdf(x).unwrap()));
    assert!(estimate_cdf(d, b.a(), &grid, 10, RngSpec::new(4, 4)).is_err());
}

#[test]
fn outage_matches_exact() {
    let d = dims(3, 1, 2);
    let b = LinkBudget::from_db(20.0, 0.5, 1).unwrap();
    let spec = OutageSpec::new(10.0).unwrap();
    let exact: f64 = outage_exact(d, &b, &spec).unwrap();
    let e = estimate_metric(d, &b, &McMetric::Outage(spec), 200_000, RngSpec::new(8, 0)).unwrap();
    assert!((e.value - exact).abs() < 4.0 * e.stderr, "{} ± {} vs {exact}", e.value, e.stderr);
}

#[test]
fn welford_mean() {
    let e = mean_estimate([1.0, 2.0, 3.0, 4.0].into_iter());
    assert_eq!(e.value, 2.5);
    assert!((e.stderr - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
    assert_eq!(e.n_samples, 4);
}
