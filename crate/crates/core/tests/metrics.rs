use afmimo_core::eigdist::{AntennaLimit, LinkBudget, SystemDims};
use afmimo_core::metrics::*;
use afmimo_core::specfun::digamma_int;
use afmimo_core::{Error, Wide};

fn dims(ns: usize, nr: usize, nd: usize) -> SystemDims {
    SystemDims::new(ns, nr, nd).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

// (ns, nr, nd, k, SNR dB, BPSK SER), 25-digit quadrature of the exact pdf
const SER: &[(usize, usize, usize, f64, f64, f64)] = &[
    (2, 2, 2, 1.0, 10.0, 0.0017300358840457708),
    (1, 2, 2, 1.0, 10.0, 0.016607988004095486),
    (2, 1, 3, 1.0, 15.0, 0.00042987698057290539),
    (3, 4, 2, 0.5, 5.0, 0.011829676990161215),
];

// (ns, nr, nd, k, SNR dB, capacity in bit/s/Hz)
const CAPACITY: &[(usize, usize, usize, f64, f64, f64)] = &[
    (2, 2, 2, 1.0, 10.0, 1.7997431423363698),
    (3, 1, 4, 1.0, 10.0, 2.1573526144588411),
    (1, 3, 2, 0.5, 20.0, 2.6854901024161453),
];

#[test]
fn single_link_reference() {
    let s: f64 = single_link_ser(2, 2, 5.0, &ModulationParams::bpsk()).unwrap();
    assert!(rel(s, 0.00019712601007229908) < 1e-9, "{s}");
    let c: f64 = single_link_capacity(2, 3, 4.0).unwrap();
    assert!(rel(c, 4.2377775434049349) < 1e-10, "{c}");
}

#[test]
fn ser_matches_reference() {
    let m = ModulationParams::bpsk();
    for &(ns, nr, nd, k, db, want) in SER {
        let b = LinkBudget::from_db(db, k, nr).unwrap();
        let got: f64 = ser_numeric(dims(ns, nr, nd), &b, &m).unwrap();
        assert!(rel(got, want) < 1e-8, "({ns},{nr},{nd}) {got} vs {want}");
    }
}

#[test]
fn capacity_matches_reference() {
    for &(ns, nr, nd, k, db, want) in CAPACITY {
        let b = LinkBudget::from_db(db, k, nr).unwrap();
        let got: f64 = capacity_numeric(dims(ns, nr, nd), &b).unwrap();
        assert!(rel(got, want) < 1e-9, "({ns},{nr},{nd}) {got} vs {want}");
    }
}

#[test]
fn closed_forms_match_quadrature() {
    let m = ModulationParams::new(2.0, 0.5, "qpsk").unwrap();
    for &(ns, nr, nd) in &[(1, 1, 1), (1, 2, 2), (1, 3, 2), (1, 2, 4)] {
        for &db in &[0.0, 10.0, 25.0] {
            let b = LinkBudget::from_db(db, 0.7, nr).unwrap();
            let c: f64 = ser_closed_ns1(dims(ns, nr, nd), &b, &m).unwrap();
            let n: f64 = ser_numeric(dims(ns, nr, nd), &b, &m).unwrap();
            assert!(rel(c, n) < 1e-6, "({ns},{nr},{nd}) {db} dB: {c} vs {n}");
        }
    }
    for &(ns, nr, nd) in &[(2, 1, 1), (2, 1, 3), (3, 2, 1), (4, 1, 4)] {
        for &db in &[0.0, 10.0, 25.0] {
            let b = LinkBudget::from_db(db, 0.7, nr).unwrap();
            let c: f64 = ser_closed_q1(dims(ns, nr, nd), &b, &m).unwrap();
            let n: f64 = ser_numeric(dims(ns, nr, nd), &b, &m).unwrap();
            assert!(rel(c, n) < 1e-6, "({ns},{nr},{nd}) {db} dB: {c} vs {n}");
        }
    }
}

#[test]
fn pdf_and_cdf_routes_agree() {
    let m = ModulationParams::bpsk();
    for &(ns, nr, nd) in &[(2, 2, 2), (3, 2, 4), (1, 3, 1)] {
        let b = LinkBudget::from_db(12.0, 1.0, nr).unwrap();
        let d = dims(ns, nr, nd);
        let s1: f64 = ser_numeric(d, &b, &m).unwrap();
        let s2: f64 = ser_numeric_via_cdf(d, &b, &m).unwrap();
        assert!(rel(s1, s2) < 1e-8, "{s1} vs {s2}");
        let c1: f64 = capacity_numeric(d, &b).unwrap();
        let c2: f64 = capacity_numeric_via_cdf(d, &b).unwrap();
        assert!(rel(c1, c2) < 1e-9, "{c1} vs {c2}");
    }
}

#[test]
fn wide_evaluation_agrees() {
    let m = ModulationParams::bpsk();
    let d = dims(1, 2, 3);
    let b = LinkBudget::from_db(15.0, 1.0, 2).unwrap();
    let f: f64 = ser_closed_ns1(d, &b, &m).unwrap();
    let w: Wide = ser_closed_ns1(d, &b, &m).unwrap();
    assert!(rel(f, w.to_f64_nearest()) < 1e-13);
    let f: f64 = ser_numeric(d, &b, &m).unwrap();
    let s: f32 = ser_numeric(d, &b, &m).unwrap();
    assert!(rel(f, s as f64) < 1e-4);
}

#[test]
fn metrics_are_monotone_in_snr() {
    let m = ModulationParams::bpsk();
    let spec = OutageSpec::new(2.0).unwrap();
    let d = dims(2, 3, 2);
    let mut last = (f64::INFINITY, f64::INFINITY, 0.0);
    for i in 0..8 {
        let b = LinkBudget::from_db(-5.0 + 5.0 * i as f64, 1.0, 3).unwrap();
        let s: f64 = ser_numeric(d, &b, &m).unwrap();
        let o: f64 = outage_exact(d, &b, &spec).unwrap();
        let c: f64 = capacity_numeric(d, &b).unwrap();
        assert!(s < last.0 && o < last.1 && c > last.2);
        assert!(s > 0.0 && s <= m.a1 / 2.0);
        last = (s, o, c);
    }
}

#[test]
fn high_snr_forms_converge() {
    let m = ModulationParams::bpsk();
    let spec = OutageSpec::new(1.0).unwrap();
    for &(ns, nr, nd) in &[(1, 2, 3), (1, 2, 2), (3, 1, 2), (2, 1, 2), (2, 3, 1)] {
        let d = dims(ns, nr, nd);
        let b = LinkBudget::from_db(45.0, 0.5, nr).unwrap();
        let s: f64 = ser_numeric(d, &b, &m).unwrap();
        let h: f64 = ser_highsnr(d, &b, &m).unwrap();
        assert!(rel(h, s) < 0.01, "SER ({ns},{nr},{nd}) {h} vs {s}");
        let o: f64 = outage_exact(d, &b, &spec).unwrap();
        let h: f64 = outage_highsnr(d, &b, &spec).unwrap();
        assert!(rel(h, o) < 0.01, "outage ({ns},{nr},{nd}) {h} vs {o}");
    }
}

#[test]
fn high_snr_needs_a_special_case() {
    let m = ModulationParams::bpsk();
    let b = LinkBudget::from_db(30.0, 1.0, 2).unwrap();
    let r: Result<f64, _> = ser_highsnr(dims(2, 2, 2), &b, &m);
    assert!(matches!(r, Err(Error::Unsupported { .. })));
}

#[test]
fn ostbc_costs_a_fixed_snr_factor() {
    let m = ModulationParams::bpsk();
    for &(ns, nr, nd, rate) in &[(2, 1, 3, 1.0), (4, 1, 2, 0.5), (3, 5, 1, 0.75)] {
        let d = dims(ns, nr, nd);
        let b = LinkBudget::from_db(30.0, 1.0, nr).unwrap();
        let bf: f64 = ser_highsnr(d, &b, &m).unwrap();
        let o: f64 = ser_ostbc_highsnr(d, &b, &m, &OstbcParams::new(rate).unwrap()).unwrap();
        let order = ns.min(nr.max(nd)) as i32;
        assert!(rel(o / bf, (rate * ns as f64).powi(order)) < 1e-12);
    }
    assert!(bf_power_gain_db(1, 1.0).abs() < 1e-15);
    assert!((bf_power_gain_db(2, 1.0) - 3.010299956639812).abs() < 1e-12);
    assert!((bf_power_gain_db(4, 0.5) - 3.010299956639812).abs() < 1e-12);
    let b = LinkBudget::from_db(30.0, 1.0, 1).unwrap();
    let r: Result<f64, _> = ser_ostbc_highsnr(dims(2, 1, 2), &b, &m, &OstbcParams::new(1.0).unwrap());
    assert!(r.is_err());
    assert!(OstbcParams::new(1.5).is_err());
}

#[test]
fn jensen_bounds_capacity() {
    for &(ns, nr, nd) in &[(1, 2, 2), (3, 1, 4), (2, 2, 1)] {
        for &db in &[0.0, 15.0, 30.0] {
            let b = LinkBudget::from_db(db, 1.0, nr).unwrap();
            let c: f64 = capacity_numeric(dims(ns, nr, nd), &b).unwrap();
            let j: f64 = capacity_jensen(dims(ns, nr, nd), &b).unwrap();
            let t: f64 = capacity_taylor(dims(ns, nr, nd), &b).unwrap();
            assert!(j >= c);
            assert!(rel(t, c) < 0.05, "Taylor {t} vs {c}");
        }
    }
    let b = LinkBudget::from_db(10.0, 1.0, 2).unwrap();
    let r: Result<f64, _> = capacity_jensen(dims(2, 2, 2), &b);
    assert!(matches!(r, Err(Error::Dimension { .. })));
}

#[test]
fn high_snr_capacity_offset() {
    let d = dims(3, 1, 4);
    let hs = capacity_highsnr(d, 1.0).unwrap();
    assert_eq!(hs.slope, 0.5);
    let b = LinkBudget::from_db(50.0, 1.0, 1).unwrap();
    let c: f64 = capacity_numeric(d, &b).unwrap();
    assert!((c - hs.capacity_at(b.rho())).abs() < 1e-3);
    // adding source antennas lowers the offset by log2(e)(ψ(ns+1) - ψ(ns))
    let more = capacity_highsnr(dims(4, 1, 4), 1.0).unwrap();
    let want = std::f64::consts::LOG2_E * (digamma_int::<f64>(4).unwrap() - digamma_int::<f64>(3).unwrap());
    assert!((hs.offset - more.offset - want).abs() < 1e-12);
}

#[test]
fn large_antenna_limits_approach_exact() {
    let m = ModulationParams::bpsk();
    let b = LinkBudget::from_db(10.0, 1.0, 2).unwrap();
    let d = dims(2, 2, 32);
    let exact: f64 = ser_numeric(d, &b, &m).unwrap();
    let approx: f64 = ser_large_antenna(d, &b, &m, AntennaLimit::Nd).unwrap();
    assert!(rel(approx, exact) < 0.03);
    let exact: f64 = capacity_numeric(d, &b).unwrap();
    let approx: f64 = capacity_large_antenna(d, &b, AntennaLimit::Nd).unwrap();
    assert!(rel(approx, exact) < 0.01);
    let r: Result<f64, _> = ser_large_antenna(d, &b, &m, AntennaLimit::Ns);
    assert!(r.is_err());
}

#[test]
fn parameters_are_validated() {
    assert!(ModulationParams::new(0.0, 1.0, "x").is_err());
    assert!(ModulationParams::new(1.0, -1.0, "x").is_err());
    assert!(OutageSpec::new(-1.0).is_err());
    assert!(OstbcParams::new(0.0).is_err());
}
