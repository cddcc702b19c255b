//! Agreement suite between the analytical formulas, numerical integration
//! and the channel simulator. Shared by the command-line `validate` command
//! and the acceptance tests.

use std::time::Instant;

use crate::eigdist::{
    cdf_ns1, cdf_q1, moment_ns1, moment_q1, pdf_ns1, pdf_q1, pdf_q1_single_sum, AntennaLimit, LinkBudget,
    MaxEigDistribution, SystemDims,
};
use crate::error::{Error, Result};
use crate::metrics::{
    bf_power_gain_db, capacity_highsnr, capacity_jensen, capacity_large_antenna, capacity_numeric, capacity_taylor,
    outage_exact, ser_closed_ns1, ser_closed_q1, ser_highsnr, ser_large_antenna, ser_numeric, ser_ostbc_highsnr,
    ModulationParams, OstbcParams, OutageSpec,
};
use crate::montecarlo::{
    beamformer_consistency, estimate_cdf, estimate_metric, mean_estimate, sample_max_eigs, ChannelSample, McMetric,
    RngSpec,
};
use crate::quad::{integrate_pieces, QuadOptions};
use crate::specfun::{gauss_q, verify_integral_identity};

/// Pinned tolerances.
pub mod tol {
    pub const DKW_DELTA: f64 = 0.01;
    pub const CDF_RUNTIME_S: f64 = 120.0;
    pub const NORMALIZATION: f64 = 1e-6;
    pub const DERIVATIVE_REL: f64 = 1e-4;
    pub const COROLLARY_REL: f64 = 1e-10;
    pub const CALCULUS_RUNTIME_S: f64 = 60.0;
    pub const MOMENT_REL: f64 = 1e-5;
    pub const IDENTITY_RESIDUAL: f64 = 1e-8;
    pub const SLOPE_ABS: f64 = 0.1;
    pub const SLOPE_RUNTIME_S: f64 = 60.0;
    pub const OSTBC_GAP_DB: f64 = 3.01;
    pub const OSTBC_GAP_ABS: f64 = 0.1;
    pub const SER_CLOSED_REL: f64 = 1e-6;
    pub const MC_STDERRS: f64 = 3.0;
    pub const JENSEN_SLACK: f64 = 1e-9;
    pub const TAYLOR_REL: f64 = 0.02;
    pub const HIGHSNR_CAPACITY_ABS: f64 = 0.05;
    pub const CAPACITY_SLOPE: f64 = 0.5;
    pub const CAPACITY_SLOPE_ABS: f64 = 0.01;
    pub const LARGE_SER_REL: f64 = 0.05;
    pub const LARGE_CAPACITY_REL: f64 = 0.03;
    pub const LARGE_RUNTIME_S: f64 = 300.0;
    pub const BEAMFORMER_RESIDUAL: f64 = 1e-8;
    pub const BEAMFORMER_DOMINANCE: f64 = 1e-10;
}

/// Sample sizes and seed for the stochastic criteria.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidateOptions {
    pub seed: u64,
    pub cdf_samples: usize,
    pub ser_samples: usize,
    pub large_samples: usize,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions {
            seed: 1,
            cdf_samples: 1_000_000,
            ser_samples: 1_000_000,
            large_samples: 1_000_000,
        }
    }
}

/// Result of one criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} [{}] {} ({:.1} s): {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.seconds,
            self.detail
        )
    }
}

pub const TITLES: [&str; 10] = [
    "cdf inside the DKW band of the simulator",
    "normalization, derivative and special-case agreement",
    "closed-form moments against quadrature",
    "integral identity for K and U",
    "outage diversity slopes",
    "beamforming against OSTBC gap",
    "closed-form SER against quadrature and simulator",
    "capacity bounds and high-SNR behaviour",
    "large-antenna approximations against the simulator",
    "beamformer algebra",
];

/// Runs criterion `id` (1 to 10).
pub fn run_criterion(id: usize, opts: &ValidateOptions) -> CriterionReport {
    let title = TITLES.get(id.wrapping_sub(1)).copied().unwrap_or("unknown");
    let start = Instant::now();
    let outcome = match id {
        1 => criterion_cdf(opts),
        2 => criterion_calculus(),
        3 => criterion_moments(),
        4 => criterion_identity(),
        5 => criterion_slopes(),
        6 => criterion_ostbc(),
        7 => criterion_ser(opts),
        8 => criterion_capacity(),
        9 => criterion_large(opts),
        10 => criterion_beamformer(opts),
        _ => Err(Error::InvalidParameter(format!("no criterion {id}"))),
    };
    let seconds = start.elapsed().as_secs_f64();
    let limit = match id {
        1 => tol::CDF_RUNTIME_S,
        2 => tol::CALCULUS_RUNTIME_S,
        5 => tol::SLOPE_RUNTIME_S,
        9 => tol::LARGE_RUNTIME_S,
        _ => f64::INFINITY,
    };
    let (passed, mut detail) = match outcome {
        Ok((ok, d)) => (ok, d),
        Err(e) => (false, format!("error: {e}")),
    };
    let in_time = seconds <= limit;
    if !in_time {
        detail.push_str(&format!("; runtime above {limit} s"));
    }
    CriterionReport {
        id,
        title,
        passed: passed && in_time,
        detail,
        seconds,
    }
}

pub fn run_all(opts: &ValidateOptions) -> Vec<CriterionReport> {
    (1..=10).map(|id| run_criterion(id, opts)).collect()
}

type Outcome = Result<(bool, String)>;

fn dims(ns: usize, nr: usize, nd: usize) -> SystemDims {
    SystemDims::new(ns, nr, nd).expect("positive antenna counts")
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// `x` with `cdf(x) = u`, by bisection.
pub fn quantile(dist: &MaxEigDistribution<f64>, u: f64) -> Result<f64> {
    let mut hi = 1.0;
    while dist.cdf(hi)? < u {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Numerical {
                op: "quantile",
                detail: format!("no bracket for {u}"),
            });
        }
    }
    let mut lo = 0.0;
    for _ in 0..45 {
        let mid = 0.5 * (lo + hi);
        if dist.cdf(mid)? < u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn criterion_cdf(opts: &ValidateOptions) -> Outcome {
    let mut worst_ratio: f64 = 0.0;
    let mut ok = true;
    let mut stream = 0;
    for &(ns, nr, nd) in &[(2, 2, 2), (2, 3, 2), (1, 3, 3), (3, 1, 2)] {
        for &k in &[0.5, 1.0] {
            let d = dims(ns, nr, nd);
            let b = LinkBudget::from_db(10.0, k, nr)?;
            let dist = MaxEigDistribution::<f64>::from_budget(d, &b)?;
            let top = quantile(&dist, 0.999)?;
            let grid: Vec<f64> = (1..=40).map(|i| top * i as f64 / 40.0).collect();
            let e = estimate_cdf(d, b.a(), &grid, opts.cdf_samples, RngSpec::new(opts.seed, stream))?;
            stream += 1;
            for (&x, &v) in grid.iter().zip(&e.values) {
                let gap = (dist.cdf(x)? - v).abs();
                worst_ratio = worst_ratio.max(gap / e.band);
                ok &= gap <= e.band;
            }
        }
    }
    Ok((ok, format!("largest gap / DKW half-width = {worst_ratio:.3} over 8 configurations")))
}

fn criterion_calculus() -> Outcome {
    let opts = QuadOptions::with_rel(1e-10).with_abs(1e-12);
    let (mut worst_norm, mut worst_der, mut worst_cor): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for ns in 1..=4 {
        for nr in 1..=4 {
            for nd in 1..=4 {
                let d = dims(ns, nr, nd);
                let b = LinkBudget::from_db(10.0, 1.0, nr)?;
                let a = b.a();
                let dist = MaxEigDistribution::<f64>::from_budget(d, &b)?;
                let xs = [quantile(&dist, 0.1)?, quantile(&dist, 0.5)?, quantile(&dist, 0.9)?];
                let cut = quantile(&dist, 1.0 - 1e-12)?;
                let pts = [0.0, xs[0], xs[1], xs[2], cut];
                let total = integrate_pieces(|x| if x > 0.0 { dist.pdf(x) } else { Ok(0.0) }, &pts, &opts)?.value;
                worst_norm = worst_norm.max((total - 1.0).abs());
                for &x in &xs {
                    let h = 1e-4 * x;
                    let fd = (dist.cdf(x + h)? - dist.cdf(x - h)?) / (2.0 * h);
                    let p = dist.pdf(x)?;
                    worst_der = worst_der.max(rel(fd, p));
                    if ns == 1 {
                        worst_cor = worst_cor.max(rel(cdf_ns1(d, a, x)?, dist.cdf(x)?));
                        worst_cor = worst_cor.max(rel(pdf_ns1(d, a, x)?, p));
                    }
                    if d.q() == 1 {
                        worst_cor = worst_cor.max(rel(cdf_q1(d, a, x)?, dist.cdf(x)?));
                        worst_cor = worst_cor.max(rel(pdf_q1(d, a, x)?, p));
                        worst_cor = worst_cor.max(rel(pdf_q1_single_sum(d, a, x)?, p));
                    }
                }
            }
        }
    }
    let ok = worst_norm <= tol::NORMALIZATION && worst_der <= tol::DERIVATIVE_REL && worst_cor <= tol::COROLLARY_REL;
    Ok((
        ok,
        format!(
            "64 configurations: |∫pdf - 1| ≤ {worst_norm:.2e}, derivative gap ≤ {worst_der:.2e}, special-case gap ≤ {worst_cor:.2e}"
        ),
    ))
}

fn criterion_moments() -> Outcome {
    let opts = QuadOptions::with_rel(1e-11).with_abs(0.0);
    let mut worst: f64 = 0.0;
    for &(ns, nr, nd) in &[(1, 2, 2), (1, 2, 3), (1, 3, 2), (2, 1, 3), (3, 1, 2), (2, 2, 1)] {
        let d = dims(ns, nr, nd);
        let b = LinkBudget::from_db(10.0, 1.0, nr)?;
        let a = b.a();
        let dist = MaxEigDistribution::<f64>::from_budget(d, &b)?;
        let cut = quantile(&dist, 1.0 - 1e-14)? * 1.5;
        let mid = quantile(&dist, 0.5)?;
        for m in 1..=3u32 {
            let closed = if ns == 1 { moment_ns1(d, a, m)? } else { moment_q1(d, a, m)? };
            let numeric = integrate_pieces(
                |x| if x > 0.0 { Ok(x.powi(m as i32) * dist.pdf(x)?) } else { Ok(0.0) },
                &[0.0, mid, 4.0 * mid, cut],
                &opts,
            )?
            .value;
            worst = worst.max(rel(closed, numeric));
        }
    }
    Ok((worst <= tol::MOMENT_REL, format!("largest relative gap {worst:.2e} over 6 configurations, m = 1..3")))
}

/// `(μ, v, β, m)` points for the integral identity.
pub const IDENTITY_GRID: [(f64, i32, f64, f64); 10] = [
    (1.0, 0, 1.0, 1.0),
    (2.0, 1, 0.5, 2.0),
    (0.5, 2, 1.0, 1.0),
    (-0.5, 0, 1.0, 2.0),
    (0.0, 1, 2.0, 1.5),
    (3.0, 2, 0.7, 0.9),
    (1.5, -1, 1.2, 2.5),
    (4.0, 4, 3.0, 1.0),
    (0.25, 1, 0.3, 0.4),
    (2.5, -3, 2.0, 3.0),
];

fn criterion_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    for &(mu, v, beta, m) in &IDENTITY_GRID {
        worst = worst.max(verify_integral_identity(mu, v, beta, m)?);
    }
    Ok((worst <= tol::IDENTITY_RESIDUAL, format!("largest residual {worst:.2e} over 10 points")))
}

/// Log-log outage slope between `lo_db` and `hi_db`.
pub fn outage_slope(d: SystemDims, k: f64, gamma_th: f64, lo_db: f64, hi_db: f64) -> Result<f64> {
    let spec = OutageSpec::new(gamma_th)?;
    let lo: f64 = outage_exact(d, &LinkBudget::from_db(lo_db, k, d.nr)?, &spec)?;
    let hi: f64 = outage_exact(d, &LinkBudget::from_db(hi_db, k, d.nr)?, &spec)?;
    Ok(-(hi.log10() - lo.log10()) / ((hi_db - lo_db) / 10.0))
}

fn criterion_slopes() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for &((ns, nr, nd), order) in &[((3, 1, 2), 2.0), ((3, 1, 3), 3.0), ((3, 1, 4), 3.0), ((1, 2, 2), 2.0)] {
        let s = outage_slope(dims(ns, nr, nd), 0.5, 1.0, 35.0, 40.0)?;
        let good = (s - order).abs() <= tol::SLOPE_ABS;
        ok &= good;
        parts.push(format!("({ns},{nr},{nd}) {s:.3} vs {order}{}", if good { "" } else { " ✗" }));
    }
    Ok((ok, parts.join(", ")))
}

/// SNR in dB at which `f` (decreasing in SNR) crosses `target`.
pub fn snr_at(f: impl Fn(f64) -> Result<f64>, target: f64, lo_db: f64, hi_db: f64) -> Result<f64> {
    let (mut lo, mut hi) = (lo_db, hi_db);
    if f(lo)? < target || f(hi)? > target {
        return Err(Error::Numerical {
            op: "snr_at",
            detail: format!("target {target} not bracketed on [{lo_db}, {hi_db}] dB"),
        });
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn criterion_ostbc() -> Outcome {
    let d = dims(2, 1, 3);
    let m = ModulationParams::bpsk();
    let code = OstbcParams::new(1.0)?;
    let bf = snr_at(|db| ser_highsnr(d, &LinkBudget::from_db(db, 1.0, d.nr)?, &m), 1e-4, -20.0, 80.0)?;
    let ostbc = snr_at(
        |db| ser_ostbc_highsnr(d, &LinkBudget::from_db(db, 1.0, d.nr)?, &m, &code),
        1e-4,
        -20.0,
        80.0,
    )?;
    let gap = ostbc - bf;
    let ok = (gap - tol::OSTBC_GAP_DB).abs() <= tol::OSTBC_GAP_ABS;
    Ok((
        ok,
        format!("gap at SER 1e-4 = {gap:.4} dB (10 log10(R ns) = {:.4} dB)", bf_power_gain_db(2, 1.0)),
    ))
}

fn criterion_ser(opts: &ValidateOptions) -> Outcome {
    let m = ModulationParams::bpsk();
    let mut worst: f64 = 0.0;
    let mut worst_z: f64 = 0.0;
    let mut stream = 100;
    for &(ns, nr, nd) in &[(1, 2, 2), (1, 3, 2), (2, 1, 3), (3, 1, 2)] {
        let d = dims(ns, nr, nd);
        for &db in &[0.0, 10.0, 20.0] {
            let b = LinkBudget::from_db(db, 1.0, nr)?;
            let closed: f64 = if ns == 1 { ser_closed_ns1(d, &b, &m)? } else { ser_closed_q1(d, &b, &m)? };
            let numeric: f64 = ser_numeric(d, &b, &m)?;
            worst = worst.max(rel(closed, numeric));
            if db == 10.0 {
                let e = estimate_metric(d, &b, &McMetric::Ser(m.clone()), opts.ser_samples, RngSpec::new(opts.seed, stream))?;
                stream += 1;
                worst_z = worst_z.max((closed - e.value).abs() / e.stderr);
            }
        }
    }
    let ok = worst <= tol::SER_CLOSED_REL && worst_z <= tol::MC_STDERRS;
    Ok((
        ok,
        format!("closed vs quadrature ≤ {worst:.2e} relative; closed vs simulator ≤ {worst_z:.2} stderr"),
    ))
}

fn criterion_capacity() -> Outcome {
    let mut min_slack = f64::INFINITY;
    let mut worst_taylor: f64 = 0.0;
    for &(ns, nr, nd) in &[(3, 1, 4), (10, 1, 4), (1, 2, 3), (2, 1, 2), (1, 3, 3)] {
        let d = dims(ns, nr, nd);
        for i in 0..=6 {
            let db = 5.0 * i as f64;
            let b = LinkBudget::from_db(db, 1.0, nr)?;
            let c: f64 = capacity_numeric(d, &b)?;
            let up: f64 = capacity_jensen(d, &b)?;
            min_slack = min_slack.min(up - c);
            if nr == 1 && nd == 4 && db <= 25.0 {
                let t: f64 = capacity_taylor(d, &b)?;
                worst_taylor = worst_taylor.max(rel(t, c));
            }
        }
    }
    let d = dims(3, 1, 4);
    let hs = capacity_highsnr(d, 1.0)?;
    let b40 = LinkBudget::from_db(40.0, 1.0, 1)?;
    let b30 = LinkBudget::from_db(30.0, 1.0, 1)?;
    let c40: f64 = capacity_numeric(d, &b40)?;
    let c30: f64 = capacity_numeric(d, &b30)?;
    let hs_gap = (c40 - hs.capacity_at(b40.rho())).abs();
    let slope = (c40 - c30) / (b40.rho().log2() - b30.rho().log2());
    let ok = min_slack >= -tol::JENSEN_SLACK
        && worst_taylor <= tol::TAYLOR_REL
        && hs_gap <= tol::HIGHSNR_CAPACITY_ABS
        && (slope - tol::CAPACITY_SLOPE).abs() <= tol::CAPACITY_SLOPE_ABS;
    Ok((
        ok,
        format!(
            "min(C_up - C) = {min_slack:.3e}, Taylor gap ≤ {:.2}%, |C(40 dB) - high-SNR| = {hs_gap:.2e}, slope = {slope:.4}",
            100.0 * worst_taylor
        ),
    ))
}

fn criterion_large(opts: &ValidateOptions) -> Outcome {
    let m = ModulationParams::bpsk();
    let mut ok = true;
    let mut parts = Vec::new();
    let cases: [((usize, usize, usize), AntennaLimit, bool); 3] = [
        ((2, 2, 32), AntennaLimit::Nd, true),
        ((2, 32, 2), AntennaLimit::Nr, true),
        ((32, 2, 2), AntennaLimit::Ns, false),
    ];
    for (i, &((ns, nr, nd), which, with_ser)) in cases.iter().enumerate() {
        let d = dims(ns, nr, nd);
        let b = LinkBudget::from_db(10.0, 1.0, nr)?;
        let c = b.a() * b.rho();
        let draws = sample_max_eigs(d, b.a(), opts.large_samples, RngSpec::new(opts.seed, 200 + i as u64))?;
        let cap_mc = mean_estimate(draws.iter().map(|&l| 0.5 * (c * l).ln_1p() * std::f64::consts::LOG2_E));
        let cap: f64 = capacity_large_antenna(d, &b, which)?;
        let gap = rel(cap, cap_mc.value);
        let good = gap <= tol::LARGE_CAPACITY_REL;
        ok &= good;
        parts.push(format!("({ns},{nr},{nd}) capacity {:.2}%{}", 100.0 * gap, if good { "" } else { " ✗" }));
        if with_ser {
            let ser_mc = mean_estimate(draws.iter().map(|&l| m.a1 * gauss_q((2.0 * m.a2 * c * l).sqrt())));
            let ser: f64 = ser_large_antenna(d, &b, &m, which)?;
            let gap = rel(ser, ser_mc.value);
            let good = gap <= tol::LARGE_SER_REL;
            ok &= good;
            parts.push(format!(
                "({ns},{nr},{nd}) SER {:.2}% (simulator stderr {:.2}%){}",
                100.0 * gap,
                100.0 * ser_mc.stderr / ser_mc.value,
                if good { "" } else { " ✗" }
            ));
        }
    }
    Ok((ok, parts.join(", ")))
}

fn criterion_beamformer(opts: &ValidateOptions) -> Outcome {
    let mut worst_res: f64 = 0.0;
    let mut worst_ratio: f64 = 0.0;
    let configs = [(1, 1, 1), (2, 2, 2), (3, 2, 4), (4, 3, 2), (2, 5, 3)];
    for (i, &(ns, nr, nd)) in configs.iter().enumerate() {
        let d = dims(ns, nr, nd);
        let b = LinkBudget::from_db(10.0, 1.0, nr)?;
        let mut g = RngSpec::new(opts.seed, 300 + i as u64).generator();
        for _ in 0..200 {
            let s = ChannelSample::draw(d, &mut g);
            let r = beamformer_consistency(&s, &b, 100, &mut g)?;
            worst_res = worst_res.max(r.residual);
            worst_ratio = worst_ratio.max(r.worst_random_ratio);
        }
    }
    let ok = worst_res <= tol::BEAMFORMER_RESIDUAL && worst_ratio <= 1.0 + tol::BEAMFORMER_DOMINANCE;
    Ok((
        ok,
        format!("1000 draws: residual ≤ {worst_res:.2e}, best random / optimum = {worst_ratio:.12}"),
    ))
}
