//! Monte Carlo simulation of the relay channel, used as an independent check
//! on the analytical results. Double precision only.

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::eigdist::{LinkBudget, SystemDims};
use crate::error::{Error, Result};
use crate::metrics::{ModulationParams, OutageSpec};
use crate::specfun::gauss_q;

mod cmat;

pub use cmat::{hermitian_eigen, CMat, HermitianEigen};

/// Draws per work unit. Each unit owns one generator stream, so results do
/// not depend on the number of worker threads.
pub const CHUNK: usize = 4096;

/// Seed and stream of a ChaCha8 generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngSpec {
    pub seed: u64,
    pub stream: u64,
}

impl RngSpec {
    pub fn new(seed: u64, stream: u64) -> Self {
        RngSpec { seed, stream }
    }

    pub fn generator(&self) -> ChaCha8Rng {
        let mut g = ChaCha8Rng::seed_from_u64(self.seed);
        g.set_stream(self.stream);
        g
    }

    /// Stream used by work unit `chunk`.
    pub fn substream(&self, chunk: u64) -> RngSpec {
        RngSpec {
            seed: self.seed,
            stream: (self.stream << 32) | chunk,
        }
    }
}

/// Unit-variance circularly symmetric complex Gaussian via Box–Muller.
pub fn complex_gaussian<R: RngCore>(rng: &mut R) -> Complex64 {
    const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
    let u1 = ((rng.next_u64() >> 11) as f64 + 0.5) * SCALE;
    let u2 = (rng.next_u64() >> 11) as f64 * SCALE;
    let r = (-u1.ln()).sqrt();
    let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
    Complex64::new(r * c, r * s)
}

/// One draw of the two hop matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSample {
    /// Source to relay, `nr × ns`.
    pub h1: CMat,
    /// Relay to destination, `nd × nr`.
    pub h2: CMat,
}

impl ChannelSample {
    pub fn draw<R: RngCore>(dims: SystemDims, rng: &mut R) -> Self {
        let h1 = CMat::from_fn(dims.nr, dims.ns, |_, _| complex_gaussian(rng));
        let h2 = CMat::from_fn(dims.nd, dims.nr, |_, _| complex_gaussian(rng));
        ChannelSample { h1, h2 }
    }
}

/// First draw of the generator given by `rng`.
pub fn sample_channel(dims: SystemDims, rng: RngSpec) -> ChannelSample {
    ChannelSample::draw(dims, &mut rng.generator())
}

// Y = L^{-1} H2 H1 with L L† = a H2 H2† + I, so that M = Y† Y.
struct Whitened {
    g: CMat,
    l: CMat,
    y: CMat,
}

fn whiten(sample: &ChannelSample, a: f64) -> Result<Whitened> {
    if !(a >= 0.0) {
        return Err(Error::InvalidParameter(format!("a = {a} must be non-negative")));
    }
    let g = sample.h2.mul(&sample.h1);
    let nd = sample.h2.rows();
    let am = sample.h2.mul(&sample.h2.adjoint()).scale(a).add(&CMat::identity(nd));
    let l = am.cholesky()?;
    let y = l.forward_solve(&g);
    Ok(Whitened { g, l, y })
}

/// Largest eigenvalue of `H1† H2† (a H2 H2† + I)^{-1} H2 H1`.
pub fn max_eig(sample: &ChannelSample, a: f64) -> Result<f64> {
    let w = whiten(sample, a)?;
    let (nd, ns) = (w.y.rows(), w.y.cols());
    let gram = if ns <= nd { w.y.adjoint().mul(&w.y) } else { w.y.mul(&w.y.adjoint()) };
    Ok(hermitian_eigen(&gram)?.values[0].max(0.0))
}

/// Outcome of [`beamformer_consistency`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamformerCheck {
    /// `|γ(w_t, w_r) - aρλ_max| / (aρλ_max)` for the optimal pair.
    pub residual: f64,
    /// Largest `γ / (aρλ_max)` over random unit transmit vectors.
    pub worst_random_ratio: f64,
}

fn snr(w: &Whitened, h2: &CMat, a: f64, rho: f64, wt: &[Complex64], wr: &[Complex64]) -> f64 {
    let gw = w.g.mul_vec(wt);
    let num: Complex64 = wr.iter().zip(&gw).map(|(r, g)| r.conj() * g).sum();
    // w_r† (a H2 H2† + I) w_r = a |H2† w_r|² + |w_r|²
    let h2w = h2.adjoint().mul_vec(wr);
    let den = a * h2w.iter().map(|z| z.norm_sqr()).sum::<f64>() + wr.iter().map(|z| z.norm_sqr()).sum::<f64>();
    a * rho * num.norm_sqr() / den
}

fn combiner(w: &Whitened, wt: &[Complex64]) -> Vec<Complex64> {
    let gw = w.g.mul_vec(wt);
    let col = CMat::from_fn(gw.len(), 1, |i, _| gw[i]);
    let x = w.l.backward_solve_adjoint(&w.l.forward_solve(&col));
    (0..x.rows()).map(|i| x[(i, 0)]).collect()
}

/// Checks the optimal transmit/receive pair against `aρλ_max`, and that
/// `n_random` random unit transmit vectors (with their optimal combiners)
/// do no better.
pub fn beamformer_consistency<R: RngCore>(
    sample: &ChannelSample,
    budget: &LinkBudget,
    n_random: usize,
    rng: &mut R,
) -> Result<BeamformerCheck> {
    let a = budget.a();
    let rho = budget.rho();
    let w = whiten(sample, a)?;
    let m = w.y.adjoint().mul(&w.y);
    let eig = hermitian_eigen(&m)?;
    let lambda = eig.values[0];
    let wt = &eig.vectors[0];
    let wr = combiner(&w, wt);
    let target = a * rho * lambda;
    let residual = (snr(&w, &sample.h2, a, rho, wt, &wr) - target).abs() / target;
    let mut worst: f64 = 0.0;
    for _ in 0..n_random {
        let mut v: Vec<Complex64> = (0..wt.len()).map(|_| complex_gaussian(rng)).collect();
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= n);
        let r = combiner(&w, &v);
        worst = worst.max(snr(&w, &sample.h2, a, rho, &v, &r) / target);
    }
    Ok(BeamformerCheck {
        residual,
        worst_random_ratio: worst,
    })
}

/// Mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub stderr: f64,
    pub n_samples: usize,
}

/// Empirical cdf on a grid with a uniform 99% Dvoretzky–Kiefer–Wolfowitz band.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub band: f64,
    pub n_samples: usize,
}

impl EmpiricalCdf {
    /// Whether `f` lies inside the band at every grid point.
    pub fn brackets(&self, f: impl Fn(f64) -> f64) -> bool {
        self.grid.iter().zip(&self.values).all(|(&x, &v)| (f(x) - v).abs() <= self.band)
    }
}

/// DKW half-width `√(ln(2/δ)/(2n))` at confidence `1 - δ`.
pub fn dkw_band(n: usize, delta: f64) -> f64 {
    ((2.0 / delta).ln() / (2.0 * n as f64)).sqrt()
}

/// Builds the worker pool, honouring `AFMIMO_THREADS`.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("AFMIMO_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("AFMIMO_THREADS = '{v}' is not a count")))?;
        if n > 0 {
            b = b.num_threads(n);
        }
    }
    b.build().map_err(|e| Error::Numerical {
        op: "thread_pool",
        detail: e.to_string(),
    })
}

/// `n` draws of `λ_max`, in a fixed order independent of the thread count.
pub fn sample_max_eigs(dims: SystemDims, a: f64, n: usize, rng: RngSpec) -> Result<Vec<f64>> {
    let chunks = n.div_ceil(CHUNK);
    let pool = thread_pool()?;
    let parts: Vec<Result<Vec<f64>>> = pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut g = rng.substream(c as u64).generator();
                let len = CHUNK.min(n - c * CHUNK);
                (0..len).map(|_| max_eig(&ChannelSample::draw(dims, &mut g), a)).collect()
            })
            .collect()
    });
    let mut out = Vec::with_capacity(n);
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// Empirical cdf of `λ_max` at `x_grid`.
pub fn estimate_cdf(dims: SystemDims, a: f64, x_grid: &[f64], n_samples: usize, rng: RngSpec) -> Result<EmpiricalCdf> {
    if n_samples < 1000 {
        return Err(Error::InvalidParameter(format!("n_samples = {n_samples} below 1000")));
    }
    let mut draws = sample_max_eigs(dims, a, n_samples, rng)?;
    draws.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let values = x_grid
        .iter()
        .map(|&x| draws.partition_point(|&v| v <= x) as f64 / n_samples as f64)
        .collect();
    Ok(EmpiricalCdf {
        grid: x_grid.to_vec(),
        values,
        band: dkw_band(n_samples, 0.01),
        n_samples,
    })
}

/// Metric averaged by [`estimate_metric`].
#[derive(Debug, Clone, PartialEq)]
pub enum McMetric {
    Outage(OutageSpec),
    /// Conditional SER `a1 Q(√(2 a2 γ))` averaged over channel draws.
    Ser(ModulationParams),
    Capacity,
}

impl McMetric {
    fn eval(&self, gamma: f64) -> f64 {
        match self {
            McMetric::Outage(s) => {
                if gamma < s.gamma_th() {
                    1.0
                } else {
                    0.0
                }
            }
            McMetric::Ser(m) => m.a1 * gauss_q((2.0 * m.a2 * gamma).sqrt()),
            McMetric::Capacity => 0.5 * gamma.ln_1p() * std::f64::consts::LOG2_E,
        }
    }
}

/// Sample mean of a metric of `γ = aρλ_max`.
pub fn estimate_metric(
    dims: SystemDims,
    budget: &LinkBudget,
    metric: &McMetric,
    n_samples: usize,
    rng: RngSpec,
) -> Result<McEstimate> {
    if n_samples < 10_000 {
        return Err(Error::InvalidParameter(format!("n_samples = {n_samples} below 10000")));
    }
    let a = budget.a();
    let c = a * budget.rho();
    let draws = sample_max_eigs(dims, a, n_samples, rng)?;
    Ok(mean_estimate(draws.iter().map(|&l| metric.eval(c * l))))
}

/// Mean and standard error (Welford's running update).
pub fn mean_estimate(values: impl Iterator<Item = f64>) -> McEstimate {
    let mut n = 0usize;
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for v in values {
        n += 1;
        let d = v - mean;
        mean += d / n as f64;
        m2 += d * (v - mean);
    }
    let var = if n > 1 { m2 / (n - 1) as f64 } else { 0.0 };
    McEstimate {
        value: mean,
        stderr: (var / n as f64).sqrt(),
        n_samples: n,
    }
}
