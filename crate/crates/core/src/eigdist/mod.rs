//! Distribution of the largest eigenvalue of the dual-hop channel matrix
//! `H1† H2† (a H2 H2† + I)^{-1} H2 H1`.

mod asymptotic;
mod kernel;
mod large;
mod moments;
mod special;

pub use asymptotic::{asym_ns1, asym_q1, leading_ns1, leading_q1, LeadingTerm};
pub use kernel::{cdf_exact, pdf_exact, phi_entry, KernelMatrix};
pub use large::{large_antenna_equiv, wishart_maxeig_cdf, AntennaLimit, EquivalentModel};
pub use moments::{moment_ns1, moment_q1};
pub use special::{cdf_ns1, cdf_q1, ns1_cofactors, pdf_ns1, pdf_q1, pdf_q1_single_sum};

use crate::error::{domain, Error, Result};
use crate::real::{cast, Real, Wide};
use crate::specfun::ln_gamma;

/// Antenna counts at the source, relay and destination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SystemDims {
    pub ns: usize,
    pub nr: usize,
    pub nd: usize,
}

impl SystemDims {
    pub fn new(ns: usize, nr: usize, nd: usize) -> Result<Self> {
        if ns == 0 || nr == 0 || nd == 0 {
            return Err(Error::InvalidParameter(format!("antenna counts must be positive: ({ns}, {nr}, {nd})")));
        }
        Ok(SystemDims { ns, nr, nd })
    }

    pub fn q(&self) -> usize {
        self.nd.min(self.nr)
    }
    pub fn p(&self) -> usize {
        self.nd.max(self.nr)
    }
    pub fn s(&self) -> usize {
        self.ns.min(self.q())
    }
    pub fn t(&self) -> usize {
        self.ns.max(self.q())
    }
    pub fn m(&self) -> usize {
        self.ns.min(self.p())
    }
    pub fn n(&self) -> usize {
        self.ns.max(self.p())
    }

    /// `θ(i, j) = 2q + p - i - j - s` (1-based indices).
    pub fn theta(&self, i: usize, j: usize) -> i64 {
        (2 * self.q() + self.p()) as i64 - i as i64 - j as i64 - self.s() as i64
    }

    /// `τ(i, j) = s + i + j - q - 2` (1-based indices).
    pub fn tau(&self, i: usize, j: usize) -> i64 {
        (self.s() + i + j) as i64 - self.q() as i64 - 2
    }

    pub(crate) fn label(&self) -> String {
        format!("({}, {}, {})", self.ns, self.nr, self.nd)
    }

    pub(crate) fn require(&self, op: &'static str, ok: bool, requirement: &'static str) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::Dimension {
                op,
                requirement,
                dims: self.label(),
            })
        }
    }
}

/// Transmit SNR and relay gain. The relay gain is `α = kρ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    rho: f64,
    k: f64,
    nr: usize,
}

impl LinkBudget {
    pub fn new(rho: f64, k: f64, nr: usize) -> Result<Self> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::InvalidParameter(format!("rho = {rho} must be positive")));
        }
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::InvalidParameter(format!("k = {k} must be positive")));
        }
        if nr == 0 {
            return Err(Error::InvalidParameter("nr must be positive".into()));
        }
        Ok(LinkBudget { rho, k, nr })
    }

    /// Budget with the SNR given in dB.
    pub fn from_db(rho_db: f64, k: f64, nr: usize) -> Result<Self> {
        Self::new(10f64.powf(rho_db / 10.0), k, nr)
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }
    pub fn k(&self) -> f64 {
        self.k
    }
    pub fn nr(&self) -> usize {
        self.nr
    }
    pub fn alpha(&self) -> f64 {
        self.k * self.rho
    }

    /// `a = α / (nr (1 + ρ))`.
    pub fn a(&self) -> f64 {
        self.alpha() / (self.nr as f64 * (1.0 + self.rho))
    }

    /// Limit of `a` as `ρ → ∞` at fixed `k`.
    pub fn a_limit(&self) -> f64 {
        self.k / self.nr as f64
    }
}

/// Largest-eigenvalue law for given dimensions and fixed-gain constant `a`.
#[derive(Debug, Clone, Copy)]
pub struct MaxEigDistribution<T> {
    dims: SystemDims,
    a: T,
    norm_log: T,
    sign: T,
}

impl<T: Real> MaxEigDistribution<T> {
    pub fn new(dims: SystemDims, a: T) -> Result<Self> {
        if !(a >= T::zero()) || !a.is_finite() {
            return Err(domain("MaxEigDistribution", format!("a = {a}")));
        }
        let (q, p) = (dims.q(), dims.p());
        let mut norm_log = T::zero();
        for i in 1..=q {
            norm_log += ln_gamma(T::from_u(q - i + 1))? + ln_gamma(T::from_u(p - i + 1))?;
        }
        let e = dims.ns * (dims.t() - dims.ns);
        let sign = if e % 2 == 0 { T::one() } else { -T::one() };
        Ok(MaxEigDistribution { dims, a, norm_log, sign })
    }

    pub fn from_budget(dims: SystemDims, budget: &LinkBudget) -> Result<Self> {
        Self::new(dims, T::lit(budget.a()))
    }

    pub fn dims(&self) -> SystemDims {
        self.dims
    }
    pub fn a(&self) -> T {
        self.a
    }

    /// `ln Π Γ(q-i+1) Γ(p-i+1)`.
    pub fn norm_log(&self) -> T {
        self.norm_log
    }

    /// `(-1)^{ns (t - ns)}`.
    pub fn sign(&self) -> T {
        self.sign
    }

    pub fn cdf(&self, x: T) -> Result<T> {
        cdf_exact(self, x)
    }

    pub fn pdf(&self, x: T) -> Result<T> {
        pdf_exact(self, x)
    }
}

/// A value together with the size of the terms that cancelled to produce it.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Evaluated<T> {
    pub value: T,
    pub magnitude: T,
}

impl<T: Real> Evaluated<T> {
    fn well_conditioned(&self) -> bool {
        self.value.is_finite() && self.magnitude.is_finite() && self.magnitude <= T::lit(1e3) * self.value.abs()
    }
}

/// Runs `native`; if `T` is not extended and the result lost more than three
/// digits to cancellation, re-evaluates with [`Wide`].
pub(crate) fn refined<T: Real>(
    native: impl FnOnce() -> Result<Evaluated<T>>,
    wide: impl FnOnce() -> Result<Evaluated<Wide>>,
) -> Result<Evaluated<T>> {
    if T::is_extended() {
        return native();
    }
    match native() {
        Ok(e) if e.well_conditioned() => Ok(e),
        _ => {
            let w = wide()?;
            Ok(Evaluated {
                value: cast(w.value),
                magnitude: cast(w.magnitude),
            })
        }
    }
}

pub(crate) fn wide<T: Real>(x: T) -> Wide {
    cast(x)
}

/// Clamps a probability that strayed outside `[0, 1]` by rounding only.
pub(crate) fn clamp_probability<T: Real>(op: &'static str, v: T) -> Result<T> {
    let tol = T::lit(1e-9);
    if v < T::zero() {
        if v >= -tol {
            return Ok(T::zero());
        }
    } else if v > T::one() {
        if v <= T::one() + tol {
            return Ok(T::one());
        }
    } else {
        return Ok(v);
    }
    Err(Error::Precision {
        op,
        detail: format!("probability {v} outside [0, 1]"),
    })
}

/// Clamps a density that is negative only through rounding.
pub(crate) fn clamp_density<T: Real>(op: &'static str, e: Evaluated<T>) -> Result<T> {
    if e.value >= T::zero() {
        return Ok(e.value);
    }
    if -e.value <= T::lit(1e3) * T::epsilon() * e.magnitude {
        return Ok(T::zero());
    }
    Err(Error::Precision {
        op,
        detail: format!("density {} negative beyond rounding", e.value),
    })
}

/// Largest Bessel order used by any formula for `dims`.
pub(crate) fn ladder_order(dims: &SystemDims) -> usize {
    (dims.p() + dims.q()).max(dims.ns + 1) + 2
}
