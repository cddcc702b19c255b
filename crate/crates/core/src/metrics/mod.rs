//! Outage probability, average symbol error rate and ergodic capacity.

use crate::eigdist::{cdf_exact, leading_ns1, leading_q1, LeadingTerm, LinkBudget, MaxEigDistribution, SystemDims};
use crate::error::{Error, Result};
use crate::real::Real;

mod capacity;
mod ser;

pub use capacity::{
    capacity_highsnr, capacity_jensen, capacity_large_antenna, capacity_numeric, capacity_numeric_via_cdf,
    capacity_taylor, single_link_capacity, HighSnrCapacity,
};
pub use ser::{
    bf_power_gain_db, ser_closed_ns1, ser_closed_q1, ser_highsnr, ser_large_antenna, ser_numeric, ser_numeric_via_cdf,
    ser_ostbc_highsnr, single_link_ser,
};

/// Constants of the template `SER ≈ E{a1 Q(√(2 a2 γ))}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulationParams {
    pub a1: f64,
    pub a2: f64,
    pub label: String,
}

impl ModulationParams {
    pub fn new(a1: f64, a2: f64, label: impl Into<String>) -> Result<Self> {
        if !(a1 > 0.0 && a1 <= 4.0) {
            return Err(Error::InvalidParameter(format!("a1 = {a1} must lie in (0, 4]")));
        }
        if !(a2 > 0.0 && a2.is_finite()) {
            return Err(Error::InvalidParameter(format!("a2 = {a2} must be positive")));
        }
        Ok(ModulationParams {
            a1,
            a2,
            label: label.into(),
        })
    }

    pub fn bpsk() -> Self {
        ModulationParams {
            a1: 1.0,
            a2: 1.0,
            label: "BPSK".into(),
        }
    }
}

/// Linear SNR threshold for outage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageSpec {
    gamma_th: f64,
}

impl OutageSpec {
    pub fn new(gamma_th: f64) -> Result<Self> {
        if !(gamma_th > 0.0 && gamma_th.is_finite()) {
            return Err(Error::InvalidParameter(format!("gamma_th = {gamma_th} must be positive")));
        }
        Ok(OutageSpec { gamma_th })
    }

    pub fn gamma_th(&self) -> f64 {
        self.gamma_th
    }
}

/// OSTBC code rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OstbcParams {
    rate: f64,
}

impl OstbcParams {
    pub fn new(rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::InvalidParameter(format!("code rate {rate} must lie in (0, 1]")));
        }
        Ok(OstbcParams { rate })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }
}

/// `P(aρλ < γ_th)`.
pub fn outage_exact<T: Real>(dims: SystemDims, budget: &LinkBudget, spec: &OutageSpec) -> Result<T> {
    let dist = MaxEigDistribution::<T>::from_budget(dims, budget)?;
    let x = T::lit(spec.gamma_th) / (T::lit(budget.a()) * T::lit(budget.rho()));
    cdf_exact(&dist, x)
}

/// Leading high-SNR term, dispatched on whichever of `ns = 1`, `q = 1` holds.
pub(crate) fn leading_highsnr<T: Real>(op: &'static str, dims: SystemDims, budget: &LinkBudget) -> Result<LeadingTerm<T>> {
    let a = T::lit(budget.a_limit());
    if dims.q() == 1 {
        leading_q1(dims, a)
    } else if dims.ns == 1 {
        leading_ns1(dims, a)
    } else {
        Err(Error::Unsupported {
            op,
            detail: format!("{} needs ns = 1 or min(nr, nd) = 1", dims_label(&dims)),
        })
    }
}

pub(crate) fn dims_label(d: &SystemDims) -> String {
    format!("dims ({}, {}, {})", d.ns, d.nr, d.nd)
}

/// Leading-order outage as `ρ → ∞` at fixed `k`.
pub fn outage_highsnr<T: Real>(dims: SystemDims, budget: &LinkBudget, spec: &OutageSpec) -> Result<T> {
    let lead = leading_highsnr::<T>("outage_highsnr", dims, budget)?;
    let x = T::lit(spec.gamma_th) / (T::lit(budget.a_limit()) * T::lit(budget.rho()));
    Ok(lead.cdf(x).max(T::zero()).min(T::one()))
}
