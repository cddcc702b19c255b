use crate::eigdist::{
    large_antenna_equiv, moment_ns1, moment_q1, wishart_maxeig_cdf, AntennaLimit, LinkBudget, MaxEigDistribution,
    SystemDims,
};
use crate::error::{Error, Result};
use crate::quad::{integrate_pieces, QuadOptions};
use crate::real::Real;
use crate::specfun::{digamma_int, expint_n_scaled};

use super::ser::{breaks, upper_cut, wishart_cut};

// tightest tolerance the scalar type can meet
fn quad_opts<T: Real>() -> QuadOptions {
    let eps = T::epsilon().to_f64_lossy();
    QuadOptions::with_rel((1e4 * eps).max(1e-12)).with_abs((1e2 * eps).max(1e-12))
}

/// High-SNR capacity `C ≈ S_∞ (log2 ρ - L_∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighSnrCapacity {
    pub slope: f64,
    pub offset: f64,
}

impl HighSnrCapacity {
    pub fn capacity_at(&self, rho: f64) -> f64 {
        self.slope * (rho.log2() - self.offset)
    }
}

/// `½ ∫ log2(1 + aρx) pdf(x) dx`.
pub fn capacity_numeric<T: Real>(dims: SystemDims, budget: &LinkBudget) -> Result<T> {
    let dist = MaxEigDistribution::<T>::from_budget(dims, budget)?;
    let c = T::lit(budget.a() * budget.rho());
    let cut = upper_cut(&dist)?;
    let pts = breaks(cut, &[c.recip()]);
    let r = integrate_pieces(
        |x: T| {
            if x <= T::zero() {
                return Ok(T::zero());
            }
            Ok((c * x).ln_1p() * dist.pdf(x)?)
        },
        &pts,
        &quad_opts::<T>(),
    )?;
    Ok(T::lit(0.5) * T::LOG2_E() * r.value)
}

/// The same capacity integrated by parts against `1 - cdf`.
pub fn capacity_numeric_via_cdf<T: Real>(dims: SystemDims, budget: &LinkBudget) -> Result<T> {
    let dist = MaxEigDistribution::<T>::from_budget(dims, budget)?;
    let c = T::lit(budget.a() * budget.rho());
    let cut = upper_cut(&dist)?;
    let v = survival_integral(|x| dist.cdf(x), cut, c)?;
    Ok(T::lit(0.5) * v)
}

// ∫ c/((1 + c x) ln 2) (1 - F(x)) dx over [0, cut]
fn survival_integral<T: Real>(cdf: impl Fn(T) -> Result<T>, cut: T, c: T) -> Result<T> {
    if c == T::zero() {
        return Ok(T::zero());
    }
    let pts = breaks(cut, &[c.recip()]);
    let r = integrate_pieces(
        |x: T| Ok(c / (T::one() + c * x) * (T::one() - cdf(x)?)),
        &pts,
        &quad_opts::<T>(),
    )?;
    Ok(T::LOG2_E() * r.value)
}

/// `∫ log2(1 + ρ x) dF_W(x)` for the largest eigenvalue of `G†G`, `G` an
/// i.i.d. `c2 × c1` complex Gaussian matrix.
pub fn single_link_capacity<T: Real>(c1: usize, c2: usize, rho: T) -> Result<T> {
    if rho < T::zero() {
        return Err(Error::InvalidParameter(format!("rho = {rho} must be non-negative")));
    }
    let cut = wishart_cut::<T>(c1, c2)?;
    survival_integral(|x| wishart_maxeig_cdf(c1, c2, x), cut, rho)
}

/// Large-antenna capacity approximation for the chosen limit.
pub fn capacity_large_antenna<T: Real>(dims: SystemDims, budget: &LinkBudget, which: AntennaLimit) -> Result<T> {
    let a = budget.a();
    let model = large_antenna_equiv(dims, a, which);
    let rho_bar = a * budget.rho();
    let (c1, c2) = (model.base_cols, model.base_rows);
    let half = T::lit(0.5);
    match which {
        AntennaLimit::Ns => {
            let hi = single_link_capacity::<T>(c1, c2, T::lit(dims.ns as f64 * rho_bar + a))?;
            let lo = single_link_capacity::<T>(c1, c2, T::lit(a))?;
            Ok(half * (hi - lo))
        }
        _ => Ok(half * single_link_capacity::<T>(c1, c2, T::lit(model.scale() * rho_bar))?),
    }
}

fn moment<T: Real>(op: &'static str, dims: SystemDims, a: T, order: u32) -> Result<T> {
    if dims.q() == 1 {
        moment_q1(dims, a, order)
    } else if dims.ns == 1 {
        moment_ns1(dims, a, order)
    } else {
        Err(Error::Dimension {
            op,
            requirement: "ns = 1 or min(nr, nd) = 1",
            dims: dims.label(),
        })
    }
}

/// Jensen upper bound `½ log2(1 + aρ E{λ})`.
pub fn capacity_jensen<T: Real>(dims: SystemDims, budget: &LinkBudget) -> Result<T> {
    let a = T::lit(budget.a());
    let c = a * T::lit(budget.rho());
    let m1 = moment("capacity_jensen", dims, a, 1)?;
    Ok(T::lit(0.5) * T::LOG2_E() * (c * m1).ln_1p())
}

/// Second-order expansion of `E{ln(1 + aρλ)}` about the mean.
pub fn capacity_taylor<T: Real>(dims: SystemDims, budget: &LinkBudget) -> Result<T> {
    let a = T::lit(budget.a());
    let c = a * T::lit(budget.rho());
    let m1 = moment("capacity_taylor", dims, a, 1)?;
    let m2 = moment("capacity_taylor", dims, a, 2)?;
    let var = m2 - m1 * m1;
    let d = T::one() + c * m1;
    let v = (c * m1).ln_1p() - c * c * var / (T::lit(2.0) * d * d);
    Ok(T::lit(0.5) * T::LOG2_E() * v)
}

/// High-SNR slope and power offset for `min(nr, nd) = 1` at relay ratio `k`.
pub fn capacity_highsnr(dims: SystemDims, k: f64) -> Result<HighSnrCapacity> {
    dims.require("capacity_highsnr", dims.q() == 1, "min(nr, nd) = 1")?;
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidParameter(format!("k = {k} must be positive")));
    }
    let p = dims.p() as i64;
    let z = dims.nr as f64 / k;
    let mut s = 0.0;
    for i in 0..p {
        s += expint_n_scaled::<f64>(i + 1, z)?;
    }
    let psi = digamma_int::<f64>(dims.ns as i64)? + digamma_int::<f64>(p)?;
    Ok(HighSnrCapacity {
        slope: 0.5,
        offset: z.log2() - std::f64::consts::LOG2_E * (psi - s),
    })
}
