use crate::eigdist::{
    large_antenna_equiv, ns1_cofactors, refined, wide, wishart_maxeig_cdf, AntennaLimit, Evaluated, LinkBudget,
    MaxEigDistribution, SystemDims,
};
use crate::error::{Error, Result};
use crate::quad::{integrate_pieces, QuadOptions};
use crate::real::Real;
use crate::specfun::{binomial, digamma_half, erfc, factorial, gamma_half, gamma_int, gauss_q, hyp_u_with, FnAccuracy};

use super::{dims_label, leading_highsnr, ModulationParams, OstbcParams};

// tightest tolerance the scalar type can meet
fn quad_opts<T: Real>() -> QuadOptions {
    let eps = T::epsilon().to_f64_lossy();
    QuadOptions::with_rel((1e4 * eps).max(1e-12)).with_abs((1e2 * eps).max(1e-14))
}

/// Point beyond which the remaining probability mass is below about `1e-16`.
///
/// The tail decays at least like `e^{-2√x}`, so its mass past `x ≥ 1` is
/// bounded by `x·pdf(x)`.
pub(crate) fn upper_cut<T: Real>(dist: &MaxEigDistribution<T>) -> Result<T> {
    let tail = T::lit(1e-16);
    let mut x = T::lit(8.0);
    for _ in 0..48 {
        if x * dist.pdf(x)? <= tail {
            return Ok(x);
        }
        x = x + x;
    }
    Err(Error::Numerical {
        op: "upper_cut",
        detail: format!("no tail cut below {x}"),
    })
}

/// Sorted, deduplicated breakpoints inside `(0, cut)` plus both ends.
pub(crate) fn breaks<T: Real>(cut: T, extra: &[T]) -> Vec<T> {
    let mut pts = vec![T::zero()];
    let mut inner: Vec<T> = extra.iter().copied().filter(|&v| v > T::zero() && v < cut).collect();
    for v in [0.1, 1.0, 5.0, 20.0, 100.0] {
        let v = T::lit(v);
        if v < cut {
            inner.push(v);
        }
    }
    inner.sort_by(|a, b| a.partial_cmp(b).unwrap());
    inner.dedup();
    pts.extend(inner);
    pts.push(cut);
    pts
}

fn clamp_ser<T: Real>(v: T, a1: f64) -> T {
    v.max(T::zero()).min(T::lit(0.5 * a1))
}

/// `∫ a1 Q(√(2 a2 aρ x)) pdf(x) dx` by adaptive quadrature.
pub fn ser_numeric<T: Real>(dims: SystemDims, budget: &LinkBudget, m: &ModulationParams) -> Result<T> {
    let dist = MaxEigDistribution::<T>::from_budget(dims, budget)?;
    let beta = T::lit(m.a2 * budget.a() * budget.rho());
    let a1 = T::lit(m.a1);
    let two_beta = beta + beta;
    let cut = upper_cut(&dist)?;
    let xb = beta.recip();
    let pts = breaks(cut, &[T::lit(0.01) * xb, T::lit(0.1) * xb, xb, T::lit(10.0) * xb]);
    let r = integrate_pieces(
        |x: T| {
            if x <= T::zero() {
                return Ok(T::zero());
            }
            let qv = gauss_q((two_beta * x).sqrt());
            if qv == T::zero() {
                return Ok(T::zero());
            }
            Ok(a1 * qv * dist.pdf(x)?)
        },
        &pts,
        &quad_opts::<T>(),
    )?;
    Ok(clamp_ser(r.value, m.a1))
}

/// The same average through the cdf:
/// `a1 √β/√π ∫ F(s²) e^{-β s²} ds` with `β = a2 aρ`.
pub fn ser_numeric_via_cdf<T: Real>(dims: SystemDims, budget: &LinkBudget, m: &ModulationParams) -> Result<T> {
    let dist = MaxEigDistribution::<T>::from_budget(dims, budget)?;
    let beta = T::lit(m.a2 * budget.a() * budget.rho());
    cdf_route(|x| dist.cdf(x), upper_cut(&dist)?, beta, m.a1)
}

fn cdf_route<T: Real>(cdf: impl Fn(T) -> Result<T>, cut: T, beta: T, a1: f64) -> Result<T> {
    let a1 = T::lit(a1);
    let smax = cut.sqrt();
    let sb = beta.recip().sqrt();
    let pts = breaks(smax, &[T::lit(0.1) * sb, sb, T::lit(3.0) * sb, T::lit(8.0) * sb]);
    let r = integrate_pieces(
        |s: T| {
            let w = (-beta * s * s).exp();
            if w == T::zero() {
                return Ok(T::zero());
            }
            Ok(cdf(s * s)? * w)
        },
        &pts,
        &quad_opts::<T>(),
    )?;
    let rb = beta.sqrt();
    let head = a1 * rb / T::PI().sqrt() * r.value;
    let tail = a1 * T::lit(0.5) * erfc(rb * smax);
    Ok(clamp_ser(head + tail, a1.to_f64_lossy()))
}

fn u_accuracy<T: Real>() -> FnAccuracy {
    if T::is_extended() {
        FnAccuracy::new(1e-28, 500).expect("valid accuracy")
    } else {
        FnAccuracy::default()
    }
}

fn closed_ns1_eval<T: Real>(dims: SystemDims, a: T, rho: T, a1: T, a2: T) -> Result<Evaluated<T>> {
    let (q, p) = (dims.q() as i64, dims.p() as i64);
    let d = ns1_cofactors(dims, a)?;
    let acc = u_accuracy::<T>();
    let half = T::lit(0.5);
    let sqrt_pi = T::PI().sqrt();
    let z = (a * (rho * a2 + T::one())).recip();
    let root = (rho.recip() + a2).sqrt();
    let first = sqrt_pi / a2.sqrt();
    let mut tot = T::zero();
    let mut gross = T::zero();
    for j in 1..=q {
        let mut inner = T::zero();
        let mut inner_g = T::zero();
        let mut al = T::one();
        for l in 0..j {
            let eta = p + q + l - j;
            let c = binomial::<T>((j - 1) as usize, l as usize) * al;
            let t1 = gamma_int::<T>(eta)? * first;
            let u = hyp_u_with(half, T::from_i(1 - eta), z, &acc)?;
            let t2 = gamma_half::<T>(eta as usize) * sqrt_pi / root * u;
            inner += c * (t1 - t2);
            inner_g += c * (t1 + t2);
            al *= a;
        }
        tot += d[(j - 1) as usize] * inner;
        gross += d[(j - 1) as usize].abs() * inner_g;
    }
    let mut norm = T::one();
    for i in 1..=q {
        norm *= gamma_int::<T>(q - i + 1)? * gamma_int::<T>(p - i + 1)?;
    }
    let sign = if (q - 1) % 2 == 0 { T::one() } else { -T::one() };
    let pre = a1 * a2.sqrt() / (T::lit(2.0) * sqrt_pi * norm);
    Ok(Evaluated {
        value: sign * pre * tot,
        magnitude: pre * gross,
    })
}

fn params<T: Real>(budget: &LinkBudget, m: &ModulationParams) -> (T, T, T, T) {
    (T::lit(budget.a()), T::lit(budget.rho()), T::lit(m.a1), T::lit(m.a2))
}

/// Closed form of the average SER for `ns = 1`.
pub fn ser_closed_ns1<T: Real>(dims: SystemDims, budget: &LinkBudget, m: &ModulationParams) -> Result<T> {
    dims.require("ser_closed_ns1", dims.ns == 1, "ns = 1")?;
    let (a, rho, a1, a2) = params::<T>(budget, m);
    let e = refined(
        || closed_ns1_eval(dims, a, rho, a1, a2),
        || closed_ns1_eval(dims, wide(a), wide(rho), wide(a1), wide(a2)),
    )?;
    Ok(clamp_ser(e.value, m.a1))
}

fn closed_q1_eval<T: Real>(dims: SystemDims, a: T, rho: T, a1: T, a2: T) -> Result<Evaluated<T>> {
    let (p, ns) = (dims.p() as i64, dims.ns as i64);
    let acc = u_accuracy::<T>();
    let sqrt_pi = T::PI().sqrt();
    let z = (a * (rho * a2 + T::one())).recip();
    let ar = a * rho;
    let base = a2 + rho.recip();
    let mut tot = T::zero();
    for k in 0..ns {
        let mut inner = T::zero();
        let mut al = T::one();
        for l in 0..=k {
            let u = hyp_u_with(T::from_i(k) + T::lit(0.5), T::from_i(1 + k - p - l), z, &acc)?;
            inner += binomial::<T>(k as usize, l as usize) * al * gamma_half::<T>((p + l) as usize) * u;
            al *= a;
        }
        let scale = gamma_half::<T>(k as usize) / (ar.powi(k as i32) * base.powi(k as i32) * base.sqrt());
        tot += inner * scale / factorial::<T>(k as usize);
    }
    let half_a1 = a1 * T::lit(0.5);
    let sub = a1 * a2.sqrt() / (T::lit(2.0) * sqrt_pi * gamma_int::<T>(p)?) * tot;
    Ok(Evaluated {
        value: half_a1 - sub,
        magnitude: half_a1 + sub.abs(),
    })
}

/// Closed form of the average SER for `min(nr, nd) = 1`.
pub fn ser_closed_q1<T: Real>(dims: SystemDims, budget: &LinkBudget, m: &ModulationParams) -> Result<T> {
    dims.require("ser_closed_q1", dims.q() == 1, "min(nr, nd) = 1")?;
    let (a, rho, a1, a2) = params::<T>(budget, m);
    let e = refined(
        || closed_q1_eval(dims, a, rho, a1, a2),
        || closed_q1_eval(dims, wide(a), wide(rho), wide(a1), wide(a2)),
    )?;
    Ok(clamp_ser(e.value, m.a1))
}

/// Leading high-SNR SER at fixed `k`.
///
/// With `cdf(x) ≈ x^d/d (L(-ln x) + C)` and `β = a2 ρ k/nr` this is
/// `a1 Γ(d+½)/(2√π d β^d) · (C + L(ln β - ψ(d+½)))`.
pub fn ser_highsnr<T: Real>(dims: SystemDims, budget: &LinkBudget, m: &ModulationParams) -> Result<T> {
    let lead = leading_highsnr::<T>("ser_highsnr", dims, budget)?;
    let d = lead.order;
    let beta = T::lit(m.a2 * budget.a_limit() * budget.rho());
    let df = T::from_u(d);
    let pre = T::lit(m.a1) * gamma_half::<T>(d) / (T::lit(2.0) * T::PI().sqrt() * df * beta.powi(d as i32));
    let v = pre * (lead.constant + lead.log_coef * (beta.ln() - digamma_half::<T>(d)));
    Ok(v.max(T::zero()))
}

/// High-SNR SER of an OSTBC scheme over the same channel (`q = 1`, `p ≠ ns`).
pub fn ser_ostbc_highsnr<T: Real>(
    dims: SystemDims,
    budget: &LinkBudget,
    m: &ModulationParams,
    ostbc: &OstbcParams,
) -> Result<T> {
    dims.require("ser_ostbc_highsnr", dims.q() == 1, "min(nr, nd) = 1")?;
    let (p, ns) = (dims.p(), dims.ns);
    if p == ns {
        return Err(Error::Unsupported {
            op: "ser_ostbc_highsnr",
            detail: format!("{} has p = ns, which has no OSTBC high-SNR form", dims_label(&dims)),
        });
    }
    let k_nr = T::lit(budget.a_limit());
    let rho = T::lit(budget.rho());
    let a1 = T::lit(m.a1);
    let a2 = T::lit(m.a2);
    let rns = T::lit(ostbc.rate() * ns as f64);
    let two_sqrt_pi = T::lit(2.0) * T::PI().sqrt();
    if p > ns {
        let mut s = T::zero();
        let mut ai = T::one();
        for i in 0..=ns {
            s += binomial::<T>(ns, i) * ai * gamma_int::<T>((p - ns + i) as i64)?;
            ai *= k_nr;
        }
        let d = ns as i32;
        let num = a1 * rns.powi(d) * gamma_half::<T>(ns) * s * (k_nr * a2 * rho).powi(-d);
        Ok(num / (two_sqrt_pi * gamma_int::<T>(p as i64)? * gamma_int::<T>(ns as i64 + 1)?))
    } else {
        let d = p as i32;
        let num = a1 * rns.powi(d) * gamma_half::<T>(p) * gamma_int::<T>((ns - p) as i64)? * (k_nr * a2 * rho).powi(-d);
        Ok(num / (two_sqrt_pi * gamma_int::<T>(p as i64 + 1)? * gamma_int::<T>(ns as i64)?))
    }
}

/// SNR advantage of beamforming over OSTBC, `10 log10(R ns)` dB.
pub fn bf_power_gain_db(ns: usize, rate: f64) -> f64 {
    10.0 * (rate * ns as f64).log10()
}

/// `E{a1 Q(√(2 a2 ρ_eff λ))}` for `λ` the largest eigenvalue of `G†G`, `G`
/// an i.i.d. `c2 × c1` complex Gaussian matrix.
pub fn single_link_ser<T: Real>(c1: usize, c2: usize, rho_eff: T, m: &ModulationParams) -> Result<T> {
    let beta = T::lit(m.a2) * rho_eff;
    let cut = wishart_cut::<T>(c1, c2)?;
    cdf_route(|x| wishart_maxeig_cdf(c1, c2, x), cut, beta, m.a1)
}

pub(crate) fn wishart_cut<T: Real>(c1: usize, c2: usize) -> Result<T> {
    let tail = T::lit(1e-16);
    let mut x = T::lit(((c1 as f64).sqrt() + (c2 as f64).sqrt()).powi(2));
    for _ in 0..48 {
        if T::one() - wishart_maxeig_cdf(c1, c2, x)? <= tail {
            return Ok(x);
        }
        x = x + x;
    }
    Err(Error::Numerical {
        op: "wishart_cut",
        detail: format!("no tail cut below {x}"),
    })
}

/// Large-antenna SER approximation for `nr → ∞` or `nd → ∞`.
pub fn ser_large_antenna<T: Real>(
    dims: SystemDims,
    budget: &LinkBudget,
    m: &ModulationParams,
    which: AntennaLimit,
) -> Result<T> {
    if which == AntennaLimit::Ns {
        return Err(Error::Unsupported {
            op: "ser_large_antenna",
            detail: "no SER approximation for the ns limit".into(),
        });
    }
    let model = large_antenna_equiv(dims, budget.a(), which);
    let rho_bar = budget.a() * budget.rho();
    single_link_ser(model.base_cols, model.base_rows, T::lit(model.scale() * rho_bar), m)
}
