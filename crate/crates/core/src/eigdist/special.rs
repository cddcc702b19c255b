//! Closed forms for a single source antenna or a single relay/destination
//! antenna.

use crate::error::{domain, Result};
use crate::linalg::Square;
use crate::real::Real;
use crate::specfun::{binomial, gamma_int};

use super::kernel::Ctx;
use super::{clamp_density, clamp_probability, refined, wide, Evaluated, SystemDims};

fn norm<T: Real>(dims: &SystemDims) -> Result<T> {
    let (q, p) = (dims.q(), dims.p());
    let mut n = T::one();
    for i in 1..=q {
        n *= gamma_int::<T>((q - i + 1) as i64)? * gamma_int::<T>((p - i + 1) as i64)?;
    }
    Ok(n)
}

/// Cofactors `D_j` along the last row of the `q × q` matrix with entries
/// `(-1)^{q-1-i} Σ_l C(q-i+j-1, l) a^l Γ(p+l+i-j)`.
pub fn ns1_cofactors<T: Real>(dims: SystemDims, a: T) -> Result<Vec<T>> {
    let (q, p) = (dims.q() as i64, dims.p() as i64);
    if q == 1 {
        return Ok(vec![T::one()]);
    }
    let mut m = Square::zeros(q as usize);
    for i in 1..=q {
        for j in 1..=q {
            let n = q - i + j - 1;
            let mut s = T::zero();
            let mut ap = T::one();
            for l in 0..=n {
                s += binomial::<T>(n as usize, l as usize) * ap * gamma_int::<T>(p + l + i - j)?;
                ap *= a;
            }
            let signed = if (q - 1 - i).rem_euclid(2) == 0 { s } else { -s };
            m.set((i - 1) as usize, (j - 1) as usize, signed);
        }
    }
    Ok((0..q as usize).map(|j| m.cofactor(q as usize - 1, j)).collect())
}

fn check_x<T: Real>(op: &'static str, x: T, allow_zero: bool) -> Result<()> {
    let ok = if allow_zero { x >= T::zero() } else { x > T::zero() };
    if !ok || !x.is_finite() {
        return Err(domain(op, format!("x = {x}")));
    }
    Ok(())
}

fn check_a<T: Real>(op: &'static str, a: T) -> Result<()> {
    if !(a >= T::zero()) || !a.is_finite() {
        return Err(domain(op, format!("a = {a}")));
    }
    Ok(())
}

fn sign_q<T: Real>(q: usize) -> T {
    if (q - 1) % 2 == 0 {
        T::one()
    } else {
        -T::one()
    }
}

fn cdf_ns1_eval<T: Real>(dims: SystemDims, a: T, x: T) -> Result<Evaluated<T>> {
    let ctx = Ctx::new(dims, a, x)?;
    let d = ns1_cofactors(dims, a)?;
    let (q, p) = (dims.q() as i64, dims.p() as i64);
    let two = T::lit(2.0);
    let (mut v, mut g) = (T::zero(), T::zero());
    for j in 1..=q {
        let dj = d[(j - 1) as usize];
        for l in 0..j {
            let eta = p + q + l - j;
            let c = binomial::<T>((j - 1) as usize, l as usize) * ctx.apow(l);
            let b = two * ctx.ex * ctx.xg(0, eta);
            let gm = ctx.gamma(eta);
            v += dj * c * (gm - b);
            g += dj.abs() * c * (gm + b);
        }
    }
    let n = norm::<T>(&dims)?;
    Ok(Evaluated {
        value: sign_q::<T>(dims.q()) * v / n,
        magnitude: g / n,
    })
}

fn pdf_ns1_eval<T: Real>(dims: SystemDims, a: T, x: T) -> Result<Evaluated<T>> {
    let ctx = Ctx::new(dims, a, x)?;
    let d = ns1_cofactors(dims, a)?;
    let (q, p) = (dims.q() as i64, dims.p() as i64);
    let (mut v, mut g) = (T::zero(), T::zero());
    for j in 1..=q {
        let dj = d[(j - 1) as usize];
        for l in 0..j {
            let eta = p + q + l - j;
            let c = binomial::<T>((j - 1) as usize, l as usize) * ctx.apow(l);
            let t = a * ctx.xg(0, eta) + ctx.xg(0, eta - 1);
            v += dj * c * t;
            g += dj.abs() * c * t;
        }
    }
    let f = T::lit(2.0) * ctx.ex / norm::<T>(&dims)?;
    Ok(Evaluated {
        value: sign_q::<T>(dims.q()) * f * v,
        magnitude: f * g,
    })
}

fn cdf_q1_eval<T: Real>(dims: SystemDims, a: T, x: T) -> Result<Evaluated<T>> {
    let ctx = Ctx::new(dims, a, x)?;
    let (p, ns) = (dims.p() as i64, dims.ns as i64);
    let mut s = T::zero();
    for k in 0..ns {
        let mut inner = T::zero();
        for l in 0..=k {
            inner += binomial::<T>(k as usize, l as usize) * ctx.apow(l) * ctx.xg(k, p + l - k);
        }
        s += ctx.inv_fact(k) * inner;
    }
    let tail = T::lit(2.0) * ctx.ex / ctx.gamma(p) * s;
    Ok(Evaluated {
        value: T::one() - tail,
        magnitude: T::one() + tail,
    })
}

fn pdf_q1_eval<T: Real>(dims: SystemDims, a: T, x: T) -> Result<Evaluated<T>> {
    let ctx = Ctx::new(dims, a, x)?;
    let (p, ns) = (dims.p() as i64, dims.ns as i64);
    let (mut v, mut g) = (T::zero(), T::zero());
    for k in 0..ns {
        let (mut inner, mut inner_g) = (T::zero(), T::zero());
        for l in 0..=k {
            let c = binomial::<T>(k as usize, l as usize) * ctx.apow(k - l);
            // x^k ((a - k/x) g_{p-l} + g_{p-l-1})
            let t1 = a * ctx.xg(k, p - l);
            let t2 = if k == 0 { T::zero() } else { T::from_i(k) * ctx.xg(k - 1, p - l) };
            let t3 = ctx.xg(k, p - l - 1);
            inner += c * (t1 - t2 + t3);
            inner_g += c * (t1 + t2 + t3);
        }
        v += ctx.inv_fact(k) * inner;
        g += ctx.inv_fact(k) * inner_g;
    }
    let f = T::lit(2.0) * ctx.ex / ctx.gamma(p);
    Ok(Evaluated {
        value: f * v,
        magnitude: f * g,
    })
}

fn pdf_q1_sum_eval<T: Real>(dims: SystemDims, a: T, x: T) -> Result<Evaluated<T>> {
    let ctx = Ctx::new(dims, a, x)?;
    let (p, ns) = (dims.p() as i64, dims.ns as i64);
    let mut s = T::zero();
    for i in 0..=ns {
        s += binomial::<T>(ns as usize, i as usize) * ctx.apow(i) * ctx.xg(ns - 1, p - ns + i);
    }
    let v = T::lit(2.0) * ctx.ex / (ctx.gamma(p) * ctx.gamma(ns)) * s;
    Ok(Evaluated { value: v, magnitude: v })
}

/// cdf for `ns = 1` by cofactor expansion.
pub fn cdf_ns1<T: Real>(dims: SystemDims, a: T, x: T) -> Result<T> {
    dims.require("cdf_ns1", dims.ns == 1, "ns = 1")?;
    check_a("cdf_ns1", a)?;
    check_x("cdf_ns1", x, true)?;
    if x == T::zero() {
        return Ok(T::zero());
    }
    let e = refined(|| cdf_ns1_eval(dims, a, x), || cdf_ns1_eval(dims, wide(a), wide(x)))?;
    clamp_probability("cdf_ns1", e.value)
}

/// pdf for `ns = 1`.
pub fn pdf_ns1<T: Real>(dims: SystemDims, a: T, x: T) -> Result<T> {
    dims.require("pdf_ns1", dims.ns == 1, "ns = 1")?;
    check_a("pdf_ns1", a)?;
    check_x("pdf_ns1", x, false)?;
    let e = refined(|| pdf_ns1_eval(dims, a, x), || pdf_ns1_eval(dims, wide(a), wide(x)))?;
    clamp_density("pdf_ns1", e)
}

/// cdf for `min(nr, nd) = 1`.
pub fn cdf_q1<T: Real>(dims: SystemDims, a: T, x: T) -> Result<T> {
    dims.require("cdf_q1", dims.q() == 1, "min(nr, nd) = 1")?;
    check_a("cdf_q1", a)?;
    check_x("cdf_q1", x, true)?;
    if x == T::zero() {
        return Ok(T::zero());
    }
    let e = refined(|| cdf_q1_eval(dims, a, x), || cdf_q1_eval(dims, wide(a), wide(x)))?;
    clamp_probability("cdf_q1", e.value)
}

/// pdf for `min(nr, nd) = 1`, from the derivative of [`cdf_q1`].
pub fn pdf_q1<T: Real>(dims: SystemDims, a: T, x: T) -> Result<T> {
    dims.require("pdf_q1", dims.q() == 1, "min(nr, nd) = 1")?;
    check_a("pdf_q1", a)?;
    check_x("pdf_q1", x, false)?;
    let e = refined(|| pdf_q1_eval(dims, a, x), || pdf_q1_eval(dims, wide(a), wide(x)))?;
    clamp_density("pdf_q1", e)
}

/// pdf for `min(nr, nd) = 1` as the positive single sum
/// `2 x^{ns-1} e^{-ax} / (Γ(p) Γ(ns)) Σ_i C(ns, i) a^i g_{p-ns+i}(x)`.
pub fn pdf_q1_single_sum<T: Real>(dims: SystemDims, a: T, x: T) -> Result<T> {
    dims.require("pdf_q1_single_sum", dims.q() == 1, "min(nr, nd) = 1")?;
    check_a("pdf_q1_single_sum", a)?;
    check_x("pdf_q1_single_sum", x, false)?;
    Ok(pdf_q1_sum_eval(dims, a, x)?.value)
}
