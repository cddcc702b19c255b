use crate::error::{domain, Result};
use crate::real::Real;
use crate::specfun::{binomial, gamma_int, hyp_u};

use super::special::ns1_cofactors;
use super::SystemDims;

fn check<T: Real>(op: &'static str, a: T, order: u32) -> Result<()> {
    if !(a > T::zero()) || !a.is_finite() {
        return Err(domain(op, format!("a = {a} must be positive")));
    }
    if order == 0 {
        return Err(domain(op, "moment order must be at least 1"));
    }
    Ok(())
}

/// `E{λ^m}` for `ns = 1`.
pub fn moment_ns1<T: Real>(dims: SystemDims, a: T, order: u32) -> Result<T> {
    dims.require("moment_ns1", dims.ns == 1, "ns = 1")?;
    check("moment_ns1", a, order)?;
    let (q, p) = (dims.q() as i64, dims.p() as i64);
    let m = order as i64;
    let d = ns1_cofactors(dims, a)?;
    let z = a.recip();
    let mm = T::from_i(m);
    let mut tot = T::zero();
    for j in 1..=q {
        for l in 0..j {
            let eta = p + q + l - j;
            let e = T::from_i(eta);
            let u1 = hyp_u(mm + T::one(), T::one() - e, z)?;
            let u2 = hyp_u(mm + T::one(), T::lit(2.0) - e, z)?;
            let t = binomial::<T>((j - 1) as usize, l as usize)
                * a.powi((l - m) as i32)
                * gamma_int::<T>(eta + m)?
                * ((e + mm) * u1 + u2 * z);
            tot += d[(j - 1) as usize] * t;
        }
    }
    let mut n = T::one();
    for i in 1..=q {
        n *= gamma_int::<T>(q - i + 1)? * gamma_int::<T>(p - i + 1)?;
    }
    let sign = if (q - 1) % 2 == 0 { T::one() } else { -T::one() };
    Ok(sign * gamma_int::<T>(m + 1)? * tot / n)
}

/// `E{λ^m}` for `min(nr, nd) = 1`.
pub fn moment_q1<T: Real>(dims: SystemDims, a: T, order: u32) -> Result<T> {
    dims.require("moment_q1", dims.q() == 1, "min(nr, nd) = 1")?;
    check("moment_q1", a, order)?;
    let (p, ns) = (dims.p() as i64, dims.ns as i64);
    let m = order as i64;
    let z = a.recip();
    let mut s = T::zero();
    for i in 0..=ns {
        let u = hyp_u(T::from_i(ns + m), T::from_i(1 - p + ns - i), z)?;
        s += binomial::<T>(ns as usize, i as usize) * gamma_int::<T>(p + i + m)? / a.powi((ns + m - i) as i32) * u;
    }
    Ok(gamma_int::<T>(ns + m)? / (gamma_int::<T>(p)? * gamma_int::<T>(ns)?) * s)
}
