//! Leading small-argument behaviour of the cdf and pdf.

use crate::error::{domain, Result};
use crate::linalg::Square;
use crate::real::Real;
use crate::specfun::{binomial, gamma_int, harmonic};

use super::SystemDims;

/// Leading term `cdf(x) ≈ x^d/d · (L·(-ln x) + C)`, so that
/// `pdf(x) ≈ x^{d-1} (L·(-ln x) + C - L/d)`.
///
/// `L` is zero except where the expansion carries a logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeadingTerm<T> {
    pub order: usize,
    pub log_coef: T,
    pub constant: T,
}

impl<T: Real> LeadingTerm<T> {
    /// `d·cdf(x)/x^d`, the (possibly `x`-dependent) coefficient.
    pub fn coefficient(&self, x: T) -> T {
        self.log_coef * (-x.ln()) + self.constant
    }

    pub fn cdf(&self, x: T) -> T {
        let d = T::from_u(self.order);
        x.powi(self.order as i32) / d * self.coefficient(x)
    }

    pub fn pdf(&self, x: T) -> T {
        let d = T::from_u(self.order);
        x.powi(self.order as i32 - 1) * (self.coefficient(x) - self.log_coef / d)
    }

    pub fn has_log(&self) -> bool {
        self.log_coef != T::zero()
    }
}

fn norm<T: Real>(q: usize, p: usize) -> Result<T> {
    let mut n = T::one();
    for i in 1..=q {
        n *= gamma_int::<T>((q - i + 1) as i64)? * gamma_int::<T>((p - i + 1) as i64)?;
    }
    Ok(n)
}

/// Leading term for `ns = 1` (order `q`).
///
/// When `p = q` the `(1,1)` entry contains `Γ(0)`; the divergent part becomes
/// the logarithm `-ln x - 2c + H_{q-1}` multiplying the `(1,1)` cofactor.
pub fn leading_ns1<T: Real>(dims: SystemDims, a: T) -> Result<LeadingTerm<T>> {
    dims.require("leading_ns1", dims.ns == 1, "ns = 1")?;
    if !(a >= T::zero()) {
        return Err(domain("leading_ns1", format!("a = {a}")));
    }
    let (q, p) = (dims.q(), dims.p());
    let (qi, pi) = (q as i64, p as i64);
    let mut psi = Square::zeros(q);
    for i in 1..=qi {
        for j in 1..=qi {
            let n = 2 * qi - i - j + 1;
            let mut s = T::zero();
            let mut ak = T::one();
            for k in 0..=n {
                let arg = pi - qi + k + i + j - 2;
                if arg >= 1 {
                    s += binomial::<T>(n as usize, k as usize) * ak * gamma_int::<T>(arg)?;
                }
                ak *= a;
            }
            psi.set((i - 1) as usize, (j - 1) as usize, s);
        }
    }
    let denom = gamma_int::<T>(qi)? * norm::<T>(q, p)?;
    if p > q {
        return Ok(LeadingTerm {
            order: q,
            log_coef: T::zero(),
            constant: psi.det() / denom,
        });
    }
    let c11 = psi.cofactor(0, 0);
    let r = -T::lit(2.0) * T::euler() + harmonic::<T>(q - 1);
    let l = c11 / denom;
    let pdf_const = (r * c11 + psi.det()) / denom;
    Ok(LeadingTerm {
        order: q,
        log_coef: l,
        constant: pdf_const + l / T::from_u(q),
    })
}

/// `v1` of the `ns = 1` expansion `cdf ≈ v1 x^q / q`. Where `p = q` the
/// coefficient depends on `x` through `ln x`; this returns its value at `x`.
pub fn asym_ns1<T: Real>(dims: SystemDims, a: T, x: T) -> Result<T> {
    Ok(leading_ns1(dims, a)?.coefficient(x))
}

/// Leading term for `min(nr, nd) = 1` (order `m = min(ns, p)`).
pub fn leading_q1<T: Real>(dims: SystemDims, a: T) -> Result<LeadingTerm<T>> {
    dims.require("leading_q1", dims.q() == 1, "min(nr, nd) = 1")?;
    if !(a >= T::zero()) {
        return Err(domain("leading_q1", format!("a = {a}")));
    }
    let (p, ns) = (dims.p() as i64, dims.ns as i64);
    let m = dims.m();
    let g = gamma_int::<T>(p)? * gamma_int::<T>(ns)?;
    if p > ns {
        let mut s = T::zero();
        let mut ai = T::one();
        for i in 0..=ns {
            s += binomial::<T>(ns as usize, i as usize) * ai * gamma_int::<T>(p - ns + i)?;
            ai *= a;
        }
        return Ok(LeadingTerm {
            order: m,
            log_coef: T::zero(),
            constant: s / g,
        });
    }
    if p < ns {
        return Ok(LeadingTerm {
            order: m,
            log_coef: T::zero(),
            constant: gamma_int::<T>(ns - p)? / g,
        });
    }
    let mut s = -T::lit(2.0) * T::euler();
    let mut ai = a;
    for i in 1..=ns {
        s += binomial::<T>(ns as usize, i as usize) * ai * gamma_int::<T>(i)?;
        ai *= a;
    }
    let l = g.recip();
    Ok(LeadingTerm {
        order: m,
        log_coef: l,
        constant: s / g + l / T::from_u(m),
    })
}

/// Leading-order cdf value `(v2/m) x^m` for `min(nr, nd) = 1`, meant for
/// small `x`.
pub fn asym_q1<T: Real>(dims: SystemDims, a: T, x: T) -> Result<T> {
    if !(x > T::zero()) {
        return Err(domain("asym_q1", format!("x = {x}")));
    }
    Ok(leading_q1(dims, a)?.cdf(x))
}
