//! Determinant representation of the cdf and pdf for arbitrary dimensions.

use crate::error::{domain, Error, Result};
use crate::linalg::{ScaledDet, Square};
use crate::real::Real;
use crate::specfun::{binomial, factorial, gamma_int, BesselLadder};

use super::{clamp_density, clamp_probability, ladder_order, refined, wide, Evaluated, MaxEigDistribution, SystemDims};

pub(crate) struct Ctx<T> {
    pub dims: SystemDims,
    pub a: T,
    pub lad: BesselLadder<T>,
    // e^{-ax - 2√x}: the ladder stores e^{2√x} g
    pub ex: T,
    gam: Vec<T>,
    apow: Vec<T>,
    inv_fact: Vec<T>,
}

impl<T: Real> Ctx<T> {
    pub fn new(dims: SystemDims, a: T, x: T) -> Result<Self> {
        let lad = BesselLadder::new(x, ladder_order(&dims))?;
        let ex = (-a * x - lad.shift()).exp();
        let top = 2 * (dims.p() + dims.q() + dims.ns) + 4;
        let mut gam = vec![T::nan()];
        for n in 1..=top {
            gam.push(gamma_int(n as i64)?);
        }
        let mut apow = vec![T::one()];
        for l in 1..=top {
            apow.push(apow[l - 1] * a);
        }
        let inv_fact = (0..=top).map(|k| factorial::<T>(k).recip()).collect();
        Ok(Ctx {
            dims,
            a,
            lad,
            ex,
            gam,
            apow,
            inv_fact,
        })
    }

    /// Γ(n) for integer n ≥ 1 from the table.
    pub fn gamma(&self, n: i64) -> T {
        self.gam[n as usize]
    }

    pub fn apow(&self, l: i64) -> T {
        self.apow[l as usize]
    }

    pub fn inv_fact(&self, k: i64) -> T {
        self.inv_fact[k as usize]
    }

    /// e^{2√x} x^k g_ν(x).
    pub fn xg(&self, k: i64, nu: i64) -> T {
        self.lad.xg_scaled(k, nu)
    }

    // (value, gross) of an x-independent row entry, i ≤ q - s
    fn gamma_entry(&self, i: usize, j: usize) -> (T, T) {
        let (q, p, s) = (self.dims.q() as i64, self.dims.p() as i64, self.dims.s() as i64);
        let (i, j) = (i as i64, j as i64);
        let n = q - i + j - 1;
        let mut sum = T::zero();
        for l in 0..=n {
            sum += binomial::<T>(n as usize, l as usize) * self.apow(l) * self.gamma(p + l + i - j);
        }
        let v = if (q - s - i) % 2 == 0 { sum } else { -sum };
        (v, sum)
    }

    // A - e^{-ax} B(x) for i > q - s
    fn bessel_entry(&self, i: usize, j: usize) -> (T, T) {
        let th = self.dims.theta(i, j);
        let ta = self.dims.tau(i, j);
        let t = self.dims.t() as i64;
        let mut big_a = T::zero();
        for l in 0..=ta {
            big_a += binomial::<T>(ta as usize, l as usize) * self.apow(l) * self.gamma(th + l + 1);
        }
        let mut b = T::zero();
        for k in 0..=(t - i as i64) {
            let mut inner = T::zero();
            for l in 0..=(ta + k) {
                inner += binomial::<T>((ta + k) as usize, l as usize) * self.apow(l) * self.xg(k, th + l - k + 1);
            }
            b += self.inv_fact(k) * inner;
        }
        let eb = T::lit(2.0) * self.ex * b;
        (big_a - eb, big_a + eb)
    }

    // derivative row entry for the pdf
    fn pdf_entry(&self, i: usize, j: usize) -> (T, T) {
        let th = self.dims.theta(i, j);
        let ta = self.dims.tau(i, j);
        let t = self.dims.t() as i64;
        let a = self.a;
        let mut sum = T::zero();
        let mut gross = T::zero();
        for k in 0..=(t - i as i64) {
            let mut inner = T::zero();
            let mut inner_g = T::zero();
            for l in 0..=(ta + k) {
                let nu = th + l - k + 1;
                let c = binomial::<T>((ta + k) as usize, l as usize) * self.apow(l);
                let t1 = a * self.xg(k, nu);
                let t2 = if k == 0 { T::zero() } else { T::from_i(k) * self.xg(k - 1, nu) };
                let t3 = self.xg(k, nu - 1);
                inner += c * (t1 - t2 + t3);
                inner_g += c * (t1 + t2 + t3);
            }
            sum += self.inv_fact(k) * inner;
            gross += self.inv_fact(k) * inner_g;
        }
        let two_ex = T::lit(2.0) * self.ex;
        (two_ex * sum, two_ex * gross)
    }

    fn entry(&self, i: usize, j: usize) -> (T, T) {
        if i <= self.dims.q() - self.dims.s() {
            self.gamma_entry(i, j)
        } else {
            self.bessel_entry(i, j)
        }
    }
}

fn norm_log<T: Real>(dims: &SystemDims) -> Result<T> {
    let (q, p) = (dims.q(), dims.p());
    let mut s = T::zero();
    for i in 1..=q {
        s += gamma_int::<T>((q - i + 1) as i64)?.ln() + gamma_int::<T>((p - i + 1) as i64)?.ln();
    }
    Ok(s)
}

fn sign<T: Real>(dims: &SystemDims) -> T {
    if (dims.ns * (dims.t() - dims.ns)) % 2 == 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// A `q × q` kernel matrix with every row scaled by a power of two.
#[derive(Debug, Clone)]
pub struct KernelMatrix<T> {
    order: usize,
    entries: Square<T>,
    row_scales: Vec<i64>,
    gross_log: T,
}

impl<T: Real> KernelMatrix<T> {
    fn build(rows: Vec<(Vec<T>, Vec<T>)>) -> Result<Self> {
        let q = rows.len();
        let mut entries = Square::zeros(q);
        let mut row_scales = Vec::with_capacity(q);
        let mut gross_log = T::zero();
        for (i, (vals, gross)) in rows.iter().enumerate() {
            let norm = gross.iter().fold(T::zero(), |s, g| s + *g * *g).sqrt();
            let big = vals.iter().fold(T::zero(), |m, v| m.max(v.abs()));
            if !big.is_finite() || !norm.is_finite() {
                return Err(Error::Precision {
                    op: "KernelMatrix",
                    detail: format!("non-finite entry in row {}", i + 1),
                });
            }
            let e = if big > T::zero() { big.log2().floor().to_i64().unwrap_or(0) } else { 0 };
            let scale = T::lit(2.0).powi(-e as i32);
            for (j, v) in vals.iter().enumerate() {
                entries.set(i, j, *v * scale);
            }
            row_scales.push(e);
            gross_log += if norm > T::zero() { norm.ln() } else { T::neg_infinity() };
        }
        Ok(KernelMatrix {
            order: q,
            entries,
            row_scales,
            gross_log,
        })
    }

    /// `Φ(x)` of the cdf.
    pub fn cdf(dims: SystemDims, a: T, x: T) -> Result<Self> {
        let ctx = Ctx::new(dims, a, x)?;
        Self::from_ctx(&ctx, None)
    }

    /// `Φ_l(x)` of the pdf, `q - s < l ≤ q`.
    pub fn pdf(dims: SystemDims, a: T, x: T, l: usize) -> Result<Self> {
        let q = dims.q();
        if l <= q - dims.s() || l > q {
            return Err(Error::IndexOutOfRange {
                op: "KernelMatrix::pdf",
                i: l,
                j: 0,
                order: q,
            });
        }
        let ctx = Ctx::new(dims, a, x)?;
        Self::from_ctx(&ctx, Some(l))
    }

    fn from_ctx(ctx: &Ctx<T>, deriv_row: Option<usize>) -> Result<Self> {
        let q = ctx.dims.q();
        let rows = (1..=q)
            .map(|i| {
                let (vals, gross): (Vec<T>, Vec<T>) = (1..=q)
                    .map(|j| if Some(i) == deriv_row { ctx.pdf_entry(i, j) } else { ctx.entry(i, j) })
                    .unzip();
                (vals, gross)
            })
            .collect();
        Self::build(rows)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Scaled entries; the true row `i` is `entries[i] · 2^{row_scales[i]}`.
    pub fn entries(&self) -> &Square<T> {
        &self.entries
    }

    pub fn row_scales(&self) -> &[i64] {
        &self.row_scales
    }

    /// Natural log of the Hadamard bound built from the uncancelled terms.
    pub fn gross_log(&self) -> T {
        self.gross_log
    }

    /// Determinant of the unscaled matrix.
    pub fn det(&self) -> ScaledDet<T> {
        let d = self.entries.det_equilibrated();
        ScaledDet {
            mantissa: d.mantissa,
            log2: d.log2 + self.row_scales.iter().sum::<i64>(),
        }
    }
}

fn scaled_ratio<T: Real>(d: ScaledDet<T>, norm_log: T) -> T {
    d.mantissa * (T::from_i(d.log2) * T::LN_2() - norm_log).exp()
}

pub(crate) fn cdf_eval<T: Real>(dims: SystemDims, a: T, x: T) -> Result<Evaluated<T>> {
    let ctx = Ctx::new(dims, a, x)?;
    let k = KernelMatrix::from_ctx(&ctx, None)?;
    let nl = norm_log::<T>(&dims)?;
    Ok(Evaluated {
        value: sign::<T>(&dims) * scaled_ratio(k.det(), nl),
        magnitude: (k.gross_log - nl).exp(),
    })
}

pub(crate) fn pdf_eval<T: Real>(dims: SystemDims, a: T, x: T) -> Result<Evaluated<T>> {
    let ctx = Ctx::new(dims, a, x)?;
    let nl = norm_log::<T>(&dims)?;
    let q = dims.q();
    let mut value = T::zero();
    let mut magnitude = T::zero();
    for l in (q - dims.s() + 1)..=q {
        let k = KernelMatrix::from_ctx(&ctx, Some(l))?;
        value += scaled_ratio(k.det(), nl);
        magnitude += (k.gross_log - nl).exp();
    }
    Ok(Evaluated {
        value: sign::<T>(&dims) * value,
        magnitude,
    })
}

/// Entry `[Φ(x)]_{i,j}` of the cdf kernel (1-based indices).
pub fn phi_entry<T: Real>(dims: SystemDims, a: T, x: T, i: usize, j: usize) -> Result<T> {
    let q = dims.q();
    if i == 0 || j == 0 || i > q || j > q {
        return Err(Error::IndexOutOfRange {
            op: "phi_entry",
            i,
            j,
            order: q,
        });
    }
    if !(x >= T::zero()) || !(a >= T::zero()) {
        return Err(domain("phi_entry", format!("a = {a}, x = {x}")));
    }
    let ctx = Ctx::new(dims, a, x)?;
    Ok(ctx.entry(i, j).0)
}

/// Exact cdf of the largest eigenvalue.
pub fn cdf_exact<T: Real>(dist: &MaxEigDistribution<T>, x: T) -> Result<T> {
    if x.is_nan() || x < T::zero() {
        return Err(domain("cdf_exact", format!("x = {x}")));
    }
    if x == T::zero() {
        return Ok(T::zero());
    }
    if x.is_infinite() {
        return Ok(T::one());
    }
    let (dims, a) = (dist.dims(), dist.a());
    let e = refined(|| cdf_eval(dims, a, x), || cdf_eval(dims, wide(a), wide(x)))?;
    clamp_probability("cdf_exact", e.value)
}

/// Exact pdf of the largest eigenvalue, `x > 0`.
pub fn pdf_exact<T: Real>(dist: &MaxEigDistribution<T>, x: T) -> Result<T> {
    if !(x > T::zero()) {
        return Err(domain("pdf_exact", format!("x = {x}")));
    }
    if x.is_infinite() {
        return Ok(T::zero());
    }
    let (dims, a) = (dist.dims(), dist.a());
    let e = refined(|| pdf_eval(dims, a, x), || pdf_eval(dims, wide(a), wide(x)))?;
    clamp_density("pdf_exact", e)
}
