//! Modified Bessel functions of the second kind at integer order.

use crate::error::{domain, Error, Result};
use crate::real::Real;

use super::gamma::gamma_int;

// Returns (e^x K0(x), e^x K1(x)) for x > 0.
fn k01_scaled<T: Real>(x: T) -> (T, T) {
    let two = T::lit(2.0);
    if x <= two {
        let (k0, k1) = k01_series(x);
        let e = x.exp();
        return (k0 * e, k1 * e);
    }
    // Steed's continued fraction for K_0, K_1 (Temme's CF2 at order zero)
    let one = T::one();
    let half = T::lit(0.5);
    let quarter = T::lit(0.25);
    let mut b = two * (one + x);
    let mut d = b.recip();
    let mut h = d;
    let mut delh = d;
    let mut q1 = T::zero();
    let mut q2 = one;
    let a1 = quarter;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = one + q * delh;
    for i in 2..100_000 {
        let fi = T::from_i(i);
        a -= two * (fi - one);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += two;
        d = (b + a * d).recip();
        delh = (b * d - one) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < T::epsilon() {
            break;
        }
    }
    h = a1 * h;
    let k0 = (T::PI() / (two * x)).sqrt() / s;
    let k1 = k0 * (x + half - h) / x;
    (k0, k1)
}

fn k01_series<T: Real>(x: T) -> (T, T) {
    let half = T::lit(0.5);
    let t = x * x * T::lit(0.25);
    let lnh = (x * half).ln();
    let gam = T::euler();
    // k-th terms: t^k/(k!)^2 and t^k/(k!(k+1)!)
    let mut p0 = T::one();
    let mut p1 = T::one();
    let mut hk = T::zero();
    let mut i0 = T::zero();
    let mut s0 = T::zero();
    let mut i1 = T::zero();
    let mut s1 = T::zero();
    for k in 0..500usize {
        if k > 0 {
            let fk = T::from_u(k);
            p0 = p0 * t / (fk * fk);
            p1 = p1 * t / (fk * (fk + T::one()));
            hk += fk.recip();
        }
        let hk1 = hk + T::from_u(k + 1).recip();
        i0 += p0;
        s0 += p0 * hk;
        i1 += p1;
        // ψ(k+1) + ψ(k+2) = H_k + H_{k+1} - 2γ
        s1 += p1 * (hk + hk1 - gam - gam);
        if p0 <= T::epsilon() * i0 * T::lit(1e-2) && k > 2 {
            break;
        }
    }
    let k0 = -(lnh + gam) * i0 + s0;
    let k1 = x.recip() + lnh * (x * half) * i1 - x * T::lit(0.25) * s1;
    (k0, k1)
}

fn check_arg<T: Real>(op: &'static str, x: T) -> Result<()> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(domain(op, format!("x = {x}")));
    }
    Ok(())
}

/// `K_0(x)` for `x > 0`.
pub fn bessel_k0<T: Real>(x: T) -> Result<T> {
    check_arg("bessel_k0", x)?;
    Ok(k01_scaled(x).0 * (-x).exp())
}

/// `K_1(x)` for `x > 0`.
pub fn bessel_k1<T: Real>(x: T) -> Result<T> {
    check_arg("bessel_k1", x)?;
    Ok(k01_scaled(x).1 * (-x).exp())
}

/// `K_v(x)` for integer order (`K_{-v} = K_v`) and `x > 0`.
pub fn bessel_k_int<T: Real>(v: i32, x: T) -> Result<T> {
    check_arg("bessel_k_int", x)?;
    let v = v.unsigned_abs() as usize;
    let (k0, k1) = k01_scaled(x);
    let e = (-x).exp();
    if v == 0 {
        return Ok(k0 * e);
    }
    let mut km = k0;
    let mut k = k1;
    let two_x = T::lit(2.0) / x;
    for n in 1..v {
        let kn = km + T::from_u(n) * two_x * k;
        km = k;
        k = kn;
        if !k.is_finite() {
            break;
        }
    }
    let r = k * e;
    if !r.is_finite() || !k.is_finite() {
        return Err(Error::Overflow {
            op: "bessel_k_int",
            detail: format!("K_{v}({x})"),
        });
    }
    Ok(r)
}

/// Ladder of `g_n(x) = x^{n/2} K_n(2√x)` for `n = 0..=nmax`.
///
/// Values are stored multiplied by `e^{2√x}`, so callers that already carry an
/// exponential factor can avoid underflow.
#[derive(Debug, Clone)]
pub struct BesselLadder<T> {
    x: T,
    shift: T,
    g: Vec<T>,
}

impl<T: Real> BesselLadder<T> {
    pub fn new(x: T, nmax: usize) -> Result<Self> {
        if !(x >= T::zero()) || !x.is_finite() {
            return Err(domain("BesselLadder", format!("x = {x}")));
        }
        let mut g = Vec::with_capacity(nmax + 1);
        if x == T::zero() {
            g.push(T::infinity());
            for n in 1..=nmax {
                g.push(gamma_int::<T>(n as i64)? * T::lit(0.5));
            }
            return Ok(BesselLadder { x, shift: T::zero(), g });
        }
        let rx = x.sqrt();
        let y = rx + rx;
        let (k0, k1) = k01_scaled(y);
        g.push(k0);
        if nmax >= 1 {
            g.push(rx * k1);
        }
        for n in 1..nmax {
            let next = T::from_u(n) * g[n] + x * g[n - 1];
            g.push(next);
        }
        for (n, v) in g.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::Overflow {
                    op: "BesselLadder",
                    detail: format!("g_{n}({x})"),
                });
            }
        }
        Ok(BesselLadder { x, shift: y, g })
    }

    pub fn x(&self) -> T {
        self.x
    }

    /// `2√x`, the exponent removed from the stored values.
    pub fn shift(&self) -> T {
        self.shift
    }

    pub fn max_order(&self) -> usize {
        self.g.len() - 1
    }

    /// `e^{2√x} g_n(x)`.
    pub fn scaled(&self, n: usize) -> T {
        self.g[n]
    }

    /// `g_n(x)`.
    pub fn get(&self, n: usize) -> T {
        self.g[n] * (-self.shift).exp()
    }

    /// `e^{2√x} x^k g_ν(x)` for signed `ν`, using `x^k g_ν = x^{k+ν} g_{-ν}` when
    /// `ν < 0`. The effective power of `x` must be non-negative.
    pub fn xg_scaled(&self, k: i64, nu: i64) -> T {
        let (pow, ord) = if nu >= 0 { (k, nu as usize) } else { (k + nu, (-nu) as usize) };
        debug_assert!(pow >= 0, "negative power x^{pow}");
        if pow == 0 {
            return self.g[ord];
        }
        if self.x == T::zero() {
            return T::zero();
        }
        self.x.powi(pow as i32) * self.g[ord]
    }
}

/// `x^{v/2} K_v(2√x)` for integer `v`; `x = 0` gives the limit `Γ(|v|)/2` when
/// `v >= 1`.
pub fn scaled_k<T: Real>(v: i32, x: T) -> Result<T> {
    let n = v.unsigned_abs() as usize;
    let lad = BesselLadder::new(x, n.max(1))?;
    if x == T::zero() {
        if v == 0 {
            return Err(domain("scaled_k", "order 0 diverges at x = 0"));
        }
        if v < 0 {
            return Ok(T::zero());
        }
        return Ok(lad.scaled(n));
    }
    let g = lad.get(n);
    Ok(if v < 0 { g * x.powi(v) } else { g })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate_to_infinity, QuadOptions};

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    // mpmath besselk at 40 digits
    const REF: [(i32, f64, f64); 12] = [
        (0, 1e-06, 13.931442073626419),
        (0, 1.0, 0.42102443824070833),
        (0, 2.0, 0.11389387274953344),
        (0, 2.5, 0.062347553200366186),
        (0, 700.0, 4.6697764316853769e-306),
        (1, 0.001, 999.99623815608555),
        (1, 1.9, 0.15966015303266763),
        (1, 3.0, 0.040156431128194184),
        (1, 50.0, 3.4441022267175556e-23),
        (5, 0.5, 12097.979476096393),
        (7, 10.0, 0.0001720257945607574),
        (20, 30.0, 1.2304516475442477e-11),
    ];

    #[test]
    fn reference_values() {
        for (v, x, want) in REF {
            let got = bessel_k_int(v, x).unwrap();
            assert!(rel(got, want) < 1e-11, "K_{v}({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn k0_matches_integral_representation() {
        let q = integrate_to_infinity(|t: f64| Ok((-t.cosh()).exp()), 0.0, &QuadOptions::with_rel(1e-14)).unwrap();
        assert!(rel(bessel_k0(1.0).unwrap(), q.value) < 1e-12);
    }

    #[test]
    fn order_symmetry() {
        for x in [0.01, 0.7, 2.0, 9.0, 120.0] {
            assert_eq!(bessel_k_int(1, x).unwrap(), bessel_k_int(-1, x).unwrap());
            assert_eq!(bessel_k_int(4, x).unwrap(), bessel_k_int(-4, x).unwrap());
        }
    }

    #[test]
    fn recurrence_residual() {
        let mut x = 0.01f64;
        while x <= 100.0 {
            for v in 1..20 {
                let km = bessel_k_int(v - 1, x).unwrap();
                let k = bessel_k_int(v, x).unwrap();
                let kp = bessel_k_int(v + 1, x).unwrap();
                let r = (kp - km - 2.0 * v as f64 / x * k) / kp;
                assert!(r.abs() <= 1e-10, "v={v} x={x} r={r}");
            }
            x *= 1.7;
        }
    }

    #[test]
    fn small_argument_limit() {
        for v in 1..8 {
            let g = scaled_k(v, 1e-10f64).unwrap();
            let want = gamma_int::<f64>(v as i64).unwrap() / 2.0;
            assert!(rel(g, want) < 1e-8, "v={v}");
        }
    }

    #[test]
    fn overflow_is_reported() {
        assert!(matches!(bessel_k_int(200, 1e-6f64), Err(Error::Overflow { .. })));
        assert!(bessel_k_int(0, 0.0f64).is_err());
    }

    #[test]
    fn ladder_matches_direct() {
        let x = 3.3f64;
        let lad = BesselLadder::new(x, 12).unwrap();
        for n in 0..=12 {
            let direct = x.powf(n as f64 / 2.0) * bessel_k_int(n as i32, 2.0 * x.sqrt()).unwrap();
            assert!(rel(lad.get(n), direct) < 1e-13, "n={n}");
        }
    }
}
