use crate::error::{domain, Result};
use crate::quad::{integrate_breaks_to_infinity, QuadOptions};
use crate::real::Real;

use super::bessel::BesselLadder;
use super::gamma::gamma;
use super::hyperu::hyp_u;

/// Both sides of
/// `∫_0^∞ x^μ e^{-mx} K_v(2√(βx)) dx
///   = β^{-v/2} Γ(μ+v/2+1) Γ(μ-v/2+1) / (2 m^{μ-v/2+1}) · U(μ-v/2+1, 1-v, β/m)`,
/// the left by quadrature and the right in closed form.
pub fn integral_identity_sides<T: Real>(mu: T, v: i32, beta: T, m_rate: T) -> Result<(T, T)> {
    let one = T::one();
    let half = T::lit(0.5);
    let vv = T::from_i(v as i64);
    let av = vv.abs();
    if !(mu > -one) || !(mu - half * av > -one) {
        return Err(domain("integral_identity", format!("mu = {mu}, v = {v}")));
    }
    if !(beta > T::zero()) || !(m_rate > T::zero()) {
        return Err(domain("integral_identity", format!("beta = {beta}, m = {m_rate}")));
    }
    let n = v.unsigned_abs() as usize;
    // x = s²; x^μ K_v(2√(βx)) = β^{-|v|/2} x^{μ-|v|/2} g_{|v|}(βx)
    let pow = T::lit(2.0) * (mu - half * av) + one;
    let pre = T::lit(2.0) * beta.powf(-half * av);
    let f = |s: T| -> Result<T> {
        if s == T::zero() {
            return Ok(T::zero());
        }
        let x = s * s;
        let lad = BesselLadder::new(beta * x, n.max(1))?;
        let g = lad.scaled(n);
        let e = (-m_rate * x - lad.shift()).exp();
        Ok(pre * s.powf(pow) * e * g)
    };
    let s0 = m_rate.sqrt().recip();
    let lhs = integrate_breaks_to_infinity(f, &[T::zero(), s0, T::lit(4.0) * s0], &QuadOptions::with_rel(1e-12))?.value;

    let c = mu - half * vv + one;
    let rhs = beta.powf(-half * vv) * gamma(mu + half * vv + one)? * gamma(c)? / (T::lit(2.0) * m_rate.powf(c))
        * hyp_u(c, one - vv, beta / m_rate)?;
    Ok((lhs, rhs))
}

/// Relative residual between the two sides of the integral identity.
pub fn verify_integral_identity<T: Real>(mu: T, v: i32, beta: T, m_rate: T) -> Result<T> {
    let (lhs, rhs) = integral_identity_sides(mu, v, beta, m_rate)?;
    Ok(((lhs - rhs) / rhs).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_points() {
        for (mu, v, beta, m) in [(1.0, 0, 1.0, 1.0), (2.0, 1, 0.5, 2.0), (0.5, 2, 1.0, 1.0)] {
            let r = verify_integral_identity(mu, v, beta, m).unwrap();
            assert!(r <= 1e-8, "mu={mu} v={v} residual={r}");
        }
    }

    #[test]
    fn negative_order_is_symmetric() {
        let r = verify_integral_identity(1.5, -2, 0.8, 1.3).unwrap();
        assert!(r <= 1e-8, "residual={r}");
    }

    #[test]
    fn outside_region_rejected() {
        assert!(verify_integral_identity(0.0, 3, 1.0, 1.0f64).is_err());
    }
}
