use crate::real::Real;

// 1 - erf(y) through the positive-term series, 0 <= y < 1.5
fn erfc_series<T: Real>(y: T) -> T {
    let two = T::lit(2.0);
    let y2 = y * y;
    let mut term = y;
    let mut sum = y;
    let mut k = 0usize;
    loop {
        k += 1;
        term = term * two * y2 / T::from_u(2 * k + 1);
        sum += term;
        if term <= T::epsilon() * sum * T::lit(0.1) || k > 10_000 {
            break;
        }
    }
    let erf = two / T::PI().sqrt() * (-y2).exp() * sum;
    T::one() - erf
}

// Γ(1/2, y²)/√π via the Lentz continued fraction, y >= 1.5
fn erfc_cf<T: Real>(y: T) -> T {
    let one = T::one();
    let two = T::lit(2.0);
    let a = T::lit(0.5);
    let x = y * y;
    let tiny = T::min_positive_value() / T::epsilon();
    let mut b = x + one - a;
    let mut c = tiny.recip();
    let mut d = b.recip();
    let mut h = d;
    for i in 1..100_000 {
        let fi = T::from_i(i);
        let an = -fi * (fi - a);
        b += two;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        let del = d * c;
        h *= del;
        if (del - one).abs() <= T::epsilon() {
            break;
        }
    }
    (-x).exp() * y * h / T::PI().sqrt()
}

/// Complementary error function.
pub fn erfc<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    if x < T::zero() {
        return T::lit(2.0) - erfc(-x);
    }
    if x < T::lit(1.5) {
        erfc_series(x)
    } else if x > T::lit(30.0) && !T::is_extended() {
        T::zero()
    } else {
        erfc_cf(x)
    }
}

/// Gaussian tail probability `Q(x) = P(N(0,1) > x)`.
pub fn gauss_q<T: Real>(x: T) -> T {
    T::lit(0.5) * erfc(x / T::SQRT_2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate_to_infinity, QuadOptions};

    #[test]
    fn q_at_zero_and_symmetry() {
        assert!((gauss_q(0.0f64) - 0.5).abs() < 1e-16);
        let mut x = -7.5f64;
        while x <= 7.5 {
            assert!((gauss_q(x) + gauss_q(-x) - 1.0).abs() < 1e-15, "x={x}");
            x += 0.37;
        }
    }

    #[test]
    fn q_reference_values() {
        // mpmath 0.5*erfc(x/sqrt(2))
        let cases = [
            (-2.0f64, 9.7724986805182079e-1),
            (0.5, 3.0853753872598690e-1),
            (1.2, 1.1506967022170828e-1),
            (2.1, 1.7864420562816553e-2),
            (3.0, 1.3498980316300945e-3),
            (5.5, 1.8989562465887719e-8),
            (8.0, 6.2209605742717841e-16),
        ];
        for (x, want) in cases {
            let got = gauss_q(x);
            assert!(((got - want) / want).abs() < 1e-12, "x={x} got={got}");
        }
    }

    #[test]
    fn q_matches_density_quadrature() {
        let c = (2.0 * std::f64::consts::PI).sqrt().recip();
        let q = integrate_to_infinity(|t: f64| Ok(c * (-t * t / 2.0).exp()), 3.0, &QuadOptions::with_rel(1e-14)).unwrap();
        assert!(((gauss_q(3.0) - q.value) / q.value).abs() < 1e-12);
    }
}
