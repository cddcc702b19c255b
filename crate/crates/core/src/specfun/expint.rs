use crate::error::{domain, Result};
use crate::real::Real;

// Returns e^x E_n(x).
fn expint_core<T: Real>(n: i64, x: T) -> T {
    let one = T::one();
    let nm1 = n - 1;
    if x > one {
        // modified Lentz evaluation of the continued fraction
        let tiny = T::min_positive_value() / T::epsilon();
        let mut b = x + T::from_i(n);
        let mut c = tiny.recip();
        let mut d = b.recip();
        let mut h = d;
        for i in 1..100_000i64 {
            let a = -T::from_i(i * (nm1 + i));
            b += T::lit(2.0);
            d = (a * d + b).recip();
            c = b + a / c;
            let del = c * d;
            h *= del;
            if (del - one).abs() <= T::epsilon() {
                break;
            }
        }
        return h;
    }
    let mut ans = if nm1 != 0 { T::from_i(nm1).recip() } else { -x.ln() - T::euler() };
    let mut fact = one;
    for i in 1..100_000i64 {
        fact = fact * (-x) / T::from_i(i);
        let del = if i != nm1 {
            -fact / T::from_i(i - nm1)
        } else {
            let mut psi = -T::euler();
            for ii in 1..=nm1 {
                psi += T::from_i(ii).recip();
            }
            fact * (-x.ln() + psi)
        };
        ans += del;
        if del.abs() <= ans.abs() * T::epsilon() {
            break;
        }
    }
    ans * x.exp()
}

fn check<T: Real>(op: &'static str, n: i64, x: T) -> Result<()> {
    if n < 1 {
        return Err(domain(op, format!("n = {n} < 1")));
    }
    if !(x > T::zero()) || !x.is_finite() {
        return Err(domain(op, format!("x = {x}")));
    }
    Ok(())
}

/// Exponential integral `E_n(x) = ∫_1^∞ e^{-xt} t^{-n} dt`.
pub fn expint_n<T: Real>(n: i64, x: T) -> Result<T> {
    check("expint_n", n, x)?;
    Ok(expint_core(n, x) * (-x).exp())
}

/// `e^x E_n(x)`, finite for arguments where `E_n` itself underflows.
pub fn expint_n_scaled<T: Real>(n: i64, x: T) -> Result<T> {
    check("expint_n_scaled", n, x)?;
    Ok(expint_core(n, x))
}
