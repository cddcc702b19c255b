//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use crate::error::{Error, Result};
use crate::real::Real;

const XGK: [&str; 8] = [
    "0.991455371120812639206854697526329",
    "0.949107912342758524526189684047851",
    "0.864864423359769072789712788640926",
    "0.741531185599394439863864773280788",
    "0.586087235467691130294144845693013",
    "0.405845151377397166906606412076961",
    "0.207784955007898467600689403773245",
    "0.000000000000000000000000000000000",
];

const WGK: [&str; 8] = [
    "0.022935322010529224963732008058970",
    "0.063092092629978553290700663189204",
    "0.104790010322250183839876322541518",
    "0.140653259715525918745189590510238",
    "0.169004726639267902826583426598550",
    "0.190350578064785409913256402421014",
    "0.204432940075298892414161999234649",
    "0.209482141084727828012999174891714",
];

const WG: [&str; 4] = [
    "0.129484966168869693270611432679082",
    "0.279705391489276667901467771423780",
    "0.381830050505118944950369775488975",
    "0.417959183673469387755102040816327",
];

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            rel_tol: 1e-12,
            abs_tol: 1e-300,
            max_subdivisions: 4000,
        }
    }
}

impl QuadOptions {
    pub fn with_rel(rel_tol: f64) -> Self {
        QuadOptions {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn with_abs(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: T,
    pub evaluations: usize,
}

struct Rule<T> {
    xgk: [T; 8],
    wgk: [T; 8],
    wg: [T; 4],
}

impl<T: Real> Rule<T> {
    fn new() -> Self {
        Rule {
            xgk: XGK.map(T::parse_lit),
            wgk: WGK.map(T::parse_lit),
            wg: WG.map(T::parse_lit),
        }
    }

    // Returns (kronrod estimate, error estimate, roundoff floor).
    fn apply<F>(&self, f: &mut F, a: T, b: T) -> Result<(T, T, T)>
    where
        F: FnMut(T) -> Result<T>,
    {
        let half = T::lit(0.5);
        let center = half * (a + b);
        let hl = half * (b - a);
        let fc = f(center)?;
        let mut resk = fc * self.wgk[7];
        let mut resg = fc * self.wg[3];
        let mut resabs = resk.abs();
        let mut fv1 = [T::zero(); 7];
        let mut fv2 = [T::zero(); 7];
        for j in 0..7 {
            let dx = hl * self.xgk[j];
            let f1 = f(center - dx)?;
            let f2 = f(center + dx)?;
            fv1[j] = f1;
            fv2[j] = f2;
            resk += self.wgk[j] * (f1 + f2);
            resabs += self.wgk[j] * (f1.abs() + f2.abs());
            if j % 2 == 1 {
                resg += self.wg[j / 2] * (f1 + f2);
            }
        }
        let reskh = resk * half;
        let mut resasc = self.wgk[7] * (fc - reskh).abs();
        for j in 0..7 {
            resasc += self.wgk[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
        }
        let result = resk * hl;
        resabs = resabs * hl.abs();
        resasc = resasc * hl.abs();
        let mut err = ((resk - resg) * hl).abs();
        if resasc != T::zero() && err != T::zero() {
            let r = (T::lit(200.0) * err / resasc).powf(T::lit(1.5));
            err = resasc * if r < T::one() { r } else { T::one() };
        }
        let floor = T::lit(50.0) * T::epsilon() * resabs;
        if floor > err {
            err = floor;
        }
        if !result.is_finite() {
            return Err(Error::Numerical {
                op: "integrate",
                detail: format!("non-finite integrand on [{a}, {b}]"),
            });
        }
        Ok((result, err, floor))
    }
}

struct Piece<T> {
    a: T,
    b: T,
    value: T,
    error: T,
    floor: T,
    splittable: bool,
}

/// Integrates `f` over the finite interval `[a, b]`.
pub fn integrate<T, F>(mut f: F, a: T, b: T, opts: &QuadOptions) -> Result<QuadResult<T>>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    let rule = Rule::<T>::new();
    integrate_with_rule(&rule, &mut f, &[a, b], opts)
}

/// Integrates `f` over consecutive finite intervals joined at `points`.
pub fn integrate_pieces<T, F>(mut f: F, points: &[T], opts: &QuadOptions) -> Result<QuadResult<T>>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    let rule = Rule::<T>::new();
    integrate_with_rule(&rule, &mut f, points, opts)
}

/// Integrates `f` over `[a, ∞)` through the map `t = a + u/(1-u)`.
pub fn integrate_to_infinity<T, F>(f: F, a: T, opts: &QuadOptions) -> Result<QuadResult<T>>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    integrate_breaks_to_infinity(f, &[a], opts)
}

/// Integrates `f` over `[points[0], ∞)`, splitting at the remaining points
/// (ascending); the last segment is mapped to the unit interval.
pub fn integrate_breaks_to_infinity<T, F>(mut f: F, points: &[T], opts: &QuadOptions) -> Result<QuadResult<T>>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    assert!(!points.is_empty());
    let rule = Rule::<T>::new();
    let last = *points.last().unwrap();
    let mut g = |x: T| -> Result<T> {
        if x < last {
            f(x)
        } else {
            let u = x - last;
            let one = T::one();
            if u >= one {
                return Ok(T::zero());
            }
            let om = one - u;
            let t = last + u / om;
            let v = f(t)?;
            Ok(if v == T::zero() { v } else { v / (om * om) })
        }
    };
    let mut pts: Vec<T> = points.to_vec();
    pts.push(last + T::one());
    integrate_with_rule(&rule, &mut g, &pts, opts)
}

fn integrate_with_rule<T, F>(rule: &Rule<T>, f: &mut F, points: &[T], opts: &QuadOptions) -> Result<QuadResult<T>>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    let mut pieces: Vec<Piece<T>> = Vec::new();
    let mut evals = 0usize;
    for w in points.windows(2) {
        if w[1] == w[0] {
            continue;
        }
        let (v, e, fl) = rule.apply(f, w[0], w[1])?;
        evals += 15;
        pieces.push(Piece {
            a: w[0],
            b: w[1],
            value: v,
            error: e,
            floor: fl,
            splittable: true,
        });
    }
    let rel = T::lit(opts.rel_tol);
    let abs = T::lit(opts.abs_tol);
    loop {
        let total: T = pieces.iter().fold(T::zero(), |s, p| s + p.value);
        let err: T = pieces.iter().fold(T::zero(), |s, p| s + p.error);
        let roundoff: T = pieces.iter().fold(T::zero(), |s, p| s + p.floor);
        let mut tol = if abs > rel * total.abs() { abs } else { rel * total.abs() };
        // an estimate sitting on the roundoff floor cannot be improved
        if tol < T::lit(2.0) * roundoff {
            tol = T::lit(2.0) * roundoff;
        }
        if err <= tol {
            return Ok(QuadResult {
                value: total,
                error: err,
                evaluations: evals,
            });
        }
        let worst = pieces
            .iter()
            .enumerate()
            .filter(|(_, p)| p.splittable)
            .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i);
        let Some(i) = worst else {
            return Err(Error::Quadrature {
                estimate: total.to_f64_lossy(),
                error: err.to_f64_lossy(),
            });
        };
        if pieces.len() >= opts.max_subdivisions {
            return Err(Error::Quadrature {
                estimate: total.to_f64_lossy(),
                error: err.to_f64_lossy(),
            });
        }
        let p = &pieces[i];
        let (a, b) = (p.a, p.b);
        let m = T::lit(0.5) * (a + b);
        let width = (b - a).abs();
        let scale = a.abs().max(b.abs()).max(T::min_positive_value());
        if width <= T::lit(1e3) * T::epsilon() * scale || m <= a || m >= b {
            pieces[i].splittable = false;
            continue;
        }
        let (v1, e1, f1) = rule.apply(f, a, m)?;
        let (v2, e2, f2) = rule.apply(f, m, b)?;
        evals += 30;
        pieces[i] = Piece {
            a,
            b: m,
            value: v1,
            error: e1,
            floor: f1,
            splittable: true,
        };
        pieces.push(Piece {
            a: m,
            b,
            value: v2,
            error: e2,
            floor: f2,
            splittable: true,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x: f64| Ok(x * x * x - 2.0 * x), 0.0, 2.0, &QuadOptions::default()).unwrap();
        assert!((r.value - 0.0).abs() < 1e-14);
    }

    #[test]
    fn gaussian_tail() {
        let r = integrate_to_infinity(|x: f64| Ok((-x * x).exp()), 0.0, &QuadOptions::default()).unwrap();
        assert!((r.value - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-13);
    }

    #[test]
    fn endpoint_singularity() {
        let r = integrate(|x: f64| Ok(1.0 / x.sqrt()), 0.0, 1.0, &QuadOptions::with_rel(1e-10)).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9);
    }
}
