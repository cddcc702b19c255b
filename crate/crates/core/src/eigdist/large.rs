//! Equivalent single-link models when one antenna count grows large.

use std::fmt;

use crate::error::{domain, Error, Result};
use crate::linalg::Square;
use crate::real::Real;
use crate::specfun::{gamma_int, lower_inc_gamma_int};

use super::{clamp_probability, refined, wide, Evaluated, SystemDims};

/// Which antenna count is taken large.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AntennaLimit {
    Ns,
    Nr,
    Nd,
}

impl fmt::Display for AntennaLimit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AntennaLimit::Ns => "ns",
            AntennaLimit::Nr => "nr",
            AntennaLimit::Nd => "nd",
        })
    }
}

impl std::str::FromStr for AntennaLimit {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ns" => Ok(AntennaLimit::Ns),
            "nr" => Ok(AntennaLimit::Nr),
            "nd" => Ok(AntennaLimit::Nd),
            _ => Err(Error::InvalidParameter(format!("unknown antenna limit '{s}'"))),
        }
    }
}

/// `λ_max ≈ map(λ_W)` where `λ_W` is the largest eigenvalue of `G† G` for an
/// i.i.d. `base_rows × base_cols` Gaussian `G`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalentModel {
    pub limit: AntennaLimit,
    pub count: usize,
    pub a: f64,
    pub base_rows: usize,
    pub base_cols: usize,
}

impl EquivalentModel {
    /// Linear factor of the map (the small-`λ_W` slope for the `ns` limit).
    pub fn scale(&self) -> f64 {
        let c = self.count as f64;
        match self.limit {
            AntennaLimit::Ns => c,
            AntennaLimit::Nr | AntennaLimit::Nd => c / (self.a * c + 1.0),
        }
    }

    pub fn map(&self, lambda_w: f64) -> f64 {
        match self.limit {
            AntennaLimit::Ns => self.count as f64 * lambda_w / (self.a * lambda_w + 1.0),
            _ => self.scale() * lambda_w,
        }
    }

    /// cdf of the mapped variable at `x`.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(domain("EquivalentModel::cdf", format!("x = {x}")));
        }
        let w = match self.limit {
            AntennaLimit::Ns => {
                let c = self.count as f64;
                if self.a * x >= c {
                    return Ok(1.0);
                }
                x / (c - self.a * x)
            }
            _ => x / self.scale(),
        };
        wishart_maxeig_cdf(self.base_cols, self.base_rows, w)
    }

    pub fn describe(&self) -> String {
        let c = self.count;
        let map = match self.limit {
            AntennaLimit::Ns => format!("{c}·λ/({}·λ + 1)", self.a),
            _ => format!("{}·λ", self.scale()),
        };
        format!(
            "{} -> ∞: λ_max ≈ {map}, λ = λ_max of G†G with G {}×{}",
            self.limit, self.base_rows, self.base_cols
        )
    }
}

/// Equivalent model for the chosen large antenna count.
pub fn large_antenna_equiv(dims: SystemDims, a: f64, which: AntennaLimit) -> EquivalentModel {
    let (count, base_rows, base_cols) = match which {
        AntennaLimit::Ns => (dims.ns, dims.nd, dims.nr),
        AntennaLimit::Nd => (dims.nd, dims.nr, dims.ns),
        AntennaLimit::Nr => (dims.nr, dims.ns, dims.nd),
    };
    EquivalentModel {
        limit: which,
        count,
        a,
        base_rows,
        base_cols,
    }
}

fn hankel_det<T: Real>(s: usize, t: usize, mut f: impl FnMut(i64) -> Result<T>) -> Result<(T, T)> {
    let mut m = Square::zeros(s);
    let mut had = T::one();
    for i in 1..=s {
        let mut norm = T::zero();
        for j in 1..=s {
            let v = f((t - s + i + j - 1) as i64)?;
            m.set(i - 1, j - 1, v);
            norm += v * v;
        }
        had *= norm.sqrt();
    }
    Ok((m.det(), had))
}

fn wishart_eval<T: Real>(s: usize, t: usize, x: T) -> Result<Evaluated<T>> {
    let (num, num_mag) = hankel_det(s, t, |n| lower_inc_gamma_int(n, x))?;
    let (den, den_mag) = hankel_det(s, t, gamma_int::<T>)?;
    let value = num / den;
    let a = num_mag / den.abs();
    let b = value.abs() * den_mag / den.abs();
    Ok(Evaluated {
        value,
        magnitude: a.max(b),
    })
}

/// `P(λ_max(W) ≤ x)` for `W = H† H` with `H` an i.i.d. unit-variance complex
/// Gaussian `c2 × c1` matrix.
pub fn wishart_maxeig_cdf<T: Real>(c1: usize, c2: usize, x: T) -> Result<T> {
    if c1 == 0 || c2 == 0 {
        return Err(Error::InvalidParameter(format!("wishart dims ({c1}, {c2}) must be positive")));
    }
    let (s, t) = (c1.min(c2), c1.max(c2));
    if s > 8 {
        return Err(Error::Dimension {
            op: "wishart_maxeig_cdf",
            requirement: "min(c1, c2) <= 8",
            dims: format!("({c1}, {c2})"),
        });
    }
    if x.is_nan() || x < T::zero() {
        return Err(domain("wishart_maxeig_cdf", format!("x = {x}")));
    }
    if x == T::zero() {
        return Ok(T::zero());
    }
    if x.is_infinite() {
        return Ok(T::one());
    }
    let e = refined(|| wishart_eval(s, t, x), || wishart_eval(s, t, wide(x)))?;
    clamp_probability("wishart_maxeig_cdf", e.value)
}
