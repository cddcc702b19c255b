//! 237-bit binary floating point, used where double precision loses too many
//! digits to cancellation.

use f256::f256;
use num_traits::{Float, FloatConst, FromPrimitive, Num, NumCast, One, ToPrimitive, Zero};
use std::fmt;
use std::num::FpCategory;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign};
use std::str::FromStr;

/// Octuple-precision scalar (about 71 significant decimal digits).
#[derive(Clone, Copy, Default, PartialEq, PartialOrd)]
pub struct Wide(pub f256);

impl Wide {
    /// Nearest `f64`.
    pub fn to_f64_nearest(self) -> f64 {
        let v = self.0;
        if v.is_nan() {
            return f64::NAN;
        }
        if v.is_infinite() {
            return if v.is_sign_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        let (sign, exp, (hi, lo)) = v.as_sign_exp_signif();
        let m = (hi as f64) * 2f64.powi(128) + lo as f64;
        let r = ldexp(m, exp);
        if sign == 1 {
            -r
        } else {
            r
        }
    }
}

fn ldexp(mut m: f64, mut e: i32) -> f64 {
    while e > 1000 {
        m *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        m *= 2f64.powi(-1000);
        e += 1000;
        if m == 0.0 {
            return m;
        }
    }
    m * 2f64.powi(e)
}

impl fmt::Debug for Wide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Display for Wide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for Wide {
    type Err = <f256 as FromStr>::Err;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse::<f256>().map(Wide)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr for Wide {
            type Output = Wide;
            #[inline]
            fn $m(self, rhs: Wide) -> Wide {
                Wide($tr::$m(self.0, rhs.0))
            }
        }
        impl $atr for Wide {
            #[inline]
            fn $am(&mut self, rhs: Wide) {
                self.0 = $tr::$m(self.0, rhs.0);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);
binop!(Div, div, DivAssign, div_assign);
binop!(Rem, rem, RemAssign, rem_assign);

impl Neg for Wide {
    type Output = Wide;
    fn neg(self) -> Wide {
        Wide(-self.0)
    }
}

impl Zero for Wide {
    fn zero() -> Self {
        Wide(f256::ZERO)
    }
    fn is_zero(&self) -> bool {
        self.0.eq_zero()
    }
}

impl One for Wide {
    fn one() -> Self {
        Wide(f256::ONE)
    }
}

impl Num for Wide {
    type FromStrRadixErr = String;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, String> {
        if radix != 10 {
            return Err(format!("radix {radix} not supported"));
        }
        s.parse::<Wide>().map_err(|e| format!("{e:?}"))
    }
}

impl ToPrimitive for Wide {
    fn to_i64(&self) -> Option<i64> {
        let t = self.0.trunc();
        let f = Wide(t).to_f64_nearest();
        if f.is_finite() && f.abs() < 9.2e18 {
            Some(f as i64)
        } else {
            None
        }
    }
    fn to_u64(&self) -> Option<u64> {
        let t = self.0.trunc();
        let f = Wide(t).to_f64_nearest();
        if f.is_finite() && (0.0..1.8e19).contains(&f) {
            Some(f as u64)
        } else {
            None
        }
    }
    fn to_f64(&self) -> Option<f64> {
        Some(self.to_f64_nearest())
    }
}

impl FromPrimitive for Wide {
    fn from_i64(n: i64) -> Option<Self> {
        Some(Wide(f256::from(n)))
    }
    fn from_u64(n: u64) -> Option<Self> {
        Some(Wide(f256::from(n)))
    }
    fn from_f64(n: f64) -> Option<Self> {
        Some(Wide(f256::from(n)))
    }
}

impl NumCast for Wide {
    fn from<N: ToPrimitive>(n: N) -> Option<Self> {
        n.to_f64().map(|v| Wide(f256::from(v)))
    }
}

impl Float for Wide {
    fn nan() -> Self {
        Wide(f256::NAN)
    }
    fn infinity() -> Self {
        Wide(f256::INFINITY)
    }
    fn neg_infinity() -> Self {
        Wide(f256::NEG_INFINITY)
    }
    fn neg_zero() -> Self {
        Wide(f256::NEG_ZERO)
    }
    fn min_value() -> Self {
        Wide(f256::MIN)
    }
    fn min_positive_value() -> Self {
        Wide(f256::MIN_POSITIVE)
    }
    fn max_value() -> Self {
        Wide(f256::MAX)
    }
    fn epsilon() -> Self {
        Wide(f256::EPSILON)
    }
    fn is_nan(self) -> bool {
        self.0.is_nan()
    }
    fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }
    fn is_finite(self) -> bool {
        self.0.is_finite()
    }
    fn is_normal(self) -> bool {
        self.0.is_normal()
    }
    fn classify(self) -> FpCategory {
        self.0.classify()
    }
    fn floor(self) -> Self {
        Wide(self.0.floor())
    }
    fn ceil(self) -> Self {
        Wide(self.0.ceil())
    }
    fn round(self) -> Self {
        Wide(self.0.round())
    }
    fn trunc(self) -> Self {
        Wide(self.0.trunc())
    }
    fn fract(self) -> Self {
        Wide(self.0.fract())
    }
    fn abs(self) -> Self {
        Wide(self.0.abs())
    }
    fn signum(self) -> Self {
        Wide(self.0.signum())
    }
    fn is_sign_positive(self) -> bool {
        self.0.is_sign_positive()
    }
    fn is_sign_negative(self) -> bool {
        self.0.is_sign_negative()
    }
    fn mul_add(self, a: Self, b: Self) -> Self {
        Wide(self.0.mul_add(a.0, b.0))
    }
    fn recip(self) -> Self {
        Wide(self.0.recip())
    }
    fn powi(self, n: i32) -> Self {
        Wide(f256::powi(&self.0, n))
    }
    fn powf(self, n: Self) -> Self {
        Wide(self.0.powf(&n.0))
    }
    fn sqrt(self) -> Self {
        Wide(self.0.sqrt())
    }
    fn exp(self) -> Self {
        Wide(self.0.exp())
    }
    fn exp2(self) -> Self {
        Wide(self.0.exp2())
    }
    fn ln(self) -> Self {
        Wide(self.0.ln())
    }
    fn log(self, base: Self) -> Self {
        Wide(self.0.log(&base.0))
    }
    fn log2(self) -> Self {
        Wide(self.0.log2())
    }
    fn log10(self) -> Self {
        Wide(self.0.log10())
    }
    fn max(self, other: Self) -> Self {
        Wide(self.0.max(other.0))
    }
    fn min(self, other: Self) -> Self {
        Wide(self.0.min(other.0))
    }
    fn abs_sub(self, other: Self) -> Self {
        if self <= other {
            Self::zero()
        } else {
            self - other
        }
    }
    fn cbrt(self) -> Self {
        Wide(self.0.cbrt())
    }
    fn hypot(self, other: Self) -> Self {
        Wide(self.0.hypot(other.0))
    }
    fn sin(self) -> Self {
        Wide(self.0.sin())
    }
    fn cos(self) -> Self {
        Wide(self.0.cos())
    }
    fn tan(self) -> Self {
        Wide(self.0.tan())
    }
    fn asin(self) -> Self {
        Wide(self.0.asin())
    }
    fn acos(self) -> Self {
        Wide(self.0.acos())
    }
    fn atan(self) -> Self {
        Wide(self.0.atan())
    }
    fn atan2(self, other: Self) -> Self {
        Wide(self.0.atan2(&other.0))
    }
    fn sin_cos(self) -> (Self, Self) {
        let (s, c) = self.0.sin_cos();
        (Wide(s), Wide(c))
    }
    fn exp_m1(self) -> Self {
        Wide(self.0.exp_m1())
    }
    fn ln_1p(self) -> Self {
        Wide(self.0.ln_1p())
    }
    fn sinh(self) -> Self {
        let e = self.exp();
        (e - e.recip()) / Self::from_f64(2.0).unwrap_or_else(Self::one)
    }
    fn cosh(self) -> Self {
        let e = self.exp();
        (e + e.recip()) / Self::from_f64(2.0).unwrap_or_else(Self::one)
    }
    fn tanh(self) -> Self {
        let e2 = (self + self).exp();
        (e2 - Self::one()) / (e2 + Self::one())
    }
    fn asinh(self) -> Self {
        let a = self.abs();
        let r = (a + (a * a + Self::one()).sqrt()).ln();
        if self.is_sign_negative() {
            -r
        } else {
            r
        }
    }
    fn acosh(self) -> Self {
        (self + (self * self - Self::one()).sqrt()).ln()
    }
    fn atanh(self) -> Self {
        let one = Self::one();
        ((one + self) / (one - self)).ln() / (one + one)
    }
    fn integer_decode(self) -> (u64, i16, i8) {
        self.to_f64_nearest().integer_decode()
    }
}

fn parse(s: &str) -> Wide {
    Wide(s.parse::<f256>().expect("valid constant literal"))
}

impl FloatConst for Wide {
    fn E() -> Self {
        Wide(Wide::one().0.exp())
    }
    fn FRAC_1_PI() -> Self {
        Wide::one() / Self::PI()
    }
    fn FRAC_1_SQRT_2() -> Self {
        Self::SQRT_2().recip()
    }
    fn FRAC_2_PI() -> Self {
        Wide::from_f64(2.0).unwrap() / Self::PI()
    }
    fn FRAC_2_SQRT_PI() -> Self {
        Wide::from_f64(2.0).unwrap() / Self::PI().sqrt()
    }
    fn FRAC_PI_2() -> Self {
        Self::PI() / Wide::from_f64(2.0).unwrap()
    }
    fn FRAC_PI_3() -> Self {
        Self::PI() / Wide::from_f64(3.0).unwrap()
    }
    fn FRAC_PI_4() -> Self {
        Self::PI() / Wide::from_f64(4.0).unwrap()
    }
    fn FRAC_PI_6() -> Self {
        Self::PI() / Wide::from_f64(6.0).unwrap()
    }
    fn FRAC_PI_8() -> Self {
        Self::PI() / Wide::from_f64(8.0).unwrap()
    }
    fn LN_10() -> Self {
        Wide::from_f64(10.0).unwrap().ln()
    }
    fn LN_2() -> Self {
        Wide::from_f64(2.0).unwrap().ln()
    }
    fn LOG10_E() -> Self {
        Self::LN_10().recip()
    }
    fn LOG2_E() -> Self {
        Self::LN_2().recip()
    }
    fn PI() -> Self {
        Wide(::f256::consts::PI)
    }
    fn SQRT_2() -> Self {
        Wide::from_f64(2.0).unwrap().sqrt()
    }
    fn TAU() -> Self {
        Self::PI() + Self::PI()
    }
    fn LOG10_2() -> Self {
        Self::LN_2() / Self::LN_10()
    }
    fn LOG2_10() -> Self {
        Self::LN_10() / Self::LN_2()
    }
}

pub(crate) fn parse_wide(s: &str) -> Wide {
    parse(s)
}

impl From<f64> for Wide {
    fn from(x: f64) -> Self {
        Wide(f256::from(x))
    }
}
