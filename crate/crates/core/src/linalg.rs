//! Dense determinants for the small kernel matrices.

use crate::real::Real;

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Square<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> Square<T> {
    pub fn zeros(n: usize) -> Self {
        Square {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = f(i, j);
            }
        }
        m
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn set_row(&mut self, i: usize, row: &[T]) {
        self.data[i * self.n..(i + 1) * self.n].copy_from_slice(row);
    }

    /// Matrix with row `i` and column `j` removed.
    pub fn minor(&self, i: usize, j: usize) -> Self {
        let n = self.n;
        let mut out = Vec::with_capacity((n - 1) * (n - 1));
        for r in 0..n {
            if r == i {
                continue;
            }
            for c in 0..n {
                if c != j {
                    out.push(self.get(r, c));
                }
            }
        }
        Square { n: n - 1, data: out }
    }

    /// Signed cofactor `(-1)^{i+j} det(minor(i, j))`.
    pub fn cofactor(&self, i: usize, j: usize) -> T {
        let d = if self.n == 1 { T::one() } else { self.minor(i, j).det() };
        if (i + j) % 2 == 0 {
            d
        } else {
            -d
        }
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> T {
        let e = self.det_equilibrated();
        e.mantissa * T::lit(2.0).powi(e.log2 as i32)
    }

    /// Determinant of the matrix after scaling every row by a power of two
    /// so that its largest entry lies in `[1, 2)`.
    pub fn det_equilibrated(&self) -> ScaledDet<T> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut log2 = 0i64;
        for i in 0..n {
            let big = a[i * n..(i + 1) * n].iter().fold(T::zero(), |m, v| m.max(v.abs()));
            if big == T::zero() || !big.is_finite() {
                return ScaledDet {
                    mantissa: if big == T::zero() { T::zero() } else { T::nan() },
                    log2: 0,
                };
            }
            let e = big.log2().floor().to_i64().unwrap_or(0);
            let s = T::lit(2.0).powi(-e as i32);
            for v in &mut a[i * n..(i + 1) * n] {
                *v *= s;
            }
            log2 += e;
        }
        ScaledDet {
            mantissa: lu_det(&mut a, n),
            log2,
        }
    }
}

/// A determinant held as `mantissa · 2^log2`.
#[derive(Debug, Clone, Copy)]
pub struct ScaledDet<T> {
    pub mantissa: T,
    pub log2: i64,
}

impl<T: Real> ScaledDet<T> {
    pub fn value(&self) -> T {
        self.mantissa * T::lit(2.0).powi(self.log2 as i32)
    }
}

fn lu_det<T: Real>(a: &mut [T], n: usize) -> T {
    let mut det = T::one();
    for k in 0..n {
        let mut piv = k;
        let mut best = a[k * n + k].abs();
        for r in k + 1..n {
            let v = a[r * n + k].abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == T::zero() {
            return T::zero();
        }
        if piv != k {
            for c in 0..n {
                a.swap(k * n + c, piv * n + c);
            }
            det = -det;
        }
        let d = a[k * n + k];
        det *= d;
        for r in k + 1..n {
            let f = a[r * n + k] / d;
            if f == T::zero() {
                continue;
            }
            for c in k + 1..n {
                let v = a[k * n + c];
                a[r * n + c] -= f * v;
            }
        }
    }
    det
}
