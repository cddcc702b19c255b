//! Small dense complex matrices for the channel simulator.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn mul(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = CMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn scale(&self, s: f64) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, rhs: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    /// Lower-triangular `L` with `L L† = self` for Hermitian positive definite input.
    pub fn cholesky(&self) -> Result<CMat> {
        let n = self.rows;
        assert_eq!(n, self.cols);
        let mut l = CMat::zeros(n, n);
        for j in 0..n {
            let mut d = self[(j, j)].re;
            for k in 0..j {
                d -= l[(j, k)].norm_sqr();
            }
            if !(d > 0.0) {
                return Err(Error::Numerical {
                    op: "cholesky",
                    detail: format!("non-positive pivot {d} at {j}"),
                });
            }
            let d = d.sqrt();
            l[(j, j)] = Complex64::new(d, 0.0);
            for i in (j + 1)..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = s / d;
            }
        }
        Ok(l)
    }

    /// Solves `L X = B` for lower-triangular `L = self`.
    pub fn forward_solve(&self, b: &CMat) -> CMat {
        let n = self.rows;
        let mut x = b.clone();
        for c in 0..b.cols {
            for i in 0..n {
                let mut s = x[(i, c)];
                for k in 0..i {
                    s -= self[(i, k)] * x[(k, c)];
                }
                x[(i, c)] = s / self[(i, i)];
            }
        }
        x
    }

    /// Solves `L† X = B` for lower-triangular `L = self`.
    pub fn backward_solve_adjoint(&self, b: &CMat) -> CMat {
        let n = self.rows;
        let mut x = b.clone();
        for c in 0..b.cols {
            for i in (0..n).rev() {
                let mut s = x[(i, c)];
                for k in (i + 1)..n {
                    s -= self[(k, i)].conj() * x[(k, c)];
                }
                x[(i, c)] = s / self[(i, i)].conj();
            }
        }
        x
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigenvalues (descending) and unit eigenvectors of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<Complex64>>,
}

/// Cyclic Jacobi on the real symmetric embedding `[[Re, -Im], [Im, Re]]`.
///
/// Every eigenvalue of the embedding appears twice; one copy per pair is kept.
pub fn hermitian_eigen(m: &CMat) -> Result<HermitianEigen> {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let nn = 2 * n;
    let mut a = vec![0.0; nn * nn];
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            a[i * nn + j] = z.re;
            a[(i + n) * nn + j + n] = z.re;
            a[(i + n) * nn + j] = z.im;
            a[i * nn + j + n] = -z.im;
        }
    }
    let (vals, vecs) = jacobi_symmetric(&mut a, nn)?;
    let mut order: Vec<usize> = (0..nn).collect();
    order.sort_by(|&x, &y| vals[y].partial_cmp(&vals[x]).unwrap());
    // Every eigenvalue appears twice, with partners v and i·v. Within a
    // cluster of equal eigenvalues pick complex-orthonormal directions greedily.
    let top = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-10 * top.max(f64::MIN_POSITIVE);
    let column = |k: usize| -> Vec<Complex64> {
        (0..n).map(|i| Complex64::new(vecs[i * nn + k], vecs[(i + n) * nn + k])).collect()
    };
    let mut values = Vec::with_capacity(n);
    let mut vectors: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut start = 0;
    while start < nn {
        let mut end = start + 1;
        while end < nn && vals[order[end - 1]] - vals[order[end]] <= tol {
            end += 1;
        }
        if (end - start) % 2 == 1 {
            return Err(Error::Numerical {
                op: "hermitian_eigen",
                detail: "could not separate eigenvector pairs".into(),
            });
        }
        let first = vectors.len();
        let mut pool: Vec<Vec<Complex64>> = order[start..end].iter().map(|&k| column(k)).collect();
        for _ in 0..(end - start) / 2 {
            for v in pool.iter_mut() {
                for w in &vectors[first..] {
                    let dot: Complex64 = w.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                    for (x, y) in v.iter_mut().zip(w) {
                        *x -= dot * y;
                    }
                }
            }
            let norms: Vec<f64> = pool.iter().map(|v| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
            let best = (0..pool.len()).max_by(|&x, &y| norms[x].total_cmp(&norms[y])).unwrap();
            let v = pool.swap_remove(best);
            values.push(vals[order[start]]);
            vectors.push(v.into_iter().map(|z| z / norms[best]).collect());
        }
        start = end;
    }
    Ok(HermitianEigen { values, vectors })
}

// Returns eigenvalues and the column-major accumulated rotations (row i, column k at i*n + k).
fn jacobi_symmetric(a: &mut [f64], n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if scale == 0.0 {
        return Ok((vec![0.0; n], v));
    }
    for sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            return Ok(((0..n).map(|i| a[i * n + i]).collect(), v));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                // below rounding of both diagonal entries: drop it
                let g = 100.0 * apq.abs();
                if sweep > 3 && a[p * n + p].abs() + g == a[p * n + p].abs() && a[q * n + q].abs() + g == a[q * n + q].abs() {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    Err(Error::Numerical {
        op: "jacobi",
        detail: "no convergence in 100 sweeps".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cholesky_reconstructs() {
        let a = CMat::from_fn(3, 3, |i, j| match (i, j) {
            (0, 0) => c(4.0, 0.0),
            (1, 1) => c(5.0, 0.0),
            (2, 2) => c(6.0, 0.0),
            (0, 1) => c(1.0, 1.0),
            (1, 0) => c(1.0, -1.0),
            (1, 2) => c(0.5, -0.2),
            (2, 1) => c(0.5, 0.2),
            _ => c(0.0, 0.0),
        });
        let l = a.cholesky().unwrap();
        let r = l.mul(&l.adjoint());
        for (x, y) in r.data().iter().zip(a.data()) {
            assert!((x - y).norm() < 1e-14);
        }
        let b = CMat::from_fn(3, 1, |i, _| c(i as f64, 1.0));
        let x = l.backward_solve_adjoint(&l.forward_solve(&b));
        let back = a.mul(&x);
        for (x, y) in back.data().iter().zip(b.data()) {
            assert!((x - y).norm() < 1e-13);
        }
    }

    #[test]
    fn eigen_of_known_hermitian() {
        // [[2, i], [-i, 2]] has eigenvalues 3 and 1
        let m = CMat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => c(0.0, 1.0),
            (1, 0) => c(0.0, -1.0),
            _ => c(2.0, 0.0),
        });
        let e = hermitian_eigen(&m).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        let mv = m.mul_vec(&e.vectors[0]);
        for (x, y) in mv.iter().zip(&e.vectors[0]) {
            assert!((x - y * 3.0).norm() < 1e-13);
        }
    }

    #[test]
    fn degenerate_spectrum() {
        let e = hermitian_eigen(&CMat::identity(3).scale(2.0)).unwrap();
        assert_eq!(e.values.len(), 3);
        assert!(e.values.iter().all(|v| (v - 2.0).abs() < 1e-15));

        let u = CMat::from_fn(4, 1, |i, _| Complex64::new(i as f64 + 1.0, 0.5 - i as f64));
        let m = u.mul(&u.adjoint());
        let e = hermitian_eigen(&m).unwrap();
        for (i, v) in e.vectors.iter().enumerate() {
            let mv = m.mul_vec(v);
            for (x, y) in mv.iter().zip(v) {
                assert!((x - y * e.values[i]).norm() < 1e-12);
            }
            for w in &e.vectors[..i] {
                let dot: Complex64 = w.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
                assert!(dot.norm() < 1e-12);
            }
        }
    }
}
