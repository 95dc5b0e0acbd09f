//! Small dense and banded linear algebra.

use alloc::vec;
use alloc::vec::Vec;

use crate::{math, Error, Result};

/// Eigenvalues (ascending) and column eigenvectors of a symmetric matrix
/// stored row-major, by cyclic Jacobi rotations.
pub fn symmetric_eigen(a: &[f64], n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if a.len() != n * n {
        return Err(Error::DimensionMismatch { expected: n * n, found: a.len() });
    }
    let mut m = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = m.iter().fold(0.0f64, |s, x| s.max(x.abs())).max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| m[i * n + j] * m[i * n + j]).sum();
        if math::sqrt(off) <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + math::sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / math::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k * n + p], m[k * n + q]);
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p * n + k], m[q * n + k]);
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].total_cmp(&m[j * n + j]));
    let values = order.iter().map(|&i| m[i * n + i]).collect();
    let mut vectors = vec![0.0; n * n];
    for (col, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors[r * n + col] = v[r * n + src];
        }
    }
    Ok((values, vectors))
}

/// Band matrix with `bw` sub- and super-diagonals, LU-factored in place
/// without pivoting. Only valid for matrices whose leading minors are
/// nonsingular, e.g. symmetric positive definite ones.
#[derive(Debug, Clone)]
pub struct BandLu {
    n: usize,
    bw: usize,
    // row i holds columns i-bw ..= i+bw at offsets 0..=2bw
    data: Vec<f64>,
}

impl BandLu {
    pub fn zeros(n: usize, bw: usize) -> Self {
        Self { n, bw, data: vec![0.0; n * (2 * bw + 1)] }
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i.abs_diff(j) <= self.bw);
        let w = 2 * self.bw + 1;
        self.data[i * w + j + self.bw - i] += v;
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * (2 * self.bw + 1) + j + self.bw - i]
    }

    fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        let w = 2 * self.bw + 1;
        &mut self.data[i * w + j + self.bw - i]
    }

    pub fn factor(mut self) -> Result<Self> {
        let (n, bw) = (self.n, self.bw);
        for k in 0..n {
            let piv = self.at(k, k);
            if piv.abs() < 1e-300 || !piv.is_finite() {
                return Err(Error::InvalidParameter("singular band matrix".into()));
            }
            for i in k + 1..(k + bw + 1).min(n) {
                let l = self.at(i, k) / piv;
                *self.at_mut(i, k) = l;
                for j in k + 1..(k + bw + 1).min(n) {
                    let ukj = self.at(k, j);
                    *self.at_mut(i, j) -= l * ukj;
                }
            }
        }
        Ok(self)
    }

    /// Solves with a factored matrix.
    pub fn solve(&self, rhs: &mut [f64]) {
        let (n, bw) = (self.n, self.bw);
        for i in 0..n {
            let mut s = rhs[i];
            for j in i.saturating_sub(bw)..i {
                s -= self.at(i, j) * rhs[j];
            }
            rhs[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = rhs[i];
            for j in i + 1..(i + bw + 1).min(n) {
                s -= self.at(i, j) * rhs[j];
            }
            rhs[i] = s / self.at(i, i);
        }
    }
}

/// Least-squares line `y ≈ slope·x + intercept`; `None` for fewer than two
/// distinct abscissae.
pub fn line_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let n = xs.len().min(ys.len());
    if n < 2 {
        return None;
    }
    let mx = xs[..n].iter().sum::<f64>() / n as f64;
    let my = ys[..n].iter().sum::<f64>() / n as f64;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for i in 0..n {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if sxx <= 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}
