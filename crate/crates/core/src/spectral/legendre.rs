//! Fully normalized associated Legendre functions with the `sinᵐθ` factor
//! removed, and Gauss–Legendre nodes.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;

/// `Q_l^m(x)` for `l = m..=l_max`, where the orthonormal full-sphere real
/// harmonic is `√2 · Q_l^m(cos θ) · sinᵐθ · cos(mφ)` (`m > 0`) and
/// `Q_l^0(cos θ)` for `m = 0`. No Condon–Shortley phase.
pub fn reduced_legendre(m: u32, l_max: u32, x: f64) -> Vec<f64> {
    if l_max < m {
        return Vec::new();
    }
    let mut out = vec![0.0; (l_max - m + 1) as usize];
    let mut qmm = 1.0 / math::sqrt(4.0 * core::f64::consts::PI);
    for k in 1..=m {
        let k = k as f64;
        qmm *= math::sqrt((2.0 * k + 1.0) / (2.0 * k));
    }
    out[0] = qmm;
    if l_max == m {
        return out;
    }
    let mf = m as f64;
    out[1] = math::sqrt(2.0 * mf + 3.0) * x * qmm;
    for l in m + 2..=l_max {
        let lf = l as f64;
        let a = math::sqrt((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf));
        let lp = lf - 1.0;
        let b = math::sqrt((lp * lp - mf * mf) / (4.0 * lp * lp - 1.0));
        let i = (l - m) as usize;
        out[i] = a * (x * out[i - 1] - b * out[i - 2]);
    }
    out
}

/// Legendre polynomial `P_n(x)` and its derivative.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}

/// Gauss–Legendre nodes and weights on `[a, b]`, nodes ascending.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    for i in 0..n {
        let mut x = math::cos(core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        // x runs from near +1 downwards; store ascending.
        nodes[n - 1 - i] = mid + half * x;
        weights[n - 1 - i] = half * 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}
