//! Coefficient vectors, projection and the kernel split.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::basis::{eval_mode, ModeBasis};
use super::quadrature::QuadratureRule;
use crate::{math, Error, Result};

/// Modes spanning the kernel of `½Δ(Δ+2)`: `1`, `ω₂`, `ω₁`.
pub const KERNEL_MODES: [(u32, i32); 3] = [(0, 0), (1, -1), (1, 1)];

/// A function `Σ c_k φ_k` in a shared [`ModeBasis`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    basis: Arc<ModeBasis>,
    coeffs: Vec<f64>,
}

impl SpectralField {
    pub fn new(basis: Arc<ModeBasis>, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != basis.len() {
            return Err(Error::DimensionMismatch { expected: basis.len(), found: coeffs.len() });
        }
        Ok(Self { basis, coeffs })
    }

    pub fn zeros(basis: Arc<ModeBasis>) -> Self {
        let n = basis.len();
        Self { basis, coeffs: vec![0.0; n] }
    }

    /// The unit field on mode `(l, m)`.
    pub fn mode(basis: Arc<ModeBasis>, l: u32, m: i32) -> Result<Self> {
        let k = basis
            .index_of(l, m)
            .ok_or_else(|| Error::InvalidParameter(alloc::format!("mode ({l}, {m}) is not in the basis")))?;
        let mut f = Self::zeros(basis);
        f.coeffs[k] = 1.0;
        Ok(f)
    }

    pub fn basis(&self) -> &Arc<ModeBasis> {
        &self.basis
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn same_basis(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.basis, &other.basis) || self.basis == other.basis
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.same_basis(other) {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| a * x + b * y).collect();
        Ok(Self { basis: self.basis.clone(), coeffs })
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { basis: self.basis.clone(), coeffs: self.coeffs.iter().map(|c| s * c).collect() }
    }

    /// `L²(S²₊)` norm; exact because the basis is orthonormal.
    pub fn l2_norm(&self) -> f64 {
        math::sqrt(self.coeffs.iter().map(|c| c * c).sum())
    }

    pub fn eval(&self, omega: &[f64; 3]) -> Result<f64> {
        let mut acc = 0.0;
        for (m, c) in self.basis.modes().iter().zip(&self.coeffs) {
            if *c != 0.0 {
                acc += c * eval_mode(m, omega)?;
            }
        }
        Ok(acc)
    }

    /// `(f∥, f⊥)`: `f∥` keeps the coefficients of the kernel modes, `f⊥` the rest.
    pub fn split_parallel_perp(&self) -> Result<(Self, Self)> {
        let mut par = Self::zeros(self.basis.clone());
        let mut perp = self.clone();
        for (l, m) in KERNEL_MODES {
            let k = self.basis.index_of(l, m).ok_or(Error::MissingKernelMode { l, m })?;
            par.coeffs[k] = self.coeffs[k];
            perp.coeffs[k] = 0.0;
        }
        Ok((par, perp))
    }
}

/// Precomputed mode values on quadrature nodes.
#[derive(Debug, Clone)]
pub struct Projector {
    basis: Arc<ModeBasis>,
    rule: QuadratureRule,
    // table[k * nodes + q] = φ_k(node_q)
    table: Vec<f64>,
    gram_deviation: f64,
}

impl Projector {
    /// Fails with [`Error::InsufficientQuadrature`] when the discrete Gram
    /// matrix deviates from the identity by more than `1e-8` (Frobenius).
    pub fn new(basis: Arc<ModeBasis>, rule: QuadratureRule) -> Result<Self> {
        let nq = rule.len();
        let mut table = Vec::with_capacity(basis.len() * nq);
        for m in basis.modes() {
            for p in rule.nodes() {
                table.push(eval_mode(m, p)?);
            }
        }
        let mut p = Self { basis, rule, table, gram_deviation: 0.0 };
        p.gram_deviation = p.gram_deviation_frobenius();
        if !(p.gram_deviation <= 1e-8) {
            return Err(Error::InsufficientQuadrature { deviation: p.gram_deviation });
        }
        Ok(p)
    }

    /// Rule of order `2·l_max + 2`.
    pub fn for_basis(basis: Arc<ModeBasis>) -> Result<Self> {
        let order = 2 * basis.l_max() as usize + 2;
        Self::new(basis, QuadratureRule::new(order)?)
    }

    pub fn basis(&self) -> &Arc<ModeBasis> {
        &self.basis
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    fn row(&self, k: usize) -> &[f64] {
        let nq = self.rule.len();
        &self.table[k * nq..(k + 1) * nq]
    }

    /// Discrete Gram matrix, row-major.
    pub fn gram(&self) -> Vec<f64> {
        let n = self.basis.len();
        let w = self.rule.weights();
        let mut g = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let s: f64 = self.row(i).iter().zip(self.row(j)).zip(w).map(|((a, b), w)| a * b * w).sum();
                g[i * n + j] = s;
                g[j * n + i] = s;
            }
        }
        g
    }

    fn gram_deviation_frobenius(&self) -> f64 {
        let n = self.basis.len();
        let g = self.gram();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                let d = g[i * n + j] - if i == j { 1.0 } else { 0.0 };
                s += d * d;
            }
        }
        math::sqrt(s)
    }

    pub fn gram_deviation(&self) -> f64 {
        self.gram_deviation
    }

    /// `c_k = ⟨φ_k, f⟩` by quadrature.
    pub fn project(&self, mut f: impl FnMut(&[f64; 3]) -> f64) -> SpectralField {
        let values: Vec<f64> = self.rule.nodes().iter().map(&mut f).collect();
        self.project_values(&values)
    }

    /// Projection of values already sampled on the quadrature nodes.
    pub fn project_values(&self, values: &[f64]) -> SpectralField {
        let w = self.rule.weights();
        let coeffs = (0..self.basis.len())
            .map(|k| self.row(k).iter().zip(values).zip(w).map(|((p, v), w)| p * v * w).sum())
            .collect();
        SpectralField { basis: self.basis.clone(), coeffs }
    }

    /// Field values on the quadrature nodes.
    pub fn synthesize(&self, field: &SpectralField) -> Result<Vec<f64>> {
        if !(Arc::ptr_eq(&self.basis, &field.basis) || *self.basis == *field.basis) {
            return Err(Error::BasisMismatch);
        }
        let mut out = vec![0.0; self.rule.len()];
        for (k, c) in field.coeffs.iter().enumerate() {
            if *c != 0.0 {
                for (o, p) in out.iter_mut().zip(self.row(k)) {
                    *o += c * p;
                }
            }
        }
        Ok(out)
    }

    /// `max |f|` over the quadrature nodes.
    pub fn sup_on_nodes(&self, field: &SpectralField) -> Result<f64> {
        Ok(self.synthesize(field)?.iter().fold(0.0, |m, v| m.max(v.abs())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn projector(l_max: u32) -> Projector {
        Projector::for_basis(Arc::new(ModeBasis::enumerate(l_max).unwrap())).unwrap()
    }

    #[test]
    fn gram_is_identity() {
        let p = Projector::new(Arc::new(ModeBasis::enumerate(8).unwrap()), QuadratureRule::new(20).unwrap()).unwrap();
        assert!(p.gram_deviation() < 1e-8);
    }

    #[test]
    fn coarse_rule_is_rejected() {
        let b = Arc::new(ModeBasis::enumerate(8).unwrap());
        let r = Projector::new(b, QuadratureRule::new(3).unwrap());
        assert!(matches!(r, Err(Error::InsufficientQuadrature { .. })));
    }

    #[test]
    fn projection_examples() {
        let p = projector(4);
        let b = p.basis().clone();
        for k in 0..b.len() {
            let m = b.modes()[k];
            let c = p.project(|w| eval_mode(&m, w).unwrap());
            for (i, v) in c.coeffs().iter().enumerate() {
                assert!((v - if i == k { 1.0 } else { 0.0 }).abs() < 1e-10);
            }
        }
        let c = p.project(|w| w[0]);
        let k11 = b.index_of(1, 1).unwrap();
        for (i, v) in c.coeffs().iter().enumerate() {
            let e = if i == k11 { (2.0 * core::f64::consts::PI / 3.0).sqrt() } else { 0.0 };
            assert!((v - e).abs() < 1e-12);
        }
        let c = p.project(|w| w[2]);
        assert!((c.coeffs()[0] - (core::f64::consts::PI / 2.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn split_examples() {
        let p = projector(3);
        let b = p.basis().clone();
        let f = SpectralField::mode(b.clone(), 0, 0).unwrap();
        let (par, perp) = f.split_parallel_perp().unwrap();
        assert_eq!(par, f);
        assert_eq!(perp.l2_norm(), 0.0);
        let f = SpectralField::mode(b.clone(), 2, 2).unwrap();
        let (par, perp) = f.split_parallel_perp().unwrap();
        assert_eq!(par.l2_norm(), 0.0);
        assert_eq!(perp, f);
        let f = p.project(|w| 1.0 + w[0]);
        let (_, perp) = f.split_parallel_perp().unwrap();
        assert!(perp.l2_norm() < 1e-10);
        let (par, _) = f.split_parallel_perp().unwrap();
        let (par2, _) = par.split_parallel_perp().unwrap();
        assert_eq!(par, par2);
    }

    #[test]
    fn split_needs_kernel_modes() {
        let b = Arc::new(ModeBasis::enumerate(0).unwrap());
        let f = SpectralField::zeros(b);
        assert!(matches!(f.split_parallel_perp(), Err(Error::MissingKernelMode { l: 1, m: -1 })));
    }

    #[test]
    fn basis_mismatch_is_reported() {
        let a = SpectralField::zeros(Arc::new(ModeBasis::enumerate(1).unwrap()));
        let b = SpectralField::zeros(Arc::new(ModeBasis::enumerate(2).unwrap()));
        assert_eq!(a.combine(1.0, &b, 1.0), Err(Error::BasisMismatch));
    }
}
