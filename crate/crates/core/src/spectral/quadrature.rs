//! Product quadrature on the closed upper half-sphere.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::legendre::gauss_legendre;
use crate::{math, Error, Result};

/// Gauss–Legendre in `cos θ ∈ [0, 1]` times the uniform rule in `φ`.
/// With `order` polar nodes and `2·order` azimuthal nodes it integrates
/// `ω₃ᵃ · sinᵇθ · e^{ikφ}` exactly when the `cos θ`-degree is below
/// `2·order` and `|k| < 2·order`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    order: usize,
    nodes: Vec<[f64; 3]>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidParameter("quadrature order must be at least 1".into()));
        }
        let (xs, ws) = gauss_legendre(order, 0.0, 1.0);
        let naz = 2 * order;
        let dphi = core::f64::consts::TAU / naz as f64;
        let mut nodes = Vec::with_capacity(order * naz);
        let mut weights = Vec::with_capacity(order * naz);
        for (x, w) in xs.iter().zip(&ws) {
            let s = math::sqrt(1.0 - x * x);
            for j in 0..naz {
                let phi = j as f64 * dphi;
                nodes.push([s * math::cos(phi), s * math::sin(phi), *x]);
                weights.push(w * dphi);
            }
        }
        Ok(Self { order, nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nodes(&self) -> &[[f64; 3]] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, mut f: impl FnMut(&[f64; 3]) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(p, w)| w * f(p)).sum()
    }
}
