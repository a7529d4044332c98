//! Gauss–Hermite expectations over a normal variable.
//!
//! Nodes are found by Newton iteration on the orthonormal Hermite recurrence
//! and rescaled so that `Σ wᵢ f(μ + σ xᵢ) ≈ E f(X)` for `X ~ Normal(μ, σ)`.

use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};

use crate::math;
use crate::{Error, Result};

/// Node count used when none is given.
pub const DEFAULT_NODES: usize = 64;

/// Smallest accepted rule.
pub const MIN_NODES: usize = 8;

/// A Gauss–Hermite rule for the standard normal density.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    pub fn new(n: usize) -> Result<Self> {
        if n < MIN_NODES {
            return Err(Error::TooFewNodes { nodes: n, min: MIN_NODES });
        }
        const PIM4: f64 = 0.751_125_544_464_942_5; // pi^(-1/4)
        const MAX_ITER: usize = 100;
        let nf = n as f64;
        let half = n.div_ceil(2);
        let mut z_roots = alloc::vec![0.0; n];
        let mut w_roots = alloc::vec![0.0; n];
        let mut z = 0.0;
        for i in 0..half {
            z = match i {
                0 => math::sqrt(2.0 * nf + 1.0) - 1.855_75 * math::pow(2.0 * nf + 1.0, -0.166_67),
                1 => z - 1.14 * math::pow(nf, 0.426) / z,
                2 => 1.86 * z - 0.86 * z_roots[0],
                3 => 1.91 * z - 0.91 * z_roots[1],
                _ => 2.0 * z - z_roots[i - 2],
            };
            let mut pp = 0.0;
            for _ in 0..MAX_ITER {
                let (mut p1, mut p2) = (PIM4, 0.0);
                for j in 0..n {
                    let p3 = p2;
                    p2 = p1;
                    let jf = j as f64;
                    p1 = z * math::sqrt(2.0 / (jf + 1.0)) * p2 - math::sqrt(jf / (jf + 1.0)) * p3;
                }
                pp = math::sqrt(2.0 * nf) * p2;
                let prev = z;
                z = prev - p1 / pp;
                if (z - prev).abs() <= 1e-15 * z.abs().max(1.0) {
                    break;
                }
            }
            z_roots[i] = z;
            z_roots[n - 1 - i] = -z;
            w_roots[i] = 2.0 / (pp * pp);
            w_roots[n - 1 - i] = w_roots[i];
        }
        // Roots come out largest first; store ascending.
        let sqrt_pi = math::sqrt(PI);
        let nodes = z_roots.iter().rev().map(|z| SQRT_2 * z).collect();
        let weights = w_roots.iter().rev().map(|w| w / sqrt_pi).collect();
        Ok(GaussHermite { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Standard-normal nodes, ascending.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights summing to one.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `E f(X)` for `X ~ Normal(mu, sigma)`.
    pub fn expectation<F>(&self, mu: f64, sigma: f64, mut f: F) -> Result<f64>
    where
        F: FnMut(f64) -> f64,
    {
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let u = mu + sigma * x;
            let v = f(u);
            if !v.is_finite() {
                return Err(Error::NonFinite { node: u });
            }
            acc += w * v;
        }
        Ok(acc)
    }
}

/// `E f(X)` for `X ~ Normal(mu, sigma)` with an `nodes`-point rule.
pub fn normal_expectation<F>(f: F, mu: f64, sigma: f64, nodes: usize) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    GaussHermite::new(nodes)?.expectation(mu, sigma, f)
}
