use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{css_amplitudes, SymmetricState};
use crate::linalg::inner;

/// Q(θ₀, φ₀) = |⟨θ₀, φ₀|ψ⟩|² for each grid point.
pub fn husimi_q(state: &SymmetricState, grid: &[(f64, f64)]) -> Vec<f64> {
    let n = state.n_particles();
    grid.iter()
        .map(|&(theta, phi)| {
            let probe = css_amplitudes(n, theta.clamp(0.0, PI), phi);
            inner(&probe, state.amplitudes()).norm_sqr()
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureNode {
    pub theta: f64,
    pub phi: f64,
    /// Solid-angle weight; all weights sum to 4π.
    pub weight: f64,
}

/// Gauss-Legendre in cosθ times a uniform φ rule.
pub fn sphere_quadrature(n_theta: usize, n_phi: usize) -> Vec<QuadratureNode> {
    let (x, w) = gauss_legendre(n_theta.max(1));
    let dphi = 2.0 * PI / n_phi.max(1) as f64;
    let mut nodes = Vec::with_capacity(x.len() * n_phi);
    for (xi, wi) in x.iter().zip(w.iter()) {
        let theta = libm::acos(xi.clamp(-1.0, 1.0));
        for k in 0..n_phi {
            nodes.push(QuadratureNode { theta, phi: dphi * k as f64, weight: wi * dphi });
        }
    }
    nodes
}

/// ((N+1)/4π) ∫ Q dΩ; equals 1 for any normalized state.
pub fn husimi_total(state: &SymmetricState, n_theta: usize, n_phi: usize) -> f64 {
    let nodes = sphere_quadrature(n_theta, n_phi);
    let grid: Vec<(f64, f64)> = nodes.iter().map(|q| (q.theta, q.phi)).collect();
    let q = husimi_q(state, &grid);
    let total: f64 = q.iter().zip(nodes.iter()).map(|(v, node)| v * node.weight).sum();
    (state.n_particles() as f64 + 1.0) / (4.0 * PI) * total
}

/// Nodes and weights on [-1, 1] by Newton iteration on P_n.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    let nf = n as f64;
    for i in 0..n {
        let mut z = libm::cos(PI * (i as f64 + 0.75) / (nf + 0.5));
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let step = p / d;
            z -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d.is_finite() {
            dp = d;
        }
        x.push(z);
        w.push(2.0 / ((1.0 - z * z) * dp * dp));
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}
