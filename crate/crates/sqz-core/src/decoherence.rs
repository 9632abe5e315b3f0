//! Independent single-spin channels acting on exchange-symmetric parity
//! states, tracked through the single-spin and pair moments.
//!
//! Basis convention: |0⟩ has σ_z = +1, |1⟩ has σ_z = -1. Amplitude damping
//! drives every spin toward |1⟩, i.e. E₁ = √p |1⟩⟨0|.

use crate::dicke::{LocalMoments, MomentSet};
use crate::error::{Result, SqzError};
use crate::metrics::{parity_shortcuts, ParityShortcuts};
use crate::roots::bisect;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ChannelKind {
    /// amplitude damping
    Adc,
    /// phase damping
    Pdc,
    /// depolarizing
    Dpc,
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChannelSpec {
    pub kind: ChannelKind,
    pub p: f64,
}

impl ChannelSpec {
    pub fn new(kind: ChannelKind, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(SqzError::OutOfRange { name: "decoherence strength p", value: p });
        }
        Ok(ChannelSpec { kind, p })
    }

    /// s = 1 - p
    pub fn survival(&self) -> f64 {
        1.0 - self.p
    }
}

/// Moments after every spin passes through the channel once.
///
/// Valid for any exchange-symmetric input; ⟨σ₁·σ₂⟩ is carried through its
/// transverse part ⟨σ₁ₓσ₂ₓ + σ₁ᵧσ₂ᵧ⟩ = sdots - szsz.
pub fn apply_channel(lm: &LocalMoments, ch: &ChannelSpec) -> LocalMoments {
    let s = ch.survival();
    let p = ch.p;
    let transverse = lm.sdots - lm.szsz;
    let (sz, szsz, spsm, smsm, transverse) = match ch.kind {
        ChannelKind::Adc => (
            s * lm.sz - p,
            s * s * lm.szsz - 2.0 * s * p * lm.sz + p * p,
            s * lm.spsm,
            lm.smsm * s,
            s * transverse,
        ),
        ChannelKind::Pdc => (lm.sz, lm.szsz, s * s * lm.spsm, lm.smsm * (s * s), s * s * transverse),
        ChannelKind::Dpc => (s * lm.sz, s * s * lm.szsz, s * s * lm.spsm, lm.smsm * (s * s), s * s * transverse),
    };
    LocalMoments { n_particles: lm.n_particles, sz, szsz, spsm, smsm, sdots: transverse + szsz }
}

/// C_r' = 2(N-1)(|⟨σ₁₋σ₂₋⟩| - (1 - ⟨σ₁zσ₂z⟩)/4); the rescaled concurrence is max(0, C_r').
pub fn rescaled_concurrence_prime(lm: &LocalMoments) -> f64 {
    let n = lm.n_particles as f64;
    2.0 * (n - 1.0) * (lm.smsm.norm() - 0.25 * (1.0 - lm.szsz))
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DecoheredSqueezing {
    #[cfg_attr(feature = "serde", serde(rename = "xi_S2"))]
    pub xi_s2: f64,
    #[cfg_attr(feature = "serde", serde(rename = "xi_R2"))]
    pub xi_r2: Option<f64>,
    pub tilde_xi_e2: f64,
    pub cr_prime: f64,
    pub cr: f64,
}

const DENOM_EPS: f64 = 1e-12;

fn initial_scalars(lm0: &LocalMoments) -> (f64, f64, f64, f64) {
    let n = lm0.n_particles as f64;
    let cr0 = rescaled_concurrence_prime(lm0).max(0.0);
    let x0 = 1.0 + 2.0 * lm0.sz + lm0.szsz;
    let a0 = (n - 1.0) * (1.0 - lm0.szsz);
    (n, cr0, x0, a0)
}

/// Closed-form squeezing and concurrence after the channel.
///
/// Precondition: the initial state satisfies ξ_S²(0) = 1 - C_r(0), as the
/// one-axis-twisted family does. For other inputs use [`decohered_general`].
pub fn decohered_squeezing(lm0: &LocalMoments, ch: &ChannelSpec) -> DecoheredSqueezing {
    let (n, cr0, x0, a0) = initial_scalars(lm0);
    let s = ch.survival();
    let p = ch.p;
    let sz0 = lm0.sz;
    let (xi_s2, mean, e_den, cr_prime) = match ch.kind {
        ChannelKind::Adc => {
            let spx = s * p * x0;
            (1.0 - s * cr0, s * sz0 - p, 1.0 - (1.0 - 1.0 / n) * spx, s * cr0 - (n - 1.0) * spx / 2.0)
        }
        ChannelKind::Pdc => (
            1.0 - s * s * cr0,
            sz0,
            (1.0 - 1.0 / n) * (s * s + (1.0 - s * s) * lm0.szsz) + 1.0 / n,
            s * s * cr0 + a0 * (s * s - 1.0) / 2.0,
        ),
        ChannelKind::Dpc => (
            1.0 - s * s * cr0,
            s * sz0,
            (1.0 - 1.0 / n) * s * s + 1.0 / n,
            s * s * cr0 + (n - 1.0) / 2.0 * (s * s - 1.0),
        ),
    };
    let xi_r2 = if mean * mean > DENOM_EPS { Some(xi_s2 / (mean * mean)) } else { None };
    DecoheredSqueezing { xi_s2, xi_r2, tilde_xi_e2: xi_s2 / e_den, cr_prime, cr: cr_prime.max(0.0) }
}

/// Evolve the moments, then evaluate the parity-state parameters; no
/// restriction on the initial state beyond parity and exchange symmetry.
pub fn decohered_general(lm0: &LocalMoments, ch: &ChannelSpec) -> (ParityShortcuts, f64) {
    let lm = apply_channel(lm0, ch);
    (parity_shortcuts(&lm), rescaled_concurrence_prime(&lm))
}

/// Critical strengths for the concurrence, ξ_R² and tilde ξ_E².
///
/// p = 1 means the quantity survives for every p < 1.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SuddenDeathReport {
    pub kind: ChannelKind,
    pub p_c1: f64,
    pub p_c2: f64,
    pub p_c3: f64,
}

fn from_s2(s2: f64) -> f64 {
    (1.0 - libm::sqrt(s2.max(0.0))).clamp(0.0, 1.0)
}

pub fn sudden_death(lm0: &LocalMoments, kind: ChannelKind) -> SuddenDeathReport {
    let (n, cr0, x0, a0) = initial_scalars(lm0);
    let sz0 = lm0.sz;
    if cr0 <= 0.0 {
        return SuddenDeathReport { kind, p_c1: 0.0, p_c2: 0.0, p_c3: 0.0 };
    }
    // ξ_R² starts at or above 1: nothing to lose
    let r_squeezed = sz0 * sz0 > DENOM_EPS && (1.0 - cr0) / (sz0 * sz0) < 1.0;
    let ratio = |num: f64, den: f64| if den > 0.0 { (num / den).clamp(0.0, 1.0) } else { 1.0 };
    let (p_c1, p_c2, p_c3) = match kind {
        ChannelKind::Adc => (
            ratio(2.0 * cr0, (n - 1.0) * x0),
            // the other root of the quadratic is always p = 1
            ratio(sz0 * sz0 + cr0 - 1.0, (1.0 + sz0) * (1.0 + sz0)),
            ratio(n * cr0, (n - 1.0) * x0),
        ),
        ChannelKind::Pdc => (
            from_s2(a0 / (2.0 * cr0 + a0)),
            from_s2((1.0 - sz0 * sz0) / cr0),
            from_s2(a0 / (n * cr0 + a0)),
        ),
        ChannelKind::Dpc => (
            from_s2((n - 1.0) / (2.0 * cr0 + n - 1.0)),
            from_s2(1.0 / (cr0 + sz0 * sz0)),
            from_s2((n - 1.0) / (n * cr0 + n - 1.0)),
        ),
    };
    SuddenDeathReport { kind, p_c1, p_c2: if r_squeezed { p_c2 } else { 0.0 }, p_c3 }
}

/// Affine law for squeezing of the N_r spins left after losing N - N_r.
///
/// Returns (ξ_S², ξ_R²); ξ_R² is absent when ⟨σ₁⟩ vanishes.
pub fn particle_loss(xi_s2_before: f64, n: usize, n_remaining: usize, sigma1: [f64; 3]) -> Result<(f64, Option<f64>)> {
    if n_remaining < 2 {
        return Err(SqzError::InvalidSize { n: n_remaining, reason: "at least two spins must remain" });
    }
    if n_remaining > n {
        return Err(SqzError::InvalidSize { n: n_remaining, reason: "cannot keep more spins than there are" });
    }
    let nf = n as f64;
    let nr = n_remaining as f64;
    let kept = (nr - 1.0) / (nf - 1.0);
    let lost = (nf - nr) / (nf - 1.0);
    let xi_s2 = kept * xi_s2_before + lost;
    let len2 = sigma1[0] * sigma1[0] + sigma1[1] * sigma1[1] + sigma1[2] * sigma1[2];
    let xi_r2 = if len2 > DENOM_EPS { Some(kept * xi_s2_before / len2 + lost / len2) } else { None };
    Ok((xi_s2, xi_r2))
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DephasedRamseyOptimum {
    pub phi_opt: f64,
    pub t_opt: f64,
    pub min_domega: f64,
    pub improvement: f64,
    pub xi_x2: f64,
    pub eta_z: f64,
}

/// (Δω₀)² of a Ramsey measurement with single-spin dephasing rate γ.
///
/// Assumes Cov(J_x, J_z) = 0 in the initial state.
pub fn dephased_omega_variance(m: &MomentSet, gamma: f64, t: f64, phi: f64, total_time: f64) -> f64 {
    let n = m.n();
    let (s2, c2) = (libm::sin(phi) * libm::sin(phi), libm::cos(phi) * libm::cos(phi));
    let jz = m.mean[2];
    (s2 * m.corr[0][0] + c2 * m.cov[2][2] + 0.25 * n * (libm::exp(2.0 * gamma * t) - 1.0)) / (t * total_time * s2 * jz * jz)
}

/// (2γt - 1)e^{2γt} + 1 - ξ_x²; increasing in t > 0.
pub fn optimal_time_residual(gamma: f64, t: f64, xi_x2: f64) -> f64 {
    let g = 2.0 * gamma * t;
    (g - 1.0) * libm::exp(g) + 1.0 - xi_x2
}

pub fn dephased_ramsey_optimum(m: &MomentSet, gamma: f64, total_time: f64) -> Result<DephasedRamseyOptimum> {
    if !(gamma > 0.0) {
        return Err(SqzError::OutOfRange { name: "gamma", value: gamma });
    }
    if !(total_time > 0.0) {
        return Err(SqzError::OutOfRange { name: "total time", value: total_time });
    }
    let n = m.n();
    if m.cov[0][2].abs() > 1e-9 * n.max(1.0) {
        return Err(SqzError::BadState("Cov(J_x, J_z) must vanish"));
    }
    let jz = m.mean[2];
    let eta_z = 4.0 * jz * jz / (n * n);
    if eta_z <= DENOM_EPS {
        return Err(SqzError::Singular("zero mean spin along z"));
    }
    let xi_x2 = 4.0 * m.corr[0][0] / n;
    let t_opt = if (xi_x2 - 1.0).abs() < 1e-14 {
        0.5 / gamma
    } else if xi_x2 <= 0.0 {
        0.0
    } else {
        let hi = 10.0 / gamma;
        bisect(|t| optimal_time_residual(gamma, t, xi_x2), 0.0, hi, 1e-13 * hi)
            .ok_or(SqzError::Singular("no optimal time in (0, 10/gamma]"))?
    };
    let e = libm::exp(2.0 * gamma * t_opt);
    Ok(DephasedRamseyOptimum {
        phi_opt: core::f64::consts::FRAC_PI_2,
        t_opt,
        min_domega: libm::sqrt(2.0 * gamma * e / (total_time * n * eta_z)),
        improvement: 1.0 - libm::sqrt(e / (core::f64::consts::E * eta_z)),
        xi_x2,
        eta_z,
    })
}

/// Dephased J_z moments after a Ramsey sequence: (⟨J_z⟩_t, (ΔJ_z)²_t).
pub fn dephased_jz(m: &MomentSet, gamma: f64, t: f64, phi: f64) -> (f64, f64) {
    let n = m.n();
    let (s, c) = (libm::sin(phi), libm::cos(phi));
    let decay = libm::exp(-gamma * t);
    let mean = -c * m.mean[2] * decay;
    let var = (s * s * m.corr[0][0] + c * c * m.cov[2][2]) * decay * decay + 0.25 * n * (1.0 - decay * decay);
    (mean, var)
}
