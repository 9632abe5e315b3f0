//! Squeezing parameters from collective moments.

use core::f64::consts::PI;

use nalgebra::{Matrix3, SymmetricEigen};
use num_complex::Complex64;

use crate::dicke::{LocalMoments, MomentSet};
use crate::error::{Result, SqzError};

type Vec3 = [f64; 3];

/// |⟨J⟩| below `MSD_EPS_PER_PARTICLE * N` counts as "no mean spin direction".
pub const MSD_EPS_PER_PARTICLE: f64 = 1e-9;

/// Mean spin direction plus the two transverse unit vectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MsdFrame {
    pub theta: f64,
    pub phi: f64,
    pub defined: bool,
    /// Unit vector along ⟨J⟩.
    pub n0: Vec3,
    /// (-sinφ, cosφ, 0)
    pub n1: Vec3,
    /// (cosθ cosφ, cosθ sinφ, -sinθ)
    pub n2: Vec3,
}

pub fn mean_spin_direction(m: &MomentSet) -> MsdFrame {
    let len = m.mean_length();
    let defined = len > MSD_EPS_PER_PARTICLE * m.n();
    let (theta, phi) = if defined {
        let theta = libm::acos((m.mean[2] / len).clamp(-1.0, 1.0));
        let st = libm::sin(theta);
        let phi = if st * len <= MSD_EPS_PER_PARTICLE * m.n() {
            0.0
        } else {
            let base = libm::acos((m.mean[0] / (len * st)).clamp(-1.0, 1.0));
            let raw = if m.mean[1] > 0.0 { base } else { 2.0 * PI - base };
            if raw >= 2.0 * PI {
                raw - 2.0 * PI
            } else {
                raw
            }
        };
        (theta, phi)
    } else {
        (0.0, 0.0)
    };
    let (st, ct) = (libm::sin(theta), libm::cos(theta));
    let (sp, cp) = (libm::sin(phi), libm::cos(phi));
    MsdFrame {
        theta,
        phi,
        defined,
        n0: [st * cp, st * sp, ct],
        n1: [-sp, cp, 0.0],
        n2: [ct * cp, ct * sp, -st],
    }
}

/// Smallest variance in the plane normal to the mean spin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransverseMinimum {
    pub lambda_minus: f64,
    /// Angle from n1 towards n2.
    pub opt_angle: f64,
    /// n1 cos(angle) + n2 sin(angle)
    pub n_perp: Vec3,
}

pub fn min_transverse_variance(m: &MomentSet) -> Result<TransverseMinimum> {
    let frame = mean_spin_direction(m);
    if !frame.defined {
        return Err(SqzError::MsdUndefined);
    }
    Ok(transverse_minimum_in(m, frame.n1, frame.n2))
}

fn transverse_minimum_in(m: &MomentSet, n1: Vec3, n2: Vec3) -> TransverseMinimum {
    let v1 = m.variance_along(n1);
    let v2 = m.variance_along(n2);
    let a = v1 - v2;
    let b = 2.0 * m.cov_between(n1, n2);
    let r = libm::hypot(a, b);
    let lambda_minus = 0.5 * ((v1 + v2) - r);
    let opt_angle = if r == 0.0 {
        0.0
    } else {
        let half = 0.5 * libm::acos((-a / r).clamp(-1.0, 1.0));
        if b <= 0.0 {
            half
        } else {
            PI - half
        }
    };
    let (s, c) = (libm::sin(opt_angle), libm::cos(opt_angle));
    let n_perp = [n1[0] * c + n2[0] * s, n1[1] * c + n2[1] * s, n1[2] * c + n2[2] * s];
    TransverseMinimum { lambda_minus, opt_angle, n_perp }
}

/// ξ_H² = 2(ΔJ_n1)² / |⟨J_n2⟩|
pub fn xi_h2(m: &MomentSet, n1: Vec3, n2: Vec3) -> Option<f64> {
    ratio(2.0 * m.variance_along(n1), m.mean_along(n2).abs())
}

/// ξ_H'² = 2(ΔJ_n1)² / sqrt(⟨J_n2⟩² + ⟨J_n3⟩²)
pub fn xi_hprime2(m: &MomentSet, n1: Vec3, n2: Vec3, n3: Vec3) -> Option<f64> {
    ratio(2.0 * m.variance_along(n1), libm::hypot(m.mean_along(n2), m.mean_along(n3)))
}

/// ξ_R'² = N(ΔJ_n1)² / (⟨J_n2⟩² + ⟨J_n3⟩²)
pub fn xi_rprime2(m: &MomentSet, n1: Vec3, n2: Vec3, n3: Vec3) -> Option<f64> {
    let (a, b) = (m.mean_along(n2), m.mean_along(n3));
    ratio(m.n() * m.variance_along(n1), a * a + b * b)
}

/// ξ_D² = N(ΔJ_n)² / (N²/4 - ⟨J_n⟩²)
pub fn xi_d2(m: &MomentSet, n: Vec3) -> Option<f64> {
    let mean = m.mean_along(n);
    ratio(m.n() * m.variance_along(n), 0.25 * m.n() * m.n() - mean * mean)
}

/// ξ_E² = N(ΔJ_n1)² / (⟨J²⟩ - N/2 - ⟨J_n1⟩²)
pub fn xi_e2(m: &MomentSet, n1: Vec3) -> Option<f64> {
    let mean = m.mean_along(n1);
    ratio(m.n() * m.variance_along(n1), m.j_squared - 0.5 * m.n() - mean * mean)
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    if den.abs() <= 1e-14 * (1.0 + num.abs()) {
        None
    } else {
        let v = num / den;
        if v.is_finite() {
            Some(v)
        } else {
            None
        }
    }
}

pub(crate) fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Smallest eigenvalue of a symmetric 3x3 matrix with its eigenvector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinEigen {
    pub value: f64,
    pub vector: Vec3,
    /// Set when the two lowest eigenvalues coincide within tolerance.
    pub degenerate: bool,
}

pub fn min_eigen3(m: &[[f64; 3]; 3]) -> MinEigen {
    let mat = Matrix3::from_fn(|r, c| 0.5 * (m[r][c] + m[c][r]));
    let eig = SymmetricEigen::new(mat);
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let lo = eig.eigenvalues[idx[0]];
    let next = eig.eigenvalues[idx[1]];
    let scale = 1.0 + lo.abs().max(next.abs());
    let v = eig.eigenvectors.column(idx[0]);
    MinEigen { value: lo, vector: [v[0], v[1], v[2]], degenerate: (next - lo) <= 1e-9 * scale }
}

/// Every parameter of the standard table plus the rotation-invariant variants.
///
/// Fields that need a mean spin direction are `None` when it is undefined.
#[derive(Clone, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SqueezingReport {
    pub n_particles: usize,
    #[cfg_attr(feature = "serde", serde(rename = "xi_H2"))]
    pub xi_h2: Option<f64>,
    #[cfg_attr(feature = "serde", serde(rename = "xi_Hprime2"))]
    pub xi_hprime2: Option<f64>,
    #[cfg_attr(feature = "serde", serde(rename = "xi_Hdoubleprime2"))]
    pub xi_hdoubleprime2: Option<f64>,
    #[cfg_attr(feature = "serde", serde(rename = "xi_S2"))]
    pub xi_s2: Option<f64>,
    #[cfg_attr(feature = "serde", serde(rename = "xi_R2"))]
    pub xi_r2: Option<f64>,
    #[cfg_attr(feature = "serde", serde(rename = "xi_Rprime2"))]
    pub xi_rprime2: Option<f64>,
    #[cfg_attr(feature = "serde", serde(rename = "xi_D2"))]
    pub xi_d2: Option<f64>,
    #[cfg_attr(feature = "serde", serde(rename = "xi_E2"))]
    pub xi_e2: Option<f64>,
    #[cfg_attr(feature = "serde", serde(rename = "tilde_xi_Rprime2"))]
    pub tilde_xi_rprime2: Option<f64>,
    #[cfg_attr(feature = "serde", serde(rename = "tilde_xi_D2"))]
    pub tilde_xi_d2: f64,
    #[cfg_attr(feature = "serde", serde(rename = "tilde_xi_E2"))]
    pub tilde_xi_e2: f64,
    pub xi_singlet2: f64,
    pub msd_theta: Option<f64>,
    pub msd_phi: Option<f64>,
    pub opt_angle: Option<f64>,
    /// Minimal transverse variance.
    pub lambda_minus: Option<f64>,
    /// Smallest eigenvalue of Γ.
    pub lambda_min: f64,
    pub lambda_min_direction: [f64; 3],
    pub lambda_min_degenerate: bool,
    pub mean_spin_length: f64,
    /// (⟨J_x⟩, ⟨J_y⟩, ⟨J_z⟩)
    pub mean: [f64; 3],
    pub msd_defined: bool,
}

pub fn compute_report(m: &MomentSet) -> SqueezingReport {
    let n = m.n();
    let frame = mean_spin_direction(m);
    let len = m.mean_length();
    let gamma_min = min_eigen3(&m.gamma_big);
    let total_var = m.cov[0][0] + m.cov[1][1] + m.cov[2][2];
    let mut r = SqueezingReport {
        n_particles: m.n_particles,
        tilde_xi_d2: 4.0 * gamma_min.value / (n * n),
        tilde_xi_e2: gamma_min.value / (m.j_squared - 0.5 * n),
        xi_singlet2: total_var / (0.5 * n),
        lambda_min: gamma_min.value,
        lambda_min_direction: gamma_min.vector,
        lambda_min_degenerate: gamma_min.degenerate,
        mean_spin_length: len,
        mean: m.mean,
        msd_defined: frame.defined,
        ..SqueezingReport::default()
    };
    if !frame.defined {
        return r;
    }
    let t = transverse_minimum_in(m, frame.n1, frame.n2);
    let n1 = t.n_perp;
    let n2 = frame.n0;
    let n3 = cross(n1, n2);
    r.msd_theta = Some(frame.theta);
    r.msd_phi = Some(frame.phi);
    r.opt_angle = Some(t.opt_angle);
    r.lambda_minus = Some(t.lambda_minus);
    r.xi_s2 = Some(4.0 * t.lambda_minus / n);
    r.xi_hdoubleprime2 = Some(2.0 * t.lambda_minus / len);
    r.xi_r2 = Some(n * t.lambda_minus / (len * len));
    r.xi_h2 = xi_h2(m, n1, n2);
    r.xi_hprime2 = xi_hprime2(m, n1, n2, n3);
    r.xi_rprime2 = xi_rprime2(m, n1, n2, n3);
    r.xi_d2 = xi_d2(m, n1);
    r.xi_e2 = xi_e2(m, n1);
    r.tilde_xi_rprime2 = Some(gamma_min.value / (len * len));
    r
}

/// Closed forms for states with definite parity and exchange symmetry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParityShortcuts {
    pub xi_s2: f64,
    /// `None` when ⟨σ_1z⟩ vanishes.
    pub xi_r2: Option<f64>,
    pub tilde_xi_e2: f64,
    /// ς² = 1 + (N-1) C_zz
    pub varsigma2: f64,
}

pub fn parity_shortcuts(lm: &LocalMoments) -> ParityShortcuts {
    let n = lm.n_particles as f64;
    let xi_s2 = 1.0 - 2.0 * (n - 1.0) * (lm.smsm.norm() - lm.spsm);
    let xi_r2 = if lm.sz.abs() <= 2.0 * MSD_EPS_PER_PARTICLE { None } else { Some(xi_s2 / (lm.sz * lm.sz)) };
    let varsigma2 = 1.0 + (n - 1.0) * lm.czz();
    let tilde_xi_e2 = xi_s2.min(varsigma2) / ((1.0 - 1.0 / n) * lm.sdots + 1.0 / n);
    ParityShortcuts { xi_s2, xi_r2, tilde_xi_e2, varsigma2 }
}

/// ζ_B² = 1 + 2(⟨a†a⟩ - |⟨a⟩|²) - 2|⟨a²⟩ - ⟨a⟩²|
pub fn bosonic_principal(a_mean: Complex64, a2_mean: Complex64, n_mean: f64) -> f64 {
    1.0 + 2.0 * (n_mean - a_mean.norm_sqr()) - 2.0 * (a2_mean - a_mean * a_mean).norm()
}
