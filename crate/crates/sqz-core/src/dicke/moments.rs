use num_complex::Complex64;

use super::{ladder_coefficient, SymmetricState};
use crate::error::{Result, SqzError};

pub type Vec3 = [f64; 3];
pub type Mat3 = [[f64; 3]; 3];

/// First and second collective moments.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MomentSet {
    pub n_particles: usize,
    /// (⟨J_x⟩, ⟨J_y⟩, ⟨J_z⟩)
    pub mean: Vec3,
    /// C_kl = ⟨J_k J_l + J_l J_k⟩ / 2
    pub corr: Mat3,
    /// γ_kl = C_kl - ⟨J_k⟩⟨J_l⟩
    pub cov: Mat3,
    /// Γ = (N-1)γ + C
    pub gamma_big: Mat3,
    /// ⟨J²⟩
    pub j_squared: f64,
}

impl MomentSet {
    pub fn from_mean_corr(n_particles: usize, mean: Vec3, corr: Mat3) -> Self {
        let mut cov = [[0.0; 3]; 3];
        let mut gamma_big = [[0.0; 3]; 3];
        let nm1 = n_particles as f64 - 1.0;
        for k in 0..3 {
            for l in 0..3 {
                cov[k][l] = corr[k][l] - mean[k] * mean[l];
                gamma_big[k][l] = nm1 * cov[k][l] + corr[k][l];
            }
        }
        let j_squared = corr[0][0] + corr[1][1] + corr[2][2];
        MomentSet { n_particles, mean, corr, cov, gamma_big, j_squared }
    }

    pub fn n(&self) -> f64 {
        self.n_particles as f64
    }

    pub fn mean_length(&self) -> f64 {
        libm::sqrt(dot(self.mean, self.mean))
    }

    /// ⟨n·J⟩
    pub fn mean_along(&self, n: Vec3) -> f64 {
        dot(self.mean, n)
    }

    /// ⟨{a·J, b·J}⟩ / 2
    pub fn corr_between(&self, a: Vec3, b: Vec3) -> f64 {
        quad(&self.corr, a, b)
    }

    /// Cov(a·J, b·J), symmetrized.
    pub fn cov_between(&self, a: Vec3, b: Vec3) -> f64 {
        quad(&self.cov, a, b)
    }

    /// (Δ n·J)²
    pub fn variance_along(&self, n: Vec3) -> f64 {
        quad(&self.cov, n, n)
    }

    /// ⟨J_- ²⟩ = C_xx - C_yy - 2i C_xy
    pub fn jm_squared(&self) -> Complex64 {
        Complex64::new(self.corr[0][0] - self.corr[1][1], -2.0 * self.corr[0][1])
    }

    /// The per-pair moments implied by these collective moments.
    pub fn pair_moments(&self) -> CollectivePairMoments {
        CollectivePairMoments {
            jz: self.mean[2],
            jz2: self.corr[2][2],
            jm2: self.jm_squared(),
            jperp2: self.corr[0][0] + self.corr[1][1],
            j2: self.j_squared,
        }
    }
}

pub(crate) fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn quad(m: &Mat3, a: Vec3, b: Vec3) -> f64 {
    let mut s = 0.0;
    for k in 0..3 {
        for l in 0..3 {
            s += a[k] * m[k][l] * b[l];
        }
    }
    s
}

/// Moments from the sparse ladder structure; O(N) per state.
pub fn moments(state: &SymmetricState) -> MomentSet {
    let n = state.n_particles();
    let j = state.spin_j();
    let c = state.amplitudes();
    let mut jz = 0.0;
    let mut jz2 = 0.0;
    let mut jp = Complex64::new(0.0, 0.0);
    let mut jp2 = Complex64::new(0.0, 0.0);
    // ⟨J_+ J_z + J_z J_+⟩
    let mut jp_jz = Complex64::new(0.0, 0.0);
    for k in 0..=n {
        let m = j - k as f64;
        let p = c[k].norm_sqr();
        jz += m * p;
        jz2 += m * m * p;
        if k >= 1 {
            // J_+ |m⟩ = a |m+1⟩ with |m+1⟩ at index k-1
            let a = ladder_coefficient(j, m);
            let amp = c[k - 1].conj() * c[k] * a;
            jp += amp;
            jp_jz += amp * (2.0 * m + 1.0);
        }
        if k >= 2 {
            let a = ladder_coefficient(j, m) * ladder_coefficient(j, m + 1.0);
            jp2 += c[k - 2].conj() * c[k] * a;
        }
    }
    let jperp2 = j * (j + 1.0) - jz2;
    let mean = [jp.re, jp.im, jz];
    let cxx = 0.5 * (jp2.re + jperp2);
    let cyy = 0.5 * (jperp2 - jp2.re);
    let cxy = 0.5 * jp2.im;
    let cxz = 0.5 * jp_jz.re;
    let cyz = 0.5 * jp_jz.im;
    let corr = [[cxx, cxy, cxz], [cxy, cyy, cyz], [cxz, cyz, jz2]];
    MomentSet::from_mean_corr(n, mean, corr)
}

/// Collective quantities that fix the two-particle marginal of a symmetric state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CollectivePairMoments {
    pub jz: f64,
    pub jz2: f64,
    pub jm2: Complex64,
    /// ⟨J_x² + J_y²⟩
    pub jperp2: f64,
    pub j2: f64,
}

/// Single-spin and pair expectations for an exchange-symmetric state.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LocalMoments {
    pub n_particles: usize,
    /// ⟨σ_1z⟩
    pub sz: f64,
    /// ⟨σ_1z σ_2z⟩
    pub szsz: f64,
    /// ⟨σ_1+ σ_2-⟩, real for symmetric states
    pub spsm: f64,
    /// ⟨σ_1- σ_2-⟩
    pub smsm: Complex64,
    /// ⟨σ_1 · σ_2⟩
    pub sdots: f64,
}

impl LocalMoments {
    pub fn from_collective(n_particles: usize, c: &CollectivePairMoments) -> Result<Self> {
        if n_particles < 2 {
            return Err(SqzError::InvalidSize { n: n_particles, reason: "pair moments need N >= 2" });
        }
        let n = n_particles as f64;
        let pairs = n * (n - 1.0);
        Ok(LocalMoments {
            n_particles,
            sz: 2.0 * c.jz / n,
            szsz: (4.0 * c.jz2 - n) / pairs,
            spsm: (2.0 * c.jperp2 - n) / (2.0 * pairs),
            smsm: c.jm2 / pairs,
            sdots: (4.0 * c.j2 - 3.0 * n) / pairs,
        })
    }

    /// Inverse of [`LocalMoments::from_collective`].
    pub fn collective(&self) -> CollectivePairMoments {
        let n = self.n_particles as f64;
        let pairs = n * (n - 1.0);
        CollectivePairMoments {
            jz: 0.5 * n * self.sz,
            jz2: 0.25 * n + 0.25 * pairs * self.szsz,
            jm2: self.smsm * pairs,
            jperp2: 0.5 * n + pairs * self.spsm,
            j2: 0.75 * n + 0.25 * pairs * self.sdots,
        }
    }

    /// Moment set of a parity state (⟨J_x⟩ = ⟨J_y⟩ = 0, no z cross terms).
    pub fn to_parity_moments(&self) -> MomentSet {
        let c = self.collective();
        let cxx = 0.5 * (c.jperp2 + c.jm2.re);
        let cyy = 0.5 * (c.jperp2 - c.jm2.re);
        let cxy = -0.5 * c.jm2.im;
        let corr = [[cxx, cxy, 0.0], [cxy, cyy, 0.0], [0.0, 0.0, c.jz2]];
        let mut m = MomentSet::from_mean_corr(self.n_particles, [0.0, 0.0, c.jz], corr);
        m.j_squared = c.j2;
        m
    }

    /// C_zz = ⟨σ_1z σ_2z⟩ - ⟨σ_1z⟩²
    pub fn czz(&self) -> f64 {
        self.szsz - self.sz * self.sz
    }
}

pub fn local_moments(state: &SymmetricState) -> Result<LocalMoments> {
    LocalMoments::from_collective(state.n_particles(), &moments(state).pair_moments())
}
