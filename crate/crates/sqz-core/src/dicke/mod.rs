//! Symmetric N-qubit states in the Dicke basis |j, m⟩, j = N/2.
//!
//! Index `k` of an amplitude vector corresponds to m = j - k, so index 0 is
//! the fully polarized state along +z and index N the one along -z.

mod husimi;
mod moments;
mod operators;

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Result, SqzError};
use crate::linalg::{inner, CMat, CVec, HermitianEigen};

pub use husimi::{husimi_q, husimi_total, sphere_quadrature, QuadratureNode};
pub use moments::{local_moments, moments, CollectivePairMoments, LocalMoments, MomentSet};
pub use operators::{build_operators, ladder_coefficient, CollectiveOperator, Operators};

const NORM_TOL: f64 = 1e-12;

/// Pure state of N spin-1/2 particles restricted to the j = N/2 sector.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricState {
    n_particles: usize,
    amplitudes: Vec<Complex64>,
}

impl SymmetricState {
    /// Wraps an amplitude vector ordered m = +j..-j; must already be normalized.
    pub fn new(n_particles: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_size(n_particles)?;
        if amplitudes.len() != n_particles + 1 {
            return Err(SqzError::BadState("amplitude vector length must be N+1"));
        }
        if amplitudes.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(SqzError::NonFinite("amplitudes"));
        }
        let norm: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(SqzError::BadState("amplitudes are not normalized"));
        }
        Ok(SymmetricState { n_particles, amplitudes })
    }

    /// Like [`SymmetricState::new`] but rescales to unit norm first.
    pub fn normalized(n_particles: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = libm::sqrt(amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>());
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(SqzError::BadState("zero or non-finite norm"));
        }
        for c in amplitudes.iter_mut() {
            *c /= norm;
        }
        Self::new(n_particles, amplitudes)
    }

    /// Haar-random state from normalized complex Gaussian amplitudes.
    pub fn random<R: Rng + ?Sized>(n_particles: usize, rng: &mut R) -> Result<Self> {
        check_size(n_particles)?;
        let amps = (0..=n_particles)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::normalized(n_particles, amps)
    }

    /// Random state supported only on Dicke levels with (-1)^(j+m) = `parity`.
    pub fn random_with_parity<R: Rng + ?Sized>(n_particles: usize, parity: i32, rng: &mut R) -> Result<Self> {
        check_size(n_particles)?;
        let amps = (0..=n_particles)
            .map(|k| {
                let p = if (n_particles - k) % 2 == 0 { 1 } else { -1 };
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                if p == parity {
                    Complex64::new(re, im)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Self::normalized(n_particles, amps)
    }

    pub(crate) fn from_cvec(n_particles: usize, v: &CVec) -> Self {
        let mut amplitudes: Vec<Complex64> = v.iter().copied().collect();
        let norm: f64 = libm::sqrt(amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>());
        for c in amplitudes.iter_mut() {
            *c /= norm;
        }
        SymmetricState { n_particles, amplitudes }
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn spin_j(&self) -> f64 {
        self.n_particles as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.n_particles + 1
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Magnetic quantum number of index `k`.
    pub fn m_of(&self, k: usize) -> f64 {
        self.spin_j() - k as f64
    }

    pub fn to_cvec(&self) -> CVec {
        CVec::from_column_slice(&self.amplitudes)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// ⟨self|other⟩.
    pub fn overlap(&self, other: &SymmetricState) -> Complex64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    /// ⟨ψ|M|ψ⟩ for a dense matrix in this Dicke basis.
    pub fn expect_matrix(&self, m: &CMat) -> Complex64 {
        let v = self.to_cvec();
        v.dotc(&(m * &v))
    }

    pub fn expect(&self, op: &CollectiveOperator) -> Complex64 {
        self.expect_matrix(op.matrix())
    }

    /// Applies a dense unitary and renormalizes away rounding drift.
    pub fn apply_unitary(&self, u: &CMat) -> SymmetricState {
        Self::from_cvec(self.n_particles, &(u * self.to_cvec()))
    }

    /// Expectation of the parity operator (-1)^(m+j).
    pub fn parity(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(k, c)| if (self.n_particles - k) % 2 == 0 { c.norm_sqr() } else { -c.norm_sqr() })
            .sum()
    }
}

pub(crate) fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(SqzError::InvalidSize { n, reason: "need at least one particle" });
    }
    Ok(())
}

/// Coherent spin state pointing along (sinθ cosφ, sinθ sinφ, cosθ).
///
/// Amplitude on m = j - k is sqrt(C(N,k)) cos^(N-k)(θ/2) (e^{iφ} sin(θ/2))^k,
/// evaluated in log space so that large N does not overflow.
pub fn css(n_particles: usize, theta: f64, phi: f64) -> Result<SymmetricState> {
    check_size(n_particles)?;
    if !theta.is_finite() || !phi.is_finite() {
        return Err(SqzError::NonFinite("css angles"));
    }
    if !(-1e-12..=core::f64::consts::PI + 1e-12).contains(&theta) {
        return Err(SqzError::OutOfRange { name: "theta", value: theta });
    }
    let theta = theta.clamp(0.0, core::f64::consts::PI);
    Ok(SymmetricState { n_particles, amplitudes: css_amplitudes(n_particles, theta, phi) })
}

pub(crate) fn css_amplitudes(n: usize, theta: f64, phi: f64) -> Vec<Complex64> {
    let c = libm::cos(theta / 2.0);
    let s = libm::sin(theta / 2.0);
    let mut amps = vec![Complex64::new(0.0, 0.0); n + 1];
    if s == 0.0 {
        amps[0] = Complex64::new(1.0, 0.0);
        return amps;
    }
    if c <= 0.0 {
        amps[n] = Complex64::from_polar(1.0, n as f64 * phi);
        return amps;
    }
    let (lc, ls) = (libm::log(c), libm::log(s));
    let ln_n = libm::lgamma(n as f64 + 1.0);
    for (k, a) in amps.iter_mut().enumerate() {
        let kf = k as f64;
        let ln_binom = ln_n - libm::lgamma(kf + 1.0) - libm::lgamma(n as f64 - kf + 1.0);
        let modulus = libm::exp(0.5 * ln_binom + (n as f64 - kf) * lc + kf * ls);
        *a = Complex64::from_polar(modulus, kf * phi);
    }
    amps
}

/// Dicke state |j, m⟩.
pub fn dicke(n_particles: usize, m: f64) -> Result<SymmetricState> {
    check_size(n_particles)?;
    let j = n_particles as f64 / 2.0;
    let k = j - m;
    let kr = libm::round(k);
    if !m.is_finite() || (k - kr).abs() > 1e-9 || kr < 0.0 || kr > n_particles as f64 {
        return Err(SqzError::OutOfRange { name: "m", value: m });
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); n_particles + 1];
    amps[kr as usize] = Complex64::new(1.0, 0.0);
    Ok(SymmetricState { n_particles, amplitudes: amps })
}

/// exp(-i angle J·axis) applied to `state`.
pub fn rotate(state: &SymmetricState, axis: [f64; 3], angle: f64) -> Result<SymmetricState> {
    let len = libm::sqrt(axis.iter().map(|a| a * a).sum());
    if !(len > 1e-300) {
        return Err(SqzError::OutOfRange { name: "axis length", value: len });
    }
    if (len - 1.0).abs() > 1e-10 {
        return Err(SqzError::OutOfRange { name: "axis length (must be unit)", value: len });
    }
    if !angle.is_finite() {
        return Err(SqzError::NonFinite("rotation angle"));
    }
    let ops = build_operators(state.n_particles())?;
    let jn = ops.along(axis);
    let eig = HermitianEigen::new(&jn);
    Ok(SymmetricState::from_cvec(state.n_particles(), &eig.evolve(&state.to_cvec(), angle)))
}
