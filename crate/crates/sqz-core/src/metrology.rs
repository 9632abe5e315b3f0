//! Quantum Fisher information, the χ² criterion and Ramsey phase estimation.
//!
//! Estimation is local: uncertainties come from error propagation at a fixed
//! operating point φ, not from a global estimator over the full period.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::dicke::{build_operators, dicke, moments, rotate, CollectiveOperator, SymmetricState};
use crate::error::{Result, SqzError};
use crate::linalg::{hermiticity_defect, unitary_exp, CMat, HermitianEigen};
use crate::roots::golden_min;

/// Eigenvalues of a density matrix below this are treated as zero.
pub const QFI_CUTOFF: f64 = 1e-12;

/// F = 4 (ΔG)² for a pure state.
pub fn qfi_pure(state: &SymmetricState, generator: &CollectiveOperator) -> Result<f64> {
    check_generator(state.n_particles(), generator)?;
    let g = generator.matrix();
    let mean = state.expect_matrix(g).re;
    let sq = state.expect_matrix(&(g * g)).re;
    Ok((4.0 * (sq - mean * mean)).max(0.0))
}

/// F = 2 Σ (pᵢ - pⱼ)² / (pᵢ + pⱼ) |⟨i|G|j⟩|² for a density matrix.
pub fn qfi_mixed(rho: &CMat, generator: &CollectiveOperator) -> Result<f64> {
    validate_density(rho)?;
    if generator.matrix().nrows() != rho.nrows() {
        return Err(SqzError::InvalidDensity("dimension matches the generator"));
    }
    let eig = HermitianEigen::new(rho);
    let p: Vec<f64> = eig.values.iter().map(|&v| if v < QFI_CUTOFF { 0.0 } else { v }).collect();
    let g = eig.vectors.adjoint() * generator.matrix() * &eig.vectors;
    let mut f = 0.0;
    for i in 0..p.len() {
        for j in 0..p.len() {
            let sum = p[i] + p[j];
            if sum < QFI_CUTOFF {
                continue;
            }
            let d = p[i] - p[j];
            f += 2.0 * d * d / sum * g[(i, j)].norm_sqr();
        }
    }
    Ok(f)
}

pub fn validate_density(rho: &CMat) -> Result<()> {
    if rho.nrows() != rho.ncols() || rho.nrows() == 0 {
        return Err(SqzError::InvalidDensity("square"));
    }
    if hermiticity_defect(rho) > 1e-9 {
        return Err(SqzError::InvalidDensity("Hermitian"));
    }
    let tr: Complex64 = (0..rho.nrows()).map(|k| rho[(k, k)]).sum();
    if (tr - Complex64::new(1.0, 0.0)).norm() > 1e-9 {
        return Err(SqzError::InvalidDensity("unit trace"));
    }
    if HermitianEigen::new(rho).values[0] < -1e-9 {
        return Err(SqzError::InvalidDensity("positive semidefinite"));
    }
    Ok(())
}

fn check_generator(n: usize, g: &CollectiveOperator) -> Result<()> {
    if g.n_particles() != n {
        return Err(SqzError::InvalidSize { n, reason: "generator built for a different N" });
    }
    if !g.is_hermitian() {
        return Err(SqzError::BadState("generator must be Hermitian"));
    }
    Ok(())
}

/// Rank-one density matrix |ψ⟩⟨ψ|.
pub fn density_matrix(state: &SymmetricState) -> CMat {
    let v = state.to_cvec();
    &v * v.adjoint()
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChiCriterion {
    /// N/F, absent when F = 0.
    pub chi2: Option<f64>,
    pub entangled: bool,
}

pub fn chi_criterion(n_particles: usize, qfi: f64) -> ChiCriterion {
    if qfi <= 0.0 {
        return ChiCriterion { chi2: None, entangled: false };
    }
    let chi2 = n_particles as f64 / qfi;
    ChiCriterion { chi2: Some(chi2), entangled: chi2 < 1.0 }
}

pub fn chi_criterion_pure(state: &SymmetricState, generator: &CollectiveOperator) -> Result<ChiCriterion> {
    Ok(chi_criterion(state.n_particles(), qfi_pure(state, generator)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Readout {
    Jz,
    Parity,
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EstimationResult {
    pub phi: f64,
    pub signal: f64,
    pub signal_std: f64,
    /// (Δφ)²
    pub phase_variance: f64,
    /// (Δω₀)² = (Δφ)²/t², present once an interrogation time is attached.
    pub omega_variance: Option<f64>,
    pub readout: Readout,
    /// QFI of the initial state for the J_y phase generator.
    pub qfi: f64,
    pub chi2: Option<f64>,
    pub n_repeats: usize,
}

impl EstimationResult {
    pub fn with_interrogation_time(mut self, t: f64) -> Result<Self> {
        if !(t > 0.0) {
            return Err(SqzError::OutOfRange { name: "interrogation time", value: t });
        }
        self.omega_variance = Some(self.phase_variance / (t * t));
        Ok(self)
    }
}

/// Ramsey sequence exp(iφJ_y) exp(-iπJ_x) as a dense unitary.
///
/// The sign of the φ rotation is the one under which
/// ⟨J_z⟩_φ = ⟨J_x⟩₀ sin φ - ⟨J_z⟩₀ cos φ holds.
pub fn ramsey_unitary(n_particles: usize, phi: f64) -> Result<CMat> {
    let ops = build_operators(n_particles)?;
    Ok(unitary_exp(&ops.jy, -phi) * unitary_exp(&ops.jx, PI))
}

/// Readout parity Π σ_iz = (-1)^(j-m), diagonal in the Dicke basis.
///
/// Differs from the state-parity operator (-1)^(j+m) by (-1)^N.
pub fn parity_readout(n_particles: usize) -> CMat {
    CMat::from_fn(n_particles + 1, n_particles + 1, |r, c| {
        let v = if r != c { 0.0 } else if r % 2 == 0 { 1.0 } else { -1.0 };
        Complex64::new(v, 0.0)
    })
}

/// Slopes below this times N are treated as a dead operating point.
const SLOPE_EPS: f64 = 1e-6;

/// Phase uncertainty of one Ramsey operating point.
///
/// The J_z route uses the initial-state moments in closed form; the parity
/// route propagates the state and takes the slope from -i⟨[J_y, P]⟩.
pub fn ramsey_sensitivity(initial: &SymmetricState, phi: f64, readout: Readout, n_repeats: usize) -> Result<EstimationResult> {
    if n_repeats == 0 {
        return Err(SqzError::OutOfRange { name: "n_repeats", value: 0.0 });
    }
    let n = initial.n_particles();
    let ops = build_operators(n)?;
    let qfi = qfi_pure(initial, &ops.wrap(&ops.jy))?;
    let (signal, variance, slope) = match readout {
        Readout::Jz => {
            let m = moments(initial);
            let (s, c) = (libm::sin(phi), libm::cos(phi));
            let signal = m.mean[0] * s - m.mean[2] * c;
            let variance = c * c * m.cov[2][2] + s * s * m.cov[0][0] - libm::sin(2.0 * phi) * m.cov[0][2];
            let slope = m.mean[0] * c + m.mean[2] * s;
            (signal, variance.max(0.0), slope)
        }
        Readout::Parity => {
            let psi = initial.apply_unitary(&ramsey_unitary(n, phi)?).to_cvec();
            let p = &parity_readout(n);
            let (mut even, mut odd) = (0.0, 0.0);
            for (k, c) in psi.iter().enumerate() {
                if k % 2 == 0 {
                    even += c.norm_sqr();
                } else {
                    odd += c.norm_sqr();
                }
            }
            let comm = &ops.jy * p - p * &ops.jy;
            let slope = (Complex64::new(0.0, -1.0) * psi.dotc(&(comm * &psi))).re;
            // 1 - ⟨P⟩² without the cancellation near |⟨P⟩| = 1
            (even - odd, 4.0 * even * odd, slope)
        }
    };
    if slope.abs() < SLOPE_EPS * n.max(1) as f64 {
        return Err(SqzError::Singular("zero signal slope at this operating point"));
    }
    Ok(EstimationResult {
        phi,
        signal,
        signal_std: libm::sqrt(variance),
        phase_variance: variance / (n_repeats as f64 * slope * slope),
        omega_variance: None,
        readout,
        qfi,
        chi2: chi_criterion(n, qfi).chi2,
        n_repeats,
    })
}

/// Operating point in (0, π) that minimizes (Δφ)².
///
/// Flat optima (e.g. GHZ parity) are resolved toward the steepest slope,
/// where 1 - ⟨P⟩² is still well conditioned.
pub fn optimal_ramsey(initial: &SymmetricState, readout: Readout, n_repeats: usize) -> Result<EstimationResult> {
    let n = initial.n_particles().max(1);
    let samples = 64 * n + 64;
    let lo = 1e-6;
    let step = (PI - 2.0 * lo) / (samples - 1) as f64;
    let grid: Vec<(f64, Option<EstimationResult>)> = (0..samples)
        .map(|i| {
            let phi = lo + step * i as f64;
            (phi, ramsey_sensitivity(initial, phi, readout, n_repeats).ok().filter(|r| r.phase_variance.is_finite()))
        })
        .collect();
    let floor = grid.iter().filter_map(|(_, r)| r.map(|r| r.phase_variance)).fold(f64::INFINITY, f64::min);
    if !floor.is_finite() {
        return Err(SqzError::Singular("no usable operating point"));
    }
    let slope = |r: &EstimationResult| r.signal_std / libm::sqrt(r.phase_variance * n_repeats as f64);
    let (phi0, best) = grid
        .iter()
        .filter_map(|(phi, r)| r.map(|r| (*phi, r)))
        .filter(|(_, r)| r.phase_variance <= floor * (1.0 + 1e-6))
        .max_by(|a, b| slope(&a.1).total_cmp(&slope(&b.1)))
        .expect("floor is attained");
    let cost = |phi: f64| match ramsey_sensitivity(initial, phi, readout, n_repeats) {
        Ok(r) if r.phase_variance.is_finite() => r.phase_variance,
        _ => f64::INFINITY,
    };
    let (phi, pv) = golden_min(cost, (phi0 - step).max(lo), (phi0 + step).min(PI - lo), 1e-12);
    if pv < best.phase_variance * (1.0 - 1e-6) {
        ramsey_sensitivity(initial, phi, readout, n_repeats)
    } else {
        Ok(best)
    }
}

/// (|j,0⟩_x - (|j,1⟩_x + |j,-1⟩_x)/√2)/√2, defined for even N.
pub fn sss_state(n_particles: usize) -> Result<SymmetricState> {
    if n_particles < 2 || n_particles % 2 != 0 {
        return Err(SqzError::InvalidSize { n: n_particles, reason: "needs even N >= 2" });
    }
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let d0 = dicke(n_particles, 0.0)?;
    let d1 = dicke(n_particles, 1.0)?;
    let dm = dicke(n_particles, -1.0)?;
    let amps: Vec<Complex64> = (0..=n_particles)
        .map(|k| h * (d0.amplitudes()[k] - h * (d1.amplitudes()[k] + dm.amplitudes()[k])))
        .collect();
    let z = SymmetricState::normalized(n_particles, amps)?;
    // carry J_z eigenstates onto J_x eigenstates
    rotate(&z, [0.0, 1.0, 0.0], PI / 2.0)
}

/// (|j,j⟩_y + |j,-j⟩_y)/√2
pub fn ghz_y(n_particles: usize) -> Result<SymmetricState> {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let mut amps = alloc::vec![Complex64::new(0.0, 0.0); n_particles + 1];
    amps[0] += h;
    amps[n_particles] += h;
    let z = SymmetricState::normalized(n_particles, amps)?;
    rotate(&z, [1.0, 0.0, 0.0], -PI / 2.0)
}
