//! Ground-state and measurement models: the Lipkin-Meshkov-Glick ground
//! state, extreme spin-j squeezing curves and QND conditional squeezing.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Normal};

use crate::dicke::{ladder_coefficient, moments, SymmetricState};
use crate::error::{Result, SqzError};
use crate::linalg::HermitianEigen;
use crate::metrics::{compute_report, SqueezingReport};
use crate::roots::scan_then_refine;

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LMGSpec {
    pub n_particles: usize,
    pub h: f64,
    pub gamma_aniso: f64,
}

impl LMGSpec {
    pub fn new(n_particles: usize, h: f64, gamma_aniso: f64) -> Result<Self> {
        if n_particles < 1 {
            return Err(SqzError::InvalidSize { n: n_particles, reason: "need at least one spin" });
        }
        if !(0.0..=1.0).contains(&gamma_aniso) {
            return Err(SqzError::OutOfRange { name: "anisotropy gamma", value: gamma_aniso });
        }
        if !h.is_finite() {
            return Err(SqzError::NonFinite("field h"));
        }
        Ok(LMGSpec { n_particles, h, gamma_aniso })
    }
}

/// H = -(1/N)(J_x² + γJ_y²) - hJ_z as a real matrix in the Dicke basis.
pub fn lmg_hamiltonian(spec: &LMGSpec) -> DMatrix<f64> {
    let n = spec.n_particles;
    let nf = n as f64;
    let j = nf / 2.0;
    let g = spec.gamma_aniso;
    let mut h = DMatrix::zeros(n + 1, n + 1);
    for k in 0..=n {
        let m = j - k as f64;
        // J_x² + γJ_y² = (1-γ)(J₊² + J₋²)/4 + (1+γ)(J² - J_z²)/2
        h[(k, k)] = -(1.0 + g) * (j * (j + 1.0) - m * m) / (2.0 * nf) - spec.h * m;
        if k >= 2 {
            let a = ladder_coefficient(j, m) * ladder_coefficient(j, m + 1.0);
            let v = -(1.0 - g) * a / (4.0 * nf);
            h[(k - 2, k)] = v;
            h[(k, k - 2)] = v;
        }
    }
    h
}

#[derive(Clone, Debug, PartialEq)]
pub struct LMGGround {
    pub state: SymmetricState,
    pub energy: f64,
    /// Eigenvalue of the parity operator (-1)^(m+j) on the returned state.
    pub parity: i32,
    /// Lowest energy of the other parity block minus `energy`.
    pub parity_gap: f64,
    pub report: SqueezingReport,
    /// When the two parity blocks are degenerate: the most polarized state
    /// of the ground space, which is a coherent state where one exists.
    pub symmetry_broken: Option<(SymmetricState, SqueezingReport)>,
}

const LMG_DEGENERACY: f64 = 1e-9;

fn block_ground(h: &DMatrix<f64>, n: usize, first: usize) -> Option<(f64, Vec<f64>)> {
    let idx: Vec<usize> = (first..=n).step_by(2).collect();
    if idx.is_empty() {
        return None;
    }
    let block = DMatrix::from_fn(idx.len(), idx.len(), |r, c| h[(idx[r], idx[c])]);
    let eig = HermitianEigen::from_real(&block);
    let mut amps = alloc::vec![0.0; n + 1];
    for (r, &k) in idx.iter().enumerate() {
        amps[k] = eig.vectors[(r, 0)].re;
    }
    Some((eig.values[0], amps))
}

fn real_state(n: usize, amps: &[f64]) -> Result<SymmetricState> {
    SymmetricState::normalized(n, amps.iter().map(|&a| Complex64::new(a, 0.0)).collect())
}

/// Ground state of the LMG model.
///
/// H conserves parity, so the two parity blocks are diagonalized separately
/// and the returned state has exact parity. Ties within 1e-9 resolve to the
/// block containing |j,+j⟩.
pub fn lmg_ground(spec: &LMGSpec) -> Result<LMGGround> {
    let n = spec.n_particles;
    let h = lmg_hamiltonian(spec);
    let top = block_ground(&h, n, 0).expect("block with |j,+j> is never empty");
    let top_parity = if n % 2 == 0 { 1 } else { -1 };
    let Some(rest) = block_ground(&h, n, 1) else {
        let state = real_state(n, &top.1)?;
        let report = compute_report(&moments(&state));
        return Ok(LMGGround { state, energy: top.0, parity: top_parity, parity_gap: f64::INFINITY, report, symmetry_broken: None });
    };
    let tol = LMG_DEGENERACY * (1.0 + top.0.abs());
    let (ground, parity, other) = if rest.0 < top.0 - tol { (&rest, -top_parity, &top) } else { (&top, top_parity, &rest) };
    let state = real_state(n, &ground.1)?;
    let report = compute_report(&moments(&state));
    let gap = other.0 - ground.0;
    let symmetry_broken = if gap.abs() <= tol {
        let mix = |alpha: f64| -> Vec<f64> {
            let (c, s) = (libm::cos(alpha), libm::sin(alpha));
            top.1.iter().zip(rest.1.iter()).map(|(a, b)| c * a + s * b).collect()
        };
        let polarization = |alpha: f64| match real_state(n, &mix(alpha)) {
            Ok(st) => -moments(&st).mean_length(),
            Err(_) => 0.0,
        };
        let (alpha, _) = scan_then_refine(polarization, 0.0, core::f64::consts::PI, 181, 1e-12);
        let st = real_state(n, &mix(alpha))?;
        let rep = compute_report(&moments(&st));
        Some((st, rep))
    } else {
        None
    };
    Ok(LMGGround { state, energy: ground.0, parity, parity_gap: gap, report, symmetry_broken })
}

/// Thermodynamic-limit ξ_S² of the LMG ground state.
pub fn lmg_thermo_xi(h: f64, gamma_aniso: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&gamma_aniso) {
        return Err(SqzError::OutOfRange { name: "anisotropy gamma", value: gamma_aniso });
    }
    if !(h >= 0.0) {
        return Err(SqzError::OutOfRange { name: "field h", value: h });
    }
    if gamma_aniso == 1.0 && h <= 1.0 {
        return Err(SqzError::Singular("isotropic model has no closed form for h <= 1"));
    }
    Ok(if h >= 1.0 {
        libm::sqrt((h - 1.0) / (h - gamma_aniso))
    } else {
        libm::sqrt((1.0 - h * h) / (1.0 - gamma_aniso))
    })
}

/// Finite-size field at which the ground state is a coherent state.
pub fn lmg_coherent_field(n_particles: usize, gamma_aniso: f64) -> f64 {
    let n = n_particles as f64;
    (n - 1.0) / n * libm::sqrt(gamma_aniso)
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExtremePoint {
    pub mu: f64,
    /// ⟨J_z⟩ / j
    pub x: f64,
    /// (ΔJ_x)² / j
    pub f: f64,
}

/// Minimal (ΔJ_x)²/j versus ⟨J_z⟩/j for a single spin j, traced by the
/// ground states of μJ_z + J_x².
#[derive(Clone, Debug, PartialEq)]
pub struct ExtremeCurve {
    pub j: usize,
    pub points: Vec<ExtremePoint>,
}

pub fn extreme_squeezing_curve(two_j: usize, mu_grid: &[f64]) -> Result<ExtremeCurve> {
    if two_j == 0 || two_j % 2 != 0 {
        return Err(SqzError::InvalidSize { n: two_j, reason: "integer spin j >= 1 only; half-integer F_j needs a variational search" });
    }
    let ops = crate::dicke::build_operators(two_j)?;
    let jf = two_j as f64 / 2.0;
    let jx2 = &ops.jx * &ops.jx;
    let mut points = Vec::with_capacity(mu_grid.len());
    for &mu in mu_grid {
        if !mu.is_finite() {
            return Err(SqzError::NonFinite("mu"));
        }
        let h = &ops.jz * Complex64::new(mu, 0.0) + &jx2;
        let eig = HermitianEigen::new(&h);
        let psi = eig.vectors.column(0).into_owned();
        let s = SymmetricState::normalized(two_j, psi.iter().copied().collect())?;
        let m = moments(&s);
        points.push(ExtremePoint { mu, x: m.mean[2] / jf, f: m.cov[0][0] / jf });
    }
    Ok(ExtremeCurve { j: two_j / 2, points })
}

impl ExtremeCurve {
    /// F_j(x), linear between traced points; even in x.
    pub fn f_j(&self, x: f64) -> Option<f64> {
        let x = x.abs();
        let mut pts: Vec<(f64, f64)> = self.points.iter().map(|p| (p.x.abs(), p.f)).collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let first = pts.first()?;
        if x <= first.0 {
            return Some(first.1);
        }
        for w in pts.windows(2) {
            let ((x0, f0), (x1, f1)) = (w[0], w[1]);
            if x <= x1 {
                let t = if x1 > x0 { (x - x0) / (x1 - x0) } else { 0.0 };
                return Some(f0 + t * (f1 - f0));
            }
        }
        pts.last().map(|p| p.1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QNDSpec {
    pub n_atoms: usize,
    pub photons: f64,
    /// interaction angle per unit J_z
    pub chi: f64,
    /// fraction of photons lost to spontaneous scattering
    pub eta: f64,
}

/// Below this |χ|N/2 the small-angle (Gaussian) picture holds.
pub const QND_GAUSSIAN_LIMIT: f64 = 0.3;

impl QNDSpec {
    pub fn new(n_atoms: usize, photons: f64, chi: f64, eta: f64) -> Result<Self> {
        if n_atoms == 0 {
            return Err(SqzError::InvalidSize { n: 0, reason: "need at least one atom" });
        }
        if !(photons >= 0.0) {
            return Err(SqzError::OutOfRange { name: "photon number", value: photons });
        }
        if !chi.is_finite() {
            return Err(SqzError::NonFinite("chi"));
        }
        if !(0.0..1.0).contains(&eta) {
            return Err(SqzError::OutOfRange { name: "loss eta", value: eta });
        }
        Ok(QNDSpec { n_atoms, photons, chi, eta })
    }

    /// κ² = nNχ²/4
    pub fn kappa2(&self) -> f64 {
        self.photons * self.n_atoms as f64 * self.chi * self.chi / 4.0
    }

    pub fn gaussian_regime(&self) -> bool {
        self.chi.abs() * self.n_atoms as f64 / 2.0 < QND_GAUSSIAN_LIMIT
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QNDResult {
    pub kappa2: f64,
    #[cfg_attr(feature = "serde", serde(rename = "xi_R2"))]
    pub xi_r2: f64,
    #[cfg_attr(feature = "serde", serde(rename = "xi_R2_with_loss"))]
    pub xi_r2_with_loss: f64,
    pub gaussian_regime: bool,
}

pub fn qnd_conditional(spec: &QNDSpec) -> QNDResult {
    let k2 = spec.kappa2();
    let xi = 1.0 / (1.0 + k2);
    let keep = 1.0 - spec.eta;
    QNDResult { kappa2: k2, xi_r2: xi, xi_r2_with_loss: xi / (keep * keep), gaussian_regime: spec.gaussian_regime() }
}

/// Running sums of squared estimation residuals.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ResidualSums {
    pub trials: u64,
    pub sum_sq: f64,
    pub sum_quad: f64,
}

impl ResidualSums {
    pub fn merge(self, other: ResidualSums) -> ResidualSums {
        ResidualSums {
            trials: self.trials + other.trials,
            sum_sq: self.sum_sq + other.sum_sq,
            sum_quad: self.sum_quad + other.sum_quad,
        }
    }
}

/// Trials per independently seeded chunk.
pub const QND_CHUNK: u64 = 4096;

/// One chunk of the QND Monte Carlo.
///
/// Chunk `c` draws from ChaCha8 seeded with `seed` on stream `c`, so any
/// partition of chunks across workers reproduces the serial result.
pub fn qnd_monte_carlo_chunk(spec: &QNDSpec, seed: u64, chunk: u64, trials: u64) -> Result<ResidualSums> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let n = spec.n_atoms as f64;
    let binom = Binomial::new(spec.n_atoms as u64, 0.5).map_err(|_| SqzError::BadState("binomial parameters"))?;
    let noise = Normal::new(0.0, libm::sqrt(spec.photons / 4.0)).map_err(|_| SqzError::BadState("photon noise"))?;
    let gain = spec.chi * spec.photons / 2.0;
    // linear MMSE estimate of M from m
    let prior = n / 4.0;
    let denom = gain * gain * prior + spec.photons / 4.0;
    let weight = if denom > 0.0 { gain * prior / denom } else { 0.0 };
    let mut sums = ResidualSums::default();
    for _ in 0..trials {
        let m_atoms = binom.sample(&mut rng) as f64 - n / 2.0;
        let m_photons = gain * m_atoms + noise.sample(&mut rng);
        let r = m_atoms - weight * m_photons;
        sums.trials += 1;
        sums.sum_sq += r * r;
        sums.sum_quad += r * r * r * r;
    }
    Ok(sums)
}

/// Conditional variance over N/4 and its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QNDMonteCarlo {
    pub trials: u64,
    pub variance_ratio: f64,
    pub standard_error: f64,
}

impl QNDMonteCarlo {
    pub fn from_sums(spec: &QNDSpec, s: &ResidualSums) -> Self {
        let t = s.trials.max(1) as f64;
        let scale = spec.n_atoms as f64 / 4.0;
        let mean = s.sum_sq / t;
        let var = (s.sum_quad / t - mean * mean).max(0.0);
        QNDMonteCarlo { trials: s.trials, variance_ratio: mean / scale, standard_error: libm::sqrt(var / t) / scale }
    }
}

/// Chunk layout for `trials` total trials: (chunk index, trials in chunk).
pub fn qnd_chunks(trials: u64) -> Vec<(u64, u64)> {
    let full = trials / QND_CHUNK;
    let mut out: Vec<(u64, u64)> = (0..full).map(|c| (c, QND_CHUNK)).collect();
    if trials % QND_CHUNK != 0 {
        out.push((full, trials % QND_CHUNK));
    }
    out
}

pub fn qnd_monte_carlo(spec: &QNDSpec, trials: u64, seed: u64) -> Result<QNDMonteCarlo> {
    let mut total = ResidualSums::default();
    for (c, t) in qnd_chunks(trials) {
        total = total.merge(qnd_monte_carlo_chunk(spec, seed, c, t)?);
    }
    Ok(QNDMonteCarlo::from_sums(spec, &total))
}
