//! Twisting dynamics: one-axis (closed forms and numerics), driven one-axis,
//! two-axis, and the quantum kicked top.

use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::dicke::{build_operators, dicke, ladder_coefficient, moments, LocalMoments, SymmetricState};
use crate::error::{Result, SqzError};
use crate::linalg::{CMat, HermitianEigen};
use crate::metrics::{compute_report, min_transverse_variance, parity_shortcuts, SqueezingReport};
use crate::roots::{golden_min, scan_then_refine};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum HamiltonianKind {
    /// χ J_x²
    OatX,
    /// χ J_z²
    OatZ,
    /// χ (J_x J_y + J_y J_x)
    Tat,
    /// χ J_x² + B J_z
    OatTransverse,
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HamiltonianSpec {
    pub kind: HamiltonianKind,
    pub chi: f64,
    pub field_b: f64,
}

impl HamiltonianSpec {
    pub fn oat_x(chi: f64) -> Self {
        HamiltonianSpec { kind: HamiltonianKind::OatX, chi, field_b: 0.0 }
    }

    pub fn oat_z(chi: f64) -> Self {
        HamiltonianSpec { kind: HamiltonianKind::OatZ, chi, field_b: 0.0 }
    }

    pub fn tat(chi: f64) -> Self {
        HamiltonianSpec { kind: HamiltonianKind::Tat, chi, field_b: 0.0 }
    }

    pub fn driven(chi: f64, field_b: f64) -> Self {
        HamiltonianSpec { kind: HamiltonianKind::OatTransverse, chi, field_b }
    }

    fn validate(&self) -> Result<()> {
        if !self.chi.is_finite() || !self.field_b.is_finite() {
            return Err(SqzError::NonFinite("hamiltonian coupling"));
        }
        if self.kind != HamiltonianKind::OatTransverse && self.field_b != 0.0 {
            return Err(SqzError::OutOfRange { name: "field_b (only for OatTransverse)", value: self.field_b });
        }
        Ok(())
    }

    pub fn matrix(&self, n_particles: usize) -> Result<CMat> {
        self.validate()?;
        let o = build_operators(n_particles)?;
        let chi = Complex64::new(self.chi, 0.0);
        Ok(match self.kind {
            HamiltonianKind::OatX => &o.jx * &o.jx * chi,
            HamiltonianKind::OatZ => &o.jz * &o.jz * chi,
            HamiltonianKind::Tat => (&o.jx * &o.jy + &o.jy * &o.jx) * chi,
            HamiltonianKind::OatTransverse => &o.jx * &o.jx * chi + &o.jz * Complex64::new(self.field_b, 0.0),
        })
    }

    /// Banded real form for every kind except two-axis twisting, which is imaginary.
    fn real_matrix(&self, n_particles: usize) -> Result<Option<DMatrix<f64>>> {
        self.validate()?;
        crate::dicke::check_size(n_particles)?;
        if self.kind == HamiltonianKind::Tat {
            return Ok(None);
        }
        let dim = n_particles + 1;
        let j = n_particles as f64 / 2.0;
        let mut h = DMatrix::zeros(dim, dim);
        for k in 0..dim {
            let m = j - k as f64;
            h[(k, k)] = match self.kind {
                HamiltonianKind::OatZ => self.chi * m * m,
                // ⟨m|J_x²|m⟩ = (j(j+1) - m²)/2
                _ => 0.5 * self.chi * (j * (j + 1.0) - m * m) + self.field_b * m,
            };
            if self.kind != HamiltonianKind::OatZ && k >= 2 {
                // ⟨m+2|J_x²|m⟩ = ⟨m+2|J_+²|m⟩/4
                let v = 0.25 * self.chi * ladder_coefficient(j, m) * ladder_coefficient(j, m + 1.0);
                h[(k - 2, k)] = v;
                h[(k, k - 2)] = v;
            }
        }
        Ok(Some(h))
    }
}

/// Reusable propagator for one Hamiltonian and particle number.
#[derive(Clone, Debug)]
pub struct Evolver {
    n_particles: usize,
    eig: HermitianEigen,
}

impl Evolver {
    pub fn new(n_particles: usize, h: &HamiltonianSpec) -> Result<Self> {
        let eig = match h.real_matrix(n_particles)? {
            Some(real) => HermitianEigen::from_real(&real),
            None => HermitianEigen::new(&h.matrix(n_particles)?),
        };
        Ok(Evolver { n_particles, eig })
    }

    pub fn evolve(&self, state: &SymmetricState, t: f64) -> Result<SymmetricState> {
        if state.n_particles() != self.n_particles {
            return Err(SqzError::BadState("particle number differs from the propagator"));
        }
        if !t.is_finite() {
            return Err(SqzError::NonFinite("evolution time"));
        }
        Ok(SymmetricState::from_cvec(self.n_particles, &self.eig.evolve(&state.to_cvec(), t)))
    }
}

/// exp(-i H t)|ψ⟩.
pub fn evolve(state: &SymmetricState, h: &HamiltonianSpec, t: f64) -> Result<SymmetricState> {
    if !(h.chi * t).is_finite() || !(h.field_b * t).is_finite() {
        return Err(SqzError::NonFinite("chi * t"));
    }
    Evolver::new(state.n_particles(), h)?.evolve(state, t)
}

/// All spins down: |j, -j⟩, the starting point for twisting.
pub fn all_down(n_particles: usize) -> Result<SymmetricState> {
    dicke(n_particles, -(n_particles as f64) / 2.0)
}

/// exp(-iθ J_x²/2)|j,-j⟩ by numerics, reusing one diagonalization for many θ.
#[derive(Clone, Debug)]
pub struct OatStates {
    evolver: Evolver,
    start: SymmetricState,
}

impl OatStates {
    pub fn new(n_particles: usize) -> Result<Self> {
        Ok(OatStates { evolver: Evolver::new(n_particles, &HamiltonianSpec::oat_x(1.0))?, start: all_down(n_particles)? })
    }

    pub fn at(&self, theta: f64) -> Result<SymmetricState> {
        self.evolver.evolve(&self.start, 0.5 * theta)
    }
}

/// Local moments of the one-axis twisted state, θ = 2χt.
pub fn oat_closed_form(n_particles: usize, theta: f64) -> Result<LocalMoments> {
    if n_particles < 2 {
        return Err(SqzError::InvalidSize { n: n_particles, reason: "one-axis twisting closed forms need N >= 2" });
    }
    let n = n_particles as i32;
    let half_c = libm::cos(theta / 2.0);
    let cn2 = libm::pow(libm::cos(theta), (n - 2) as f64);
    let a = 1.0 - cn2;
    Ok(LocalMoments {
        n_particles,
        sz: -libm::pow(half_c, (n - 1) as f64),
        szsz: 0.5 * (1.0 + cn2),
        spsm: a / 8.0,
        smsm: Complex64::new(-a / 8.0, -0.5 * libm::sin(theta / 2.0) * libm::pow(half_c, (n - 2) as f64)),
        sdots: 1.0,
    })
}

/// Pairwise concurrence of the one-axis twisted state.
pub fn oat_concurrence(n_particles: usize, theta: f64) -> f64 {
    let n = n_particles as i32;
    let a = 1.0 - libm::pow(libm::cos(theta), (n - 2) as f64);
    let s = libm::sin(theta / 2.0);
    let c = libm::pow(libm::cos(theta / 2.0), (n - 2) as f64);
    0.25 * (libm::sqrt(a * a + 16.0 * s * s * c * c) - a)
}

/// ξ_S² = 1 - (N-1) C for the one-axis twisted state.
pub fn oat_xi_s2(n_particles: usize, theta: f64) -> f64 {
    1.0 - (n_particles as f64 - 1.0) * oat_concurrence(n_particles, theta)
}

/// Asymptotic optimal twist 12^(1/6) (N/2)^(-2/3).
pub fn oat_theta_asymptotic(n_particles: usize) -> f64 {
    libm::pow(12.0, 1.0 / 6.0) * libm::pow(n_particles as f64 / 2.0, -2.0 / 3.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OatOptimum {
    pub theta_star: f64,
    pub xi_s2_star: f64,
    /// Angle between the squeezed quadrature and the twisting axis x.
    pub delta_star: f64,
}

/// Minimizes the closed-form ξ_S²(θ).
pub fn optimal_oat(n_particles: usize) -> Result<OatOptimum> {
    if n_particles < 10 {
        return Err(SqzError::InvalidSize { n: n_particles, reason: "optimal twist search needs N >= 10" });
    }
    let guess = oat_theta_asymptotic(n_particles);
    let lo = guess / 8.0;
    let hi = (8.0 * guess).min(PI);
    let (theta_star, xi_s2_star) = scan_then_refine(|t| oat_xi_s2(n_particles, t), lo, hi, 400, 1e-13);
    let pm = oat_closed_form(n_particles, theta_star)?.to_parity_moments();
    let tm = min_transverse_variance(&pm)?;
    let delta_star = libm::acos(tm.n_perp[0].abs().min(1.0));
    Ok(OatOptimum { theta_star, xi_s2_star, delta_star })
}

fn xi_s2_or_one(state: &SymmetricState) -> f64 {
    compute_report(&moments(state)).xi_s2.unwrap_or(f64::INFINITY)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimedMinimum {
    /// Time in units where the Hamiltonian's χ is as supplied.
    pub t_star: f64,
    pub xi_s2_star: f64,
}

/// Minimum of ξ_S²(t) from |j,-j⟩ over (0, t_max]: coarse scan, then golden refinement.
pub fn windowed_minimum(n_particles: usize, h: &HamiltonianSpec, t_max: f64, samples: usize) -> Result<TimedMinimum> {
    let ev = Evolver::new(n_particles, h)?;
    let start = all_down(n_particles)?;
    let f = |t: f64| ev.evolve(&start, t).map(|s| xi_s2_or_one(&s)).unwrap_or(f64::INFINITY);
    let step = t_max / samples as f64;
    let mut best = (step, f(step));
    for i in 2..=samples {
        let t = step * i as f64;
        let v = f(t);
        if v < best.1 {
            best = (t, v);
        }
    }
    let (t, v) = golden_min(f, (best.0 - step).max(step * 1e-3), (best.0 + step).min(t_max), 1e-12);
    Ok(if v <= best.1 { TimedMinimum { t_star: t, xi_s2_star: v } } else { TimedMinimum { t_star: best.0, xi_s2_star: best.1 } })
}

/// Two-axis twisting minimum over χt ∈ (0, π/2] with χ = 1.
pub fn tat_minimum(n_particles: usize) -> Result<TimedMinimum> {
    windowed_minimum(n_particles, &HamiltonianSpec::tat(1.0), PI / 2.0, 200)
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KickedTopSpec {
    pub kappa: f64,
    /// Rotation angle per kick about y.
    pub p: f64,
    pub j: f64,
}

impl KickedTopSpec {
    pub fn new(kappa: f64, j: f64) -> Self {
        KickedTopSpec { kappa, p: PI / 2.0, j }
    }
}

/// Floquet operator exp(-iκ J_z²/(2j)) exp(-ip J_y) as a dense matrix.
pub fn floquet_operator(n_particles: usize, spec: &KickedTopSpec) -> Result<CMat> {
    if (spec.j - n_particles as f64 / 2.0).abs() > 1e-12 {
        return Err(SqzError::OutOfRange { name: "kicked-top j (must equal N/2)", value: spec.j });
    }
    let o = build_operators(n_particles)?;
    let rot = HermitianEigen::new(&o.jy).map(|e| Complex64::from_polar(1.0, -spec.p * e));
    let dim = n_particles + 1;
    let twist = DMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            let m = spec.j - r as f64;
            Complex64::from_polar(1.0, -spec.kappa / (2.0 * spec.j) * m * m)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Ok(twist * rot)
}

/// Reports for kicks 0 (initial state) through `n_kicks`; index equals kick number.
pub fn kicked_top_trajectory(initial: &SymmetricState, spec: &KickedTopSpec, n_kicks: usize) -> Result<Vec<SqueezingReport>> {
    if n_kicks < 1 {
        return Err(SqzError::OutOfRange { name: "n_kicks", value: n_kicks as f64 });
    }
    let f = floquet_operator(initial.n_particles(), spec)?;
    let mut out = Vec::with_capacity(n_kicks + 1);
    let mut psi = initial.clone();
    out.push(compute_report(&moments(&psi)));
    for _ in 0..n_kicks {
        psi = psi.apply_unitary(&f);
        out.push(compute_report(&moments(&psi)));
    }
    Ok(out)
}

fn squeezed(r: &SqueezingReport) -> bool {
    matches!(r.xi_s2, Some(x) if x < 1.0)
}

/// First kick n ≥ 1 with ξ_S²(n) ≥ 1.
pub fn first_unsqueezed_step(trajectory: &[SqueezingReport]) -> Option<usize> {
    (1..trajectory.len()).find(|&k| !squeezed(&trajectory[k]))
}

/// First kick n ≥ 1 after which ξ_S² never drops below 1 again within the trajectory.
pub fn vanishing_step(trajectory: &[SqueezingReport]) -> Option<usize> {
    let last_squeezed = (1..trajectory.len()).rev().find(|&k| squeezed(&trajectory[k]));
    match last_squeezed {
        None => Some(1),
        Some(k) if k + 1 < trajectory.len() => Some(k + 1),
        Some(_) => None,
    }
}

/// ξ_S² of the closed-form one-axis twisted state through the parity shortcut.
pub fn oat_shortcut_xi_s2(n_particles: usize, theta: f64) -> Result<f64> {
    Ok(parity_shortcuts(&oat_closed_form(n_particles, theta)?).xi_s2)
}
