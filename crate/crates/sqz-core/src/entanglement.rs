//! Pairwise entanglement: two-qubit reduced states, concurrence, pairwise
//! correlations, and moment-based entanglement inequalities.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dicke::{build_operators, moments, LocalMoments, MomentSet, SymmetricState};
use crate::error::{Result, SqzError};
use crate::linalg::{hermiticity_defect, CMat, CVec, HermitianEigen};
use crate::metrics::{compute_report, cross, mean_spin_direction, min_eigen3, min_transverse_variance};

const RDM_TOL: f64 = 1e-12;

/// Block-diagonal two-qubit state of a parity, exchange-symmetric ensemble.
///
/// Basis order is {|00⟩, |11⟩, |01⟩, |10⟩} with |0⟩ the σ_z = +1 level.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TwoQubitRDM {
    pub v_plus: f64,
    pub v_minus: f64,
    pub w: f64,
    pub y: f64,
    /// ⟨11|ρ|00⟩ = ⟨J_+²⟩ / (N(N-1))
    pub u: Complex64,
}

impl TwoQubitRDM {
    pub fn new(v_plus: f64, v_minus: f64, w: f64, y: f64, u: Complex64) -> Result<Self> {
        let r = TwoQubitRDM { v_plus, v_minus, w, y, u };
        r.validate()?;
        Ok(r)
    }

    fn validate(&self) -> Result<()> {
        if (self.v_plus + self.v_minus + 2.0 * self.w - 1.0).abs() > 1e-10 {
            return Err(SqzError::InvalidDensity("unit trace"));
        }
        if self.v_plus < -RDM_TOL || self.v_minus < -RDM_TOL || self.w < -RDM_TOL {
            return Err(SqzError::InvalidDensity("positive on the diagonal"));
        }
        let vv = (self.v_plus * self.v_minus).max(0.0);
        if libm::sqrt(vv) < self.u.norm() - 1e-10 || self.w < self.y.abs() - 1e-10 {
            return Err(SqzError::InvalidDensity("positive semidefinite"));
        }
        Ok(())
    }

    /// Dense 4x4 matrix in the block order {|00⟩, |11⟩, |01⟩, |10⟩}.
    pub fn to_block_matrix(&self) -> CMat {
        let c = |x: f64| Complex64::new(x, 0.0);
        let mut m = CMat::zeros(4, 4);
        m[(0, 0)] = c(self.v_plus);
        m[(1, 1)] = c(self.v_minus);
        m[(1, 0)] = self.u;
        m[(0, 1)] = self.u.conj();
        m[(2, 2)] = c(self.w);
        m[(3, 3)] = c(self.w);
        m[(2, 3)] = c(self.y);
        m[(3, 2)] = c(self.y);
        m
    }

    /// Dense 4x4 matrix in the computational order {|00⟩, |01⟩, |10⟩, |11⟩}.
    pub fn to_computational(&self) -> CMat {
        let block = self.to_block_matrix();
        // block index -> computational index
        let map = [0usize, 3, 1, 2];
        let mut m = CMat::zeros(4, 4);
        for r in 0..4 {
            for c in 0..4 {
                m[(map[r], map[c])] = block[(r, c)];
            }
        }
        m
    }
}

pub fn rdm_from_collective(m: &MomentSet) -> Result<TwoQubitRDM> {
    if m.n_particles < 2 {
        return Err(SqzError::InvalidSize { n: m.n_particles, reason: "a pair needs N >= 2" });
    }
    let n = m.n();
    let den = 4.0 * n * (n - 1.0);
    let jz = m.mean[2];
    let jz2 = m.corr[2][2];
    let jperp2 = m.corr[0][0] + m.corr[1][1];
    let jp2 = m.jm_squared().conj();
    TwoQubitRDM::new(
        (n * n - 2.0 * n + 4.0 * jz2 + 4.0 * jz * (n - 1.0)) / den,
        (n * n - 2.0 * n + 4.0 * jz2 - 4.0 * jz * (n - 1.0)) / den,
        (n * n - 4.0 * jz2) / den,
        (4.0 * jperp2 - 2.0 * n) / den,
        jp2 / (n * (n - 1.0)),
    )
}

pub fn rdm_from_local(lm: &LocalMoments) -> Result<TwoQubitRDM> {
    TwoQubitRDM::new(
        0.25 * (1.0 + 2.0 * lm.sz + lm.szsz),
        0.25 * (1.0 - 2.0 * lm.sz + lm.szsz),
        0.25 * (1.0 - lm.szsz),
        lm.spsm,
        lm.smsm.conj(),
    )
}

/// 2 max{0, |u| - w, y - sqrt(v₊v₋)}
pub fn concurrence_symmetric(r: &TwoQubitRDM) -> f64 {
    let a = r.u.norm() - r.w;
    let b = r.y - libm::sqrt((r.v_plus * r.v_minus).max(0.0));
    2.0 * a.max(b).max(0.0)
}

/// Wootters concurrence of a 4x4 density matrix in computational order.
///
/// With ρ = W W†, the λᵢ are the singular values of Wᵀ (σ_y⊗σ_y) W, which
/// avoids squaring. Eigenvalues of ρ below 1e-14 are treated as zero.
pub fn concurrence_general(rho: &CMat) -> Result<f64> {
    if rho.nrows() != 4 || rho.ncols() != 4 {
        return Err(SqzError::InvalidDensity("4x4"));
    }
    if hermiticity_defect(rho) > 1e-9 {
        return Err(SqzError::InvalidDensity("Hermitian"));
    }
    let tr: Complex64 = (0..4).map(|k| rho[(k, k)]).sum();
    if (tr - Complex64::new(1.0, 0.0)).norm() > 1e-9 {
        return Err(SqzError::InvalidDensity("unit trace"));
    }
    let eig = HermitianEigen::new(rho);
    if eig.values[0] < -1e-9 {
        return Err(SqzError::InvalidDensity("positive semidefinite"));
    }
    let mut w = eig.vectors.clone();
    for (k, &e) in eig.values.iter().enumerate() {
        let scale = if e <= RHO_EIGEN_CUTOFF { 0.0 } else { libm::sqrt(e) };
        w.column_mut(k).scale_mut(scale);
    }
    // σ_y ⊗ σ_y in computational order is the anti-diagonal (-1, 1, 1, -1)
    let mut yy = CMat::zeros(4, 4);
    yy[(0, 3)] = Complex64::new(-1.0, 0.0);
    yy[(1, 2)] = Complex64::new(1.0, 0.0);
    yy[(2, 1)] = Complex64::new(1.0, 0.0);
    yy[(3, 0)] = Complex64::new(-1.0, 0.0);
    let b = w.transpose() * yy * &w;
    let mut lam: Vec<f64> = b.singular_values().iter().copied().collect();
    lam.sort_by(|a, b| b.total_cmp(a));
    Ok((lam[0] - lam[1] - lam[2] - lam[3]).max(0.0))
}

const RHO_EIGEN_CUTOFF: f64 = 1e-14;

/// Two-qubit reduced density matrix of any symmetric state, computational order.
///
/// Built from ρ = (1/4) Σ T_ab σ_a ⊗ σ_b with T_a0 = 2⟨J_a⟩/N and
/// T_ab = (4C_ab - Nδ_ab)/(N(N-1)); no parity assumption.
pub fn pair_density_matrix(state: &SymmetricState) -> Result<CMat> {
    pair_density_from_moments(&moments(state))
}

pub fn pair_density_from_moments(m: &MomentSet) -> Result<CMat> {
    if m.n_particles < 2 {
        return Err(SqzError::InvalidSize { n: m.n_particles, reason: "a pair needs N >= 2" });
    }
    let n = m.n();
    let paulis = pauli_basis();
    let mut t = [[0.0; 4]; 4];
    t[0][0] = 1.0;
    for a in 0..3 {
        t[a + 1][0] = 2.0 * m.mean[a] / n;
        t[0][a + 1] = t[a + 1][0];
        for b in 0..3 {
            let diag = if a == b { n } else { 0.0 };
            t[a + 1][b + 1] = (4.0 * m.corr[a][b] - diag) / (n * (n - 1.0));
        }
    }
    let mut rho = CMat::zeros(4, 4);
    for a in 0..4 {
        for b in 0..4 {
            if t[a][b] != 0.0 {
                rho += paulis[a].kronecker(&paulis[b]) * Complex64::new(0.25 * t[a][b], 0.0);
            }
        }
    }
    Ok(rho)
}

/// I, σ_x, σ_y, σ_z with |0⟩ the σ_z = +1 level.
fn pauli_basis() -> [CMat; 4] {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    [
        CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]),
        CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]),
        CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]),
        CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]),
    ]
}

/// G = ⟨σ_1n σ_2n⟩ - ⟨σ_1n⟩⟨σ_2n⟩ along unit `direction`.
pub fn pairwise_correlation(m: &MomentSet, direction: [f64; 3]) -> Result<f64> {
    if m.n_particles < 2 {
        return Err(SqzError::InvalidSize { n: m.n_particles, reason: "a pair needs N >= 2" });
    }
    let n = m.n();
    let mean = m.mean_along(direction);
    Ok(4.0 * (n * m.variance_along(direction) + mean * mean) / (n * n * (n - 1.0)) - 1.0 / (n - 1.0))
}

/// Minimum of G over all directions: smallest eigenvalue of 4Γ/(N²(N-1)) - I/(N-1).
pub fn min_pairwise_correlation(m: &MomentSet) -> Result<f64> {
    if m.n_particles < 2 {
        return Err(SqzError::InvalidSize { n: m.n_particles, reason: "a pair needs N >= 2" });
    }
    let n = m.n();
    Ok(4.0 * min_eigen3(&m.gamma_big).value / (n * n * (n - 1.0)) - 1.0 / (n - 1.0))
}

/// Minimum of G over directions normal to the mean spin.
pub fn min_transverse_pairwise_correlation(m: &MomentSet) -> Result<f64> {
    let t = min_transverse_variance(m)?;
    pairwise_correlation(m, t.n_perp)
}

/// Left-minus-right residual of an inequality; negative means entanglement detected.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Inequality {
    pub violated: bool,
    pub margin: f64,
}

impl Inequality {
    fn from_margin(margin: f64, scale: f64) -> Self {
        let margin = if margin.abs() <= 1e-10 * scale.max(1.0) { 0.0 } else { margin };
        Inequality { violated: margin < 0.0, margin }
    }
}

/// Moments of a bipartite two-ensemble system for the two-mode criterion.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TwoModeMoments {
    /// (ΔJ_z^(+))²
    pub var_jz_plus: f64,
    /// (ΔJ_y^(-))²
    pub var_jy_minus: f64,
    /// ⟨J_x^(+)⟩
    pub jx_plus: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CriteriaReport {
    /// [⟨J1²⟩ + N(N-2)/4]² ≥ [⟨J2²⟩ + ⟨J3²⟩ - N/2]² + (N-1)²⟨J1⟩²
    pub two_qubit: Inequality,
    /// Genuine GHZ-type three-qubit test.
    pub ghz3: Inequality,
    pub threeq_a: Inequality,
    pub threeq_b: Inequality,
    pub singlet_xi2: f64,
    /// N(ΔJ_n1)² ≥ ⟨J_n3⟩², the spin-1/2 instance of the F_j bound.
    pub spin_j: Inequality,
    pub two_mode: Option<Inequality>,
}

type Frame = [[f64; 3]; 3];

fn candidate_frames(m: &MomentSet) -> Vec<Frame> {
    let mut frames = vec![[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]];
    let msd = mean_spin_direction(m);
    if msd.defined {
        if let Ok(t) = min_transverse_variance(m) {
            let n3 = msd.n0;
            let n1 = t.n_perp;
            frames.push([n1, cross(n3, n1), n3]);
        }
    }
    let gm = nalgebra::Matrix3::from_fn(|r, c| m.gamma_big[r][c]);
    let eig = nalgebra::SymmetricEigen::new(gm);
    let e = eig.eigenvectors;
    frames.push([[e[(0, 0)], e[(1, 0)], e[(2, 0)]], [e[(0, 1)], e[(1, 1)], e[(2, 1)]], [e[(0, 2)], e[(1, 2)], e[(2, 2)]]]);
    // every frame in every axis order and with sign flips on the odd axes
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut out = Vec::new();
    for f in frames {
        for p in perms {
            for s1 in [1.0, -1.0] {
                for s3 in [1.0, -1.0] {
                    let a = f[p[0]].map(|x| s1 * x);
                    let b = f[p[1]];
                    let c = f[p[2]].map(|x| s3 * x);
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

struct FrameMoments {
    j1: f64,
    j3: f64,
    j1sq: f64,
    j2sq: f64,
    j3sq: f64,
    j1cube: f64,
    j3cube: f64,
    j2j1j2: f64,
    j2j3j2: f64,
    j1j3j1: f64,
}

fn frame_moments(psi: &CVec, ops: &crate::dicke::Operators, f: &Frame) -> FrameMoments {
    let a = ops.along(f[0]);
    let b = ops.along(f[1]);
    let c = ops.along(f[2]);
    let av = &a * psi;
    let bv = &b * psi;
    let cv = &c * psi;
    let re = |x: &CVec, y: &CVec| x.dotc(y).re;
    let aav = &a * &av;
    let ccv = &c * &cv;
    FrameMoments {
        j1: re(psi, &av),
        j3: re(psi, &cv),
        j1sq: re(&av, &av),
        j2sq: re(&bv, &bv),
        j3sq: re(&cv, &cv),
        j1cube: re(&av, &aav),
        j3cube: re(&cv, &ccv),
        j2j1j2: re(&bv, &(&a * &bv)),
        j2j3j2: re(&bv, &(&c * &bv)),
        j1j3j1: re(&av, &(&c * &av)),
    }
}

/// Evaluate every moment-based criterion and keep the most violating frame.
pub fn evaluate_criteria(state: &SymmetricState, aux: Option<&TwoModeMoments>) -> Result<CriteriaReport> {
    let n_particles = state.n_particles();
    if n_particles < 2 {
        return Err(SqzError::InvalidSize { n: n_particles, reason: "criteria need N >= 2" });
    }
    let m = moments(state);
    let ops = build_operators(n_particles)?;
    let psi = state.to_cvec();
    let n = n_particles as f64;
    let mut two_qubit = f64::INFINITY;
    let mut ghz3 = f64::INFINITY;
    let mut threeq_a = f64::INFINITY;
    let mut threeq_b = f64::INFINITY;
    let mut spin_j = f64::INFINITY;
    for f in candidate_frames(&m) {
        let fm = frame_moments(&psi, &ops, &f);
        let lhs = fm.j1sq + n * (n - 2.0) / 4.0;
        let rhs_a = fm.j2sq + fm.j3sq - n / 2.0;
        two_qubit = two_qubit.min(lhs * lhs - rhs_a * rhs_a - (n - 1.0) * (n - 1.0) * fm.j1 * fm.j1);
        let cubic = -fm.j1cube / 3.0 + fm.j2j1j2 - (n - 2.0) / 2.0 * fm.j3sq + fm.j1 / 3.0;
        ghz3 = ghz3.min(cubic + n * (n - 1.0) * (5.0 * n - 2.0) / 24.0);
        threeq_b = threeq_b.min(cubic + n * n * (n - 2.0) / 8.0);
        let a = fm.j3cube - 2.0 * fm.j2j3j2 - 2.0 * fm.j1j3j1 - (n - 2.0) / 2.0 * (2.0 * fm.j1sq + 2.0 * fm.j2sq - fm.j3sq)
            - (n * n - 4.0 * n + 8.0) / 4.0 * fm.j3
            + n * (n - 2.0) * (13.0 * n - 4.0) / 24.0;
        threeq_a = threeq_a.min(a);
        let var1 = fm.j1sq - fm.j1 * fm.j1;
        spin_j = spin_j.min(n * var1 - fm.j3 * fm.j3);
    }
    let cube = n * n * n;
    Ok(CriteriaReport {
        two_qubit: Inequality::from_margin(two_qubit, cube * n),
        ghz3: Inequality::from_margin(ghz3, cube),
        threeq_a: Inequality::from_margin(threeq_a, cube),
        threeq_b: Inequality::from_margin(threeq_b, cube),
        singlet_xi2: compute_report(&m).xi_singlet2,
        spin_j: Inequality::from_margin(spin_j, n * n),
        two_mode: aux.map(two_mode_criterion),
    })
}

/// (ΔJ_z^(+))² + (ΔJ_y^(-))² < ⟨J_x^(+)⟩ signals two-mode squeezing.
pub fn two_mode_criterion(aux: &TwoModeMoments) -> Inequality {
    Inequality::from_margin(aux.var_jz_plus + aux.var_jy_minus - aux.jx_plus, aux.jx_plus.abs())
}

/// Spin-j separability bound (ΔJ_x)² ≥ N j F_j(⟨J_z⟩/(Nj)) with a caller-supplied F_j.
pub fn spin_j_margin(var_jx: f64, mean_jz: f64, n_particles: usize, j: f64, f_j: impl Fn(f64) -> f64) -> Inequality {
    let nj = n_particles as f64 * j;
    Inequality::from_margin(var_jx - nj * f_j(mean_jz / nj), nj)
}
