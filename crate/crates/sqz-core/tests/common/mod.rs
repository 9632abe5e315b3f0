//! Brute-force references on the full 2^N qubit space.
//!
//! Bit i of a basis index is qubit i; bit value 0 is σ_z = +1.

#![allow(dead_code)]

use nalgebra::{Matrix3, SymmetricEigen};
use num_complex::Complex64;
use sqz_core::SymmetricState;

pub type C = Complex64;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Dicke amplitudes spread over every bit string with k ones.
pub fn to_full(state: &SymmetricState) -> Vec<C> {
    let n = state.n_particles();
    let amps = state.amplitudes();
    (0..1usize << n)
        .map(|b| {
            let k = b.count_ones() as usize;
            amps[k] / binomial(n, k).sqrt()
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

/// σ on one qubit applied to a basis state: returns (new index, phase).
fn pauli_on_basis(b: usize, site: usize, p: Pauli) -> (usize, C) {
    let bit = (b >> site) & 1;
    match p {
        Pauli::X => (b ^ (1 << site), c(1.0, 0.0)),
        Pauli::Y => (b ^ (1 << site), if bit == 0 { c(0.0, 1.0) } else { c(0.0, -1.0) }),
        Pauli::Z => (b, if bit == 0 { c(1.0, 0.0) } else { c(-1.0, 0.0) }),
    }
}

fn string_on_basis(b: usize, string: &[(usize, Pauli)]) -> (usize, C) {
    let mut idx = b;
    let mut phase = c(1.0, 0.0);
    for &(site, p) in string {
        let (i, ph) = pauli_on_basis(idx, site, p);
        idx = i;
        phase *= ph;
    }
    (idx, phase)
}

pub fn apply_string(psi: &[C], string: &[(usize, Pauli)]) -> Vec<C> {
    let mut out = vec![c(0.0, 0.0); psi.len()];
    for (b, &a) in psi.iter().enumerate() {
        let (i, ph) = string_on_basis(b, string);
        out[i] += ph * a;
    }
    out
}

pub fn collective(psi: &[C], n: usize, p: Pauli) -> Vec<C> {
    let mut out = vec![c(0.0, 0.0); psi.len()];
    for site in 0..n {
        for (o, v) in out.iter_mut().zip(apply_string(psi, &[(site, p)])) {
            *o += v * 0.5;
        }
    }
    out
}

fn dot(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Dense density matrix, row-major.
#[derive(Clone, Debug)]
pub struct Density {
    pub n: usize,
    pub dim: usize,
    pub data: Vec<C>,
}

impl Density {
    pub fn pure(psi: &[C], n: usize) -> Self {
        let dim = psi.len();
        let mut data = vec![c(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for col in 0..dim {
                data[r * dim + col] = psi[r] * psi[col].conj();
            }
        }
        Density { n, dim, data }
    }

    /// Tr(ρ P) for a Pauli string P.
    pub fn expect_string(&self, string: &[(usize, Pauli)]) -> C {
        let mut acc = c(0.0, 0.0);
        for a in 0..self.dim {
            // ⟨b|P|a⟩ = phase with b = image of a
            let (b, ph) = string_on_basis(a, string);
            acc += self.data[a * self.dim + b] * ph;
        }
        acc
    }

    /// ρ → Σ_k E_k ρ E_k† with the 2x2 Kraus set acting on one qubit.
    pub fn apply_on_site(&mut self, site: usize, kraus: &[[[C; 2]; 2]]) {
        let dim = self.dim;
        let mut out = vec![c(0.0, 0.0); dim * dim];
        let mask = 1usize << site;
        for e in kraus {
            for r in 0..dim {
                let rb = (r >> site) & 1;
                for col in 0..dim {
                    let cb = (col >> site) & 1;
                    let mut acc = c(0.0, 0.0);
                    for i in 0..2 {
                        let ri = (r & !mask) | (i << site);
                        let er = e[rb][i];
                        if er == c(0.0, 0.0) {
                            continue;
                        }
                        for j in 0..2 {
                            let cj = (col & !mask) | (j << site);
                            acc += er * self.data[ri * dim + cj] * e[cb][j].conj();
                        }
                    }
                    out[r * dim + col] += acc;
                }
            }
        }
        self.data = out;
    }

    pub fn apply_everywhere(&mut self, kraus: &[[[C; 2]; 2]]) {
        for site in 0..self.n {
            self.apply_on_site(site, kraus);
        }
    }

    /// Trace out every qubit from `keep` upward.
    pub fn keep_first(&self, keep: usize) -> Density {
        let dim = 1usize << keep;
        let rest = self.dim >> keep;
        let mut data = vec![c(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for col in 0..dim {
                for e in 0..rest {
                    data[r * dim + col] += self.data[(r | (e << keep)) * self.dim + (col | (e << keep))];
                }
            }
        }
        Density { n: keep, dim, data }
    }

    /// Reduced state of qubits 0 and 1, index = bit0 * 2 + bit1.
    pub fn pair(&self) -> [[C; 4]; 4] {
        let mut out = [[c(0.0, 0.0); 4]; 4];
        let rest = self.dim >> 2;
        for a in 0..4 {
            for b in 0..4 {
                let (a0, a1) = (a >> 1, a & 1);
                let (b0, b1) = (b >> 1, b & 1);
                for e in 0..rest {
                    let r = a0 | (a1 << 1) | (e << 2);
                    let col = b0 | (b1 << 1) | (e << 2);
                    out[a][b] += self.data[r * self.dim + col];
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Channel {
    Amplitude,
    Phase,
    Depolarizing,
}

/// Kraus operators; amplitude damping drives toward bit value 1.
pub fn kraus(ch: Channel, p: f64) -> Vec<[[C; 2]; 2]> {
    let z = c(0.0, 0.0);
    let r = |x: f64| c(x, 0.0);
    let s = 1.0 - p;
    match ch {
        Channel::Amplitude => vec![[[r(s.sqrt()), z], [z, r(1.0)]], [[z, z], [r(p.sqrt()), z]]],
        Channel::Phase => vec![
            [[r(s.sqrt()), z], [z, r(s.sqrt())]],
            [[r(p.sqrt()), z], [z, z]],
            [[z, z], [z, r(p.sqrt())]],
        ],
        Channel::Depolarizing => {
            let a = (1.0 - 0.75 * p).sqrt();
            let b = (0.25 * p).sqrt();
            vec![
                [[r(a), z], [z, r(a)]],
                [[z, r(b)], [r(b), z]],
                [[z, c(0.0, -b)], [c(0.0, b), z]],
                [[r(b), z], [z, r(-b)]],
            ]
        }
    }
}

/// Collective first and symmetrized second moments of ρ.
pub struct BruteMoments {
    pub mean: [f64; 3],
    pub corr: [[f64; 3]; 3],
}

const AXES: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

impl BruteMoments {
    pub fn of_density(rho: &Density) -> Self {
        let n = rho.n;
        let mut mean = [0.0; 3];
        let mut corr = [[0.0; 3]; 3];
        for (k, &pk) in AXES.iter().enumerate() {
            mean[k] = (0..n).map(|i| rho.expect_string(&[(i, pk)]).re).sum::<f64>() * 0.5;
            for (l, &pl) in AXES.iter().enumerate() {
                let mut acc = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        acc += rho.expect_string(&[(i, pk), (j, pl)]).re;
                    }
                }
                // Re Tr(ρ J_k J_l) is the symmetrized product for Hermitian J
                corr[k][l] = 0.25 * acc;
            }
        }
        BruteMoments { mean, corr }
    }

    pub fn of_pure(psi: &[C], n: usize) -> Self {
        let js: Vec<Vec<C>> = AXES.iter().map(|&p| collective(psi, n, p)).collect();
        let mut mean = [0.0; 3];
        let mut corr = [[0.0; 3]; 3];
        for k in 0..3 {
            mean[k] = dot(psi, &js[k]).re;
            for l in 0..3 {
                corr[k][l] = dot(&js[k], &js[l]).re;
            }
        }
        BruteMoments { mean, corr }
    }

    pub fn cov(&self) -> [[f64; 3]; 3] {
        let mut out = [[0.0; 3]; 3];
        for k in 0..3 {
            for l in 0..3 {
                out[k][l] = self.corr[k][l] - self.mean[k] * self.mean[l];
            }
        }
        out
    }

    /// Smallest eigenvalue of (N-1)γ + C.
    pub fn gamma_min(&self, n: usize) -> f64 {
        let cov = self.cov();
        let m = Matrix3::from_fn(|k, l| (n as f64 - 1.0) * cov[k][l] + self.corr[k][l]);
        SymmetricEigen::new(m).eigenvalues.min()
    }

    pub fn j_squared(&self) -> f64 {
        self.corr[0][0] + self.corr[1][1] + self.corr[2][2]
    }

    /// Minimal variance orthogonal to the mean spin, brute-forced over a
    /// dense angle grid followed by local polishing.
    pub fn min_transverse_variance(&self) -> f64 {
        let len = self.mean.iter().map(|x| x * x).sum::<f64>().sqrt();
        let n0 = self.mean.map(|x| x / len);
        let seed = if n0[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let d = seed[0] * n0[0] + seed[1] * n0[1] + seed[2] * n0[2];
        let mut e1 = [seed[0] - d * n0[0], seed[1] - d * n0[1], seed[2] - d * n0[2]];
        let l1 = e1.iter().map(|x| x * x).sum::<f64>().sqrt();
        e1 = e1.map(|x| x / l1);
        let e2 = [n0[1] * e1[2] - n0[2] * e1[1], n0[2] * e1[0] - n0[0] * e1[2], n0[0] * e1[1] - n0[1] * e1[0]];
        let cov = self.cov();
        let var = |a: f64| {
            let v = [0, 1, 2].map(|k| a.cos() * e1[k] + a.sin() * e2[k]);
            let mut acc = 0.0;
            for k in 0..3 {
                for l in 0..3 {
                    acc += v[k] * cov[k][l] * v[l];
                }
            }
            acc
        };
        let samples = 4000;
        let step = std::f64::consts::PI / samples as f64;
        let (mut best_a, mut best) = (0.0, var(0.0));
        for i in 1..samples {
            let a = i as f64 * step;
            let v = var(a);
            if v < best {
                best = v;
                best_a = a;
            }
        }
        // ternary polish
        let (mut lo, mut hi) = (best_a - step, best_a + step);
        for _ in 0..200 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if var(m1) < var(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        var(0.5 * (lo + hi)).min(best)
    }
}

/// Single-spin and pair expectations of qubits 0 and 1.
pub struct BruteLocal {
    pub sz: f64,
    pub szsz: f64,
    pub spsm: C,
    pub smsm: C,
    pub sdots: f64,
}

impl BruteLocal {
    pub fn of_density(rho: &Density) -> Self {
        let e = |s: &[(usize, Pauli)]| rho.expect_string(s);
        let (x, y, z) = (Pauli::X, Pauli::Y, Pauli::Z);
        let xx = e(&[(0, x), (1, x)]);
        let yy = e(&[(0, y), (1, y)]);
        let xy = e(&[(0, x), (1, y)]);
        let yx = e(&[(0, y), (1, x)]);
        let zz = e(&[(0, z), (1, z)]);
        let i = c(0.0, 1.0);
        // σ± = (σx ± iσy)/2
        let spsm = (xx - i * xy + i * yx + yy) * 0.25;
        let smsm = (xx - i * xy - i * yx - yy) * 0.25;
        BruteLocal { sz: e(&[(0, z)]).re, szsz: zz.re, spsm, smsm, sdots: (xx + yy + zz).re }
    }
}

/// Wootters concurrence from the non-Hermitian product ρ ρ̃ via a complex
/// Schur decomposition. Square roots of roundoff-level eigenvalues make this
/// accurate only to about 1e-7.
pub fn wootters(rho: &[[C; 4]; 4]) -> f64 {
    use nalgebra::Matrix4;
    let m = Matrix4::from_fn(|r, col| rho[r][col]);
    let yy = Matrix4::from_fn(|r, col| {
        // σy⊗σy has entries ±1 on the anti-diagonal: -1 on |00>,|11> corners
        if r + col == 3 {
            if r == 0 || r == 3 {
                c(-1.0, 0.0)
            } else {
                c(1.0, 0.0)
            }
        } else {
            c(0.0, 0.0)
        }
    });
    let tilde = yy * m.conjugate() * yy;
    let r = m * tilde;
    let eig = r.eigenvalues().expect("complex Schur converges");
    let mut lam: Vec<f64> = eig.iter().map(|z| z.re.max(0.0).sqrt()).collect();
    lam.sort_by(|a, b| b.partial_cmp(a).unwrap());
    (lam[0] - lam[1] - lam[2] - lam[3]).max(0.0)
}

pub struct BruteSqueezing {
    pub local: BruteLocal,
    pub xi_s2: f64,
    pub mean_z: f64,
    pub tilde_xi_e2: f64,
    pub cr: f64,
}

pub fn brute_after(state: &sqz_core::SymmetricState, ch: Channel, p: f64) -> BruteSqueezing {
    let n = state.n_particles();
    let nf = n as f64;
    let mut rho = Density::pure(&to_full(state), n);
    rho.apply_everywhere(&kraus(ch, p));
    let m = BruteMoments::of_density(&rho);
    let cov = m.cov();
    // parity states keep the mean along z; squeezing lives in the xy plane
    let (a, b, d) = (cov[0][0], cov[0][1], cov[1][1]);
    let lam = 0.5 * (a + d) - (0.25 * (a - d) * (a - d) + b * b).sqrt();
    BruteSqueezing {
        local: BruteLocal::of_density(&rho),
        xi_s2: 4.0 * lam / nf,
        mean_z: 2.0 * m.mean[2] / nf,
        tilde_xi_e2: m.gamma_min(n) / (m.j_squared() - 0.5 * nf),
        cr: (nf - 1.0) * wootters(&rho.pair()),
    }
}

/// First sign change of f on (0, 1) located on a fine grid, then bisected.
pub fn first_crossing(f: impl Fn(f64) -> f64) -> Option<f64> {
    let steps = 2000;
    let top = 1.0 - 1e-9;
    let mut prev = (0.0, f(0.0));
    for i in 1..=steps {
        let x = top * i as f64 / steps as f64;
        let v = f(x);
        if (prev.1 < 0.0) != (v < 0.0) {
            let (mut lo, mut hi) = (prev.0, x);
            let neg_lo = prev.1 < 0.0;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if (f(mid) < 0.0) == neg_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Some(0.5 * (lo + hi));
        }
        prev = (x, v);
    }
    None
}

pub fn crossing_or_edge(f: impl Fn(f64) -> f64) -> f64 {
    if f(0.0) >= 0.0 {
        return 0.0;
    }
    first_crossing(f).unwrap_or(1.0)
}

