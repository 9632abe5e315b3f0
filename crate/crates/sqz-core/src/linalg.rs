//! Dense complex linear algebra helpers on top of nalgebra.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Largest elementwise deviation of `m` from its conjugate transpose.
pub fn hermiticity_defect(m: &CMat) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..m.nrows() {
        for c in r..m.ncols() {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Columns are the normalized eigenvectors matching `values`.
    pub vectors: CMat,
}

impl HermitianEigen {
    pub fn new(h: &CMat) -> Self {
        let eig = SymmetricEigen::new(h.clone());
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let dim = h.nrows();
        let mut vectors = CMat::zeros(dim, dim);
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        for (dst, &src) in order.iter().enumerate() {
            vectors.set_column(dst, &eig.eigenvectors.column(src));
        }
        HermitianEigen { values, vectors }
    }

    /// Real symmetric input; the decomposition runs in real arithmetic.
    pub fn from_real(h: &DMatrix<f64>) -> Self {
        let eig = SymmetricEigen::new(h.clone());
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let dim = h.nrows();
        let mut vectors = CMat::zeros(dim, dim);
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        for (dst, &src) in order.iter().enumerate() {
            for r in 0..dim {
                vectors[(r, dst)] = Complex64::new(eig.eigenvectors[(r, src)], 0.0);
            }
        }
        HermitianEigen { values, vectors }
    }

    /// exp(-i t H) applied to `psi`.
    pub fn evolve(&self, psi: &CVec, t: f64) -> CVec {
        let mut coeffs = self.vectors.ad_mul(psi);
        for (c, &e) in coeffs.iter_mut().zip(self.values.iter()) {
            *c *= Complex64::from_polar(1.0, -e * t);
        }
        &self.vectors * coeffs
    }

    /// f(H) for a scalar function applied to each eigenvalue.
    pub fn map(&self, f: impl Fn(f64) -> Complex64) -> CMat {
        let dim = self.values.len();
        let mut scaled = self.vectors.clone();
        for c in 0..dim {
            let w = f(self.values[c]);
            for r in 0..dim {
                scaled[(r, c)] *= w;
            }
        }
        scaled * self.vectors.adjoint()
    }
}

/// exp(-i t H) as a dense matrix for Hermitian `h`.
pub fn unitary_exp(h: &CMat, t: f64) -> CMat {
    HermitianEigen::new(h).map(|e| Complex64::from_polar(1.0, -e * t))
}

/// ⟨a|b⟩ with the first argument conjugated.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).fold(ZERO, |acc, (x, y)| acc + x.conj() * y)
}
