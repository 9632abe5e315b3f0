use num_complex::Complex64;

use super::check_size;
use crate::error::Result;
use crate::linalg::{hermiticity_defect, CMat, I};

/// ⟨j, m+1|J_+|j, m⟩.
pub fn ladder_coefficient(j: f64, m: f64) -> f64 {
    libm::sqrt((j * (j + 1.0) - m * (m + 1.0)).max(0.0))
}

/// Dense collective operator in the Dicke basis.
#[derive(Clone, Debug)]
pub struct CollectiveOperator {
    n_particles: usize,
    matrix: CMat,
    hermitian: bool,
}

impl CollectiveOperator {
    pub fn new(n_particles: usize, matrix: CMat) -> Self {
        let hermitian = hermiticity_defect(&matrix) < 1e-12;
        CollectiveOperator { n_particles, matrix, hermitian }
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }
}

/// J_x, J_y, J_z, J_+, J_-, J², and parity for one particle number.
#[derive(Clone, Debug)]
pub struct Operators {
    pub n_particles: usize,
    pub jx: CMat,
    pub jy: CMat,
    pub jz: CMat,
    pub jp: CMat,
    pub jm: CMat,
    pub j2: CMat,
    pub parity: CMat,
}

impl Operators {
    /// n·J for a real 3-vector n (not required to be normalized).
    pub fn along(&self, n: [f64; 3]) -> CMat {
        &self.jx * Complex64::new(n[0], 0.0) + &self.jy * Complex64::new(n[1], 0.0) + &self.jz * Complex64::new(n[2], 0.0)
    }

    pub fn component(&self, axis: usize) -> &CMat {
        match axis {
            0 => &self.jx,
            1 => &self.jy,
            _ => &self.jz,
        }
    }

    pub fn wrap(&self, m: &CMat) -> CollectiveOperator {
        CollectiveOperator::new(self.n_particles, m.clone())
    }
}

pub fn build_operators(n_particles: usize) -> Result<Operators> {
    check_size(n_particles)?;
    let dim = n_particles + 1;
    let j = n_particles as f64 / 2.0;
    let mut jz = CMat::zeros(dim, dim);
    let mut jp = CMat::zeros(dim, dim);
    let mut parity = CMat::zeros(dim, dim);
    for k in 0..dim {
        let m = j - k as f64;
        jz[(k, k)] = Complex64::new(m, 0.0);
        parity[(k, k)] = Complex64::new(if (n_particles - k) % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
        if k > 0 {
            jp[(k - 1, k)] = Complex64::new(ladder_coefficient(j, m), 0.0);
        }
    }
    let jm = jp.adjoint();
    let half = Complex64::new(0.5, 0.0);
    let jx = (&jp + &jm) * half;
    let jy = (&jp - &jm) * (-I * half);
    // the symmetric sector is a single J² eigenspace
    let j2 = CMat::from_diagonal_element(dim, dim, Complex64::new(j * (j + 1.0), 0.0));
    Ok(Operators { n_particles, jx, jy, jz, jp, jm, j2, parity })
}
