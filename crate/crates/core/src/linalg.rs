// Copyright 2026 Soliq Contributors
// SPDX-License-Identifier: Apache-2.0

//! Small complex-matrix helpers shared by the dynamics and entanglement
//! layers: Hermitian eigensystems, positive-semidefinite square roots and
//! symmetrization of 4×4 matrices.

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// 4×4 complex matrix used for two-qubit density operators.
pub type CMatrix4 = Matrix4<Complex64>;

/// Returns the Hermitian part `(m + m†)/2`.
pub fn hermitize(m: &CMatrix4) -> CMatrix4 {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Maximum absolute deviation from Hermiticity, `max |m_ij − conj(m_ji)|`.
pub fn hermiticity_defect(m: &CMatrix4) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// The input is symmetrized first so that callers may pass matrices with
/// rounding-level Hermiticity defects.
pub fn hermitian_eigenvalues(m: &CMatrix4) -> [f64; 4] {
    let eig = SymmetricEigen::new(hermitize(m));
    let mut vals = [0.0; 4];
    for (dst, src) in vals.iter_mut().zip(eig.eigenvalues.iter()) {
        *dst = *src;
    }
    vals.sort_by(|a, b| a.total_cmp(b));
    vals
}

/// Principal square root of a positive-semidefinite Hermitian matrix.
///
/// Eigenvalues in `[−floor, 0)` are clipped to zero; an eigenvalue below
/// `−floor` means the input was not positive semidefinite.
pub fn sqrt_psd(m: &CMatrix4, floor: f64) -> Result<CMatrix4> {
    let eig = SymmetricEigen::new(hermitize(m));
    let mut roots = [0.0; 4];
    for (i, lam) in eig.eigenvalues.iter().enumerate() {
        if *lam < -floor {
            return Err(Error::Numerical(format!(
                "matrix square root requested for non-PSD input (eigenvalue {lam})"
            )));
        }
        roots[i] = lam.max(0.0).sqrt();
    }
    let u = eig.eigenvectors;
    let mut d = CMatrix4::zeros();
    for i in 0..4 {
        d[(i, i)] = Complex64::new(roots[i], 0.0);
    }
    Ok(&u * d * u.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eigenvalues_of_diagonal_matrix() {
        let mut m = CMatrix4::zeros();
        for (i, v) in [0.4, 0.1, 0.3, 0.2].iter().enumerate() {
            m[(i, i)] = c(*v, 0.0);
        }
        let vals = hermitian_eigenvalues(&m);
        assert_relative_eq!(vals[0], 0.1, epsilon = 1e-14);
        assert_relative_eq!(vals[3], 0.4, epsilon = 1e-14);
    }

    #[test]
    fn eigenvalues_of_complex_hermitian_pair() {
        // 2×2 block [[0, i],[−i, 0]] embedded in 4×4 has eigenvalues ±1.
        let mut m = CMatrix4::zeros();
        m[(0, 1)] = c(0.0, 1.0);
        m[(1, 0)] = c(0.0, -1.0);
        let vals = hermitian_eigenvalues(&m);
        assert_relative_eq!(vals[0], -1.0, epsilon = 1e-12);
        assert_relative_eq!(vals[3], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn sqrt_psd_squares_back() {
        // Build A = B B† (always PSD), take its root, square it again.
        let b = CMatrix4::from_fn(|i, j| c((i + 2 * j) as f64 * 0.1, (i as f64) - 0.5 * j as f64));
        let a = b * b.adjoint();
        let r = sqrt_psd(&a, 1e-12).unwrap();
        let diff = (r * r) - a;
        assert!(diff.iter().all(|z| z.norm() < 1e-9));
        assert!(hermiticity_defect(&r) < 1e-10);
    }

    #[test]
    fn sqrt_psd_rejects_indefinite_input() {
        let mut m = CMatrix4::identity();
        m[(0, 0)] = c(-0.5, 0.0);
        assert!(sqrt_psd(&m, 1e-12).is_err());
    }

    #[test]
    fn hermitize_produces_hermitian_matrix() {
        let m = CMatrix4::from_fn(|i, j| c(i as f64, j as f64));
        assert!(hermiticity_defect(&hermitize(&m)) < 1e-15);
    }
}
