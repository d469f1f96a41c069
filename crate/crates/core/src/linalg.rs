//! Dense complex linear algebra shared by every module.
//!
//! All operators are stored as `DMatrix<Complex64>`. Index conventions follow
//! the row-major Kronecker layout: in `a ⊗ b` the leftmost factor varies
//! slowest, so basis index `i = i_a * dim_b + i_b`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn real(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Pauli X (`σ_1`).
pub fn sigma_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

/// Pauli Y (`σ_2`).
pub fn sigma_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO])
}

/// Pauli Z (`σ_3`), with `σ_3|0⟩ = +|0⟩`.
pub fn sigma_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

/// `cos φ·σ_3 + sin φ·σ_1`, the spin component along an angle `φ` in the x-z plane.
pub fn sigma_phi(phi: f64) -> CMatrix {
    sigma_z() * real(phi.cos()) + sigma_x() * real(phi.sin())
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    a.kronecker(b)
}

/// `|v⟩⟨v|`.
pub fn outer(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

/// Adds `weight·|v⟩⟨v|` into `acc` without allocating the outer product.
pub fn add_weighted_outer(acc: &mut CMatrix, weight: f64, v: &CVector) {
    let d = v.len();
    for j in 0..d {
        let vj = v[j].conj() * weight;
        if vj == ZERO {
            continue;
        }
        for i in 0..d {
            acc[(i, j)] += v[i] * vj;
        }
    }
}

/// Largest `|m_ij − conj(m_ji)|`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `(m + m†)/2`; removes round-off asymmetry from operators that are Hermitian in exact arithmetic.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * real(0.5)
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// `Tr[a b]` without forming the product.
pub fn trace_of_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut values: Vec<f64> = SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    values.sort_by(|a, b| a.total_cmp(b));
    values
}

/// Eigenpairs of a Hermitian matrix, sorted by ascending eigenvalue.
pub fn hermitian_eigen(m: &CMatrix) -> Vec<(f64, CVector)> {
    let eig = SymmetricEigen::new(m.clone());
    let mut pairs: Vec<(f64, CVector)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(k, &value)| (value, eig.eigenvectors.column(k).into_owned()))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
}

pub fn is_diagonal(m: &CMatrix) -> bool {
    let n = m.nrows();
    (0..n).all(|i| (0..n).all(|j| i == j || m[(i, j)] == ZERO))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Computational basis vector `|index⟩` in dimension `dim`.
pub fn basis_vector(dim: usize, index: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[index] = ONE;
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let x = sigma_x();
        let y = sigma_y();
        let z = sigma_z();
        assert!(max_abs_diff(&(&x * &x), &identity(2)) < 1e-15);
        assert!(max_abs_diff(&(&x * &y), &(&z * c(0.0, 1.0))) < 1e-15);
        assert_eq!(hermitian_deviation(&y), 0.0);
    }

    #[test]
    fn kron_is_row_major() {
        let zero = basis_vector(2, 0);
        let one = basis_vector(2, 1);
        let v = kron_vec(&zero, &one);
        assert_eq!(v, basis_vector(4, 1));
        let v = kron_vec(&one, &zero);
        assert_eq!(v, basis_vector(4, 2));
    }

    #[test]
    fn weighted_outer_matches_outer() {
        let v = CVector::from_vec(vec![c(0.6, 0.0), c(0.0, 0.8)]);
        let mut acc = CMatrix::zeros(2, 2);
        add_weighted_outer(&mut acc, 0.5, &v);
        assert!(max_abs_diff(&acc, &(outer(&v) * real(0.5))) < 1e-15);
    }

    #[test]
    fn sigma_phi_endpoints() {
        assert!(max_abs_diff(&sigma_phi(0.0), &sigma_z()) < 1e-15);
        assert!(max_abs_diff(&sigma_phi(std::f64::consts::FRAC_PI_2), &sigma_x()) < 1e-15);
    }
}
