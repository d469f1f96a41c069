//! Independent reference computations shared by the integration tests. Nothing here calls
//! into the library's linear algebra.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                let (row_p, row_q) = (a[p].clone(), a[q].clone());
                for k in 0..n {
                    a[p][k] = c * row_p[k] - s * row_q[k];
                    a[q][k] = s * row_p[k] + c * row_q[k];
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eig
}

/// Eigenvalues of a Hermitian matrix, each once, via the real embedding `[[A, −B], [B, A]]`.
pub fn hermitian_eigenvalues(h: &DMatrix<Complex64>) -> Vec<f64> {
    let n = h.nrows();
    let mut emb = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            emb[i][j] = z.re;
            emb[i + n][j + n] = z.re;
            emb[i][j + n] = -z.im;
            emb[i + n][j] = z.im;
        }
    }
    // the embedding repeats every eigenvalue twice
    jacobi_eigenvalues(emb).into_iter().step_by(2).collect()
}

pub fn trace_distance(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    0.5 * hermitian_eigenvalues(&(a - b))
        .iter()
        .map(|l| l.abs())
        .sum::<f64>()
}

/// Hermitian, unit trace and no eigenvalue below `-tol`.
pub fn is_state(m: &DMatrix<Complex64>, tol: f64) -> bool {
    let n = m.nrows();
    if m.ncols() != n {
        return false;
    }
    let herm = (0..n).all(|i| (0..n).all(|j| (m[(i, j)] - m[(j, i)].conj()).norm() <= tol));
    let tr: Complex64 = (0..n).map(|i| m[(i, i)]).sum();
    herm && (tr - 1.0).norm() <= tol && hermitian_eigenvalues(m)[0] >= -tol
}

/// Partial trace over the second factor of a `da × db` operator, by explicit index sums.
pub fn trace_out_second(m: &DMatrix<Complex64>, da: usize, db: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(da, da, |i, j| {
        (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()
    })
}

/// Partial trace over the first factor of a `da × db` operator.
pub fn trace_out_first(m: &DMatrix<Complex64>, da: usize, db: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(db, db, |i, j| {
        (0..da).map(|k| m[(k * db + i, k * db + j)]).sum()
    })
}

pub fn outer(v: &[Complex64]) -> DMatrix<Complex64> {
    DMatrix::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
}

/// Row-major Kronecker product of two vectors.
pub fn kron(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}

/// `C(n, k)` from Pascal's triangle in `u128`; exact for `n ≤ 125`.
pub fn pascal(n: usize, k: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![1u128; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row.get(k).copied().unwrap_or(0)
}
