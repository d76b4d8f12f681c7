//! Small dense complex linear algebra helpers.

use nalgebra::DMatrix;

use crate::{CMatrix, CVector, C64};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn hermiticity_defect(a: &CMatrix) -> f64 {
    max_abs_diff(a, &a.adjoint())
}

pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.nrows();
    max_abs_diff(&(u.adjoint() * u), &CMatrix::identity(n, n))
}

/// `exp(i t H)` for Hermitian `H`, through the spectral decomposition.
///
/// The input is symmetrized first so that rounding in its construction cannot
/// leak an anti-Hermitian part into the eigensolver.
pub fn exp_i_hermitian(h: &CMatrix, t: f64) -> CMatrix {
    let n = h.nrows();
    let sym = (h + h.adjoint()) * c(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let v = &eig.eigenvectors;
    let phases = CMatrix::from_diagonal(&CVector::from_iterator(
        n,
        eig.eigenvalues.iter().map(|&l| C64::from_polar(1.0, t * l)),
    ));
    v * phases * v.adjoint()
}

/// Exponential of a nilpotent matrix as a finite power series.
///
/// The series stops once a power vanishes identically; for an `n x n`
/// nilpotent matrix that happens after at most `n` terms.
pub fn exp_nilpotent(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let mut result = CMatrix::identity(n, n);
    let mut term = CMatrix::identity(n, n);
    for k in 1..=n {
        term = &term * a * c(1.0 / k as f64, 0.0);
        if term.iter().all(|z| *z == C64::new(0.0, 0.0)) {
            break;
        }
        result += &term;
    }
    result
}

/// `<psi| op |psi>` without normalization.
pub fn expectation(op: &CMatrix, psi: &CVector) -> C64 {
    psi.dotc(&(op * psi))
}

/// Singular values of a real matrix, sorted in descending order.
pub fn singular_values_desc(m: &DMatrix<f64>) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}
