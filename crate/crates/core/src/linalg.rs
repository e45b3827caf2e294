//! Dense complex linear-algebra helpers shared by the model and propagators.
//!
//! Everything is built on `nalgebra::DMatrix<Complex64>`; matrices here are at
//! most a few hundred rows, so dense storage is the right trade-off.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{FluxError, Result};

pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn identity(d: usize) -> CMat {
    CMat::identity(d, d)
}

pub fn dagger(a: &CMat) -> CMat {
    a.adjoint()
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Frobenius norm.
pub fn fro(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn trace(a: &CMat) -> C64 {
    a.diagonal().iter().sum()
}

/// `Tr(A† B)` without forming the product.
pub fn inner(a: &CMat, b: &CMat) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// `‖A − A†‖_F`.
pub fn hermiticity_defect(a: &CMat) -> f64 {
    fro(&(a - a.adjoint()))
}

pub fn unitarity_defect(u: &CMat) -> f64 {
    let d = u.nrows();
    fro(&(u.adjoint() * u - identity(d)))
}

pub fn pauli_x() -> CMat {
    CMat::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)])
}

pub fn pauli_y() -> CMat {
    CMat::from_row_slice(2, 2, &[c(0.0), -I, I, c(0.0)])
}

/// `σ_z = |e⟩⟨e| − |g⟩⟨g|` in the `(g, e)` ordering, so that `(ω/2)·σ_z`
/// places the excited state above the ground state.
pub fn pauli_z() -> CMat {
    CMat::from_row_slice(2, 2, &[c(-1.0), c(0.0), c(0.0), c(1.0)])
}

/// Hermitian eigendecomposition with eigenvalues sorted ascending.
///
/// Columns of the returned matrix are the matching eigenvectors.
pub fn hermitian_eigh(h: &CMat) -> (Vec<f64>, CMat) {
    let eig = SymmetricEigen::new(h.clone());
    let n = h.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// `exp(−i·H·dt)` for Hermitian `H`.
///
/// Rejects inputs whose anti-Hermitian part exceeds `1e-8·‖H‖`.
pub fn expm_hermitian(h: &CMat, dt: f64) -> Result<CMat> {
    let norm = fro(h);
    let defect = hermiticity_defect(h);
    if defect > 1e-8 * norm.max(f64::MIN_POSITIVE) {
        return Err(FluxError::NotHermitian { defect, norm });
    }
    // Symmetrize so the eigensolver sees an exactly Hermitian input.
    let hs = (h + h.adjoint()) * c(0.5);
    let (values, vectors) = hermitian_eigh(&hs);
    let phases = CVec::from_iterator(values.len(), values.iter().map(|&e| (-I * e * dt).exp()));
    let mut scaled = vectors.clone();
    for (mut col, p) in scaled.column_iter_mut().zip(phases.iter()) {
        col *= *p;
    }
    Ok(scaled * vectors.adjoint())
}

/// General matrix exponential (scaling and squaring with a Padé approximant).
pub fn expm(a: &CMat) -> CMat {
    a.exp()
}

/// Column-stacking vectorization: `vec(ρ)[i + d·j] = ρ[i, j]`.
///
/// This matches nalgebra's column-major storage, so it is a plain copy.
pub fn vectorize(rho: &CMat) -> CVec {
    CVec::from_column_slice(rho.as_slice())
}

pub fn unvectorize(v: &CVec, d: usize) -> CMat {
    CMat::from_column_slice(d, d, v.as_slice())
}

/// Superoperator of `ρ ↦ A ρ B` under column stacking: `Bᵀ ⊗ A`.
pub fn sandwich(a: &CMat, b: &CMat) -> CMat {
    kron(&b.transpose(), a)
}
