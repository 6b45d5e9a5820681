//! Dense complex kernels shared by the spectral code paths.
//!
//! All heavy lifting (Hermitian eigendecomposition, SVD) is delegated to
//! nalgebra; this module only fixes conventions: eigenvalues ascending,
//! singular values descending, explicit symmetrization before Hermitian
//! decompositions.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use num_traits::Zero;

use crate::scalar::Real;

pub type CMatrix<T> = DMatrix<Complex<T>>;
pub type CVector<T> = DVector<Complex<T>>;

/// Spectral norm ‖m‖ (largest singular value). Zero for empty matrices.
pub fn spectral_norm<T: Real>(m: &CMatrix<T>) -> T {
    if m.nrows() == 0 || m.ncols() == 0 {
        return T::zero();
    }
    m.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(T::zero(), |a, b| a.max(b))
}

/// ‖a − a*‖ in spectral norm; zero iff `a` is exactly Hermitian.
pub fn hermitian_residual<T: Real>(m: &CMatrix<T>) -> T {
    spectral_norm(&(m - m.adjoint()))
}

/// (m + m*)/2 — the Hermitian part.
pub fn symmetrize<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    (m + m.adjoint()).map(|z| z * Complex::new(crate::scalar::real::<T>(0.5), T::zero()))
}

/// Eigendecomposition of a Hermitian matrix: real eigenvalues ascending,
/// matching eigenvector columns. The input is symmetrized first.
pub fn hermitian_eigen<T: Real>(m: &CMatrix<T>) -> (Vec<T>, CMatrix<T>) {
    let se = symmetrize(m).symmetric_eigen();
    let n = se.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        se.eigenvalues[i]
            .partial_cmp(&se.eigenvalues[j])
            .expect("eigenvalue comparison")
    });
    let values: Vec<T> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let vectors = CMatrix::<T>::from_fn(n, n, |r, c| se.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    let mut vals: Vec<T> = symmetrize(m)
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    vals.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalue comparison"));
    vals
}

pub fn min_eigenvalue<T: Real>(m: &CMatrix<T>) -> T {
    hermitian_eigenvalues(m)[0]
}

/// Rebuild V f(Λ) V* from a Hermitian eigendecomposition of `m`,
/// applying `f` to each eigenvalue. The result is symmetrized.
pub fn hermitian_map<T: Real>(m: &CMatrix<T>, f: impl Fn(T) -> T) -> CMatrix<T> {
    let (values, vectors) = hermitian_eigen(m);
    let diag = CMatrix::<T>::from_diagonal(&DVector::from_iterator(
        values.len(),
        values.iter().map(|&v| Complex::new(f(v), T::zero())),
    ));
    symmetrize(&(&vectors * diag * vectors.adjoint()))
}

/// Thin wrapper around nalgebra's SVD: (u, σ descending, v_t).
pub fn svd_parts<T: Real>(m: &CMatrix<T>) -> (CMatrix<T>, Vec<T>, CMatrix<T>) {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("svd requested u");
    let v_t = svd.v_t.expect("svd requested v_t");
    let sigma: Vec<T> = svd.singular_values.iter().copied().collect();
    (u, sigma, v_t)
}

/// Numerical-rank cutoff: singular values ≤ rel · max(nrows, ncols) · σ_max
/// count as zero.
pub fn rank_cutoff<T: Real>(nrows: usize, ncols: usize, sigma_max: T, rel: T) -> T {
    let dim = crate::scalar::real::<T>(nrows.max(ncols) as f64);
    rel * dim * sigma_max
}

/// Rank of `m` under the standard cutoff.
pub fn numerical_rank<T: Real>(m: &CMatrix<T>, rel: T) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sigma = m.clone().singular_values();
    let sigma_max = sigma.iter().copied().fold(T::zero(), |a, b| a.max(b));
    if sigma_max.is_zero() {
        return 0;
    }
    let cut = rank_cutoff(m.nrows(), m.ncols(), sigma_max, rel);
    sigma.iter().filter(|&&s| s > cut).count()
}

/// Moore–Penrose pseudoinverse via SVD with the standard cutoff.
/// Returns the pseudoinverse together with the numerical rank.
pub fn pseudoinverse<T: Real>(m: &CMatrix<T>, rel: T) -> (CMatrix<T>, usize) {
    let (u, sigma, v_t) = svd_parts(m);
    let sigma_max = sigma.iter().copied().fold(T::zero(), |a, b| a.max(b));
    let cut = rank_cutoff(m.nrows(), m.ncols(), sigma_max, rel);
    let mut rank = 0;
    let inv: Vec<Complex<T>> = sigma
        .iter()
        .map(|&s| {
            if s > cut {
                rank += 1;
                Complex::new(T::one() / s, T::zero())
            } else {
                Complex::zero()
            }
        })
        .collect();
    let k = sigma.len();
    let sigma_inv = CMatrix::<T>::from_fn(k, k, |r, c| if r == c { inv[r] } else { Complex::zero() });
    (v_t.adjoint() * sigma_inv * u.adjoint(), rank)
}

/// Orthogonal projector onto the column space of `m`.
pub fn range_projector<T: Real>(m: &CMatrix<T>, rel: T) -> CMatrix<T> {
    let (u, sigma, _) = svd_parts(m);
    let sigma_max = sigma.iter().copied().fold(T::zero(), |a, b| a.max(b));
    let cut = rank_cutoff(m.nrows(), m.ncols(), sigma_max, rel);
    let mut p = CMatrix::<T>::zeros(m.nrows(), m.nrows());
    for (idx, &s) in sigma.iter().enumerate() {
        if s > cut {
            let col = u.column(idx);
            p += &col * col.adjoint();
        }
    }
    symmetrize(&p)
}

/// Orthonormal basis of the column space of `m` (columns of the result).
pub fn range_basis<T: Real>(m: &CMatrix<T>, rel: T) -> CMatrix<T> {
    let (u, sigma, _) = svd_parts(m);
    let sigma_max = sigma.iter().copied().fold(T::zero(), |a, b| a.max(b));
    let cut = rank_cutoff(m.nrows(), m.ncols(), sigma_max, rel);
    let cols: Vec<usize> = sigma
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > cut)
        .map(|(i, _)| i)
        .collect();
    CMatrix::<T>::from_fn(m.nrows(), cols.len(), |r, c| u[(r, cols[c])])
}

#[cfg(test)]
mod tests {
    use super::*;
    fn cplx(re: f64, im: f64) -> num_complex::Complex<f64> {
        crate::scalar::cplx(re, im)
    }

    type C = Complex<f64>;

    #[test]
    fn hermitian_eigen_sorted_and_reconstructs() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[cplx(2.0, 0.0), cplx(0.0, 1.0), cplx(0.0, -1.0), cplx(3.0, 0.0)],
        );
        let (vals, vecs) = hermitian_eigen::<f64>(&m);
        assert!(vals[0] <= vals[1]);
        let diag = DMatrix::from_diagonal(&DVector::from_iterator(
            2,
            vals.iter().map(|&v| C::new(v, 0.0)),
        ));
        let recon = &vecs * diag * vecs.adjoint();
        assert!(spectral_norm(&(&m - recon)) < 1e-12);
    }

    #[test]
    fn pseudoinverse_of_diagonal() {
        let m = DMatrix::from_row_slice(2, 2, &[cplx(2.0, 0.0), C::zero(), C::zero(), C::zero()]);
        let (p, rank) = pseudoinverse::<f64>(&m, 1e-10);
        assert_eq!(rank, 1);
        assert!((p[(0, 0)].re - 0.5).abs() < 1e-14);
        assert!(p[(1, 1)].norm() < 1e-14);
    }

    #[test]
    fn rank_of_zero_matrix() {
        let m = CMatrix::<f64>::zeros(3, 2);
        assert_eq!(numerical_rank(&m, 1e-10), 0);
    }
}
