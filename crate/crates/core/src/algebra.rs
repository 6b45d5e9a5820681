//! The coefficient algebra: a finite direct sum of complex matrix blocks
//! M_{k_1}(ℂ) ⊕ … ⊕ M_{k_r}(ℂ), with one C*-seminorm per block (the block
//! operator norm) and Hermitian functional calculus.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::scalar::{real, Real};

/// Block dimensions (k_1, …, k_r) of the algebra. Two descriptors are equal
/// iff their dimension lists are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraDescriptor {
    block_dims: Vec<usize>,
}

impl AlgebraDescriptor {
    pub fn new(block_dims: Vec<usize>) -> Result<Self> {
        if block_dims.is_empty() {
            return Err(Error::domain("descriptor needs at least one block"));
        }
        if block_dims.iter().any(|&k| k == 0) {
            return Err(Error::domain("block dimensions must be positive"));
        }
        Ok(AlgebraDescriptor { block_dims })
    }

    /// Scalar algebra ℂ: a single 1×1 block.
    pub fn scalar() -> Self {
        AlgebraDescriptor { block_dims: vec![1] }
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn num_blocks(&self) -> usize {
        self.block_dims.len()
    }
}

/// One value per seminorm (per block).
#[derive(Debug, Clone, PartialEq)]
pub struct SeminormVector<T: Real> {
    values: Vec<T>,
}

impl<T: Real> SeminormVector<T> {
    pub fn new(values: Vec<T>) -> Self {
        SeminormVector { values }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn get(&self, j: usize) -> T {
        self.values[j]
    }

    /// max_j p_j — the norm when the algebra is a plain C*-algebra.
    pub fn max(&self) -> T {
        self.values.iter().copied().fold(T::zero(), |a, b| a.max(b))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// An element of the block algebra: one complex matrix per block.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement<T: Real> {
    descriptor: AlgebraDescriptor,
    blocks: Vec<CMatrix<T>>,
}

impl<T: Real> AlgebraElement<T> {
    pub fn from_blocks(descriptor: AlgebraDescriptor, blocks: Vec<CMatrix<T>>) -> Result<Self> {
        if blocks.len() != descriptor.num_blocks() {
            return Err(Error::shape(format!(
                "expected {} blocks, got {}",
                descriptor.num_blocks(),
                blocks.len()
            )));
        }
        for (j, (b, &k)) in blocks.iter().zip(descriptor.block_dims()).enumerate() {
            if b.nrows() != k || b.ncols() != k {
                return Err(Error::shape(format!(
                    "block {j} must be {k}×{k}, got {}×{}",
                    b.nrows(),
                    b.ncols()
                )));
            }
        }
        Ok(AlgebraElement { descriptor, blocks })
    }

    pub fn zero(descriptor: &AlgebraDescriptor) -> Self {
        let blocks = descriptor
            .block_dims()
            .iter()
            .map(|&k| CMatrix::<T>::zeros(k, k))
            .collect();
        AlgebraElement {
            descriptor: descriptor.clone(),
            blocks,
        }
    }

    pub fn one(descriptor: &AlgebraDescriptor) -> Self {
        let blocks = descriptor
            .block_dims()
            .iter()
            .map(|&k| CMatrix::<T>::identity(k, k))
            .collect();
        AlgebraElement {
            descriptor: descriptor.clone(),
            blocks,
        }
    }

    /// Scalar algebra element z·1 in ℂ = M_1(ℂ).
    pub fn scalar(z: Complex<T>) -> Self {
        AlgebraElement {
            descriptor: AlgebraDescriptor::scalar(),
            blocks: vec![CMatrix::from_element(1, 1, z)],
        }
    }

    pub fn descriptor(&self) -> &AlgebraDescriptor {
        &self.descriptor
    }

    pub fn block(&self, j: usize) -> &CMatrix<T> {
        &self.blocks[j]
    }

    pub fn blocks(&self) -> &[CMatrix<T>] {
        &self.blocks
    }

    fn check_descriptor(&self, other: &Self) -> Result<()> {
        if self.descriptor != other.descriptor {
            return Err(Error::shape("algebra descriptors differ"));
        }
        Ok(())
    }

    fn zip_blocks(
        &self,
        other: &Self,
        f: impl Fn(&CMatrix<T>, &CMatrix<T>) -> CMatrix<T>,
    ) -> Result<Self> {
        self.check_descriptor(other)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(AlgebraElement {
            descriptor: self.descriptor.clone(),
            blocks,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_blocks(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_blocks(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_blocks(other, |a, b| a * b)
    }

    /// Involution: blockwise conjugate transpose.
    pub fn adjoint(&self) -> Self {
        AlgebraElement {
            descriptor: self.descriptor.clone(),
            blocks: self.blocks.iter().map(|b| b.adjoint()).collect(),
        }
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        AlgebraElement {
            descriptor: self.descriptor.clone(),
            blocks: self.blocks.iter().map(|b| b.map(|z| z * c)).collect(),
        }
    }

    /// The seminorm family: p_j(a) = spectral norm of block j.
    pub fn seminorms(&self) -> SeminormVector<T> {
        SeminormVector::new(self.blocks.iter().map(linalg::spectral_norm).collect())
    }

    /// max_j p_j(a).
    pub fn norm(&self) -> T {
        self.seminorms().max()
    }

    /// ‖a − a*‖ over all blocks.
    pub fn self_adjoint_residual(&self) -> T {
        self.blocks
            .iter()
            .map(linalg::hermitian_residual)
            .fold(T::zero(), |a, b| a.max(b))
    }

    pub fn is_self_adjoint(&self, tol: T) -> bool {
        self.self_adjoint_residual() <= tol * (T::one() + self.norm())
    }

    fn require_self_adjoint(&self, tol: T) -> Result<()> {
        if !self.is_self_adjoint(tol) {
            return Err(Error::domain(format!(
                "element is not self-adjoint (residual {:.3e})",
                crate::scalar::to_f64(self.self_adjoint_residual())
            )));
        }
        Ok(())
    }

    /// Positivity in the algebra order: every block PSD up to
    /// −tol·(1 + p_j(a)). Errors if the element is not self-adjoint.
    pub fn is_positive(&self, tol: T) -> Result<bool> {
        self.require_self_adjoint(tol)?;
        let norms = self.seminorms();
        Ok(self.blocks.iter().enumerate().all(|(j, b)| {
            linalg::min_eigenvalue(b) >= -tol * (T::one() + norms.get(j))
        }))
    }

    /// Loewner order: a ≤ b iff b − a is positive.
    pub fn order_leq(&self, other: &Self, tol: T) -> Result<bool> {
        other.sub(self)?.is_positive(tol)
    }

    /// Eigenvalues per block (ascending), for self-adjoint elements.
    pub fn hermitian_spectrum(&self, tol: T) -> Result<Vec<Vec<T>>> {
        self.require_self_adjoint(tol)?;
        Ok(self.blocks.iter().map(|b| linalg::hermitian_eigenvalues(b)).collect())
    }

    /// Hermitian functional calculus: per block V f(Λ) V*.
    pub fn functional_calculus(&self, f: impl Fn(T) -> T, tol: T) -> Result<Self> {
        self.require_self_adjoint(tol)?;
        let blocks = self.blocks.iter().map(|b| linalg::hermitian_map(b, &f)).collect();
        Ok(AlgebraElement {
            descriptor: self.descriptor.clone(),
            blocks,
        })
    }

    /// Positive square root. Eigenvalues below a relative floor are
    /// flushed to exact zero first: the square root would otherwise turn
    /// O(1e-13) eigen-noise into O(1e-7) spurious range directions.
    pub fn sqrt_psd(&self, tol: T) -> Result<Self> {
        let floor = real::<T>(1e-12) * self.norm();
        self.functional_calculus(
            move |x| if x <= floor { T::zero() } else { x.sqrt() },
            tol,
        )
    }
}

/// The piecewise-linear ramp used to build order-violation witnesses:
/// 0 on (−∞, m/2], 1 on [m, ∞), linear in between.
pub fn ramp_cutoff<T: Real>(m: T) -> impl Fn(T) -> T {
    move |t: T| {
        let half = m * real::<T>(0.5);
        if t <= half {
            T::zero()
        } else if t >= m {
            T::one()
        } else {
            (t - half) / half
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn cplx(re: f64, im: f64) -> num_complex::Complex<f64> {
        crate::scalar::cplx(re, im)
    }

    fn desc(dims: &[usize]) -> AlgebraDescriptor {
        AlgebraDescriptor::new(dims.to_vec()).unwrap()
    }

    #[test]
    fn unit_is_self_adjoint_with_unit_seminorms() {
        let one = AlgebraElement::<f64>::one(&desc(&[2, 3]));
        assert_eq!(one.adjoint(), one);
        let p = one.seminorms();
        assert_eq!(p.values(), &[1.0, 1.0]);
    }

    #[test]
    fn unit_law_and_zero_seminorms() {
        let d = desc(&[2]);
        let a = AlgebraElement::from_blocks(
            d.clone(),
            vec![DMatrix::from_row_slice(
                2,
                2,
                &[cplx(1.0, 2.0), cplx(0.5, -0.25), cplx(3.0, 0.0), cplx(0.0, 1.0)],
            )],
        )
        .unwrap();
        let one = AlgebraElement::one(&d);
        assert_eq!(a.mul(&one).unwrap(), a);
        let zero = AlgebraElement::<f64>::zero(&desc(&[2, 3]));
        assert_eq!(zero.seminorms().values(), &[0.0, 0.0]);
    }

    #[test]
    fn adjoint_of_nilpotent_block() {
        let d = desc(&[2]);
        let a = AlgebraElement::from_blocks(
            d,
            vec![DMatrix::from_row_slice(
                2,
                2,
                &[cplx(0.0, 0.0), cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0)],
            )],
        )
        .unwrap();
        let star = a.adjoint();
        assert_eq!(star.block(0)[(1, 0)], cplx(1.0, 0.0));
        assert_eq!(star.block(0)[(0, 1)], cplx(0.0, 0.0));
    }

    #[test]
    fn seminorm_of_diagonal_is_max_abs_eigenvalue() {
        // diag(3, −4): largest singular value 4, verified against the
        // eigenvalues of a*a computed independently.
        let d = desc(&[2]);
        let a = AlgebraElement::from_blocks(
            d,
            vec![DMatrix::from_row_slice(
                2,
                2,
                &[cplx(3.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0), cplx(-4.0, 0.0)],
            )],
        )
        .unwrap();
        let p = a.seminorms().get(0);
        let gram = a.adjoint().mul(&a).unwrap();
        let top = linalg::hermitian_eigenvalues(gram.block(0))[1];
        assert!((p - top.sqrt()).abs() < 1e-10);
        assert!((p - 4.0).abs() < 1e-12);
    }

    #[test]
    fn positivity_examples() {
        let d = desc(&[2]);
        let one = AlgebraElement::<f64>::one(&d);
        assert!(one.is_positive(1e-9).unwrap());
        let mixed = AlgebraElement::from_blocks(
            d,
            vec![DMatrix::from_row_slice(
                2,
                2,
                &[cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0), cplx(-1.0, 0.0)],
            )],
        )
        .unwrap();
        assert!(!mixed.is_positive(1e-9).unwrap());
    }

    #[test]
    fn non_self_adjoint_positivity_is_domain_error() {
        let d = desc(&[2]);
        let a = AlgebraElement::from_blocks(
            d,
            vec![DMatrix::from_row_slice(
                2,
                2,
                &[cplx(0.0, 0.0), cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0)],
            )],
        )
        .unwrap();
        assert!(matches!(a.is_positive(1e-9), Err(Error::Domain(_))));
    }

    #[test]
    fn functional_calculus_identity_and_sqrt() {
        let d = desc(&[2]);
        let a = AlgebraElement::from_blocks(
            d.clone(),
            vec![DMatrix::from_row_slice(
                2,
                2,
                &[cplx(4.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0), cplx(9.0, 0.0)],
            )],
        )
        .unwrap();
        let id = a.functional_calculus(|x| x, 1e-9).unwrap();
        assert!(id.sub(&a).unwrap().norm() < 1e-12);
        let s = a.sqrt_psd(1e-9).unwrap();
        assert!((s.block(0)[(0, 0)].re - 2.0).abs() < 1e-12);
        assert!((s.block(0)[(1, 1)].re - 3.0).abs() < 1e-12);
        let ones = a.functional_calculus(|_| 1.0, 1e-9).unwrap();
        assert!(ones.sub(&AlgebraElement::one(&d)).unwrap().norm() < 1e-12);
    }

    #[test]
    fn ramp_cutoff_on_diagonal_spectrum() {
        // f with m = 3 applied to diag(3, 1, −2): f(3) = 1, f(1) = 0 (1 ≤ m/2),
        // f(−2) = 0, hand-evaluated from the piecewise formula.
        let f = ramp_cutoff(3.0_f64);
        assert_eq!(f(3.0), 1.0);
        assert_eq!(f(1.0), 0.0);
        assert_eq!(f(-2.0), 0.0);
        assert!((f(2.25) - 0.5).abs() < 1e-15);

        let d = desc(&[3]);
        let a = AlgebraElement::from_blocks(
            d,
            vec![DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
                cplx(3.0, 0.0),
                cplx(1.0, 0.0),
                cplx(-2.0, 0.0),
            ]))],
        )
        .unwrap();
        let fa = a.functional_calculus(ramp_cutoff(3.0), 1e-9).unwrap();
        assert!((fa.block(0)[(0, 0)].re - 1.0).abs() < 1e-12);
        assert!(fa.block(0)[(1, 1)].norm() < 1e-12);
        assert!(fa.block(0)[(2, 2)].norm() < 1e-12);
    }

    #[test]
    fn descriptor_mismatch_is_shape_error() {
        let a = AlgebraElement::<f64>::one(&desc(&[2]));
        let b = AlgebraElement::<f64>::one(&desc(&[3]));
        assert!(matches!(a.add(&b), Err(Error::Shape(_))));
    }
}
