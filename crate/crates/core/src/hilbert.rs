//! The free Hilbert module Aⁿ over the block algebra, with A-valued inner
//! product ⟨ξ,η⟩ = Σᵢ ξᵢηᵢ* (linear in the first slot), adjointable
//! operators between free modules, and the faithful scalar representation
//! on which every spectral computation runs.
//!
//! Conventions. Coordinates form a row over A; an operator X → Y is an
//! n×m matrix of algebra elements acting by right multiplication, which is
//! what makes the action A-linear for the left module structure. `compose`
//! is operator composition: `t.compose(&s)` applies `s` first, so formulas
//! read like operator products (TT* is `t.compose(&t.adjoint())`).

use num_complex::Complex;
use num_traits::Zero;

use crate::algebra::{AlgebraDescriptor, AlgebraElement, SeminormVector};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::scalar::Real;

/// A free module Aⁿ: descriptor of the coefficient algebra plus the rank n.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModuleSpace {
    descriptor: AlgebraDescriptor,
    rank: usize,
}

impl ModuleSpace {
    pub fn new(descriptor: AlgebraDescriptor, rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::domain("module rank must be positive"));
        }
        Ok(ModuleSpace { descriptor, rank })
    }

    pub fn descriptor(&self) -> &AlgebraDescriptor {
        &self.descriptor
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Aⁿ ⊕ Aᵐ = Aⁿ⁺ᵐ over the same algebra.
    pub fn direct_sum(&self, other: &ModuleSpace) -> Result<ModuleSpace> {
        if self.descriptor != other.descriptor {
            return Err(Error::shape("direct sum needs a common algebra"));
        }
        ModuleSpace::new(self.descriptor.clone(), self.rank + other.rank)
    }

    /// Scalar-representation dimension of block j: rank · k_j.
    pub fn scalar_dim(&self, j: usize) -> usize {
        self.rank * self.descriptor.block_dims()[j]
    }
}

/// An element of Aⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleVector<T: Real> {
    space: ModuleSpace,
    coords: Vec<AlgebraElement<T>>,
}

impl<T: Real> ModuleVector<T> {
    pub fn from_coords(space: ModuleSpace, coords: Vec<AlgebraElement<T>>) -> Result<Self> {
        if coords.len() != space.rank() {
            return Err(Error::shape(format!(
                "expected {} coordinates, got {}",
                space.rank(),
                coords.len()
            )));
        }
        for c in &coords {
            if c.descriptor() != space.descriptor() {
                return Err(Error::shape("coordinate descriptor differs from space"));
            }
        }
        Ok(ModuleVector { space, coords })
    }

    pub fn zero(space: &ModuleSpace) -> Self {
        let coords = (0..space.rank())
            .map(|_| AlgebraElement::zero(space.descriptor()))
            .collect();
        ModuleVector {
            space: space.clone(),
            coords,
        }
    }

    /// e_i: unit algebra element in slot i, zero elsewhere.
    pub fn standard_basis(space: &ModuleSpace, i: usize) -> Result<Self> {
        if i >= space.rank() {
            return Err(Error::shape(format!(
                "basis index {i} out of range for rank {}",
                space.rank()
            )));
        }
        let mut v = Self::zero(space);
        v.coords[i] = AlgebraElement::one(space.descriptor());
        Ok(v)
    }

    pub fn space(&self) -> &ModuleSpace {
        &self.space
    }

    pub fn coords(&self) -> &[AlgebraElement<T>] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &AlgebraElement<T> {
        &self.coords[i]
    }

    fn check_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::shape("module spaces differ"));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(ModuleVector {
            space: self.space.clone(),
            coords,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.sub(b))
            .collect::<Result<_>>()?;
        Ok(ModuleVector {
            space: self.space.clone(),
            coords,
        })
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        ModuleVector {
            space: self.space.clone(),
            coords: self.coords.iter().map(|x| x.scale(c)).collect(),
        }
    }

    /// Left module action a·ξ.
    pub fn module_scale(&self, a: &AlgebraElement<T>) -> Result<Self> {
        let coords = self
            .coords
            .iter()
            .map(|x| a.mul(x))
            .collect::<Result<_>>()?;
        Ok(ModuleVector {
            space: self.space.clone(),
            coords,
        })
    }

    /// ⟨ξ,η⟩ = Σᵢ ξᵢηᵢ*.
    pub fn inner_product(&self, other: &Self) -> Result<AlgebraElement<T>> {
        self.check_space(other)?;
        let mut acc = AlgebraElement::zero(self.space.descriptor());
        for (a, b) in self.coords.iter().zip(&other.coords) {
            acc = acc.add(&a.mul(&b.adjoint())?)?;
        }
        Ok(acc)
    }

    /// Module seminorms p̄(ξ) = √(p(⟨ξ,ξ⟩)).
    pub fn seminorms(&self) -> SeminormVector<T> {
        let gram = self
            .inner_product(self)
            .expect("inner product with self is always defined");
        SeminormVector::new(gram.seminorms().values().iter().map(|&v| v.sqrt()).collect())
    }

    /// max_j p̄_j(ξ).
    pub fn norm(&self) -> T {
        self.seminorms().max()
    }

    /// Per-block scalar representation: an (n·k_j) × k_j matrix per block,
    /// the vector seen as an operator A → Aⁿ.
    pub fn scalar_representation(&self) -> Vec<CMatrix<T>> {
        let dims = self.space.descriptor().block_dims();
        dims.iter()
            .enumerate()
            .map(|(j, &k)| {
                CMatrix::<T>::from_fn(self.space.rank() * k, k, |row, col| {
                    let (i, b) = (row / k, row % k);
                    self.coords[i].block(j)[(col, b)]
                })
            })
            .collect()
    }

    /// Embed a scalar column v ∈ ℂ^{n·k_j} into the module, supported on
    /// block j, such that block j of ⟨Pξ,ξ⟩ equals (vᴴ rep_j(P) v)·E₁₁ for
    /// every operator P. Used to pull eigenvector witnesses back into the
    /// module.
    pub fn from_scalar_column(space: &ModuleSpace, j: usize, v: &CVector<T>) -> Result<Self> {
        let dims = space.descriptor().block_dims();
        if j >= dims.len() {
            return Err(Error::shape(format!("block index {j} out of range")));
        }
        let k = dims[j];
        if v.len() != space.rank() * k {
            return Err(Error::shape(format!(
                "expected scalar column of length {}, got {}",
                space.rank() * k,
                v.len()
            )));
        }
        let coords = (0..space.rank())
            .map(|i| {
                let blocks = dims
                    .iter()
                    .enumerate()
                    .map(|(jj, &kk)| {
                        if jj == j {
                            CMatrix::<T>::from_fn(kk, kk, |row, col| {
                                if row == 0 {
                                    v[i * k + col]
                                } else {
                                    Complex::zero()
                                }
                            })
                        } else {
                            CMatrix::<T>::zeros(kk, kk)
                        }
                    })
                    .collect();
                AlgebraElement::from_blocks(space.descriptor().clone(), blocks)
            })
            .collect::<Result<_>>()?;
        ModuleVector::from_coords(space.clone(), coords)
    }
}

/// Per-seminorm operator norms p̂_j(T) together with ‖T‖∞ = max_j p̂_j(T).
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorNorms<T: Real> {
    pub per_seminorm: Vec<T>,
    pub uniform: T,
}

/// An adjointable operator Aⁿ → Aᵐ, stored as the n×m matrix of algebra
/// elements that acts on coordinate rows by right multiplication.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleOperator<T: Real> {
    domain: ModuleSpace,
    codomain: ModuleSpace,
    entries: Vec<AlgebraElement<T>>, // row-major, entry(i, l) at i·m + l
}

impl<T: Real> ModuleOperator<T> {
    pub fn from_entries(
        domain: ModuleSpace,
        codomain: ModuleSpace,
        entries: Vec<AlgebraElement<T>>,
    ) -> Result<Self> {
        if domain.descriptor() != codomain.descriptor() {
            return Err(Error::shape("domain and codomain must share the algebra"));
        }
        if entries.len() != domain.rank() * codomain.rank() {
            return Err(Error::shape(format!(
                "expected {}×{} entries, got {}",
                domain.rank(),
                codomain.rank(),
                entries.len()
            )));
        }
        for e in &entries {
            if e.descriptor() != domain.descriptor() {
                return Err(Error::shape("entry descriptor differs from spaces"));
            }
        }
        Ok(ModuleOperator {
            domain,
            codomain,
            entries,
        })
    }

    pub fn zero(domain: &ModuleSpace, codomain: &ModuleSpace) -> Result<Self> {
        if domain.descriptor() != codomain.descriptor() {
            return Err(Error::shape("domain and codomain must share the algebra"));
        }
        let entries = (0..domain.rank() * codomain.rank())
            .map(|_| AlgebraElement::zero(domain.descriptor()))
            .collect();
        Ok(ModuleOperator {
            domain: domain.clone(),
            codomain: codomain.clone(),
            entries,
        })
    }

    pub fn identity(space: &ModuleSpace) -> Self {
        let n = space.rank();
        let entries = (0..n * n)
            .map(|idx| {
                if idx / n == idx % n {
                    AlgebraElement::one(space.descriptor())
                } else {
                    AlgebraElement::zero(space.descriptor())
                }
            })
            .collect();
        ModuleOperator {
            domain: space.clone(),
            codomain: space.clone(),
            entries,
        }
    }

    pub fn domain(&self) -> &ModuleSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &ModuleSpace {
        &self.codomain
    }

    pub fn entry(&self, i: usize, l: usize) -> &AlgebraElement<T> {
        &self.entries[i * self.codomain.rank() + l]
    }

    pub fn entries(&self) -> &[AlgebraElement<T>] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.domain == self.codomain
    }

    /// T(ξ): module-matrix action.
    pub fn apply(&self, xi: &ModuleVector<T>) -> Result<ModuleVector<T>> {
        if xi.space() != &self.domain {
            return Err(Error::shape("vector not in the operator domain"));
        }
        let m = self.codomain.rank();
        let mut coords = Vec::with_capacity(m);
        for l in 0..m {
            let mut acc = AlgebraElement::zero(self.domain.descriptor());
            for i in 0..self.domain.rank() {
                acc = acc.add(&xi.coord(i).mul(self.entry(i, l))?)?;
            }
            coords.push(acc);
        }
        ModuleVector::from_coords(self.codomain.clone(), coords)
    }

    /// Operator composition self ∘ other (`other` acts first).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if other.codomain != self.domain {
            return Err(Error::shape(format!(
                "compose: inner ranks differ ({} vs {})",
                other.codomain.rank(),
                self.domain.rank()
            )));
        }
        let n = other.domain.rank();
        let mid = self.domain.rank();
        let q = self.codomain.rank();
        let mut entries = Vec::with_capacity(n * q);
        for i in 0..n {
            for l in 0..q {
                let mut acc = AlgebraElement::zero(self.domain.descriptor());
                for b in 0..mid {
                    acc = acc.add(&other.entry(i, b).mul(self.entry(b, l))?)?;
                }
                entries.push(acc);
            }
        }
        ModuleOperator::from_entries(other.domain.clone(), self.codomain.clone(), entries)
    }

    /// T*: entrywise involution plus transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.domain.rank();
        let m = self.codomain.rank();
        let mut entries = Vec::with_capacity(n * m);
        for l in 0..m {
            for i in 0..n {
                entries.push(self.entry(i, l).adjoint());
            }
        }
        ModuleOperator {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            entries,
        }
    }

    /// TT* (self ∘ self-adjoint), a positive operator on the codomain.
    pub fn times_adjoint(&self) -> Self {
        self.compose(&self.adjoint())
            .expect("T∘T* shapes always match")
    }

    /// T*T, a positive operator on the domain.
    pub fn adjoint_times(&self) -> Self {
        self.adjoint()
            .compose(self)
            .expect("T*∘T shapes always match")
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::shape("operator shapes differ"));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        ModuleOperator::from_entries(self.domain.clone(), self.codomain.clone(), entries)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(crate::scalar::cplx(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        ModuleOperator {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            entries: self.entries.iter().map(|e| e.scale(c)).collect(),
        }
    }

    /// T∘T∘…∘T, n factors; n = 0 gives the identity. Square only.
    pub fn power(&self, n: usize) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::shape("power of a non-square operator"));
        }
        let mut acc = ModuleOperator::identity(&self.domain);
        for _ in 0..n {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    /// The faithful scalar representation: one complex matrix per algebra
    /// block, sized (m·k_j) × (n·k_j), covariant with `compose` and sending
    /// `adjoint` to the conjugate transpose.
    pub fn scalar_representation(&self) -> Vec<CMatrix<T>> {
        let dims = self.domain.descriptor().block_dims();
        let n = self.domain.rank();
        let m = self.codomain.rank();
        dims.iter()
            .enumerate()
            .map(|(j, &k)| {
                CMatrix::<T>::from_fn(m * k, n * k, |row, col| {
                    let (l, b) = (row / k, row % k);
                    let (i, a) = (col / k, col % k);
                    self.entry(i, l).block(j)[(a, b)]
                })
            })
            .collect()
    }

    /// Inverse of `scalar_representation`; rejects matrices whose sizes do
    /// not match the block structure.
    pub fn from_scalar(
        domain: &ModuleSpace,
        codomain: &ModuleSpace,
        blocks: &[CMatrix<T>],
    ) -> Result<Self> {
        if domain.descriptor() != codomain.descriptor() {
            return Err(Error::shape("domain and codomain must share the algebra"));
        }
        let dims = domain.descriptor().block_dims();
        if blocks.len() != dims.len() {
            return Err(Error::shape(format!(
                "expected {} representation blocks, got {}",
                dims.len(),
                blocks.len()
            )));
        }
        let n = domain.rank();
        let m = codomain.rank();
        for (j, (&k, blk)) in dims.iter().zip(blocks).enumerate() {
            if blk.nrows() != m * k || blk.ncols() != n * k {
                return Err(Error::shape(format!(
                    "representation block {j} must be {}×{}, got {}×{}",
                    m * k,
                    n * k,
                    blk.nrows(),
                    blk.ncols()
                )));
            }
        }
        let mut entries = Vec::with_capacity(n * m);
        for i in 0..n {
            for l in 0..m {
                let element_blocks = dims
                    .iter()
                    .zip(blocks)
                    .map(|(&k, blk)| CMatrix::<T>::from_fn(k, k, |a, b| blk[(l * k + b, i * k + a)]))
                    .collect();
                entries.push(AlgebraElement::from_blocks(
                    domain.descriptor().clone(),
                    element_blocks,
                )?);
            }
        }
        ModuleOperator::from_entries(domain.clone(), codomain.clone(), entries)
    }

    /// Per-seminorm and uniform operator norms.
    pub fn norms(&self) -> OperatorNorms<T> {
        let per: Vec<T> = self
            .scalar_representation()
            .iter()
            .map(linalg::spectral_norm)
            .collect();
        let uniform = per.iter().copied().fold(T::zero(), |a, b| a.max(b));
        OperatorNorms {
            per_seminorm: per,
            uniform,
        }
    }

    /// ‖T‖∞.
    pub fn uniform_norm(&self) -> T {
        self.norms().uniform
    }

    pub fn self_adjoint_residual(&self) -> T {
        if !self.is_square() {
            return T::max_value().unwrap_or_else(T::one);
        }
        self.sub(&self.adjoint())
            .expect("same shapes")
            .uniform_norm()
    }

    pub fn is_self_adjoint(&self, tol: T) -> bool {
        self.is_square()
            && self.self_adjoint_residual() <= tol * (T::one() + self.uniform_norm())
    }

    /// Positivity in Hom(X): scalar representation PSD within tol. A
    /// non-self-adjoint operator is reported as not positive rather than
    /// as an error; a non-square one is a shape error.
    pub fn is_positive(&self, tol: T) -> Result<bool> {
        if !self.is_square() {
            return Err(Error::shape("positivity needs a square operator"));
        }
        if !self.is_self_adjoint(tol) {
            return Ok(false);
        }
        let scale = T::one() + self.uniform_norm();
        Ok(self
            .scalar_representation()
            .iter()
            .all(|blk| linalg::min_eigenvalue(blk) >= -tol * scale))
    }

    /// Most negative eigenvalue over all representation blocks, with the
    /// block index and eigenvector. Square self-adjoint operators only.
    pub fn min_eigenpair(&self) -> Result<(usize, T, CVector<T>)> {
        if !self.is_square() {
            return Err(Error::shape("eigenvalues need a square operator"));
        }
        let mut best: Option<(usize, T, CVector<T>)> = None;
        for (j, blk) in self.scalar_representation().iter().enumerate() {
            let (vals, vecs) = linalg::hermitian_eigen(blk);
            let v = vecs.column(0).into_owned();
            if best.as_ref().is_none_or(|(_, b, _)| vals[0] < *b) {
                best = Some((j, vals[0], v));
            }
        }
        best.ok_or_else(|| Error::domain("no representation blocks"))
    }

    /// Hermitian functional calculus through the scalar representation.
    pub fn functional_calculus(&self, f: impl Fn(T) -> T, tol: T) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::shape("functional calculus needs a square operator"));
        }
        if !self.is_self_adjoint(tol) {
            return Err(Error::domain(format!(
                "operator is not self-adjoint (residual {:.3e})",
                crate::scalar::to_f64(self.self_adjoint_residual())
            )));
        }
        let blocks: Vec<CMatrix<T>> = self
            .scalar_representation()
            .iter()
            .map(|blk| linalg::hermitian_map(blk, &f))
            .collect();
        Self::from_scalar(&self.domain, &self.codomain, &blocks)
    }

    /// Positive square root. Eigenvalues below a relative floor are
    /// flushed to exact zero first: the square root would otherwise turn
    /// O(1e-13) eigen-noise into O(1e-7) spurious range directions.
    pub fn sqrt_psd(&self, tol: T) -> Result<Self> {
        let floor = crate::scalar::real::<T>(1e-12) * self.uniform_norm();
        self.functional_calculus(
            move |x| if x <= floor { T::zero() } else { x.sqrt() },
            tol,
        )
    }
}

/// Assemble the 2×2 block operator acting as
/// (ξ, η) ↦ (A ξ + B η, C ξ + D η) on the direct sum of the domains.
pub fn block_2x2<T: Real>(
    a: &ModuleOperator<T>,
    b: &ModuleOperator<T>,
    c: &ModuleOperator<T>,
    d: &ModuleOperator<T>,
) -> Result<ModuleOperator<T>> {
    if a.domain() != c.domain() || b.domain() != d.domain() {
        return Err(Error::shape("block columns must share domains"));
    }
    if a.codomain() != b.codomain() || c.codomain() != d.codomain() {
        return Err(Error::shape("block rows must share codomains"));
    }
    let domain = a.domain().direct_sum(b.domain())?;
    let codomain = a.codomain().direct_sum(c.codomain())?;
    let (n1, m1) = (a.domain().rank(), a.codomain().rank());
    let (n2, m2) = (b.domain().rank(), c.codomain().rank());
    let mut entries = Vec::with_capacity((n1 + n2) * (m1 + m2));
    for i in 0..n1 + n2 {
        for l in 0..m1 + m2 {
            let e = match (i < n1, l < m1) {
                (true, true) => a.entry(i, l).clone(),
                (true, false) => c.entry(i, l - m1).clone(),
                (false, true) => b.entry(i - n1, l).clone(),
                (false, false) => d.entry(i - n1, l - m1).clone(),
            };
            entries.push(e);
        }
    }
    ModuleOperator::from_entries(domain, codomain, entries)
}

/// Split a block operator back into its 2×2 parts; `n1` and `m1` are the
/// ranks of the first domain and codomain summands.
pub fn split_2x2<T: Real>(
    op: &ModuleOperator<T>,
    n1: usize,
    m1: usize,
) -> Result<(
    ModuleOperator<T>,
    ModuleOperator<T>,
    ModuleOperator<T>,
    ModuleOperator<T>,
)> {
    let n = op.domain().rank();
    let m = op.codomain().rank();
    if n1 >= n || m1 >= m {
        return Err(Error::shape("split sizes exceed operator ranks"));
    }
    let desc = op.domain().descriptor().clone();
    let dom1 = ModuleSpace::new(desc.clone(), n1)?;
    let dom2 = ModuleSpace::new(desc.clone(), n - n1)?;
    let cod1 = ModuleSpace::new(desc.clone(), m1)?;
    let cod2 = ModuleSpace::new(desc, m - m1)?;
    let pick = |rows: std::ops::Range<usize>,
                cols: std::ops::Range<usize>,
                dom: &ModuleSpace,
                cod: &ModuleSpace|
     -> Result<ModuleOperator<T>> {
        let mut entries = Vec::with_capacity(dom.rank() * cod.rank());
        for i in rows.clone() {
            for l in cols.clone() {
                entries.push(op.entry(i, l).clone());
            }
        }
        ModuleOperator::from_entries(dom.clone(), cod.clone(), entries)
    };
    let a = pick(0..n1, 0..m1, &dom1, &cod1)?;
    let c = pick(0..n1, m1..m, &dom1, &cod2)?;
    let b = pick(n1..n, 0..m1, &dom2, &cod1)?;
    let d = pick(n1..n, m1..m, &dom2, &cod2)?;
    Ok((a, b, c, d))
}

/// [L₁ L₂]: the operator on the direct sum of the domains acting as
/// (ξ, η) ↦ L₁ξ + L₂η. Satisfies [L₁ L₂][L₁ L₂]* = L₁L₁* + L₂L₂*.
pub fn stack_domain<T: Real>(
    l1: &ModuleOperator<T>,
    l2: &ModuleOperator<T>,
) -> Result<ModuleOperator<T>> {
    if l1.codomain() != l2.codomain() {
        return Err(Error::shape("stacked operators must share the codomain"));
    }
    let domain = l1.domain().direct_sum(l2.domain())?;
    let m = l1.codomain().rank();
    let mut entries = Vec::with_capacity(domain.rank() * m);
    for i in 0..l1.domain().rank() {
        for l in 0..m {
            entries.push(l1.entry(i, l).clone());
        }
    }
    for i in 0..l2.domain().rank() {
        for l in 0..m {
            entries.push(l2.entry(i, l).clone());
        }
    }
    ModuleOperator::from_entries(domain, l1.codomain().clone(), entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    fn cplx(re: f64, im: f64) -> num_complex::Complex<f64> {
        crate::scalar::cplx(re, im)
    }
    use nalgebra::DMatrix;

    fn scalar_space(rank: usize) -> ModuleSpace {
        ModuleSpace::new(AlgebraDescriptor::scalar(), rank).unwrap()
    }

    fn two_block_space(rank: usize) -> ModuleSpace {
        ModuleSpace::new(AlgebraDescriptor::new(vec![2, 1]).unwrap(), rank).unwrap()
    }

    #[test]
    fn basis_inner_products() {
        let space = two_block_space(3);
        let e1 = ModuleVector::<f64>::standard_basis(&space, 0).unwrap();
        let e2 = ModuleVector::<f64>::standard_basis(&space, 1).unwrap();
        let one = AlgebraElement::one(space.descriptor());
        assert_eq!(e1.inner_product(&e1).unwrap(), one);
        assert!(e1.inner_product(&e2).unwrap().norm() < 1e-15);
        assert_eq!(e1.seminorms().values(), &[1.0, 1.0]);
    }

    #[test]
    fn inner_product_is_module_linear() {
        let space = two_block_space(2);
        let a = AlgebraElement::from_blocks(
            space.descriptor().clone(),
            vec![
                DMatrix::from_row_slice(
                    2,
                    2,
                    &[cplx(1.0, 1.0), cplx(0.0, 2.0), cplx(0.5, 0.0), cplx(-1.0, 0.25)],
                ),
                DMatrix::from_element(1, 1, cplx(2.0, -1.0)),
            ],
        )
        .unwrap();
        let xi = ModuleVector::standard_basis(&space, 0)
            .unwrap()
            .add(&ModuleVector::standard_basis(&space, 1).unwrap().module_scale(&a).unwrap())
            .unwrap();
        let eta = ModuleVector::standard_basis(&space, 1).unwrap();
        let lhs = xi.module_scale(&a).unwrap().inner_product(&eta).unwrap();
        let rhs = a.mul(&xi.inner_product(&eta).unwrap()).unwrap();
        assert!(lhs.sub(&rhs).unwrap().norm() < 1e-12);
        // conjugate symmetry
        let sym = xi
            .inner_product(&eta)
            .unwrap()
            .adjoint()
            .sub(&eta.inner_product(&xi).unwrap())
            .unwrap();
        assert!(sym.norm() < 1e-12);
    }

    #[test]
    fn scalar_case_module_seminorm() {
        let space = scalar_space(2);
        let two = AlgebraElement::scalar(cplx(2.0, 0.0));
        let zero = AlgebraElement::scalar(cplx(0.0, 0.0));
        let xi = ModuleVector::from_coords(space, vec![two, zero]).unwrap();
        assert_eq!(xi.seminorms().values(), &[2.0]);
    }

    #[test]
    fn identity_apply_and_adjoint_involution() {
        let space = two_block_space(2);
        let id = ModuleOperator::<f64>::identity(&space);
        let e1 = ModuleVector::standard_basis(&space, 0).unwrap();
        assert_eq!(id.apply(&e1).unwrap(), e1);
        assert_eq!(id.adjoint(), id);
        let norms = id.norms();
        assert_eq!(norms.per_seminorm, vec![1.0, 1.0]);
        assert_eq!(norms.uniform, 1.0);
    }

    #[test]
    fn scalar_case_shift_operator_norm() {
        // T = [[0,2],[0,0]] over ℂ: e₁ ↦ 2e₂, spectral norm 2.
        let space = scalar_space(2);
        let z = AlgebraElement::scalar(cplx(0.0, 0.0));
        let two = AlgebraElement::scalar(cplx(2.0, 0.0));
        let t = ModuleOperator::from_entries(
            space.clone(),
            space.clone(),
            vec![z.clone(), two, z.clone(), z],
        )
        .unwrap();
        let e1 = ModuleVector::standard_basis(&space, 0).unwrap();
        let te1 = t.apply(&e1).unwrap();
        assert_eq!(te1.coord(1).block(0)[(0, 0)], cplx(2.0, 0.0));
        assert!((t.uniform_norm() - 2.0).abs() < 1e-12);
        let zero_op = ModuleOperator::<f64>::zero(&space, &space).unwrap();
        assert_eq!(zero_op.norms().per_seminorm, vec![0.0]);
    }

    #[test]
    fn adjoint_relation_on_a_dense_operator() {
        let space = two_block_space(2);
        let d = space.descriptor().clone();
        let mk = |s: u64| {
            let vals: Vec<f64> = (0..8).map(|i| ((s + i) as f64 * 0.37).sin()).collect();
            AlgebraElement::from_blocks(
                d.clone(),
                vec![
                    DMatrix::from_fn(2, 2, |r, c| cplx(vals[r * 2 + c], vals[3 - r - c])),
                    DMatrix::from_element(1, 1, cplx(vals[4], vals[5])),
                ],
            )
            .unwrap()
        };
        let t = ModuleOperator::from_entries(
            space.clone(),
            space.clone(),
            vec![mk(1), mk(5), mk(11), mk(17)],
        )
        .unwrap();
        assert_eq!(t.adjoint().adjoint(), t);
        let xi = ModuleVector::standard_basis(&space, 0)
            .unwrap()
            .module_scale(&mk(23))
            .unwrap();
        let eta = ModuleVector::standard_basis(&space, 1)
            .unwrap()
            .module_scale(&mk(29))
            .unwrap();
        let lhs = t.apply(&xi).unwrap().inner_product(&eta).unwrap();
        let rhs = xi
            .inner_product(&t.adjoint().apply(&eta).unwrap())
            .unwrap();
        assert!(lhs.sub(&rhs).unwrap().norm() < 1e-10);
    }

    #[test]
    fn representation_is_multiplicative_and_star() {
        let space = two_block_space(2);
        let d = space.descriptor().clone();
        let mk = |s: u64| {
            let vals: Vec<f64> = (0..8).map(|i| ((s * 7 + i) as f64 * 0.61).cos()).collect();
            AlgebraElement::from_blocks(
                d.clone(),
                vec![
                    DMatrix::from_fn(2, 2, |r, c| cplx(vals[r * 2 + c], vals[(r + c) % 4])),
                    DMatrix::from_element(1, 1, cplx(vals[6], vals[7])),
                ],
            )
            .unwrap()
        };
        let t = ModuleOperator::from_entries(
            space.clone(),
            space.clone(),
            vec![mk(1), mk(2), mk(3), mk(4)],
        )
        .unwrap();
        let s = ModuleOperator::from_entries(
            space.clone(),
            space.clone(),
            vec![mk(5), mk(6), mk(7), mk(8)],
        )
        .unwrap();
        let ts = t.compose(&s).unwrap();
        for (j, rep) in ts.scalar_representation().iter().enumerate() {
            let prod = &t.scalar_representation()[j] * &s.scalar_representation()[j];
            assert!(linalg::spectral_norm(&(rep - prod)) < 1e-12);
        }
        for (j, rep) in t.adjoint().scalar_representation().iter().enumerate() {
            let adj = t.scalar_representation()[j].adjoint();
            assert!(linalg::spectral_norm(&(rep - adj)) < 1e-15);
        }
        // identity maps to the identity matrix
        let id = ModuleOperator::<f64>::identity(&space);
        for rep in id.scalar_representation() {
            assert!(linalg::spectral_norm(&(&rep - CMatrix::<f64>::identity(rep.nrows(), rep.ncols()))) < 1e-15);
        }
        // exact round trip
        let back =
            ModuleOperator::from_scalar(t.domain(), t.codomain(), &t.scalar_representation())
                .unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn from_scalar_rejects_bad_shapes() {
        let space = two_block_space(2);
        let bad = vec![CMatrix::<f64>::zeros(3, 4), CMatrix::<f64>::zeros(2, 2)];
        assert!(matches!(
            ModuleOperator::from_scalar(&space, &space, &bad),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn positivity_of_gram_and_negative_identity() {
        let space = two_block_space(2);
        let id = ModuleOperator::<f64>::identity(&space);
        assert!(id.is_positive(1e-9).unwrap());
        assert!(!id.scale(cplx(-1.0, 0.0)).is_positive(1e-9).unwrap());
    }

    #[test]
    fn embedded_scalar_column_reproduces_quadratic_form() {
        let space = two_block_space(2);
        let id = ModuleOperator::<f64>::identity(&space);
        let p = id.scale(cplx(-1.0, 0.0));
        let v = CVector::<f64>::from_vec(vec![
            cplx(1.0, 0.5),
            cplx(0.0, -1.0),
            cplx(0.25, 0.0),
            cplx(0.5, 0.5),
        ]);
        let xi = ModuleVector::from_scalar_column(&space, 0, &v).unwrap();
        let form = p.apply(&xi).unwrap().inner_product(&xi).unwrap();
        let expect = -(v.norm() * v.norm());
        assert!((form.block(0)[(0, 0)].re - expect).abs() < 1e-12);
        assert!(form.block(1).norm() < 1e-15);
    }

    #[test]
    fn block_assembly_round_trips() {
        let space = scalar_space(2);
        let mk = |x: f64| {
            let z = AlgebraElement::scalar(cplx(x, 0.0));
            let o = AlgebraElement::scalar(cplx(x + 1.0, -x));
            let p = AlgebraElement::scalar(cplx(0.5 * x, 1.0));
            let q = AlgebraElement::scalar(cplx(-x, 0.25));
            ModuleOperator::from_entries(space.clone(), space.clone(), vec![z, o, p, q]).unwrap()
        };
        let (a, b, c, d) = (mk(1.0), mk(2.0), mk(3.0), mk(4.0));
        let big = block_2x2(&a, &b, &c, &d).unwrap();
        let (a2, b2, c2, d2) = split_2x2(&big, 2, 2).unwrap();
        assert_eq!(a, a2);
        assert_eq!(b, b2);
        assert_eq!(c, c2);
        assert_eq!(d, d2);
        // action check: (ξ,0) ↦ (Aξ, Cξ)
        let e1 = ModuleVector::standard_basis(&space, 0).unwrap();
        let zero = ModuleVector::zero(&space);
        let stacked = ModuleVector::from_coords(
            big.domain().clone(),
            e1.coords()
                .iter()
                .chain(zero.coords())
                .cloned()
                .collect(),
        )
        .unwrap();
        let out = big.apply(&stacked).unwrap();
        let top = a.apply(&e1).unwrap();
        let bottom = c.apply(&e1).unwrap();
        for i in 0..2 {
            assert!(out.coord(i).sub(top.coord(i)).unwrap().norm() < 1e-14);
            assert!(out.coord(2 + i).sub(bottom.coord(i)).unwrap().norm() < 1e-14);
        }
        // stack_domain gram identity
        let st = stack_domain(&a, &b).unwrap();
        let gram = st.times_adjoint();
        let expect = a.times_adjoint().add(&b.times_adjoint()).unwrap();
        assert!(gram.sub(&expect).unwrap().uniform_norm() < 1e-12);
    }
}
