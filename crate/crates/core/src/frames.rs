//! Bessel systems, frames of multipliers, K-frames and atomic systems.
//!
//! A `FrameSystem` is a finite family {ξᵢ} ⊂ Aⁿ together with its cached
//! analysis operator θ(ξ) = (⟨ξ,ξᵢ⟩)ᵢ, synthesis operator θ*, and frame
//! operator S = θ*∘θ. Every family is Bessel (the index set is finite);
//! frame and K-frame verdicts are spectral statements about S.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::factorization::{
    self, douglas_solve, has_full_row_rank, is_invertible, min_majorization_constant,
    pseudoinverse,
};
use crate::hilbert::{ModuleOperator, ModuleSpace, ModuleVector};
use crate::linalg::{self};
use crate::report::VerificationReport;
use crate::sampling;
use crate::scalar::{real, to_f64, Real};

/// A finite indexed family of module vectors with cached frame machinery.
#[derive(Debug, Clone)]
pub struct FrameSystem<T: Real> {
    space: ModuleSpace,
    vectors: Vec<ModuleVector<T>>,
    analysis: ModuleOperator<T>,
    synthesis: ModuleOperator<T>,
    frame_op: ModuleOperator<T>,
    fingerprint: u64,
}

impl<T: Real> FrameSystem<T> {
    pub fn build(space: ModuleSpace, vectors: Vec<ModuleVector<T>>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::domain("a frame system needs at least one vector"));
        }
        for v in &vectors {
            if v.space() != &space {
                return Err(Error::shape("frame vector not in the stated space"));
            }
        }
        // θ: X → Aᴺ, θ(ξ)ᵢ = ⟨ξ,ξᵢ⟩ ⟹ entry (l, i) = (ξᵢ)ₗ*.
        let coeff_space = ModuleSpace::new(space.descriptor().clone(), vectors.len())?;
        let n = space.rank();
        let mut entries = Vec::with_capacity(n * vectors.len());
        for l in 0..n {
            for xi in &vectors {
                entries.push(xi.coord(l).adjoint());
            }
        }
        let analysis = ModuleOperator::from_entries(space.clone(), coeff_space, entries)?;
        let synthesis = analysis.adjoint();
        let frame_op = synthesis.compose(&analysis)?;
        let fingerprint = fingerprint_vectors(&vectors);
        Ok(FrameSystem {
            space,
            vectors,
            analysis,
            synthesis,
            frame_op,
            fingerprint,
        })
    }

    /// Rebuild a frame from a synthesis operator Aᴺ → X: vector i is the
    /// image of the i-th coefficient basis vector.
    pub fn from_synthesis(synthesis: &ModuleOperator<T>) -> Result<Self> {
        let coeff = synthesis.domain();
        let space = synthesis.codomain().clone();
        let vectors = (0..coeff.rank())
            .map(|i| {
                let coords = (0..space.rank()).map(|l| synthesis.entry(i, l).clone()).collect();
                ModuleVector::from_coords(space.clone(), coords)
            })
            .collect::<Result<Vec<_>>>()?;
        FrameSystem::build(space, vectors)
    }

    pub fn space(&self) -> &ModuleSpace {
        &self.space
    }

    /// The coefficient module Aᴺ.
    pub fn coefficient_space(&self) -> &ModuleSpace {
        self.analysis.codomain()
    }

    pub fn vectors(&self) -> &[ModuleVector<T>] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// θ: X → Aᴺ.
    pub fn analysis(&self) -> &ModuleOperator<T> {
        &self.analysis
    }

    /// θ*: Aᴺ → X, c ↦ Σᵢ cᵢ·ξᵢ.
    pub fn synthesis(&self) -> &ModuleOperator<T> {
        &self.synthesis
    }

    /// S = θ*∘θ.
    pub fn frame_operator(&self) -> &ModuleOperator<T> {
        &self.frame_op
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// The family {Op(ξᵢ)} on the codomain of `op`.
    pub fn map_vectors(&self, op: &ModuleOperator<T>) -> Result<Self> {
        let vectors = self
            .vectors
            .iter()
            .map(|xi| op.apply(xi))
            .collect::<Result<Vec<_>>>()?;
        FrameSystem::build(op.codomain().clone(), vectors)
    }

    /// The family {ξᵢ + ηᵢ} for equal index sets on one space.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.space != other.space || self.len() != other.len() {
            return Err(Error::shape("frame sum needs equal spaces and index sets"));
        }
        let vectors = self
            .vectors
            .iter()
            .zip(&other.vectors)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        FrameSystem::build(self.space.clone(), vectors)
    }

    /// Canonical dual {S⁻¹ξᵢ}; requires a frame (S invertible).
    pub fn canonical_dual(&self, tol: T) -> Result<Self> {
        let bounds = self.frame_bounds(tol);
        if !bounds.is_frame {
            return Err(Error::domain("canonical dual needs a frame (lower bound > 0)"));
        }
        self.map_vectors(&pseudoinverse(&self.frame_op))
    }

    /// Spectral frame bounds: C and D are the extreme eigenvalues of S.
    pub fn frame_bounds(&self, tol: T) -> FrameBounds<T> {
        let mut lower = T::max_value().unwrap_or_else(T::one);
        let mut upper = T::zero();
        for blk in self.frame_op.scalar_representation() {
            let vals = linalg::hermitian_eigenvalues(&blk);
            lower = lower.min(vals[0]);
            upper = upper.max(*vals.last().expect("nonempty spectrum"));
        }
        let lower = lower.max(T::zero());
        let is_frame = lower > tol;
        let tight = upper - lower <= tol * (T::one() + upper);
        let parseval = tight && (upper - T::one()).abs() <= tol * (T::one() + upper);
        FrameBounds {
            lower,
            upper,
            is_frame,
            tight,
            parseval,
        }
    }
}

fn fingerprint_vectors<T: Real>(vectors: &[ModuleVector<T>]) -> u64 {
    // FNV-1a over the f64 bit patterns of every coordinate entry.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |x: f64| {
        for b in x.to_bits().to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100_0000_01b3);
        }
    };
    for v in vectors {
        for coord in v.coords() {
            for blk in coord.blocks() {
                for z in blk.iter() {
                    eat(to_f64(z.re));
                    eat(to_f64(z.im));
                }
            }
        }
    }
    h
}

/// Ordinary frame bounds: C·⟨ξ,ξ⟩ ≤ ⟨Sξ,ξ⟩ ≤ D·⟨ξ,ξ⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameBounds<T: Real> {
    pub lower: T,
    pub upper: T,
    /// lower > tol: the family is a frame, not merely Bessel.
    pub is_frame: bool,
    pub tight: bool,
    pub parseval: bool,
}

/// Certified K-frame bounds A·⟨K*ξ,K*ξ⟩ ≤ ⟨Sξ,ξ⟩ ≤ B·⟨ξ,ξ⟩.
#[derive(Debug, Clone)]
pub struct KFrameBounds<T: Real> {
    pub lower: T,
    pub upper: T,
    /// The operator the lower bound is measured against.
    pub k_op: ModuleOperator<T>,
}

/// Outcome of a K-frame test: certified bounds, or a direction in which
/// the lower inequality fails.
#[derive(Debug, Clone)]
pub enum KFrameOutcome<T: Real> {
    KFrame(KFrameBounds<T>),
    NotKFrame {
        witness: ModuleVector<T>,
        deficiency: T,
    },
}

impl<T: Real> KFrameOutcome<T> {
    pub fn bounds(&self) -> Option<&KFrameBounds<T>> {
        match self {
            KFrameOutcome::KFrame(b) => Some(b),
            KFrameOutcome::NotKFrame { .. } => None,
        }
    }

    pub fn is_kframe(&self) -> bool {
        self.bounds().is_some()
    }
}

/// Marker value reported when the lower bound is unconstrained (K = 0).
pub fn unbounded_marker<T: Real>() -> T {
    real(1e12)
}

/// Optimal K-frame lower bound: the greatest a with S − a·KK* ⪰ 0, by
/// bisection at 1e-8 relative granularity. Success iff the bound exceeds
/// `tol`; on failure the witness comes from the most negative eigenspace
/// of S − a·KK* at tiny a.
pub fn kframe_check<T: Real>(
    f: &FrameSystem<T>,
    k: &ModuleOperator<T>,
    tol: T,
) -> Result<KFrameOutcome<T>> {
    if !k.is_square() || k.domain() != f.space() {
        return Err(Error::shape("K must be a square operator on the frame space"));
    }
    let s = f.frame_operator().scalar_representation();
    let g = k.times_adjoint().scalar_representation();
    let s_norm = s.iter().map(linalg::spectral_norm).fold(T::zero(), T::max);
    let g_norm = g.iter().map(linalg::spectral_norm).fold(T::zero(), T::max);
    let upper = f.frame_bounds(tol).upper;

    let feasible = |a: T| -> bool {
        let eps = real::<T>(1e-13) * (T::one() + s_norm + a * g_norm);
        s.iter().zip(&g).all(|(sj, gj)| {
            let m = sj - gj.map(|z| z * Complex::new(a, T::zero()));
            linalg::min_eigenvalue(&m) >= -eps
        })
    };

    let cap = unbounded_marker::<T>();
    if g_norm <= real::<T>(1e-14) * (T::one() + s_norm) {
        // K ≈ 0: the lower inequality is vacuous.
        return Ok(KFrameOutcome::KFrame(KFrameBounds {
            lower: cap,
            upper,
            k_op: k.clone(),
        }));
    }

    let mut optimal = T::zero();
    if feasible(T::zero()) {
        let mut lo = T::zero();
        let mut hi = T::one();
        while feasible(hi) {
            hi = hi + hi;
            if hi > cap {
                break;
            }
        }
        if hi > cap {
            optimal = cap;
        } else {
            let rtol = real::<T>(1e-8);
            while hi - lo > rtol * (T::one() + lo) {
                let mid = (hi + lo) * real::<T>(0.5);
                if mid <= lo || mid >= hi {
                    break; // float resolution exhausted
                }
                if feasible(mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            optimal = lo;
        }
    }

    if optimal > tol {
        Ok(KFrameOutcome::KFrame(KFrameBounds {
            lower: optimal,
            upper,
            k_op: k.clone(),
        }))
    } else {
        let probe = f
            .frame_operator()
            .sub(&k.times_adjoint().scale(Complex::new(tol.max(real(1e-8)), T::zero())))?;
        let (j, lambda, v) = probe.min_eigenpair()?;
        let witness = ModuleVector::from_scalar_column(f.space(), j, &v)?;
        Ok(KFrameOutcome::NotKFrame {
            witness,
            deficiency: -lambda,
        })
    }
}

/// Certificate that {ξᵢ} is an atomic system for K: a coefficient map Q
/// with K = θ*∘Q and coefficient energy bound C = ‖Q‖∞².
#[derive(Debug, Clone)]
pub struct AtomicCertificate<T: Real> {
    pub coefficient_map: ModuleOperator<T>,
    pub bound: T,
    frame_fingerprint: u64,
}

#[derive(Debug, Clone)]
pub enum AtomicOutcome<T: Real> {
    Atomic(AtomicCertificate<T>),
    /// Ran(K) ⊄ Ran(θ*); carries the violating representation column.
    NotAtomic {
        block: usize,
        column: usize,
        residual: f64,
    },
}

impl<T: Real> AtomicOutcome<T> {
    pub fn certificate(&self) -> Option<&AtomicCertificate<T>> {
        match self {
            AtomicOutcome::Atomic(c) => Some(c),
            AtomicOutcome::NotAtomic { .. } => None,
        }
    }

    pub fn is_atomic(&self) -> bool {
        self.certificate().is_some()
    }
}

/// Try to certify {ξᵢ} as an atomic system for K by solving K = θ*∘Q.
pub fn atomic_system_check<T: Real>(
    f: &FrameSystem<T>,
    k: &ModuleOperator<T>,
    tol: T,
) -> Result<AtomicOutcome<T>> {
    if !k.is_square() || k.domain() != f.space() {
        return Err(Error::shape("K must be a square operator on the frame space"));
    }
    match douglas_solve(k, f.synthesis(), tol) {
        Ok(sol) => Ok(AtomicOutcome::Atomic(AtomicCertificate {
            bound: sol.majorization_constant * sol.majorization_constant,
            coefficient_map: sol.factor,
            frame_fingerprint: f.fingerprint(),
        })),
        Err(Error::Unsolvable {
            block,
            column,
            residual,
        }) => Ok(AtomicOutcome::NotAtomic {
            block,
            column,
            residual,
        }),
        Err(e) => Err(e),
    }
}

/// Coefficients m_x = Q(x) for the reproduction K x = Σᵢ mᵢ·ξᵢ.
/// Errors when the certificate does not match the frame.
pub fn atomic_coefficients<T: Real>(
    cert: &AtomicCertificate<T>,
    f: &FrameSystem<T>,
    x: &ModuleVector<T>,
) -> Result<ModuleVector<T>> {
    if cert.frame_fingerprint != f.fingerprint() {
        return Err(Error::StaleCertificate);
    }
    cert.coefficient_map.apply(x)
}

/// The construction {Kξᵢ} from a Parseval frame: an atomic system for K.
pub fn atomic_from_operator<T: Real>(
    k: &ModuleOperator<T>,
    parseval: &FrameSystem<T>,
    tol: T,
) -> Result<FrameSystem<T>> {
    if !parseval.frame_bounds(tol).parseval {
        return Err(Error::domain("the source frame must be Parseval"));
    }
    if !k.is_square() || k.domain() != parseval.space() {
        return Err(Error::shape("K must be a square operator on the frame space"));
    }
    parseval.map_vectors(k)
}

/// Every ordinary frame is a K-frame for invertible K, with certified
/// lower bound C/‖K‖∞².
pub fn kframe_from_frame<T: Real>(
    f: &FrameSystem<T>,
    k: &ModuleOperator<T>,
    tol: T,
) -> Result<KFrameBounds<T>> {
    let bounds = f.frame_bounds(tol);
    if !bounds.is_frame {
        return Err(Error::domain("the family is Bessel but not a frame"));
    }
    if !is_invertible(k) {
        return Err(Error::domain("K must be invertible"));
    }
    let k_norm = k.uniform_norm();
    Ok(KFrameBounds {
        lower: bounds.lower / (k_norm * k_norm),
        upper: bounds.upper,
        k_op: k.clone(),
    })
}

/// Transfer a K-frame to an L-frame under Ran(L) ⊆ Ran(K), with certified
/// bound A/α² where α is the minimal majorization constant of (L, K).
pub fn kframe_transfer<T: Real>(
    f: &FrameSystem<T>,
    k: &ModuleOperator<T>,
    l: &ModuleOperator<T>,
    tol: T,
) -> Result<KFrameBounds<T>> {
    let base = match kframe_check(f, k, tol)? {
        KFrameOutcome::KFrame(b) => b,
        KFrameOutcome::NotKFrame { .. } => {
            return Err(Error::domain("the family is not a K-frame"));
        }
    };
    let alpha = min_majorization_constant(l, k, tol)?;
    let lower = if alpha.is_zero() {
        unbounded_marker()
    } else {
        base.lower / (alpha * alpha)
    };
    Ok(KFrameBounds {
        lower,
        upper: base.upper,
        k_op: l.clone(),
    })
}

/// The frame operator of a K-frame is invertible on Ran(K): the
/// compression of S to Ran(K) has spectrum bounded below by A·‖K†‖∞⁻².
pub fn restricted_invertibility<T: Real>(
    f: &FrameSystem<T>,
    k: &ModuleOperator<T>,
    tol: T,
) -> Result<VerificationReport> {
    let outcome = kframe_check(f, k, tol)?;
    let bounds = match outcome {
        KFrameOutcome::KFrame(b) => b,
        KFrameOutcome::NotKFrame { .. } => {
            return Ok(VerificationReport::builder("kframe-restricted")
                .hypotheses_not_met()
                .finish());
        }
    };
    let kdag = pseudoinverse(k);
    let kdag_norm = kdag.uniform_norm();
    if kdag_norm.is_zero() {
        // K = 0: nothing to invert on Ran(K).
        return Ok(VerificationReport::builder("kframe-restricted")
            .check_flag("empty_range", true)
            .finish());
    }
    let claimed = bounds.lower / (kdag_norm * kdag_norm);
    let rel = real::<T>(factorization::RANK_CUTOFF_REL);
    let mut achieved = T::max_value().unwrap_or_else(T::one);
    let mut any = false;
    for (rep_k, rep_s) in k
        .scalar_representation()
        .iter()
        .zip(f.frame_operator().scalar_representation())
    {
        let basis = linalg::range_basis(rep_k, rel);
        if basis.ncols() == 0 {
            continue;
        }
        any = true;
        let compression = basis.adjoint() * &rep_s * &basis;
        achieved = achieved.min(linalg::min_eigenvalue(&compression));
    }
    if !any {
        return Ok(VerificationReport::builder("kframe-restricted")
            .check_flag("empty_range", true)
            .finish());
    }
    let shortfall = (claimed - achieved).max(T::zero());
    Ok(VerificationReport::builder("kframe-restricted")
        .info("claimed_minimum", to_f64(claimed))
        .info("achieved_minimum", to_f64(achieved))
        .check(
            "restricted_bound_shortfall",
            to_f64(shortfall),
            to_f64(tol) * (1.0 + to_f64(claimed)),
        )
        .finish())
}

/// Image of a K-frame under an operator T: checks the commuting,
/// co-isometry, surjectivity and invertibility statements on one instance.
/// Hypothesis failures are recorded, not thrown; only an implication with
/// satisfied hypotheses and a false conclusion fails the report.
pub fn image_kframe_check<T: Real>(
    f: &FrameSystem<T>,
    k: &ModuleOperator<T>,
    t: &ModuleOperator<T>,
    tol: T,
) -> Result<VerificationReport> {
    if !t.is_square() || t.domain() != f.space() {
        return Err(Error::shape("T must be a square operator on the frame space"));
    }
    let base = match kframe_check(f, k, tol)? {
        KFrameOutcome::KFrame(b) => b,
        KFrameOutcome::NotKFrame { .. } => {
            return Ok(VerificationReport::builder("kframe-image")
                .hypotheses_not_met()
                .finish());
        }
    };
    let a_base = base.lower;
    let scale = T::one() + t.uniform_norm() * k.uniform_norm();
    let commute_residual = t.compose(k)?.sub(&k.compose(t)?)?.uniform_norm();
    let commutes = commute_residual <= tol.sqrt() * scale;
    let id = ModuleOperator::identity(t.domain());
    let coiso_residual = t.times_adjoint().sub(&id)?.uniform_norm();
    let coisometry = coiso_residual <= tol.sqrt() * (T::one() + t.uniform_norm());

    let image = f.map_vectors(t)?;
    let image_outcome = kframe_check(&image, k, tol)?;
    let a_image = image_outcome.bounds().map(|b| b.lower);

    // informational booleans record 1.0 = true
    let mut builder = VerificationReport::builder("kframe-image")
        .info("commutation_residual", to_f64(commute_residual))
        .info("coisometry_residual", to_f64(coiso_residual))
        .info("base_lower_bound", to_f64(a_base))
        .info(
            "image_is_kframe",
            if image_outcome.is_kframe() { 1.0 } else { 0.0 },
        );
    if let Some(a) = a_image {
        builder = builder.info("image_lower_bound", to_f64(a));
    }

    if commutes {
        // K-frame inequality for ξ ∈ Ran(T) with bound A·‖T†‖∞⁻².
        let tdag_norm = pseudoinverse(t).uniform_norm();
        if tdag_norm > T::zero() {
            let bound = a_base / (tdag_norm * tdag_norm);
            let s_img = image.frame_operator();
            let kk = k.times_adjoint();
            let mut worst = T::zero();
            for eta in sampling::sample_vectors::<T>(f.space(), 20, 0x1abe1) {
                let xi = t.apply(&eta)?;
                let lhs = s_img.apply(&xi)?.inner_product(&xi)?;
                let rhs = kk.apply(&xi)?.inner_product(&xi)?;
                let gap = lhs.sub(&rhs.scale(Complex::new(bound, T::zero())))?;
                let min_eig = gap
                    .hermitian_spectrum(tol.sqrt())?
                    .iter()
                    .filter_map(|b| b.first().copied())
                    .fold(T::zero(), T::min);
                worst = worst.max(-min_eig);
            }
            let range_scale =
                to_f64(tol) * (1.0 + to_f64(s_img.uniform_norm()) + to_f64(bound * kk.uniform_norm()));
            builder = builder
                .info("range_restricted_bound", to_f64(bound))
                .check("range_restricted_violation", to_f64(worst), range_scale);
        }
    }

    if commutes && coisometry {
        // co-isometry conclusion: the image is a K-frame with the same A.
        let shortfall = match a_image {
            Some(a) => (a_base - a).max(T::zero()),
            None => a_base,
        };
        builder = builder.check(
            "coisometry_bound_shortfall",
            to_f64(shortfall),
            to_f64(tol.sqrt()) * (1.0 + to_f64(a_base)),
        );
    }

    let k_full = has_full_row_rank(k);
    builder = builder.info("k_range_dense", if k_full { 1.0 } else { 0.0 });
    if k_full && image_outcome.is_kframe() {
        // surjectivity: a K-frame image with dense Ran(K) forces T onto.
        builder = builder.check_flag("t_surjective", has_full_row_rank(t));
        let adj_image = f.map_vectors(&t.adjoint())?;
        if kframe_check(&adj_image, k, tol)?.is_kframe() {
            builder = builder.check_flag("t_invertible", is_invertible(t));
        }
    }
    Ok(builder.finish())
}

/// Atomic systems for a linear combination aK₁ + bK₂ (and, reported
/// alongside, for the product K₁∘K₂).
pub fn combined_atomic_check<T: Real>(
    f: &FrameSystem<T>,
    k1: &ModuleOperator<T>,
    k2: &ModuleOperator<T>,
    a: Complex<T>,
    b: Complex<T>,
    tol: T,
) -> Result<VerificationReport> {
    let c1 = match atomic_system_check(f, k1, tol)? {
        AtomicOutcome::Atomic(c) => c,
        AtomicOutcome::NotAtomic { .. } => {
            return Ok(VerificationReport::builder("atomic-combination")
                .hypotheses_not_met()
                .finish());
        }
    };
    let c2 = match atomic_system_check(f, k2, tol)? {
        AtomicOutcome::Atomic(c) => c,
        AtomicOutcome::NotAtomic { .. } => {
            return Ok(VerificationReport::builder("atomic-combination")
                .hypotheses_not_met()
                .finish());
        }
    };
    let combo = k1.scale(a).add(&k2.scale(b))?;
    let combo_outcome = atomic_system_check(f, &combo, tol)?;
    let product_outcome = atomic_system_check(f, &k1.compose(k2)?, tol)?;
    let proof_bound = (a.norm_sqr() * c1.bound).max(b.norm_sqr() * c2.bound);
    let mut builder = VerificationReport::builder("atomic-combination")
        .check_flag("combination_atomic", combo_outcome.is_atomic())
        .info("product_atomic", if product_outcome.is_atomic() { 1.0 } else { 0.0 })
        .info("proof_bound", to_f64(proof_bound));
    if let Some(cert) = combo_outcome.certificate() {
        builder = builder.info("certified_bound", to_f64(cert.bound));
    }
    Ok(builder.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraDescriptor, AlgebraElement};
    fn cplx(re: f64, im: f64) -> num_complex::Complex<f64> {
        crate::scalar::cplx(re, im)
    }

    fn scalar_space(rank: usize) -> ModuleSpace {
        ModuleSpace::new(AlgebraDescriptor::scalar(), rank).unwrap()
    }

    fn basis(space: &ModuleSpace, i: usize) -> ModuleVector<f64> {
        ModuleVector::standard_basis(space, i).unwrap()
    }

    fn diag_op(space: &ModuleSpace, values: &[f64]) -> ModuleOperator<f64> {
        let n = space.rank();
        let entries = (0..n * n)
            .map(|idx| {
                if idx / n == idx % n {
                    AlgebraElement::scalar(cplx(values[idx / n], 0.0))
                } else {
                    AlgebraElement::scalar(cplx(0.0, 0.0))
                }
            })
            .collect();
        ModuleOperator::from_entries(space.clone(), space.clone(), entries).unwrap()
    }

    #[test]
    fn standard_basis_is_parseval() {
        let space = scalar_space(3);
        let f = FrameSystem::build(
            space.clone(),
            (0..3).map(|i| basis(&space, i)).collect(),
        )
        .unwrap();
        let id = ModuleOperator::identity(&space);
        assert!(f.frame_operator().sub(&id).unwrap().uniform_norm() < 1e-14);
        let b = f.frame_bounds(1e-9);
        assert!(b.is_frame && b.tight && b.parseval);
    }

    #[test]
    fn duplicated_basis_vector_frame_operator() {
        // {e₁, e₁, e₂} over ℂ²: S = diag(2, 1), bounds (1, 2).
        let space = scalar_space(2);
        let f = FrameSystem::build(
            space.clone(),
            vec![basis(&space, 0), basis(&space, 0), basis(&space, 1)],
        )
        .unwrap();
        let expect = diag_op(&space, &[2.0, 1.0]);
        assert!(f.frame_operator().sub(&expect).unwrap().uniform_norm() < 1e-14);
        let b = f.frame_bounds(1e-9);
        assert!((b.lower - 1.0).abs() < 1e-12);
        assert!((b.upper - 2.0).abs() < 1e-12);
        assert!(b.is_frame && !b.tight);
    }

    #[test]
    fn single_zero_vector_is_bessel_only() {
        let space = scalar_space(2);
        let f = FrameSystem::build(space.clone(), vec![ModuleVector::zero(&space)]).unwrap();
        assert!(f.frame_operator().uniform_norm() < 1e-14);
        let b = f.frame_bounds(1e-9);
        assert!(!b.is_frame);
    }

    #[test]
    fn rank_deficient_family_is_bessel_not_frame() {
        let space = scalar_space(2);
        let f = FrameSystem::build(space.clone(), vec![basis(&space, 0)]).unwrap();
        let b = f.frame_bounds(1e-9);
        assert!(!b.is_frame);
        assert!((b.upper - 1.0).abs() < 1e-12);
        assert!(b.lower.abs() < 1e-12);
    }

    #[test]
    fn frame_operator_quadratic_form_matches_coefficient_energy() {
        let space = scalar_space(2);
        let f = FrameSystem::build(
            space.clone(),
            vec![basis(&space, 0), basis(&space, 0), basis(&space, 1)],
        )
        .unwrap();
        let mut rng = sampling::rng_from_seed(5);
        let xi: ModuleVector<f64> = sampling::gaussian_vector(&mut rng, &space);
        let mut energy = AlgebraElement::zero(space.descriptor());
        for v in f.vectors() {
            let c = xi.inner_product(v).unwrap();
            energy = energy.add(&c.mul(&c.adjoint()).unwrap()).unwrap();
        }
        let form = f
            .frame_operator()
            .apply(&xi)
            .unwrap()
            .inner_product(&xi)
            .unwrap();
        assert!(energy.sub(&form).unwrap().norm() < 1e-10);
    }

    #[test]
    fn kframe_check_projection_case() {
        // F = {e₁} in rank 2, K = diag(1,0): S = KK* = diag(1,0), A = B = 1.
        let space = scalar_space(2);
        let f = FrameSystem::build(space.clone(), vec![basis(&space, 0)]).unwrap();
        let k = diag_op(&space, &[1.0, 0.0]);
        match kframe_check(&f, &k, 1e-9).unwrap() {
            KFrameOutcome::KFrame(b) => {
                assert!((b.lower - 1.0).abs() < 1e-6);
                assert!((b.upper - 1.0).abs() < 1e-12);
            }
            other => panic!("expected K-frame, got {other:?}"),
        }
    }

    #[test]
    fn kframe_check_failure_produces_witness() {
        let space = scalar_space(2);
        let f = FrameSystem::build(space.clone(), vec![basis(&space, 0)]).unwrap();
        let id = ModuleOperator::identity(&space);
        match kframe_check(&f, &id, 1e-9).unwrap() {
            KFrameOutcome::NotKFrame { witness, deficiency } => {
                assert!(deficiency > 0.0);
                // the witness points along e₂ (the direction S misses)
                let w0 = witness.coord(0).norm();
                let w1 = witness.coord(1).norm();
                assert!(w1 > 0.9 && w0 < 1e-6, "witness ({w0}, {w1})");
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn kframe_with_identity_reduces_to_frame_bounds() {
        let space = scalar_space(2);
        let f = FrameSystem::build(
            space.clone(),
            vec![basis(&space, 0), basis(&space, 0), basis(&space, 1)],
        )
        .unwrap();
        let id = ModuleOperator::identity(&space);
        let b = match kframe_check(&f, &id, 1e-9).unwrap() {
            KFrameOutcome::KFrame(b) => b,
            other => panic!("expected K-frame, got {other:?}"),
        };
        assert!((b.lower - 1.0).abs() < 1e-6);
        assert!((b.upper - 2.0).abs() < 1e-12);
    }

    #[test]
    fn atomic_check_examples() {
        let space = scalar_space(2);
        // F spans only e₁: identity is out of reach
        let f = FrameSystem::build(space.clone(), vec![basis(&space, 0)]).unwrap();
        let id = ModuleOperator::identity(&space);
        match atomic_system_check(&f, &id, 1e-9).unwrap() {
            AtomicOutcome::NotAtomic { .. } => {}
            other => panic!("expected failure, got {other:?}"),
        }
        // K = 0 always works, with zero coefficients
        let zero = ModuleOperator::zero(&space, &space).unwrap();
        match atomic_system_check(&f, &zero, 1e-9).unwrap() {
            AtomicOutcome::Atomic(cert) => {
                assert!(cert.coefficient_map.uniform_norm() < 1e-12);
                assert!(cert.bound < 1e-12);
            }
            other => panic!("expected certificate, got {other:?}"),
        }
        // a frame is atomic for its own frame operator
        let g = FrameSystem::build(
            space.clone(),
            vec![basis(&space, 0), basis(&space, 0), basis(&space, 1)],
        )
        .unwrap();
        let s = g.frame_operator().clone();
        let out = atomic_system_check(&g, &s, 1e-9).unwrap();
        let cert = out.certificate().expect("frame operator is reachable");
        let recon = g
            .synthesis()
            .compose(&cert.coefficient_map)
            .unwrap()
            .sub(&s)
            .unwrap()
            .uniform_norm();
        assert!(recon < 1e-9);
    }

    #[test]
    fn atomic_coefficients_reconstruct_and_stale_certificate_errors() {
        let space = scalar_space(2);
        let f = FrameSystem::build(
            space.clone(),
            vec![basis(&space, 0), basis(&space, 0), basis(&space, 1)],
        )
        .unwrap();
        let s = f.frame_operator().clone();
        let cert = match atomic_system_check(&f, &s, 1e-9).unwrap() {
            AtomicOutcome::Atomic(c) => c,
            other => panic!("expected certificate, got {other:?}"),
        };
        let x = basis(&space, 0);
        let m = atomic_coefficients(&cert, &f, &x).unwrap();
        // Σᵢ mᵢ·ξᵢ = θ*(m) must equal S x
        let recon = f.synthesis().apply(&m).unwrap();
        let target = s.apply(&x).unwrap();
        assert!(recon.sub(&target).unwrap().norm() < 1e-9);
        // zero input gives zero coefficients
        let z = atomic_coefficients(&cert, &f, &ModuleVector::zero(&space)).unwrap();
        assert!(z.norm() < 1e-14);
        // a different frame invalidates the certificate
        let other = FrameSystem::build(space.clone(), vec![basis(&space, 1)]).unwrap();
        assert!(matches!(
            atomic_coefficients(&cert, &other, &x),
            Err(Error::StaleCertificate)
        ));
    }

    #[test]
    fn atomic_from_operator_identity_and_zero() {
        let space = scalar_space(2);
        let f = FrameSystem::build(
            space.clone(),
            vec![basis(&space, 0), basis(&space, 1)],
        )
        .unwrap();
        let id = ModuleOperator::identity(&space);
        let g = atomic_from_operator(&id, &f, 1e-9).unwrap();
        assert_eq!(g.fingerprint(), f.fingerprint());
        let zero = ModuleOperator::zero(&space, &space).unwrap();
        let z = atomic_from_operator(&zero, &f, 1e-9).unwrap();
        assert!(z.frame_operator().uniform_norm() < 1e-14);
        assert!(atomic_system_check(&z, &zero, 1e-9).unwrap().is_atomic());
        // non-Parseval source is rejected
        let skew = FrameSystem::build(
            space.clone(),
            vec![basis(&space, 0), basis(&space, 0), basis(&space, 1)],
        )
        .unwrap();
        assert!(matches!(
            atomic_from_operator(&id, &skew, 1e-9),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn kframe_from_frame_bounds() {
        let space = scalar_space(2);
        let f = FrameSystem::build(
            space.clone(),
            vec![basis(&space, 0), basis(&space, 0), basis(&space, 1)],
        )
        .unwrap();
        let id = ModuleOperator::identity(&space);
        let b = kframe_from_frame(&f, &id, 1e-9).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-12);
        assert!((b.upper - 2.0).abs() < 1e-12);
        // K = 2·Id: certified bound C/4, and the optimal equals it here
        let two = id.scale(cplx(2.0, 0.0));
        let b = kframe_from_frame(&f, &two, 1e-9).unwrap();
        assert!((b.lower - 0.25).abs() < 1e-12);
        match kframe_check(&f, &two, 1e-9).unwrap() {
            KFrameOutcome::KFrame(opt) => assert!((opt.lower - 0.25).abs() < 1e-6),
            other => panic!("expected K-frame, got {other:?}"),
        }
        // singular K is rejected
        let sing = diag_op(&space, &[1.0, 0.0]);
        assert!(matches!(
            kframe_from_frame(&f, &sing, 1e-9),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn kframe_transfer_scaling() {
        let space = scalar_space(2);
        let f = FrameSystem::build(
            space.clone(),
            vec![basis(&space, 0), basis(&space, 0), basis(&space, 1)],
        )
        .unwrap();
        let id = ModuleOperator::identity(&space);
        let base = match kframe_check(&f, &id, 1e-9).unwrap() {
            KFrameOutcome::KFrame(b) => b,
            other => panic!("expected K-frame, got {other:?}"),
        };
        // L = K: bound unchanged
        let same = kframe_transfer(&f, &id, &id, 1e-9).unwrap();
        assert!((same.lower - base.lower).abs() < 1e-6);
        // L = K/2: certified bound 4A
        let half = id.scale(cplx(0.5, 0.0));
        let t = kframe_transfer(&f, &id, &half, 1e-9).unwrap();
        assert!((t.lower - 4.0 * base.lower).abs() < 1e-5);
    }

    #[test]
    fn restricted_invertibility_examples() {
        let space = scalar_space(2);
        // K = identity: restricted minimum is the frame lower bound C
        let f = FrameSystem::build(
            space.clone(),
            vec![basis(&space, 0), basis(&space, 0), basis(&space, 1)],
        )
        .unwrap();
        let id = ModuleOperator::identity(&space);
        let r = restricted_invertibility(&f, &id, 1e-9).unwrap();
        assert!(r.passed());
        assert!((r.residuals["achieved_minimum"] - 1.0).abs() < 1e-6);
        // K = diag(1,0), F = {e₁}: 1×1 compression equal to 1
        let g = FrameSystem::build(space.clone(), vec![basis(&space, 0)]).unwrap();
        let k = diag_op(&space, &[1.0, 0.0]);
        let r = restricted_invertibility(&g, &k, 1e-9).unwrap();
        assert!(r.passed());
        assert!((r.residuals["achieved_minimum"] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn image_kframe_identity_and_rank_drop() {
        let space = scalar_space(2);
        let f = FrameSystem::build(
            space.clone(),
            vec![basis(&space, 0), basis(&space, 0), basis(&space, 1)],
        )
        .unwrap();
        let id = ModuleOperator::identity(&space);
        let r = image_kframe_check(&f, &id, &id, 1e-9).unwrap();
        assert!(r.passed());
        assert_eq!(r.residuals["image_is_kframe"], 1.0);
        assert_eq!(r.residuals["t_invertible"], 0.0);
        // T = diag(1,0) with full-rank K: the image cannot be a K-frame,
        // consistent with the surjectivity contrapositive (the implication
        // is vacuous, so the report itself still passes).
        let t = diag_op(&space, &[1.0, 0.0]);
        let r = image_kframe_check(&f, &id, &t, 1e-9).unwrap();
        assert_eq!(r.residuals["image_is_kframe"], 0.0);
        assert!(r.passed());
    }

    #[test]
    fn combined_atomic_reduces_to_single_operator() {
        let space = scalar_space(2);
        let f = FrameSystem::build(
            space.clone(),
            vec![basis(&space, 0), basis(&space, 0), basis(&space, 1)],
        )
        .unwrap();
        let s = f.frame_operator().clone();
        let zero = ModuleOperator::zero(&space, &space).unwrap();
        let r = combined_atomic_check(&f, &s, &zero, cplx(1.0, 0.0), cplx(0.0, 0.0), 1e-9).unwrap();
        assert!(r.passed());
        let r = combined_atomic_check(&f, &s, &zero, cplx(0.5, 0.25), cplx(3.0, 0.0), 1e-9).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn canonical_dual_reconstructs() {
        let space = scalar_space(2);
        let f = FrameSystem::build(
            space.clone(),
            vec![basis(&space, 0), basis(&space, 0), basis(&space, 1)],
        )
        .unwrap();
        let dual = f.canonical_dual(1e-9).unwrap();
        // Σᵢ ⟨ξ, S⁻¹ξᵢ⟩ ξᵢ = ξ: synthesis_F ∘ analysis_dual = Id
        let recon = f.synthesis().compose(dual.analysis()).unwrap();
        let id = ModuleOperator::identity(&space);
        assert!(recon.sub(&id).unwrap().uniform_norm() < 1e-10);
    }
}
