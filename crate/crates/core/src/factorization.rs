//! Generalized inverses and the Douglas factorization suite: existence,
//! solving T = LU, minimal majorization constants, the range-sum identity,
//! two-term factorization, and the order/seminorm equivalences.


use crate::algebra::{ramp_cutoff, AlgebraElement};
use crate::error::{Error, Result};
use crate::hilbert::{block_2x2, split_2x2, stack_domain, ModuleOperator, ModuleVector};
use crate::linalg;
use crate::report::VerificationReport;
use crate::sampling;
use crate::scalar::{real, to_f64, Real};

/// Relative singular-value cutoff for numerical rank and pseudoinverses:
/// σ ≤ cutoff·max(m,n)·σ_max counts as zero.
pub const RANK_CUTOFF_REL: f64 = 1e-10;

/// Solution of T = L·U with quality data.
#[derive(Debug, Clone)]
pub struct DouglasSolution<T: Real> {
    /// The factor U = L†T.
    pub factor: ModuleOperator<T>,
    /// ‖U‖∞; satisfies TT* ≤ (α + tol)² LL*.
    pub majorization_constant: T,
    /// max seminorm of L·U − T.
    pub residual: T,
}

/// Witness that p(αλ) ≤ p(βλ) fails for λ = f(α² − β²).
#[derive(Debug, Clone)]
pub struct OrderWitness<T: Real> {
    pub lambda: AlgebraElement<T>,
    /// First seminorm index where p(αλ) > p(βλ).
    pub seminorm_index: usize,
    /// p(αλ) − p(βλ) at that seminorm.
    pub margin: T,
}

/// Moore–Penrose pseudoinverse, computed blockwise by SVD of the scalar
/// representation with the standard cutoff. Always exists: every range is
/// closed in finite dimensions.
pub fn pseudoinverse<T: Real>(t: &ModuleOperator<T>) -> ModuleOperator<T> {
    let rel = real::<T>(RANK_CUTOFF_REL);
    let blocks: Vec<_> = t
        .scalar_representation()
        .iter()
        .map(|blk| linalg::pseudoinverse(blk, rel).0)
        .collect();
    ModuleOperator::from_scalar(t.codomain(), t.domain(), &blocks)
        .expect("pseudoinverse blocks conform by construction")
}

/// Numerical rank per representation block under the standard cutoff.
pub fn numerical_rank<T: Real>(t: &ModuleOperator<T>) -> Vec<usize> {
    let rel = real::<T>(RANK_CUTOFF_REL);
    t.scalar_representation()
        .iter()
        .map(|blk| linalg::numerical_rank(blk, rel))
        .collect()
}

/// True when every representation block has full row rank (the operator is
/// surjective under the cutoff).
pub fn has_full_row_rank<T: Real>(t: &ModuleOperator<T>) -> bool {
    t.scalar_representation()
        .iter()
        .zip(numerical_rank(t))
        .all(|(blk, r)| r == blk.nrows())
}

/// True when the square operator is invertible under the cutoff.
pub fn is_invertible<T: Real>(t: &ModuleOperator<T>) -> bool {
    t.is_square() && has_full_row_rank(t)
}

/// Residuals of the four Moore–Penrose conditions for a candidate
/// generalized inverse `g` of `t`.
pub fn mp_conditions_report<T: Real>(
    t: &ModuleOperator<T>,
    g: &ModuleOperator<T>,
    tol: T,
) -> Result<VerificationReport> {
    if g.domain() != t.codomain() || g.codomain() != t.domain() {
        return Err(Error::shape("candidate inverse has transposed shapes"));
    }
    let tg = t.compose(g)?; // T∘G on the codomain
    let gt = g.compose(t)?; // G∘T on the domain
    let c1 = tg.compose(t)?.sub(t)?.uniform_norm(); // TGT − T
    let c2 = gt.compose(g)?.sub(g)?.uniform_norm(); // GTG − G
    let c3 = tg.sub(&tg.adjoint())?.uniform_norm();
    let c4 = gt.sub(&gt.adjoint())?.uniform_norm();
    let scale = to_f64(tol) * (1.0 + to_f64(t.uniform_norm()));
    Ok(VerificationReport::builder("mp-conditions")
        .check("mp1_tgt", to_f64(c1), scale)
        .check("mp2_gtg", to_f64(c2), scale)
        .check("mp3_tg_selfadjoint", to_f64(c3), scale)
        .check("mp4_gt_selfadjoint", to_f64(c4), scale)
        .finish())
}

struct InclusionFailure {
    block: usize,
    column: usize,
    residual: f64,
}

/// Projector test for Ran(T) ⊆ Ran(L); returns the first violating column
/// of the scalar representation on failure.
fn range_inclusion_detail<T: Real>(
    t: &ModuleOperator<T>,
    l: &ModuleOperator<T>,
    tol: T,
) -> Result<Option<InclusionFailure>> {
    if t.codomain() != l.codomain() {
        return Err(Error::shape("range inclusion needs a common codomain"));
    }
    let rel = real::<T>(RANK_CUTOFF_REL);
    for (j, (rep_t, rep_l)) in t
        .scalar_representation()
        .iter()
        .zip(l.scalar_representation())
        .enumerate()
    {
        let proj = linalg::range_projector(&rep_l, rel);
        let defect = &proj * rep_t - rep_t;
        for c in 0..rep_t.ncols() {
            let col_norm = rep_t.column(c).norm();
            let res = defect.column(c).norm();
            if res > tol * (T::one() + col_norm) {
                return Ok(Some(InclusionFailure {
                    block: j,
                    column: c,
                    residual: to_f64(res),
                }));
            }
        }
    }
    Ok(None)
}

/// Ran(T) ⊆ Ran(L), decided by the projector test L·L†·T = T on the scalar
/// representation.
pub fn range_inclusion<T: Real>(
    t: &ModuleOperator<T>,
    l: &ModuleOperator<T>,
    tol: T,
) -> Result<bool> {
    Ok(range_inclusion_detail(t, l, tol)?.is_none())
}

/// Solve T = L·U for U = L†T. Errors with the violating column when
/// Ran(T) ⊄ Ran(L).
pub fn douglas_solve<T: Real>(
    t: &ModuleOperator<T>,
    l: &ModuleOperator<T>,
    tol: T,
) -> Result<DouglasSolution<T>> {
    if let Some(fail) = range_inclusion_detail(t, l, tol)? {
        return Err(Error::Unsolvable {
            block: fail.block,
            column: fail.column,
            residual: fail.residual,
        });
    }
    let factor = pseudoinverse(l).compose(t)?;
    let residual = l.compose(&factor)?.sub(t)?.uniform_norm();
    let majorization_constant = factor.uniform_norm();
    Ok(DouglasSolution {
        factor,
        majorization_constant,
        residual,
    })
}

/// Least α ≥ 0 with TT* ≤ α²LL*, by bisection on PSD tests of the scalar
/// representation. Errors when Ran(T) ⊄ Ran(L) (no finite α exists).
pub fn min_majorization_constant<T: Real>(
    t: &ModuleOperator<T>,
    l: &ModuleOperator<T>,
    tol: T,
) -> Result<T> {
    if let Some(fail) = range_inclusion_detail(t, l, tol)? {
        return Err(Error::Unsolvable {
            block: fail.block,
            column: fail.column,
            residual: fail.residual,
        });
    }
    let p: Vec<_> = t.times_adjoint().scalar_representation();
    let q: Vec<_> = l.times_adjoint().scalar_representation();
    let p_norm = p.iter().map(linalg::spectral_norm).fold(T::zero(), T::max);
    let q_norm = q.iter().map(linalg::spectral_norm).fold(T::zero(), T::max);
    let feasible = |alpha: T| -> bool {
        let a2 = alpha * alpha;
        let eps = real::<T>(1e-13) * (T::one() + p_norm + a2 * q_norm);
        p.iter().zip(&q) .all(|(pj, qj)| {
            let m = qj.map(|z| z * num_complex::Complex::new(a2, T::zero())) - pj;
            linalg::min_eigenvalue(&m) >= -eps
        })
    };
    if feasible(T::zero()) {
        return Ok(T::zero());
    }
    let mut hi = T::one();
    let cap = real::<T>(1e12);
    while !feasible(hi) {
        hi = hi + hi;
        if hi > cap {
            return Err(Error::Infeasible(
                "no majorization constant below the 1e12 cap".into(),
            ));
        }
    }
    let mut lo = T::zero();
    let atol = real::<T>(1e-8) * (T::one() + t.uniform_norm());
    while hi - lo > atol {
        let mid = (hi + lo) * real::<T>(0.5);
        if mid <= lo || mid >= hi {
            break; // float resolution exhausted
        }
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// √(TT* + LL*), the operator whose range is Ran(T) + Ran(L).
pub fn range_sum_root<T: Real>(
    t: &ModuleOperator<T>,
    l: &ModuleOperator<T>,
    tol: T,
) -> Result<ModuleOperator<T>> {
    if t.codomain() != l.codomain() {
        return Err(Error::shape("range sum needs a common codomain"));
    }
    t.times_adjoint().add(&l.times_adjoint())?.sqrt_psd(tol)
}

/// Verify Ran([T L]) = Ran(√(TT*+LL*)) by rank equality and mutual
/// projector inclusion on the scalar representations.
pub fn range_sum_check<T: Real>(
    t: &ModuleOperator<T>,
    l: &ModuleOperator<T>,
    tol: T,
) -> Result<VerificationReport> {
    let root = range_sum_root(t, l, tol)?;
    let concat = stack_domain(t, l)?;
    let rel = real::<T>(RANK_CUTOFF_REL);
    let mut rank_match = true;
    let mut incl_concat = 0.0f64;
    let mut incl_root = 0.0f64;
    for (rep_c, rep_r) in concat
        .scalar_representation()
        .iter()
        .zip(root.scalar_representation())
    {
        let rank_c = linalg::numerical_rank(rep_c, rel);
        let rank_r = linalg::numerical_rank(&rep_r, rel);
        rank_match &= rank_c == rank_r;
        let p_root = linalg::range_projector(&rep_r, rel);
        let p_concat = linalg::range_projector(rep_c, rel);
        incl_concat = incl_concat.max(to_f64(linalg::spectral_norm(&(&p_root * rep_c - rep_c))));
        incl_root = incl_root.max(to_f64(linalg::spectral_norm(&(&p_concat * &rep_r - &rep_r))));
    }
    let scale = 1e-8 * (1.0 + to_f64(concat.uniform_norm()));
    Ok(VerificationReport::builder("range-sum")
        .check_flag("rank_match", rank_match)
        .check("concat_in_root", incl_concat, scale)
        .check("root_in_concat", incl_root, scale)
        .finish())
}

/// Solve T = L₁U + L₂V through the 2×2 block construction
/// M = (T 0; 0 0), N = (L₁ L₂; 0 0), M = N·W.
pub fn two_term_douglas<T: Real>(
    t: &ModuleOperator<T>,
    l1: &ModuleOperator<T>,
    l2: &ModuleOperator<T>,
    tol: T,
) -> Result<(ModuleOperator<T>, ModuleOperator<T>)> {
    if !t.is_square() || t.domain() != l1.domain() || t.domain() != l2.domain()
        || !l1.is_square() || !l2.is_square()
    {
        return Err(Error::shape(
            "two-term factorization needs square operators on one space",
        ));
    }
    let root = range_sum_root(l1, l2, tol)?;
    if let Some(fail) = range_inclusion_detail(t, &root, tol)? {
        return Err(Error::Unsolvable {
            block: fail.block,
            column: fail.column,
            residual: fail.residual,
        });
    }
    let zero = ModuleOperator::zero(t.domain(), t.codomain())?;
    let m = block_2x2(t, &zero, &zero, &zero)?;
    let n = block_2x2(l1, l2, &zero, &zero)?;
    let w = douglas_solve(&m, &n, tol)?.factor;
    let rank = t.domain().rank();
    let (u, _, v, _) = split_2x2(&w, rank, rank)?;
    Ok((u, v))
}

/// Witness construction for the order lemma: if α² ≤ β² fails, the ramp
/// cutoff λ = f(α² − β²) violates p(αλ) ≤ p(βλ) at some seminorm; if it
/// holds, no λ can violate and `None` is returned.
pub fn order_violation_witness<T: Real>(
    alpha: &AlgebraElement<T>,
    beta: &AlgebraElement<T>,
    tol: T,
) -> Result<Option<OrderWitness<T>>> {
    if !alpha.is_positive(tol)? || !beta.is_positive(tol)? {
        return Err(Error::domain("order witness needs positive elements"));
    }
    let alpha2 = alpha.mul(alpha)?;
    let beta2 = beta.mul(beta)?;
    let diff = alpha2.sub(&beta2)?;
    let spectrum = diff.hermitian_spectrum(tol)?;
    let m = spectrum
        .iter()
        .flat_map(|block| block.iter().copied())
        .fold(T::zero(), T::max);
    let scale = T::one() + diff.norm();
    if m <= tol * scale {
        // α² ≤ β² within tolerance: the lemma promises no violating λ.
        return Ok(None);
    }
    let lambda = diff.functional_calculus(ramp_cutoff(m), tol)?;
    let p_alpha = alpha.mul(&lambda)?.seminorms();
    let p_beta = beta.mul(&lambda)?.seminorms();
    for j in 0..p_alpha.len() {
        let margin = p_alpha.get(j) - p_beta.get(j);
        if margin > T::zero() {
            return Ok(Some(OrderWitness {
                lambda,
                seminorm_index: j,
                margin,
            }));
        }
    }
    Err(Error::domain(
        "spectral gap found but no seminorm violation; inputs may be near the order boundary",
    ))
}

/// Decide TT* ≤ LL* and certify the equivalence with the seminorm
/// statement p̄(T*ξ) ≤ p̄(L*ξ): sampled ξ when the order holds, an
/// eigenvector witness when it fails.
pub fn order_seminorm_equivalence<T: Real>(
    t: &ModuleOperator<T>,
    l: &ModuleOperator<T>,
    tol: T,
) -> Result<VerificationReport> {
    if t.codomain() != l.codomain() {
        return Err(Error::shape("equivalence needs a common codomain"));
    }
    let diff = l.times_adjoint().sub(&t.times_adjoint())?;
    let psd = diff.is_positive(tol)?;
    let t_star = t.adjoint();
    let l_star = l.adjoint();
    // "order_holds" is the decided direction (1.0 = TT* ≤ LL*), not a gate;
    // what gets gated is the matching seminorm evidence for that direction.
    let builder = VerificationReport::builder("order-seminorm")
        .info("order_holds", if psd { 1.0 } else { 0.0 });
    if psd {
        let samples = sampling::sample_vectors::<T>(t.codomain(), 25, 0x5EED);
        let mut worst = T::zero();
        for xi in &samples {
            let pt = t_star.apply(xi)?.seminorms();
            let pl = l_star.apply(xi)?.seminorms();
            for j in 0..pt.len() {
                worst = worst.max(pt.get(j) - pl.get(j));
            }
        }
        let scale = to_f64(tol) * (1.0 + to_f64(l.uniform_norm()));
        Ok(builder
            .check("sampled_seminorm_violation", to_f64(worst), scale)
            .finish())
    } else {
        let (j, lambda_min, v) = diff.min_eigenpair()?;
        let xi = ModuleVector::from_scalar_column(t.codomain(), j, &v)?;
        let margin =
            t_star.apply(&xi)?.seminorms().get(j) - l_star.apply(&xi)?.seminorms().get(j);
        Ok(builder
            .check_flag("witness_violates_seminorm", margin > T::zero())
            .info("witness_margin", to_f64(margin))
            .info("min_eigenvalue", to_f64(lambda_min))
            .witness("xi", crate::io::vector_to_value(&xi))
            .finish())
    }
}
