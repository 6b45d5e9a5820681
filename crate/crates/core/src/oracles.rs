//! Independent ground truth: brute-force checkers and certified instance
//! generators used by the verification suites and tests.
//!
//! The checkers here deliberately take different routes than the main code
//! paths (least squares via normal equations instead of pseudoinverse
//! projectors; a self-contained bisection with its own bracket) so that
//! agreement between the two is meaningful evidence rather than a
//! tautology. Shared ground is limited to basic eigendecomposition.

use nalgebra::Cholesky;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::{kframe_check, FrameSystem, KFrameOutcome};
use crate::hilbert::{ModuleOperator, ModuleSpace};
use crate::linalg::{self, CMatrix};
use crate::sampling::{self, rng_from_seed};
use crate::scalar::{real, Real};

/// Deterministic description of a generated instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub seed: u64,
    /// Block dimensions of the coefficient algebra.
    pub blocks: Vec<usize>,
    /// Module rank n.
    pub rank: usize,
    /// Number of frame vectors N.
    pub frame_size: usize,
    pub kind: GeneratorKind,
    /// Singular-value range for generated operators.
    #[serde(default = "default_spectral")]
    pub spectral: (f64, f64),
}

fn default_spectral() -> (f64, f64) {
    (0.5, 2.0)
}

impl InstanceSpec {
    pub fn new(seed: u64, blocks: Vec<usize>, rank: usize, frame_size: usize, kind: GeneratorKind) -> Self {
        InstanceSpec {
            seed,
            blocks,
            rank,
            frame_size,
            kind,
            spectral: default_spectral(),
        }
    }

    pub fn space(&self) -> Result<ModuleSpace> {
        ModuleSpace::new(crate::algebra::AlgebraDescriptor::new(self.blocks.clone())?, self.rank)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    Operator,
    PositiveOperator,
    Frame,
    ParsevalFrame,
    KframePair,
    OrthogonalParsevalPair,
    CommutingPositive,
}

/// A generated, checker-certified instance.
#[derive(Debug, Clone)]
pub enum Generated<T: Real> {
    Operator(ModuleOperator<T>),
    PositiveOperator(ModuleOperator<T>),
    Frame(FrameSystem<T>),
    ParsevalFrame(FrameSystem<T>),
    KframePair {
        frame: FrameSystem<T>,
        k: ModuleOperator<T>,
    },
    OrthogonalParsevalPair {
        f: FrameSystem<T>,
        g: FrameSystem<T>,
        k: ModuleOperator<T>,
    },
    CommutingPositive {
        frame: FrameSystem<T>,
        k: ModuleOperator<T>,
        t: ModuleOperator<T>,
    },
}

// ----------------------------------------------------------- psd bisection

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BisectMode {
    /// Least c ≥ 0 with c·Q − P PSD.
    LeastUpper,
    /// Greatest c ≥ 0 with P − c·Q PSD.
    GreatestLower,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BisectOutcome<T> {
    Finite(T),
    /// The constant exceeds the 1e12 cap (direction infeasible or
    /// unconstrained).
    Infinite,
}

impl<T: Real> BisectOutcome<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            BisectOutcome::Finite(c) => Some(c),
            BisectOutcome::Infinite => None,
        }
    }
}

/// Smallest positive eigenvalue of a PSD operator's representation, over
/// all blocks; `None` when the operator vanishes.
fn min_positive_eigenvalue<T: Real>(reps: &[CMatrix<T>]) -> Option<T> {
    let norm = reps.iter().map(linalg::spectral_norm).fold(T::zero(), T::max);
    if norm.is_zero() {
        return None;
    }
    let floor = real::<T>(1e-12) * norm;
    let mut best: Option<T> = None;
    for rep in reps {
        for v in linalg::hermitian_eigenvalues(rep) {
            if v > floor && best.is_none_or(|b| v < b) {
                best = Some(v);
            }
        }
    }
    best
}

/// Bisection for extremal PSD constants between a positive pair (P, Q).
/// Never throws on infeasibility: the outcome is `Infinite` instead.
pub fn bisect_psd_constant<T: Real>(
    p: &ModuleOperator<T>,
    q: &ModuleOperator<T>,
    mode: BisectMode,
    _tol: T,
) -> Result<BisectOutcome<T>> {
    if p.domain() != q.domain() || p.codomain() != q.codomain() || !p.is_square() {
        return Err(Error::shape("bisection needs square operators on one space"));
    }
    let rep_p = p.scalar_representation();
    let rep_q = q.scalar_representation();
    let p_norm = rep_p.iter().map(linalg::spectral_norm).fold(T::zero(), T::max);
    let q_norm = rep_q.iter().map(linalg::spectral_norm).fold(T::zero(), T::max);
    let cap = real::<T>(1e12);

    let feasible = |c: T| -> bool {
        // keep eps at rounding scale: a coefficient large enough to
        // absorb eigensolver noise, small enough that a genuine O(1)
        // deficit stays infeasible all the way to the bracket cap
        let eps = real::<T>(1e-13) * (T::one() + p_norm + c * q_norm);
        rep_p.iter().zip(&rep_q).all(|(pj, qj)| {
            let m = match mode {
                BisectMode::LeastUpper => qj.map(|z| z * Complex::new(c, T::zero())) - pj,
                BisectMode::GreatestLower => pj - qj.map(|z| z * Complex::new(c, T::zero())),
            };
            linalg::min_eigenvalue(&m) >= -eps
        })
    };

    let atol = real::<T>(1e-8) * (T::one() + p_norm);
    match mode {
        BisectMode::LeastUpper => {
            if feasible(T::zero()) {
                return Ok(BisectOutcome::Finite(T::zero()));
            }
            let lambda_floor = min_positive_eigenvalue(&rep_q).unwrap_or_else(|| real(1e-12));
            let mut hi = (p_norm + T::one()) / lambda_floor.max(real(1e-12));
            while !feasible(hi) {
                hi = hi + hi;
                if hi > cap {
                    return Ok(BisectOutcome::Infinite);
                }
            }
            let mut lo = T::zero();
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
            Ok(BisectOutcome::Finite(hi))
        }
        BisectMode::GreatestLower => {
            if !feasible(T::zero()) {
                // P itself is not PSD: no lower constant exists.
                return Ok(BisectOutcome::Finite(T::zero()));
            }
            let mut hi = T::one();
            while feasible(hi) {
                hi = hi + hi;
                if hi > cap {
                    return Ok(BisectOutcome::Infinite);
                }
            }
            let mut lo = T::zero();
            while hi - lo > atol {
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
            Ok(BisectOutcome::Finite(lo))
        }
    }
}

// ------------------------------------------------- least-squares inclusion

/// Range-inclusion oracle: per column of rep(T), minimum-norm least squares
/// against rep(L) via normal equations with a ridge fallback.
pub fn lstsq_range_inclusion<T: Real>(
    t: &ModuleOperator<T>,
    l: &ModuleOperator<T>,
    tol: T,
) -> Result<bool> {
    if t.codomain() != l.codomain() {
        return Err(Error::shape("range inclusion needs a common codomain"));
    }
    for (rep_t, rep_l) in t
        .scalar_representation()
        .iter()
        .zip(l.scalar_representation())
    {
        let gram = rep_l.adjoint() * &rep_l;
        let solver = match Cholesky::new(gram.clone()) {
            Some(ch) => ch,
            None => {
                let ridge = real::<T>(1e-12) * (T::one() + gram.norm());
                let ridged = &gram
                    + CMatrix::<T>::identity(gram.nrows(), gram.ncols())
                        .map(|z| z * Complex::new(ridge, T::zero()));
                Cholesky::new(ridged).ok_or_else(|| {
                    Error::domain("normal equations not factorizable even with ridge")
                })?
            }
        };
        for c in 0..rep_t.ncols() {
            let col = rep_t.column(c).into_owned();
            let rhs = rep_l.adjoint() * &col;
            let x = solver.solve(&rhs);
            let residual = (&rep_l * x - &col).norm();
            if residual > tol * (T::one() + col.norm()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Ridge-regularized pseudoinverse (T*T + εσ²I)⁻¹T*, the small-ε limit of
/// which is the Moore–Penrose inverse. Used as the uniqueness oracle
/// against the SVD construction; solved per block via Cholesky.
pub fn ridge_pseudoinverse<T: Real>(
    t: &ModuleOperator<T>,
    eps_rel: f64,
) -> Result<ModuleOperator<T>> {
    let blocks = t
        .scalar_representation()
        .iter()
        .map(|a| {
            let sigma_max = linalg::spectral_norm(a);
            let eps = real::<T>(eps_rel) * (sigma_max * sigma_max + T::one());
            let gram = a.adjoint() * a
                + CMatrix::<T>::identity(a.ncols(), a.ncols())
                    .map(|z| z * Complex::new(eps, T::zero()));
            let chol = Cholesky::new(gram)
                .ok_or_else(|| Error::domain("ridge gram matrix not positive definite"))?;
            Ok(chol.solve(&a.adjoint()))
        })
        .collect::<Result<Vec<_>>>()?;
    ModuleOperator::from_scalar(t.codomain(), t.domain(), &blocks)
}

// -------------------------------------------------------------- generators

fn uniform_in<T: Real>(rng: &mut rand_chacha::ChaCha8Rng, lo: f64, hi: f64) -> T {
    use rand::Rng;
    real(rng.random_range(lo..=hi))
}

/// Random unitary per block via QR of a Gaussian matrix.
fn random_unitary<T: Real>(rng: &mut rand_chacha::ChaCha8Rng, dim: usize) -> CMatrix<T> {
    let g = sampling::gaussian_matrix::<T>(rng, dim, dim);
    g.qr().q()
}

/// Operator with singular values drawn from `spectral` on every block.
fn random_operator_in_range<T: Real>(
    rng: &mut rand_chacha::ChaCha8Rng,
    domain: &ModuleSpace,
    codomain: &ModuleSpace,
    spectral: (f64, f64),
) -> Result<ModuleOperator<T>> {
    let dims = domain.descriptor().block_dims();
    let blocks: Vec<CMatrix<T>> = dims
        .iter()
        .map(|&k| {
            let (rows, cols) = (codomain.rank() * k, domain.rank() * k);
            let u = random_unitary::<T>(rng, rows);
            let v = random_unitary::<T>(rng, cols);
            let mut sigma = CMatrix::<T>::zeros(rows, cols);
            for i in 0..rows.min(cols) {
                sigma[(i, i)] = Complex::new(uniform_in(rng, spectral.0, spectral.1), T::zero());
            }
            u * sigma * v.adjoint()
        })
        .collect();
    ModuleOperator::from_scalar(domain, codomain, &blocks)
}

/// Positive definite operator with spectrum in `spectral`.
fn random_positive_operator<T: Real>(
    rng: &mut rand_chacha::ChaCha8Rng,
    space: &ModuleSpace,
    spectral: (f64, f64),
) -> Result<ModuleOperator<T>> {
    let dims = space.descriptor().block_dims();
    let blocks: Vec<CMatrix<T>> = dims
        .iter()
        .map(|&k| {
            let dim = space.rank() * k;
            let u = random_unitary::<T>(rng, dim);
            let mut lam = CMatrix::<T>::zeros(dim, dim);
            for i in 0..dim {
                lam[(i, i)] = Complex::new(uniform_in(rng, spectral.0, spectral.1), T::zero());
            }
            linalg::symmetrize(&(&u * lam * u.adjoint()))
        })
        .collect();
    ModuleOperator::from_scalar(space, space, &blocks)
}

fn coefficient_space(space: &ModuleSpace, frame_size: usize) -> Result<ModuleSpace> {
    ModuleSpace::new(space.descriptor().clone(), frame_size)
}

fn random_frame<T: Real>(
    rng: &mut rand_chacha::ChaCha8Rng,
    space: &ModuleSpace,
    frame_size: usize,
    spectral: (f64, f64),
) -> Result<FrameSystem<T>> {
    if frame_size < space.rank() {
        return Err(Error::Infeasible(format!(
            "a frame of {} vectors cannot span rank {}",
            frame_size,
            space.rank()
        )));
    }
    let coeff = coefficient_space(space, frame_size)?;
    let synthesis = random_operator_in_range::<T>(rng, &coeff, space, spectral)?;
    let frame = FrameSystem::from_synthesis(&synthesis)?;
    if !frame.frame_bounds(real(1e-9)).is_frame {
        return Err(Error::Infeasible("generated family is not a frame".into()));
    }
    Ok(frame)
}

fn random_parseval_frame<T: Real>(
    rng: &mut rand_chacha::ChaCha8Rng,
    space: &ModuleSpace,
    frame_size: usize,
) -> Result<FrameSystem<T>> {
    if frame_size < space.rank() {
        return Err(Error::Infeasible(format!(
            "a Parseval frame of {} vectors cannot span rank {}",
            frame_size,
            space.rank()
        )));
    }
    let coeff = coefficient_space(space, frame_size)?;
    let dims = space.descriptor().block_dims();
    let blocks: Vec<CMatrix<T>> = dims
        .iter()
        .map(|&k| {
            let (rows, cols) = (space.rank() * k, frame_size * k);
            let g = sampling::gaussian_matrix::<T>(rng, rows, cols);
            let (u, _, v_t) = linalg::svd_parts(&g);
            // row-orthonormal: U · (leading rows of Vᴴ)
            u * v_t.rows(0, rows).into_owned()
        })
        .collect();
    let synthesis = ModuleOperator::from_scalar(&coeff, space, &blocks)?;
    let frame = FrameSystem::from_synthesis(&synthesis)?;
    if !frame.frame_bounds(real(1e-9)).parseval {
        return Err(Error::Infeasible("generated family is not Parseval".into()));
    }
    Ok(frame)
}

/// K-frame pair with a (generally rank-deficient) frame operator: the
/// family spans a random subspace per block and K maps into it.
fn random_kframe_pair<T: Real>(
    rng: &mut rand_chacha::ChaCha8Rng,
    space: &ModuleSpace,
    frame_size: usize,
    spectral: (f64, f64),
) -> Result<(FrameSystem<T>, ModuleOperator<T>)> {
    use rand::Rng;
    let dims = space.descriptor().block_dims();
    let coeff = coefficient_space(space, frame_size)?;
    let mut synth_blocks = Vec::with_capacity(dims.len());
    let mut k_blocks = Vec::with_capacity(dims.len());
    for &kdim in dims {
        let dim = space.rank() * kdim;
        let support = rng.random_range(1..=dim.min(frame_size * kdim));
        let q = random_unitary::<T>(rng, dim);
        let basis = q.columns(0, support).into_owned();
        // synthesis rows span exactly the support
        let b = sampling::gaussian_matrix::<T>(rng, support, frame_size * kdim);
        let scale = Complex::new(real::<T>(spectral.1), T::zero());
        synth_blocks.push(&basis * b.map(|z| z * scale));
        let c = sampling::gaussian_matrix::<T>(rng, support, dim);
        k_blocks.push(&basis * c);
    }
    let synthesis = ModuleOperator::from_scalar(&coeff, space, &synth_blocks)?;
    let frame = FrameSystem::from_synthesis(&synthesis)?;
    let k = ModuleOperator::from_scalar(space, space, &k_blocks)?;
    match kframe_check(&frame, &k, real(1e-9))? {
        KFrameOutcome::KFrame(_) => Ok((frame, k)),
        KFrameOutcome::NotKFrame { .. } => {
            Err(Error::Infeasible("generated pair failed the K-frame check".into()))
        }
    }
}

/// Two Parseval K-frames for one K with orthogonal syntheses: the shared
/// block √(KK*) occupies disjoint coefficient columns.
fn random_orthogonal_parseval_pair<T: Real>(
    rng: &mut rand_chacha::ChaCha8Rng,
    space: &ModuleSpace,
    frame_size: usize,
    spectral: (f64, f64),
) -> Result<(FrameSystem<T>, FrameSystem<T>, ModuleOperator<T>)> {
    if frame_size < 2 * space.rank() {
        return Err(Error::Infeasible(format!(
            "orthogonal Parseval pair needs frame size ≥ {}, got {}",
            2 * space.rank(),
            frame_size
        )));
    }
    let k = random_operator_in_range::<T>(rng, space, space, spectral)?;
    let coeff = coefficient_space(space, frame_size)?;
    let dims = space.descriptor().block_dims();
    let mut f_blocks = Vec::with_capacity(dims.len());
    let mut g_blocks = Vec::with_capacity(dims.len());
    for (j, &kdim) in dims.iter().enumerate() {
        let dim = space.rank() * kdim;
        let kk = &k.scalar_representation()[j] * k.scalar_representation()[j].adjoint();
        let root = linalg::hermitian_map(&kk, |x| x.max(T::zero()).sqrt());
        let mut f_blk = CMatrix::<T>::zeros(dim, frame_size * kdim);
        let mut g_blk = CMatrix::<T>::zeros(dim, frame_size * kdim);
        f_blk.view_mut((0, 0), (dim, dim)).copy_from(&root);
        g_blk.view_mut((0, dim), (dim, dim)).copy_from(&root);
        f_blocks.push(f_blk);
        g_blocks.push(g_blk);
    }
    let f = FrameSystem::from_synthesis(&ModuleOperator::from_scalar(&coeff, space, &f_blocks)?)?;
    let g = FrameSystem::from_synthesis(&ModuleOperator::from_scalar(&coeff, space, &g_blocks)?)?;
    // certify: Parseval-K (S = KK*) and orthogonality of the syntheses
    let kk = k.times_adjoint();
    let scale = T::one() + kk.uniform_norm();
    let res_f = f.frame_operator().sub(&kk)?.uniform_norm() / scale;
    let res_g = g.frame_operator().sub(&kk)?.uniform_norm() / scale;
    let cross = f.synthesis().compose(g.analysis())?.uniform_norm();
    if res_f > real(1e-10) || res_g > real(1e-10) || cross > real::<T>(1e-10) * scale {
        return Err(Error::Infeasible(
            "generated pair failed the Parseval/orthogonality certification".into(),
        ));
    }
    Ok((f, g, k))
}

/// K-frame plus a positive perturbation commuting with the frame operator
/// (a quadratic polynomial in S with nonnegative coefficients).
fn random_commuting_positive<T: Real>(
    rng: &mut rand_chacha::ChaCha8Rng,
    space: &ModuleSpace,
    frame_size: usize,
    spectral: (f64, f64),
) -> Result<(FrameSystem<T>, ModuleOperator<T>, ModuleOperator<T>)> {
    let (frame, k) = random_kframe_pair::<T>(rng, space, frame_size, spectral)?;
    let s = frame.frame_operator();
    let c0: T = uniform_in(rng, 0.0, 1.0);
    let c1: T = uniform_in(rng, 0.0, 1.0);
    let c2: T = uniform_in(rng, 0.0, 0.5);
    let t = ModuleOperator::identity(space)
        .scale(Complex::new(c0, T::zero()))
        .add(&s.scale(Complex::new(c1, T::zero())))?
        .add(&s.compose(s)?.scale(Complex::new(c2, T::zero())))?;
    if !t.is_positive(real(1e-9))? {
        return Err(Error::Infeasible("perturbation polynomial is not positive".into()));
    }
    let commute = t.compose(s)?.sub(&s.compose(&t)?)?.uniform_norm();
    if commute > real::<T>(1e-9) * (T::one() + t.uniform_norm() * s.uniform_norm()) {
        return Err(Error::Infeasible("perturbation does not commute".into()));
    }
    Ok((frame, k, t))
}

/// Generate a certified instance. Identical spec (including seed) gives an
/// identical instance.
pub fn generate<T: Real>(spec: &InstanceSpec) -> Result<Generated<T>> {
    let mut rng = rng_from_seed(spec.seed);
    let space = spec.space()?;
    match spec.kind {
        GeneratorKind::Operator => Ok(Generated::Operator(random_operator_in_range(
            &mut rng,
            &space,
            &space,
            spec.spectral,
        )?)),
        GeneratorKind::PositiveOperator => Ok(Generated::PositiveOperator(
            random_positive_operator(&mut rng, &space, spec.spectral)?,
        )),
        GeneratorKind::Frame => Ok(Generated::Frame(random_frame(
            &mut rng,
            &space,
            spec.frame_size,
            spec.spectral,
        )?)),
        GeneratorKind::ParsevalFrame => Ok(Generated::ParsevalFrame(random_parseval_frame(
            &mut rng,
            &space,
            spec.frame_size,
        )?)),
        GeneratorKind::KframePair => {
            let (frame, k) = random_kframe_pair(&mut rng, &space, spec.frame_size, spec.spectral)?;
            Ok(Generated::KframePair { frame, k })
        }
        GeneratorKind::OrthogonalParsevalPair => {
            let (f, g, k) =
                random_orthogonal_parseval_pair(&mut rng, &space, spec.frame_size, spec.spectral)?;
            Ok(Generated::OrthogonalParsevalPair { f, g, k })
        }
        GeneratorKind::CommutingPositive => {
            let (frame, k, t) =
                random_commuting_positive(&mut rng, &space, spec.frame_size, spec.spectral)?;
            Ok(Generated::CommutingPositive { frame, k, t })
        }
    }
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
    fn bisection_diagonal_cases() {
        let space = scalar_space(2);
        let p = diag_op(&space, &[4.0, 1.0]);
        let q = diag_op(&space, &[1.0, 1.0]);
        let least = bisect_psd_constant(&p, &q, BisectMode::LeastUpper, 1e-9)
            .unwrap()
            .finite()
            .unwrap();
        assert!((least - 4.0).abs() < 1e-6);
        let same = bisect_psd_constant(&p, &p, BisectMode::LeastUpper, 1e-9)
            .unwrap()
            .finite()
            .unwrap();
        assert!((same - 1.0).abs() < 1e-6);
        let glb = bisect_psd_constant(&p, &p, BisectMode::GreatestLower, 1e-9)
            .unwrap()
            .finite()
            .unwrap();
        assert!((glb - 1.0).abs() < 1e-6);
        let zero = ModuleOperator::zero(&space, &space).unwrap();
        let z = bisect_psd_constant(&zero, &q, BisectMode::LeastUpper, 1e-9)
            .unwrap()
            .finite()
            .unwrap();
        assert!(z.abs() < 1e-7);
        // infeasible direction: P has range outside Ran(Q)
        let q_def = diag_op(&space, &[1.0, 0.0]);
        let inf = bisect_psd_constant(&p, &q_def, BisectMode::LeastUpper, 1e-9).unwrap();
        assert_eq!(inf, BisectOutcome::Infinite);
    }

    #[test]
    fn lstsq_inclusion_matches_obvious_cases() {
        let space = scalar_space(2);
        let id = ModuleOperator::<f64>::identity(&space);
        let rank1 = diag_op(&space, &[1.0, 0.0]);
        assert!(lstsq_range_inclusion(&rank1, &rank1, 1e-8).unwrap());
        assert!(lstsq_range_inclusion(&rank1, &id, 1e-8).unwrap());
        assert!(!lstsq_range_inclusion(&id, &rank1, 1e-8).unwrap());
    }

    #[test]
    fn generators_are_deterministic() {
        let spec = InstanceSpec::new(42, vec![2, 1], 2, 4, GeneratorKind::Frame);
        let a = match generate::<f64>(&spec).unwrap() {
            Generated::Frame(f) => f,
            _ => unreachable!(),
        };
        let b = match generate::<f64>(&spec).unwrap() {
            Generated::Frame(f) => f,
            _ => unreachable!(),
        };
        assert_eq!(a.fingerprint(), b.fingerprint());
        assert_eq!(
            crate::io::frame_to_value(&a),
            crate::io::frame_to_value(&b)
        );
    }

    #[test]
    fn parseval_generator_certifies() {
        let spec = InstanceSpec::new(7, vec![2], 2, 4, GeneratorKind::ParsevalFrame);
        let f = match generate::<f64>(&spec).unwrap() {
            Generated::ParsevalFrame(f) => f,
            _ => unreachable!(),
        };
        let b = f.frame_bounds(1e-9);
        assert!(b.parseval);
    }

    #[test]
    fn infeasible_spec_is_a_generation_error() {
        let spec = InstanceSpec::new(1, vec![2], 4, 2, GeneratorKind::Frame);
        assert!(matches!(
            generate::<f64>(&spec),
            Err(Error::Infeasible(_))
        ));
    }
}
