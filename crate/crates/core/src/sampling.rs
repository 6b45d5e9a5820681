//! Deterministic Gaussian sampling of algebra elements, vectors and
//! operators. Used by the verification predicates (sampled inequalities)
//! and by the instance generators.

use nalgebra::DMatrix;
use num_complex::Complex;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{AlgebraDescriptor, AlgebraElement};
use crate::hilbert::{ModuleOperator, ModuleSpace, ModuleVector};
use crate::linalg::CMatrix;
use crate::scalar::{real, Real};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derive a sub-seed from a master seed and a textual context, so that
/// independent sweeps stay decorrelated but reproducible.
pub fn derive_seed(master: u64, context: &str, index: u64) -> u64 {
    let mut h = master ^ 0x9e37_79b9_7f4a_7c15;
    for b in context.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x100_0000_01b3);
    }
    h = h.wrapping_add(index.wrapping_mul(0xbf58_476d_1ce4_e5b9));
    // splitmix64 finalizer
    h = (h ^ (h >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    h = (h ^ (h >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    h ^ (h >> 31)
}

pub fn gaussian_complex<T: Real>(rng: &mut ChaCha8Rng) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(real(re), real(im))
}

pub fn gaussian_matrix<T: Real>(rng: &mut ChaCha8Rng, nrows: usize, ncols: usize) -> CMatrix<T> {
    // from_fn fills column-major; draw row-major for a stable layout.
    let mut data = Vec::with_capacity(nrows * ncols);
    for _ in 0..nrows * ncols {
        data.push(gaussian_complex(rng));
    }
    DMatrix::from_row_slice(nrows, ncols, &data)
}

pub fn gaussian_element<T: Real>(rng: &mut ChaCha8Rng, desc: &AlgebraDescriptor) -> AlgebraElement<T> {
    let blocks = desc
        .block_dims()
        .iter()
        .map(|&k| gaussian_matrix(rng, k, k))
        .collect();
    AlgebraElement::from_blocks(desc.clone(), blocks).expect("blocks conform by construction")
}

/// Random positive element ρρ* (+ tiny ridge to keep it strictly positive).
pub fn gaussian_positive_element<T: Real>(
    rng: &mut ChaCha8Rng,
    desc: &AlgebraDescriptor,
) -> AlgebraElement<T> {
    let g = gaussian_element::<T>(rng, desc);
    let p = g.mul(&g.adjoint()).expect("same descriptor");
    let ridge = AlgebraElement::one(desc).scale(crate::scalar::cplx(1e-6, 0.0));
    p.add(&ridge).expect("same descriptor")
}

pub fn gaussian_vector<T: Real>(rng: &mut ChaCha8Rng, space: &ModuleSpace) -> ModuleVector<T> {
    let coords = (0..space.rank())
        .map(|_| gaussian_element(rng, space.descriptor()))
        .collect();
    ModuleVector::from_coords(space.clone(), coords).expect("coords conform by construction")
}

pub fn gaussian_operator<T: Real>(
    rng: &mut ChaCha8Rng,
    domain: &ModuleSpace,
    codomain: &ModuleSpace,
) -> ModuleOperator<T> {
    let entries = (0..domain.rank() * codomain.rank())
        .map(|_| gaussian_element(rng, domain.descriptor()))
        .collect();
    ModuleOperator::from_entries(domain.clone(), codomain.clone(), entries)
        .expect("entries conform by construction")
}

/// A batch of sample vectors for sampled-inequality checks: Gaussian draws
/// plus the standard basis, so degenerate directions are never missed.
pub fn sample_vectors<T: Real>(
    space: &ModuleSpace,
    count: usize,
    seed: u64,
) -> Vec<ModuleVector<T>> {
    let mut rng = rng_from_seed(seed);
    let mut out: Vec<ModuleVector<T>> = (0..space.rank())
        .map(|i| ModuleVector::standard_basis(space, i).expect("index in range"))
        .collect();
    for _ in 0..count {
        out.push(gaussian_vector(&mut rng, space));
    }
    out
}
