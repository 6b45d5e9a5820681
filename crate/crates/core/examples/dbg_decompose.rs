use blockframe::factorization::{pseudoinverse, range_inclusion, numerical_rank};
use blockframe::frames::{kframe_check, FrameSystem};
use blockframe::hilbert::ModuleOperator;
use blockframe::linalg::CMatrix;
use blockframe::oracles::{generate, Generated, GeneratorKind, InstanceSpec};
use blockframe::sampling::{derive_seed, rng_from_seed, gaussian_matrix};
use blockframe::verify::shape_for;
use num_complex::Complex;

fn main() {
    for idx in 0..25u64 {
        let seed = derive_seed(7, "sum-decompose", idx);
        let pair_spec = {
            let (blocks, rank, frame_size) = shape_for(seed);
            InstanceSpec::new(derive_seed(seed, "pair", 0), blocks, rank, frame_size, GeneratorKind::KframePair)
        };
        let (f, k) = match generate::<f64>(&pair_spec).unwrap() {
            Generated::KframePair { frame, k } => (frame, k),
            _ => unreachable!(),
        };
        let coeff = f.coefficient_space().clone();
        let p = {
            let mut rng = rng_from_seed(derive_seed(seed, "P", 0));
            let blocks: Vec<CMatrix<f64>> = coeff.descriptor().block_dims().iter().map(|&kd| {
                use rand::Rng;
                let dim = coeff.rank() * kd;
                let g = gaussian_matrix::<f64>(&mut rng, dim, dim);
                let u = g.qr().q();
                let mut lam = CMatrix::<f64>::zeros(dim, dim);
                for i in 0..dim { lam[(i,i)] = Complex::new(rng.random_range(0.5..=1.5), 0.0); }
                blockframe::linalg::symmetrize(&(&u * lam * u.adjoint()))
            }).collect();
            ModuleOperator::from_scalar(&coeff, &coeff, &blocks).unwrap()
        };
        let g = FrameSystem::from_synthesis(&f.synthesis().compose(&p).unwrap()).unwrap();
        let s1 = f.frame_operator();
        let s2 = g.frame_operator();
        let r1 = s1.sqrt_psd(1e-9).unwrap();
        let r2 = s2.sqrt_psd(1e-9).unwrap();
        let fk = kframe_check(&f, &k, 1e-9).unwrap().is_kframe();
        let gk = kframe_check(&g, &k, 1e-9).unwrap().is_kframe();
        let root = blockframe::factorization::range_sum_root(&r1, &r2, 1e-9).unwrap();
        let incl = range_inclusion(&k, &root, 1e-9).unwrap();
        let incl1 = range_inclusion(&k, &r1, 1e-9).unwrap();
        println!("idx {idx} fk={fk} gk={gk} incl_root={incl} incl_r1={incl1} ranks_s1={:?} ranks_root={:?} ranks_k={:?}",
            numerical_rank(s1), numerical_rank(&root), numerical_rank(&k));
        if !incl {
            let s1rank = numerical_rank(s1);
            let dagk = pseudoinverse(&k);
            println!("   norms s1={:.3} s2={:.3} k={:.3} kdag={:.3}", s1.uniform_norm(), s2.uniform_norm(), k.uniform_norm(), dagk.uniform_norm());
            let _ = s1rank;
        }
    }
}
