//! Seeded test-instance generation.
//!
//! Every generator draws from `ChaCha8Rng::seed_from_u64(seed)` and standard
//! normal variates from `rand_distr`, so a seed reproduces the same matrices
//! on every platform.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::algebra::AlgebraSpec;
use super::hermitian::{cplx, CMatrix, Hermitian};
use super::state::Density;
use super::unitary::Unitary;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mixes a base seed with a stream tag and an index (splitmix64 finalizer).
pub fn derive_seed(seed: u64, tag: &str, index: u64) -> u64 {
    let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
    for b in tag.bytes().chain(index.to_le_bytes()) {
        h = splitmix(h ^ b as u64);
    }
    h
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn gaussian_vec<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect()
}

fn gaussian_matrix<T: Real, R: Rng>(rng: &mut R, n: usize, scale: f64) -> CMatrix<T> {
    CMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        cplx(T::lit(re * scale), T::lit(im * scale))
    })
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    Ok(())
}

pub fn random_hermitian<T: Real>(seed: u64, dim: usize, scale: f64) -> Result<Hermitian<T>> {
    check_dim(dim)?;
    if !(scale > 0.0) {
        return Err(Error::invalid("scale must be positive"));
    }
    let mut rng = rng_from_seed(seed);
    Ok(Hermitian::symmetrize(gaussian_matrix(&mut rng, dim, scale)))
}

pub fn random_state<T: Real>(seed: u64, dim: usize) -> Result<Density<T>> {
    check_dim(dim)?;
    let mut rng = rng_from_seed(seed);
    let g = gaussian_matrix::<T, _>(&mut rng, dim, 1.0);
    Density::from_unnormalized(Hermitian::symmetrize(&g * g.adjoint()))
}

pub fn random_unitary<T: Real>(seed: u64, dim: usize) -> Result<Unitary<T>> {
    check_dim(dim)?;
    let mut rng = rng_from_seed(seed);
    let g = gaussian_matrix::<T, _>(&mut rng, dim, 1.0);
    Unitary::new(orthonormalize_columns(g))
}

/// Modified Gram-Schmidt with one re-orthogonalization pass.
fn orthonormalize_columns<T: Real>(mut m: CMatrix<T>) -> CMatrix<T> {
    let n = m.ncols();
    for j in 0..n {
        for _ in 0..2 {
            for k in 0..j {
                let proj: Complex<T> = m.column(k).dotc(&m.column(j));
                let ck = m.column(k).clone_owned();
                m.column_mut(j)
                    .axpy(-proj, &ck, Complex::new(T::one(), T::zero()));
            }
        }
        let norm = m.column(j).norm();
        m.column_mut(j).unscale_mut(norm);
    }
    m
}

/// Random element of the block-diagonal self-adjoint part of `algebra`.
pub fn random_hermitian_in<T: Real>(
    algebra: &AlgebraSpec,
    seed: u64,
    scale: f64,
) -> Result<Hermitian<T>> {
    let h = random_hermitian(seed, algebra.total_dim(), scale)?;
    algebra.project(&h)
}

/// Random faithful state of `algebra` (block-diagonal density matrix).
pub fn random_state_in<T: Real>(algebra: &AlgebraSpec, seed: u64) -> Result<Density<T>> {
    let s = random_state::<T>(seed, algebra.total_dim())?;
    Density::from_unnormalized(algebra.project(s.rho())?)
}

/// Random pure state of `algebra`: a unit vector supported in one block.
pub fn random_pure_state_in<T: Real>(algebra: &AlgebraSpec, seed: u64) -> Result<Density<T>> {
    let mut rng = rng_from_seed(seed);
    let n = algebra.total_dim();
    let pick = rng.random_range(0..n);
    let block = algebra.block_of(pick);
    let (off, size) = algebra.block_ranges().nth(block).expect("block exists");
    let mut v = vec![cplx(T::zero(), T::zero()); n];
    for z in v.iter_mut().skip(off).take(size) {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *z = cplx(T::lit(re), T::lit(im));
    }
    Density::pure(&v)
}

/// Random unitary that maps `algebra` onto itself (block-diagonal unitary).
pub fn random_unitary_in<T: Real>(algebra: &AlgebraSpec, seed: u64) -> Result<Unitary<T>> {
    let n = algebra.total_dim();
    let mut u = CMatrix::<T>::zeros(n, n);
    for (k, (off, size)) in algebra.block_ranges().enumerate() {
        let b = random_unitary::<T>(derive_seed(seed, "block", k as u64), size)?;
        u.view_mut((off, off), (size, size)).copy_from(b.matrix());
    }
    Unitary::new(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn states_are_valid_and_deterministic() {
        for seed in 0..20u64 {
            for n in 1..=5 {
                let s = random_state::<f64>(seed, n).unwrap();
                let (lo, _) = s.rho().min_max_eigenvalues();
                assert!(lo >= -1e-10);
                assert!((s.rho().trace() - 1.0).abs() < 1e-10);
            }
        }
        let a = random_hermitian::<f64>(7, 4, 1.0).unwrap();
        let b = random_hermitian::<f64>(7, 4, 1.0).unwrap();
        assert_eq!(a, b);
        let c = random_hermitian::<f64>(8, 4, 1.0).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn unitaries_are_unitary() {
        for seed in 0..20u64 {
            for n in 1..=6 {
                let u = random_unitary::<f64>(seed, n).unwrap();
                assert!(u.defect() < 1e-10);
            }
        }
        assert_eq!(
            random_unitary::<f64>(3, 3).unwrap(),
            random_unitary::<f64>(3, 3).unwrap()
        );
    }

    #[test]
    fn dimension_zero_is_rejected() {
        assert!(random_hermitian::<f64>(0, 0, 1.0).is_err());
        assert!(random_state::<f64>(0, 0).is_err());
        assert!(random_unitary::<f64>(0, 0).is_err());
        assert!(random_hermitian::<f64>(0, 2, 0.0).is_err());
    }

    #[test]
    fn algebra_aware_generators_respect_blocks() {
        let alg = AlgebraSpec::new(vec![2, 1]).unwrap();
        for seed in 0..10 {
            assert!(alg.contains(&random_hermitian_in::<f64>(&alg, seed, 1.0).unwrap(), 0.0));
            assert!(alg.contains(random_state_in::<f64>(&alg, seed).unwrap().rho(), 0.0));
            assert!(alg.contains(
                random_pure_state_in::<f64>(&alg, seed).unwrap().rho(),
                1e-15
            ));
            let u = random_unitary_in::<f64>(&alg, seed).unwrap();
            let a = random_hermitian_in::<f64>(&alg, seed + 100, 1.0).unwrap();
            assert!(alg.contains(&u.apply(&a).unwrap(), 1e-14));
        }
    }

    #[test]
    fn derived_seeds_differ_by_tag_and_index() {
        assert_ne!(derive_seed(1, "a", 0), derive_seed(1, "b", 0));
        assert_ne!(derive_seed(1, "a", 0), derive_seed(1, "a", 1));
        assert_eq!(derive_seed(1, "a", 3), derive_seed(1, "a", 3));
    }
}
