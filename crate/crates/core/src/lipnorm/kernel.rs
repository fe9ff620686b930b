use nalgebra::DMatrix;
use rand::Rng;

use super::LipNorm;
use crate::error::{Error, Result};
use crate::matrix::random::{derive_seed, gaussian_vec, rng_from_seed};
use crate::matrix::{operator_norm, top_singular, CMatrix, Hermitian, HermitianBasis};
use crate::scalar::Real;

const THRESHOLD: f64 = 1e-8;
const STARTS: usize = 64;
const STEPS: usize = 200;

/// Outcome of [`kernel_check`].
#[derive(Clone, Debug)]
pub struct KernelCheck<T: Real> {
    /// `L` vanishes on `1` and only there.
    pub passed: bool,
    pub lip_of_unit: T,
    /// Certified lower bound on `min L` over the traceless unit sphere.
    pub min_lower: T,
    /// Smallest value of `L` found on the traceless unit sphere.
    pub min_upper: T,
    /// Unit traceless direction attaining `min_upper`, reported on failure.
    pub witness: Option<Hermitian<T>>,
}

/// Decides whether the kernel of `l` is exactly `ℝ1`.
///
/// With `Tᵢ` the images of the traceless basis and `G` their real Gram
/// matrix, `‖Σxᵢ Tᵢ‖ ≥ ‖Σxᵢ Tᵢ‖_F/√N ≥ √(λ_min(G)/N)` on the unit sphere.
/// If that certificate is inconclusive a 64-start projected subgradient
/// descent searches for the minimum.
pub fn kernel_check<T: Real>(l: &LipNorm<T>, basis: &HermitianBasis<T>) -> Result<KernelCheck<T>> {
    if basis.dim() != l.algebra_dim() {
        return Err(Error::shape(l.algebra_dim(), basis.dim()));
    }
    let n = basis.dim();
    let lip_of_unit = l.eval(&Hermitian::identity(n))?;
    let images: Vec<CMatrix<T>> = basis
        .traceless()
        .iter()
        .map(|e| l.image(e))
        .collect::<Result<_>>()?;
    let d = images.len();
    let scale = images
        .iter()
        .map(operator_norm)
        .collect::<Result<Vec<T>>>()?
        .into_iter()
        .fold(T::one(), |m, v| m.max(v));
    let unit_ok = lip_of_unit <= T::tolerance(1e-12) * scale;

    if d == 0 {
        return Ok(KernelCheck {
            passed: unit_ok,
            lip_of_unit,
            min_lower: T::zero(),
            min_upper: T::zero(),
            witness: None,
        });
    }

    let gram = DMatrix::from_fn(d, d, |i, j| real_inner(&images[i], &images[j]));
    let eig = gram.symmetric_eigen();
    let (kmin, lmin) = eig.eigenvalues.iter().enumerate().fold(
        (0, T::max_value().unwrap_or(T::one())),
        |(k, m), (i, v)| if *v < m { (i, *v) } else { (k, m) },
    );
    let rep = T::lit(l.rep_dim() as f64);
    let min_lower = (lmin.max(T::zero()) / rep).sqrt();
    let vmin: Vec<T> = eig.eigenvectors.column(kmin).iter().copied().collect();
    let f_vmin = combine_norm(&images, &vmin)?;
    let threshold = T::lit(THRESHOLD);

    let (min_upper, best) = if min_lower > threshold || f_vmin <= threshold {
        (f_vmin, vmin)
    } else {
        multistart(&images, vmin, f_vmin)?
    };
    let passed = unit_ok && min_upper > threshold;
    let witness = if passed {
        None
    } else {
        Some(basis_combination(basis, &best)?)
    };
    Ok(KernelCheck {
        passed,
        lip_of_unit,
        min_lower,
        min_upper,
        witness,
    })
}

fn real_inner<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    a.iter()
        .zip(b.iter())
        .fold(T::zero(), |s, (x, y)| s + x.re * y.re + x.im * y.im)
}

fn combine<T: Real>(images: &[CMatrix<T>], x: &[T]) -> CMatrix<T> {
    let mut m = CMatrix::zeros(images[0].nrows(), images[0].ncols());
    for (t, c) in images.iter().zip(x) {
        m += t * crate::matrix::cplx(*c, T::zero());
    }
    m
}

fn combine_norm<T: Real>(images: &[CMatrix<T>], x: &[T]) -> Result<T> {
    operator_norm(&combine(images, x))
}

fn normalize<T: Real>(x: &mut [T]) {
    let n = x.iter().fold(T::zero(), |s, v| s + *v * *v).sqrt();
    if n > T::zero() {
        x.iter_mut().for_each(|v| *v /= n);
    }
}

fn basis_combination<T: Real>(basis: &HermitianBasis<T>, x: &[T]) -> Result<Hermitian<T>> {
    Hermitian::linear_combination(x, basis.traceless())
}

/// Subgradient of `x ↦ ‖Σxᵢ Tᵢ‖`: `Re(u* Tᵢ v)` for a top singular pair.
fn subgradient<T: Real>(images: &[CMatrix<T>], m: CMatrix<T>) -> (T, Vec<T>) {
    let (s, u, v) = top_singular(&m);
    let g = images
        .iter()
        .map(|t| (u.adjoint() * t * &v)[(0, 0)].re)
        .collect();
    (s, g)
}

fn multistart<T: Real>(images: &[CMatrix<T>], vmin: Vec<T>, f_vmin: T) -> Result<(T, Vec<T>)> {
    let d = images.len();
    let mut best = (f_vmin, vmin.clone());
    for start in 0..STARTS {
        let mut x: Vec<T> = if start == 0 {
            vmin.clone()
        } else {
            let mut rng = rng_from_seed(derive_seed(0x6b65726e, "kernel", start as u64));
            let mut g: Vec<T> = gaussian_vec(&mut rng, d).into_iter().map(T::lit).collect();
            if rng.random_bool(0.5) {
                g.iter_mut()
                    .zip(&vmin)
                    .for_each(|(a, b)| *a += *b * T::lit(4.0));
            }
            g
        };
        normalize(&mut x);
        let mut step = T::lit(0.1);
        for _ in 0..STEPS {
            let (f, g) = subgradient(images, combine(images, &x));
            if f < best.0 {
                best = (f, x.clone());
            }
            if f <= T::lit(THRESHOLD) {
                return Ok(best);
            }
            // Project the subgradient onto the tangent space of the sphere.
            let radial = g.iter().zip(&x).fold(T::zero(), |s, (a, b)| s + *a * *b);
            let tangent: Vec<T> = g.iter().zip(&x).map(|(a, b)| *a - radial * *b).collect();
            let tn = tangent.iter().fold(T::zero(), |s, v| s + *v * *v).sqrt();
            if tn <= T::zero() {
                break;
            }
            x.iter_mut()
                .zip(&tangent)
                .for_each(|(a, t)| *a -= step * *t / tn);
            normalize(&mut x);
            step *= T::lit(0.97);
        }
        let f = combine_norm(images, &x)?;
        if f < best.0 {
            best = (f, x);
        }
    }
    Ok(best)
}
