use num_complex::Complex;

use super::hermitian::{cplx, Hermitian};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// A density matrix `ρ ⪰ 0` with `Tr ρ = 1`, representing the state `a ↦ Tr(ρa)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Density<T: Real> {
    rho: Hermitian<T>,
}

impl<T: Real> Density<T> {
    pub fn new(rho: Hermitian<T>) -> Result<Self> {
        let tol = T::tolerance(1e-10);
        let (lo, _) = rho.min_max_eigenvalues();
        if lo < -tol {
            return Err(Error::invalid(format!(
                "density matrix has negative eigenvalue {}",
                lo.as_f64()
            )));
        }
        let tr = rho.trace();
        if (tr - T::one()).abs() > tol {
            return Err(Error::invalid(format!(
                "density matrix has trace {}",
                tr.as_f64()
            )));
        }
        Ok(Self { rho })
    }

    /// Normalizes a positive semidefinite matrix by its trace.
    pub fn from_unnormalized(m: Hermitian<T>) -> Result<Self> {
        let tr = m.trace();
        if !(tr > T::zero()) {
            return Err(Error::invalid(
                "cannot normalize a matrix with nonpositive trace",
            ));
        }
        Self::new(m.scale(T::one() / tr))
    }

    pub fn maximally_mixed(n: usize) -> Self {
        let w = T::one() / T::lit(n as f64);
        Self {
            rho: Hermitian::identity(n).scale(w),
        }
    }

    /// Vector state of a (not necessarily normalized) nonzero vector.
    pub fn pure(v: &[Complex<T>]) -> Result<Self> {
        let norm = v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        if !(norm > T::zero()) {
            return Err(Error::invalid("pure state needs a nonzero vector"));
        }
        let unit: Vec<Complex<T>> = v.iter().map(|z| *z / cplx(norm, T::zero())).collect();
        Ok(Self {
            rho: Hermitian::outer(&unit),
        })
    }

    /// The vector state of the `k`-th standard basis vector of `ℂⁿ`.
    pub fn basis(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::invalid(format!(
                "basis index {k} out of range for dimension {n}"
            )));
        }
        let mut v = vec![cplx(T::zero(), T::zero()); n];
        v[k] = cplx(T::one(), T::zero());
        Self::pure(&v)
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    pub fn rho(&self) -> &Hermitian<T> {
        &self.rho
    }

    pub fn eval(&self, a: &Hermitian<T>) -> Result<T> {
        state_eval(self, a)
    }
}

/// `Tr(ρa)`. The imaginary part of the trace vanishes for Hermitian inputs and is discarded.
pub fn state_eval<T: Real>(rho: &Density<T>, a: &Hermitian<T>) -> Result<T> {
    if rho.dim() != a.dim() {
        return Err(Error::shape(rho.dim(), a.dim()));
    }
    Ok(rho.rho.inner(a))
}
