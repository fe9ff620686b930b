use num_complex::Complex;

use super::hermitian::{CMatrix, Hermitian};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// A unitary `U` and the inner automorphism `a ↦ U a U*` it induces.
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary<T: Real> {
    u: CMatrix<T>,
}

impl<T: Real> Unitary<T> {
    pub fn new(u: CMatrix<T>) -> Result<Self> {
        if u.nrows() == 0 || !u.is_square() {
            return Err(Error::invalid("unitary must be a nonempty square matrix"));
        }
        let defect = unitarity_defect(&u);
        if !(defect <= T::tolerance(1e-10)) {
            return Err(Error::invalid(format!(
                "matrix is not unitary: ‖U*U − I‖ = {}",
                defect.as_f64()
            )));
        }
        Ok(Self { u })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            u: CMatrix::identity(n, n),
        }
    }

    /// `exp(iK)` for a Hermitian generator `K`.
    pub fn exp_i(k: &Hermitian<T>) -> Self {
        let (vals, vecs) = k.eigh();
        let n = k.dim();
        let mut phases = CMatrix::zeros(n, n);
        for (i, v) in vals.iter().enumerate() {
            phases[(i, i)] = Complex::new(v.cos(), v.sin());
        }
        Self {
            u: &vecs * phases * vecs.adjoint(),
        }
    }

    pub fn dim(&self) -> usize {
        self.u.nrows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.u
    }

    /// The inverse automorphism, `Ad_{U*}`.
    pub fn inverse(&self) -> Self {
        Self {
            u: self.u.adjoint(),
        }
    }

    /// `self ∘ other`, i.e. `Ad_{U V}`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::shape(self.dim(), other.dim()));
        }
        Ok(Self {
            u: &self.u * &other.u,
        })
    }

    /// `U a U*`.
    pub fn apply(&self, a: &Hermitian<T>) -> Result<Hermitian<T>> {
        a.conjugate_by(&self.u)
    }

    /// `U x U*` for an arbitrary square matrix.
    pub fn apply_matrix(&self, x: &CMatrix<T>) -> Result<CMatrix<T>> {
        if x.nrows() != self.dim() || x.ncols() != self.dim() {
            return Err(Error::shape(self.dim(), x.nrows()));
        }
        Ok(&self.u * x * self.u.adjoint())
    }

    pub fn defect(&self) -> T {
        unitarity_defect(&self.u)
    }
}

/// `‖U*U − I‖_F`.
pub fn unitarity_defect<T: Real>(u: &CMatrix<T>) -> T {
    let n = u.ncols();
    let g = u.adjoint() * u - CMatrix::<T>::identity(n, n);
    g.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn exp_of_pauli_generator() {
        let x = Hermitian::<f64>::from_real(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let u = Unitary::exp_i(&x.scale(std::f64::consts::FRAC_PI_2));
        // exp(iπ/2 σx) = i σx
        assert_abs_diff_eq!(u.matrix()[(0, 1)].im, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(u.matrix()[(0, 0)].norm(), 0.0, epsilon = 1e-14);
        assert!(u.defect() < 1e-13);
    }

    #[test]
    fn automorphism_preserves_norm_and_trace() {
        let k = Hermitian::<f64>::from_parts(
            &[vec![0.3, 0.1], vec![0.1, -0.2]],
            &[vec![0.0, 0.7], vec![-0.7, 0.0]],
        )
        .unwrap();
        let u = Unitary::exp_i(&k);
        let a = Hermitian::diagonal(&[2.0, -0.5]);
        let b = u.apply(&a).unwrap();
        assert_abs_diff_eq!(b.operator_norm(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b.trace(), 1.5, epsilon = 1e-12);
        let back = u.inverse().apply(&b).unwrap();
        assert!(back.max_abs_diff(&a) < 1e-12);
    }

    #[test]
    fn rejects_non_unitary() {
        let m = CMatrix::<f64>::identity(2, 2) * Complex::new(2.0, 0.0);
        assert!(Unitary::new(m).is_err());
    }
}
