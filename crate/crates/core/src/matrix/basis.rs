use super::algebra::AlgebraSpec;
use super::hermitian::{cplx, CMatrix, Hermitian};
use super::state::Density;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Orthonormal basis of `sa(𝔄)` for `⟨A, B⟩ = Tr(A*B)`.
///
/// The first element is `1/√n`; the rest are traceless.
#[derive(Clone, Debug)]
pub struct HermitianBasis<T: Real> {
    dim: usize,
    elements: Vec<Hermitian<T>>,
}

impl<T: Real> HermitianBasis<T> {
    /// Basis of the full matrix algebra `M_n` (`n²` elements).
    pub fn full(n: usize) -> Result<Self> {
        Self::for_algebra(&AlgebraSpec::full(n)?)
    }

    /// Basis of the block-diagonal self-adjoint matrices of `algebra`.
    pub fn for_algebra(algebra: &AlgebraSpec) -> Result<Self> {
        let n = algebra.total_dim();
        let mut elements = Vec::with_capacity(algebra.real_dim());
        elements.push(Hermitian::identity(n).scale(T::one() / T::lit(n as f64).sqrt()));

        // Generalized Gell-Mann diagonals: (1, …, 1, −k, 0, …)/√(k(k+1)).
        for k in 1..n {
            let w = T::one() / T::lit((k * (k + 1)) as f64).sqrt();
            let mut d = vec![T::zero(); n];
            for v in d.iter_mut().take(k) {
                *v = w;
            }
            d[k] = -T::lit(k as f64) * w;
            elements.push(Hermitian::diagonal(&d));
        }

        let r = T::one() / T::lit(2.0).sqrt();
        for (off, size) in algebra.block_ranges() {
            for i in off..off + size {
                for j in i + 1..off + size {
                    let mut s = CMatrix::zeros(n, n);
                    s[(i, j)] = cplx(r, T::zero());
                    s[(j, i)] = cplx(r, T::zero());
                    elements.push(Hermitian::symmetrize(s));
                    let mut a = CMatrix::zeros(n, n);
                    a[(i, j)] = cplx(T::zero(), r);
                    a[(j, i)] = cplx(T::zero(), -r);
                    elements.push(Hermitian::symmetrize(a));
                }
            }
        }
        debug_assert_eq!(elements.len(), algebra.real_dim());
        Ok(Self { dim: n, elements })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Hermitian<T>] {
        &self.elements
    }

    /// The traceless part of the basis (everything but `1/√n`).
    pub fn traceless(&self) -> &[Hermitian<T>] {
        &self.elements[1..]
    }

    pub fn coords(&self, a: &Hermitian<T>) -> Result<Vec<T>> {
        if a.dim() != self.dim {
            return Err(Error::shape(self.dim, a.dim()));
        }
        Ok(self.elements.iter().map(|e| e.inner(a)).collect())
    }

    pub fn reconstruct(&self, coords: &[T]) -> Result<Hermitian<T>> {
        Hermitian::linear_combination(coords, &self.elements)
    }

    /// Orthonormal basis of the hyperplane `{a : Tr(ρa) = 0}` inside the span.
    ///
    /// For the maximally mixed state this is exactly the traceless part.
    pub fn slice(&self, state: &Density<T>) -> Result<Vec<Hermitian<T>>> {
        if state.dim() != self.dim {
            return Err(Error::shape(self.dim, state.dim()));
        }
        let p: Vec<T> = self.elements.iter().map(|e| e.inner(state.rho())).collect();
        let norm = p.iter().fold(T::zero(), |acc, x| acc + *x * *x).sqrt();
        let d = p.len();
        let mut v: Vec<T> = p.iter().map(|x| *x / norm).collect();
        v[0] -= T::one();
        let vv = v.iter().fold(T::zero(), |acc, x| acc + *x * *x);
        if vv <= T::tolerance(1e-28) {
            return Ok(self.traceless().to_vec());
        }
        // Householder reflection exchanging e₀ and p/‖p‖; its other columns span p⊥.
        let two = T::lit(2.0);
        let mut out = Vec::with_capacity(d - 1);
        for k in 1..d {
            let coeffs: Vec<T> = (0..d)
                .map(|i| {
                    let delta = if i == k { T::one() } else { T::zero() };
                    delta - two * v[i] * v[k] / vv
                })
                .collect();
            out.push(self.reconstruct(&coeffs)?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_orthonormal(elems: &[Hermitian<f64>]) {
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((a.inner(b) - expected).abs() < 1e-12, "({i},{j})");
            }
        }
    }

    #[test]
    fn full_basis_is_orthonormal() {
        for n in 1..=4 {
            let b = HermitianBasis::<f64>::full(n).unwrap();
            assert_eq!(b.len(), n * n);
            assert_orthonormal(b.elements());
            for e in b.traceless() {
                assert!(e.trace().abs() < 1e-14);
            }
        }
    }

    #[test]
    fn block_basis_stays_in_mask() {
        let alg = AlgebraSpec::new(vec![2, 1]).unwrap();
        let b = HermitianBasis::<f64>::for_algebra(&alg).unwrap();
        assert_eq!(b.len(), 5);
        assert_orthonormal(b.elements());
        assert!(b.elements().iter().all(|e| alg.contains(e, 0.0)));
    }

    #[test]
    fn slice_is_orthogonal_to_state() {
        let alg = AlgebraSpec::full(3).unwrap();
        let b = HermitianBasis::<f64>::for_algebra(&alg).unwrap();
        let rho = Density::basis(3, 1).unwrap();
        let s = b.slice(&rho).unwrap();
        assert_eq!(s.len(), 8);
        assert_orthonormal(&s);
        for e in &s {
            assert!(rho.eval(e).unwrap().abs() < 1e-13);
        }
        let mm = b.slice(&Density::maximally_mixed(3)).unwrap();
        assert!(mm
            .iter()
            .zip(b.traceless())
            .all(|(x, y)| x.max_abs_diff(y) == 0.0));
    }
}
