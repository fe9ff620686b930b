use std::ops::{Add, Neg, Sub};

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense complex matrix.
pub type CMatrix<T> = DMatrix<Complex<T>>;

pub(crate) fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

pub(crate) fn all_finite<T: Real>(m: &CMatrix<T>) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// `a ⊗ I_m`.
pub fn amplify<T: Real>(a: &CMatrix<T>, m: usize) -> CMatrix<T> {
    if m == 1 {
        return a.clone();
    }
    a.kronecker(&CMatrix::<T>::identity(m, m))
}

/// Largest singular value `s` with a unit pair `(u, v)`, `Mv = s·u`.
///
/// Computed from the Hermitian eigenproblem of `M*M`: the complex SVD loses
/// accuracy when singular values cluster, which is the typical case at the
/// boundary of a Lip-ball.
pub fn top_singular<T: Real>(m: &CMatrix<T>) -> (T, DVector<Complex<T>>, DVector<Complex<T>>) {
    let (rows, cols) = m.shape();
    let eig = (m.adjoint() * m).symmetric_eigen();
    let (k, top) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .fold(
            (0, T::zero()),
            |(k, best), (i, v)| if *v > best { (i, *v) } else { (k, best) },
        );
    let v = eig.eigenvectors.column(k).clone_owned();
    let mv = m * &v;
    let s = mv.norm();
    if s > T::zero() && top > T::zero() {
        return (s, mv.unscale(s), v);
    }
    let mut u = DVector::zeros(rows);
    if rows > 0 {
        u[0] = Complex::new(T::one(), T::zero());
    }
    let v = if cols > 0 { v } else { DVector::zeros(0) };
    (T::zero(), u, v)
}

/// Largest singular value of an arbitrary complex matrix.
pub fn operator_norm<T: Real>(m: &CMatrix<T>) -> Result<T> {
    if !all_finite(m) {
        return Err(Error::invalid("matrix has non-finite entries"));
    }
    if m.is_empty() {
        return Ok(T::zero());
    }
    let top = (m.adjoint() * m)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(T::zero(), |a, v| if v > a { v } else { a });
    Ok(top.sqrt())
}

/// Self-adjoint element of a matrix algebra.
///
/// Construction symmetrizes the input, `A ← (A + A*)/2`, so the stored
/// entries are Hermitian up to rounding of the average itself.
#[derive(Clone, Debug, PartialEq)]
pub struct Hermitian<T: Real> {
    m: CMatrix<T>,
}

impl<T: Real> Hermitian<T> {
    pub fn new(m: CMatrix<T>) -> Result<Self> {
        if m.nrows() == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        if !m.is_square() {
            return Err(Error::invalid(format!(
                "matrix is {}x{}, expected square",
                m.nrows(),
                m.ncols()
            )));
        }
        if !all_finite(&m) {
            return Err(Error::invalid("matrix has non-finite entries"));
        }
        Ok(Self::symmetrize(m))
    }

    pub(crate) fn symmetrize(m: CMatrix<T>) -> Self {
        let half = T::lit(0.5);
        let adj = m.adjoint();
        let m = (m + adj).map(|z| z * half);
        Self { m }
    }

    /// Builds from real and imaginary parts given row by row.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let n = re.len();
        if im.len() != n {
            return Err(Error::shape(n, im.len()));
        }
        let mut m = CMatrix::<T>::zeros(n, n);
        for i in 0..n {
            if re[i].len() != n {
                return Err(Error::shape(n, re[i].len()));
            }
            if im[i].len() != n {
                return Err(Error::shape(n, im[i].len()));
            }
            for j in 0..n {
                m[(i, j)] = cplx(T::lit(re[i][j]), T::lit(im[i][j]));
            }
        }
        Self::new(m)
    }

    pub fn from_real(rows: &[Vec<f64>]) -> Result<Self> {
        let zeros: Vec<Vec<f64>> = rows.iter().map(|r| vec![0.0; r.len()]).collect();
        Self::from_parts(rows, &zeros)
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            m: CMatrix::zeros(n, n),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            m: CMatrix::identity(n, n),
        }
    }

    pub fn diagonal(values: &[T]) -> Self {
        let n = values.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = cplx(*v, T::zero());
        }
        Self { m }
    }

    /// Rank-one projection `v v*` onto the span of a unit vector.
    pub(crate) fn outer(v: &[Complex<T>]) -> Self {
        let n = v.len();
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        Self::symmetrize(m)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix<T> {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.m
    }

    pub fn trace(&self) -> T {
        (0..self.dim()).fold(T::zero(), |acc, i| acc + self.m[(i, i)].re)
    }

    /// Real inner product `Re Tr(A B)`, the Hilbert-Schmidt product on `sa(𝔄)`.
    pub fn inner(&self, other: &Self) -> T {
        self.m
            .iter()
            .zip(other.m.iter())
            .fold(T::zero(), |acc, (a, b)| acc + a.re * b.re + a.im * b.im)
    }

    pub fn frobenius_norm(&self) -> T {
        self.inner(self).sqrt()
    }

    /// Eigenvalues in ascending order with the matching eigenvectors as columns.
    pub fn eigh(&self) -> (Vec<T>, CMatrix<T>) {
        let eig = self.m.clone().symmetric_eigen();
        let n = self.dim();
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&i, &j| {
            eig.eigenvalues[i]
                .partial_cmp(&eig.eigenvalues[j])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let values = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
        let mut vectors = CMatrix::zeros(n, n);
        for (k, &i) in idx.iter().enumerate() {
            vectors.set_column(k, &eig.eigenvectors.column(i));
        }
        (values, vectors)
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        let mut v: Vec<T> = self
            .m
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        v
    }

    pub fn min_max_eigenvalues(&self) -> (T, T) {
        let v = self.eigenvalues();
        (v[0], v[v.len() - 1])
    }

    /// `max |λ|`, the operator norm of a Hermitian matrix.
    pub fn operator_norm(&self) -> T {
        let (lo, hi) = self.min_max_eigenvalues();
        ComplexField::abs(lo).max(ComplexField::abs(hi))
    }

    pub fn scale(&self, t: T) -> Self {
        Self {
            m: self.m.map(|z| z * t),
        }
    }

    /// `a + t·1`.
    pub fn shift(&self, t: T) -> Self {
        let mut m = self.m.clone();
        for i in 0..self.dim() {
            m[(i, i)].re += t;
        }
        Self { m }
    }

    /// `Σ cᵢ Aᵢ` over matrices of a common dimension.
    pub fn linear_combination(coeffs: &[T], terms: &[Self]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::invalid("empty combination"))?;
        if coeffs.len() != terms.len() {
            return Err(Error::shape(terms.len(), coeffs.len()));
        }
        let n = first.dim();
        let mut m = CMatrix::zeros(n, n);
        for (c, t) in coeffs.iter().zip(terms) {
            if t.dim() != n {
                return Err(Error::shape(n, t.dim()));
            }
            if *c != T::zero() {
                m.zip_apply(&t.m, |acc, z| *acc += z * *c);
            }
        }
        Ok(Self { m })
    }

    /// Jordan product `(ab + ba)/2`.
    pub fn jordan(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let ab = &self.m * &other.m;
        let ba = &other.m * &self.m;
        Ok(Self::symmetrize((ab + ba).map(|z| z * T::lit(0.5))))
    }

    /// Lie product `(ab − ba)/2i`.
    pub fn lie(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let ab = &self.m * &other.m;
        let ba = &other.m * &self.m;
        let scale = cplx(T::zero(), T::lit(-0.5));
        Ok(Self::symmetrize((ab - ba).map(|z| z * scale)))
    }

    /// `U a U*` for an arbitrary square `U` of matching size.
    pub fn conjugate_by(&self, u: &CMatrix<T>) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::shape(self.dim(), u.nrows()));
        }
        Ok(Self::symmetrize(u * &self.m * u.adjoint()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.m
            .iter()
            .zip(other.m.iter())
            .fold(T::zero(), |acc, (a, b)| {
                acc.max((*a - *b).norm_sqr().sqrt())
            })
    }

    pub(crate) fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::shape(self.dim(), other.dim()));
        }
        Ok(())
    }

    pub fn to_f64(&self) -> Hermitian<f64> {
        Hermitian {
            m: self.m.map(|z| Complex::new(z.re.as_f64(), z.im.as_f64())),
        }
    }

    pub fn from_f64(other: &Hermitian<f64>) -> Self {
        Self {
            m: other.m.map(|z| cplx(T::lit(z.re), T::lit(z.im))),
        }
    }
}

impl<T: Real> Add for &Hermitian<T> {
    type Output = Hermitian<T>;
    fn add(self, rhs: Self) -> Hermitian<T> {
        Hermitian {
            m: &self.m + &rhs.m,
        }
    }
}

impl<T: Real> Sub for &Hermitian<T> {
    type Output = Hermitian<T>;
    fn sub(self, rhs: Self) -> Hermitian<T> {
        Hermitian {
            m: &self.m - &rhs.m,
        }
    }
}

impl<T: Real> Neg for &Hermitian<T> {
    type Output = Hermitian<T>;
    fn neg(self) -> Hermitian<T> {
        Hermitian { m: -&self.m }
    }
}

/// Operator norm of a Hermitian matrix (`max |λ|`).
pub fn hermitian_norm<T: Real>(a: &Hermitian<T>) -> T {
    a.operator_norm()
}

/// `λ_max − λ_min`, which equals `sup |φ(a) − ψ(a)|` over pairs of states.
pub fn spectral_spread<T: Real>(a: &Hermitian<T>) -> T {
    let (lo, hi) = a.min_max_eigenvalues();
    let s = hi - lo;
    if s < T::zero() {
        T::zero()
    } else {
        s
    }
}

/// Shifts `a` by the central element minimizing `‖a − t·1‖`, i.e. `t = (λ_max + λ_min)/2`.
pub fn central_normalize<T: Real>(a: &Hermitian<T>) -> Hermitian<T> {
    let (lo, hi) = a.min_max_eigenvalues();
    a.shift(-(lo + hi) * T::lit(0.5))
}
