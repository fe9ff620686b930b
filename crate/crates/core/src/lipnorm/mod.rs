//! Lip-norm families built from Dirac-type operators.

mod admissible;
mod gamma;
mod kernel;

pub use admissible::AdmissibleF;
pub use gamma::gamma_matrices;
pub use kernel::{kernel_check, KernelCheck};

use nalgebra::ComplexField;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{amplify, hermitian_norm, operator_norm, CMatrix, Hermitian};
use crate::scalar::Real;

fn one() -> usize {
    1
}

fn is_one(m: &usize) -> bool {
    *m == 1
}

/// Seminorm on self-adjoint matrices, tagged by `variant` in JSON.
///
/// The representation is `π(a) = a ⊗ I_m` with `m = amplification`, so `d`
/// (and `omega`) act on a space of dimension `n·m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", bound = "")]
pub enum LipNorm<T: Real> {
    /// `‖[D, π(a)]‖`.
    DiracCommutator {
        d: Hermitian<T>,
        #[serde(default = "one", skip_serializing_if = "is_one")]
        amplification: usize,
    },
    /// `‖[D + ω, π(a)]‖`.
    Perturbed {
        d: Hermitian<T>,
        omega: Hermitian<T>,
        #[serde(default = "one", skip_serializing_if = "is_one")]
        amplification: usize,
    },
    /// `‖D_h π(a) − π(h² a h⁻²) D_h‖` with `D_h = π(h) D π(h)`.
    Conformal {
        d: Hermitian<T>,
        h: Hermitian<T>,
        #[serde(default = "one", skip_serializing_if = "is_one")]
        amplification: usize,
    },
    /// `‖Σ_j Σ_k H[k][j] i[X_k, a] ⊗ γ_j‖` on `Cⁿ ⊗ C^g`.
    Curved {
        generators: Vec<Hermitian<T>>,
        coefficients: Vec<Vec<f64>>,
    },
    /// `λ · inner(a)`.
    Scaled { lambda: f64, inner: Box<LipNorm<T>> },
}

impl<T: Real> LipNorm<T> {
    pub fn dirac(d: Hermitian<T>) -> Self {
        LipNorm::DiracCommutator {
            d,
            amplification: 1,
        }
    }

    pub fn dirac_amplified(d: Hermitian<T>, amplification: usize) -> Result<Self> {
        let l = LipNorm::DiracCommutator { d, amplification };
        l.validate()?;
        Ok(l)
    }

    pub fn perturbed(d: Hermitian<T>, omega: Hermitian<T>) -> Result<Self> {
        let l = LipNorm::Perturbed {
            d,
            omega,
            amplification: 1,
        };
        l.validate()?;
        Ok(l)
    }

    pub fn conformal(d: Hermitian<T>, h: Hermitian<T>) -> Result<Self> {
        let l = LipNorm::Conformal {
            d,
            h,
            amplification: 1,
        };
        l.validate()?;
        Ok(l)
    }

    pub fn curved(generators: Vec<Hermitian<T>>, coefficients: Vec<Vec<f64>>) -> Result<Self> {
        let l = LipNorm::Curved {
            generators,
            coefficients,
        };
        l.validate()?;
        Ok(l)
    }

    pub fn scaled(lambda: f64, inner: LipNorm<T>) -> Result<Self> {
        let l = LipNorm::Scaled {
            lambda,
            inner: Box::new(inner),
        };
        l.validate()?;
        Ok(l)
    }

    /// Dimension `n` of the matrices the seminorm is defined on.
    pub fn algebra_dim(&self) -> usize {
        match self {
            LipNorm::DiracCommutator { d, amplification }
            | LipNorm::Perturbed {
                d, amplification, ..
            }
            | LipNorm::Conformal {
                d, amplification, ..
            } => d.dim() / (*amplification).max(1),
            LipNorm::Curved { generators, .. } => generators.first().map_or(0, |x| x.dim()),
            LipNorm::Scaled { inner, .. } => inner.algebra_dim(),
        }
    }

    /// Dimension of the space the image operator acts on.
    pub fn rep_dim(&self) -> usize {
        match self {
            LipNorm::DiracCommutator { d, .. }
            | LipNorm::Perturbed { d, .. }
            | LipNorm::Conformal { d, .. } => d.dim(),
            LipNorm::Curved { generators, .. } => self.algebra_dim() << (generators.len() / 2),
            LipNorm::Scaled { inner, .. } => inner.rep_dim(),
        }
    }

    /// Checks every structural requirement of the variant.
    pub fn validate(&self) -> Result<()> {
        match self {
            LipNorm::DiracCommutator { d, amplification } => check_amplification(d, *amplification),
            LipNorm::Perturbed {
                d,
                omega,
                amplification,
            } => {
                check_amplification(d, *amplification)?;
                if omega.dim() != d.dim() {
                    return Err(Error::shape(d.dim(), omega.dim()));
                }
                Ok(())
            }
            LipNorm::Conformal {
                d,
                h,
                amplification,
            } => {
                check_amplification(d, *amplification)?;
                if h.dim() * amplification != d.dim() {
                    return Err(Error::shape(d.dim() / amplification, h.dim()));
                }
                inverse_square(h).map(|_| ())
            }
            LipNorm::Curved {
                generators,
                coefficients,
            } => {
                let m = generators.len();
                if m == 0 {
                    return Err(Error::invalid(
                        "curved Lip-norm needs at least one generator",
                    ));
                }
                let n = generators[0].dim();
                for x in generators {
                    if x.dim() != n {
                        return Err(Error::shape(n, x.dim()));
                    }
                    let scale = T::one().max(x.operator_norm());
                    if ComplexField::abs(x.trace()) > T::tolerance(1e-10) * scale {
                        return Err(Error::invalid("curved generators must be traceless"));
                    }
                }
                if coefficients.len() != m || coefficients.iter().any(|row| row.len() != m) {
                    return Err(Error::invalid(format!(
                        "coefficient matrix must be {m}x{m}"
                    )));
                }
                if coefficients.iter().flatten().any(|c| !c.is_finite()) {
                    return Err(Error::invalid("coefficient matrix has non-finite entries"));
                }
                let h = nalgebra::DMatrix::from_fn(m, m, |i, j| coefficients[i][j]);
                let sv = h.svd(false, false).singular_values;
                let (lo, hi) = sv.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &s| {
                    (lo.min(s), hi.max(s))
                });
                if lo <= 1e-12 * hi.max(1.0) {
                    return Err(Error::Singular(
                        "coefficient matrix is not invertible".into(),
                    ));
                }
                Ok(())
            }
            LipNorm::Scaled { lambda, inner } => {
                if !(lambda.is_finite() && *lambda > 0.0) {
                    return Err(Error::invalid(format!(
                        "scale must be positive, got {lambda}"
                    )));
                }
                inner.validate()
            }
        }
    }

    /// The operator whose norm is `L(a)`; linear in `a`.
    pub fn image(&self, a: &Hermitian<T>) -> Result<CMatrix<T>> {
        let n = self.algebra_dim();
        if a.dim() != n {
            return Err(Error::shape(n, a.dim()));
        }
        match self {
            LipNorm::DiracCommutator { d, amplification } => Ok(commutator(
                d.as_matrix(),
                &amplify(a.as_matrix(), *amplification),
            )),
            LipNorm::Perturbed {
                d,
                omega,
                amplification,
            } => {
                let dw = d.as_matrix() + omega.as_matrix();
                Ok(commutator(&dw, &amplify(a.as_matrix(), *amplification)))
            }
            LipNorm::Conformal {
                d,
                h,
                amplification,
            } => {
                let m = *amplification;
                let ph = amplify(h.as_matrix(), m);
                let dh = &ph * d.as_matrix() * &ph;
                let h2 = h.as_matrix() * h.as_matrix();
                let sigma = &h2 * a.as_matrix() * inverse_square(h)?;
                Ok(&dh * amplify(a.as_matrix(), m) - amplify(&sigma, m) * &dh)
            }
            LipNorm::Curved {
                generators,
                coefficients,
            } => {
                let m = generators.len();
                let i = crate::matrix::cplx(T::zero(), T::one());
                let derivs: Vec<CMatrix<T>> = generators
                    .iter()
                    .map(|x| commutator(x.as_matrix(), a.as_matrix()) * i)
                    .collect();
                let gammas = gamma_matrices::<T>(m);
                let g = gammas[0].nrows();
                let mut out = CMatrix::zeros(n * g, n * g);
                for (j, gamma) in gammas.iter().enumerate() {
                    let mut s = CMatrix::zeros(n, n);
                    for (k, dk) in derivs.iter().enumerate() {
                        let c = coefficients[k][j];
                        if c != 0.0 {
                            s += dk * crate::matrix::cplx(T::lit(c), T::zero());
                        }
                    }
                    out += s.kronecker(gamma);
                }
                Ok(out)
            }
            LipNorm::Scaled { lambda, inner } => {
                Ok(inner.image(a)? * crate::matrix::cplx(T::lit(*lambda), T::zero()))
            }
        }
    }

    /// `L(a)`.
    pub fn eval(&self, a: &Hermitian<T>) -> Result<T> {
        operator_norm(&self.image(a)?)
    }
}

fn check_amplification<T: Real>(d: &Hermitian<T>, m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::invalid("amplification must be at least 1"));
    }
    if !d.dim().is_multiple_of(m) {
        return Err(Error::invalid(format!(
            "Dirac dimension {} is not a multiple of amplification {m}",
            d.dim()
        )));
    }
    Ok(())
}

fn commutator<T: Real>(x: &CMatrix<T>, y: &CMatrix<T>) -> CMatrix<T> {
    x * y - y * x
}

/// `h⁻²` via the spectral decomposition; errors when `h` is numerically singular.
fn inverse_square<T: Real>(h: &Hermitian<T>) -> Result<CMatrix<T>> {
    let (vals, vecs) = h.eigh();
    let big = vals
        .iter()
        .fold(T::zero(), |m, v| m.max(ComplexField::abs(*v)));
    let small = vals.iter().fold(T::max_value().unwrap_or(big), |m, v| {
        m.min(ComplexField::abs(*v))
    });
    if !(small > T::tolerance(1e-12) * big.max(T::one())) {
        return Err(Error::Singular(
            "conformal factor h is not invertible".into(),
        ));
    }
    let n = vals.len();
    let mut scaled = vecs.clone();
    for (j, v) in vals.iter().enumerate() {
        let w = T::one() / (*v * *v);
        for i in 0..n {
            scaled[(i, j)] *= w;
        }
    }
    Ok(scaled * vecs.adjoint())
}

/// `max{L(a∘b), L({a,b})} − F(‖a‖, ‖b‖, L(a), L(b))`; nonpositive means the
/// quasi-Leibniz inequality holds for this pair.
pub fn quasi_leibniz_defect<T: Real>(
    l: &LipNorm<T>,
    f: &AdmissibleF,
    a: &Hermitian<T>,
    b: &Hermitian<T>,
) -> Result<f64> {
    let jordan = l.eval(&a.jordan(b)?)?.as_f64();
    let lie = l.eval(&a.lie(b)?)?.as_f64();
    let bound = f.eval(
        hermitian_norm(a).as_f64(),
        hermitian_norm(b).as_f64(),
        l.eval(a)?.as_f64(),
        l.eval(b)?.as_f64(),
    );
    Ok(jordan.max(lie) - bound)
}

/// `‖a‖ + L(a)`.
pub fn domain_norm<T: Real>(l: &LipNorm<T>, a: &Hermitian<T>) -> Result<T> {
    Ok(hermitian_norm(a) + l.eval(a)?)
}

#[cfg(test)]
mod tests;
