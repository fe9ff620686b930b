use serde::{Deserialize, Serialize};

use super::hermitian::{CMatrix, Hermitian};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// The algebra `⊕ᵢ M_{nᵢ}`, realized as block-diagonal matrices of size `Σ nᵢ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "AlgebraRepr", into = "AlgebraRepr")]
pub struct AlgebraSpec {
    blocks: Vec<usize>,
    offsets: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct AlgebraRepr {
    blocks: Vec<usize>,
}

impl TryFrom<AlgebraRepr> for AlgebraSpec {
    type Error = Error;
    fn try_from(r: AlgebraRepr) -> Result<Self> {
        AlgebraSpec::new(r.blocks)
    }
}

impl From<AlgebraSpec> for AlgebraRepr {
    fn from(a: AlgebraSpec) -> Self {
        AlgebraRepr { blocks: a.blocks }
    }
}

impl AlgebraSpec {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::invalid("algebra needs at least one block"));
        }
        if blocks.contains(&0) {
            return Err(Error::invalid("block sizes must be positive"));
        }
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut acc = 0;
        for &b in &blocks {
            offsets.push(acc);
            acc += b;
        }
        Ok(Self { blocks, offsets })
    }

    /// The full matrix algebra `M_n`.
    pub fn full(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    /// `C²`, the classical two-point space.
    pub fn two_point() -> Self {
        Self::new(vec![1, 1]).expect("valid blocks")
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn total_dim(&self) -> usize {
        self.blocks.iter().sum()
    }

    /// Real dimension of the self-adjoint part, `Σ nᵢ²`.
    pub fn real_dim(&self) -> usize {
        self.blocks.iter().map(|b| b * b).sum()
    }

    pub fn is_single_block(&self) -> bool {
        self.blocks.len() == 1
    }

    /// `(offset, size)` of each block along the diagonal.
    pub fn block_ranges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.offsets
            .iter()
            .copied()
            .zip(self.blocks.iter().copied())
    }

    pub fn block_of(&self, i: usize) -> usize {
        match self.offsets.binary_search(&i) {
            Ok(k) => k,
            Err(k) => k - 1,
        }
    }

    pub fn in_mask(&self, i: usize, j: usize) -> bool {
        self.block_of(i) == self.block_of(j)
    }

    /// Zeros every entry outside the block mask.
    pub fn project_matrix<T: Real>(&self, m: &CMatrix<T>) -> CMatrix<T> {
        let mut out = m.clone();
        if self.is_single_block() {
            return out;
        }
        let n = self.total_dim();
        for i in 0..n {
            for j in 0..n {
                if !self.in_mask(i, j) {
                    out[(i, j)] = num_complex::Complex::new(T::zero(), T::zero());
                }
            }
        }
        out
    }

    pub fn project<T: Real>(&self, a: &Hermitian<T>) -> Result<Hermitian<T>> {
        self.check_dim(a.dim())?;
        Ok(Hermitian::symmetrize(self.project_matrix(a.as_matrix())))
    }

    /// True when every off-block entry has modulus at most `tol`.
    pub fn contains<T: Real>(&self, a: &Hermitian<T>, tol: T) -> bool {
        if a.dim() != self.total_dim() {
            return false;
        }
        let n = self.total_dim();
        for i in 0..n {
            for j in 0..n {
                if !self.in_mask(i, j) && a.as_matrix()[(i, j)].norm_sqr().sqrt() > tol {
                    return false;
                }
            }
        }
        true
    }

    pub(crate) fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.total_dim() {
            return Err(Error::shape(self.total_dim(), n));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_bookkeeping() {
        let a = AlgebraSpec::new(vec![2, 1, 3]).unwrap();
        assert_eq!(a.total_dim(), 6);
        assert_eq!(a.real_dim(), 14);
        assert_eq!(a.block_of(0), 0);
        assert_eq!(a.block_of(1), 0);
        assert_eq!(a.block_of(2), 1);
        assert_eq!(a.block_of(5), 2);
        assert!(a.in_mask(3, 5));
        assert!(!a.in_mask(1, 2));
    }

    #[test]
    fn rejects_empty_and_zero_blocks() {
        assert!(AlgebraSpec::new(vec![]).is_err());
        assert!(AlgebraSpec::new(vec![2, 0]).is_err());
        assert!(serde_json::from_str::<AlgebraSpec>(r#"{"blocks":[]}"#).is_err());
    }

    #[test]
    fn projection_keeps_two_point_space_diagonal() {
        let alg = AlgebraSpec::two_point();
        let x = Hermitian::<f64>::from_real(&[vec![1.0, 4.0], vec![4.0, -2.0]]).unwrap();
        let p = alg.project(&x).unwrap();
        assert!(p.max_abs_diff(&Hermitian::diagonal(&[1.0, -2.0])) == 0.0);
        assert!(alg.contains(&p, 0.0));
        assert!(!alg.contains(&x, 1e-3));
    }

    #[test]
    fn json_shape() {
        let a = AlgebraSpec::two_point();
        assert_eq!(serde_json::to_string(&a).unwrap(), r#"{"blocks":[1,1]}"#);
    }
}
