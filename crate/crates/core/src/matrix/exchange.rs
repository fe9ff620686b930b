//! JSON exchange format: `{"kind": ..., "dim": n, "re": [[...]], "im": [[...]]}`.
//!
//! `kind` is one of `hermitian`, `state`, `unitary`, `matrix`. It is always
//! written; on input it may be omitted, in which case the target type decides.
//! An omitted or empty `im` reads as zero.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::hermitian::{cplx, CMatrix, Hermitian};
use super::state::Density;
use super::unitary::Unitary;
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix<T: Real>(m: &CMatrix<T>, kind: &str) -> Self {
        let n = m.nrows();
        let re = (0..n)
            .map(|i| (0..m.ncols()).map(|j| m[(i, j)].re.as_f64()).collect())
            .collect();
        let im = (0..n)
            .map(|i| (0..m.ncols()).map(|j| m[(i, j)].im.as_f64()).collect())
            .collect();
        Self {
            kind: Some(kind.to_string()),
            dim: n,
            re,
            im,
        }
    }

    pub fn to_matrix<T: Real>(&self) -> Result<CMatrix<T>> {
        let n = self.dim;
        if n == 0 {
            return Err(Error::invalid("dim must be at least 1"));
        }
        let real = self.im.is_empty();
        if self.re.len() != n || (!real && self.im.len() != n) {
            return Err(Error::shape(n, self.re.len().max(self.im.len())));
        }
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            if self.re[i].len() != n || (!real && self.im[i].len() != n) {
                return Err(Error::shape(n, self.re[i].len()));
            }
            for j in 0..n {
                let im = if real { 0.0 } else { self.im[i][j] };
                m[(i, j)] = cplx(T::lit(self.re[i][j]), T::lit(im));
            }
        }
        Ok(m)
    }

    fn expect_kind(&self, want: &str) -> Result<()> {
        match self.kind.as_deref() {
            None => Ok(()),
            Some(k) if k == want => Ok(()),
            Some(k) => Err(Error::invalid(format!(
                "expected kind \"{want}\", found \"{k}\""
            ))),
        }
    }
}

impl<T: Real> Serialize for Hermitian<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from_matrix(self.as_matrix(), "hermitian").serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for Hermitian<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        j.expect_kind("hermitian").map_err(D::Error::custom)?;
        Hermitian::new(j.to_matrix().map_err(D::Error::custom)?).map_err(D::Error::custom)
    }
}

impl<T: Real> Serialize for Density<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from_matrix(self.rho().as_matrix(), "state").serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for Density<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        j.expect_kind("state").map_err(D::Error::custom)?;
        let h =
            Hermitian::new(j.to_matrix().map_err(D::Error::custom)?).map_err(D::Error::custom)?;
        Density::new(h).map_err(D::Error::custom)
    }
}

impl<T: Real> Serialize for Unitary<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from_matrix(self.matrix(), "unitary").serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for Unitary<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        j.expect_kind("unitary").map_err(D::Error::custom)?;
        Unitary::new(j.to_matrix().map_err(D::Error::custom)?).map_err(D::Error::custom)
    }
}

/// Serde adapter for plain `CMatrix<f64>` fields (kind `matrix`).
pub mod serde_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(
        m: &CMatrix<f64>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from_matrix(m, "matrix").serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<CMatrix<f64>, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        j.to_matrix().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::random::{random_hermitian, random_state, random_unitary};

    #[test]
    fn field_names_are_normative() {
        let h = Hermitian::<f64>::diagonal(&[1.0, -1.0]);
        let v: serde_json::Value = serde_json::to_value(&h).unwrap();
        assert_eq!(v["kind"], "hermitian");
        assert_eq!(v["dim"], 2);
        assert_eq!(v["re"][1][1], -1.0);
        assert_eq!(v["im"][0][1], 0.0);
    }

    #[test]
    fn kinds_are_checked() {
        let s = serde_json::to_string(&Density::<f64>::maximally_mixed(2)).unwrap();
        assert!(serde_json::from_str::<Density<f64>>(&s).is_ok());
        assert!(serde_json::from_str::<Hermitian<f64>>(&s).is_err());
        let untagged = r#"{"dim":1,"re":[[2.0]],"im":[[0.0]]}"#;
        assert!(serde_json::from_str::<Hermitian<f64>>(untagged).is_ok());
        assert!(serde_json::from_str::<Density<f64>>(untagged).is_err());
    }

    #[test]
    fn round_trips_are_exact() {
        let h = random_hermitian::<f64>(1, 3, 1.0).unwrap();
        let back: Hermitian<f64> =
            serde_json::from_str(&serde_json::to_string(&h).unwrap()).unwrap();
        assert_eq!(h, back);
        let s = random_state::<f64>(2, 3).unwrap();
        let back: Density<f64> = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(s, back);
        let u = random_unitary::<f64>(3, 3).unwrap();
        let back: Unitary<f64> = serde_json::from_str(&serde_json::to_string(&u).unwrap()).unwrap();
        assert_eq!(u, back);
    }
}
