use num_complex::Complex;

use crate::matrix::CMatrix;
use crate::scalar::Real;

/// Clifford generators `γ₁, …, γ_m` with `γᵢγⱼ + γⱼγᵢ = 2δᵢⱼ`.
///
/// Jordan-Wigner construction on `k = ⌊m/2⌋` qubits: `γ_{2j} = Z^{⊗j} ⊗ X ⊗ I`,
/// `γ_{2j+1} = Z^{⊗j} ⊗ Y ⊗ I`, and for odd `m` the last one is `Z^{⊗k}`.
/// The size is `2^⌊m/2⌋`, so `m = 1` gives `γ₁ = [1]`.
pub fn gamma_matrices<T: Real>(m: usize) -> Vec<CMatrix<T>> {
    let k = m / 2;
    let o = Complex::new(T::zero(), T::zero());
    let l = Complex::new(T::one(), T::zero());
    let i = Complex::new(T::zero(), T::one());
    let id = CMatrix::<T>::identity(2, 2);
    let x = CMatrix::from_row_slice(2, 2, &[o, l, l, o]);
    let y = CMatrix::from_row_slice(2, 2, &[o, -i, i, o]);
    let z = CMatrix::from_row_slice(2, 2, &[l, o, o, -l]);

    let chain = |factors: Vec<&CMatrix<T>>| {
        factors
            .into_iter()
            .fold(CMatrix::<T>::identity(1, 1), |acc, f| acc.kronecker(f))
    };

    let mut out = Vec::with_capacity(m);
    for j in 0..k {
        for middle in [&x, &y] {
            let mut f = vec![&z; j];
            f.push(middle);
            f.extend(std::iter::repeat_n(&id, k - j - 1));
            out.push(chain(f));
        }
    }
    if m % 2 == 1 {
        out.push(chain(vec![&z; k]));
    }
    out
}
