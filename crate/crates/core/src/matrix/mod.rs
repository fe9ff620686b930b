//! Dense complex Hermitian linear algebra, states, unitaries and bases.

mod algebra;
mod basis;
pub mod exchange;
mod hermitian;
pub mod random;
mod state;
mod unitary;

pub use algebra::AlgebraSpec;
pub use basis::HermitianBasis;
pub use exchange::MatrixJson;
#[allow(unused_imports)]
pub(crate) use hermitian::cplx;
pub use hermitian::{
    amplify, central_normalize, hermitian_norm, operator_norm, spectral_spread, top_singular,
    CMatrix, Hermitian,
};
pub use random::{random_hermitian, random_state, random_unitary};
pub use state::{state_eval, Density};
pub use unitary::{unitarity_defect, Unitary};
