//! Dense complex linear algebra for correlation matrices.
//!
//! The crate implements four Cholesky-family factorizations of Hermitian
//! correlation matrices and cross-validates them against each other:
//!
//! * [`factor::cholesky_gaxpy`] — column-oriented Cholesky `R = L·Lᴴ`
//! * [`factor::ldl_decompose`] — square-root-free `R = L·D·Lᴴ` (scalar and
//!   block variants; tolerates indefinite input)
//! * [`schur::schur_decompose`] — generator recursion producing block-LDL
//!   factors of a block-Toeplitz matrix from its first block column only
//! * [`rchol`] — a stateful recursive updater that tracks the factors of a
//!   time-varying correlation matrix from per-instant first-column data
//!
//! On top of the factorizations sit a pseudo-inverse built from the factors
//! ([`linalg::pinv_from_ldl`]), a time-varying SIMO channel simulator
//! ([`channel`]) and the comparison metrics plus CSV experiment driver used
//! by the `bench` binary ([`metrics`], [`bench`]).
//!
//! Every runnable capability has a matching program under `examples/`.

pub mod bench;
pub mod channel;
pub mod factor;
pub mod linalg;
pub mod metrics;
pub mod ops;
pub mod rchol;
pub mod schur;

pub use linalg::{CMatrix, LdlFactors, LinalgError};
