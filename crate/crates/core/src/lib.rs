//! Bimatrix variate generalised beta distributions.
//!
//! The crate is layered bottom-up:
//!
//! * [`linalg`]: symmetric / positive-definite matrices, Cholesky, Jacobi
//!   eigendecomposition, square roots and inverses.
//! * [`partition`] and [`zonal`]: integer partitions, generalised Pochhammer
//!   symbols and exact zonal polynomial tables.
//! * [`hypergeometric`]: truncated `pFq` series of a matrix argument.
//! * [`special`]: multivariate gamma and beta constants in log scale.
//! * [`distributions`]: matrix gamma / beta densities and samplers, the
//!   bimatrix generalised beta type I and II families and their derived laws.
//! * [`quadrature`] and [`verify`]: Gauss–Legendre quadrature and Monte Carlo
//!   oracles that check the closed forms independently.

pub mod distributions;
pub mod error;
pub mod hypergeometric;
pub mod linalg;
pub mod partition;
pub mod quadrature;
pub mod rng;
pub mod special;
pub mod verify;
pub mod zonal;

pub use error::{Error, Result};
