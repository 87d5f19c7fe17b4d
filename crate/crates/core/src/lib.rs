//! Clifford–Fourier transform kernels in arbitrary dimension.
//!
//! The crate builds the parabivector-valued kernels `K^i_{±,m}` exactly, verifies
//! their recursion calculus, expands them in Bessel–Gegenbauer series, computes
//! their eigenvalues on the Laguerre–monogenic basis, and applies the transforms
//! by quadrature to certify the stated identities numerically.

pub mod cli;
pub mod clifford;
mod error;
pub mod exact;
pub mod kernel;
pub mod monogenic;
pub mod series;
pub mod special;
pub mod transform;

pub use error::{Error, Result};
