//! Exact and numeric construction of the q-deformed Clifford algebra and the
//! covariant Dirac operator on the quantum group `U_q(su(2))`.

pub mod braiding;
pub mod clifford;
pub mod dirac;
pub mod error;
pub mod fredholm;
pub mod invariant;
pub mod linalg;
pub mod qscalar;
pub mod repr;
pub mod spin;
pub mod verify;

pub use error::{QError, Result};
pub use qscalar::{Exact, Numeric, QExact, QField, QMode, QValue, Scalar};
pub use spin::Spin;
