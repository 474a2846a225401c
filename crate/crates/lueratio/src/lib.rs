#![no_std]
//! Distribution of the ratio λ₂/λ₁ of the two smallest eigenvalues of the
//! Laguerre unitary ensemble, computed by four independent routes.

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod error;
pub mod hankel;
pub mod limitdist;
pub mod linalg;
pub mod montecarlo;
pub mod ode;
pub mod painleve;
pub mod quad;
pub mod scalar;

pub use error::{Error, Result};
