//! Configurable-precision reals and the special functions used downstream.

mod bessel;
#[cfg(test)]
mod bessel_oracle;
mod bigreal;
mod gamma;

pub use bessel::{bessel, bessel_i_scaled, bessel_with_derivative, SpecialFnKind};
#[allow(unused_imports)]
pub(crate) use bessel::{ik_scaled, jy};
pub use bigreal::{BigReal, DEFAULT_PRECISION};
pub use gamma::{
    gamma_big, log_gamma, log_gamma_big, upper_incomplete_gamma, upper_incomplete_gamma_big,
    upper_incomplete_gamma_ladder,
};

/// ln Γ(a) in double precision.
pub fn ln_gamma(a: f64) -> f64 {
    libm::lgamma(a)
}
