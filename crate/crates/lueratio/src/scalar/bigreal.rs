//! Configurable-precision real numbers.
//!
//! A thin value type over [`astro_float::BigFloat`] that remembers the
//! precision it was created with, so arithmetic does not need a context
//! argument on every call.

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign};

const RM: RoundingMode = RoundingMode::ToEven;

/// Default working precision in bits.
pub const DEFAULT_PRECISION: usize = 128;

/// Arbitrary-precision binary floating point real.
#[derive(Clone)]
pub struct BigReal {
    value: BigFloat,
    precision_bits: usize,
}

fn consts() -> Consts {
    Consts::new().expect("allocation of constant cache failed")
}

impl BigReal {
    pub fn from_f64(x: f64, precision_bits: usize) -> Self {
        let p = precision_bits.max(64);
        if x != 0.0 && x.is_finite() && x.abs() < f64::MIN_POSITIVE {
            // The backend mis-normalizes subnormals; scale them into range exactly.
            let scaled = BigFloat::from_f64(x * libm::ldexp(1.0, 128), p);
            let scale = BigFloat::from_f64(libm::ldexp(1.0, -128), p);
            return Self { value: scaled.mul(&scale, p, RoundingMode::ToEven), precision_bits: p };
        }
        Self { value: BigFloat::from_f64(x, p), precision_bits: p }
    }

    pub fn from_i64(x: i64, precision_bits: usize) -> Self {
        let p = precision_bits.max(64);
        Self { value: BigFloat::from_i64(x, p), precision_bits: p }
    }

    pub fn zero(precision_bits: usize) -> Self {
        Self::from_i64(0, precision_bits)
    }

    pub fn one(precision_bits: usize) -> Self {
        Self::from_i64(1, precision_bits)
    }

    pub fn pi(precision_bits: usize) -> Self {
        let p = precision_bits.max(64);
        let mut cc = consts();
        Self { value: cc.pi(p, RM), precision_bits: p }
    }

    pub fn precision_bits(&self) -> usize {
        self.precision_bits
    }

    /// Returns a copy rounded to a new precision.
    pub fn with_precision(&self, precision_bits: usize) -> Self {
        let p = precision_bits.max(64);
        let mut value = self.value.clone();
        let _ = value.set_precision(p, RM);
        Self { value, precision_bits: p }
    }

    pub fn is_finite(&self) -> bool {
        !(self.value.is_nan() || self.value.is_inf())
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        !self.value.is_zero() && self.value.is_positive() && !self.value.is_nan()
    }

    pub fn is_negative(&self) -> bool {
        !self.value.is_zero() && self.value.is_negative() && !self.value.is_nan()
    }

    pub fn abs(&self) -> Self {
        Self { value: self.value.abs(), precision_bits: self.precision_bits }
    }

    pub fn sqrt(&self) -> Self {
        Self { value: self.value.sqrt(self.precision_bits, RM), precision_bits: self.precision_bits }
    }

    pub fn ln(&self) -> Self {
        let mut cc = consts();
        Self { value: self.value.ln(self.precision_bits, RM, &mut cc), precision_bits: self.precision_bits }
    }

    pub fn exp(&self) -> Self {
        let mut cc = consts();
        Self { value: self.value.exp(self.precision_bits, RM, &mut cc), precision_bits: self.precision_bits }
    }

    /// `self` raised to a real power; `self` must be positive.
    pub fn powf(&self, e: &BigReal) -> Self {
        let p = self.precision_bits.max(e.precision_bits);
        let mut cc = consts();
        Self { value: self.value.pow(&e.value, p, RM, &mut cc), precision_bits: p }
    }

    pub fn powi(&self, n: usize) -> Self {
        Self { value: self.value.powi(n, self.precision_bits, RM), precision_bits: self.precision_bits }
    }

    pub fn recip(&self) -> Self {
        Self { value: self.value.reciprocal(self.precision_bits, RM), precision_bits: self.precision_bits }
    }

    pub fn mul_f64(&self, x: f64) -> Self {
        self * &BigReal::from_f64(x, self.precision_bits)
    }

    pub fn add_f64(&self, x: f64) -> Self {
        self + &BigReal::from_f64(x, self.precision_bits)
    }

    /// Nearest double, with overflow to infinity.
    pub fn to_f64(&self) -> f64 {
        if self.value.is_nan() {
            return f64::NAN;
        }
        if self.value.is_inf() {
            return if self.value.is_inf_pos() { f64::INFINITY } else { f64::NEG_INFINITY };
        }
        let Some((words, _, sign, exponent, _)) = self.value.as_raw_parts() else {
            return f64::NAN;
        };
        if self.value.is_zero() || words.is_empty() {
            return 0.0;
        }
        // The mantissa is normalized with its top bit set; value = 0.m * 2^e.
        let top = words[words.len() - 1] as u64;
        let next = if words.len() > 1 { words[words.len() - 2] as u64 } else { 0 };
        // Round half to even on the 53 leading bits.
        let mut m = top >> 11;
        let half = (top >> 10) & 1;
        let rest = (top & 0x3ff) != 0 || next != 0;
        if half == 1 && (rest || (m & 1) == 1) {
            m += 1;
        }
        let mag = libm::ldexp(m as f64, exponent as i32 - 53);
        if sign == Sign::Neg { -mag } else { mag }
    }

    fn prec2(&self, other: &BigReal) -> usize {
        self.precision_bits.max(other.precision_bits)
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigReal({:e}, {} bits)", self.to_f64(), self.precision_bits)
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.value.cmp(&other.value) == Some(0)
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.cmp(&other.value).map(|c| c.cmp(&0))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&BigReal> for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &BigReal) -> BigReal {
                let p = self.prec2(rhs);
                BigReal { value: self.value.$inner(&rhs.value, p, RM), precision_bits: p }
            }
        }
        impl $tr<BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &BigReal) -> BigReal {
                (&self).$method(rhs)
            }
        }
        impl $tr<BigReal> for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);
binop!(Div, div, div);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal { value: self.value.neg(), precision_bits: self.precision_bits }
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal { value: self.value.clone().neg(), precision_bits: self.precision_bits }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_round_trip() {
        for &x in &[1.0, -3.25, 1e-300, 6.02e23, 0.1, core::f64::consts::PI, -2.0f64.powi(-1070)] {
            assert_eq!(BigReal::from_f64(x, 64).to_f64(), x);
            assert_eq!(BigReal::from_f64(x, 300).to_f64(), x);
        }
        assert_eq!(BigReal::zero(128).to_f64(), 0.0);
    }

    #[test]
    fn arithmetic_and_transcendentals() {
        let p = 200;
        let two = BigReal::from_f64(2.0, p);
        let s = two.sqrt();
        let back = &s * &s;
        assert!((back.to_f64() - 2.0).abs() < 1e-15);
        let l = two.ln().exp();
        assert!((l - &two).abs().to_f64() < 1e-55);
        let third = BigReal::one(p) / BigReal::from_f64(3.0, p);
        assert!(((&third * BigReal::from_f64(3.0, p)) - BigReal::one(p)).abs().to_f64() < 1e-58);
        assert!(third < two && -two.clone() < third);
    }
}
