//! Shared JSON encodings for complex numbers.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A complex number written as `{"re": x, "im": y}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(c: Complex64) -> Self {
        Self { re: c.re, im: c.im }
    }
}

impl From<ComplexJson> for Complex64 {
    fn from(c: ComplexJson) -> Self {
        Complex64::new(c.re, c.im)
    }
}

pub fn encode_vec(values: &[Complex64]) -> Vec<ComplexJson> {
    values.iter().copied().map(ComplexJson::from).collect()
}

pub fn decode_vec(values: &[ComplexJson]) -> Vec<Complex64> {
    values.iter().copied().map(Complex64::from).collect()
}
