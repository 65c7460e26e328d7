use std::fmt;

use nalgebra::{Complex, ComplexField};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

/// Which scalar field a matrix is over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldTag {
    Real,
    Complex,
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldTag::Real => "real",
            FieldTag::Complex => "complex",
        })
    }
}

impl std::str::FromStr for FieldTag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "real" | "R" => Ok(FieldTag::Real),
            "complex" | "C" => Ok(FieldTag::Complex),
            _ => Err(format!("unknown field \"{s}\" (real | complex)")),
        }
    }
}

/// Scalars the cone routines run over: `f64` and `Complex<f64>`.
pub trait Field: ComplexField<RealField = f64> + Copy + fmt::Debug + Send + Sync + 'static {
    const TAG: FieldTag;

    /// Drops the imaginary part over the reals.
    fn from_parts(re: f64, im: f64) -> Self;

    /// Standard Gaussian; the complex version has independent N(0,1) parts.
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// The imaginary unit, when the field has one.
    fn imaginary_unit() -> Option<Self>;
}

impl Field for f64 {
    const TAG: FieldTag = FieldTag::Real;

    fn from_parts(re: f64, _im: f64) -> Self {
        re
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }

    fn imaginary_unit() -> Option<Self> {
        None
    }
}

impl Field for Complex<f64> {
    const TAG: FieldTag = FieldTag::Complex;

    fn from_parts(re: f64, im: f64) -> Self {
        Complex::new(re, im)
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    }

    fn imaginary_unit() -> Option<Self> {
        Some(Complex::new(0.0, 1.0))
    }
}
