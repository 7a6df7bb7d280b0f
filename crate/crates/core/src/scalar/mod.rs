//! Exact scalars and univariate polynomial machinery.

mod gaussian;
mod rational;
mod upoly;

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub use gaussian::GaussianRational;
pub use rational::{common_denominator, Rational};
pub use upoly::{gcd_squarefree, sturm_distinct_real_roots, UPoly};

/// Which scalar field a geometric object lives over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldKind {
    #[serde(rename = "R")]
    Real,
    #[serde(rename = "C")]
    Complex,
}

impl FieldKind {
    pub fn tag(self) -> &'static str {
        match self {
            FieldKind::Real => "R",
            FieldKind::Complex => "C",
        }
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl std::str::FromStr for FieldKind {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "R" | "r" | "real" => Ok(FieldKind::Real),
            "C" | "c" | "complex" => Ok(FieldKind::Complex),
            other => Err(crate::Error::Parse(format!(
                "unknown field {other:?}; expected R or C"
            ))),
        }
    }
}

/// An exact field of scalars: the rationals or the Gaussian rationals.
///
/// `Ord` is a canonical total order used for deterministic sorting and tie
/// breaking, not a field order.
pub trait Field:
    Clone
    + fmt::Debug
    + fmt::Display
    + Eq
    + Ord
    + Hash
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + Serialize
    + DeserializeOwned
    + std::str::FromStr<Err = crate::Error>
    + 'static
{
    const KIND: FieldKind;

    /// Complex conjugate; the identity over the reals.
    fn conj(&self) -> Self;

    fn from_rational(r: Rational) -> Self;
}

impl Field for Rational {
    const KIND: FieldKind = FieldKind::Real;

    fn conj(&self) -> Self {
        self.clone()
    }

    fn from_rational(r: Rational) -> Self {
        r
    }
}

impl Field for GaussianRational {
    const KIND: FieldKind = FieldKind::Complex;

    fn conj(&self) -> Self {
        GaussianRational::conj(self)
    }

    fn from_rational(r: Rational) -> Self {
        GaussianRational::real(r)
    }
}
