use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::Rational;
use crate::error::Error;

/// Complex number with rational real and imaginary parts.
///
/// Serialized as the two-element array `[re, im]`. The derived ordering is
/// lexicographic on `(re, im)`; it exists for canonical sorting only.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(from = "[Rational; 2]", into = "[Rational; 2]")]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational {
            re,
            im: Rational::zero(),
        }
    }

    pub fn i() -> Self {
        GaussianRational {
            re: Rational::zero(),
            im: Rational::one(),
        }
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// |z|^2, always rational.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl From<[Rational; 2]> for GaussianRational {
    fn from([re, im]: [Rational; 2]) -> Self {
        GaussianRational { re, im }
    }
}

impl From<GaussianRational> for [Rational; 2] {
    fn from(z: GaussianRational) -> Self {
        [z.re, z.im]
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational::default()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        GaussianRational::real(Rational::one())
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &'a GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &'a GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &'a GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: &'a GaussianRational) -> GaussianRational {
        let n = rhs.norm_sqr();
        assert!(!n.is_zero(), "division by zero");
        let num = self * &rhs.conj();
        GaussianRational {
            re: num.re / &n,
            im: num.im / &n,
        }
    }
}

macro_rules! owned_binops {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &'a GaussianRational) -> GaussianRational {
                (&self).$method(rhs)
            }
        }
    )*};
}

owned_binops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.re, self.im)
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for GaussianRational {
    type Err = Error;

    /// Accepts `[re, im]` or a bare rational (imaginary part zero).
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        match s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            Some(inner) => {
                let (re, im) = inner
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("not a complex pair: {s:?}")))?;
                Ok(GaussianRational::new(
                    re.trim().trim_matches('"').parse()?,
                    im.trim().trim_matches('"').parse()?,
                ))
            }
            None => Ok(GaussianRational::real(s.parse()?)),
        }
    }
}
