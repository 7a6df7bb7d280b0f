//! Sparse multivariate polynomials over the rationals.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Rational, UPoly};

/// Polynomial in `vars` variables. Terms map exponent vectors (length
/// `vars`) to nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MPolyDoc", into = "MPolyDoc")]
pub struct MPoly {
    vars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

#[derive(Serialize, Deserialize)]
struct MPolyDoc {
    vars: usize,
    terms: Vec<(Vec<u32>, Rational)>,
}

impl From<MPoly> for MPolyDoc {
    fn from(p: MPoly) -> Self {
        MPolyDoc {
            vars: p.vars,
            terms: p.terms.into_iter().collect(),
        }
    }
}

impl TryFrom<MPolyDoc> for MPoly {
    type Error = Error;

    fn try_from(doc: MPolyDoc) -> Result<Self> {
        if let Some((e, _)) = doc.terms.iter().find(|(e, _)| e.len() != doc.vars) {
            return Err(Error::DimensionMismatch {
                expected: doc.vars,
                found: e.len(),
            });
        }
        Ok(MPoly::from_terms(doc.vars, doc.terms))
    }
}

impl MPoly {
    pub fn zero(vars: usize) -> Self {
        MPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: Rational) -> Self {
        MPoly::from_terms(vars, [(vec![0; vars], c)])
    }

    /// The polynomial `x_i`.
    pub fn variable(vars: usize, i: usize) -> Self {
        let mut e = vec![0; vars];
        e[i] = 1;
        MPoly::from_terms(vars, [(e, Rational::one())])
    }

    /// Sums coefficients of repeated exponents and drops zeros. Every exponent
    /// vector must have length `vars`.
    pub fn from_terms(vars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut map: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), vars);
            *map.entry(e).or_insert_with(Rational::zero) += &c;
        }
        map.retain(|_, c| !c.is_zero());
        MPoly { vars, terms: map }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest total degree of a stored term; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, s: &Rational) -> MPoly {
        MPoly::from_terms(
            self.vars,
            self.terms.iter().map(|(e, c)| (e.clone(), c * s)),
        )
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.vars, other.vars);
        MPoly::from_terms(
            self.vars,
            self.terms
                .iter()
                .chain(&other.terms)
                .map(|(e, c)| (e.clone(), c.clone())),
        )
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.vars, other.vars);
        let terms = self
            .terms
            .iter()
            .cartesian_product(&other.terms)
            .map(|((ea, ca), (eb, cb))| (ea.iter().zip(eb).map(|(a, b)| a + b).collect(), ca * cb));
        MPoly::from_terms(self.vars, terms)
    }

    pub fn pow(&self, e: u32) -> MPoly {
        (0..e).fold(MPoly::constant(self.vars, Rational::one()), |acc, _| {
            acc.mul(self)
        })
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        if x.len() != self.vars {
            return Err(Error::DimensionMismatch {
                expected: self.vars,
                found: x.len(),
            });
        }
        let deg = self.degree() as u32;
        let powers: Vec<Vec<Rational>> = x.iter().map(|xi| power_table(xi, deg)).collect();
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .enumerate()
                    .fold(c.clone(), |acc, (i, &k)| acc * &powers[i][k as usize])
            })
            .sum())
    }

    /// `P(base + t * direction)` as a univariate polynomial in `t`.
    pub fn restrict_to_line(&self, base: &[Rational], direction: &[Rational]) -> Result<UPoly> {
        for v in [base, direction] {
            if v.len() != self.vars {
                return Err(Error::DimensionMismatch {
                    expected: self.vars,
                    found: v.len(),
                });
            }
        }
        let deg = self.degree() as u32;
        let powers: Vec<Vec<UPoly>> = base
            .iter()
            .zip(direction)
            .map(|(b, d)| {
                let lin = UPoly::linear(b.clone(), d.clone());
                let mut table = vec![UPoly::constant(Rational::one())];
                for k in 1..=deg as usize {
                    let next = &table[k - 1] * &lin;
                    table.push(next);
                }
                table
            })
            .collect();
        let mut out = UPoly::zero();
        for (e, c) in &self.terms {
            let mut term = UPoly::constant(c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = &term * &powers[i][k as usize];
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }
}

fn power_table(x: &Rational, deg: u32) -> Vec<Rational> {
    let mut table = vec![Rational::one()];
    for k in 1..=deg as usize {
        let next = &table[k - 1] * x;
        table.push(next);
    }
    table
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts = self.terms.iter().map(|(e, c)| {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        format!("x{i}")
                    } else {
                        format!("x{i}^{k}")
                    }
                })
                .collect();
            if mono.is_empty() {
                c.to_string()
            } else {
                format!("{c}*{}", mono.join("*"))
            }
        });
        write!(f, "{}", parts.format(" + "))
    }
}

/// Exponent vectors of every monomial in `m` variables of total degree
/// `1..=deg`, graded by degree and lexicographic by variable index within a
/// degree (`x, y, x^2, xy, y^2` for `m = 2`).
pub fn monomial_exponents(m: usize, deg: u32) -> Vec<Vec<u32>> {
    (1..=deg as usize)
        .flat_map(|t| {
            (0..m).combinations_with_replacement(t).map(move |idx| {
                let mut e = vec![0u32; m];
                for i in idx {
                    e[i] += 1;
                }
                e
            })
        })
        .collect()
}

/// `C(m + deg, deg) - 1`, the length of a degree-`deg` lift of `m`
/// coordinates.
pub fn lift_dimension(m: usize, deg: u32) -> usize {
    let mut c: u128 = 1;
    for i in 1..=deg as u128 {
        c = c * (m as u128 + i) / i;
    }
    (c - 1) as usize
}

/// Evaluates every monomial of [`monomial_exponents`] at `x`.
pub fn lift_coords(x: &[Rational], deg: u32) -> Vec<Rational> {
    let powers: Vec<Vec<Rational>> = x.iter().map(|xi| power_table(xi, deg)).collect();
    monomial_exponents(x.len(), deg)
        .iter()
        .map(|e| {
            e.iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .fold(Rational::one(), |acc, (i, &k)| acc * &powers[i][k as usize])
        })
        .collect()
}
