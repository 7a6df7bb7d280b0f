use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{common_denominator, Rational};
use crate::error::{Error, Result};

/// Dense univariate polynomial over the rationals, coefficients in ascending
/// degree. The zero polynomial is the empty coefficient list.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    coeffs: Vec<Rational>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        UPoly::new(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        UPoly::new(vec![c])
    }

    /// `a + b t`.
    pub fn linear(a: Rational, b: Rational) -> Self {
        UPoly::new(vec![a, b])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &Rational::from(k))
                .collect(),
        )
    }

    pub fn scale(&self, s: &Rational) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> UPoly {
        match self.leading() {
            None => UPoly::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    pub fn pow(&self, mut e: u32) -> UPoly {
        let mut base = self.clone();
        let mut acc = UPoly::constant(Rational::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &UPoly) -> (UPoly, UPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc = divisor.leading().unwrap().recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let shift = rem.len() - 1 - dd;
            let factor = rem.last().unwrap() * &lc;
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[shift + j] -= &(&factor * c);
            }
            quot[shift] = factor;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (UPoly::new(quot), UPoly::new(rem))
    }

    /// Monic greatest common divisor; zero only if both inputs are zero.
    ///
    /// Runs the remainder sequence on primitive integer polynomials, which
    /// keeps coefficients far smaller than rational Euclid does.
    pub fn gcd(a: &UPoly, b: &UPoly) -> UPoly {
        if a.is_zero() || b.is_zero() {
            return if a.is_zero() { b.monic() } else { a.monic() };
        }
        let (mut x, mut y) = (a.primitive_integer(), b.primitive_integer());
        if x.len() < y.len() {
            std::mem::swap(&mut x, &mut y);
        }
        while y.len() > 1 {
            let r = pseudo_remainder(&x, &y);
            x = y;
            y = primitive(r);
            if y.is_empty() {
                break;
            }
        }
        if y.len() == 1 {
            return UPoly::constant(Rational::one());
        }
        UPoly::new(x.into_iter().map(Rational::from).collect()).monic()
    }

    /// Primitive integer polynomial with the same roots and the same sign
    /// as `self` everywhere.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let den = common_denominator(&self.coeffs);
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        primitive(ints)
    }
}

fn primitive(mut p: Vec<BigInt>) -> Vec<BigInt> {
    let content = p.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if !content.is_zero() && !content.is_one() {
        for c in &mut p {
            *c /= &content;
        }
    }
    p
}

impl<'a> Add<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn add(self, rhs: &'a UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Rational::zero();
        UPoly::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&zero) + rhs.coeffs.get(k).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl<'a> Sub<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn sub(self, rhs: &'a UPoly) -> UPoly {
        self + &(-rhs)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl<'a> Mul<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &'a UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        UPoly::new(out)
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("({c})t"),
                _ => format!("({c})t^{k}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

/// Number of distinct real roots of `q`, from the Sturm chain of `q` and `q'`
/// evaluated at plus and minus infinity.
///
/// The chain is built from primitive integer pseudo-remainders; each term is
/// a positive multiple of the classical Sturm remainder, so sign variations
/// are unchanged.
pub fn sturm_distinct_real_roots(q: &UPoly) -> Result<usize> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let chain = sturm_chain(q);
    let at_pos_inf = chain.iter().map(|p| p.last().unwrap().signum());
    let at_neg_inf = chain.iter().map(|p| {
        let s = p.last().unwrap().signum();
        if (p.len() - 1) % 2 == 1 {
            -s
        } else {
            s
        }
    });
    let v_neg = sign_variations(at_neg_inf);
    let v_pos = sign_variations(at_pos_inf);
    Ok(v_neg - v_pos)
}

fn sign_variations(signs: impl Iterator<Item = BigInt>) -> usize {
    let mut prev: Option<bool> = None;
    let mut count = 0;
    for s in signs {
        if s.is_zero() {
            continue;
        }
        let positive = s.is_positive();
        if prev.is_some_and(|p| p != positive) {
            count += 1;
        }
        prev = Some(positive);
    }
    count
}

fn sturm_chain(q: &UPoly) -> Vec<Vec<BigInt>> {
    let mut chain = vec![q.primitive_integer()];
    let d = q.derivative();
    if d.is_zero() {
        return chain;
    }
    chain.push(d.primitive_integer());
    loop {
        let n = chain.len();
        let (a, b) = (&chain[n - 2], &chain[n - 1]);
        if b.len() == 1 {
            break;
        }
        let lb = b.last().unwrap();
        let exponent = a.len() - b.len() + 1;
        let mut r = pseudo_remainder(a, b);
        if r.is_empty() {
            break;
        }
        // prem = lc(b)^exponent * rem; undo a negative factor, then negate.
        let flip = lb.is_negative() && exponent % 2 == 1;
        if !flip {
            for c in &mut r {
                *c = -&*c;
            }
        }
        chain.push(primitive(r));
    }
    chain
}

// lc(b)^(deg a - deg b + 1) * a mod b, over the integers.
fn pseudo_remainder(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    let mut steps_left = a.len() - b.len() + 1;
    while r.len() > db && !r.is_empty() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] -= &lr * bc;
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
        steps_left -= 1;
    }
    if steps_left > 0 {
        let f = num_traits::pow(lb.clone(), steps_left);
        for c in r.iter_mut() {
            *c *= &f;
        }
    }
    r
}

/// Square-free part `q / gcd(q, q')`, returned monic.
pub fn gcd_squarefree(q: &UPoly) -> Result<UPoly> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let g = UPoly::gcd(q, &q.derivative());
    let (quot, rem) = q.div_rem(&g);
    debug_assert!(rem.is_zero());
    Ok(quot.monic())
}
