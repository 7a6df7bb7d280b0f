//! Rigorous interval enclosures of `ln` and `exp` over the rationals, and
//! decimal rendering at a fixed number of significant digits.
//!
//! Every enclosure is built from dyadic rationals rounded outward, so the
//! true value always lies in `[lo, hi]`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Significant digits in every decimal rendering.
pub const DIGITS: usize = 64;
/// Fractional bits kept by intermediate roundings; enough headroom for
/// `DIGITS` decimal digits after a few lossy operations.
const BITS: u32 = 320;

/// Closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn exact(x: Rational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    /// Multiplication by an exact rational of either sign.
    pub fn scale(&self, s: &Rational) -> Interval {
        let (a, b) = (&self.lo * s, &self.hi * s);
        if s.is_negative() {
            Interval { lo: b, hi: a }
        } else {
            Interval { lo: a, hi: b }
        }
    }

    /// Quotient of two intervals of positive numbers.
    pub fn div_positive(&self, other: &Interval) -> Interval {
        assert!(self.lo.is_positive() && other.lo.is_positive());
        Interval {
            lo: &self.lo / &other.hi,
            hi: &self.hi / &other.lo,
        }
    }

    fn outward(&self) -> Interval {
        Interval {
            lo: round_down(&self.lo, BITS),
            hi: round_up(&self.hi, BITS),
        }
    }

    /// Where `x` sits relative to the interval: `Less` below it, `Greater`
    /// above it, `None` inside.
    pub fn locate(&self, x: &Rational) -> Option<std::cmp::Ordering> {
        if *x < self.lo {
            Some(std::cmp::Ordering::Less)
        } else if *x > self.hi {
            Some(std::cmp::Ordering::Greater)
        } else {
            None
        }
    }
}

fn pow2(k: i64) -> Rational {
    let p = Rational::from_integer(BigInt::one() << k.unsigned_abs());
    if k >= 0 {
        p
    } else {
        p.recip()
    }
}

/// Largest multiple of `2^-bits` not above `x`.
fn round_down(x: &Rational, bits: u32) -> Rational {
    let scaled = x.numer() << bits as usize;
    Rational::new(scaled.div_floor(x.denom()), BigInt::one() << bits as usize)
}

/// Smallest multiple of `2^-bits` not below `x`.
fn round_up(x: &Rational, bits: u32) -> Rational {
    -round_down(&-x, bits)
}

/// `floor(log2 x)` for `x > 0`.
fn floor_log2(x: &Rational) -> i64 {
    let mut k = x.numer().bits() as i64 - x.denom().bits() as i64;
    while pow2(k) > *x {
        k -= 1;
    }
    while pow2(k + 1) <= *x {
        k += 1;
    }
    k
}

/// `atanh(z)` on `[z_lo, z_hi]` with `0 <= z_lo <= z_hi <= 1/3`.
fn atanh(z_lo: &Rational, z_hi: &Rational) -> Interval {
    let eps = pow2(8 - BITS as i64);
    let (z2_lo, z2_hi) = (
        round_down(&(z_lo * z_lo), BITS),
        round_up(&(z_hi * z_hi), BITS),
    );
    let (mut p_lo, mut p_hi) = (round_down(z_lo, BITS), round_up(z_hi, BITS));
    let (mut s_lo, mut s_hi) = (Rational::zero(), Rational::zero());
    let mut j: i64 = 0;
    while p_hi > eps {
        let k = Rational::from(2 * j + 1);
        s_lo += &round_down(&(&p_lo / &k), BITS);
        s_hi += &round_up(&(&p_hi / &k), BITS);
        p_lo = round_down(&(&p_lo * &z2_lo), BITS);
        p_hi = round_up(&(&p_hi * &z2_hi), BITS);
        j += 1;
    }
    // Remaining terms are at most p_hi * (1 + z^2 + z^4 + ...) <= p_hi * 9/8.
    s_hi += &(p_hi * Rational::new(9, 8));
    Interval { lo: s_lo, hi: s_hi }
}

/// Enclosure of `ln 2 = 2 atanh(1/3)`.
pub fn ln2() -> Interval {
    let third = Rational::new(1, 3);
    atanh(&third, &third).scale(&Rational::from(2))
}

/// Enclosure of `ln x` for rational `x > 0`.
pub fn ln(x: &Rational) -> Result<Interval> {
    if !x.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "logarithm of non-positive {x}"
        )));
    }
    let k = floor_log2(x);
    let y = x * &pow2(-k);
    let z = (&y - &Rational::one()) / (&y + &Rational::one());
    let frac = atanh(&z, &z).scale(&Rational::from(2));
    Ok(ln2().scale(&Rational::from(k)).add(&frac).outward())
}

/// Bounds on `exp(s)` for dyadic `0 <= s <= 1/2`.
fn exp_small(s: &Rational) -> (Rational, Rational) {
    let eps = pow2(8 - BITS as i64);
    let (mut t_lo, mut t_hi) = (Rational::one(), Rational::one());
    let (mut s_lo, mut s_hi) = (Rational::zero(), Rational::zero());
    let mut j: i64 = 0;
    while t_hi > eps || j == 0 {
        s_lo += &t_lo;
        s_hi += &t_hi;
        j += 1;
        let k = Rational::from(j);
        t_lo = round_down(&(&t_lo * s / &k), BITS);
        t_hi = round_up(&(&t_hi * s / &k), BITS);
    }
    // Tail after term t: at most t * (1 + s/(j+1) + ...) <= 2t for s <= 1/2.
    s_hi += &(t_hi * Rational::from(2));
    (s_lo, s_hi)
}

/// Lower (`upper = false`) or upper bound on `exp(y)` for exact `y`.
fn exp_bound(y: &Rational, upper: bool) -> Rational {
    let l2 = ln2();
    let k = (y.to_f64() / std::f64::consts::LN_2).round() as i64;
    // r = y - k ln2, enclosed; |r| <= ~0.35 < 1/2.
    let r = Interval::exact(y.clone()).add(&l2.scale(&Rational::from(-k)));
    let r = if upper {
        round_up(&r.hi, BITS)
    } else {
        round_down(&r.lo, BITS)
    };
    let bound = if r.is_negative() {
        // exp(r) = 1 / exp(|r|); the lower bound of exp(r) needs the upper
        // bound of exp(|r|) and vice versa.
        let (lo, hi) = exp_small(&-&r);
        if upper {
            round_up(&lo.recip(), BITS)
        } else {
            round_down(&hi.recip(), BITS)
        }
    } else {
        let (lo, hi) = exp_small(&r);
        if upper {
            hi
        } else {
            lo
        }
    };
    bound * pow2(k)
}

/// Enclosure of `exp` over an interval.
pub fn exp(y: &Interval) -> Interval {
    Interval {
        lo: exp_bound(&y.lo, false),
        hi: exp_bound(&y.hi, true),
    }
}

/// Enclosure of `base^e` for rational `base > 0` and rational `e`.
pub fn pow(base: &Rational, e: &Rational) -> Result<Interval> {
    Ok(exp(&ln(base)?.scale(e)))
}

/// `x` rounded to `digits` significant decimal digits, written positionally
/// (`"0.3868..."`, `"12.5..."`, `"-4"`).
pub fn decimal(x: &Rational, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let neg = x.is_negative();
    let a = x.abs();
    let ten = Rational::from(10);
    // e = floor(log10 a), starting from a float estimate.
    let mut e = a.numer().bits() as i64 - a.denom().bits() as i64;
    e = (e as f64 * std::f64::consts::LOG10_2).floor() as i64;
    let pow10 = |k: i64| {
        if k >= 0 {
            ten.pow(k as u32)
        } else {
            ten.pow((-k) as u32).recip()
        }
    };
    while pow10(e) > a {
        e -= 1;
    }
    while pow10(e + 1) <= a {
        e += 1;
    }
    let shift = digits as i64 - 1 - e;
    let scaled = &a * &pow10(shift);
    // Round half up.
    let mut n = (scaled + Rational::new(1, 2)).floor().numer().clone();
    let mut shift = shift;
    if n.to_string().len() > digits {
        n /= 10;
        shift -= 1;
    }
    let mut s = n.to_string();
    if shift > 0 {
        let shift = shift as usize;
        if s.len() <= shift {
            s = format!("{}{}", "0".repeat(shift - s.len() + 1), s);
        }
        let point = s.len() - shift;
        s.insert(point, '.');
        let trimmed = s.trim_end_matches('0').trim_end_matches('.');
        s = trimmed.to_string();
    } else {
        s.push_str(&"0".repeat((-shift) as usize));
    }
    if neg {
        s.insert(0, '-');
    }
    s
}

/// Decimal rendering of the midpoint of an enclosure.
pub fn decimal_interval(iv: &Interval, digits: usize) -> String {
    decimal(&((&iv.lo + &iv.hi) / Rational::from(2)), digits)
}

/// `(b, k)` with `x = b^k` and `k` maximal, for an integer `x >= 2`.
fn perfect_power(x: &BigInt) -> (BigInt, u32) {
    let bits = x.bits() as u32;
    for k in (2..=bits).rev() {
        let b = x.nth_root(k);
        if num_traits::pow(b.clone(), k as usize) == *x {
            return (b, k);
        }
    }
    (x.clone(), 1)
}

/// `log r / log n` as an exact rational when it is one, for integers
/// `r >= 1`, `n >= 2`. The ratio is rational exactly when `r` and `n` are
/// powers of a common integer.
pub fn exact_log_ratio(r: u64, n: u64) -> Option<Rational> {
    assert!(r >= 1 && n >= 2);
    if r == 1 {
        return Some(Rational::zero());
    }
    let (br, kr) = perfect_power(&BigInt::from(r));
    let (bn, kn) = perfect_power(&BigInt::from(n));
    (br == bn).then(|| Rational::new(kr as i64, kn as i64))
}

/// Enclosure of `log r / log n` for integers `r >= 1`, `n >= 2`.
pub fn log_ratio(r: u64, n: u64) -> Result<Interval> {
    if let Some(q) = exact_log_ratio(r, n) {
        return Ok(Interval::exact(q));
    }
    let lr = ln(&Rational::from(r as i64))?;
    let ln_n = ln(&Rational::from(n as i64))?;
    Ok(lr.div_positive(&ln_n).outward())
}

/// `x^e` for an exact rational and an integer exponent of either sign.
pub fn int_pow(x: &Rational, e: i64) -> Rational {
    let p = x.pow(e.unsigned_abs() as u32);
    if e >= 0 {
        p
    } else {
        p.recip()
    }
}
