//! Classifies a configuration against the rich-lines trichotomy: either the
//! rich-line count is under the hypothesis bound, or some hyperplane holds
//! many points, or the configuration is a counterexample candidate.
//!
//! Every comparison is exact when the exponent `ε = a/q` has `q <= 64`:
//! `x > n^ε` is decided as `x^q > n^a`. Otherwise `n^ε` is enclosed in an
//! interval and a count inside the enclosure gives `Indeterminate`.

use std::cmp::Ordering;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::concentrate::{best_hyperplane, Concentration};
use crate::error::{Error, Result};
use crate::geom::{Line, Point};
use crate::incidence::{enumerate_rich_lines, RichLineSet};
use crate::scalar::{Field, FieldKind, Rational};

use super::precision::{self, decimal, decimal_interval, int_pow, Interval, DIGITS};

/// Largest exponent denominator compared by integer powers.
pub const MAX_EXACT_DENOMINATOR: u64 = 64;
/// Largest exponent numerator compared by integer powers.
const MAX_EXACT_NUMERATOR: u64 = 4096;

/// A three-valued outcome; `Indeterminate` only arises from an enclosure
/// that straddles the compared count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truth {
    True,
    False,
    Indeterminate,
}

impl Truth {
    fn from_bool(b: bool) -> Truth {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }

    /// `lhs > rhs` (strict) or `lhs >= rhs` from an optional ordering.
    fn from_order(ord: Option<Ordering>, strict: bool) -> Truth {
        match ord {
            None => Truth::Indeterminate,
            Some(Ordering::Greater) => Truth::True,
            Some(Ordering::Equal) => Truth::from_bool(!strict),
            Some(Ordering::Less) => Truth::False,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    HypothesisFails,
    ConcentrationFound,
    CounterexampleCandidate,
    Indeterminate,
}

/// An exact rational, or a decimal approximation with its number of
/// significant digits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Exact(Rational),
    Approx { value: String, digits: usize },
}

impl Quantity {
    fn approx(iv: &Interval) -> Quantity {
        if iv.lo == iv.hi {
            Quantity::Exact(iv.lo.clone())
        } else {
            Quantity::Approx {
                value: decimal_interval(iv, DIGITS),
                digits: DIGITS,
            }
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Quantity::Exact(q) => Some(q),
            Quantity::Approx { .. } => None,
        }
    }

    /// Decimal rendering at `DIGITS` significant digits.
    pub fn render(&self) -> String {
        match self {
            Quantity::Exact(q) => decimal(q, DIGITS),
            Quantity::Approx { value, .. } => value.clone(),
        }
    }
}

/// How a comparison was decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Both sides are rationals.
    ExactRational,
    /// `x^q` against `n^a` in integers.
    IntegerPowers,
    /// Against an enclosure of `n^ε`.
    Interval,
}

/// A right-hand side value together with how it was compared.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    pub value: Quantity,
    pub method: Method,
}

/// Where the reported concentration came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Search {
    /// Exhaustive spanned-hyperplane search.
    Exhaustive,
    /// A hyperplane through the richest line; a lower bound used when the
    /// exhaustive search exceeds its scale limits.
    RichestLine,
    /// No concentration was computed.
    None,
}

/// Constants of the trichotomy, supplied by the caller.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constants {
    #[serde(rename = "C")]
    pub big_c: Rational,
    #[serde(rename = "c")]
    pub small_c: Rational,
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            big_c: Rational::one(),
            small_c: Rational::one(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "F: Field", deserialize = "F: Field"))]
pub struct TrichotomyReport<F: Field> {
    pub field: FieldKind,
    pub n: usize,
    pub d: usize,
    pub r: usize,
    pub epsilon: Quantity,
    pub alpha: Quantity,
    pub constants: Constants,
    pub rich_count: usize,
    /// `C·α·n^{2+ε}/r^{d+1}`; the hypothesis is `rich_count > bound`.
    pub bound: Bound,
    pub hypothesis_holds: Truth,
    /// `c·α·n^{1+ε}/r^{d-1}`; the conclusion is a hyperplane holding at
    /// least this many points.
    pub threshold: Bound,
    pub concentration: Option<Concentration<F>>,
    pub concentration_search: Search,
    pub concentration_meets_threshold: Truth,
    /// `r^d >= α·n^{1+ε}`: a single rich line already carries enough points.
    pub cutoff_triggered: Truth,
    pub cutoff_line: Option<Line<F>>,
    pub verdict: Verdict,
    /// `log r / log n`, set by the cheap corollary.
    pub rho: Option<Quantity>,
    /// Substitutions applied before the comparisons, in order.
    pub substitutions: Vec<String>,
}

impl<F: Field> TrichotomyReport<F> {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Orders `x` against `n^eps` for `x >= 0`, `n >= 1`, `eps > 0`. `None`
/// when an enclosure of `n^eps` contains `x`.
pub fn compare_with_power(x: &Rational, n: u64, eps: &Rational) -> (Option<Ordering>, Method) {
    if n == 1 {
        return (Some(x.cmp(&Rational::one())), Method::ExactRational);
    }
    let (a, q) = (eps.numer(), eps.denom());
    let small = |v: &num_bigint::BigInt, cap: u64| v <= &num_bigint::BigInt::from(cap);
    if small(q, MAX_EXACT_DENOMINATOR) && small(a, MAX_EXACT_NUMERATOR) {
        let q: u32 = q.try_into().expect("bounded");
        let a: u32 = a.try_into().expect("bounded");
        let lhs = x.pow(q);
        let rhs = Rational::from(n as i64).pow(a);
        return (Some(lhs.cmp(&rhs)), Method::IntegerPowers);
    }
    let iv = precision::pow(&Rational::from(n as i64), eps).expect("n >= 2");
    (iv.locate(x), Method::Interval)
}

/// `scale · n^eps` as a reported quantity.
fn scaled_power(scale: &Rational, n: u64, eps: &Rational) -> Quantity {
    if eps.is_integer() || n == 1 {
        let e: i64 = eps.numer().try_into().unwrap_or(0);
        return Quantity::Exact(
            scale * &int_pow(&Rational::from(n as i64), if n == 1 { 0 } else { e }),
        );
    }
    let iv = precision::pow(&Rational::from(n as i64), eps).expect("n >= 2");
    Quantity::approx(&iv.scale(scale))
}

fn check_constants(r: usize, constants: &Constants) -> Result<()> {
    if r < 2 {
        return Err(Error::BadR(r));
    }
    if !constants.big_c.is_positive() || !constants.small_c.is_positive() {
        return Err(Error::InvalidArgument(
            "constants C and c must be positive".into(),
        ));
    }
    Ok(())
}

/// Best hyperplane, falling back to a hyperplane through the richest line
/// when the exhaustive search is out of scale.
fn find_concentration<F: Field>(
    points: &[Point<F>],
    rich: &RichLineSet<F>,
) -> Result<(Option<Concentration<F>>, Search)> {
    match best_hyperplane(points) {
        Ok(c) => Ok((Some(c), Search::Exhaustive)),
        Err(Error::ScaleExceeded { .. }) => {
            let Some((line, _)) = rich
                .entries
                .iter()
                .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            else {
                return Ok((None, Search::None));
            };
            let d = points[0].dim();
            let flat = line.to_flat().complete_to_dim(d.saturating_sub(1).max(1));
            let members: Vec<usize> = (0..points.len())
                .filter(|&i| flat.contains_point(&points[i]))
                .collect();
            let fraction = Rational::new(members.len() as i64, points.len() as i64);
            Ok((
                Some(Concentration {
                    flat,
                    members,
                    total: points.len(),
                    fraction,
                }),
                Search::RichestLine,
            ))
        }
        Err(e) => Err(e),
    }
}

fn verdict(hypothesis: Truth, meets: Truth) -> Verdict {
    match (hypothesis, meets) {
        (Truth::False, _) => Verdict::HypothesisFails,
        (Truth::Indeterminate, _) => Verdict::Indeterminate,
        (Truth::True, Truth::True) => Verdict::ConcentrationFound,
        (Truth::True, Truth::False) => Verdict::CounterexampleCandidate,
        (Truth::True, Truth::Indeterminate) => Verdict::Indeterminate,
    }
}

/// The three comparisons of a report, each as the truth value and the
/// compared right-hand side.
struct Decisions {
    bound: Bound,
    hypothesis: Truth,
    threshold: Bound,
    meets: Truth,
    cutoff: Truth,
}

fn assemble<F: Field>(
    points: &[Point<F>],
    r: usize,
    rich: RichLineSet<F>,
    decide: impl FnOnce(usize, Option<usize>) -> Decisions,
    parts: (Quantity, Quantity, Constants, Option<Quantity>, Vec<String>),
) -> Result<TrichotomyReport<F>> {
    let (concentration, search) = find_concentration(points, &rich)?;
    let members = concentration.as_ref().map(|c| c.members.len());
    let dec = decide(rich.len(), members);
    let cutoff_line = match dec.cutoff {
        Truth::True => rich.lines().next().cloned(),
        _ => None,
    };
    let meets = match (search, dec.meets) {
        (Search::RichestLine, Truth::False) => Truth::Indeterminate,
        (_, m) => m,
    };
    let (epsilon, alpha, constants, rho, substitutions) = parts;
    Ok(TrichotomyReport {
        field: F::KIND,
        n: points.len(),
        d: points.first().map_or(0, Point::dim),
        r,
        epsilon,
        alpha,
        constants,
        rich_count: rich.len(),
        verdict: verdict(dec.hypothesis, meets),
        bound: dec.bound,
        hypothesis_holds: dec.hypothesis,
        threshold: dec.threshold,
        concentration,
        concentration_search: search,
        concentration_meets_threshold: meets,
        cutoff_triggered: dec.cutoff,
        cutoff_line,
        rho,
        substitutions,
    })
}

/// Runs the trichotomy with exponent `epsilon`, slack `alpha` and
/// constants `C`, `c`.
///
/// The hypothesis is `|L_r| > C·α·n^{2+ε}/r^{d+1}`; the conclusion is a
/// hyperplane holding at least `c·α·n^{1+ε}/r^{d-1}` points; the cutoff is
/// `r >= α^{1/d}·n^{(1+ε)/d}`. The best hyperplane is always computed.
pub fn verify_trichotomy<F: Field>(
    points: &[Point<F>],
    r: usize,
    epsilon: &Rational,
    constants: &Constants,
    alpha: &Rational,
) -> Result<TrichotomyReport<F>> {
    check_constants(r, constants)?;
    if !epsilon.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "epsilon {epsilon} must be positive"
        )));
    }
    if *alpha < Rational::one() {
        return Err(Error::InvalidArgument(format!(
            "alpha {alpha} must be at least 1"
        )));
    }
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let rich = enumerate_rich_lines(points, r)?;
    let n = points.len() as u64;
    let d = points[0].dim() as i64;
    let nq = Rational::from(n as i64);
    let rq = Rational::from(r as i64);
    let decide = |count: usize, members: Option<usize>| {
        // |L| > C α n^2 r^{-(d+1)} n^ε
        let bound_scale = &constants.big_c * alpha * &nq * &nq * int_pow(&rq, -(d + 1));
        let (ord, method) = compare_with_power(&(Rational::from(count) / &bound_scale), n, epsilon);
        let bound = Bound {
            value: scaled_power(&bound_scale, n, epsilon),
            method,
        };
        let hypothesis = Truth::from_order(ord, true);
        // S >= c α n r^{-(d-1)} n^ε
        let threshold_scale = &constants.small_c * alpha * &nq * int_pow(&rq, -(d - 1));
        let (ord, method) = compare_with_power(
            &(Rational::from(members.unwrap_or(0)) / &threshold_scale),
            n,
            epsilon,
        );
        let threshold = Bound {
            value: scaled_power(&threshold_scale, n, epsilon),
            method,
        };
        let meets = if members.is_some() {
            Truth::from_order(ord, false)
        } else {
            Truth::False
        };
        // r^d >= α n n^ε
        let (ord, _) = compare_with_power(&(int_pow(&rq, d) / (alpha * &nq)), n, epsilon);
        let cutoff = Truth::from_order(ord, false);
        Decisions {
            bound,
            hypothesis,
            threshold,
            meets,
            cutoff,
        }
    };
    let parts = (
        Quantity::Exact(epsilon.clone()),
        Quantity::Exact(alpha.clone()),
        constants.clone(),
        None,
        Vec::new(),
    );
    assemble(points, r, rich, decide, parts)
}

/// The corollary form: `ρ = log r / log n`, `ε = ρ/2`, `α = α'·r^{1/2}`.
///
/// These substitutions make every comparison rational: the bound becomes
/// `C·α'·n²/r^d`, the threshold `c·α'·n/r^{d-2}` and the cutoff
/// `r^{d-1} >= α'·n`. Requires `r >= n^{ε₀}`, `n >= 2`, `α' > 0` and
/// `α'²·r >= 1` (so `α >= 1`).
pub fn verify_cheap_corollary<F: Field>(
    points: &[Point<F>],
    r: usize,
    epsilon0: &Rational,
    constants: &Constants,
    alpha_prime: &Rational,
) -> Result<TrichotomyReport<F>> {
    check_constants(r, constants)?;
    let n = points.len();
    if n < 2 {
        return Err(Error::TooSmall { needed: 2, got: n });
    }
    if !epsilon0.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "epsilon0 {epsilon0} must be positive"
        )));
    }
    if !alpha_prime.is_positive() || alpha_prime * alpha_prime * Rational::from(r) < Rational::one()
    {
        return Err(Error::InvalidArgument(format!(
            "alpha' {alpha_prime} gives alpha below 1"
        )));
    }
    let rq = Rational::from(r);
    match compare_with_power(&rq, n as u64, epsilon0).0 {
        Some(Ordering::Less) => return Err(Error::CutoffViolated { r, n }),
        None => {
            return Err(Error::InvalidArgument(format!(
                "r = {r} is within rounding of n^epsilon0"
            )))
        }
        _ => {}
    }
    let rho_iv = precision::log_ratio(r as u64, n as u64)?;
    let rho = Quantity::approx(&rho_iv);
    let epsilon = Quantity::approx(&rho_iv.scale(&Rational::new(1, 2)));
    let alpha = match perfect_square(r) {
        Some(s) => Quantity::Exact(alpha_prime * &Rational::from(s)),
        None => {
            let iv = precision::pow(&rq, &Rational::new(1, 2))?;
            Quantity::approx(&iv.scale(alpha_prime))
        }
    };
    let d = points[0].dim() as i64;
    let rich = enumerate_rich_lines(points, r)?;
    let nq = Rational::from(n);
    let decide = |count: usize, members: Option<usize>| {
        let bound_value = &constants.big_c * alpha_prime * &nq * &nq * int_pow(&rq, -d);
        let hypothesis = Truth::from_bool(Rational::from(count) > bound_value);
        let threshold_value = &constants.small_c * alpha_prime * &nq * int_pow(&rq, -(d - 2));
        let meets = members.map_or(Truth::False, |m| {
            Truth::from_bool(Rational::from(m) >= threshold_value)
        });
        let cutoff = Truth::from_bool(int_pow(&rq, d - 1) >= alpha_prime * &nq);
        Decisions {
            bound: Bound {
                value: Quantity::Exact(bound_value),
                method: Method::ExactRational,
            },
            hypothesis,
            threshold: Bound {
                value: Quantity::Exact(threshold_value),
                method: Method::ExactRational,
            },
            meets,
            cutoff,
        }
    };
    let substitutions = vec![
        format!("rho = log r / log n = log {r} / log {n} = {}", rho.render()),
        format!("epsilon = rho / 2 = {}", epsilon.render()),
        format!(
            "alpha = alpha' * r^(1/2) = {alpha_prime} * {r}^(1/2) = {}",
            alpha.render()
        ),
        "n^epsilon = r^(1/2), so alpha * n^epsilon = alpha' * r".to_string(),
        "bound: C * alpha * n^(2+epsilon) / r^(d+1) = C * alpha' * n^2 / r^d".to_string(),
        "threshold: c * alpha * n^(1+epsilon) / r^(d-1) = c * alpha' * n / r^(d-2)".to_string(),
        "cutoff: r^d >= alpha * n^(1+epsilon) <=> r^(d-1) >= alpha' * n".to_string(),
    ];
    let parts = (epsilon, alpha, constants.clone(), Some(rho), substitutions);
    assemble(points, r, rich, decide, parts)
}

fn perfect_square(r: usize) -> Option<usize> {
    let s = (r as f64).sqrt().round() as usize;
    (s.saturating_sub(1)..=s + 1).find(|&t| t * t == r)
}
