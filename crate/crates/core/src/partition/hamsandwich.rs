//! Approximate simultaneous bisection of finite point sets by a hyperplane.
//!
//! A floating-point search proposes a normal; every returned functional is
//! then rounded to rationals and checked with exact arithmetic, so the
//! bisection guarantee never rests on floating point.

use nalgebra::{DMatrix, DVector};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::rref;
use crate::scalar::Rational;

/// `h(x) = normal . x + offset`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineFunctional {
    pub normal: Vec<Rational>,
    pub offset: Rational,
}

impl AffineFunctional {
    pub fn eval(&self, x: &[Rational]) -> Rational {
        let mut acc = self.offset.clone();
        for (a, y) in self.normal.iter().zip(x) {
            if !a.is_zero() {
                acc += &(a * y);
            }
        }
        acc
    }
}

/// Iteration limits for [`approx_ham_sandwich_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub restarts: usize,
    pub iterations: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            restarts: 100,
            iterations: 300,
        }
    }
}

/// Bits kept when rounding a floating-point normal to a dyadic rational.
const ROUND_BITS: u32 = 30;
/// Iterations to wait after a failed exact check before the next one.
const EXACT_RETRY_GAP: usize = 10;

/// Largest number of points allowed strictly on either side of a set of
/// size `s`: `floor((1/2 + delta) * s)`.
pub fn side_cap(s: usize, delta: &Rational) -> usize {
    let half = Rational::new(1, 2);
    let cap = ((half + delta) * Rational::from(s)).floor();
    cap.numer().try_into().unwrap_or(usize::MAX)
}

/// Whether `h` leaves at most `(1/2 + delta)|S|` points of every set `S` on
/// each open side.
pub fn bisects(h: &AffineFunctional, sets: &[Vec<Vec<Rational>>], delta: &Rational) -> bool {
    sets.iter().all(|s| {
        let cap = side_cap(s.len(), delta);
        let (mut pos, mut neg) = (0, 0);
        for x in s {
            match h.eval(x).signum() {
                1 => pos += 1,
                -1 => neg += 1,
                _ => {}
            }
        }
        pos <= cap && neg <= cap
    })
}

/// Seeded [`approx_ham_sandwich_with`] using the default budget.
pub fn approx_ham_sandwich(
    sets: &[Vec<Vec<Rational>>],
    delta: &Rational,
    seed: u64,
) -> Result<AffineFunctional> {
    approx_ham_sandwich_with(
        sets,
        delta,
        &mut ChaCha8Rng::seed_from_u64(seed),
        SearchBudget::default(),
    )
}

/// An affine functional on `R^M` leaving at most `(1/2 + delta)|S|` points
/// of every set `S` strictly on each side.
///
/// Requires `1 <= sets.len() <= M` and `0 <= delta < 1/2`. The search runs a
/// Gauss-Newton iteration on a tanh-smoothed signed balance of every set,
/// annealing the smoothing width, from random starting normals drawn from
/// `rng`. Candidates are rounded to dyadic rationals. Sets whose size is
/// `2 * cap + 1` must have a point on the hyperplane; for those the rounded
/// candidate is projected exactly onto the hyperplanes through their median
/// points, and otherwise the offset is chosen by an exact sweep.
pub fn approx_ham_sandwich_with(
    sets: &[Vec<Vec<Rational>>],
    delta: &Rational,
    rng: &mut ChaCha8Rng,
    budget: SearchBudget,
) -> Result<AffineFunctional> {
    let Some(first) = sets.iter().flatten().next() else {
        return Err(Error::EmptyInput);
    };
    if sets.iter().any(Vec::is_empty) {
        return Err(Error::EmptyInput);
    }
    let dim = first.len();
    if let Some(x) = sets.iter().flatten().find(|x| x.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: x.len(),
        });
    }
    if sets.len() > dim.max(1) {
        return Err(Error::InvalidArgument(format!(
            "{} sets cannot be bisected in dimension {dim}",
            sets.len()
        )));
    }
    if delta.is_negative() || *delta >= Rational::new(1, 2) {
        return Err(Error::InvalidArgument(format!(
            "delta {delta} outside [0, 1/2)"
        )));
    }

    let caps: Vec<usize> = sets.iter().map(|s| side_cap(s.len(), delta)).collect();
    let guide = Guide::new(sets, &caps);

    for _ in 0..budget.restarts {
        let mut c = DVector::from_fn(dim + 1, |_, _| rng.random_range(-1.0..1.0));
        c /= c.norm();
        let mut temp = 1.0;
        let mut next_exact = 0;
        for it in 0..=budget.iterations {
            let v = &guide.x * &c;
            if it >= next_exact && guide.feasible(&v) {
                if let Some(h) = guide.exact_candidate(&c, &v, sets, delta) {
                    return Ok(h);
                }
                next_exact = it + EXACT_RETRY_GAP;
            }
            if it == budget.iterations {
                break;
            }
            c = guide.step(&c, &v, temp);
            temp = (temp * 0.9).max(1e-3);
        }
    }
    Err(Error::SearchFailed {
        attempts: budget.restarts,
    })
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

/// Floating-point view of the sets: robustly standardized coordinates plus
/// a constant column, one row per point.
struct Guide {
    x: DMatrix<f64>,
    center: Vec<f64>,
    scale: Vec<f64>,
    rows: Vec<Vec<usize>>,
    caps: Vec<usize>,
    /// Half-width of the band treated as zero for sets that need a point on
    /// the hyperplane; `c` is kept at unit length so this is scale-free.
    eta: f64,
}

impl Guide {
    fn new(sets: &[Vec<Vec<Rational>>], caps: &[usize]) -> Self {
        let dim = sets[0][0].len();
        let raw: Vec<Vec<f64>> = sets
            .iter()
            .flatten()
            .map(|x| x.iter().map(Rational::to_f64).collect())
            .collect();
        let n = raw.len();
        let mut center = vec![0.0; dim];
        let mut scale = vec![0.0; dim];
        // Median center and median absolute deviation: lifted columns are
        // heavy-tailed and a standard deviation is set by the outliers.
        for k in 0..dim {
            let mut col: Vec<f64> = raw.iter().map(|r| r[k]).collect();
            center[k] = median(&mut col);
            let mut dev: Vec<f64> = col.iter().map(|x| (x - center[k]).abs()).collect();
            let mad = median(&mut dev);
            let var = col.iter().map(|x| (x - center[k]).powi(2)).sum::<f64>() / n as f64;
            scale[k] = if mad > 0.0 {
                mad
            } else if var > 0.0 {
                var.sqrt()
            } else {
                1.0
            };
        }
        let x = DMatrix::from_fn(n, dim + 1, |i, k| {
            if k == dim {
                1.0
            } else {
                (raw[i][k] - center[k]) / scale[k]
            }
        });
        let eta = 1e-9 * x.row_iter().map(|r| r.norm()).fold(0.0, f64::max);
        let mut rows = Vec::with_capacity(sets.len());
        let mut next = 0;
        for s in sets {
            rows.push((next..next + s.len()).collect());
            next += s.len();
        }
        Guide {
            x,
            center,
            scale,
            rows,
            caps: caps.to_vec(),
            eta,
        }
    }

    fn is_tight(&self, s: usize) -> bool {
        self.rows[s].len() == 2 * self.caps[s] + 1
    }

    /// Floating-point version of the acceptance test, with a small band
    /// around zero for sets that need a point on the hyperplane.
    fn feasible(&self, v: &DVector<f64>) -> bool {
        self.rows.iter().enumerate().all(|(s, rows)| {
            let band = if self.is_tight(s) { self.eta } else { 0.0 };
            let pos = rows.iter().filter(|&&i| v[i] > band).count();
            let neg = rows.iter().filter(|&&i| v[i] < -band).count();
            pos <= self.caps[s] && neg <= self.caps[s]
        })
    }

    /// Per-set smoothing widths `temp * max(median_{i in S} |v_i|, floor)`
    /// with `floor = 1e-3 * rms(v)`. The median keeps the gradient alive for
    /// sets far from the hyperplane; the floor keeps sets that must meet the
    /// hyperplane from becoming scale-invariant.
    fn widths(&self, v: &DVector<f64>, temp: f64) -> Vec<f64> {
        let floor = 1e-3 * v.norm() / (v.len() as f64).sqrt();
        self.rows
            .iter()
            .map(|rows| {
                let mut a: Vec<f64> = rows.iter().map(|&i| v[i].abs()).collect();
                (temp * median(&mut a).max(floor)).max(f64::MIN_POSITIVE)
            })
            .collect()
    }

    /// `F_s = mean_{i in S} tanh(v_i / tau_s)`.
    fn residual(&self, v: &DVector<f64>, taus: &[f64]) -> DVector<f64> {
        DVector::from_iterator(
            self.rows.len(),
            self.rows.iter().zip(taus).map(|(rows, tau)| {
                rows.iter().map(|&i| (v[i] / tau).tanh()).sum::<f64>() / rows.len() as f64
            }),
        )
    }

    /// One Gauss-Newton step on `F` with fixed widths, backtracked until
    /// `|F|` decreases; returns `c` unchanged when no trial step does.
    fn step(&self, c: &DVector<f64>, v: &DVector<f64>, temp: f64) -> DVector<f64> {
        let cols = self.x.ncols();
        let taus = self.widths(v, temp);
        let f = self.residual(v, &taus);
        let mut jac = DMatrix::zeros(self.rows.len(), cols);
        for (s, rows) in self.rows.iter().enumerate() {
            let inv = 1.0 / rows.len() as f64;
            for &i in rows {
                let t = (v[i] / taus[s]).tanh();
                let dt = (1.0 - t * t) / taus[s] * inv;
                for col in 0..cols {
                    jac[(s, col)] += dt * self.x[(i, col)];
                }
            }
        }
        let Ok(mut dc): std::result::Result<DVector<f64>, _> =
            jac.svd(true, true).solve(&(-&f), 1e-12)
        else {
            return c.clone();
        };
        let norm = dc.norm();
        if !norm.is_finite() || norm == 0.0 {
            return c.clone();
        }
        if norm > 0.5 {
            dc *= 0.5 / norm;
        }
        let base = f.norm();
        let mut alpha = 1.0;
        for _ in 0..6 {
            let next = c + &dc * alpha;
            let len = next.norm();
            if len > 0.0 {
                let next = next / len;
                if self.residual(&(&self.x * &next), &taus).norm() < base {
                    return next;
                }
            }
            alpha *= 0.5;
        }
        c.clone()
    }

    /// Rounds the standardized coefficients `c` back to the input coordinates
    /// and tries to make an exactly verified functional out of them.
    fn exact_candidate(
        &self,
        c: &DVector<f64>,
        v: &DVector<f64>,
        sets: &[Vec<Vec<Rational>>],
        delta: &Rational,
    ) -> Option<AffineFunctional> {
        let dim = self.center.len();
        let mut a: Vec<f64> = (0..dim).map(|k| c[k] / self.scale[k]).collect();
        let mut t = c[dim] - (0..dim).map(|k| a[k] * self.center[k]).sum::<f64>();
        let top = a.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(t.abs());
        if top == 0.0 || !top.is_finite() {
            return None;
        }
        a.iter_mut().for_each(|x| *x /= top);
        t /= top;
        let normal: Vec<Rational> = a
            .iter()
            .map(|&x| Rational::from_f64_dyadic(x, ROUND_BITS))
            .collect();
        let offset = Rational::from_f64_dyadic(t, ROUND_BITS);

        let tight: Vec<&Vec<Rational>> = (0..sets.len())
            .filter(|&s| self.is_tight(s))
            .map(|s| {
                let (local, _) = self.rows[s]
                    .iter()
                    .enumerate()
                    .min_by(|(_, &i), (_, &j)| v[i].abs().total_cmp(&v[j].abs()))
                    .expect("sets are nonempty");
                &sets[s][local]
            })
            .collect();

        let h = if tight.is_empty() {
            let values: Vec<Vec<Rational>> = sets
                .iter()
                .map(|s| {
                    s.iter()
                        .map(|x| {
                            AffineFunctional {
                                normal: normal.clone(),
                                offset: Rational::zero(),
                            }
                            .eval(x)
                        })
                        .collect()
                })
                .collect();
            let shift = exact_offset(values, &self.caps)?;
            AffineFunctional {
                normal,
                offset: -shift,
            }
        } else {
            project_through(AffineFunctional { normal, offset }, &tight)?
        };
        (h.normal.iter().any(|x| !x.is_zero()) && bisects(&h, sets, delta)).then_some(h)
    }
}

/// A threshold `t` with at most `caps[s]` values of set `s` on either side,
/// if one exists. Prefers the rational with the smallest denominator in the
/// feasible interval.
fn exact_offset(mut values: Vec<Vec<Rational>>, caps: &[usize]) -> Option<Rational> {
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for (vals, &cap) in values.iter_mut().zip(caps) {
        vals.sort();
        let s = vals.len();
        if s > cap {
            let l = &vals[s - cap - 1];
            if lo.as_ref().is_none_or(|x| l > x) {
                lo = Some(l.clone());
            }
            let h = &vals[cap];
            if hi.as_ref().is_none_or(|x| h < x) {
                hi = Some(h.clone());
            }
        }
    }
    match (lo, hi) {
        (Some(l), Some(h)) if l == h => Some(l),
        (Some(l), Some(h)) if l < h => Some(Rational::simplest_between(&l, &h)),
        (Some(_), Some(_)) => None,
        (l, h) => Some(l.or(h).unwrap_or_else(Rational::zero)),
    }
}

/// Orthogonal projection of `(normal, offset)` onto the functionals that
/// vanish at every point of `through`.
fn project_through(h: AffineFunctional, through: &[&Vec<Rational>]) -> Option<AffineFunctional> {
    let cols = h.normal.len() + 1;
    let rows: Vec<Vec<Rational>> = through
        .iter()
        .map(|x| {
            x.iter()
                .cloned()
                .chain(std::iter::once(Rational::one()))
                .collect()
        })
        .collect();
    let basis = rref(rows, cols).rows;
    let w: Vec<Rational> = h
        .normal
        .iter()
        .cloned()
        .chain(std::iter::once(h.offset))
        .collect();
    let dot =
        |a: &[Rational], b: &[Rational]| -> Rational { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    let k = basis.len();
    // Solve (E E^T) lambda = E w via the reduced form of the augmented system.
    let system: Vec<Vec<Rational>> = basis
        .iter()
        .map(|ri| {
            basis
                .iter()
                .map(|rj| dot(ri, rj))
                .chain(std::iter::once(dot(ri, &w)))
                .collect()
        })
        .collect();
    let solved = rref(system, k + 1);
    if solved.pivots.len() != k || solved.pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    let mut out = w;
    for (row, lambda) in basis.iter().zip(solved.rows.iter().map(|r| &r[k])) {
        for (o, e) in out.iter_mut().zip(row) {
            *o -= &(lambda * e);
        }
    }
    let offset = out.pop().expect("offset column");
    Some(AffineFunctional {
        normal: out,
        offset,
    })
}
