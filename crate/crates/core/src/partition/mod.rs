//! Polynomial partitioning by iterated ham-sandwich cuts of Veronese lifts,
//! and exact counting of the pieces a line is cut into.

mod hamsandwich;
mod mpoly;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geom::{Line, Point};
use crate::scalar::{gcd_squarefree, sturm_distinct_real_roots, Rational, UPoly};

pub use hamsandwich::{
    approx_ham_sandwich, approx_ham_sandwich_with, bisects, side_cap, AffineFunctional,
    SearchBudget,
};
pub use mpoly::{lift_coords, lift_dimension, monomial_exponents, MPoly};

/// All monomials of `p` of total degree `1..=deg`, in the order of
/// [`monomial_exponents`].
pub fn veronese_lift(p: &Point<Rational>, deg: u32) -> Result<Point<Rational>> {
    if deg == 0 {
        return Err(Error::InvalidArgument(
            "lift degree must be at least 1".into(),
        ));
    }
    Ok(Point::from_coords(lift_coords(p.coords(), deg)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

/// One sign per bisector, written as a string of `+` and `-`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SignVector(pub Vec<Sign>);

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                Sign::Pos => "+",
                Sign::Neg => "-",
            })?;
        }
        Ok(())
    }
}

impl FromStr for SignVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '+' => Ok(Sign::Pos),
                '-' => Ok(Sign::Neg),
                other => Err(Error::Parse(format!("bad sign character {other:?}"))),
            })
            .collect::<Result<_>>()
            .map(SignVector)
    }
}

impl Serialize for SignVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SignVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CellAssignment {
    Cell(SignVector),
    Boundary,
}

/// Connected components of a line minus the zero set, or `Contained` when
/// the line lies in the zero set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Visits {
    Contained,
    Components(usize),
}

/// Result of [`build_partition`]. The partitioning polynomial is the product
/// of `bisectors`; `cells` groups the points off its zero set by sign
/// vector, and `boundary` lists the points on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub dim: usize,
    pub n: usize,
    pub bisectors: Vec<MPoly>,
    pub degrees: Vec<u32>,
    pub total_degree: u32,
    pub delta: Rational,
    pub seed: u64,
    pub cells: BTreeMap<SignVector, Vec<usize>>,
    pub boundary: Vec<usize>,
}

impl Partition {
    pub fn rounds(&self) -> usize {
        self.bisectors.len()
    }

    pub fn max_cell_size(&self) -> usize {
        self.cells.values().map(Vec::len).max().unwrap_or(0)
    }

    /// `n * (1/2 + delta)^rounds`.
    pub fn occupancy_bound(&self) -> Rational {
        (Rational::new(1, 2) + &self.delta).pow(self.rounds() as u32) * Rational::from(self.n)
    }

    pub fn occupancy_holds(&self) -> bool {
        Rational::from(self.max_cell_size()) <= self.occupancy_bound()
    }

    /// Measured `c` in `D <= c * 2^(rounds / dim)`.
    pub fn degree_constant(&self) -> f64 {
        self.total_degree as f64 / 2f64.powf(self.rounds() as f64 / self.dim as f64)
    }
}

/// Affine change of coordinates `z = (x - center) / scale` that maps the
/// bounding box of the input into `[-1, 1]^m`. Scales are powers of two and
/// centers are the simplest rationals inside each coordinate range.
struct Normalizer {
    center: Vec<Rational>,
    inv_scale: Vec<Rational>,
}

impl Normalizer {
    fn new(points: &[Point<Rational>]) -> Self {
        let m = points[0].dim();
        let mut center = Vec::with_capacity(m);
        let mut inv_scale = Vec::with_capacity(m);
        for k in 0..m {
            let lo = points
                .iter()
                .map(|p| &p.coords()[k])
                .min()
                .expect("nonempty");
            let hi = points
                .iter()
                .map(|p| &p.coords()[k])
                .max()
                .expect("nonempty");
            let c = if lo == hi {
                lo.clone()
            } else {
                Rational::simplest_between(lo, hi)
            };
            let reach = (hi - &c).max(&c - lo);
            let mut scale = Rational::one();
            while scale < reach {
                scale = scale * Rational::from(2);
            }
            while !reach.is_zero() && scale.clone() / Rational::from(2) >= reach {
                scale = scale / Rational::from(2);
            }
            center.push(c);
            inv_scale.push(scale.recip());
        }
        Normalizer { center, inv_scale }
    }

    fn apply(&self, p: &Point<Rational>) -> Vec<Rational> {
        p.coords()
            .iter()
            .zip(self.center.iter().zip(&self.inv_scale))
            .map(|(x, (c, s))| (x - c) * s)
            .collect()
    }

    /// `sum_k a_k * mono_k(z(x)) + offset` expanded in the original
    /// coordinates `x`.
    fn pull_back(&self, h: &AffineFunctional, deg: u32) -> MPoly {
        let m = self.center.len();
        let z: Vec<MPoly> = (0..m)
            .map(|i| {
                MPoly::variable(m, i)
                    .add(&MPoly::constant(m, -self.center[i].clone()))
                    .scale(&self.inv_scale[i])
            })
            .collect();
        let powers: Vec<Vec<MPoly>> = z
            .iter()
            .map(|zi| {
                let mut table = vec![MPoly::constant(m, Rational::one())];
                for k in 1..=deg as usize {
                    let next = table[k - 1].mul(zi);
                    table.push(next);
                }
                table
            })
            .collect();
        let mut out = MPoly::constant(m, h.offset.clone());
        for (e, a) in monomial_exponents(m, deg).iter().zip(&h.normal) {
            if a.is_zero() {
                continue;
            }
            let mono = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .fold(MPoly::constant(m, a.clone()), |acc, (i, &k)| {
                    acc.mul(&powers[i][k as usize])
                });
            out = out.add(&mono);
        }
        out
    }
}

/// Degrees tried above the minimal one when the bisection search fails.
pub const EXTRA_DEGREES: u32 = 1;

/// Smallest `d >= 1` with `C(m + d, d) - 1 >= cells`.
pub fn bisector_degree(m: usize, cells: usize) -> u32 {
    let mut d = 1;
    while lift_dimension(m, d) < cells {
        d += 1;
    }
    d
}

/// [`build_partition_with`] using the default search budget.
pub fn build_partition(
    points: &[Point<Rational>],
    rounds: usize,
    delta: &Rational,
    seed: u64,
) -> Result<Partition> {
    build_partition_with(points, rounds, delta, seed, SearchBudget::default())
}

/// Splits `points` (in `R^m`) by `rounds` polynomial bisectors.
///
/// Round `j` lifts the points of every nonempty cell by the smallest degree
/// whose lift dimension reaches the number of cells, bisects all cells at
/// once with [`approx_ham_sandwich_with`], and pulls the cut back to a
/// polynomial in the original coordinates. If the search fails at that
/// degree it is retried up to [`EXTRA_DEGREES`] degrees higher; the
/// recorded degree is the one used. Points where the bisector
/// vanishes move to the boundary. If every point is already on the
/// boundary the round's bisector is the constant 1 of degree 0.
pub fn build_partition_with(
    points: &[Point<Rational>],
    rounds: usize,
    delta: &Rational,
    seed: u64,
    budget: SearchBudget,
) -> Result<Partition> {
    if rounds == 0 {
        return Err(Error::InvalidArgument("rounds must be at least 1".into()));
    }
    if points.len() < 2 {
        return Err(Error::TooSmall {
            needed: 2,
            got: points.len(),
        });
    }
    let m = points[0].dim();
    if let Some(p) = points.iter().find(|p| p.dim() != m) {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: p.dim(),
        });
    }
    if delta.is_negative() || *delta >= Rational::new(1, 2) {
        return Err(Error::InvalidArgument(format!(
            "delta {delta} outside [0, 1/2)"
        )));
    }

    let norm = Normalizer::new(points);
    let normalized: Vec<Vec<Rational>> = points.iter().map(|p| norm.apply(p)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cells: Vec<(SignVector, Vec<usize>)> =
        vec![(SignVector::default(), (0..points.len()).collect())];
    let mut boundary = Vec::new();
    let mut bisectors = Vec::with_capacity(rounds);
    let mut degrees = Vec::with_capacity(rounds);

    for _ in 0..rounds {
        if cells.is_empty() {
            bisectors.push(MPoly::constant(m, Rational::one()));
            degrees.push(0);
            continue;
        }
        let min_deg = bisector_degree(m, cells.len());
        let mut found = None;
        for deg in min_deg..=min_deg + EXTRA_DEGREES {
            let lifted: Vec<Vec<Vec<Rational>>> = cells
                .iter()
                .map(|(_, idx)| {
                    idx.iter()
                        .map(|&i| lift_coords(&normalized[i], deg))
                        .collect()
                })
                .collect();
            match approx_ham_sandwich_with(&lifted, delta, &mut rng, budget) {
                Ok(h) => {
                    found = Some((deg, lifted, h));
                    break;
                }
                Err(Error::SearchFailed { .. }) if deg < min_deg + EXTRA_DEGREES => {}
                Err(e) => return Err(e),
            }
        }
        let (deg, lifted, h) = found.expect("the last degree returns or errors");

        let mut next = Vec::with_capacity(2 * cells.len());
        for ((signs, idx), lifted_cell) in cells.into_iter().zip(&lifted) {
            let (mut pos, mut neg) = (Vec::new(), Vec::new());
            for (&i, y) in idx.iter().zip(lifted_cell) {
                match h.eval(y).signum() {
                    1 => pos.push(i),
                    -1 => neg.push(i),
                    _ => boundary.push(i),
                }
            }
            for (sign, members) in [(Sign::Pos, pos), (Sign::Neg, neg)] {
                if !members.is_empty() {
                    let mut s = signs.clone();
                    s.0.push(sign);
                    next.push((s, members));
                }
            }
        }
        cells = next;
        bisectors.push(norm.pull_back(&h, deg));
        degrees.push(deg);
    }

    boundary.sort_unstable();
    Ok(Partition {
        dim: m,
        n: points.len(),
        total_degree: degrees.iter().sum(),
        bisectors,
        degrees,
        delta: delta.clone(),
        seed,
        cells: cells.into_iter().collect(),
        boundary,
    })
}

/// Exact sign of every bisector at `p`.
pub fn assign_cell(p: &Point<Rational>, part: &Partition) -> Result<CellAssignment> {
    if p.dim() != part.dim {
        return Err(Error::DimensionMismatch {
            expected: part.dim,
            found: p.dim(),
        });
    }
    let mut signs = Vec::with_capacity(part.rounds());
    for b in &part.bisectors {
        match b.eval(p.coords())?.signum() {
            1 => signs.push(Sign::Pos),
            -1 => signs.push(Sign::Neg),
            _ => return Ok(CellAssignment::Boundary),
        }
    }
    Ok(CellAssignment::Cell(SignVector(signs)))
}

/// Product of the bisectors restricted to `line`, as a polynomial in the
/// line parameter. Each factor is scaled by a positive constant to a
/// primitive integer polynomial first, which leaves every sign unchanged.
pub fn restrict_partition(line: &Line<Rational>, part: &Partition) -> Result<UPoly> {
    if line.dim() != part.dim {
        return Err(Error::DimensionMismatch {
            expected: part.dim,
            found: line.dim(),
        });
    }
    let mut q = UPoly::constant(Rational::one());
    for b in &part.bisectors {
        let factor = b.restrict_to_line(line.base().coords(), line.direction())?;
        let factor = UPoly::new(
            factor
                .primitive_integer()
                .into_iter()
                .map(Rational::from)
                .collect(),
        );
        q = &q * &factor;
        if q.is_zero() {
            break;
        }
    }
    Ok(q)
}

/// Number of connected components of `line` minus the zero set of the
/// partitioning polynomial: distinct real roots of the restriction, plus one.
pub fn line_cell_visits(line: &Line<Rational>, part: &Partition) -> Result<Visits> {
    let q = restrict_partition(line, part)?;
    if q.is_zero() {
        return Ok(Visits::Contained);
    }
    Ok(Visits::Components(
        sturm_distinct_real_roots(&gcd_squarefree(&q)?)? + 1,
    ))
}

/// Visit counts of a family of lines against one partition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellVisitStats {
    pub total_degree: u32,
    pub visits: Vec<Visits>,
    pub contained: usize,
    pub max_components: usize,
    pub total_components: usize,
}

impl CellVisitStats {
    /// Every line that is not contained is cut into at most `D + 1` pieces.
    pub fn within_degree_bound(&self) -> bool {
        self.max_components <= self.total_degree as usize + 1
    }
}

pub fn cell_visit_stats(lines: &[Line<Rational>], part: &Partition) -> Result<CellVisitStats> {
    let visits: Vec<Visits> = lines
        .par_iter()
        .map(|l| line_cell_visits(l, part))
        .collect::<Result<_>>()?;
    let components = visits.iter().filter_map(|v| match v {
        Visits::Components(c) => Some(*c),
        Visits::Contained => None,
    });
    Ok(CellVisitStats {
        total_degree: part.total_degree,
        contained: visits.iter().filter(|v| **v == Visits::Contained).count(),
        max_components: components.clone().max().unwrap_or(0),
        total_components: components.sum(),
        visits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::line_through;

    fn q(v: i64) -> Rational {
        Rational::from(v)
    }

    fn rp(v: &[i64]) -> Point<Rational> {
        Point::new(v.iter().map(|&x| q(x)).collect()).unwrap()
    }

    fn manual(bisectors: Vec<MPoly>) -> Partition {
        let dim = bisectors[0].vars();
        let degrees: Vec<u32> = bisectors.iter().map(|b| b.degree() as u32).collect();
        Partition {
            dim,
            n: 0,
            total_degree: degrees.iter().sum(),
            bisectors,
            degrees,
            delta: Rational::zero(),
            seed: 0,
            cells: BTreeMap::new(),
            boundary: vec![],
        }
    }

    fn random_points(n: usize, m: usize, seed: u64) -> Vec<Point<Rational>> {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                Point::new(
                    (0..m)
                        .map(|_| Rational::new(rng.random_range(-1000i64..=1000), 97))
                        .collect(),
                )
                .unwrap()
            })
            .collect()
    }

    #[test]
    fn veronese_examples() {
        assert_eq!(veronese_lift(&rp(&[2]), 2).unwrap().coords(), &[q(2), q(4)]);
        assert_eq!(
            veronese_lift(&rp(&[2, 3]), 2).unwrap().coords(),
            &[q(2), q(3), q(4), q(6), q(9)]
        );
        assert!(veronese_lift(&rp(&[2, 3]), 0).is_err());
    }

    #[test]
    fn degree_schedule() {
        let ds: Vec<u32> = [1, 2, 4, 8, 16, 32]
            .iter()
            .map(|&k| bisector_degree(4, k))
            .collect();
        assert_eq!(ds, vec![1, 1, 1, 2, 3, 3]);
    }

    #[test]
    fn assign_examples() {
        let x = MPoly::variable(2, 0);
        let y = MPoly::variable(2, 1);
        let one = manual(vec![x.clone()]);
        assert_eq!(
            assign_cell(&rp(&[1, 0]), &one).unwrap(),
            CellAssignment::Cell("+".parse().unwrap())
        );
        assert_eq!(
            assign_cell(&rp(&[0, 5]), &one).unwrap(),
            CellAssignment::Boundary
        );
        let two = manual(vec![x, y]);
        assert_eq!(
            assign_cell(&rp(&[-1, 2]), &two).unwrap(),
            CellAssignment::Cell("-+".parse().unwrap())
        );
        assert!(assign_cell(&rp(&[1, 2, 3]), &two).is_err());
    }

    #[test]
    fn visit_examples() {
        let circle = MPoly::from_terms(
            2,
            [(vec![2, 0], q(1)), (vec![0, 2], q(1)), (vec![0, 0], q(-1))],
        );
        let x_axis = line_through(&rp(&[0, 0]), &rp(&[1, 0])).unwrap();
        assert_eq!(
            line_cell_visits(&x_axis, &manual(vec![circle])).unwrap(),
            Visits::Components(3)
        );
        let y_axis = line_through(&rp(&[0, 0]), &rp(&[0, 1])).unwrap();
        assert_eq!(
            line_cell_visits(&y_axis, &manual(vec![MPoly::variable(2, 0)])).unwrap(),
            Visits::Contained
        );
        let no_zeros = MPoly::from_terms(2, [(vec![2, 0], q(1)), (vec![0, 0], q(1))]);
        let diag = line_through(&rp(&[3, -1]), &rp(&[5, 2])).unwrap();
        assert_eq!(
            line_cell_visits(&diag, &manual(vec![no_zeros])).unwrap(),
            Visits::Components(1)
        );
    }

    #[test]
    fn one_dimensional_median_cut() {
        let pts: Vec<_> = [5, -3, 8, 0, 2, 11, -7].iter().map(|&x| rp(&[x])).collect();
        let part = build_partition(&pts, 1, &Rational::zero(), 0).unwrap();
        assert_eq!(part.degrees, vec![1]);
        assert!(part.cells.values().all(|c| c.len() <= 4));
        assert!(part.occupancy_holds());
    }

    #[test]
    fn identical_points_all_on_boundary() {
        let pts = vec![rp(&[1, 2]); 5];
        let part = build_partition(&pts, 2, &Rational::new(1, 20), 0).unwrap();
        assert!(part.cells.is_empty());
        assert_eq!(part.boundary, vec![0, 1, 2, 3, 4]);
        assert_eq!(part.degrees, vec![1, 0]);
    }

    #[test]
    fn random_plane_two_rounds() {
        let pts = random_points(64, 2, 5);
        let delta = Rational::new(1, 20);
        let part = build_partition(&pts, 2, &delta, 0).unwrap();
        assert!(part.cells.len() <= 4);
        assert!(part.max_cell_size() <= 19);
        assert!(part.occupancy_holds());
        let covered: usize = part.cells.values().map(Vec::len).sum::<usize>() + part.boundary.len();
        assert_eq!(covered, 64);
        for (signs, members) in &part.cells {
            for &i in members {
                assert_eq!(
                    assign_cell(&pts[i], &part).unwrap(),
                    CellAssignment::Cell(signs.clone())
                );
            }
        }
        for &i in &part.boundary {
            assert_eq!(
                assign_cell(&pts[i], &part).unwrap(),
                CellAssignment::Boundary
            );
        }
    }

    #[test]
    fn deterministic_and_serializable() {
        let pts = random_points(40, 3, 9);
        let delta = Rational::new(1, 10);
        let a = build_partition(&pts, 3, &delta, 4).unwrap();
        let b = build_partition(&pts, 3, &delta, 4).unwrap();
        assert_eq!(a, b);
        let text = serde_json::to_string(&a).unwrap();
        let back: Partition = serde_json::from_str(&text).unwrap();
        assert_eq!(back, a);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn visits_respect_degree() {
        let pts = random_points(48, 2, 2);
        let part = build_partition(&pts, 3, &Rational::new(1, 20), 1).unwrap();
        let lines: Vec<_> = pts
            .windows(2)
            .map(|w| line_through(&w[0], &w[1]).unwrap())
            .collect();
        let stats = cell_visit_stats(&lines, &part).unwrap();
        assert!(stats.within_degree_bound());
    }
}
