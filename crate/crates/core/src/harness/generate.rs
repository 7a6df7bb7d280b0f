//! Seeded configuration generators.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Flat, Line, Point};
use crate::scalar::{Field, FieldKind, GaussianRational, Rational};

use super::io::PointSet;

/// Scalars built from independently drawn rational components: one for
/// the reals, two (real and imaginary) for the Gaussian rationals.
pub trait Sample: Field {
    fn draw(next: &mut dyn FnMut() -> Rational) -> Self;
}

impl Sample for Rational {
    fn draw(next: &mut dyn FnMut() -> Rational) -> Self {
        next()
    }
}

impl Sample for GaussianRational {
    fn draw(next: &mut dyn FnMut() -> Rational) -> Self {
        let re = next();
        GaussianRational::new(re, next())
    }
}

/// Components `p/q` with `|p| <= spread` and `1 <= q <= max_den`.
fn sample_vec<F: Sample>(rng: &mut ChaCha8Rng, d: usize, spread: i64, max_den: i64) -> Vec<F> {
    let mut next = || {
        Rational::new(
            rng.random_range(-spread..=spread),
            rng.random_range(1..=max_den.max(1)),
        )
    };
    (0..d).map(|_| F::draw(&mut next)).collect()
}

fn check_dim(d: usize) -> Result<()> {
    if d == 0 || d > crate::geom::MAX_DIM {
        return Err(Error::DimensionOutOfRange(d));
    }
    Ok(())
}

/// The integer grid `{0, ..., k-1}^d`, in lexicographic order.
pub fn gen_grid<F: Field>(k: usize, d: usize) -> Result<Vec<Point<F>>> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("grid side {k} is below 2")));
    }
    check_dim(d)?;
    let n = k
        .checked_pow(d as u32)
        .filter(|&n| n <= crate::incidence::MAX_POINTS)
        .ok_or_else(|| {
            Error::InvalidArgument(format!(
                "grid {k}^{d} exceeds {} points",
                crate::incidence::MAX_POINTS
            ))
        })?;
    Ok((0..n)
        .map(|mut idx| {
            let mut coords = vec![F::zero(); d];
            for c in coords.iter_mut().rev() {
                *c = F::from_rational(Rational::from(idx % k));
                idx /= k;
            }
            Point::from_coords(coords)
        })
        .collect())
}

/// `n` distinct points drawn with every coordinate component an integer in
/// `[0, spread)`. Small spreads give many collinear triples.
pub fn gen_random<F: Sample>(n: usize, d: usize, spread: i64, seed: u64) -> Result<Vec<Point<F>>> {
    check_dim(d)?;
    if spread < 1 {
        return Err(Error::InvalidArgument(format!(
            "spread {spread} is below 1"
        )));
    }
    let components = if F::KIND == FieldKind::Complex {
        2 * d
    } else {
        d
    };
    let capacity = (spread as u128).saturating_pow(components as u32);
    if (n as u128) > capacity {
        return Err(Error::InvalidArgument(format!(
            "cannot draw {n} distinct points from {capacity}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(n);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let mut next = || Rational::from(rng.random_range(0..spread));
        let coords: Vec<F> = (0..d).map(|_| F::draw(&mut next)).collect();
        let p = Point::from_coords(coords);
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    Ok(out)
}

/// A seeded random hyperplane through a random base point, spanned by
/// small random directions, in canonical form.
pub fn random_hyperplane<F: Sample>(d: usize, rng: &mut ChaCha8Rng) -> Flat<F> {
    loop {
        let base = Point::from_coords(sample_vec::<F>(rng, d, 20, 4));
        let dirs: Vec<Vec<F>> = (0..d - 1).map(|_| sample_vec::<F>(rng, d, 9, 1)).collect();
        let flat = Flat::new(base, dirs);
        if flat.dim() == d - 1 {
            return flat;
        }
    }
}

/// Points of a planted configuration and the hyperplane they were planted
/// on.
#[derive(Debug, Clone)]
pub struct Planted<F: Field> {
    pub points: Vec<Point<F>>,
    pub hyperplane: Flat<F>,
}

/// `m` distinct random points on a seeded random hyperplane followed by
/// `n - m` distinct random points off it.
pub fn gen_hyperplane_planted<F: Sample>(
    m: usize,
    n: usize,
    d: usize,
    seed: u64,
) -> Result<Planted<F>> {
    check_dim(d)?;
    if d < 2 {
        return Err(Error::InvalidArgument("planting needs d >= 2".into()));
    }
    if m > n {
        return Err(Error::InvalidArgument(format!("m = {m} exceeds n = {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hyperplane = random_hyperplane::<F>(d, &mut rng);
    let mut seen = HashSet::with_capacity(n);
    let mut points = Vec::with_capacity(n);
    while points.len() < m {
        let ts: Vec<F> = sample_vec(&mut rng, d - 1, 50, 7);
        let mut coords = hyperplane.base().coords().to_vec();
        for (t, u) in ts.iter().zip(hyperplane.basis()) {
            for (c, x) in coords.iter_mut().zip(u) {
                *c = c.clone() + &(t.clone() * x);
            }
        }
        let p = Point::from_coords(coords);
        if seen.insert(p.clone()) {
            points.push(p);
        }
    }
    while points.len() < n {
        let p = Point::from_coords(sample_vec::<F>(&mut rng, d, 60, 7));
        if !hyperplane.contains_point(&p) && seen.insert(p.clone()) {
            points.push(p);
        }
    }
    Ok(Planted { points, hyperplane })
}

/// `n` distinct points on one seeded random line.
pub fn gen_collinear<F: Sample>(n: usize, d: usize, seed: u64) -> Result<Vec<Point<F>>> {
    check_dim(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = Point::from_coords(sample_vec::<F>(&mut rng, d, 20, 4));
    let dir = loop {
        let v: Vec<F> = sample_vec(&mut rng, d, 9, 1);
        if v.iter().any(|x| !x.is_zero()) {
            break v;
        }
    };
    let line = Line::from_point_direction(&base, &dir)?;
    Ok((0..n)
        .map(|t| line.point_at(&F::from_rational(Rational::from(t))))
        .collect())
}

/// `count` seeded random lines through random points with random nonzero
/// directions.
pub fn gen_random_lines<F: Sample>(count: usize, d: usize, seed: u64) -> Result<Vec<Line<F>>> {
    check_dim(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let base = Point::from_coords(sample_vec::<F>(&mut rng, d, 100, 16));
        let dir: Vec<F> = sample_vec(&mut rng, d, 100, 16);
        if let Ok(line) = Line::from_point_direction(&base, &dir) {
            out.push(line);
        }
    }
    Ok(out)
}

/// `n` distinct points whose coordinate components are `p/q` with `q`
/// uniform in `1..=1024` and `p` uniform in `[-64q, 64q]`: spread evenly
/// over `[-64, 64]` with unrelated denominators, so in general position for
/// practical purposes.
pub fn gen_generic<F: Sample>(n: usize, d: usize, seed: u64) -> Result<Vec<Point<F>>> {
    check_dim(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(n);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let mut next = || {
            let q = rng.random_range(1..=1024i64);
            Rational::new(rng.random_range(-64 * q..=64 * q), q)
        };
        let p = Point::from_coords((0..d).map(|_| F::draw(&mut next)).collect());
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Named generator with its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case")]
pub enum Generator {
    Grid { k: usize },
    Planted { m: usize, n: usize },
    Random { n: usize, spread: i64 },
    Generic { n: usize },
    Collinear { n: usize },
}

/// A reproducible configuration: generator, dimension, field and seed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(flatten)]
    pub generator: Generator,
    pub d: usize,
    pub field: FieldKind,
    pub seed: u64,
}

impl Scenario {
    pub fn generate(&self) -> Result<PointSet> {
        match self.field {
            FieldKind::Real => Ok(PointSet::Real(self.generate_in::<Rational>()?)),
            FieldKind::Complex => Ok(PointSet::Complex(self.generate_in::<GaussianRational>()?)),
        }
    }

    pub fn generate_in<F: Sample>(&self) -> Result<Vec<Point<F>>> {
        let (d, seed) = (self.d, self.seed);
        match self.generator {
            Generator::Grid { k } => gen_grid(k, d),
            Generator::Planted { m, n } => Ok(gen_hyperplane_planted(m, n, d, seed)?.points),
            Generator::Random { n, spread } => gen_random(n, d, spread, seed),
            Generator::Generic { n } => gen_generic(n, d, seed),
            Generator::Collinear { n } => gen_collinear(n, d, seed),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concentrate::best_hyperplane;
    use crate::incidence::find_duplicate;

    #[test]
    fn grid_examples() {
        let g: Vec<Point<Rational>> = gen_grid(3, 2).unwrap();
        assert_eq!(g.len(), 9);
        assert_eq!(g[5].coords(), &[Rational::from(1), Rational::from(2)]);
        let c: Vec<Point<GaussianRational>> = gen_grid(2, 3).unwrap();
        assert_eq!(c.len(), 8);
        assert!(c
            .iter()
            .flat_map(|p| p.coords())
            .all(|z| z.im == Rational::from(0)));
        assert_eq!(gen_grid::<Rational>(3, 2).unwrap(), g);
    }

    #[test]
    fn planted_examples() {
        let a = gen_hyperplane_planted::<Rational>(10, 10, 3, 4).unwrap();
        assert!(a.points.iter().all(|p| a.hyperplane.contains_point(p)));
        assert_eq!(
            best_hyperplane(&a.points).unwrap().fraction,
            Rational::from(1)
        );
        let b = gen_hyperplane_planted::<GaussianRational>(6, 15, 3, 4).unwrap();
        assert_eq!(
            b.points
                .iter()
                .filter(|p| b.hyperplane.contains_point(p))
                .count(),
            6
        );
        assert_eq!(find_duplicate(&b.points), None);
        let again = gen_hyperplane_planted::<GaussianRational>(6, 15, 3, 4).unwrap();
        assert_eq!(again.points, b.points);
    }

    #[test]
    fn random_and_collinear() {
        let r: Vec<Point<GaussianRational>> = gen_random(30, 2, 3, 1).unwrap();
        assert_eq!(find_duplicate(&r), None);
        assert!(gen_random::<Rational>(10, 2, 3, 0).is_err());
        let l: Vec<Point<Rational>> = gen_collinear(7, 3, 2).unwrap();
        let set = crate::incidence::enumerate_rich_lines(&l, 2).unwrap();
        assert_eq!(set.len(), 1);
    }

    #[test]
    fn scenario_round_trip() {
        let s = Scenario {
            generator: Generator::Planted { m: 5, n: 8 },
            d: 2,
            field: FieldKind::Complex,
            seed: 3,
        };
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(
            text,
            r#"{"generator":"planted","m":5,"n":8,"d":2,"field":"C","seed":3}"#
        );
        let back: Scenario = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(s.generate().unwrap(), back.generate().unwrap());
    }
}
