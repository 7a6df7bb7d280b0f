//! Detectors for hyperplanes that hold many points, and for hyperplanes
//! through a point that contain many of the lines through it.

use std::collections::{HashMap, HashSet};

use itertools::Itertools;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embed::{iota_vec, trap_in_hyperplane};
use crate::error::{Error, Result};
use crate::geom::{affine_hull, Flat, Line, Point};
use crate::linalg::rref;
use crate::scalar::{Field, GaussianRational, Rational};

/// Largest point count accepted by [`best_hyperplane`].
pub const MAX_POINTS: usize = 2000;
/// Largest ambient dimension accepted by [`best_hyperplane`].
pub const MAX_DIM: usize = 4;
/// Largest number of spanning subsets either search will enumerate.
pub const MAX_SUBSETS: u128 = 4_000_000;

/// A flat of dimension `d - 1` and the indices of the inputs it contains.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "F: Field", deserialize = "F: Field"))]
pub struct Concentration<F: Field> {
    pub flat: Flat<F>,
    pub members: Vec<usize>,
    pub total: usize,
    pub fraction: Rational,
}

impl<F: Field> Concentration<F> {
    fn new(flat: Flat<F>, members: Vec<usize>, total: usize) -> Self {
        let fraction = if total == 0 {
            Rational::zero()
        } else {
            Rational::new(members.len() as i64, total as i64)
        };
        Concentration {
            flat,
            members,
            total,
            fraction,
        }
    }

    /// Re-checks every member point by exact containment.
    pub fn verify_points(&self, points: &[Point<F>]) -> bool {
        self.members
            .iter()
            .all(|&i| points.get(i).is_some_and(|p| self.flat.contains_point(p)))
    }

    /// Re-checks every member line by exact containment.
    pub fn verify_lines(&self, lines: &[Line<F>]) -> bool {
        self.members
            .iter()
            .all(|&i| lines.get(i).is_some_and(|l| self.flat.contains_line(l)))
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k as u128).fold(1u128, |acc, i| acc * (n as u128 - i) / (i + 1))
}

/// Orders candidates by larger count first, then by canonical flat order.
fn better<F: Field>(a: &(usize, Flat<F>), b: &(usize, Flat<F>)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1 < b.1)
}

fn pick_best<F: Field>(
    a: Option<(usize, Flat<F>)>,
    b: Option<(usize, Flat<F>)>,
) -> Option<(usize, Flat<F>)> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if better(&y, &x) { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

/// The hyperplane containing the most points, over every hyperplane spanned
/// by `d` affinely independent input points. When all points already lie in
/// a lower-dimensional flat, that flat is widened canonically to a
/// hyperplane and returned with fraction 1.
///
/// Each anchor point `i` (in parallel) collects the hyperplanes through
/// `p_i` spanned with `d - 1` later points, counting the later points seen
/// on each. A hyperplane's count at its lowest-indexed member is exact and
/// counts at other anchors are never larger, so the overall maximum is
/// exact. Ties go to the smallest canonical flat.
pub fn best_hyperplane<F: Field>(points: &[Point<F>]) -> Result<Concentration<F>> {
    let n = points.len();
    let d = points.first().map_or(0, Point::dim);
    if n < d.max(1) {
        return Err(Error::TooSmall {
            needed: d.max(1),
            got: n,
        });
    }
    let hull = affine_hull(points)?;
    if hull.dim() < d {
        let flat = hull.complete_to_dim(d - 1);
        return Ok(Concentration::new(flat, (0..n).collect(), n));
    }
    if n > MAX_POINTS || d > MAX_DIM || binomial(n, d) > MAX_SUBSETS {
        return Err(Error::ScaleExceeded {
            n,
            d,
            max_n: MAX_POINTS,
            max_d: MAX_DIM,
        });
    }

    let best = (0..n)
        .into_par_iter()
        .map(|i| {
            let anchor = &points[i];
            let dirs: Vec<Vec<F>> = points[i + 1..]
                .iter()
                .map(|p| anchor.vector_to(p))
                .collect();
            let mut seen: HashMap<Flat<F>, HashSet<usize>> = HashMap::new();
            for subset in (0..dirs.len()).combinations(d - 1) {
                let flat = Flat::new(
                    anchor.clone(),
                    subset.iter().map(|&j| dirs[j].clone()).collect(),
                );
                if flat.dim() == d - 1 {
                    seen.entry(flat).or_default().extend(subset);
                }
            }
            seen.into_iter()
                .map(|(flat, later)| (later.len() + 1, flat))
                .fold(None, |acc, c| pick_best(acc, Some(c)))
        })
        .reduce(|| None, pick_best);

    let (_, flat) = best.expect("a full-dimensional hull has a spanning subset");
    let members = (0..n)
        .filter(|&i| flat.contains_point(&points[i]))
        .collect();
    Ok(Concentration::new(flat, members, n))
}

fn check_pencil<F: Field>(p: &Point<F>, lines: &[Line<F>]) -> Result<()> {
    if lines.is_empty() {
        return Err(Error::EmptyInput);
    }
    for (index, l) in lines.iter().enumerate() {
        if l.dim() != p.dim() {
            return Err(Error::DimensionMismatch {
                expected: p.dim(),
                found: l.dim(),
            });
        }
        if !l.contains(p) {
            return Err(Error::NotIncident { index });
        }
    }
    Ok(())
}

/// Best (count, subspace) over subspaces of dimension `target` spanned by
/// `target`-subsets of `vectors`, where a group counts once all of its
/// vectors lie in the subspace. Returns `None` when the vectors span at most
/// `target` dimensions (every group fits).
fn best_spanned_subspace<F: Field>(
    vectors: &[Vec<F>],
    groups: &[Vec<usize>],
    ambient: usize,
    target: usize,
) -> Result<Option<(usize, Flat<F>)>> {
    if rref(vectors.to_vec(), ambient).rank() <= target {
        return Ok(None);
    }
    if binomial(vectors.len(), target) > MAX_SUBSETS {
        return Err(Error::ScaleExceeded {
            n: vectors.len(),
            d: ambient,
            max_n: MAX_POINTS,
            max_d: MAX_DIM,
        });
    }
    let best = (0..vectors.len())
        .into_par_iter()
        .map(|first| {
            let mut seen: HashSet<Flat<F>> = HashSet::new();
            let mut best: Option<(usize, Flat<F>)> = None;
            for rest in (first + 1..vectors.len()).combinations(target.saturating_sub(1)) {
                let span: Vec<Vec<F>> = std::iter::once(first)
                    .chain(rest)
                    .map(|j| vectors[j].clone())
                    .collect();
                let flat = Flat::linear(ambient, span);
                if flat.dim() != target || !seen.insert(flat.clone()) {
                    continue;
                }
                let count = groups
                    .iter()
                    .filter(|g| g.iter().all(|&j| flat.contains_vector(&vectors[j])))
                    .count();
                best = pick_best(best, Some((count, flat)));
            }
            best
        })
        .reduce(|| None, pick_best);
    Ok(best)
}

/// The hyperplane through `p` containing the most of `lines` (all through
/// `p`), over hyperplanes spanned by `p` and `d - 1` line directions. If the
/// directions span at most `d - 1` dimensions their span is widened
/// canonically and every line is a member.
pub fn concentrated_pencil<F: Field>(p: &Point<F>, lines: &[Line<F>]) -> Result<Concentration<F>> {
    check_pencil(p, lines)?;
    let d = p.dim();
    let dirs: Vec<Vec<F>> = lines.iter().map(|l| l.direction().to_vec()).collect();
    let groups: Vec<Vec<usize>> = (0..lines.len()).map(|j| vec![j]).collect();
    let space = match best_spanned_subspace(&dirs, &groups, d, d - 1)? {
        Some((_, flat)) => flat,
        None => Flat::linear(d, dirs).complete_to_dim(d - 1),
    };
    let flat = Flat::new(p.clone(), space.basis().to_vec());
    let members = (0..lines.len())
        .filter(|&j| flat.contains_line(&lines[j]))
        .collect();
    Ok(Concentration::new(flat, members, lines.len()))
}

/// Complex pencil search through the real embedding: lines through `p` are
/// moved to the origin and sent to real 2-planes of `R^{2d}`; the real
/// hyperplane spanned by image vectors that contains the most planes is
/// turned into a complex hyperplane by [`trap_in_hyperplane`] and moved
/// back to `p`. Members are recounted by exact containment in the complex
/// result.
pub fn pencil_via_embedding(
    p: &Point<GaussianRational>,
    lines: &[Line<GaussianRational>],
) -> Result<Concentration<GaussianRational>> {
    check_pencil(p, lines)?;
    let d = p.dim();
    let origin = Point::origin(d);
    let through_origin: Vec<Line<GaussianRational>> = lines
        .iter()
        .map(|l| Line::from_point_direction(&origin, l.direction()))
        .collect::<Result<_>>()?;
    let i = GaussianRational::i();
    let mut vectors = Vec::with_capacity(2 * lines.len());
    let mut groups = Vec::with_capacity(lines.len());
    for l in &through_origin {
        let u = l.direction();
        let iu: Vec<GaussianRational> = u.iter().map(|x| x.clone() * &i).collect();
        groups.push(vec![vectors.len(), vectors.len() + 1]);
        vectors.push(iota_vec(u));
        vectors.push(iota_vec(&iu));
    }
    let real = match best_spanned_subspace(&vectors, &groups, 2 * d, 2 * d - 1)? {
        Some((_, flat)) => flat,
        None => Flat::linear(2 * d, vectors.clone()).complete_to_dim(2 * d - 1),
    };
    let trapped: Vec<Line<GaussianRational>> = through_origin
        .iter()
        .filter(|l| real.contains_flat(&crate::embed::real_image(l).flat))
        .cloned()
        .collect();
    let space = trap_in_hyperplane(&trapped, &real)?;
    let flat = Flat::new(p.clone(), space.basis().to_vec());
    let members = (0..lines.len())
        .filter(|&j| flat.contains_line(&lines[j]))
        .collect();
    Ok(Concentration::new(flat, members, lines.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::line_through;

    fn rp(v: &[i64]) -> Point<Rational> {
        Point::new(v.iter().map(|&x| Rational::from(x)).collect()).unwrap()
    }

    fn z(re: i64, im: i64) -> GaussianRational {
        GaussianRational::new(re.into(), im.into())
    }

    fn cp(v: &[GaussianRational]) -> Point<GaussianRational> {
        Point::new(v.to_vec()).unwrap()
    }

    #[test]
    fn all_points_on_a_plane() {
        let pts: Vec<_> = [[0, 1, 2], [0, 5, -1], [0, 3, 3], [0, -2, 7], [0, 4, 4]]
            .iter()
            .map(|v| rp(v))
            .collect();
        let c = best_hyperplane(&pts).unwrap();
        assert_eq!(c.fraction, Rational::from(1));
        assert!(c.flat.contains_point(&rp(&[0, 100, -100])));
    }

    #[test]
    fn four_points_in_general_position() {
        let pts: Vec<_> = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]
            .iter()
            .map(|v| rp(v))
            .collect();
        let c = best_hyperplane(&pts).unwrap();
        assert_eq!(c.fraction, Rational::new(3, 4));
        assert!(c.verify_points(&pts));
    }

    #[test]
    fn grid_best_line() {
        let pts: Vec<_> = (0..3)
            .flat_map(|x| (0..3).map(move |y| rp(&[x, y])))
            .collect();
        let c = best_hyperplane(&pts).unwrap();
        assert_eq!(c.fraction, Rational::new(1, 3));
        assert_eq!(c.members.len(), 3);
        assert!(c.verify_points(&pts));
    }

    #[test]
    fn too_small() {
        let pts = vec![rp(&[1, 2, 3])];
        assert_eq!(
            best_hyperplane(&pts),
            Err(Error::TooSmall { needed: 3, got: 1 })
        );
    }

    #[test]
    fn pencil_in_a_plane() {
        let o = rp(&[0, 0, 0]);
        let lines: Vec<_> = [[1, 0, 0], [0, 1, 0], [1, 1, 0], [2, -3, 0]]
            .iter()
            .map(|v| line_through(&o, &rp(v)).unwrap())
            .collect();
        let c = concentrated_pencil(&o, &lines).unwrap();
        assert_eq!(c.fraction, Rational::from(1));
        assert!(c.flat.contains_point(&rp(&[5, 7, 0])));
    }

    #[test]
    fn coordinate_axes() {
        let o = rp(&[0, 0, 0]);
        let lines: Vec<_> = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
            .iter()
            .map(|v| line_through(&o, &rp(v)).unwrap())
            .collect();
        let c = concentrated_pencil(&o, &lines).unwrap();
        assert_eq!(c.fraction, Rational::new(2, 3));
        assert!(c.verify_lines(&lines));
    }

    #[test]
    fn pencil_rejects_missing_line() {
        let o = rp(&[0, 0]);
        let lines = vec![line_through(&rp(&[1, 0]), &rp(&[1, 1])).unwrap()];
        assert_eq!(
            concentrated_pencil(&o, &lines),
            Err(Error::NotIncident { index: 0 })
        );
    }

    #[test]
    fn single_complex_line() {
        let o = cp(&[z(0, 0), z(0, 0)]);
        let l = line_through(&o, &cp(&[z(1, 2), z(3, -1)])).unwrap();
        let c = concentrated_pencil(&o, std::slice::from_ref(&l)).unwrap();
        assert_eq!(c.fraction, Rational::from(1));
        let e = pencil_via_embedding(&o, &[l]).unwrap();
        assert_eq!(e.fraction, Rational::from(1));
    }

    #[test]
    fn embedding_collapses_identical_lines() {
        let o = cp(&[z(0, 0), z(0, 0)]);
        let a = line_through(&o, &cp(&[z(1, 0), z(0, 0)])).unwrap();
        let b = line_through(&o, &cp(&[z(0, 1), z(0, 0)])).unwrap();
        assert_eq!(a, b);
        let c = pencil_via_embedding(&o, &[a, b]).unwrap();
        assert_eq!(c.fraction, Rational::from(1));
        assert_eq!(c.flat.dim(), 1);
    }

    #[test]
    fn embedding_generic_lines_in_c3() {
        let p = cp(&[z(1, 1), z(0, 2), z(-1, 0)]);
        let dirs = [
            [z(1, 0), z(2, 1), z(0, 3)],
            [z(0, 1), z(1, 0), z(1, 1)],
            [z(3, -1), z(0, 0), z(2, 0)],
        ];
        let lines: Vec<_> = dirs
            .iter()
            .map(|u| Line::from_point_direction(&p, u).unwrap())
            .collect();
        let e = pencil_via_embedding(&p, &lines).unwrap();
        assert!(e.fraction >= Rational::new(2, 3));
        assert!(e.verify_lines(&lines));
        assert_eq!(e.flat.dim(), 2);
        let c = concentrated_pencil(&p, &lines).unwrap();
        assert_eq!(c.fraction, Rational::new(2, 3));
    }
}
