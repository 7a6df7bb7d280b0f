//! Rich-line enumeration against a brute-force collinearity oracle on small
//! integer configurations, plus counting identities.

use std::collections::BTreeSet;

use proptest::prelude::*;

use richlines_core::incidence::enumerate_rich_lines;
use richlines_core::{GaussianRational, Point, Rational};

type C = (i64, i64);

fn cmul(a: C, b: C) -> C {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn csub(a: C, b: C) -> C {
    (a.0 - b.0, a.1 - b.1)
}

/// `c` lies on the line through `a` and `b`: every 2x2 minor of
/// `[b - a; c - a]` vanishes.
fn collinear(a: &[C], b: &[C], c: &[C]) -> bool {
    let u: Vec<C> = b.iter().zip(a).map(|(&x, &y)| csub(x, y)).collect();
    let v: Vec<C> = c.iter().zip(a).map(|(&x, &y)| csub(x, y)).collect();
    (0..u.len())
        .all(|i| (i + 1..u.len()).all(|j| csub(cmul(u[i], v[j]), cmul(u[j], v[i])) == (0, 0)))
}

/// Index sets of maximal collinear subsets of size at least `r`.
fn oracle(pts: &[Vec<C>], r: usize) -> BTreeSet<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let s: BTreeSet<usize> = (0..pts.len())
                .filter(|&k| k == i || k == j || collinear(&pts[i], &pts[j], &pts[k]))
                .collect();
            if s.len() >= r {
                out.insert(s);
            }
        }
    }
    out
}

fn real_points(pts: &[Vec<C>]) -> Vec<Point<Rational>> {
    pts.iter()
        .map(|p| Point::new(p.iter().map(|c| Rational::from_integer(c.0)).collect()).unwrap())
        .collect()
}

fn complex_points(pts: &[Vec<C>]) -> Vec<Point<GaussianRational>> {
    pts.iter()
        .map(|p| {
            Point::new(
                p.iter()
                    .map(|c| {
                        GaussianRational::new(
                            Rational::from_integer(c.0),
                            Rational::from_integer(c.1),
                        )
                    })
                    .collect(),
            )
            .unwrap()
        })
        .collect()
}

/// Library result as index sets, checking each reported count.
fn library<F: richlines_core::Field>(points: &[Point<F>], r: usize) -> BTreeSet<BTreeSet<usize>> {
    let set = enumerate_rich_lines(points, r).unwrap();
    set.entries
        .iter()
        .map(|(line, &count)| {
            let members: BTreeSet<usize> = (0..points.len())
                .filter(|&i| line.contains(&points[i]))
                .collect();
            assert_eq!(members.len(), count);
            members
        })
        .collect()
}

fn binom2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Distinct points with small coordinates, so collinearities are common.
fn distinct(d: usize, complex: bool, max: usize) -> impl Strategy<Value = Vec<Vec<C>>> {
    let im = if complex { -1i64..=1 } else { 0i64..=0 };
    let coord = (-2i64..=2, im);
    prop::collection::btree_set(prop::collection::vec(coord, d), 2..=max)
        .prop_map(|s| s.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn real_matches_oracle(pts in prop_oneof![distinct(2, false, 14), distinct(3, false, 14)], r in 2usize..5) {
        prop_assert_eq!(library(&real_points(&pts), r), oracle(&pts, r));
    }

    #[test]
    fn complex_matches_oracle(pts in distinct(2, true, 12), r in 2usize..4) {
        prop_assert_eq!(library(&complex_points(&pts), r), oracle(&pts, r));
    }

    #[test]
    fn pairs_are_partitioned_by_lines(pts in distinct(3, true, 12)) {
        // Every pair of points spans exactly one line.
        let points = complex_points(&pts);
        let set = enumerate_rich_lines(&points, 2).unwrap();
        prop_assert_eq!(set.entries.values().map(|&c| binom2(c)).sum::<usize>(), binom2(points.len()));
    }

    #[test]
    fn raising_r_filters(pts in distinct(2, false, 14), r in 2usize..5) {
        let points = real_points(&pts);
        let low = enumerate_rich_lines(&points, r).unwrap();
        let high = enumerate_rich_lines(&points, r + 1).unwrap();
        prop_assert_eq!(high.len(), low.at_least(r + 1).len());
        prop_assert_eq!(high.entries, low.at_least(r + 1).entries);
    }
}

#[test]
fn five_by_five_grid() {
    let pts: Vec<Vec<C>> = (0..5)
        .flat_map(|x| (0..5).map(move |y| vec![(x, 0), (y, 0)]))
        .collect();
    let points = real_points(&pts);
    // 5 rows, 5 columns, 2 long diagonals.
    assert_eq!(enumerate_rich_lines(&points, 5).unwrap().len(), 12);
    assert_eq!(library(&points, 3), oracle(&pts, 3));
    let set = enumerate_rich_lines(&points, 2).unwrap();
    assert_eq!(
        set.entries.values().map(|&c| binom2(c)).sum::<usize>(),
        binom2(25)
    );
}
