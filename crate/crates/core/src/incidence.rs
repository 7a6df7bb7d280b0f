//! Rich-line enumeration, incidence counting and bipartite refinement.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Line, Point};
use crate::scalar::Field;

/// Largest point set accepted by [`enumerate_rich_lines`]; the per-pair work
/// and memory are quadratic in n.
pub const MAX_POINTS: usize = 20_000;

/// The lines incident to at least `r` of `n` points, with exact counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "F: Field", deserialize = "F: Field"))]
pub struct RichLineSet<F: Field> {
    pub r: usize,
    pub n: usize,
    #[serde(with = "entries_as_list")]
    pub entries: BTreeMap<Line<F>, usize>,
}

impl<F: Field> RichLineSet<F> {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lines(&self) -> impl Iterator<Item = &Line<F>> {
        self.entries.keys()
    }

    pub fn max_richness(&self) -> usize {
        self.entries.values().copied().max().unwrap_or(0)
    }

    /// Sub-collection of lines with at least `r` points, `r >= self.r`.
    pub fn at_least(&self, r: usize) -> RichLineSet<F> {
        assert!(r >= self.r);
        RichLineSet {
            r,
            n: self.n,
            entries: self
                .entries
                .iter()
                .filter(|(_, &c)| c >= r)
                .map(|(l, &c)| (l.clone(), c))
                .collect(),
        }
    }
}

mod entries_as_list {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(bound(serialize = "F: Field", deserialize = "F: Field"))]
    struct Entry<F> {
        line: Line<F>,
        count: usize,
    }

    pub fn serialize<F: Field, S: Serializer>(
        map: &BTreeMap<Line<F>, usize>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        s.collect_seq(map.iter().map(|(line, &count)| Entry {
            line: line.clone(),
            count,
        }))
    }

    pub fn deserialize<'de, F: Field, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<Line<F>, usize>, D::Error> {
        let entries: Vec<Entry<F>> = Vec::deserialize(d)?;
        Ok(entries.into_iter().map(|e| (e.line, e.count)).collect())
    }
}

fn check_common_dim<F: Field>(points: &[Point<F>]) -> Result<usize> {
    let d = points.first().map_or(0, Point::dim);
    for p in points {
        if p.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: p.dim(),
            });
        }
    }
    Ok(d)
}

/// First pair of equal points, if any.
pub fn find_duplicate<F: Field>(points: &[Point<F>]) -> Option<(usize, usize)> {
    let mut seen: HashMap<&Point<F>, usize> = HashMap::with_capacity(points.len());
    for (j, p) in points.iter().enumerate() {
        if let Some(&i) = seen.get(p) {
            return Some((i, j));
        }
        seen.insert(p, j);
    }
    None
}

fn normalized_direction<F: Field>(from: &Point<F>, to: &Point<F>) -> Vec<F> {
    let v = from.vector_to(to);
    let piv = v
        .iter()
        .position(|x| !x.is_zero())
        .expect("points are distinct");
    let inv = F::one() / &v[piv];
    v.into_iter().map(|x| x * &inv).collect()
}

/// All lines incident to at least `r` points, with exact incidence counts.
///
/// Every pair of points determines a canonical line key. Pairs are grouped
/// per anchor point by direction; a line is recorded by the lowest-indexed
/// point on it, whose group then holds every other point of the line. The
/// anchor loop runs in parallel and the per-anchor results are merged into
/// an ordered map, so the output does not depend on scheduling.
pub fn enumerate_rich_lines<F: Field>(points: &[Point<F>], r: usize) -> Result<RichLineSet<F>> {
    if r < 2 {
        return Err(Error::BadR(r));
    }
    let n = points.len();
    if n > MAX_POINTS {
        return Err(Error::TooManyPoints { n, cap: MAX_POINTS });
    }
    check_common_dim(points)?;
    if let Some((i, j)) = find_duplicate(points) {
        return Err(Error::DuplicatePoints(i, j));
    }

    let found: Vec<(Line<F>, usize)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let anchor = &points[i];
            // direction -> (smallest other index, number of other points)
            let mut groups: HashMap<Vec<F>, (usize, usize)> = HashMap::new();
            for (j, p) in points.iter().enumerate() {
                if j == i {
                    continue;
                }
                let entry = groups
                    .entry(normalized_direction(anchor, p))
                    .or_insert((j, 0));
                entry.0 = entry.0.min(j);
                entry.1 += 1;
            }
            groups
                .into_iter()
                .filter(move |&(_, (min_other, others))| min_other > i && others + 1 >= r)
                .map(move |(dir, (_, others))| {
                    let line = Line::from_point_direction(anchor, &dir).expect("nonzero direction");
                    (line, others + 1)
                })
        })
        .collect();

    Ok(RichLineSet {
        r,
        n,
        entries: found.into_iter().collect(),
    })
}

/// `|{(p, L) : p on L}|`.
pub fn incidence_count<F: Field>(points: &[Point<F>], lines: &[Line<F>]) -> Result<usize> {
    let d = check_common_dim(points)?;
    if let Some(l) = lines.iter().find(|l| !points.is_empty() && l.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: l.dim(),
        });
    }
    Ok(lines
        .par_iter()
        .map(|l| points.iter().filter(|p| l.contains(p)).count())
        .sum())
}

/// Bipartite point-line incidence graph. Edges are `(point index, line
/// index)` pairs, sorted and free of duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "F: Field", deserialize = "F: Field"))]
pub struct IncidenceGraph<F: Field> {
    pub points: Vec<Point<F>>,
    pub lines: Vec<Line<F>>,
    pub edges: Vec<(usize, usize)>,
}

impl<F: Field> IncidenceGraph<F> {
    /// Graph of all true incidences between `points` and `lines`.
    pub fn build(points: Vec<Point<F>>, lines: Vec<Line<F>>) -> Result<Self> {
        let d = check_common_dim(&points)?;
        if let Some(l) = lines.iter().find(|l| !points.is_empty() && l.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: l.dim(),
            });
        }
        let mut edges: Vec<(usize, usize)> = lines
            .par_iter()
            .enumerate()
            .flat_map_iter(|(li, l)| {
                points
                    .iter()
                    .enumerate()
                    .filter(move |(_, p)| l.contains(p))
                    .map(move |(pi, _)| (pi, li))
            })
            .collect();
        edges.sort_unstable();
        Ok(IncidenceGraph {
            points,
            lines,
            edges,
        })
    }

    pub fn from_rich_lines(points: &[Point<F>], set: &RichLineSet<F>) -> Result<Self> {
        IncidenceGraph::build(points.to_vec(), set.lines().cloned().collect())
    }

    pub fn incidences(&self) -> usize {
        self.edges.len()
    }

    pub fn point_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.points.len()];
        for &(p, _) in &self.edges {
            deg[p] += 1;
        }
        deg
    }

    pub fn line_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.lines.len()];
        for &(_, l) in &self.edges {
            deg[l] += 1;
        }
        deg
    }
}

/// Output of [`refine_bipartite`]: the induced subgraph and, for each kept
/// vertex, its index in the input graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "F: Field", deserialize = "F: Field"))]
pub struct Refinement<F: Field> {
    pub graph: IncidenceGraph<F>,
    pub point_ids: Vec<usize>,
    pub line_ids: Vec<usize>,
    pub original_edges: usize,
    pub original_points: usize,
    pub original_lines: usize,
}

impl<F: Field> Refinement<F> {
    /// Every kept point has degree >= |E| / (4|A|) (input sizes).
    pub fn point_bound_holds(&self) -> bool {
        let a = self.original_points;
        self.graph
            .point_degrees()
            .iter()
            .all(|&deg| 4 * a * deg >= self.original_edges)
    }

    /// Every kept line has degree >= |E| / (4|B|).
    pub fn line_bound_holds(&self) -> bool {
        let b = self.original_lines;
        self.graph
            .line_degrees()
            .iter()
            .all(|&deg| 4 * b * deg >= self.original_edges)
    }

    /// |E'| >= |E| / 2.
    pub fn edge_bound_holds(&self) -> bool {
        2 * self.graph.incidences() >= self.original_edges
    }

    pub fn all_bounds_hold(&self) -> bool {
        self.point_bound_holds() && self.line_bound_holds() && self.edge_bound_holds()
    }
}

/// Repeatedly deletes points of degree below `|E|/(4|A|)` and lines of degree
/// below `|E|/(4|B|)`, with thresholds fixed from the input graph, until no
/// vertex is under its threshold.
///
/// Each pass removes every under-degree point at once, then every
/// under-degree line, so the result is deterministic. Fewer than `|E|/4`
/// edges can leave with the points and fewer than `|E|/4` with the lines, so
/// at least half the edges survive.
pub fn refine_bipartite<F: Field>(g: &IncidenceGraph<F>) -> Result<Refinement<F>> {
    let e = g.incidences();
    if e == 0 {
        return Err(Error::EmptyGraph);
    }
    let (a, b) = (g.points.len(), g.lines.len());
    let mut point_alive = vec![true; a];
    let mut line_alive = vec![true; b];
    let degrees = |point_alive: &[bool], line_alive: &[bool]| {
        let mut pd = vec![0usize; a];
        let mut ld = vec![0usize; b];
        for &(p, l) in &g.edges {
            if point_alive[p] && line_alive[l] {
                pd[p] += 1;
                ld[l] += 1;
            }
        }
        (pd, ld)
    };
    loop {
        let mut changed = false;
        let (pd, _) = degrees(&point_alive, &line_alive);
        for p in 0..a {
            if point_alive[p] && 4 * a * pd[p] < e {
                point_alive[p] = false;
                changed = true;
            }
        }
        let (_, ld) = degrees(&point_alive, &line_alive);
        for l in 0..b {
            if line_alive[l] && 4 * b * ld[l] < e {
                line_alive[l] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let point_ids: Vec<usize> = (0..a).filter(|&p| point_alive[p]).collect();
    let line_ids: Vec<usize> = (0..b).filter(|&l| line_alive[l]).collect();
    let mut point_map = vec![usize::MAX; a];
    for (new, &old) in point_ids.iter().enumerate() {
        point_map[old] = new;
    }
    let mut line_map = vec![usize::MAX; b];
    for (new, &old) in line_ids.iter().enumerate() {
        line_map[old] = new;
    }
    let edges = g
        .edges
        .iter()
        .filter(|&&(p, l)| point_alive[p] && line_alive[l])
        .map(|&(p, l)| (point_map[p], line_map[l]))
        .collect();
    let graph = IncidenceGraph {
        points: point_ids.iter().map(|&p| g.points[p].clone()).collect(),
        lines: line_ids.iter().map(|&l| g.lines[l].clone()).collect(),
        edges,
    };
    Ok(Refinement {
        graph,
        point_ids,
        line_ids,
        original_edges: e,
        original_points: a,
        original_lines: b,
    })
}
