//! Canonical points, lines and flats over either scalar field.
//!
//! Lines and flats are stored in a canonical form so that two descriptions
//! of the same set compare (and hash) equal:
//!
//! * a [`Line`] has its direction scaled so the first nonzero coordinate
//!   (the pivot) is 1, and its base is the unique point of the line whose
//!   pivot coordinate is 0;
//! * a [`Flat`] has a basis in reduced row-echelon form and a base point
//!   that is zero at every pivot column.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{nullspace, rref, Echelon};
use crate::scalar::{Field, FieldKind};

/// Largest supported configuration dimension.
pub const MAX_DIM: usize = 16;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point<F> {
    coords: Vec<F>,
}

impl<F: Field> Point<F> {
    pub fn new(coords: Vec<F>) -> Result<Self> {
        if coords.is_empty() || coords.len() > MAX_DIM {
            return Err(Error::DimensionOutOfRange(coords.len()));
        }
        Ok(Point { coords })
    }

    /// Skips the configuration cap; used for derived points such as real
    /// images of complex points.
    pub(crate) fn from_coords(coords: Vec<F>) -> Self {
        Point { coords }
    }

    pub fn origin(d: usize) -> Self {
        Point {
            coords: vec![F::zero(); d],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[F] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<F> {
        self.coords
    }

    pub fn field(&self) -> FieldKind {
        F::KIND
    }

    pub fn is_origin(&self) -> bool {
        self.coords.iter().all(F::is_zero)
    }

    /// `self - other` as a vector.
    pub fn vector_to(&self, other: &Point<F>) -> Vec<F> {
        other
            .coords
            .iter()
            .zip(&self.coords)
            .map(|(a, b)| a.clone() - b)
            .collect()
    }

    pub fn translate(&self, v: &[F]) -> Point<F> {
        Point {
            coords: self
                .coords
                .iter()
                .zip(v)
                .map(|(a, b)| a.clone() + b)
                .collect(),
        }
    }
}

impl<F: Field> fmt::Debug for Point<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coords).finish()
    }
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

fn pivot_of<F: Field>(v: &[F]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

fn scaled<F: Field>(v: &[F], s: &F) -> Vec<F> {
    v.iter().map(|x| x.clone() * s).collect()
}

/// A line in canonical base-point / normalized-direction form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Line<F> {
    base: Point<F>,
    direction: Vec<F>,
}

impl<F: Field> Line<F> {
    /// The line through `p` with direction `dir`.
    pub fn from_point_direction(p: &Point<F>, dir: &[F]) -> Result<Self> {
        check_dims(p.dim(), dir.len())?;
        let piv = pivot_of(dir).ok_or(Error::ZeroVector)?;
        let inv = F::one() / &dir[piv];
        let mut direction = scaled(dir, &inv);
        direction[piv] = F::one();
        let t = p.coords[piv].clone();
        let base: Vec<F> = p
            .coords
            .iter()
            .zip(&direction)
            .map(|(x, u)| x.clone() - &(t.clone() * u))
            .collect();
        Ok(Line {
            base: Point { coords: base },
            direction,
        })
    }

    pub fn base(&self) -> &Point<F> {
        &self.base
    }

    pub fn direction(&self) -> &[F] {
        &self.direction
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn pivot(&self) -> usize {
        pivot_of(&self.direction).expect("canonical direction is nonzero")
    }

    pub fn point_at(&self, t: &F) -> Point<F> {
        Point {
            coords: self
                .base
                .coords
                .iter()
                .zip(&self.direction)
                .map(|(b, u)| b.clone() + &(t.clone() * u))
                .collect(),
        }
    }

    pub fn passes_through_origin(&self) -> bool {
        self.base.is_origin()
    }

    /// Exact incidence test; the only candidate parameter is the pivot
    /// coordinate of `p`.
    pub fn contains(&self, p: &Point<F>) -> bool {
        let t = &p.coords[self.pivot()];
        p.coords
            .iter()
            .zip(self.base.coords.iter().zip(&self.direction))
            .all(|(x, (b, u))| *x == b.clone() + &(t.clone() * u))
    }

    /// Same line, as a one-dimensional flat.
    pub fn to_flat(&self) -> Flat<F> {
        Flat::new(self.base.clone(), vec![self.direction.clone()])
    }
}

impl<F: Field> fmt::Debug for Line<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Line({:?} + t{:?})", self.base, self.direction)
    }
}

/// Canonical line through two distinct points; symmetric in its arguments.
pub fn line_through<F: Field>(p: &Point<F>, q: &Point<F>) -> Result<Line<F>> {
    check_dims(p.dim(), q.dim())?;
    if p == q {
        return Err(Error::DegeneratePair);
    }
    Line::from_point_direction(p, &p.vector_to(q))
}

pub fn incident<F: Field>(p: &Point<F>, line: &Line<F>) -> Result<bool> {
    check_dims(line.dim(), p.dim())?;
    Ok(line.contains(p))
}

/// Affine subspace: a base point plus a reduced row-echelon direction basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "FlatDoc<F>", try_from = "FlatDoc<F>")]
#[serde(bound(serialize = "F: Field", deserialize = "F: Field"))]
pub struct Flat<F> {
    basis: Vec<Vec<F>>,
    base: Point<F>,
    pivots: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct FlatDoc<F> {
    dim: usize,
    base: Point<F>,
    basis: Vec<Vec<F>>,
}

impl<F: Field> From<Flat<F>> for FlatDoc<F> {
    fn from(f: Flat<F>) -> Self {
        FlatDoc {
            dim: f.dim(),
            base: f.base,
            basis: f.basis,
        }
    }
}

impl<F: Field> TryFrom<FlatDoc<F>> for Flat<F> {
    type Error = Error;
    fn try_from(doc: FlatDoc<F>) -> Result<Self> {
        let d = doc.base.dim();
        for row in &doc.basis {
            check_dims(d, row.len())?;
        }
        let flat = Flat::new(doc.base, doc.basis);
        if flat.dim() != doc.dim {
            return Err(Error::Parse(format!(
                "flat declares dim {} but its basis has rank {}",
                doc.dim,
                flat.dim()
            )));
        }
        Ok(flat)
    }
}

impl<F: Field> Flat<F> {
    /// The flat `base + span(directions)`, canonicalized. Directions may be
    /// dependent or zero.
    pub fn new(base: Point<F>, directions: Vec<Vec<F>>) -> Self {
        let d = base.dim();
        let ech = rref(directions, d);
        let base = Point {
            coords: ech.reduce(&base.coords),
        };
        Flat {
            basis: ech.rows,
            base,
            pivots: ech.pivots,
        }
    }

    pub fn linear(d: usize, directions: Vec<Vec<F>>) -> Self {
        Flat::new(Point::origin(d), directions)
    }

    pub fn whole(d: usize) -> Self {
        let basis = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| if i == j { F::one() } else { F::zero() })
                    .collect()
            })
            .collect();
        Flat::linear(d, basis)
    }

    pub fn point(p: Point<F>) -> Self {
        Flat::new(p, Vec::new())
    }

    pub fn base(&self) -> &Point<F> {
        &self.base
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.dim()
    }

    pub fn is_linear(&self) -> bool {
        self.base.is_origin()
    }

    fn echelon(&self) -> Echelon<F> {
        Echelon {
            rows: self.basis.clone(),
            pivots: self.pivots.clone(),
        }
    }

    /// Is `v` in the direction space?
    pub fn contains_vector(&self, v: &[F]) -> bool {
        self.echelon().contains(v)
    }

    pub fn contains_point(&self, p: &Point<F>) -> bool {
        self.contains_vector(&self.base.vector_to(p))
    }

    pub fn contains_line(&self, line: &Line<F>) -> bool {
        self.contains_point(line.base()) && self.contains_vector(line.direction())
    }

    pub fn contains_flat(&self, other: &Flat<F>) -> bool {
        self.contains_point(other.base()) && other.basis.iter().all(|v| self.contains_vector(v))
    }

    /// Smallest flat containing `self` and `p`.
    pub fn join_point(&self, p: &Point<F>) -> Flat<F> {
        let mut dirs = self.basis.clone();
        dirs.push(self.base.vector_to(p));
        Flat::new(self.base.clone(), dirs)
    }

    /// Canonical widening to dimension `target` by appending the standard
    /// basis vectors not already in the direction space, lowest index first.
    pub fn complete_to_dim(&self, target: usize) -> Flat<F> {
        let d = self.ambient_dim();
        assert!(target <= d);
        let mut dirs = self.basis.clone();
        let mut current = self.clone();
        for i in 0..d {
            if current.dim() >= target {
                break;
            }
            let e: Vec<F> = (0..d)
                .map(|j| if i == j { F::one() } else { F::zero() })
                .collect();
            if !current.contains_vector(&e) {
                dirs.push(e);
                current = Flat::new(self.base.clone(), dirs.clone());
            }
        }
        current
    }

    /// Same direction space through the origin.
    pub fn direction_space(&self) -> Flat<F> {
        Flat {
            basis: self.basis.clone(),
            base: Point::origin(self.ambient_dim()),
            pivots: self.pivots.clone(),
        }
    }
}

impl<F: Field> fmt::Debug for Flat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Flat(dim {}, base {:?}, basis {:?})",
            self.dim(),
            self.base,
            self.basis
        )
    }
}

/// Smallest flat containing every point.
pub fn affine_hull<F: Field>(points: &[Point<F>]) -> Result<Flat<F>> {
    let first = points.first().ok_or(Error::EmptyInput)?;
    let d = first.dim();
    let mut dirs = Vec::with_capacity(points.len().saturating_sub(1));
    for p in &points[1..] {
        check_dims(d, p.dim())?;
        dirs.push(first.vector_to(p));
    }
    Ok(Flat::new(first.clone(), dirs))
}

pub fn flat_contains_point<F: Field>(flat: &Flat<F>, p: &Point<F>) -> Result<bool> {
    check_dims(flat.ambient_dim(), p.dim())?;
    Ok(flat.contains_point(p))
}

pub fn flat_contains_line<F: Field>(flat: &Flat<F>, line: &Line<F>) -> Result<bool> {
    check_dims(flat.ambient_dim(), line.dim())?;
    Ok(flat.contains_line(line))
}

/// Hermitian inner product `sum u_k conj(v_k)`; the dot product over the reals.
pub fn inner<F: Field>(u: &[F], v: &[F]) -> F {
    u.iter()
        .zip(v)
        .fold(F::zero(), |acc, (a, b)| acc + &(a.clone() * &b.conj()))
}

/// Orthogonal complement of a linear subspace under the (Hermitian) inner
/// product.
pub fn orthogonal_complement<F: Field>(flat: &Flat<F>) -> Result<Flat<F>> {
    if !flat.is_linear() {
        return Err(Error::NotLinearSubspace);
    }
    let d = flat.ambient_dim();
    let conj_rows = flat
        .basis
        .iter()
        .map(|r| r.iter().map(F::conj).collect())
        .collect();
    let ns = nullspace(conj_rows, d);
    Ok(Flat::linear(d, ns.rows))
}
