//! The dictionary between complex lines in `C^d` and real 2-flats in
//! `R^{2d}`.
//!
//! `iota` interleaves real and imaginary parts. Multiplication by `i` on
//! `C^d` becomes the rotation `(a, b) -> (-b, a)` on each coordinate pair of
//! `R^{2d}`; the dagger of a real vector is the plane it spans together with
//! its rotation, i.e. the real image of the complex line through it.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geom::{orthogonal_complement, Flat, Line, Point};
use crate::scalar::{GaussianRational, Rational};

pub fn iota_vec(v: &[GaussianRational]) -> Vec<Rational> {
    v.iter()
        .flat_map(|z| [z.re.clone(), z.im.clone()])
        .collect()
}

pub fn iota_inv_vec(v: &[Rational]) -> Result<Vec<GaussianRational>> {
    if !v.len().is_multiple_of(2) {
        return Err(Error::OddDimension(v.len()));
    }
    Ok(v.chunks(2)
        .map(|c| GaussianRational::new(c[0].clone(), c[1].clone()))
        .collect())
}

/// `(x_1 + i y_1, ..., x_d + i y_d) -> (x_1, y_1, ..., x_d, y_d)`.
pub fn iota(p: &Point<GaussianRational>) -> Point<Rational> {
    Point::from_coords(iota_vec(p.coords()))
}

pub fn iota_inv(v: &Point<Rational>) -> Result<Point<GaussianRational>> {
    Ok(Point::from_coords(iota_inv_vec(v.coords())?))
}

/// Real image of multiplication by `i`.
fn rotate(v: &[Rational]) -> Vec<Rational> {
    v.chunks(2).flat_map(|c| [-&c[1], c[0].clone()]).collect()
}

/// The real 2-flat `iota(L)` of a complex line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealImage {
    pub flat: Flat<Rational>,
    pub source: Line<GaussianRational>,
}

pub fn real_image(line: &Line<GaussianRational>) -> RealImage {
    let u = iota_vec(line.direction());
    let iu = rotate(&u);
    RealImage {
        flat: Flat::new(iota(line.base()), vec![u, iu]),
        source: line.clone(),
    }
}

/// `v^dagger = span_R{v, rotate(v)}`, the real image of `span_C(iota^-1(v))`.
pub fn dagger_vec(v: &[Rational]) -> Result<Flat<Rational>> {
    if !v.len().is_multiple_of(2) {
        return Err(Error::OddDimension(v.len()));
    }
    if v.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector);
    }
    Ok(Flat::linear(v.len(), vec![v.to_vec(), rotate(v)]))
}

/// `Pi^dagger = span_R{v^dagger : v in Pi}`. The dagger is linear in `v`, so
/// a basis of `Pi` and its rotation span the result.
pub fn dagger_flat(flat: &Flat<Rational>) -> Result<Flat<Rational>> {
    if !flat.is_linear() {
        return Err(Error::NotLinearSubspace);
    }
    let n = flat.ambient_dim();
    if !n.is_multiple_of(2) {
        return Err(Error::OddDimension(n));
    }
    let dirs = flat
        .basis()
        .iter()
        .flat_map(|b| [b.clone(), rotate(b)])
        .collect();
    Ok(Flat::linear(n, dirs))
}

fn check_real_subspace(pi0: &Flat<Rational>, complex_dim: usize) -> Result<()> {
    if pi0.ambient_dim() != 2 * complex_dim {
        return Err(Error::DimensionMismatch {
            expected: 2 * complex_dim,
            found: pi0.ambient_dim(),
        });
    }
    if !pi0.is_linear() {
        return Err(Error::NotLinearSubspace);
    }
    Ok(())
}

fn common_dim(lines: &[Line<GaussianRational>], fallback: usize) -> Result<usize> {
    let d = lines.first().map_or(fallback, Line::dim);
    for l in lines {
        if l.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: l.dim(),
            });
        }
        if !l.passes_through_origin() {
            return Err(Error::NotThroughOrigin);
        }
    }
    Ok(d)
}

/// Given complex lines through the origin whose real images all lie in a
/// proper real subspace `pi0` of `R^{2d}`, returns a complex hyperplane
/// through the origin containing every line.
///
/// Takes `v0` as the first canonical basis vector of the real orthogonal
/// complement of `pi0` and returns the Hermitian complement of
/// `iota^-1(v0)`. Real orthogonality of `v0` to `iota(u)` and `iota(iu)`
/// is exactly the vanishing of the real and imaginary parts of
/// `<u, iota^-1(v0)>`.
pub fn trap_in_hyperplane(
    lines: &[Line<GaussianRational>],
    pi0: &Flat<Rational>,
) -> Result<Flat<GaussianRational>> {
    let d = common_dim(lines, pi0.ambient_dim() / 2)?;
    check_real_subspace(pi0, d)?;
    if pi0.dim() == 2 * d {
        return Err(Error::NotProper);
    }
    for (index, line) in lines.iter().enumerate() {
        let image = real_image(line);
        if !pi0.contains_flat(&image.flat) {
            return Err(Error::NotContained { index });
        }
    }
    let normal_space = orthogonal_complement(pi0)?;
    let v0 = &normal_space.basis()[0];
    let w = iota_inv_vec(v0)?;
    let hyperplane = orthogonal_complement(&Flat::linear(d, vec![w]))?;
    debug_assert_eq!(hyperplane.dim(), d - 1);
    debug_assert!(lines.iter().all(|l| hyperplane.contains_line(l)));
    Ok(hyperplane)
}

/// Given complex lines through the origin and nonzero witnesses
/// `v_j in iota(L_j)` that all lie in a real subspace `pi0` of dimension at
/// most `d - 1`, returns `span_C{iota^-1(w)}` over the canonical basis `w` of
/// `pi0`, a complex subspace of dimension at most `d - 1` containing every
/// line.
pub fn lift_dependent_vectors(
    lines: &[Line<GaussianRational>],
    witnesses: &[Vec<Rational>],
    pi0: &Flat<Rational>,
) -> Result<Flat<GaussianRational>> {
    if lines.len() != witnesses.len() {
        return Err(Error::InvalidArgument(format!(
            "{} lines but {} witness vectors",
            lines.len(),
            witnesses.len()
        )));
    }
    let d = common_dim(lines, pi0.ambient_dim() / 2)?;
    check_real_subspace(pi0, d)?;
    if pi0.dim() + 1 > d {
        return Err(Error::InvalidArgument(format!(
            "real subspace has dimension {} but at most {} is allowed",
            pi0.dim(),
            d.saturating_sub(1)
        )));
    }
    for (index, (line, v)) in lines.iter().zip(witnesses).enumerate() {
        if v.len() != 2 * d {
            return Err(Error::DimensionMismatch {
                expected: 2 * d,
                found: v.len(),
            });
        }
        let w = iota_inv_vec(v)?;
        let lambda = w[line.pivot()].clone();
        let on_line = !lambda.is_zero()
            && w.iter()
                .zip(line.direction())
                .all(|(x, u)| *x == lambda.clone() * u);
        if !on_line {
            return Err(Error::WrongWitness { index });
        }
        if !pi0.contains_vector(v) {
            return Err(Error::NotContained { index });
        }
    }
    let spans = pi0
        .basis()
        .iter()
        .map(|w| iota_inv_vec(w))
        .collect::<Result<Vec<_>>>()?;
    let subspace = Flat::linear(d, spans);
    debug_assert!(lines.iter().all(|l| subspace.contains_line(l)));
    Ok(subspace)
}
