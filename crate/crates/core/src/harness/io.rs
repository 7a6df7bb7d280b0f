//! JSON documents for point sets: `{"field": "R" | "C", "d": int, "points": [...]}`.
//!
//! Real coordinates are rational strings (`"3/4"`); complex coordinates are
//! `[re, im]` pairs of such strings.

use std::any::Any;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::scalar::{Field, FieldKind, GaussianRational, Rational};

/// A point configuration over either field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointSet {
    Real(Vec<Point<Rational>>),
    Complex(Vec<Point<GaussianRational>>),
}

#[derive(Serialize, Deserialize)]
struct PointSetDoc {
    field: FieldKind,
    d: usize,
    points: Vec<Value>,
}

impl PointSet {
    pub fn field(&self) -> FieldKind {
        match self {
            PointSet::Real(_) => FieldKind::Real,
            PointSet::Complex(_) => FieldKind::Complex,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            PointSet::Real(p) => p.len(),
            PointSet::Complex(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Ambient dimension; `None` for an empty set.
    pub fn dim(&self) -> Option<usize> {
        match self {
            PointSet::Real(p) => p.first().map(Point::dim),
            PointSet::Complex(p) => p.first().map(Point::dim),
        }
    }

    /// The points as `Point<F>`, or `FieldMismatch` when `F` is the other
    /// field.
    pub fn into_field<F: Field>(self) -> Result<Vec<Point<F>>> {
        let found = self.field().tag();
        let boxed: Box<dyn Any> = match self {
            PointSet::Real(p) => Box::new(p),
            PointSet::Complex(p) => Box::new(p),
        };
        boxed
            .downcast::<Vec<Point<F>>>()
            .map(|b| *b)
            .map_err(|_| Error::FieldMismatch {
                expected: F::KIND.tag(),
                found,
            })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: PointSetDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        match doc.field {
            FieldKind::Real => Ok(PointSet::Real(parse_points(doc.d, doc.points)?)),
            FieldKind::Complex => Ok(PointSet::Complex(parse_points(doc.d, doc.points)?)),
        }
    }

    /// Serializes with `d` taken from the points; an empty set needs
    /// `empty_dim`.
    pub fn to_json_value(&self, empty_dim: usize) -> Value {
        let d = self.dim().unwrap_or(empty_dim);
        let points = match self {
            PointSet::Real(p) => serde_json::to_value(p),
            PointSet::Complex(p) => serde_json::to_value(p),
        }
        .expect("points serialize");
        serde_json::json!({ "field": self.field(), "d": d, "points": points })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value(1)).expect("values serialize")
    }
}

impl From<Vec<Point<Rational>>> for PointSet {
    fn from(p: Vec<Point<Rational>>) -> Self {
        PointSet::Real(p)
    }
}

impl From<Vec<Point<GaussianRational>>> for PointSet {
    fn from(p: Vec<Point<GaussianRational>>) -> Self {
        PointSet::Complex(p)
    }
}

fn parse_points<F: Field>(d: usize, raw: Vec<Value>) -> Result<Vec<Point<F>>> {
    if d == 0 || d > crate::geom::MAX_DIM {
        return Err(Error::DimensionOutOfRange(d));
    }
    raw.into_iter()
        .enumerate()
        .map(|(i, v)| {
            let coords: Vec<F> =
                serde_json::from_value(v).map_err(|e| Error::Parse(format!("point {i}: {e}")))?;
            if coords.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: coords.len(),
                });
            }
            Point::new(coords)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_round_trip() {
        let text = r#"{"field":"R","d":2,"points":[["0","1/2"],["-3","4"]]}"#;
        let set = PointSet::from_json(text).unwrap();
        assert_eq!(set.len(), 2);
        assert_eq!(PointSet::from_json(&set.to_json()).unwrap(), set);
        let pts: Vec<Point<Rational>> = set.into_field().unwrap();
        assert_eq!(pts[0].coords()[1], Rational::new(1, 2));
    }

    #[test]
    fn complex_round_trip_and_mismatch() {
        let text = r#"{"field":"C","d":1,"points":[[["1","2"]],[["0","-1/3"]]]}"#;
        let set = PointSet::from_json(text).unwrap();
        assert_eq!(PointSet::from_json(&set.to_json()).unwrap(), set);
        assert!(matches!(
            set.into_field::<Rational>(),
            Err(Error::FieldMismatch {
                expected: "R",
                found: "C"
            })
        ));
    }

    #[test]
    fn malformed_documents() {
        let wrong_dim = r#"{"field":"R","d":3,"points":[["0","1"]]}"#;
        assert!(matches!(
            PointSet::from_json(wrong_dim),
            Err(Error::DimensionMismatch { .. })
        ));
        let complex_in_real = r#"{"field":"R","d":1,"points":[[["1","2"]]]}"#;
        assert!(matches!(
            PointSet::from_json(complex_in_real),
            Err(Error::Parse(_))
        ));
        assert!(matches!(PointSet::from_json("{"), Err(Error::Parse(_))));
        let zero_dim = r#"{"field":"R","d":0,"points":[]}"#;
        assert!(matches!(
            PointSet::from_json(zero_dim),
            Err(Error::DimensionOutOfRange(0))
        ));
    }
}
