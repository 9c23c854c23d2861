use std::fmt;

use crate::error::{Error, Result};
use crate::exactalg::{Field, Scalar};

/// A rational point of the projective line: an affine coordinate or `∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ProjPoint {
    Affine(Scalar),
    Infinity,
}

impl ProjPoint {
    pub fn parse(field: Field, text: &str) -> Result<ProjPoint> {
        match text.trim() {
            "inf" | "∞" | "infinity" => Ok(ProjPoint::Infinity),
            t => Ok(ProjPoint::Affine(field.parse_scalar(t)?)),
        }
    }

    pub fn to_json(&self, field: Field) -> serde_json::Value {
        match self {
            ProjPoint::Infinity => serde_json::Value::String("inf".into()),
            ProjPoint::Affine(a) => field.scalar_to_json(a),
        }
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Affine(a) => write!(f, "{a}"),
            ProjPoint::Infinity => write!(f, "∞"),
        }
    }
}

/// The projective line over `field` with `k` distinct marked rational points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct P1Arrangement {
    field: Field,
    points: Vec<ProjPoint>,
}

impl P1Arrangement {
    pub fn new(field: Field, points: Vec<ProjPoint>) -> Result<P1Arrangement> {
        for (i, p) in points.iter().enumerate() {
            if let ProjPoint::Affine(a) = p {
                if !field.contains(a) {
                    return Err(Error::scenario(format!("points[{i}]"), format!("{a} is not an element of {field}")));
                }
            }
            if points[..i].contains(p) {
                return Err(Error::scenario(format!("points[{i}]"), format!("point {p} is repeated")));
            }
        }
        Ok(P1Arrangement { field, points })
    }

    /// Convenience constructor from affine integers, `None` standing for `∞`.
    pub fn from_ints(field: Field, points: &[Option<i64>]) -> Result<P1Arrangement> {
        let pts = points
            .iter()
            .map(|p| match p {
                Some(a) => ProjPoint::Affine(field.from_i64(*a)),
                None => ProjPoint::Infinity,
            })
            .collect();
        P1Arrangement::new(field, pts)
    }

    /// The first `count` rational points in the order `0, 1, ∞, 2, 3, …`
    /// (finite fields) or `0, 1, ∞, −1, 2, −2, …` (rationals); `None` when
    /// the field has fewer than `count` rational points.
    pub fn standard_points(field: Field, count: usize) -> Option<Vec<ProjPoint>> {
        let mut out = Vec::new();
        let mut push = |a: i64| out.push(ProjPoint::Affine(field.from_i64(a)));
        push(0);
        push(1);
        match field {
            Field::Prime(p) => (2..p as i64).for_each(&mut push),
            Field::Rationals => {
                for a in 1..=count as i64 {
                    push(-a);
                    push(a + 1);
                }
            }
        }
        out.insert(2.min(out.len()), ProjPoint::Infinity);
        if out.len() < count {
            return None;
        }
        out.truncate(count);
        Some(out)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn k(&self) -> usize {
        self.points.len()
    }

    /// The arrangement keeping only the points selected by `mask`.
    pub fn subset(&self, mask: u32) -> P1Arrangement {
        let points = self.points.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, p)| p.clone()).collect();
        P1Arrangement { field: self.field, points }
    }
}
