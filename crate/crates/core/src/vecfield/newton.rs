use num_traits::Zero;

use super::graded::{GradedForm, Weight};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub support: Vec<Weight>,
    /// Extreme points of the hull, counterclockwise from the lowest-leftmost.
    pub vertices: Vec<Weight>,
}

/// Lattice points `(-1, n)` and `(m, -1)` with `m, n >= 0`.
pub fn is_demazure(w: Weight) -> bool {
    (w.0 == -1 && w.1 >= 0) || (w.1 == -1 && w.0 >= 0)
}

fn cross(o: Weight, a: Weight, b: Weight) -> i64 {
    let (ox, oy) = (o.0 as i64, o.1 as i64);
    (a.0 as i64 - ox) * (b.1 as i64 - oy) - (a.1 as i64 - oy) * (b.0 as i64 - ox)
}

/// Monotone chain; collinear boundary points are dropped.
pub(crate) fn convex_hull(points: &[Weight]) -> Vec<Weight> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Weight> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Weight> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 2 && lower[0] == lower[1] {
        lower.pop();
    }
    lower
}

pub fn newton_polygon(g: &GradedForm) -> Result<NewtonPolygon> {
    if g.is_zero() {
        return Err(Error::ZeroDerivation);
    }
    let support = g.support();
    let mut pts = support.clone();
    if !g.euler_coef().is_zero() {
        pts.push((0, 0));
    }
    Ok(NewtonPolygon { support, vertices: convex_hull(&pts) })
}

/// Necessary conditions on the Newton polygon of a locally finite
/// (resp. locally nilpotent) field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShapeVerdict {
    /// Every vertex is a Demazure point.
    PassesLnd,
    /// Every vertex is a Demazure point or the origin, and the origin is a vertex.
    PassesLf {
        lnd_witness: Weight,
    },
    FailsLf {
        witness: Weight,
    },
}

impl ShapeVerdict {
    pub fn passes_lf(&self) -> bool {
        !matches!(self, ShapeVerdict::FailsLf { .. })
    }

    pub fn passes_lnd(&self) -> bool {
        matches!(self, ShapeVerdict::PassesLnd)
    }
}

pub fn classify_lf_shape(g: &GradedForm) -> Result<ShapeVerdict> {
    let poly = newton_polygon(g)?;
    if let Some(&w) = poly.vertices.iter().find(|&&v| !is_demazure(v) && v != (0, 0)) {
        return Ok(ShapeVerdict::FailsLf { witness: w });
    }
    Ok(match poly.vertices.iter().find(|&&v| !is_demazure(v)) {
        Some(&w) => ShapeVerdict::PassesLf { lnd_witness: w },
        None => ShapeVerdict::PassesLnd,
    })
}
