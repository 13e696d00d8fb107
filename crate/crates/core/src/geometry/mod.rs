//! Vectors, half-spaces and full-dimensional convex polytopes.

mod io;
mod linalg;
mod polytope;

use std::f64::consts::PI;
use std::ops::{Add, Index, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use io::{load_polytope, parse_polytope, serialize_polytope, HalfSpaceRecord, PolytopeFile};
pub use linalg::{affine_rank, matrix_rank, solve_in_place};
pub use polytope::{ConvexPolytope, Face, FaceId};

/// Activity and incidence tolerance used unless a caller overrides it.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Allowed deviation of a unit vector's norm from 1.
pub const UNIT_NORM_TOLERANCE: f64 = 1e-12;

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 8;

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if (MIN_DIM..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(n))
    }
}

/// Volume of the unit ball in `R^n`, `pi^(n/2) / Gamma(1 + n/2)`.
///
/// Evaluated with the recurrence `w_n = w_(n-2) * 2 pi / n` from `w_0 = 1`
/// and `w_1 = 2`, which avoids a Gamma implementation.
pub fn unit_ball_volume(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("unit ball dimension must be >= 1".into()));
    }
    let mut w = if n % 2 == 0 { 1.0 } else { 2.0 };
    let mut k = if n % 2 == 0 { 2 } else { 3 };
    while k <= n {
        w *= 2.0 * PI / k as f64;
        k += 2;
    }
    Ok(w)
}

/// Surface area `n * w_n` of the unit sphere in `R^n`.
pub fn unit_sphere_area(n: usize) -> Result<f64> {
    Ok(n as f64 * unit_ball_volume(n)?)
}

/// A point or direction in `R^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(Vec<f64>);

impl Vector {
    /// Panics on an empty coordinate list; every vector has positive dimension.
    pub fn new(coords: Vec<f64>) -> Self {
        assert!(!coords.is_empty(), "vector must have positive dimension");
        Vector(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Vector::new(vec![0.0; dim])
    }

    pub fn basis(dim: usize, axis: usize) -> Self {
        let mut v = Vector::zeros(dim);
        v.0[axis] = 1.0;
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        dot(&self.0, &other.0)
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, factor: f64) -> Vector {
        Vector(self.0.iter().map(|x| x * factor).collect())
    }

    /// `None` for the zero vector.
    pub fn normalized(&self) -> Option<Vector> {
        let norm = self.norm();
        (norm > 0.0 && norm.is_finite()).then(|| self.scale(1.0 / norm))
    }

    pub fn is_unit(&self) -> bool {
        (self.norm() - 1.0).abs() <= UNIT_NORM_TOLERANCE
    }

    pub(crate) fn ensure_unit(&self) -> Result<()> {
        if self.is_unit() {
            Ok(())
        } else {
            Err(Error::NotUnit { norm: self.norm() })
        }
    }

    /// Arithmetic mean of a non-empty set of points.
    pub fn mean<'a>(points: impl IntoIterator<Item = &'a Vector>) -> Vector {
        let mut iter = points.into_iter();
        let first = iter.next().expect("mean of an empty point set");
        let mut acc = first.0.clone();
        let mut count = 1.0;
        for p in iter {
            for (a, x) in acc.iter_mut().zip(&p.0) {
                *a += x;
            }
            count += 1.0;
        }
        acc.iter_mut().for_each(|a| *a /= count);
        Vector(acc)
    }
}

impl From<Vec<f64>> for Vector {
    fn from(coords: Vec<f64>) -> Self {
        Vector::new(coords)
    }
}

impl Index<usize> for Vector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Sub for &Vector {
    type Output = Vector;

    fn sub(self, rhs: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Add for &Vector {
    type Output = Vector;

    fn add(self, rhs: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The closed half-space `{x : normal . x <= offset}`.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfSpace {
    normal: Vector,
    offset: f64,
    // cached for signed distances
    norm: f64,
}

impl HalfSpace {
    pub fn new(normal: Vector, offset: f64) -> Result<Self> {
        let norm = normal.norm();
        if !(norm > 0.0 && norm.is_finite() && offset.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "half-space normal must be finite and nonzero (norm {norm})"
            )));
        }
        Ok(HalfSpace { normal, offset, norm })
    }

    pub fn normal(&self) -> &Vector {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn unit_normal(&self) -> Vector {
        self.normal.scale(1.0 / self.norm)
    }

    /// Signed Euclidean distance of `x` past the bounding hyperplane;
    /// negative inside.
    pub fn signed_distance(&self, x: &Vector) -> f64 {
        (self.normal.dot(x) - self.offset) / self.norm
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ball_volume_small_dimensions() {
        assert_eq!(unit_ball_volume(1).unwrap(), 2.0);
        assert!((unit_ball_volume(2).unwrap() - PI).abs() < 1e-15);
        assert!((unit_ball_volume(3).unwrap() - 4.0 * PI / 3.0).abs() < 1e-15);
        assert!((unit_sphere_area(4).unwrap() - 2.0 * PI * PI).abs() < 1e-14);
    }

    #[test]
    fn ball_volume_rejects_zero() {
        assert!(matches!(unit_ball_volume(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn ball_volume_matches_gamma_formula() {
        // Oracle: pi^(n/2) / Gamma(1 + n/2) through an independent Gamma.
        for n in 1..=12 {
            let nf = n as f64;
            let oracle = PI.powf(nf / 2.0) / statrs::function::gamma::gamma(1.0 + nf / 2.0);
            let w = unit_ball_volume(n).unwrap();
            assert!((w - oracle).abs() <= 1e-13 * oracle, "n={n}: {w} vs {oracle}");
        }
    }

    #[test]
    fn halfspace_rejects_zero_normal() {
        assert!(HalfSpace::new(Vector::zeros(3), 1.0).is_err());
    }

    #[test]
    fn signed_distance_is_scale_free() {
        let h = HalfSpace::new(Vector::new(vec![0.0, 2.0]), 2.0).unwrap();
        let d = h.signed_distance(&Vector::new(vec![5.0, 3.0]));
        assert!((d - 2.0).abs() < 1e-15);
    }

    #[test]
    fn unit_check() {
        assert!(Vector::new(vec![0.6, 0.8]).is_unit());
        assert!(!Vector::new(vec![0.6, 0.81]).is_unit());
        assert!(Vector::new(vec![3.0, 4.0]).normalized().unwrap().is_unit());
        assert!(Vector::zeros(2).normalized().is_none());
    }
}
