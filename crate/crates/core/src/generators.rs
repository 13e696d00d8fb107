//! Built-in polytopes and seeded random families.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::geometry::{check_dim, ConvexPolytope, HalfSpace, Vector};

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be positive and finite, got {x}")))
    }
}

/// Regular `n`-simplex with edge length `sqrt(2)`, centred at the origin.
pub fn regular_simplex(n: usize) -> Result<ConvexPolytope> {
    check_dim(n)?;
    let t = (1.0 - ((n + 1) as f64).sqrt()) / n as f64;
    let mut pts: Vec<Vector> = (0..n).map(|i| Vector::basis(n, i)).collect();
    pts.push(Vector::new(vec![t; n]));
    let c = Vector::mean(&pts);
    ConvexPolytope::simplex(pts.iter().map(|p| p - &c).collect())
}

/// The corner simplex `conv(0, e_1, ..., e_n)`.
pub fn right_corner_simplex(n: usize) -> Result<ConvexPolytope> {
    check_dim(n)?;
    let mut pts = vec![Vector::zeros(n)];
    pts.extend((0..n).map(|i| Vector::basis(n, i)));
    ConvexPolytope::simplex(pts)
}

/// The unit cube `[0, 1]^n`; vertex `i` has coordinate `j` equal to bit `j` of `i`.
pub fn hypercube(n: usize) -> Result<ConvexPolytope> {
    check_dim(n)?;
    let vertices = (0..1_usize << n)
        .map(|i| Vector::new((0..n).map(|j| ((i >> j) & 1) as f64).collect()))
        .collect();
    let mut halfspaces = Vec::with_capacity(2 * n);
    for j in 0..n {
        halfspaces.push(HalfSpace::new(Vector::basis(n, j), 1.0)?);
        halfspaces.push(HalfSpace::new(Vector::basis(n, j).scale(-1.0), 0.0)?);
    }
    ConvexPolytope::new(vertices, halfspaces)
}

/// A convex polygon from its vertices in counter-clockwise order.
pub fn convex_polygon(vertices: Vec<Vector>) -> Result<ConvexPolytope> {
    let m = vertices.len();
    if m < 3 {
        return Err(Error::InvalidArgument(format!("a polygon needs 3 vertices, got {m}")));
    }
    let mut halfspaces = Vec::with_capacity(m);
    for i in 0..m {
        let a = &vertices[i];
        let b = &vertices[(i + 1) % m];
        if a.dim() != 2 || b.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: a.dim().max(b.dim()) });
        }
        let normal = Vector::new(vec![b[1] - a[1], a[0] - b[0]]);
        let offset = normal.dot(a);
        halfspaces.push(HalfSpace::new(normal, offset)?);
    }
    ConvexPolytope::new(vertices, halfspaces)
}

/// Regular `m`-gon inscribed in the unit circle.
pub fn regular_polygon(m: usize) -> Result<ConvexPolytope> {
    let pts = (0..m)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / m as f64;
            Vector::new(vec![t.cos(), t.sin()])
        })
        .collect();
    convex_polygon(pts)
}

/// Unit equilateral triangle in the plane `z = 0` with an apex at height `h`
/// over its centroid. Small `h` pushes the simplex probability toward 1.
pub fn flat_apex(h: f64) -> Result<ConvexPolytope> {
    positive("apex height", h)?;
    let s = 3.0_f64.sqrt();
    ConvexPolytope::simplex(vec![
        Vector::new(vec![0.0, 0.0, 0.0]),
        Vector::new(vec![1.0, 0.0, 0.0]),
        Vector::new(vec![0.5, s / 2.0, 0.0]),
        Vector::new(vec![0.5, s / 6.0, h]),
    ])
}

/// Hull of a unit segment along x at height `d/2` and a unit segment along
/// y at height `-d/2`. Small `d` pushes the simplex probability toward 0.
pub fn skew_segments(d: f64) -> Result<ConvexPolytope> {
    positive("segment separation", d)?;
    ConvexPolytope::simplex(vec![
        Vector::new(vec![-0.5, 0.0, d / 2.0]),
        Vector::new(vec![0.5, 0.0, d / 2.0]),
        Vector::new(vec![0.0, -0.5, -d / 2.0]),
        Vector::new(vec![0.0, 0.5, -d / 2.0]),
    ])
}

fn gaussian_point<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vector {
    Vector::new((0..n).map(|_| rng.sample(StandardNormal)).collect())
}

/// Simplex on `n + 1` independent standard Gaussian points. Draws with a
/// volume ratio below `1e-3` are rejected so the result is well conditioned.
pub fn random_simplex(n: usize, seed: u64) -> Result<ConvexPolytope> {
    check_dim(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let pts: Vec<Vector> = (0..=n).map(|_| gaussian_point(&mut rng, n)).collect();
        match ConvexPolytope::simplex_with_tolerance(pts, 1e-3) {
            Ok(p) => return ConvexPolytope::simplex(p.vertices().to_vec()),
            Err(Error::DegenerateSimplex { .. } | Error::Hollow { .. } | Error::Inconsistent(_)) => continue,
            Err(e) => return Err(e),
        }
    }
}

/// Convex `m`-gon with vertices at sorted uniform angles on the unit circle,
/// no two closer than 0.05 rad.
pub fn random_convex_polygon(m: usize, seed: u64) -> Result<ConvexPolytope> {
    if m < 3 {
        return Err(Error::InvalidArgument(format!("a polygon needs 3 vertices, got {m}")));
    }
    if m as f64 * 0.05 >= 2.0 * PI {
        return Err(Error::InvalidArgument(format!("too many polygon vertices: {m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut angles: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
        angles.sort_by(f64::total_cmp);
        let wrap = angles[0] + 2.0 * PI - angles[m - 1];
        let min_gap = angles.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::min);
        if min_gap < 0.05 {
            continue;
        }
        let pts = angles.iter().map(|t| Vector::new(vec![t.cos(), t.sin()])).collect();
        return convex_polygon(pts);
    }
}

/// Haar-distributed proper rotation of `R^n`.
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q
}

/// `p` under a random rotation followed by a Gaussian translation of scale 3.
pub fn random_rigid_motion(p: &ConvexPolytope, seed: u64) -> Result<ConvexPolytope> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = p.dim();
    let rotation = random_rotation(&mut rng, n);
    let translation = gaussian_point(&mut rng, n).scale(3.0);
    p.transformed(&rotation, &translation)
}
