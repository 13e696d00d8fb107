//! Solid inner angles at the centroid of a proper face.
//!
//! The angle at a point is the set of unit directions `u` along which one can
//! move into the polytope; at the centroid of a face it is the tangent cone
//! `{u : a_i . u <= 0}` over the half-spaces tight on the face, cut with the
//! sphere. Its measure is reported raw (surface area on the unit sphere)
//! and normalised by the total area `n * w_n`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{dot, unit_sphere_area, ConvexPolytope, Face, Vector};
use crate::sphere::{count_hits, McConfig};

/// How a [`SolidAngleMeasure`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MeasureMethod {
    Exact2D,
    Exact3DVertex,
    Exact3DEdge,
    /// Facet of any polytope: exactly half the sphere.
    ExactFacet,
    MonteCarlo,
}

impl MeasureMethod {
    pub fn label(self) -> &'static str {
        match self {
            MeasureMethod::Exact2D => "exact-2d",
            MeasureMethod::Exact3DVertex => "exact-3d-vertex",
            MeasureMethod::Exact3DEdge => "exact-3d-edge",
            MeasureMethod::ExactFacet => "exact-facet",
            MeasureMethod::MonteCarlo => "monte-carlo",
        }
    }

    pub fn is_exact(self) -> bool {
        self != MeasureMethod::MonteCarlo
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolidAngleMeasure {
    /// Spherical surface measure.
    pub raw: f64,
    /// `raw / (n w_n)`.
    pub normalized: f64,
    /// Standard error of `raw`; zero for exact methods.
    pub stderr: f64,
    pub method: MeasureMethod,
}

impl SolidAngleMeasure {
    fn exact(raw: f64, dim: usize, method: MeasureMethod) -> Result<Self> {
        let area = unit_sphere_area(dim)?;
        Ok(SolidAngleMeasure { raw, normalized: raw / area, stderr: 0.0, method })
    }
}

/// Requested angle algorithm.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AngleMethod {
    /// Closed forms; available for facets in any dimension and for every
    /// face in dimensions 2 and 3.
    Exact,
    MonteCarlo(McConfig),
}

impl AngleMethod {
    /// Exact when the ambient dimension is at most 3, sampling otherwise.
    pub fn auto(dim: usize, mc: McConfig) -> Self {
        if dim <= 3 {
            AngleMethod::Exact
        } else {
            AngleMethod::MonteCarlo(mc)
        }
    }
}

/// The unit normals of the half-spaces tight on a face; membership of a
/// direction is one dot product per normal.
#[derive(Clone, Debug)]
pub struct TangentCone {
    dim: usize,
    normals: Vec<f64>,
    slack: f64,
}

impl TangentCone {
    pub fn new(p: &ConvexPolytope, face: &Face) -> Result<Self> {
        p.ensure_face(face)?;
        let mut normals = Vec::with_capacity(face.facets().len() * p.dim());
        for &j in face.facets() {
            normals.extend_from_slice(p.halfspaces()[j].unit_normal().coords());
        }
        Ok(TangentCone { dim: p.dim(), normals, slack: p.tolerance() })
    }

    /// Closed-cone membership of a unit direction.
    #[inline]
    pub fn contains(&self, u: &[f64]) -> bool {
        self.normals.chunks_exact(self.dim).all(|a| dot(a, u) <= self.slack)
    }

    /// Membership in the cone or its antipode.
    #[inline]
    pub fn contains_either(&self, u: &[f64]) -> bool {
        let mut pos = true;
        let mut neg = true;
        for a in self.normals.chunks_exact(self.dim) {
            let d = dot(a, u);
            pos &= d <= self.slack;
            neg &= d >= -self.slack;
            if !pos && !neg {
                return false;
            }
        }
        true
    }
}

/// True iff `u` points into `p` from the centroid of `face` (closed cone).
pub fn tangent_cone_contains(p: &ConvexPolytope, face: &Face, u: &Vector) -> Result<bool> {
    u.ensure_unit()?;
    if u.dim() != p.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: u.dim() });
    }
    Ok(TangentCone::new(p, face)?.contains(u.coords()))
}

/// Interior angle at a polygon vertex.
pub fn solid_angle_exact_2d(p: &ConvexPolytope, vertex: &Face) -> Result<SolidAngleMeasure> {
    expect_dim(p, 2)?;
    expect_face_dim(p, vertex, 0)?;
    let v = vertex.vertex_ids()[0];
    let dirs = neighbour_directions(p, v);
    let [a, b] = &dirs[..] else {
        return Err(Error::MalformedLattice(format!("polygon vertex {v} is not on two edges")));
    };
    let cross = a[0] * b[1] - a[1] * b[0];
    let raw = cross.abs().atan2(a.dot(b));
    SolidAngleMeasure::exact(raw, 2, MeasureMethod::Exact2D)
}

/// Solid angle at a vertex of a 3-polytope: the area of the spherical polygon
/// cut out by its edge directions, fan-triangulated.
pub fn solid_angle_exact_3d_vertex(p: &ConvexPolytope, vertex: &Face) -> Result<SolidAngleMeasure> {
    expect_dim(p, 3)?;
    expect_face_dim(p, vertex, 0)?;
    let v = vertex.vertex_ids()[0];
    let dirs = neighbour_directions(p, v);
    if dirs.len() < 3 {
        return Err(Error::MalformedLattice(format!(
            "vertex {v} has {} incident edges, expected at least 3",
            dirs.len()
        )));
    }
    let order = cyclic_order(p, vertex, &dirs)?;
    let first = &dirs[order[0]];
    let raw = order
        .windows(2)
        .skip(1)
        .map(|w| spherical_triangle_area(first, &dirs[w[0]], &dirs[w[1]]))
        .sum();
    SolidAngleMeasure::exact(raw, 3, MeasureMethod::Exact3DVertex)
}

/// Solid angle at an edge midpoint of a 3-polytope: a lune of area twice the
/// interior dihedral angle.
pub fn solid_angle_exact_3d_edge(p: &ConvexPolytope, edge: &Face) -> Result<SolidAngleMeasure> {
    expect_dim(p, 3)?;
    expect_face_dim(p, edge, 1)?;
    let [f, g] = edge.facets()[..] else {
        return Err(Error::MalformedLattice(format!(
            "edge {:?} lies on {} facets, expected 2",
            edge.vertex_ids(),
            edge.facets().len()
        )));
    };
    let a = p.halfspaces()[f].unit_normal();
    let b = p.halfspaces()[g].unit_normal();
    let normal_angle = cross3(&a, &b).norm().atan2(a.dot(&b));
    SolidAngleMeasure::exact(2.0 * (PI - normal_angle), 3, MeasureMethod::Exact3DEdge)
}

/// The tangent cone at a facet centroid is a half-space.
pub fn solid_angle_exact_facet(p: &ConvexPolytope, facet: &Face) -> Result<SolidAngleMeasure> {
    expect_face_dim(p, facet, p.dim() - 1)?;
    let area = unit_sphere_area(p.dim())?;
    SolidAngleMeasure::exact(area / 2.0, p.dim(), MeasureMethod::ExactFacet)
}

/// Monte Carlo estimate: the hit fraction of uniform directions in the
/// tangent cone, times the sphere area.
pub fn solid_angle_mc(p: &ConvexPolytope, face: &Face, cfg: &McConfig) -> Result<SolidAngleMeasure> {
    let hf = hit_fraction(p, face, cfg, false)?;
    let area = unit_sphere_area(p.dim())?;
    Ok(SolidAngleMeasure {
        raw: area * hf.fraction,
        normalized: hf.fraction,
        stderr: area * hf.stderr,
        method: MeasureMethod::MonteCarlo,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HitFraction {
    pub hits: u64,
    pub samples: u64,
    pub fraction: f64,
    pub stderr: f64,
}

impl HitFraction {
    pub fn new(hits: u64, samples: u64) -> Self {
        let fraction = hits as f64 / samples as f64;
        let stderr = (fraction * (1.0 - fraction) / samples as f64).sqrt();
        HitFraction { hits, samples, fraction, stderr }
    }
}

/// Fraction of uniform directions in the tangent cone at `face`, or with
/// `antipodal` in the cone or its negative.
pub fn hit_fraction(
    p: &ConvexPolytope,
    face: &Face,
    cfg: &McConfig,
    antipodal: bool,
) -> Result<HitFraction> {
    cfg.validate()?;
    let cone = TangentCone::new(p, face)?;
    let hits = if antipodal {
        count_hits(cfg, p.dim(), |u| cone.contains_either(u))
    } else {
        count_hits(cfg, p.dim(), |u| cone.contains(u))
    };
    Ok(HitFraction::new(hits, cfg.samples))
}

/// Angle at any proper face with the requested method.
pub fn solid_angle(p: &ConvexPolytope, face: &Face, method: &AngleMethod) -> Result<SolidAngleMeasure> {
    p.ensure_face(face)?;
    match method {
        AngleMethod::MonteCarlo(cfg) => solid_angle_mc(p, face, cfg),
        AngleMethod::Exact => match (p.dim(), face.dim()) {
            (n, k) if k + 1 == n => solid_angle_exact_facet(p, face),
            (2, 0) => solid_angle_exact_2d(p, face),
            (3, 0) => solid_angle_exact_3d_vertex(p, face),
            (3, 1) => solid_angle_exact_3d_edge(p, face),
            (n, k) => Err(Error::Unsupported(format!(
                "no closed-form solid angle for a {k}-face in dimension {n}"
            ))),
        },
    }
}

/// Angles at every `k`-face. Sampled faces each draw from an independent
/// child seed keyed by the face's global lattice index.
pub fn face_angles(p: &ConvexPolytope, k: usize, method: &AngleMethod) -> Result<Vec<SolidAngleMeasure>> {
    if k >= p.dim() {
        return Err(Error::InvalidArgument(format!(
            "face dimension {k} out of range 0..={}",
            p.dim() - 1
        )));
    }
    p.faces(k)
        .iter()
        .map(|f| match method {
            AngleMethod::MonteCarlo(cfg) => {
                solid_angle_mc(p, f, &cfg.derive(p.global_index(f.id()) as u64))
            }
            AngleMethod::Exact => solid_angle(p, f, method),
        })
        .collect()
}

/// Sum of the raw angles over all `k`-faces.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleSum {
    pub dim: usize,
    pub count: usize,
    pub total: f64,
    /// Root-sum-square of the per-face standard errors.
    pub stderr: f64,
}

pub fn sum_face_angles(p: &ConvexPolytope, k: usize, method: &AngleMethod) -> Result<AngleSum> {
    let angles = face_angles(p, k, method)?;
    Ok(AngleSum {
        dim: k,
        count: angles.len(),
        total: angles.iter().map(|a| a.raw).sum(),
        stderr: angles.iter().map(|a| a.stderr * a.stderr).sum::<f64>().sqrt(),
    })
}

/// Probability `2 alpha(v) / (n w_n)` that the shadow of vertex `v` on a random
/// hyperplane lands in the relative interior of the shadow polytope.
pub fn vertex_event_probability(p: &ConvexPolytope, vertex: &Face, method: &AngleMethod) -> Result<f64> {
    expect_face_dim(p, vertex, 0)?;
    Ok(2.0 * solid_angle(p, vertex, method)?.normalized)
}

/// Area of the spherical triangle spanned by three unit vectors,
/// `2 atan2(|a . (b x c)|, 1 + a.b + b.c + c.a)`.
pub fn spherical_triangle_area(a: &Vector, b: &Vector, c: &Vector) -> f64 {
    let triple = a.dot(&cross3(b, c));
    let denom = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    2.0 * triple.abs().atan2(denom)
}

fn cross3(a: &Vector, b: &Vector) -> Vector {
    Vector::new(vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])
}

fn expect_dim(p: &ConvexPolytope, n: usize) -> Result<()> {
    if p.dim() == n {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: n, found: p.dim() })
    }
}

fn expect_face_dim(p: &ConvexPolytope, face: &Face, k: usize) -> Result<()> {
    p.ensure_face(face)?;
    if face.dim() == k {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("expected a {k}-face, got a {}-face", face.dim())))
    }
}

/// Unit directions from vertex `v` to its edge neighbours, ordered by neighbour index.
fn neighbour_directions(p: &ConvexPolytope, v: usize) -> Vec<Vector> {
    let origin = &p.vertices()[v];
    p.edges_at(v)
        .map(|e| {
            let w = if e.vertex_ids()[0] == v { e.vertex_ids()[1] } else { e.vertex_ids()[0] };
            (&p.vertices()[w] - origin).normalized().expect("distinct vertices")
        })
        .collect()
}

/// Cyclic order of the edge directions around a vertex cone in `R^3`.
///
/// The axis `m = -sum(a_f)` over the tight facet normals satisfies
/// `m . e > 0` for every edge direction `e`, so the points `e / (m . e)` lie
/// on the convex cross-section `{x : m . x = 1}` in cone order. They are
/// sorted by angle about their mean, ties broken by index.
fn cyclic_order(p: &ConvexPolytope, vertex: &Face, dirs: &[Vector]) -> Result<Vec<usize>> {
    let axis = vertex
        .facets()
        .iter()
        .fold(Vector::zeros(3), |acc, &j| &acc + &p.halfspaces()[j].unit_normal())
        .scale(-1.0)
        .normalized()
        .ok_or_else(|| Error::MalformedLattice("vertex cone has no interior axis".into()))?;

    let mut section = Vec::with_capacity(dirs.len());
    for e in dirs {
        let h = axis.dot(e);
        if h <= 0.0 {
            return Err(Error::MalformedLattice("edge direction outside the vertex cone".into()));
        }
        section.push(e.scale(1.0 / h));
    }
    let centre = Vector::mean(&section);

    // orthonormal basis of the plane orthogonal to the axis
    let pivot = (0..3)
        .min_by(|&i, &j| axis[i].abs().total_cmp(&axis[j].abs()))
        .expect("three coordinates");
    let helper = Vector::basis(3, pivot);
    let b1 = (&helper - &axis.scale(axis.dot(&helper))).normalized().expect("independent");
    let b2 = cross3(&axis, &b1);

    let angles: Vec<f64> = section
        .iter()
        .map(|s| {
            let d = s - &centre;
            d.dot(&b2).atan2(d.dot(&b1))
        })
        .collect();
    let mut order: Vec<usize> = (0..dirs.len()).collect();
    order.sort_by(|&i, &j| angles[i].total_cmp(&angles[j]).then(i.cmp(&j)));
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::geometry::{HalfSpace, Vector};

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec())
    }

    fn regular_tet_vertex_angle() -> f64 {
        (23.0_f64 / 27.0).acos()
    }

    #[test]
    fn square_corner_membership() {
        let sq = generators::hypercube(2).unwrap();
        let corner = sq.find_face(&[0]).unwrap();
        let s = 0.5_f64.sqrt();
        assert!(tangent_cone_contains(&sq, corner, &v(&[s, s])).unwrap());
        assert!(!tangent_cone_contains(&sq, corner, &v(&[-1.0, 0.0])).unwrap());
    }

    #[test]
    fn cube_edge_direction_is_on_closed_cone() {
        let cube = generators::hypercube(3).unwrap();
        // edge between (0,0,0) and (1,0,0)
        let edge = cube.find_face(&[0, 1]).unwrap();
        assert!(tangent_cone_contains(&cube, edge, &v(&[1.0, 0.0, 0.0])).unwrap());
        assert!(tangent_cone_contains(&cube, edge, &v(&[-1.0, 0.0, 0.0])).unwrap());
    }

    #[test]
    fn membership_errors() {
        let cube = generators::hypercube(3).unwrap();
        let tet = generators::regular_simplex(3).unwrap();
        let corner = cube.find_face(&[0]).unwrap();
        assert!(matches!(
            tangent_cone_contains(&cube, corner, &v(&[1.0, 1.0, 0.0])),
            Err(Error::NotUnit { .. })
        ));
        let foreign = &tet.faces(2)[0];
        assert_eq!(
            tangent_cone_contains(&cube, foreign, &v(&[1.0, 0.0, 0.0])),
            Err(Error::NotAFace)
        );
    }

    #[test]
    fn planar_angles() {
        let s = 3.0_f64.sqrt();
        let eq = ConvexPolytope::simplex(vec![v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[0.5, s / 2.0])]).unwrap();
        for f in eq.faces(0) {
            assert!((solid_angle_exact_2d(&eq, f).unwrap().raw - PI / 3.0).abs() < 1e-14);
        }
        let sq = generators::hypercube(2).unwrap();
        for f in sq.faces(0) {
            let m = solid_angle_exact_2d(&sq, f).unwrap();
            assert!((m.raw - PI / 2.0).abs() < 1e-14);
            assert!((m.normalized - 0.25).abs() < 1e-15);
        }
        let tri = generators::right_corner_simplex(2).unwrap();
        let corner = tri.find_face(&[0]).unwrap();
        assert!((solid_angle_exact_2d(&tri, corner).unwrap().raw - PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn planar_requires_dimension_two() {
        let cube = generators::hypercube(3).unwrap();
        assert!(matches!(
            solid_angle_exact_2d(&cube, &cube.faces(0)[0]),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn cube_and_corner_vertices_are_octants() {
        let cube = generators::hypercube(3).unwrap();
        for f in cube.faces(0) {
            let m = solid_angle_exact_3d_vertex(&cube, f).unwrap();
            assert!((m.raw - PI / 2.0).abs() < 1e-13, "{}", m.raw);
        }
        let corner = generators::right_corner_simplex(3).unwrap();
        let m = solid_angle_exact_3d_vertex(&corner, corner.find_face(&[0]).unwrap()).unwrap();
        assert!((m.raw - PI / 2.0).abs() < 1e-13);
    }

    #[test]
    fn regular_tetrahedron_vertex_closed_form() {
        let tet = generators::regular_simplex(3).unwrap();
        for f in tet.faces(0) {
            let m = solid_angle_exact_3d_vertex(&tet, f).unwrap();
            assert!((m.raw - regular_tet_vertex_angle()).abs() < 1e-12, "{}", m.raw);
        }
    }

    /// Independent route: sample directions by rejection from the cube, step
    /// a short distance from the vertex and test the barycentric coordinates
    /// of the stepped point. Shares no code with the tangent-cone path.
    #[test]
    fn regular_tetrahedron_vertex_brute_force_oracle() {
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;

        let s = 1.0 / 8.0_f64.sqrt();
        let verts = [[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]];
        // barycentric coordinates of x: lambda = B (x - v0) for the edge matrix inverse
        let e = |k: usize| [verts[k][0] - verts[0][0], verts[k][1] - verts[0][1], verts[k][2] - verts[0][2]];
        let m = nalgebra::Matrix3::from_columns(&[e(1).into(), e(2).into(), e(3).into()]);
        let inv = m.try_inverse().unwrap();

        const SAMPLES: u64 = 10_000_000;
        const STEP: f64 = 1e-6;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(2024);
        let mut hits = 0_u64;
        let mut drawn = 0_u64;
        while drawn < SAMPLES {
            let x: [f64; 3] = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            if r2 > 1.0 || r2 < 1e-12 {
                continue;
            }
            drawn += 1;
            let d = nalgebra::Vector3::new(x[0], x[1], x[2]) * (STEP / r2.sqrt());
            let lam = inv * d;
            if lam.iter().all(|&l| l >= 0.0) && lam.sum() <= 1.0 {
                hits += 1;
            }
        }
        let p = hits as f64 / SAMPLES as f64;
        let estimate = 4.0 * PI * p;
        let stderr = 4.0 * PI * (p * (1.0 - p) / SAMPLES as f64).sqrt();
        let exact = regular_tet_vertex_angle();
        assert!((estimate - exact).abs() <= 4.0 * stderr, "{estimate} +- {stderr} vs {exact}");
        // frozen value of the exact route
        assert!((exact - 0.551_285_598_432_530_8).abs() < 1e-12);
    }

    #[test]
    fn edges_are_lunes() {
        let cube = generators::hypercube(3).unwrap();
        for e in cube.faces(1) {
            assert!((solid_angle_exact_3d_edge(&cube, e).unwrap().raw - PI).abs() < 1e-13);
        }
        let tet = generators::regular_simplex(3).unwrap();
        // oracle: dihedral from the facet normals' dot product, pi - acos(n1 . n2)
        let dihedral = (1.0_f64 / 3.0).acos();
        for e in tet.faces(1) {
            let [f, g] = e.facets() else { panic!() };
            let n1 = tet.halfspaces()[*f].unit_normal();
            let n2 = tet.halfspaces()[*g].unit_normal();
            let via_dot = PI - n1.dot(&n2).acos();
            assert!((via_dot - dihedral).abs() < 1e-12);
            let m = solid_angle_exact_3d_edge(&tet, e).unwrap();
            assert!((m.raw - 2.0 * dihedral).abs() < 1e-12);
        }
    }

    #[test]
    fn flat_edge_approaches_half_sphere() {
        // side facets of a nearly flat pyramid meet at a dihedral close to pi
        let h = 1e-7;
        let p = generators::flat_apex(h).unwrap();
        let apex = 3;
        let mut best: f64 = 0.0;
        for e in p.edges_at(apex) {
            best = best.max(solid_angle_exact_3d_edge(&p, e).unwrap().raw);
        }
        assert!((best - 2.0 * PI).abs() < 1e-5, "{best}");
        let m = solid_angle_exact_3d_edge(&p, p.edges_at(apex).next().unwrap()).unwrap();
        assert!((m.normalized - 0.5).abs() < 1e-6);
    }

    #[test]
    fn edge_rejects_vertex() {
        let cube = generators::hypercube(3).unwrap();
        assert!(solid_angle_exact_3d_edge(&cube, &cube.faces(0)[0]).is_err());
    }

    #[test]
    fn non_simple_vertex_uses_full_fan() {
        // apex of the pyramid over a cube face from the cube centre: four
        // edges, cone is one sixth of the sphere
        let vs = vec![
            v(&[-1.0, -1.0, 1.0]),
            v(&[1.0, -1.0, 1.0]),
            v(&[1.0, 1.0, 1.0]),
            v(&[-1.0, 1.0, 1.0]),
            v(&[0.0, 0.0, 0.0]),
        ];
        let hs = vec![
            HalfSpace::new(v(&[0.0, 0.0, 1.0]), 1.0).unwrap(),
            HalfSpace::new(v(&[1.0, 0.0, -1.0]), 0.0).unwrap(),
            HalfSpace::new(v(&[-1.0, 0.0, -1.0]), 0.0).unwrap(),
            HalfSpace::new(v(&[0.0, 1.0, -1.0]), 0.0).unwrap(),
            HalfSpace::new(v(&[0.0, -1.0, -1.0]), 0.0).unwrap(),
        ];
        let p = ConvexPolytope::new(vs, hs).unwrap();
        let apex = p.find_face(&[4]).unwrap();
        let m = solid_angle_exact_3d_vertex(&p, apex).unwrap();
        assert!((m.raw - 4.0 * PI / 6.0).abs() < 1e-12, "{}", m.raw);
    }

    #[test]
    fn monte_carlo_matches_octant() {
        let cube = generators::hypercube(3).unwrap();
        let cfg = McConfig::new(1_000_000, 1);
        let m = solid_angle_mc(&cube, &cube.faces(0)[0], &cfg).unwrap();
        assert!((m.raw - 0.125 * 4.0 * PI).abs() <= 4.0 * m.stderr, "{m:?}");
        assert_eq!(m.method, MeasureMethod::MonteCarlo);
    }

    #[test]
    fn monte_carlo_matches_tetrahedron_exact() {
        let tet = generators::regular_simplex(3).unwrap();
        let cfg = McConfig::new(1_000_000, 2);
        let f = &tet.faces(0)[1];
        let mc = solid_angle_mc(&tet, f, &cfg).unwrap();
        let exact = solid_angle_exact_3d_vertex(&tet, f).unwrap();
        assert!((mc.raw - exact.raw).abs() <= 4.0 * mc.stderr);
    }

    #[test]
    fn monte_carlo_square_vertex() {
        let sq = generators::hypercube(2).unwrap();
        let m = solid_angle_mc(&sq, &sq.faces(0)[2], &McConfig::new(100_000, 3)).unwrap();
        assert!((m.raw - PI / 2.0).abs() <= 4.0 * m.stderr);
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let tet = generators::regular_simplex(3).unwrap();
        let cfg = McConfig::new(200_000, 9).with_workers(3);
        let a = solid_angle_mc(&tet, &tet.faces(0)[0], &cfg).unwrap();
        let b = solid_angle_mc(&tet, &tet.faces(0)[0], &cfg).unwrap();
        assert_eq!(a.raw.to_bits(), b.raw.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
    }

    #[test]
    fn monte_carlo_rejects_zero_samples() {
        let tet = generators::regular_simplex(3).unwrap();
        assert!(solid_angle_mc(&tet, &tet.faces(0)[0], &McConfig::new(0, 0)).is_err());
    }

    #[test]
    fn vertex_probabilities() {
        let theta: f64 = 1.1;
        let tri = ConvexPolytope::simplex(vec![
            v(&[0.0, 0.0]),
            v(&[1.0, 0.0]),
            v(&[theta.cos(), theta.sin()]),
        ])
        .unwrap();
        let p0 = vertex_event_probability(&tri, tri.find_face(&[0]).unwrap(), &AngleMethod::Exact).unwrap();
        assert!((p0 - theta / PI).abs() < 1e-14);

        let cube = generators::hypercube(3).unwrap();
        let pc = vertex_event_probability(&cube, &cube.faces(0)[5], &AngleMethod::Exact).unwrap();
        assert!((pc - 0.25).abs() < 1e-14);

        let tet = generators::regular_simplex(3).unwrap();
        let pt = vertex_event_probability(&tet, &tet.faces(0)[0], &AngleMethod::Exact).unwrap();
        assert!((pt - regular_tet_vertex_angle() / (2.0 * PI)).abs() < 1e-14);
        assert!((pt - 0.08774).abs() < 1e-5);
    }

    #[test]
    fn exact_unsupported_in_four_dimensions() {
        let s = generators::regular_simplex(4).unwrap();
        assert!(matches!(
            solid_angle(&s, &s.faces(0)[0], &AngleMethod::Exact),
            Err(Error::Unsupported(_))
        ));
        let facet = solid_angle(&s, &s.faces(3)[0], &AngleMethod::Exact).unwrap();
        assert!((facet.raw - PI * PI).abs() < 1e-13);
        assert_eq!(AngleMethod::auto(4, McConfig::default()), AngleMethod::MonteCarlo(McConfig::default()));
        assert_eq!(AngleMethod::auto(3, McConfig::default()), AngleMethod::Exact);
    }

    #[test]
    fn antipodal_doubles_hit_fraction() {
        let tet = generators::regular_simplex(3).unwrap();
        let f = &tet.faces(0)[0];
        let cfg = McConfig::new(1_000_000, 4);
        let single = hit_fraction(&tet, f, &cfg, false).unwrap();
        let double = hit_fraction(&tet, f, &cfg.derive(1), true).unwrap();
        let tol = 4.0 * (double.stderr.powi(2) + 4.0 * single.stderr.powi(2)).sqrt();
        assert!((double.fraction - 2.0 * single.fraction).abs() <= tol);
    }
}
