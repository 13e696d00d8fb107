use std::collections::{HashMap, HashSet};

use nalgebra::DMatrix;

use super::linalg::{affine_rank, matrix_rank};
use super::{check_dim, HalfSpace, Vector, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};

/// Position of a face in its polytope's lattice: `index` counts faces of
/// dimension `dim` in lexicographic order of their vertex sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceId {
    pub dim: usize,
    pub index: usize,
}

/// A proper face, stored as the set of polytope vertices it contains.
#[derive(Clone, Debug, PartialEq)]
pub struct Face {
    id: FaceId,
    vertex_ids: Vec<usize>,
    centroid: Vector,
    facets: Vec<usize>,
}

impl Face {
    pub fn id(&self) -> FaceId {
        self.id
    }

    pub fn dim(&self) -> usize {
        self.id.dim
    }

    /// Sorted vertex indices.
    pub fn vertex_ids(&self) -> &[usize] {
        &self.vertex_ids
    }

    pub fn centroid(&self) -> &Vector {
        &self.centroid
    }

    /// Indices of the half-spaces tight on the whole face, which are exactly
    /// the constraints active at its centroid.
    pub fn facets(&self) -> &[usize] {
        &self.facets
    }
}

/// A bounded, full-dimensional convex polytope in `R^n` carrying both
/// representations and the face lattice derived from their incidences.
///
/// Values are immutable once built.
#[derive(Clone, Debug)]
pub struct ConvexPolytope {
    dim: usize,
    vertices: Vec<Vector>,
    halfspaces: Vec<HalfSpace>,
    faces: Vec<Vec<Face>>,
    tolerance: f64,
    scale: f64,
    lookup: HashMap<Vec<usize>, FaceId>,
}

impl ConvexPolytope {
    /// Builds an `n`-simplex from `n + 1` affinely independent points.
    pub fn simplex(vertices: Vec<Vector>) -> Result<Self> {
        Self::simplex_with_tolerance(vertices, DEFAULT_TOLERANCE)
    }

    pub fn simplex_with_tolerance(vertices: Vec<Vector>, tolerance: f64) -> Result<Self> {
        let n = vertices.first().map(Vector::dim).unwrap_or(0);
        check_dim(n)?;
        if vertices.len() != n + 1 {
            return Err(Error::InvalidArgument(format!(
                "an {n}-simplex needs {} vertices, got {}",
                n + 1,
                vertices.len()
            )));
        }
        for v in &vertices {
            ensure_dim(v, n)?;
        }

        let origin = &vertices[0];
        let edges: Vec<Vector> = vertices[1..].iter().map(|v| v - origin).collect();
        // columns are edge vectors, so M^-1 (x - v0) gives barycentric coordinates 1..n
        let m = DMatrix::from_fn(n, n, |i, j| edges[j][i]);
        let lengths: f64 = edges.iter().map(Vector::norm).product();
        let ratio = if lengths > 0.0 { m.determinant().abs() / lengths } else { 0.0 };
        if !(ratio > tolerance) {
            return Err(Error::DegenerateSimplex { ratio });
        }
        let inv = m
            .try_inverse()
            .ok_or(Error::DegenerateSimplex { ratio })?;

        let rows: Vec<Vector> = (0..n)
            .map(|k| Vector::new(inv.row(k).iter().copied().collect()))
            .collect();
        let mut halfspaces = Vec::with_capacity(n + 1);
        // facet opposite v0: sum of coordinates 1..n at most 1
        let sum = rows.iter().skip(1).fold(rows[0].clone(), |acc, r| &acc + r);
        halfspaces.push(unit_halfspace(&sum, 1.0 + sum.dot(origin))?);
        // facet opposite vk: coordinate k nonnegative
        for r in &rows {
            let normal = r.scale(-1.0);
            let offset = normal.dot(origin);
            halfspaces.push(unit_halfspace(&normal, offset)?);
        }
        Self::with_tolerance(vertices, halfspaces, tolerance)
    }

    /// Builds a polytope from matching V- and H-representations.
    pub fn new(vertices: Vec<Vector>, halfspaces: Vec<HalfSpace>) -> Result<Self> {
        Self::with_tolerance(vertices, halfspaces, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(
        vertices: Vec<Vector>,
        halfspaces: Vec<HalfSpace>,
        tolerance: f64,
    ) -> Result<Self> {
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(Error::InvalidArgument(format!("tolerance {tolerance} must be positive")));
        }
        let n = vertices.first().map(Vector::dim).unwrap_or(0);
        check_dim(n)?;
        for v in &vertices {
            ensure_dim(v, n)?;
            if v.coords().iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidArgument("vertex coordinates must be finite".into()));
            }
        }
        for h in &halfspaces {
            ensure_dim(h.normal(), n)?;
        }

        let refs: Vec<&Vector> = vertices.iter().collect();
        let affine_dim = affine_rank(&refs, tolerance);
        if affine_dim < n {
            return Err(Error::Hollow { affine_dim, dim: n });
        }

        let scale = vertices
            .iter()
            .flat_map(|v| v.coords().iter().map(|x| x.abs()))
            .fold(1.0_f64, f64::max);
        let act_tol = tolerance * scale;

        for i in 0..vertices.len() {
            for j in i + 1..vertices.len() {
                if (&vertices[i] - &vertices[j]).norm() <= act_tol {
                    return Err(Error::Inconsistent(format!("vertices {i} and {j} coincide")));
                }
            }
        }

        // incidence[h][v]: vertex v lies on the hyperplane of half-space h
        let mut incidence = vec![vec![false; vertices.len()]; halfspaces.len()];
        for (j, h) in halfspaces.iter().enumerate() {
            for (i, v) in vertices.iter().enumerate() {
                let d = h.signed_distance(v);
                if d > act_tol {
                    return Err(Error::Inconsistent(format!(
                        "vertex {i} violates half-space {j} by {d:e}"
                    )));
                }
                incidence[j][i] = d >= -act_tol;
            }
        }

        let facet_sets: Vec<Vec<usize>> = incidence
            .iter()
            .map(|row| (0..row.len()).filter(|&i| row[i]).collect())
            .collect();
        for (j, set) in facet_sets.iter().enumerate() {
            let pts: Vec<&Vector> = set.iter().map(|&i| &vertices[i]).collect();
            if pts.is_empty() || affine_rank(&pts, tolerance) != n - 1 {
                return Err(Error::Inconsistent(format!(
                    "half-space {j} does not support a facet ({} incident vertices)",
                    set.len()
                )));
            }
        }
        for i in 0..vertices.len() {
            let active = incidence.iter().filter(|row| row[i]).count();
            if active < n {
                return Err(Error::Inconsistent(format!(
                    "vertex {i} is tight on only {active} half-spaces, expected at least {n}"
                )));
            }
        }

        let unit_normals: Vec<Vector> = halfspaces.iter().map(HalfSpace::unit_normal).collect();
        let sets = close_under_intersection(&facet_sets);

        let mut faces: Vec<Vec<Face>> = vec![Vec::new(); n];
        for vertex_ids in sets {
            let pts: Vec<&Vector> = vertex_ids.iter().map(|&i| &vertices[i]).collect();
            let dim = affine_rank(&pts, tolerance);
            let facets: Vec<usize> = (0..halfspaces.len())
                .filter(|&j| vertex_ids.iter().all(|&i| incidence[j][i]))
                .collect();
            let normals: Vec<&[f64]> = facets.iter().map(|&j| unit_normals[j].coords()).collect();
            let codim = matrix_rank(&normals, tolerance);
            if dim >= n || dim + codim != n {
                return Err(Error::Inconsistent(format!(
                    "vertex set {vertex_ids:?} spans dimension {dim} but its {} tight \
                     half-spaces cut out dimension {}",
                    facets.len(),
                    n.saturating_sub(codim)
                )));
            }
            let centroid = Vector::mean(pts.iter().copied());
            faces[dim].push(Face {
                id: FaceId { dim, index: 0 },
                vertex_ids,
                centroid,
                facets,
            });
        }

        let mut lookup = HashMap::new();
        for (dim, group) in faces.iter_mut().enumerate() {
            group.sort_by(|a, b| a.vertex_ids.cmp(&b.vertex_ids));
            for (index, face) in group.iter_mut().enumerate() {
                face.id = FaceId { dim, index };
                lookup.insert(face.vertex_ids.clone(), face.id);
            }
        }

        let singletons = faces[0].len() == vertices.len()
            && faces[0].iter().enumerate().all(|(i, f)| f.vertex_ids == [i]);
        if !singletons {
            return Err(Error::Inconsistent(
                "some listed points are not vertices of the half-space intersection".into(),
            ));
        }

        let polytope = ConvexPolytope {
            dim: n,
            vertices,
            halfspaces,
            faces,
            tolerance,
            scale,
            lookup,
        };
        let euler = polytope.euler_characteristic();
        let expected = 1 - (-1_i64).pow(n as u32);
        if euler != expected {
            return Err(Error::Inconsistent(format!(
                "boundary Euler characteristic {euler}, expected {expected} (f = {:?})",
                polytope.f_vector()
            )));
        }
        Ok(polytope)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Absolute distance tolerance: the relative tolerance times the
    /// coordinate scale of the vertex set.
    pub fn distance_tolerance(&self) -> f64 {
        self.tolerance * self.scale
    }

    pub fn is_simplex(&self) -> bool {
        self.vertices.len() == self.dim + 1
    }

    /// Faces of dimension `k`, or an empty slice when `k >= dim`.
    pub fn faces(&self, k: usize) -> &[Face] {
        self.faces.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    /// All proper faces by increasing dimension.
    pub fn all_faces(&self) -> impl Iterator<Item = &Face> {
        self.faces.iter().flatten()
    }

    pub fn face(&self, id: FaceId) -> Option<&Face> {
        self.faces.get(id.dim)?.get(id.index)
    }

    /// The face whose vertex set is exactly `vertex_ids` (any order).
    pub fn find_face(&self, vertex_ids: &[usize]) -> Option<&Face> {
        let mut key = vertex_ids.to_vec();
        key.sort_unstable();
        self.lookup.get(&key).and_then(|&id| self.face(id))
    }

    pub fn contains_face(&self, face: &Face) -> bool {
        self.lookup.get(&face.vertex_ids) == Some(&face.id)
    }

    pub(crate) fn ensure_face(&self, face: &Face) -> Result<()> {
        if self.contains_face(face) {
            Ok(())
        } else {
            Err(Error::NotAFace)
        }
    }

    pub fn vertex_face(&self, vertex: usize) -> Option<&Face> {
        self.faces[0].get(vertex)
    }

    /// Position of a face in [`all_faces`](Self::all_faces) order.
    pub fn global_index(&self, id: FaceId) -> usize {
        self.faces[..id.dim].iter().map(Vec::len).sum::<usize>() + id.index
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.faces
            .iter()
            .enumerate()
            .map(|(k, g)| if k % 2 == 0 { g.len() as i64 } else { -(g.len() as i64) })
            .sum()
    }

    /// Edges (1-faces) through a vertex.
    pub fn edges_at(&self, vertex: usize) -> impl Iterator<Item = &Face> {
        self.faces(1).iter().filter(move |e| e.vertex_ids.contains(&vertex))
    }

    /// The image under `y = R x + t`; `rotation` must be orthogonal.
    pub fn transformed(&self, rotation: &DMatrix<f64>, translation: &Vector) -> Result<Self> {
        let n = self.dim;
        if rotation.shape() != (n, n) {
            return Err(Error::DimensionMismatch { expected: n, found: rotation.nrows() });
        }
        ensure_dim(translation, n)?;
        let apply = |x: &Vector| {
            Vector::new((0..n).map(|i| (0..n).map(|j| rotation[(i, j)] * x[j]).sum()).collect())
        };
        let vertices = self.vertices.iter().map(|v| &apply(v) + translation).collect();
        let halfspaces = self
            .halfspaces
            .iter()
            .map(|h| {
                let normal = apply(h.normal());
                let offset = h.offset() + normal.dot(translation);
                HalfSpace::new(normal, offset)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::with_tolerance(vertices, halfspaces, self.tolerance)
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidArgument(format!("scale factor {factor} must be positive")));
        }
        let vertices = self.vertices.iter().map(|v| v.scale(factor)).collect();
        let halfspaces = self
            .halfspaces
            .iter()
            .map(|h| HalfSpace::new(h.normal().clone(), h.offset() * factor))
            .collect::<Result<Vec<_>>>()?;
        Self::with_tolerance(vertices, halfspaces, self.tolerance)
    }
}

fn ensure_dim(v: &Vector, n: usize) -> Result<()> {
    if v.dim() == n {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: n, found: v.dim() })
    }
}

fn unit_halfspace(normal: &Vector, offset: f64) -> Result<HalfSpace> {
    let norm = normal.norm();
    HalfSpace::new(normal.scale(1.0 / norm), offset / norm)
}

/// Every nonempty intersection of one or more facet vertex sets.
fn close_under_intersection(facet_sets: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut distinct: Vec<Vec<usize>> = facet_sets.to_vec();
    distinct.sort();
    distinct.dedup();

    let mut seen: HashSet<Vec<usize>> = distinct.iter().cloned().collect();
    let mut queue = distinct.clone();
    while let Some(face) = queue.pop() {
        for facet in &distinct {
            let meet = intersect_sorted(&face, facet);
            if !meet.is_empty() && !seen.contains(&meet) {
                seen.insert(meet.clone());
                queue.push(meet);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = seen.into_iter().collect();
    out.sort();
    out
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}
