//! Orthogonal projection of a polytope onto a random hyperplane `u^perp`.
//!
//! Two per-direction tests live here. For simplices, each vertex's shadow is
//! written as an affine combination of the other shadows; strictly positive
//! coefficients put it in the relative interior of the shadow. For any face,
//! the shadow of its centroid is interior exactly when the line through the
//! centroid along `u` pierces the interior of the polytope.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::geometry::{dot, solve_in_place, unit_sphere_area, ConvexPolytope, Face, Vector};
use crate::solid_angle::{sum_face_angles, AngleMethod};
use crate::sphere::{fill_unit_sphere, run_workers, McConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SimplexClass {
    /// The shadow is an `(n-1)`-simplex: one vertex falls inside.
    LowerSimplex,
    /// All `n + 1` shadows are vertices of the shadow polytope.
    NotSimplex,
    /// A test fell inside the tolerance band; measure-zero direction.
    Degenerate,
}

impl SimplexClass {
    pub fn label(self) -> &'static str {
        match self {
            SimplexClass::LowerSimplex => "lower-simplex",
            SimplexClass::NotSimplex => "not-simplex",
            SimplexClass::Degenerate => "degenerate",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionOutcome {
    pub direction: Vector,
    pub simplex_class: SimplexClass,
    pub interior_vertex: Option<usize>,
    /// `surviving_faces[k][i]`: the `i`-th `k`-face projects to a proper face
    /// of the shadow.
    pub surviving_faces: Vec<Vec<bool>>,
}

/// Result of the line-piercing test for one face and direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Survival {
    Survives,
    Pierced,
    Ambiguous,
}

/// Orthonormal basis of `u^perp`, written row by row into `out`
/// (`(n - 1) * n` entries). Completion skips the axis where `|u|` is
/// largest and takes the remaining axes in order.
pub fn complement_basis(u: &[f64], out: &mut [f64]) {
    let n = u.len();
    debug_assert_eq!(out.len(), (n - 1) * n);
    let pivot = (0..n)
        .max_by(|&i, &j| u[i].abs().total_cmp(&u[j].abs()).then(j.cmp(&i)))
        .expect("nonempty direction");
    let mut row = 0;
    for axis in (0..n).filter(|&a| a != pivot) {
        let (done, rest) = out.split_at_mut(row * n);
        let w = &mut rest[..n];
        w.iter_mut().for_each(|x| *x = 0.0);
        w[axis] = 1.0;
        // two Gram-Schmidt sweeps
        for _ in 0..2 {
            let c = dot(w, u);
            w.iter_mut().zip(u).for_each(|(x, ui)| *x -= c * ui);
            for prev in done.chunks_exact(n) {
                let c = dot(w, prev);
                w.iter_mut().zip(prev).for_each(|(x, pi)| *x -= c * pi);
            }
        }
        let norm = dot(w, w).sqrt();
        w.iter_mut().for_each(|x| *x /= norm);
        row += 1;
    }
}

/// Orthonormal basis of `u^perp`.
pub fn orthonormal_complement(u: &Vector) -> Result<Vec<Vector>> {
    u.ensure_unit()?;
    let n = u.dim();
    let mut buf = vec![0.0; (n - 1) * n];
    complement_basis(u.coords(), &mut buf);
    Ok(buf.chunks_exact(n).map(|r| Vector::new(r.to_vec())).collect())
}

/// Shadows of the vertices of `p` in the basis of [`orthonormal_complement`].
pub fn project(p: &ConvexPolytope, u: &Vector) -> Result<Vec<Vector>> {
    if u.dim() != p.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: u.dim() });
    }
    let basis = orthonormal_complement(u)?;
    Ok(p.vertices()
        .iter()
        .map(|v| Vector::new(basis.iter().map(|b| b.dot(v)).collect()))
        .collect())
}

/// Reusable buffers for classifying simplex shadows.
struct SimplexClassifier {
    n: usize,
    tolerance: f64,
    vertices: Vec<f64>,
    basis: Vec<f64>,
    shadows: Vec<f64>,
    system: Vec<f64>,
    rhs: Vec<f64>,
}

enum VertexTest {
    Interior,
    Outside,
    Ambiguous,
}

impl SimplexClassifier {
    fn new(simplex: &ConvexPolytope) -> Self {
        let n = simplex.dim();
        SimplexClassifier {
            n,
            tolerance: simplex.tolerance(),
            vertices: simplex.vertices().iter().flat_map(|v| v.coords().iter().copied()).collect(),
            basis: vec![0.0; (n - 1) * n],
            shadows: vec![0.0; (n + 1) * (n - 1)],
            system: vec![0.0; n * n],
            rhs: vec![0.0; n],
        }
    }

    fn classify(&mut self, u: &[f64]) -> (SimplexClass, Option<usize>) {
        let n = self.n;
        let m = n - 1;
        complement_basis(u, &mut self.basis);
        for (v, q) in self.vertices.chunks_exact(n).zip(self.shadows.chunks_exact_mut(m)) {
            for (qi, b) in q.iter_mut().zip(self.basis.chunks_exact(n)) {
                *qi = dot(b, v);
            }
        }

        let mut interior = None;
        let mut interior_count = 0;
        let mut ambiguous = false;
        for i in 0..=n {
            match self.vertex_test(i) {
                VertexTest::Interior => {
                    interior_count += 1;
                    interior = Some(i);
                }
                VertexTest::Outside => {}
                VertexTest::Ambiguous => ambiguous = true,
            }
        }
        if ambiguous {
            return (SimplexClass::Degenerate, None);
        }
        match interior_count {
            0 => (SimplexClass::NotSimplex, None),
            1 => (SimplexClass::LowerSimplex, interior),
            _ => {
                // at most one vertex can fall inside an affinely spanning shadow
                debug_assert!(false, "{interior_count} interior vertices for direction {u:?}");
                (SimplexClass::Degenerate, None)
            }
        }
    }

    /// Affine coordinates of shadow `i` with respect to the other `n` shadows.
    fn vertex_test(&mut self, i: usize) -> VertexTest {
        let n = self.n;
        let m = n - 1;
        let others = (0..=n).filter(|&j| j != i);
        for (col, j) in others.enumerate() {
            let q = &self.shadows[j * m..(j + 1) * m];
            for (r, &x) in q.iter().enumerate() {
                self.system[r * n + col] = x;
            }
            self.system[m * n + col] = 1.0;
        }
        self.rhs[..m].copy_from_slice(&self.shadows[i * m..(i + 1) * m]);
        self.rhs[m] = 1.0;
        if !solve_in_place(&mut self.system, &mut self.rhs, n) {
            return VertexTest::Ambiguous;
        }
        let min = self.rhs.iter().copied().fold(f64::INFINITY, f64::min);
        if !min.is_finite() {
            VertexTest::Ambiguous
        } else if min > self.tolerance {
            VertexTest::Interior
        } else if min < -self.tolerance {
            VertexTest::Outside
        } else {
            VertexTest::Ambiguous
        }
    }
}

fn ensure_simplex(p: &ConvexPolytope) -> Result<()> {
    if p.is_simplex() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "expected an {}-simplex, got {} vertices",
            p.dim(),
            p.vertices().len()
        )))
    }
}

fn ensure_direction(p: &ConvexPolytope, u: &Vector) -> Result<()> {
    if u.dim() != p.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: u.dim() });
    }
    u.ensure_unit()
}

/// Classifies the shadow of a simplex along `u` and records which faces
/// survive as faces of the shadow.
pub fn classify_simplex_projection(simplex: &ConvexPolytope, u: &Vector) -> Result<ProjectionOutcome> {
    ensure_simplex(simplex)?;
    ensure_direction(simplex, u)?;
    let (simplex_class, interior_vertex) = SimplexClassifier::new(simplex).classify(u.coords());
    let surviving_faces = (0..simplex.dim())
        .map(|k| {
            simplex
                .faces(k)
                .iter()
                .map(|f| SurvivalTest::new(simplex, f).test(u.coords()) == Survival::Survives)
                .collect()
        })
        .collect();
    Ok(ProjectionOutcome {
        direction: u.clone(),
        simplex_class,
        interior_vertex,
        surviving_faces,
    })
}

/// Line-piercing test for one face, precomputed over the H-representation.
///
/// Along `c + t u` half-space `i` reads `t (a_i . u) <= s_i` with `s_i` the
/// slack at the centroid `c`. Constraints tight on the face have `s_i = 0`.
pub(crate) struct SurvivalTest {
    n: usize,
    normals: Vec<f64>,
    slacks: Vec<f64>,
    active: Vec<bool>,
    angle_tol: f64,
    width_tol: f64,
}

impl SurvivalTest {
    pub(crate) fn new(p: &ConvexPolytope, face: &Face) -> Self {
        let n = p.dim();
        let mut normals = Vec::with_capacity(p.halfspaces().len() * n);
        let mut slacks = Vec::with_capacity(p.halfspaces().len());
        let mut active = Vec::with_capacity(p.halfspaces().len());
        for (j, h) in p.halfspaces().iter().enumerate() {
            normals.extend_from_slice(h.unit_normal().coords());
            let tight = face.facets().contains(&j);
            slacks.push(if tight { 0.0 } else { -h.signed_distance(face.centroid()) });
            active.push(tight);
        }
        SurvivalTest {
            n,
            normals,
            slacks,
            active,
            angle_tol: p.tolerance(),
            width_tol: p.distance_tolerance(),
        }
    }

    pub(crate) fn test(&self, u: &[f64]) -> Survival {
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        let (mut up, mut down) = (false, false);
        for ((a, &s), &tight) in self.normals.chunks_exact(self.n).zip(&self.slacks).zip(&self.active) {
            let d = dot(a, u);
            if tight {
                if d.abs() <= self.angle_tol {
                    return Survival::Ambiguous;
                }
                // t d <= 0
                if d > 0.0 {
                    down = true;
                    hi = hi.min(0.0);
                } else {
                    up = true;
                    lo = lo.max(0.0);
                }
            } else if d.abs() > self.angle_tol {
                if d > 0.0 {
                    hi = hi.min(s / d);
                } else {
                    lo = lo.max(s / d);
                }
            } else if s <= self.width_tol {
                return Survival::Ambiguous;
            }
        }
        if up && down {
            return Survival::Survives;
        }
        let width = hi - lo;
        if width > self.width_tol {
            Survival::Pierced
        } else if width < -self.width_tol {
            Survival::Survives
        } else {
            Survival::Ambiguous
        }
    }
}

/// Three-way survival test; see [`face_survives`].
pub fn face_survival(p: &ConvexPolytope, face: &Face, u: &Vector) -> Result<Survival> {
    p.ensure_face(face)?;
    ensure_direction(p, u)?;
    Ok(SurvivalTest::new(p, face).test(u.coords()))
}

/// False iff the line through the face centroid along `u` meets the interior
/// of `p`, in which case the face's shadow is not a face of the shadow.
/// Directions inside the tolerance band count as surviving.
pub fn face_survives(p: &ConvexPolytope, face: &Face, u: &Vector) -> Result<bool> {
    Ok(face_survival(p, face, u)? != Survival::Pierced)
}

/// A Monte Carlo estimate with its optional closed-form prediction.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub experiment: String,
    pub seed: u64,
    pub samples: u64,
    pub workers: usize,
    /// Samples that entered the estimate.
    pub accepted: u64,
    /// Samples excluded as measure-zero directions.
    pub degenerate: u64,
    pub estimate: f64,
    pub stderr: f64,
    pub prediction: Option<f64>,
    pub prediction_stderr: f64,
    pub residual: Option<f64>,
    /// Wall time; not part of any serialized report.
    pub runtime: Duration,
}

impl ExperimentReport {
    fn new(experiment: impl Into<String>, cfg: &McConfig) -> Self {
        ExperimentReport {
            experiment: experiment.into(),
            seed: cfg.seed,
            samples: cfg.samples,
            workers: cfg.workers,
            accepted: 0,
            degenerate: 0,
            estimate: f64::NAN,
            stderr: f64::NAN,
            prediction: None,
            prediction_stderr: 0.0,
            residual: None,
            runtime: Duration::ZERO,
        }
    }

    pub fn with_prediction(mut self, prediction: f64, stderr: f64) -> Self {
        self.prediction = Some(prediction);
        self.prediction_stderr = stderr;
        self.residual = Some((self.estimate - prediction).abs());
        self
    }

    pub fn combined_stderr(&self) -> f64 {
        self.stderr.hypot(self.prediction_stderr)
    }

    pub fn degenerate_fraction(&self) -> f64 {
        self.degenerate as f64 / self.samples as f64
    }

    /// Whether the residual is within `sigmas` combined standard errors.
    pub fn within(&self, sigmas: f64) -> Option<bool> {
        self.residual.map(|r| r <= sigmas * self.combined_stderr())
    }
}

#[derive(Default)]
struct ClassTally {
    lower: u64,
    not: u64,
    degenerate: u64,
}

/// Fraction of random directions whose shadow is an `(n-1)`-simplex.
/// Degenerate directions are dropped from both counts.
pub fn estimate_simplex_probability(simplex: &ConvexPolytope, cfg: &McConfig) -> Result<ExperimentReport> {
    ensure_simplex(simplex)?;
    cfg.validate()?;
    let start = Instant::now();
    let n = simplex.dim();
    let tallies = run_workers(cfg, |rng, count| {
        let mut classifier = SimplexClassifier::new(simplex);
        let mut u = vec![0.0; n];
        let mut tally = ClassTally::default();
        for _ in 0..count {
            fill_unit_sphere(rng, &mut u);
            match classifier.classify(&u).0 {
                SimplexClass::LowerSimplex => tally.lower += 1,
                SimplexClass::NotSimplex => tally.not += 1,
                SimplexClass::Degenerate => tally.degenerate += 1,
            }
        }
        tally
    });
    let total = tallies.into_iter().fold(ClassTally::default(), |acc, t| ClassTally {
        lower: acc.lower + t.lower,
        not: acc.not + t.not,
        degenerate: acc.degenerate + t.degenerate,
    });

    let mut report = ExperimentReport::new("simplex-probability", cfg);
    report.accepted = total.lower + total.not;
    report.degenerate = total.degenerate;
    if report.accepted == 0 {
        return Err(Error::InvalidArgument("every sampled direction was degenerate".into()));
    }
    let p = total.lower as f64 / report.accepted as f64;
    report.estimate = p;
    report.stderr = (p * (1.0 - p) / report.accepted as f64).sqrt();
    report.runtime = start.elapsed();
    Ok(report)
}

#[derive(Default)]
struct CountTally {
    sum: u64,
    sum_sq: u64,
    accepted: u64,
    degenerate: u64,
}

/// Mean number of `k`-faces of `p` whose shadows are faces of the shadow,
/// with the angle-sum prediction `f_k - 2/(n w_n) * sum alpha(F)`.
pub fn estimate_expected_face_count(
    p: &ConvexPolytope,
    k: usize,
    cfg: &McConfig,
    method: &AngleMethod,
) -> Result<ExperimentReport> {
    let n = p.dim();
    if k + 2 > n {
        return Err(Error::InvalidArgument(format!(
            "face dimension {k} out of range 0..={} (facets project onto full-dimensional sets)",
            n - 2
        )));
    }
    cfg.validate()?;
    let start = Instant::now();
    let tests: Vec<SurvivalTest> = p.faces(k).iter().map(|f| SurvivalTest::new(p, f)).collect();
    let tallies = run_workers(cfg, |rng, count| {
        let mut u = vec![0.0; n];
        let mut tally = CountTally::default();
        'sample: for _ in 0..count {
            fill_unit_sphere(rng, &mut u);
            let mut survivors = 0_u64;
            for t in &tests {
                match t.test(&u) {
                    Survival::Survives => survivors += 1,
                    Survival::Pierced => {}
                    Survival::Ambiguous => {
                        tally.degenerate += 1;
                        continue 'sample;
                    }
                }
            }
            tally.sum += survivors;
            tally.sum_sq += survivors * survivors;
            tally.accepted += 1;
        }
        tally
    });
    let total = tallies.into_iter().fold(CountTally::default(), |acc, t| CountTally {
        sum: acc.sum + t.sum,
        sum_sq: acc.sum_sq + t.sum_sq,
        accepted: acc.accepted + t.accepted,
        degenerate: acc.degenerate + t.degenerate,
    });

    let mut report = ExperimentReport::new(format!("expected-face-count-k{k}"), cfg);
    report.accepted = total.accepted;
    report.degenerate = total.degenerate;
    if total.accepted == 0 {
        return Err(Error::InvalidArgument("every sampled direction was degenerate".into()));
    }
    let m = total.accepted as f64;
    let mean = total.sum as f64 / m;
    let var = if total.accepted > 1 {
        ((total.sum_sq as f64 - m * mean * mean) / (m - 1.0)).max(0.0)
    } else {
        0.0
    };
    report.estimate = mean;
    report.stderr = (var / m).sqrt();

    let angles = sum_face_angles(p, k, method)?;
    let scale = 2.0 / unit_sphere_area(n)?;
    let prediction = p.faces(k).len() as f64 - scale * angles.total;
    let mut report = report.with_prediction(prediction, scale * angles.stderr);
    report.runtime = start.elapsed();
    Ok(report)
}
