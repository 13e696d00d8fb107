//! Angle-sum predictions and numerical checks of the angle-sum identities.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::generators;
use crate::geometry::{unit_sphere_area, ConvexPolytope};
use crate::projection::estimate_simplex_probability;
use crate::solid_angle::{sum_face_angles, AngleMethod};
use crate::sphere::McConfig;

pub use crate::solid_angle::AngleSum;

/// Width of the acceptance band for sampled quantities, in standard errors.
pub const SIGMAS: f64 = 4.0;

/// Sum of `alpha(F)` over the `k`-faces.
pub fn angle_sum(p: &ConvexPolytope, k: usize, method: &AngleMethod) -> Result<AngleSum> {
    sum_face_angles(p, k, method)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Prediction {
    pub value: f64,
    pub stderr: f64,
}

/// Probability that a simplex's shadow on a random hyperplane is again a
/// simplex: `2/(n w_n)` times its vertex angle sum.
pub fn predict_simplex_probability(simplex: &ConvexPolytope, method: &AngleMethod) -> Result<Prediction> {
    if !simplex.is_simplex() {
        return Err(Error::InvalidArgument("simplex probability needs a simplex".into()));
    }
    let sum = angle_sum(simplex, 0, method)?;
    let scale = 2.0 / unit_sphere_area(simplex.dim())?;
    Ok(Prediction { value: scale * sum.total, stderr: scale * sum.stderr })
}

/// How the two sides of a check were obtained.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Trail {
    Exact,
    MonteCarlo { combined_stderr: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    /// Equality checks pass when `residual <= tolerance`; interval checks
    /// pass when `residual < tolerance` (the half-width of an open interval
    /// centred on `rhs`).
    pub tolerance: f64,
    pub passed: bool,
    pub trail: Trail,
}

impl IdentityCheck {
    /// `base` covers floating-point slack; sampled checks widen it by
    /// [`SIGMAS`] combined standard errors.
    fn equality(name: &str, lhs: f64, rhs: f64, base: f64, trail: Trail) -> Self {
        let residual = (lhs - rhs).abs();
        let tolerance = match trail {
            Trail::Exact => base,
            Trail::MonteCarlo { combined_stderr } => base + SIGMAS * combined_stderr,
        };
        IdentityCheck {
            name: name.to_string(),
            lhs,
            rhs,
            residual,
            tolerance,
            passed: residual <= tolerance,
            trail,
        }
    }

    fn open_interval(name: &str, value: f64, lo: f64, hi: f64, trail: Trail) -> Self {
        let centre = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let residual = (value - centre).abs();
        IdentityCheck {
            name: name.to_string(),
            lhs: value,
            rhs: centre,
            residual,
            tolerance: half,
            passed: residual < half,
            trail,
        }
    }
}

fn trail(method: &AngleMethod, stderr: f64) -> Trail {
    match method {
        AngleMethod::Exact => Trail::Exact,
        AngleMethod::MonteCarlo(_) => Trail::MonteCarlo { combined_stderr: stderr },
    }
}

/// Simulated simplex probability against the angle-sum prediction.
pub fn check_simplex_probability(simplex: &ConvexPolytope, cfg: &McConfig, method: &AngleMethod) -> Result<IdentityCheck> {
    let estimate = estimate_simplex_probability(simplex, cfg)?;
    let prediction = predict_simplex_probability(simplex, method)?;
    let combined = estimate.stderr.hypot(prediction.stderr);
    Ok(IdentityCheck::equality(
        "simplex-angle-sum",
        estimate.estimate,
        prediction.value,
        simplex.tolerance(),
        Trail::MonteCarlo { combined_stderr: combined },
    ))
}

/// `sum_v alpha(v) = pi (f_0 - 2)` for a convex polygon, exact angles.
pub fn check_polygon_identity(p: &ConvexPolytope) -> Result<IdentityCheck> {
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: p.dim() });
    }
    let sum = angle_sum(p, 0, &AngleMethod::Exact)?;
    let rhs = PI * (p.faces(0).len() as f64 - 2.0);
    Ok(IdentityCheck::equality("polygon-angle-sum", sum.total, rhs, p.tolerance(), Trail::Exact))
}

/// `(sum_v alpha(v) - sum_e alpha(e)) / 2 pi = 2 - f_2` for a 3-polytope,
/// exact angles.
pub fn check_polyhedron_identity(p: &ConvexPolytope) -> Result<IdentityCheck> {
    if p.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: p.dim() });
    }
    let vertices = angle_sum(p, 0, &AngleMethod::Exact)?;
    let edges = angle_sum(p, 1, &AngleMethod::Exact)?;
    let lhs = (vertices.total - edges.total) / (2.0 * PI);
    let rhs = 2.0 - p.faces(2).len() as f64;
    Ok(IdentityCheck::equality("polyhedron-angle-sum", lhs, rhs, p.tolerance(), Trail::Exact))
}

/// Alternating angle sum over all proper faces against `(-1)^(n-1) n w_n`.
pub fn check_gram_euler(p: &ConvexPolytope, method: &AngleMethod) -> Result<IdentityCheck> {
    let n = p.dim();
    let mut lhs = 0.0;
    let mut var = 0.0;
    for k in 0..n {
        let sum = angle_sum(p, k, method)?;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        lhs += sign * sum.total;
        var += sum.stderr * sum.stderr;
    }
    let area = unit_sphere_area(n)?;
    let rhs = if n % 2 == 1 { area } else { -area };
    Ok(IdentityCheck::equality("gram-euler", lhs, rhs, p.tolerance(), trail(method, var.sqrt())))
}

/// Vertex angle sum of an `n`-simplex (`n >= 3`) strictly inside `(0, n w_n / 2)`.
pub fn check_gaddum(simplex: &ConvexPolytope, method: &AngleMethod) -> Result<IdentityCheck> {
    if !simplex.is_simplex() || simplex.dim() < 3 {
        return Err(Error::InvalidArgument("the vertex angle bounds apply to n-simplices with n >= 3".into()));
    }
    let sum = angle_sum(simplex, 0, method)?;
    let hi = unit_sphere_area(simplex.dim())? / 2.0;
    Ok(IdentityCheck::open_interval("gaddum-bounds", sum.total, 0.0, hi, trail(method, sum.stderr)))
}

/// Every check that applies to `p`'s dimension and shape.
pub fn run_suite(p: &ConvexPolytope, cfg: &McConfig, method: &AngleMethod) -> Result<Vec<IdentityCheck>> {
    let mut checks = Vec::new();
    match p.dim() {
        2 => checks.push(check_polygon_identity(p)?),
        3 => checks.push(check_polyhedron_identity(p)?),
        _ => {}
    }
    checks.push(check_gram_euler(p, method)?);
    if p.is_simplex() {
        checks.push(check_simplex_probability(p, cfg, method)?);
        if p.dim() >= 3 {
            checks.push(check_gaddum(p, method)?);
        }
    }
    Ok(checks)
}

/// Degenerating tetrahedron families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// [`generators::flat_apex`]; probability tends to 1 as the height shrinks.
    FlatApex,
    /// [`generators::skew_segments`]; probability tends to 0 as the gap shrinks.
    SkewSegments,
}

impl Family {
    pub fn build(self, parameter: f64) -> Result<ConvexPolytope> {
        match self {
            Family::FlatApex => generators::flat_apex(parameter),
            Family::SkewSegments => generators::skew_segments(parameter),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Family::FlatApex => "flat-apex",
            Family::SkewSegments => "skew-segments",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "flat-apex" => Ok(Family::FlatApex),
            "skew-segments" | "skew" => Ok(Family::SkewSegments),
            other => Err(Error::InvalidArgument(format!("unknown family {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanPoint {
    pub parameter: f64,
    pub angle_sum: f64,
    /// `angle_sum / (n w_n)`.
    pub normalized: f64,
    pub probability: f64,
    pub stderr: f64,
}

pub fn gaddum_scan(family: Family, parameters: &[f64], method: &AngleMethod) -> Result<Vec<ScanPoint>> {
    parameters
        .iter()
        .map(|&t| {
            let simplex = family.build(t)?;
            let sum = angle_sum(&simplex, 0, method)?;
            let area = unit_sphere_area(simplex.dim())?;
            Ok(ScanPoint {
                parameter: t,
                angle_sum: sum.total,
                normalized: sum.total / area,
                probability: 2.0 * sum.total / area,
                stderr: 2.0 * sum.stderr / area,
            })
        })
        .collect()
}

/// `steps` log-spaced values from `from` to `to` inclusive.
pub fn log_grid(from: f64, to: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 {
        return Err(Error::InvalidArgument("grid needs at least one step".into()));
    }
    if !(from > 0.0 && to > 0.0 && from.is_finite() && to.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "log grid bounds must be positive, got {from}..{to}"
        )));
    }
    if steps == 1 {
        return Ok(vec![from]);
    }
    let (a, b) = (from.ln(), to.ln());
    Ok((0..steps)
        .map(|i| {
            if i == 0 {
                from
            } else if i == steps - 1 {
                to
            } else {
                (a + (b - a) * i as f64 / (steps - 1) as f64).exp()
            }
        })
        .collect())
}
