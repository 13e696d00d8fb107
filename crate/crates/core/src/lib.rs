//! Solid inner angles of convex polytopes and their reading as probabilities
//! of events under a random orthogonal projection.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: vectors, half-spaces, polytopes with their face lattice,
//!   and the JSON polytope file format.
//! * [`sphere`]: uniform directions on the unit sphere and the deterministic
//!   parallel Monte Carlo driver shared by every estimator.
//! * [`solid_angle`]: the measure of the tangent cone at the centroid of a
//!   face, exactly in the plane and in space, by sampling in any dimension.
//! * [`projection`]: shadows of a polytope on a random hyperplane, simplex
//!   classification and face survival.
//! * [`identities`]: closed-form angle-sum predictions and numerical checks
//!   of the angle-sum relations.
//! * [`generators`]: built-in test polytopes and seeded random families.
//! * [`report`]: deterministic line-delimited report records.

pub mod error;
pub mod generators;
pub mod geometry;
pub mod identities;
pub mod projection;
pub mod report;
pub mod solid_angle;
pub mod sphere;

pub use error::{Error, Result};
pub use geometry::{
    unit_ball_volume, unit_sphere_area, ConvexPolytope, Face, FaceId, HalfSpace, Vector,
    DEFAULT_TOLERANCE,
};
pub use identities::{IdentityCheck, Trail};
pub use projection::{ExperimentReport, ProjectionOutcome, SimplexClass};
pub use solid_angle::{AngleMethod, MeasureMethod, SolidAngleMeasure};
pub use sphere::McConfig;
