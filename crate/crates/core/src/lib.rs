//! Torsional rigidity, principal frequencies `λ_{2,q}` of convex and related planar
//! domains, and numerical checks of the inequalities linking them to inradius,
//! measure and perimeter.

pub mod error;
pub mod geometry;
pub mod shape;
pub(crate) mod rayleigh;
pub mod onedim;
pub mod solver;
pub mod bounds;
pub mod family;
pub mod properties;

pub use bounds::{BoundReport, InequalityId, Relation, Verdict};
pub use error::{Error, Result};
pub use geometry::{BallShape, ConvexPolygon, Point};
pub use onedim::{pi_2q, PoincareConstant};
pub use shape::{GeometrySummary, NamedShape, Shape, ShapeSpec};
pub use solver::{lambda_2q, torsion, FrequencyResult, SolverConfig, TorsionResult};
