//! Exact numerical invariants of Frobenius pushforward and pullback of
//! vector bundles on curves in characteristic `p`, Harder-Narasimhan
//! polygons under the dominance order, and brute-force checks of the
//! maximal Frobenius stratum.
//!
//! Everything is exact: slopes are [`Rational`]s and all integer arithmetic
//! is checked.

pub mod cli;
pub mod divisor;
pub mod enumerate;
pub mod error;
pub mod invariants;
pub mod polygon;
pub mod poset;
pub mod rational;
pub mod verify;

pub use divisor::{pushforward_determinant, FormalDivisorExpr};
pub use enumerate::{admissible_polygons, enumerate_polygons, AdmissibilityConstraints};
pub use error::{Error, Result};
pub use invariants::{
    canonical_filtration_profile, make_context, pullback_invariants, pushforward_invariants, pushforward_slope, slope,
    BundleInvariants, CurveContext,
};
pub use polygon::{
    dominates, is_oper_shape, mu_extremes, oper_polygon, polygon_from_filtration, polygon_from_vertices, HNPolygon,
};
pub use poset::{build_poset, StratumPoset};
pub use rational::Rational;
pub use verify::{
    maximal_stratum_report, verify_gap_equivalence, verify_oper_dominance, verify_pushforward_oper, VerificationReport,
};
