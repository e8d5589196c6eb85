pub mod area;
pub mod checks;
pub mod duality;
pub mod error;
pub mod geometry;
mod hull;
pub mod inbetween;
pub mod quadrature;
pub mod scalar;
pub mod solver;
pub mod uniqueness;
pub mod variation;

pub use area::{
    area_from_axes, area_from_eigenvalues, area_gradient, area_hessian, area_normalized,
    elliptic_KE, modulus_f, AreaValue, EllipticPair, DEFAULT_QUAD_TOL,
};
pub use checks::{
    run_inequality_suite, CheckReport, Counterexample, DEFAULT_SUITE_SAMPLES, DEFAULT_SUITE_SEED,
};
pub use duality::{
    contains_line, dual_conic, measure_of_conic, polar_of_line, polar_of_point, solve_line_set,
    GreatLine, LineSetMode, DUAL_AXES_CONVENTION,
};
pub use error::{Error, Result};
pub use inbetween::{blend, example1_fixture, sweep, BlendSweep};
pub use geometry::conic::{
    center_and_axes, classify_point, normalize_conic, Conic, PointClass, SemiAxes,
};
pub use geometry::eigen::{eigen_sym3, EigenDecomposition};
pub use geometry::mat3::Mat3;
pub use geometry::point::SpherePoint;
pub use geometry::quat::{quaternion_rotation, Quaternion};
pub use geometry::symmat::SymMat3;
pub use geometry::vec3::Vec3;
pub use scalar::Real;
pub use solver::{
    active_points, min_enclosing_circle, solve_fixed_axes, solve_fixed_axes_from,
    solve_fixed_center, solve_fixed_center_from, solve_general, PointSet, SolveMode, SolveResult,
    SolverConfig, DEFAULT_ACTIVE_TOL,
};
pub use uniqueness::{
    certify, certify_with_source, find_v0, inscribed_circle_radius, radius_R, J_of_v, RhoSource,
    UniquenessCertificate, Verdict, BOUND_CONVENTION,
};
pub use variation::{
    abc_coefficients, bernstein_coefficients, eigenvalue_rates, rate_chain_rule, rate_coaxial,
    rate_elliptic, rate_halfturn, rate_integral, variation_report, variation_report_halfturn,
    ABCCoefficients, BernsteinCoefficients, VariationReport,
};

/// Shorthand aliases for the common double-precision instantiation.
pub type ConicF64 = Conic<f64>;
pub type SpherePointF64 = SpherePoint<f64>;
pub type SymMat3F64 = SymMat3<f64>;
pub type QuaternionF64 = Quaternion<f64>;

/// Single-precision aliases; useful for storage-constrained callers, though
/// the stated tolerances of most routines assume `f64`.
pub type ConicF32 = Conic<f32>;
pub type SpherePointF32 = SpherePoint<f32>;
pub type SymMat3F32 = SymMat3<f32>;
pub type QuaternionF32 = Quaternion<f32>;
