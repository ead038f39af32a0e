//! Boundary parameters and the restricted operators `A_{B1B2}`: direct and
//! Krein-formula resolvents, the Birman–Schwinger principle, adjoint duality,
//! eigenvalue search and the verification suites.

mod duality;
mod krein;
mod param;
mod report;
mod robin;
mod search;

pub use duality::{adjoint_duality_check, DualityDefect, PAIRING_TOL};
pub use krein::{
    birman_schwinger_matrix, bs_determinant, bs_test, krein_boundary_residual, krein_hypotheses, krein_resolvent,
    krein_resolvent_matrix, BsResult, HypothesisItem, KreinHypotheses,
};
pub use param::{BoundaryParameter, ParameterSummary};
pub use report::{
    default_probes, default_thetas, symmetric_suite, verify_model, Certificates, ModelDescriptor, ReportEntry,
    Tolerances, VerificationReport, VerifyOptions, REPORT_VERSION,
};
pub use robin::{
    ab_resolvent_direct, boundary_residual, resolvent_identity_check, restricted_resolvent_matrix, restricted_rows,
    restricted_solve, restricted_stack, robin_pencil, RobinSolution,
};
pub use search::{eigenvalue_search, Region, Root, SearchOptions, SearchResult};
