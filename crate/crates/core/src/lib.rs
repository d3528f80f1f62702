//! Numerical verification engine for curvature, Lie-derivative, and soliton
//! identities on declared Riemannian charts, with almost-contact structure
//! support.
//!
//! Conventions fixed throughout:
//!   R(X,Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_{[X,Y]}
//!   R₄(X,Y,Z,W) = g(R(X,Y)W, Z)
//!   S(Y,Z) = Σ_a g(R(e_a,Y)Z, e_a)

pub mod contact;
pub mod error;
pub mod expr;
pub mod format;
pub mod geometry;
pub mod jet;
pub mod manifold;
pub mod report;
pub mod sample;
pub mod soliton;
pub mod tensor;
pub mod zoo;

pub use contact::{StructureAt, Suite};
pub use error::{CoreError, Result};
pub use report::{Check, Report, CONVENTION};
pub use expr::{parse_expression, Expr};
pub use format::{load_manifold, parse_manifold, save_manifold, to_toml};
pub use geometry::Geometry;
pub use jet::{Jet, EPS_DIV};
pub use manifold::{ManifoldSpec, MetricSource, StructureFields, Tolerances};
pub use sample::{Interval, Sampler, DOMAIN_MARGIN};
pub use soliton::{
    declared_potential, divergence_relations, fit_lambda, soliton_report, theorem_audit,
    AuditRecord, Classification, LambdaFit, Potential, SolitonReport,
};
pub use tensor::{kulkarni_nomizu, multi_indices, OrthoFrame, TensorJets, TensorValue};
