//! Numerical toolkit relating trace-free commutative algebra structures on `C^3`
//! to plane quartics and their 28 bitangents.
//!
//! The pipeline: an [`algebra::Algebra`] determines a net of cubics
//! `a ↦ a² ∧ a` ([`covariants`]); its common zeros are the seven generalized
//! idempotents ([`idempotents`]); a linear solve recovers a quartic on the dual
//! plane whose bitangents are read off from the idempotents
//! ([`quartic_geometry`]); and the algebra can be rebuilt from the seven points
//! ([`reconstruct`]). [`verify`] runs the whole battery on one algebra.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod config;
pub mod covariants;
pub mod error;
pub mod forms;
pub mod idempotents;
pub mod linalg;
pub mod quartic_geometry;
pub mod reconstruct;
pub mod sampling;
pub mod verify;

pub use algebra::Algebra;
pub use config::SolverConfig;
pub use covariants::QuarticCurve;
pub use error::{Error, Result};
pub use forms::{BinaryForm, LinePoint, ProjPoint, TernaryForm};
pub use idempotents::{GenericityReport, IdempotentSet};
pub use linalg::C;
pub use quartic_geometry::{BitangencyCertificate, DualLine};
pub use reconstruct::PointConfiguration;
pub use verify::VerifyReport;
