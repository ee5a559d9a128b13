//! The full battery for one algebra: idempotents and general position, the
//! covariant cubic checks, the quartic identity, the bitangent and double cover
//! report, and the reconstruction round trip.

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::config::SolverConfig;
use crate::covariants::{qi_checks, qij_checks, recover_quartic, CubicQiCheck, CubicQijCheck, QuarticCurve};
use crate::error::Result;
use crate::idempotents::{genericity_report, solve_idempotents, GenericityReport, IdempotentSet};
use crate::quartic_geometry::{theorem05_report, Theorem05Report};
use crate::reconstruct::{roundtrip_check, RoundtripReport};

/// Bound for the cubic vanishing and splitting checks.
pub const CUBIC_TOL: f64 = 1e-8;
/// Bound for the coefficientwise residual of `f∘G − λJ²`.
pub const QUARTIC_TOL: f64 = 1e-8;
/// Bound for the round-trip algebra distance.
pub const ROUNDTRIP_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub idempotents: IdempotentSet,
    pub genericity: GenericityReport,
    pub qi: Vec<CubicQiCheck>,
    pub qij: Vec<CubicQijCheck>,
    pub qi_pass: bool,
    pub qij_pass: bool,
    pub quartic: Option<QuarticCurve>,
    pub quartic_pass: bool,
    pub theorem: Option<Theorem05Report>,
    pub roundtrip: Option<RoundtripReport>,
    pub roundtrip_pass: bool,
    pub pass: bool,
}

/// Runs every check. Stops after the genericity report when the algebra is not
/// in general position; that report then itemizes the failures.
pub fn verify_algebra(alg: &Algebra, cfg: &SolverConfig) -> Result<VerifyReport> {
    let idempotents = solve_idempotents(alg, cfg)?;
    let genericity = genericity_report(&idempotents);
    let mut report = VerifyReport {
        idempotents,
        genericity,
        qi: Vec::new(),
        qij: Vec::new(),
        qi_pass: false,
        qij_pass: false,
        quartic: None,
        quartic_pass: false,
        theorem: None,
        roundtrip: None,
        roundtrip_pass: false,
        pass: false,
    };
    if !report.genericity.is_a0_double_prime {
        return Ok(report);
    }
    let reps = report
        .idempotents
        .representatives()
        .expect("general position implies nonzero squares");
    report.qi = qi_checks(alg, &reps);
    report.qij = qij_checks(alg, &reps)?;
    report.qi_pass = report
        .qi
        .iter()
        .all(|r| r.max_vanishing < CUBIC_TOL && r.gradient_norm < CUBIC_TOL);
    report.qij_pass = report.qij.iter().all(|r| {
        r.max_vanishing < CUBIC_TOL && r.remainder < CUBIC_TOL && r.conic_vanishing < CUBIC_TOL
    });
    let quartic = recover_quartic(alg)?;
    report.quartic_pass = quartic.residual < QUARTIC_TOL && quartic.lambda.norm() > 0.0 && !quartic.form.is_zero();
    let theorem = theorem05_report(alg, &report.idempotents, &quartic, cfg)?;
    report.quartic = Some(quartic);
    let roundtrip = roundtrip_check(alg, cfg)?;
    report.roundtrip_pass = roundtrip.algebra_distance < ROUNDTRIP_TOL;
    report.pass = report.qi_pass && report.qij_pass && report.quartic_pass && theorem.pass && report.roundtrip_pass;
    report.theorem = Some(theorem);
    report.roundtrip = Some(roundtrip);
    Ok(report)
}
