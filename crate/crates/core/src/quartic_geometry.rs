//! The 28 bitangents `A_i`, `A_ij` of the quartic `Y'`, smoothness of `Y'`, and
//! the double cover `Ψ` branched along it.

use nalgebra::{Matrix3, Vector3};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::config::SolverConfig;
use crate::covariants::{psi_net, recover_quartic, CubicNet, QuarticCurve};
use crate::error::{Error, Result};
use crate::forms::{common_zeros, raw_roots, univariate_roots, BinaryForm, LinePoint, ProjPoint, TernaryForm};
use crate::idempotents::{genericity_report, solve_idempotents, IdempotentSet};
use crate::linalg::{self, Mat3, Vec3, C, ZERO};
use crate::sampling::{gaussian_vec3, random_su3, rng_for};

const SMOOTH_STREAM: u64 = 0x5300_7400;
const FIBER_STREAM: u64 = 0xf1be_2000;
const BRANCH_STREAM: u64 = 0xb2a0_c400;

/// Relative residual bound for `r² ∝ q`.
pub const SQUARE_FIT_TOL: f64 = 1e-6;
/// Bound on the normalized third partial at a singular candidate.
pub const SMOOTH_TOL: f64 = 1e-7;
/// Bound on `|f|` at reported tangency points.
pub const ON_CURVE_TOL: f64 = 1e-7;
/// Coincidence bound for the two fiber points over a branch point.
pub const BRANCH_COINCIDENCE: f64 = 1e-4;
/// Bound on `dist(Ψ(p), y)` for fiber points.
pub const IMAGE_TOL: f64 = 1e-7;
/// Minimum pairwise distance between distinct candidate lines.
pub const DISTINCT_LINES: f64 = 1e-8;

/// A line `{ξ : ⟨ell, ξ⟩ = 0}` in the plane of the quartic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualLine {
    pub ell: ProjPoint,
    pub label: String,
}

impl DualLine {
    pub fn new(ell: Vec3, label: impl Into<String>) -> Result<Self> {
        Ok(Self {
            ell: ProjPoint::new(ell)?,
            label: label.into(),
        })
    }

    /// The line cut out by `g·ell`, matching `a ↦ g a` on the algebra side.
    pub fn transform(&self, g: &Mat3) -> Result<Self> {
        Ok(Self {
            ell: self.ell.transform(g)?,
            label: self.label.clone(),
        })
    }
}

/// The 28 lines `A_i = a_i` and `A_ij = (a_i − a_j)²` in the point order of `x`.
pub fn bitangent_candidates(alg: &Algebra, x: &IdempotentSet, cfg: &SolverConfig) -> Result<Vec<DualLine>> {
    let reps = x
        .representatives()
        .ok_or_else(|| Error::NotGeneric("an idempotent has zero square".into()))?;
    let mut out = Vec::with_capacity(28);
    for (i, a) in reps.iter().enumerate() {
        out.push(DualLine::new(*a, format!("A_{}", i + 1))?);
    }
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            let d: Vec3 = std::array::from_fn(|k| reps[i][k] - reps[j][k]);
            let sq = alg.square(&d);
            let nd = linalg::norm(&d);
            if linalg::norm(&sq) <= cfg.tol_zero * alg.max_abs() * nd * nd {
                return Err(Error::DegeneratePairLine(i + 1, j + 1));
            }
            out.push(DualLine::new(sq, format!("A_{}{}", i + 1, j + 1))?);
        }
    }
    let d = min_pairwise_distance(&out);
    if !(d > DISTINCT_LINES) {
        return Err(Error::NotGeneric(format!("candidate lines coincide (distance {d:e})")));
    }
    Ok(out)
}

pub fn min_pairwise_distance(lines: &[DualLine]) -> f64 {
    let mut m = f64::INFINITY;
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            m = m.min(lines[i].ell.distance(&lines[j].ell));
        }
    }
    m
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BitangencyCertificate {
    pub label: String,
    pub line: ProjPoint,
    pub is_bitangent: bool,
    pub hyperflex: bool,
    /// Max of the root-pairing distance and the square-fit residual.
    pub residual: f64,
    /// Worst within-pair distance of the four intersection points under the best pairing.
    pub pairing_distance: f64,
    /// `max|r² − q| / max|q|` for the best binary quadratic `r`.
    pub square_fit: f64,
    pub tangency_points: Vec<ProjPoint>,
    /// Max of `|f|` at the tangency points, form and points unit-scaled.
    pub on_curve: f64,
}

/// Tests whether the line meets `f = 0` in two double points.
pub fn is_bitangent(f: &TernaryForm, line: &DualLine, cfg: &SolverConfig) -> Result<BitangencyCertificate> {
    let (u, v) = linalg::annihilator_basis(line.ell.coords());
    is_bitangent_with_basis(f, line, &u, &v, cfg)
}

/// [`is_bitangent`] with an explicit parametrization `(s, t) ↦ s u + t v` of the line.
pub fn is_bitangent_with_basis(
    f: &TernaryForm,
    line: &DualLine,
    u: &Vec3,
    v: &Vec3,
    cfg: &SolverConfig,
) -> Result<BitangencyCertificate> {
    if f.is_zero() {
        return Err(Error::IdenticallyZero);
    }
    let (fh, _) = f.normalized();
    let ell = line.ell.coords();
    if linalg::dot(ell, u).norm() > 1e-10 * linalg::norm(ell) * linalg::norm(u)
        || linalg::dot(ell, v).norm() > 1e-10 * linalg::norm(ell) * linalg::norm(v)
    {
        return Err(Error::DegenerateParametrization);
    }
    let q = fh.restrict_to_line(u, v)?;
    let scale = linalg::norm(u).max(linalg::norm(v)).powi(f.degree() as i32);
    if q.max_abs() <= 1e-12 * scale {
        return Err(Error::LineIsComponent);
    }
    if f.degree() != 4 {
        return Err(Error::MismatchedDegrees(format!("expected a quartic, got degree {}", f.degree())));
    }
    let qn = q.scale(C::new(1.0 / q.max_abs(), 0.0));
    let to_plane = |r: &LinePoint| -> Vec3 { std::array::from_fn(|i| r.s() * u[i] + r.t() * v[i]) };
    let roots = raw_roots(&qn)?;
    let pts: Vec<Vec3> = roots.iter().map(to_plane).collect();
    let d = |a: usize, b: usize| linalg::projective_distance(&pts[a], &pts[b]);
    let pairings = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];
    let (best, pairing_distance) = pairings
        .iter()
        .map(|p| (p, d(p[0].0, p[0].1).max(d(p[1].0, p[1].1))))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    let mut spread: f64 = 0.0;
    for a in 0..4 {
        for b in a + 1..4 {
            spread = spread.max(d(a, b));
        }
    }
    let hyperflex = spread <= cfg.tol_pair;

    let centers: Vec<LinePoint> = best
        .iter()
        .map(|&(a, b)| {
            let (ra, rb) = (roots[a], roots[b]);
            // Align phases before averaging.
            let w = ra.s().conj() * rb.s() + ra.t().conj() * rb.t();
            let ph = if w == ZERO { C::new(1.0, 0.0) } else { w.conj() / w.norm() };
            LinePoint::new(ra.s() + rb.s() * ph, ra.t() + rb.t() * ph).unwrap_or(ra)
        })
        .collect();
    let (r, square_fit) = square_fit(&qn, &centers);
    let is_bitangent = pairing_distance <= cfg.tol_pair && square_fit < SQUARE_FIT_TOL;

    let mut tangency_points: Vec<ProjPoint> = Vec::new();
    let mut on_curve: f64 = 0.0;
    if is_bitangent {
        let rr = BinaryForm::from_coeffs(r.to_vec())?;
        for root in raw_roots(&rr)? {
            let p = ProjPoint::new(to_plane(&root))?;
            if tangency_points.iter().all(|t| t.distance(&p) > cfg.tol_pair) {
                on_curve = on_curve.max(fh.eval(p.coords()).norm());
                tangency_points.push(p);
            }
        }
        tangency_points.sort_by(|a, b| a.lex_cmp(b));
    }
    Ok(BitangencyCertificate {
        label: line.label.clone(),
        line: line.ell,
        is_bitangent,
        hyperflex,
        residual: pairing_distance.max(square_fit),
        pairing_distance,
        square_fit,
        tangency_points,
        on_curve,
    })
}

fn sq(r: &[C; 3]) -> [C; 5] {
    let mut o = [ZERO; 5];
    for a in 0..3 {
        for b in 0..3 {
            o[a + b] += r[a] * r[b];
        }
    }
    o
}

fn fit_error(q: &BinaryForm, r: &[C; 3]) -> f64 {
    let s = sq(r);
    q.coeffs()
        .iter()
        .zip(&s)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
        / q.max_abs()
}

/// Best binary quadratic `r` with `r² ≈ q`, started from the formal square root
/// at the dominant end and from the product of the paired roots, then refined by
/// Gauss–Newton. Returns `r` and the relative residual.
fn square_fit(q: &BinaryForm, centers: &[LinePoint]) -> ([C; 3], f64) {
    let c = q.coeffs();
    let mut starts: Vec<[C; 3]> = Vec::new();
    if c[0].norm() >= c[4].norm() {
        let r0 = c[0].sqrt();
        let r1 = c[1] / (r0 * 2.0);
        let r2 = (c[2] - r1 * r1) / (r0 * 2.0);
        starts.push([r0, r1, r2]);
    } else {
        let r2 = c[4].sqrt();
        let r1 = c[3] / (r2 * 2.0);
        let r0 = (c[2] - r1 * r1) / (r2 * 2.0);
        starts.push([r0, r1, r2]);
    }
    let base = BinaryForm::from_roots(centers);
    let b: [C; 3] = [base.coeffs()[0], base.coeffs()[1], base.coeffs()[2]];
    let b2 = sq(&b);
    let num: C = b2.iter().zip(c).map(|(x, y)| x.conj() * y).sum();
    let den: f64 = b2.iter().map(|x| x.norm_sqr()).sum();
    if den > 0.0 {
        let k = (num / den).sqrt();
        starts.push([b[0] * k, b[1] * k, b[2] * k]);
    }
    starts
        .into_iter()
        .filter(|r| r.iter().all(|z| z.is_finite()))
        .map(|r| {
            let r = gauss_newton_square(q, r);
            (r, fit_error(q, &r))
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or(([ZERO; 3], 1.0))
}

fn gauss_newton_square(q: &BinaryForm, mut r: [C; 3]) -> [C; 3] {
    let c = q.coeffs();
    let mut err = fit_error(q, &r);
    for _ in 0..50 {
        let s = sq(&r);
        let res: Vec<C> = (0..5).map(|k| s[k] - c[k]).collect();
        // d(r²)_k / d r_a = 2 r_{k-a}
        let jac = |k: usize, a: usize| if k >= a && k - a <= 2 { r[k - a] * 2.0 } else { ZERO };
        let mut ata = Matrix3::<C>::zeros();
        let mut atb = Vector3::<C>::zeros();
        for k in 0..5 {
            for a in 0..3 {
                atb[a] -= jac(k, a).conj() * res[k];
                for b in 0..3 {
                    ata[(a, b)] += jac(k, a).conj() * jac(k, b);
                }
            }
        }
        let Some(step) = ata.lu().solve(&atb) else { break };
        let next = [r[0] + step[0], r[1] + step[1], r[2] + step[2]];
        let e = fit_error(q, &next);
        if !(e < err) {
            break;
        }
        r = next;
        err = e;
    }
    r
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessReport {
    pub smooth: bool,
    /// Smallest normalized `|∂₃f|` over the common zeros of `∂₁f` and `∂₂f`
    /// in a randomly rotated frame.
    pub min_third_partial: Option<f64>,
    pub candidates: usize,
    /// A candidate singular point in the original coordinates.
    pub witness: Option<ProjPoint>,
}

/// Singular points of `f = 0` among the common zeros of two partials.
///
/// The form is first composed with a seeded random special-unitary matrix so
/// that the two partials meet transversally.
pub fn smoothness_check(f: &TernaryForm, cfg: &SolverConfig) -> Result<SmoothnessReport> {
    if f.is_zero() {
        return Err(Error::IdenticallyZero);
    }
    let (fh, _) = f.normalized();
    let u = random_su3(&mut rng_for(cfg.seed, SMOOTH_STREAM));
    let fr = fh.compose_linear(&u);
    let [d1, d2, d3] = fr.gradient();
    let zeros = match common_zeros(&d1, &d2, cfg) {
        Ok(z) => z,
        Err(Error::CommonComponent) => return Err(Error::NonReducedQuartic),
        Err(e) => return Err(e),
    };
    let (d3n, _) = d3.normalized();
    let mut min_third_partial: Option<f64> = None;
    let mut worst = None;
    for (p, _) in &zeros {
        let val = if d3.is_zero() { 0.0 } else { d3n.eval(p.coords()).norm() };
        if min_third_partial.is_none_or(|m| val < m) {
            min_third_partial = Some(val);
            worst = Some(*p);
        }
    }
    let smooth = min_third_partial.is_none_or(|m| m > SMOOTH_TOL);
    let witness = if smooth {
        None
    } else {
        worst.map(|p| p.transform(&u)).transpose()?
    };
    Ok(SmoothnessReport {
        smooth,
        min_third_partial,
        candidates: zeros.len(),
        witness,
    })
}

/// Points `a` off the base locus with `Ψ(a) = y`, repeated by multiplicity.
pub fn fiber_points(net: &CubicNet, base: &[ProjPoint], y: &ProjPoint, cfg: &SolverConfig) -> Result<Vec<ProjPoint>> {
    let (w1, w2) = linalg::annihilator_basis(y.coords());
    let h1 = net.contract(&w1);
    let h2 = net.contract(&w2);
    let zeros = common_zeros(&h1, &h2, cfg)?;
    let mut matched = vec![false; base.len()];
    let mut out = Vec::new();
    for (p, k) in zeros {
        let mut k = k;
        if let Some(i) = (0..base.len()).find(|&i| !matched[i] && base[i].distance(&p) < cfg.tol_merge) {
            matched[i] = true;
            k -= 1;
        }
        out.extend(std::iter::repeat_n(p, k));
    }
    let m = matched.iter().filter(|x| **x).count();
    if m < base.len() {
        return Err(Error::BaseLocusMismatch { matched: m });
    }
    Ok(out)
}

/// `Ψ(a)` as a point of the quartic's plane.
pub fn psi_point(net: &CubicNet, a: &Vec3) -> Result<ProjPoint> {
    ProjPoint::new(net.eval(a))
}

/// Points of `f = 0` on seeded random lines.
pub fn branch_points<R: Rng + ?Sized>(f: &TernaryForm, count: usize, rng: &mut R, cfg: &SolverConfig) -> Result<Vec<ProjPoint>> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let (u, v) = linalg::annihilator_basis(&gaussian_vec3(rng));
        let q = f.restrict_to_line(&u, &v)?;
        for (r, _) in univariate_roots(&q, cfg)? {
            if out.len() < count {
                out.push(ProjPoint::new(std::array::from_fn(|i| r.s() * u[i] + r.t() * v[i]))?);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberSample {
    pub y: ProjPoint,
    pub fiber_points: Vec<ProjPoint>,
    pub min_pair_distance: Option<f64>,
    /// Max of `dist(Ψ(p), y)` over the fiber points.
    pub image_distance: Option<f64>,
    pub error: Option<String>,
}

fn fiber_sample(net: &CubicNet, base: &[ProjPoint], y: ProjPoint, cfg: &SolverConfig) -> FiberSample {
    match fiber_points(net, base, &y, cfg) {
        Ok(pts) => {
            let mut min_pair_distance: Option<f64> = None;
            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    let d = pts[i].distance(&pts[j]);
                    min_pair_distance = Some(min_pair_distance.map_or(d, |m| m.min(d)));
                }
            }
            let image_distance = pts
                .iter()
                .map(|p| psi_point(net, p.coords()).map_or(f64::MAX, |q| q.distance(&y)))
                .reduce(f64::max);
            FiberSample {
                y,
                fiber_points: pts,
                min_pair_distance,
                image_distance,
                error: None,
            }
        }
        Err(e) => FiberSample {
            y,
            fiber_points: Vec::new(),
            min_pair_distance: None,
            image_distance: None,
            error: Some(e.to_string()),
        },
    }
}

/// Report on the quartic of an algebra in general position: smoothness, the 28
/// bitangents, and the double cover branched along the quartic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem05Report {
    pub smoothness: SmoothnessReport,
    pub certificates: Vec<BitangencyCertificate>,
    pub bitangent_count: usize,
    pub min_line_distance: f64,
    pub generic_fibers: Vec<FiberSample>,
    pub branch_fibers: Vec<FiberSample>,
    pub smooth_pass: bool,
    pub bitangents_pass: bool,
    pub generic_fibers_pass: bool,
    pub branch_fibers_pass: bool,
    pub pass: bool,
}

/// Number of fiber samples of each kind.
pub const FIBER_SAMPLES: usize = 10;

pub fn theorem05_report(
    alg: &Algebra,
    x: &IdempotentSet,
    quartic: &QuarticCurve,
    cfg: &SolverConfig,
) -> Result<Theorem05Report> {
    let f = &quartic.form;
    let smoothness = smoothness_check(f, cfg)?;
    let lines = bitangent_candidates(alg, x, cfg)?;
    let certificates = lines
        .iter()
        .map(|l| is_bitangent(f, l, cfg))
        .collect::<Result<Vec<_>>>()?;
    let bitangent_count = certificates
        .iter()
        .filter(|c| c.is_bitangent && c.on_curve < ON_CURVE_TOL)
        .count();
    let min_line_distance = min_pairwise_distance(&lines);

    let net = psi_net(alg);
    let base = x.projective_points();
    let mut rng = rng_for(cfg.seed, FIBER_STREAM);
    let generic_fibers: Vec<FiberSample> = (0..FIBER_SAMPLES)
        .map(|_| {
            let y = ProjPoint::new(gaussian_vec3(&mut rng)).expect("gaussian vector is nonzero");
            fiber_sample(&net, &base, y, cfg)
        })
        .collect();
    let mut brng = rng_for(cfg.seed, BRANCH_STREAM);
    let branch_fibers: Vec<FiberSample> = branch_points(f, FIBER_SAMPLES, &mut brng, cfg)?
        .into_iter()
        .map(|y| fiber_sample(&net, &base, y, cfg))
        .collect();

    let smooth_pass = smoothness.smooth;
    let bitangents_pass = bitangent_count == 28 && min_line_distance > DISTINCT_LINES;
    let generic_fibers_pass = generic_fibers.iter().all(|s| {
        s.error.is_none() && s.fiber_points.len() == 2
            && s.min_pair_distance.is_some_and(|d| d > BRANCH_COINCIDENCE)
            && s.image_distance.is_some_and(|d| d < IMAGE_TOL)
    });
    let branch_fibers_pass = branch_fibers
        .iter()
        .all(|s| s.error.is_none() && s.fiber_points.len() == 2 && s.min_pair_distance.is_some_and(|d| d < BRANCH_COINCIDENCE));
    Ok(Theorem05Report {
        pass: smooth_pass && bitangents_pass && generic_fibers_pass && branch_fibers_pass,
        smoothness,
        certificates,
        bitangent_count,
        min_line_distance,
        generic_fibers,
        branch_fibers,
        smooth_pass,
        bitangents_pass,
        generic_fibers_pass,
        branch_fibers_pass,
    })
}

/// Solves, checks general position, recovers the quartic and builds the report.
pub fn verify_theorem05(alg: &Algebra, cfg: &SolverConfig) -> Result<Theorem05Report> {
    let x = solve_idempotents(alg, cfg)?;
    let g = genericity_report(&x);
    if !g.is_a0_double_prime {
        return Err(Error::NotGeneric("idempotents are not in general position".into()));
    }
    let q = recover_quartic(alg)?;
    theorem05_report(alg, &x, &q, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{eta0, random_traceless};
    use crate::forms::hausdorff;
    use crate::linalg::ONE;
    use crate::sampling::{complex_gaussian, random_sl3};

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    fn double_conic() -> TernaryForm {
        let c = &(&TernaryForm::monomial([2, 0, 0], ONE) + &TernaryForm::monomial([0, 2, 0], ONE))
            + &TernaryForm::monomial([0, 0, 2], ONE);
        &c * &c
    }

    fn fermat() -> TernaryForm {
        &(&TernaryForm::monomial([4, 0, 0], ONE) + &TernaryForm::monomial([0, 4, 0], ONE))
            + &TernaryForm::monomial([0, 0, 4], ONE)
    }

    #[test]
    fn double_conic_is_bitangent_to_every_line() {
        let mut rng = rng_for(90, 0);
        for _ in 0..5 {
            let l = DualLine::new(gaussian_vec3(&mut rng), "L").unwrap();
            let c = is_bitangent(&double_conic(), &l, &cfg()).unwrap();
            assert!(c.is_bitangent, "{c:?}");
            assert_eq!(c.tangency_points.len(), 2);
            assert!(c.on_curve < ON_CURVE_TOL);
        }
    }

    #[test]
    fn fermat_line_is_not_bitangent() {
        let l = DualLine::new([ZERO, ZERO, ONE], "L").unwrap();
        let c = is_bitangent(&fermat(), &l, &cfg()).unwrap();
        assert!(!c.is_bitangent);
        assert!(c.pairing_distance > 0.1);
    }

    #[test]
    fn component_line_is_an_error() {
        let f = &TernaryForm::variable(0) * &fermat().diff(0);
        let l = DualLine::new([ONE, ZERO, ZERO], "L").unwrap();
        assert_eq!(is_bitangent(&f, &l, &cfg()), Err(Error::LineIsComponent));
    }

    #[test]
    fn smoothness_examples() {
        assert!(smoothness_check(&fermat(), &cfg()).unwrap().smooth);
        assert_eq!(smoothness_check(&double_conic(), &cfg()), Err(Error::NonReducedQuartic));
        // Nodal quartic: x1²x2² + x2²x3² + x3²x1² is singular at the coordinate points.
        let nodal = &(&TernaryForm::monomial([2, 2, 0], ONE) + &TernaryForm::monomial([0, 2, 2], ONE))
            + &TernaryForm::monomial([2, 0, 2], ONE);
        let r = smoothness_check(&nodal, &cfg()).unwrap();
        assert!(!r.smooth);
        let w = r.witness.unwrap();
        let grad: Vec<C> = nodal.normalized().0.gradient().iter().map(|d| d.eval(w.coords())).collect();
        assert!(linalg::norm(&grad) < 1e-6);
    }

    #[test]
    fn eta0_has_28_bitangents_and_passes() {
        let r = verify_theorem05(&eta0(), &cfg()).unwrap();
        assert_eq!(r.bitangent_count, 28);
        for c in &r.certificates {
            assert!(c.residual < 1e-5, "{c:?}");
            assert!(c.square_fit < 1e-6);
        }
        assert!(r.min_line_distance > 1e-3);
        assert!(r.pass, "{r:#?}");
    }

    #[test]
    fn fiber_contains_the_source_point() {
        let alg = random_traceless(3);
        let x = solve_idempotents(&alg, &cfg()).unwrap();
        let net = psi_net(&alg);
        let mut rng = rng_for(91, 0);
        for _ in 0..3 {
            let a = gaussian_vec3(&mut rng);
            let y = psi_point(&net, &a).unwrap();
            let fib = fiber_points(&net, &x.projective_points(), &y, &cfg()).unwrap();
            assert_eq!(fib.len(), 2);
            let pa = ProjPoint::new(a).unwrap();
            let best = fib.iter().map(|p| p.distance(&pa)).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-7, "{best}");
        }
    }

    #[test]
    fn random_algebras_pass() {
        for seed in 0..3 {
            let r = verify_theorem05(&random_traceless(seed), &SolverConfig::with_seed(seed)).unwrap();
            assert!(r.pass, "seed {seed}: {r:#?}");
        }
    }

    #[test]
    fn bitangency_is_projective() {
        let alg = random_traceless(8);
        let x = solve_idempotents(&alg, &cfg()).unwrap();
        let q = recover_quartic(&alg).unwrap();
        let lines = bitangent_candidates(&alg, &x, &cfg()).unwrap();
        let mut rng = rng_for(92, 0);
        // A non-bitangent line gives an O(1) residual that must be stable.
        let other = DualLine::new(gaussian_vec3(&mut rng), "L").unwrap();
        for line in [&lines[0], &lines[9], &other] {
            let base = is_bitangent(&q.form, line, &cfg()).unwrap();
            let (u0, v0) = linalg::annihilator_basis(line.ell.coords());
            for _ in 0..5 {
                let (a, b, c, d) = (
                    complex_gaussian(&mut rng),
                    complex_gaussian(&mut rng),
                    complex_gaussian(&mut rng),
                    complex_gaussian(&mut rng),
                );
                let u: Vec3 = std::array::from_fn(|i| a * u0[i] + b * v0[i]);
                let v: Vec3 = std::array::from_fn(|i| c * u0[i] + d * v0[i]);
                let s = complex_gaussian(&mut rng);
                let f = q.form.scale(s);
                let ell: Vec3 = std::array::from_fn(|i| line.ell.coords()[i] * s);
                let l2 = DualLine::new(ell, line.label.clone()).unwrap();
                let r = is_bitangent_with_basis(&f, &l2, &u, &v, &cfg()).unwrap();
                assert_eq!(r.is_bitangent, base.is_bitangent);
                // A computed double root splits by about sqrt(eps) times its
                // conditioning, which a non-unitary basis changes.
                let floor = 100.0 * f64::EPSILON.sqrt();
                let (r1, r0) = (r.residual.max(floor), base.residual.max(floor));
                assert!(r1 <= 2.0 * r0 && r0 <= 2.0 * r1, "{} vs {}", r.residual, base.residual);
            }
        }
    }

    #[test]
    fn candidates_are_equivariant() {
        let mut rng = rng_for(93, 0);
        let alg = random_traceless(12);
        let g = random_sl3(&mut rng);
        let x = solve_idempotents(&alg, &cfg()).unwrap();
        let lines = bitangent_candidates(&alg, &x, &cfg()).unwrap();
        let moved: Vec<ProjPoint> = lines.iter().map(|l| l.transform(&g).unwrap().ell).collect();
        let alg2 = alg.act(&g).unwrap();
        let x2 = solve_idempotents(&alg2, &cfg()).unwrap();
        let lines2: Vec<ProjPoint> = bitangent_candidates(&alg2, &x2, &cfg()).unwrap().iter().map(|l| l.ell).collect();
        assert!(hausdorff(&moved, &lines2) < 1e-6);
    }
}
