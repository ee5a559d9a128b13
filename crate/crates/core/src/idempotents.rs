//! The generalized idempotents `X(η) = {a : a² ∧ a = 0}` and the genericity
//! predicates built on them.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::config::SolverConfig;
use crate::covariants::psi_net;
use crate::error::{Error, Result};
use crate::forms::intersect::centroid;
use crate::forms::roots::cluster;
use crate::forms::{common_zeros, PolySystem, ProjPoint, TernaryForm};
use crate::linalg::{self, Vec3, C, ZERO};
use crate::sampling::{random_su3, rng_for};

const COMBINATION_STREAM: u64 = 0x1de_4907;

/// Residual on the full net below which an elimination point is worth polishing.
const PREFILTER: f64 = 1e-4;

/// Threshold for the collinearity and conic determinants.
pub const GENERICITY_TOL: f64 = 1e-8;

/// Expected degree of the idempotent scheme.
pub const EXPECTED_DEGREE: usize = 7;

/// One point of `X(η)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdempotentPoint {
    pub point: ProjPoint,
    pub multiplicity: usize,
    /// The vector on the line with `a∘a = a`, absent when `a∘a = 0`.
    pub representative: Option<Vec3>,
    pub square_nonzero: bool,
}

/// The solved scheme, points sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IdempotentSet {
    pub points: Vec<IdempotentPoint>,
}

impl IdempotentSet {
    pub fn total_multiplicity(&self) -> usize {
        self.points.iter().map(|p| p.multiplicity).sum()
    }

    /// True when clustered roots merged into a multiple point.
    pub fn multiplicity_collision(&self) -> bool {
        self.points.iter().any(|p| p.multiplicity > 1)
    }

    pub fn projective_points(&self) -> Vec<ProjPoint> {
        self.points.iter().map(|p| p.point).collect()
    }

    /// Representatives in point order; `None` if some point has `a∘a = 0`.
    pub fn representatives(&self) -> Option<Vec<Vec3>> {
        self.points.iter().map(|p| p.representative).collect()
    }
}

/// The representative `a/λ` of the line through `a` with `a∘a = λa`, or `None`
/// when the square vanishes at tolerance.
pub fn idempotent_representative(alg: &Algebra, a: &Vec3, tol_zero: f64) -> Option<Vec3> {
    let sq = alg.square(a);
    let na = linalg::norm(a);
    if linalg::norm(&sq) <= tol_zero * alg.max_abs() * na * na {
        return None;
    }
    let num: C = a.iter().zip(&sq).map(|(x, y)| x.conj() * y).sum();
    let lambda = num / (na * na);
    if lambda == ZERO {
        return None;
    }
    Some([a[0] / lambda, a[1] / lambda, a[2] / lambda])
}

/// Solves `a² ∧ a = 0`.
///
/// Two random combinations of the three net cubics are intersected (Bézout
/// count 9); the two spurious points are discarded by the residual on the
/// full net, and the survivors are polished against all three cubics.
pub fn solve_idempotents(alg: &Algebra, cfg: &SolverConfig) -> Result<IdempotentSet> {
    let net = psi_net(alg);
    if net.is_zero() {
        return Err(Error::PositiveDimensionalLocus);
    }
    let g = net.components();
    let full = PolySystem::new(&[&g[0], &g[1], &g[2]]);
    let mut rng = rng_for(cfg.seed, COMBINATION_STREAM);
    let attempts = cfg.chart_retries.max(1);
    let mut components = 0;
    for attempt in 0..attempts {
        let u = random_su3(&mut rng);
        let h1 = net.contract(&u[0]);
        let h2 = net.contract(&u[1]);
        let sub = SolverConfig {
            seed: cfg.seed.wrapping_add(attempt as u64),
            ..*cfg
        };
        let zeros = match common_zeros(&h1, &h2, &sub) {
            Ok(z) => z,
            Err(Error::CommonComponent) => {
                components += 1;
                continue;
            }
            Err(Error::SolverFailure { .. }) => continue,
            Err(e) => return Err(e),
        };
        if let Some(points) = filter_and_merge(&full, &zeros, cfg) {
            let total: usize = points.iter().map(|p| p.1).sum();
            if total == EXPECTED_DEGREE {
                return Ok(finish(alg, points, cfg));
            }
        }
    }
    if components == attempts {
        Err(Error::PositiveDimensionalLocus)
    } else {
        Err(Error::SolverFailure { attempts })
    }
}

fn filter_and_merge(full: &PolySystem, zeros: &[(ProjPoint, usize)], cfg: &SolverConfig) -> Option<Vec<(Vec3, usize)>> {
    let mut kept: Vec<(Vec3, usize)> = Vec::new();
    for (p, k) in zeros {
        if full.residual(p.coords()) > PREFILTER {
            continue;
        }
        let q = full.polish(*p.coords());
        if full.residual(&q) < cfg.tol_zero {
            kept.push((q, *k));
        } else if *k == 1 {
            // A simple root of the pair near the scheme that will not polish
            // onto it indicates a bad chart.
            return None;
        }
    }
    let pts: Vec<Vec3> = kept.iter().map(|p| p.0).collect();
    let weights: Vec<usize> = kept.iter().map(|p| p.1).collect();
    let groups = cluster(
        |a, b| linalg::projective_distance(&pts[a], &pts[b]),
        &weights,
        cfg.tol_merge,
        |g| full.residual(&centroid(g.iter().map(|&j| &pts[j]))) < cfg.tol_zero,
    );
    Some(
        groups
            .into_iter()
            .map(|g| {
                let c = if g.len() == 1 {
                    pts[g[0]]
                } else {
                    full.polish(centroid(g.iter().map(|&j| &pts[j])))
                };
                (c, g.iter().map(|&j| weights[j]).sum())
            })
            .collect(),
    )
}

fn finish(alg: &Algebra, points: Vec<(Vec3, usize)>, cfg: &SolverConfig) -> IdempotentSet {
    let mut out: Vec<IdempotentPoint> = points
        .into_iter()
        .map(|(v, k)| {
            let point = ProjPoint::new(v).expect("polished points are nonzero");
            let representative = idempotent_representative(alg, point.coords(), cfg.tol_zero);
            IdempotentPoint {
                point,
                multiplicity: k,
                representative,
                square_nonzero: representative.is_some(),
            }
        })
        .collect();
    out.sort_by(|a, b| a.point.lex_cmp(&b.point));
    IdempotentSet { points: out }
}

/// Position checks for a point set: no three collinear, no six on a conic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointGenericity {
    pub no_three_collinear: bool,
    /// Smallest `|det[p q r]| / (|p||q||r|)` over all triples.
    pub min_triple_det: Option<f64>,
    pub collinear_triples: Vec<[usize; 3]>,
    pub no_six_on_conic: bool,
    /// Smallest normalized Veronese determinant over six-point subsets.
    pub min_conic_det: Option<f64>,
    /// Each failing six-point subset, identified by the excluded indices.
    pub conic_subsets: Vec<Vec<usize>>,
}

fn veronese_row(p: &Vec3) -> [C; 6] {
    let s = std::f64::consts::SQRT_2;
    let n = linalg::norm(p);
    let u = [p[0] / n, p[1] / n, p[2] / n];
    [
        u[0] * u[0],
        u[1] * u[1],
        u[2] * u[2],
        u[0] * u[1] * s,
        u[0] * u[2] * s,
        u[1] * u[2] * s,
    ]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn point_genericity(points: &[Vec3]) -> PointGenericity {
    let n = points.len();
    let mut min_triple_det: Option<f64> = None;
    let mut collinear_triples = Vec::new();
    for s in subsets(n, 3) {
        let (p, q, r) = (&points[s[0]], &points[s[1]], &points[s[2]]);
        let d = linalg::det3(&[*p, *q, *r]).norm() / (linalg::norm(p) * linalg::norm(q) * linalg::norm(r));
        min_triple_det = Some(min_triple_det.map_or(d, |m| m.min(d)));
        if !(d > GENERICITY_TOL) {
            collinear_triples.push([s[0], s[1], s[2]]);
        }
    }
    let mut min_conic_det: Option<f64> = None;
    let mut conic_subsets = Vec::new();
    let rows: Vec<[C; 6]> = points.iter().map(veronese_row).collect();
    for s in subsets(n, 6) {
        let m = DMatrix::from_fn(6, 6, |r, c| rows[s[r]][c]);
        let d = m.determinant().norm();
        min_conic_det = Some(min_conic_det.map_or(d, |m| m.min(d)));
        if !(d > GENERICITY_TOL) {
            conic_subsets.push((0..n).filter(|i| !s.contains(i)).collect());
        }
    }
    PointGenericity {
        no_three_collinear: collinear_triples.is_empty(),
        min_triple_det,
        collinear_triples,
        no_six_on_conic: conic_subsets.is_empty(),
        min_conic_det,
        conic_subsets,
    }
}

/// Membership of an algebra in the open sets `A0'` (finite scheme of degree 7)
/// and `A0''` (seven simple points in general position with nonzero squares).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenericityReport {
    pub seven_simple_points: bool,
    pub squares_nonzero: bool,
    pub square_zero_points: Vec<usize>,
    #[serde(flatten)]
    pub position: PointGenericity,
    pub is_a0_prime: bool,
    pub is_a0_double_prime: bool,
}

pub fn genericity_report(x: &IdempotentSet) -> GenericityReport {
    let pts = x.projective_points();
    let mut distinct = true;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if !(pts[i].distance(&pts[j]) > GENERICITY_TOL) {
                distinct = false;
            }
        }
    }
    let seven_simple_points =
        pts.len() == EXPECTED_DEGREE && x.points.iter().all(|p| p.multiplicity == 1) && distinct;
    let square_zero_points: Vec<usize> = x
        .points
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.square_nonzero)
        .map(|(i, _)| i)
        .collect();
    let coords: Vec<Vec3> = pts.iter().map(|p| *p.coords()).collect();
    let position = point_genericity(&coords);
    let is_a0_prime = x.total_multiplicity() == EXPECTED_DEGREE;
    let is_a0_double_prime = is_a0_prime
        && seven_simple_points
        && square_zero_points.is_empty()
        && position.no_three_collinear
        && position.no_six_on_conic;
    GenericityReport {
        seven_simple_points,
        squares_nonzero: square_zero_points.is_empty(),
        square_zero_points,
        position,
        is_a0_prime,
        is_a0_double_prime,
    }
}

/// Residual of the net at a point, forms and point unit-normalized.
pub fn net_residual(net: &[TernaryForm; 3], p: &Vec3) -> f64 {
    PolySystem::new(&[&net[0], &net[1], &net[2]]).residual(p)
}
