//! Rebuilding a trace-free algebra, up to scale, from its seven idempotents.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::algebra::{trace_matrix, Algebra};
use crate::config::SolverConfig;
use crate::covariants::psi_net;
use crate::error::{Error, Result};
use crate::forms::{hausdorff, monomial_index, PolySystem, ProjPoint};
use crate::idempotents::{point_genericity, solve_idempotents, PointGenericity, EXPECTED_DEGREE};
use crate::linalg::{self, Nullity, Vec3, C, ZERO};

pub const NULLSPACE_RATIO: f64 = 1e-6;

/// Seven points of the plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointConfiguration {
    pub points: Vec<ProjPoint>,
}

impl PointConfiguration {
    pub fn new(points: Vec<ProjPoint>) -> Result<Self> {
        let c = Self { points };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points.len() != EXPECTED_DEGREE {
            return Err(Error::InvalidInput(format!(
                "expected {EXPECTED_DEGREE} points, got {}",
                self.points.len()
            )));
        }
        for i in 0..self.points.len() {
            for j in i + 1..self.points.len() {
                if !(self.points[i].distance(&self.points[j]) > 1e-8) {
                    return Err(Error::InvalidInput(format!("points {} and {} coincide", i + 1, j + 1)));
                }
            }
        }
        Ok(())
    }

    pub fn genericity(&self) -> PointGenericity {
        let v: Vec<Vec3> = self.points.iter().map(|p| *p.coords()).collect();
        point_genericity(&v)
    }
}

/// The three rows, over the 18 independent constants, of `(p∘p) × p = 0`.
pub fn point_condition_rows(p: &Vec3) -> DMatrix<C> {
    let n = linalg::norm(p);
    let p: Vec3 = std::array::from_fn(|i| p[i] / n);
    // (p∘p)_i = Σ_m w_m c_{i,m}, m over the degree-2 monomials.
    let mut w = [ZERO; 6];
    for j in 0..3 {
        for k in j..3 {
            let mut e = [0u32; 3];
            e[j] += 1;
            e[k] += 1;
            w[monomial_index(e)] = p[j] * p[k] * if j == k { 1.0 } else { 2.0 };
        }
    }
    let mut m = DMatrix::<C>::zeros(3, 18);
    for r in 0..3 {
        let (i1, i2) = ((r + 1) % 3, (r + 2) % 3);
        for (mi, wm) in w.iter().enumerate() {
            m[(r, 6 * i1 + mi)] += wm * p[i2];
            m[(r, 6 * i2 + mi)] -= wm * p[i1];
        }
    }
    m
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reconstruction {
    pub algebra: Algebra,
    /// Smallest over second-smallest singular value.
    pub nullspace_gap: f64,
    /// Max residual of the reconstructed net at the input points.
    pub forward_residual: f64,
}

/// The linear solve without the general-position gate.
pub fn reconstruct_unchecked(points: &[ProjPoint]) -> Result<Reconstruction> {
    let mut m = DMatrix::<C>::zeros(3 * points.len() + 3, 18);
    for (k, p) in points.iter().enumerate() {
        let rows = point_condition_rows(p.coords());
        m.view_mut((3 * k, 0), (3, 18)).copy_from(&rows);
    }
    let t = trace_matrix();
    for (r, row) in t.iter().enumerate() {
        for (c, x) in row.iter().enumerate() {
            m[(3 * points.len() + r, c)] = *x;
        }
    }
    let (v, gap) = match linalg::null_vector(&m, NULLSPACE_RATIO) {
        Nullity::Zero { .. } => return Err(Error::NoAlgebra),
        Nullity::Many => return Err(Error::NonGenericConfiguration("nullspace has dimension at least 2".into())),
        Nullity::One { vector, gap_ratio } => {
            if gap_ratio >= NULLSPACE_RATIO {
                return Err(Error::NonGenericConfiguration(format!("singular value ratio {gap_ratio:e}")));
            }
            (vector, gap_ratio)
        }
    };
    let v: [C; 18] = v.try_into().expect("18 unknowns");
    let algebra = Algebra::from_independent(&v).normalized().ok_or(Error::NoAlgebra)?;
    let net = psi_net(&algebra);
    let g = net.components();
    let sys = PolySystem::new(&[&g[0], &g[1], &g[2]]);
    let forward_residual = points.iter().map(|p| sys.residual(p.coords())).fold(0.0, f64::max);
    Ok(Reconstruction {
        algebra,
        nullspace_gap: gap,
        forward_residual,
    })
}

/// The algebra, normalized, whose idempotents are the given seven points.
pub fn algebra_from_points(cfg: &PointConfiguration) -> Result<Algebra> {
    Ok(reconstruct(cfg)?.algebra)
}

pub fn reconstruct(cfg: &PointConfiguration) -> Result<Reconstruction> {
    cfg.validate()?;
    let g = cfg.genericity();
    if !g.no_three_collinear {
        return Err(Error::NotGeneric(format!("collinear triples {:?}", g.collinear_triples)));
    }
    if !g.no_six_on_conic {
        return Err(Error::NotGeneric(format!("six points on a conic, excluding {:?}", g.conic_subsets)));
    }
    reconstruct_unchecked(&cfg.points)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundtripReport {
    pub algebra_distance: f64,
    pub idempotent_distance: f64,
    pub reconstructed: Algebra,
}

/// Solve for the idempotents, rebuild the algebra from them, and compare.
pub fn roundtrip_check(alg: &Algebra, cfg: &SolverConfig) -> Result<RoundtripReport> {
    let x = solve_idempotents(alg, cfg)?;
    let points = PointConfiguration::new(x.projective_points())?;
    let rebuilt = algebra_from_points(&points)?;
    let original = alg.normalized().ok_or(Error::DegenerateAlgebra)?;
    let x2 = solve_idempotents(&rebuilt, cfg)?;
    Ok(RoundtripReport {
        algebra_distance: original.projective_distance(&rebuilt),
        idempotent_distance: hausdorff(&x.projective_points(), &x2.projective_points()),
        reconstructed: rebuilt,
    })
}
