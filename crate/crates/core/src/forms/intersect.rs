//! Common zeros of two ternary forms by resultant elimination.

use nalgebra::DMatrix;

use super::roots::{cluster, raw_roots, univariate_roots};
use super::{BinaryForm, ProjPoint, TernaryForm};
use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::linalg::{self, matvec, Mat3, Vec3, C, ZERO};
use crate::sampling::{random_su3, rng_for};

const CHART_STREAM: u64 = 0x5eed_c4a7;

/// Ratio `|Res| / Hadamard bound` under which the resultant counts as identically zero.
const RESULTANT_ZERO: f64 = 1e-11;

/// Loose residual used inside the solver to reject a bad chart.
const CHART_RESIDUAL: f64 = 1e-6;

/// A square or overdetermined system of forms, each scaled to unit max
/// coefficient, with cached gradients.
#[derive(Debug, Clone)]
pub struct PolySystem {
    forms: Vec<TernaryForm>,
    grads: Vec<[TernaryForm; 3]>,
}

impl PolySystem {
    pub fn new(forms: &[&TernaryForm]) -> Self {
        let forms: Vec<TernaryForm> = forms.iter().map(|f| f.normalized().0).collect();
        let grads = forms.iter().map(|f| f.gradient()).collect();
        Self { forms, grads }
    }

    pub fn forms(&self) -> &[TernaryForm] {
        &self.forms
    }

    /// Max modulus of the (unit-scaled) forms at the max-coordinate-1 representative.
    pub fn residual(&self, p: &Vec3) -> f64 {
        match ProjPoint::new(*p) {
            Ok(q) => self
                .forms
                .iter()
                .map(|f| f.eval(q.coords()).norm())
                .fold(0.0, f64::max),
            Err(_) => f64::INFINITY,
        }
    }

    fn sq_residual(&self, x: &Vec3) -> f64 {
        self.forms.iter().map(|f| f.eval(x).norm_sqr()).sum()
    }

    /// Gauss–Newton refinement in the affine chart of the largest coordinate.
    /// Steps are taken only while they reduce the residual.
    pub fn polish(&self, p: Vec3) -> Vec3 {
        let Ok(start) = ProjPoint::new(p) else {
            return p;
        };
        let mut x = *start.coords();
        let k = x.iter().position(|z| *z == linalg::ONE).unwrap_or(0);
        let (j1, j2) = ((k + 1) % 3, (k + 2) % 3);
        let mut r2 = self.sq_residual(&x);
        for _ in 0..100 {
            if r2 == 0.0 {
                break;
            }
            let f: Vec<C> = self.forms.iter().map(|g| g.eval(&x)).collect();
            let jac: Vec<[C; 2]> = self
                .grads
                .iter()
                .map(|g| [g[j1].eval(&x), g[j2].eval(&x)])
                .collect();
            let step = if jac.len() == 2 {
                let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
                if det == ZERO {
                    break;
                }
                [
                    -(f[0] * jac[1][1] - f[1] * jac[0][1]) / det,
                    -(jac[0][0] * f[1] - jac[1][0] * f[0]) / det,
                ]
            } else {
                let mut a = [[ZERO; 2]; 2];
                let mut b = [ZERO; 2];
                for (row, fi) in jac.iter().zip(&f) {
                    for r in 0..2 {
                        b[r] -= row[r].conj() * fi;
                        for c in 0..2 {
                            a[r][c] += row[r].conj() * row[c];
                        }
                    }
                }
                let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
                if det == ZERO {
                    break;
                }
                [
                    (b[0] * a[1][1] - b[1] * a[0][1]) / det,
                    (a[0][0] * b[1] - a[1][0] * b[0]) / det,
                ]
            };
            let mut xn = x;
            xn[j1] += step[0];
            xn[j2] += step[1];
            let rn = self.sq_residual(&xn);
            if !(rn < r2) {
                break;
            }
            x = xn;
            r2 = rn;
            if step[0].norm() + step[1].norm() < 1e-17 {
                break;
            }
        }
        x
    }
}

/// Newton/Gauss–Newton polish of a point against the given forms.
pub fn polish_point(forms: &[&TernaryForm], p: &ProjPoint) -> ProjPoint {
    let sys = PolySystem::new(forms);
    ProjPoint::new(sys.polish(*p.coords())).unwrap_or(*p)
}

/// Coefficients in `z` of `f(x, y, z)` for fixed `(x, y)`.
fn z_coeffs(f: &TernaryForm, x: C, y: C) -> Vec<C> {
    let mut out = vec![ZERO; f.degree() as usize + 1];
    for (e, c) in f.terms() {
        if c != ZERO {
            out[e[2] as usize] += c * x.powu(e[0]) * y.powu(e[1]);
        }
    }
    out
}

fn sylvester(a: &[C], b: &[C]) -> DMatrix<C> {
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    let mut s = DMatrix::<C>::zeros(size, size);
    for i in 0..n {
        for j in 0..=m {
            s[(i, i + j)] = a[m - j];
        }
    }
    for i in 0..m {
        for j in 0..=n {
            s[(n + i, i + j)] = b[n - j];
        }
    }
    s
}

enum ChartOutcome {
    Solved(Vec<(ProjPoint, usize)>),
    CommonComponent,
    Retry,
}

/// Resultant of `f` and `g` with respect to the third variable, as a binary form
/// in the first two, recovered by sampling on the unit circle and an inverse DFT.
fn resultant(f: &TernaryForm, g: &TernaryForm) -> Option<BinaryForm> {
    let total = (f.degree() * g.degree()) as usize;
    let samples = total + 1;
    let mut values = Vec::with_capacity(samples);
    let mut best_ratio: f64 = 0.0;
    for k in 0..samples {
        let x = C::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / samples as f64);
        let s = sylvester(&z_coeffs(f, x, linalg::ONE), &z_coeffs(g, x, linalg::ONE));
        let bound: f64 = s.row_iter().map(|r| r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).product();
        let det = s.determinant();
        if bound > 0.0 {
            best_ratio = best_ratio.max(det.norm() / bound);
        }
        values.push(det);
    }
    if best_ratio < RESULTANT_ZERO {
        return None;
    }
    let coeffs = (0..samples)
        .map(|j| {
            values
                .iter()
                .enumerate()
                .map(|(k, v)| {
                    let ang = -2.0 * std::f64::consts::PI * ((j * k) % samples) as f64 / samples as f64;
                    v * C::from_polar(1.0, ang)
                })
                .sum::<C>()
                / samples as f64
        })
        .collect();
    Some(BinaryForm::from_coeffs(coeffs).expect("nonempty"))
}

fn try_chart(
    f: &TernaryForm,
    g: &TernaryForm,
    u: &Mat3,
    sys: &PolySystem,
    cfg: &SolverConfig,
) -> ChartOutcome {
    let (m, n) = (f.degree(), g.degree());
    let fr = f.compose_linear(u);
    let gr = g.compose_linear(u);
    if fr.coeff([0, 0, m]).norm() < 1e-3 * fr.max_abs() || gr.coeff([0, 0, n]).norm() < 1e-3 * gr.max_abs() {
        return ChartOutcome::Retry;
    }
    let Some(res) = resultant(&fr, &gr) else {
        return ChartOutcome::CommonComponent;
    };
    let Ok(base) = univariate_roots(&res, cfg) else {
        return ChartOutcome::Retry;
    };
    let gscale = gr.max_abs();
    let mut candidates: Vec<(Vec3, usize)> = Vec::with_capacity(base.len());
    for (pt, k) in base {
        let (x0, y0) = (pt.s(), pt.t());
        let Ok(zform) = BinaryForm::from_coeffs(z_coeffs(&fr, x0, y0)) else {
            return ChartOutcome::Retry;
        };
        let Ok(zroots) = raw_roots(&zform) else {
            return ChartOutcome::Retry;
        };
        let mut scored: Vec<(f64, Vec3)> = zroots
            .iter()
            .filter(|r| r.t().norm() > 1e-12)
            .map(|r| {
                let p = [x0, y0, r.s() / r.t()];
                let pn = linalg::norm(&p);
                let q = [p[0] / pn, p[1] / pn, p[2] / pn];
                (gr.eval(&q).norm() / gscale, p)
            })
            .collect();
        scored.sort_by(|a, b| a.0.total_cmp(&b.0));
        let Some(&(best, p)) = scored.first() else {
            return ChartOutcome::Retry;
        };
        if best > 1e-4 {
            return ChartOutcome::Retry;
        }
        // A second, distinct match on the same fiber line means two intersection
        // points project to one root: the chart is not generic.
        let ambiguous = scored[1..]
            .iter()
            .any(|(r, q)| *r < 1e-6 && linalg::projective_distance(q, &p) > cfg.tol_merge);
        if ambiguous {
            return ChartOutcome::Retry;
        }
        candidates.push((sys.polish(matvec(u, &p)), k));
    }

    let weights: Vec<usize> = candidates.iter().map(|c| c.1).collect();
    let groups = cluster(
        |a, b| linalg::projective_distance(&candidates[a].0, &candidates[b].0),
        &weights,
        cfg.tol_merge,
        |grp| sys.residual(&centroid(grp.iter().map(|&j| &candidates[j].0))) <= cfg.tol_zero,
    );
    let mut out = Vec::with_capacity(groups.len());
    for grp in groups {
        let mult: usize = grp.iter().map(|&j| candidates[j].1).sum();
        let p = if grp.len() == 1 {
            candidates[grp[0]].0
        } else {
            centroid(grp.iter().map(|&j| &candidates[j].0))
        };
        if sys.residual(&p) > CHART_RESIDUAL {
            return ChartOutcome::Retry;
        }
        match ProjPoint::new(p) {
            Ok(q) => out.push((q, mult)),
            Err(_) => return ChartOutcome::Retry,
        }
    }
    if out.iter().map(|x| x.1).sum::<usize>() != (m * n) as usize {
        return ChartOutcome::Retry;
    }
    out.sort_by(|a, b| a.0.lex_cmp(&b.0));
    ChartOutcome::Solved(out)
}

/// Mean of projective points, each taken with its largest coordinate scaled to 1
/// in the chart of the first point.
pub(crate) fn centroid<'a>(pts: impl Iterator<Item = &'a Vec3>) -> Vec3 {
    let pts: Vec<&Vec3> = pts.collect();
    let first = ProjPoint::new(*pts[0]).expect("nonzero point");
    let k = first.coords().iter().position(|z| *z == linalg::ONE).unwrap_or(0);
    let mut acc = [ZERO; 3];
    for p in &pts {
        for i in 0..3 {
            acc[i] += p[i] / p[k];
        }
    }
    let n = pts.len() as f64;
    [acc[0] / n, acc[1] / n, acc[2] / n]
}

/// Intersection points of two plane curves with multiplicities summing to
/// `deg f · deg g`.
///
/// Each attempt applies a seeded random special-unitary change of coordinates,
/// eliminates the third variable through the Sylvester resultant, solves the
/// resulting binary form, recovers the third coordinate on each fiber line, and
/// polishes with Newton's method on the original pair.
pub fn common_zeros(f: &TernaryForm, g: &TernaryForm, cfg: &SolverConfig) -> Result<Vec<(ProjPoint, usize)>> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::CommonComponent);
    }
    if f.degree() == 0 || g.degree() == 0 {
        return Ok(Vec::new());
    }
    let (f, _) = f.normalized();
    let (g, _) = g.normalized();
    let sys = PolySystem::new(&[&f, &g]);
    let mut rng = rng_for(cfg.seed, CHART_STREAM);
    let attempts = cfg.chart_retries.max(1);
    for _ in 0..attempts {
        let u = random_su3(&mut rng);
        match try_chart(&f, &g, &u, &sys, cfg) {
            ChartOutcome::Solved(v) => return Ok(v),
            ChartOutcome::CommonComponent => return Err(Error::CommonComponent),
            ChartOutcome::Retry => continue,
        }
    }
    Err(Error::SolverFailure { attempts })
}
