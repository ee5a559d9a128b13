//! The cubic net `ψ(a) = a² ∧ a`, the covariant cubics attached to idempotents,
//! the Jacobian sextic, and recovery of the quartic `f` with `f∘ψ = λ·J²`.
//!
//! `Λ²C³` is identified with `(C³)*` through `⟨ψ(a), b⟩ = det[a² | a | b]`, so
//! the components of `ψ` are `G_i(a) = det[a² | a | e_i] = (a² × a)_i`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::forms::{jacobian_det, monomials, ProjPoint, TernaryForm};
use crate::linalg::{self, Nullity, Vec3, C, ONE, ZERO};

/// Singular-value ratio that separates the nullspace from the rest.
pub const NULLSPACE_RATIO: f64 = 1e-6;

/// The three cubics `G_i(a) = det[a² | a | e_i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicNet {
    g: [TernaryForm; 3],
}

impl CubicNet {
    pub fn components(&self) -> &[TernaryForm; 3] {
        &self.g
    }

    pub fn eval(&self, a: &Vec3) -> Vec3 {
        [self.g[0].eval(a), self.g[1].eval(a), self.g[2].eval(a)]
    }

    /// `ψ*(ℓ)`: the cubic `a ↦ ⟨ψ(a), ℓ⟩ = det[a² | a | ℓ]`.
    pub fn contract(&self, l: &Vec3) -> TernaryForm {
        let mut out = TernaryForm::zero(3);
        for (gk, lk) in self.g.iter().zip(l) {
            out = &out + &gk.scale(*lk);
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.g.iter().map(|g| g.max_abs()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.g.iter().all(|g| g.is_zero())
    }
}

/// The squaring map `a ↦ a∘a` as three quadratic forms.
pub fn square_forms(alg: &Algebra) -> [TernaryForm; 3] {
    std::array::from_fn(|i| {
        let mut s = TernaryForm::zero(2);
        for j in 0..3 {
            for k in j..3 {
                let mut e = [0u32; 3];
                e[j] += 1;
                e[k] += 1;
                let w = if j == k { 1.0 } else { 2.0 };
                s = &s + &TernaryForm::monomial(e, alg.constant(i, j, k) * w);
            }
        }
        s
    })
}

pub fn psi_net(alg: &Algebra) -> CubicNet {
    let s = square_forms(alg);
    let x: [TernaryForm; 3] = std::array::from_fn(TernaryForm::variable);
    let g = std::array::from_fn(|i| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        &(&s[j] * &x[k]) - &(&s[k] * &x[j])
    });
    CubicNet { g }
}

/// `Q_i(a) = det[a² | a | a_i]`.
pub fn covariant_cubic_qi(alg: &Algebra, a_i: &Vec3) -> TernaryForm {
    psi_net(alg).contract(a_i)
}

/// `Q_ij(a) = det[a² | a | (a_i − a_j)²]`.
pub fn covariant_cubic_qij(alg: &Algebra, a_i: &Vec3, a_j: &Vec3) -> TernaryForm {
    let d = [a_i[0] - a_j[0], a_i[1] - a_j[1], a_i[2] - a_j[2]];
    psi_net(alg).contract(&alg.square(&d))
}

/// The unsquared Jacobian sextic `J = det(∂G_i/∂a_j)`.
pub fn jacobian_curve(alg: &Algebra) -> TernaryForm {
    jacobian_det(psi_net(alg).components()).expect("net components are cubics")
}

/// The quartic on the dual plane recovered from `f∘G̃ = λ·J̃²`, where
/// `G̃ = G / scale_G` and `J̃ = J / scale_J` (with `J` computed from the raw net).
/// In raw terms `f∘G = λ · scale_G⁴ / scale_J² · J²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuarticCurve {
    #[serde(flatten)]
    pub form: TernaryForm,
    pub lambda: C,
    #[serde(rename = "scale_G")]
    pub scale_g: f64,
    #[serde(rename = "scale_J")]
    pub scale_j: f64,
    /// Coefficientwise `max|f∘G̃ − λJ̃²|` relative to the larger side.
    pub residual: f64,
    /// Smallest over second-smallest singular value of the linear system.
    pub nullspace_gap: f64,
}

impl QuarticCurve {
    /// The relation constant for the unscaled net and sextic.
    pub fn raw_lambda(&self) -> C {
        self.lambda * self.scale_g.powi(4) / (self.scale_j * self.scale_j)
    }
}

/// Coefficientwise residual of `f∘G − λJ²` relative to the larger side.
pub fn gamma_residual(f: &TernaryForm, g: &[TernaryForm; 3], lambda: C, j: &TernaryForm) -> f64 {
    let lhs = f.pullback(g).expect("net components share degree");
    let rhs = (j * j).scale(lambda);
    let scale = lhs.max_abs().max(rhs.max_abs());
    if scale == 0.0 {
        return f64::MAX;
    }
    (&lhs - &rhs).max_abs() / scale
}

/// Solves the 91×16 homogeneous system for the quartic coefficients and `λ`.
pub fn recover_quartic(alg: &Algebra) -> Result<QuarticCurve> {
    let net = psi_net(alg);
    let scale_g = net.max_abs();
    if scale_g == 0.0 {
        return Err(Error::DegenerateAlgebra);
    }
    let j_raw = jacobian_det(net.components()).expect("cubics");
    let scale_j = j_raw.max_abs();
    if scale_j == 0.0 {
        return Err(Error::DegenerateAlgebra);
    }
    let inv_g = C::new(1.0 / scale_g, 0.0);
    let g: [TernaryForm; 3] = std::array::from_fn(|i| net.components()[i].scale(inv_g));
    let j = j_raw.scale(C::new(1.0 / scale_j, 0.0));
    let j2 = &j * &j;

    // Powers G̃_k^e, e ≤ 4, shared by all 15 monomial pullbacks.
    let pows: Vec<Vec<TernaryForm>> = g
        .iter()
        .map(|gk| {
            let mut v = vec![TernaryForm::constant(ONE)];
            for e in 1..=4 {
                let next = &v[e - 1] * gk;
                v.push(next);
            }
            v
        })
        .collect();
    let mons = monomials(4);
    let rows = j2.coeffs().len();
    let mut m = DMatrix::<C>::zeros(rows, mons.len() + 1);
    for (col, e) in mons.iter().enumerate() {
        let term = &(&pows[0][e[0] as usize] * &pows[1][e[1] as usize]) * &pows[2][e[2] as usize];
        for (r, c) in term.coeffs().iter().enumerate() {
            m[(r, col)] = *c;
        }
    }
    for (r, c) in j2.coeffs().iter().enumerate() {
        m[(r, mons.len())] = -c;
    }
    // Unit columns: monomial pullbacks differ in size by orders of magnitude
    // once the net is moved by an ill-conditioned linear change.
    let norms: Vec<f64> = (0..m.ncols()).map(|c| m.column(c).norm()).collect();
    if norms.contains(&0.0) {
        return Err(Error::DegenerateAlgebra);
    }
    for (c, n) in norms.iter().enumerate() {
        m.column_mut(c).unscale_mut(*n);
    }
    let (v, gap) = match linalg::null_vector(&m, NULLSPACE_RATIO) {
        Nullity::Zero { .. } => return Err(Error::InconsistentSystem),
        Nullity::Many => return Err(Error::DegenerateAlgebra),
        Nullity::One { vector, gap_ratio } => {
            if gap_ratio >= NULLSPACE_RATIO {
                return Err(Error::DegenerateAlgebra);
            }
            let v: Vec<C> = vector.iter().zip(&norms).map(|(z, n)| z / n).collect();
            (v, gap_ratio)
        }
    };
    let d = linalg::canonical_divisor(&v[..mons.len()]).ok_or(Error::DegenerateAlgebra)?;
    let coeffs: Vec<C> = v[..mons.len()].iter().map(|z| z / d).collect();
    let lambda = v[mons.len()] / d;
    let form = TernaryForm::from_coeffs(4, coeffs)?;
    let residual = gamma_residual(&form, &g, lambda, &j);
    Ok(QuarticCurve {
        form,
        lambda,
        scale_g,
        scale_j,
        residual,
        nullspace_gap: gap,
    })
}

fn unit_point(v: &Vec3) -> Vec3 {
    match ProjPoint::new(*v) {
        Ok(p) => *p.coords(),
        Err(_) => [ZERO; 3],
    }
}

/// Vanishing and singularity data of `Q_i` for one idempotent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubicQiCheck {
    pub index: usize,
    /// Max of `|Q̂_i|` over the seven points (unit-max coefficients and coordinates).
    pub max_vanishing: f64,
    /// `|∇Q̂_i(a_i)|`.
    pub gradient_norm: f64,
}

/// Vanishing and line-splitting data of `Q_ij` for one pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubicQijCheck {
    pub i: usize,
    pub j: usize,
    pub max_vanishing: f64,
    /// Max coefficient of `Q̂_ij(t_i a_i + t_j a_j)` as a binary cubic.
    pub line_restriction: f64,
    /// Max coefficient of the remainder of `Q̂_ij` modulo `a_i × a_j`.
    pub remainder: f64,
    /// Max of the normalized quotient conic over the other five points.
    pub conic_vanishing: f64,
}

/// Runs the `Q_i` checks for every idempotent representative.
pub fn qi_checks(alg: &Algebra, reps: &[Vec3]) -> Vec<CubicQiCheck> {
    let pts: Vec<Vec3> = reps.iter().map(unit_point).collect();
    reps.iter()
        .enumerate()
        .map(|(i, a)| {
            let (q, _) = covariant_cubic_qi(alg, a).normalized();
            let max_vanishing = pts.iter().map(|p| q.eval(p).norm()).fold(0.0, f64::max);
            let grad: Vec<C> = q.gradient().iter().map(|d| d.eval(&pts[i])).collect();
            CubicQiCheck {
                index: i,
                max_vanishing,
                gradient_norm: linalg::norm(&grad),
            }
        })
        .collect()
}

/// Runs the `Q_ij` checks for every pair `i < j`.
pub fn qij_checks(alg: &Algebra, reps: &[Vec3]) -> Result<Vec<CubicQijCheck>> {
    let pts: Vec<Vec3> = reps.iter().map(unit_point).collect();
    let units: Vec<Vec3> = reps
        .iter()
        .map(|a| {
            let n = linalg::norm(a);
            [a[0] / n, a[1] / n, a[2] / n]
        })
        .collect();
    let mut out = Vec::new();
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            let (q, _) = covariant_cubic_qij(alg, &reps[i], &reps[j]).normalized();
            let max_vanishing = pts.iter().map(|p| q.eval(p).norm()).fold(0.0, f64::max);
            let line_restriction = q.restrict_to_line(&units[i], &units[j])?.max_abs();
            let l = linalg::cross(&pts[i], &pts[j]);
            let lmax = linalg::max_abs(&l);
            let l = [l[0] / lmax, l[1] / lmax, l[2] / lmax];
            let (quot, rem) = q.divide_by_linear(&l)?;
            let (conic, _) = quot.normalized();
            let conic_vanishing = pts
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i && *k != j)
                .map(|(_, p)| conic.eval(p).norm())
                .fold(0.0, f64::max);
            out.push(CubicQijCheck {
                i,
                j,
                max_vanishing,
                line_restriction,
                remainder: rem.max_abs(),
                conic_vanishing,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{eta0, random_traceless};
    use crate::sampling::{gaussian_vec3, rng_for};

    fn orbit() -> Vec<Vec3> {
        (0..7)
            .map(|k| {
                let th = C::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 7.0);
                [th, th.powu(2), th.powu(4)]
            })
            .collect()
    }

    #[test]
    fn psi_of_eta0_at_e1() {
        let net = psi_net(&eta0());
        let v = net.eval(&[ONE, ZERO, ZERO]);
        assert_eq!(v, [ZERO, ZERO, -ONE]);
    }

    #[test]
    fn syzygy_holds() {
        for seed in 0..5 {
            let net = psi_net(&random_traceless(seed));
            let x: [TernaryForm; 3] = std::array::from_fn(TernaryForm::variable);
            let mut s = TernaryForm::zero(4);
            for (xi, gi) in x.iter().zip(net.components()) {
                s = &s + &(xi * gi);
            }
            assert!(s.max_abs() < 1e-12 * net.max_abs());
        }
    }

    #[test]
    fn net_vanishes_on_eta0_orbit() {
        let net = psi_net(&eta0());
        for p in orbit() {
            assert!(linalg::max_abs(&net.eval(&p)) < 1e-10);
        }
    }

    #[test]
    fn qi_has_a_double_point_at_its_idempotent() {
        let alg = eta0();
        let reps = orbit();
        for row in qi_checks(&alg, &reps) {
            assert!(row.max_vanishing < 1e-9);
            assert!(row.gradient_norm < 1e-8);
        }
        // Expansion Q_1(a_1 + t b): t^0 and t^1 coefficients vanish.
        let q = covariant_cubic_qi(&alg, &reps[1]);
        let mut rng = rng_for(51, 0);
        for _ in 0..10 {
            let b = gaussian_vec3(&mut rng);
            let r = q.restrict_to_line(&reps[1], &b).unwrap();
            // coeffs[k] multiplies s^k t^(3-k); s is the a_1 direction.
            assert!(r.coeffs()[3].norm() < 1e-12);
            assert!(r.coeffs()[2].norm() < 1e-12);
        }
    }

    #[test]
    fn qij_contains_the_line() {
        let alg = eta0();
        for row in qij_checks(&alg, &orbit()).unwrap() {
            assert!(row.max_vanishing < 1e-9, "{row:?}");
            assert!(row.line_restriction < 1e-9, "{row:?}");
            assert!(row.remainder < 1e-8, "{row:?}");
            assert!(row.conic_vanishing < 1e-8, "{row:?}");
        }
    }

    #[test]
    fn jacobian_of_eta0_is_a_nonzero_sextic() {
        let j = jacobian_curve(&eta0());
        assert_eq!(j.degree(), 6);
        assert!(j.max_abs() > 0.5);
    }

    #[test]
    fn zero_algebra_is_degenerate() {
        assert_eq!(
            recover_quartic(&Algebra::zero()),
            Err(Error::DegenerateAlgebra)
        );
    }

    #[test]
    fn eta0_quartic_is_klein() {
        let q = recover_quartic(&eta0()).unwrap();
        let f = &q.form;
        let support = [[3, 0, 1], [1, 3, 0], [0, 1, 3]];
        for (e, c) in f.terms() {
            if support.contains(&e) {
                assert!((c - ONE).norm() < 1e-8, "{e:?}: {c}");
            } else {
                assert!(c.norm() < 1e-8, "{e:?}: {c}");
            }
        }
        assert!(q.lambda.norm() > 1e-3);
        assert!(q.residual < 1e-8);
    }

    #[test]
    fn quartic_is_scale_invariant() {
        let alg = random_traceless(6);
        let a = recover_quartic(&alg).unwrap();
        let b = recover_quartic(&alg.scale(C::new(0.3, -2.0))).unwrap();
        assert!(linalg::projective_distance(a.form.coeffs(), b.form.coeffs()) < 1e-8);
    }

    #[test]
    fn gamma_identity_for_random_algebras() {
        for seed in 0..5 {
            let alg = random_traceless(seed);
            let q = recover_quartic(&alg).unwrap();
            assert!(q.residual < 1e-8);
            let net = psi_net(&alg);
            let raw = gamma_residual(&q.form, net.components(), q.raw_lambda(), &jacobian_curve(&alg));
            assert!(raw < 1e-8, "raw residual {raw}");
        }
    }
}
