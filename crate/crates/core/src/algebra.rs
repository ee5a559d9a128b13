//! Commutative algebra structures on `C^3`.
//!
//! An algebra is stored as structure constants `c[i][j][k]` with
//! `(a∘b)_i = Σ_{j,k} c[i][j][k] a_j b_k`, kept symmetric in `(j, k)`.
//! Equivalently it is an element of `C^3 ⊗ S²(C^3)*`, written as a
//! [`V12Tensor`] with one quadratic form in `x1, x2, x3` per basis vector.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{monomial_index, monomials, TernaryForm};
use crate::linalg::{self, Mat3, Vec3, C, ONE, ZERO};
use crate::sampling::{complex_gaussian, rng_for};

const ALGEBRA_STREAM: u64 = 0x0a16_eb4a;

/// Tolerance for structure-constant symmetry and the trace-free flag on load.
const LOAD_TOL: f64 = 1e-12;

/// Degree-2 monomial index of `x_j x_k`.
fn quad_index(j: usize, k: usize) -> usize {
    let mut e = [0u32; 3];
    e[j] += 1;
    e[k] += 1;
    monomial_index(e)
}

/// Structure constants of a commutative product on `C^3`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AlgebraRepr", into = "AlgebraRepr")]
pub struct Algebra {
    c: [[[C; 3]; 3]; 3],
}

#[derive(Serialize, Deserialize)]
struct AlgebraRepr {
    c: Vec<Vec<Vec<C>>>,
    traceless: bool,
}

impl TryFrom<AlgebraRepr> for Algebra {
    type Error = Error;
    fn try_from(r: AlgebraRepr) -> Result<Self> {
        let shape_ok = r.c.len() == 3 && r.c.iter().all(|m| m.len() == 3 && m.iter().all(|row| row.len() == 3));
        if !shape_ok {
            return Err(Error::InvalidInput("structure constants must be 3x3x3".into()));
        }
        let mut c = [[[ZERO; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    c[i][j][k] = r.c[i][j][k];
                }
            }
        }
        let alg = Algebra::from_full(c)?;
        if r.traceless {
            let t = linalg::norm(&alg.trace_form());
            if t > LOAD_TOL * alg.max_abs().max(1.0) {
                return Err(Error::NotTraceFree(t));
            }
        }
        Ok(alg)
    }
}

impl From<Algebra> for AlgebraRepr {
    fn from(a: Algebra) -> Self {
        let traceless = a.is_traceless(LOAD_TOL);
        AlgebraRepr {
            c: a.c.iter().map(|m| m.iter().map(|row| row.to_vec()).collect()).collect(),
            traceless,
        }
    }
}

impl Algebra {
    pub fn zero() -> Self {
        Self {
            c: [[[ZERO; 3]; 3]; 3],
        }
    }

    /// Accepts a full 3×3×3 array; the `(j, k)` symmetry must hold to `1e-12`
    /// (relative to the largest constant), and is then enforced exactly.
    pub fn from_full(c: [[[C; 3]; 3]; 3]) -> Result<Self> {
        let scale = c.iter().flatten().flatten().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
        if c.iter().flatten().flatten().any(|z| !z.is_finite()) {
            return Err(Error::InvalidInput("non-finite structure constant".into()));
        }
        let mut out = c;
        for i in 0..3 {
            for j in 0..3 {
                for k in j + 1..3 {
                    let gap = (c[i][j][k] - c[i][k][j]).norm();
                    if gap > LOAD_TOL * scale {
                        return Err(Error::InvalidInput(format!(
                            "structure constants not symmetric at ({i},{j},{k}): gap {gap:e}"
                        )));
                    }
                    out[i][k][j] = c[i][j][k];
                }
            }
        }
        Ok(Self { c: out })
    }

    /// From the 18 independent constants, ordered by output index `i` and then
    /// by the degree-2 monomial `x_j x_k` (j ≤ k) in storage order.
    pub fn from_independent(v: &[C; 18]) -> Self {
        let mut c = [[[ZERO; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    c[i][j][k] = v[6 * i + quad_index(j, k)];
                }
            }
        }
        Self { c }
    }

    pub fn independent(&self) -> [C; 18] {
        let mut v = [ZERO; 18];
        for i in 0..3 {
            for j in 0..3 {
                for k in j..3 {
                    v[6 * i + quad_index(j, k)] = self.c[i][j][k];
                }
            }
        }
        v
    }

    /// `c[i][j][k]` (0-based).
    pub fn constant(&self, i: usize, j: usize, k: usize) -> C {
        self.c[i][j][k]
    }

    pub fn constants(&self) -> &[[[C; 3]; 3]; 3] {
        &self.c
    }

    pub fn max_abs(&self) -> f64 {
        linalg::max_abs(&self.independent())
    }

    pub fn multiply(&self, a: &Vec3, b: &Vec3) -> Vec3 {
        // Summed over j ≤ k with symmetric pair products, so the result is
        // bitwise symmetric in (a, b).
        let mut out = [ZERO; 3];
        for (i, o) in out.iter_mut().enumerate() {
            for j in 0..3 {
                *o += self.c[i][j][j] * (a[j] * b[j]);
                for k in j + 1..3 {
                    *o += self.c[i][j][k] * (a[j] * b[k] + a[k] * b[j]);
                }
            }
        }
        out
    }

    pub fn square(&self, a: &Vec3) -> Vec3 {
        self.multiply(a, a)
    }

    /// The contraction `T_k = Σ_i c[i][i][k]`.
    pub fn trace_form(&self) -> Vec3 {
        let mut t = [ZERO; 3];
        for (k, tk) in t.iter_mut().enumerate() {
            *tk = (0..3).map(|i| self.c[i][i][k]).sum();
        }
        t
    }

    pub fn is_traceless(&self, tol: f64) -> bool {
        linalg::norm(&self.trace_form()) <= tol * self.max_abs().max(1.0)
    }

    /// Orthogonal-style projection onto the trace-free subspace:
    /// `c'[i][j][k] = c[i][j][k] - (δ_ij T_k + δ_ik T_j) / 4`.
    pub fn project_traceless(&self) -> Self {
        let t = self.trace_form();
        let mut c = self.c;
        for i in 0..3 {
            for k in 0..3 {
                c[i][i][k] -= t[k] / 4.0;
                c[i][k][i] -= t[k] / 4.0;
            }
        }
        Self { c }
    }

    /// Transport of structure by `g ∈ SL3`: `(g·η)(ga, gb) = g·η(a, b)`.
    pub fn act(&self, g: &Mat3) -> Result<Self> {
        let det = linalg::det3(g);
        let gap = (det - ONE).norm();
        if gap > 1e-10 {
            return Err(Error::NotSpecialLinear(gap));
        }
        let gi = linalg::inv3(g).ok_or(Error::NotSpecialLinear(gap))?;
        // c'[i][j][k] = Σ g[i][p] c[p][q][r] gi[q][j] gi[r][k], contracted one index at a time.
        let mut t1 = [[[ZERO; 3]; 3]; 3];
        for i in 0..3 {
            for q in 0..3 {
                for r in 0..3 {
                    t1[i][q][r] = (0..3).map(|p| g[i][p] * self.c[p][q][r]).sum();
                }
            }
        }
        let mut t2 = [[[ZERO; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for r in 0..3 {
                    t2[i][j][r] = (0..3).map(|q| t1[i][q][r] * gi[q][j]).sum();
                }
            }
        }
        let mut c = [[[ZERO; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    c[i][j][k] = (0..3).map(|r| t2[i][j][r] * gi[r][k]).sum();
                }
            }
        }
        // Restore exact symmetry lost to rounding.
        for m in c.iter_mut() {
            for j in 0..3 {
                for k in j + 1..3 {
                    let avg = (m[j][k] + m[k][j]) / 2.0;
                    m[j][k] = avg;
                    m[k][j] = avg;
                }
            }
        }
        Ok(Self { c })
    }

    /// Scaled so the largest constant has modulus 1 and the first non-negligible
    /// independent constant is real positive.
    pub fn normalized(&self) -> Option<Self> {
        let v = self.independent();
        let d = linalg::canonical_divisor(&v)?;
        let scaled: Vec<C> = v.iter().map(|z| z / d).collect();
        Some(Self::from_independent(&scaled.try_into().unwrap()))
    }

    pub fn scale(&self, s: C) -> Self {
        let v: Vec<C> = self.independent().iter().map(|z| z * s).collect();
        Self::from_independent(&v.try_into().unwrap())
    }

    /// Projective distance between the structure-constant vectors.
    pub fn projective_distance(&self, other: &Self) -> f64 {
        linalg::projective_distance(&self.independent(), &other.independent())
    }
}

/// The 3×18 matrix of the trace conditions on the independent constants.
pub fn trace_matrix() -> [[C; 18]; 3] {
    let mut m = [[ZERO; 18]; 3];
    for (k, row) in m.iter_mut().enumerate() {
        for i in 0..3 {
            row[6 * i + quad_index(i, k)] += ONE;
        }
    }
    m
}

/// Element of `C^3 ⊗ S²(C^3)*`: `t[i][m]` is the coefficient of `e_i ⊗ x^m` with
/// `m` running over the degree-2 monomials in storage order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct V12Tensor {
    pub t: [[C; 6]; 3],
}

/// Element of `S^a(C^3) ⊗ S^b(C^3)*`: one form in the `e` variables per
/// monomial of degree `b` in the `x` variables.
#[derive(Debug, Clone)]
struct BiForm {
    x_degree: u32,
    parts: Vec<TernaryForm>,
}

impl BiForm {
    /// `Δ = Σ_m ∂/∂e_m ⊗ ∂/∂x_m`.
    fn delta(&self) -> Self {
        assert!(self.x_degree > 0);
        let e_degree = self.parts[0].degree();
        assert!(e_degree > 0);
        let xs = monomials(self.x_degree);
        let mut parts = vec![TernaryForm::zero(e_degree - 1); monomials(self.x_degree - 1).len()];
        for (xe, p) in xs.iter().zip(&self.parts) {
            for m in 0..3 {
                if xe[m] == 0 {
                    continue;
                }
                let mut lower = *xe;
                lower[m] -= 1;
                let slot = monomial_index(lower);
                let term = p.diff(m).scale(C::new(xe[m] as f64, 0.0));
                parts[slot] = &parts[slot] + &term;
            }
        }
        Self {
            x_degree: self.x_degree - 1,
            parts,
        }
    }
}

impl V12Tensor {
    pub fn zero() -> Self {
        Self { t: [[ZERO; 6]; 3] }
    }

    /// `μ(t, a, b) = Δ²(t · a · b)`, where `a` and `b` are multiplied into the
    /// `S(C^3)` factor and `Δ` is applied twice.
    pub fn mu_apply(&self, a: &Vec3, b: &Vec3) -> Vec3 {
        let ab = &TernaryForm::linear(a) * &TernaryForm::linear(b);
        let parts = (0..6)
            .map(|m| {
                let mut acc = TernaryForm::zero(3);
                for i in 0..3 {
                    if self.t[i][m] != ZERO {
                        acc = &acc + &(&TernaryForm::variable(i) * &ab).scale(self.t[i][m]);
                    }
                }
                acc
            })
            .collect();
        let bi = BiForm { x_degree: 2, parts };
        let out = bi.delta().delta();
        let v = out.parts[0].coeffs();
        [v[0], v[1], v[2]]
    }

    /// `Δt ∈ (C^3)*`: the coefficient of `x_k` is half the trace `T_k` of the
    /// associated algebra.
    pub fn contraction(&self) -> Vec3 {
        let parts = (0..6)
            .map(|m| {
                let mut acc = TernaryForm::zero(1);
                for i in 0..3 {
                    acc = &acc + &TernaryForm::variable(i).scale(self.t[i][m]);
                }
                acc
            })
            .collect();
        let out = BiForm { x_degree: 2, parts }.delta();
        // Degree (0, 1): one constant per x_k.
        let mut w = [ZERO; 3];
        for (k, p) in out.parts.iter().enumerate() {
            w[k] = p.coeffs()[0];
        }
        w
    }
}

/// The algebra whose product is `μ(t, ·, ·)`; on trace-free tensors this is
/// `c[i][j][j] = 4 t[i][x_j²]` and `c[i][j][k] = 2 t[i][x_j x_k]` for `j ≠ k`.
pub fn algebra_from_v12(t: &V12Tensor) -> Algebra {
    let mut c = [[[ZERO; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let w = if j == k { 4.0 } else { 2.0 };
                c[i][j][k] = t.t[i][quad_index(j, k)] * w;
            }
        }
    }
    Algebra { c }
}

/// Inverse of [`algebra_from_v12`]; defined on trace-free algebras only.
pub fn v12_from_algebra(alg: &Algebra) -> Result<V12Tensor> {
    if !alg.is_traceless(1e-12) {
        return Err(Error::NotTraceFree(linalg::norm(&alg.trace_form())));
    }
    let mut t = [[ZERO; 6]; 3];
    for (i, row) in t.iter_mut().enumerate() {
        for j in 0..3 {
            for k in j..3 {
                let w = if j == k { 4.0 } else { 2.0 };
                row[quad_index(j, k)] = alg.c[i][j][k] / w;
            }
        }
    }
    Ok(V12Tensor { t })
}

/// `(e1 ⊗ x3² + e2 ⊗ x1² + e3 ⊗ x2²) / 4`.
pub fn eta0_tensor() -> V12Tensor {
    let q = C::new(0.25, 0.0);
    let mut t = V12Tensor::zero();
    t.t[0][quad_index(2, 2)] = q;
    t.t[1][quad_index(0, 0)] = q;
    t.t[2][quad_index(1, 1)] = q;
    t
}

/// The fixture algebra with `e1² = e2`, `e2² = e3`, `e3² = e1` and all mixed
/// products zero. Its generalized idempotents are `θe1 + θ²e2 + θ⁴e3`, `θ⁷ = 1`.
pub fn eta0() -> Algebra {
    let mut c = [[[ZERO; 3]; 3]; 3];
    c[1][0][0] = ONE;
    c[2][1][1] = ONE;
    c[0][2][2] = ONE;
    Algebra { c }
}

/// Standard complex Gaussian independent constants, projected to trace zero.
pub fn random_traceless(seed: u64) -> Algebra {
    let mut rng = rng_for(seed, ALGEBRA_STREAM);
    let v: [C; 18] = std::array::from_fn(|_| complex_gaussian(&mut rng));
    Algebra::from_independent(&v).project_traceless()
}

/// Real standard Gaussian independent constants, projected to trace zero.
pub fn random_real_traceless(seed: u64) -> Algebra {
    let mut rng = rng_for(seed, ALGEBRA_STREAM);
    let v: [C; 18] = std::array::from_fn(|_| C::new(complex_gaussian(&mut rng).re * std::f64::consts::SQRT_2, 0.0));
    Algebra::from_independent(&v).project_traceless()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{gaussian_vec3, random_sl3};
    use nalgebra::DMatrix;
    use proptest::prelude::*;

    fn e(i: usize) -> Vec3 {
        let mut v = [ZERO; 3];
        v[i] = ONE;
        v
    }

    fn max_gap(a: &Vec3, b: &Vec3) -> f64 {
        (0..3).map(|i| (a[i] - b[i]).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn eta0_multiplication_table() {
        let a = eta0();
        assert_eq!(a.multiply(&e(0), &e(0)), e(1));
        assert_eq!(a.multiply(&e(1), &e(1)), e(2));
        assert_eq!(a.multiply(&e(2), &e(2)), e(0));
        for (i, j) in [(0, 1), (1, 2), (2, 0)] {
            assert_eq!(a.multiply(&e(i), &e(j)), [ZERO; 3]);
        }
        assert_eq!(a.trace_form(), [ZERO; 3]);
    }

    #[test]
    fn eta0_fixes_the_mu7_orbit() {
        let a = eta0();
        for k in 0..7 {
            let th = C::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 7.0);
            let v = [th, th.powu(2), th.powu(4)];
            assert!(max_gap(&a.square(&v), &v) < 1e-14);
        }
    }

    #[test]
    fn bilinearity() {
        let mut rng = rng_for(41, 0);
        let alg = random_traceless(3);
        let a = gaussian_vec3(&mut rng);
        let b = gaussian_vec3(&mut rng);
        let a2 = [a[0] * 2.0, a[1] * 2.0, a[2] * 2.0];
        let lhs = alg.multiply(&a2, &b);
        let rhs = alg.multiply(&a, &b);
        assert!(max_gap(&lhs, &[rhs[0] * 2.0, rhs[1] * 2.0, rhs[2] * 2.0]) < 1e-14);
        assert_eq!(alg.multiply(&a, &b), alg.multiply(&b, &a));
    }

    #[test]
    fn trace_of_single_constant() {
        let mut c = [[[ZERO; 3]; 3]; 3];
        c[0][0][0] = ONE;
        let a = Algebra::from_full(c).unwrap();
        assert_eq!(a.trace_form(), [ONE, ZERO, ZERO]);
        let p = a.project_traceless();
        let h = C::new(0.5, 0.0);
        let q = C::new(-0.25, 0.0);
        assert_eq!(p.constant(0, 0, 0), h);
        assert_eq!(p.constant(1, 1, 0), q);
        assert_eq!(p.constant(1, 0, 1), q);
        assert_eq!(p.constant(2, 2, 0), q);
        assert_eq!(p.constant(2, 0, 2), q);
        assert!(linalg::norm(&p.trace_form()) < 1e-15);
    }

    #[test]
    fn projection_is_idempotent_and_fixes_eta0() {
        assert_eq!(eta0().project_traceless(), eta0());
        for seed in 0..50 {
            let mut rng = rng_for(seed, 9);
            let v: [C; 18] = std::array::from_fn(|_| complex_gaussian(&mut rng));
            let p = Algebra::from_independent(&v).project_traceless();
            let pp = p.project_traceless();
            let gap = linalg::max_abs(
                &p.independent().iter().zip(pp.independent()).map(|(a, b)| a - b).collect::<Vec<_>>(),
            );
            assert!(gap < 1e-14);
        }
    }

    #[test]
    fn mu_reproduces_eta0() {
        let mut t = V12Tensor::zero();
        t.t[1][quad_index(0, 0)] = ONE;
        assert_eq!(t.mu_apply(&e(0), &e(0)), [ZERO, C::new(4.0, 0.0), ZERO]);
        let mut t = V12Tensor::zero();
        t.t[0][quad_index(2, 2)] = ONE;
        assert_eq!(t.mu_apply(&e(0), &e(0)), [ZERO; 3]);

        let eta = eta0_tensor();
        let alg = eta0();
        for i in 0..3 {
            for j in 0..3 {
                assert!(max_gap(&eta.mu_apply(&e(i), &e(j)), &alg.multiply(&e(i), &e(j))) < 1e-15);
            }
        }
        assert_eq!(algebra_from_v12(&eta), alg);
        assert_eq!(v12_from_algebra(&alg).unwrap(), eta);
        assert_eq!(algebra_from_v12(&V12Tensor::zero()), Algebra::zero());
        assert_eq!(v12_from_algebra(&Algebra::zero()).unwrap(), V12Tensor::zero());
    }

    #[test]
    fn v12_requires_trace_free() {
        let mut c = [[[ZERO; 3]; 3]; 3];
        c[0][0][0] = ONE;
        assert!(matches!(
            v12_from_algebra(&Algebra::from_full(c).unwrap()),
            Err(Error::NotTraceFree(_))
        ));
    }

    #[test]
    fn contraction_is_half_the_trace() {
        for seed in 0..10 {
            let mut rng = rng_for(seed, 10);
            let v: [C; 18] = std::array::from_fn(|_| complex_gaussian(&mut rng));
            let alg = Algebra::from_independent(&v);
            let mut t = V12Tensor::zero();
            for i in 0..3 {
                for j in 0..3 {
                    for k in j..3 {
                        let w = if j == k { 4.0 } else { 2.0 };
                        t.t[i][quad_index(j, k)] = alg.constant(i, j, k) / w;
                    }
                }
            }
            let d = t.contraction();
            let tr = alg.trace_form();
            assert!(max_gap(&[d[0] * 2.0, d[1] * 2.0, d[2] * 2.0], &tr) < 1e-13);
        }
    }

    #[test]
    fn random_sampling_is_deterministic_and_spread() {
        assert_eq!(random_traceless(5), random_traceless(5));
        assert!(random_traceless(5).is_traceless(1e-12));
        let mut far = 0;
        for s in 0..100u64 {
            let a = random_traceless(s).independent();
            let b = random_traceless(s + 1000).independent();
            let gap = linalg::max_abs(&a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>());
            if gap > 0.1 {
                far += 1;
            }
        }
        assert_eq!(far, 100);
    }

    #[test]
    fn action_examples() {
        let alg = random_traceless(8);
        assert_eq!(alg.act(&linalg::identity()).unwrap(), alg);
        let th = C::from_polar(1.0, 2.0 * std::f64::consts::PI / 7.0);
        let mut torus = [[ZERO; 3]; 3];
        torus[0][0] = th;
        torus[1][1] = th.powu(2);
        torus[2][2] = th.powu(4);
        assert!(eta0().act(&torus).unwrap().projective_distance(&eta0()) < 1e-12);
        let gap = linalg::max_abs(
            &eta0().act(&torus).unwrap().independent().iter().zip(eta0().independent()).map(|(a, b)| a - b).collect::<Vec<_>>(),
        );
        assert!(gap < 1e-12);
        let mut cyc = [[ZERO; 3]; 3];
        cyc[1][0] = ONE;
        cyc[2][1] = ONE;
        cyc[0][2] = ONE;
        let moved = eta0().act(&cyc).unwrap();
        let gap = linalg::max_abs(
            &moved.independent().iter().zip(eta0().independent()).map(|(a, b)| a - b).collect::<Vec<_>>(),
        );
        assert!(gap < 1e-12);
        let mut bad = linalg::identity();
        bad[0][0] = C::new(2.0, 0.0);
        assert!(matches!(alg.act(&bad), Err(Error::NotSpecialLinear(_))));
    }

    #[test]
    fn trace_free_space_has_dimension_15() {
        let m = trace_matrix();
        let mat = DMatrix::<C>::from_fn(3, 18, |r, c| m[r][c]);
        assert_eq!(linalg::rank(&mat, 1e-12), 3);
        assert_eq!(linalg::nullspace_basis(&mat, 1e-12).len(), 15);
        let alg = random_traceless(2);
        let v = alg.independent();
        for row in m {
            let s: C = row.iter().zip(&v).map(|(a, b)| a * b).sum();
            assert!(s.norm() < 1e-14);
        }
    }

    #[test]
    fn json_round_trip_and_validation() {
        let alg = random_traceless(4);
        let s = serde_json::to_string(&alg).unwrap();
        assert!(s.contains(r#""traceless":true"#));
        let back: Algebra = serde_json::from_str(&s).unwrap();
        assert_eq!(back, alg);
        let mut c = *eta0().constants();
        c[0][1][2] = C::new(1e-6, 0.0);
        let bad = AlgebraRepr {
            c: c.iter().map(|m| m.iter().map(|r| r.to_vec()).collect()).collect(),
            traceless: true,
        };
        let txt = serde_json::to_string(&bad).unwrap();
        assert!(serde_json::from_str::<Algebra>(&txt).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn projection_kills_trace(seed in any::<u64>()) {
            let mut rng = rng_for(seed, 11);
            let v: [C; 18] = std::array::from_fn(|_| complex_gaussian(&mut rng));
            let p = Algebra::from_independent(&v).project_traceless();
            prop_assert!(linalg::norm(&p.trace_form()) < 1e-12);
        }

        #[test]
        fn action_is_a_group_action(seed in any::<u64>()) {
            let mut rng = rng_for(seed, 12);
            let g = random_sl3(&mut rng);
            let h = random_sl3(&mut rng);
            let alg = random_traceless(seed);
            let gh = linalg::matmul(&g, &h);
            // Renormalize det(gh) drift.
            let lhs = alg.act(&gh);
            let rhs = alg.act(&h).and_then(|x| x.act(&g)).unwrap();
            if let Ok(lhs) = lhs {
                let gap = linalg::max_abs(&lhs.independent().iter().zip(rhs.independent()).map(|(a, b)| a - b).collect::<Vec<_>>());
                prop_assert!(gap < 1e-10 * lhs.max_abs().max(1.0));
            }
        }

        #[test]
        fn transport_of_structure(seed in any::<u64>()) {
            let mut rng = rng_for(seed, 13);
            let g = random_sl3(&mut rng);
            let alg = random_traceless(seed);
            let moved = alg.act(&g).unwrap();
            let a = gaussian_vec3(&mut rng);
            let b = gaussian_vec3(&mut rng);
            let lhs = moved.multiply(&linalg::matvec(&g, &a), &linalg::matvec(&g, &b));
            let rhs = linalg::matvec(&g, &alg.multiply(&a, &b));
            prop_assert!(max_gap(&lhs, &rhs) < 1e-9 * (1.0 + linalg::norm(&rhs)));
        }

        #[test]
        fn mu_matches_algebra_on_trace_free_tensors(seed in any::<u64>()) {
            let alg = random_traceless(seed);
            let t = v12_from_algebra(&alg).unwrap();
            let back = algebra_from_v12(&t);
            let gap = linalg::max_abs(&back.independent().iter().zip(alg.independent()).map(|(a, b)| a - b).collect::<Vec<_>>());
            prop_assert!(gap < 1e-14);
            let mut rng = rng_for(seed, 14);
            for _ in 0..20 {
                let a = gaussian_vec3(&mut rng);
                let b = gaussian_vec3(&mut rng);
                prop_assert!(max_gap(&t.mu_apply(&a, &b), &alg.multiply(&a, &b)) < 1e-10);
            }
        }
    }
}
