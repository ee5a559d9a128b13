//! Small dense linear-algebra helpers over complex scalars.
//!
//! 3×3 work is done by hand on arrays; anything larger (SVD, determinants of
//! Sylvester matrices, companion eigenvalues) goes through `nalgebra`.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C = Complex64;
pub type Vec3 = [C; 3];
pub type Mat3 = [[C; 3]; 3];

pub const ZERO: C = C::new(0.0, 0.0);
pub const ONE: C = C::new(1.0, 0.0);

pub fn cross(u: &Vec3, v: &Vec3) -> Vec3 {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

/// Bilinear (not Hermitian) pairing.
pub fn dot(u: &Vec3, v: &Vec3) -> C {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

pub fn norm(v: &[C]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(v: &[C]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn det3(m: &Mat3) -> C {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Inverse via the adjugate; `None` when the determinant is exactly zero.
pub fn inv3(m: &Mat3) -> Option<Mat3> {
    let d = det3(m);
    if d == ZERO {
        return None;
    }
    let mut out = [[ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
            let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
            out[i][j] = (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]) / d;
        }
    }
    Some(out)
}

pub fn matvec(m: &Mat3, v: &Vec3) -> Vec3 {
    let mut out = [ZERO; 3];
    for i in 0..3 {
        out[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
    }
    out
}

pub fn matmul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn transpose(m: &Mat3) -> Mat3 {
    let mut out = [[ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = m[j][i];
        }
    }
    out
}

pub fn identity() -> Mat3 {
    let mut out = [[ZERO; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        row[i] = ONE;
    }
    out
}

/// Chordal (Fubini–Study) distance between two lines through the origin.
///
/// Computed as the norm of the component of `q̂` orthogonal to `p̂`, which equals
/// `sqrt(1 - |<p,q>|^2 / (|p|^2 |q|^2))` but keeps full precision near zero.
pub fn projective_distance(p: &[C], q: &[C]) -> f64 {
    assert_eq!(p.len(), q.len());
    let (np, nq) = (norm(p), norm(q));
    if np == 0.0 || nq == 0.0 {
        return 1.0;
    }
    let ip: C = p.iter().zip(q).map(|(a, b)| a.conj() * b).sum::<C>() / (np * nq);
    let r: f64 = p
        .iter()
        .zip(q)
        .map(|(a, b)| (b / nq - ip * a / np).norm_sqr())
        .sum();
    r.sqrt().min(1.0)
}

/// Divisor that makes the largest coefficient modulus 1 and the first
/// coefficient above `1e-9` of the maximum real and positive.
pub fn canonical_divisor(v: &[C]) -> Option<C> {
    let m = max_abs(v);
    if m == 0.0 || !m.is_finite() {
        return None;
    }
    let first = v.iter().find(|z| z.norm() > 1e-9 * m)?;
    Some(C::from_polar(m, first.arg()))
}

/// Singular values (descending) and the right singular vectors as columns.
pub fn svd_sorted(m: &DMatrix<C>) -> (Vec<f64>, DMatrix<C>) {
    let ncols = m.ncols();
    // Pad short-and-wide systems so that V is square.
    let padded = if m.nrows() < ncols {
        let mut p = DMatrix::<C>::zeros(ncols, ncols);
        p.view_mut((0, 0), (m.nrows(), ncols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^H");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sv = order.iter().map(|&k| svd.singular_values[k]).collect();
    let mut v = DMatrix::<C>::zeros(ncols, ncols);
    for (col, &k) in order.iter().enumerate() {
        for r in 0..ncols {
            v[(r, col)] = v_t[(k, r)].conj();
        }
    }
    (sv, v)
}

/// Outcome of a one-dimensional nullspace extraction.
#[derive(Debug, Clone)]
pub enum Nullity {
    /// The smallest singular value is not small: only the zero solution.
    Zero { ratio_to_largest: f64 },
    /// Exactly one small singular value.
    One {
        vector: Vec<C>,
        /// σ_min / σ_second.
        gap_ratio: f64,
    },
    /// No clear gap below the smallest singular value (or the zero matrix).
    Many,
}

/// Classifies the numerical nullspace of `m`. The smallest singular value is
/// "small" below `ratio_tol` times the largest; a single null direction also
/// needs σ_min / σ_second below `ratio_tol`.
pub fn null_vector(m: &DMatrix<C>, ratio_tol: f64) -> Nullity {
    let (sv, v) = svd_sorted(m);
    let n = sv.len();
    let largest = sv[0];
    if largest == 0.0 || n < 2 {
        return Nullity::Many;
    }
    let small = |s: f64| s <= ratio_tol * largest;
    if !small(sv[n - 1]) {
        return Nullity::Zero {
            ratio_to_largest: sv[n - 1] / largest,
        };
    }
    // The gap, not the size of σ_second, separates one null direction from two.
    if sv[n - 2] == 0.0 || sv[n - 1] >= ratio_tol * sv[n - 2] {
        return Nullity::Many;
    }
    Nullity::One {
        vector: v.column(n - 1).iter().copied().collect(),
        gap_ratio: sv[n - 1] / sv[n - 2],
    }
}

/// Orthonormal basis of the numerical nullspace.
pub fn nullspace_basis(m: &DMatrix<C>, ratio_tol: f64) -> Vec<Vec<C>> {
    let (sv, v) = svd_sorted(m);
    let largest = sv.first().copied().unwrap_or(0.0);
    let rank = sv.iter().filter(|&&s| s > ratio_tol * largest).count();
    (rank..v.ncols())
        .map(|k| v.column(k).iter().copied().collect())
        .collect()
}

/// Numerical rank relative to the largest singular value.
pub fn rank(m: &DMatrix<C>, ratio_tol: f64) -> usize {
    let (sv, _) = svd_sorted(m);
    let largest = sv.first().copied().unwrap_or(0.0);
    if largest == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > ratio_tol * largest).count()
}

/// Two vectors spanning `{ξ : Σ ℓ_i ξ_i = 0}`, orthonormal in the Hermitian sense.
pub fn annihilator_basis(ell: &Vec3) -> (Vec3, Vec3) {
    // The annihilator of ℓ under the bilinear pairing is the Hermitian
    // orthogonal complement of conj(ℓ).
    let n = norm(ell);
    let w: Vec3 = [ell[0].conj() / n, ell[1].conj() / n, ell[2].conj() / n];
    let mut basis: Vec<Vec3> = Vec::with_capacity(2);
    // Start from the standard basis vectors least aligned with w.
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| w[a].norm().total_cmp(&w[b].norm()));
    for &k in &order {
        let mut x = [ZERO; 3];
        x[k] = ONE;
        let mut against = vec![w];
        against.extend(basis.iter().copied());
        for b in &against {
            let ip: C = (0..3).map(|i| b[i].conj() * x[i]).sum();
            for i in 0..3 {
                x[i] -= ip * b[i];
            }
        }
        let nx = norm(&x);
        if nx > 1e-8 {
            basis.push([x[0] / nx, x[1] / nx, x[2] / nx]);
        }
        if basis.len() == 2 {
            break;
        }
    }
    (basis[0], basis[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn inverse_and_determinant_agree() {
        let m = [
            [c(2.0, 0.0), c(1.0, 1.0), c(0.0, 0.0)],
            [c(0.0, -1.0), c(3.0, 0.0), c(1.0, 0.0)],
            [c(1.0, 0.0), c(0.0, 0.0), c(1.0, 2.0)],
        ];
        let inv = inv3(&m).unwrap();
        let id = matmul(&m, &inv);
        for i in 0..3 {
            for j in 0..3 {
                let e = if i == j { ONE } else { ZERO };
                assert!((id[i][j] - e).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn distance_is_phase_invariant() {
        let p = [c(1.0, 2.0), c(0.5, 0.0), c(-1.0, 1.0)];
        let ph = C::from_polar(3.0, 0.7);
        let q: Vec<C> = p.iter().map(|z| z * ph).collect();
        assert!(projective_distance(&p, &q) < 1e-15);
        let e1 = [ONE, ZERO, ZERO];
        let e2 = [ZERO, ONE, ZERO];
        assert!((projective_distance(&e1, &e2) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn annihilator_is_orthogonal() {
        let ell = [c(0.3, 1.0), c(-2.0, 0.1), c(0.0, 0.7)];
        let (u, v) = annihilator_basis(&ell);
        assert!(dot(&ell, &u).norm() < 1e-14);
        assert!(dot(&ell, &v).norm() < 1e-14);
        assert!(projective_distance(&u, &v) > 0.99);
    }

    #[test]
    fn null_vector_classification() {
        let m = DMatrix::<C>::from_row_slice(2, 3, &[ONE, ONE, ZERO, ZERO, ONE, ONE]);
        match null_vector(&m, 1e-10) {
            Nullity::One { vector, .. } => {
                let r0 = vector[0] + vector[1];
                let r1 = vector[1] + vector[2];
                assert!(r0.norm() < 1e-14 && r1.norm() < 1e-14);
            }
            other => panic!("expected one-dimensional nullspace, got {other:?}"),
        }
        let z = DMatrix::<C>::zeros(3, 3);
        assert!(matches!(null_vector(&z, 1e-10), Nullity::Many));
        let id = DMatrix::<C>::identity(3, 3);
        assert!(matches!(null_vector(&id, 1e-10), Nullity::Zero { .. }));
    }
}
