//! Roots of binary forms on the projective line.

use nalgebra::{DMatrix, Schur};

use super::{BinaryForm, LinePoint};
use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::linalg::{C, ONE, ZERO};

/// Coefficients below this fraction of the largest are treated as exact zeros
/// when locating roots at `(0:1)` and `(1:0)`.
const TRIM: f64 = 1e-14;

const SCHUR_MAX_ITER: usize = 500;

/// Horner evaluation of `Σ c_k z^k` and its derivative.
fn horner(c: &[C], z: C) -> (C, C) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for &ck in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + ck;
    }
    (p, dp)
}

fn companion_eigenvalues(c: &[C]) -> Option<Vec<C>> {
    let n = c.len() - 1;
    let lead = c[n];
    let mut m = DMatrix::<C>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = ONE;
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i] / lead;
    }
    let schur = Schur::try_new(m, f64::EPSILON, SCHUR_MAX_ITER)?;
    Some(schur.eigenvalues()?.iter().copied().collect())
}

/// Coefficients of `p(w + σ)` from those of `p(z)`.
fn taylor_shift(c: &[C], sigma: C) -> Vec<C> {
    let mut a = c.to_vec();
    let n = a.len();
    for k in 0..n {
        for j in (k..n - 1).rev() {
            let next = a[j + 1];
            a[j] += sigma * next;
        }
    }
    a
}

/// Companion-matrix roots of `Σ c_k z^k`. QR iteration can stall on companion
/// matrices with rotational symmetry (`z^n + 1`), so on failure the polynomial
/// is shifted off its symmetry center and the roots shifted back.
fn companion_roots(c: &[C]) -> Vec<C> {
    let n = c.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    if let Some(r) = companion_eigenvalues(c) {
        return r;
    }
    let radius = (c[0] / c[n]).norm().powf(1.0 / n as f64).max(1e-3);
    for k in 1..=8 {
        let sigma = C::from_polar(0.137 * k as f64 * radius, 0.61 * k as f64);
        if let Some(r) = companion_eigenvalues(&taylor_shift(c, sigma)) {
            return r.into_iter().map(|w| w + sigma).collect();
        }
    }
    panic!("companion QR failed to converge after shifted restarts")
}

/// Newton iteration on `Σ c_k z^k`, keeping only steps that reduce the residual.
fn newton_1d(c: &[C], mut z: C) -> C {
    let (mut fz, mut dfz) = horner(c, z);
    for _ in 0..60 {
        if fz == ZERO || dfz == ZERO {
            break;
        }
        let step = fz / dfz;
        let zn = z - step;
        let (fn_, dfn) = horner(c, zn);
        if fn_.norm() >= fz.norm() {
            break;
        }
        z = zn;
        fz = fn_;
        dfz = dfn;
        if step.norm() <= 1e-17 * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

/// Coefficients of the dehomogenization in the chart where `point` has its
/// smaller coordinate as the unknown, plus the chart value of the point.
/// Returns `(coeffs in z, z, s_chart)` with `s_chart` true for `z = s/t`.
fn chart(p: &BinaryForm, s: C, t: C) -> (Vec<C>, C, bool) {
    if s.norm() <= t.norm() {
        (p.coeffs.clone(), s / t, true)
    } else {
        (p.coeffs.iter().rev().copied().collect(), t / s, false)
    }
}

fn from_chart(z: C, s_chart: bool) -> LinePoint {
    let (s, t) = if s_chart { (z, ONE) } else { (ONE, z) };
    LinePoint::new(s, t).expect("one coordinate is 1")
}

/// All roots of a nonzero binary form, repeated by multiplicity, each
/// Newton-polished in the chart where it has modulus at most 1.
pub fn raw_roots(p: &BinaryForm) -> Result<Vec<LinePoint>> {
    Ok(roots_with_estimates(p)?.into_iter().map(|r| r.0).collect())
}

/// Polished roots paired with the unpolished eigenvalue estimates. The mean of
/// the estimates in a cluster is a well-conditioned approximation of a multiple
/// root even though each estimate alone is not.
fn roots_with_estimates(p: &BinaryForm) -> Result<Vec<(LinePoint, LinePoint)>> {
    let scale = p.max_abs();
    if scale == 0.0 || p.coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::IdenticallyZero);
    }
    let c: Vec<C> = p.coeffs.iter().map(|x| x / scale).collect();
    let d = p.degree as usize;
    let hi = (0..=d).rev().find(|&k| c[k].norm() > TRIM).unwrap();
    let lo = (0..=d).find(|&k| c[k].norm() > TRIM).unwrap();

    let mut out = Vec::with_capacity(d);
    let inf = from_chart(ZERO, false);
    let origin = from_chart(ZERO, true);
    out.extend(std::iter::repeat_n((inf, inf), d - hi));
    out.extend(std::iter::repeat_n((origin, origin), lo));
    for z in companion_roots(&c[lo..=hi]) {
        let q = from_chart(z, true);
        let (cc, zc, s_chart) = chart(p, q.s(), q.t());
        let polished = newton_1d(&cc, zc);
        out.push((from_chart(polished, s_chart), q));
    }
    Ok(out)
}

/// Largest spread at which `k` computed copies of one `k`-fold root may sit:
/// perturbations of a `k`-fold root scale like `eps^(1/k)`.
pub(crate) fn loose_radius(tol_merge: f64, k: usize) -> f64 {
    tol_merge.max(30.0 * f64::EPSILON.powf(1.0 / k as f64))
}

/// Greedy clustering of weighted points. A group merges outright when its
/// diameter is below `tol_merge`; a wider group (up to [`loose_radius`]) merges
/// only when `accept` certifies it as one multiple root.
pub(crate) fn cluster<F>(
    dist: impl Fn(usize, usize) -> f64,
    weights: &[usize],
    tol_merge: f64,
    mut accept: F,
) -> Vec<Vec<usize>>
where
    F: FnMut(&[usize]) -> bool,
{
    let mut remaining: Vec<usize> = (0..weights.len()).collect();
    let mut groups = Vec::new();
    while !remaining.is_empty() {
        let mut best: Option<(usize, f64, Vec<usize>)> = None;
        for &i in &remaining {
            let mut near = remaining.clone();
            near.sort_by(|&a, &b| dist(i, a).total_cmp(&dist(i, b)).then(a.cmp(&b)));
            for k in (2..=near.len()).rev() {
                let s = &near[..k];
                let mut diam: f64 = 0.0;
                for (x, &a) in s.iter().enumerate() {
                    for &b in &s[x + 1..] {
                        diam = diam.max(dist(a, b));
                    }
                }
                let w: usize = s.iter().map(|&j| weights[j]).sum();
                let ok = diam <= tol_merge || (diam <= loose_radius(tol_merge, w) && accept(s));
                if ok {
                    let better = match &best {
                        None => true,
                        Some((bw, bd, _)) => w > *bw || (w == *bw && diam < *bd),
                    };
                    if better {
                        let mut g = s.to_vec();
                        g.sort_unstable();
                        best = Some((w, diam, g));
                    }
                    break;
                }
            }
        }
        match best {
            Some((_, _, g)) => {
                remaining.retain(|j| !g.contains(j));
                groups.push(g);
            }
            None => {
                groups.extend(remaining.iter().map(|&j| vec![j]));
                remaining.clear();
            }
        }
    }
    groups
}

/// Roots of a nonzero binary form with multiplicities summing to its degree.
///
/// Roots come from companion-matrix eigenvalues of the dehomogenized form, plus
/// exact roots at `(1:0)` and `(0:1)` for vanishing extreme coefficients. They are
/// Newton-polished and then clustered: roots closer than `tol_merge` merge, and a
/// wider cluster of `k` roots merges when the first `k-1` derivatives of the form
/// nearly vanish at its centroid.
pub fn univariate_roots(p: &BinaryForm, cfg: &SolverConfig) -> Result<Vec<(LinePoint, usize)>> {
    let both = roots_with_estimates(p)?;
    let raw: Vec<LinePoint> = both.iter().map(|r| r.0).collect();
    let est: Vec<LinePoint> = both.iter().map(|r| r.1).collect();
    let scale = p.max_abs();
    let weights = vec![1; raw.len()];
    let centroid = |g: &[usize]| -> (Vec<C>, C, bool) {
        let first = raw[g[0]];
        let (cc, _, s_chart) = chart(p, first.s(), first.t());
        let mean = g
            .iter()
            .map(|&j| {
                let r = est[j];
                if s_chart {
                    r.s() / r.t()
                } else {
                    r.t() / r.s()
                }
            })
            .sum::<C>()
            / g.len() as f64;
        (cc, mean, s_chart)
    };
    let groups = cluster(
        |a, b| raw[a].distance(&raw[b]),
        &weights,
        cfg.tol_merge,
        |g| {
            let (mut cc, z, _) = centroid(g);
            // p^(j)(z)/j! must vanish for j < k-1.
            for j in 0..g.len().saturating_sub(1) {
                let (v, _) = horner(&cc, z);
                let fact: f64 = (1..=j).map(|x| x as f64).product();
                if v.norm() / fact > cfg.tol_zero * scale {
                    return false;
                }
                cc = cc.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect();
                if cc.is_empty() {
                    break;
                }
            }
            true
        },
    );
    let mut out: Vec<(LinePoint, usize)> = groups
        .iter()
        .map(|g| {
            if g.len() == 1 {
                (raw[g[0]], 1)
            } else {
                let (_, z, s_chart) = centroid(g);
                (from_chart(z, s_chart), g.len())
            }
        })
        .collect();
    out.sort_by(|a, b| {
        let (x, y) = (a.0, b.0);
        x.s()
            .re
            .total_cmp(&y.s().re)
            .then(x.s().im.total_cmp(&y.s().im))
            .then(x.t().re.total_cmp(&y.t().re))
            .then(x.t().im.total_cmp(&y.t().im))
    });
    Ok(out)
}

/// Residual of `p` at a root, relative to the form's scale.
#[cfg(test)]
fn relative_residual(p: &BinaryForm, r: &LinePoint) -> f64 {
    let n = crate::linalg::norm(&[r.s(), r.t()]);
    p.eval(r.s() / n, r.t() / n).norm() / p.max_abs()
}
