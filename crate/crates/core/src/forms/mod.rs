//! Homogeneous polynomials in two and three complex variables.
//!
//! Ternary forms store one coefficient per monomial `e1^α e2^β e3^γ` in graded
//! lexicographic order: α descending, then β descending. For degree 2 this is
//! `e1², e1e2, e1e3, e2², e2e3, e3²`. Binary forms store the coefficient of
//! `s^k t^(d-k)` at index `k`.

pub(crate) mod intersect;
pub(crate) mod roots;

pub use intersect::{common_zeros, polish_point, PolySystem};
pub use roots::{raw_roots, univariate_roots};

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat3, Vec3, C, ONE, ZERO};

/// Number of monomials of degree `d` in three variables.
pub const fn monomial_count(d: u32) -> usize {
    let d = d as usize;
    (d + 1) * (d + 2) / 2
}

/// Exponent triples of degree `d` in storage order.
pub fn monomials(d: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::with_capacity(monomial_count(d));
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            out.push([a, b, d - a - b]);
        }
    }
    out
}

/// Storage index of the monomial with exponents `e`.
pub fn monomial_index(e: [u32; 3]) -> usize {
    let d = e[0] + e[1] + e[2];
    let r = (d - e[0]) as usize;
    r * (r + 1) / 2 + (r - e[1] as usize)
}

fn powers(x: C, n: u32) -> Vec<C> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut acc = ONE;
    for _ in 0..=n {
        out.push(acc);
        acc *= x;
    }
    out
}

/// A homogeneous polynomial of fixed degree in three variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FormRepr", into = "FormRepr")]
pub struct TernaryForm {
    degree: u32,
    coeffs: Vec<C>,
}

#[derive(Serialize, Deserialize)]
struct FormRepr {
    degree: u32,
    coeffs: Vec<C>,
}

impl TryFrom<FormRepr> for TernaryForm {
    type Error = Error;
    fn try_from(r: FormRepr) -> Result<Self> {
        TernaryForm::from_coeffs(r.degree, r.coeffs)
    }
}

impl From<TernaryForm> for FormRepr {
    fn from(f: TernaryForm) -> Self {
        FormRepr {
            degree: f.degree,
            coeffs: f.coeffs,
        }
    }
}

impl TernaryForm {
    pub fn zero(degree: u32) -> Self {
        Self {
            degree,
            coeffs: vec![ZERO; monomial_count(degree)],
        }
    }

    pub fn from_coeffs(degree: u32, coeffs: Vec<C>) -> Result<Self> {
        if coeffs.len() != monomial_count(degree) {
            return Err(Error::InvalidForm(format!(
                "degree {degree} needs {} coefficients, got {}",
                monomial_count(degree),
                coeffs.len()
            )));
        }
        Ok(Self { degree, coeffs })
    }

    pub fn constant(c: C) -> Self {
        Self {
            degree: 0,
            coeffs: vec![c],
        }
    }

    pub fn monomial(exps: [u32; 3], c: C) -> Self {
        let mut f = Self::zero(exps.iter().sum());
        f.coeffs[monomial_index(exps)] = c;
        f
    }

    /// The coordinate function `e_i` (0-based).
    pub fn variable(i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Self::monomial(e, ONE)
    }

    /// The linear form `Σ l_i e_i`.
    pub fn linear(l: &Vec3) -> Self {
        Self {
            degree: 1,
            coeffs: l.to_vec(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, exps: [u32; 3]) -> C {
        self.coeffs[monomial_index(exps)]
    }

    pub fn terms(&self) -> impl Iterator<Item = ([u32; 3], C)> + '_ {
        monomials(self.degree).into_iter().zip(self.coeffs.iter().copied())
    }

    pub fn max_abs(&self) -> f64 {
        linalg::max_abs(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    pub fn scale(&self, s: C) -> Self {
        Self {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Rescaled to unit max coefficient, together with the divisor used.
    /// The zero form is returned unchanged with scale 0.
    pub fn normalized(&self) -> (Self, f64) {
        let m = self.max_abs();
        if m == 0.0 {
            return (self.clone(), 0.0);
        }
        (self.scale(C::new(1.0 / m, 0.0)), m)
    }

    pub fn eval(&self, p: &Vec3) -> C {
        let d = self.degree;
        let (px, py, pz) = (powers(p[0], d), powers(p[1], d), powers(p[2], d));
        self.terms()
            .map(|(e, c)| c * px[e[0] as usize] * py[e[1] as usize] * pz[e[2] as usize])
            .sum()
    }

    /// Formal partial derivative with respect to variable `i`; degree 0 gives the zero constant.
    pub fn diff(&self, i: usize) -> Self {
        if self.degree == 0 {
            return Self::zero(0);
        }
        let mut out = Self::zero(self.degree - 1);
        for (e, c) in self.terms() {
            if e[i] == 0 || c == ZERO {
                continue;
            }
            let mut e2 = e;
            e2[i] -= 1;
            out.coeffs[monomial_index(e2)] += c * e[i] as f64;
        }
        out
    }

    pub fn gradient(&self) -> [Self; 3] {
        [self.diff(0), self.diff(1), self.diff(2)]
    }

    /// `f(G1(a), G2(a), G3(a))`; the three components must share a degree.
    pub fn pullback(&self, map: &[TernaryForm; 3]) -> Result<Self> {
        let e = map[0].degree;
        if map[1].degree != e || map[2].degree != e {
            return Err(Error::MismatchedDegrees(format!(
                "map components have degrees {}, {}, {}",
                map[0].degree, map[1].degree, map[2].degree
            )));
        }
        let d = self.degree;
        let pows: Vec<Vec<TernaryForm>> = map
            .iter()
            .map(|g| {
                let mut v = vec![TernaryForm::constant(ONE)];
                for k in 1..=d as usize {
                    let next = &v[k - 1] * g;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Self::zero(d * e);
        for (ex, c) in self.terms() {
            if c == ZERO {
                continue;
            }
            let term = &(&pows[0][ex[0] as usize] * &pows[1][ex[1] as usize]) * &pows[2][ex[2] as usize];
            for (o, t) in out.coeffs.iter_mut().zip(&term.coeffs) {
                *o += c * t;
            }
        }
        Ok(out)
    }

    /// `a ↦ f(M a)`.
    pub fn compose_linear(&self, m: &Mat3) -> Self {
        let map = [
            Self::linear(&m[0]),
            Self::linear(&m[1]),
            Self::linear(&m[2]),
        ];
        self.pullback(&map).expect("linear components share degree 1")
    }

    /// `q(s, t) = f(s u + t v)`.
    pub fn restrict_to_line(&self, u: &Vec3, v: &Vec3) -> Result<BinaryForm> {
        let (nu, nv) = (linalg::norm(u), linalg::norm(v));
        if nu == 0.0 || nv == 0.0 || linalg::projective_distance(u, v) < 1e-12 {
            return Err(Error::DegenerateParametrization);
        }
        let d = self.degree;
        let lin: Vec<BinaryForm> = (0..3)
            .map(|i| BinaryForm {
                degree: 1,
                coeffs: vec![v[i], u[i]],
            })
            .collect();
        let pows: Vec<Vec<BinaryForm>> = lin
            .iter()
            .map(|l| {
                let mut v = vec![BinaryForm::constant(ONE)];
                for k in 1..=d as usize {
                    let next = v[k - 1].mul(l);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = BinaryForm::zero(d);
        for (ex, c) in self.terms() {
            if c == ZERO {
                continue;
            }
            let t = pows[0][ex[0] as usize]
                .mul(&pows[1][ex[1] as usize])
                .mul(&pows[2][ex[2] as usize]);
            for (o, x) in out.coeffs.iter_mut().zip(&t.coeffs) {
                *o += c * x;
            }
        }
        Ok(out)
    }

    /// Division by a nonzero linear form: `self = q·l + r` with `r` free of the
    /// variable carrying the largest coefficient of `l`.
    pub fn divide_by_linear(&self, l: &Vec3) -> Result<(Self, Self)> {
        let k = (0..3)
            .max_by(|&a, &b| l[a].norm().total_cmp(&l[b].norm()))
            .unwrap();
        if l[k] == ZERO {
            return Err(Error::InvalidForm("division by the zero linear form".into()));
        }
        if self.degree == 0 {
            return Ok((Self::zero(0), self.clone()));
        }
        let mut rem = self.clone();
        let mut quot = Self::zero(self.degree - 1);
        // Peel off terms by decreasing power of the pivot variable.
        for power in (1..=self.degree).rev() {
            for e in monomials(self.degree) {
                if e[k] != power {
                    continue;
                }
                let c = rem.coeffs[monomial_index(e)];
                if c == ZERO {
                    continue;
                }
                let mut qe = e;
                qe[k] -= 1;
                let qc = c / l[k];
                quot.coeffs[monomial_index(qe)] += qc;
                for (j, lj) in l.iter().enumerate() {
                    let mut te = qe;
                    te[j] += 1;
                    rem.coeffs[monomial_index(te)] -= qc * lj;
                }
                rem.coeffs[monomial_index(e)] = ZERO;
            }
        }
        Ok((quot, rem))
    }
}

impl Add for &TernaryForm {
    type Output = TernaryForm;
    fn add(self, rhs: &TernaryForm) -> TernaryForm {
        assert_eq!(self.degree, rhs.degree, "adding forms of different degree");
        TernaryForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &TernaryForm {
    type Output = TernaryForm;
    fn sub(self, rhs: &TernaryForm) -> TernaryForm {
        assert_eq!(self.degree, rhs.degree, "subtracting forms of different degree");
        TernaryForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &TernaryForm {
    type Output = TernaryForm;
    fn neg(self) -> TernaryForm {
        self.scale(-ONE)
    }
}

impl Mul for &TernaryForm {
    type Output = TernaryForm;
    fn mul(self, rhs: &TernaryForm) -> TernaryForm {
        let mut out = TernaryForm::zero(self.degree + rhs.degree);
        let rm = monomials(rhs.degree);
        for (ea, ca) in self.terms() {
            if ca == ZERO {
                continue;
            }
            for (eb, cb) in rm.iter().zip(&rhs.coeffs) {
                if *cb == ZERO {
                    continue;
                }
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.coeffs[monomial_index(e)] += ca * cb;
            }
        }
        out
    }
}

/// Determinant of the Jacobian matrix `∂G_i/∂a_j` of three forms of equal degree.
pub fn jacobian_det(g: &[TernaryForm; 3]) -> Result<TernaryForm> {
    let e = g[0].degree;
    if g[1].degree != e || g[2].degree != e {
        return Err(Error::MismatchedDegrees(format!(
            "jacobian components have degrees {}, {}, {}",
            g[0].degree, g[1].degree, g[2].degree
        )));
    }
    if e == 0 {
        return Ok(TernaryForm::zero(0));
    }
    let m: Vec<[TernaryForm; 3]> = g.iter().map(|gi| gi.gradient()).collect();
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
        &(&m[r1][c1] * &m[r2][c2]) - &(&m[r1][c2] * &m[r2][c1])
    };
    let t0 = &m[0][0] * &minor(1, 2, 1, 2);
    let t1 = &m[0][1] * &minor(1, 2, 0, 2);
    let t2 = &m[0][2] * &minor(1, 2, 0, 1);
    Ok(&(&t0 - &t1) + &t2)
}

/// A homogeneous polynomial in `(s, t)`; `coeffs[k]` multiplies `s^k t^(d-k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinaryForm {
    degree: u32,
    coeffs: Vec<C>,
}

impl BinaryForm {
    pub fn zero(degree: u32) -> Self {
        Self {
            degree,
            coeffs: vec![ZERO; degree as usize + 1],
        }
    }

    pub fn constant(c: C) -> Self {
        Self {
            degree: 0,
            coeffs: vec![c],
        }
    }

    pub fn from_coeffs(coeffs: Vec<C>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidForm("binary form needs at least one coefficient".into()));
        }
        Ok(Self {
            degree: coeffs.len() as u32 - 1,
            coeffs,
        })
    }

    /// Product of linear factors `(t_i s - s_i t)` vanishing at the given points.
    pub fn from_roots(roots: &[LinePoint]) -> Self {
        roots.iter().fold(Self::constant(ONE), |acc, r| {
            acc.mul(&Self {
                degree: 1,
                coeffs: vec![-r.coords[0], r.coords[1]],
            })
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn max_abs(&self) -> f64 {
        linalg::max_abs(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    pub fn eval(&self, s: C, t: C) -> C {
        let d = self.degree;
        let (ps, pt) = (powers(s, d), powers(t, d));
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * ps[k] * pt[d as usize - k])
            .sum()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(self.degree + rhs.degree);
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    pub fn scale(&self, s: C) -> Self {
        Self {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }
}

/// Picks the coordinate used to normalize: the first one whose modulus is within
/// a relative 1e-9 of the largest, so that near-ties resolve stably.
fn pivot_index(coords: &[C]) -> Option<usize> {
    let m = linalg::max_abs(coords);
    if m == 0.0 || !m.is_finite() {
        return None;
    }
    coords.iter().position(|z| z.norm() >= m * (1.0 - 1e-9))
}

/// A point of the projective plane, scaled so its pivot coordinate is exactly 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[C; 3]", into = "[C; 3]")]
pub struct ProjPoint {
    coords: Vec3,
}

impl TryFrom<[C; 3]> for ProjPoint {
    type Error = Error;
    fn try_from(v: [C; 3]) -> Result<Self> {
        ProjPoint::new(v)
    }
}

impl From<ProjPoint> for [C; 3] {
    fn from(p: ProjPoint) -> Self {
        p.coords
    }
}

impl ProjPoint {
    pub fn new(v: Vec3) -> Result<Self> {
        let k = pivot_index(&v)
            .ok_or_else(|| Error::InvalidInput("projective point with all coordinates zero".into()))?;
        let p = v[k];
        let mut coords = [v[0] / p, v[1] / p, v[2] / p];
        coords[k] = ONE;
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &Vec3 {
        &self.coords
    }

    /// Unit-norm representative.
    pub fn unit(&self) -> Vec3 {
        let n = linalg::norm(&self.coords);
        [self.coords[0] / n, self.coords[1] / n, self.coords[2] / n]
    }

    pub fn distance(&self, other: &ProjPoint) -> f64 {
        linalg::projective_distance(&self.coords, &other.coords)
    }

    pub fn transform(&self, m: &Mat3) -> Result<Self> {
        Self::new(linalg::matvec(m, &self.coords))
    }

    /// Lexicographic order on coordinates, real part before imaginary part.
    pub fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        for (a, b) in self.coords.iter().zip(&other.coords) {
            let o = a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im));
            if o.is_ne() {
                return o;
            }
        }
        std::cmp::Ordering::Equal
    }
}

/// A point `(s : t)` of the projective line, normalized like [`ProjPoint`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinePoint {
    coords: [C; 2],
}

impl LinePoint {
    pub fn new(s: C, t: C) -> Result<Self> {
        let v = [s, t];
        let k = pivot_index(&v)
            .ok_or_else(|| Error::InvalidInput("point of P^1 with both coordinates zero".into()))?;
        let p = v[k];
        let mut coords = [s / p, t / p];
        coords[k] = ONE;
        Ok(Self { coords })
    }

    pub fn s(&self) -> C {
        self.coords[0]
    }

    pub fn t(&self) -> C {
        self.coords[1]
    }

    pub fn distance(&self, other: &LinePoint) -> f64 {
        linalg::projective_distance(&self.coords, &other.coords)
    }
}

/// Symmetric Hausdorff distance between two projective point sets.
pub fn hausdorff(a: &[ProjPoint], b: &[ProjPoint]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return if a.len() == b.len() { 0.0 } else { 1.0 };
    }
    let one_way = |x: &[ProjPoint], y: &[ProjPoint]| {
        x.iter()
            .map(|p| y.iter().map(|q| p.distance(q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}
