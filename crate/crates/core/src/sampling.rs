//! Seeded random sampling of vectors, forms and group elements.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{det3, norm, Mat3, Vec3, C, ZERO};

/// Deterministic generator for `(seed, stream)`; streams separate independent uses.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Standard complex Gaussian: real and imaginary parts have variance 1/2.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_vec3<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    [complex_gaussian(rng), complex_gaussian(rng), complex_gaussian(rng)]
}

pub fn gaussian_mat3<R: Rng + ?Sized>(rng: &mut R) -> Mat3 {
    [gaussian_vec3(rng), gaussian_vec3(rng), gaussian_vec3(rng)]
}

/// Haar-ish special unitary matrix from Gram–Schmidt on Gaussian columns.
pub fn random_su3<R: Rng + ?Sized>(rng: &mut R) -> Mat3 {
    loop {
        let g = gaussian_mat3(rng);
        let mut cols: Vec<Vec3> = Vec::with_capacity(3);
        for j in 0..3 {
            let mut v = [g[0][j], g[1][j], g[2][j]];
            for u in &cols {
                let ip: C = (0..3).map(|i| u[i].conj() * v[i]).sum();
                for i in 0..3 {
                    v[i] -= ip * u[i];
                }
            }
            let n = norm(&v);
            if n < 1e-6 {
                break;
            }
            cols.push([v[0] / n, v[1] / n, v[2] / n]);
        }
        if cols.len() < 3 {
            continue;
        }
        let mut u = [[ZERO; 3]; 3];
        for j in 0..3 {
            for i in 0..3 {
                u[i][j] = cols[j][i];
            }
        }
        let phase = det3(&u).powf(1.0 / 3.0);
        for row in u.iter_mut() {
            for z in row.iter_mut() {
                *z /= phase;
            }
        }
        return u;
    }
}

/// Gaussian matrix rescaled to determinant 1.
pub fn random_sl3<R: Rng + ?Sized>(rng: &mut R) -> Mat3 {
    loop {
        let mut g = gaussian_mat3(rng);
        let d = det3(&g);
        if d.norm() < 1e-3 {
            continue;
        }
        let s = d.powf(1.0 / 3.0);
        for row in g.iter_mut() {
            for z in row.iter_mut() {
                *z /= s;
            }
        }
        return g;
    }
}
