//! Random test data shared by the unit tests.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Field, Grid, VectorField};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform noise in `[-1, 1]` at every site: all modes populated.
pub fn random_field(grid: &Grid, rng: &mut ChaCha8Rng) -> Field {
    let values = (0..grid.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
    Field::from_real(grid, values).unwrap()
}

/// Random coefficients on `|k_i| ≤ kmax` for every axis.
pub fn random_band_limited(grid: &Grid, kmax: i64, rng: &mut ChaCha8Rng) -> Field {
    random_with_mask(grid, rng, |s| {
        let k = grid.integer_frequency(s);
        k.iter().all(|c| c.abs() <= kmax)
    })
}

/// Random coefficients supported in `lo ≤ |ξ| ≤ hi`.
pub fn random_shell(grid: &Grid, lo: f64, hi: f64, rng: &mut ChaCha8Rng) -> Field {
    random_with_mask(grid, rng, |s| {
        let m = grid.magnitudes()[s];
        m >= lo && m <= hi && grid.retains(s)
    })
}

fn random_with_mask(grid: &Grid, rng: &mut ChaCha8Rng, keep: impl Fn(usize) -> bool) -> Field {
    let coeffs: Vec<Complex64> = (0..grid.len())
        .map(|s| {
            let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            if keep(s) {
                c
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    Field::from_spectral(grid, coeffs).unwrap()
}

pub fn random_vector(grid: &Grid, kmax: i64, rng: &mut ChaCha8Rng) -> VectorField {
    VectorField::new((0..grid.dim()).map(|_| random_band_limited(grid, kmax, rng)).collect()).unwrap()
}

/// Leray-projected band-limited noise.
pub fn random_solenoidal(grid: &Grid, kmax: i64, rng: &mut ChaCha8Rng) -> VectorField {
    crate::operators::leray_project(&random_vector(grid, kmax, rng))
}

pub fn taylor_green(grid: &Grid) -> VectorField {
    VectorField::from_fn(grid, |x, out| {
        out[0] = libm::sin(x[0]) * libm::cos(x[1]);
        out[1] = -libm::cos(x[0]) * libm::sin(x[1]);
    })
}

pub fn max_abs_diff(a: &Field, b: &Field) -> f64 {
    a.real()
        .iter()
        .zip(b.real())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
