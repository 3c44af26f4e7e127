//! Radix-2 complex FFT and its multidimensional application on a [`Grid`].
//!
//! Normalization: the forward transform divides by `N^d`, so the `k = 0`
//! coefficient is the mean of the samples; the inverse transform is unscaled.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Grid, Result};

/// Transform direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Samples to coefficients, `ĉ_k = N^{-d} Σ_x f(x) e^{-i k·x}`.
    Forward,
    /// Coefficients to samples, `f(x) = Σ_k ĉ_k e^{i k·x}`.
    Inverse,
}

/// Twiddle and bit-reversal tables for one line length.
pub(crate) struct Plan {
    n: usize,
    twiddles: Vec<Complex64>,
    bitrev: Vec<usize>,
}

impl Plan {
    pub(crate) fn new(n: usize) -> Self {
        debug_assert!(n.is_power_of_two());
        let twiddles = (0..n / 2)
            .map(|k| {
                let angle = -2.0 * PI * k as f64 / n as f64;
                Complex64::new(libm::cos(angle), libm::sin(angle))
            })
            .collect();
        let bits = n.trailing_zeros();
        let bitrev = (0..n)
            .map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (usize::BITS - bits) })
            .collect();
        Self { n, twiddles, bitrev }
    }

    /// In-place unscaled transform of one contiguous line.
    fn line(&self, data: &mut [Complex64], dir: Direction) {
        let n = self.n;
        for i in 0..n {
            let j = self.bitrev[i];
            if i < j {
                data.swap(i, j);
            }
        }
        let mut half = 1;
        while half < n {
            let step = n / (2 * half);
            for start in (0..n).step_by(2 * half) {
                for k in 0..half {
                    let w = self.twiddles[k * step];
                    let w = match dir {
                        Direction::Forward => w,
                        Direction::Inverse => w.conj(),
                    };
                    let a = data[start + k];
                    let b = data[start + k + half] * w;
                    data[start + k] = a + b;
                    data[start + k + half] = a - b;
                }
            }
            half *= 2;
        }
    }
}

/// Transform `data` in place along every axis of `grid`.
///
/// Fails with [`Error::SizeMismatch`] unless `data.len() == grid.len()`.
pub fn transform(grid: &Grid, data: &mut [Complex64], dir: Direction) -> Result<()> {
    if data.len() != grid.len() {
        return Err(Error::SizeMismatch {
            expected: grid.len(),
            found: data.len(),
        });
    }
    let plan = grid.plan();
    let n = grid.n();
    let total = data.len();
    let mut scratch = vec![Complex64::new(0.0, 0.0); n];

    let mut stride = 1;
    for _ in 0..grid.dim() {
        if stride == 1 {
            for line in data.chunks_exact_mut(n) {
                plan.line(line, dir);
            }
        } else {
            let block = stride * n;
            for outer in (0..total).step_by(block) {
                for inner in 0..stride {
                    let base = outer + inner;
                    for (i, s) in scratch.iter_mut().enumerate() {
                        *s = data[base + i * stride];
                    }
                    plan.line(&mut scratch, dir);
                    for (i, s) in scratch.iter().enumerate() {
                        data[base + i * stride] = *s;
                    }
                }
            }
        }
        stride *= n;
    }

    if dir == Direction::Forward {
        let scale = 1.0 / total as f64;
        for c in data.iter_mut() {
            *c *= scale;
        }
    }
    Ok(())
}

/// Forward transform of real samples.
pub fn forward_real(grid: &Grid, values: &[f64]) -> Result<Vec<Complex64>> {
    let mut data: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    transform(grid, &mut data, Direction::Forward)?;
    Ok(data)
}

/// Inverse transform keeping the real part. The caller guarantees conjugate
/// symmetry of `coefficients`.
pub fn inverse_real(grid: &Grid, coefficients: &[Complex64]) -> Result<Vec<f64>> {
    let mut data = coefficients.to_vec();
    transform(grid, &mut data, Direction::Inverse)?;
    Ok(data.into_iter().map(|c| c.re).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::TAU;

    fn naive_dft(grid: &Grid, values: &[f64]) -> Vec<Complex64> {
        let len = grid.len();
        (0..len)
            .map(|s| {
                let k = grid.integer_frequency(s);
                let mut acc = Complex64::new(0.0, 0.0);
                for (x, v) in values.iter().enumerate() {
                    let pos = grid.point(x);
                    let phase = -(k[0] as f64 * pos[0] + k[1] as f64 * pos[1] + k[2] as f64 * pos[2])
                        * TAU
                        / grid.length();
                    acc += Complex64::new(libm::cos(phase), libm::sin(phase)) * v;
                }
                acc / len as f64
            })
            .collect()
    }

    #[test]
    fn matches_direct_summation() {
        let grid = Grid::new(2, 8, TAU).unwrap();
        let values: Vec<f64> = (0..grid.len()).map(|i| libm::sin(i as f64 * 0.37) + 0.1 * i as f64).collect();
        let fast = forward_real(&grid, &values).unwrap();
        let slow = naive_dft(&grid, &values);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn size_mismatch_is_rejected() {
        let grid = Grid::new(2, 8, TAU).unwrap();
        let mut data = vec![Complex64::new(0.0, 0.0); 63];
        assert_eq!(
            transform(&grid, &mut data, Direction::Forward),
            Err(Error::SizeMismatch { expected: 64, found: 63 })
        );
    }

    #[test]
    fn three_dimensional_round_trip() {
        let grid = Grid::new(3, 8, TAU).unwrap();
        let values: Vec<f64> = (0..grid.len()).map(|i| libm::cos(i as f64 * 1.3)).collect();
        let coeffs = forward_real(&grid, &values).unwrap();
        let back = inverse_real(&grid, &coeffs).unwrap();
        for (a, b) in values.iter().zip(&back) {
            assert!((a - b).abs() < 1e-13);
        }
    }
}
