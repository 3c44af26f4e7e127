//! Torus discretization and its frequency lattice.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::fft::Plan;
use crate::{Error, Result};

/// Uniform grid on `[0, L)^d` with `N` points per axis.
///
/// Sites are stored row-major with axis 0 slowest. The integer frequency of
/// index `i` along an axis is `i` for `i ≤ N/2` and `i - N` otherwise, so the
/// lattice is `{k : -N/2 < k_i ≤ N/2}`; physical wavenumbers are `2π k / L`.
///
/// Cloning is cheap: the precomputed tables are shared.
#[derive(Clone)]
pub struct Grid {
    inner: Arc<GridInner>,
}

struct GridInner {
    dim: usize,
    n: usize,
    length: f64,
    /// Physical wavevector per site, Nyquist components kept.
    wavevector: Vec<[f64; 3]>,
    /// Physical wavevector per site with Nyquist components zeroed; this is
    /// the symbol of the first-derivative operators.
    resolved: Vec<[f64; 3]>,
    /// `|ξ|` per site.
    magnitude: Vec<f64>,
    /// Modes kept by the 2/3 rule.
    retained: Vec<bool>,
    plan: Plan,
}

impl Grid {
    /// Build a grid of dimension `dim ∈ {2, 3}` with `n` points per axis
    /// (a power of two, at least 8) and period `length`.
    pub fn new(dim: usize, n: usize, length: f64) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidGrid("dimension must be 2 or 3"));
        }
        if n % 2 != 0 {
            return Err(Error::InvalidGrid("N must be even"));
        }
        if n < 8 {
            return Err(Error::InvalidGrid("N must be at least 8"));
        }
        if !n.is_power_of_two() {
            return Err(Error::InvalidGrid("N must be a power of two"));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidGrid("period length must be positive"));
        }

        let sites = n.pow(dim as u32);
        let scale = 2.0 * PI / length;
        let mut wavevector = Vec::with_capacity(sites);
        let mut resolved = Vec::with_capacity(sites);
        let mut magnitude = Vec::with_capacity(sites);
        let mut retained = Vec::with_capacity(sites);
        for s in 0..sites {
            let mut keep = true;
            let mut k = [0.0; 3];
            let mut kr = [0.0; 3];
            let mut idx = s;
            for axis in (0..dim).rev() {
                let i = idx % n;
                idx /= n;
                let ki = signed_frequency(i, n);
                k[axis] = scale * ki as f64;
                kr[axis] = if i == n / 2 { 0.0 } else { k[axis] };
                keep &= 3 * ki.unsigned_abs() as usize <= n;
            }
            retained.push(keep);
            magnitude.push(libm::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]));
            wavevector.push(k);
            resolved.push(kr);
        }

        Ok(Self {
            inner: Arc::new(GridInner {
                dim,
                n,
                length,
                wavevector,
                resolved,
                magnitude,
                retained,
                plan: Plan::new(n),
            }),
        })
    }

    /// Spatial dimension.
    pub fn dim(&self) -> usize {
        self.inner.dim
    }

    /// Points per axis.
    pub fn n(&self) -> usize {
        self.inner.n
    }

    /// Period length.
    pub fn length(&self) -> f64 {
        self.inner.length
    }

    /// Total number of sites, `N^d`.
    pub fn len(&self) -> usize {
        self.inner.magnitude.len()
    }

    /// Always false; grids have at least 64 sites.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid spacing `L / N`.
    pub fn spacing(&self) -> f64 {
        self.inner.length / self.inner.n as f64
    }

    /// Quadrature weight of one cell, `(L/N)^d`.
    pub fn cell_volume(&self) -> f64 {
        libm::pow(self.spacing(), self.inner.dim as f64)
    }

    /// Volume of the torus, `L^d`.
    pub fn volume(&self) -> f64 {
        libm::pow(self.inner.length, self.inner.dim as f64)
    }

    /// `2π / L`, the spacing of the physical frequency lattice.
    pub fn wavenumber_scale(&self) -> f64 {
        2.0 * PI / self.inner.length
    }

    /// Largest `|ξ|` on the lattice.
    pub fn max_wavenumber(&self) -> f64 {
        self.wavenumber_scale() * (self.inner.n / 2) as f64 * libm::sqrt(self.inner.dim as f64)
    }

    /// `|ξ|` at every site.
    pub fn magnitudes(&self) -> &[f64] {
        &self.inner.magnitude
    }

    /// Physical wavevector at a site (unused trailing components are zero).
    pub fn wavevector(&self, site: usize) -> [f64; 3] {
        self.inner.wavevector[site]
    }

    /// Symbol of `-i ∂` at a site: the wavevector with Nyquist components
    /// zeroed, so that derivatives of real fields stay real.
    pub fn resolved_wavevector(&self, site: usize) -> [f64; 3] {
        self.inner.resolved[site]
    }

    /// `|k̃|²` for the resolved wavevector; the symbol of `-Δ`.
    pub fn resolved_sq(&self, site: usize) -> f64 {
        let k = self.inner.resolved[site];
        k[0] * k[0] + k[1] * k[1] + k[2] * k[2]
    }

    /// Whether the 2/3 dealiasing rule keeps this mode (`|k_i| ≤ N/3` on every axis).
    pub fn retains(&self, site: usize) -> bool {
        self.inner.retained[site]
    }

    /// Integer frequency of a site along each axis.
    pub fn integer_frequency(&self, site: usize) -> [i64; 3] {
        let n = self.inner.n;
        let mut out = [0; 3];
        let mut idx = site;
        for axis in (0..self.inner.dim).rev() {
            out[axis] = signed_frequency(idx % n, n);
            idx /= n;
        }
        out
    }

    /// Index of the site holding frequency `-k`.
    pub fn mirror(&self, site: usize) -> usize {
        let n = self.inner.n;
        let mut idx = site;
        let mut out = 0;
        let mut stride = 1;
        for _ in 0..self.inner.dim {
            let i = idx % n;
            idx /= n;
            out += ((n - i) % n) * stride;
            stride *= n;
        }
        out
    }

    /// Physical coordinates of a site (unused trailing components are zero).
    pub fn point(&self, site: usize) -> [f64; 3] {
        let n = self.inner.n;
        let h = self.spacing();
        let mut x = [0.0; 3];
        let mut idx = site;
        for axis in (0..self.inner.dim).rev() {
            x[axis] = (idx % n) as f64 * h;
            idx /= n;
        }
        x
    }

    /// True when both grids have the same dimension, resolution and period.
    pub fn same_as(&self, other: &Grid) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.dim == other.inner.dim
                && self.inner.n == other.inner.n
                && self.inner.length.to_bits() == other.inner.length.to_bits())
    }

    pub(crate) fn check_same(&self, other: &Grid) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub(crate) fn plan(&self) -> &Plan {
        &self.inner.plan
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl core::fmt::Debug for Grid {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Grid")
            .field("dim", &self.inner.dim)
            .field("n", &self.inner.n)
            .field("length", &self.inner.length)
            .finish()
    }
}

fn signed_frequency(i: usize, n: usize) -> i64 {
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::TAU;

    #[test]
    fn small_grid_lattice() {
        let g = Grid::new(2, 8, TAU).unwrap();
        assert_eq!(g.len(), 64);
        assert!((g.max_wavenumber() - 4.0 * libm::sqrt(2.0)).abs() < 1e-14);
        let max = g.magnitudes().iter().cloned().fold(0.0, f64::max);
        assert!((max - 4.0 * libm::sqrt(2.0)).abs() < 1e-14);
    }

    #[test]
    fn three_dimensional_site_count() {
        assert_eq!(Grid::new(3, 16, TAU).unwrap().len(), 4096);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(
            Grid::new(2, 7, TAU).unwrap_err(),
            Error::InvalidGrid("N must be even")
        );
        assert!(Grid::new(4, 8, TAU).is_err());
        assert!(Grid::new(1, 8, TAU).is_err());
        assert!(Grid::new(2, 8, 0.0).is_err());
        assert!(Grid::new(2, 8, -1.0).is_err());
        assert!(Grid::new(2, 6, TAU).is_err());
        assert!(Grid::new(2, 24, TAU).is_err());
    }

    #[test]
    fn mirror_negates_frequency() {
        let g = Grid::new(3, 8, TAU).unwrap();
        for s in 0..g.len() {
            let k = g.integer_frequency(s);
            let m = g.integer_frequency(g.mirror(s));
            for a in 0..3 {
                // Nyquist maps onto itself
                if k[a] == 4 {
                    assert_eq!(m[a], 4);
                } else {
                    assert_eq!(m[a], -k[a]);
                }
            }
        }
    }

    #[test]
    fn lattice_scaled_by_period() {
        let g = Grid::new(2, 8, 2.0 * TAU).unwrap();
        let k = g.wavevector(1);
        assert!((k[1] - 0.5).abs() < 1e-15);
    }
}
