//! Empirical checks of the Bernstein inequalities for annulus-supported
//! fields. The constants in those inequalities are not explicit, so the
//! checks return the measured ratios and leave the bounds to the caller.

use alloc::vec::Vec;

use super::DyadicPartition;
use crate::norms::check_exponent;
use crate::{Error, Field, Result};

/// Ratios for `Supp f̂ ⊂ 2^j 𝒞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernsteinReport {
    /// Block index of the annulus.
    pub j: i32,
    /// Derivative order `k`.
    pub order: u32,
    /// Lebesgue exponent.
    pub p: f64,
    /// `sup_{|α| = k} ‖∂^α f‖_{L^p} / (2^{jk} ‖f‖_{L^p})`; bounded above and
    /// below by `C^{±(k+1)}`.
    pub ratio: f64,
    /// `‖f‖_{L^∞} / (2^{jd/p} ‖f‖_{L^p})`, the `q = ∞` companion.
    pub sup_ratio: f64,
}

/// Both sides of the weighted Bernstein-like inequality
/// `c R₁²/p² ∫|u|^p ≤ ∫|∇u|²|u|^{p-2} = -1/(p-1) ∫ Δu |u|^{p-2} u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernsteinLikeReport {
    /// Exponent `p`.
    pub p: f64,
    /// Inner radius `R₁ = 3·2^j/4`.
    pub inner_radius: f64,
    /// `R₁²/p² ∫|u|^p`.
    pub lower: f64,
    /// `∫ |∇u|² |u|^{p-2}`.
    pub gradient_form: f64,
    /// `-1/(p-1) ∫ Δu |u|^{p-2} u`.
    pub laplacian_form: f64,
}

impl BernsteinLikeReport {
    /// The largest `c` for which the inequality holds on this field.
    pub fn constant(&self) -> f64 {
        self.gradient_form / self.lower
    }
}

const LEAKAGE_TOL: f64 = 1e-12;

fn check_annulus(partition: &DyadicPartition, f: &Field, j: i32) -> Result<(f64, f64)> {
    partition.grid().check_same(f.grid())?;
    if j < 0 || j > partition.j_max() {
        return Err(Error::BlockOutOfRange {
            j,
            j_max: partition.j_max(),
        });
    }
    let (lo, hi) = DyadicPartition::support(j);
    let mags = f.grid().magnitudes();
    let mut inside = 0.0;
    let mut outside = 0.0;
    for (c, m) in f.spectral().iter().zip(mags) {
        if *m >= lo && *m <= hi {
            inside += c.norm_sqr();
        } else {
            outside += c.norm_sqr();
        }
    }
    let total = inside + outside;
    let leakage = if total > 0.0 { outside / total } else { 0.0 };
    if leakage > LEAKAGE_TOL {
        return Err(Error::NotBandLimited { j, leakage });
    }
    Ok((lo, hi))
}

fn multi_indices(dim: usize, order: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for a in 0..=order {
        for b in 0..=order - a {
            let c = order - a - b;
            if dim == 2 && c != 0 {
                continue;
            }
            out.push([a, b, c]);
        }
    }
    out
}

/// Measure the Bernstein ratios of `f`, which must be spectrally supported
/// in the annulus `3·2^j/4 ≤ |ξ| ≤ 8·2^j/3` of block `j ≥ 0`.
pub fn check_bernstein(partition: &DyadicPartition, f: &Field, j: i32, order: u32, p: f64) -> Result<BernsteinReport> {
    check_exponent(p)?;
    check_annulus(partition, f, j)?;
    let dim = f.grid().dim();
    let norm = f.lp_norm(p)?;
    let mut sup = 0.0f64;
    for alpha in multi_indices(dim, order) {
        let mut g = f.clone();
        for (axis, count) in alpha.iter().enumerate().take(dim) {
            for _ in 0..*count {
                g = g.derivative(axis);
            }
        }
        sup = sup.max(g.lp_norm(p)?);
    }
    let scale = libm::exp2(j as f64);
    let ratio = sup / (libm::pow(scale, order as f64) * norm);
    let sup_ratio = f.lp_norm(f64::INFINITY)? / (libm::pow(scale, dim as f64 / p) * norm);
    Ok(BernsteinReport {
        j,
        order,
        p,
        ratio,
        sup_ratio,
    })
}

/// Evaluate both sides of the Bernstein-like inequality for `1 < p < ∞`.
pub fn check_bernstein_like(partition: &DyadicPartition, f: &Field, j: i32, p: f64) -> Result<BernsteinLikeReport> {
    if !(p > 1.0) || p.is_infinite() {
        return Err(Error::InvalidExponent(p));
    }
    let (inner_radius, _) = check_annulus(partition, f, j)?;
    let grid = f.grid();
    let cell = grid.cell_volume();
    let grad = f.gradient();
    let lap = f.laplacian();
    let mut integral = 0.0;
    let mut gradient_form = 0.0;
    let mut laplacian_form = 0.0;
    for s in 0..grid.len() {
        let u = f.real()[s];
        let au = u.abs();
        let g2: f64 = grad.components().iter().map(|c| c.real()[s] * c.real()[s]).sum();
        let w = libm::pow(au, p - 2.0);
        integral += libm::pow(au, p);
        gradient_form += g2 * w;
        laplacian_form += lap.real()[s] * w * u;
    }
    Ok(BernsteinLikeReport {
        p,
        inner_radius,
        lower: inner_radius * inner_radius / (p * p) * integral * cell,
        gradient_form: gradient_form * cell,
        laplacian_form: -laplacian_form * cell / (p - 1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{random_shell, rng};
    use crate::Grid;
    use core::f64::consts::TAU;

    #[test]
    fn single_mode_ratio_is_one() {
        let grid = Grid::new(2, 64, TAU).unwrap();
        let part = DyadicPartition::new(&grid);
        for j in 0..4 {
            let k = libm::exp2(j as f64);
            let f = Field::from_fn(&grid, |x| libm::sin(k * x[0]));
            let rep = check_bernstein(&part, &f, j, 1, 2.0).unwrap();
            assert!((rep.ratio - 1.0).abs() < 1e-12, "j = {j}: {}", rep.ratio);
        }
    }

    #[test]
    fn random_annulus_ratios_are_bounded() {
        let grid = Grid::new(2, 64, TAU).unwrap();
        let part = DyadicPartition::new(&grid);
        let mut r = rng(31);
        for j in 1..4 {
            let (lo, hi) = DyadicPartition::support(j);
            for p in [2.0, 4.0] {
                let f = random_shell(&grid, lo, hi, &mut r);
                let rep = check_bernstein(&part, &f, j, 1, p).unwrap();
                assert!(rep.ratio >= 0.25 && rep.ratio <= 4.0, "j {j} p {p}: {}", rep.ratio);
            }
        }
    }

    #[test]
    fn rejects_fields_outside_annulus() {
        let grid = Grid::new(2, 32, TAU).unwrap();
        let part = DyadicPartition::new(&grid);
        let f = Field::from_fn(&grid, |x| libm::sin(x[0]) + libm::sin(8.0 * x[1]));
        assert!(matches!(
            check_bernstein(&part, &f, 3, 1, 2.0),
            Err(Error::NotBandLimited { j: 3, .. })
        ));
        assert!(check_bernstein(&part, &f, -1, 1, 2.0).is_err());
    }

    #[test]
    fn weighted_inequality_and_integration_by_parts() {
        let grid = Grid::new(2, 64, TAU).unwrap();
        let part = DyadicPartition::new(&grid);
        let mut r = rng(32);
        // keep |u|²u resolved so the two forms agree exactly
        let (lo, hi) = DyadicPartition::support(2);
        for _ in 0..10 {
            let f = random_shell(&grid, lo, hi.min(10.0), &mut r);
            let rep = check_bernstein_like(&part, &f, 2, 4.0).unwrap();
            assert!(rep.gradient_form >= rep.lower, "constant {}", rep.constant());
            assert!((rep.gradient_form - rep.laplacian_form).abs() <= 1e-10 * rep.gradient_form);
        }
    }
}
