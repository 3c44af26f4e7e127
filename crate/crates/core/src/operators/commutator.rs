use alloc::vec::Vec;

use crate::littlewood_paley::{besov_norm, BesovSpec, DyadicPartition};
use crate::norms::{check_exponent, lp_norm, lr_norm};
use crate::{Error, Field, Result, VectorField};

/// `R_j = [v·∇, Δ_j] f = v·∇(Δ_j f) - Δ_j(v·∇f)`, dealiased.
pub fn commutator(partition: &DyadicPartition, v: &VectorField, f: &Field, j: i32) -> Result<Field> {
    v.grid().check_same(f.grid())?;
    let block = partition.dyadic_block(f, j)?;
    let first = v.dot_grad(&block)?;
    let second = partition.dyadic_block(&v.dot_grad(f)?, j)?;
    Ok(&first - &second)
}

/// Both sides of the commutator estimate
/// `‖2^{jσ}‖R_j‖_{L^p}‖_{l^r} ≤ C (‖∇v‖_∞ ‖f‖_{B^σ_{p,r}} + ‖∇f‖_{L^{p₂}} ‖∇v‖_{B^{σ-1}_{p₁,r}})`
/// with `1/p₂ = 1/p - 1/p₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorEstimate {
    /// Left-hand side.
    pub lhs: f64,
    /// `‖∇v‖_∞ ‖f‖_{B^σ_{p,r}}`.
    pub gradient_term: f64,
    /// `‖∇f‖_{L^{p₂}} ‖∇v‖_{B^{σ-1}_{p₁,r}}`.
    pub cross_term: f64,
}

impl CommutatorEstimate {
    /// The smallest `C` for which the estimate holds on this input.
    pub fn constant(&self) -> f64 {
        self.lhs / (self.gradient_term + self.cross_term)
    }
}

/// `‖(2^{js} ‖Δ_j ∇v‖_{L^p})_j‖_{l^r}` with the Frobenius norm of the Jacobian.
fn jacobian_besov_norm(partition: &DyadicPartition, v: &VectorField, spec: BesovSpec) -> Result<f64> {
    let grid = v.grid();
    let d = v.dim();
    let derivs: Vec<Field> = v
        .components()
        .iter()
        .flat_map(|c| (0..d).map(move |a| c.derivative(a)))
        .collect();
    let mut terms = Vec::new();
    for j in partition.indices() {
        let blocks = derivs
            .iter()
            .map(|f| partition.dyadic_block(f, j))
            .collect::<Result<Vec<_>>>()?;
        let mags = (0..grid.len()).map(|s| libm::sqrt(blocks.iter().map(|b| b.real()[s] * b.real()[s]).sum()));
        terms.push(libm::exp2(j as f64 * spec.s) * lp_norm(mags, grid.cell_volume(), spec.p)?);
    }
    lr_norm(terms, spec.r)
}

/// Evaluate both sides of the commutator estimate for `p ≤ p₁`.
pub fn commutator_estimate(
    partition: &DyadicPartition,
    v: &VectorField,
    f: &Field,
    sigma: f64,
    p: f64,
    p1: f64,
    r: f64,
) -> Result<CommutatorEstimate> {
    check_exponent(p)?;
    check_exponent(p1)?;
    if p1 < p {
        return Err(Error::InvalidParameter("commutator estimate needs p <= p1"));
    }
    let spec = BesovSpec::new(sigma, p, r)?;
    let terms = partition
        .indices()
        .map(|j| Ok(libm::exp2(j as f64 * sigma) * commutator(partition, v, f, j)?.lp_norm(p)?))
        .collect::<Result<Vec<_>>>()?;
    let lhs = lr_norm(terms, r)?;
    let inv_p2 = 1.0 / p - 1.0 / p1;
    let p2 = if inv_p2 <= 0.0 { f64::INFINITY } else { 1.0 / inv_p2 };
    Ok(CommutatorEstimate {
        lhs,
        gradient_term: v.gradient_sup() * besov_norm(partition, f, spec)?,
        cross_term: f.gradient().lp_norm(p2)? * jacobian_besov_norm(partition, v, BesovSpec::new(sigma - 1.0, p1, r)?)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{random_band_limited, random_shell, random_solenoidal, rng};
    use crate::Grid;
    use core::f64::consts::TAU;

    #[test]
    fn constant_velocity_commutes() {
        let grid = Grid::new(2, 32, TAU).unwrap();
        let part = DyadicPartition::new(&grid);
        let v = VectorField::new(alloc::vec![Field::constant(&grid, 0.7), Field::constant(&grid, -1.3)]).unwrap();
        let f = random_band_limited(&grid, 10, &mut rng(81));
        for j in part.indices() {
            let c = commutator(&part, &v, &f, j).unwrap();
            assert!(c.lp_norm(f64::INFINITY).unwrap() < 1e-13, "block {j}");
        }
    }

    #[test]
    fn disjoint_supports_vanish() {
        let grid = Grid::new(2, 64, TAU).unwrap();
        let part = DyadicPartition::new(&grid);
        let mut r = rng(82);
        // v at |ξ| ≤ 1, f in block 4's interior: no product reaches block 1
        let v = random_solenoidal(&grid, 1, &mut r);
        let f = random_shell(&grid, 14.0, 20.0, &mut r);
        let c = commutator(&part, &v, &f, 1).unwrap();
        assert!(c.lp_norm(f64::INFINITY).unwrap() < 1e-13);
    }

    #[test]
    fn estimate_constant_is_stable_across_seeds() {
        let grid = Grid::new(2, 64, TAU).unwrap();
        let part = DyadicPartition::new(&grid);
        let mut constants = Vec::new();
        for seed in 0..6 {
            let mut r = rng(83 + seed);
            let v = random_solenoidal(&grid, 8, &mut r);
            let f = random_band_limited(&grid, 16, &mut r);
            let est = commutator_estimate(&part, &v, &f, 0.5, 2.0, 4.0, 2.0).unwrap();
            assert!(est.lhs.is_finite() && est.lhs > 0.0);
            constants.push(est.constant());
        }
        let lo = constants.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = constants.iter().cloned().fold(0.0, f64::max);
        assert!(hi <= 4.0, "{constants:?}");
        assert!(hi / lo < 4.0, "{constants:?}");
    }
}
