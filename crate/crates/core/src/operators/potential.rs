//! The Poisson solve `Δφ = n - p` and the multiplier `∇(-Δ)^{-1}`.
//!
//! Sign convention: `ψ = ∇(-Δ)^{-1}(p - n) = ∇φ`. Only
//! [`grad_inv_laplacian_dropping_mean`] owns the symbol `i k̃ / |k̃|²`; every
//! other path goes through it.

use crate::{Complex64, Error, Field, Result, VectorField};

/// What to do with charge densities whose means differ.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ChargePolicy {
    /// Reject with [`Error::NonNeutral`].
    #[default]
    Strict,
    /// Shift `p` by `mean(n) - mean(p)` before solving.
    Renormalize,
}

/// Result of [`solve_potential`].
#[derive(Debug, Clone)]
pub struct Potential {
    /// Zero-mean `φ` with `Δφ = n - p`.
    pub phi: Field,
    /// `∇φ = ∇(-Δ)^{-1}(p - n)`.
    pub grad_phi: VectorField,
    /// The positive density actually used; differs from the input only under
    /// [`ChargePolicy::Renormalize`].
    pub p: Field,
}

const NEUTRAL_TOL: f64 = 1e-10;
const MEAN_TOL: f64 = 1e-12;

/// Check `|mean n - mean p| ≤ 1e-10 (‖n‖_∞ + ‖p‖_∞)`.
pub fn check_neutral(n: &Field, p: &Field) -> Result<()> {
    n.grid().check_same(p.grid())?;
    let (mn, mp) = (n.mean(), p.mean());
    let scale = n.lp_norm(f64::INFINITY)? + p.lp_norm(f64::INFINITY)?;
    if (mn - mp).abs() > NEUTRAL_TOL * scale {
        return Err(Error::NonNeutral { mean_n: mn, mean_p: mp });
    }
    Ok(())
}

/// `p + mean(n) - mean(p)`, the neutral companion of `n`.
pub fn renormalize_charge(n: &Field, p: &Field) -> Field {
    p.shifted(n.mean() - p.mean())
}

/// `∇(-Δ)^{-1} a` with the mean of `a` ignored.
pub(crate) fn grad_inv_laplacian_dropping_mean(a: &Field) -> VectorField {
    let grid = a.grid().clone();
    VectorField::new(
        (0..grid.dim())
            .map(|axis| {
                a.apply_multiplier(|s| {
                    let k2 = grid.resolved_sq(s);
                    if k2 == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        Complex64::new(0.0, grid.resolved_wavevector(s)[axis] / k2)
                    }
                })
            })
            .collect(),
    )
    .expect("shared grid")
}

fn check_zero_mean(a: &Field) -> Result<()> {
    let mean = a.mean();
    if mean.abs() > MEAN_TOL * a.lp_norm(f64::INFINITY)? {
        return Err(Error::NonzeroMean(mean));
    }
    Ok(())
}

/// `∇(-Δ)^{-1} a`, symbol `i k̃ / |k̃|²`, so that `div ∇(-Δ)^{-1} a = -a`.
/// Requires `a` to have zero mean.
pub fn grad_inv_laplacian(a: &Field) -> Result<VectorField> {
    check_zero_mean(a)?;
    Ok(grad_inv_laplacian_dropping_mean(a))
}

/// `(-Δ)^{-1} a` on zero-mean `a`, returning a zero-mean field.
pub fn inv_laplacian(a: &Field) -> Result<Field> {
    check_zero_mean(a)?;
    Ok(inv_laplacian_dropping_mean(a))
}

/// Solve `Δφ = n - p` on the torus.
pub fn solve_potential(n: &Field, p: &Field, policy: ChargePolicy) -> Result<Potential> {
    n.grid().check_same(p.grid())?;
    let p = match policy {
        ChargePolicy::Strict => {
            check_neutral(n, p)?;
            p.clone()
        }
        ChargePolicy::Renormalize => renormalize_charge(n, p),
    };
    let source = &p - n;
    let phi = inv_laplacian_dropping_mean(&source);
    let grad_phi = grad_inv_laplacian_dropping_mean(&source);
    Ok(Potential { phi, grad_phi, p })
}

fn inv_laplacian_dropping_mean(a: &Field) -> Field {
    let grid = a.grid().clone();
    a.apply_real_multiplier(|s| {
        let k2 = grid.resolved_sq(s);
        if k2 == 0.0 {
            0.0
        } else {
            1.0 / k2
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{max_abs_diff, random_band_limited, random_field, rng};
    use crate::Grid;
    use core::f64::consts::TAU;

    #[test]
    fn single_mode() {
        let grid = Grid::new(2, 16, TAU).unwrap();
        let n = Field::from_fn(&grid, |x| 1.0 + libm::sin(x[0]));
        let p = Field::constant(&grid, 1.0);
        let pot = solve_potential(&n, &p, ChargePolicy::Strict).unwrap();
        let phi = Field::from_fn(&grid, |x| -libm::sin(x[0]));
        let gx = Field::from_fn(&grid, |x| -libm::cos(x[0]));
        assert!(max_abs_diff(&pot.phi, &phi) < 1e-14);
        assert!(max_abs_diff(pot.grad_phi.component(0), &gx) < 1e-14);
        assert!(pot.grad_phi.component(1).lp_norm(f64::INFINITY).unwrap() < 1e-14);
    }

    #[test]
    fn equal_densities_give_zero() {
        let grid = Grid::new(2, 16, TAU).unwrap();
        let n = random_field(&grid, &mut rng(61));
        let pot = solve_potential(&n, &n, ChargePolicy::Strict).unwrap();
        assert_eq!(pot.phi.lp_norm(f64::INFINITY).unwrap(), 0.0);
        assert_eq!(pot.grad_phi.lp_norm(f64::INFINITY).unwrap(), 0.0);
    }

    #[test]
    fn random_neutral_pair() {
        for (dim, n, len) in [(2, 32, TAU), (3, 16, TAU), (2, 32, 3.0)] {
            let grid = Grid::new(dim, n, len).unwrap();
            let mut r = rng(62);
            let n0 = random_band_limited(&grid, 6, &mut r).shifted(2.0);
            let p0 = random_band_limited(&grid, 6, &mut r);
            let p0 = p0.shifted(n0.mean() - p0.mean());
            let pot = solve_potential(&n0, &p0, ChargePolicy::Strict).unwrap();
            let diff = &n0 - &p0;
            let residual = (&pot.phi.laplacian() - &diff).lp_norm(2.0).unwrap();
            assert!(residual <= 1e-11 * diff.lp_norm(2.0).unwrap());
            assert!(pot.phi.mean().abs() < 1e-15);
            // lattice bound max_{k≠0} 1/|k| = L/2π
            let bound = len / TAU * diff.lp_norm(2.0).unwrap();
            assert!(pot.grad_phi.lp_norm(2.0).unwrap() <= bound * (1.0 + 1e-12));
            assert!(max_abs_diff(&pot.phi.gradient().component(0), pot.grad_phi.component(0)) < 1e-12);
        }
    }

    #[test]
    fn non_neutral_is_rejected_or_renormalized() {
        let grid = Grid::new(2, 16, TAU).unwrap();
        let n = Field::from_fn(&grid, |x| 1.0 + 0.2 * libm::exp(libm::cos(x[0]) + libm::cos(x[1])));
        let p = Field::zeros(&grid);
        assert!(matches!(
            solve_potential(&n, &p, ChargePolicy::Strict),
            Err(Error::NonNeutral { .. })
        ));
        let pot = solve_potential(&n, &p, ChargePolicy::Renormalize).unwrap();
        assert!((pot.p.mean() - n.mean()).abs() < 1e-14);
        assert!(check_neutral(&n, &pot.p).is_ok());
    }

    #[test]
    fn grad_inv_laplacian_sign() {
        let grid = Grid::new(2, 16, TAU).unwrap();
        let a = Field::from_fn(&grid, |x| libm::cos(x[1]));
        let g = grad_inv_laplacian(&a).unwrap();
        assert!(g.component(0).lp_norm(f64::INFINITY).unwrap() < 1e-15);
        assert!(max_abs_diff(g.component(1), &Field::from_fn(&grid, |x| -libm::sin(x[1]))) < 1e-14);
        assert!(max_abs_diff(&g.divergence(), &(-&a)) < 1e-14);
        let z = grad_inv_laplacian(&Field::zeros(&grid)).unwrap();
        assert_eq!(z.lp_norm(f64::INFINITY).unwrap(), 0.0);
    }

    #[test]
    fn grad_inv_laplacian_divergence() {
        let grid = Grid::new(2, 32, TAU).unwrap();
        let a = random_band_limited(&grid, 10, &mut rng(63));
        let a = a.shifted(-a.mean());
        let g = grad_inv_laplacian(&a).unwrap();
        let scale = a.lp_norm(2.0).unwrap();
        assert!((&g.divergence() + &a).lp_norm(2.0).unwrap() <= 1e-11 * scale);
        assert!(matches!(grad_inv_laplacian(&a.shifted(0.5)), Err(Error::NonzeroMean(_))));
        assert!(inv_laplacian(&a).unwrap().mean().abs() < 1e-15);
    }
}
