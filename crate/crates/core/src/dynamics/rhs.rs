use alloc::vec::Vec;

use super::{Dynamics, Formulation, SimState, Tendencies};
use crate::littlewood_paley::DyadicPartition;
use crate::operators::{leray_project, pi_decompose, solve_potential, BlockDecomposition, ChargePolicy, PiParts};
use crate::{Field, Result, VectorField};

/// `T_u∇f + T_{∇f}u + div R(u, f)`, the Bony form of `u·∇f` for solenoidal `u`.
#[derive(Debug, Clone)]
pub struct TransportPieces {
    /// `Σ_i T_{u^i} ∂_i f`.
    pub low_high: Field,
    /// `Σ_i T_{∂_i f} u^i`.
    pub high_low: Field,
    /// `Σ_i ∂_i R(u^i, f)`.
    pub remainder: Field,
}

impl TransportPieces {
    /// Sum of the three pieces.
    pub fn sum(&self) -> Field {
        &(&self.low_high + &self.high_low) + &self.remainder
    }
}

/// Decomposition pieces behind [`Dynamics::rhs_modified`].
#[derive(Debug, Clone)]
pub struct ModifiedPieces {
    /// `Π(u, u)`.
    pub pi: PiParts,
    /// Transport of `n`.
    pub transport_n: TransportPieces,
    /// Transport of `p`.
    pub transport_p: TransportPieces,
}

pub(crate) fn transport_pieces(partition: &DyadicPartition, u: &VectorField, f: &Field) -> Result<TransportPieces> {
    u.grid().check_same(f.grid())?;
    let grid = u.grid();
    let bu: Vec<BlockDecomposition> = u
        .components()
        .iter()
        .map(|c| BlockDecomposition::new(partition, c))
        .collect::<Result<_>>()?;
    let bdf: Vec<BlockDecomposition> = (0..u.dim())
        .map(|i| BlockDecomposition::new(partition, &f.derivative(i)))
        .collect::<Result<_>>()?;
    let bf = BlockDecomposition::new(partition, f)?;
    let mut low_high = alloc::vec![0.0; grid.len()];
    let mut high_low = alloc::vec![0.0; grid.len()];
    let mut remainder = Field::zeros(grid);
    for i in 0..u.dim() {
        bu[i].add_paraproduct(&bdf[i], &mut low_high);
        bdf[i].add_paraproduct(&bu[i], &mut high_low);
        let mut r = alloc::vec![0.0; grid.len()];
        bu[i].add_remainder(&bf, &mut r);
        remainder = &remainder + &Field::from_real(grid, r)?.derivative(i);
    }
    Ok(TransportPieces {
        low_high: Field::from_real(grid, low_high)?.dealias(),
        high_low: Field::from_real(grid, high_low)?.dealias(),
        remainder: remainder.dealias(),
    })
}

/// Electric terms shared by both formulations.
pub(crate) struct Electro {
    /// `P((n - p)ψ)`.
    pub force: VectorField,
    /// `div(nψ)`.
    pub flux_n: Field,
    /// `div(pψ)`.
    pub flux_p: Field,
}

pub(crate) fn electro(n: &Field, p: &Field) -> Result<Electro> {
    let pot = solve_potential(n, p, ChargePolicy::Strict)?;
    let psi = pot.grad_phi;
    let force = leray_project(&psi.times_scalar(&(n - p))?);
    Ok(Electro {
        force,
        flux_n: psi.times_scalar(n)?.divergence(),
        flux_p: psi.times_scalar(p)?.divergence(),
    })
}

impl Dynamics {
    /// Nonlinear part of the tendencies (everything but diffusion).
    pub(crate) fn nonlinear(&self, state: &SimState) -> Result<Tendencies> {
        match self.formulation() {
            Formulation::Original => self.nonlinear_original(state),
            Formulation::Modified => Ok(self.nonlinear_modified(state)?.0),
        }
    }

    fn nonlinear_original(&self, state: &SimState) -> Result<Tendencies> {
        let e = electro(&state.n, &state.p)?;
        let adv = state.u.advect(&state.u)?;
        Ok(Tendencies {
            du: &leray_project(&adv.scaled(-1.0)) + &e.force,
            dn: -&(&state.u.dot_grad(&state.n)? + &e.flux_n),
            dp: &e.flux_p - &state.u.dot_grad(&state.p)?,
        })
    }

    fn nonlinear_modified(&self, state: &SimState) -> Result<(Tendencies, ModifiedPieces)> {
        let part = self.partition();
        let e = electro(&state.n, &state.p)?;
        let pi = pi_decompose(part, &state.u, &state.u)?;
        let transport_n = transport_pieces(part, &state.u, &state.n)?;
        let transport_p = transport_pieces(part, &state.u, &state.p)?;
        let adv = state.u.advect(&state.u)?;
        let du = &(&e.force - &adv) - &pi.total();
        let dn = -&(&transport_n.sum() + &e.flux_n);
        let dp = &e.flux_p - &transport_p.sum();
        Ok((
            Tendencies { du, dn, dp },
            ModifiedPieces {
                pi,
                transport_n,
                transport_p,
            },
        ))
    }

    fn add_diffusion(state: &SimState, mut tend: Tendencies) -> Tendencies {
        if state.nu != 0.0 {
            tend.du = &tend.du + &state.u.map(Field::laplacian).scaled(state.nu);
        }
        tend.dn = &tend.dn + &state.n.laplacian();
        tend.dp = &tend.dp + &state.p.laplacian();
        tend
    }

    /// Tendencies of the original system; the pressure is eliminated by the
    /// Leray projector.
    pub fn rhs_enpp(&self, state: &SimState) -> Result<Tendencies> {
        self.check_state(state)?;
        Ok(Self::add_diffusion(state, self.nonlinear_original(state)?))
    }

    /// Tendencies of the modified system, where `Π(u, u)` replaces the
    /// pressure and the charge transport is written in Bony form; returns the
    /// decomposition pieces as well.
    pub fn rhs_modified(&self, state: &SimState) -> Result<(Tendencies, ModifiedPieces)> {
        self.check_state(state)?;
        let (tend, pieces) = self.nonlinear_modified(state)?;
        Ok((Self::add_diffusion(state, tend), pieces))
    }

    /// Tendencies of the configured formulation.
    pub fn rhs(&self, state: &SimState) -> Result<Tendencies> {
        match self.formulation() {
            Formulation::Original => self.rhs_enpp(state),
            Formulation::Modified => Ok(self.rhs_modified(state)?.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{random_band_limited, random_solenoidal, rng, taylor_green};
    use crate::{Error, Grid};
    use core::f64::consts::TAU;

    fn charged(grid: &Grid, seed: u64) -> (Field, Field) {
        let mut r = rng(seed);
        let n = random_band_limited(grid, 6, &mut r).scaled(0.1).shifted(1.0);
        let p = random_band_limited(grid, 6, &mut r).scaled(0.1).shifted(1.0);
        let p = p.shifted(n.mean() - p.mean());
        (n, p)
    }

    #[test]
    fn equal_constant_charges_are_steady() {
        let grid = Grid::new(2, 16, TAU).unwrap();
        let dynamics = Dynamics::new(&grid);
        let c = Field::constant(&grid, 0.8);
        let state = SimState::new(VectorField::zeros(&grid), c.clone(), c, 0.1).unwrap();
        for form in [Formulation::Original, Formulation::Modified] {
            let t = dynamics.clone().with_formulation(form).rhs(&state).unwrap();
            assert_eq!(t.l2_norm(), 0.0);
        }
    }

    #[test]
    fn charge_free_taylor_green_matches_euler_oracle() {
        let grid = Grid::new(2, 32, TAU).unwrap();
        let dynamics = Dynamics::new(&grid);
        let u = taylor_green(&grid);
        let z = Field::zeros(&grid);
        let state = SimState::new(u.clone(), z.clone(), z, 0.0).unwrap();
        let t = dynamics.rhs_enpp(&state).unwrap();
        let oracle = leray_project(&u.advect(&u).unwrap()).scaled(-1.0);
        assert!((&t.du - &oracle).lp_norm(f64::INFINITY).unwrap() < 1e-10);
        // Taylor-Green is an Euler equilibrium
        assert!(t.du.lp_norm(f64::INFINITY).unwrap() < 1e-13);
    }

    #[test]
    fn non_neutral_state_is_rejected() {
        let grid = Grid::new(2, 16, TAU).unwrap();
        let n = Field::from_fn(&grid, |x| 1.0 + 0.3 * libm::exp(-4.0 * (x[0] - 3.0) * (x[0] - 3.0)));
        let state = SimState::new(VectorField::zeros(&grid), n, Field::zeros(&grid), 0.0).unwrap();
        assert!(matches!(Dynamics::new(&grid).rhs_enpp(&state), Err(Error::NonNeutral { .. })));
    }

    #[test]
    fn formulations_agree_on_solenoidal_states() {
        let grid = Grid::new(2, 64, TAU).unwrap();
        let dynamics = Dynamics::new(&grid);
        let u = random_solenoidal(&grid, 8, &mut rng(91));
        let u = u.map(|c| c.shifted(-c.mean()));
        let (n, p) = charged(&grid, 92);
        let state = SimState::new(u, n, p, 0.0).unwrap();
        let a = dynamics.rhs_enpp(&state).unwrap();
        let (b, pieces) = dynamics.rhs_modified(&state).unwrap();
        assert!(a.difference(&b).l2_norm() <= 1e-9 * a.l2_norm());
        let direct = state.u.dot_grad(&state.n).unwrap();
        assert!((&pieces.transport_n.sum() - &direct).lp_norm(2.0).unwrap() <= 1e-10 * direct.lp_norm(2.0).unwrap());
    }

    #[test]
    fn zero_velocity_leaves_only_diffusion_and_electro() {
        let grid = Grid::new(2, 32, TAU).unwrap();
        let dynamics = Dynamics::new(&grid);
        let (n, p) = charged(&grid, 93);
        let state = SimState::new(VectorField::zeros(&grid), n, p, 0.0).unwrap();
        let a = dynamics.rhs_enpp(&state).unwrap();
        let (b, pieces) = dynamics.rhs_modified(&state).unwrap();
        assert_eq!(pieces.pi.total().lp_norm(f64::INFINITY).unwrap(), 0.0);
        assert_eq!(pieces.transport_n.sum().lp_norm(f64::INFINITY).unwrap(), 0.0);
        assert!(a.difference(&b).l2_norm() <= 1e-14 * a.l2_norm());
    }

    #[test]
    fn charge_free_state_has_no_electric_terms() {
        let grid = Grid::new(2, 32, TAU).unwrap();
        let u = random_solenoidal(&grid, 6, &mut rng(94));
        let z = Field::zeros(&grid);
        let e = electro(&z, &z).unwrap();
        assert_eq!(e.force.lp_norm(f64::INFINITY).unwrap(), 0.0);
        assert_eq!(e.flux_n.lp_norm(f64::INFINITY).unwrap(), 0.0);
        let state = SimState::new(u, z.clone(), z, 0.0).unwrap();
        let (t, _) = Dynamics::new(&grid).rhs_modified(&state).unwrap();
        assert_eq!(t.dn.lp_norm(f64::INFINITY).unwrap(), 0.0);
    }
}
