//! Named initial data. Every preset is smooth, solenoidal, electroneutral and
//! has positive densities; `charge_imbalance` exists to break neutrality on
//! purpose.

use enpp_core::dynamics::SimState;
use enpp_core::operators::{check_neutral, leray_project, renormalize_charge};
use enpp_core::{Complex64, Field, Grid, VectorField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{InitialConfig, Preset};
use crate::error::AppResult;

/// Build the initial state for `viscosity`. Fails with `NonNeutral` when the
/// charges are unbalanced and renormalization is off.
pub fn initial_state(grid: &Grid, initial: &InitialConfig, viscosity: f64) -> AppResult<SimState> {
    let a = initial.charge_amplitude;
    let (u, n, p) = match initial.preset {
        Preset::TaylorGreen => (taylor_green(grid, initial.amplitude), Field::zeros(grid), Field::zeros(grid)),
        Preset::ChargedTaylorGreen => {
            let k0 = std::f64::consts::TAU / grid.length();
            let bump = Field::from_fn(grid, |x| (k0 * x[0]).cos() * (k0 * x[1]).cos());
            (
                taylor_green(grid, initial.amplitude),
                bump.scaled(a).shifted(1.0),
                bump.scaled(-a).shifted(1.0),
            )
        }
        Preset::ChargedBlob => {
            let (n, p) = blobs(grid, a);
            (taylor_green(grid, initial.amplitude), n, p)
        }
        Preset::RandomSolenoidal => {
            let mut rng = ChaCha8Rng::seed_from_u64(initial.seed);
            let u = VectorField::new(
                (0..grid.dim())
                    .map(|_| random_band_limited(grid, initial.modes, &mut rng))
                    .collect(),
            )?;
            let u = leray_project(&u).dealias();
            let umax = u.lp_norm(f64::INFINITY)?;
            let u = if umax > 0.0 { u.scaled(initial.amplitude / umax) } else { u };
            let g = random_band_limited(grid, initial.modes, &mut rng);
            let g = g.shifted(-g.mean());
            let gmax = g.lp_norm(f64::INFINITY)?;
            let g = if gmax > 0.0 { g.scaled(1.0 / gmax) } else { g };
            (u, g.scaled(a).shifted(1.0), g.scaled(-a).shifted(1.0))
        }
    };
    let mut p = p.shifted(initial.charge_imbalance);
    if initial.renormalize_charge {
        p = renormalize_charge(&n, &p);
    } else {
        check_neutral(&n, &p)?;
    }
    Ok(SimState::new(u, n, p, viscosity)?)
}

/// `A (sin x cos y, -cos x sin y)`, times `cos z` in three dimensions.
fn taylor_green(grid: &Grid, amplitude: f64) -> VectorField {
    let k0 = std::f64::consts::TAU / grid.length();
    let d = grid.dim();
    VectorField::from_fn(grid, |x, out| {
        let (sx, cx) = (k0 * x[0]).sin_cos();
        let (sy, cy) = (k0 * x[1]).sin_cos();
        let cz = if d == 3 { (k0 * x[2]).cos() } else { 1.0 };
        out[0] = amplitude * sx * cy * cz;
        out[1] = -amplitude * cx * sy * cz;
        if d == 3 {
            out[2] = 0.0;
        }
    })
}

/// Two periodized Gaussians half a period apart; `p` is a translate of `n`,
/// so the totals agree.
fn blobs(grid: &Grid, a: f64) -> (Field, Field) {
    let l = grid.length();
    let sigma = l / 10.0;
    let gaussian = |x: &[f64], shift: f64| {
        let r2: f64 = x
            .iter()
            .enumerate()
            .map(|(axis, xi)| {
                let c = if axis == 0 { 0.25 * l + shift } else { 0.5 * l };
                let mut dx = (xi - c).rem_euclid(l);
                if dx > 0.5 * l {
                    dx -= l;
                }
                dx * dx
            })
            .sum();
        (-r2 / (2.0 * sigma * sigma)).exp()
    };
    let n = Field::from_fn(grid, |x| 1.0 + a * gaussian(x, 0.0)).dealias();
    let p = Field::from_fn(grid, |x| 1.0 + a * gaussian(x, 0.5 * l)).dealias();
    (n, p)
}

/// Random coefficients on `|k_i| ≤ modes`, uniform in the unit square.
fn random_band_limited(grid: &Grid, modes: usize, rng: &mut ChaCha8Rng) -> Field {
    let coefficients = (0..grid.len())
        .map(|s| {
            let k = grid.integer_frequency(s);
            let re: f64 = rng.random_range(-1.0..1.0);
            let im: f64 = rng.random_range(-1.0..1.0);
            if k.iter().all(|ki| ki.unsigned_abs() as usize <= modes) {
                Complex64::new(re, im)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    Field::from_spectral(grid, coefficients).expect("one coefficient per site")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config_str;
    use crate::error::AppError;

    fn config(preset: &str, extra: &str) -> InitialConfig {
        let text = format!("[grid]\nn = 16\n[initial]\npreset = \"{preset}\"\n{extra}\n[run]\nfinal_time = 1\n");
        parse_config_str(&text).unwrap().initial
    }

    #[test]
    fn presets_are_admissible() {
        let grid = Grid::new(2, 16, std::f64::consts::TAU).unwrap();
        for preset in ["taylor-green", "charged-taylor-green", "charged-blob", "random-solenoidal"] {
            let s = initial_state(&grid, &config(preset, ""), 0.0).unwrap();
            assert!(s.u.divergence().lp_norm(2.0).unwrap() < 1e-12, "{preset}");
            assert!((s.n.mean() - s.p.mean()).abs() < 1e-14, "{preset}");
            assert!(s.n.min() >= 0.0 && s.p.min() >= 0.0, "{preset}");
        }
    }

    #[test]
    fn charged_taylor_green_values() {
        let grid = Grid::new(2, 16, std::f64::consts::TAU).unwrap();
        let s = initial_state(&grid, &config("charged-taylor-green", ""), 0.0).unwrap();
        assert!((s.n.max() - 1.1).abs() < 1e-14);
        assert!((s.p.min() - 0.9).abs() < 1e-14);
        assert!((s.u.lp_norm(f64::INFINITY).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn seeded_data_repeat() {
        let grid = Grid::new(3, 8, std::f64::consts::TAU).unwrap();
        let c = config("random-solenoidal", "seed = 7\nmodes = 2");
        let a = initial_state(&grid, &c, 0.0).unwrap();
        let b = initial_state(&grid, &c, 0.0).unwrap();
        assert_eq!(a.u.component(2).real(), b.u.component(2).real());
        let other = initial_state(&grid, &config("random-solenoidal", "seed = 8\nmodes = 2"), 0.0).unwrap();
        assert_ne!(a.n.real(), other.n.real());
    }

    #[test]
    fn imbalance_is_rejected_unless_renormalized() {
        let grid = Grid::new(2, 16, std::f64::consts::TAU).unwrap();
        let e = initial_state(&grid, &config("charged-blob", "charge_imbalance = 0.01"), 0.0).unwrap_err();
        assert!(matches!(e, AppError::Numerical(enpp_core::Error::NonNeutral { .. })));
        assert_eq!(e.exit_code(), 2);
        let c = config("charged-blob", "charge_imbalance = 0.01\nrenormalize_charge = true");
        let s = initial_state(&grid, &c, 0.0).unwrap();
        assert!((s.n.mean() - s.p.mean()).abs() < 1e-14);
    }
}
