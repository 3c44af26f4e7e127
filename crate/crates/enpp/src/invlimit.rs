//! The inviscid-limit sweep: run the same data at several viscosities and
//! measure the distance to the `ν = 0` run in
//! `L̃^∞_T(B^{s₁-1}_{p₁,r₁}) × L̃^∞_T(B^{s₂-1}_{p₂,r₂})²`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use enpp_core::diagnostics::{besov_trajectory, Quantity};
use enpp_core::dynamics::{MeasureIndices, SimState};
use enpp_core::{BesovSpec, DyadicPartition, Field};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::{AppError, AppResult};
use crate::presets::initial_state;
use crate::report::{fmt_f64, write_table};
use crate::run::{dynamics_for, integrate, plan_steps, StepPlan};
use crate::snapshot::{read_trajectory, write_trajectory, Snapshot};

/// Least-squares fit of `log(err)` against `log(ν)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateFit {
    /// Viscosities, in sweep order.
    pub viscosities: Vec<f64>,
    /// `[err_u, err_n, err_p]` per viscosity.
    pub errors: Vec<[f64; 3]>,
    /// `err_u + err_n + err_p`, the fitted quantity.
    pub totals: Vec<f64>,
    /// Fitted exponent; `None` when the fit is degenerate.
    pub slope: Option<f64>,
    /// Fitted `log` prefactor.
    pub intercept: Option<f64>,
    /// Root-mean-square residual in log space.
    pub residual: Option<f64>,
    /// Why no fit was possible.
    pub degenerate: Option<String>,
}

impl RateFit {
    /// Fit the totals. At least three viscosities are required; zero
    /// viscosities or errors, or a list that is not strictly decreasing,
    /// give a degenerate fit rather than an error.
    pub fn fit(viscosities: Vec<f64>, errors: Vec<[f64; 3]>) -> Result<Self, String> {
        if viscosities.len() < 3 {
            return Err("a rate fit needs at least 3 viscosities".into());
        }
        if viscosities.len() != errors.len() {
            return Err("one error triple per viscosity is required".into());
        }
        let totals: Vec<f64> = errors.iter().map(|e| e.iter().sum()).collect();
        let mut fit = Self {
            viscosities,
            errors,
            totals,
            slope: None,
            intercept: None,
            residual: None,
            degenerate: None,
        };
        if fit.viscosities.iter().any(|v| !(*v > 0.0)) {
            fit.degenerate = Some("zero viscosity in the sweep".into());
        } else if !fit.viscosities.windows(2).all(|w| w[1] < w[0]) {
            fit.degenerate = Some("viscosities are not strictly decreasing".into());
        } else if fit.totals.iter().any(|e| !(*e > 0.0) || !e.is_finite()) {
            fit.degenerate = Some("zero or non-finite error".into());
        }
        if fit.degenerate.is_some() {
            return Ok(fit);
        }
        let x: Vec<f64> = fit.viscosities.iter().map(|v| v.ln()).collect();
        let y: Vec<f64> = fit.totals.iter().map(|e| e.ln()).collect();
        let n = x.len() as f64;
        let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
        let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
        let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let ss: f64 = x.iter().zip(&y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
        fit.slope = Some(slope);
        fit.intercept = Some(intercept);
        fit.residual = Some((ss / n).sqrt());
        Ok(fit)
    }

    /// Totals strictly decrease along the sweep.
    pub fn errors_decreasing(&self) -> bool {
        self.totals.windows(2).all(|w| w[1] < w[0])
    }

    /// `key = value` summary written to `ratefit.txt`.
    pub fn summary(&self) -> String {
        let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_else(|| "nan".into());
        let mut s = String::new();
        let _ = writeln!(s, "slope = {}", opt(self.slope));
        let _ = writeln!(s, "intercept = {}", opt(self.intercept));
        let _ = writeln!(s, "residual = {}", opt(self.residual));
        let _ = writeln!(s, "degenerate = {}", self.degenerate.as_deref().unwrap_or("false"));
        let _ = writeln!(s, "errors_decreasing = {}", self.errors_decreasing());
        let _ = writeln!(s, "viscosities = {}", self.viscosities.len());
        s
    }
}

/// Result of [`inviscid_experiment`].
#[derive(Debug, Clone)]
pub struct InvlimitOutcome {
    /// The fit.
    pub fit: RateFit,
    /// Shared step plan.
    pub plan: StepPlan,
    /// True when the reference run came from the cache.
    pub reference_cached: bool,
}

/// Norms of the velocity and charge differences.
pub fn difference_specs(indices: &MeasureIndices) -> AppResult<[BesovSpec; 2]> {
    Ok([
        BesovSpec::new(indices.s1 - 1.0, indices.p1, indices.r1)?,
        indices.charge_difference()?,
    ])
}

/// `[‖u - u₀‖, ‖n - n₀‖, ‖p - p₀‖]` in the `L̃^∞_T` difference norms, from
/// trajectories sampled at the same times.
pub fn trajectory_distance(
    partition: &DyadicPartition,
    run: &[SimState],
    reference: &[SimState],
    specs: &[BesovSpec; 2],
) -> AppResult<[f64; 3]> {
    if run.len() != reference.len() {
        return Err(AppError::input("", "runs are sampled at different times"));
    }
    let diffs = run
        .iter()
        .zip(reference)
        .map(|(a, b)| {
            if !a.grid().same_as(b.grid()) || (a.t - b.t).abs() > 1e-12 * b.t.abs().max(1.0) {
                return Err(AppError::input("", "runs are not aligned with the reference"));
            }
            let mut d = SimState::new(&a.u - &b.u, &a.n - &b.n, &a.p - &b.p, 0.0)?;
            d.t = b.t;
            Ok(d)
        })
        .collect::<AppResult<Vec<_>>>()?;
    let table = besov_trajectory(partition, &diffs, specs, f64::INFINITY)?;
    Ok([
        table.aggregate(0, Quantity::Velocity),
        table.aggregate(1, Quantity::Negative),
        table.aggregate(1, Quantity::Positive),
    ])
}

fn fingerprint(config: &RunConfig, plan: StepPlan) -> String {
    let key = format!(
        "v1|{:?}|{:?}|{}|{}|{}|{}|{:?}|{}",
        config.grid,
        config.initial,
        config.run.final_time.to_bits(),
        plan.dt.to_bits(),
        plan.steps,
        config.run.output_every,
        config.run.formulation,
        config.run.cfl.to_bits(),
    );
    let digest = Sha256::digest(key.as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

fn sampled_run(config: &RunConfig, initial: &SimState, plan: StepPlan) -> AppResult<Vec<SimState>> {
    let dynamics = dynamics_for(config)?;
    let mut samples = Vec::new();
    integrate(&dynamics, initial, plan, config.run.output_every, |s| {
        samples.push(s.clone());
        Ok(())
    })?;
    Ok(samples)
}

/// Run the sweep, reusing a cached `ν = 0` reference under
/// `<output_dir>/cache/` when one matches, and write `rates.csv` and
/// `ratefit.txt`.
pub fn inviscid_experiment(config: &RunConfig) -> AppResult<InvlimitOutcome> {
    let grid = config.grid.build();
    let dynamics = dynamics_for(config)?;
    let initial = initial_state(&grid, &config.initial, 0.0)?;
    let plan = plan_steps(config, &dynamics, &initial);
    let out = PathBuf::from(&config.run.output_dir);
    std::fs::create_dir_all(&out).map_err(|e| AppError::io(&out, e))?;

    let cache = out.join("cache").join(format!("reference-{}", fingerprint(config, plan)));
    let (reference, reference_cached) = match load_reference(&cache) {
        Some(r) => (r, true),
        None => {
            write_trajectory(&cache, &sampled_run(config, &initial, plan)?)?;
            // read back so fresh and cached references are bit-identical
            (read_trajectory(&cache)?, false)
        }
    };

    let specs = difference_specs(&config.measure.indices)?;
    let partition = DyadicPartition::new(&grid);
    let errors = config
        .invlimit
        .viscosities
        .par_iter()
        .map(|&nu| {
            let mut start = initial.clone();
            start.nu = nu;
            // same real-space round trip as the stored reference, so a run
            // identical to it compares exactly equal
            let run = sampled_run(config, &start, plan)?
                .into_iter()
                .map(|s| through_real_space(&s))
                .collect::<AppResult<Vec<_>>>()?;
            trajectory_distance(&partition, &run, &reference, &specs)
        })
        .collect::<AppResult<Vec<_>>>()?;

    let rows: Vec<Vec<f64>> = config
        .invlimit
        .viscosities
        .iter()
        .zip(&errors)
        .map(|(nu, e)| vec![*nu, e[0], e[1], e[2]])
        .collect();
    write_table(&out.join("rates.csv"), &["nu", "err_u", "err_n", "err_p"], &rows)?;
    let fit = RateFit::fit(config.invlimit.viscosities.clone(), errors).map_err(|m| AppError::input(&out, m))?;
    let path = out.join("ratefit.txt");
    std::fs::write(&path, fit.summary()).map_err(|e| AppError::io(&path, e))?;
    Ok(InvlimitOutcome {
        fit,
        plan,
        reference_cached,
    })
}

/// Rebuild `state` from its real-space values, as loading a snapshot does.
fn through_real_space(state: &SimState) -> AppResult<SimState> {
    let mut snap = Snapshot::from_state(state);
    for f in &mut snap.fields {
        *f = Field::from_real(&snap.grid, f.real().to_vec())?;
    }
    snap.into_state(state.t, state.nu)
}

fn load_reference(dir: &Path) -> Option<Vec<SimState>> {
    if !dir.join("index.csv").exists() {
        return None;
    }
    read_trajectory(dir).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_laws() {
        let nus = vec![1e-1, 1e-2, 1e-3, 1e-4];
        for power in [0.5, 1.0] {
            let errs = nus.iter().map(|v: &f64| [v.powf(power), 0.0, 0.0]).collect();
            let fit = RateFit::fit(nus.clone(), errs).unwrap();
            assert!((fit.slope.unwrap() - power).abs() < 1e-12);
            assert!(fit.residual.unwrap() < 1e-12);
            assert!(fit.errors_decreasing());
        }
    }

    #[test]
    fn three_times_scaled_errors() {
        let nus = vec![0.3, 0.1, 0.03];
        let errs = nus.iter().map(|v: &f64| [2.0 * v, *v, 0.5 * v]).collect();
        let fit = RateFit::fit(nus, errs).unwrap();
        assert!((fit.intercept.unwrap() - 3.5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn degenerate_cases() {
        let fit = RateFit::fit(vec![0.0; 3], vec![[0.0; 3]; 3]).unwrap();
        assert!(fit.slope.is_none());
        assert!(fit.degenerate.is_some());
        assert!(fit.summary().contains("slope = nan"));
        let fit = RateFit::fit(vec![0.1, 0.01, 0.001], vec![[0.0; 3]; 3]).unwrap();
        assert_eq!(fit.degenerate.as_deref(), Some("zero or non-finite error"));
        assert!(RateFit::fit(vec![0.1, 0.01], vec![[1.0; 3]; 2]).is_err());
    }
}
