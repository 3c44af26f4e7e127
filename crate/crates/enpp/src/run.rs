//! `simulate`, `iterate` and `check`.

use std::path::{Path, PathBuf};

use enpp_core::diagnostics::{BlowupMonitor, InvariantMonitor, InvariantReport, Tolerances};
use enpp_core::dynamics::{
    calibrate_lifespan, lifespan_lower_bound, picard_solve, Dynamics, IterationReport, LifespanCalibration,
    PicardOptions, SimState,
};
use enpp_core::DyadicPartition;

use crate::config::{RunConfig, TimeStep};
use crate::error::{AppError, AppResult};
use crate::presets::initial_state;
use crate::report::{fmt_f64, write_report, write_table, write_violations};
use crate::snapshot::{write_trajectory, TrajectoryWriter};

/// Step length and count covering `[0, T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepPlan {
    /// Step length.
    pub dt: f64,
    /// Number of steps, a multiple of the output cadence.
    pub steps: usize,
}

/// Resolve the step policy of `config` against the initial state.
pub fn plan_steps(config: &RunConfig, dynamics: &Dynamics, initial: &SimState) -> StepPlan {
    let t = config.run.final_time;
    let every = config.run.output_every;
    match config.run.dt {
        TimeStep::Fixed(dt) => StepPlan {
            dt,
            steps: (t / dt).round() as usize,
        },
        TimeStep::Auto => {
            let limit = dynamics.cfl_limit(initial);
            let steps = ((t / limit).ceil() as usize).max(1).div_ceil(every) * every;
            StepPlan {
                dt: t / steps as f64,
                steps,
            }
        }
    }
}

/// The stepper described by `config`.
pub fn dynamics_for(config: &RunConfig) -> AppResult<Dynamics> {
    let grid = config.grid.build();
    Ok(Dynamics::new(&grid)
        .with_formulation(config.run.formulation)
        .with_cfl(config.run.cfl)?)
}

/// Integrate from `initial` for `plan`, handing every `every`-th state
/// (including the first and the last) to `sample`.
pub fn integrate(
    dynamics: &Dynamics,
    initial: &SimState,
    plan: StepPlan,
    every: usize,
    mut sample: impl FnMut(&SimState) -> AppResult<()>,
) -> AppResult<SimState> {
    let mut state = initial.clone();
    sample(&state)?;
    for k in 1..=plan.steps {
        let mut next = dynamics.step(&state, plan.dt)?;
        // keep sample times exact multiples of dt
        next.t = initial.t + k as f64 * plan.dt;
        state = next;
        if k % every == 0 {
            sample(&state)?;
        }
    }
    Ok(state)
}

/// Outcome of [`run_simulation`].
#[derive(Debug, Clone)]
pub struct SimulationOutcome {
    /// Step plan used.
    pub plan: StepPlan,
    /// Invariant samples and violations.
    pub report: InvariantReport,
    /// Blow-up functional over the same samples.
    pub blowup: BlowupMonitor,
    /// Final state.
    pub last: SimState,
    /// Where the outputs went.
    pub output_dir: PathBuf,
}

impl SimulationOutcome {
    /// Exit status under the configured strictness.
    pub fn exit_code(&self, strict: bool) -> i32 {
        if strict && !self.report.is_clean() {
            1
        } else {
            0
        }
    }
}

/// Step from 0 to `T`, writing `snapshots/`, `report.csv` and
/// `violations.csv` under the output directory. The report is written even
/// when the run fails part-way.
pub fn run_simulation(config: &RunConfig) -> AppResult<SimulationOutcome> {
    let grid = config.grid.build();
    let dynamics = dynamics_for(config)?;
    let initial = initial_state(&grid, &config.initial, config.run.viscosity)?;
    let plan = plan_steps(config, &dynamics, &initial);
    let out = PathBuf::from(&config.run.output_dir);
    std::fs::create_dir_all(&out).map_err(|e| AppError::io(&out, e))?;

    let partition = DyadicPartition::new(&grid);
    let mut monitor = InvariantMonitor::new(&partition, &config.measure.besov, Tolerances::default());
    let mut blowup = BlowupMonitor::new();
    let mut snapshots = TrajectoryWriter::create(out.join("snapshots"))?;
    let result = integrate(&dynamics, &initial, plan, config.run.output_every, |s| {
        monitor.push(s)?;
        blowup.push(s)?;
        snapshots.push(s)
    });
    snapshots.finish()?;
    let report = monitor.finish();
    write_report(&out.join("report.csv"), &report, Some(&blowup))?;
    write_violations(&out.join("violations.csv"), &report)?;
    let last = result?;
    Ok(SimulationOutcome {
        plan,
        report,
        blowup,
        last,
        output_dir: out,
    })
}

/// Outcome of [`run_iterate`].
#[derive(Debug, Clone)]
pub struct IterateOutcome {
    /// Picard energies and differences on `[0, T]`.
    pub report: IterationReport,
    /// `E₀`.
    pub initial_energy: f64,
    /// `c / (1 + E₀^r)` with the configured constants.
    pub lower_bound: f64,
    /// Present when calibration was requested.
    pub calibration: Option<LifespanCalibration>,
}

/// Picard iteration on `[0, T]`, optional lifespan calibration; writes
/// `iterations.csv`, `lifespan.txt` and the converged trajectory under
/// `snapshots/`.
pub fn run_iterate(config: &RunConfig) -> AppResult<IterateOutcome> {
    let grid = config.grid.build();
    let dynamics = dynamics_for(config)?;
    let initial = initial_state(&grid, &config.initial, config.run.viscosity)?;
    let it = &config.iterate;
    let mut options = PicardOptions::new(config.run.final_time, it.steps);
    options.max_iterations = it.max_iterations;
    options.tolerance = it.tolerance;
    options.indices = config.measure.indices;

    let out = PathBuf::from(&config.run.output_dir);
    std::fs::create_dir_all(&out).map_err(|e| AppError::io(&out, e))?;

    let e0 = options.indices.initial_energy(dynamics.partition(), &initial)?;
    let lower_bound = lifespan_lower_bound(dynamics.partition(), &initial, it.lifespan_c, it.lifespan_r, &options.indices)?;
    let solution = picard_solve(&dynamics, &initial, &options)?;
    let calibration = if it.calibrate {
        Some(calibrate_lifespan(&dynamics, &initial, &options, it.lifespan_r, it.max_halvings)?)
    } else {
        None
    };

    let report = solution.report;
    let ratios = report.ratios();
    let rows: Vec<Vec<f64>> = report
        .differences
        .iter()
        .enumerate()
        .map(|(m, f)| {
            let ratio = if m == 0 { f64::NAN } else { ratios[m - 1] };
            vec![(m + 1) as f64, report.energies[m + 1], *f, ratio]
        })
        .collect();
    write_table(&out.join("iterations.csv"), &["iteration", "energy", "difference", "ratio"], &rows)?;

    let mut text = format!(
        "initial_energy = {}\nlifespan_c = {}\nlifespan_r = {}\nlower_bound = {}\nhorizon = {}\nconverged = {}\niterations = {}\nnon_contracting = {}\n",
        fmt_f64(e0),
        fmt_f64(it.lifespan_c),
        fmt_f64(it.lifespan_r),
        fmt_f64(lower_bound),
        fmt_f64(config.run.final_time),
        report.converged,
        report.iterations,
        report.non_contracting,
    );
    if let Some(c) = &calibration {
        text += &format!(
            "calibrated_horizon = {}\ncalibrated_c = {}\nhalvings = {}\nmax_ratio = {}\n",
            fmt_f64(c.horizon),
            fmt_f64(c.c),
            c.halvings,
            fmt_f64(c.report.ratios().into_iter().fold(0.0, f64::max)),
        );
    }
    let path = out.join("lifespan.txt");
    std::fs::write(&path, text).map_err(|e| AppError::io(&path, e))?;

    let every = config.run.output_every;
    let last = solution.trajectory.len() - 1;
    let kept: Vec<SimState> = solution
        .trajectory
        .into_iter()
        .enumerate()
        .filter(|(k, _)| k % every == 0 || *k == last)
        .map(|(_, s)| s)
        .collect();
    write_trajectory(out.join("snapshots"), &kept)?;

    Ok(IterateOutcome {
        report,
        initial_energy: e0,
        lower_bound,
        calibration,
    })
}

/// Re-run the invariant checks and the blow-up functional on a stored
/// trajectory directory.
pub fn check_trajectory(dir: &Path) -> AppResult<(InvariantReport, BlowupMonitor)> {
    let states = crate::snapshot::read_trajectory(dir)?;
    let partition = DyadicPartition::new(states[0].grid());
    let mut monitor = InvariantMonitor::new(&partition, &[], Tolerances::default());
    let mut blowup = BlowupMonitor::new();
    for s in &states {
        if !s.grid().same_as(partition.grid()) {
            return Err(AppError::input(dir, "snapshots live on different grids"));
        }
        monitor.push(s)?;
        blowup.push(s)?;
    }
    Ok((monitor.finish(), blowup))
}
