//! Run configuration: a TOML file with the sections `[grid]`, `[initial]`,
//! `[run]`, `[measure]`, `[iterate]` and `[invlimit]`.
//!
//! ```toml
//! [grid]
//! n = 64                     # required, power of two
//! dim = 2                    # 2 or 3
//! length = 6.283185307179586 # torus side, default 2π
//!
//! [initial]
//! preset = "charged-taylor-green"  # taylor-green | charged-taylor-green | charged-blob | random-solenoidal
//! amplitude = 1.0            # velocity scale, ≥ 0
//! charge_amplitude = 0.1     # charge perturbation, in [0, 1)
//! seed = 0                   # random-solenoidal only
//! modes = 4                  # random-solenoidal band limit, 1..=N/3
//! charge_imbalance = 0.0     # added to p, breaks neutrality on purpose
//! renormalize_charge = false # shift p back to neutral instead of failing
//!
//! [run]
//! final_time = 0.5           # required, > 0
//! mode = "simulate"          # simulate | iterate | invlimit
//! viscosity = 0.0
//! dt = "auto"                # or a step length dividing final_time
//! cfl = 0.5
//! output_every = 10          # steps between samples, ≥ 1
//! strict = false             # exit 1 on invariant violations
//! output_dir = "output"
//! formulation = "original"   # original | modified
//!
//! [measure]
//! besov = [[2.6, 2, 2], [1.6, 2, "inf"]]  # (s, p, r) triples
//! rho = "inf"                # time exponent of the aggregates
//! s1 = 2.6                   # indices used by iterate and invlimit
//! p1 = 2
//! r1 = 2
//! s2 = 1.6
//! p2 = 2
//! r2 = 2
//!
//! [iterate]
//! steps = 40
//! max_iterations = 20
//! tolerance = 1e-8
//! lifespan_c = 1.0
//! lifespan_r = 4.0
//! calibrate = false
//! max_halvings = 8
//!
//! [invlimit]
//! viscosities = [1e-1, 3e-2, 1e-2, 3e-3, 1e-3]
//! ```

use std::collections::HashMap;
use std::path::Path;

use enpp_core::dynamics::{Formulation, MeasureIndices};
use enpp_core::{BesovSpec, Grid};
use toml::{Table, Value};

use crate::error::ConfigError;

/// Which experiment the file describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Time integration with invariant monitoring.
    Simulate,
    /// Picard iteration and lifespan calibration.
    Iterate,
    /// Viscosity sweep against an inviscid reference.
    Invlimit,
}

impl Mode {
    /// Name used in config files and on the command line.
    pub fn name(self) -> &'static str {
        match self {
            Mode::Simulate => "simulate",
            Mode::Iterate => "iterate",
            Mode::Invlimit => "invlimit",
        }
    }
}

/// Named initial data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Taylor-Green vortex, no charges.
    TaylorGreen,
    /// Taylor-Green vortex with `n, p = 1 ± a cos x cos y`.
    ChargedTaylorGreen,
    /// Taylor-Green vortex with two Gaussian charge blobs.
    ChargedBlob,
    /// Seeded band-limited solenoidal noise with seeded charges.
    RandomSolenoidal,
}

/// Step length policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeStep {
    /// Largest CFL-admissible step of the initial state, shrunk so the
    /// step count is a multiple of the output cadence.
    Auto,
    /// Fixed step; must divide the final time.
    Fixed(f64),
}

/// `[grid]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    /// Dimension.
    pub dim: usize,
    /// Points per axis.
    pub n: usize,
    /// Torus side.
    pub length: f64,
}

impl GridConfig {
    /// The grid itself.
    pub fn build(&self) -> Grid {
        Grid::new(self.dim, self.n, self.length).expect("validated at parse time")
    }
}

/// `[initial]`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialConfig {
    /// Named data.
    pub preset: Preset,
    /// Velocity scale.
    pub amplitude: f64,
    /// Charge perturbation size.
    pub charge_amplitude: f64,
    /// Random seed.
    pub seed: u64,
    /// Band limit of random data.
    pub modes: usize,
    /// Constant added to `p`.
    pub charge_imbalance: f64,
    /// Restore neutrality by shifting `p`.
    pub renormalize_charge: bool,
}

/// `[run]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    /// Experiment.
    pub mode: Mode,
    /// `ν`.
    pub viscosity: f64,
    /// `T`.
    pub final_time: f64,
    /// Step policy.
    pub dt: TimeStep,
    /// CFL number.
    pub cfl: f64,
    /// Steps between recorded samples.
    pub output_every: usize,
    /// Treat invariant violations as failures.
    pub strict: bool,
    /// Where outputs go.
    pub output_dir: String,
    /// Right-hand side.
    pub formulation: Formulation,
}

/// `[measure]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureConfig {
    /// Norms recorded per sample.
    pub besov: Vec<BesovSpec>,
    /// Time exponent of the aggregates.
    pub rho: f64,
    /// Velocity and charge indices.
    pub indices: MeasureIndices,
}

/// `[iterate]`.
#[derive(Debug, Clone, PartialEq)]
pub struct IterateConfig {
    /// Time steps per Picard sweep.
    pub steps: usize,
    /// Iteration cap.
    pub max_iterations: usize,
    /// Stop once the difference norm drops below this.
    pub tolerance: f64,
    /// Lifespan constant `c`.
    pub lifespan_c: f64,
    /// Lifespan exponent `r`.
    pub lifespan_r: f64,
    /// Halve the horizon until the ratios drop to ½.
    pub calibrate: bool,
    /// Halving cap for the calibration.
    pub max_halvings: usize,
}

/// `[invlimit]`.
#[derive(Debug, Clone, PartialEq)]
pub struct InvlimitConfig {
    /// Viscosities, nonincreasing.
    pub viscosities: Vec<f64>,
}

/// A validated configuration with defaults filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Discretization.
    pub grid: GridConfig,
    /// Initial data.
    pub initial: InitialConfig,
    /// Time stepping and output.
    pub run: RunSettings,
    /// Measurements.
    pub measure: MeasureConfig,
    /// Picard iteration.
    pub iterate: IterateConfig,
    /// Viscosity sweep.
    pub invlimit: InvlimitConfig,
}

const SCHEMA: &[(&str, &[&str])] = &[
    ("grid", &["dim", "n", "length"]),
    (
        "initial",
        &[
            "preset",
            "amplitude",
            "charge_amplitude",
            "seed",
            "modes",
            "charge_imbalance",
            "renormalize_charge",
        ],
    ),
    (
        "run",
        &[
            "mode",
            "viscosity",
            "final_time",
            "dt",
            "cfl",
            "output_every",
            "strict",
            "output_dir",
            "formulation",
        ],
    ),
    ("measure", &["besov", "rho", "s1", "p1", "r1", "s2", "p2", "r2"]),
    (
        "iterate",
        &[
            "steps",
            "max_iterations",
            "tolerance",
            "lifespan_c",
            "lifespan_r",
            "calibrate",
            "max_halvings",
        ],
    ),
    ("invlimit", &["viscosities"]),
];

/// Read and validate a config file.
pub fn parse_config(path: impl AsRef<Path>) -> Result<RunConfig, ConfigError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::new(None, format!("cannot read {}: {e}", path.display())))?;
    parse_config_str(&text)
}

/// Validate config text.
pub fn parse_config_str(text: &str) -> Result<RunConfig, ConfigError> {
    let table: Table = text.parse().map_err(|e: toml::de::Error| {
        let line = e.span().map(|s| line_of_offset(text, s.start));
        ConfigError::new(line, e.message().trim().to_string())
    })?;
    let lines = KeyLines::scan(text);
    check_keys(&table, &lines)?;
    let reader = Reader { table: &table, lines: &lines };

    let grid = GridConfig {
        dim: reader.usize("grid", "dim")?.unwrap_or(2),
        n: reader
            .usize("grid", "n")?
            .ok_or_else(|| reader.missing("grid", "n"))?,
        length: reader.f64("grid", "length")?.unwrap_or(std::f64::consts::TAU),
    };
    if let Err(e) = Grid::new(grid.dim, grid.n, grid.length) {
        return Err(ConfigError::new(lines.get("grid", "n"), format!("grid: {e}")));
    }

    let preset = match reader.str("initial", "preset")? {
        None => return Err(reader.missing("initial", "preset")),
        Some(name) => reader.choice(
            "initial",
            "preset",
            name,
            &[
                ("taylor-green", Preset::TaylorGreen),
                ("charged-taylor-green", Preset::ChargedTaylorGreen),
                ("charged-blob", Preset::ChargedBlob),
                ("random-solenoidal", Preset::RandomSolenoidal),
            ],
        )?,
    };
    let initial = InitialConfig {
        preset,
        amplitude: reader.f64("initial", "amplitude")?.unwrap_or(1.0),
        charge_amplitude: reader.f64("initial", "charge_amplitude")?.unwrap_or(0.1),
        seed: reader.usize("initial", "seed")?.unwrap_or(0) as u64,
        modes: reader.usize("initial", "modes")?.unwrap_or(4),
        charge_imbalance: reader.f64("initial", "charge_imbalance")?.unwrap_or(0.0),
        renormalize_charge: reader.bool("initial", "renormalize_charge")?.unwrap_or(false),
    };
    reader.require(initial.amplitude >= 0.0, "initial", "amplitude", "must be nonnegative")?;
    reader.require(
        (0.0..1.0).contains(&initial.charge_amplitude),
        "initial",
        "charge_amplitude",
        "must lie in [0, 1) so the densities stay positive",
    )?;
    reader.require(
        initial.modes >= 1 && 3 * initial.modes <= grid.n,
        "initial",
        "modes",
        "must lie in 1..=n/3 so the data survive dealiasing",
    )?;

    let mode = match reader.str("run", "mode")? {
        None => Mode::Simulate,
        Some(name) => reader.choice(
            "run",
            "mode",
            name,
            &[
                ("simulate", Mode::Simulate),
                ("iterate", Mode::Iterate),
                ("invlimit", Mode::Invlimit),
            ],
        )?,
    };
    let formulation = match reader.str("run", "formulation")? {
        None => Formulation::Original,
        Some(name) => reader.choice(
            "run",
            "formulation",
            name,
            &[("original", Formulation::Original), ("modified", Formulation::Modified)],
        )?,
    };
    let dt = match reader.value("run", "dt") {
        None => TimeStep::Auto,
        Some(Value::String(s)) if s == "auto" => TimeStep::Auto,
        Some(v) => match as_f64(v) {
            Some(x) if x > 0.0 && x.is_finite() => TimeStep::Fixed(x),
            _ => return Err(reader.invalid("run", "dt", "must be \"auto\" or a positive number")),
        },
    };
    let run = RunSettings {
        mode,
        viscosity: reader.f64("run", "viscosity")?.unwrap_or(0.0),
        final_time: reader
            .f64("run", "final_time")?
            .ok_or_else(|| reader.missing("run", "final_time"))?,
        dt,
        cfl: reader.f64("run", "cfl")?.unwrap_or(enpp_core::dynamics::DEFAULT_CFL),
        output_every: reader.usize("run", "output_every")?.unwrap_or(10),
        strict: reader.bool("run", "strict")?.unwrap_or(false),
        output_dir: reader.str("run", "output_dir")?.unwrap_or("output").to_string(),
        formulation,
    };
    reader.require(run.final_time > 0.0, "run", "final_time", "must be positive")?;
    reader.require(run.viscosity >= 0.0, "run", "viscosity", "must be nonnegative")?;
    reader.require(run.cfl > 0.0, "run", "cfl", "must be positive")?;
    reader.require(run.output_every >= 1, "run", "output_every", "must be at least 1")?;
    if let TimeStep::Fixed(dt) = run.dt {
        let steps = (run.final_time / dt).round();
        reader.require(
            steps >= 1.0 && (steps * dt - run.final_time).abs() <= 1e-9 * run.final_time,
            "run",
            "dt",
            "must divide final_time",
        )?;
        reader.require(
            steps as usize % run.output_every == 0,
            "run",
            "output_every",
            "must divide the number of steps",
        )?;
    }

    let defaults = MeasureIndices::default();
    let indices = MeasureIndices {
        s1: reader.f64("measure", "s1")?.unwrap_or(defaults.s1),
        p1: reader.exponent("measure", "p1")?.unwrap_or(defaults.p1),
        r1: reader.exponent("measure", "r1")?.unwrap_or(defaults.r1),
        s2: reader.f64("measure", "s2")?.unwrap_or(defaults.s2),
        p2: reader.exponent("measure", "p2")?.unwrap_or(defaults.p2),
        r2: reader.exponent("measure", "r2")?.unwrap_or(defaults.r2),
    };
    let besov = match reader.value("measure", "besov") {
        None => vec![
            indices.velocity().expect("valid indices"),
            indices.charge().expect("valid indices"),
        ],
        Some(v) => reader.besov_list(v)?,
    };
    let measure = MeasureConfig {
        besov,
        rho: reader.exponent("measure", "rho")?.unwrap_or(f64::INFINITY),
        indices,
    };

    let iterate = IterateConfig {
        steps: reader.usize("iterate", "steps")?.unwrap_or(40),
        max_iterations: reader.usize("iterate", "max_iterations")?.unwrap_or(20),
        tolerance: reader.f64("iterate", "tolerance")?.unwrap_or(1e-8),
        lifespan_c: reader.f64("iterate", "lifespan_c")?.unwrap_or(1.0),
        lifespan_r: reader.f64("iterate", "lifespan_r")?.unwrap_or(4.0),
        calibrate: reader.bool("iterate", "calibrate")?.unwrap_or(false),
        max_halvings: reader.usize("iterate", "max_halvings")?.unwrap_or(8),
    };
    reader.require(iterate.steps >= 1, "iterate", "steps", "must be at least 1")?;
    reader.require(iterate.max_iterations >= 1, "iterate", "max_iterations", "must be at least 1")?;
    reader.require(iterate.tolerance > 0.0, "iterate", "tolerance", "must be positive")?;
    reader.require(iterate.lifespan_c > 0.0, "iterate", "lifespan_c", "must be positive")?;
    reader.require(iterate.lifespan_r >= 4.0, "iterate", "lifespan_r", "must be at least 4")?;

    let viscosities = match reader.value("invlimit", "viscosities") {
        None => vec![1e-1, 3e-2, 1e-2, 3e-3, 1e-3],
        Some(v) => reader.number_list("invlimit", "viscosities", v)?,
    };
    reader.require(
        viscosities.len() >= 3,
        "invlimit",
        "viscosities",
        "needs at least 3 values",
    )?;
    reader.require(
        viscosities.iter().all(|v| *v >= 0.0) && viscosities.windows(2).all(|w| w[1] <= w[0]),
        "invlimit",
        "viscosities",
        "must be nonnegative and nonincreasing",
    )?;

    Ok(RunConfig {
        grid,
        initial,
        run,
        measure,
        iterate,
        invlimit: InvlimitConfig { viscosities },
    })
}

fn line_of_offset(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Line numbers of section headers and `key = value` lines.
struct KeyLines(HashMap<(String, String), usize>);

impl KeyLines {
    fn scan(text: &str) -> Self {
        let mut map = HashMap::new();
        let mut section = String::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if let Some(rest) = line.strip_prefix('[') {
                if let Some(end) = rest.find(']') {
                    section = rest[..end].trim().to_string();
                    map.entry((section.clone(), String::new())).or_insert(i + 1);
                }
            } else if let Some((key, _)) = line.split_once('=') {
                let key = key.trim().trim_matches('"');
                if !key.is_empty() && !key.starts_with('#') {
                    map.entry((section.clone(), key.to_string())).or_insert(i + 1);
                }
            }
        }
        Self(map)
    }

    fn get(&self, section: &str, key: &str) -> Option<usize> {
        self.0.get(&(section.to_string(), key.to_string())).copied()
    }
}

fn suggestion<'a>(name: &str, candidates: impl IntoIterator<Item = &'a str>) -> Option<&'a str> {
    candidates
        .into_iter()
        .map(|c| (strsim::levenshtein(name, c), c))
        .filter(|(d, c)| *d <= 2.max(c.len() / 3))
        .min_by_key(|(d, _)| *d)
        .map(|(_, c)| c)
}

fn unknown(kind: &str, name: &str, line: Option<usize>, hint: Option<&str>) -> ConfigError {
    let message = match hint {
        Some(h) => format!("unknown {kind} \"{name}\" (did you mean \"{h}\"?)"),
        None => format!("unknown {kind} \"{name}\""),
    };
    ConfigError::new(line, message)
}

fn check_keys(table: &Table, lines: &KeyLines) -> Result<(), ConfigError> {
    for (section, value) in table {
        let Some((_, keys)) = SCHEMA.iter().find(|(s, _)| s == section) else {
            let line = lines.get(section, "").or_else(|| lines.get("", section));
            return Err(unknown("section", section, line, suggestion(section, SCHEMA.iter().map(|(s, _)| *s))));
        };
        let Value::Table(entries) = value else {
            return Err(ConfigError::new(lines.get("", section), format!("\"{section}\" must be a [section]")));
        };
        for key in entries.keys() {
            if !keys.contains(&key.as_str()) {
                let hint = suggestion(key, keys.iter().copied());
                return Err(unknown(&format!("key in [{section}]"), key, lines.get(section, key), hint));
            }
        }
    }
    Ok(())
}

fn as_f64(v: &Value) -> Option<f64> {
    match v {
        Value::Float(x) => Some(*x),
        Value::Integer(i) => Some(*i as f64),
        _ => None,
    }
}

fn as_exponent(v: &Value) -> Option<f64> {
    match v {
        Value::String(s) if matches!(s.as_str(), "inf" | "infinity") => Some(f64::INFINITY),
        _ => as_f64(v).filter(|x| *x >= 1.0),
    }
}

struct Reader<'a> {
    table: &'a Table,
    lines: &'a KeyLines,
}

impl<'a> Reader<'a> {
    fn value(&self, section: &str, key: &str) -> Option<&'a Value> {
        self.table.get(section)?.as_table()?.get(key)
    }

    fn invalid(&self, section: &str, key: &str, what: &str) -> ConfigError {
        ConfigError::new(self.lines.get(section, key), format!("{section}.{key} {what}"))
    }

    fn missing(&self, section: &str, key: &str) -> ConfigError {
        ConfigError::new(self.lines.get(section, ""), format!("missing required key {section}.{key}"))
    }

    fn require(&self, ok: bool, section: &str, key: &str, what: &str) -> Result<(), ConfigError> {
        if ok {
            Ok(())
        } else {
            Err(self.invalid(section, key, what))
        }
    }

    fn f64(&self, section: &str, key: &str) -> Result<Option<f64>, ConfigError> {
        self.value(section, key)
            .map(|v| {
                as_f64(v)
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| self.invalid(section, key, "must be a finite number"))
            })
            .transpose()
    }

    fn exponent(&self, section: &str, key: &str) -> Result<Option<f64>, ConfigError> {
        self.value(section, key)
            .map(|v| as_exponent(v).ok_or_else(|| self.invalid(section, key, "must be a number ≥ 1 or \"inf\"")))
            .transpose()
    }

    fn usize(&self, section: &str, key: &str) -> Result<Option<usize>, ConfigError> {
        self.value(section, key)
            .map(|v| match v {
                Value::Integer(i) if *i >= 0 => Ok(*i as usize),
                _ => Err(self.invalid(section, key, "must be a nonnegative integer")),
            })
            .transpose()
    }

    fn bool(&self, section: &str, key: &str) -> Result<Option<bool>, ConfigError> {
        self.value(section, key)
            .map(|v| v.as_bool().ok_or_else(|| self.invalid(section, key, "must be true or false")))
            .transpose()
    }

    fn str(&self, section: &str, key: &str) -> Result<Option<&'a str>, ConfigError> {
        self.value(section, key)
            .map(|v| v.as_str().ok_or_else(|| self.invalid(section, key, "must be a string")))
            .transpose()
    }

    fn choice<T: Copy>(&self, section: &str, key: &str, name: &str, options: &[(&str, T)]) -> Result<T, ConfigError> {
        if let Some((_, v)) = options.iter().find(|(n, _)| *n == name) {
            return Ok(*v);
        }
        let names: Vec<&str> = options.iter().map(|(n, _)| *n).collect();
        let hint = match suggestion(name, names.iter().copied()) {
            Some(h) => format!(" (did you mean \"{h}\"?)"),
            None => String::new(),
        };
        Err(self.invalid(
            section,
            key,
            &format!("has unknown value \"{name}\"{hint}; expected one of {}", names.join(", ")),
        ))
    }

    fn number_list(&self, section: &str, key: &str, v: &Value) -> Result<Vec<f64>, ConfigError> {
        let bad = || self.invalid(section, key, "must be a list of finite numbers");
        v.as_array()
            .ok_or_else(bad)?
            .iter()
            .map(|x| as_f64(x).filter(|x| x.is_finite()).ok_or_else(bad))
            .collect()
    }

    fn besov_list(&self, v: &Value) -> Result<Vec<BesovSpec>, ConfigError> {
        let bad = || self.invalid("measure", "besov", "must be a list of [s, p, r] triples with p, r ≥ 1 or \"inf\"");
        v.as_array()
            .ok_or_else(bad)?
            .iter()
            .map(|t| {
                let t = t.as_array().filter(|t| t.len() == 3).ok_or_else(bad)?;
                let s = as_f64(&t[0]).filter(|s| s.is_finite()).ok_or_else(bad)?;
                let p = as_exponent(&t[1]).ok_or_else(bad)?;
                let r = as_exponent(&t[2]).ok_or_else(bad)?;
                BesovSpec::new(s, p, r).map_err(|_| bad())
            })
            .collect()
    }
}
