//! Binary field snapshots and trajectory directories.
//!
//! A snapshot is a little-endian header
//!
//! ```text
//! "ENPP"  version: u32  d: u32  N: u32  L: f64  fields: u32
//! ```
//!
//! followed by `fields` blocks of `N^d` real-space `f64` values each, row-major
//! with axis 0 slowest. States are stored as `u_1, …, u_d, n, p`.
//!
//! A trajectory directory holds `t_<index>.bin` files and `index.csv` with
//! columns `index, t, nu`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use enpp_core::dynamics::SimState;
use enpp_core::{Field, Grid, VectorField};

use crate::error::{AppError, AppResult};

const MAGIC: &[u8; 4] = b"ENPP";
/// Format version written by this crate.
pub const VERSION: u32 = 1;

/// A grid plus any number of scalar fields on it.
#[derive(Debug, Clone)]
pub struct Snapshot {
    /// Shared grid.
    pub grid: Grid,
    /// Fields in file order.
    pub fields: Vec<Field>,
}

impl Snapshot {
    /// `u_1, …, u_d, n, p`.
    pub fn from_state(state: &SimState) -> Self {
        let mut fields: Vec<Field> = state.u.components().to_vec();
        fields.push(state.n.clone());
        fields.push(state.p.clone());
        Self {
            grid: state.grid().clone(),
            fields,
        }
    }

    /// Inverse of [`Snapshot::from_state`].
    pub fn into_state(self, t: f64, nu: f64) -> AppResult<SimState> {
        let d = self.grid.dim();
        if self.fields.len() != d + 2 {
            return Err(AppError::input(
                "",
                format!("a state needs {} fields, snapshot has {}", d + 2, self.fields.len()),
            ));
        }
        let mut fields = self.fields;
        let p = fields.pop().expect("length checked");
        let n = fields.pop().expect("length checked");
        let mut state = SimState::new(VectorField::new(fields)?, n, p, nu)?;
        state.t = t;
        Ok(state)
    }

    /// Serialize to `w`.
    pub fn write_to(&self, w: &mut impl Write) -> std::io::Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&(self.grid.dim() as u32).to_le_bytes())?;
        w.write_all(&(self.grid.n() as u32).to_le_bytes())?;
        w.write_all(&self.grid.length().to_le_bytes())?;
        w.write_all(&(self.fields.len() as u32).to_le_bytes())?;
        for f in &self.fields {
            for x in f.real() {
                w.write_all(&x.to_le_bytes())?;
            }
        }
        Ok(())
    }

    /// Parse from `r`; errors carry a plain description.
    pub fn read_from(r: &mut impl Read) -> Result<Self, String> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic).map_err(|_| "truncated header".to_string())?;
        if &magic != MAGIC {
            return Err("not a snapshot (bad magic)".into());
        }
        let version = read_u32(r)?;
        if version != VERSION {
            return Err(format!("unsupported snapshot version {version}"));
        }
        let dim = read_u32(r)? as usize;
        let n = read_u32(r)? as usize;
        let mut buf = [0u8; 8];
        r.read_exact(&mut buf).map_err(|_| "truncated header".to_string())?;
        let length = f64::from_le_bytes(buf);
        let count = read_u32(r)? as usize;
        let grid = Grid::new(dim, n, length).map_err(|e| format!("bad grid in header: {e}"))?;
        let mut fields = Vec::with_capacity(count);
        for k in 0..count {
            let mut values = Vec::with_capacity(grid.len());
            for _ in 0..grid.len() {
                r.read_exact(&mut buf).map_err(|_| format!("truncated data in field {k}"))?;
                values.push(f64::from_le_bytes(buf));
            }
            fields.push(Field::from_real(&grid, values).expect("length matches grid"));
        }
        let mut rest = [0u8; 1];
        if r.read(&mut rest).map_err(|e| e.to_string())? != 0 {
            return Err("trailing bytes after last field".into());
        }
        Ok(Self { grid, fields })
    }

    /// Write to a file.
    pub fn save(&self, path: &Path) -> AppResult<()> {
        let file = File::create(path).map_err(|e| AppError::io(path, e))?;
        let mut w = BufWriter::new(file);
        self.write_to(&mut w)
            .and_then(|_| w.flush())
            .map_err(|e| AppError::io(path, e))
    }

    /// Read from a file.
    pub fn load(path: &Path) -> AppResult<Self> {
        let file = File::open(path).map_err(|e| AppError::io(path, e))?;
        Self::read_from(&mut BufReader::new(file)).map_err(|m| AppError::input(path, m))
    }
}

fn read_u32(r: &mut impl Read) -> Result<u32, String> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf).map_err(|_| "truncated header".to_string())?;
    Ok(u32::from_le_bytes(buf))
}

/// Streams states into a trajectory directory.
#[derive(Debug)]
pub struct TrajectoryWriter {
    dir: PathBuf,
    index: csv::Writer<File>,
    count: usize,
}

impl TrajectoryWriter {
    /// Create `dir` (and parents) and start `index.csv`.
    pub fn create(dir: impl Into<PathBuf>) -> AppResult<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir).map_err(|e| AppError::io(&dir, e))?;
        let path = dir.join("index.csv");
        let file = File::create(&path).map_err(|e| AppError::io(&path, e))?;
        let mut index = csv::Writer::from_writer(file);
        index.write_record(["index", "t", "nu"])?;
        Ok(Self { dir, index, count: 0 })
    }

    /// Append one state.
    pub fn push(&mut self, state: &SimState) -> AppResult<()> {
        let k = self.count;
        Snapshot::from_state(state).save(&self.dir.join(format!("t_{k}.bin")))?;
        self.index
            .write_record([k.to_string(), state.t.to_string(), state.nu.to_string()])?;
        self.count += 1;
        Ok(())
    }

    /// Flush the index.
    pub fn finish(mut self) -> AppResult<usize> {
        self.index.flush().map_err(|e| AppError::io(self.dir.join("index.csv"), e))?;
        Ok(self.count)
    }
}

/// Write a whole trajectory.
pub fn write_trajectory(dir: impl Into<PathBuf>, states: &[SimState]) -> AppResult<()> {
    let mut w = TrajectoryWriter::create(dir)?;
    for s in states {
        w.push(s)?;
    }
    w.finish().map(|_| ())
}

/// Read every state listed in `dir/index.csv`, in index order.
pub fn read_trajectory(dir: &Path) -> AppResult<Vec<SimState>> {
    let path = dir.join("index.csv");
    let file = File::open(&path).map_err(|e| AppError::io(&path, e))?;
    let mut reader = csv::Reader::from_reader(file);
    let mut states = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        let bad = |what: &str| AppError::input(&path, format!("row {}: {what}", row + 2));
        if record.len() != 3 {
            return Err(bad("expected columns index, t, nu"));
        }
        let index: usize = record[0].parse().map_err(|_| bad("bad index"))?;
        let t: f64 = record[1].parse().map_err(|_| bad("bad time"))?;
        let nu: f64 = record[2].parse().map_err(|_| bad("bad viscosity"))?;
        let snap_path = dir.join(format!("t_{index}.bin"));
        let state = Snapshot::load(&snap_path)?
            .into_state(t, nu)
            .map_err(|e| match e {
                AppError::Input { message, .. } => AppError::input(&snap_path, message),
                other => other,
            })?;
        states.push(state);
    }
    if states.is_empty() {
        return Err(AppError::input(&path, "trajectory is empty"));
    }
    Ok(states)
}
