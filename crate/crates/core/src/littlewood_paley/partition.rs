use alloc::vec::Vec;

use crate::{Error, Field, Grid, Result};

/// `χ` equals one on `|ξ| ≤ 3/4`.
pub const ANNULUS_INNER: f64 = 0.75;
/// `χ` vanishes on `|ξ| ≥ 4/3`.
pub const BALL_RADIUS: f64 = 4.0 / 3.0;
/// `φ` vanishes on `|ξ| ≥ 8/3`.
pub const ANNULUS_OUTER: f64 = 8.0 / 3.0;

fn flat(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        libm::exp(-1.0 / t)
    }
}

/// Radial low-frequency profile: 1 on `[0, 3/4]`, 0 on `[4/3, ∞)`, and a
/// C^∞ non-increasing transition built from `exp(-1/t)` in between.
pub fn chi(radius: f64) -> f64 {
    if radius <= ANNULUS_INNER {
        return 1.0;
    }
    if radius >= BALL_RADIUS {
        return 0.0;
    }
    let t = (radius - ANNULUS_INNER) / (BALL_RADIUS - ANNULUS_INNER);
    let a = flat(1.0 - t);
    let b = flat(t);
    a / (a + b)
}

/// Annular profile `φ(ξ) = χ(ξ/2) - χ(ξ)`, supported in `[3/4, 8/3]`.
pub fn phi(radius: f64) -> f64 {
    chi(0.5 * radius) - chi(radius)
}

/// The partition `χ, φ(2^{-j}·)` tabulated on a grid's frequency lattice.
///
/// Blocks run over `j = -1..=j_max`, where `j_max` is the smallest `j ≥ 0`
/// with `8·2^j/3 ≥ max |ξ|`. The top block carries `1 - χ(2^{-j_max}ξ)`,
/// i.e. everything above it, so the tabulated symbols sum to one exactly.
#[derive(Clone, Debug)]
pub struct DyadicPartition {
    grid: Grid,
    j_max: i32,
    /// Symbol of `Δ_j` at index `j + 1`.
    blocks: Vec<Vec<f64>>,
    /// Symbol of `S_j` at index `j`, for `j = 0..=j_max + 1`.
    cutoffs: Vec<Vec<f64>>,
}

impl DyadicPartition {
    /// Tabulate the partition for `grid`.
    pub fn new(grid: &Grid) -> Self {
        let kmax = grid.max_wavenumber();
        let mut j_max = 0;
        while ANNULUS_OUTER * libm::ldexp(1.0, j_max) < kmax {
            j_max += 1;
        }
        let mags = grid.magnitudes();

        let mut blocks = Vec::with_capacity(j_max as usize + 2);
        blocks.push(mags.iter().map(|&m| chi(m)).collect::<Vec<_>>());
        for j in 0..=j_max {
            let scale = libm::ldexp(1.0, -j);
            let symbol = if j < j_max {
                mags.iter().map(|&m| chi(0.5 * scale * m) - chi(scale * m)).collect()
            } else {
                mags.iter().map(|&m| 1.0 - chi(scale * m)).collect()
            };
            blocks.push(symbol);
        }

        let mut cutoffs: Vec<Vec<f64>> = Vec::with_capacity(j_max as usize + 2);
        let mut acc = alloc::vec![0.0; grid.len()];
        for block in &blocks {
            for (a, b) in acc.iter_mut().zip(block) {
                *a += b;
            }
            cutoffs.push(acc.clone());
        }

        Self {
            grid: grid.clone(),
            j_max,
            blocks,
            cutoffs,
        }
    }

    /// Grid the partition was built for.
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Highest block index.
    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    /// Block indices `-1..=j_max`.
    pub fn indices(&self) -> core::ops::RangeInclusive<i32> {
        -1..=self.j_max
    }

    /// Nominal support `[3·2^j/4, 8·2^j/3]` of block `j ≥ 0`; `[0, 4/3]` for `j = -1`.
    pub fn support(j: i32) -> (f64, f64) {
        if j < 0 {
            (0.0, BALL_RADIUS)
        } else {
            (ANNULUS_INNER * libm::ldexp(1.0, j), ANNULUS_OUTER * libm::ldexp(1.0, j))
        }
    }

    fn check_index(&self, j: i32) -> Result<usize> {
        if j < -1 || j > self.j_max {
            return Err(Error::BlockOutOfRange { j, j_max: self.j_max });
        }
        Ok((j + 1) as usize)
    }

    /// Tabulated symbol of `Δ_j`.
    pub fn block_symbol(&self, j: i32) -> Result<&[f64]> {
        Ok(&self.blocks[self.check_index(j)?])
    }

    /// Largest `|χ + Σ_j φ_j - 1|` over the lattice.
    pub fn partition_defect(&self) -> f64 {
        (0..self.grid.len())
            .map(|s| (self.blocks.iter().map(|b| b[s]).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `Δ_j f`.
    pub fn dyadic_block(&self, f: &Field, j: i32) -> Result<Field> {
        self.grid.check_same(f.grid())?;
        let symbol = &self.blocks[self.check_index(j)?];
        Ok(f.apply_real_multiplier(|s| symbol[s]))
    }

    /// `S_j f = Σ_{j' ≤ j-1} Δ_{j'} f`; zero for `j ≤ -1`, `f` for `j > j_max`.
    pub fn low_freq_cutoff(&self, f: &Field, j: i32) -> Result<Field> {
        self.grid.check_same(f.grid())?;
        if j <= -1 {
            return Ok(Field::zeros(&self.grid));
        }
        if j as usize >= self.cutoffs.len() {
            return Ok(f.clone());
        }
        let symbol = &self.cutoffs[j as usize];
        Ok(f.apply_real_multiplier(|s| symbol[s]))
    }

    /// All blocks `Δ_{-1} f, …, Δ_{j_max} f`.
    pub fn decompose(&self, f: &Field) -> Result<Vec<Field>> {
        self.indices().map(|j| self.dyadic_block(f, j)).collect()
    }
}
