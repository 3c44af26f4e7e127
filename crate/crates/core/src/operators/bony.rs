//! Bony's decomposition `uv = T_u v + T_v u + R(u, v)` with
//! `T_u v = Σ_{j≥1} S_{j-1}u Δ_j v` and `R(u, v) = Σ_{|k-j|≤1} Δ_k u Δ_j v`.
//!
//! Block products are formed in physical space and dealiased once after
//! summation; for inputs in the dealiased subspace the pieces are exact and
//! add up to `dealias(uv)`.

use alloc::vec::Vec;

use crate::littlewood_paley::DyadicPartition;
use crate::{Field, Grid, Result};

/// Real-space samples of every block `Δ_{-1} f, …, Δ_{j_max} f`, for reuse
/// across several products.
#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    grid: Grid,
    blocks: Vec<Vec<f64>>,
}

impl BlockDecomposition {
    /// Decompose `f`.
    pub fn new(partition: &DyadicPartition, f: &Field) -> Result<Self> {
        Ok(Self {
            grid: f.grid().clone(),
            blocks: partition
                .decompose(f)?
                .into_iter()
                .map(|b| b.real().to_vec())
                .collect(),
        })
    }

    fn block(&self, j: i32) -> Option<&[f64]> {
        if j < -1 {
            return None;
        }
        self.blocks.get((j + 1) as usize).map(Vec::as_slice)
    }

    fn top(&self) -> i32 {
        self.blocks.len() as i32 - 2
    }

    /// Accumulate `Σ_{j≥1} S_{j-1}(self) Δ_j(high)` into `out`.
    pub fn add_paraproduct(&self, high: &BlockDecomposition, out: &mut [f64]) {
        let mut low = alloc::vec![0.0; out.len()];
        for j in 1..=high.top() {
            // S_{j-1} = Σ_{j' ≤ j-2} Δ_{j'}
            if let Some(b) = self.block(j - 2) {
                for (l, v) in low.iter_mut().zip(b) {
                    *l += v;
                }
            }
            let h = high.block(j).expect("j within range");
            for ((o, l), v) in out.iter_mut().zip(&low).zip(h) {
                *o += l * v;
            }
        }
    }

    /// Accumulate `Σ_{|k-j|≤1} Δ_k(self) Δ_j(other)` into `out`.
    pub fn add_remainder(&self, other: &BlockDecomposition, out: &mut [f64]) {
        for k in -1..=self.top() {
            let a = self.block(k).expect("k within range");
            for j in (k - 1)..=(k + 1) {
                if let Some(b) = other.block(j) {
                    for ((o, x), y) in out.iter_mut().zip(a).zip(b) {
                        *o += x * y;
                    }
                }
            }
        }
    }

    /// `T_self other`, dealiased.
    pub fn paraproduct(&self, high: &BlockDecomposition) -> Result<Field> {
        self.grid.check_same(&high.grid)?;
        let mut out = alloc::vec![0.0; self.grid.len()];
        self.add_paraproduct(high, &mut out);
        Ok(Field::from_real(&self.grid, out)?.dealias())
    }

    /// `R(self, other)`, dealiased.
    pub fn remainder(&self, other: &BlockDecomposition) -> Result<Field> {
        self.grid.check_same(&other.grid)?;
        let mut out = alloc::vec![0.0; self.grid.len()];
        self.add_remainder(other, &mut out);
        Ok(Field::from_real(&self.grid, out)?.dealias())
    }
}

/// The three pieces of `uv`.
#[derive(Clone, Debug)]
pub struct BonyParts {
    /// `T_u v`: low frequencies of `u` times high frequencies of `v`.
    pub t_u_v: Field,
    /// `T_v u`.
    pub t_v_u: Field,
    /// `R(u, v)`: comparable frequencies.
    pub remainder: Field,
}

impl BonyParts {
    /// `T_u v + T_v u + R(u, v)`.
    pub fn sum(&self) -> Field {
        &(&self.t_u_v + &self.t_v_u) + &self.remainder
    }
}

/// Split `uv` into paraproducts and remainder.
pub fn bony_decompose(partition: &DyadicPartition, u: &Field, v: &Field) -> Result<BonyParts> {
    u.grid().check_same(v.grid())?;
    let bu = BlockDecomposition::new(partition, u)?;
    let bv = BlockDecomposition::new(partition, v)?;
    Ok(BonyParts {
        t_u_v: bu.paraproduct(&bv)?,
        t_v_u: bv.paraproduct(&bu)?,
        remainder: bu.remainder(&bv)?,
    })
}

/// `T_u v`, dealiased.
pub fn paraproduct(partition: &DyadicPartition, u: &Field, v: &Field) -> Result<Field> {
    u.grid().check_same(v.grid())?;
    BlockDecomposition::new(partition, u)?.paraproduct(&BlockDecomposition::new(partition, v)?)
}

/// `R(u, v)`, dealiased.
pub fn remainder(partition: &DyadicPartition, u: &Field, v: &Field) -> Result<Field> {
    u.grid().check_same(v.grid())?;
    BlockDecomposition::new(partition, u)?.remainder(&BlockDecomposition::new(partition, v)?)
}

/// The individual terms `(j, S_{j-1}u · Δ_j v)` of `T_u v`, not dealiased.
pub fn paraproduct_terms(partition: &DyadicPartition, u: &Field, v: &Field) -> Result<Vec<(i32, Field)>> {
    u.grid().check_same(v.grid())?;
    (1..=partition.j_max())
        .map(|j| {
            let low = partition.low_freq_cutoff(u, j - 1)?;
            let high = partition.dyadic_block(v, j)?;
            Ok((j, low.pointwise(&high)?))
        })
        .collect()
}
