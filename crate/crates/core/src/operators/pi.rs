//! The bilinear operator
//! `Π(u, v) = ∇(-Δ)^{-1} Σ_{i,j} [T_{∂_j u^i} ∂_i v^j + T_{∂_i v^j} ∂_j u^i + ∂_i ∂_j R(u^i, v^j)]`
//! which encodes the pressure gradient of the Euler nonlinearity.
//!
//! For divergence-free, dealiased `u, v` the bracket equals
//! `Σ_{i,j} ∂_i u^j ∂_j v^i = div(u·∇v)` exactly, so `div Π(u, v) = -tr(Du Dv)` and
//! `u·∇u + Π(u, u) = P(u·∇u)`. All remainder pieces share one multiplier.

use alloc::vec::Vec;

use super::bony::BlockDecomposition;
use super::potential::grad_inv_laplacian_dropping_mean;
use crate::littlewood_paley::DyadicPartition;
use crate::{Complex64, Error, Field, Result, VectorField};

/// `Π(u, v)` split by origin.
#[derive(Clone, Debug)]
pub struct PiParts {
    /// `∇(-Δ)^{-1} Σ T_{∂_j u^i} ∂_i v^j`.
    pub low_high: VectorField,
    /// `∇(-Δ)^{-1} Σ T_{∂_i v^j} ∂_j u^i`.
    pub high_low: VectorField,
    /// `∇(-Δ)^{-1} Σ ∂_i ∂_j R(u^i, v^j)`.
    pub remainder: VectorField,
}

impl PiParts {
    /// `Π(u, v)`.
    pub fn total(&self) -> VectorField {
        &(&self.low_high + &self.high_low) + &self.remainder
    }
}

fn check_pair(u: &VectorField, v: &VectorField) -> Result<()> {
    u.grid().check_same(v.grid())?;
    if u.dim() != v.dim() {
        return Err(Error::ComponentMismatch {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    Ok(())
}

/// Scalar sources of the three pieces, before `∇(-Δ)^{-1}`.
fn sources(partition: &DyadicPartition, u: &VectorField, v: &VectorField) -> Result<[Field; 3]> {
    check_pair(u, v)?;
    partition.grid().check_same(u.grid())?;
    let grid = u.grid();
    let d = u.dim();
    let decompose = |f: &Field| BlockDecomposition::new(partition, f);
    // du[i][j] = ∂_j u^i, dv[j][i] = ∂_i v^j
    let du: Vec<Vec<BlockDecomposition>> = u
        .components()
        .iter()
        .map(|c| (0..d).map(|j| decompose(&c.derivative(j))).collect())
        .collect::<Result<_>>()?;
    let dv: Vec<Vec<BlockDecomposition>> = v
        .components()
        .iter()
        .map(|c| (0..d).map(|i| decompose(&c.derivative(i))).collect())
        .collect::<Result<_>>()?;
    let bu: Vec<BlockDecomposition> = u.components().iter().map(decompose).collect::<Result<_>>()?;
    let bv: Vec<BlockDecomposition> = v.components().iter().map(decompose).collect::<Result<_>>()?;

    let mut low_high = alloc::vec![0.0; grid.len()];
    let mut high_low = alloc::vec![0.0; grid.len()];
    let mut rem = alloc::vec![Complex64::new(0.0, 0.0); grid.len()];
    for i in 0..d {
        for j in 0..d {
            du[i][j].add_paraproduct(&dv[j][i], &mut low_high);
            dv[j][i].add_paraproduct(&du[i][j], &mut high_low);
            let mut block = alloc::vec![0.0; grid.len()];
            bu[i].add_remainder(&bv[j], &mut block);
            let r = Field::from_real(grid, block)?;
            for (s, c) in r.spectral().iter().enumerate() {
                let k = grid.resolved_wavevector(s);
                rem[s] -= k[i] * k[j] * c;
            }
        }
    }
    Ok([
        Field::from_real(grid, low_high)?.dealias(),
        Field::from_real(grid, high_low)?.dealias(),
        Field::from_spectral(grid, rem)?.dealias(),
    ])
}

/// `Π(u, v)` with its three pieces.
pub fn pi_decompose(partition: &DyadicPartition, u: &VectorField, v: &VectorField) -> Result<PiParts> {
    let [a, b, c] = sources(partition, u, v)?;
    Ok(PiParts {
        low_high: grad_inv_laplacian_dropping_mean(&a),
        high_low: grad_inv_laplacian_dropping_mean(&b),
        remainder: grad_inv_laplacian_dropping_mean(&c),
    })
}

/// `Π(u, v)`; the mean mode of the output is zero.
pub fn pi_bilinear(partition: &DyadicPartition, u: &VectorField, v: &VectorField) -> Result<VectorField> {
    let [a, b, c] = sources(partition, u, v)?;
    let sum = Field::linear_combination(u.grid(), &[(1.0, &a), (1.0, &b), (1.0, &c)])?;
    Ok(grad_inv_laplacian_dropping_mean(&sum))
}

/// `Σ_{i,j} ∂_i u^j ∂_j v^i`, dealiased.
pub fn trace_product(u: &VectorField, v: &VectorField) -> Result<Field> {
    check_pair(u, v)?;
    let grid = u.grid();
    let d = u.dim();
    let mut acc = alloc::vec![0.0; grid.len()];
    for i in 0..d {
        for j in 0..d {
            let a = u.component(j).derivative(i);
            let b = v.component(i).derivative(j);
            for ((o, x), y) in acc.iter_mut().zip(a.real()).zip(b.real()) {
                *o += x * y;
            }
        }
    }
    Ok(Field::from_real(grid, acc)?.dealias())
}

const SOLENOIDAL_TOL: f64 = 1e-8;

fn check_solenoidal(u: &VectorField) -> Result<()> {
    let div = u.divergence().lp_norm(2.0)?;
    if div > SOLENOIDAL_TOL * u.lp_norm(2.0)?.max(1.0) {
        return Err(Error::NotDivergenceFree(div));
    }
    Ok(())
}

/// `‖div Π(u, v) + tr(Du Dv)‖_{L²}` for divergence-free `u, v`.
pub fn pi_divergence_identity(partition: &DyadicPartition, u: &VectorField, v: &VectorField) -> Result<f64> {
    check_pair(u, v)?;
    check_solenoidal(u)?;
    check_solenoidal(v)?;
    let pi = pi_bilinear(partition, u, v)?;
    let trace = trace_product(u, v)?;
    (&pi.divergence() + &trace).lp_norm(2.0)
}
