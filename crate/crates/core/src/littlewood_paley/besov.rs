use alloc::vec::Vec;

use super::DyadicPartition;
use crate::norms::{check_exponent, lr_norm};
use crate::{Error, Field, Result, VectorField};

/// Index triple `(s, p, r)` naming the norm `B^s_{p,r}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesovSpec {
    /// Regularity.
    pub s: f64,
    /// Integrability exponent in `[1, ∞]`.
    pub p: f64,
    /// Summation exponent in `[1, ∞]`.
    pub r: f64,
}

impl BesovSpec {
    /// Validated constructor.
    pub fn new(s: f64, p: f64, r: f64) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::InvalidParameter("Besov regularity must be finite"));
        }
        check_exponent(p)?;
        check_exponent(r)?;
        Ok(Self { s, p, r })
    }

    /// Same exponents, regularity shifted by `ds`.
    pub fn shifted(self, ds: f64) -> Self {
        Self { s: self.s + ds, ..self }
    }
}

/// Per-block Lebesgue norms `(‖Δ_j u‖_{L^p})_{j=-1..=j_max}`.
pub trait BlockNorms {
    /// Block norms, index `j + 1` holding block `j`.
    fn block_lp_norms(&self, partition: &DyadicPartition, p: f64) -> Result<Vec<f64>>;
}

impl BlockNorms for Field {
    fn block_lp_norms(&self, partition: &DyadicPartition, p: f64) -> Result<Vec<f64>> {
        check_exponent(p)?;
        partition
            .indices()
            .map(|j| partition.dyadic_block(self, j)?.lp_norm(p))
            .collect()
    }
}

/// Vector fields are measured through the pointwise Euclidean magnitude of
/// each block.
impl BlockNorms for VectorField {
    fn block_lp_norms(&self, partition: &DyadicPartition, p: f64) -> Result<Vec<f64>> {
        check_exponent(p)?;
        partition
            .indices()
            .map(|j| {
                let parts = self
                    .components()
                    .iter()
                    .map(|c| partition.dyadic_block(c, j))
                    .collect::<Result<Vec<_>>>()?;
                VectorField::new(parts)?.lp_norm(p)
            })
            .collect()
    }
}

fn weighted(j: i32, s: f64, value: f64) -> f64 {
    libm::exp2(j as f64 * s) * value
}

/// `‖(2^{js} ‖Δ_j u‖_{L^p})_j‖_{l^r}`.
pub fn besov_norm<T: BlockNorms + ?Sized>(partition: &DyadicPartition, u: &T, spec: BesovSpec) -> Result<f64> {
    check_exponent(spec.r)?;
    let norms = u.block_lp_norms(partition, spec.p)?;
    lr_norm(
        norms.iter().enumerate().map(|(i, a)| weighted(i as i32 - 1, spec.s, *a)),
        spec.r,
    )
}

/// `‖(a_k)‖_{L^ρ}` over samples by the left rectangle rule with interval
/// widths `widths` (one fewer than samples); `sup` over all samples when
/// `ρ = ∞`.
fn time_norm(samples: &[f64], widths: &[f64], rho: f64) -> f64 {
    if rho.is_infinite() {
        return samples.iter().cloned().fold(0.0, f64::max);
    }
    let sum: f64 = samples.iter().zip(widths).map(|(a, w)| w * libm::pow(*a, rho)).sum();
    libm::pow(sum, 1.0 / rho)
}

fn uniform_widths(count: usize, dt: f64) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::EmptySeries);
    }
    if !(dt >= 0.0) || !dt.is_finite() {
        return Err(Error::InvalidParameter("time step must be nonnegative"));
    }
    Ok(alloc::vec![dt; count - 1])
}

/// `‖u‖_{L̃^ρ_T(B^s_{p,r})} = ‖2^{js} ‖Δ_j u‖_{L^ρ_T(L^p)}‖_{l^r}` for samples
/// `u(0), u(dt), …, u(T)`. Time integrals use the left rectangle rule over
/// the `len - 1` intervals; `ρ = ∞` takes the supremum over every sample.
pub fn timespace_besov_norm<T: BlockNorms>(
    partition: &DyadicPartition,
    series: &[T],
    dt: f64,
    rho: f64,
    spec: BesovSpec,
) -> Result<f64> {
    let widths = uniform_widths(series.len(), dt)?;
    timespace_besov_norm_weighted(partition, series, &widths, rho, spec)
}

/// [`timespace_besov_norm`] with explicit interval widths `t_{k+1} - t_k`.
pub fn timespace_besov_norm_weighted<T: BlockNorms>(
    partition: &DyadicPartition,
    series: &[T],
    widths: &[f64],
    rho: f64,
    spec: BesovSpec,
) -> Result<f64> {
    BlockSeries::new(partition, series, widths.to_vec(), spec.p)?.timespace_norm(spec.s, rho, spec.r)
}

/// Block norms `‖Δ_j u(t_k)‖_{L^p}` of a sampled trajectory at one `p`,
/// reusable across regularities and time exponents.
#[derive(Debug, Clone)]
pub struct BlockSeries {
    /// `norms[k][j + 1]`.
    norms: Vec<Vec<f64>>,
    widths: Vec<f64>,
}

impl BlockSeries {
    /// Measure every sample; `widths` holds the `len - 1` interval lengths.
    pub fn new<T: BlockNorms>(partition: &DyadicPartition, series: &[T], widths: Vec<f64>, p: f64) -> Result<Self> {
        if series.is_empty() {
            return Err(Error::EmptySeries);
        }
        if widths.len() + 1 != series.len() {
            return Err(Error::InvalidParameter("need one interval width per consecutive sample pair"));
        }
        let norms = series
            .iter()
            .map(|u| u.block_lp_norms(partition, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { norms, widths })
    }

    /// [`BlockSeries::new`] with uniform spacing `dt`.
    pub fn uniform<T: BlockNorms>(partition: &DyadicPartition, series: &[T], dt: f64, p: f64) -> Result<Self> {
        let widths = uniform_widths(series.len(), dt)?;
        Self::new(partition, series, widths, p)
    }

    /// Number of samples.
    pub fn len(&self) -> usize {
        self.norms.len()
    }

    /// Always false; construction rejects empty series.
    pub fn is_empty(&self) -> bool {
        self.norms.is_empty()
    }

    /// `‖u(t_k)‖_{B^s_{p,r}}`.
    pub fn snapshot_norm(&self, k: usize, s: f64, r: f64) -> Result<f64> {
        check_exponent(r)?;
        let row = self.norms.get(k).ok_or(Error::InvalidParameter("sample index out of range"))?;
        lr_norm(row.iter().enumerate().map(|(b, a)| weighted(b as i32 - 1, s, *a)), r)
    }

    /// `‖u‖_{L̃^ρ_T(B^s_{p,r})}`.
    pub fn timespace_norm(&self, s: f64, rho: f64, r: f64) -> Result<f64> {
        check_exponent(rho)?;
        check_exponent(r)?;
        let blocks = self.norms[0].len();
        let mut column = Vec::with_capacity(self.norms.len());
        let terms: Vec<f64> = (0..blocks)
            .map(|b| {
                column.clear();
                column.extend(self.norms.iter().map(|row| row[b]));
                weighted(b as i32 - 1, s, time_norm(&column, &self.widths, rho))
            })
            .collect();
        lr_norm(terms, r)
    }
}

/// `‖u‖_{L^ρ_T(B^s_{p,r})}`: the Besov norm first, then the time norm, with
/// the same quadrature as [`timespace_besov_norm`].
pub fn lebesgue_time_besov_norm<T: BlockNorms>(
    partition: &DyadicPartition,
    series: &[T],
    dt: f64,
    rho: f64,
    spec: BesovSpec,
) -> Result<f64> {
    let widths = uniform_widths(series.len(), dt)?;
    check_exponent(rho)?;
    let values = series
        .iter()
        .map(|u| besov_norm(partition, u, spec))
        .collect::<Result<Vec<_>>>()?;
    Ok(time_norm(&values, &widths, rho))
}
