use alloc::vec::Vec;

use crate::dynamics::SimState;
use crate::littlewood_paley::{BlockSeries, DyadicPartition};
use crate::{BesovSpec, Error, Field, Result, VectorField};

/// Which field of the state a series measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    /// `u`.
    Velocity,
    /// `n`.
    Negative,
    /// `p`.
    Positive,
}

impl Quantity {
    /// All three, in state order.
    pub const ALL: [Quantity; 3] = [Quantity::Velocity, Quantity::Negative, Quantity::Positive];

    fn index(self) -> usize {
        self as usize
    }
}

/// Snapshot Besov norms and `L̃^ρ_T(B^s_{p,r})` aggregates of a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct BesovTable {
    /// Sample times.
    pub times: Vec<f64>,
    /// Measured norms.
    pub specs: Vec<BesovSpec>,
    /// Time exponent of the aggregates.
    pub rho: f64,
    /// `series[spec][quantity][k]`.
    series: Vec<[Vec<f64>; 3]>,
    /// `aggregates[spec][quantity]`.
    aggregates: Vec<[f64; 3]>,
}

impl BesovTable {
    /// Norm of `q` in `specs[spec]` at every sample.
    pub fn series(&self, spec: usize, q: Quantity) -> &[f64] {
        &self.series[spec][q.index()]
    }

    /// `‖q‖_{L̃^ρ_T(B)}` for `specs[spec]`.
    pub fn aggregate(&self, spec: usize, q: Quantity) -> f64 {
        self.aggregates[spec][q.index()]
    }
}

/// Tabulate `specs` over `trajectory`; the time quadrature uses the gaps
/// between sample times, which must increase strictly.
pub fn besov_trajectory(
    partition: &DyadicPartition,
    trajectory: &[SimState],
    specs: &[BesovSpec],
    rho: f64,
) -> Result<BesovTable> {
    if trajectory.is_empty() {
        return Err(Error::EmptySeries);
    }
    let times: Vec<f64> = trajectory.iter().map(|s| s.t).collect();
    let widths: Vec<f64> = times.windows(2).map(|w| w[1] - w[0]).collect();
    if widths.iter().any(|w| !(*w > 0.0)) {
        return Err(Error::InvalidParameter("sample times must increase strictly"));
    }
    let u: Vec<VectorField> = trajectory.iter().map(|s| s.u.clone()).collect();
    let n: Vec<Field> = trajectory.iter().map(|s| s.n.clone()).collect();
    let p: Vec<Field> = trajectory.iter().map(|s| s.p.clone()).collect();

    // block norms depend only on the integrability exponent
    let mut cache: Vec<(f64, [BlockSeries; 3])> = Vec::new();
    let mut series = Vec::with_capacity(specs.len());
    let mut aggregates = Vec::with_capacity(specs.len());
    for spec in specs {
        let pos = match cache.iter().position(|(q, _)| *q == spec.p) {
            Some(pos) => pos,
            None => {
                cache.push((
                    spec.p,
                    [
                        BlockSeries::new(partition, &u, widths.clone(), spec.p)?,
                        BlockSeries::new(partition, &n, widths.clone(), spec.p)?,
                        BlockSeries::new(partition, &p, widths.clone(), spec.p)?,
                    ],
                ));
                cache.len() - 1
            }
        };
        let blocks = &cache[pos].1;
        let mut row: [Vec<f64>; 3] = Default::default();
        let mut agg = [0.0; 3];
        for q in 0..3 {
            row[q] = (0..times.len())
                .map(|k| blocks[q].snapshot_norm(k, spec.s, spec.r))
                .collect::<Result<_>>()?;
            agg[q] = blocks[q].timespace_norm(spec.s, rho, spec.r)?;
        }
        series.push(row);
        aggregates.push(agg);
    }
    Ok(BesovTable {
        times,
        specs: specs.to_vec(),
        rho,
        series,
        aggregates,
    })
}
