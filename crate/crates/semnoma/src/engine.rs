//! Seeded Monte Carlo estimation and parameter sweeps.
//!
//! Realization `i` of a run always draws its fading block from substream
//! `i` of the master seed, so the sample is a pure function of
//! `(master_seed, n)`: results are byte-identical across reruns and across
//! any degree of parallelism. Sweeps reuse the same master seed at every
//! grid point and scheme (common random numbers), which turns the expected
//! scheme orderings into sample-exact invariants.

use crate::channel::sample_block;
use crate::noma::{block_outcome, BlockOutcome, ScenarioConfig, ScenarioError};
use crate::policy::{solve_scheme, Action, PolicyError, SchemeKind};
use crate::rng::Substream;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid sweep spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

/// Which scenario knob a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// Grid values are primary-rate floors in bits/s/Hz.
    RMin,
    /// Grid values are secondary transmit powers in watts.
    P0,
}

/// One sweep: an axis grid crossed with a set of schemes.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub grid: Vec<f64>,
    pub schemes: Vec<SchemeKind>,
    pub realizations: usize,
    pub master_seed: u64,
    /// Primary-rate floor applied at every grid point of a power sweep;
    /// ignored when the axis itself is the rate floor.
    pub r_min: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), EngineError> {
        if self.grid.is_empty() {
            return Err(EngineError::InvalidSpec("grid must be nonempty".into()));
        }
        if !self.grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(EngineError::InvalidSpec(
                "grid must be strictly increasing".into(),
            ));
        }
        if self.realizations < 1 {
            return Err(EngineError::InvalidSpec("realizations must be >= 1".into()));
        }
        if self.schemes.is_empty() {
            return Err(EngineError::InvalidSpec("schemes must be nonempty".into()));
        }
        Ok(())
    }
}

/// Ergodic estimate for one (axis value, scheme) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub axis_value: f64,
    pub scheme: SchemeKind,
    /// Mean realized secondary rate, suts/s/Hz.
    pub ergodic_secondary: f64,
    /// Mean realized primary rate, bits/s/Hz.
    pub ergodic_primary: f64,
    /// 95% normal-approximation half-width on the secondary mean.
    pub ci_halfwidth: f64,
    pub feasible: bool,
}

/// Substream for realization `index` of a run.
pub fn derive_substream(master_seed: u64, index: u64) -> Substream {
    Substream::derive(master_seed, index)
}

/// Draw `n` fading blocks and map them to outcomes, block `i` from
/// substream `i`. Parallel, with index-ordered collection.
fn sample_outcomes(cfg: &ScenarioConfig, n: usize, master_seed: u64) -> Vec<BlockOutcome> {
    (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut stream = derive_substream(master_seed, i);
            block_outcome(&sample_block(&mut stream), cfg)
        })
        .collect()
}

const Z_95: f64 = 1.959963984540054;

/// Monte Carlo estimate at a single operating point.
///
/// An unreachable primary floor is not an error at this level: the point is
/// reported for the all-silent policy with `feasible = false`.
pub fn run_point(
    cfg: &ScenarioConfig,
    scheme: SchemeKind,
    r_min: f64,
    n: usize,
    master_seed: u64,
) -> Result<PointResult, EngineError> {
    if n < 1 {
        return Err(EngineError::InvalidSpec(
            "need at least one realization".into(),
        ));
    }
    cfg.validate()?;
    let outcomes = sample_outcomes(cfg, n, master_seed);
    match solve_scheme(&outcomes, scheme, r_min) {
        Ok(res) => {
            let secondary: Vec<f64> = outcomes
                .iter()
                .zip(&res.actions)
                .map(|(o, a)| match a {
                    Action::Off => 0.0,
                    Action::Sem => o.sem_rate,
                    Action::Bit => o.bitum_rate,
                })
                .collect();
            let ci_halfwidth = ci95(&secondary, res.ergodic_secondary);
            Ok(PointResult {
                axis_value: r_min,
                scheme,
                ergodic_secondary: res.ergodic_secondary,
                ergodic_primary: res.ergodic_primary,
                ci_halfwidth,
                feasible: res.feasible,
            })
        }
        Err(PolicyError::Infeasible) => {
            let mean_off =
                outcomes.iter().map(|o| o.rate_p_off).sum::<f64>() / outcomes.len() as f64;
            Ok(PointResult {
                axis_value: r_min,
                scheme,
                ergodic_secondary: 0.0,
                ergodic_primary: mean_off,
                ci_halfwidth: 0.0,
                feasible: false,
            })
        }
        Err(e) => Err(EngineError::InvalidSpec(e.to_string())),
    }
}

fn ci95(values: &[f64], mean: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    Z_95 * (var / n as f64).sqrt()
}

/// Run the full grid x scheme product with common random numbers.
///
/// Every cell reuses the same master seed and substream indexing, so all
/// schemes and grid points see identical fading blocks. Rows come out in
/// sweep order: grid-major, schemes in spec order.
pub fn run_sweep(cfg: &ScenarioConfig, spec: &SweepSpec) -> Result<Vec<PointResult>, EngineError> {
    spec.validate()?;
    cfg.validate()?;
    let mut rows = Vec::with_capacity(spec.grid.len() * spec.schemes.len());
    for &value in &spec.grid {
        let (point_cfg, r_min) = match spec.axis {
            SweepAxis::RMin => (*cfg, value),
            SweepAxis::P0 => {
                let mut c = *cfg;
                c.secondary_link.tx_power = value;
                (c, spec.r_min)
            }
        };
        for &scheme in &spec.schemes {
            let mut point = run_point(
                &point_cfg,
                scheme,
                r_min,
                spec.realizations,
                spec.master_seed,
            )?;
            point.axis_value = value;
            rows.push(point);
        }
    }
    Ok(rows)
}
