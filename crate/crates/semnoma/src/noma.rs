//! Two-user uplink NOMA with successive interference cancellation.
//!
//! The near (primary) user transmits bits at constant power; the far
//! (secondary) user reuses the same resource block. The AP decodes the bit
//! user first, treating any secondary signal as noise, then cancels it and
//! decodes the semantic signal interference-free:
//!
//! ```text
//! sinr_primary   = P1*rho1*g1 / (sigma2 + P0*rho2*g2)   (secondary active)
//! snr_secondary  = P0*rho2*g2 / sigma2                  (post-SIC)
//! ```
//!
//! [`block_outcome`] derives from one fading block everything the policy
//! layer needs: primary rate with and without secondary interference, the
//! secondary's post-SIC SNR, its semantic rate gated by the similarity
//! threshold, and its bit-mode equivalent semantic rate. All rates are per
//! unit bandwidth.

use crate::channel::{pathloss_gain, ChannelError, FadingBlock, LinkBudget};
use crate::rate::{
    bit_equivalent_semantic_rate, bit_rate, semantic_rate, Bandwidth, RateError, SourceStats,
};
use crate::similarity::{eval_epsilon, LogisticParams, SimilarityError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Link(#[from] ChannelError),
    #[error(transparent)]
    Rate(#[from] RateError),
    #[error(transparent)]
    Similarity(#[from] SimilarityError),
    #[error("invalid scenario: {0}")]
    Invalid(String),
}

/// Unit in which the similarity curve consumes the post-SIC SNR.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnrUnit {
    /// Feed the linear power ratio straight into the logistic (default).
    Linear,
    /// Convert to decibels first.
    Db,
}

/// Full description of one experiment setup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioConfig {
    pub primary_link: LinkBudget,
    pub secondary_link: LinkBudget,
    /// AWGN variance at the AP, in watts.
    pub noise_power: f64,
    pub source: SourceStats,
    pub logistic: LogisticParams,
    /// Minimum similarity for an acceptable semantic reconstruction.
    pub similarity_threshold: f64,
    pub bandwidth: Bandwidth,
    pub snr_unit_mode: SnrUnit,
}

impl Default for ScenarioConfig {
    /// Two-user uplink defaults: near bit user at 15 m and 1 W, far
    /// semantic user at 45 m and 1 W, -30 dB reference path loss with
    /// exponent 4, -80 dBm noise, DeepSC K=5 curve with a 0.9 similarity
    /// threshold.
    fn default() -> Self {
        ScenarioConfig {
            primary_link: LinkBudget {
                distance: 15.0,
                ref_pathloss_db: -30.0,
                pathloss_exp: 4.0,
                tx_power: 1.0,
            },
            secondary_link: LinkBudget {
                distance: 45.0,
                ref_pathloss_db: -30.0,
                pathloss_exp: 4.0,
                tx_power: 1.0,
            },
            noise_power: 1e-11,
            source: SourceStats::default(),
            logistic: LogisticParams::deepsc_k5(),
            similarity_threshold: 0.9,
            bandwidth: Bandwidth::default(),
            snr_unit_mode: SnrUnit::Linear,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        self.primary_link.validate()?;
        self.secondary_link.validate()?;
        self.source.validate()?;
        self.logistic.validate()?;
        self.bandwidth.validate()?;
        if !(self.noise_power > 0.0) {
            return Err(ScenarioError::Invalid(format!(
                "noise_power must be > 0 W, got {}",
                self.noise_power
            )));
        }
        if !(self.similarity_threshold > 0.0 && self.similarity_threshold < 1.0) {
            return Err(ScenarioError::Invalid(format!(
                "similarity_threshold must be in (0, 1), got {}",
                self.similarity_threshold
            )));
        }
        Ok(())
    }
}

/// Per-block SINRs under the bit-first decoding order.
///
/// Returns `(sinr_primary, snr_secondary)`. With the secondary silent the
/// primary sees no interference and the secondary SNR is zero.
pub fn uplink_sinrs(
    block: &FadingBlock,
    cfg: &ScenarioConfig,
    secondary_active: bool,
) -> (f64, f64) {
    let p1 = cfg.primary_link.tx_power * pathloss_gain(&cfg.primary_link) * block.gain_primary;
    let p2 =
        cfg.secondary_link.tx_power * pathloss_gain(&cfg.secondary_link) * block.gain_secondary;
    if secondary_active {
        (p1 / (cfg.noise_power + p2), p2 / cfg.noise_power)
    } else {
        (p1 / cfg.noise_power, 0.0)
    }
}

/// Per-block derived rates, all per unit bandwidth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockOutcome {
    /// Primary bit rate with the secondary silent, bits/s/Hz.
    pub rate_p_off: f64,
    /// Primary bit rate under secondary interference, bits/s/Hz.
    pub rate_p_on: f64,
    /// Secondary post-SIC linear SNR.
    pub snr_s: f64,
    /// Secondary semantic rate, suts/s/Hz; zero below the threshold.
    pub sem_rate: f64,
    /// Whether the similarity threshold is met at this block's SNR.
    pub sem_feasible: bool,
    /// Secondary bit-mode throughput on the semantic axis, suts/s/Hz.
    pub bitum_rate: f64,
}

/// Evaluate the full outcome menu for one fading block.
pub fn block_outcome(block: &FadingBlock, cfg: &ScenarioConfig) -> BlockOutcome {
    let unit = Bandwidth { hertz: 1.0 };
    let (sinr_on, snr_s) = uplink_sinrs(block, cfg, true);
    let (sinr_off, _) = uplink_sinrs(block, cfg, false);
    let rate_p_off = bit_rate(unit, sinr_off);
    let rate_p_on = bit_rate(unit, sinr_on);

    let curve_input = match cfg.snr_unit_mode {
        SnrUnit::Linear => snr_s,
        SnrUnit::Db => 10.0 * snr_s.log10(),
    };
    let epsilon = eval_epsilon(&cfg.logistic, curve_input);
    let sem_feasible = epsilon >= cfg.similarity_threshold;
    let sem_rate = if sem_feasible {
        semantic_rate(unit, &cfg.source, cfg.logistic.k_symbols, epsilon)
    } else {
        0.0
    };
    let bitum_rate = bit_equivalent_semantic_rate(bit_rate(unit, snr_s), &cfg.source);
    BlockOutcome {
        rate_p_off,
        rate_p_on,
        snr_s,
        sem_rate,
        sem_feasible,
        bitum_rate,
    }
}
