//! Link budget and quasi-static Rayleigh block fading.
//!
//! Received power follows the distance-dependent path-loss model
//! `rho = rho0 * (1/d)^beta` with a reference loss `rho0` at 1 m. Rayleigh
//! amplitude fading is represented directly by its power gain `|h|^2`,
//! a unit-mean exponential variable: the channel stays constant within a
//! fading block and redraws independently between blocks.
//!
//! Gains are drawn by inverse-CDF from one uniform each, so a block always
//! consumes exactly two stream elements and substream accounting stays
//! deterministic.

use crate::rng::Substream;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("invalid link budget: {0}")]
    InvalidLink(String),
}

/// Static description of one user-to-AP link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    /// Distance to the access point in meters.
    pub distance: f64,
    /// Reference path loss at 1 m, in dB.
    pub ref_pathloss_db: f64,
    /// Path-loss exponent.
    pub pathloss_exp: f64,
    /// Transmit power in watts.
    pub tx_power: f64,
}

impl LinkBudget {
    pub fn validate(&self) -> Result<(), ChannelError> {
        if !(self.distance > 0.0) {
            return Err(ChannelError::InvalidLink(format!(
                "distance must be > 0 m, got {}",
                self.distance
            )));
        }
        if !(self.pathloss_exp > 0.0) {
            return Err(ChannelError::InvalidLink(format!(
                "pathloss_exp must be > 0, got {}",
                self.pathloss_exp
            )));
        }
        if !(self.tx_power >= 0.0) {
            return Err(ChannelError::InvalidLink(format!(
                "tx_power must be >= 0 W, got {}",
                self.tx_power
            )));
        }
        if !self.ref_pathloss_db.is_finite() {
            return Err(ChannelError::InvalidLink(
                "ref_pathloss_db must be finite".into(),
            ));
        }
        Ok(())
    }
}

/// One quasi-static fading realization: unit-mean exponential power gains
/// for the primary and secondary links.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingBlock {
    pub gain_primary: f64,
    pub gain_secondary: f64,
}

/// Linear power gain of the link: `10^(rho0_db/10) * d^(-beta)`.
pub fn pathloss_gain(link: &LinkBudget) -> f64 {
    10f64.powf(link.ref_pathloss_db / 10.0) * link.distance.powf(-link.pathloss_exp)
}

/// Draw one fading block: two independent exponential(1) gains via
/// inverse-CDF `-ln(1 - u)`.
pub fn sample_block(stream: &mut Substream) -> FadingBlock {
    FadingBlock {
        gain_primary: exponential_unit_mean(stream.next_f64()),
        gain_secondary: exponential_unit_mean(stream.next_f64()),
    }
}

fn exponential_unit_mean(u: f64) -> f64 {
    -(-u).ln_1p()
}
