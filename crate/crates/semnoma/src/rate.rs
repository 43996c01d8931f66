//! Rate arithmetic for semantic and bit-based transmission.
//!
//! Semantic rate in suts/s:
//!
//! ```text
//! S = (W * I / (K * L)) * eps
//! ```
//!
//! Shannon bit rate `R_b = W * log2(1 + sinr)` in bits/s, and the
//! bit-equivalent semantic rate that converts a bit user's throughput onto
//! the semantic axis:
//!
//! ```text
//! R_sb = R_b * I / (mu * L) * eps_c
//! ```
//!
//! Semantic quantities are carried in suts/s, bit quantities in bits/s;
//! cross-mode comparison always converts into suts/s. Internally the
//! simulator works per unit bandwidth (W = 1 Hz).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RateError {
    #[error("invalid source statistics: {0}")]
    InvalidSource(String),
    #[error("invalid bandwidth: {0}")]
    InvalidBandwidth(String),
}

/// Source statistics of the transmitted messages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceStats {
    /// Semantic information per message, in suts.
    pub info_per_msg: f64,
    /// Message length in words.
    pub words_per_msg: f64,
    /// Average bits per word in conventional bit transmission.
    pub bits_per_word: f64,
    /// Similarity factor of the bit user, 1 for error-free reconstruction.
    pub eps_c: f64,
}

impl SourceStats {
    pub fn validate(&self) -> Result<(), RateError> {
        if !(self.info_per_msg > 0.0) {
            return Err(RateError::InvalidSource(format!(
                "info_per_msg must be > 0, got {}",
                self.info_per_msg
            )));
        }
        if !(self.words_per_msg > 0.0) {
            return Err(RateError::InvalidSource(format!(
                "words_per_msg must be > 0, got {}",
                self.words_per_msg
            )));
        }
        if !(self.bits_per_word > 0.0) {
            return Err(RateError::InvalidSource(format!(
                "bits_per_word must be > 0, got {}",
                self.bits_per_word
            )));
        }
        if !(self.eps_c > 0.0 && self.eps_c <= 1.0) {
            return Err(RateError::InvalidSource(format!(
                "eps_c must be in (0, 1], got {}",
                self.eps_c
            )));
        }
        Ok(())
    }
}

impl Default for SourceStats {
    /// Text source with I/L = 1 sut/word, 40 bits/word, error-free bit user.
    fn default() -> Self {
        SourceStats {
            info_per_msg: 1.0,
            words_per_msg: 1.0,
            bits_per_word: 40.0,
            eps_c: 1.0,
        }
    }
}

/// Channel bandwidth in hertz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bandwidth {
    pub hertz: f64,
}

impl Bandwidth {
    pub fn validate(&self) -> Result<(), RateError> {
        if !(self.hertz > 0.0) {
            return Err(RateError::InvalidBandwidth(format!(
                "bandwidth must be > 0 Hz, got {}",
                self.hertz
            )));
        }
        Ok(())
    }
}

impl Default for Bandwidth {
    fn default() -> Self {
        Bandwidth { hertz: 1.0 }
    }
}

/// `10^(value/10)`. Converts dB to a linear ratio; for dBm inputs the
/// result is in milliwatts and the caller scales to watts.
pub fn decibel_to_linear(value_db: f64) -> f64 {
    10f64.powf(value_db / 10.0)
}

/// Semantic rate in suts/s at a given similarity.
pub fn semantic_rate(w: Bandwidth, src: &SourceStats, k_symbols: f64, epsilon: f64) -> f64 {
    w.hertz * src.info_per_msg / (k_symbols * src.words_per_msg) * epsilon
}

/// Shannon bit rate in bits/s.
pub fn bit_rate(w: Bandwidth, sinr: f64) -> f64 {
    w.hertz * (1.0 + sinr).log2()
}

/// Bit-equivalent semantic rate in suts/s for a bit user's throughput.
pub fn bit_equivalent_semantic_rate(r_b: f64, src: &SourceStats) -> f64 {
    r_b * src.info_per_msg / (src.bits_per_word * src.words_per_msg) * src.eps_c
}
