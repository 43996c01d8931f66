//! Counter-based deterministic random substreams.
//!
//! A [`Substream`] is an independent pseudo-random sequence identified by a
//! `(master_seed, index)` pair. The state is a splitmix64-style mix of the
//! two, so distinct indices give statistically independent streams and the
//! same pair always replays the same sequence. Realization `i` of a Monte
//! Carlo run owns substream `i`, which makes results independent of
//! evaluation order and degree of parallelism.

/// One independent random stream. Not `Copy`: reusing a consumed stream
/// must be spelled out with an explicit clone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substream {
    state: u64,
}

impl Substream {
    /// Derive the substream for `(master_seed, index)`.
    pub fn derive(master_seed: u64, index: u64) -> Self {
        let mut state = mix64(master_seed ^ 0x9E3779B97F4A7C15);
        state = mix64(state ^ mix64(index.wrapping_add(0xD1342543DE82EF95)));
        Substream { state }
    }

    /// Next raw 64-bit value (splitmix64 step).
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        mix64(self.state)
    }

    /// Next uniform double in `[0, 1)`, from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        (self.next_u64() >> 11) as f64 * SCALE
    }
}

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}
