//! Link-level Monte Carlo simulator for the coexistence of a bit-based
//! (primary) and a semantic/opportunistic (secondary) user in two-user
//! uplink NOMA.
//!
//! The secondary user reuses the primary's resource block via on-off power
//! control and can transmit either in semantic mode (rate governed by a
//! generalized-logistic similarity curve) or in conventional bit mode
//! (Shannon rate converted to an equivalent semantic rate). Per fading
//! block the access point decodes the bit user first, then the semantic
//! signal interference-free after SIC. The solver maximizes the secondary
//! user's ergodic semantic rate subject to a minimum ergodic bit rate for
//! the primary.
//!
//! Module map:
//!
//! | Module | Responsibility |
//! |--------|----------------|
//! | [`similarity`] | generalized-logistic similarity curve: evaluate, invert, fit |
//! | [`rate`] | semantic rate, Shannon bit rate, bit-equivalent semantic rate |
//! | [`channel`] | path-loss link budget and Rayleigh block-fading sampling |
//! | [`noma`] | two-user uplink SIC arithmetic, per-block outcomes |
//! | [`policy`] | constrained per-block action optimization (Lagrangian + oracle) |
//! | [`engine`] | seeded Monte Carlo estimation and parameter sweeps |
//! | [`cli`] | config parsing, CSV/SVG emission, subcommand dispatch |

// Validation predicates are written `!(x > 0.0)` so NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod cli;
pub mod engine;
pub mod noma;
pub mod policy;
pub mod rate;
pub mod rng;
pub mod similarity;

pub use channel::{FadingBlock, LinkBudget};
pub use engine::{PointResult, SweepAxis, SweepSpec};
pub use noma::{BlockOutcome, ScenarioConfig, SnrUnit};
pub use policy::{Action, SchemeKind, SchemeResult};
pub use rate::{Bandwidth, SourceStats};
pub use rng::Substream;
pub use similarity::{LogisticParams, SimilaritySample};
