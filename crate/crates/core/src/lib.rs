//! Ratio-based and additive Shapley valuations for monotone cooperative
//! games, ρ-scaled model rewards, and executable checks of the incentive and
//! fairness axioms those rewards are meant to satisfy.
//!
//! Module map:
//!
//! * [`game`]: coalition masks, validated monotone games, generators, JSON I/O
//! * [`valuation`]: exact, permutation-oracle and Monte Carlo Shapley values
//! * [`rewards`]: ρ-scaled allocation, ρ bounds, IR and stability checks
//! * [`audit`]: fairness detectors, game-pair generation, full audits
//! * [`experiment`]: the seven-agent square-root comparison sweep
//!
//! The data-parallel loops run on rayon when the `parallel` feature is on
//! (default); see [`Execution`].

pub mod audit;
pub mod error;
pub mod experiment;
pub mod game;
mod par;
pub mod rewards;
pub mod valuation;

pub use error::{Error, Result};
pub use game::{CoalitionMask, Game, MonotonicityViolation};
pub use par::Execution;
pub use rewards::{RewardAllocation, RhoBound, RhoBounds};
pub use valuation::{Method, Scheme, ValuationVector};
