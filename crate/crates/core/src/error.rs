use crate::game::{CoalitionMask, MonotonicityViolation};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("player count {n} outside supported range {min}..={max}")]
    PlayerCount { n: usize, min: usize, max: usize },

    #[error("expected 2^{n} = {expected} coalition values, got {got}")]
    ValueCount { n: usize, expected: usize, got: usize },

    #[error("value of the empty coalition must be 0, got {0}")]
    EmptyCoalitionValue(f64),

    #[error("coalition {mask} has negative value {value}")]
    NegativeValue { mask: CoalitionMask, value: f64 },

    #[error("coalition {mask} has non-finite value {value}")]
    NonFiniteValue { mask: CoalitionMask, value: f64 },

    #[error("game is not monotone: {0}")]
    NotMonotone(MonotonicityViolation),

    #[error("coalition mask {mask:#b} out of range for {n} players")]
    MaskOutOfRange { mask: u32, n: usize },

    #[error("player index {player} out of range for {n} players")]
    PlayerOutOfRange { player: usize, n: usize },

    #[error("player {} is already a member of coalition {mask}", .player + 1)]
    PlayerInCoalition { player: usize, mask: CoalitionMask },

    #[error("players must be distinct, got {} twice", .0 + 1)]
    SamePlayer(usize),

    #[error("monte carlo needs at least 2 samples, got {0}")]
    TooFewSamples(usize),

    #[error("rho grid needs at least 2 steps, got {0}")]
    TooFewSteps(usize),

    #[error("rho must lie in [0, 1], got {0}")]
    RhoOutOfRange(f64),

    #[error("reward coalition must be nonempty")]
    EmptyCoalition,

    #[error("valuation has {got} entries but the game has {expected} players")]
    ValuationLength { expected: usize, got: usize },

    #[error("check requires a grand-coalition allocation, got {0}")]
    NotGrandCoalition(CoalitionMask),

    #[error("invalid game pair: {0}")]
    InvalidPair(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed game file: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
