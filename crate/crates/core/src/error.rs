use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown situation `{0}`")]
    UnknownId(String),
    #[error("situation `{0}` is listed more than once")]
    DuplicateId(String),
    #[error("cycle through situation `{0}`")]
    Cycle(String),
    #[error("non-terminal situation `{0}` has a single child; move spaces need at least two moves")]
    SingletonMoveSpace(String),
    #[error("situation `{0}` is not reachable from the root")]
    Disconnected(String),
    #[error("tree depth {depth} exceeds the declared bound {bound}")]
    DepthExceeded { depth: usize, bound: usize },
    #[error("not a partition: {0}")]
    NotAPartition(String),
    #[error("situation `{0}` is terminal")]
    TerminalSituation(String),
    #[error("`{to}` does not follow `{from}`")]
    NotADescendant { from: String, to: String },
    #[error("carrier mismatch: {0}")]
    CarrierMismatch(String),
    #[error("gamble is not measurable with respect to the cut: {0}")]
    NotMeasurable(String),
    #[error("invalid local model: {0}")]
    InvalidModel(String),
    #[error("conditioning event is empty")]
    EmptyConditioningEvent,
    #[error("assessment does not bound the price from above (it incurs a sure loss on the conditioning event)")]
    UnboundedPrice,
    #[error("epsilon must be non-negative")]
    EpsilonNegative,
    #[error("enumeration needs {required} vertex assignments, cap is {cap}")]
    EnumerationCapExceeded { required: BigUint, cap: BigUint },
    #[error("invalid selection: {0}")]
    InvalidSelection(String),
    #[error("invalid commitment plan: {0}")]
    InvalidPlan(String),
    #[error("parameter must be positive: {0}")]
    NonPositiveParameter(String),
    #[error("epsilon {epsilon} must lie strictly between 0 and the bound {bound}")]
    EpsilonOutOfRange { epsilon: f64, bound: f64 },
    #[error("situation `{0}` is not a member of the horizon cut")]
    RealizedNotInHorizon(String),
    #[error("horizon must be at least 1")]
    NonPositiveHorizon,
    #[error("unrolled tree would have {required} situations, cap is {cap}")]
    SizeCapExceeded { required: BigUint, cap: BigUint },
    #[error("linear program: {0}")]
    LinearProgram(String),
}

impl Error {
    /// Renders `2^k` when the requirement is an exact power of two.
    pub fn power_of_two_hint(n: &BigUint) -> Option<u64> {
        let bits = n.bits();
        (bits > 0 && n.count_ones() == 1).then(|| bits - 1)
    }
}
