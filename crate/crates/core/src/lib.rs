//! Exact inference in imprecise probability trees.
//!
//! Every computation is generic over [`Scalar`]: `f64`, `f32` or the exact
//! [`Rational`]. The aliases at the bottom fix the two common choices.

pub mod catalog;
pub mod desirability;
pub mod error;
pub mod gamble;
pub mod inference;
pub mod laws;
pub mod local;
pub mod markov;
pub mod oracle;
pub mod random;
pub mod scalar;
pub mod simplex;
pub mod tree;

pub use desirability::Assessment;
pub use error::{Error, Result};
pub use gamble::{Gamble, TreeProcess};
pub use inference::{ImpreciseProbabilityTree, Selection};
pub use laws::{Commitment, CommitmentPlan};
pub use local::{LocalModel, ModelKind};
pub use markov::ImpreciseMarkovChain;
pub use scalar::{parse_rational, Rational, Scalar};
pub use tree::{Cut, EventTree, NodeId, SituationId, TreeDescription};

pub type Gamble64 = Gamble<f64>;
pub type Ipt64 = ImpreciseProbabilityTree<f64>;
pub type Chain64 = ImpreciseMarkovChain<f64>;
pub type ExactGamble = Gamble<Rational>;
pub type ExactIpt = ImpreciseProbabilityTree<Rational>;
pub type ExactChain = ImpreciseMarkovChain<Rational>;
