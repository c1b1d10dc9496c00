//! Partial products of generator sequences, deterministic and random.

pub mod chain;
pub mod sequence;
pub mod simulate;
pub mod verify;

pub use chain::{
    exact_hitting_pmf, transition_matrix, HittingTimePmf, ProbabilityVector, TransitionMatrix,
};
pub use sequence::{eventual_value, partial_products, SequenceSpec, Stabilization, Trace};
pub use simulate::{simulate, Mode, SimulationConfig, SimulationReport};
pub use verify::{compare_histogram, sample_from_pmf, verify_distribution, Verdict, VerifyConfig};
