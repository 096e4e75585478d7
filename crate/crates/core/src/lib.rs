//! Entanglement of a pair of spin-1 particles with two-level momenta under
//! Lorentz boosts.
//!
//! The composite space is `[pA, pB, sA, sB]` (dimensions 2, 2, 3, 3). A boost
//! perpendicular to the particles' motion rotates each spin about y by the
//! Wigner angle, with the sense set by that particle's momentum. The crate
//! builds the initial states, applies the boost, and measures linear-entropy
//! entanglement across the four physically distinct partitions.

pub mod check;
pub mod entanglement;
pub mod error;
pub mod lorentz;
pub mod output;
pub mod states;
pub mod sweep;
pub mod tensor;

pub use entanglement::{
    conservation_report, delta_e, linear_entropy, CanonicalPartition, ConservationReport, DeltaEEvaluator,
    DeltaEResult, Partition, SpinInput,
};
pub use error::{Error, Result};
pub use lorentz::{boost_operator, wigner_angle, wigner_d, BoostOperator, BoostSpec, SignConvention, Spin};
pub use states::{
    assemble, invariant_spin_state, momentum_state, spin_state, MomentumParams, NamedState, SpinFamily, SpinParams,
};
pub use sweep::{find_extrema, run_sweep, ExtremaReport, Extremum, GridSpec, Surface, SweepConfig, SweepResult};
pub use tensor::{
    kron, outer, partial_trace, permute_factors, purity, DensityMatrix, FactorOrder, PureState, SubsystemLabel,
};
