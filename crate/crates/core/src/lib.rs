//! Decides whether a square matrix over the reals or complexes preserves
//! norm-parallel pairs or triangle-equality-attaining (TEA) pairs for the l1,
//! l-infinity and strictly convex lp norms.
//!
//! Verdicts are structural: a preserver comes with its structure class, a
//! non-preserver with a counterexample pair validated against both the
//! coordinate criterion and the norm definition. The [`oracle`] module
//! provides seeded samplers that refute wrong verdicts empirically.

pub mod classify;
pub mod cli;
pub mod error;
pub mod exec;
pub mod families;
pub mod norms;
pub mod numeric;
pub mod oracle;
pub mod pairs;
pub mod preserver;
pub mod random;

pub use classify::StructureClass;
pub use error::{Error, Result};
pub use exec::Execution;
pub use norms::{norm, peak_set, NormSpec, PeakSet};
pub use numeric::{rank, Field, Matrix, Scalar, Tolerance, Vector};
pub use oracle::{empirical_check, EmpiricalOutcome, SampleConfig};
pub use pairs::{definitional_check, is_pair, PairKind, PairVerdict};
pub use preserver::{decide, Decision, PreserverVerdict, Witness, WitnessSearch};
